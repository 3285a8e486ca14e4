import math

import numpy as np
import pytest

from diracrm import model
from diracrm.errors import (
    ComplexNu,
    EmptyWindow,
    IllConditionedFit,
    InvalidConfig,
    NegativeA,
    OutsideBoundDomain,
    ZeroKappa,
)
from diracrm.model import CentrifugalApprox, PhysicalConfig, SymmetryLimit


def spin_cfg(**kw):
    base = dict(M=5.0, D_e=2.0, b_shape=4.0, d=1.0, T_tensor=0.5, R_c=0.05, kappa=1,
                limit=SymmetryLimit.spin(0.0))
    base.update(kw)
    return PhysicalConfig(**base)


# -- validation --------------------------------------------------------------

@pytest.mark.parametrize("field, value", [
    ("d", 0.0), ("d", -1.0), ("D_e", 0.0), ("M", -2.0), ("R_c", -0.1), ("M", math.nan),
])
def test_invalid_config(field, value):
    with pytest.raises(InvalidConfig):
        spin_cfg(**{field: value})


def test_zero_kappa():
    with pytest.raises(ZeroKappa):
        spin_cfg(kappa=0)
    with pytest.raises(ZeroKappa):
        model.kappa_mapping(0, "spin")


def test_bad_limit_kind():
    with pytest.raises(InvalidConfig):
        SymmetryLimit("isospin")


def test_nonfinite_coefficients():
    with pytest.raises(InvalidConfig):
        CentrifugalApprox(1.0, math.inf, 0.0)


# -- potentials ------------------------------------------------------------

@pytest.mark.parametrize("pot", [model.sigma_potential, model.delta_potential])
def test_potential_limits(pot):
    r = np.array([0.1, 1.0, 7.0])
    np.testing.assert_allclose(pot(r, spin_cfg(b_shape=0.0)), 2.0)
    assert pot(60.0, spin_cfg()) == pytest.approx(2.0, abs=1e-12)
    r0 = 0.5 * math.log(3.0)
    assert pot(r0, spin_cfg()) == pytest.approx(0.0, abs=1e-15)


def test_potential_nonnegative():
    r = np.linspace(0.0, 20.0, 4001)
    assert np.all(model.sigma_potential(r, spin_cfg()) >= 0.0)


def test_tensor_potential():
    assert model.tensor_potential(2.0, spin_cfg()) == pytest.approx(-0.25)


def test_u_of_r_no_overflow():
    assert model.u_of_r(1e4, 1.0) == 0.0
    assert model.u_of_r(0.0, 1.0) == 0.5


def test_z_c_monotone():
    zs = [spin_cfg(R_c=rc).z_c for rc in (0.0, 0.1, 0.5, 2.0)]
    assert zs[0] == 0.5
    assert all(x > y for x, y in zip(zs, zs[1:]))


# -- coupling constants ------------------------------------------------------

def test_coupling_examples():
    _, _, delta = model.coupling_constants(spin_cfg(T_tensor=0.0, kappa=-1), 1.0)
    assert delta == 0.0
    _, _, delta = model.coupling_constants(spin_cfg(), 1.0)
    assert delta == pytest.approx(3.75)
    beta2, _, _ = model.coupling_constants(spin_cfg(), 5.0)
    assert beta2 == 0.0


def test_pseudospin_coupling():
    cfg = spin_cfg(limit=SymmetryLimit.pseudospin(-1.0), kappa=-2)
    beta2, gamma, delta = model.coupling_constants(cfg, 2.0)
    assert beta2 == pytest.approx(7.0 * 2.0)
    assert gamma == pytest.approx(2.0 * 2.0)
    assert delta == pytest.approx(-1.5 * -2.5)


@pytest.mark.parametrize("kappa", [-3, -1, 1, 2, 4])
@pytest.mark.parametrize("T", [0.0, 0.5, 1.7])
def test_delta_bar_is_shifted_delta(kappa, T):
    ps = model.coupling_constants(spin_cfg(kappa=kappa, T_tensor=T, limit=SymmetryLimit.pseudospin()), 0.0)[2]
    shifted = kappa - 1
    assert ps == pytest.approx((T + shifted) * (T + shifted + 1))


# -- derived parameters ----------------------------------------------------

def test_mu_equals_three():
    cfg = spin_cfg(d=2.0, T_tensor=0.0, kappa=-1, D_e=1.0)
    approx = CentrifugalApprox(0.0, 0.0, 0.0)
    # beta^2 + gamma = (M + E)(M - E + D_e) = (5 + E)(6 - E) = 9
    E = 0.5 * (1 + math.sqrt(1 + 4 * (30 - 9)))
    assert model.derived_params(cfg, approx, E).mu == pytest.approx(3.0, rel=1e-14)


def test_nu_plus_unit_radicand():
    # gamma b^2 + delta D2 = 0 with b = 0 and delta = 0
    cfg = spin_cfg(b_shape=0.0, T_tensor=0.0, kappa=-1)
    p = model.derived_params(cfg, CentrifugalApprox(0.0, 0.0, 5.0), 5.5)
    assert p.nu_plus == 1.0


def test_z_c_at_origin():
    p = model.derived_params(spin_cfg(R_c=0.0), CentrifugalApprox(7.0, 600.0, 2000.0), 6.0)
    assert p.z_c == 0.5


def test_derived_formulas():
    cfg = spin_cfg()
    ap = CentrifugalApprox(7.3, 606.0, 1990.7)
    E = 6.0
    beta2, gamma, delta = model.coupling_constants(cfg, E)
    p = model.derived_params(cfg, ap, E)
    assert p.mu == pytest.approx(0.5 * math.sqrt(beta2 + gamma + delta * 7.3))
    assert p.nu_plus == pytest.approx(0.5 + 0.5 * math.sqrt(1 + (gamma * 16 + delta * 1990.7)))
    assert p.A == pytest.approx(beta2 + gamma * 9 + delta * (7.3 - 606.0 + 1990.7))


def test_rejections_name_the_radicand():
    ap = CentrifugalApprox(0.0, 0.0, 0.0)
    with pytest.raises(OutsideBoundDomain, match="decay radicand"):
        model.derived_params(spin_cfg(), ap, 20.0)
    # T + kappa in (-1, 0) makes delta negative; a large D2 drives the nu radicand below zero
    cfg = spin_cfg(T_tensor=0.5, kappa=-1)
    with pytest.raises(ComplexNu):
        model.derived_params(cfg, CentrifugalApprox(0.0, 0.0, 1e4), 6.0)
    with pytest.raises(NegativeA):
        model.derived_params(cfg, CentrifugalApprox(0.0, -1e3, 0.0), 6.0)


def test_continuity_in_energy():
    cfg = spin_cfg()
    ap = model.fit_centrifugal(cfg, 30.0)
    lo, hi = model.energy_window(cfg, ap)
    Es = np.linspace(lo, hi, 50)[1:-1]
    mus = np.array([model.derived_params(cfg, ap, E).mu for E in Es])
    assert np.all(np.isfinite(mus)) and np.all(np.abs(np.diff(mus)) < 0.5)


# -- windows ---------------------------------------------------------------

def test_beta2_intervals():
    cfg = PhysicalConfig(10.0, 2.0, 4.0, 1.0, 0.0, 0.0, 1, SymmetryLimit.spin(3.0))
    assert model.beta2_positive_interval(cfg) == (-7.0, 10.0)
    cfg = PhysicalConfig(10.0, 2.0, 4.0, 1.0, 0.0, 0.0, 1, SymmetryLimit.pseudospin(-3.0))
    assert model.beta2_positive_interval(cfg) == (-10.0, 7.0)


def test_window_is_admissible(tc_name):
    from conftest import run_config

    rc = run_config(tc_name)
    lo, hi = model.energy_window(rc.physical, rc.approx)
    assert lo < hi
    for E in np.linspace(lo, hi, 101)[1:-1]:
        model.derived_params(rc.physical, rc.approx, E)


def test_window_edges_are_tight():
    from conftest import run_config

    rc = run_config("TC-1")
    lo, hi = model.energy_window(rc.physical, rc.approx)
    with pytest.raises(OutsideBoundDomain):
        model.derived_params(rc.physical, rc.approx, hi + 1e-6)


def test_particle_branch_is_sturm_monotone():
    from conftest import run_config

    rc = run_config("TC-1")
    cfg = rc.physical
    lo, hi = model.branch_interval(cfg, rc.approx, "particle")
    r = np.linspace(cfg.R_c, 40.0, 2000)
    W = [model.radial_strength(cfg, rc.approx, E, r) for E in np.linspace(lo, hi, 20)]
    assert np.all(np.diff(np.array(W), axis=0) < 0)


def test_empty_window():
    with pytest.raises(EmptyWindow):
        model.energy_window(spin_cfg(T_tensor=0.0, kappa=1, limit=SymmetryLimit.pseudospin(-1.0)),
                            CentrifugalApprox(7.3, 606.0, 1990.7))
    with pytest.raises(ValueError):
        model.branch_interval(spin_cfg(), CentrifugalApprox(1, 1, 1), "neither")


# -- kappa mapping ---------------------------------------------------------

@pytest.mark.parametrize("kappa, limit, expected", [
    (-1, "spin", (0, 0.5)),
    (2, "spin", (2, 1.5)),
    (-2, "pseudospin", (2, 1.5)),
    (3, "pseudospin", (2, 2.5)),
])
def test_kappa_mapping(kappa, limit, expected):
    assert model.kappa_mapping(kappa, limit) == expected


# -- centrifugal fit -------------------------------------------------------

def test_fit_reports_error():
    cfg = spin_cfg()
    ap = model.fit_centrifugal(cfg, 30.0)
    r = np.geomspace(0.05, 30.0, 512)
    u = model.u_of_r(r, 1.0)
    direct = np.max(np.abs(ap(u) - 1 / r**2) * r**2)
    assert ap.max_rel_error == pytest.approx(direct, rel=1e-12)
    assert ap(0.0) == ap.D0


def test_fit_error_decreases_with_d():
    errs = [model.fit_centrifugal(spin_cfg(d=d), 30.0).max_rel_error for d in (1.0, 0.5, 0.25)]
    assert errs[0] > errs[1] > errs[2]


def test_fit_rejections():
    with pytest.raises(IllConditionedFit):
        model.fit_centrifugal(spin_cfg(R_c=40.0), 30.0)
    with pytest.raises(IllConditionedFit):
        # u is nearly constant (about e^-40) on the window
        model.fit_centrifugal(spin_cfg(R_c=20.0), 30.0)
