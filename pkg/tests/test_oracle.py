import math

import numpy as np
import pytest

from conftest import hyp_spectrum, run_config
from diracrm import model, oracle
from diracrm.errors import NonFinite
from diracrm.oracle import OracleOptions, oracle_spectrum, shoot, shoot_many


def tc(name):
    rc = run_config(name)
    return rc.physical, rc.approx


def test_below_ground_state_is_nodeless():
    cfg, ap = tc("TC-2")
    lo, _ = model.energy_window(cfg, ap)
    ground = hyp_spectrum("TC-2")[0].E
    res = shoot_many(cfg, ap, np.linspace(lo + 1e-6, ground - 0.2, 6), r_max=30.05)
    assert all(r.node_count == 0 for r in res)
    assert len({math.copysign(1.0, r.endpoint_value) for r in res}) == 1


def test_node_count_monotone_in_energy(tc_name):
    cfg, ap = tc(tc_name)
    lo, hi = model.energy_window(cfg, ap)
    res = shoot_many(cfg, ap, np.linspace(lo, hi, 42)[1:-1], r_max=30.05)
    counts = [r.node_count for r in res]
    assert counts == sorted(counts)


def test_modes_coincide_without_delta():
    cfg, ap = tc("TC-2")
    for E in (5.0, 6.0, 6.9):
        eff = shoot(cfg, ap, E, "effective", r_max=30.05)
        ex = shoot(cfg, ap, E, "exact", r_max=30.05)
        assert eff.node_count == ex.node_count
        assert eff.log_scale == ex.log_scale
        assert eff.endpoint_value == pytest.approx(ex.endpoint_value, rel=1e-9)


def test_renormalization_keeps_values_finite():
    cfg, ap = tc("TC-1")
    res = shoot(cfg, ap, 2.0, r_max=120.0, steps=40000)
    assert math.isfinite(res.endpoint_value)
    assert res.log_scale > math.log(1e100)
    assert abs(res.endpoint_value) <= 1e100


def test_rejections():
    cfg, ap = tc("TC-2")
    with pytest.raises(ValueError):
        shoot(cfg, ap, 6.0, steps=999)
    with pytest.raises(ValueError):
        shoot(cfg, ap, 6.0, r_max=0.0)
    with pytest.raises(ValueError):
        shoot(cfg, ap, 6.0, mode="bogus")
    with pytest.raises(ValueError):
        shoot(cfg, None, 6.0, mode="effective")
    with pytest.raises(NonFinite):
        shoot(cfg, ap, math.nan)


def test_eigenvalue_count_equals_node_increment():
    cfg, ap = tc("TC-2")
    lo, hi = model.energy_window(cfg, ap)
    r_max = oracle.default_r_max(cfg, ap, hi - 1e-4 * (hi - lo))
    steps = math.ceil((r_max - cfg.R_c) / 1.5e-3)
    edges = shoot_many(cfg, ap, [lo + 1e-4 * (hi - lo), hi - 1e-4 * (hi - lo)], r_max=r_max,
                       steps=steps)
    assert edges[1].node_count - edges[0].node_count == len(hyp_spectrum("TC-2"))


def _ground_with(steps, r_max=30.05):
    cfg, ap = tc("TC-2")
    E0 = hyp_spectrum("TC-2")[0].E
    opts = OracleOptions(steps=steps, r_max=r_max, scan_points=8, tol_E=1e-13)
    roots = oracle_spectrum(cfg, ap, "exact", opts, window=(E0 - 0.05, E0 + 0.05))
    assert len(roots) == 1
    return roots[0]


def test_step_halving_order_is_four():
    e1, e2, e4 = (_ground_with(n) for n in (1000, 2000, 4000))
    order = math.log2(abs(e1 - e2) / abs(e2 - e4))
    assert 3.5 <= order <= 4.5


def test_doubling_default_steps_is_converged():
    M = run_config("TC-2").physical.M
    assert abs(_ground_with(20000) - _ground_with(40000)) < 1e-8 * M


def test_window_required_without_approx():
    cfg, _ = tc("TC-2")
    with pytest.raises(ValueError):
        oracle_spectrum(cfg, None, "exact")
