"""Closed-form radial spinor components and their diagnostics."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from . import model
from .errors import EnergyAtDenominatorZero, NotDecaying
from .model import CentrifugalApprox, DerivedParams, PhysicalConfig
from .special import series_on_grid

GRID_POINTS = 2001
NODE_FLOOR = 1e-10
DECAY_FLOOR = 1e-8
BOUNDARY_TOL = 1e-8


@dataclass
class WaveSample:
    """Radial samples of both components.

    ``source`` (when present) evaluates ``(F, G)`` at arbitrary radii on the
    same scale as the arrays; normalization integrates it adaptively.
    ``dominant_slope`` holds d(phi)/dr of the decoupled component.
    """

    r: np.ndarray
    F: np.ndarray
    G: np.ndarray
    norm: float = 1.0
    limit_tag: str = "spin"
    dominant_slope: np.ndarray | None = None
    source: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]] | None = field(
        default=None, repr=False, compare=False
    )

    @property
    def dominant(self) -> np.ndarray:
        return self.F if self.limit_tag == "spin" else self.G

    def scaled(self, factor: float) -> "WaveSample":
        src = self.source
        if src is not None:
            def src(r, _inner=self.source):
                f, g = _inner(r)
                return factor * f, factor * g
        slope = None if self.dominant_slope is None else factor * self.dominant_slope
        return replace(self, F=factor * self.F, G=factor * self.G, norm=factor * self.norm,
                       dominant_slope=slope, source=src)


# ---------------------------------------------------------------------------
# closed form
# ---------------------------------------------------------------------------

def closed_form(params: DerivedParams, r, derivatives: int = 0):
    """phi(r) = u^mu (1-u)^k 2F1(a, b; c; u) with u = 1/(e^{2r/d} + 1).

    Returns ``phi`` or, with ``derivatives=1`` or ``2``, a tuple including
    the r-derivatives.  These use the contiguous relation for d/du 2F1 and
    the operator identity d/dr = -(2/d) u(1-u) d/du, so no differencing.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    d = params.d
    u = model.u_of_r(r, d)
    u = np.atleast_1d(u)
    mu, k = params.mu, params.k
    a, b, c = params.hyp_params
    f = series_on_grid(a, b, c, u)
    with np.errstate(divide="ignore"):
        g = np.exp(mu * np.log(u) + k * np.log1p(-u))
    phi = g * f
    if derivatives == 0:
        return phi
    f1 = (a * b / c) * series_on_grid(a + 1, b + 1, c + 1, u)
    w = u * (1.0 - u)
    lin = mu * (1.0 - u) - k * u
    P = lin * f + w * f1  # u(1-u) d/du (g f) = g P
    phi_r = -(2.0 / d) * g * P
    if derivatives == 1:
        return phi, phi_r
    f2 = (a * b / c) * ((a + 1) * (b + 1) / (c + 1)) * series_on_grid(a + 2, b + 2, c + 2, u)
    dP = (-mu - k) * f + (lin + 1.0 - 2.0 * u) * f1 + w * f2
    phi_rr = (4.0 / (d * d)) * g * (lin * P + w * dP)
    return phi, phi_r, phi_rr


def closed_form_paper(params: DerivedParams, r):
    """The same function written with s = e^{-2r/d}: s^mu (1+s)^(-mu-k) 2F1(...; 1/(e^{2r/d}+1))."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    s = np.exp(-2.0 * r / params.d)
    a, b, c = params.hyp_params
    return s**params.mu * (1.0 + s) ** (-params.mu - params.k) * series_on_grid(
        a, b, c, model.u_of_r(r, params.d) * np.ones_like(r)
    )


def _check_limit(cfg: PhysicalConfig, kind: str) -> None:
    if cfg.limit.kind != kind:
        raise ValueError(f"configuration is in the {cfg.limit.kind} limit, expected {kind}")


def upper_component(cfg: PhysicalConfig, approx: CentrifugalApprox, E: float, r):
    """Unnormalized F(r) in the spin limit."""
    _check_limit(cfg, "spin")
    return closed_form(model.derived_params(cfg, approx, E), r)


def lower_component_pseudospin(cfg: PhysicalConfig, approx: CentrifugalApprox, E: float, r):
    """Unnormalized G(r) in the pseudospin limit."""
    _check_limit(cfg, "pseudospin")
    return closed_form(model.derived_params(cfg, approx, E), r)


def coupling_denominator(cfg: PhysicalConfig, E: float) -> float:
    """M + E - C_s (spin) or M - E + C_ps (pseudospin)."""
    M, C = cfg.M, cfg.limit.constant
    return M + E - C if cfg.limit.kind == "spin" else M - E + C


def companion_from(cfg: PhysicalConfig, E: float, r, phi, dphi):
    """The other component from the first-order system.

    spin:       G = [F' + (kappa + T)/r F] / (M + E - C_s)
    pseudospin: F = [G' - (kappa + T)/r G] / (M - E + C_ps)
    """
    den = coupling_denominator(cfg, E)
    if den == 0.0:
        raise EnergyAtDenominatorZero(f"coupling denominator vanishes at E = {E}")
    coef = (cfg.kappa + cfg.T_tensor) / np.asarray(r, dtype=float)
    sign = 1.0 if cfg.limit.kind == "spin" else -1.0
    return (dphi + sign * coef * phi) / den


def companion_component(cfg: PhysicalConfig, E: float, primary: WaveSample) -> np.ndarray:
    if primary.dominant_slope is None:
        raise ValueError("sample carries no analytic slope of the dominant component")
    return companion_from(cfg, E, primary.r, primary.dominant, primary.dominant_slope)


def default_r_max(cfg: PhysicalConfig, params: DerivedParams) -> float:
    # F ~ exp(-decay r); 30 decay lengths put the tail near 1e-13
    return cfg.R_c + max(30.0 * cfg.d, 30.0 / params.decay_rate)


def sample_state(cfg: PhysicalConfig, approx: CentrifugalApprox, E: float,
                 r_max: float | None = None, n_points: int = GRID_POINTS,
                 grid: np.ndarray | None = None) -> WaveSample:
    """Unnormalized closed-form sample on a uniform grid from R_c to r_max."""
    params = model.derived_params(cfg, approx, E)
    if grid is None:
        if r_max is None:
            r_max = default_r_max(cfg, params)
        grid = np.linspace(cfg.R_c, r_max, n_points)
    grid = np.asarray(grid, dtype=float)
    if grid.size and grid[0] < cfg.R_c:
        raise ValueError(f"grid starts at {grid[0]} < R_c = {cfg.R_c}")
    spin = cfg.limit.kind == "spin"

    def source(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        phi, dphi = closed_form(params, r, derivatives=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            other = companion_from(cfg, E, r, phi, dphi)
        other = np.where(r > 0, other, 0.0)
        return (phi, other) if spin else (other, phi)

    phi, dphi = closed_form(params, grid, derivatives=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        other = companion_from(cfg, E, grid, phi, dphi)
    other = np.where(grid > 0, other, 0.0)
    F, G = (phi, other) if spin else (other, phi)
    return WaveSample(grid, F, G, 1.0, cfg.limit.kind, dphi, source)


# ---------------------------------------------------------------------------
# normalization and diagnostics
# ---------------------------------------------------------------------------

def adaptive_simpson(fn: Callable[[np.ndarray], np.ndarray], a: float, b: float,
                     rtol: float = 1e-10, initial: int = 32, max_rounds: int = 40) -> float:
    """Adaptive Simpson quadrature, refined breadth-first with vectorized calls.

    A panel is accepted when |S_left + S_right - S_whole| <= 15 * its share
    (by width) of ``rtol * |I|``; accepted panels get the Richardson
    correction.
    """
    edges = np.linspace(a, b, initial + 1)
    left, right = edges[:-1], edges[1:]
    mid = 0.5 * (left + right)
    fl, fm, fr = fn(left), fn(mid), fn(right)
    whole = (right - left) / 6.0 * (fl + 4.0 * fm + fr)
    total = 0.0
    width = b - a
    for _ in range(max_rounds):
        q1 = 0.5 * (left + mid)
        q3 = 0.5 * (mid + right)
        f1, f3 = fn(q1), fn(q3)
        h = (right - left) / 12.0
        s_left = h * (fl + 4.0 * f1 + fm)
        s_right = h * (fm + 4.0 * f3 + fr)
        err = s_left + s_right - whole
        estimate = abs(total + np.sum(s_left + s_right))
        accept = np.abs(err) <= 15.0 * rtol * estimate * (right - left) / width
        total += float(np.sum((s_left + s_right + err / 15.0)[accept]))
        keep = ~accept
        if not keep.any():
            return total
        # split survivors into their two halves
        left = np.concatenate([left[keep], mid[keep]])
        right = np.concatenate([mid[keep], right[keep]])
        fl_new = np.concatenate([fl[keep], fm[keep]])
        fr_new = np.concatenate([fm[keep], fr[keep]])
        fm = np.concatenate([f1[keep], f3[keep]])
        whole = np.concatenate([s_left[keep], s_right[keep]])
        fl, fr = fl_new, fr_new
        mid = 0.5 * (left + right)
    return total + float(np.sum(whole))


def normalize(sample: WaveSample, r_max: float | None = None, rtol: float = 1e-10) -> WaveSample:
    """Rescale so that the integral of F^2 + G^2 over [r_0, r_max] equals 1."""
    r0 = float(sample.r[0])
    if r_max is None:
        r_max = float(sample.r[-1])
    dom = sample.dominant
    peak = np.max(np.abs(dom))
    if sample.source is not None and r_max != sample.r[-1]:
        F_end, G_end = sample.source(np.array([r_max]))
        end = abs((F_end if sample.limit_tag == "spin" else G_end)[0])
    else:
        end = abs(dom[-1])
    if not peak > 0 or end > DECAY_FLOOR * peak:
        raise NotDecaying(
            f"|phi(r_max)| / max|phi| = {end / peak if peak else math.inf:.3g} exceeds {DECAY_FLOOR}"
        )
    if sample.source is not None:
        def density(r):
            f, g = sample.source(r)
            return f * f + g * g
        integral = adaptive_simpson(density, r0, r_max, rtol=rtol)
    else:
        from scipy.integrate import simpson

        mask = sample.r <= r_max
        integral = float(simpson(sample.F[mask] ** 2 + sample.G[mask] ** 2, x=sample.r[mask]))
    return sample.scaled(1.0 / math.sqrt(integral))


def count_nodes(sample, floor: float = NODE_FLOOR) -> int:
    """Strict sign changes of the dominant component on the open interval.

    Values below ``floor`` times the peak are ignored, and so is a leading
    sample that vanishes to within the boundary tolerance: at an eigenvalue
    phi(R_c) = 0 and its rounding sign is not a node.
    """
    values = sample.dominant if isinstance(sample, WaveSample) else np.asarray(sample, dtype=float)
    if values.size == 0:
        return 0
    peak = np.max(np.abs(values))
    if peak == 0:
        return 0
    if abs(values[0]) <= BOUNDARY_TOL * peak:
        values = values[1:]
    kept = values[np.abs(values) >= floor * peak]
    signs = np.sign(kept)
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def boundary_ratio(sample: WaveSample) -> float:
    """|phi(R_c)| / max |phi| for the dominant component."""
    dom = sample.dominant
    return float(abs(dom[0]) / np.max(np.abs(dom)))


def ode_residual(cfg: PhysicalConfig, approx: CentrifugalApprox, E: float, grid,
                 exact: bool = False, mu_shift: float = 0.0) -> float:
    """max over ``grid`` of |phi'' - W phi| / max(1, |W phi|) for the closed form.

    ``phi`` is scaled to unit peak on the grid first.  ``W`` is the strength
    of the decoupled equation with the quadratic carrier (or the true
    1/r^2 when ``exact``).  ``mu_shift`` perturbs the exponent mu, which
    must make the residual grow.
    """
    params = model.derived_params(cfg, approx, E)
    if mu_shift:
        params = replace(params, mu=params.mu + mu_shift)
    grid = np.asarray(grid, dtype=float)
    phi, _, phi_rr = closed_form(params, grid, derivatives=2)
    scale = np.max(np.abs(phi))
    phi, phi_rr = phi / scale, phi_rr / scale
    W = model.radial_strength(cfg, approx, E, grid, exact=exact)
    Wphi = W * phi
    return float(np.max(np.abs(phi_rr - Wphi) / np.maximum(1.0, np.abs(Wphi))))
