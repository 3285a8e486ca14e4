"""Shooting-method eigenvalues for the decoupled radial equation.

Independent of the hypergeometric machinery: the ODE phi'' = W(r; E) phi is
integrated from R_c with the Dirichlet launch (phi, phi') = (0, 1) by
fixed-step RK4, and eigenvalues are bracketed by sign changes of phi(r_max).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import model
from .errors import EmptyWindow, NonFinite
from .model import CentrifugalApprox, PhysicalConfig

DEFAULT_STEPS = 20000
RENORM_AT = 1e100
MODES = ("effective", "exact")


@dataclass(frozen=True)
class ShootResult:
    E: float
    endpoint_value: float  # phi(r_max) divided by exp(log_scale)
    node_count: int
    log_scale: float = 0.0  # log of the total renormalization removed


@dataclass(frozen=True)
class OracleOptions:
    """Shooting controls.

    ``steps=None`` uses max(DEFAULT_STEPS, (r_max - R_c) / max_step) so the
    step stays fixed when a slowly decaying state forces a long interval.
    """

    steps: int | None = None
    r_max: float | None = None
    max_step: float = 1.5e-3
    scan_points: int = 400
    lanes: int = 31
    tol_E: float | None = None  # None: 1e-10 * M
    branch: str = "particle"
    edge_inset: float = 1e-4


def _strength_terms(cfg: PhysicalConfig, approx: CentrifugalApprox | None, r: np.ndarray,
                    mode: str):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    u = model.u_of_r(r, cfg.d)
    shape = (1.0 - cfg.b_shape * u) ** 2
    if mode == "exact":
        carrier = 1.0 / (r * r)
    else:
        if approx is None:
            raise ValueError("effective mode needs a CentrifugalApprox")
        carrier = approx(u)
    return shape, carrier


def shoot_many(cfg: PhysicalConfig, approx: CentrifugalApprox | None, energies,
               mode: str = "effective", r_max: float = 30.0,
               steps: int = DEFAULT_STEPS) -> list[ShootResult]:
    """Shoot all ``energies`` at once; each lane is integrated independently."""
    if steps < 1000:
        raise ValueError(f"steps must be at least 1000, got {steps}")
    if not r_max > cfg.R_c:
        raise ValueError(f"r_max = {r_max} must exceed R_c = {cfg.R_c}")
    E = np.atleast_1d(np.asarray(energies, dtype=float))
    h = (r_max - cfg.R_c) / steps
    # W on the node and half-node lattice, built from E-independent profiles
    r = cfg.R_c + 0.5 * h * np.arange(2 * steps + 1)
    if mode == "exact" and cfg.R_c <= 0:
        raise ValueError("exact mode needs R_c > 0")
    shape, carrier = _strength_terms(cfg, approx, r, mode)
    beta2, gamma, delta = model.coupling_constants(cfg, E)
    sg = cfg.limit.sign * np.asarray(gamma, dtype=float)
    beta2 = np.asarray(beta2, dtype=float)
    base = delta * carrier

    y = np.zeros_like(E)
    p = np.ones_like(E)
    log_scale = np.zeros_like(E)
    nodes = np.zeros(E.shape, dtype=int)
    half = 0.5 * h
    sixth = h / 6.0
    for i in range(steps):
        j = 2 * i
        w0 = beta2 + sg * shape[j] + base[j]
        wm = beta2 + sg * shape[j + 1] + base[j + 1]
        w1 = beta2 + sg * shape[j + 2] + base[j + 2]
        k2y = p + half * w0 * y
        y2 = y + half * p
        k2p = wm * y2
        y3 = y + half * k2y
        k3y = p + half * k2p
        k3p = wm * y3
        y4 = y + h * k3y
        k4y = p + h * k3p
        k4p = w1 * y4
        y_new = y + sixth * (p + 2.0 * k2y + 2.0 * k3y + k4y)
        p = p + sixth * (w0 * y + 2.0 * k2p + 2.0 * k3p + k4p)
        nodes += (y_new * y) < 0
        y = y_new
        # growth per step is at most exp(h sqrt(max W)), so checking every 32 steps is safe
        if i % 32 == 31:
            big = np.maximum(np.abs(y), np.abs(p))
            over = big > RENORM_AT
            if over.any():
                scale = np.where(over, big, 1.0)
                y = y / scale
                p = p / scale
                log_scale = log_scale + np.log(scale)
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(p))):
        raise NonFinite("shooting produced a non-finite value")
    return [ShootResult(float(e), float(v), int(n), float(ls))
            for e, v, n, ls in zip(E, y, nodes, log_scale)]


def shoot(cfg: PhysicalConfig, approx: CentrifugalApprox | None, E: float,
          mode: str = "effective", r_max: float = 30.0, steps: int = DEFAULT_STEPS) -> ShootResult:
    return shoot_many(cfg, approx, [E], mode, r_max, steps)[0]


def decay_rate(cfg: PhysicalConfig, approx: CentrifugalApprox | None, E: float,
               mode: str = "effective") -> float:
    """sqrt(W(infinity)), the asymptotic decay constant at ``E``."""
    beta2, gamma, delta = model.coupling_constants(cfg, E)
    tail = beta2 + cfg.limit.sign * gamma
    if mode == "effective":
        tail += delta * approx.D0
    return math.sqrt(tail) if tail > 0 else 0.0


def default_r_max(cfg: PhysicalConfig, approx: CentrifugalApprox | None, E: float,
                  mode: str = "effective", cap: float = 120.0) -> float:
    """Thirty decay lengths at ``E``, at least 30 d and at most ``cap`` d past R_c."""
    k = decay_rate(cfg, approx, E, mode)
    span = 30.0 / k if k > 0 else math.inf
    return cfg.R_c + min(max(30.0 * cfg.d, span), cap * cfg.d)


def _needs_split(a: ShootResult, b: ShootResult) -> bool:
    return a.endpoint_value * b.endpoint_value < 0 or a.node_count != b.node_count


def oracle_spectrum(cfg: PhysicalConfig, approx: CentrifugalApprox | None,
                    mode: str = "effective", opts: OracleOptions | None = None,
                    window: tuple[float, float] | None = None) -> list[float]:
    """Eigenvalues in the energy window, ascending.

    A bracket is an adjacent pair of energies whose endpoint values differ in
    sign or whose node counts differ.  All open brackets are subdivided
    together, ``opts.lanes`` interior shots each, until their width is below
    the tolerance; brackets that end with a sign change are the roots.
    """
    opts = opts or OracleOptions()
    if window is None:
        if approx is None:
            raise ValueError("a window is required when no CentrifugalApprox is given")
        window = model.energy_window(cfg, approx, branch=opts.branch)
    lo, hi = window
    if not lo < hi:
        raise EmptyWindow("empty energy window")
    tol = opts.tol_E if opts.tol_E is not None else 1e-10 * cfg.M
    r_max = opts.r_max
    if r_max is None:
        r_max = default_r_max(cfg, approx, hi - opts.edge_inset * (hi - lo), mode)
    steps = opts.steps
    if steps is None:
        steps = max(DEFAULT_STEPS, math.ceil((r_max - cfg.R_c) / (opts.max_step * cfg.d)))

    def run(Es):
        return shoot_many(cfg, approx, Es, mode, r_max, steps)

    # interior lattice plus the two inset edges, so states near the edges are bracketed
    inset = opts.edge_inset * (hi - lo)
    grid = lo + (hi - lo) * np.arange(1, opts.scan_points) / opts.scan_points
    grid = np.concatenate([[lo + inset], grid[(grid > lo + inset) & (grid < hi - inset)], [hi - inset]])
    res = run(grid)
    pending = [(a, b) for a, b in zip(res[:-1], res[1:]) if _needs_split(a, b)]
    roots = []
    frac = np.arange(1, opts.lanes + 1) / (opts.lanes + 1)
    while pending:
        narrow = [(a, b) for a, b in pending if b.E - a.E <= tol]
        roots += [0.5 * (a.E + b.E) for a, b in narrow
                  if a.endpoint_value * b.endpoint_value < 0]
        wide = [(a, b) for a, b in pending if b.E - a.E > tol]
        if not wide:
            break
        Es = np.concatenate([a.E + (b.E - a.E) * frac for a, b in wide])
        shots = run(Es)
        pending = []
        for i, (a, b) in enumerate(wide):
            inner = [a, *shots[i * opts.lanes:(i + 1) * opts.lanes], b]
            pending += [(x, y) for x, y in zip(inner[:-1], inner[1:]) if _needs_split(x, y)]
    return sorted(roots)
