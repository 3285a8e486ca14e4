"""Bound-state energies from the hypergeometric quantization condition."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from . import model, wavefunction
from .errors import NodeCountMismatch
from .model import CentrifugalApprox, PhysicalConfig
from .special import gauss_2f1

BOUNDARY_TOL = wavefunction.BOUNDARY_TOL
IMAG_TOL = 1e-12


@dataclass(frozen=True)
class SolverOptions:
    scan_points: int = 2000
    tol_E: float | None = None  # None: 1e-12 of the window width
    max_states: int | None = None
    check_nodes: bool = True
    branch: str = "particle"

    def __post_init__(self):
        if self.scan_points < 2:
            raise ValueError("scan_points must be at least 2")
        if self.tol_E is not None and not self.tol_E > 0:
            raise ValueError("tol_E must be positive")
        if self.max_states is not None and self.max_states < 0:
            raise ValueError("max_states must be non-negative")


@dataclass(frozen=True)
class BoundState:
    """One eigenvalue with its certification data.

    ``norm`` is the factor that brings the closed form to unit L2 norm on
    [R_c, r_max]; ``bracket`` is the final sign-change interval.
    """

    n_r: int
    E: float
    kappa: int
    limit_tag: str
    nodes: int
    residual_at_root: float
    bracket_width: float
    bracket: tuple[float, float] = (math.nan, math.nan)
    boundary_ratio: float = math.nan
    norm: float = math.nan

    def to_dict(self) -> dict:
        out = asdict(self)
        out["bracket"] = list(self.bracket)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BoundState":
        data = dict(data)
        if "bracket" in data:
            data["bracket"] = tuple(float(x) for x in data["bracket"])
        return cls(**data)


def quantization_residual(cfg: PhysicalConfig, approx: CentrifugalApprox, E: float) -> float:
    """2F1(mu + nu + k, 1 + mu - nu + k; 2 mu + 1; z_c), zero at an eigenvalue."""
    params = model.derived_params(cfg, approx, E)
    a, b, c = params.hyp_params
    value = gauss_2f1(a, b, c, params.z_c).value
    if abs(value.imag) > IMAG_TOL * abs(value):
        raise ArithmeticError(f"residual has a non-negligible imaginary part at E = {E}: {value}")
    return float(value.real)


def scan_grid(lo: float, hi: float, n: int) -> np.ndarray:
    """Interior points lo + (hi - lo) i / n, i = 1..n-1.

    Doubling n keeps every previous point, so a bracket found at the
    coarser resolution still contains a sign change at the finer one.
    """
    i = np.arange(1, n)
    return lo + (hi - lo) * i / n


def _bisect(fn, x1: float, x2: float, f1: float, f2: float, tol: float):
    while x2 - x1 > tol:
        xm = 0.5 * (x1 + x2)
        if xm <= x1 or xm >= x2:
            break
        fm = fn(xm)
        if fm == 0.0:
            return xm, xm, 0.0, 0.0
        if (fm < 0) == (f1 < 0):
            x1, f1 = xm, fm
        else:
            x2, f2 = xm, fm
    return x1, x2, f1, f2


def find_brackets(fn, grid: np.ndarray) -> list[tuple[float, float, float, float]]:
    values = [fn(E) for E in grid]
    out = []
    for i in range(len(grid) - 1):
        f1, f2 = values[i], values[i + 1]
        if f1 == 0.0:
            out.append((grid[i], grid[i], 0.0, 0.0))
        elif f1 * f2 < 0:
            out.append((grid[i], grid[i + 1], f1, f2))
    return out


def edge_node_count(cfg: PhysicalConfig, approx: CentrifugalApprox, edge: float,
                    window: tuple[float, float], inset: float = 1e-6) -> int:
    """Nodes of the decaying closed-form solution just inside ``edge``."""
    lo, hi = window
    E = edge + inset * (hi - lo) * (1.0 if edge == lo else -1.0)
    return wavefunction.count_nodes(wavefunction.sample_state(cfg, approx, E))


def solve_spectrum(cfg: PhysicalConfig, approx: CentrifugalApprox,
                   opts: SolverOptions | None = None) -> list[BoundState]:
    """All roots of the quantization residual in the energy window, ordered by E.

    n_r is the rank of the root counted from the window edge where the
    node count is smallest (the lower edge on the particle branch, the upper
    one on the antiparticle branch), offset by the node count of the
    decaying solution at that edge.  By Sturm comparison that count is the
    number of states lying beyond the edge, so n_r should equal the node
    count of every returned state; a disagreement is reported.
    """
    opts = opts or SolverOptions()
    lo, hi = model.energy_window(cfg, approx, branch=opts.branch)
    tol = opts.tol_E if opts.tol_E is not None else 1e-12 * (hi - lo)

    def fn(E):
        return quantization_residual(cfg, approx, float(E))

    brackets = find_brackets(fn, scan_grid(lo, hi, opts.scan_points))
    roots = []
    for x1, x2, f1, f2 in brackets:
        if x1 != x2:
            x1, x2, f1, f2 = _bisect(fn, x1, x2, f1, f2, tol)
        E = float(0.5 * (x1 + x2))
        roots.append((E, (float(x1), float(x2)), fn(E)))

    descending = opts.branch == "antiparticle"
    if descending:
        roots.sort(key=lambda t: -t[0])
    if opts.max_states is not None:
        roots = roots[: opts.max_states]
    offset = edge_node_count(cfg, approx, hi if descending else lo, (lo, hi)) if roots else 0

    states, mismatched = [], []
    for rank, (E, bracket, res) in enumerate(roots):
        n_r = offset + rank
        sample = wavefunction.sample_state(cfg, approx, E)
        nodes = wavefunction.count_nodes(sample)
        ratio = wavefunction.boundary_ratio(sample)
        norm = math.nan
        try:
            norm = wavefunction.normalize(sample).norm
        except Exception:
            pass
        state = BoundState(
            n_r=n_r, E=E, kappa=cfg.kappa, limit_tag=cfg.limit.kind, nodes=nodes,
            residual_at_root=res, bracket_width=bracket[1] - bracket[0],
            bracket=bracket, boundary_ratio=ratio, norm=norm,
        )
        states.append(state)
        if nodes != n_r:
            mismatched.append(state)
    states.sort(key=lambda s: s.E)
    if opts.check_nodes and mismatched:
        detail = ", ".join(f"n_r={s.n_r} has {s.nodes} nodes (E={s.E:.12g})" for s in mismatched)
        raise NodeCountMismatch(f"rank and node count disagree: {detail}", states)
    return states
