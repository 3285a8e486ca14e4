"""Physical configuration, improved Rosen-Morse potential and derived exponents.

Natural units (hbar = c = 1): masses and energies are inverse lengths.

With ``u = 1/(exp(2r/d) + 1)`` the decoupled radial equation of either
symmetry limit is taken in the form::

    phi''(r) = W(r) phi(r)
    W(r) = beta2 + s * gamma * (1 - b u)^2 + delta * carrier(r)

where ``s = +1`` (spin: phi = F) or ``s = -1`` (pseudospin: phi = G), and
``carrier`` is either the exact ``1/r^2`` or its quadratic replacement
``D0 - D1 u + D2 u^2``.  With the quadratic carrier the equation is of
hypergeometric class and its solution regular at infinity is
``u^mu (1-u)^k 2F1(mu+nu+k, 1+mu-nu+k; 2mu+1; u)``, ``k = (d/2) sqrt(A)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .errors import (
    ComplexNu,
    EmptyWindow,
    IllConditionedFit,
    InvalidConfig,
    NegativeA,
    OutsideBoundDomain,
    ZeroKappa,
)

LimitKind = Literal["spin", "pseudospin"]


@dataclass(frozen=True)
class SymmetryLimit:
    """Which potential combination is constant, and its value.

    ``spin``: V - S = C_s, the upper component F decouples.
    ``pseudospin``: V + S = C_ps, the lower component G decouples.
    """

    kind: LimitKind
    constant: float = 0.0

    def __post_init__(self):
        if self.kind not in ("spin", "pseudospin"):
            raise InvalidConfig(f"limit must be 'spin' or 'pseudospin', got {self.kind!r}")

    @classmethod
    def spin(cls, C_s: float = 0.0) -> "SymmetryLimit":
        return cls("spin", float(C_s))

    @classmethod
    def pseudospin(cls, C_ps: float = 0.0) -> "SymmetryLimit":
        return cls("pseudospin", float(C_ps))

    @property
    def sign(self) -> int:
        return 1 if self.kind == "spin" else -1


@dataclass(frozen=True)
class PhysicalConfig:
    M: float
    D_e: float
    b_shape: float
    d: float
    T_tensor: float
    R_c: float
    kappa: int
    limit: SymmetryLimit = field(default_factory=SymmetryLimit.spin)

    def __post_init__(self):
        for name in ("M", "D_e", "b_shape", "d", "T_tensor", "R_c"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidConfig(f"{name} must be finite")
        if self.d <= 0:
            raise InvalidConfig(f"d must be positive, got {self.d}")
        if self.D_e <= 0:
            raise InvalidConfig(f"D_e must be positive, got {self.D_e}")
        if self.M <= 0:
            raise InvalidConfig(f"M must be positive, got {self.M}")
        if self.R_c < 0:
            raise InvalidConfig(f"R_c must be non-negative, got {self.R_c}")
        if int(self.kappa) != self.kappa:
            raise InvalidConfig(f"kappa must be an integer, got {self.kappa}")
        if self.kappa == 0:
            raise ZeroKappa("kappa must be nonzero")

    @property
    def z_c(self) -> float:
        return u_of_r(self.R_c, self.d)


@dataclass(frozen=True)
class CentrifugalApprox:
    """Quadratic stand-in ``D0 - D1 u + D2 u^2`` for ``1/r^2``.

    ``max_rel_error`` is filled in by :func:`fit_centrifugal` and is ``None``
    for user-supplied coefficients.
    """

    D0: float
    D1: float
    D2: float
    max_rel_error: float | None = None

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.D0, self.D1, self.D2)):
            raise InvalidConfig("centrifugal coefficients must be finite")

    def __call__(self, u):
        return self.D0 - self.D1 * u + self.D2 * u * u

    @property
    def at_unit_u(self) -> float:
        """Carrier value at u = 1, the combination D0 - D1 + D2."""
        return self.D0 - self.D1 + self.D2


@dataclass(frozen=True)
class DerivedParams:
    beta2: float
    gamma: float
    delta: float
    mu: float
    nu_plus: float
    A: float
    z_c: float
    d: float

    @property
    def k(self) -> float:
        """Exponent of (1 - u): (d/2) sqrt(A)."""
        return 0.5 * self.d * math.sqrt(self.A)

    @property
    def hyp_params(self) -> tuple[float, float, float]:
        """(a, b, c) of the 2F1 in the closed-form solution."""
        k = self.k
        return (self.mu + self.nu_plus + k, 1.0 + self.mu - self.nu_plus + k, 2.0 * self.mu + 1.0)

    @property
    def decay_rate(self) -> float:
        """Asymptotic decay constant 2 mu / d of the bound solution."""
        return 2.0 * self.mu / self.d


# ---------------------------------------------------------------------------
# potential
# ---------------------------------------------------------------------------

def u_of_r(r, d: float):
    """u = 1/(exp(2r/d) + 1), overflow-safe, scalar or array."""
    x = np.asarray(r, dtype=float) * (2.0 / d)
    out = np.exp(-x) / (1.0 + np.exp(-x))
    return float(out) if out.ndim == 0 else out


def rosen_morse(r, D_e: float, b_shape: float, d: float):
    u = u_of_r(r, d)
    return D_e * (1.0 - b_shape * u) ** 2


def sigma_potential(r, cfg: PhysicalConfig):
    """Sum potential V + S in the spin limit: D_e (1 - b/(e^{2r/d} + 1))^2."""
    return rosen_morse(r, cfg.D_e, cfg.b_shape, cfg.d)


def delta_potential(r, cfg: PhysicalConfig):
    """Difference potential V - S in the pseudospin limit (same shape)."""
    return rosen_morse(r, cfg.D_e, cfg.b_shape, cfg.d)


def tensor_potential(r, cfg: PhysicalConfig):
    """Coulomb-like tensor term U(r) = -T/r."""
    return -cfg.T_tensor / np.asarray(r, dtype=float)


# ---------------------------------------------------------------------------
# parameter algebra
# ---------------------------------------------------------------------------

def coupling_constants(cfg: PhysicalConfig, E: float) -> tuple[float, float, float]:
    """(beta^2, gamma, delta) at trial energy ``E``, or their barred analogues."""
    M, T, kap, C = cfg.M, cfg.T_tensor, cfg.kappa, cfg.limit.constant
    if cfg.limit.kind == "spin":
        beta2 = (M - E) * (M + E - C)
        gamma = (M + E - C) * cfg.D_e
        delta = (T + kap) * (T + kap + 1)
    else:
        beta2 = (M + E) * (M - E + C)
        gamma = cfg.D_e * (M - E + C)
        delta = (kap + T) * (kap + T - 1)
    return beta2, gamma, delta


def _radicands(cfg: PhysicalConfig, approx: CentrifugalApprox, E: float):
    beta2, gamma, delta = coupling_constants(cfg, E)
    s = cfg.limit.sign
    b, d = cfg.b_shape, cfg.d
    mu_rad = beta2 + s * gamma + delta * approx.D0
    nu_rad = 1.0 + (s * gamma * b * b + delta * approx.D2) * d * d
    A = beta2 + s * gamma * (b - 1.0) ** 2 + delta * approx.at_unit_u
    return beta2, gamma, delta, mu_rad, nu_rad, A


def derived_params(cfg: PhysicalConfig, approx: CentrifugalApprox, E: float) -> DerivedParams:
    """Exponents mu, nu_+ and constant A of the closed-form solution at ``E``.

    Raises the error naming the first radicand that leaves the admissible
    domain; nothing is continued into the complex plane.
    """
    beta2, gamma, delta, mu_rad, nu_rad, A = _radicands(cfg, approx, E)
    if not mu_rad > 0.0:
        raise OutsideBoundDomain(
            f"E = {E!r}: decay radicand beta^2 {'+' if cfg.limit.sign > 0 else '-'} gamma"
            f" + delta*D0 = {mu_rad:.6g} is not positive (mu would not be real and positive)"
        )
    if nu_rad < 0.0:
        raise ComplexNu(f"E = {E!r}: nu radicand = {nu_rad:.6g} < 0")
    if A < 0.0:
        raise NegativeA(f"E = {E!r}: A = {A:.6g} < 0")
    return DerivedParams(
        beta2=beta2,
        gamma=gamma,
        delta=delta,
        mu=0.5 * cfg.d * math.sqrt(mu_rad),
        nu_plus=0.5 + 0.5 * math.sqrt(nu_rad),
        A=A,
        z_c=cfg.z_c,
        d=cfg.d,
    )


def radial_strength(cfg: PhysicalConfig, approx: CentrifugalApprox | None, E, r,
                    exact: bool = False):
    """W(r) of the decoupled equation phi'' = W phi.

    ``E`` may be an array (broadcast against ``r`` by the caller).  With
    ``exact=True`` the true ``1/r^2`` replaces the quadratic carrier.
    """
    beta2, gamma, delta = coupling_constants(cfg, E)
    r = np.asarray(r, dtype=float)
    u = u_of_r(r, cfg.d)
    shape = (1.0 - cfg.b_shape * u) ** 2
    carrier = 1.0 / (r * r) if exact else approx(u)
    return beta2 + cfg.limit.sign * gamma * shape + delta * carrier


def beta2_positive_interval(cfg: PhysicalConfig) -> tuple[float, float]:
    """Energies with beta^2 > 0: (C_s - M, M) for spin, (-M, M + C_ps) for pseudospin.

    Informational only.  Because the well approaches D_e > 0 at large r,
    decaying states need the full tail W(infinity) > 0 rather than beta^2 > 0;
    see :func:`branch_interval`.
    """
    M, C = cfg.M, cfg.limit.constant
    lo, hi = (C - M, M) if cfg.limit.kind == "spin" else (-M, M + C)
    if not lo < hi:
        raise EmptyWindow("beta^2 is never positive for this configuration")
    return lo, hi


def shape_range(cfg: PhysicalConfig) -> tuple[float, float]:
    """Min and max of the profile (1 - b u)^2 over r >= R_c, i.e. u in (0, z_c]."""
    b, zc = cfg.b_shape, cfg.z_c
    ends = (1.0, (1.0 - b * zc) ** 2)
    inside = b != 0 and 0.0 < 1.0 / b <= zc
    return (0.0 if inside else min(ends)), max(ends)


def _decay_interval(cfg: PhysicalConfig, approx: CentrifugalApprox) -> tuple[float, float]:
    # the decay radicand is a downward parabola in E; a bound state needs it positive
    M, C, De = cfg.M, cfg.limit.constant, cfg.D_e
    _, _, delta = coupling_constants(cfg, 0.0)
    if cfg.limit.kind == "spin":
        const = (M - C) * (M + De) + delta * approx.D0  # (M+E-C)(M-E+De) + delta*D0
    else:
        const = (M + C) * (M - De) + delta * approx.D0  # (M-E+C)(M+E-De) + delta*D0
    lin = De + C
    disc = lin * lin + 4.0 * const
    if disc <= 0.0:
        raise EmptyWindow("decay radicand is never positive: no admissible energies")
    sq = math.sqrt(disc)
    return 0.5 * (lin - sq), 0.5 * (lin + sq)


def branch_interval(cfg: PhysicalConfig, approx: CentrifugalApprox,
                    branch: str = "particle") -> tuple[float, float]:
    """Energies that decay at infinity and on which W(r; E) is monotone in E.

    ``dW/dE = C - 2E + D_e (1 - b u)^2`` in both limits.  On the particle
    branch it is negative for every r, so raising E adds nodes (Sturm
    ordering); on the antiparticle branch it is positive everywhere and the
    ordering is reversed.  Energies in between have no definite ordering.
    """
    lo, hi = _decay_interval(cfg, approx)
    s_min, s_max = shape_range(cfg)
    C = cfg.limit.constant
    if branch == "particle":
        lo = max(lo, 0.5 * (C + cfg.D_e * s_max))
    elif branch == "antiparticle":
        hi = min(hi, 0.5 * (C + cfg.D_e * s_min))
    elif branch != "all":
        raise ValueError(f"branch must be 'particle', 'antiparticle' or 'all', got {branch!r}")
    if not lo < hi:
        raise EmptyWindow(f"the {branch} branch holds no decaying energies")
    return lo, hi


def _admissible(cfg, approx, E) -> bool:
    try:
        derived_params(cfg, approx, E)
    except (OutsideBoundDomain, ComplexNu, NegativeA):
        return False
    return True


def energy_window(cfg: PhysicalConfig, approx: CentrifugalApprox, branch: str = "particle",
                  scan_points: int = 512, rtol: float = 1e-10) -> tuple[float, float]:
    """Open interval of trial energies on which :func:`derived_params` succeeds.

    Starts from :func:`branch_interval`, scans it for the remaining radicand
    conditions and refines each boundary by bisection.  When the admissible
    set splits into several pieces the widest piece is returned.
    """
    lo, hi = branch_interval(cfg, approx, branch)
    grid = np.linspace(lo, hi, scan_points + 1)[1:-1]
    ok = np.array([_admissible(cfg, approx, E) for E in grid])
    if not ok.any():
        raise EmptyWindow("no energy in the branch interval passes all radicand checks")
    tol = rtol * max(abs(lo), abs(hi), hi - lo)

    def refine(good: float, bad: float) -> float:
        while abs(bad - good) > tol:
            mid = 0.5 * (good + bad)
            if _admissible(cfg, approx, mid):
                good = mid
            else:
                bad = mid
        return good

    pieces = []
    i = 0
    while i < len(grid):
        if not ok[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(grid) and ok[j + 1]:
            j += 1
        left = lo if i == 0 else refine(grid[i], grid[i - 1])
        right = hi if j == len(grid) - 1 else refine(grid[j], grid[j + 1])
        pieces.append((float(left), float(right)))
        i = j + 1
    return max(pieces, key=lambda p: p[1] - p[0])


def kappa_mapping(kappa: int, limit: SymmetryLimit | LimitKind) -> tuple[int, float]:
    """(orbital quantum number, j) for spin-orbit number ``kappa``.

    Returns (l, j) in the spin limit and (pseudo-orbital l~, j) in the
    pseudospin limit; in both cases j = |kappa| - 1/2.
    """
    kind = limit.kind if isinstance(limit, SymmetryLimit) else limit
    if kappa == 0:
        raise ZeroKappa("kappa must be nonzero")
    if kind == "spin":
        l = -kappa - 1 if kappa < 0 else kappa
    else:
        l = -kappa if kappa < 0 else kappa - 1
    return l, abs(kappa) - 0.5


def fit_centrifugal(cfg: PhysicalConfig, r_max: float, n_points: int = 512,
                    cond_limit: float = 1e12) -> CentrifugalApprox:
    """Least-squares fit of ``1/r^2`` by ``D0 - D1 u + D2 u^2``.

    Plain (unweighted) residuals on a log-spaced grid over
    ``[max(R_c, 0.05 d), r_max]``; the largest relative deviation from
    ``1/r^2`` on that grid is reported as ``max_rel_error``.
    """
    r_lo = max(cfg.R_c, 0.05 * cfg.d)
    if not r_lo < r_max:
        raise IllConditionedFit(f"fit window [{r_lo}, {r_max}] is empty")
    r = np.geomspace(r_lo, r_max, n_points)
    u = u_of_r(r, cfg.d)
    target = 1.0 / r**2
    design = np.column_stack([np.ones_like(u), -u, u * u])
    if np.linalg.cond(design) > cond_limit:
        raise IllConditionedFit(
            "u(r) is nearly constant over the fit window; shrink r_max or increase d"
        )
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    approx = CentrifugalApprox(*map(float, coef))
    rel = np.abs(approx(u) - target) / target
    return CentrifugalApprox(approx.D0, approx.D1, approx.D2, float(rel.max()))
