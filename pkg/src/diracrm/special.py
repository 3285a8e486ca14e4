"""Gauss hypergeometric function 2F1 and log-gamma in double precision.

Only real arguments are supported.  The direct power series is the
workhorse; the Euler and Pfaff transformations are provided as
independent verification identities, and the Gauss summation theorem
gives the value at ``z = 1``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    ArgumentOutOfRange,
    DivergentAtOne,
    InvalidC,
    NonConvergent,
    PoleAtNonPositiveInteger,
)

DEFAULT_MAX_TERMS = 100_000
SERIES_RTOL = 1e-15
MAX_DIRECT_Z = 0.999

_EPS = np.finfo(float).eps
_SCALAR_TERMS = 512
_CHUNK = 4096

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class HypParams(NamedTuple):
    """Arguments ``(a, b, c, z)`` of 2F1; unpack straight into the evaluators."""

    a: complex
    b: complex
    c: float
    z: float


@dataclass(frozen=True)
class EvalResult:
    value: complex
    abs_error_estimate: float
    terms_used: int

    @property
    def real(self) -> float:
        return self.value.real


def _is_nonpositive_integer(x) -> bool:
    x = complex(x)
    return x.imag == 0.0 and x.real <= 0.0 and x.real == math.floor(x.real)


def _as_number(x):
    """Return a float when ``x`` has no imaginary part, else a complex."""
    x = complex(x)
    return x.real if x.imag == 0.0 else x


def _check_c(c) -> None:
    if _is_nonpositive_integer(c):
        raise InvalidC(f"c = {c} is zero or a negative integer")


# ---------------------------------------------------------------------------
# log-gamma
# ---------------------------------------------------------------------------

def _lanczos_log_gamma(x: complex) -> complex:
    # valid for Re(x) >= 0.5
    x = x - 1.0
    acc = complex(_LANCZOS_COEF[0])
    for k in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[k] / (x + k)
    t = x + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (x + 0.5) * cmath.log(t) - t + cmath.log(acc)


def log_gamma(x) -> complex:
    """Principal branch of log Gamma(x) for real or complex ``x``.

    Arguments with ``Re(x) < 0.5`` are shifted upward with the recurrence
    ``log G(x) = log G(x + m) - sum log(x + k)``; summing principal logs keeps
    the result on the branch that is continuous off the negative real axis
    (on that axis the limit from ``Im x -> 0+`` is returned).
    """
    x = complex(x)
    if _is_nonpositive_integer(x):
        raise PoleAtNonPositiveInteger(f"Gamma has a pole at {x.real:g}")
    shift = 0j
    while x.real < 0.5:
        shift += cmath.log(x)
        x += 1.0
    return _lanczos_log_gamma(x) - shift


def gamma(x) -> complex:
    return cmath.exp(log_gamma(x))


def rgamma(x) -> complex:
    """1/Gamma(x), which is zero at the poles of Gamma."""
    if _is_nonpositive_integer(x):
        return 0j
    return cmath.exp(-log_gamma(x))


# ---------------------------------------------------------------------------
# power series
# ---------------------------------------------------------------------------

def _tail_bound(term: float, ratio: float, absz: float) -> float:
    rho = max(ratio, absz)
    if rho >= 1.0:
        return math.inf
    return term * rho / (1.0 - rho)


def _series(a, b, c, z: float, max_terms: int = DEFAULT_MAX_TERMS) -> EvalResult:
    """Sum 2F1(a, b; c; z) for real ``|z| < 1`` by forward term recurrence.

    Stops once the geometric tail bound falls below ``SERIES_RTOL`` times the
    partial sum (or below the rounding floor of the largest term).  The tail
    bound is only trusted past ``n > max(|a|, |b|)``, where the term ratio
    settles into its monotone approach to ``|z|``.
    """
    _check_c(c)
    if not -1.0 < z < 1.0:
        raise ArgumentOutOfRange(f"series needs |z| < 1, got z = {z}")
    a, b, c = _as_number(a), _as_number(b), _as_number(c)
    if z == 0.0 or a == 0 or b == 0:
        return EvalResult(1.0 + 0j, 0.0, 1)

    absz = abs(z)
    n_trust = int(max(abs(a), abs(b))) + 1
    # terms are accumulated in extended precision: cancellation in the
    # alternating regime amplifies per-term rounding by max|term| / |sum|
    cplx = isinstance(a, complex) or isinstance(b, complex)
    wide = np.clongdouble if cplx else np.longdouble
    a_w, b_w, c_w, z_w = wide(a), wide(b), np.longdouble(c), np.longdouble(z)
    one = wide(1)
    s = one
    t = one
    peak = 1.0
    n = 0
    while n < min(max_terms, _SCALAR_TERMS):
        t = t * (z_w * (a_w + n) * (b_w + n) / ((c_w + n) * (n + 1)))
        n += 1
        s = s + t
        at = float(abs(t))
        if at == 0.0:
            return EvalResult(complex(s), 0.0, n)
        peak = max(peak, at)
        if n >= n_trust:
            ratio = abs(z * (a + n) * (b + n) / ((c + n) * (n + 1)))
            tail = _tail_bound(at, ratio, absz)
            if tail <= SERIES_RTOL * max(float(abs(s)), _EPS * peak):
                return EvalResult(complex(s), tail, n + 1)

    # long series: same recurrence, vectorized in chunks
    while n < max_terms:
        m = min(_CHUNK, max_terms - n)
        k = n + np.arange(m + 1, dtype=np.longdouble)
        ratios = (z_w * (a_w + k) * (b_w + k) / ((c_w + k) * (k + 1))).astype(wide)
        terms = t * np.cumprod(ratios[:-1])
        partial = s + np.cumsum(terms)
        aterms = np.abs(terms).astype(float)
        running_peak = np.maximum.accumulate(np.maximum(aterms, peak))
        rho = np.maximum(np.abs(ratios[1:]).astype(float), absz)
        with np.errstate(divide="ignore", invalid="ignore"):
            tail = np.where(rho < 1.0, aterms * rho / (1.0 - rho), np.inf)
        idx = n + 1 + np.arange(m)
        done = (
            (idx >= n_trust)
            & (tail <= SERIES_RTOL * np.maximum(np.abs(partial).astype(float),
                                                _EPS * running_peak))
        ) | (aterms == 0.0)
        hit = np.flatnonzero(done)
        if hit.size:
            j = hit[0]
            return EvalResult(complex(partial[j]), float(tail[j]) if aterms[j] else 0.0,
                              int(idx[j]) + 1)
        if not np.all(np.isfinite(partial)):
            break
        t = terms[-1]
        s = partial[-1]
        peak = float(running_peak[-1])
        n += m
    raise NonConvergent(
        f"2F1({a}, {b}; {c}; {z}) did not converge within {max_terms} terms"
    )


def series_on_grid(a: float, b: float, c: float, z: np.ndarray,
                   max_terms: int = DEFAULT_MAX_TERMS) -> np.ndarray:
    """Real 2F1(a, b; c; z) for an array of ``z`` in ``[0, 1)``.

    The same recurrence and stopping rule as the scalar evaluator, run over
    all grid points at once.
    """
    _check_c(c)
    z = np.asarray(z, dtype=float)
    if z.size and (z.min() < 0.0 or z.max() >= 1.0):
        raise ArgumentOutOfRange("grid evaluation needs 0 <= z < 1")
    s = np.ones_like(z)
    if a == 0 or b == 0 or z.size == 0:
        return s
    t = np.ones_like(z)
    peak = np.ones_like(z)
    active = np.ones(z.shape, dtype=bool)
    n_trust = int(max(abs(a), abs(b))) + 1
    n = 0
    while n < max_terms:
        coef = (a + n) * (b + n) / ((c + n) * (n + 1))
        t = t * (coef * z)
        n += 1
        s = np.where(active, s + t, s)
        at = np.abs(t)
        peak = np.maximum(peak, at)
        if n >= n_trust:
            ratio = np.abs(z * ((a + n) * (b + n) / ((c + n) * (n + 1))))
            rho = np.maximum(ratio, z)
            with np.errstate(divide="ignore", invalid="ignore"):
                tail = np.where(rho < 1.0, at * rho / (1.0 - rho), np.inf)
            converged = (tail <= SERIES_RTOL * np.maximum(np.abs(s), _EPS * peak)) | (at == 0.0)
            active &= ~converged
            if not active.any():
                return s
    raise NonConvergent(f"2F1({a}, {b}; {c}; z) grid evaluation did not converge")


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------

def _check_direct(c, z) -> None:
    _check_c(c)
    if not 0.0 <= z <= MAX_DIRECT_Z:
        raise ArgumentOutOfRange(
            f"direct evaluation needs 0 <= z <= {MAX_DIRECT_Z}, got {z}; "
            "use gauss_2f1_at_one or a transformation near z = 1"
        )


def gauss_2f1(a, b, c, z, *, max_terms: int = DEFAULT_MAX_TERMS) -> EvalResult:
    """2F1(a, b; c; z) by direct summation, for real ``0 <= z <= 0.999``.

    >>> round(gauss_2f1(1, 1, 2, 0.5).value.real, 10)
    1.3862943611
    """
    _check_direct(c, z)
    return _series(a, b, c, float(z), max_terms)


def gauss_2f1_derivative(a, b, c, z, *, order: int = 1,
                         max_terms: int = DEFAULT_MAX_TERMS) -> EvalResult:
    """``order``-th z-derivative via d/dz 2F1(a,b;c;z) = (ab/c) 2F1(a+1,b+1;c+1;z)."""
    _check_direct(c, z)
    factor = 1.0 + 0j
    for k in range(order):
        factor *= (a + k) * (b + k) / (c + k)
    if factor == 0:
        return EvalResult(0j, 0.0, 1)
    res = _series(a + order, b + order, c + order, float(z), max_terms)
    return EvalResult(factor * res.value, abs(factor) * res.abs_error_estimate,
                      res.terms_used)


def gauss_2f1_at_one(a, b, c) -> complex:
    """Gauss summation: 2F1(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b)).

    Terminating series (``a`` or ``b`` a non-positive integer) are summed by
    Chu-Vandermonde, which needs no condition on ``c - a - b``.
    """
    _check_c(c)
    for p, q in ((a, b), (b, a)):
        if _is_nonpositive_integer(p):
            m = int(round(-complex(p).real))
            val = 1.0 + 0j
            for k in range(m):
                val *= (c - q + k) / (c + k)
            return val
    s = complex(c - a - b)
    if s.real <= 0.0:
        raise DivergentAtOne(f"Re(c - a - b) = {s.real:g} <= 0: series diverges at z = 1")
    if _is_nonpositive_integer(c - a) or _is_nonpositive_integer(c - b):
        return 0j
    return cmath.exp(log_gamma(c) + log_gamma(s) - log_gamma(c - a) - log_gamma(c - b))


def series_near_one(a, b, c, z, *, max_terms: int = 20_000_000) -> EvalResult:
    """Direct summation for ``0.999 < z < 1``.

    Slow (the term count grows like 1/(1-z)) and meant for checking
    :func:`gauss_2f1_at_one`, not for production evaluation.
    """
    _check_c(c)
    if not 0.0 <= z < 1.0:
        raise ArgumentOutOfRange(f"near-unit summation needs 0 <= z < 1, got {z}")
    return _series(a, b, c, float(z), max_terms)


def extrapolate_to_one(a, b, c, h0: float = 3e-5, points: int = 5) -> complex:
    """Limit z -> 1 of the direct series by extrapolation in h = 1 - z.

    With s = c - a - b (Re s > 0) the function behaves like
    F(1) + alpha h + beta h^s + gamma h^2 + eta h^(s+1) + ... (for integer s
    the h^s terms carry a log h factor), so the values at h0, 2 h0, 4 h0, ...
    are fitted exactly by these gauge terms and the constant is returned.
    """
    s = complex(c - a - b)
    if s.real <= 0.0:
        raise DivergentAtOne(f"Re(c - a - b) = {s.real:g} <= 0: no finite limit at z = 1")
    m = round(s.real)
    if abs(s - m) < 1e-6:
        # integer exponent: the singular terms become h^m log h, h^(m+1) log h
        basis = [lambda h: np.ones_like(h), lambda h: h, lambda h: h**2,
                 lambda h: h**m * np.log(h), lambda h: h ** (m + 1) * np.log(h)][:points]
    else:
        basis = [lambda h: np.ones_like(h), lambda h: h, lambda h: h**s,
                 lambda h: h**2, lambda h: h ** (s + 1)][:points]
    hs = h0 * 2.0 ** np.arange(points)
    vals = np.array([series_near_one(a, b, c, 1.0 - h).value for h in hs])
    design = np.column_stack([f(hs.astype(complex)) for f in basis])
    return complex(np.linalg.solve(design, vals)[0])


def transform_euler(a, b, c, z, *, max_terms: int = DEFAULT_MAX_TERMS) -> EvalResult:
    """(1 - z)^(c-a-b) 2F1(c-a, c-b; c; z)."""
    _check_direct(c, z)
    res = _series(c - a, c - b, c, float(z), max_terms)
    pref = complex(1.0 - z) ** complex(c - a - b)
    return EvalResult(pref * res.value, abs(pref) * res.abs_error_estimate, res.terms_used)


def _taylor_step(a, b, c, w0: float, f, fp, h: float):
    """Advance (f, f') of a solution of the hypergeometric ODE from w0 to w0 + h.

    Taylor coefficients about w0 follow from the ODE
    w(1-w) f'' + [c - (a+b+1) w] f' - ab f = 0 as a three-term recurrence.
    Returns the new value, derivative and the size of the last term kept.
    """
    p0 = w0 * (1.0 - w0)
    p1 = 1.0 - 2.0 * w0
    q0 = c - (a + b + 1.0) * w0
    q1 = -(a + b + 1.0)
    ab = a * b
    c0, c1 = f, fp
    val = c0 + c1 * h
    der = c1
    hn = h
    n = 0
    while True:
        c2 = -((p1 * n + q0) * (n + 1) * c1 + (q1 * n - n * (n - 1) - ab) * c0) / (
            p0 * (n + 2) * (n + 1)
        )
        hn2 = hn * h
        tv = c2 * hn2
        td = (n + 2) * c2 * hn
        val += tv
        der += td
        n += 1
        if n > 3 and abs(tv) <= 0.1 * _EPS * abs(val) and abs(td) <= 0.1 * _EPS * abs(der):
            return val, der, abs(tv)
        if n > 10_000:
            raise NonConvergent("Taylor re-expansion of 2F1 did not converge")
        c0, c1, hn = c1, c2, hn2


def _continue_negative(a, b, c, w: float, max_terms: int) -> EvalResult:
    # 2F1(a, b; c; w), w < 0, by analytic continuation of the ODE from near the
    # origin; steps stay short compared with the distance to the singular
    # point w = 0 and with the scale 1/max(|a|, |b|, |ab/c|) on which the
    # solution varies, which keeps every re-expansion free of cancellation.
    a, b, c = _as_number(a), _as_number(b), _as_number(c)
    scale = 1.0 + max(abs(a), abs(b), abs(a * b / c))
    w0 = max(w, -0.5 / scale)
    start = _series(a, b, c, w0, max_terms)
    if a == 0 or b == 0:
        return start
    fp = (a * b / c) * _series(a + 1, b + 1, c + 1, w0, max_terms).value
    f = start.value
    err = start.abs_error_estimate
    steps = 1
    while w0 > w:
        h = max(w - w0, -0.5 * abs(w0), -0.5 * (1.0 - w0) / scale)
        f, fp, last = _taylor_step(a, b, c, w0, f, fp, h)
        err += last
        w0 += h
        steps += 1
    return EvalResult(complex(f), err, steps)


def transform_pfaff(a, b, c, z, *, max_terms: int = DEFAULT_MAX_TERMS) -> EvalResult:
    """(1 - z)^(-a) 2F1(a, c-b; c; z/(z-1)).

    The transformed argument ``w = z/(z-1)`` runs over ``(-inf, 0]``, so the
    right-hand function is carried out from the origin by Taylor
    re-expansion of its differential equation rather than by its (generally
    divergent, always cancellation-prone) power series in ``w``.
    """
    _check_direct(c, z)
    z = float(z)
    w = z / (z - 1.0)
    pref = complex(1.0 - z) ** complex(-a)
    if w == 0.0:
        res = EvalResult(1.0 + 0j, 0.0, 1)
    else:
        res = _continue_negative(a, c - b, c, w, max_terms)
    return EvalResult(pref * res.value, abs(pref) * res.abs_error_estimate, res.terms_used)
