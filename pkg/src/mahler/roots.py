"""Univariate roots, Jensen's formula and the unit-circle root location results.

The solver is a simultaneous (Aberth-Ehrlich) iteration started from a fixed
configuration on the circle whose radius is the Cauchy bound, followed by a
Newton polish.  It works on batches: ``aberth_batch`` takes a ``(B, d+1)``
array of coefficient rows and returns a ``(B, d)`` array of roots, which is
what the quadrature code uses for the per-node one-variable measures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .poly import (
    GaussianRational,
    LaurentPoly,
    PolyError,
    reciprocal_conjugate,
    unit_complex,
)

__all__ = [
    "RootSet",
    "CircleClass",
    "Location",
    "RootFindingError",
    "SpecPreconditionError",
    "TAU_CIRCLE",
    "MAX_DEGREE",
    "find_roots",
    "aberth_batch",
    "jensen_measure_1d",
    "mahler_1d_batch",
    "classify_gamma",
    "gamma_poly",
    "measure_alpha_f_plus_beta_g",
    "AlphaBetaMeasure",
]

TAU_CIRCLE = 1e-9
MAX_DEGREE = 500
MAX_ITER = 1000
RESIDUAL_TOL = 1e-10
CLUSTER_DIST = 1e-6
CLUSTER_TOL = 1e-7
_ANGLE_OFFSET = 0.4  # breaks symmetry for real and self-reciprocal inputs


class RootFindingError(ArithmeticError):
    def __init__(self, message: str, residual: float = float("nan")):
        self.residual = residual
        super().__init__(message)


class SpecPreconditionError(PolyError):
    """g has a root strictly inside the unit disc."""


@dataclass
class RootSet:
    roots: np.ndarray
    leading_coeff: complex
    residual: float
    iterations: int = 0
    relaxed: bool = False
    trailing_zeros: int = 0

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)

    def __len__(self) -> int:
        return len(self.roots)


class Location(str, Enum):
    ALL_INSIDE = "all_inside"
    ALL_OUTSIDE = "all_outside"
    ALL_ON = "all_on"
    MIXED = "mixed"


@dataclass
class CircleClass:
    location: Location
    margin: float
    moduli: np.ndarray = field(repr=False, default_factory=lambda: np.empty(0))


def _as_coeff_array(p) -> np.ndarray:
    """Ascending complex coefficients with low-order zeros kept."""
    if isinstance(p, LaurentPoly):
        used = p.used_variables()
        if len(used) > 1:
            raise PolyError(f"expected a univariate polynomial, got {used}")
        if p.is_zero():
            raise PolyError("zero polynomial has no roots")
        if not used:
            return np.array([complex(p.constant_value())])
        v = used[0]
        lo = min(p.min_degree(v), 0)
        shifted = p.shift(tuple(-lo if n == v else 0 for n in p.variables))
        return shifted.complex_coeffs(v)
    a = np.asarray(p, dtype=complex).ravel()
    return a


def _trim(a: np.ndarray) -> tuple[np.ndarray, int]:
    nz = np.flatnonzero(a)
    if nz.size == 0:
        raise PolyError("zero polynomial has no roots")
    low, high = nz[0], nz[-1]
    return a[low:high + 1], int(low)


def _cauchy_radius(mon: np.ndarray) -> np.ndarray:
    """Positive root of x^d - sum_{j<d} |a_j| x^j for monic rows (ascending)."""
    d = mon.shape[1] - 1
    absa = np.abs(mon[:, :d])
    j = np.arange(d)
    # Fujiwara-type start lies above the Cauchy radius; Newton decreases monotonically.
    with np.errstate(divide="ignore"):
        start = 2.0 * np.max(absa ** (1.0 / (d - j)), axis=1)
    r = np.maximum(start, 1e-300)
    for _ in range(60):
        rp = r[:, None] ** j
        h = r ** d - np.sum(absa * rp, axis=1)
        dh = d * r ** (d - 1) - np.sum(absa[:, 1:] * j[1:] * r[:, None] ** (j[1:] - 1), axis=1)
        step = np.where(dh > 0, h / np.where(dh > 0, dh, 1.0), 0.0)
        r_new = r - step
        r_new = np.where(r_new > 0, r_new, r / 2)
        if np.all(np.abs(r_new - r) <= 1e-12 * r):
            r = r_new
            break
        r = r_new
    return np.maximum(r, 1e-300)


def _horner_with_derivative(mon: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """p(z) and p'(z) for rows of ascending coefficients, z of shape (B, m)."""
    d = mon.shape[1] - 1
    p = np.broadcast_to(mon[:, d:d + 1], z.shape).astype(complex)
    dp = np.zeros_like(z)
    for j in range(d - 1, -1, -1):
        dp = dp * z + p
        p = p * z + mon[:, j:j + 1]
    return p, dp


def _aberth_core(mon: np.ndarray, tol: float = 4 * np.finfo(float).eps,
                 max_iter: int = MAX_ITER) -> tuple[np.ndarray, int, np.ndarray]:
    B, d1 = mon.shape
    d = d1 - 1
    r = _cauchy_radius(mon)
    ang = 2 * np.pi * np.arange(d) / d + _ANGLE_OFFSET
    z = r[:, None] * np.exp(1j * ang)[None, :]
    active = np.ones(B, dtype=bool)
    it = 0
    eye = np.eye(d, dtype=bool)
    while it < max_iter and active.any():
        it += 1
        idx = np.flatnonzero(active)
        za = z[idx]
        p, dp = _horner_with_derivative(mon[idx], za)
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p / dp
            diff = za[:, :, None] - za[:, None, :]
            diff[:, eye] = 1.0
            s = np.sum(np.where(eye[None], 0.0, 1.0 / diff), axis=2)
            corr = w / (1.0 - w * s)
        bad = ~np.isfinite(corr)
        if bad.any():
            # exact hits (p = 0) or coincident iterates: stay put on hits, nudge otherwise
            hit = bad & (p == 0)
            corr = np.where(hit, 0.0, corr)
            still = ~np.isfinite(corr)
            corr = np.where(still, 1e-8 * (1 + np.abs(za)) * np.exp(1j * (it + 0.7)), corr)
        za = za - corr
        z[idx] = za
        done = np.all(np.abs(corr) <= tol * np.maximum(np.abs(za), 1e-300) + 1e-300, axis=1)
        active[idx[done]] = False
    return z, it, active


def _newton_polish(mon: np.ndarray, z: np.ndarray, steps: int = 2) -> np.ndarray:
    for _ in range(steps):
        p, dp = _horner_with_derivative(mon, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = p / dp
        ok = np.isfinite(step) & (np.abs(step) < 1e-3 * (1 + np.abs(z)))
        z = np.where(ok, z - step, z)
    return z


def _relative_residual(mon: np.ndarray, z: np.ndarray) -> np.ndarray:
    p, _ = _horner_with_derivative(mon, z)
    absz = np.abs(z)
    scale = np.zeros_like(absz)
    for j in range(mon.shape[1] - 1, -1, -1):
        scale = scale * absz + np.abs(mon[:, j:j + 1])
    with np.errstate(divide="ignore", invalid="ignore"):
        res = np.abs(p) / scale
    return np.where(scale > 0, res, 0.0)


def aberth_batch(coeffs: np.ndarray, max_iter: int = MAX_ITER,
                 polish: bool = True) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Roots of many polynomials of one degree.

    ``coeffs`` has shape ``(B, d+1)`` in ascending order with nonzero last
    column.  Returns ``(roots, residual, converged)`` with ``roots`` of shape
    ``(B, d)``.
    """
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 2:
        raise ValueError("coeffs must be two-dimensional")
    B, d1 = c.shape
    d = d1 - 1
    if d < 1:
        return np.empty((B, 0), complex), np.zeros(B), np.ones(B, bool)
    if d > MAX_DEGREE:
        raise RootFindingError(f"degree {d} exceeds the supported maximum {MAX_DEGREE}")
    mon = c / c[:, -1:]
    if d == 1:
        z = -mon[:, :1]
        return z, np.zeros(B), np.ones(B, bool)
    z, _, active = _aberth_core(mon, max_iter=max_iter)
    if polish:
        z = _newton_polish(mon, z)
    res = np.max(_relative_residual(mon, z), axis=1)
    return z, res, ~active


def find_roots(p, max_iter: int = MAX_ITER) -> RootSet:
    """All roots of a univariate polynomial (LaurentPoly or ascending coefficients).

    Low-order zero coefficients (roots at the origin) are split off exactly
    and reported as zero roots; negative Laurent exponents are first cleared
    by a monomial shift, which adds no roots.
    """
    a = _as_coeff_array(p)
    a, low = _trim(a)
    d = len(a) - 1
    lead = complex(a[-1])
    if d == 0:
        return RootSet(np.zeros(low, complex), lead, 0.0, trailing_zeros=low)
    if d > MAX_DEGREE:
        raise RootFindingError(f"degree {d} exceeds the supported maximum {MAX_DEGREE}")
    mon = (a / a[-1])[None, :]
    if d == 1:
        z = -mon[:, :1]
        it = 0
        active = np.zeros(1, bool)
    else:
        z, it, active = _aberth_core(mon, max_iter=max_iter)
        z = _newton_polish(mon, z)
    roots = z[0]
    res = float(np.max(_relative_residual(mon, z)))
    relaxed = False
    if d > 1:
        dist = np.where(np.eye(d, dtype=bool), np.inf, np.abs(roots[:, None] - roots[None, :]))
        relaxed = bool(np.min(dist) < CLUSTER_DIST)
    limit = CLUSTER_TOL if relaxed else RESIDUAL_TOL
    if active[0] and res > limit:
        raise RootFindingError(f"Aberth iteration did not converge in {max_iter} steps "
                               f"(residual {res:.3e})", res)
    if res > limit:
        raise RootFindingError(f"root residual {res:.3e} exceeds {limit:.0e}", res)
    all_roots = np.concatenate([np.zeros(low, complex), roots])
    return RootSet(all_roots, lead, res, iterations=it, relaxed=relaxed, trailing_zeros=low)


def _log_plus(x: np.ndarray) -> np.ndarray:
    return np.log(np.maximum(x, 1.0))


def _jensen_sum(lead: np.ndarray, trail: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Row-wise Jensen sums, taken over whichever side of the circle has fewer roots.

    ``log|lead| + sum_{|r|>1} log|r|`` equals ``log|trail| - sum_{|r|<=1} log|r|``
    (``trail`` the lowest nonzero coefficient).  Summing the shorter side makes a
    polynomial with all roots outside exact, and keeps clustered roots (which
    the iteration only resolves to about sqrt(eps)) out of the sum when possible.
    """
    logm = np.log(np.where(mod > 0, mod, 1.0))
    outside = mod > 1.0
    n_out = outside.sum(axis=1)
    n_in = mod.shape[1] - n_out
    top = np.log(lead) + np.sum(np.where(outside, logm, 0.0), axis=1)
    with np.errstate(divide="ignore"):
        bottom = np.log(trail) - np.sum(np.where(outside, 0.0, logm), axis=1)
    use_bottom = (n_in < n_out) & (trail > 0) & np.all(mod > 0, axis=1)
    return np.where(use_bottom, bottom, top)


def jensen_measure_1d(p) -> float:
    """Mahler measure of a univariate polynomial: log|lead| + sum log+|root|."""
    rs = find_roots(p)
    a, _ = _trim(_as_coeff_array(p))
    nz = rs.roots[rs.trailing_zeros:]
    if nz.size == 0:
        return float(math.log(abs(rs.leading_coeff)))
    val = _jensen_sum(np.array([abs(rs.leading_coeff)]), np.array([abs(complex(a[0]))]),
                      np.abs(nz)[None, :])
    return float(val[0])


def mahler_1d_batch(coeffs: np.ndarray, zero_tol: np.ndarray | float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    """Per-row one-variable Mahler measures of ``(B, k+1)`` ascending coefficient rows.

    Leading coefficients with ``|c| <= zero_tol`` are treated as zero (the
    degree drops; by Jensen the result is unchanged to first order).  Rows
    whose coefficients all fall below ``zero_tol`` are flagged in the
    returned ``skipped`` mask and given the value 0.
    """
    c = np.asarray(coeffs, dtype=complex)
    B, k1 = c.shape
    tol = np.broadcast_to(np.asarray(zero_tol, dtype=float), (B,))
    big = np.abs(c) > tol[:, None]
    any_big = big.any(axis=1)
    # effective degree: highest index with a non-negligible coefficient
    deg = np.where(any_big, k1 - 1 - np.argmax(big[:, ::-1], axis=1), -1)
    out = np.zeros(B)
    for d in np.unique(deg):
        if d < 0:
            continue
        rows = np.flatnonzero(deg == d)
        sub = c[rows, :d + 1]
        lead = np.abs(sub[:, -1])
        if d == 0:
            out[rows] = np.log(lead)
        elif d == 1:
            out[rows] = np.log(np.maximum(lead, np.abs(sub[:, 0])))
        else:
            z, _, _ = aberth_batch(sub)
            out[rows] = _jensen_sum(lead, np.abs(sub[:, 0]), np.abs(z))
    return out, ~any_big


# ---------------------------------------------------------------------------
# root location for the pencil f + beta g


def _g_coeffs(g) -> tuple[LaurentPoly, list]:
    if not isinstance(g, LaurentPoly):
        g = LaurentPoly.from_coeffs("x", [GaussianRational.coerce(c) for c in g])
    used = g.used_variables()
    if len(used) > 1:
        raise PolyError(f"g must be univariate, got {used}")
    return g, g.coeff_list()


def check_g_roots(g: LaurentPoly, tau: float = TAU_CIRCLE) -> float:
    """Smallest root modulus of g minus one; raises if a root lies inside the disc."""
    g, cs = _g_coeffs(g)
    if len(cs) <= 1:
        return math.inf
    rs = find_roots(g)
    if rs.trailing_zeros:
        raise SpecPreconditionError("g(0) = 0: g has a root at the origin")
    margin = float(np.min(np.abs(rs.roots))) - 1.0
    if margin < -tau:
        raise SpecPreconditionError(f"g has a root of modulus {1 + margin:.6g} < 1")
    return margin


def gamma_poly(g, k: int, lam=1, beta=0, alpha=1) -> np.ndarray:
    """Ascending complex coefficients of alpha*f + beta*g, f = lam x^k conj(g)(1/x)."""
    g, cs = _g_coeffs(g)
    lam = unit_complex(lam)
    d = len(cs) - 1
    if k < d:
        raise PolyError(f"k={k} must be at least deg(g)={d}")
    out = np.zeros(k + 1, complex)
    lamc = complex(lam)
    for j, c in enumerate(cs):
        out[k - j] += complex(alpha) * lamc * complex(c).conjugate()
        out[j] += complex(beta) * complex(c)
    return out


def classify_gamma(g, k: int, lam=1, beta=0, tau: float = TAU_CIRCLE) -> CircleClass:
    """Locate the roots of f + beta*g relative to the unit circle.

    ``k = deg(g)`` is accepted here (the root-location statement holds for
    ``k >= deg g``); the measure identities need ``k > deg g``.
    """
    g, cs = _g_coeffs(g)
    check_g_roots(g, tau)
    if cs[0] == 0:
        raise SpecPreconditionError("g(0) = 0")
    coeffs = gamma_poly(g, k, lam, beta)
    rs = find_roots(coeffs)
    mod = rs.moduli
    if mod.size == 0:
        return CircleClass(Location.ALL_ON, math.inf, mod)
    dev = mod - 1.0
    margin = float(np.min(np.abs(dev)))
    if np.all(np.abs(dev) <= tau):
        loc = Location.ALL_ON
    elif np.all(dev < -tau):
        loc = Location.ALL_INSIDE
    elif np.all(dev > tau):
        loc = Location.ALL_OUTSIDE
    else:
        loc = Location.MIXED
    return CircleClass(loc, margin, mod)


@dataclass
class AlphaBetaMeasure:
    value: float
    jensen_value: float
    discrepancy: float


def measure_alpha_f_plus_beta_g(g, k: int, lam=1, alpha=1, beta=0) -> AlphaBetaMeasure:
    """m(alpha f + beta g) = m(g) + log max(|alpha|, |beta|), with a Jensen cross-check."""
    if alpha == 0 and beta == 0:
        raise ValueError("alpha and beta must not both vanish")
    g, cs = _g_coeffs(g)
    if k <= len(cs) - 1:
        raise PolyError(f"k={k} must be strictly greater than deg(g)={len(cs) - 1}")
    check_g_roots(g)
    m_g = math.log(abs(complex(cs[0])))
    value = m_g + math.log(max(abs(complex(alpha)), abs(complex(beta))))
    jv = jensen_measure_1d(gamma_poly(g, k, lam, beta, alpha))
    return AlphaBetaMeasure(value, jv, abs(jv - value))


def f_of(g, k: int, lam=1) -> LaurentPoly:
    g, _ = _g_coeffs(g)
    return reciprocal_conjugate(g, k, lam)
