"""Zeta and Dirichlet L-values, Bernoulli numbers and closed-form measures.

Closed forms for the measures of the rational-function families

    R_m = z + Q,   S_m = (1 + x) z + Q (1 + y),   T_m = 1 + Q x + (1 - Q) y,
    Q = prod_j (1 - x_j) / (1 + x_j),

are sums over ``h`` of elementary symmetric functions of even or odd squares
times the coefficient functions ``A .. F`` below.  Exact rational parts
(Bernoulli numbers, binomials, symmetric functions) stay in ``Fraction``
until the final multiplication with floating zeta and L values.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "zeta",
    "eta",
    "dirichlet_L",
    "hurwitz_zeta",
    "bernoulli",
    "elem_sym",
    "even_squares",
    "odd_squares",
    "coefficient",
    "closed_form",
    "NamedConstant",
    "named_constant",
    "CATALOG_KEYS",
    "catalan",
]

_CVZ_TERMS = 40


def _alternating_sum(term, n: int = _CVZ_TERMS) -> float:
    """Cohen-Villegas-Zagier acceleration of sum_{k>=0} (-1)^k term(k)."""
    d = (3.0 + math.sqrt(8.0)) ** n
    d = (d + 1.0 / d) / 2.0
    b = -1.0
    c = -d
    s = 0.0
    for k in range(n):
        c = b - c
        s += c * term(k)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return s / d


def eta(s: int) -> float:
    """Dirichlet eta function sum (-1)^k / (k+1)^s."""
    return _alternating_sum(lambda k: (k + 1.0) ** (-s))


def zeta(s: int) -> float:
    """Riemann zeta at an integer s >= 2."""
    if int(s) != s or s < 2:
        raise ValueError(f"zeta is implemented for integers s >= 2, got {s}")
    s = int(s)
    if s % 2 == 0:
        b = abs(bernoulli(s))
        # |B_2n| (2 pi)^(2n) / (2 (2n)!)
        return float(b * Fraction(2 ** (s - 1), math.factorial(s))) * math.pi ** s
    if s > 60:
        return 1.0 + 2.0 ** (-s) + 3.0 ** (-s)
    return eta(s) / (1.0 - 2.0 ** (1 - s))


@lru_cache(maxsize=None)
def hurwitz_zeta(s: int, a: Fraction | float, shift: int = 15, terms: int = 20) -> float:
    """Hurwitz zeta(s, a) by Euler-Maclaurin after ``shift`` explicit terms."""
    if s < 2:
        raise ValueError("hurwitz_zeta requires s >= 2")
    a = float(a)
    total = math.fsum((k + a) ** (-s) for k in range(shift))
    x = shift + a
    tail = [x ** (1 - s) / (s - 1), 0.5 * x ** (-s)]
    # B_2j / (2j)! * s (s+1) ... (s+2j-2) * x^(-s-2j+1)
    rising = float(s)
    for j in range(1, terms + 1):
        if j > 1:
            rising *= (s + 2 * j - 3) * (s + 2 * j - 2)
        tail.append(float(bernoulli(2 * j) / math.factorial(2 * j)) * rising * x ** (-s - 2 * j + 1))
    return total + math.fsum(tail)


def dirichlet_L(character: str | int, s: int) -> float:
    """L(chi, s) for the odd quadratic characters of conductor 3 and 4."""
    key = str(character).replace("chi", "").replace("_", "").replace("−", "-")
    if int(s) != s or s < 2:
        raise ValueError(f"dirichlet_L is implemented for integers s >= 2, got {s}")
    s = int(s)
    if key in ("-4", "4"):
        return _alternating_sum(lambda k: (2.0 * k + 1.0) ** (-s))
    if key in ("-3", "3"):
        return 3.0 ** (-s) * (hurwitz_zeta(s, Fraction(1, 3)) - hurwitz_zeta(s, Fraction(2, 3)))
    raise ValueError(f"unsupported character {character!r}; use 'chi_-3' or 'chi_-4'")


def catalan() -> float:
    return dirichlet_L(-4, 2)


# ---------------------------------------------------------------------------
# exact combinatorics

BERNOULLI_MAX = 200
_bern_lock = threading.Lock()
_bern: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """B_n with B_1 = -1/2, from sum_{k<=n} C(n+1, k) B_k = 0."""
    if n < 0 or n > BERNOULLI_MAX:
        raise ValueError(f"bernoulli(n) requires 0 <= n <= {BERNOULLI_MAX}, got {n}")
    if n < len(_bern):
        return _bern[n]
    with _bern_lock:
        table = list(_bern)
        for m in range(len(table), n + 1):
            if m > 1 and m % 2 == 1:
                table.append(Fraction(0))
                continue
            acc = sum((math.comb(m + 1, k) * table[k] for k in range(m)), Fraction(0))
            table.append(-acc / (m + 1))
        if len(table) > len(_bern):
            _bern[:] = table
        return _bern[n]


def elem_sym(ell: int, args) -> int | Fraction:
    """Elementary symmetric polynomial s_ell(args); 1 for ell = 0, 0 past len(args)."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    args = list(args)
    if ell > len(args):
        return 0
    e = [1] + [0] * ell
    for a in args:
        for j in range(ell, 0, -1):
            e[j] += e[j - 1] * a
    return e[ell]


def even_squares(n: int) -> tuple[int, ...]:
    """(2^2, 4^2, ..., (2n-2)^2)."""
    return tuple((2 * j) ** 2 for j in range(1, n))


def odd_squares(n: int) -> tuple[int, ...]:
    """(1^2, 3^2, ..., (2n-1)^2)."""
    return tuple((2 * j - 1) ** 2 for j in range(1, n + 1))


def _damp(t: int) -> Fraction:
    """1 - 2^-t."""
    return 1 - Fraction(1, 2 ** t)


def _A(h: int) -> float:
    return float(math.factorial(2 * h) * _damp(2 * h + 1)) * zeta(2 * h + 1)


def _B(h: int) -> float:
    return math.factorial(2 * h + 1) * dirichlet_L(-4, 2 * h + 2)


def _C(h: int) -> float:
    parts = []
    for l in range(1, h + 1):
        q = (Fraction(math.comb(2 * h, 2 * l) * (-1) ** (h - l), 4 * h) * bernoulli(2 * (h - l))
             * math.factorial(2 * l + 2) * _damp(2 * l + 3))
        parts.append(float(q) * math.pi ** (2 * h - 2 * l) * zeta(2 * l + 3))
    return math.fsum(parts)


def _D(h: int) -> float:
    parts = []
    for l in range(0, h + 1):
        q = (Fraction(math.comb(2 * h + 1, 2 * l + 1) * (-1) ** (h - l), 2 * (2 * h + 1))
             * bernoulli(2 * (h - l)) * math.factorial(2 * l + 3))
        parts.append(float(q) * math.pi ** (2 * h - 2 * l) * dirichlet_L(-4, 2 * l + 4))
    return math.fsum(parts)


def _two_power_minus_one(t: int) -> Fraction:
    """2^t - 1 for possibly negative t."""
    return Fraction(2) ** t - 1


def _E(h: int) -> float:
    parts = [float(Fraction(math.factorial(2 * h), 2) * _damp(2 * h + 1)) * zeta(2 * h + 1)]
    for l in range(1, h + 1):
        q = (_two_power_minus_one(2 * (h - l) - 1) * math.comb(2 * h, 2 * l)
             * Fraction((-1) ** (h - l + 1), 2 * h) * bernoulli(2 * (h - l))
             * math.factorial(2 * l) * _damp(2 * l + 1))
        parts.append(float(q) * math.pi ** (2 * h - 2 * l) * zeta(2 * l + 1))
    return math.fsum(parts)


def _F(h: int, n: int) -> float:
    parts = [float(Fraction(math.factorial(2 * h + 2), 2) * _damp(2 * h + 3)) * zeta(2 * h + 3)]
    if n:
        parts.append(float(Fraction(n * n, 2) * math.factorial(2 * h) * _damp(2 * h + 1))
                     * math.pi ** 2 * zeta(2 * h + 1))
    for l in range(1, h + 1):
        q = (n * (2 * n + 1) * _two_power_minus_one(2 * (h - l) - 1) * math.comb(2 * h, 2 * l)
             * Fraction((-1) ** (h - l + 1), 4 * h) * bernoulli(2 * (h - l))
             * math.factorial(2 * l) * _damp(2 * l + 1))
        parts.append(float(q) * math.pi ** (2 * h + 2 - 2 * l) * zeta(2 * l + 1))
    return math.fsum(parts)


_COEFF = {"A": (_A, 1), "B": (_B, 0), "C": (_C, 1), "D": (_D, 0), "E": (_E, 1), "F": (_F, 1)}
_ALIASES = {"𝒜": "A", "ℬ": "B", "𝒞": "C", "𝒟": "D", "ℰ": "E", "ℱ": "F"}


def coefficient(kind: str, h: int, n: int = 0) -> float:
    """Coefficient functions A(h) .. F(h); only F depends on ``n``."""
    kind = _ALIASES.get(kind, str(kind).upper())
    if kind not in _COEFF:
        raise ValueError(f"unknown coefficient kind {kind!r}")
    fn, hmin = _COEFF[kind]
    if h < hmin and not (kind == "F" and h == 0 and n == 0):
        raise ValueError(f"coefficient {kind} requires h >= {hmin}, got {h}")
    if n < 0:
        raise ValueError("n must be non-negative")
    return fn(h, n) if kind == "F" else fn(h)


CLOSED_FORM_MAX = 20


def closed_form(family: str, m: int) -> float:
    """Mahler measure (nats) of R_m, S_m or T_m from the closed-form sums."""
    family = str(family).upper()
    if family not in ("R", "S", "T"):
        raise ValueError(f"unknown family {family!r}; use R, S or T")
    if not 1 <= m <= CLOSED_FORM_MAX:
        raise ValueError(f"m must be in 1..{CLOSED_FORM_MAX}, got {m}")
    n, odd = divmod(m, 2)
    two_pi = 2.0 / math.pi
    parts: list[float] = []
    if family == "T":
        parts.append(math.log(2.0) / 2.0)
    if not odd:
        sq = even_squares(n)
        denom = math.factorial(2 * n - 1)
        for h in range(1, n + 1):
            w = float(Fraction(elem_sym(n - h, sq), denom))
            if family == "R":
                parts.append(w * two_pi ** (2 * h) * _A(h))
            elif family == "S":
                parts.append(w * two_pi ** (2 * h + 2) * _C(h))
            else:
                parts.append(w * two_pi ** (2 * h) * _E(h))
    else:
        if family == "T":
            sq = even_squares(n)
            denom = math.factorial(2 * n + 1)
            # the h = 0 weight s_n of n - 1 squares vanishes unless n = 0 (T_1)
            for h in range(0 if n == 0 else 1, n + 1):
                w = float(Fraction(elem_sym(n - h, sq), denom))
                parts.append(w * two_pi ** (2 * h + 2) * _F(h, n))
        else:
            sq = odd_squares(n)
            denom = math.factorial(2 * n)
            for h in range(0, n + 1):
                w = float(Fraction(elem_sym(n - h, sq), denom))
                if family == "R":
                    parts.append(w * two_pi ** (2 * h + 1) * _B(h))
                else:
                    parts.append(w * two_pi ** (2 * h + 3) * _D(h))
    return math.fsum(parts)


# ---------------------------------------------------------------------------
# named constants


@dataclass(frozen=True)
class NamedConstant:
    key: str
    value: float
    formula: str
    provenance: str


def _smyth2() -> float:
    return 3.0 * math.sqrt(3.0) / (4.0 * math.pi) * dirichlet_L(-3, 2)


def _smyth3() -> float:
    return 7.0 * zeta(3) / (2.0 * math.pi ** 2)


def _condon() -> float:
    return 28.0 * zeta(3) / (5.0 * math.pi ** 2)


def _zeta5_93() -> float:
    return 93.0 * zeta(5) / math.pi ** 4


_CONSTANTS = {
    "smyth2": (_smyth2, "3*sqrt(3)/(4*pi) * L(chi_-3, 2)", "m(x + y + 1)"),
    "smyth3": (_smyth3, "7*zeta(3)/(2*pi^2)", "m(x + y + z + 1)"),
    "condon": (_condon, "28*zeta(3)/(5*pi^2)", "m(x + 1 + (x - 1)(y + z))"),
    "zeta5_93": (_zeta5_93, "93*zeta(5)/pi^4", "m(S_2) and its substituted forms"),
}

CATALOG_KEYS = tuple(_CONSTANTS) + ("l21_conjecture_rhs",)


def named_constant(key: str, user_value: float | None = None) -> NamedConstant:
    """Catalog constant computed from the series at call time.

    ``l21_conjecture_rhs`` has no internal formula: ``user_value`` is the
    externally computed L'(E_21a1, -1) and the constant is 5/4 of it.
    """
    if key == "l21_conjecture_rhs":
        if user_value is None or not math.isfinite(user_value):
            raise ValueError("l21_conjecture_rhs needs a finite user-supplied L'(E_21a1, -1)")
        return NamedConstant(key, 1.25 * float(user_value), "5/4 * L'(E_21a1, -1) [user value]",
                             "m(1 + (x - 1) y + (x + 1) z), conjectural")
    if key not in _CONSTANTS:
        raise KeyError(f"unknown constant {key!r}; known: {', '.join(CATALOG_KEYS)}")
    fn, formula, prov = _CONSTANTS[key]
    return NamedConstant(key, fn(), formula, prov)
