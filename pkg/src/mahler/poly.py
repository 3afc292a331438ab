"""Exact sparse Laurent polynomials and rational functions.

Coefficients are Gaussian rationals (``a/b + (c/d) i``) so that coefficient
conjugation, the reciprocal construction ``lam * x^k * conj(g)(1/x)`` and the
clearing of denominators after a substitution ``x -> f/g`` are all exact.
Floating point only enters through :func:`eval_complex` and the compiled
evaluators used by the quadrature code.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "GaussianRational",
    "LaurentPoly",
    "RationalFn",
    "PolyError",
    "PoleError",
    "I",
    "ONE",
    "ZERO",
    "arith",
    "conjugate_coeffs",
    "reciprocal_conjugate",
    "substitute_rational",
    "coeffs_in_var",
    "laurent_normalize",
    "eval_complex",
    "unit_complex",
]


class PolyError(ValueError):
    """Raised when an algebraic precondition is violated."""


class PoleError(ArithmeticError):
    """Raised when a rational function is evaluated at (numerically) a pole."""


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    raise TypeError(f"cannot convert {type(v).__name__} to an exact rational")


class GaussianRational:
    """Exact complex number with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def coerce(cls, v) -> "GaussianRational":
        if isinstance(v, GaussianRational):
            return v
        if isinstance(v, complex):
            raise TypeError("floating complex values are not exact; use GaussianRational")
        return cls(v, 0)

    def __repr__(self) -> str:
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self) -> str:
        return format_coeff(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    @staticmethod
    def _peer(other):
        if isinstance(other, (GaussianRational, int, Rational)):
            return GaussianRational.coerce(other)
        return None

    def __add__(self, other) -> "GaussianRational":
        o = self._peer(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other) -> "GaussianRational":
        o = self._peer(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other) -> "GaussianRational":
        o = self._peer(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other) -> "GaussianRational":
        o = self._peer(other)
        if o is None:
            return NotImplemented
        if self.im == 0 and o.im == 0:
            return GaussianRational(self.re * o.re, 0)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "GaussianRational":
        o = self._peer(other)
        if o is None:
            return NotImplemented
        n2 = o.abs2()
        if n2 == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        num = self * o.conjugate()
        return GaussianRational(num.re / n2, num.im / n2)

    def __rtruediv__(self, other) -> "GaussianRational":
        o = self._peer(other)
        return NotImplemented if o is None else o / self

    def __pow__(self, n: int) -> "GaussianRational":
        if not isinstance(n, int):
            raise TypeError("only integer powers are exact")
        if n < 0:
            return ONE / (self ** (-n))
        result, base = ONE, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def unit_complex(value) -> GaussianRational:
    """Return ``value`` as a Gaussian rational of modulus exactly one."""
    lam = GaussianRational.coerce(value)
    if lam.abs2() != 1:
        raise PolyError(f"|lambda|^2 = {lam.abs2()} != 1 (lambda must lie on the unit circle)")
    return lam


def _fmt_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_coeff(c: GaussianRational) -> str:
    """Text for a coefficient that re-parses to the same value."""
    if c.im == 0:
        return _fmt_rational(c.re)
    if c.re == 0:
        if c.im == 1:
            return "i"
        if c.im == -1:
            return "-i"
        return f"{_fmt_rational(c.im)}*i"
    sign = "+" if c.im > 0 else "-"
    im = abs(c.im)
    im_txt = "i" if im == 1 else f"{_fmt_rational(im)}*i"
    return f"({_fmt_rational(c.re)} {sign} {im_txt})"


Exponent = tuple


def _grlex_key(e: tuple) -> tuple:
    return (sum(e), e)


class LaurentPoly:
    """Sparse Laurent polynomial with exact Gaussian-rational coefficients.

    ``terms`` maps exponent tuples (one entry per name in ``variables``) to
    nonzero coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("variables", "_terms", "__dict__")

    def __init__(self, variables: Sequence[str] = (), terms: Mapping[tuple, object] | None = None):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise PolyError(f"duplicate variable names in {variables}")
        n = len(variables)
        clean: dict[tuple, GaussianRational] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != n:
                raise PolyError(f"exponent {e} has wrong length for variables {variables}")
            c = GaussianRational.coerce(c)
            if c:
                clean[e] = clean.get(e, ZERO) + c if e in clean else c
        self.variables = variables
        self._terms = {e: c for e, c in clean.items() if c}

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> "LaurentPoly":
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def var(cls, name: str) -> "LaurentPoly":
        return cls((name,), {(1,): 1})

    @classmethod
    def from_coeffs(cls, name: str, coeffs: Sequence) -> "LaurentPoly":
        """Univariate polynomial ``sum coeffs[j] * name^j`` (ascending order)."""
        return cls((name,), {(j,): c for j, c in enumerate(coeffs)})

    # -- basic protocol -----------------------------------------------
    @property
    def terms(self) -> Mapping[tuple, GaussianRational]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> GaussianRational:
        if not self.is_constant():
            raise PolyError("polynomial is not constant")
        return next(iter(self._terms.values()), ZERO)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def used_variables(self) -> tuple[str, ...]:
        return tuple(v for i, v in enumerate(self.variables)
                     if any(e[i] for e in self._terms))

    @cached_property
    def _canonical(self) -> tuple:
        used = sorted(self.used_variables())
        idx = [self.variables.index(v) for v in used]
        terms = frozenset((tuple(e[i] for i in idx), (c.re, c.im)) for e, c in self._terms.items())
        return (tuple(used), terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Rational, GaussianRational)):
            other = LaurentPoly.constant(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._canonical == other._canonical

    def __hash__(self) -> int:
        return hash(self._canonical)

    def __repr__(self) -> str:
        return f"LaurentPoly({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    # -- variable management ------------------------------------------
    def embed(self, variables: Sequence[str]) -> "LaurentPoly":
        """Re-express over ``variables`` (a superset of the used variables)."""
        variables = tuple(variables)
        if variables == self.variables:
            return self
        pos = {v: i for i, v in enumerate(variables)}
        for v in self.used_variables():
            if v not in pos:
                raise PolyError(f"variable {v!r} missing from target {variables}")
        src = [(i, pos[v]) for i, v in enumerate(self.variables) if v in pos]
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(variables)
            for i, j in src:
                ne[j] = e[i]
            out[tuple(ne)] = c
        return LaurentPoly(variables, out)

    def rename(self, mapping: Mapping[str, str]) -> "LaurentPoly":
        return LaurentPoly(tuple(mapping.get(v, v) for v in self.variables), self._terms)

    def _unify(self, other) -> tuple["LaurentPoly", "LaurentPoly"]:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.constant(other)
        names = list(self.variables)
        names += [v for v in other.variables if v not in names]
        return self.embed(names), other.embed(names)

    # -- arithmetic ---------------------------------------------------
    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.variables, {e: -c for e, c in self._terms.items()})

    def __add__(self, other) -> "LaurentPoly":
        a, b = self._unify(other)
        out = dict(a._terms)
        for e, c in b._terms.items():
            out[e] = out[e] + c if e in out else c
        return LaurentPoly(a.variables, out)

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        a, b = self._unify(other)
        return a + (-b)

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Rational, GaussianRational)):
            c = GaussianRational.coerce(other)
            return LaurentPoly(self.variables, {e: v * c for e, v in self._terms.items()})
        a, b = self._unify(other)
        out: dict[tuple, GaussianRational] = {}
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                p = c1 * c2
                out[e] = out[e] + p if e in out else p
        return LaurentPoly(a.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int):
            raise TypeError("polynomial exponent must be an integer")
        if n < 0:
            if not self.is_monomial():
                raise PolyError("negative power of a non-monomial is not a Laurent polynomial")
            (e, c), = self._terms.items()
            return LaurentPoly(self.variables, {tuple(v * n for v in e): c ** n})
        result = LaurentPoly.constant(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c) -> "LaurentPoly":
        return self * GaussianRational.coerce(c)

    def shift(self, exponent: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with the given exponent vector."""
        return LaurentPoly(self.variables, {tuple(a + b for a, b in zip(e, exponent)): c
                                            for e, c in self._terms.items()})

    # -- degree information -------------------------------------------
    def _index(self, v: str) -> int | None:
        try:
            return self.variables.index(v)
        except ValueError:
            return None

    def degree(self, v: str) -> int:
        i = self._index(v)
        if i is None or not self._terms:
            return 0
        return max(e[i] for e in self._terms)

    def min_degree(self, v: str) -> int:
        i = self._index(v)
        if i is None or not self._terms:
            return 0
        return min(e[i] for e in self._terms)

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=0)

    def is_polynomial(self) -> bool:
        return all(min(e, default=0) >= 0 for e in self._terms)

    def is_univariate(self) -> bool:
        return len(self.used_variables()) <= 1

    def coeff_list(self, v: str | None = None) -> list[GaussianRational]:
        """Ascending coefficient list of a univariate polynomial."""
        used = self.used_variables()
        if len(used) > 1:
            raise PolyError(f"expected a univariate polynomial, got variables {used}")
        if v is None:
            v = used[0] if used else (self.variables[0] if self.variables else "x")
        if not self.is_polynomial():
            raise PolyError("negative exponents present; use laurent_normalize first")
        d = self.degree(v)
        i = self._index(v)
        out = [ZERO] * (d + 1)
        for e, c in self._terms.items():
            out[e[i] if i is not None else 0] = c
        return out

    def complex_coeffs(self, v: str | None = None) -> np.ndarray:
        return np.array([complex(c) for c in self.coeff_list(v)], dtype=complex)

    def max_abs_coeff(self) -> float:
        return max((abs(complex(c)) for c in self._terms.values()), default=0.0)

    def evaluate_exact(self, values: Mapping[str, object]) -> "LaurentPoly":
        """Substitute exact constants for some variables."""
        out = LaurentPoly.constant(0, [v for v in self.variables if v not in values])
        keep = [i for i, v in enumerate(self.variables) if v not in values]
        for e, c in self._terms.items():
            coeff = c
            for i, v in enumerate(self.variables):
                if v in values and e[i]:
                    coeff = coeff * GaussianRational.coerce(values[v]) ** e[i]
            out = out + LaurentPoly(out.variables, {tuple(e[i] for i in keep): coeff})
        return out


def _as_poly(p) -> LaurentPoly:
    if isinstance(p, LaurentPoly):
        return p
    if isinstance(p, RationalFn):
        if not p.is_polynomial():
            raise PolyError("expected a polynomial, got a proper rational function")
        return p.num
    return LaurentPoly.constant(p)


@dataclass(frozen=True, eq=False)
class RationalFn:
    """Quotient ``num / den`` of Laurent polynomials, stored without gcd reduction."""

    num: LaurentPoly
    den: LaurentPoly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")

    @classmethod
    def of(cls, p) -> "RationalFn":
        if isinstance(p, RationalFn):
            return p
        p = _as_poly(p)
        return cls(p, LaurentPoly.constant(1))

    @property
    def variables(self) -> tuple[str, ...]:
        names = list(self.num.variables)
        names += [v for v in self.den.variables if v not in names]
        return tuple(names)

    def used_variables(self) -> tuple[str, ...]:
        used = set(self.num.used_variables()) | set(self.den.used_variables())
        return tuple(v for v in self.variables if v in used)

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def as_poly(self) -> LaurentPoly:
        """Numerator divided by a constant denominator."""
        if not self.den.is_constant():
            raise PolyError("denominator is not constant")
        return self.num * (ONE / self.den.constant_value())

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalFn):
            if isinstance(other, (LaurentPoly, int, Rational, GaussianRational)):
                other = RationalFn.of(other)
            else:
                return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return self.as_poly() == other.as_poly()
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self.is_polynomial():
            return hash(self.as_poly())
        return hash((self.num, self.den))

    def cross_equal(self, other: "RationalFn") -> bool:
        """Equality as functions: ``a/b == c/d`` iff ``a*d == b*c``."""
        return self.num * other.den == other.num * self.den

    def __repr__(self) -> str:
        return f"RationalFn({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den)

    def __add__(self, other) -> "RationalFn":
        o = RationalFn.of(other)
        if self.den == o.den:
            return RationalFn(self.num + o.num, self.den)
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFn":
        return self + (-RationalFn.of(other))

    def __rsub__(self, other) -> "RationalFn":
        return RationalFn.of(other) - self

    def __mul__(self, other) -> "RationalFn":
        o = RationalFn.of(other)
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFn":
        o = RationalFn.of(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        return RationalFn(self.num * o.den, self.den * o.num)

    def __pow__(self, n: int) -> "RationalFn":
        if n >= 0:
            return RationalFn(self.num ** n, self.den ** n)
        if self.num.is_zero():
            raise ZeroDivisionError("negative power of zero")
        return RationalFn(self.den ** (-n), self.num ** (-n))

    def rename(self, mapping: Mapping[str, str]) -> "RationalFn":
        return RationalFn(self.num.rename(mapping), self.den.rename(mapping))


# ---------------------------------------------------------------------------
# text form (graded-lex, canonical)


def _monomial_text(names: Sequence[str], e: Sequence[int]) -> str:
    parts = []
    for v, k in zip(names, e):
        if k == 0:
            continue
        parts.append(v if k == 1 else f"{v}^{k}")
    return "*".join(parts)


def poly_to_text(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    names = sorted(p.used_variables())
    idx = [p.variables.index(v) for v in names]
    rows = [(tuple(e[i] for i in idx), c) for e, c in p.items()]
    rows.sort(key=lambda r: _grlex_key(r[0]), reverse=True)
    out = []
    for k, (e, c) in enumerate(rows):
        mono = _monomial_text(names, e)
        neg = c.im == 0 and c.re < 0
        mag = -c if neg else c
        if not mono:
            body = format_coeff(mag)
        elif mag == ONE:
            body = mono
        else:
            body = f"{format_coeff(mag)}*{mono}"
        if k == 0:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


def to_text(p) -> str:
    """Canonical text: graded-lex order over alphabetically sorted variables."""
    if isinstance(p, LaurentPoly):
        return poly_to_text(p)
    if p.den == LaurentPoly.constant(1):
        return poly_to_text(p.num)
    return f"({poly_to_text(p.num)})/({poly_to_text(p.den)})"


# ---------------------------------------------------------------------------
# operations


def arith(a: LaurentPoly, b: LaurentPoly, op: str) -> LaurentPoly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def conjugate_coeffs(g):
    if isinstance(g, RationalFn):
        return RationalFn(conjugate_coeffs(g.num), conjugate_coeffs(g.den))
    return LaurentPoly(g.variables, {e: c.conjugate() for e, c in g.items()})


def _univariate_name(g: LaurentPoly, default: str = "x") -> str:
    used = g.used_variables()
    if len(used) > 1:
        raise PolyError(f"g must be univariate, got variables {used}")
    if used:
        return used[0]
    return g.variables[0] if g.variables else default


def reciprocal_conjugate(g: LaurentPoly, k: int, lam=1, var: str | None = None) -> LaurentPoly:
    """Return ``f(x) = lam * x^k * conj(g)(1/x) = lam * sum conj(g_j) x^(k-j)``."""
    g = _as_poly(g)
    v = var or _univariate_name(g)
    if g.used_variables() and g.used_variables() != (v,):
        raise PolyError(f"g must be univariate in {v!r}")
    if not g.is_polynomial():
        raise PolyError("g must be a polynomial (no negative exponents)")
    lam = unit_complex(lam)
    coeffs = g.coeff_list(v)
    if not coeffs or coeffs[0] == ZERO:
        raise PolyError("g(0) must be nonzero")
    d = len(coeffs) - 1
    if k <= d:
        raise PolyError(f"k={k} must be strictly greater than deg(g)={d}")
    return LaurentPoly((v,), {(k - j,): lam * c.conjugate() for j, c in enumerate(coeffs) if c})


def coeffs_in_var(P, v: str) -> list[LaurentPoly]:
    """Return ``(c_0, ..., c_k)`` with ``P = sum c_j v^j`` and ``c_k != 0``."""
    P = _as_poly(P)
    i = P._index(v)
    rest = tuple(n for n in P.variables if n != v)
    if i is None or P.degree(v) == 0 and P.min_degree(v) == 0:
        return [P.embed(rest) if i is not None else P]
    if P.min_degree(v) < 0:
        raise PolyError(f"negative powers of {v!r}; use laurent_normalize first")
    k = P.degree(v)
    buckets: list[dict] = [{} for _ in range(k + 1)]
    for e, c in P.items():
        buckets[e[i]][e[:i] + e[i + 1:]] = c
    return [LaurentPoly(rest, b) for b in buckets]


def laurent_normalize(P) -> tuple[LaurentPoly, tuple[int, ...]]:
    """Multiply by the monomial clearing all negative exponents."""
    P = _as_poly(P)
    if P.is_zero():
        raise PolyError("cannot normalize the zero polynomial")
    n = len(P.variables)
    shift = tuple(max(0, -min(e[i] for e in P._terms)) for i in range(n))
    return P.shift(shift), shift


def _poly_in_v(P: LaurentPoly, v: str, f: LaurentPoly, g: LaurentPoly) -> tuple[LaurentPoly, int]:
    cs = coeffs_in_var(P, v)
    ell = len(cs) - 1
    out = LaurentPoly.constant(0)
    fpow = LaurentPoly.constant(1)
    gpows = [LaurentPoly.constant(1)]
    for _ in range(ell):
        gpows.append(gpows[-1] * g)
    for j, c in enumerate(cs):
        if not c.is_zero():
            out = out + c * fpow * gpows[ell - j]
        fpow = fpow * f
    return out, ell


def substitute_rational(P, v: str, f, g) -> RationalFn:
    """Replace ``v`` by ``f(v)/g(v)`` and clear the powers of ``g``.

    With ``l_N``, ``l_D`` the ``v``-degrees of numerator and denominator,
    ``num' = sum num_j f^j g^(l_N - j)`` and ``den' = sum den_j f^j g^(l_D - j)``.
    The returned function is exactly ``P(f/g)``: the leftover power
    ``g^(l_D - l_N)`` is attached to whichever side keeps it polynomial.
    """
    P = RationalFn.of(P)
    f, g = _as_poly(f), _as_poly(g)
    for name, q in (("f", f), ("g", g)):
        if q.used_variables() not in ((), (v,)):
            raise PolyError(f"{name} must be univariate in {v!r}")
    num, den = P.num, P.den
    # clear negative powers of v from numerator and denominator together
    low = min(num.min_degree(v), den.min_degree(v))
    if low < 0 and v in P.variables:
        names = P.variables
        sh = tuple(-low if n == v else 0 for n in names)
        num, den = num.embed(names).shift(sh), den.embed(names).shift(sh)
    num2, ell_n = _poly_in_v(num, v, f, g)
    den2, ell_d = _poly_in_v(den, v, f, g)
    if ell_d > ell_n:
        num2 = num2 * g ** (ell_d - ell_n)
    elif ell_n > ell_d:
        den2 = den2 * g ** (ell_n - ell_d)
    return RationalFn(num2, den2)


def substitute_cleared(P, v: str, f, g) -> tuple[LaurentPoly, int]:
    """Numerator ``sum P_j f^j g^(l - j)`` of ``P(f/g)`` and ``l = deg_v P``."""
    return _poly_in_v(_as_poly(P), v, _as_poly(f), _as_poly(g))


# ---------------------------------------------------------------------------
# floating evaluation


def _horner(rows: list[tuple[tuple, complex]], order: list[int], point: Sequence[complex]) -> complex:
    if not order:
        return sum((c for _, c in rows), 0j)
    i, rest = order[0], order[1:]
    groups: dict[int, list] = {}
    for e, c in rows:
        groups.setdefault(e[i], []).append((e, c))
    lo, hi = min(groups), max(groups)
    z = point[i]
    acc = 0j
    for k in range(hi, lo - 1, -1):
        acc = acc * z
        if k in groups:
            acc = acc + _horner(groups[k], rest, point)
    return acc * z ** lo if lo else acc


def _eval_poly(p: LaurentPoly, values: Mapping[str, complex]) -> complex:
    if p.is_zero():
        return 0j
    names = sorted(p.used_variables())
    idx = [p.variables.index(v) for v in names]
    rows = [(tuple(e[i] for i in idx), complex(c)) for e, c in p.items()]
    rows.sort(key=lambda r: r[0])
    point = [complex(values[v]) for v in names]
    return _horner(rows, list(range(len(names))), point)


def eval_complex(P, point) -> complex:
    """Evaluate at a point given as ``{name: value}`` or in ``P.variables`` order.

    Variables are processed in sorted-name order with Horner's rule, so two
    structurally equal objects give bit-identical results.
    """
    P = RationalFn.of(P)
    if isinstance(point, Mapping):
        values = dict(point)
    else:
        point = list(point)
        if len(point) != len(P.variables):
            raise PolyError(f"point has {len(point)} entries, expected {len(P.variables)}")
        values = dict(zip(P.variables, point))
    den = _eval_poly(P.den, values)
    if abs(den) < 1e-300:
        raise PoleError(f"denominator vanishes at {values}")
    num = _eval_poly(P.num, values)
    return num if den == 1 else num / den


def scalar_map(f: LaurentPoly, g: LaurentPoly, t: complex) -> complex:
    """``f(t)/g(t)`` for univariate f and g."""
    name = _univariate_name(f + g)
    return eval_complex(RationalFn(f, g), {name: t})

