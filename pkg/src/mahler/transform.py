"""The measure-preserving substitution x -> f(x)/g(x) and the families built from it.

For ``g`` with no roots inside the unit disc, ``k > deg g`` and ``|lam| = 1``,
put ``f(x) = lam x^k conj(g)(1/x)``.  Replacing ``x`` by ``f/g`` in ``P``
leaves the Mahler measure unchanged.  With ``l = deg_x P`` the substituted
function is ``N / g^l`` where ``N = sum_j P_j f^j g^(l-j)`` is a polynomial,
so ``m(P) = m(N) - l m(g)``; this module keeps ``N``, ``l`` and the
correction ``l m(g) = l log|g(0)|`` separate and never divides silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .expr import parse, parse_poly
from .measure import MeasureResult, QuadConfig, measure
from .poly import (
    GaussianRational,
    LaurentPoly,
    PolyError,
    RationalFn,
    reciprocal_conjugate,
    substitute_cleared,
    substitute_rational,
)
from .roots import find_roots

__all__ = [
    "TransformSpec",
    "ValidationReport",
    "TransformResult",
    "InvalidSpecError",
    "IdentityRecord",
    "InvarianceReport",
    "validate_spec",
    "apply_transform",
    "verify_invariance",
    "build_family",
    "reciprocal_pair",
    "identity_catalog",
    "catalog_entry",
]

ROOT_MARGIN = 1e-12
BOUNDARY_BAND = 1e-9

# error codes, one per hypothesis
K_TOO_SMALL = "k_not_greater_than_degree"
G_ZERO_AT_ORIGIN = "g_vanishes_at_origin"
G_ROOT_INSIDE = "g_root_inside_unit_disc"
LAMBDA_NOT_UNIT = "lambda_not_unit"
G_NOT_UNIVARIATE = "g_not_univariate"
G_NOT_POLYNOMIAL = "g_not_polynomial"


class InvalidSpecError(PolyError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(f"{c}: {m}" for c, m in report.errors))


def _unit(value) -> GaussianRational:
    if isinstance(value, str):
        value = parse_poly(value).constant_value()
    return GaussianRational.coerce(value)


@dataclass(frozen=True)
class TransformSpec:
    """Data of one substitution: the variable, g, the degree k and the unit lam."""

    variable: str
    g: LaurentPoly
    k: int
    lam: GaussianRational = GaussianRational(1)

    @classmethod
    def make(cls, variable: str, g, k: int, lam=1) -> "TransformSpec":
        if isinstance(g, str):
            g = parse_poly(g)
        elif not isinstance(g, LaurentPoly):
            g = RationalFn.of(g).as_poly()
        used = g.used_variables()
        if len(used) == 1 and used[0] != variable:
            g = g.rename({used[0]: variable})
        return cls(variable, g, int(k), _unit(lam))

    def f(self) -> LaurentPoly:
        return reciprocal_conjugate(self.g, self.k, self.lam, var=self.variable)

    def describe(self) -> dict:
        return {"variable": self.variable, "g": str(self.g), "k": self.k, "lambda": str(self.lam)}


@dataclass
class ValidationReport:
    valid: bool
    errors: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    margin: float = math.inf
    degree: int = 0

    @property
    def codes(self) -> list[str]:
        return [c for c, _ in self.errors]


def validate_spec(spec: TransformSpec) -> ValidationReport:
    """Check every hypothesis of the substitution and report all failures."""
    errors: list[tuple[str, str]] = []
    warnings: list[str] = []
    g = spec.g
    margin = math.inf
    if spec.lam.abs2() != 1:
        errors.append((LAMBDA_NOT_UNIT, f"|lambda|^2 = {spec.lam.abs2()}"))
    used = g.used_variables()
    if len(used) > 1 or (used and used[0] != spec.variable):
        errors.append((G_NOT_UNIVARIATE, f"g uses {used}, expected only {spec.variable!r}"))
        return ValidationReport(False, errors, warnings, margin)
    if g.is_zero():
        errors.append((G_ZERO_AT_ORIGIN, "g is the zero polynomial"))
        return ValidationReport(False, errors, warnings, margin)
    if not g.is_polynomial():
        errors.append((G_NOT_POLYNOMIAL, "g has negative exponents"))
        return ValidationReport(False, errors, warnings, margin)
    coeffs = g.coeff_list(spec.variable)
    d = len(coeffs) - 1
    if spec.k <= d:
        errors.append((K_TOO_SMALL, f"k = {spec.k} must exceed deg(g) = {d}"))
    if coeffs[0] == 0:
        errors.append((G_ZERO_AT_ORIGIN, "g(0) = 0"))
    elif d >= 1:
        rs = find_roots(g)
        mods = np.abs(rs.roots)
        margin = float(mods.min() - 1.0)
        if margin < -ROOT_MARGIN:
            errors.append((G_ROOT_INSIDE, f"root of modulus {mods.min():.6g} < 1"))
        elif margin < BOUNDARY_BAND:
            warnings.append(f"g has a root on the unit circle (modulus {mods.min():.15g})")
    return ValidationReport(not errors, errors, warnings, margin, d)


@dataclass
class TransformResult:
    P_tilde: RationalFn
    cleared_numerator: LaurentPoly
    denominator_power: int
    correction: float
    cleared_denominator: LaurentPoly
    denominator_side_power: int
    m_g: float
    f: LaurentPoly
    spec: TransformSpec
    monomial_shift: int = 0

    def measure_of_tilde(self, num: float, den: float = 0.0) -> float:
        """m(P~) from measures of the cleared numerator and denominator."""
        return num - den - self.correction

    def to_dict(self) -> dict:
        return {
            "P_tilde": str(self.P_tilde),
            "cleared_numerator": str(self.cleared_numerator),
            "cleared_denominator": str(self.cleared_denominator),
            "denominator_power": self.denominator_power,
            "denominator_side_power": self.denominator_side_power,
            "correction": self.correction,
            "m_g": self.m_g,
            "f": str(self.f),
            "spec": self.spec.describe(),
        }


def _m_g(g: LaurentPoly) -> float:
    # all roots on or outside the circle: Jensen gives log|g(0)|
    return math.log(abs(complex(g.coeff_list()[0])))


def apply_transform(P, spec: TransformSpec) -> TransformResult:
    """Substitute ``spec.variable -> f/g`` in ``P`` and record the bookkeeping."""
    report = validate_spec(spec)
    if not report.valid:
        raise InvalidSpecError(report)
    P = RationalFn.of(P)
    v = spec.variable
    if v not in P.used_variables():
        raise PolyError(f"variable {v!r} does not occur in P")
    f = spec.f()
    g = spec.g
    num, den = P.num, P.den
    low = min(num.min_degree(v) if v in num.variables else 0,
              den.min_degree(v) if v in den.variables else 0)
    shift = 0
    if low < 0:
        # monomial factor in v: m(v^a) = 0 and m((f/g)^a) = 0, so drop it
        shift = -low
        names = P.variables
        sh = tuple(shift if n == v else 0 for n in names)
        num, den = num.embed(names).shift(sh), den.embed(names).shift(sh)
    num_c, ell = substitute_cleared(num, v, f, g)
    den_c, ell_d = substitute_cleared(den, v, f, g)
    m_g = _m_g(g)
    return TransformResult(
        P_tilde=substitute_rational(P, v, f, g),
        cleared_numerator=num_c,
        denominator_power=ell,
        correction=(ell - ell_d) * m_g,
        cleared_denominator=den_c,
        denominator_side_power=ell_d,
        m_g=m_g,
        f=f,
        spec=spec,
        monomial_shift=shift,
    )


@dataclass
class InvarianceReport:
    m_P: MeasureResult
    m_cleared_numerator: MeasureResult
    m_cleared_denominator: MeasureResult | None
    m_P_tilde: float
    stderr_tilde: float
    difference: float
    tolerance: float
    passed: bool
    transform: TransformResult

    def to_dict(self) -> dict:
        return {
            "m_P": self.m_P.to_dict(),
            "m_cleared_numerator": self.m_cleared_numerator.to_dict(),
            "m_cleared_denominator": None if self.m_cleared_denominator is None
            else self.m_cleared_denominator.to_dict(),
            "m_P_tilde": self.m_P_tilde,
            "stderr_tilde": self.stderr_tilde,
            "difference": self.difference,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "transform": self.transform.to_dict(),
        }


def verify_invariance(P, spec: TransformSpec, cfg: QuadConfig | None = None) -> InvarianceReport:
    """Measure both sides of m(P) = m(P~) with independent runs."""
    cfg = cfg or QuadConfig()
    tr = apply_transform(P, spec)
    P = RationalFn.of(P)
    left = measure(P, cfg)
    cfg2 = cfg.with_(seed=(int(cfg.seed) + 1) % 2 ** 64)
    right_num = measure(tr.cleared_numerator, cfg2)
    right_den = None if tr.cleared_denominator.is_constant() else measure(tr.cleared_denominator, cfg2)
    den_val = 0.0
    den_err = 0.0
    if right_den is not None:
        den_val, den_err = right_den.value, right_den.stderr
    else:
        den_val = math.log(abs(complex(tr.cleared_denominator.constant_value())))
    tilde = tr.measure_of_tilde(right_num.value, den_val)
    err_t = right_num.stderr + den_err
    diff = abs(left.value - tilde)
    tol = max(3.0 * (left.stderr + err_t), cfg.abs_tol)
    return InvarianceReport(left, right_num, right_den, tilde, err_t, diff, tol, diff <= tol, tr)


# ---------------------------------------------------------------------------
# rational-function families


def _x(j: int) -> str:
    return f"x{j}"


def _cayley_product(m: int) -> RationalFn:
    num = LaurentPoly.constant(1)
    den = LaurentPoly.constant(1)
    for j in range(1, m + 1):
        xj = LaurentPoly.var(_x(j))
        num = num * (1 - xj)
        den = den * (1 + xj)
    return RationalFn(num, den)


def build_family(family: str, m: int, per_variable_specs: Mapping[str, object] | None = None) -> RationalFn:
    """R_m, S_m or T_m in variables x1..xm (and x, y, z), with optional substitutions.

    ``per_variable_specs`` maps a variable name to a :class:`TransformSpec` or
    to a tuple ``(g, k, lam)``; each substitution is applied to numerator and
    denominator separately.
    """
    family = str(family).upper()
    if m < 1:
        raise ValueError("m must be at least 1")
    Q = _cayley_product(m)
    x, y, z = (RationalFn.of(LaurentPoly.var(n)) for n in "xyz")
    if family == "R":
        F = z + Q
    elif family == "S":
        F = (1 + x) * z + Q * (1 + y)
    elif family == "T":
        F = 1 + Q * x + (1 - Q) * y
    else:
        raise ValueError(f"unknown family {family!r}; use R, S or T")
    for var, sp in (per_variable_specs or {}).items():
        if not isinstance(sp, TransformSpec):
            g, k, *rest = sp
            sp = TransformSpec.make(var, g, k, rest[0] if rest else 1)
        rep = validate_spec(sp)
        if not rep.valid:
            raise InvalidSpecError(rep)
        F = substitute_rational(F, var, sp.f(), sp.g)
    return F


def reciprocal_pair(F) -> tuple[LaurentPoly, LaurentPoly]:
    """(F, F*) with F* = prod y_i^(deg_i F) * conj(F)(1/y_1, ..., 1/y_n)."""
    F = F if isinstance(F, LaurentPoly) else RationalFn.of(F).as_poly()
    if F.is_zero():
        raise PolyError("F must be nonzero")
    n = len(F.variables)
    top = [max(e[i] for e, _ in F.items()) for i in range(n)]
    star = LaurentPoly(F.variables, {tuple(t - a for t, a in zip(top, e)): c.conjugate()
                                     for e, c in F.items()})
    return F, star


# ---------------------------------------------------------------------------
# catalog


@dataclass(frozen=True)
class IdentityRecord:
    key: str
    expression: str
    rhs: str            # named-constant key
    status: str         # proven | conjectural
    derived_from: str | None = None
    spec: tuple | None = None   # (variable, g, k, lam) applied to derived_from

    @property
    def lhs(self) -> RationalFn:
        return parse(self.expression)

    def to_dict(self) -> dict:
        return {"key": self.key, "expression": self.expression, "rhs": self.rhs,
                "status": self.status, "derived_from": self.derived_from,
                "spec": list(self.spec) if self.spec else None}


_CONDON = "x+1+(x-1)*(y+z)"
_L21 = "1+(x-1)*y+(x+1)*z"
_SUBST = {2: ("x+2", 2), 4: ("x^2-2*x+2", 4), 5: ("x^4+x+2", 5)}

_CATALOG = (
    IdentityRecord("smyth2", "x+y+1", "smyth2", "proven"),
    IdentityRecord("smyth3", "x+y+z+1", "smyth3", "proven"),
    IdentityRecord("condon", _CONDON, "condon", "proven"),
    IdentityRecord("l21", _L21, "l21_conjecture_rhs", "conjectural"),
    IdentityRecord("eq2", "x^2+x+1+(x^2-1)*(y+z)", "condon", "proven",
                   "condon", ("x", "x+2", 2, "1")),
    IdentityRecord("eq4", "x^4-x^3+x^2-x+1+(x^4-x^3+x-1)*(y+z)", "condon", "proven",
                   "condon", ("x", "x^2-2*x+2", 4, "1")),
    IdentityRecord("eq5", "x^5+x^4+x+1+(x^5-1)*(y+z)", "condon", "proven",
                   "condon", ("x", "x^4+x+2", 5, "1")),
    IdentityRecord("zeta5_93", "(x^2+x+1)*(1+w)*(1+u)*z+(x^2-1)*(1-w)*(1+y)", "zeta5_93",
                   "proven", "S_2", ("x1", "x1+2", 2, "1")),
    IdentityRecord("zeta5_93a", "(x^4-x^3+x^2-x+1)*(1+w)*(1+u)*z+(x^4-x^3+x-1)*(1-w)*(1+y)",
                   "zeta5_93", "proven", "S_2", ("x1", "x1^2-2*x1+2", 4, "1")),
    IdentityRecord("zeta5_93b", "(x^5+x^4+x+1)*(1+w)*(1+u)*z+(x^5-1)*(1-w)*(1+y)", "zeta5_93",
                   "proven", "S_2", ("x1", "x1^4+x1+2", 5, "1")),
    IdentityRecord("l21_2", "(x+2)/2+(x^2+x+1)*y+(x^2-1)*z", "l21_conjecture_rhs",
                   "conjectural", "l21", ("x", "x+2", 2, "1")),
    IdentityRecord("l21_3", "(x^2-2*x+2)/2+(x^4-x^3+x^2-x+1)*y+(x^4-x^3+x-1)*z",
                   "l21_conjecture_rhs", "conjectural", "l21", ("x", "x^2-2*x+2", 4, "1")),
    IdentityRecord("l21_4", "(x^4+x+2)/2+(x^5+x^4+x+1)*y+(x^5-1)*z", "l21_conjecture_rhs",
                   "conjectural", "l21", ("x", "x^4+x+2", 5, "1")),
)


def identity_catalog() -> tuple[IdentityRecord, ...]:
    return _CATALOG


def catalog_entry(key: str) -> IdentityRecord:
    for rec in _CATALOG:
        if rec.key == key:
            return rec
    raise KeyError(f"unknown identity {key!r}; known: {', '.join(r.key for r in _CATALOG)}")


def spec_of(record: IdentityRecord) -> TransformSpec | None:
    if record.spec is None:
        return None
    var, g, k, lam = record.spec
    return TransformSpec.make(var, g, k, lam)


def base_expression(record: IdentityRecord) -> RationalFn | None:
    """The function the record was derived from (for S_2, the family member)."""
    if record.derived_from is None:
        return None
    if record.derived_from == "S_2":
        return build_family("S", 2)
    return catalog_entry(record.derived_from).lhs

