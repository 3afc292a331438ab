import math

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler.expr import parse, parse_poly
from mahler.measure import QuadConfig, measure, verify_identity
from mahler.poly import GaussianRational, LaurentPoly, PolyError, RationalFn, substitute_rational
from mahler.roots import jensen_measure_1d
from mahler.special import closed_form, named_constant
from mahler.transform import (
    G_NOT_UNIVARIATE,
    G_ROOT_INSIDE,
    G_ZERO_AT_ORIGIN,
    K_TOO_SMALL,
    LAMBDA_NOT_UNIT,
    InvalidSpecError,
    TransformSpec,
    apply_transform,
    base_expression,
    build_family,
    catalog_entry,
    identity_catalog,
    reciprocal_pair,
    spec_of,
    validate_spec,
    verify_invariance,
)

CONDON = "x+1+(x-1)*(y+z)"
CFG = QuadConfig(nodes_per_dim=512)


def spec(g, k, lam=1, var="x"):
    return TransformSpec.make(var, g, k, lam)


def test_validate_examples():
    rep = validate_spec(spec("x+2", 2))
    assert rep.valid and rep.margin == pytest.approx(1.0, abs=1e-12) and rep.degree == 1
    rep = validate_spec(spec("x+2", 1))
    assert not rep.valid and rep.codes == [K_TOO_SMALL]
    rep = validate_spec(spec("2*x+1", 2))
    assert not rep.valid and rep.codes == [G_ROOT_INSIDE]


def test_validate_reports_every_violation():
    rep = validate_spec(TransformSpec("x", parse_poly("x^2+x"), 1, GaussianRational(1, 1)))
    assert set(rep.codes) == {LAMBDA_NOT_UNIT, K_TOO_SMALL, G_ZERO_AT_ORIGIN}
    assert validate_spec(spec("x+y+2", 3)).codes == [G_NOT_UNIVARIATE]


def test_boundary_root_warns_only():
    rep = validate_spec(spec("x+1", 2))
    assert rep.valid and rep.warnings
    assert validate_spec(spec("x^2-2*x+2", 4)).warnings == []


def test_gaussian_lambda_accepted():
    assert validate_spec(spec("x+2", 2, "3/5+4/5*i")).valid
    assert validate_spec(spec("x+2", 2, "i")).valid


def test_make_renames_single_variable_g():
    s = TransformSpec.make("x1", "x+2", 2)
    assert s.g == parse_poly("x1+2")
    assert s.f() == parse_poly("2*x1^2+x1")


def test_apply_condon_gives_eq2():
    tr = apply_transform(parse(CONDON), spec("x+2", 2))
    assert tr.cleared_numerator == 2 * parse_poly("x^2+x+1+(x^2-1)*(y+z)")
    assert tr.denominator_power == 1
    assert tr.correction == pytest.approx(math.log(2))
    assert tr.P_tilde == RationalFn(tr.cleared_numerator, parse_poly("x+2"))


@pytest.mark.parametrize("key", ["eq2", "eq4", "eq5"])
def test_catalog_substitutions_are_exact(key):
    rec = catalog_entry(key)
    tr = apply_transform(base_expression(rec), spec_of(rec))
    assert tr.cleared_numerator == 2 * rec.lhs.as_poly()
    assert tr.correction == pytest.approx(math.log(2))


def test_identity_transform():
    tr = apply_transform(parse("x"), TransformSpec.make("x", "1", 1))
    assert tr.P_tilde == parse("x")
    assert tr.correction == 0


def test_l21_substitution_shape():
    tr = apply_transform(parse("1+(x-1)*y+(x+1)*z"), spec("x+2", 2))
    swapped = tr.cleared_numerator.rename({"y": "z", "z": "y"})
    assert swapped == 2 * parse("(x+2)/2+(x^2+x+1)*y+(x^2-1)*z").as_poly()
    assert tr.correction == pytest.approx(math.log(2))


def test_invalid_spec_raises():
    with pytest.raises(InvalidSpecError) as info:
        apply_transform(parse(CONDON), spec("x+2", 1))
    assert info.value.report.codes == [K_TOO_SMALL]
    with pytest.raises(PolyError):
        apply_transform(parse("y+2"), spec("x+2", 2))


def test_negative_powers_are_shifted_away():
    tr = apply_transform(parse("x^-1+y+3"), spec("x+2", 2))
    assert tr.monomial_shift == 1
    assert tr.cleared_numerator.min_degree("x") >= 0


@pytest.mark.parametrize("g, k", [("x+2", 2), ("x^2-2*x+2", 4), ("x^4+x+2", 5), ("x+3", 3)])
def test_cleared_degree_is_k_times_l(g, k):
    p = parse_poly("x^3*y + x^2 + y^2 + 2")
    tr = apply_transform(p, spec(g, k))
    assert tr.denominator_power == 3
    assert tr.cleared_numerator.degree("x") == k * 3


def test_invariance_condon():
    rep = verify_invariance(parse(CONDON), spec("x+2", 2), CFG)
    assert rep.passed
    assert rep.m_P.value == pytest.approx(0.68205, abs=1e-4)
    assert rep.m_P_tilde == pytest.approx(0.68205, abs=1e-4)


@settings(max_examples=20)
@given(st.lists(st.integers(-4, 4), min_size=2, max_size=5),
       st.sampled_from([("x+2", 2), ("x^2-2*x+2", 4), ("x^4+x+2", 5), ("3*x-4*i", 3)]))
def test_invariance_univariate_is_quadrature_free(cs, gk):
    if cs[-1] == 0 or all(c == 0 for c in cs[:-1]):
        return
    p = LaurentPoly.from_coeffs("x", cs)
    s = spec(*gk)
    rep = verify_invariance(p, s)
    tr = rep.transform
    lhs = jensen_measure_1d(p)
    rhs = jensen_measure_1d(tr.cleared_numerator) - tr.correction
    assert abs(lhs - rhs) < 1e-9
    assert abs(rep.m_P.value - lhs) < 1e-9 and abs(rep.m_P_tilde - lhs) < 1e-9


def test_invariance_composes():
    p = parse("x*y+x+y+3")
    t1 = apply_transform(p, spec("x+2", 2))
    t2 = apply_transform(t1.P_tilde, spec("y^2-2*y+2", 4, var="y"))
    a = measure(p, CFG)
    b = measure(t2.P_tilde, CFG)
    assert abs(a.value - b.value) <= 3 * (a.stderr + b.stderr)


def test_rational_invariance():
    rep = verify_invariance(parse("(x+y+1)/(x+3)"), spec("x^2-2*x+2", 4), CFG)
    assert rep.passed and rep.m_cleared_denominator is not None


def test_build_family_examples():
    x1, x2 = LaurentPoly.var("x1"), LaurentPoly.var("x2")
    R2 = build_family("R", 2)
    expect = parse("z") + RationalFn((1 - x1) * (1 - x2), (1 + x1) * (1 + x2))
    assert R2.cross_equal(expect)
    T1 = build_family("T", 1)
    q = RationalFn(1 - x1, 1 + x1)
    assert T1.cross_equal(1 + q * parse("x") + (1 - q) * parse("y"))
    with pytest.raises(ValueError):
        build_family("U", 2)
    with pytest.raises(ValueError):
        build_family("R", 0)


def _display_form(S):
    # z -> -z, then the displayed letters
    one = LaurentPoly.constant(1)
    num = substitute_rational(S.num, "z", -LaurentPoly.var("z"), one).num
    return num.rename({"x1": "x", "x2": "w", "x": "u"})


@pytest.mark.parametrize("key", ["zeta5_93", "zeta5_93a", "zeta5_93b"])
def test_family_substitution_matches_zeta5_display(key):
    rec = catalog_entry(key)
    S = build_family("S", 2, {"x1": rec.spec[1:3]})
    assert _display_form(S) == -2 * rec.lhs.as_poly()


def test_family_rejects_invalid_spec():
    with pytest.raises(InvalidSpecError):
        build_family("R", 1, {"x1": ("2*x1+1", 2)})


def test_reciprocal_pair_examples():
    x = LaurentPoly.var("x")
    assert reciprocal_pair(x + 1)[1] == x + 1
    assert reciprocal_pair(2 * x + 1)[1] == x + 2
    F, Fs = reciprocal_pair(parse(CONDON))
    X, Y, Z = sp.symbols("x y z")
    res = sp.factor(sp.resultant(_sym(F), _sym(Fs), Z))
    target = (X + 1) * (X * Y ** 2 - Y ** 2 + X * Y + Y - X + 1)
    ratio = sp.simplify(res / target)
    assert ratio.is_number and abs(complex(ratio)) == 1
    with pytest.raises(PolyError):
        reciprocal_pair(LaurentPoly.constant(0))


def _sym(p):
    return sp.sympify(str(p).replace("^", "**").replace("i", "I"))


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)), min_size=1, max_size=5))
def test_reciprocal_pair_is_involution_up_to_monomial(terms):
    data = {}
    for a, b, c in terms:
        if c:
            data[(a, b)] = c
    if not data:
        return
    F = LaurentPoly(("x", "y"), data)
    back = reciprocal_pair(reciprocal_pair(F)[1])[1]
    lo = [min(e[i] for e, _ in F.items()) for i in range(2)]
    assert back.shift(tuple(lo)) == F


def test_catalog_contents():
    cat = identity_catalog()
    assert len(cat) == 13
    keys = {r.key for r in cat}
    assert keys == {"condon", "eq2", "eq4", "eq5", "zeta5_93", "zeta5_93a", "zeta5_93b",
                    "l21", "l21_2", "l21_3", "l21_4", "smyth2", "smyth3"}
    status = {r.key: r.status for r in cat}
    assert {k for k, s in status.items() if s == "conjectural"} == {"l21", "l21_2", "l21_3", "l21_4"}
    eq4 = catalog_entry("eq4")
    assert eq4.spec == ("x", "x^2-2*x+2", 4, "1")
    with pytest.raises(KeyError):
        catalog_entry("eq3")
    assert all(r.to_dict()["key"] == r.key for r in cat)


@pytest.mark.parametrize("key", ["smyth2", "smyth3", "condon", "eq2", "eq4", "eq5"])
def test_proven_catalog_entries_pass(key):
    rec = catalog_entry(key)
    rep = verify_identity(rec.lhs, named_constant(rec.rhs).value, CFG)
    assert rep.passed, (rep.value, rep.difference, rep.tolerance)


@pytest.mark.parametrize("m", [1, 2])
def test_t_family_closed_form_against_quadrature(m):
    r = measure(build_family("T", m), QuadConfig(nodes_per_dim=1024, total_nodes=1 << 15))
    assert abs(r.value - closed_form("T", m)) <= max(3 * r.stderr, 1e-4)
