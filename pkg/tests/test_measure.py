import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mahler.expr import parse, parse_poly
from mahler.measure import (
    MeasureError,
    QuadConfig,
    estimate_error,
    measure,
    measure_direct,
    measure_jensen_reduced,
    measure_lattice,
    tree_sum,
    verify_identity,
)
from mahler.poly import GaussianRational, LaurentPoly, substitute_rational
from mahler.special import dirichlet_L, named_constant, zeta

from tests.strategies import laurent

SMALL = QuadConfig(nodes_per_dim=256, total_nodes=4099)


def test_constant_is_exact():
    for method in ("jensen", "direct", "qmc"):
        r = measure(parse("5"), QuadConfig(method=method))
        assert r.value == math.log(5)
        assert measure(parse("-1/3"), QuadConfig(method=method)).value == pytest.approx(-math.log(3))


def test_cyclotomic_is_zero():
    r = measure(parse("x+1"))
    assert abs(r.value) <= r.stderr + 1e-14
    r = measure_direct(parse("x+1"), QuadConfig(nodes=1 << 14))
    assert abs(r.value) <= 3 * r.stderr


def test_smyth_bivariate():
    ref = 3 * math.sqrt(3) / (4 * math.pi) * dirichlet_L(-3, 2)
    assert abs(ref - 0.3230659472) < 1e-10
    r = measure_jensen_reduced(parse("x+y+1"), QuadConfig(nodes_per_dim=1 << 14, reduction_variable="x"))
    assert abs(r.value - ref) < 1e-8
    assert r.reduction_variable == "x"


def test_smyth_trivariate_and_condon():
    r = measure(parse("x+y+z+1"), QuadConfig(nodes_per_dim=512))
    assert abs(r.value - 7 * zeta(3) / (2 * math.pi ** 2)) < max(3 * r.stderr, 1e-5)
    r = measure(parse("x+1+(x-1)*(y+z)"), QuadConfig(nodes_per_dim=512, reduction_variable="z"))
    assert abs(r.value - 28 * zeta(3) / (5 * math.pi ** 2)) < max(3 * r.stderr, 1e-5)


def test_zero_is_rejected():
    with pytest.raises(MeasureError):
        measure(parse("0"))


def test_rational_is_difference():
    a = measure(parse("(x+y+1)/(x+2)"), SMALL)
    b = measure(parse("x+y+1"), SMALL)
    assert a.value == pytest.approx(b.value - math.log(2), abs=1e-12)
    assert [p["part"] for p in a.parts] == ["numerator", "denominator"]
    assert measure(parse("(1-x)/(1+x)")).value == pytest.approx(0, abs=1e-12)


def test_estimate_error_examples():
    assert estimate_error([0.3, 0.3, 0.3]) == 0
    assert estimate_error([0, 1]) == pytest.approx(0.5)
    assert estimate_error([1.0, 0.75], "tensor") == 0.25
    with pytest.raises(ValueError):
        estimate_error([1.0])


def test_stderr_floor_is_positive():
    assert measure(parse("x+2")).stderr > 0


def test_stderr_decreases_when_shifts_double():
    p = parse("3+x+y+z")
    wins = 0
    for seed in range(40):
        a = measure_lattice(p, QuadConfig(total_nodes=64, shifts=32, seed=seed, reduction_variable="x"))
        b = measure_lattice(p, QuadConfig(total_nodes=64, shifts=64, seed=seed, reduction_variable="x"))
        wins += b.stderr < a.stderr
    assert wins >= 36


def test_tree_sum_is_order_fixed():
    vals = np.random.default_rng(1).normal(size=1001)
    assert tree_sum(vals) == tree_sum(list(vals))
    assert tree_sum(vals) == pytest.approx(vals.sum(), abs=1e-12)
    assert tree_sum([]) == 0


_MON = st.tuples(st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=15)
@given(laurent(names=("x", "y"), lo=0, hi=2, max_terms=4), _MON)
def test_monomial_invariance(p, a):
    if p.is_zero() or p.is_constant():
        return
    mono = LaurentPoly(("x", "y"), {a: 1})
    r1, r2 = measure(p, SMALL), measure(p * mono, SMALL)
    assert abs(r1.value - r2.value) <= 2 * (r1.stderr + r2.stderr) + 1e-12


_SMALL_POLYS = ["x+y+1", "x-2*y+3", "x*y+x+2", "y^2+x+1", "2*x+y-1", "x^2+y+3"]


@settings(max_examples=15)
@given(st.sampled_from(_SMALL_POLYS), st.sampled_from(_SMALL_POLYS))
def test_additivity(a, b):
    pa, pb = parse_poly(a), parse_poly(b)
    ra, rb, rab = measure(pa, SMALL), measure(pb, SMALL), measure(pa * pb, SMALL)
    assert abs(rab.value - ra.value - rb.value) <= 3 * (ra.stderr + rb.stderr + rab.stderr) + 1e-12


def _unit(a, b):
    r = math.isqrt(a * a + b * b)
    return GaussianRational(Fraction(a, r), Fraction(b, r))


@settings(max_examples=10)
@given(st.sampled_from(_SMALL_POLYS), st.sampled_from([(3, 4), (-5, 12), (0, 1), (-1, 0)]),
       st.sampled_from([(8, 15), (1, 0), (0, -1)]))
def test_rotation_invariance(src, zx, zy):
    p = parse_poly(src)
    one = LaurentPoly.constant(1)
    q = substitute_rational(p, "x", _unit(*zx) * LaurentPoly.var("x"), one)
    q = substitute_rational(q, "y", _unit(*zy) * LaurentPoly.var("y"), one)
    r1, r2 = measure(p, SMALL), measure(q, SMALL)
    assert abs(r1.value - r2.value) <= 3 * (r1.stderr + r2.stderr) + 1e-12


CORPUS = [
    "x+y+1", "x+y+2", "x*y+x+y+3", "x^2+y^2+x+y+1", "2*x-y+1",
    "x^2*y+y+3", "(1+x)*(1+y)+x*y", "x+y-3", "x^3+y+1", "x*y-2*x+y^2+2",
]


@pytest.mark.parametrize("src", CORPUS)
def test_direct_agrees_with_jensen(src):
    p = parse(src)
    d = measure_direct(p, QuadConfig(nodes_per_dim=1024))
    j = measure_jensen_reduced(p, QuadConfig(nodes_per_dim=4096))
    assert abs(d.value - j.value) <= 3 * (d.stderr + j.stderr)


@pytest.mark.parametrize("src", ["x+y+1", "x*y+x+2*y+3", "x^2+y+1", "x+1+(x-1)*(y+z)"])
def test_reduction_variable_independence(src):
    p = parse(src)
    cfg = QuadConfig(nodes_per_dim=512)
    rs = [measure(p, cfg.with_(reduction_variable=v)) for v in p.variables]
    for a in rs:
        for b in rs:
            assert abs(a.value - b.value) <= 3 * (a.stderr + b.stderr)


@pytest.mark.parametrize("method", ["jensen", "direct", "qmc"])
def test_determinism_and_thread_invariance(method):
    p = parse("x+1+(x-1)*(y+z)")
    cfg = QuadConfig(method=method, nodes=20000, seed=7)
    a = measure(p, cfg).to_dict()
    assert measure(p, cfg).to_dict() == a
    assert measure(p, cfg.with_(threads=4)).to_dict() == a


def test_seed_changes_lattice_estimate():
    p = parse("x+y+z+1")
    a = measure_lattice(p, QuadConfig(total_nodes=1000, seed=1))
    b = measure_lattice(p, QuadConfig(total_nodes=1000, seed=2))
    assert a.value != b.value


def test_config_validation():
    for bad in ({"method": "simpson"}, {"nodes_per_dim": 4}, {"shifts": 1}, {"seed": -1},
                {"threads": 0}, {"grid": "sparse"}, {"nodes": 3}):
        with pytest.raises(ValueError):
            QuadConfig(**bad)
    assert QuadConfig(method="qmc").method == "lattice_qmc"


def test_degenerate_nodes_are_counted_and_flagged():
    r = measure_direct(parse("x-y"), QuadConfig(nodes_per_dim=256))
    assert r.nodes_skipped > 0
    assert r.warnings and "degenerate" in r.warnings[0]
    assert r.stderr >= 0


def test_verify_identity_examples():
    condon = named_constant("condon").value
    cfg = QuadConfig(nodes_per_dim=1024)
    rep = verify_identity(parse("x+1+(x-1)*(y+z)"), condon, cfg)
    assert rep.passed and rep.tolerance >= 3 * rep.stderr
    rep = verify_identity(parse("x^2+x+1+(x^2-1)*(y+z)"), condon, cfg, abs_tol=1e-5)
    assert rep.passed
    rep = verify_identity(parse("x+y+1"), 0.5, cfg)
    assert not rep.passed
    with pytest.raises(ValueError):
        verify_identity(parse("x+y+1"), float("nan"))
