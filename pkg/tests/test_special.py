import math
import threading
from fractions import Fraction

import mpmath as mp
import pytest

from mahler import special
from mahler.special import (
    CATALOG_KEYS,
    bernoulli,
    catalan,
    closed_form,
    coefficient,
    dirichlet_L,
    elem_sym,
    even_squares,
    hurwitz_zeta,
    named_constant,
    odd_squares,
    zeta,
)

from tests.oracles import regression_constants

REG = regression_constants()


def test_zeta_examples():
    assert zeta(2) == pytest.approx(math.pi ** 2 / 6, rel=1e-15)
    assert abs(zeta(3) - 1.2020569032) < 1e-10
    assert abs(zeta(5) - 1.0369277551) < 1e-10
    with pytest.raises(ValueError):
        zeta(1)


@pytest.mark.parametrize("s", range(2, 31))
def test_zeta_against_mpmath(s):
    assert zeta(s) == pytest.approx(float(mp.zeta(s)), rel=1e-15)


@pytest.mark.parametrize("n", range(1, 13))
def test_even_zeta_bernoulli_form(n):
    ref = math.pi ** (2 * n) * abs(float(bernoulli(2 * n))) * 2 ** (2 * n - 1) / math.factorial(2 * n)
    assert zeta(2 * n) == pytest.approx(ref, rel=1e-14)


def test_dirichlet_examples():
    assert abs(dirichlet_L(-4, 2) - 0.9159655942) < 1e-10
    assert abs(dirichlet_L("chi_-3", 2) - 0.7813024129) < 1e-10
    assert abs(dirichlet_L(-4, 4) - 0.9889445517) < 1e-10
    assert catalan() == dirichlet_L(-4, 2)
    with pytest.raises(ValueError):
        dirichlet_L(-5, 2)
    with pytest.raises(ValueError):
        dirichlet_L(-4, 1)


@pytest.mark.parametrize("s", range(2, 21))
def test_dirichlet_against_mpmath(s):
    assert dirichlet_L(-4, s) == pytest.approx(float(mp.dirichlet(s, [0, 1, 0, -1])), abs=1e-14)
    assert dirichlet_L(-3, s) == pytest.approx(float(mp.dirichlet(s, [0, 1, -1])), abs=1e-14)


@pytest.mark.parametrize("s, a", [(2, Fraction(1, 3)), (3, Fraction(2, 3)), (7, 0.25), (4, 1)])
def test_hurwitz_against_mpmath(s, a):
    assert hurwitz_zeta(s, a) == pytest.approx(float(mp.zeta(s, mp.mpf(float(a)))), rel=1e-14)


def test_bernoulli_examples():
    assert bernoulli(0) == 1
    assert bernoulli(1) == Fraction(-1, 2)
    assert bernoulli(2) == Fraction(1, 6)
    assert all(bernoulli(n) == 0 for n in range(3, 60, 2))
    assert bernoulli(12) == Fraction(-691, 2730)
    with pytest.raises(ValueError):
        bernoulli(201)


def test_bernoulli_matches_mpmath_exactly():
    for n in (20, 50, 100, 200):
        assert bernoulli(n) == Fraction(mp.bernfrac(n)[0], mp.bernfrac(n)[1])


def test_bernoulli_concurrent_fill_is_consistent():
    special._bern[:] = [Fraction(1)]
    out = {}

    def work(i):
        out[i] = [bernoulli(n) for n in range(0, 150, 7)]

    threads = [threading.Thread(target=work, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    first = out[0]
    assert all(v == first for v in out.values())


def test_elem_sym_examples():
    assert elem_sym(0, ()) == 1
    assert elem_sym(0, (4, 16)) == 1
    assert elem_sym(1, (4, 16)) == 20
    assert elem_sym(2, (4, 16)) == 64
    assert elem_sym(3, (4, 16)) == 0
    assert even_squares(3) == (4, 16)
    assert odd_squares(3) == (1, 9, 25)
    assert even_squares(1) == ()


def test_coefficient_examples():
    assert coefficient("A", 1) == pytest.approx(7 / 4 * zeta(3), rel=1e-14)
    assert coefficient("B", 0) == pytest.approx(catalan(), rel=1e-14)
    assert coefficient("𝒞", 1) == pytest.approx(93 / 16 * zeta(5), rel=1e-14)
    assert coefficient("C", 1) * (2 / math.pi) ** 4 == pytest.approx(93 * zeta(5) / math.pi ** 4, abs=1e-12)
    with pytest.raises(ValueError):
        coefficient("A", 0)
    with pytest.raises(ValueError):
        coefficient("G", 1)


def test_closed_form_examples():
    assert closed_form("R", 1) == pytest.approx(2 / math.pi * catalan(), abs=1e-15)
    assert closed_form("R", 2) == pytest.approx(7 * zeta(3) / math.pi ** 2, abs=1e-15)
    assert abs(closed_form("S", 2) - 93 * zeta(5) / math.pi ** 4) < 1e-12
    assert closed_form("T", 1) == pytest.approx(math.log(2) / 2 + 7 * zeta(3) / (2 * math.pi ** 2), abs=1e-15)
    for bad in (("R", 0), ("S", 21), ("Q", 2)):
        with pytest.raises(ValueError):
            closed_form(*bad)


@pytest.mark.parametrize("key", [f"{f}{m}" for f in "RST" for m in range(1, 9)])
def test_closed_forms_against_regression(key):
    assert closed_form(key[0], int(key[1:])) == pytest.approx(REG[key], rel=1e-12)


@pytest.mark.parametrize("key", ["smyth2", "smyth3", "condon", "zeta5_93"])
def test_named_constants_against_regression(key):
    c = named_constant(key)
    assert c.value == pytest.approx(REG[key], rel=1e-12)
    assert c.formula


def test_named_constant_examples():
    assert abs(named_constant("smyth3").value - 0.4262783988) < 1e-10
    assert abs(named_constant("smyth2").value - 0.3230659472) < 1e-10
    # the published decimal 0.6820453818 has two digits swapped
    assert abs(named_constant("condon").value - 0.6820454381) < 1e-10
    assert named_constant("l21_conjecture_rhs", 0.4).value == pytest.approx(0.5)
    with pytest.raises(ValueError):
        named_constant("l21_conjecture_rhs")
    with pytest.raises(KeyError):
        named_constant("nope")
    assert set(CATALOG_KEYS) >= {"smyth2", "smyth3", "condon", "zeta5_93", "l21_conjecture_rhs"}


def test_special_values_against_regression():
    assert zeta(3) == pytest.approx(REG["zeta3"], rel=1e-13)
    assert zeta(7) == pytest.approx(REG["zeta7"], rel=1e-13)
    assert dirichlet_L(-3, 3) == pytest.approx(REG["L3_3"], rel=1e-13)
    assert dirichlet_L(-4, 4) == pytest.approx(REG["L4_4"], rel=1e-13)


def test_exact_functions_reproducible():
    a = [bernoulli(n) for n in range(0, 80)]
    b = [bernoulli(n) for n in range(0, 80)]
    assert a == b
    assert elem_sym(4, odd_squares(9)) == elem_sym(4, odd_squares(9))
