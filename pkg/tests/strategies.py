"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from mahler.poly import GaussianRational, LaurentPoly

small_rational = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
gaussian = st.builds(GaussianRational, small_rational, small_rational)
gaussian_int = st.builds(GaussianRational, st.integers(-3, 3), st.integers(-2, 2))


@st.composite
def laurent(draw, names=("x", "y"), lo=-2, hi=3, max_terms=5, coeffs=gaussian):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(lo, hi)) for _ in names)
        terms[e] = draw(coeffs)
    return LaurentPoly(names, terms)


def polynomials(names=("x", "y"), hi=3, max_terms=5, coeffs=gaussian_int):
    return laurent(names=names, lo=0, hi=hi, max_terms=max_terms, coeffs=coeffs)
