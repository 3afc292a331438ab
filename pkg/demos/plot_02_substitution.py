"""
Measure-preserving substitutions
================================

For g with no roots inside the unit disc and k > deg g, the map
x -> f(x)/g(x) with f(x) = x^k conj(g)(1/x) keeps the Mahler measure.
Applied to the Condon polynomial it yields new polynomials with the same
measure, after accounting for the denominator g^l.
"""

from mahler import QuadConfig, measure, parse
from mahler.transform import TransformSpec, apply_transform, verify_invariance

P = parse("x+1+(x-1)*(y+z)")
cfg = QuadConfig(nodes_per_dim=1024)

for g, k in [("x+2", 2), ("x^2-2*x+2", 4), ("x^4+x+2", 5)]:
    spec = TransformSpec.make("x", g, k)
    tr = apply_transform(P, spec)
    print(f"g = {g}, k = {k}")
    print(f"  f = {tr.f}")
    print(f"  cleared numerator = {tr.cleared_numerator}")
    print(f"  l = {tr.denominator_power}, l m(g) = {tr.correction:.12f}")
    rep = verify_invariance(P, spec, cfg)
    print(f"  m(P) = {rep.m_P.value:.9f}   m(N) - l m(g) = {rep.m_P_tilde:.9f}   "
          f"{'agree' if rep.passed else 'DIFFER'} within {rep.tolerance:.1e}")

# a root inside the disc breaks the hypothesis and is refused
bad = TransformSpec.make("x", "2*x+1", 2)
try:
    apply_transform(P, bad)
except Exception as exc:
    print("refused:", exc)

# halving the first numerator gives a polynomial with the measure of P
print("m(x^2+x+1+(x^2-1)(y+z)) =", round(measure(parse("x^2+x+1+(x^2-1)*(y+z)"), cfg).value, 9))
