"""
Roots of f + beta g
===================

With f the reciprocal conjugate of g, the roots of f + beta g lie inside the
unit circle for |beta| < 1, on it for |beta| = 1 and outside for |beta| > 1.
Hence m(alpha f + beta g) = m(g) + log max(|alpha|, |beta|).
"""

import math

import numpy as np

from mahler import parse_poly
from mahler.roots import classify_gamma, gamma_poly, jensen_measure_1d, measure_alpha_f_plus_beta_g

g = parse_poly("x^4+x+2")
k = 5

for beta in [0.3, 0.9, 1.0, 1j, 1.1, 4.0]:
    c = classify_gamma(g, k, 1, beta)
    print(f"beta = {beta!s:>6}: {c.location.name:<12} moduli {np.round(np.sort(c.moduli), 4)}")

rng = np.random.default_rng(0)
for _ in range(5):
    alpha, beta = rng.normal(size=2) + 1j * rng.normal(size=2)
    r = measure_alpha_f_plus_beta_g(g, k, 1, alpha, beta)
    expected = math.log(2) + math.log(max(abs(alpha), abs(beta)))
    print(f"|alpha| = {abs(alpha):.3f} |beta| = {abs(beta):.3f}: m = {r.value:.15f}  expected {expected:.15f}")

# Jensen directly on the pencil member
print("m(f + 3g) =", jensen_measure_1d(gamma_poly(g, k, 1, 3)), " log 6 =", math.log(6))
