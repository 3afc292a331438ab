"""
Families built from Cayley factors
==================================

R_m, S_m and T_m combine the factors (1 - x_j)/(1 + x_j).  Their measures
are finite sums of zeta and L-values; here the closed forms are compared
with quadrature, and a substituted member of S_2 is measured.
"""

from mahler import measure
from mahler.special import closed_form
from mahler.transform import build_family

print("family   closed form      quadrature        stderr")
for fam, m in [("R", 1), ("R", 2), ("S", 1), ("S", 2), ("T", 1), ("T", 2)]:
    r = measure(build_family(fam, m))
    print(f"{fam}_{m}      {closed_form(fam, m):.10f}   {r.value:.10f}   {r.stderr:.1e}")

# substituting x1 -> f/g leaves the measure of S_2 unchanged
for g, k in [("x1+2", 2), ("x1^2-2*x1+2", 4)]:
    F = build_family("S", 2, {"x1": (g, k)})
    r = measure(F)
    print(f"S_2 with x1 -> f/g, g = {g}: {r.value:.8f} +/- {r.stderr:.1e}")
