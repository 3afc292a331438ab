"""
Mahler measures on the torus
============================

The logarithmic Mahler measure of P is the average of log|P| over the unit
torus.  Three classical values have closed forms in terms of L-values.
"""

import math

from mahler import QuadConfig, measure, parse
from mahler.measure import measure_direct
from mahler.special import dirichlet_L, zeta

# x + y + 1: integrating x exactly leaves log+|y + 1| on the circle
ref = 3 * math.sqrt(3) / (4 * math.pi) * dirichlet_L(-3, 2)
r = measure(parse("x+y+1"))
print(f"m(x+y+1)        = {r.value:.12f}   closed form {ref:.12f}")

# the same polynomial sampled directly: the log singularity costs accuracy
d = measure_direct(parse("x+y+1"), QuadConfig(nodes_per_dim=1024))
print(f"direct sampling = {d.value:.12f}   stderr {d.stderr:.1e}")

# three and four variables reduce to 2D grids
for src, ref in [("x+y+z+1", 7 * zeta(3) / (2 * math.pi ** 2)),
                 ("x+1+(x-1)*(y+z)", 28 * zeta(3) / (5 * math.pi ** 2))]:
    r = measure(parse(src))
    print(f"m({src}) = {r.value:.10f} +/- {r.stderr:.1e}   closed form {ref:.10f}")

# rational functions: m(num) - m(den)
print("m((1-x)/(1+x)) =", measure(parse("(1-x)/(1+x)")).value)
