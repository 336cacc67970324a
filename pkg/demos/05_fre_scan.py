#!/usr/bin/env python3
"""Frequency-restricted estimate dichotomy at the boundary s = k/2.

The sup-integral over the level set {|Phi - alpha| < M}, normalized by
<alpha>^0.99 * M, stays bounded when (k, s) sits inside the validity
region and grows like a power of the cutoff when it does not. At
a = 1/2, k = 1 the threshold is s = 1/2: compare s = 0.5 and s = 0.25.
"""

from hskdv import fre

for s in (0.5, 0.25):
    spec = fre.make_fre_spec("dxv2", 1.0, s)
    rep = fre.ratio_scan(spec, 0.5)
    print("s=%.2f  growth slope=%.4f  sup values:" % (s, rep.growth_slope),
          ["%.3e" % v for v in rep.sup_values])

# the quadratic level-set measure is uniformly < 2 sqrt(2) sqrt(M)
for alpha, M in ((0.0, 1.0), (100.0, 1.0), (-3.0, 4.0)):
    m = fre.level_set_measure(alpha, M)
    print("measure(alpha=%g, M=%g) = %.4f  (cap %.4f)"
          % (alpha, M, m, 2.0 * 2.0 ** 0.5 * M ** 0.5))
