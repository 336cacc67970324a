#!/usr/bin/env python3
"""Evaluate Picard iterates on frequency-box data.

The second iterate of the v equation on a low box (u) and a high box
(v) lives on the sumset of the supports; its size is controlled by the
Duhamel kernel (exp(i t Phi) - 1)/(i Phi), so coherent (small t*Phi)
and oscillatory regimes behave very differently.
"""

import numpy as np

from hskdv import picard

u0 = picard.BoxData([picard.FrequencyBox(1.0, 2.0)])
v0 = picard.BoxData([picard.FrequencyBox(30.0, 31.0)])
window = (31.0, 33.0)

for t in (1e-4, 1e-2, 1.0):
    out = picard.second_iterate_v(u0, v0, 0.5, t, window)
    n = picard.hs_norm_window(out, 0.0, window)
    print("t=%-8g  L2 norm on window = %.6e  (norm/t = %.4e)"
          % (t, n, n / t))

# outside the sumset [31, 33] the iterate vanishes identically
out = picard.second_iterate_v(u0, v0, 0.5, 1e-2, (40.0, 45.0))
print("max |I| outside the sumset:", np.max(np.abs(out.values)))

# the third iterate needs the phase bounded away from zero on the data
v0 = picard.BoxData([picard.FrequencyBox(8.0, 9.0)])
total, p1, p2 = picard.third_iterate_v(v0, -1.0, 0.01, (24.0, 26.0),
                                       gl_nodes=16, return_parts=True)
print("third iterate: |part1|=%.3e  |part2|=%.3e"
      % (np.max(np.abs(p1.values)), np.max(np.abs(p2.values))))
