#!/usr/bin/env python3
"""Classify (k, s) regularity points and render the region atlas.

Walks the three coefficient cases (a < 1/4, a = 1/4, a > 1/4), prints
the verdict at a few landmark points, and writes the SVG figures for
a = 1/2 and a = -1 next to this script.
"""

import os
from fractions import Fraction

from hskdv import atlas_svg, regions
from hskdv.phases import Coefficients

HERE = os.path.dirname(os.path.abspath(__file__))


def show(a, k, s):
    v = regions.classify(a, (k, s))
    print("a=%-6s (k,s)=(%s, %s)  lwp=%-9s illposed=%-4s open=%s"
          % (a, k, s, v.lwp, v.illposed, v.open_region))


for a in (2, Fraction(1, 4), -1):
    print("--- a =", a)
    show(a, 1, 1)                      # comfortably inside
    show(a, 0, 3)                      # on s = k+3
    show(a, -1, 0)                     # left of the region
    show(a, 6, 4)                      # on s = k-2
    print("diagonal threshold:", atlas_svg.diagonal_threshold(a))

# global well-posedness needs sign conditions on the coupling
c = Coefficients(0.5, gamma=1.0, theta=-1.0)
print("gwp at (1,1), gamma*theta<0:", regions.classify_gwp(c, (1, 1)))

for a in (Fraction(1, 2), -1):
    path = os.path.join(HERE, "atlas_a%g.svg" % float(a))
    with open(path, "w") as fh:
        fh.write(atlas_svg.render_svg(a))
    print("wrote", path)
