#!/usr/bin/env python3
"""Norm-inflation ladders for two boundary lines of the atlas.

Each family of counterexample data makes the relevant Picard iterate
grow (or decay) like a definite power of the frequency parameter N;
the fitted log-log slope certifies the boundary. Short ladders here to
keep the run quick; the full N = 64..1024 versions are in the tests.
"""

from hskdv import sharpness

for lemma, kwargs in (
        ("L61", dict(k=0.0, s=0.0, a=2.0)),
        ("L63", dict(k=0.0, a=-1.0)),
        ("L66", dict(k=0.0, a=2.0)),
):
    rep = sharpness.ladder_report(lemma, Ns=(64, 128, 256), **kwargs)
    print("%s  slope=%+.4f  predicted=%+.2f  r2=%.5f  pass=%s"
          % (rep["lemma"], rep["slope"], rep["predicted"], rep["r2"],
             rep["pass"]))

# families guard their hypotheses
try:
    sharpness.build("L66", 64, a=0.2)
except sharpness.HypothesisError as exc:
    print("rejected as expected:", exc)
