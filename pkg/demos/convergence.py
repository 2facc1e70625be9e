"""Depth of t*(1, 1) for growing t: heavier tails keep more mass far out.

Writes convergence.csv next to this script.

Run: python3 demos/convergence.py
"""
from pathlib import Path

import numpy as np

from hdtail import PointCloud, Schedule, TMap, builtin_spec
from hdtail import distributions as D
from hdtail.diagnostics import convergence_curves
from hdtail.io import write_rows
from hdtail.rng import substream

names = ["gauss-2", "pareto-3.2", "pareto-2.2", "pareto-1.9"]
sch = Schedule(50_000, 25, TMap("linear", c=5000, offset=1.8))
clouds = {nm: PointCloud(D.draw(builtin_spec(nm), sch.N, substream(0, 2, i))) for i, nm in enumerate(names)}
res = convergence_curves(clouds, [1.0, 1.0], sch, nested=False)

print("t      " + "  ".join(f"{nm:>10}" for nm in names))
for j, t in enumerate(sch.ts):
    if j % 4 == 0:
        print(f"{t:5.2f}  " + "  ".join(f"{res[nm][j]:10.4f}" for nm in names))

rows = [[t, *[res[nm][j] for nm in names]] for j, t in enumerate(sch.ts)]
write_rows(Path(__file__).with_name("convergence.csv"), ["t", *names], rows)
print("ordered at every t:", bool(np.all(np.diff([res[nm] for nm in names], axis=0) > 0)))
