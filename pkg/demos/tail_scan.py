"""Classify tails direction by direction on three simulated product laws.

Gaussian depth decays faster than exponentially, Laplace exactly
exponentially (rate 1) and Pareto(3) polynomially (index 3).

Run: python3 demos/tail_scan.py
"""
from hdtail import distributions as D
from hdtail.diagnostics import tailscan

for name, spec in [("gaussian", D.gaussian(d=2)), ("laplace", D.product_laplace(2)), ("pareto(3)", D.pareto(2, 3.0))]:
    scan = tailscan(D.sample(spec, 50_000, seed=7), signed=False)
    print(f"== {name}")
    print(scan.verdict.report())
