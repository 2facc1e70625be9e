"""Exact and approximate halfspace depth on a small Gaussian cloud, plus depth regions.

Run: python3 demos/depth_basics.py
"""

from hdtail import depth_approx, depth_exact_2d, nested_contours, sample, builtin_spec, sphere_sample

cloud = sample(builtin_spec("gauss-elongated"), 1000, seed=0)

for q in ([0.0, 0.0], [1.0, 5.0], [2.5, 0.0], [10.0, 10.0]):
    exact = depth_exact_2d(cloud, q)
    rough = depth_approx(cloud, q, sphere_sample(2, 16, seed=1))
    print(f"x = {q}: exact {exact.count}/{exact.n} = {exact.value:.3f}, 16 random directions {rough.value:.3f}")

# The deeper the level, the smaller the region; each one is a convex polygon.
for c in nested_contours(cloud, [0.01, 0.1, 0.3, 0.45]):
    print(f"level {c.level:4}: {len(c.vertices):3d} vertices, area {c.area:8.2f}")
