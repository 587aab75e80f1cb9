# J_{c,t}: closed form, Monte Carlo, and the boundary limit.
import numpy as np

from bergman_norm import JIntegralSpec, QuadratureConfig, j_boundary, j_closed_form, j_limit, j_numeric

# Monte Carlo against the hypergeometric closed form on a radius grid
for c, t in [(-1, 0.0), (-2, 0.5), (-3, 0.0)]:
    print(f"c={c} t={t}")
    for i, r in enumerate([0.0, 0.3, 0.6, 0.9]):
        spec = JIntegralSpec(c, t, 2, r)
        est = j_numeric(spec, QuadratureConfig(100_000, seed=i))
        print(f"  r={r:.1f}  closed {j_closed_form(spec):.8f}  mc {est.value:.8f} +- {est.std_error:.1e}")

# approach to the sphere: r = 1 - 2^-k
c, t, n = -0.5, 0.0, 1
print("\nslow approach for c=-0.5 (sqrt-type correction):")
for k in (4, 8, 12, 16, 20):
    r = 1 - 2.0**-k
    print(f"  k={k:2d}  J = {j_closed_form(JIntegralSpec(c, t, n, r)):.12f}")
print("  extrapolated", j_limit(c, t, n))
print("  Gauss value ", j_boundary(c, t, n))

# c >= 0: no finite limit; growth is logarithmic at c = 0
print("\nc=0 growth:")
for k in (4, 8, 12, 16, 20):
    r = 1 - 2.0**-k
    print(f"  k={k:2d}  J = {j_closed_form(JIntegralSpec(0.0, 0.0, 1, r)):.6f}  log(1/(1-r^2)) = {np.log(1 / (1 - r * r)):.6f}")
