# The closed-form norm and how the two Monte Carlo bounds close in on it.
import math

from bergman_norm import ProjectionParams, QuadratureConfig, certify, closed_constant

# C(n, sigma) for a few weights; sigma = 0 collapses to (2n+1)!/n!
for n in (1, 2, 3):
    for sigma in (0.0, 1.0, -0.5):
        c = closed_constant(ProjectionParams(n, sigma))
        print(f"n={n} sigma={sigma:+.1f}  C = {c:.10g}")
    print("   (2n+1)!/n! =", math.factorial(2 * n + 1) // math.factorial(n))

# full certificate for the unweighted disc case
p = ProjectionParams(1, 0.0)
cert = certify(p, QuadratureConfig(200_000, seed=1))
print("\nverdict:", cert.verdict)
print("upper profile (r, bound):")
for r, b in cert.upper_evidence[::3]:
    print(f"  {r:6.3f}  {b:.12f}")

# lower witnesses approach C from below like 6 eps^2
print("lower sweep (eps, numeric +- se, closed):")
for s in cert.lower_evidence:
    print(f"  {s.eps:.6f}  {s.numeric:.10f} +- {s.std_error:.1e}  {s.closed:.10f}")

# a weighted case where the bounds genuinely differ in r
cert = certify(ProjectionParams(2, 1.0), QuadratureConfig(200_000, seed=2))
print("\nn=2 sigma=1:", cert.verdict, "C =", cert.closed_form)
print("extrapolated boundary value:", cert.extrapolated_limit)
print("first/last upper bound:", cert.upper_evidence[0][1], cert.upper_evidence[-1][1])
