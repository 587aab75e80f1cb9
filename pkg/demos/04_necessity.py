# Below the threshold sigma = -(n+1) the bounding integral blows up.
from bergman_norm import ProjectionParams, QuadratureConfig, certify, divergence_probe

for sigma in (-1.5, -1.9, -1.99):
    cert = certify(ProjectionParams(1, sigma), QuadratureConfig(100_000, seed=3))
    print(f"sigma={sigma}: {cert.verdict}, C = {cert.closed_form:.8g}")

for sigma in (-2.0, -2.5, -3.0):
    p = ProjectionParams(1, sigma)
    probe = divergence_probe(p)
    print(f"\nsigma={sigma} (mu={p.mu:g})")
    for eps, j in probe[::4] + [probe[-1]]:
        print(f"  eps={eps:.8f}  J = {j:.6g}")
    print("  verdict:", certify(p, QuadratureConfig(1000)).verdict)
