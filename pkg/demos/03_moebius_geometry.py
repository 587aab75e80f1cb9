# Automorphisms of the ball: involution, the kernel identity, Jacobian.
import numpy as np

from bergman_norm import identity_residual, moebius_map, norm_sq, real_jacobian
from bergman_norm.checks import finite_difference_jacobian, random_ball_points

rng = np.random.default_rng(7)
z = np.array([0.6 + 0.3j, -0.2j])
ws = random_ball_points(rng, 5, 2, 0.95)

print("phi_z(0) =", moebius_map(z, np.zeros(2)))
print("phi_z(z) =", moebius_map(z, z))
for w in ws:
    phi = moebius_map(z, w)
    print(
        f"|w|^2={norm_sq(w):.3f} |phi|^2={norm_sq(phi):.3f} "
        f"involution err {np.max(np.abs(moebius_map(z, phi) - w)):.1e} "
        f"identity err {identity_residual(z, w):.1e} "
        f"jac {real_jacobian(z, w):.6f} fd {finite_difference_jacobian(z, w):.6f}"
    )

# near the sphere the residual stays at round-off
z = 0.999 * np.array([1.0, 0.0])
ws = random_ball_points(rng, 10_000, 2, 0.999)
print("\nmax identity residual, |z| = 0.999:", max(identity_residual(z, w) for w in ws))
