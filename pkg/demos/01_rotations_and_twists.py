"""Tour of the SO(3)/SE(3) primitives.

Run with: python3 demos/01_rotations_and_twists.py
"""

import numpy as np

from se3cbf import Pose, Twist, adjoint_group, coadjoint, exp_so3, hat3, log_so3, vee3

np.set_printoptions(precision=4, suppress=True)

# A rotation vector maps to a rotation matrix through the exponential.
w = np.array([0.0, 0.0, np.pi / 3])  # 60 degrees about z
r = exp_so3(w)
print("exp_so3(60deg about z) =\n", r.m)

# hat/vee are the bridge between vectors and skew matrices.
print("\nhat3(w) @ x equals w x x:")
x = np.array([1.0, 0.0, 0.0])
print(hat3(w) @ x, "==", np.cross(w, x))
print("vee3 undoes hat3:", vee3(hat3(w)))

# The logarithm recovers the rotation vector.
print("\nlog_so3(exp_so3(w)) =", log_so3(r))

# Poses compose like rigid motions; the group adjoint transports twists.
g1 = Pose(exp_so3([0.2, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]))
g2 = Pose(exp_so3([0.0, 0.3, 0.0]), np.array([0.0, 2.0, 0.0]))
g12 = g1.compose(g2)
print("\ncomposed position:", g12.position)

xi = Twist(np.array([0.1, 0.0, 0.0]), np.array([0.0, 0.5, 0.0]))
print("twist transported by Ad_g:", adjoint_group(g1) @ xi.vec6())

# The coadjoint drift never does work: xi . (ad_xi^T II xi) = 0.
ii = np.diag([6.75, 6.75, 13.5, 3.0, 3.0, 3.0])
xi6 = xi.vec6()
print("\ndrift power (should be ~0):", xi6 @ (coadjoint(xi) @ (ii @ xi6)))
