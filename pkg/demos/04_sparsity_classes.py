"""
Checking the approximate sparsity class
=======================================

The reordered coefficients of the design density decay exactly like
2 j^-2, but its tail sums are too heavy for the constant C = 4/3.
"""

import numpy as np

from sparseries import SparsityParams, check_membership_theta, design_density, minimal_tail_constant

theta = design_density().theta
rep = check_membership_theta(theta, SparsityParams.parse("2,2,4/3"))
print("ordering by magnitude:", rep.ordering[:10])
mags = np.abs(theta[np.array(rep.ordering[:10]) - 1])
print("ranked |theta| * j^2 / 2:", np.round(mags * np.arange(1, 11) ** 2 / 2, 12))
print("ordered_ok:", rep.ordered_ok, " tail_ok:", rep.tail_ok,
      " first violation at J =", rep.first_violation)

# the smallest C that would admit the design density with k = 2
print("minimal tail constant: %.4f" % minimal_tail_constant(theta, 2.0))

# a pure power law A j^-k sits inside the class with C = A^2 / (2k - 1)
A, k = 2.0, 2.0
seq = A * np.arange(1, 50_001, dtype=float) ** -k
print("power law member:", check_membership_theta(seq, SparsityParams(A, k, A * A / (2 * k - 1))).member)
