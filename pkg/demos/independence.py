"""A and B share the parent Z: dependent, but independent given Z."""
from fractions import Fraction

from chancalc import builtin_example, check_cond_independence
from chancalc.netmodel import joint_state

j = joint_state(builtin_example("joins"), ["Z", "A", "B"])
print("A indep B | Z:", check_cond_independence(j, ([0], [1], [2])))
print("A indep B    :", check_cond_independence(j.marginal([1, 2]), ([], [0], [1])))

# nudge some mass inside the Z=1 slice and the independence breaks
w = list(j.weights)
w[4] += Fraction(1, 100)
w[7] -= Fraction(1, 100)
nudged = type(j)(j.spaces, w)
print("after nudge  :", check_cond_independence(nudged, ([0], [1], [2])))
