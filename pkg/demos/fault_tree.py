"""Fault tree: condition on the G1 or-gate and read the top event.

Run with ``python3 demos/fault_tree.py``.
"""
from fractions import Fraction

from chancalc import QuerySpec, builtin_example, infer_channel, verify_derivation
from chancalc.derivations import fault_tree_dagger, fault_tree_steps

net = builtin_example("fault_tree")
print("nodes:", ", ".join(net.names))

# brute force: build the joint, then disintegrate
c = infer_channel(net, QuerySpec(["G1"], ["TOP"]))
for g1 in ("1", "0"):
    print(f"P(TOP | G1={g1}) =", dict((k[0], str(v)) for k, v in c.row(g1).items()))

# the same channel, derived step by step with a dagger for the or-gate
report = verify_derivation(fault_tree_steps())
print(report.summary())

d = fault_tree_dagger()
print("dagger d(1):", {k[0]: str(v) for k, v in d.row("1").items()})
assert c.row("1")["1"] == Fraction(1, 8)
