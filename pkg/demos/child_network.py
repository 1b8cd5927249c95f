"""Child network: the HD, CO -> LB channel, by enumeration and by daggers."""
from chancalc import QuerySpec, builtin_example, infer_channel, verify_derivation
from chancalc.cli import render_table
from chancalc.derivations import child_steps

net = builtin_example("child")
c = infer_channel(net, QuerySpec(["HD", "CO"], ["LB"]))
print(render_table(c))

# each row is an exact rational; one of them in full
print("(eq, nr) ->", [str(w) for w in c.row(("eq", "nr")).weights])

report = verify_derivation(child_steps())
print(report.summary())
