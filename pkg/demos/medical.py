"""Treatment X, recovery Y, hidden noise: interventions and counterfactuals."""
from chancalc import CounterfactualSpec, builtin_example, counterfactual_channel, do_channel
from chancalc.causal import twin_network
from chancalc.cli import render_table

net = builtin_example("medical")
print("do(X) -> Y:")
print(render_table(do_channel(net, "X", "Y")))

spec = CounterfactualSpec(forced=[("X", "1")], observed=["X", "Y"], cf_target=["Y"])
print("twin network nodes:", ", ".join(twin_network(net, spec).names))

# had the patient been treated, would they have recovered?
cf = counterfactual_channel(net, spec)
print(render_table(cf))
print("c(0,0) =", cf.row(("0", "0"))["1"])
