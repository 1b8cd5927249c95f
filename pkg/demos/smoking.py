"""Front-door adjustment from an observed joint on smoking, tar and cancer."""
from chancalc import IdentifiabilityError, builtin_example, front_door_do, make_subdist
from chancalc.channel import state
from chancalc.cli import render_table
from chancalc.disint import disint
from chancalc.netmodel import SMOKING_SPACES

sigma = builtin_example("smoking_joint")
print("observational P(C | S):")
print(render_table(disint(state(sigma.marginal([0, 2])))))
print("interventional do(S) -> C:")
print(render_table(front_door_do(sigma)))

# when tar copies smoking exactly there is nothing to adjust with
S, T, C = SMOKING_SPACES
copied = make_subdist((S, T, C), {("s", "t", "c"): "0.4", ("~s", "~t", "~c"): "0.6"})
try:
    front_door_do(copied)
except IdentifiabilityError as e:
    print("not identifiable:", e, "row", e.row)
