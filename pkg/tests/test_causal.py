import random
from fractions import Fraction as F
from itertools import product

import pytest

from chancalc.causal import (
    CounterfactualSpec,
    InterventionSpec,
    counterfactual_channel,
    do_channel,
    front_door_do,
    intervene,
    twin_network,
)
from chancalc.channel import identity, make_channel, state
from chancalc.disint import disint
from chancalc.errors import IdentifiabilityError, ValidationError
from chancalc.inference import QuerySpec, infer_channel
from chancalc.kernel import BOOL, flip, make_subdist, point, tensor_states, uniform
from chancalc.netmodel import (
    MEDICAL_NOISE,
    SMOKING_SPACES,
    NetworkSpec,
    NodeSpec,
    builtin_example,
    joint_state,
    parse_network,
)
from oracles import MEDICAL_CF, MEDICAL_DO, SMOKING_DO, SMOKING_DO_EXACT, network_doc, random_network

S, T, C = SMOKING_SPACES


def test_front_door_smoking():
    do = front_door_do(builtin_example("smoking_joint"))
    for s, (pc, pnc) in SMOKING_DO.items():
        row = do.row(s)
        assert row["c"] == SMOKING_DO_EXACT[s]
        assert abs(float(row["c"]) - pc) <= 1e-4
        assert abs(float(row["~c"]) - pnc) <= 1e-4


def test_front_door_matches_fitted_network():
    # one explicit decomposition: hidden G is a copy of S, so the network's
    # joint reproduces sigma and its do-channel is computable by surgery
    sigma = builtin_example("smoking_joint")
    G = S
    gamma = state(sigma.marginal([0]))
    g = disint(state(sigma.marginal([0, 1])))
    h = disint(state(sigma), 2)
    net = NetworkSpec(
        {"S": S, "T": T, "C": C},
        (
            NodeSpec("G", G, (), gamma),
            NodeSpec("S", S, ("G",), identity(S)),
            NodeSpec("T", T, ("S",), g),
            NodeSpec("C", C, ("G", "T"), h),
        ),
    )
    assert joint_state(net, ["S", "T", "C"]) == sigma
    assert do_channel(net, "S", "C") == front_door_do(sigma)


def test_front_door_independent_s_is_observational():
    omega = make_subdist(S, {"s": F(1, 3), "~s": F(2, 3)})
    rho = make_subdist((T, C), {("t", "c"): F(1, 5), ("t", "~c"): F(1, 10), ("~t", "c"): F(3, 10), ("~t", "~c"): F(2, 5)})
    sigma = tensor_states(omega, rho)
    obs = disint(state(sigma.marginal([0, 2])))
    assert front_door_do(sigma) == obs


def test_front_door_identity_mediator_fails():
    # T copies S exactly, so P(c | s', t) is needed on rows that never occur
    sigma = make_subdist((S, T, C), {
        ("s", "t", "c"): F(3, 10), ("s", "t", "~c"): F(1, 10),
        ("~s", "~t", "c"): F(1, 5), ("~s", "~t", "~c"): F(2, 5),
    })
    with pytest.raises(IdentifiabilityError) as err:
        front_door_do(sigma)
    assert err.value.row in {("s", "~t"), ("~s", "t")}


def test_front_door_bad_input():
    with pytest.raises(ValidationError):
        front_door_do(flip(F(1, 2)))


def test_medical_do():
    do = do_channel(builtin_example("medical"), "X", "Y")
    for x, p in MEDICAL_DO.items():
        assert do.row(x) == flip(p)


def test_replace_policy_gives_same_do_channel():
    net = builtin_example("medical")
    cut = intervene(net, InterventionSpec("X", "replace", uniform(BOOL)))
    assert cut["X"].parents == ()
    assert infer_channel(cut, QuerySpec(["X"], ["Y"])) == do_channel(net, "X", "Y")


def test_intervention_spec_validation():
    with pytest.raises(ValidationError):
        InterventionSpec("X", "delete")
    with pytest.raises(ValidationError):
        InterventionSpec("X", "replace")
    with pytest.raises(ValidationError):
        InterventionSpec("X", "replace", make_subdist(BOOL, {"1": F(1, 2)}))
    with pytest.raises(ValidationError):
        do_channel(builtin_example("medical"), "X", "X")
    with pytest.raises(ValidationError):
        intervene(builtin_example("medical"), InterventionSpec("Q"))


@pytest.mark.parametrize("seed", range(20))
def test_do_from_root_is_observational(seed):
    names, parents, cpts = random_network(random.Random(seed))
    net = parse_network(network_doc(names, parents, cpts))
    cause, effect = names[0], names[-1]
    obs = infer_channel(net, QuerySpec([cause], [effect]))
    do = do_channel(net, cause, effect)
    for x in "01":
        if obs.row(x).weight():
            assert do.row(x) == obs.row(x)


def test_twin_network_shape():
    net = builtin_example("medical")
    twin = twin_network(net, CounterfactualSpec([("X", "1")], ["X", "Y"], ["Y"]))
    exo = [n.name for n in twin.nodes if n.exogenous]
    assert exo == list(MEDICAL_NOISE)
    endo = [n.name for n in twin.nodes if not n.exogenous]
    assert sorted(endo) == ["X", "X'", "Y", "Y'", "Z", "Z'"]
    assert twin["X'"].parents == () and twin["X'"].cpt.row(()) == point(BOOL, "1")
    assert twin["Y'"].parents == ("X'", "Ur", "Uy")
    assert twin["Z'"].parents == ("Ur", "Uz")


def test_twin_empty_forcing_is_diagonal():
    net = builtin_example("medical")
    twin = twin_network(net, CounterfactualSpec())
    for name in ("Z", "X", "Y"):
        j = joint_state(twin, [name, name + "'"])
        assert j[("0", "1")] == 0 and j[("1", "0")] == 0


def test_twin_errors():
    net = builtin_example("medical")
    with pytest.raises(ValidationError):
        twin_network(net, CounterfactualSpec([("Ur", "1")]))
    with pytest.raises(ValidationError):
        twin_network(net, CounterfactualSpec(shared=["X"]))
    noisy = net.replace_node(NodeSpec("Z", BOOL, ("Ur", "Uz"), make_channel(
        [BOOL, BOOL], [BOOL], {t: [("1", F(1, 2)), ("0", F(1, 2))] for t in product("01", repeat=2)})))
    with pytest.raises(ValidationError, match="deterministic"):
        twin_network(noisy, CounterfactualSpec())


def test_medical_counterfactual():
    cf = counterfactual_channel(
        builtin_example("medical"), CounterfactualSpec([("X", "1")], ["X", "Y"], ["Y"])
    )
    for key, p in MEDICAL_CF.items():
        assert cf.row(key) == flip(p)
    assert f"{float(MEDICAL_CF[('0', '0')]):.4f}" == "0.0217"


def test_medical_counterfactual_by_exogenous_enumeration():
    # abduction over (Ur, Uz, Ux, Uy), then predict Y with X forced to 1
    fz = lambda ur, uz: ur & uz
    fx = lambda z, ux: int(z == ux)
    fy = lambda x, ur, uy: int((x and ur) or (not x and ur and uy) or (not x and not ur and not uy))
    p = MEDICAL_NOISE
    acc = {}
    for u in product((0, 1), repeat=4):
        w = F(1)
        for name, bit in zip(("Ur", "Uz", "Ux", "Uy"), u):
            w *= p[name] if bit else 1 - p[name]
        ur, uz, ux, uy = u
        x = fx(fz(ur, uz), ux)
        y = fy(x, ur, uy)
        y_cf = fy(1, ur, uy)
        row = acc.setdefault((str(x), str(y)), [F(0), F(0)])
        row[y_cf] += w
    for key, (w0, w1) in acc.items():
        assert w1 / (w0 + w1) == MEDICAL_CF[key]


def test_counterfactual_consistency():
    net = builtin_example("medical")
    for x in "01":
        cf = counterfactual_channel(net, CounterfactualSpec([("X", x)], ["X", "Y"], ["Y"]))
        for y in "01":
            row = cf.row((x, y))
            if row.weight():
                assert row == point(BOOL, y)


def test_unforced_factual_target_is_identity():
    net = builtin_example("medical")
    cf = counterfactual_channel(net, CounterfactualSpec((), ["Y"], ["Y"]))
    assert cf == identity(BOOL)
