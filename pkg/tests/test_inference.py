from fractions import Fraction as F
from itertools import product

import pytest

from chancalc.channel import Channel, state
from chancalc.derivations import child_final, child_steps, fault_tree_dagger, fault_tree_steps
from chancalc.errors import ValidationError
from chancalc.inference import (
    QuerySpec,
    check_cond_independence,
    infer_channel,
    jeffrey_update,
    verify_derivation,
)
from chancalc.kernel import BOOL, flip, make_subdist, point, tensor_states, uniform
from chancalc.netmodel import builtin_example, joint_state
from oracles import CHILD_ROWS


def fault_query():
    return infer_channel(builtin_example("fault_tree"), QuerySpec(["G1"], ["TOP"]))


def test_fault_tree_query():
    c = fault_query()
    assert c.row("1") == flip(F(1, 8))
    assert c.row("0") == point(BOOL, "0")


def test_child_rows_match_printed_table():
    c = infer_channel(builtin_example("child"), QuerySpec(["HD", "CO"], ["LB"]))
    for key, printed in CHILD_ROWS.items():
        row = c.row(key)
        assert row.is_proper()
        for got, want in zip(row.weights, printed):
            assert abs(float(got) - want) <= 1e-3, (key, got, want)


def test_child_rows_exact():
    c = infer_channel(builtin_example("child"), QuerySpec(["HD", "CO"], ["LB"]))
    assert c.row(("eq", "nr")).weights == (
        F(232088951043, 651739396000),
        F(647315398469, 1303478792000),
        F(3490645299, 23699614400),
    )
    assert c == child_final()


def test_child_rows_match_plain_enumeration():
    net = builtin_example("child")
    names = net.names
    acc = {}
    for vals in product(*(net[n].space.elements for n in names)):
        v = dict(zip(names, vals))
        p = F(1)
        for n in names:
            p *= net[n].cpt.entry(tuple(v[q] for q in net[n].parents), v[n])
            if not p:
                break
        key = (v["HD"], v["CO"])
        acc.setdefault(key, {}).setdefault(v["LB"], F(0))
        acc[key][v["LB"]] += p
    c = infer_channel(net, QuerySpec(["HD", "CO"], ["LB"]))
    for key, row in acc.items():
        total = sum(row.values())
        assert {k: w / total for k, w in row.items() if w} == {t[0]: w for t, w in c.row(key).items()}


def test_query_spec_validation():
    with pytest.raises(ValidationError):
        QuerySpec(["A"], ["A"])
    with pytest.raises(ValidationError):
        QuerySpec(["A"], [])
    with pytest.raises(ValidationError):
        infer_channel(builtin_example("joins"), QuerySpec(["Q"], ["A"]))
    q = QuerySpec.from_json('{"evidence": ["HD", "CO"], "target": ["LB"]}')
    assert q.evidence == ("HD", "CO")


def test_query_order_follows_spec():
    net = builtin_example("joins")
    ab = infer_channel(net, QuerySpec(["Z"], ["A", "B"]))
    ba = infer_channel(net, QuerySpec(["Z"], ["B", "A"]))
    assert [s.name for s in ab.outputs] == ["2", "2"]
    for z in "01":
        assert ab.row(z)[("1", "0")] == ba.row(z)[("0", "1")]


def test_no_evidence_gives_state():
    c = infer_channel(builtin_example("joins"), QuerySpec([], ["A"]))
    assert c.inputs == () and c.as_subdist() == flip(F(3, 4))


def test_impossible_evidence_is_flagged_zero_row():
    c = fault_query()
    assert c.impossible == ()
    net = builtin_example("joins")
    # A = 0 forces Z = 0, so (A=0, Z=1) never happens
    c = infer_channel(net, QuerySpec(["A", "Z"], ["B"]))
    assert c.impossible == (("0", "1"),)
    assert c.row(("0", "1")).weight() == 0
    for ev in (("0", "0"), ("1", "0"), ("1", "1")):
        assert c.row(ev).is_proper()


def test_jeffrey_point_evidence_is_row():
    net = builtin_example("child")
    q = QuerySpec(["HD", "CO"], ["LB"])
    c = infer_channel(net, q)
    for key in CHILD_ROWS:
        ev = point(c.inputs, key)
        assert jeffrey_update(net, q, ev) == c.row(key)


def test_jeffrey_uniform_is_average():
    net = builtin_example("child")
    q = QuerySpec(["HD", "CO"], ["LB"])
    c = infer_channel(net, q)
    out = jeffrey_update(net, q, uniform(c.inputs))
    for i in range(3):
        assert out.weights[i] == sum(c.row(k).weights[i] for k in CHILD_ROWS) / 6


def test_jeffrey_mass_loss_on_impossible_evidence():
    net = builtin_example("joins")
    q = QuerySpec(["A", "Z"], ["B"])
    ev = make_subdist(q_inputs(net, q), {("0", "1"): F(1, 4), ("1", "1"): F(3, 4)})
    out = jeffrey_update(net, q, ev)
    assert out.weight() == F(3, 4)
    with pytest.raises(ValidationError):
        jeffrey_update(net, q, make_subdist(q_inputs(net, q), {("0", "0"): F(1, 2)}))


def q_inputs(net, q):
    return tuple(net[n].space for n in q.evidence)


def test_cond_independence_joins():
    j = joint_state(builtin_example("joins"), ["Z", "A", "B"])
    assert check_cond_independence(j, ([0], [1], [2]))
    # A and B are not marginally independent
    assert not check_cond_independence(j.marginal([1, 2]), ([], [0], [1]))


def test_cond_independence_trivial_cases():
    half = flip(F(1, 2))
    diag = make_subdist((BOOL, BOOL), {("0", "0"): F(1, 2), ("1", "1"): F(1, 2)})
    assert not check_cond_independence(diag, ([], [0], [1]))
    prod = tensor_states(flip(F(1, 3)), half, flip(F(2, 7)))
    assert check_cond_independence(prod, ([0], [1], [2]))
    assert check_cond_independence(prod, ([2], [0], [1]))
    with pytest.raises(ValidationError):
        check_cond_independence(prod, ([0], [1], [1]))


def test_cond_independence_perturbed_control():
    j = joint_state(builtin_example("joins"), ["Z", "A", "B"])
    w = dict(zip(range(8), j.weights))
    eps = F(1, 100)
    # move mass inside the Z=1 slice so A and B become correlated there
    w[4] += eps
    w[7] -= eps
    perturbed = type(j)(j.spaces, [w[i] for i in range(8)])
    assert perturbed.is_proper()
    assert not check_cond_independence(perturbed, ([0], [1], [2]))


def test_fault_tree_derivation_replay():
    report = verify_derivation(fault_tree_steps())
    assert report.passed, report.summary()
    assert len(report.labels) == 6
    assert fault_tree_steps()[-1][1] == fault_query()
    d = fault_tree_dagger()
    assert d.row("1") == flip(F(1, 2)) and d.row("0") == point(BOOL, "0")


def test_child_derivation_replay():
    report = verify_derivation(child_steps())
    assert report.passed, report.summary()


def test_perturbed_step_reported():
    steps = fault_tree_steps()
    label, last = steps[-1]
    rows = [dict(r) for r in last.rows]
    rows[1] = {0: F(1, 2), 1: F(1, 2)}
    bad = Channel(last.inputs, last.outputs, rows)
    report = verify_derivation(steps[:-1] + [(label, bad)])
    assert not report.passed
    assert report.equal[:-1] == [True] * (len(steps) - 2)
    inp, out, x, y = report.mismatches[len(steps) - 2]
    assert inp == ("1",) and x != y
    assert "FAIL" in report.summary()


def test_verify_derivation_signature_mismatch():
    with pytest.raises(ValidationError):
        verify_derivation([state(flip(F(1, 2))), fault_query()])
    with pytest.raises(ValidationError):
        verify_derivation([])
    assert verify_derivation([fault_query, fault_query]).passed


def test_open_closed_agreement_on_builtins():
    # every compositional derivation's final step equals the brute-force query
    assert fault_tree_steps()[-1][1] == fault_query()
    assert child_steps()[-1][1] == infer_channel(builtin_example("child"), QuerySpec(["HD", "CO"], ["LB"]))
