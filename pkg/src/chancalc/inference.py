"""Conditioning queries on networks, Jeffrey updates, conditional
independence, and a semantic checker for step-by-step derivations."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

from .channel import (
    Channel,
    channels_equal,
    compose,
    first_difference,
    pushforward,
    state,
    tensor,
    wiring,
)
from .disint import disint
from .errors import ValidationError
from .kernel import SubDist, tuples
from .netmodel import NetworkSpec, joint_state


@dataclass(frozen=True)
class QuerySpec:
    evidence: tuple[str, ...] = ()
    target: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "evidence", tuple(self.evidence))
        object.__setattr__(self, "target", tuple(self.target))
        overlap = set(self.evidence) & set(self.target)
        if overlap:
            raise ValidationError(f"evidence and target overlap: {sorted(overlap)}")
        if not self.target:
            raise ValidationError("query needs at least one target node")

    @classmethod
    def from_json(cls, text: str) -> "QuerySpec":
        d = json.loads(text)
        return cls(tuple(d.get("evidence", ())), tuple(d["target"]))


def infer_channel(net: NetworkSpec, q: QuerySpec) -> Channel:
    """Open channel evidence -> target, by conditioning the dense joint.

    Rows for evidence of probability zero are zero rows and are listed in
    the result's ``impossible`` attribute.
    """
    for name in q.evidence + q.target:
        net[name]
    joint = joint_state(net, q.evidence + q.target)
    if not q.evidence:
        return state(joint)
    c = disint(state(joint), len(q.evidence))
    impossible = tuple(t for t, r in zip(tuples(c.inputs), c.rows) if not r)
    return Channel(c.inputs, c.outputs, c.rows, check=False, impossible=impossible)


def jeffrey_update(net: NetworkSpec, q: QuerySpec, evidence_dist: SubDist) -> SubDist:
    """Push a soft-evidence distribution through the inferred channel.

    Mass placed on impossible evidence is lost, so the result's weight
    falls short of one by exactly that mass.
    """
    c = infer_channel(net, q)
    if evidence_dist.spaces != c.inputs:
        raise ValidationError("evidence distribution must live on the evidence wires")
    if not evidence_dist.is_proper():
        raise ValidationError("evidence distribution must be proper")
    return pushforward(evidence_dist, c)


def check_cond_independence(joint: SubDist, blocks: Sequence[Sequence[int]]) -> bool:
    """Whether A and B are independent given Z in ``joint``.

    ``blocks = (z_wires, a_wires, b_wires)`` must partition the wire
    positions of ``joint``; ``z_wires`` may be empty.
    """
    if len(blocks) != 3:
        raise ValidationError("blocks must be (Z, A, B)")
    z, a, b = (list(x) for x in blocks)
    flat = z + a + b
    if sorted(flat) != list(range(len(joint.spaces))) or not a or not b:
        raise ValidationError("blocks must partition the wires, with A and B non-empty")
    if not joint.is_proper():
        raise ValidationError("joint must be a proper distribution")
    reordered = state(joint.marginal(flat))
    nz, na, nb = len(z), len(a), len(b)
    if nz:
        h = disint(reordered, nz)
    else:
        h = reordered
    zs = h.inputs
    marg_a = compose(h, wiring(h.outputs, range(na)))
    marg_b = compose(h, wiring(h.outputs, range(na, na + nb)))
    factored = compose(wiring(zs, list(range(nz)) * 2), tensor(marg_a, marg_b))
    return channels_equal(h, factored)


@dataclass
class DerivationReport:
    labels: list[str]
    equal: list[bool]
    mismatches: dict[int, tuple] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.equal)

    def __bool__(self):
        return self.passed

    def summary(self) -> str:
        lines = []
        for i, ok in enumerate(self.equal):
            pair = f"{self.labels[i]} = {self.labels[i + 1]}"
            if ok:
                lines.append(f"ok    {pair}")
            else:
                inp, out, x, y = self.mismatches[i]
                lines.append(f"FAIL  {pair}: at input {inp}, output {out}: {x} != {y}")
        return "\n".join(lines)


Step = Union[Channel, Callable[[], Channel], tuple]


def verify_derivation(steps: Sequence[Step]) -> DerivationReport:
    """Evaluate each step and compare consecutive ones exactly.

    A step is a Channel, a zero-argument callable returning one, or a
    ``(label, step)`` pair.
    """
    labels, values = [], []
    for i, s in enumerate(steps):
        label = f"step {i}"
        if isinstance(s, tuple):
            label, s = s
        if callable(s) and not isinstance(s, Channel):
            s = s()
        labels.append(label)
        values.append(s)
    if not values:
        raise ValidationError("empty derivation")
    sig = values[0].signature
    for lab, v in zip(labels, values):
        if v.signature != sig:
            raise ValidationError(f"{lab}: signature differs from the first step")
    report = DerivationReport(labels, [])
    for i in range(len(values) - 1):
        diff = first_difference(values[i], values[i + 1])
        report.equal.append(diff is None)
        if diff is not None:
            report.mismatches[i] = diff
    return report
