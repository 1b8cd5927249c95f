"""Bayesian-network models: JSON format, validation, dense joints, builtin fixtures."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from math import prod
from typing import Mapping, Sequence

from .channel import Channel, deterministic, make_channel, state
from .errors import JointTooLargeError, ValidationError
from .kernel import (
    ZERO,
    FiniteSpace,
    SubDist,
    flip,
    key_of,
    make_space,
    make_subdist,
    to_scalar,
    tuples,
)

DEFAULT_MAX_JOINT = 10**6


def max_joint_entries() -> int:
    raw = os.environ.get("CHANCALC_MAX_JOINT")
    if not raw:
        return DEFAULT_MAX_JOINT
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"CHANCALC_MAX_JOINT={raw!r} is not an integer") from None


@dataclass(frozen=True)
class NodeSpec:
    """One node.  ``cpt`` maps the parents' product to the node's space.

    An *open* node has no CPT: it is an input wire of every query on the
    network (what an open-input intervention leaves behind).
    """

    name: str
    space: FiniteSpace
    parents: tuple[str, ...] = ()
    cpt: Channel | None = None
    exogenous: bool = False
    open: bool = False


@dataclass(frozen=True)
class NetworkSpec:
    spaces: Mapping[str, FiniteSpace]
    nodes: tuple[NodeSpec, ...]
    _index: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "_index", {n.name: n for n in self.nodes})
        _validate(self)

    def __getitem__(self, name: str) -> NodeSpec:
        try:
            return self._index[name]
        except KeyError:
            raise ValidationError(f"unknown node {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    @property
    def names(self) -> list[str]:
        return [n.name for n in self.nodes]

    @property
    def open_nodes(self) -> list[str]:
        return [n.name for n in self.nodes if n.open]

    def replace_node(self, node: NodeSpec) -> "NetworkSpec":
        nodes = [node if n.name == node.name else n for n in self.nodes]
        return NetworkSpec(self.spaces, tuple(nodes))


def _validate(net: NetworkSpec) -> None:
    seen = set()
    for n in net.nodes:
        if n.name in seen:
            raise ValidationError(f"duplicate node name {n.name!r}")
        seen.add(n.name)
    for n in net.nodes:
        for p in n.parents:
            if p not in seen:
                raise ValidationError(f"node {n.name!r}: dangling parent {p!r}")
        if n.exogenous and n.parents:
            raise ValidationError(f"exogenous node {n.name!r} has parents")
        if n.open:
            if n.parents or n.cpt is not None:
                raise ValidationError(f"open node {n.name!r} cannot have parents or a CPT")
            continue
        if n.cpt is None:
            raise ValidationError(f"node {n.name!r} has no CPT")
        want_in = tuple(net[p].space for p in n.parents)
        if n.cpt.inputs != want_in or n.cpt.outputs != (n.space,):
            raise ValidationError(f"node {n.name!r}: CPT signature does not match parents/space")
        for t, m in zip(tuples(n.cpt.inputs), n.cpt.row_masses()):
            if m != 1:
                raise ValidationError(
                    f"node {n.name!r}: CPT row ({key_of(t)}) sums to {m}, not 1"
                )
    # nodes must already be in topological order
    pos = {n.name: i for i, n in enumerate(net.nodes)}
    try:
        tuple(TopologicalSorter({n.name: n.parents for n in net.nodes}).static_order())
    except CycleError as e:
        raise ValidationError(f"parent relation has a cycle: {e.args[1]}") from None
    for n in net.nodes:
        for p in n.parents:
            if pos[p] > pos[n.name]:
                raise ValidationError(f"node {n.name!r} listed before its parent {p!r}")


def _topo_sort(nodes: Sequence[NodeSpec]) -> list[NodeSpec]:
    names = {n.name for n in nodes}
    graph = {n.name: tuple(p for p in n.parents if p in names) for n in nodes}
    for n in nodes:
        for p in n.parents:
            if p not in names:
                raise ValidationError(f"node {n.name!r}: dangling parent {p!r}")
    ts = TopologicalSorter(graph)
    try:
        ts.prepare()
    except CycleError as e:
        raise ValidationError(f"parent relation has a cycle: {' -> '.join(e.args[1])}") from None
    # stable: among ready nodes keep declaration order
    order = {n.name: i for i, n in enumerate(nodes)}
    by_name = {n.name: n for n in nodes}
    out = []
    while ts.is_active():
        ready = sorted(ts.get_ready(), key=order.__getitem__)
        for name in ready:
            out.append(by_name[name])
            ts.done(name)
    return out


# -- JSON format ------------------------------------------------------------------

def parse_network(text: str | Mapping) -> NetworkSpec:
    """Parse and validate a model document (JSON text or an already-loaded dict)."""
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text, parse_float=Fraction)
        except json.JSONDecodeError as e:
            raise ValidationError(f"invalid JSON: {e}") from None
    else:
        doc = text
    if not isinstance(doc, Mapping) or "spaces" not in doc or "nodes" not in doc:
        raise ValidationError('model must be an object with "spaces" and "nodes"')
    if not isinstance(doc["spaces"], Mapping):
        raise ValidationError('"spaces" must map names to label lists')
    spaces = {}
    for name, labels in doc["spaces"].items():
        if not isinstance(labels, list):
            raise ValidationError(f"space {name!r}: labels must be a list")
        spaces[name] = make_space(name, labels)
    if not isinstance(doc["nodes"], list):
        raise ValidationError('"nodes" must be a list')
    nodes = []
    for raw in doc["nodes"]:
        if not isinstance(raw, Mapping):
            raise ValidationError("each node must be an object")
        for k in ("name", "space", "cpt"):
            if k not in raw:
                raise ValidationError(f"node {raw.get('name', '?')!r}: missing field {k!r}")
        name = raw["name"]
        if raw["space"] not in spaces:
            raise ValidationError(f"node {name!r}: unknown space {raw['space']!r}")
        if any(name == n for n, _, _ in nodes):
            raise ValidationError(f"duplicate node name {name!r}")
        parents = tuple(raw.get("parents", ()))
        if raw.get("exogenous", False) and parents:
            raise ValidationError(f"exogenous node {name!r} has parents")
        nodes.append((name, raw, parents))
    node_space = {name: spaces[raw["space"]] for name, raw, _ in nodes}
    specs = []
    for name, raw, parents in nodes:
        for p in parents:
            if p not in node_space:
                raise ValidationError(f"node {name!r}: dangling parent {p!r}")
        inputs = [node_space[p] for p in parents]
        out = node_space[name]
        if not isinstance(raw["cpt"], Mapping):
            raise ValidationError(f"node {name!r}: cpt must be an object")
        rows = {}
        for key, row in raw["cpt"].items():
            labels = tuple(key.split(",")) if parents else ()
            if parents and len(labels) != len(parents):
                raise ValidationError(f"node {name!r}: bad CPT key {key!r}")
            if not parents and key != "":
                raise ValidationError(f'node {name!r}: a parentless CPT uses the key ""')
            if not isinstance(row, Mapping):
                raise ValidationError(f"node {name!r}: CPT row {key!r} must be an object")
            rows[labels] = [((lab,), _prob(v, name)) for lab, v in row.items()]
        try:
            cpt = make_channel(inputs, [out], rows)
        except ValidationError as e:
            raise ValidationError(f"node {name!r}: {e}") from None
        specs.append(NodeSpec(name, out, parents, cpt, bool(raw.get("exogenous", False))))
    return NetworkSpec(spaces, tuple(_topo_sort(specs)))


def _prob(v, node):
    if isinstance(v, float):
        v = Fraction(repr(v))
    try:
        return to_scalar(v)
    except ValidationError as e:
        raise ValidationError(f"node {node!r}: {e}") from None


def network_to_dict(net: NetworkSpec) -> dict:
    used = []
    for n in net.nodes:
        if n.space.name not in used:
            used.append(n.space.name)
    spaces = {name: list(net.spaces[name].elements) for name in net.spaces}
    nodes = []
    for n in net.nodes:
        if n.open:
            raise ValidationError(f"node {n.name!r} is open; open networks have no file form")
        cpt = {}
        for t, r in zip(tuples(n.cpt.inputs), n.cpt.rows):
            cpt[key_of(t)] = {n.space.elements[j]: str(r[j]) for j in sorted(r)}
        nodes.append({
            "name": n.name,
            "space": n.space.name,
            "parents": list(n.parents),
            "exogenous": n.exogenous,
            "cpt": cpt,
        })
    return {"spaces": spaces, "nodes": nodes}


def dump_network(net: NetworkSpec) -> str:
    return json.dumps(network_to_dict(net), ensure_ascii=False, indent=1)


# -- joints -------------------------------------------------------------------------

def network_channel(net: NetworkSpec, inputs: Sequence[str], keep: Sequence[str]) -> Channel:
    """Channel from the open nodes ``inputs`` to the marginal on ``keep``.

    Brute-force enumeration of all node assignments, skipping zero branches.
    Every open node must be listed in ``inputs``.
    """
    inputs, keep = list(inputs), list(keep)
    for name in inputs + keep:
        net[name]
    missing = [n for n in net.open_nodes if n not in inputs]
    if missing:
        raise ValidationError(f"open node(s) {missing} must be supplied as inputs")
    for name in inputs:
        if not net[name].open:
            raise ValidationError(f"{name!r} is not an open node")
    total = prod(len(n.space) for n in net.nodes)
    if total > max_joint_entries():
        raise JointTooLargeError(
            f"dense joint has {total} entries, above CHANCALC_MAX_JOINT={max_joint_entries()}"
        )
    in_spaces = [net[n].space for n in inputs]
    out_spaces = [net[n].space for n in keep]
    pos = {n.name: i for i, n in enumerate(net.nodes)}
    plan = []
    for n in net.nodes:
        if n.open:
            plan.append((n, None, None))
        else:
            ppos = [pos[p] for p in n.parents]
            plan.append((n, ppos, [len(net[p].space) for p in n.parents]))
    keep_pos = [pos[k] for k in keep]
    keep_sizes = [len(net[k].space) for k in keep]
    rows = []
    for in_t in tuples(in_spaces):
        fixed = {pos[name]: net[name].space.index(lab) for name, lab in zip(inputs, in_t)}
        acc: dict[int, Fraction] = {}
        assign = [0] * len(net.nodes)

        def walk(i, p):
            if i == len(plan):
                j = 0
                for kp, ks in zip(keep_pos, keep_sizes):
                    j = j * ks + assign[kp]
                acc[j] = acc.get(j, ZERO) + p
                return
            node, ppos, psizes = plan[i]
            if ppos is None:
                assign[i] = fixed[i]
                walk(i + 1, p)
                return
            r = 0
            for q, s in zip(ppos, psizes):
                r = r * s + assign[q]
            for v, w in node.cpt.rows[r].items():
                assign[i] = v
                walk(i + 1, p * w)

        walk(0, Fraction(1))
        rows.append({j: w for j, w in acc.items() if w})
    return Channel(in_spaces, out_spaces, rows, check=False)


def joint_state(net: NetworkSpec, keep: Sequence[str] | None = None) -> SubDist:
    """Joint distribution of the closed network, marginalised onto ``keep`` (in order)."""
    if keep is None:
        keep = net.names
    if net.open_nodes:
        raise ValidationError(f"network has open inputs {net.open_nodes}; use network_channel")
    return network_channel(net, [], keep).as_subdist()


# -- builtin fixtures ---------------------------------------------------------------

BOOL = make_space("2", ["0", "1"])

OR = deterministic((BOOL, BOOL), BOOL, lambda x, y: str(int(x == "1" or y == "1")))
AND = deterministic((BOOL, BOOL), BOOL, lambda x, y: str(int(x == "1" and y == "1")))

# Output wires of the fault-tree joint, left to right.  Wire 2 is the
# conditioned or-gate, wire 5 the top event.
FAULT_TREE_WIRES = ("A", "G1", "B", "G3", "TOP", "G2", "C", "E")

FAULT_TREE_LEAVES = {"A": Fraction(1, 2), "B": Fraction(1, 3), "C": Fraction(1, 4), "E": Fraction(1, 5)}


def _root(name, space, omega, exogenous=False):
    return NodeSpec(name, space, (), state(omega), exogenous)


def fault_tree() -> NetworkSpec:
    leaves = [_root(n, BOOL, flip(r)) for n, r in FAULT_TREE_LEAVES.items()]
    gates = [
        NodeSpec("G1", BOOL, ("A", "B"), OR),
        NodeSpec("G2", BOOL, ("B", "C"), OR),
        NodeSpec("G3", BOOL, ("G1", "G2"), AND),
        NodeSpec("TOP", BOOL, ("G3", "E"), AND),
    ]
    return NetworkSpec({"2": BOOL}, tuple(leaves + gates))


def _child_spaces():
    return {s.name: s for s in [
        make_space("BA", ["ba", "~ba"]),
        make_space("DI", ["pfc", "tga", "flt", "pis", "tpd", "lng"]),
        make_space("DF", ["lt", "no", "rt"]),
        make_space("CM", ["no", "mi", "co", "tr"]),
        make_space("LP", ["nr", "cg", "ab"]),
        make_space("CO", ["nr", "lo", "hi"]),
        make_space("HD", ["eq", "~eq"]),
        make_space("HI", ["mi", "mo", "se"]),
        make_space("LB", ["<5", "5-12", "12+"]),
    ]}


_CHILD_CPTS = {
    "d": ("BA", "DI", {
        "ba": "0.2 0.3 0.25 0.15 0.05 0.05",
        "~ba": "0.03 0.34 0.3 0.23 0.05 0.05",
    }),
    "df": ("DI", "DF", {
        "pfc": "0.15 0.05 0.8",
        "tga": "0.1 0.8 0.1",
        "flt": "0.8 0.2 0",
        "pis": "1 0 0",
        "tpd": "0.33 0.33 0.34",
        "lng": "0.2 0.4 0.4",
    }),
    "cm": ("DI", "CM", {
        "pfc": "0.4 0.43 0.15 0.02",
        "tga": "0.02 0.09 0.09 0.8",
        "flt": "0.02 0.16 0.8 0.02",
        "pis": "0.01 0.02 0.95 0.02",
        "tpd": "0.01 0.03 0.95 0.01",
        "lng": "0.4 0.53 0.05 0.02",
    }),
    "lp": ("DI", "LP", {
        "pfc": "0.6 0.1 0.3",
        "tga": "0.8 0.05 0.15",
        "flt": "0.8 0.05 0.15",
        "pis": "0.8 0.05 0.15",
        "tpd": "0.1 0.6 0.3",
        "lng": "0.03 0.25 0.72",
    }),
    "co": ("LP", "CO", {
        "nr": "0.8 0.1 0.1",
        "cg": "0.65 0.05 0.3",
        "ab": "0.45 0.05 0.5",
    }),
    "hd": (("DF", "CM"), "HD", {
        ("lt", "no"): "0.95 0.05",
        ("lt", "mi"): "0.95 0.05",
        ("lt", "co"): "0.95 0.05",
        ("lt", "tr"): "0.95 0.05",
        ("no", "no"): "0.95 0.05",
        ("no", "mi"): "0.95 0.05",
        ("no", "co"): "0.95 0.05",
        ("no", "tr"): "0.95 0.05",
        ("rt", "no"): "0.05 0.95",
        ("rt", "mi"): "0.5 0.5",
        ("rt", "co"): "0.95 0.05",
        ("rt", "tr"): "0.5 0.5",
    }),
    "hi": (("CM", "LP"), "HI", {
        ("no", "nr"): "0.93 0.05 0.02",
        ("no", "cg"): "0.15 0.8 0.05",
        ("no", "ab"): "0.7 0.2 0.1",
        ("mi", "nr"): "0.1 0.8 0.1",
        ("mi", "cg"): "0.1 0.75 0.15",
        ("mi", "ab"): "0.1 0.65 0.25",
        ("co", "nr"): "0.1 0.7 0.2",
        ("co", "cg"): "0.05 0.65 0.3",
        ("co", "ab"): "0.1 0.5 0.4",
        ("tr", "nr"): "0.02 0.18 0.8",
        ("tr", "cg"): "0.1 0.3 0.6",
        ("tr", "ab"): "0.02 0.18 0.8",
    }),
    "lb": (("HD", "HI"), "LB", {
        ("eq", "mi"): "0.1 0.3 0.6",
        ("eq", "mo"): "0.3 0.6 0.1",
        ("eq", "se"): "0.5 0.4 0.1",
        ("~eq", "mi"): "0.4 0.5 0.1",
        ("~eq", "mo"): "0.5 0.45 0.05",
        ("~eq", "se"): "0.6 0.35 0.05",
    }),
}

CHILD_PRIOR = {"ba": "0.1", "~ba": "0.9"}


def child_channels() -> dict[str, Channel]:
    """The Child CPTs as channels, keyed by their lower-case names."""
    spaces = _child_spaces()
    out = {}
    for name, (ins, outs, table) in _CHILD_CPTS.items():
        ins = (ins,) if isinstance(ins, str) else ins
        inputs = [spaces[s] for s in ins]
        target = spaces[outs]
        rows = {}
        for key, ws in table.items():
            key = (key,) if isinstance(key, str) else key
            rows[key] = list(zip(((e,) for e in target.elements), ws.split()))
        out[name] = make_channel(inputs, [target], rows)
    return out


def child_prior() -> SubDist:
    return make_subdist(_child_spaces()["BA"], CHILD_PRIOR)


def child() -> NetworkSpec:
    spaces = _child_spaces()
    ch = child_channels()
    nodes = [
        NodeSpec("BA", spaces["BA"], (), state(child_prior())),
        NodeSpec("DI", spaces["DI"], ("BA",), ch["d"]),
        NodeSpec("DF", spaces["DF"], ("DI",), ch["df"]),
        NodeSpec("CM", spaces["CM"], ("DI",), ch["cm"]),
        NodeSpec("LP", spaces["LP"], ("DI",), ch["lp"]),
        NodeSpec("CO", spaces["CO"], ("LP",), ch["co"]),
        NodeSpec("HD", spaces["HD"], ("DF", "CM"), ch["hd"]),
        NodeSpec("HI", spaces["HI"], ("CM", "LP"), ch["hi"]),
        NodeSpec("LB", spaces["LB"], ("HD", "HI"), ch["lb"]),
    ]
    return NetworkSpec(spaces, tuple(nodes))


def joins() -> NetworkSpec:
    half = Fraction(1, 2)
    nodes = [
        _root("Z", BOOL, flip(half)),
        _root("X", BOOL, flip(half)),
        _root("Y", BOOL, flip(half)),
        NodeSpec("A", BOOL, ("X", "Z"), OR),
        NodeSpec("B", BOOL, ("Z", "Y"), OR),
    ]
    return NetworkSpec({"2": BOOL}, tuple(nodes))


SMOKING_SPACES = (
    make_space("S", ["s", "~s"]),
    make_space("T", ["t", "~t"]),
    make_space("C", ["c", "~c"]),
)

SMOKING_TABLE = {
    ("s", "t", "c"): "1/5",
    ("s", "t", "~c"): "1/50",
    ("s", "~t", "c"): "1/20",
    ("s", "~t", "~c"): "1/10",
    ("~s", "t", "c"): "1/50",
    ("~s", "t", "~c"): "1/100",
    ("~s", "~t", "c"): "1/10",
    ("~s", "~t", "~c"): "1/2",
}


def smoking_joint() -> SubDist:
    return make_subdist(SMOKING_SPACES, SMOKING_TABLE)


MEDICAL_NOISE = {"Ur": Fraction(1, 4), "Uz": Fraction(19, 20), "Ux": Fraction(9, 10), "Uy": Fraction(7, 10)}


def _fz(a, b):
    return "1" if a == b == "1" else "0"


def _fx(a, b):
    return "1" if a == b else "0"


def _fy(a, b, c):
    hit = (a == b == "1") or (a == "0" and b == c == "1") or (a == b == c == "0")
    return "1" if hit else "0"


def medical() -> NetworkSpec:
    noise = [_root(n, BOOL, flip(r), exogenous=True) for n, r in MEDICAL_NOISE.items()]
    mech = [
        NodeSpec("Z", BOOL, ("Ur", "Uz"), deterministic((BOOL, BOOL), BOOL, _fz)),
        NodeSpec("X", BOOL, ("Z", "Ux"), deterministic((BOOL, BOOL), BOOL, _fx)),
        NodeSpec("Y", BOOL, ("X", "Ur", "Uy"), deterministic((BOOL, BOOL, BOOL), BOOL, _fy)),
    ]
    return NetworkSpec({"2": BOOL}, tuple(noise + mech))


BUILTINS = {
    "fault_tree": fault_tree,
    "child": child,
    "joins": joins,
    "smoking_joint": smoking_joint,
    "medical": medical,
}


def builtin_example(name: str):
    """A fresh copy of one of the five builtin fixtures (a NetworkSpec or, for
    ``smoking_joint``, a SubDist)."""
    try:
        return BUILTINS[name]()
    except KeyError:
        raise ValidationError(f"unknown example {name!r}; choose from {sorted(BUILTINS)}") from None


def with_state(net: NetworkSpec, name: str, omega: SubDist) -> NetworkSpec:
    """Replace a node's mechanism by a parentless state."""
    node = net[name]
    if omega.spaces != (node.space,):
        raise ValidationError(f"replacement state for {name!r} must live on {node.space.name!r}")
    return net.replace_node(replace(node, parents=(), cpt=state(omega), open=False))
