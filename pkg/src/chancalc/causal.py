"""Interventions, front-door identification from a joint, and counterfactuals
via twin networks."""
from __future__ import annotations

from dataclasses import dataclass, replace

from .channel import Channel, classify, compose, identity, state, tensor
from .disint import disint
from .errors import IdentifiabilityError, ValidationError
from .inference import QuerySpec, infer_channel
from .kernel import SubDist, point
from .netmodel import NetworkSpec, NodeSpec, network_channel, with_state


@dataclass(frozen=True)
class InterventionSpec:
    """Cut ``node`` from its parents.

    ``policy="open_input"`` leaves an input wire; ``policy="replace"``
    substitutes the proper state ``replacement``.
    """

    node: str
    policy: str = "open_input"
    replacement: SubDist | None = None

    def __post_init__(self):
        if self.policy not in ("open_input", "replace"):
            raise ValidationError(f"unknown intervention policy {self.policy!r}")
        if self.policy == "replace":
            if self.replacement is None:
                raise ValidationError("replace policy needs a replacement state")
            if not self.replacement.is_proper():
                raise ValidationError("replacement state must be a proper distribution")


def intervene(net: NetworkSpec, iv: InterventionSpec) -> NetworkSpec:
    node = net[iv.node]
    if iv.policy == "replace":
        return with_state(net, iv.node, iv.replacement)
    return net.replace_node(replace(node, parents=(), cpt=None, exogenous=False, open=True))


def do_channel(net: NetworkSpec, cause: str, effect: str) -> Channel:
    """Interventional channel cause -> effect (open-input surgery at ``cause``)."""
    if cause == effect:
        raise ValidationError("cause and effect must differ")
    net[cause], net[effect]
    if net.open_nodes:
        raise ValidationError(f"network already has open inputs {net.open_nodes}")
    cut = intervene(net, InterventionSpec(cause))
    return network_channel(cut, [cause], [effect])


def front_door_do(sigma: SubDist) -> Channel:
    """Causal channel S -> C from a joint on S ⊗ T ⊗ C with mediator T.

    ``do(s)(c) = Σ_t P(t|s) Σ_s' P(s') P(c|s',t)``, assembled from the
    marginal on S and two disintegrations of ``sigma``.  Raises
    :class:`IdentifiabilityError` when some needed ``P(c|s',t)`` sits on a
    zero row.
    """
    if len(sigma.spaces) != 3:
        raise ValidationError("front_door_do expects a joint on exactly three wires (S, T, C)")
    if not sigma.is_proper():
        raise ValidationError("joint must be a proper distribution")
    S, T, _ = sigma.spaces
    p_s = sigma.marginal([0])
    s_to_t = disint(state(sigma.marginal([0, 1])), 1)      # S -> T
    st_to_c = disint(state(sigma), 2)                     # S ⊗ T -> C
    reachable = {t for s, w in enumerate(p_s.weights) if w for t in s_to_t.rows[s]}
    for t in sorted(reachable):
        for s2, w in enumerate(p_s.weights):
            if w and not st_to_c.rows[s2 * len(T) + t]:
                row = (S.elements[s2], T.elements[t])
                raise IdentifiabilityError(
                    f"P(C | S={row[0]}, T={row[1]}) is undefined but needed: "
                    "the mediator channel lacks full support",
                    row=row,
                )
    # T -> S ⊗ T -> C, averaging the second stage over the S-marginal
    adjusted = compose(tensor(state(p_s), identity(T)), st_to_c)
    return compose(s_to_t, adjusted)


@dataclass(frozen=True)
class CounterfactualSpec:
    """``forced`` is a sequence of ``(node, label)`` pairs applied to the
    counterfactual copy; ``shared=None`` shares every exogenous node."""

    forced: tuple[tuple[str, str], ...] = ()
    observed: tuple[str, ...] = ()
    cf_target: tuple[str, ...] = ()
    shared: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "forced", tuple(tuple(p) for p in self.forced))
        object.__setattr__(self, "observed", tuple(self.observed))
        object.__setattr__(self, "cf_target", tuple(self.cf_target))
        if self.shared is not None:
            object.__setattr__(self, "shared", tuple(self.shared))


def twin_name(name: str) -> str:
    return name if name.endswith("'") else name + "'"


def twin_network(net: NetworkSpec, cf: CounterfactualSpec) -> NetworkSpec:
    """Factual and counterfactual copies of every mechanism sharing noise.

    Counterfactual copies are named with a trailing ``'``.  Endogenous CPTs
    must already be deterministic (noise pushed into exogenous nodes).
    """
    exo = [n.name for n in net.nodes if n.exogenous]
    shared = set(exo if cf.shared is None else cf.shared)
    for name in shared:
        if not net[name].exogenous:
            raise ValidationError(f"shared node {name!r} is not exogenous")
    forced = {}
    for name, label in cf.forced:
        node = net[name]
        if node.exogenous:
            raise ValidationError(f"cannot force exogenous node {name!r}")
        node.space.index(label)
        forced[name] = label
    for n in net.nodes:
        if n.open:
            raise ValidationError(f"node {n.name!r} is open; twin networks need a closed model")
        if not n.exogenous and not classify(n.cpt).deterministic:
            raise ValidationError(
                f"endogenous node {n.name!r} is not deterministic; push its randomness "
                "into an exogenous node first"
            )
    for name in cf.observed:
        net[name]
    for name in cf.cf_target:
        net[name.rstrip("'")]

    def cf_parent(p):
        return p if p in shared else twin_name(p)

    factual = list(net.nodes)
    counter = []
    for n in net.nodes:
        if n.name in shared:
            continue
        if n.name in forced:
            counter.append(NodeSpec(twin_name(n.name), n.space, (), state(point(n.space, forced[n.name]))))
        else:
            counter.append(replace(n, name=twin_name(n.name), parents=tuple(cf_parent(p) for p in n.parents)))
    return NetworkSpec(net.spaces, tuple(factual + counter))


def counterfactual_channel(net: NetworkSpec, cf: CounterfactualSpec) -> Channel:
    """Observed factual nodes -> counterfactual targets, on the twin network."""
    twin = twin_network(net, cf)
    targets = tuple(twin_name(t) for t in cf.cf_target)
    return infer_channel(twin, QuerySpec(cf.observed, targets))
