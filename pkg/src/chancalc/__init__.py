"""Exact compositional inference with discrete probabilistic channels."""
from .causal import (
    CounterfactualSpec,
    InterventionSpec,
    counterfactual_channel,
    do_channel,
    front_door_do,
    intervene,
    twin_network,
)
from .channel import (
    Channel,
    cap,
    channels_equal,
    classify,
    comparator,
    compose,
    copy,
    deterministic,
    discard,
    dom,
    generator,
    identity,
    make_channel,
    nrm,
    pushforward,
    state,
    swap,
    tensor,
    wiring,
)
from .disint import dagger_channel, dagger_state, disint
from .errors import (
    ChancalcError,
    IdentifiabilityError,
    InferenceError,
    JointTooLargeError,
    ValidationError,
)
from .inference import (
    QuerySpec,
    check_cond_independence,
    infer_channel,
    jeffrey_update,
    verify_derivation,
)
from .kernel import (
    FiniteSpace,
    SubDist,
    flip,
    make_space,
    make_subdist,
    normalize_state,
    point,
    standard_state,
    tensor_states,
    uniform,
    weight,
)
from .nestedq import coord_agent, power_state
from .netmodel import (
    NetworkSpec,
    NodeSpec,
    builtin_example,
    dump_network,
    joint_state,
    parse_network,
)

__version__ = "0.1.0"

__all__ = [
    "CounterfactualSpec",
    "InterventionSpec",
    "counterfactual_channel",
    "do_channel",
    "front_door_do",
    "intervene",
    "twin_network",
    "Channel",
    "cap",
    "channels_equal",
    "classify",
    "comparator",
    "compose",
    "copy",
    "deterministic",
    "discard",
    "dom",
    "generator",
    "identity",
    "make_channel",
    "nrm",
    "pushforward",
    "state",
    "swap",
    "tensor",
    "wiring",
    "ChancalcError",
    "IdentifiabilityError",
    "InferenceError",
    "JointTooLargeError",
    "ValidationError",
    "QuerySpec",
    "check_cond_independence",
    "infer_channel",
    "jeffrey_update",
    "verify_derivation",
    "FiniteSpace",
    "SubDist",
    "flip",
    "make_space",
    "make_subdist",
    "normalize_state",
    "point",
    "standard_state",
    "tensor_states",
    "uniform",
    "weight",
    "NetworkSpec",
    "NodeSpec",
    "builtin_example",
    "dump_network",
    "joint_state",
    "parse_network",
    "dagger_channel",
    "dagger_state",
    "disint",
    "coord_agent",
    "power_state",
]
