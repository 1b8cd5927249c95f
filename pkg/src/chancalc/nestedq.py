"""Nested normalisation: comparator powers and the coordination game."""
from __future__ import annotations

from .channel import comparator, compose, nrm, state, tensor
from .errors import ValidationError
from .kernel import SubDist, normalize_state

MAX_DEPTH = 64


def power_state(omega: SubDist, n: int) -> SubDist:
    """Normalisation of ``x ↦ omega(x)**n``."""
    if n < 1:
        raise ValidationError("power must be at least 1")
    if omega.weight() == 0:
        raise ValidationError("cannot take powers of the zero subdistribution")
    return normalize_state(SubDist(omega.spaces, [w**n for w in omega.weights], check=False))


def _meet(location: SubDist, other: SubDist) -> SubDist:
    # sample own location and a prediction of the other, condition on equality
    space = location.space
    both = tensor(state(location), state(other))
    return nrm(compose(both, comparator(space))).as_subdist()


def coord_agent(location: SubDist, agent: str, depth: int, max_depth: int = MAX_DEPTH) -> SubDist:
    """Evaluate the mutually recursive Alice/Bob agents directly.

    ``bob(0)`` is ``location``; ``alice(n)`` meets ``bob(n-1)`` and
    ``bob(n)`` meets ``alice(n)``.
    """
    if agent not in ("alice", "bob"):
        raise ValidationError(f"agent must be 'alice' or 'bob', not {agent!r}")
    if depth < 0 or (agent == "alice" and depth < 1):
        raise ValidationError(f"{agent} is defined from depth {1 if agent == 'alice' else 0}")
    if depth > max_depth:
        raise ValidationError(f"depth {depth} exceeds the cap of {max_depth}")
    if len(location.spaces) != 1:
        raise ValidationError("location must live on a single space")
    if not location.is_proper():
        raise ValidationError("location must be a proper distribution")
    bob = location
    for _ in range(depth):
        alice = _meet(location, bob)
        bob = _meet(location, alice)
    if agent == "bob":
        return bob
    return alice
