"""Disintegration and Bayesian inversion (daggers).

Zero-evidence rows are always zero rows: no arbitrary conditional is ever
invented where the joint carries no mass.
"""
from __future__ import annotations

from .channel import (
    Channel,
    classify,
    compose,
    identity,
    state,
    tensor,
    wiring,
)
from .errors import ValidationError
from .kernel import ZERO, SubDist, size


def disint(f: Channel, split: int = 1) -> Channel:
    """Conditional of the trailing output wires given the first ``split`` ones.

    For ``f : X -> Y ⊗ Z`` with ``Y = f.outputs[:split]`` the result is
    ``Y ⊗ X -> Z``, each row the normalised slice ``z ↦ f(x)(y, z)``.
    """
    if isinstance(f, SubDist):
        f = state(f)
    if len(f.outputs) < 2:
        raise ValidationError("disintegration needs at least two output wires")
    if not 1 <= split < len(f.outputs):
        raise ValidationError(f"split {split} must leave both blocks non-empty")
    ys, zs = f.outputs[:split], f.outputs[split:]
    n_y, n_z, n_x = size(ys), size(zs), f.n_in
    rows = [None] * (n_y * n_x)
    for x, r in enumerate(f.rows):
        slices = [dict() for _ in range(n_y)]
        for j, w in r.items():
            y, z = divmod(j, n_z)
            slices[y][z] = w
        for y, sl in enumerate(slices):
            total = sum(sl.values(), ZERO)
            rows[y * n_x + x] = {z: w / total for z, w in sl.items()} if total else {}
    return Channel(ys + f.inputs, zs, rows, check=False)


def _joint_with_prior(f: Channel, prior: Channel) -> Channel:
    # X -> Z ⊗ Y: run the prior, copy its Y output, push one copy through f
    ny = len(f.inputs)
    if prior.outputs != f.inputs:
        raise ValidationError("prior must produce the input wires of f")
    copy_y = wiring(f.inputs, list(range(ny)) * 2)
    return compose(compose(prior, copy_y), tensor(f, identity(f.inputs)))


def dagger_state(f: Channel, omega) -> Channel:
    """Bayesian inversion ``Z -> Y`` of ``f : Y -> Z`` at the prior state ``omega``."""
    if isinstance(omega, SubDist):
        omega = state(omega)
    if omega.inputs:
        raise ValidationError("dagger_state needs a state (no input wires) as prior")
    if not f.outputs:
        # predicate f: the inversion is the prior reweighted by f, normalised
        r = {y: w * f.rows[y].get(0, ZERO) for y, w in omega.rows[0].items()}
        r = {y: w for y, w in r.items() if w}
        total = sum(r.values(), ZERO)
        return Channel((), f.inputs, [{y: w / total for y, w in r.items()}], check=False)
    return disint(_joint_with_prior(f, omega), len(f.outputs))


def dagger_channel(f: Channel, c: Channel) -> Channel:
    """Parametrised inversion ``Z ⊗ X -> Y`` of ``f : Y -> Z`` with channel prior ``c : X -> Y``."""
    if not classify(c).total:
        raise ValidationError("the prior channel of a parametrised dagger must be total")
    if not f.outputs:
        raise ValidationError("f must have at least one output wire")
    return disint(_joint_with_prior(f, c), len(f.outputs))


def recover(f: Channel, split: int = 1) -> Channel:
    """Reassemble ``f`` from its Y-marginal and its disintegration.

    ``x ↦ (y, z)`` with ``y`` drawn from the marginal and ``z`` from
    ``disint(f)(y, x)``; equals ``f`` exactly.
    """
    ys = f.outputs[:split]
    nx, ny = len(f.inputs), len(ys)
    marg = compose(f, wiring(f.outputs, list(range(ny))))
    # X -> X ⊗ X -> Y ⊗ X
    step1 = compose(wiring(f.inputs, list(range(nx)) * 2), tensor(marg, identity(f.inputs)))
    # Y ⊗ X -> Y ⊗ Y ⊗ X -> Y ⊗ Z
    dup = wiring(ys + f.inputs, [*range(ny), *range(ny), *range(ny, ny + nx)])
    step2 = compose(dup, tensor(identity(ys), disint(f, split)))
    return compose(step1, step2)
