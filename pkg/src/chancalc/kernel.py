"""Exact scalars, finite spaces and subdistributions.

Everything is built on :class:`fractions.Fraction`; no floating point ever
enters a probability.  Product spaces are flattened row-major, leftmost
factor varying slowest, which is the order produced by ``itertools.product``.
"""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def to_scalar(value) -> Fraction:
    """Parse ``value`` as an exact rational.

    Accepts Fractions, ints, Decimals and strings of the form ``"p/q"`` or
    ``"0.43"``.  Floats are rejected: they are not exact.
    """
    if isinstance(value, bool):
        raise ValidationError(f"not a probability: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ValidationError(f"cannot parse {value!r} as an exact rational") from None
    if isinstance(value, float):
        raise ValidationError(
            f"float {value!r} is inexact; pass a string such as {str(value)!r}"
        )
    raise ValidationError(f"cannot parse {value!r} as an exact rational")


def format_scalar(x: Fraction) -> str:
    return str(x)


@dataclass(frozen=True)
class FiniteSpace:
    name: str
    elements: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(str(e) for e in self.elements))
        if not self.elements:
            raise ValidationError(f"space {self.name!r} is empty")
        if len(set(self.elements)) != len(self.elements):
            raise ValidationError(f"space {self.name!r} has duplicate elements")
        for e in self.elements:
            if "," in e or not e:
                raise ValidationError(
                    f"space {self.name!r}: label {e!r} is empty or contains ','"
                )

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise ValidationError(f"{label!r} is not an element of space {self.name!r}") from None

    def __repr__(self):
        return f"FiniteSpace({self.name!r}, {list(self.elements)!r})"


def make_space(name: str, elements: Sequence[str]) -> FiniteSpace:
    return FiniteSpace(name, tuple(elements))


BOOL = FiniteSpace("2", ("0", "1"))


# -- product-space indexing -------------------------------------------------

def size(spaces: Sequence[FiniteSpace]) -> int:
    return prod(len(s) for s in spaces)


def tuples(spaces: Sequence[FiniteSpace]) -> list[tuple[str, ...]]:
    """All label tuples of the product, in flattening order."""
    return list(product(*(s.elements for s in spaces)))


def flat_index(spaces: Sequence[FiniteSpace], labels: Sequence[str]) -> int:
    if len(labels) != len(spaces):
        raise ValidationError(
            f"expected {len(spaces)} labels for {[s.name for s in spaces]}, got {list(labels)}"
        )
    i = 0
    for s, lab in zip(spaces, labels):
        i = i * len(s) + s.index(lab)
    return i


def unflatten(spaces: Sequence[FiniteSpace], i: int) -> tuple[int, ...]:
    out = []
    for s in reversed(spaces):
        i, r = divmod(i, len(s))
        out.append(r)
    return tuple(reversed(out))


def key_of(labels: Iterable[str]) -> str:
    return ",".join(labels)


def parse_key(spaces: Sequence[FiniteSpace], key: str) -> tuple[str, ...]:
    if not spaces:
        if key != "":
            raise ValidationError(f"expected empty key for a wireless tuple, got {key!r}")
        return ()
    return tuple(key.split(","))


# -- subdistributions -------------------------------------------------------

def _check_row(weights: Sequence[Fraction], what: str) -> None:
    total = ZERO
    for w in weights:
        if w < 0:
            raise ValidationError(f"{what}: negative weight {w}")
        total += w
    if total > 1:
        raise ValidationError(f"{what}: total mass {total} exceeds 1")


class SubDist:
    """A subdistribution over the product of ``spaces`` (usually one space).

    ``weights`` is dense, one entry per flattened tuple.
    """

    __slots__ = ("spaces", "weights")

    def __init__(self, spaces: Sequence[FiniteSpace], weights: Sequence[Fraction], *, check=True):
        spaces = tuple(spaces)
        weights = tuple(weights)
        if check:
            if len(weights) != size(spaces):
                raise ValidationError(
                    f"expected {size(spaces)} weights, got {len(weights)}"
                )
            weights = tuple(to_scalar(w) for w in weights)
            _check_row(weights, "subdistribution")
        object.__setattr__(self, "spaces", spaces)
        object.__setattr__(self, "weights", weights)

    def __setattr__(self, name, value):
        raise AttributeError("SubDist is immutable")

    @property
    def space(self) -> FiniteSpace:
        if len(self.spaces) != 1:
            raise ValueError("SubDist spans several wires; use .spaces")
        return self.spaces[0]

    def __eq__(self, other):
        if not isinstance(other, SubDist):
            return NotImplemented
        return self.spaces == other.spaces and self.weights == other.weights

    def __hash__(self):
        return hash((self.spaces, self.weights))

    def __getitem__(self, labels) -> Fraction:
        if isinstance(labels, str):
            labels = (labels,)
        return self.weights[flat_index(self.spaces, labels)]

    def items(self):
        """(label tuple, weight) pairs with nonzero weight, in space order."""
        return [(t, w) for t, w in zip(tuples(self.spaces), self.weights) if w]

    def weight(self) -> Fraction:
        return sum(self.weights, ZERO)

    def is_proper(self) -> bool:
        return self.weight() == 1

    def scale(self, s) -> "SubDist":
        s = to_scalar(s)
        if not 0 <= s <= 1:
            raise ValidationError(f"scale factor {s} outside [0, 1]")
        return SubDist(self.spaces, [s * w for w in self.weights], check=False)

    def marginal(self, wires: Sequence[int]) -> "SubDist":
        """Marginalise onto the wires at positions ``wires`` (in that order)."""
        wires = list(wires)
        for w in wires:
            if not 0 <= w < len(self.spaces):
                raise ValidationError(f"wire index {w} out of range")
        spaces = [self.spaces[w] for w in wires]
        out = [ZERO] * size(spaces)
        for i, wt in enumerate(self.weights):
            if not wt:
                continue
            idx = unflatten(self.spaces, i)
            j = 0
            for w, s in zip(wires, spaces):
                j = j * len(s) + idx[w]
            out[j] += wt
        return SubDist(spaces, out, check=False)

    def __repr__(self):
        terms = " + ".join(f"{w}|{key_of(t)}>" for t, w in self.items())
        return f"SubDist({terms or '0'})"


def make_subdist(space, weights: Mapping | Iterable = ()) -> SubDist:
    """Build a subdistribution from ``(label, weight)`` pairs.

    ``space`` is a FiniteSpace or a sequence of them; for several spaces the
    labels are tuples.  Unlisted labels get weight 0.
    """
    spaces = _spaces(space)
    if isinstance(weights, Mapping):
        weights = weights.items()
    dense = [ZERO] * size(spaces)
    for label, w in weights:
        if isinstance(label, str):
            label = (label,)
        w = to_scalar(w)
        if w < 0:
            raise ValidationError(f"negative weight {w} at {label}")
        dense[flat_index(spaces, label)] += w
    return SubDist(spaces, dense)


def zero_state(space) -> SubDist:
    return make_subdist(space, ())


def weight(omega: SubDist) -> Fraction:
    return omega.weight()


def normalize_weights(ws: Sequence[Fraction]) -> tuple[Fraction, ...]:
    total = sum(ws, ZERO)
    if total == 0:
        return tuple(ws)
    return tuple(w / total for w in ws)


def normalize_state(omega: SubDist) -> SubDist:
    """Rescale to total mass one; the zero subdistribution stays zero."""
    return SubDist(omega.spaces, normalize_weights(omega.weights), check=False)


def tensor_states(omega: SubDist, rho: SubDist, *more: SubDist) -> SubDist:
    ws = [a * b for a in omega.weights for b in rho.weights]
    out = SubDist(omega.spaces + rho.spaces, ws, check=False)
    return tensor_states(out, *more) if more else out


def flip(r, space: FiniteSpace = BOOL) -> SubDist:
    r = to_scalar(r)
    if len(space) != 2:
        raise ValidationError(f"flip needs a 2-element space, {space.name!r} has {len(space)}")
    if not 0 <= r <= 1:
        raise ValidationError(f"flip bias {r} outside [0, 1]")
    # bias goes on "1" when present, otherwise on the first label (s, t, c, ...)
    hit = space.index("1") if "1" in space.elements else 0
    ws = [1 - r, 1 - r]
    ws[hit] = r
    return SubDist((space,), ws, check=False)


def _spaces(space) -> tuple[FiniteSpace, ...]:
    return (space,) if isinstance(space, FiniteSpace) else tuple(space)


def uniform(space) -> SubDist:
    spaces = _spaces(space)
    n = size(spaces)
    return SubDist(spaces, [Fraction(1, n)] * n, check=False)


def point(space, label) -> SubDist:
    """Dirac state; over several spaces ``label`` is a tuple."""
    spaces = _spaces(space)
    if isinstance(label, str):
        label = (label,)
    ws = [ZERO] * size(spaces)
    ws[flat_index(spaces, label)] = ONE
    return SubDist(spaces, ws, check=False)


def standard_state(kind: str, space: FiniteSpace, arg=None) -> SubDist:
    """``kind`` is ``"flip"`` (arg = bias), ``"uniform"`` or ``"point"`` (arg = label)."""
    if kind == "flip":
        return flip(arg, space)
    if kind == "uniform":
        return uniform(space)
    if kind == "point":
        return point(space, arg)
    raise ValidationError(f"unknown standard state {kind!r}")
