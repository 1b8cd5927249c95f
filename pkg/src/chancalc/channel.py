"""Subchannels between finite product spaces.

A :class:`Channel` maps each tuple of input labels to a subdistribution over
tuples of output labels.  Input and output are *lists* of spaces (wires); an
empty input list is a state, an empty output list a predicate.

Rows are stored sparsely (zero entries omitted) but the semantics is the
dense matrix; :meth:`Channel.matrix` materialises it.  ``f >> g`` is
sequential composition (``g`` after ``f``) and ``f @ g`` is the tensor.
"""
from __future__ import annotations

import json
from collections import namedtuple
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ValidationError
from .kernel import (
    ONE,
    ZERO,
    FiniteSpace,
    SubDist,
    flat_index,
    key_of,
    parse_key,
    size,
    to_scalar,
    tuples,
    unflatten,
)

Classification = namedtuple("Classification", "total deterministic full_support")


def _as_spaces(spaces) -> tuple[FiniteSpace, ...]:
    if isinstance(spaces, FiniteSpace):
        return (spaces,)
    return tuple(spaces)


def _names(spaces):
    return [s.name for s in spaces]


class Channel:
    __slots__ = ("inputs", "outputs", "rows", "impossible")

    def __init__(self, inputs, outputs, rows: Sequence[Mapping[int, Fraction]],
                 *, check: bool = True, impossible: Sequence[tuple[str, ...]] = ()):
        inputs, outputs = _as_spaces(inputs), _as_spaces(outputs)
        rows = tuple(rows)
        if check:
            if len(rows) != size(inputs):
                raise ValidationError(f"expected {size(inputs)} rows, got {len(rows)}")
            n_out = size(outputs)
            clean = []
            for i, row in enumerate(rows):
                r = {}
                total = ZERO
                for j, w in row.items():
                    w = to_scalar(w)
                    if not 0 <= j < n_out:
                        raise ValidationError(f"column {j} out of range")
                    if w < 0:
                        raise ValidationError(f"row {self._row_label(inputs, i)}: negative weight {w}")
                    if w:
                        r[j] = w
                        total += w
                if total > 1:
                    raise ValidationError(
                        f"row {self._row_label(inputs, i)}: mass {total} exceeds 1"
                    )
                clean.append(r)
            rows = tuple(clean)
        object.__setattr__(self, "inputs", inputs)
        object.__setattr__(self, "outputs", outputs)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "impossible", tuple(impossible))

    @staticmethod
    def _row_label(inputs, i):
        idx = unflatten(inputs, i)
        return "(" + key_of(s.elements[k] for s, k in zip(inputs, idx)) + ")"

    def __setattr__(self, name, value):
        raise AttributeError("Channel is immutable")

    # -- access ---------------------------------------------------------------

    @property
    def n_in(self) -> int:
        return len(self.rows)

    @property
    def n_out(self) -> int:
        return size(self.outputs)

    @property
    def signature(self):
        return (self.inputs, self.outputs)

    def row(self, labels=()) -> SubDist:
        if isinstance(labels, str):
            labels = (labels,)
        r = self.rows[flat_index(self.inputs, labels)]
        ws = [ZERO] * self.n_out
        for j, w in r.items():
            ws[j] = w
        return SubDist(self.outputs, ws, check=False)

    __call__ = row

    def entry(self, in_labels, out_labels) -> Fraction:
        if isinstance(in_labels, str):
            in_labels = (in_labels,)
        if isinstance(out_labels, str):
            out_labels = (out_labels,)
        i = flat_index(self.inputs, in_labels)
        return self.rows[i].get(flat_index(self.outputs, out_labels), ZERO)

    def matrix(self) -> list[list[Fraction]]:
        n = self.n_out
        out = []
        for r in self.rows:
            dense = [ZERO] * n
            for j, w in r.items():
                dense[j] = w
            out.append(dense)
        return out

    def row_masses(self) -> list[Fraction]:
        return [sum(r.values(), ZERO) for r in self.rows]

    def as_subdist(self) -> SubDist:
        if self.inputs:
            raise ValidationError("only a state (no input wires) converts to a SubDist")
        return self.row(())

    # -- algebra sugar ----------------------------------------------------------

    def __rshift__(self, other: "Channel") -> "Channel":
        return compose(self, other)

    def __matmul__(self, other: "Channel") -> "Channel":
        return tensor(self, other)

    def __eq__(self, other):
        if not isinstance(other, Channel):
            return NotImplemented
        return self.signature == other.signature and self.rows == other.rows

    def __hash__(self):
        return hash((self.inputs, self.outputs, tuple(tuple(sorted(r.items())) for r in self.rows)))

    def __repr__(self):
        return f"Channel({_names(self.inputs)} -> {_names(self.outputs)})"

    # -- serialisation ------------------------------------------------------------

    def to_dict(self) -> dict:
        rows = {}
        out_tuples = tuples(self.outputs)
        for in_t, r in zip(tuples(self.inputs), self.rows):
            rows[key_of(in_t)] = {key_of(out_tuples[j]): str(r[j]) for j in sorted(r)}
        d = {"inputs": _names(self.inputs), "outputs": _names(self.outputs), "rows": rows}
        if self.impossible:
            d["impossible"] = [key_of(t) for t in self.impossible]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: Mapping, spaces: Mapping[str, FiniteSpace]) -> "Channel":
        try:
            inputs = [spaces[n] for n in d["inputs"]]
            outputs = [spaces[n] for n in d["outputs"]]
        except KeyError as e:
            raise ValidationError(f"unknown space {e.args[0]!r}") from None
        rows = {}
        for k, row in d.get("rows", {}).items():
            rows[parse_key(inputs, k)] = [(parse_key(outputs, ok), w) for ok, w in row.items()]
        return make_channel(inputs, outputs, rows)


# -- construction ---------------------------------------------------------------

def make_channel(inputs, outputs, rows: Mapping) -> Channel:
    """Dense channel from sparse rows.

    ``rows`` maps an input label tuple to an iterable of ``(output label
    tuple, weight)`` pairs or to a mapping output tuple -> weight.  Single
    labels may be given as plain strings.  Missing rows and entries are zero.
    """
    inputs, outputs = _as_spaces(inputs), _as_spaces(outputs)
    dense = [dict() for _ in range(size(inputs))]
    for in_lab, entries in rows.items():
        if isinstance(in_lab, str):
            in_lab = (in_lab,) if inputs else ()
        i = flat_index(inputs, in_lab)
        if isinstance(entries, Mapping):
            entries = entries.items()
        for out_lab, w in entries:
            if isinstance(out_lab, str):
                out_lab = (out_lab,) if outputs else ()
            w = to_scalar(w)
            if w < 0:
                raise ValidationError(f"negative weight {w} at {in_lab} -> {out_lab}")
            j = flat_index(outputs, out_lab)
            dense[i][j] = dense[i].get(j, ZERO) + w
    return Channel(inputs, outputs, dense)


def from_function(inputs, outputs, fn: Callable) -> Channel:
    """Channel whose row at input tuple ``x`` is ``fn(*x)``.

    ``fn`` returns a SubDist over ``outputs`` or an iterable of
    ``(output tuple, weight)`` pairs.
    """
    inputs, outputs = _as_spaces(inputs), _as_spaces(outputs)
    rows = {}
    for t in tuples(inputs):
        res = fn(*t)
        if isinstance(res, SubDist):
            res = res.items()
        rows[t] = list(res)
    return make_channel(inputs, outputs, rows)


def deterministic(inputs, outputs, fn: Callable) -> Channel:
    """Deterministic channel; ``fn(*labels)`` returns the output label(s)."""
    inputs, outputs = _as_spaces(inputs), _as_spaces(outputs)
    rows = []
    for t in tuples(inputs):
        out = fn(*t)
        if isinstance(out, str):
            out = (out,)
        rows.append({flat_index(outputs, out): ONE})
    return Channel(inputs, outputs, rows)


def state(omega: SubDist) -> Channel:
    """View a subdistribution as a channel with no input wires."""
    return Channel((), omega.spaces, [{j: w for j, w in enumerate(omega.weights) if w}], check=False)


def constant(inputs, omega: SubDist) -> Channel:
    """Discard the inputs, then emit ``omega``."""
    inputs = _as_spaces(inputs)
    r = {j: w for j, w in enumerate(omega.weights) if w}
    return Channel(inputs, omega.spaces, [dict(r) for _ in range(size(inputs))], check=False)


def wiring(inputs, picks: Sequence[int]) -> Channel:
    """Deterministic rewiring: output wire ``k`` carries input wire ``picks[k]``.

    Repeated indices copy, omitted ones are discarded, reordering swaps.
    """
    inputs = _as_spaces(inputs)
    for p in picks:
        if not 0 <= p < len(inputs):
            raise ValidationError(f"wire index {p} out of range for {len(inputs)} inputs")
    outputs = tuple(inputs[p] for p in picks)
    rows = []
    for i in range(size(inputs)):
        idx = unflatten(inputs, i)
        j = 0
        for p in picks:
            j = j * len(inputs[p]) + idx[p]
        rows.append({j: ONE})
    return Channel(inputs, outputs, rows, check=False)


def identity(spaces) -> Channel:
    spaces = _as_spaces(spaces)
    return wiring(spaces, range(len(spaces)))


def swap(x, y) -> Channel:
    x, y = _as_spaces(x), _as_spaces(y)
    n, m = len(x), len(y)
    return wiring(x + y, [*range(n, n + m), *range(n)])


def copy(spaces, n: int = 2) -> Channel:
    spaces = _as_spaces(spaces)
    return wiring(spaces, list(range(len(spaces))) * n)


def discard(spaces) -> Channel:
    return wiring(_as_spaces(spaces), [])


def project(spaces, k: int) -> Channel:
    return wiring(_as_spaces(spaces), [k])


def comparator(space: FiniteSpace) -> Channel:
    n = len(space)
    rows = [{i: ONE} if i == j else {} for i in range(n) for j in range(n)]
    return Channel((space, space), (space,), rows, check=False)


def cap(space: FiniteSpace) -> Channel:
    n = len(space)
    rows = [{0: ONE} if i == j else {} for i in range(n) for j in range(n)]
    return Channel((space, space), (), rows, check=False)


def comparator_multi(spaces) -> Channel:
    """Comparator on a product of wires: (x, x') -> 1|x> iff x == x'."""
    spaces = _as_spaces(spaces)
    n = size(spaces)
    rows = [{i: ONE} if i == j else {} for i in range(n) for j in range(n)]
    return Channel(spaces + spaces, spaces, rows, check=False)


_GENERATORS = {
    "identity": lambda *s: identity(s),
    "swap": lambda x, y: swap(x, y),
    "copy": lambda *s: copy(s),
    "discard": lambda *s: discard(s),
    "truth": lambda *s: discard(s),
    "comparator": comparator,
    "cap": cap,
}


def generator(kind: str, *spaces: FiniteSpace, k: int | None = None) -> Channel:
    """Structural channel by name.

    ``project`` needs ``k``; ``swap`` takes exactly two spaces;
    ``comparator`` and ``cap`` take one.
    """
    if kind == "project":
        if k is None:
            raise ValidationError("project needs the coordinate k")
        if not 0 <= k < len(spaces):
            raise ValidationError(f"project: k={k} out of range for {len(spaces)} wires")
        return project(spaces, k)
    try:
        make = _GENERATORS[kind]
    except KeyError:
        raise ValidationError(f"unknown generator {kind!r}") from None
    try:
        return make(*spaces)
    except TypeError:
        raise ValidationError(f"generator {kind!r}: wrong number of spaces ({len(spaces)})") from None


# -- operations -------------------------------------------------------------------

def compose(f: Channel, g: Channel) -> Channel:
    """``g ∘ f``: run ``f`` then ``g``."""
    if f.outputs != g.inputs:
        raise ValidationError(
            f"cannot compose: outputs {_names(f.outputs)} != inputs {_names(g.inputs)}"
        )
    grows = g.rows
    out = []
    for r in f.rows:
        acc: dict[int, Fraction] = {}
        for j, w in r.items():
            for k, v in grows[j].items():
                acc[k] = acc.get(k, ZERO) + w * v
        out.append({k: v for k, v in acc.items() if v})
    return Channel(f.inputs, g.outputs, out, check=False)


def seq(*channels: Channel) -> Channel:
    """Left-to-right sequential composite of several channels."""
    out = channels[0]
    for c in channels[1:]:
        out = compose(out, c)
    return out


def tensor(f: Channel, g: Channel, *more: Channel) -> Channel:
    if more:
        return tensor(tensor(f, g), *more)
    m_out = g.n_out
    rows = []
    for rf in f.rows:
        for rg in g.rows:
            rows.append({a * m_out + b: v * w for a, v in rf.items() for b, w in rg.items()})
    return Channel(f.inputs + g.inputs, f.outputs + g.outputs, rows, check=False)


def dom(f: Channel) -> Channel:
    """The predicate of row masses, ``1 ∘ f``."""
    return Channel(f.inputs, (), [{0: m} if m else {} for m in f.row_masses()], check=False)


def nrm(f: Channel) -> Channel:
    """Row-wise normalisation; zero rows stay zero."""
    rows = []
    for r in f.rows:
        total = sum(r.values(), ZERO)
        rows.append({j: w / total for j, w in r.items()} if total else {})
    return Channel(f.inputs, f.outputs, rows, check=False)


def pushforward(omega, f: Channel) -> SubDist:
    if isinstance(omega, SubDist):
        omega = state(omega)
    return compose(omega, f).as_subdist()


def scale(f: Channel, s) -> Channel:
    s = to_scalar(s)
    if not 0 <= s <= 1:
        raise ValidationError(f"scale factor {s} outside [0, 1]")
    return Channel(f.inputs, f.outputs, [{j: s * w for j, w in r.items() if s * w} for r in f.rows], check=False)


def classify(f: Channel) -> Classification:
    total = all(m == 1 for m in f.row_masses())
    deterministic_ = total and all(len(r) == 1 for r in f.rows)
    n = f.n_out
    full = all(len(r) == n for r in f.rows)
    return Classification(total, deterministic_, full)


def is_total(f: Channel) -> bool:
    return classify(f).total


def channels_equal(f: Channel, g: Channel) -> bool:
    if f.signature != g.signature:
        raise ValidationError(
            f"signature mismatch: {_names(f.inputs)}->{_names(f.outputs)} vs "
            f"{_names(g.inputs)}->{_names(g.outputs)}"
        )
    return f.rows == g.rows


def first_difference(f: Channel, g: Channel):
    """First (input tuple, output tuple, f entry, g entry) where f and g differ, or None."""
    in_t = tuples(f.inputs)
    out_t = tuples(f.outputs)
    for i, (a, b) in enumerate(zip(f.rows, g.rows)):
        if a != b:
            for j in sorted(set(a) | set(b)):
                if a.get(j, ZERO) != b.get(j, ZERO):
                    return in_t[i], out_t[j], a.get(j, ZERO), b.get(j, ZERO)
    return None


def marginal(f: Channel, keep: Iterable[int]) -> Channel:
    """Keep only the output wires at positions ``keep`` (discard the rest)."""
    return compose(f, wiring(f.outputs, list(keep)))


def from_json(text: str, spaces: Mapping[str, FiniteSpace]) -> Channel:
    return Channel.from_dict(json.loads(text), spaces)
