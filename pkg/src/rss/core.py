"""Index sets, exact sequences, pairing and positive/negative parts.

Labels are plain data so they can be dict keys and serialize to JSON:

    atom            str or int
    ("*", l, r)     ordered pair, used by tensor-style composites
    ("+", k, l)     tagged label, component k of a disjoint union
    ("m", (l, ...)) multiset of labels, sorted, repetition allowed
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import IndexMismatchError


def label_key(label):
    """Total order on labels of all shapes (used for canonical sorting).

    Untagged tuples are raw multisets (they appear as nested series
    keys) and sort like their wrapped form.
    """
    if isinstance(label, int):
        return (0, 0, label)
    if isinstance(label, str):
        return (0, 1, label)
    if isinstance(label, tuple):
        if len(label) == 3 and label[0] == "*":
            return (1, label_key(label[1]), label_key(label[2]))
        if len(label) == 3 and label[0] == "+" and isinstance(label[1], int):
            return (2, label[1], label_key(label[2]))
        if len(label) == 2 and label[0] == "m" and isinstance(label[1], tuple):
            return (3, len(label[1]), tuple(label_key(l) for l in label[1]))
        return (3, len(label), tuple(label_key(l) for l in label))
    raise TypeError(f"not a label: {label!r}")


def pair_label(left, right):
    return ("*", left, right)


def tagged_label(slot: int, label):
    return ("+", slot, label)


def mset_label(mset: tuple):
    return ("m", tuple(mset))


def label_str(label) -> str:
    """Readable rendering of a structured label."""
    if isinstance(label, (str, int)):
        return str(label)
    tag = label[0]
    if tag == "*":
        return f"({label_str(label[1])},{label_str(label[2])})"
    if tag == "+":
        return f"in{label[1]}({label_str(label[2])})"
    if tag == "m":
        return "{" + ",".join(label_str(l) for l in label[1]) + "}"
    raise TypeError(f"not a label: {label!r}")


@dataclass(frozen=True)
class IndexSet:
    """An ordered finite set of distinct labels."""

    labels: tuple

    def __post_init__(self):
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("index labels must be distinct")
        object.__setattr__(
            self, "_pos", {l: i for i, l in enumerate(self.labels)}
        )

    @staticmethod
    def of(labels) -> "IndexSet":
        """Index set in canonical (sorted) label order."""
        return IndexSet(tuple(sorted(labels, key=label_key)))

    def __len__(self):
        return len(self.labels)

    def __contains__(self, label):
        return label in self._pos

    def position(self, label) -> int:
        return self._pos[label]

    def __eq__(self, other):
        return isinstance(other, IndexSet) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)


@dataclass(frozen=True)
class Sequence:
    """Exact rational vector on a finite index set."""

    index: IndexSet
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != len(self.index):
            raise ValueError("entry count must equal index-set size")
        object.__setattr__(
            self, "entries", tuple(Fraction(e) for e in self.entries)
        )

    @staticmethod
    def from_dict(index: IndexSet, values: dict) -> "Sequence":
        return Sequence(
            index, tuple(values.get(l, Fraction(0)) for l in index.labels)
        )

    @staticmethod
    def zero(index: IndexSet) -> "Sequence":
        return Sequence(index, (Fraction(0),) * len(index))

    @staticmethod
    def basis(index: IndexSet, label) -> "Sequence":
        e = [Fraction(0)] * len(index)
        e[index.position(label)] = Fraction(1)
        return Sequence(index, tuple(e))

    def __getitem__(self, label) -> Fraction:
        return self.entries[self.index.position(label)]

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def is_nonnegative(self) -> bool:
        return all(e >= 0 for e in self.entries)

    def scale(self, c) -> "Sequence":
        c = Fraction(c)
        return Sequence(self.index, tuple(c * e for e in self.entries))

    def add(self, other: "Sequence") -> "Sequence":
        _same_index(self, other)
        return Sequence(
            self.index,
            tuple(a + b for a, b in zip(self.entries, other.entries)),
        )

    def dominates(self, other: "Sequence") -> bool:
        """Coordinatewise >= on a shared index set."""
        _same_index(self, other)
        return all(a >= b for a, b in zip(self.entries, other.entries))


def _same_index(a: Sequence, b: Sequence):
    if a.index != b.index:
        raise IndexMismatchError("sequences live on different index sets")


def pairing(a: Sequence, b: Sequence) -> Fraction:
    """Sum of coordinatewise products, exact."""
    _same_index(a, b)
    return sum(
        (x * y for x, y in zip(a.entries, b.entries)), start=Fraction(0)
    )


def abs_parts(a: Sequence):
    """Positive part, negative part and absolute value, coordinatewise."""
    plus = tuple(max(e, Fraction(0)) for e in a.entries)
    minus = tuple(max(-e, Fraction(0)) for e in a.entries)
    absval = tuple(p + m for p, m in zip(plus, minus))
    return (
        Sequence(a.index, plus),
        Sequence(a.index, minus),
        Sequence(a.index, absval),
    )


def abs_seq(a: Sequence) -> Sequence:
    return Sequence(a.index, tuple(abs(e) for e in a.entries))
