"""Polytope-normed sequence spaces presented by generator sets.

A space stores the vertex sets of the nonnegative parts of its unit
ball (P) and of the dual unit ball (Q). The norm of a vector is the
largest pairing of its absolute value against Q; the dual norm uses P.
Both generator sets are kept canonical: nonnegative, no point below
the solid convex hull of the others, sorted.

Only polytope norms are representable. Consistent norms with curved
balls (the Euclidean one, say) exist but fall outside this data model;
the restriction is deliberate and keeps every computation exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import lp
from .core import IndexSet, Sequence, abs_seq, pairing
from .errors import IndexMismatchError, InvalidSpaceError
from .polar import canonicalize, dominated_by_hull, polar_vertices, spans


@dataclass(frozen=True)
class PolytopeSpace:
    index: IndexSet
    P: tuple  # generators of the unit ball's nonnegative part
    Q: tuple  # generators of the dual unit ball's nonnegative part
    name: str = ""

    def __eq__(self, other):
        return (
            isinstance(other, PolytopeSpace)
            and self.index == other.index
            and self.P == other.P
            and self.Q == other.Q
        )

    def __hash__(self):
        return hash((self.index, self.P, self.Q))

    def dim(self) -> int:
        return len(self.index)


def from_Q(index: IndexSet, Q, name: str = "") -> PolytopeSpace:
    """Build a space from its norm generators; the ball side is the polar."""
    Q = canonicalize(Q, index)
    _require_spanning(Q, index, "Q")
    P = polar_vertices(Q, index)
    return PolytopeSpace(index, P, Q, name)


def from_P(index: IndexSet, P, name: str = "") -> PolytopeSpace:
    P = canonicalize(P, index)
    _require_spanning(P, index, "P")
    Q = polar_vertices(P, index)
    return PolytopeSpace(index, P, Q, name)


def _require_spanning(gens, index, side):
    if len(index) > 0 and not spans(gens, index):
        raise InvalidSpaceError(
            f"{side} is empty or fails to span some coordinate, "
            "so a nonzero vector would get norm zero"
        )


def _check_vector(space: PolytopeSpace, a: Sequence):
    if a.index != space.index:
        raise IndexMismatchError("vector not on the space's index set")


def norm(space: PolytopeSpace, a: Sequence) -> Fraction:
    """max over Q of <|a|, q>; zero only at zero for spanning Q."""
    _check_vector(space, a)
    _require_spanning(space.Q, space.index, "Q")
    aa = abs_seq(a)
    return max(
        (pairing(aa, q) for q in space.Q), default=Fraction(0)
    )


def dual_norm(space: PolytopeSpace, b: Sequence) -> Fraction:
    """max over P of <p, |b|>; the norm of the dual space."""
    _check_vector(space, b)
    _require_spanning(space.P, space.index, "P")
    bb = abs_seq(b)
    return max(
        (pairing(p, bb) for p in space.P), default=Fraction(0)
    )


def lp_dual_value(space: PolytopeSpace, c: Sequence) -> Fraction:
    """LP optimum max{<c, x> : x >= 0, <x, q> <= 1 for q in Q}.

    Bipolarity says this equals the generator maximum over P for any
    nonnegative direction c.
    """
    _check_vector(space, c)
    if len(space.index) == 0:
        return Fraction(0)
    rows = [q.entries for q in space.Q]
    rhs = [Fraction(1)] * len(rows)
    status, value, _ = lp.solve_max(c.entries, rows, rhs)
    if status != lp.OPTIMAL:
        raise InvalidSpaceError("Q does not span; LP unbounded")
    return value


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, invariant: str, witness: str):
        self.failures.append((invariant, witness))

    def __str__(self):
        if self.ok:
            return "valid"
        lines = [f"{len(self.failures)} invariant violation(s):"]
        for inv, wit in self.failures:
            lines.append(f"  - {inv}: {wit}")
        return "\n".join(lines)


def validate(space: PolytopeSpace) -> ValidationReport:
    """Check every space invariant; failures carry witnesses."""
    report = ValidationReport()
    index = space.index
    for side, gens in (("P", space.P), ("Q", space.Q)):
        for g in gens:
            if g.index != index:
                report.add("index", f"{side} generator on wrong index set")
                return report
            if not g.is_nonnegative():
                report.add(
                    "nonnegative",
                    f"{side} generator {g.entries} has a negative entry",
                )
    if len(index) > 0:
        if not spans(space.Q, index):
            report.add("spanning", "Q empty or missing a coordinate")
        if not spans(space.P, index):
            report.add("spanning", "P empty or missing a coordinate")
    for p in space.P:
        for q in space.Q:
            v = pairing(p, q)
            if v > 1:
                report.add(
                    "polarity",
                    f"<{p.entries}, {q.entries}> = {v} > 1",
                )
    for side, gens in (("P", space.P), ("Q", space.Q)):
        for g in gens:
            if g.is_zero():
                report.add("canonical", f"{side} contains the zero vector")
            elif dominated_by_hull(g, [h for h in gens if h is not g]):
                report.add(
                    "canonical",
                    f"{side} generator {g.entries} is dominated "
                    "by the hull of the others",
                )
    if report.ok:
        swapped = PolytopeSpace(index, space.Q, space.P)
        for i, label in enumerate(index.labels):
            c = Sequence.basis(index, label)
            gen_max = max(
                (pairing(c, p) for p in space.P), default=Fraction(0)
            )
            lp_val = lp_dual_value(space, c)
            if gen_max != lp_val:
                report.add(
                    "bipolar",
                    f"direction e_{i}: generator max {gen_max} != "
                    f"LP optimum {lp_val}",
                )
            gen_max_d = max(
                (pairing(c, q) for q in space.Q), default=Fraction(0)
            )
            lp_val_d = lp_dual_value(swapped, c)
            if gen_max_d != lp_val_d:
                report.add(
                    "bipolar",
                    f"direction e_{i} (swapped): generator max "
                    f"{gen_max_d} != LP optimum {lp_val_d}",
                )
    return report


# ---------------------------------------------------------------- standard


def _basis_sorted(index: IndexSet) -> tuple:
    return tuple(
        sorted(
            (Sequence.basis(index, l) for l in index.labels),
            key=lambda s: s.entries,
        )
    )


def sup_space(labels, name: str = "sup") -> PolytopeSpace:
    """Max-norm space: Q is the basis, the ball is the unit box."""
    index = IndexSet.of(labels)
    Q = _basis_sorted(index)
    P = (Sequence(index, (Fraction(1),) * len(index)),)
    return PolytopeSpace(index, P, Q, name)


def sum_space(labels, name: str = "sum") -> PolytopeSpace:
    """Sum-norm space: the ball is the simplex, Q is the all-ones vector."""
    index = IndexSet.of(labels)
    P = _basis_sorted(index)
    Q = (Sequence(index, (Fraction(1),) * len(index)),)
    return PolytopeSpace(index, P, Q, name)


def unit_space() -> PolytopeSpace:
    """Self-dual space on one label; both balls are [0, 1]."""
    index = IndexSet(("*",))
    one = (Sequence(index, (Fraction(1),)),)
    return PolytopeSpace(index, one, one, "1")


def zero_space() -> PolytopeSpace:
    """The space {0} on the empty index set."""
    return PolytopeSpace(IndexSet(()), (), (), "0")


def space_equal(a: PolytopeSpace, b: PolytopeSpace, label_map=None) -> bool:
    """Componentwise equality, optionally across an index bijection.

    label_map sends labels of `a` to labels of `b`; generator sets are
    compared as sets of relabelled entry vectors.
    """
    if label_map is None:
        return a == b
    if len(a.index) != len(b.index):
        return False
    mapped = [label_map(l) for l in a.index.labels]
    if set(mapped) != set(b.index.labels):
        return False

    def transport(seq: Sequence) -> tuple:
        out = [Fraction(0)] * len(b.index)
        for l, e in zip(a.index.labels, seq.entries):
            out[b.index.position(label_map(l))] = e
        return tuple(out)

    for gens_a, gens_b in ((a.P, b.P), (a.Q, b.Q)):
        if sorted(transport(g) for g in gens_a) != sorted(
            g.entries for g in gens_b
        ):
            return False
    return True
