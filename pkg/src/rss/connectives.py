"""Dual, additive and multiplicative constructors on polytope spaces.

Composite index sets keep their structure: tensor-style constructions
use pair labels, additive ones use tagged labels. Exactly one side of
a multiplicative ball is given in closed form (outer products of the
factors' generators); the other side is computed by polar vertex
enumeration, subject to the configurable size guard.
"""

from __future__ import annotations

from fractions import Fraction

from .core import IndexSet, Sequence, pair_label, tagged_label
from .polar import canonicalize, polar_vertices
from .spaces import PolytopeSpace, unit_space


def dual(A: PolytopeSpace) -> PolytopeSpace:
    """Swap the two balls; same index set."""
    name = f"({A.name})*" if A.name else ""
    return PolytopeSpace(A.index, A.Q, A.P, name)


def _pair_index(A: PolytopeSpace, B: PolytopeSpace) -> IndexSet:
    return IndexSet(
        tuple(
            pair_label(i, j) for i in A.index.labels for j in B.index.labels
        )
    )


def _sum_index(A: PolytopeSpace, B: PolytopeSpace) -> IndexSet:
    return IndexSet(
        tuple(tagged_label(0, i) for i in A.index.labels)
        + tuple(tagged_label(1, j) for j in B.index.labels)
    )


def outer(index: IndexSet, a: Sequence, b: Sequence) -> Sequence:
    """Outer product of two sequences on a pair-label index."""
    vals = {}
    for i, x in zip(a.index.labels, a.entries):
        if x == 0:
            continue
        for j, y in zip(b.index.labels, b.entries):
            if y != 0:
                vals[pair_label(i, j)] = x * y
    return Sequence.from_dict(index, vals)


def _embed(index: IndexSet, slot: int, seq: Sequence) -> Sequence:
    return Sequence.from_dict(
        index,
        {
            tagged_label(slot, l): e
            for l, e in zip(seq.index.labels, seq.entries)
        },
    )


def _joined(index: IndexSet, a: Sequence, b: Sequence) -> Sequence:
    vals = {tagged_label(0, l): e for l, e in zip(a.index.labels, a.entries)}
    vals.update(
        {tagged_label(1, l): e for l, e in zip(b.index.labels, b.entries)}
    )
    return Sequence.from_dict(index, vals)


def product(A: PolytopeSpace, B: PolytopeSpace) -> PolytopeSpace:
    """Max-norm pairing of two spaces: the ball is the product of balls."""
    index = _sum_index(A, B)
    P = tuple(_joined(index, p, p2) for p in A.P for p2 in B.P)
    Q = tuple(_embed(index, 0, q) for q in A.Q) + tuple(
        _embed(index, 1, q) for q in B.Q
    )
    return PolytopeSpace(
        index,
        canonicalize(P, index),
        canonicalize(Q, index),
        _binname(A, B, "x"),
    )


def coproduct(A: PolytopeSpace, B: PolytopeSpace) -> PolytopeSpace:
    """Sum-norm pairing; dual to the product componentwise."""
    index = _sum_index(A, B)
    P = tuple(_embed(index, 0, p) for p in A.P) + tuple(
        _embed(index, 1, p) for p in B.P
    )
    Q = tuple(_joined(index, q, q2) for q in A.Q for q2 in B.Q)
    return PolytopeSpace(
        index,
        canonicalize(P, index),
        canonicalize(Q, index),
        _binname(A, B, "+"),
    )


def tensor(A: PolytopeSpace, B: PolytopeSpace, cap=None) -> PolytopeSpace:
    """Ball generated by outer products; the dual ball is its polar."""
    index = _pair_index(A, B)
    P = canonicalize(
        tuple(outer(index, p, p2) for p in A.P for p2 in B.P), index
    )
    Q = polar_vertices(P, index, cap=cap)
    return PolytopeSpace(index, P, Q, _binname(A, B, "*"))


def cotensor(A: PolytopeSpace, B: PolytopeSpace, cap=None) -> PolytopeSpace:
    """Dual of the tensor of the duals."""
    out = dual(tensor(dual(A), dual(B), cap=cap))
    return PolytopeSpace(out.index, out.P, out.Q, _binname(A, B, "par"))


def hom(A: PolytopeSpace, B: PolytopeSpace, cap=None) -> PolytopeSpace:
    """Space of matrices A -> B, normed so that a matrix's norm as a
    sequence equals its map norm."""
    index = _pair_index(A, B)
    Q = canonicalize(
        tuple(outer(index, p, q) for p in A.P for q in B.Q), index
    )
    P = polar_vertices(Q, index, cap=cap)
    return PolytopeSpace(index, P, Q, _binname(A, B, "-o"))


def unit() -> PolytopeSpace:
    return unit_space()


def _binname(A, B, op) -> str:
    if A.name and B.name:
        return f"({A.name}{op}{B.name})"
    return ""
