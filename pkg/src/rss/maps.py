"""Matrices as regular maps between polytope-normed spaces.

Rows are indexed by the domain, columns by the codomain, so application
is (Ma)_j = sum_i M_ij a_i and the adjoint is the plain transpose.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .core import IndexSet, Sequence, pairing
from .errors import IndexMismatchError, ShapeError
from .spaces import PolytopeSpace


@dataclass(frozen=True)
class MatrixRep:
    row_index: IndexSet  # domain
    col_index: IndexSet  # codomain
    entries: tuple  # row-major tuple of tuples of Fractions

    def __post_init__(self):
        if len(self.entries) != len(self.row_index):
            raise ShapeError("row count does not match the domain index")
        rows = []
        for row in self.entries:
            if len(row) != len(self.col_index):
                raise ShapeError(
                    "column count does not match the codomain index"
                )
            rows.append(tuple(Fraction(v) for v in row))
        object.__setattr__(self, "entries", tuple(rows))

    @staticmethod
    def from_dict(row_index, col_index, values: dict) -> "MatrixRep":
        """Build from a {(row_label, col_label): value} mapping."""
        zero = Fraction(0)
        rows = tuple(
            tuple(values.get((r, c), zero) for c in col_index.labels)
            for r in row_index.labels
        )
        return MatrixRep(row_index, col_index, rows)

    @staticmethod
    def identity(index: IndexSet) -> "MatrixRep":
        n = len(index)
        return MatrixRep(
            index,
            index,
            tuple(
                tuple(
                    Fraction(1) if i == j else Fraction(0) for j in range(n)
                )
                for i in range(n)
            ),
        )

    @staticmethod
    def zero(row_index: IndexSet, col_index: IndexSet) -> "MatrixRep":
        row = (Fraction(0),) * len(col_index)
        return MatrixRep(row_index, col_index, (row,) * len(row_index))

    def entry(self, row_label, col_label) -> Fraction:
        return self.entries[self.row_index.position(row_label)][
            self.col_index.position(col_label)
        ]


def apply(M: MatrixRep, a: Sequence) -> Sequence:
    """(Ma)_j = sum_i M_ij a_i, exact."""
    if a.index != M.row_index:
        raise IndexMismatchError("vector not on the matrix domain")
    cols = len(M.col_index)
    out = [Fraction(0)] * cols
    for ai, row in zip(a.entries, M.entries):
        if ai == 0:
            continue
        for j in range(cols):
            if row[j] != 0:
                out[j] += ai * row[j]
    return Sequence(M.col_index, tuple(out))


def adjoint(M: MatrixRep) -> MatrixRep:
    """Transpose; satisfies <Ma, b> = <a, M*b>."""
    return MatrixRep(
        M.col_index, M.row_index, tuple(zip(*M.entries)) if M.entries else ()
    )


def abs_decompose(M: MatrixRep):
    """Entrywise positive part, negative part and absolute value."""
    plus = tuple(
        tuple(max(v, Fraction(0)) for v in row) for row in M.entries
    )
    minus = tuple(
        tuple(max(-v, Fraction(0)) for v in row) for row in M.entries
    )
    absval = tuple(
        tuple(p + m for p, m in zip(pr, mr)) for pr, mr in zip(plus, minus)
    )
    return (
        MatrixRep(M.row_index, M.col_index, plus),
        MatrixRep(M.row_index, M.col_index, minus),
        MatrixRep(M.row_index, M.col_index, absval),
    )


def abs_matrix(M: MatrixRep) -> MatrixRep:
    return MatrixRep(
        M.row_index,
        M.col_index,
        tuple(tuple(abs(v) for v in row) for row in M.entries),
    )


def compose(N: MatrixRep, M: MatrixRep) -> MatrixRep:
    """Matrix of N after M; shapes must chain as M: A->B, N: B->C."""
    if M.col_index != N.row_index:
        raise ShapeError("composition shapes do not chain")
    rows = len(M.row_index)
    mid = len(M.col_index)
    cols = len(N.col_index)
    out = [[Fraction(0)] * cols for _ in range(rows)]
    for i in range(rows):
        mrow = M.entries[i]
        orow = out[i]
        for j in range(mid):
            v = mrow[j]
            if v == 0:
                continue
            nrow = N.entries[j]
            for k in range(cols):
                if nrow[k] != 0:
                    orow[k] += v * nrow[k]
    return MatrixRep(
        M.row_index, N.col_index, tuple(tuple(r) for r in out)
    )


def _check_shape(A: PolytopeSpace, B: PolytopeSpace, M: MatrixRep):
    if M.row_index != A.index or M.col_index != B.index:
        raise ShapeError("matrix is not shaped as a map from A to B")


def map_norm(A: PolytopeSpace, B: PolytopeSpace, M: MatrixRep) -> Fraction:
    """max over p in P_A, q in Q_B of sum_ij p_i |M_ij| q_j.

    The bilinear objective is monotone, so the generator maximum equals
    the supremum over the nonnegative unit balls.
    """
    _check_shape(A, B, M)
    absM = abs_matrix(M)
    best = Fraction(0)
    for p in A.P:
        image = apply(absM, p)
        for q in B.Q:
            v = pairing(image, q)
            if v > best:
                best = v
    return best


def map_norm_lp(source_Q, B: PolytopeSpace, M: MatrixRep) -> Fraction:
    """Map norm with the source ball given only by its norm generators.

    For each target generator q the supremum of <|M| x, q> over the
    source ball's nonnegative part is a linear program, so no vertex
    enumeration of the source is needed. Agrees exactly with map_norm
    by bipolarity.
    """
    from . import lp  # local import keeps module load cheap

    if M.col_index != B.index:
        raise ShapeError("matrix codomain does not match the target space")
    absM = abs_matrix(M)
    rows = []
    for g in source_Q:
        if g.index != M.row_index:
            raise ShapeError("source generator on the wrong index set")
        rows.append(g.entries)
    rhs = [Fraction(1)] * len(rows)
    best = Fraction(0)
    for q in B.Q:
        c = [
            sum(
                (v * qv for v, qv in zip(row, q.entries)),
                start=Fraction(0),
            )
            for row in absM.entries
        ]
        status, value, _ = lp.solve_max(c, rows, rhs)
        if status != lp.OPTIMAL:
            raise ShapeError(
                "source generators do not span; map norm unbounded"
            )
        if value > best:
            best = value
    return best


class MorphismCheck(NamedTuple):
    is_morphism: bool
    norm: Fraction


def is_morphism(A: PolytopeSpace, B: PolytopeSpace, M: MatrixRep):
    """Regular contraction test: exact norm <= 1, no tolerance."""
    n = map_norm(A, B, M)
    return MorphismCheck(n <= 1, n)
