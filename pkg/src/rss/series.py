"""Multiset-indexed coefficient tables: truncated power series.

The canonical convention is the monomial basis,

    f(x) = sum over multisets mu of  c_mu * x^mu,   x^mu = prod_{i in mu} x_i,

with every normalization of the level embeddings absorbed elsewhere.
Multisets are sorted tuples of base labels; coefficients are exact and
sparse (zeros are dropped). A table of degree cap d never stores a
multiset of larger cardinality.

Structure maps of the graded monoid live here as coefficient
transforms: weakening (a constant), contraction (diagonalization of a
two-place series), dereliction (a linear series), digging (evaluation
against delta expansions) and the functorial lift along a matrix.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement

from .core import IndexSet, Sequence, label_key, mset_label
from .errors import IndexMismatchError
from .maps import MatrixRep
from .spaces import PolytopeSpace, norm


def mset(labels) -> tuple:
    """Canonical (sorted) multiset of labels."""
    return tuple(sorted(labels, key=label_key))


def mset_union(a: tuple, b: tuple) -> tuple:
    return mset(a + b)


def msets_upto(index: IndexSet, degree: int):
    """All multisets of base labels with cardinality <= degree, sorted."""
    out = []
    for k in range(degree + 1):
        out.extend(
            mset(c)
            for c in combinations_with_replacement(index.labels, k)
        )
    return sorted(set(out), key=lambda m: (len(m), tuple(map(label_key, m))))


def graded_index(index: IndexSet, degree: int) -> IndexSet:
    """Index set of the degree-capped series space over a base index."""
    return IndexSet(tuple(mset_label(m) for m in msets_upto(index, degree)))


def monomial(x: Sequence, mu: tuple) -> Fraction:
    out = Fraction(1)
    for label in mu:
        out *= x[label]
    return out


@dataclass(frozen=True)
class GradedCoeffs:
    """A truncated series over a base space."""

    base: PolytopeSpace
    degree: int
    coeffs: dict  # multiset tuple -> Fraction, zero entries absent

    def __post_init__(self):
        clean = {}
        for mu, c in self.coeffs.items():
            if len(mu) > self.degree:
                raise ValueError(
                    f"coefficient at degree {len(mu)} above cap {self.degree}"
                )
            c = Fraction(c)
            if c != 0:
                clean[tuple(mu)] = c
        object.__setattr__(self, "coeffs", clean)

    def __eq__(self, other):
        return (
            isinstance(other, GradedCoeffs)
            and self.base == other.base
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def eval(self, x: Sequence) -> Fraction:
        """sum c_mu x^mu at the point x."""
        if x.index != self.base.index:
            raise IndexMismatchError("point not on the base index set")
        return sum(
            (c * monomial(x, mu) for mu, c in self.coeffs.items()),
            start=Fraction(0),
        )

    def eval_abs(self, x: Sequence) -> Fraction:
        """sum |c_mu| |x|^mu at the point x."""
        if x.index != self.base.index:
            raise IndexMismatchError("point not on the base index set")
        return sum(
            (
                abs(c) * abs(monomial(x, mu))
                for mu, c in self.coeffs.items()
            ),
            start=Fraction(0),
        )

    def abs(self) -> "GradedCoeffs":
        return GradedCoeffs(
            self.base,
            self.degree,
            {mu: abs(c) for mu, c in self.coeffs.items()},
        )

    def truncate(self, degree: int) -> "GradedCoeffs":
        return GradedCoeffs(
            self.base,
            degree,
            {mu: c for mu, c in self.coeffs.items() if len(mu) <= degree},
        )

    def homogeneous(self, k: int) -> dict:
        return {mu: c for mu, c in self.coeffs.items() if len(mu) == k}

    def scale(self, t) -> "GradedCoeffs":
        t = Fraction(t)
        return GradedCoeffs(
            self.base, self.degree, {m: t * c for m, c in self.coeffs.items()}
        )

    def add(self, other: "GradedCoeffs") -> "GradedCoeffs":
        if other.base.index != self.base.index:
            raise IndexMismatchError("series on different base index sets")
        out = dict(self.coeffs)
        for mu, c in other.coeffs.items():
            out[mu] = out.get(mu, Fraction(0)) + c
        return GradedCoeffs(
            self.base, max(self.degree, other.degree), out
        )

    def pair(self, other: "GradedCoeffs") -> Fraction:
        """Graded pairing: sum over shared multisets of products."""
        if other.base.index != self.base.index:
            raise IndexMismatchError("series on different base index sets")
        small, big = self.coeffs, other.coeffs
        if len(big) < len(small):
            small, big = big, small
        return sum(
            (c * big[mu] for mu, c in small.items() if mu in big),
            start=Fraction(0),
        )

    def as_sequence(self, index: IndexSet = None) -> Sequence:
        """The series as a vector on the graded index set."""
        if index is None:
            index = graded_index(self.base.index, self.degree)
        return Sequence.from_dict(
            index, {mset_label(m): c for m, c in self.coeffs.items()}
        )

    @staticmethod
    def from_sequence(base: PolytopeSpace, degree: int, seq: Sequence):
        coeffs = {}
        for label, e in zip(seq.index.labels, seq.entries):
            if e != 0:
                coeffs[label[1]] = e
        return GradedCoeffs(base, degree, coeffs)


def delta(base: PolytopeSpace, x: Sequence, degree: int) -> GradedCoeffs:
    """Evaluation functional: coefficient x^mu at every multiset <= cap.

    Pairing it against any series of degree <= cap reproduces the
    series' value at x. Intended for points of the unit ball; a point
    outside gets a warning, not an error.
    """
    if norm(base, x) > 1:
        warnings.warn(
            "delta at a point of norm > 1 lies outside the unit ball",
            stacklevel=2,
        )
    coeffs = {}
    for mu in msets_upto(base.index, degree):
        v = monomial(x, mu)
        if v != 0:
            coeffs[mu] = v
    return GradedCoeffs(base, degree, coeffs)


def unit_u(base: PolytopeSpace, t, degree: int) -> GradedCoeffs:
    """The constant series (weakening)."""
    return GradedCoeffs(base, degree, {(): Fraction(t)})


def eta(base: PolytopeSpace, a: Sequence, degree: int) -> GradedCoeffs:
    """The linear series with slope a (dereliction)."""
    if a.index != base.index:
        raise IndexMismatchError("point not on the base index set")
    if degree < 1:
        raise ValueError("dereliction needs degree cap >= 1")
    return GradedCoeffs(
        base,
        degree,
        {(l,): e for l, e in zip(a.index.labels, a.entries) if e != 0},
    )


def mult_m(pairs: dict, base: PolytopeSpace, degree: int) -> GradedCoeffs:
    """Diagonalization of a two-place series (contraction).

    pairs maps (mu, nu) to a coefficient; the image coefficient at rho
    is the sum over splittings mu + nu = rho, with anything above the
    cap dropped.
    """
    out = {}
    for (mu, nu), c in pairs.items():
        rho = mset_union(mu, nu)
        if len(rho) <= degree:
            out[rho] = out.get(rho, Fraction(0)) + c
    return GradedCoeffs(base, degree, out)


def flatten_multisets(nested: dict, size_cap=None) -> dict:
    """Merge one nesting level of multiset keys, summing coefficients.

    Keys are multisets whose elements are themselves multisets; each
    key maps to the union of its elements. Entries whose merged key
    exceeds size_cap are dropped (None means keep everything).
    """
    out = {}
    for outer, c in nested.items():
        rho = mset(l for inner in outer for l in inner)
        if size_cap is not None and len(rho) > size_cap:
            continue
        out[rho] = out.get(rho, Fraction(0)) + c
    return {m: c for m, c in out.items() if c != 0}


def mu_flatten(nested: dict, base: PolytopeSpace, degree: int) -> GradedCoeffs:
    """Digging: sum nested coefficients over flattenings.

    nested maps multisets of multisets to coefficients; the image
    coefficient at rho sums every table entry whose flattening is rho.
    Exactly realizes evaluation against delta expansions: the image at
    a point x equals the nested series applied to the delta of x.
    """
    return GradedCoeffs(base, degree, flatten_multisets(nested, degree))


def _poly_mul(p: dict, q: dict, degree) -> dict:
    out = {}
    for mu, a in p.items():
        for nu, b in q.items():
            rho = mset_union(mu, nu)
            if degree is not None and len(rho) > degree:
                continue
            out[rho] = out.get(rho, Fraction(0)) + a * b
    return {m: c for m, c in out.items() if c != 0}


def lift_coeffs(coeffs: dict, L: MatrixRep, degree: int) -> dict:
    """Coefficients of the series precomposed with the adjoint of L.

    Each base monomial expands multinomially through the rows of L; the
    lift is degree-preserving, so the cap passes through untouched.
    """
    rows = {
        label: {
            (col,): v
            for col, v in zip(L.col_index.labels, L.entries[i])
            if v != 0
        }
        for i, label in enumerate(L.row_index.labels)
    }
    out = {}
    for mu, c in coeffs.items():
        term = {(): Fraction(1)}
        for label in mu:
            term = _poly_mul(term, rows[label], degree)
            if not term:
                break
        for nu, v in term.items():
            out[nu] = out.get(nu, Fraction(0)) + c * v
    return {m: c for m, c in out.items() if c != 0}


def lift(
    f: GradedCoeffs, L: MatrixRep, target: PolytopeSpace
) -> GradedCoeffs:
    """Functorial action on series: lift(f, L) = f after the adjoint."""
    if L.row_index != f.base.index:
        raise IndexMismatchError("matrix domain is not the series base")
    if L.col_index != target.index:
        raise IndexMismatchError("matrix codomain is not the target base")
    return GradedCoeffs(
        target, f.degree, lift_coeffs(f.coeffs, L, f.degree)
    )
