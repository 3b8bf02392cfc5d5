"""Level embeddings of truncated series and certified norm intervals.

A series of degree cap d embeds at every level n >= d as a symmetric
multiaffine functional of n variables, encoded as a tuple of symmetric
k-linear coefficient tables (k <= d). Its level norm is the exact
maximum of the absolute-coefficient multiaffine form over size-n
multisets of the dual-ball generators; repetition is allowed and the
enumeration is global, so no local maxima are missed. Level norms are
non-increasing in n (each level is an upper bound for the next) and
squeeze down onto the series norm, while every evaluation of the
absolute series at a point of the dual ball certifies a lower bound.
The interval between the two is reported honestly and never collapsed
to a point unless the bounds meet.

Polarization of a degree-k homogeneous part is done with the
inclusion-exclusion identity over argument subsets (2^k terms), which
is exact and closed-form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial

from . import lp
from .core import IndexSet, Sequence, label_key
from .errors import InvalidSpaceError, SizeGuardError
from .polar import polar_vertices, canonicalize, vertex_cap
from .series import (
    GradedCoeffs,
    graded_index,
    monomial,
    mset,
    mset_label,
    msets_upto,
)
from .spaces import PolytopeSpace


def sym_tensor(t: dict) -> dict:
    """Average a coefficient tensor over all permutations of its slots."""
    if not t:
        return {}
    n = len(next(iter(t)))
    scale = Fraction(1, factorial(n))
    out = {}
    for key, c in t.items():
        if len(key) != n:
            raise ValueError("mixed tensor ranks")
        for perm in permutations(range(n)):
            pkey = tuple(key[perm[i]] for i in range(n))
            out[pkey] = out.get(pkey, Fraction(0)) + c * scale
    return {k: c for k, c in out.items() if c != 0}


def _subset_sums(args):
    """Vector sums over all argument subsets, keyed by frozenset."""
    sums = {frozenset(): None}
    k = len(args)
    index = args[0].index if args else None
    out = {}
    for r in range(1, k + 1):
        for S in combinations(range(k), r):
            total = [Fraction(0)] * len(index)
            for i in S:
                for j, e in enumerate(args[i].entries):
                    total[j] += e
            out[S] = Sequence(index, tuple(total))
    return out


def polarized_eval(coeffs_k: dict, args) -> Fraction:
    """The symmetric k-linear form of a homogeneous part, at k points.

    Normalized so the diagonal recovers the homogeneous polynomial.
    """
    k = len(args)
    if k == 0:
        return coeffs_k.get((), Fraction(0))
    total = Fraction(0)
    for S, vec in _subset_sums(args).items():
        sign = 1 if (k - len(S)) % 2 == 0 else -1
        val = sum(
            (c * monomial(vec, mu) for mu, c in coeffs_k.items()),
            start=Fraction(0),
        )
        total += sign * val
    return total / factorial(k)


@dataclass(frozen=True)
class LevelRep:
    """A series embedded at a level: scaled symmetric k-linear tables."""

    base: PolytopeSpace
    level: int
    tables: tuple  # tables[k]: multiset of cardinality k -> Fraction

    def eval(self, args) -> Fraction:
        """Multiaffine evaluation at `level` points of the dual ball."""
        if len(args) != self.level:
            raise ValueError("argument count must equal the level")
        total = Fraction(0)
        for k, table in enumerate(self.tables):
            if not table:
                continue
            for S in combinations(range(self.level), k):
                total += _table_eval(table, [args[i] for i in S], k)
        return total

    def reembed(self, higher: int) -> "LevelRep":
        """Push the representation up to a higher level."""
        n, m = higher, self.level
        if n < m:
            raise ValueError("can only reembed at a level >= the current one")
        scaled = []
        for k, table in enumerate(self.tables):
            factor = Fraction(
                factorial(m) * factorial(n - k),
                factorial(m - k) * factorial(n),
            )
            scaled.append({mu: c * factor for mu, c in table.items()})
        return LevelRep(self.base, n, tuple(scaled))


def _table_eval(table: dict, args, k: int) -> Fraction:
    """Evaluate a symmetric k-linear table at a k-tuple of points."""
    if k == 0:
        return table.get((), Fraction(0))
    labels = args[0].index.labels
    total = Fraction(0)
    for tup in product(labels, repeat=k):
        c = table.get(mset(tup))
        if c is None:
            continue
        v = c
        for pos in range(k):
            v *= args[pos][tup[pos]]
            if v == 0:
                break
        total += v
    return total


def _multiplicities(mu: tuple) -> int:
    """Product of factorials of label multiplicities."""
    out = 1
    run = 1
    for a, b in zip(mu, mu[1:]):
        run = run + 1 if a == b else 1
        if a == b:
            out *= run
    return out


def embed_level(f: GradedCoeffs, n: int) -> LevelRep:
    """Symmetric tuple encoding of a series at level n >= its cap.

    The k-th table carries the polarization of the degree-k part,
    scaled by 1/binom(n, k) so that the diagonal evaluation of the
    multiaffine form reproduces the series at every level.
    """
    if n < f.degree:
        raise ValueError("level must be at least the degree cap")
    tables = []
    for k in range(min(f.degree, n) + 1):
        inv = Fraction(1, comb(n, k))
        kfac = factorial(k)
        table = {}
        for mu, c in f.homogeneous(k).items():
            table[mu] = inv * c * Fraction(_multiplicities(mu), kfac)
        tables.append(table)
    return LevelRep(f.base, n, tuple(tables))


def _multiplicity_vectors(r: int, n: int):
    """All ways to pick an n-multiset out of r distinct items."""
    if r == 0:
        if n == 0:
            yield ()
        return
    if r == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _multiplicity_vectors(r - 1, n - first):
            yield (first,) + rest


def _sub_multiplicities(mvec, k):
    """Sub-multisets of a multiset given by multiplicities, of size k."""

    def rec(pos, remaining):
        if pos == len(mvec):
            if remaining == 0:
                yield ()
            return
        top = min(mvec[pos], remaining)
        for take in range(top + 1):
            for rest in rec(pos + 1, remaining - take):
                yield (take,) + rest

    return rec(0, k)


def _level_value(abs_coeffs_by_k, gens, mvec, n) -> Fraction:
    """Multiaffine form of the absolute series at a generator multiset."""
    total = Fraction(0)
    for k, coeffs_k in enumerate(abs_coeffs_by_k):
        if not coeffs_k or k > n:
            continue
        inv = Fraction(1, comb(n, k))
        for svec in _sub_multiplicities(mvec, k):
            ways = 1
            for have, take in zip(mvec, svec):
                ways *= comb(have, take)
            if ways == 0:
                continue
            args = []
            for g, take in zip(gens, svec):
                args.extend([g] * take)
            val = polarized_eval(coeffs_k, args)
            if val != 0:
                total += inv * ways * val
    return total


def _guarded_multiset_count(r: int, n: int, cap):
    count = comb(n + r - 1, n) if r > 0 else (1 if n == 0 else 0)
    limit = vertex_cap(cap)
    if count > limit:
        raise SizeGuardError("level-multiset", limit, count)
    return count


def level_norm(A: PolytopeSpace, f: GradedCoeffs, n: int, cap=None):
    """Exact norm of the level-n embedding of the series.

    Maximizes the absolute-coefficient multiaffine form over all
    size-n multisets of the dual-ball generators.
    """
    if f.base.index != A.index:
        raise InvalidSpaceError("series base does not match the space")
    if n < f.degree:
        raise ValueError("level must be at least the degree cap")
    gens = A.Q
    _guarded_multiset_count(len(gens), n, cap)
    fabs = f.abs()
    by_k = [fabs.homogeneous(k) for k in range(f.degree + 1)]
    best = Fraction(0)
    for mvec in _multiplicity_vectors(len(gens), n):
        v = _level_value(by_k, gens, mvec, n)
        if v > best:
            best = v
    return best


def level_weights(A: PolytopeSpace, degree: int, n: int, cap=None):
    """Norm generators of the degree-capped series space at level n.

    Every size-n multiset of dual generators induces a nonnegative
    weight vector over the multiset index: the level evaluation of each
    basis monomial at that multiset. Returns (graded index, weights).
    """
    if n < degree:
        raise ValueError("level must be at least the degree cap")
    index = graded_index(A.index, degree)
    mus = msets_upto(A.index, degree)
    gens = A.Q
    _guarded_multiset_count(len(gens), n, cap)
    weights = []
    for mvec in _multiplicity_vectors(len(gens), n):
        vals = {}
        for mu in mus:
            k = len(mu)
            single = [{} for _ in range(degree + 1)]
            single[k] = {mu: Fraction(1)}
            w = _level_value(single, gens, mvec, n)
            if w != 0:
                vals[mset_label(mu)] = w
        weights.append(Sequence.from_dict(index, vals))
    return index, canonicalize(weights, index)


def level_space(
    A: PolytopeSpace, degree: int, n: int, cap=None
) -> PolytopeSpace:
    """The degree-capped series space presented at level n.

    The level weights generate the norm; the ball side is their polar,
    computed by vertex enumeration under the size guard.
    """
    index, Q = level_weights(A, degree, n, cap=cap)
    P = polar_vertices(Q, index, cap=cap)
    return PolytopeSpace(
        index, P, Q, f"?({A.name})@d={degree},n={n}" if A.name else ""
    )


@dataclass(frozen=True)
class NormInterval:
    lower: Fraction
    upper: Fraction
    n_used: int

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower


def dual_ball_samples(A: PolytopeSpace, rng=None, count: int = 20):
    """Points of the nonnegative dual ball: generators, their pairwise
    midpoints, the centroid, and optional random convex combinations."""
    gens = list(A.Q)
    out = list(gens)
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            out.append(gens[i].add(gens[j]).scale(Fraction(1, 2)))
    if len(gens) > 1:
        centroid = gens[0]
        for g in gens[1:]:
            centroid = centroid.add(g)
        out.append(centroid.scale(Fraction(1, len(gens))))
    if rng is not None and len(gens) >= 1:
        for _ in range(count):
            weights = [rng.randint(0, 8) for _ in gens]
            total = sum(weights)
            if total == 0:
                continue
            point = Sequence.zero(A.index)
            for w, g in zip(weights, gens):
                if w:
                    point = point.add(g.scale(Fraction(w, total)))
            out.append(point)
    seen = set()
    uniq = []
    for p in out:
        if p.entries not in seen:
            seen.add(p.entries)
            uniq.append(p)
    return uniq


def exp_norm_interval(
    A: PolytopeSpace,
    f: GradedCoeffs,
    n_max: int,
    tol,
    rng=None,
    samples: int = 20,
    cap=None,
) -> NormInterval:
    """Certified two-sided bounds on the series norm.

    The upper bound is the level norm at the last computed level; the
    lower bound is the best absolute evaluation over dual-ball sample
    points. Stops when the gap reaches tol or the level budget runs out.
    """
    tol = Fraction(tol)
    lower = Fraction(0)
    for x in dual_ball_samples(A, rng=rng, count=samples):
        v = f.eval_abs(x)
        if v > lower:
            lower = v
    n = max(f.degree, 0)
    upper = level_norm(A, f, n, cap=cap)
    while upper - lower > tol and n < n_max:
        n += 1
        upper = level_norm(A, f, n, cap=cap)
    return NormInterval(lower, upper, n)


def bang_norm_bounds(
    A: PolytopeSpace,
    v: GradedCoeffs,
    n: int,
    rng=None,
    samples: int = 20,
    cap=None,
):
    """Certified bounds on the dual-side norm of a coefficient vector.

    Lower: linear program against the level-n polytope presentation of
    the series space over the dual base (its feasible series all lie in
    the true unit ball, and successive levels rise toward the norm).
    Upper: the same objective against only finitely many evaluation
    constraints, a relaxation of the true ball, hence an upper bound.
    """
    if n < v.degree:
        raise ValueError("level must be at least the degree cap")
    mus = msets_upto(A.index, v.degree)
    objective = [abs(v.coeffs.get(mu, Fraction(0))) for mu in mus]
    if all(c == 0 for c in objective):
        return Fraction(0), Fraction(0)

    # level LP over the dual base: argument generators are P_A
    gens = tuple(A.P)
    _guarded_multiset_count(len(gens), n, cap)
    rows = []
    for mvec in _multiplicity_vectors(len(gens), n):
        row = []
        for mu in mus:
            single = [{} for _ in range(v.degree + 1)]
            single[len(mu)] = {mu: Fraction(1)}
            row.append(_level_value(single, gens, mvec, n))
        rows.append(row)
    status, lower, _ = lp.solve_max(
        objective, rows, [Fraction(1)] * len(rows)
    )
    if status != lp.OPTIMAL:
        raise InvalidSpaceError("level presentation failed to bound the LP")

    dualA = PolytopeSpace(A.index, A.Q, A.P)
    points = dual_ball_samples(dualA, rng=rng, count=samples)
    sample_rows = [
        [abs(monomial(x, mu)) for mu in mus] for x in points
    ]
    status, upper, _ = lp.solve_max(
        objective, sample_rows, [Fraction(1)] * len(sample_rows)
    )
    if status != lp.OPTIMAL:
        raise InvalidSpaceError(
            "sample constraints fail to bound the norm from above"
        )
    return lower, upper
