"""Vertex enumeration for polars of nonnegative generator sets.

polar_vertices(G) computes the vertex set of

    {x >= 0 : <x, g> <= 1 for every g in G}

by the double description method on the homogenization cone
{(x, t) : x >= 0, t >= 0, <x, g> <= t}. Rays with t > 0 rescale to
vertices; a surviving ray with t = 0 means the polytope is unbounded,
which only happens when G fails to span every coordinate.

canonicalize(points) removes zero vectors, duplicates and any point
lying below the convex hull of the others (the solid, downward-closed
hull), leaving the unique minimal generator antichain for the induced
norm.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from . import lp
from .core import IndexSet, Sequence
from .errors import InvalidSpaceError, SizeGuardError

DEFAULT_VERTEX_CAP = 20000


def vertex_cap(override=None) -> int:
    if override is not None:
        return override
    env = os.environ.get("RSS_SIZE_GUARD")
    return int(env) if env else DEFAULT_VERTEX_CAP


def spans(generators, index: IndexSet) -> bool:
    """True when every coordinate is positive in some generator."""
    n = len(index)
    covered = [False] * n
    for g in generators:
        for i, e in enumerate(g.entries):
            if e > 0:
                covered[i] = True
    return all(covered)


def _primitive(vec):
    """Scale a rational ray to a primitive integer vector (canonical)."""
    den = 1
    for v in vec:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vec]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    return tuple(Fraction(v) for v in ints)


def _tight_set(ray, constraints, dim):
    """Indices of all constraints (coordinates first) tight at the ray."""
    tight = set()
    for i in range(dim):
        if ray[i] == 0:
            tight.add(i)
    for k, con in enumerate(constraints):
        if sum(r * c for r, c in zip(ray, con)) == 0:
            tight.add(dim + k)
    return tight


def _dd_cone(constraints, dim, cap):
    """Extreme rays of {y >= 0 : con . y <= 0 for all con}, y in R^dim."""
    rays = []
    for i in range(dim):
        e = [Fraction(0)] * dim
        e[i] = Fraction(1)
        rays.append(tuple(e))
    inserted = []
    for con in constraints:
        vals = [sum(r * c for r, c in zip(ray, con)) for ray in rays]
        keep = [ray for ray, v in zip(rays, vals) if v <= 0]
        pos = [(ray, v) for ray, v in zip(rays, vals) if v > 0]
        neg = [(ray, v) for ray, v in zip(rays, vals) if v < 0]
        if pos and neg:
            # combinatorial adjacency is sound here because the ray set
            # stays minimal: all current extreme rays act as witnesses
            tights = {ray: _tight_set(ray, inserted, dim) for ray in rays}
            new = []
            for rp, vp in pos:
                for rn, vn in neg:
                    common = tights[rp] & tights[rn]
                    adjacent = True
                    for other in rays:
                        if other is rp or other is rn:
                            continue
                        if common <= tights[other]:
                            adjacent = False
                            break
                    if not adjacent:
                        continue
                    combo = tuple(
                        vp * b - vn * a for a, b in zip(rp, rn)
                    )
                    new.append(_primitive(combo))
            keep.extend(dict.fromkeys(new))
        if len(keep) > cap:
            raise SizeGuardError("polar-vertex", cap, len(keep))
        rays = keep
        inserted.append(con)
    return rays


def polar_vertices(generators, index: IndexSet, cap=None):
    """Exact canonical vertex set of the polar of a spanning set."""
    generators = tuple(generators)
    n = len(index)
    if n == 0:
        return ()
    for g in generators:
        if g.index != index:
            raise InvalidSpaceError("generator on the wrong index set")
        if not g.is_nonnegative():
            raise InvalidSpaceError("polar generators must be nonnegative")
    if not spans(generators, index):
        raise InvalidSpaceError(
            "generators do not span every coordinate; polar is unbounded"
        )
    cap = vertex_cap(cap)
    # homogenize: y = (x, t), constraints <x, g> - t <= 0
    constraints = [tuple(g.entries) + (Fraction(-1),) for g in generators]
    rays = _dd_cone(constraints, n + 1, cap)
    points = []
    for ray in rays:
        t = ray[n]
        if t == 0:
            if any(v != 0 for v in ray[:n]):
                raise InvalidSpaceError("polar is unbounded")
            continue
        points.append(Sequence(index, tuple(v / t for v in ray[:n])))
    return canonicalize(points, index)


def dominated_by_hull(point: Sequence, others) -> bool:
    """Is the point <= some convex combination of the other points?

    Feasibility is decided exactly: maximize s subject to
    sum(lam) <= 1, lam >= 0, s * point <= sum(lam_j * other_j); the
    point is dominated iff the optimum reaches 1.
    """
    others = [o for o in others if o is not point]
    if not others:
        return point.is_zero()
    if point.is_zero():
        return True
    n = len(point.index)
    nvars = 1 + len(others)  # s, lam_1..lam_k
    c = [Fraction(1)] + [Fraction(0)] * len(others)
    rows = []
    rhs = []
    for i in range(n):
        row = [point.entries[i]] + [-o.entries[i] for o in others]
        rows.append(row)
        rhs.append(Fraction(0))
    rows.append([Fraction(0)] + [Fraction(1)] * len(others))
    rhs.append(Fraction(1))
    status, value, _ = lp.solve_max(c, rows, rhs)
    if status == lp.UNBOUNDED:
        return True
    assert len(c) == nvars
    return value >= 1


def canonicalize(points, index: IndexSet):
    """Deduplicate, drop zeros and hull-dominated points, sort canonically."""
    uniq = []
    seen = set()
    for p in points:
        if p.index != index:
            raise InvalidSpaceError("point on the wrong index set")
        if p.is_zero():
            continue
        if p.entries in seen:
            continue
        seen.add(p.entries)
        uniq.append(p)
    # cheap pass: points below a single other point
    survivors = [
        p
        for p in uniq
        if not any(q is not p and q.dominates(p) for q in uniq)
    ]
    result = []
    for p in survivors:
        rest = [q for q in survivors if q is not p]
        if not dominated_by_hull(p, rest):
            result.append(p)
    result.sort(key=lambda p: p.entries)
    return tuple(result)
