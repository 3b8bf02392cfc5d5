"""Exact rational simplex for the one LP shape the package needs.

All linear programs here are of the form

    max c.x   subject to   A x <= b,  x >= 0,  b >= 0,

so the slack basis is feasible and no phase-1 is required. Bland's rule
guarantees termination at desk scale.
"""

from __future__ import annotations

from fractions import Fraction

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"


def solve_max(c, rows, rhs):
    """Maximize c.x over {x >= 0 : rows[k].x <= rhs[k]}.

    Returns (status, value, x) with exact Fractions; x is None when
    unbounded. Every rhs entry must be >= 0.
    """
    n = len(c)
    m = len(rows)
    c = [Fraction(v) for v in c]
    rhs = [Fraction(v) for v in rhs]
    if any(v < 0 for v in rhs):
        raise ValueError("simplex requires nonnegative right-hand sides")
    if m == 0:
        if any(v > 0 for v in c):
            return UNBOUNDED, None, None
        return OPTIMAL, Fraction(0), [Fraction(0)] * n

    # tableau columns: n structural + m slack variables
    tab = []
    for k, row in enumerate(rows):
        r = [Fraction(v) for v in row] + [Fraction(0)] * m
        r[n + k] = Fraction(1)
        tab.append(r)
    b = rhs[:]
    obj = c + [Fraction(0)] * m
    basis = list(range(n, n + m))

    while True:
        enter = -1
        for j in range(n + m):
            if obj[j] > 0:
                enter = j
                break
        if enter < 0:
            break
        leave = -1
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = b[i] / a
                if (
                    best is None
                    or ratio < best
                    or (ratio == best and basis[i] < basis[leave])
                ):
                    best = ratio
                    leave = i
        if leave < 0:
            return UNBOUNDED, None, None
        piv = tab[leave][enter]
        tab[leave] = [v / piv for v in tab[leave]]
        b[leave] /= piv
        for i in range(m):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [v - f * w for v, w in zip(tab[i], tab[leave])]
                b[i] -= f * b[leave]
        if obj[enter] != 0:
            f = obj[enter]
            obj = [v - f * w for v, w in zip(obj, tab[leave])]
        basis[leave] = enter

    x = [Fraction(0)] * n
    for i, var in enumerate(basis):
        if var < n:
            x[var] = b[i]
    value = sum((ci * xi for ci, xi in zip(c, x)), start=Fraction(0))
    return OPTIMAL, value, x
