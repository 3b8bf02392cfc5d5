"""A bounded non-regular map, realized on length-truncated string families.

The operator sends the i-th basis vector of a max-norm space on
{0..2N} to a signed, geometrically damped spread over even-length
binary strings: the entry at (i, w) is (-1)^{w_i} / (|w|^2 2^{|w|})
when i < |w| and zero otherwise. Each truncation is a bounded map, yet
the absolute value applied to the all-ones vector has 1-norm equal to
half the N-th harmonic number, which grows without bound as the
truncation is extended. The report exhibits both sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .core import IndexSet, Sequence
from .maps import MatrixRep
from .spaces import PolytopeSpace, sum_space, sup_space

MAX_N = 9


def words(length: int):
    """All binary strings of the given length, lexicographic."""
    return ("".join(bits) for bits in product("01", repeat=length))


def imbalance(w: str) -> int:
    """Absolute difference between the counts of ones and zeros."""
    ones = w.count("1")
    return abs(ones - (len(w) - ones))


def entry_value(i: int, w: str) -> Fraction:
    """Matrix entry at row i, column w."""
    if i >= len(w):
        return Fraction(0)
    sign = -1 if w[i] == "1" else 1
    return Fraction(sign, len(w) ** 2 * 2 ** len(w))


@dataclass(frozen=True)
class CounterexampleInstance:
    N: int
    domain: PolytopeSpace
    codomain: PolytopeSpace
    L: MatrixRep


def _check_range(N: int):
    if not 1 <= N <= MAX_N:
        raise ValueError(f"N must be between 1 and {MAX_N}, got {N}")


def codomain_labels(N: int):
    labels = []
    for n in range(1, N + 1):
        labels.extend(words(2 * n))
    return labels


def counterexample_build(N: int) -> CounterexampleInstance:
    """Materialize the truncated instance as exact spaces and a matrix."""
    _check_range(N)
    domain = sup_space(range(2 * N + 1), name=f"sup{{0..{2 * N}}}")
    cod_index = IndexSet(tuple(codomain_labels(N)))
    codomain = PolytopeSpace(
        cod_index,
        tuple(Sequence.basis(cod_index, w) for w in cod_index.labels),
        (Sequence(cod_index, (Fraction(1),) * len(cod_index)),),
        name=f"sum{{|w|<=2*{N}}}",
    )
    rows = tuple(
        tuple(entry_value(i, w) for w in cod_index.labels)
        for i in range(2 * N + 1)
    )
    return CounterexampleInstance(
        N, domain, codomain, MatrixRep(domain.index, cod_index, rows)
    )


def _level_abs_sum(n: int) -> Fraction:
    """sum over |w| = 2n of (|L| applied to all-ones)_w, by brute force."""
    total = Fraction(0)
    for w in words(2 * n):
        val = Fraction(0)
        for i in range(len(w)):
            val += abs(entry_value(i, w))
        total += val
    return total


def _level_imbalance_sum(n: int) -> int:
    return sum(imbalance(w) for w in words(2 * n))


def _worst_sign_level_sum(n: int, signs) -> Fraction:
    """sum over |w| = 2n of |(L a)_w| for the sign vector a.

    Counted through the (ones in plus block, ones in minus block)
    distribution, which agrees with literal enumeration but is
    polynomial in n.
    """
    m = 2 * n
    plus = sum(1 for s in signs if s > 0)
    minus = m - plus
    weight = Fraction(1, m * m * 2**m)
    total = Fraction(0)
    from math import comb

    for k in range(plus + 1):
        ck = comb(plus, k)
        for l in range(minus + 1):
            count = ck * comb(minus, l)
            # plus-block: k ones contribute -(1)k +(plus-k); minus-block
            # signs flip
            value = (plus - 2 * k) - (minus - 2 * l)
            total += count * abs(value) * weight
    return total


def worst_sign_search(n: int, max_rounds: int = 20):
    """Greedy coordinate flips from the all-ones sign vector.

    Returns (signs, level_sum); the search stops at a local maximum.
    """
    m = 2 * n
    signs = [1] * m
    best = _worst_sign_level_sum(n, signs)
    for _ in range(max_rounds):
        improved = False
        for i in range(m):
            signs[i] = -signs[i]
            v = _worst_sign_level_sum(n, signs)
            if v > best:
                best = v
                improved = True
            else:
                signs[i] = -signs[i]
        if not improved:
            break
    return signs, best


def counterexample_report(N: int, imbalance_levels: int = 6) -> dict:
    """Exact per-level and cumulative data for the truncated family.

    Columns of the matrix are generated on the fly, so the report stays
    cheap even where a dense build would not.
    """
    _check_range(N)
    levels = []
    cumulative = Fraction(0)
    harmonic = Fraction(0)
    bound_cumulative = Fraction(0)
    for n in range(1, N + 1):
        abs_sum = _level_abs_sum(n)
        cumulative += abs_sum
        harmonic += Fraction(1, n)
        level = {
            "n": n,
            "strings": 4**n,
            "abs_ones_sum": abs_sum,
            "truncated_norm": cumulative,
            "half_harmonic": harmonic / 2,
        }
        if n <= imbalance_levels:
            t_n = _level_imbalance_sum(n)
            level["imbalance_sum"] = t_n
            level["level_bound"] = Fraction(t_n, 4 * n * n * 4**n)
            signs, found = worst_sign_search(n)
            level["worst_sign_sum"] = found
            level["worst_signs"] = "".join(
                "+" if s > 0 else "-" for s in signs
            )
            bound_cumulative += level["level_bound"]
            level["bound_cumulative"] = bound_cumulative
        levels.append(level)
    return {
        "N": N,
        "levels": levels,
        "truncated_norm": cumulative,
        "half_harmonic": harmonic / 2,
        "bound_cumulative": bound_cumulative,
    }
