"""Equational law suite for the graded monoid structure.

Multiplication, unit, dereliction and digging are checked as exact
coefficient identities on randomly generated elements plus full bases
where small. Structure maps commute with truncation, so composites
keep exact intermediates and both sides are compared after truncating
to the common cap.

Norm-side checks bound the level map norms of the unit, dereliction
and multiplication matrices; they are skipped (and say so) when the
polar enumeration for the source presentation would blow the size
guard.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement

from . import series
from .core import IndexSet, Sequence, pair_label, mset_label
from .errors import SizeGuardError
from .levels import level_weights
from .maps import MatrixRep, map_norm, map_norm_lp
from .series import graded_index, mset, mset_union, msets_upto
from .spaces import PolytopeSpace, unit_space


@dataclass
class LawCheck:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class LawReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name, ok, detail=""):
        self.checks.append(LawCheck(name, ok, detail))

    def failures(self):
        return [c for c in self.checks if not c.ok]

    def __str__(self):
        lines = []
        for c in self.checks:
            mark = "pass" if c.ok else "FAIL"
            extra = f" ({c.detail})" if c.detail else ""
            lines.append(f"{mark}  {c.name}{extra}")
        return "\n".join(lines)


def _random_mset(rng, labels, max_deg):
    k = rng.randint(0, max_deg)
    return mset(rng.choice(labels) for _ in range(k))


def _random_frac(rng):
    return Fraction(rng.randint(-6, 6), rng.randint(1, 4))


def _all_msets(labels, degree):
    out = set()
    for k in range(degree + 1):
        out.update(
            mset(c) for c in combinations_with_replacement(labels, k)
        )
    return sorted(out)


def _first_diff(a: dict, b: dict):
    for key in sorted(set(a) | set(b), key=repr):
        if a.get(key, Fraction(0)) != b.get(key, Fraction(0)):
            return key
    return None


def _merge_pairs(pairs: dict, cap=None) -> dict:
    """Contract a dict keyed by (mu, nu) multiset pairs."""
    out = {}
    for (a, b), c in pairs.items():
        rho = mset_union(a, b)
        if cap is not None and len(rho) > cap:
            continue
        out[rho] = out.get(rho, Fraction(0)) + c
    return {m: c for m, c in out.items() if c != 0}


def _lift_label(mu: tuple, L: MatrixRep) -> dict:
    """Image coefficients of a single basis monomial under the lift."""
    return series.lift_coeffs({mu: Fraction(1)}, L, None)


def law_suite(A: PolytopeSpace, d: int, n: int, rng, lifts: int = 5):
    """Run every monoid, monad and naturality law at cap d, level n."""
    report = LawReport()
    labels = A.index.labels
    basis = _all_msets(labels, d)

    def rand_mset():
        return _random_mset(rng, labels, d)

    def rand_pair_dict(count=12):
        out = {}
        for _ in range(count):
            key = (rand_mset(), rand_mset())
            out[key] = out.get(key, Fraction(0)) + _random_frac(rng)
        return out

    def rand_nested(count=12):
        out = {}
        for _ in range(count):
            key = mset(rand_mset() for _ in range(rng.randint(0, d)))
            out[key] = out.get(key, Fraction(0)) + _random_frac(rng)
        return out

    # multiplication laws
    triple = {}
    for _ in range(12):
        key = (rand_mset(), rand_mset(), rand_mset())
        triple[key] = triple.get(key, Fraction(0)) + _random_frac(rng)
    left_first, right_first = {}, {}
    for (a, b, c3), v in triple.items():
        k1 = (mset_union(a, b), c3)
        left_first[k1] = left_first.get(k1, Fraction(0)) + v
        k2 = (a, mset_union(b, c3))
        right_first[k2] = right_first.get(k2, Fraction(0)) + v
    lhs = _merge_pairs(left_first, cap=d)
    rhs = _merge_pairs(right_first, cap=d)
    diff = _first_diff(lhs, rhs)
    report.add(
        "m-associative", diff is None, "" if diff is None else f"at {diff}"
    )

    g = rand_pair_dict()
    swapped = {}
    for (a, b), v in g.items():
        swapped[(b, a)] = swapped.get((b, a), Fraction(0)) + v
    diff = _first_diff(_merge_pairs(g, cap=d), _merge_pairs(swapped, cap=d))
    report.add(
        "m-commutative", diff is None, "" if diff is None else f"at {diff}"
    )

    f = {m: _random_frac(rng) for m in basis}
    f = {m: v for m, v in f.items() if v != 0}
    for name, embedded in (
        ("m-unit-left", {((), m): v for m, v in f.items()}),
        ("m-unit-right", {(m, ()): v for m, v in f.items()}),
    ):
        diff = _first_diff(_merge_pairs(embedded, cap=d), f)
        report.add(name, diff is None, "" if diff is None else f"at {diff}")

    # monad laws; digging routes through series.flatten_multisets so a
    # corrupted implementation fails here with a witness multiset
    singletons = {mset([m]): v for m, v in f.items()}
    diff = _first_diff(series.flatten_multisets(singletons, size_cap=d), f)
    report.add(
        "monad-mu-eta", diff is None, "" if diff is None else f"at {diff}"
    )

    split = {mset(mset([l]) for l in m): v for m, v in f.items()}
    diff = _first_diff(series.flatten_multisets(split, size_cap=d), f)
    report.add(
        "monad-mu-lift-eta",
        diff is None,
        "" if diff is None else f"at {diff}",
    )

    deep = {}
    for _ in range(12):
        key = mset(
            mset(rand_mset() for _ in range(rng.randint(0, d)))
            for _ in range(rng.randint(0, d))
        )
        deep[key] = deep.get(key, Fraction(0)) + _random_frac(rng)
    lhs = series.flatten_multisets(
        series.flatten_multisets(deep, size_cap=None), size_cap=d
    )

    def flat_label(m):
        image = series.flatten_multisets({m: Fraction(1)}, None)
        return next(iter(image)) if image else ()

    inner_flattened = {}
    for outer, v in deep.items():
        key = mset(flat_label(m) for m in outer)
        inner_flattened[key] = inner_flattened.get(key, Fraction(0)) + v
    rhs = series.flatten_multisets(inner_flattened, size_cap=d)
    diff = _first_diff(lhs, rhs)
    report.add(
        "monad-mu-assoc", diff is None, "" if diff is None else f"at {diff}"
    )

    # naturality against random lifts
    failures = {}
    for _ in range(lifts):
        tgt = IndexSet(tuple(f"y{j}" for j in range(rng.randint(1, 2))))
        L = MatrixRep(
            A.index,
            tgt,
            tuple(
                tuple(_random_frac(rng) for _ in tgt.labels)
                for _ in labels
            ),
        )

        for i, label in enumerate(labels):
            via_lift = series.lift_coeffs(
                {mset([label]): Fraction(1)}, L, d
            )
            direct = {
                mset([tl]): L.entries[i][j]
                for j, tl in enumerate(tgt.labels)
                if L.entries[i][j] != 0
            }
            dd = _first_diff(via_lift, direct)
            if dd is not None:
                failures.setdefault("eta-natural", dd)

        nested = rand_nested(count=8)
        lhs = series.lift_coeffs(
            series.flatten_multisets(nested, size_cap=None), L, None
        )
        lhs = {m: c for m, c in lhs.items() if len(m) <= d}
        doubly = {}
        for outer, v in nested.items():
            expanded = {(): v}
            for inner in outer:
                nxt = {}
                for key, c in expanded.items():
                    for m2, c2 in _lift_label(inner, L).items():
                        k2 = key + (m2,)
                        nxt[k2] = nxt.get(k2, Fraction(0)) + c * c2
                expanded = nxt
            for key, c in expanded.items():
                k2 = mset(key)
                doubly[k2] = doubly.get(k2, Fraction(0)) + c
        rhs = series.flatten_multisets(doubly, size_cap=d)
        dd = _first_diff(lhs, rhs)
        if dd is not None:
            failures.setdefault("mu-natural", dd)

        pairs = rand_pair_dict(count=8)
        lhs = series.lift_coeffs(_merge_pairs(pairs, cap=None), L, None)
        lhs = {m: c for m, c in lhs.items() if len(m) <= d}
        lifted_pairs = {}
        for (a, b), v in pairs.items():
            for m1, c1 in _lift_label(a, L).items():
                for m2, c2 in _lift_label(b, L).items():
                    key = (m1, m2)
                    lifted_pairs[key] = (
                        lifted_pairs.get(key, Fraction(0)) + v * c1 * c2
                    )
        rhs = _merge_pairs(lifted_pairs, cap=d)
        dd = _first_diff(lhs, rhs)
        if dd is not None:
            failures.setdefault("m-natural", dd)

        if series.lift_coeffs({(): Fraction(3)}, L, d) != {(): Fraction(3)}:
            failures.setdefault("u-natural", ())

    for name in ("eta-natural", "mu-natural", "m-natural", "u-natural"):
        report.add(
            name, name not in failures, str(failures.get(name, ""))
        )

    _norm_side(report, A, d, n)
    return report


def structure_matrices(A: PolytopeSpace, d: int):
    """Unit, dereliction and multiplication as matrices on graded indices."""
    gindex = graded_index(A.index, d)
    unit = MatrixRep.from_dict(
        unit_space().index, gindex, {("*", mset_label(())): Fraction(1)}
    )
    der = MatrixRep.from_dict(
        A.index,
        gindex,
        {(l, mset_label(mset([l]))): Fraction(1) for l in A.index.labels},
    )
    mus = msets_upto(A.index, d)
    pidx = IndexSet(
        tuple(
            pair_label(mset_label(a), mset_label(b))
            for a in mus
            for b in mus
        )
    )
    entries = {}
    for a in mus:
        for b in mus:
            rho = mset_union(a, b)
            if len(rho) <= d:
                entries[
                    (
                        pair_label(mset_label(a), mset_label(b)),
                        mset_label(rho),
                    )
                ] = Fraction(1)
    mult = MatrixRep.from_dict(pidx, gindex, entries)
    return unit, der, mult


def _norm_side(report: LawReport, A: PolytopeSpace, d: int, n: int):
    # everything runs against the weight side of the level presentation
    # through LPs, so no polar enumeration is needed; multiplication of
    # two level-n forms has 2n variables, so its target sits at 2n
    try:
        index, weights = level_weights(A, d, n)
        _, weights_2n = level_weights(A, d, 2 * n)
    except SizeGuardError as e:
        for name in ("norm-u", "norm-eta", "norm-m"):
            report.add(name, True, f"skipped ({e})")
        return
    target_q = PolytopeSpace(index, (), weights)
    unit, der, mult = structure_matrices(A, d)
    nu = map_norm(unit_space(), target_q, unit)
    report.add("norm-u", nu <= 1, f"norm {nu}")
    ne = map_norm(A, target_q, der)
    report.add("norm-eta", ne <= 1, f"norm {ne}")
    pidx = mult.row_index
    source_Q = [
        Sequence(
            pidx,
            tuple(w1[lab[1]] * w2[lab[2]] for lab in pidx.labels),
        )
        for w1 in weights
        for w2 in weights
    ]
    target_2n = PolytopeSpace(index, (), weights_2n)
    nm = map_norm_lp(source_Q, target_2n, mult)
    report.add("norm-m", nm <= 1, f"norm {nm} at target level {2 * n}")
