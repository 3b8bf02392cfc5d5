"""One-sided sequent proofs: s-expression format, checking, evaluation.

A proof file is an s-expression; each node is

    (rule premise... arg... [:principal k])

with formulas quoted. Rules and their conventions (positions 0-based,
principal defaulting to the rightmost possible position):

    (ax "A")                  |- A^, A
    (one)                     |- 1
    (top "F" ... )            |- F..., top
    (cut p1 p2)               cut last of p1 against first of p2
    (ex p :principal k)       swap positions k, k+1
    (tensor p1 p2)            last of p1 (x) first of p2
    (par p)                   join the last two formulas
    (bot p)                   append bot
    (with p1 p2)              same context, principals last
    (plus1 p "B")             |- G, A  =>  |- G, A + B
    (plus2 p "A")             |- G, B  =>  |- G, A + B
    (weaken p "?B")           append ?B
    (derelict p)              A at the principal position becomes ?A
    (contract p)              merge two ?A at positions k, k+1
    (promote p)               A becomes !A; context must be all ?

Denotations are sparse tensors with one axis per conclusion formula.
Promotion packs the ? context into a single graded axis over the
tagged union of the context bases (multisets over a disjoint union are
exactly tuples of multisets), routes through the functorial lift and a
flattening, and unpacks again; with an empty context this sends a point
to its delta expansion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import series
from .core import IndexSet, Sequence, mset_label, tagged_label
from .errors import ProofError, FormulaSyntaxError
from .formulas import (
    Atom,
    Bin,
    Dual,
    Modal,
    Unit,
    formula_dual,
    normalize,
    parse_formula,
    space_of,
)
from .maps import MatrixRep
from .series import mset
from .spaces import PolytopeSpace, unit_space


# ------------------------------------------------------------- s-expressions


def parse_sexpr(text: str):
    """Parse one s-expression into nested tuples/strings/ints."""
    tokens = _sexpr_tokens(text)
    expr, rest = _read(tokens, 0)
    if rest != len(tokens):
        raise FormulaSyntaxError("trailing input after proof", rest)
    return expr


def _sexpr_tokens(text: str):
    tokens = []
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
        elif c in "()":
            tokens.append((c, i))
            i += 1
        elif c == ";":
            while i < len(text) and text[i] != "\n":
                i += 1
        elif c == '"':
            j = text.find('"', i + 1)
            if j < 0:
                raise FormulaSyntaxError("unterminated string", i)
            tokens.append((("str", text[i + 1 : j]), i))
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '()";':
                j += 1
            word = text[i:j]
            if word.lstrip("-").isdigit():
                tokens.append((("int", int(word)), i))
            else:
                tokens.append((("sym", word), i))
            i = j
    return tokens


def _read(tokens, pos):
    if pos >= len(tokens):
        raise FormulaSyntaxError("unexpected end of proof", pos)
    tok, at = tokens[pos]
    if tok == "(":
        items = []
        pos += 1
        while True:
            if pos >= len(tokens):
                raise FormulaSyntaxError("unclosed parenthesis", at)
            if tokens[pos][0] == ")":
                return tuple(items), pos + 1
            item, pos = _read(tokens, pos)
            items.append(item)
    if tok == ")":
        raise FormulaSyntaxError("unexpected ')'", at)
    return tok, pos + 1


# ------------------------------------------------------------------- proofs


@dataclass(frozen=True)
class ProofTree:
    rule: str
    premises: tuple
    formulas: tuple  # formula arguments, already parsed
    principal: int = None

    def conclusion(self):
        return _conclusion(self)


def proof_from_sexpr(expr) -> ProofTree:
    if not isinstance(expr, tuple) or not expr:
        raise ProofError("?", "a proof node must be a non-empty list")
    head = expr[0]
    if not (isinstance(head, tuple) and head[0] == "sym"):
        raise ProofError("?", f"rule name expected, got {head!r}")
    rule = head[1]
    premises = []
    formulas = []
    principal = None
    args = list(expr[1:])
    while args:
        item = args.pop(0)
        if isinstance(item, tuple) and item and item[0] == "sym":
            if item[1] == ":principal":
                if not args or not (
                    isinstance(args[0], tuple) and args[0][0] == "int"
                ):
                    raise ProofError(rule, ":principal needs an integer")
                principal = args.pop(0)[1]
                continue
            raise ProofError(rule, f"unexpected symbol {item[1]!r}")
        if isinstance(item, tuple) and item and item[0] == "str":
            formulas.append(normalize(parse_formula(item[1])))
            continue
        if isinstance(item, tuple) and item and item[0] == "int":
            raise ProofError(rule, "bare integers only follow :principal")
        premises.append(proof_from_sexpr(item))
    return ProofTree(rule, tuple(premises), tuple(formulas), principal)


def parse_proof(text: str) -> ProofTree:
    return proof_from_sexpr(parse_sexpr(text))


def _is_quest(f) -> bool:
    return isinstance(f, Modal) and f.op == "?"


def _arity(rule, premises, formulas, want_p, want_f):
    if len(premises) != want_p:
        raise ProofError(
            rule, f"needs {want_p} premise(s), has {len(premises)}"
        )
    if len(formulas) != want_f:
        raise ProofError(
            rule, f"needs {want_f} formula argument(s), has {len(formulas)}"
        )


def _conclusion(node: ProofTree):
    """Compute the conclusion sequent, checking rule shapes."""
    rule = node.rule
    prem = [p.conclusion() for p in node.premises]

    def principal_default(ctx_len, default):
        k = node.principal if node.principal is not None else default
        if not 0 <= k < ctx_len:
            raise ProofError(rule, f"principal position {k} out of range")
        return k

    if rule == "ax":
        _arity(rule, node.premises, node.formulas, 0, 1)
        f = node.formulas[0]
        return (formula_dual(f), f)
    if rule == "one":
        _arity(rule, node.premises, node.formulas, 0, 0)
        return (Unit("1"),)
    if rule == "top":
        if node.premises:
            raise ProofError(rule, "takes no premises")
        return tuple(node.formulas) + (Unit("top"),)
    if rule == "cut":
        _arity(rule, node.premises, node.formulas, 2, 0)
        left, right = prem
        if not left or not right:
            raise ProofError(rule, "premises must be non-empty sequents")
        a = left[-1]
        if right[0] != formula_dual(a):
            raise ProofError(
                rule,
                f"cut formulas do not match: {a} vs {right[0]}",
            )
        return left[:-1] + right[1:]
    if rule == "ex":
        _arity(rule, node.premises, node.formulas, 1, 0)
        seq = list(prem[0])
        if node.principal is None:
            raise ProofError(rule, "exchange needs :principal k")
        k = node.principal
        if not 0 <= k < len(seq) - 1:
            raise ProofError(rule, f"cannot swap at position {k}")
        seq[k], seq[k + 1] = seq[k + 1], seq[k]
        return tuple(seq)
    if rule == "tensor":
        _arity(rule, node.premises, node.formulas, 2, 0)
        left, right = prem
        if not left or not right:
            raise ProofError(rule, "premises must be non-empty sequents")
        return left[:-1] + (Bin("*", left[-1], right[0]),) + right[1:]
    if rule == "par":
        _arity(rule, node.premises, node.formulas, 1, 0)
        seq = prem[0]
        if len(seq) < 2:
            raise ProofError(rule, "needs two formulas to join")
        k = principal_default(len(seq) - 1, len(seq) - 2)
        return (
            seq[:k] + (Bin("par", seq[k], seq[k + 1]),) + seq[k + 2 :]
        )
    if rule == "bot":
        _arity(rule, node.premises, node.formulas, 1, 0)
        return prem[0] + (Unit("bot"),)
    if rule == "with":
        _arity(rule, node.premises, node.formulas, 2, 0)
        left, right = prem
        if not left or not right or left[:-1] != right[:-1]:
            raise ProofError(rule, "contexts must match")
        return left[:-1] + (Bin("&", left[-1], right[-1]),)
    if rule in ("plus1", "plus2"):
        _arity(rule, node.premises, node.formulas, 1, 1)
        seq = prem[0]
        if not seq:
            raise ProofError(rule, "premise must be non-empty")
        other = node.formulas[0]
        if rule == "plus1":
            return seq[:-1] + (Bin("+", seq[-1], other),)
        return seq[:-1] + (Bin("+", other, seq[-1]),)
    if rule == "weaken":
        _arity(rule, node.premises, node.formulas, 1, 1)
        f = node.formulas[0]
        if not _is_quest(f):
            raise ProofError(rule, "weakening formula must be a ? formula")
        return prem[0] + (f,)
    if rule == "derelict":
        _arity(rule, node.premises, node.formulas, 1, 0)
        seq = list(prem[0])
        if not seq:
            raise ProofError(rule, "premise must be non-empty")
        k = principal_default(len(seq), len(seq) - 1)
        seq[k] = Modal("?", seq[k])
        return tuple(seq)
    if rule == "contract":
        _arity(rule, node.premises, node.formulas, 1, 0)
        seq = list(prem[0])
        if len(seq) < 2:
            raise ProofError(rule, "needs two formulas to contract")
        k = principal_default(len(seq) - 1, len(seq) - 2)
        if seq[k] != seq[k + 1] or not _is_quest(seq[k]):
            raise ProofError(
                rule, "contraction needs two equal ? formulas side by side"
            )
        return tuple(seq[:k]) + (seq[k],) + tuple(seq[k + 2 :])
    if rule == "promote":
        _arity(rule, node.premises, node.formulas, 1, 0)
        seq = list(prem[0])
        if not seq:
            raise ProofError(rule, "premise must be non-empty")
        k = principal_default(len(seq), len(seq) - 1)
        for i, f in enumerate(seq):
            if i != k and not _is_quest(f):
                raise ProofError(
                    rule, f"context formula {f} is not a ? formula"
                )
        seq[k] = Modal("!", seq[k])
        return tuple(seq)
    raise ProofError(rule, "unknown rule")


@dataclass
class CheckReport:
    ok: bool
    issues: list
    conclusion: tuple = None

    def __str__(self):
        if self.ok:
            seq = ", ".join(str(f) for f in self.conclusion)
            return f"well-formed proof of |- {seq}"
        return "\n".join(f"{node}: {reason}" for node, reason in self.issues)


def check_proof(p: ProofTree) -> CheckReport:
    try:
        conclusion = p.conclusion()
        return CheckReport(True, [], conclusion)
    except ProofError as e:
        return CheckReport(False, [(e.node, e.reason)])


# -------------------------------------------------------------- denotations


class Denotation:
    """Sparse tensor with one labelled axis per conclusion formula."""

    def __init__(self, formulas, axes, data):
        self.formulas = tuple(formulas)  # normalized formulas
        self.axes = tuple(axes)  # tuple of IndexSet
        self.data = data  # {tuple of labels: Fraction}

    def permuted(self, perm):
        axes = tuple(self.axes[i] for i in perm)
        formulas = tuple(self.formulas[i] for i in perm)
        data = {
            tuple(key[i] for i in perm): v for key, v in self.data.items()
        }
        return Denotation(formulas, axes, data)


def _axis_index(f, bindings, degree):
    """Index set of a formula's space without building generators."""
    space = _space_cache_get(f, bindings, degree)
    return space.index


class Interpreter:
    def __init__(self, bindings: dict, degree: int, cap=None):
        self.bindings = bindings
        self.degree = degree
        self.cap = cap
        self._index_cache = {}

    def axis(self, f) -> IndexSet:
        key = repr(f)
        if key not in self._index_cache:
            self._index_cache[key] = _formula_index(
                f, self.bindings, self.degree
            )
        return self._index_cache[key]

    def run(self, node: ProofTree) -> Denotation:
        seq = node.conclusion()  # validates shapes on the way
        den = self._eval(node)
        assert den.formulas == seq
        return den

    # each rule returns a Denotation for the node's conclusion
    def _eval(self, node: ProofTree) -> Denotation:
        rule = node.rule
        if rule == "ax":
            f = node.formulas[0]
            fd = formula_dual(f)
            index = self.axis(f)
            data = {(l, l): Fraction(1) for l in index.labels}
            return Denotation((fd, f), (index, index), data)
        if rule == "one":
            index = unit_space().index
            return Denotation(
                (Unit("1"),), (index,), {("*",): Fraction(1)}
            )
        if rule == "top":
            formulas = tuple(node.formulas) + (Unit("top"),)
            axes = tuple(self.axis(f) for f in formulas)
            return Denotation(formulas, axes, {})
        if rule == "cut":
            left = self._eval(node.premises[0])
            right = self._eval(node.premises[1])
            return self._cut(left, right)
        if rule == "ex":
            den = self._eval(node.premises[0])
            k = node.principal
            perm = list(range(len(den.formulas)))
            perm[k], perm[k + 1] = perm[k + 1], perm[k]
            return den.permuted(perm)
        if rule == "tensor":
            left = self._eval(node.premises[0])
            right = self._eval(node.premises[1])
            return self._tensor(left, right)
        if rule == "par":
            den = self._eval(node.premises[0])
            seq = node.conclusion()
            k = (
                node.principal
                if node.principal is not None
                else len(den.formulas) - 2
            )
            return self._join_pair(den, k, seq[k])
        if rule == "bot":
            den = self._eval(node.premises[0])
            index = unit_space().index
            formulas = den.formulas + (Unit("bot"),)
            data = {
                key + ("*",): v for key, v in den.data.items()
            }
            return Denotation(formulas, den.axes + (index,), data)
        if rule == "with":
            left = self._eval(node.premises[0])
            right = self._eval(node.premises[1])
            seq = node.conclusion()
            return self._with(left, right, seq[-1])
        if rule in ("plus1", "plus2"):
            den = self._eval(node.premises[0])
            seq = node.conclusion()
            slot = 0 if rule == "plus1" else 1
            return self._inject(den, seq[-1], slot)
        if rule == "weaken":
            den = self._eval(node.premises[0])
            f = node.formulas[0]
            index = self.axis(f)
            empty = mset_label(())
            data = {
                key + (empty,): v for key, v in den.data.items()
            }
            return Denotation(
                den.formulas + (f,), den.axes + (index,), data
            )
        if rule == "derelict":
            den = self._eval(node.premises[0])
            k = (
                node.principal
                if node.principal is not None
                else len(den.formulas) - 1
            )
            return self._derelict(den, k)
        if rule == "contract":
            den = self._eval(node.premises[0])
            k = (
                node.principal
                if node.principal is not None
                else len(den.formulas) - 2
            )
            return self._contract(den, k)
        if rule == "promote":
            den = self._eval(node.premises[0])
            k = (
                node.principal
                if node.principal is not None
                else len(den.formulas) - 1
            )
            return self._promote(den, k)
        raise ProofError(rule, "unknown rule")

    def _cut(self, left: Denotation, right: Denotation) -> Denotation:
        na = len(left.formulas) - 1
        if left.axes[na] != right.axes[0]:
            raise ProofError("cut", "cut axes have different index sets")
        by_first = {}
        for key, v in right.data.items():
            by_first.setdefault(key[0], []).append((key[1:], v))
        data = {}
        for key, v in left.data.items():
            for rest, w in by_first.get(key[na], ()):
                full = key[:na] + rest
                data[full] = data.get(full, Fraction(0)) + v * w
        data = {k: v for k, v in data.items() if v != 0}
        return Denotation(
            left.formulas[:na] + right.formulas[1:],
            left.axes[:na] + right.axes[1:],
            data,
        )

    def _tensor(self, left: Denotation, right: Denotation) -> Denotation:
        na = len(left.formulas) - 1
        f = Bin("*", left.formulas[na], right.formulas[0])
        index = self.axis(f)
        data = {}
        for kl, v in left.data.items():
            for kr, w in right.data.items():
                label = ("*", kl[na], kr[0])
                key = kl[:na] + (label,) + kr[1:]
                data[key] = data.get(key, Fraction(0)) + v * w
        return Denotation(
            left.formulas[:na] + (f,) + right.formulas[1:],
            left.axes[:na] + (index,) + right.axes[1:],
            data,
        )

    def _join_pair(self, den: Denotation, k: int, f) -> Denotation:
        index = self.axis(f)
        data = {}
        for key, v in den.data.items():
            label = ("*", key[k], key[k + 1])
            nk = key[:k] + (label,) + key[k + 2 :]
            data[nk] = data.get(nk, Fraction(0)) + v
        return Denotation(
            den.formulas[:k] + (f,) + den.formulas[k + 2 :],
            den.axes[:k] + (index,) + den.axes[k + 2 :],
            data,
        )

    def _with(self, left: Denotation, right: Denotation, f) -> Denotation:
        index = self.axis(f)
        na = len(left.formulas) - 1
        data = {}
        for key, v in left.data.items():
            nk = key[:na] + (tagged_label(0, key[na]),)
            data[nk] = data.get(nk, Fraction(0)) + v
        for key, v in right.data.items():
            nk = key[:na] + (tagged_label(1, key[na]),)
            data[nk] = data.get(nk, Fraction(0)) + v
        return Denotation(
            left.formulas[:na] + (f,),
            left.axes[:na] + (index,),
            data,
        )

    def _inject(self, den: Denotation, f, slot: int) -> Denotation:
        index = self.axis(f)
        na = len(den.formulas) - 1
        data = {
            key[:na] + (tagged_label(slot, key[na]),): v
            for key, v in den.data.items()
        }
        return Denotation(
            den.formulas[:na] + (f,),
            den.axes[:na] + (index,),
            data,
        )

    def _derelict(self, den: Denotation, k: int) -> Denotation:
        f = Modal("?", den.formulas[k])
        index = self.axis(f)
        data = {}
        for key, v in den.data.items():
            label = mset_label(mset([key[k]]))
            nk = key[:k] + (label,) + key[k + 1 :]
            data[nk] = data.get(nk, Fraction(0)) + v
        return Denotation(
            den.formulas[:k] + (f,) + den.formulas[k + 1 :],
            den.axes[:k] + (index,) + den.axes[k + 1 :],
            data,
        )

    def _contract(self, den: Denotation, k: int) -> Denotation:
        f = den.formulas[k]
        index = self.axis(f)
        data = {}
        for key, v in den.data.items():
            merged = series.mset_union(key[k][1], key[k + 1][1])
            if len(merged) > self.degree:
                continue
            nk = key[:k] + (mset_label(merged),) + key[k + 2 :]
            data[nk] = data.get(nk, Fraction(0)) + v
        data = {kk: v for kk, v in data.items() if v != 0}
        return Denotation(
            den.formulas[:k] + (f,) + den.formulas[k + 2 :],
            den.axes[:k] + (index,) + den.axes[k + 2 :],
            data,
        )

    def _promote(self, den: Denotation, k: int) -> Denotation:
        """Pack the ? context, lift through the principal, flatten, unpack.

        Context coordinates become one multiset over the tagged union
        of the context bases; the premise transposes to a matrix from
        the principal base into that series index; digging after the
        lift of that matrix gives the conclusion columns.
        """
        ctx = [i for i in range(len(den.formulas)) if i != k]
        f = Modal("!", den.formulas[k])
        out_index = self.axis(f)
        principal_index = den.axes[k]

        # premise entries, re-keyed by (packed context multiset, i)
        packed = {}
        for key, v in den.data.items():
            merged = []
            for slot, i in enumerate(ctx):
                merged.extend(
                    tagged_label(slot, l) for l in key[i][1]
                )
            packed.setdefault(key[k], {})[mset(merged)] = v

        degree = self.degree
        data = {}
        for nu_label in out_index.labels:
            nu = nu_label[1]
            # expand the monomial at nu through the packed matrix
            expanded = {(): Fraction(1)}
            dead = False
            for i_label in nu:
                row = packed.get(i_label)
                if not row:
                    dead = True
                    break
                nxt = {}
                for key, c in expanded.items():
                    for m2, c2 in row.items():
                        k2 = key + (m2,)
                        nxt[k2] = nxt.get(k2, Fraction(0)) + c * c2
                expanded = nxt
            if dead:
                continue
            outer = {}
            for key, c in expanded.items():
                kk = mset(key)
                outer[kk] = outer.get(kk, Fraction(0)) + c
            flat = series.flatten_multisets(outer, size_cap=None)
            for merged, c in flat.items():
                if c == 0:
                    continue
                split = [[] for _ in ctx]
                ok = True
                for lab in merged:
                    split[lab[1]].append(lab[2])
                parts = [mset(s) for s in split]
                if any(len(p) > degree for p in parts):
                    continue
                key = [None] * (len(ctx) + 1)
                for slot, i in enumerate(ctx):
                    key[i if i < k else i] = None
                out_key = []
                pos = 0
                for i in range(len(den.formulas)):
                    if i == k:
                        out_key.append(nu_label)
                    else:
                        out_key.append(mset_label(parts[ctx.index(i)]))
                out_key = tuple(out_key)
                data[out_key] = data.get(out_key, Fraction(0)) + c
        data = {kk: v for kk, v in data.items() if v != 0}
        formulas = tuple(
            f if i == k else den.formulas[i]
            for i in range(len(den.formulas))
        )
        axes = tuple(
            out_index if i == k else den.axes[i]
            for i in range(len(den.formulas))
        )
        return Denotation(formulas, axes, data)


def _formula_index(f, bindings, degree) -> IndexSet:
    """Index set of a formula without generator computations."""
    from .series import graded_index

    f = normalize(f)
    if isinstance(f, Atom):
        if f.name not in bindings:
            raise ProofError("?", f"atom {f.name!r} has no bound space")
        return bindings[f.name].index
    if isinstance(f, Dual):
        return _formula_index(f.sub, bindings, degree)
    if isinstance(f, Unit):
        if f.name in ("1", "bot"):
            return unit_space().index
        return IndexSet(())
    if isinstance(f, Bin):
        left = _formula_index(f.left, bindings, degree)
        right = _formula_index(f.right, bindings, degree)
        if f.op in ("*", "par"):
            return IndexSet(
                tuple(
                    ("*", a, b)
                    for a in left.labels
                    for b in right.labels
                )
            )
        return IndexSet(
            tuple(tagged_label(0, a) for a in left.labels)
            + tuple(tagged_label(1, b) for b in right.labels)
        )
    if isinstance(f, Modal):
        sub = _formula_index(f.sub, bindings, degree)
        return graded_index(sub, degree)
    raise TypeError(f"not a formula: {f!r}")


def interpret(p: ProofTree, bindings: dict, degree: int) -> Denotation:
    """Evaluate a proof to its conclusion denotation."""
    return Interpreter(bindings, degree).run(p)


def denotation_matrix(den: Denotation) -> MatrixRep:
    """The denotation as a matrix.

    For a two-formula conclusion |- F1, F2 this is the matrix of the
    map from the dual of F1 (same index set) to F2; a one-formula
    conclusion gives a single-row matrix from the unit space.
    """
    if len(den.formulas) == 1:
        row_index = unit_space().index
        values = {("*", key[0]): v for key, v in den.data.items()}
        return MatrixRep.from_dict(row_index, den.axes[0], values)
    if len(den.formulas) == 2:
        values = {(key[0], key[1]): v for key, v in den.data.items()}
        return MatrixRep.from_dict(den.axes[0], den.axes[1], values)
    raise ValueError(
        "matrix view needs a conclusion of one or two formulas; "
        "join the rest with par first"
    )
