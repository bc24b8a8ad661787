"""Additive basis of the Chow groups A^k and the symbolic ring presentation
by the divisors H, psi and T_h.

Ring elements are :class:`RingExpression` objects: sparse polynomials with
exact rational coefficients in ``H``, ``psi`` and one ``T_h`` per stable
2-partition ``h``. Relations are emitted as generators of the ideal and never
reduced.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Mapping, Union

from .partitions import TwoPartition, label_key, stable_partitions
from .poincare import dimension
from .trees import (
    D,
    BStructure,
    Label,
    M,
    RootedMTree,
    d_label_blocks,
    enumerate_b_structures,
    enumerate_stable_trees,
)

__all__ = [
    "RingExpression",
    "BasisClass",
    "Relation",
    "TractabilityError",
    "enumerate_basis",
    "class_expression",
    "emit_relations",
    "relation5_pieces",
    "H",
    "PSI",
    "T",
    "MAX_EXPAND_DEGREE",
    "MAX_RELATION_SIZE",
]

MAX_EXPAND_DEGREE = 4
MAX_RELATION_SIZE = 8

HKey = tuple[Label, ...]
# (H exponent, psi exponent, sorted ((h, exponent), ...))
Monomial = tuple[int, int, tuple[tuple[HKey, int], ...]]
Scalar = Union[int, Fraction]


class TractabilityError(ValueError):
    """The requested expansion or emission is too large to attempt."""


def _hkey(h: Iterable[Label]) -> HKey:
    return tuple(sorted(h, key=label_key))


def _hkey_str(h: HKey) -> str:
    return "{" + ",".join(str(x) for x in h) + "}"


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    ts = dict(a[2])
    for k, e in b[2]:
        ts[k] = ts.get(k, 0) + e
    return (a[0] + b[0], a[1] + b[1], tuple(sorted(ts.items(), key=_tsort)))


def _tsort(item: tuple[HKey, int]):
    h = item[0]
    return (len(h), [label_key(x) for x in h])


def _mono_sort(mono: Monomial):
    return (-_mono_degree(mono), -mono[0], -mono[1], [(_tsort(t), -t[1]) for t in mono[2]])


def _mono_degree(mono: Monomial) -> int:
    return mono[0] + mono[1] + sum(e for _, e in mono[2])


class RingExpression:
    """Sparse polynomial in ``H``, ``psi`` and the ``T_h``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean: dict[Monomial, Fraction] = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("RingExpression is immutable")

    @classmethod
    def const(cls, c: Scalar) -> RingExpression:
        return cls({(0, 0, ()): c})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = RingExpression.const(other)
        if not isinstance(other, RingExpression):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> RingExpression:
        other = _as_expr(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return RingExpression(out)

    __radd__ = __add__

    def __neg__(self) -> RingExpression:
        return RingExpression({k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> RingExpression:
        return self + (-_as_expr(other))

    def __rsub__(self, other) -> RingExpression:
        return _as_expr(other) - self

    def __mul__(self, other) -> RingExpression:
        if isinstance(other, (int, Fraction)):
            return RingExpression({k: c * other for k, c in self.terms.items()})
        other = _as_expr(other)
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                k = _mono_mul(ma, mb)
                out[k] = out.get(k, 0) + ca * cb
        return RingExpression(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> RingExpression:
        if k < 0:
            raise ValueError("negative power")
        out = RingExpression.const(1)
        for _ in range(k):
            out = out * self
        return out

    def degrees(self) -> set[int]:
        return {_mono_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def variables(self) -> set[HKey]:
        return {h for mono in self.terms for h, _ in mono[2]}

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: _mono_sort(kv[0]))

    def to_json(self) -> list[dict]:
        out = []
        for (a, b, ts), c in self.sorted_terms():
            out.append(
                {
                    "coeff": f"{c.numerator}/{c.denominator}",
                    "H": a,
                    "psi": b,
                    "T": {",".join(str(x) for x in h): e for h, e in ts},
                }
            )
        return out

    @classmethod
    def from_json(cls, items: list[dict]) -> RingExpression:
        terms = {}
        for it in items:
            ts = []
            for key, e in it.get("T", {}).items():
                labels = [Label.parse(s) for s in key.split(",")] if key else []
                ts.append((_hkey(labels), int(e)))
            mono = (int(it["H"]), int(it["psi"]), tuple(sorted(ts, key=_tsort)))
            terms[mono] = terms.get(mono, 0) + Fraction(it["coeff"])
        return cls(terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for mono, c in self.sorted_terms():
            body = _mono_str(mono)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if body == "1":
                text = str(mag)
            elif mag == 1:
                text = body
            else:
                text = f"{mag}*{body}"
            pieces.append((sign, text))
        out = ("-" if pieces[0][0] == "-" else "") + pieces[0][1]
        for sign, text in pieces[1:]:
            out += f" {sign} {text}"
        return out

    __repr__ = __str__


def _mono_str(mono: Monomial) -> str:
    a, b, ts = mono
    parts = []
    if a:
        parts.append("H" if a == 1 else f"H^{a}")
    if b:
        parts.append("psi" if b == 1 else f"psi^{b}")
    for h, e in ts:
        parts.append(f"T{_hkey_str(h)}" + ("" if e == 1 else f"^{e}"))
    return "*".join(parts) if parts else "1"


def _as_expr(x) -> RingExpression:
    if isinstance(x, RingExpression):
        return x
    if isinstance(x, (int, Fraction)):
        return RingExpression.const(x)
    raise TypeError(f"cannot use {type(x).__name__} in a ring expression")


H = RingExpression({(1, 0, ()): 1})
PSI = RingExpression({(0, 1, ()): 1})


def T(h: Iterable[Label] | TwoPartition) -> RingExpression:
    if isinstance(h, TwoPartition):
        h = h.h
    key = _hkey(h)
    if not key:
        # T of the empty set is 1 by convention
        return RingExpression.const(1)
    return RingExpression({(0, 0, ((key, 1),)): 1})


# ---------------------------------------------------------------------------
# additive basis


@dataclass(frozen=True)
class BasisClass:
    tree: RootedMTree
    b: BStructure
    k: int

    @property
    def h_power(self) -> int:
        return self.k - self.b.total

    @property
    def psi_power(self) -> int:
        return self.b[()]

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "tree": self.tree.to_json(),
            "b": [{"vertex": list(p), "b": v} for p, v in self.b.values],
            "H": self.h_power,
            "psi": self.psi_power,
        }


def enumerate_basis(n: int, d: int, m: int, k: int) -> list[BasisClass]:
    """Basis of ``A^k``: decorated trees with total weight at most ``k`` and the
    remaining hyperplane exponent at most ``n``."""
    top = dimension(n, d, m)
    if not 0 <= k <= top:
        raise ValueError(f"k must lie in 0..{top}, got {k}")
    out = []
    for tree in enumerate_stable_trees(m, d):
        for b in enumerate_b_structures(tree, n):
            if b.total <= k and k - b.total <= n:
                out.append(BasisClass(tree, b, k))
    return out


def _vertex_h(tree: RootedMTree, blocks: dict, path: tuple[int, ...]) -> HKey:
    labels: list[Label] = []
    for sub, node in tree.vertex(path).vertices(path):
        labels.extend(M(i) for i in node.leaves if i != 1)
        labels.extend(D(j) for j in blocks[sub])
    return _hkey(labels)


def _boundary_monomial(c: BasisClass) -> tuple[tuple[HKey, int], ...]:
    blocks = d_label_blocks(c.tree)
    ts = []
    for path, b in c.b.values:
        if path and b:
            ts.append((_vertex_h(c.tree, blocks, path), b))
    return tuple(sorted(ts, key=_tsort))


_SUPERSCRIPT = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _pow_text(base: str, e: int) -> str:
    return base if e == 1 else base + str(e).translate(_SUPERSCRIPT)


def class_expression(c: BasisClass, expand_sym: bool = False) -> str | RingExpression:
    """Text form ``H^a psi^b sym_d(prod T_v^b(v))``, or its symmetrized expansion."""
    d = c.tree.total_degree
    ts = _boundary_monomial(c)
    if expand_sym:
        if d > MAX_EXPAND_DEGREE:
            raise TractabilityError(f"sym_d expansion refused for d={d} > {MAX_EXPAND_DEGREE}")
        return (H ** c.h_power) * (PSI ** c.psi_power) * _symmetrize(ts, d)
    parts = []
    if c.h_power:
        parts.append(_pow_text("H", c.h_power))
    if c.psi_power:
        parts.append(_pow_text("ψ", c.psi_power))
    if ts:
        inner = " ".join(_pow_text(f"T{_hkey_str(h)}", e) for h, e in ts)
        parts.append(f"sym_{d}({inner})")
    return " ".join(parts) if parts else "1"


def _symmetrize(ts: tuple[tuple[HKey, int], ...], d: int) -> RingExpression:
    """Average of the monomial over all permutations of the D-labels.

    Averaging over the orbit with weight 1/|orbit| equals the 1/d! sum.
    """
    orbit = set()
    for perm in permutations(range(1, d + 1)):
        moved = []
        for h, e in ts:
            image = [D(perm[x.index - 1]) if x.kind == "D" else x for x in h]
            moved.append((_hkey(image), e))
        orbit.add(tuple(sorted(moved, key=_tsort)))
    weight = Fraction(1, len(orbit))
    return RingExpression({(0, 0, mono): weight for mono in orbit})


# ---------------------------------------------------------------------------
# relations


@dataclass(frozen=True)
class Relation:
    """One generator of the relation ideal, tagged with its family and indices."""

    family: str
    index: tuple
    expr: RingExpression

    def to_json(self) -> dict:
        return {"family": self.family, "index": [_index_json(x) for x in self.index], "terms": self.expr.to_json()}


def _index_json(x):
    if isinstance(x, tuple):
        return [str(y) for y in x]
    return str(x)


def _dcount(h: Iterable[Label]) -> int:
    return sum(1 for x in h if x.kind == "D")


def _geometric(a: RingExpression, b: RingExpression, n: int) -> RingExpression:
    """``sum_{j=0..n} a^j b^(n-j)``, the cofactor of ``a - b`` in ``a^(n+1) - b^(n+1)``."""
    a_pows = [RingExpression.const(1)]
    b_pows = [RingExpression.const(1)]
    for _ in range(n):
        a_pows.append(a_pows[-1] * a)
        b_pows.append(b_pows[-1] * b)
    out = RingExpression()
    for j in range(n + 1):
        out = out + a_pows[j] * b_pows[n - j]
    return out


def relation5_pieces(h: frozenset, hp: frozenset, gens: list[frozenset], n: int, d: int, t: RingExpression):
    """The pieces of ``P(t)`` for the pair ``(h, h')``.

    Returns ``(A, B, S, P)`` where ``A`` and ``B`` are the two bases raised to
    ``n+1``, ``S + t`` is the denominator and ``P = |h'_D \\ h_D| * sum A^j B^(n-j)``
    is the division-free quotient ``(A^(n+1) - B^(n+1)) / (S + t)``.
    """
    every_d = {D(j) for j in range(1, d + 1)}
    hD = {x for x in h if x.kind == "D"}
    hpD = {x for x in hp if x.kind == "D"}
    above = [g for g in gens if hp < g]
    c_h = len(every_d - hD)
    c_both = len(every_d - hD - hpD)
    a = len(hpD - hD)
    S = PSI
    A = H + PSI * c_h + t * a
    B = H + PSI * c_both
    for g in above:
        gD = {x for x in g if x.kind == "D"}
        S = S + T(g)
        A = A + T(g) * len(gD - hD)
        B = B + T(g) * len(gD - hD - hpD)
    P = _geometric(A, B, n) * a if a else RingExpression()
    return A, B, S, P


def emit_relations(n: int, d: int, m: int) -> list[Relation]:
    """Generators of the relation ideal among ``H``, ``psi`` and the ``T_h``.

    Instances that expand to the zero polynomial are left out.
    """
    if n < 1 or d < 1 or m < 1:
        raise ValueError("need n, d, m >= 1")
    if d + m > MAX_RELATION_SIZE:
        raise TractabilityError(f"relations refused for d+m={d + m} > {MAX_RELATION_SIZE}")
    gens = [p.h for p in stable_partitions(m, d)]
    marks = [M(i) for i in range(2, m + 1)]
    every_d = {D(j) for j in range(1, d + 1)}
    out: list[Relation] = [Relation("1", (), H ** (n + 1))]

    for h, hp in combinations(gens, 2):
        if not (not (h & hp) or h <= hp or hp <= h):
            out.append(Relation("2", (_hkey(h), _hkey(hp)), T(h) * T(hp)))

    def sum_over_supersets(base: frozenset) -> RingExpression:
        acc = RingExpression()
        for g in gens:
            if base <= g:
                acc = acc + T(g)
        return acc

    for h, hp in combinations(gens, 2):
        expr = T(h) * T(hp) * (PSI + sum_over_supersets(h | hp))
        out.append(Relation("3a", (_hkey(h), _hkey(hp)), expr))
    if m >= 2:
        for h in gens:
            for mark in marks:
                if mark in h:
                    continue
                expr = T(h) * (PSI + sum_over_supersets(h | {mark}))
                out.append(Relation("3b", (_hkey(h), str(mark)), expr))
    if m >= 3:
        for i, j in combinations(marks, 2):
            out.append(Relation("3c", (str(i), str(j)), PSI + sum_over_supersets(frozenset({i, j}))))

    if m > 1:
        mprime = set(marks)
        for mark in marks:
            base = H + PSI * d
            for g in gens:
                if mark in g:
                    base = base + T(g) * len(g & mprime)
            out.append(Relation("4", (str(mark),), base ** (n + 1)))

    for h in gens:
        c = len(every_d - {x for x in h if x.kind == "D"})
        # psi^{-1}[(H + c psi)^{n+1} - H^{n+1}], the H^{n+1} part lying in the ideal
        inner = _geometric(H + PSI * c, H, n) * c
        for hp in gens:
            if hp == h:
                continue
            _, _, _, p_at_t = relation5_pieces(h, hp, gens, n, d, T(hp))
            _, _, _, p_at_0 = relation5_pieces(h, hp, gens, n, d, RingExpression())
            inner = inner + p_at_t - p_at_0
        out.append(Relation("5", (_hkey(h),), T(h) * inner))
    return [r for r in out if not r.expr.is_zero()]
