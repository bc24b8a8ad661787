"""Poincaré polynomials of the genus-zero stable map spaces M̄_{0,m}(P^n, d).

Two independent routes are provided:

* :func:`poincare_direct` sums the b-structure contribution of every stable
  rooted tree.
* :func:`poincare_recursive` uses the leaf-moving and root-splitting
  recursions for the auxiliary families ``P^l_m(d)``, never enumerating a tree.

``P^l_m(d)`` counts decorated rooted trees with ``m`` leaves, ``l`` of which are
pinned to the root; its root takes ``b >= 0`` below ``(n+1)d + n(r) - 2`` where
``n(r)`` counts leaves and child edges only.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from itertools import groupby
from math import comb

from .qpoly import GFTable, NonIntegralError, Q, QPoly, ZERO, q_int, sym_power
from .trees import _int_partitions, enumerate_stable_trees, tree_contribution

__all__ = [
    "PoincareQuery",
    "InvalidQuery",
    "poincare_direct",
    "poincare_recursive",
    "p_l_m",
    "s_p00",
    "forest_p00",
    "betti_table",
    "dimension",
    "export_memo",
    "import_memo",
    "clear_memo",
]


class InvalidQuery(ValueError):
    pass


@dataclass(frozen=True)
class PoincareQuery:
    n: int
    d: int
    m: int

    def __post_init__(self):
        for name in ("n", "d", "m"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 1:
                raise InvalidQuery(f"{name} must be a positive integer, got {v!r}")

    @property
    def dim(self) -> int:
        return dimension(self.n, self.d, self.m)


def dimension(n: int, d: int, m: int) -> int:
    return (n + 1) * (d + 1) + m - 4


def _checked(p: QPoly) -> QPoly:
    if not p.is_integral() or any(c < 0 for c in p.coeffs):
        raise NonIntegralError(f"counting polynomial with bad coefficients: {p!r}")
    return p


def poincare_direct(query: PoincareQuery) -> QPoly:
    total = ZERO
    for tree in enumerate_stable_trees(query.m, query.d):
        total = total + tree_contribution(tree, query.n)
    return _checked(q_int(query.n + 1) * total)


# ---------------------------------------------------------------------------
# recursion tables

_tables_lock = threading.Lock()
_P_TABLES: dict[tuple[int, int, int], GFTable] = {}
_S_TABLES: dict[tuple[int, int], GFTable] = {}


def _p_table(l: int, m: int, n: int) -> GFTable:
    key = (l, m, n)
    with _tables_lock:
        table = _P_TABLES.get(key)
        if table is None:
            table = GFTable(lambda d: _compute_p(l, m, d, n), name=f"P^{l}_{m}(n={n})")
            _P_TABLES[key] = table
    return table


def _s_table(i: int, n: int) -> GFTable:
    key = (i, n)
    with _tables_lock:
        table = _S_TABLES.get(key)
        if table is None:
            table = GFTable(lambda d: sym_power(p_l_m(0, 0, d, n), i), name=f"S^{i}P00(n={n})")
            _S_TABLES[key] = table
    return table


def p_l_m(l: int, m: int, d: int, n: int) -> QPoly:
    if not 0 <= l <= m:
        raise InvalidQuery(f"need 0 <= l <= m, got l={l}, m={m}")
    if d < 0 or n < 1:
        raise InvalidQuery(f"need d >= 0 and n >= 1, got d={d}, n={n}")
    return _p_table(l, m, n)[d]


def s_p00(i: int, d: int, n: int) -> QPoly:
    """Forests of ``i`` leafless rooted trees, each of degree ``d``."""
    if i < 1:
        raise InvalidQuery("i must be >= 1")
    if d < 0 or n < 1:
        raise InvalidQuery(f"need d >= 0 and n >= 1, got d={d}, n={n}")
    return _s_table(i, n)[d]


def forest_p00(i: int, d: int, n: int) -> QPoly:
    """Forests of ``i`` leafless rooted trees of total degree ``d``.

    Multisets of graded objects factor over the degree classes, so this is a
    sum over partitions of ``d`` into ``i`` parts of products of symmetric powers.
    """
    total = ZERO
    for parts in _int_partitions(d):
        if len(parts) != i:
            continue
        term = QPoly([1])
        for value, grp in groupby(parts):
            term = term * s_p00(len(list(grp)), value, n)
        total = total + term
    return total


def _compute_p(l: int, m: int, d: int, n: int) -> QPoly:
    if l == m:
        return _diagonal(m, d, n)
    # move leaf (l+1) off the root: cut the root edge leading towards it
    rest = m - l - 1
    acc = p_l_m(l + 1, m, d, n)
    conv = ZERO
    for j in range(rest + 1):
        c = comb(rest, j)
        for e in range(d + 1):
            upper = p_l_m(l + 1, m - j, d - e, n)
            if upper.is_zero():
                continue
            conv = conv + (p_l_m(0, j + 1, e, n) * upper).scale(c)
    return acc + Q * conv


def _diagonal(m: int, d: int, n: int) -> QPoly:
    """``P^m_m(d)``: every leaf on the root, so all children are leafless."""
    acc = ZERO
    if d >= 1:
        # lower the root degree by one, compensating with n+1 extra root leaves
        acc = p_l_m(n + 1 + m, n + 1 + m, d - 1, n)
    # root of degree 0: cut off its leafless children, whose degrees form a
    # partition of d; the root itself has m leaves and len(parts) edges
    for parts in _int_partitions(d):
        root = q_int(m + len(parts) - 2)
        if root.is_zero():
            continue
        term = root * Q ** len(parts)
        for value, grp in groupby(parts):
            term = term * s_p00(len(list(grp)), value, n)
        acc = acc + term
    return acc


def poincare_recursive(query: PoincareQuery) -> QPoly:
    return _checked(q_int(query.n + 1) * p_l_m(1, query.m, query.d, query.n))


def betti_table(query: PoincareQuery, method: str = "recursive") -> list[int]:
    if method == "direct":
        poly = poincare_direct(query)
    elif method == "recursive":
        poly = poincare_recursive(query)
    else:
        raise ValueError(f"unknown method {method!r}")
    if poly.degree != query.dim:
        raise ArithmeticError(
            f"Poincaré polynomial has degree {poly.degree}, expected dimension {query.dim}"
        )
    return poly.int_coeffs()


# ---------------------------------------------------------------------------
# persistence hooks for the CLI cache


def export_memo() -> dict[str, list[int]]:
    out: dict[str, list[int]] = {}
    with _tables_lock:
        p_items = list(_P_TABLES.items())
        s_items = list(_S_TABLES.items())
    for (l, m, n), table in p_items:
        for d, poly in table.items():
            out[f"P:{l},{m},{d},{n}"] = poly.int_coeffs()
    for (i, n), table in s_items:
        for d, poly in table.items():
            out[f"S:{i},{d},{n}"] = poly.int_coeffs()
    return dict(sorted(out.items()))


def import_memo(entries: dict[str, list[int]]) -> int:
    """Seed the tables; returns the number of entries loaded."""
    loaded = 0
    for key, coeffs in entries.items():
        kind, _, args = key.partition(":")
        nums = [int(x) for x in args.split(",")]
        poly = QPoly(coeffs)
        if kind == "P" and len(nums) == 4:
            l, m, d, n = nums
            _p_table(l, m, n).put(d, poly)
        elif kind == "S" and len(nums) == 3:
            i, d, n = nums
            _s_table(i, n).put(d, poly)
        else:
            raise ValueError(f"bad memo key {key!r}")
        loaded += 1
    return loaded


def clear_memo() -> None:
    with _tables_lock:
        _P_TABLES.clear()
        _S_TABLES.clear()
