"""Stable 2-partitions of M ⊔ D, compatibility, good families, and the
correspondence between good families and stable (M,D)-trees.

A partition is stored by its side ``h`` that avoids ``1_M``; ``h`` is a subset
of ``D' = (M minus 1_M) ⊔ D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .trees import D, Label, M, MDTree, Path

__all__ = [
    "TwoPartition",
    "PartitionError",
    "ground_set",
    "stable_partitions",
    "are_compatible",
    "is_laminar_pair",
    "is_good_family",
    "tree_to_good_family",
    "good_family_to_tree",
    "contract_edge",
    "label_key",
]


class PartitionError(ValueError):
    pass


def label_key(label: Label) -> tuple[int, int]:
    """Sort order for labels: marked points first, then D, each by index."""
    return (0 if label.kind == "M" else 1, label.index)


def ground_set(m: int, d: int) -> frozenset[Label]:
    """``D'``: every label except ``1_M``."""
    return frozenset([M(i) for i in range(2, m + 1)] + [D(j) for j in range(1, d + 1)])


@dataclass(frozen=True)
class TwoPartition:
    h: frozenset[Label]
    m: int
    d: int

    def __post_init__(self):
        object.__setattr__(self, "h", frozenset(self.h))
        dp = ground_set(self.m, self.d)
        if not self.h <= dp:
            raise PartitionError(f"{self.key()} is not a subset of D'")

    @classmethod
    def of(cls, labels: Iterable[Label | str], m: int, d: int) -> TwoPartition:
        return cls(frozenset(Label.parse(x) if isinstance(x, str) else x for x in labels), m, d)

    def sides(self) -> tuple[frozenset[Label], frozenset[Label]]:
        everything = ground_set(self.m, self.d) | {M(1)}
        return self.h, everything - self.h

    @property
    def h_D(self) -> frozenset[Label]:
        return frozenset(x for x in self.h if x.kind == "D")

    def is_stable(self) -> bool:
        return all(any(x.kind == "D" for x in side) or len(side) >= 2 for side in self.sides())

    def key(self) -> tuple[str, ...]:
        return tuple(str(x) for x in sorted(self.h, key=label_key))

    def to_json(self) -> list[str]:
        return list(self.key())

    def __str__(self) -> str:
        return "{" + ",".join(self.key()) + "}"

    def __lt__(self, other: TwoPartition) -> bool:
        return _h_sort_key(self.h) < _h_sort_key(other.h)


def _h_sort_key(h: frozenset[Label]) -> tuple:
    return (len(h), sorted(label_key(x) for x in h))


def stable_partitions(m: int, d: int) -> list[TwoPartition]:
    """Every stable 2-partition, i.e. every ``h`` with ``h != {}``, ``h != D'``
    and ``h`` not a single marked point."""
    dp = sorted(ground_set(m, d), key=label_key)
    out = []
    for k in range(1, len(dp) + 1):
        for combo in combinations(dp, k):
            p = TwoPartition(frozenset(combo), m, d)
            if p.is_stable():
                out.append(p)
    return sorted(out)


def are_compatible(s1: TwoPartition, s2: TwoPartition) -> bool:
    """Exactly three of the four pairwise side intersections are non-empty.

    The four intersections are disjoint, so the non-empty ones are automatically
    pairwise distinct.
    """
    nonempty = sum(1 for a in s1.sides() for b in s2.sides() if a & b)
    return nonempty == 3


def is_laminar_pair(h1: frozenset, h2: frozenset) -> bool:
    """Distinct and either nested or disjoint."""
    return h1 != h2 and (not (h1 & h2) or h1 <= h2 or h2 <= h1)


def is_good_family(parts: Iterable[TwoPartition]) -> bool:
    parts = list(parts)
    return all(are_compatible(a, b) for a, b in combinations(parts, 2))


def _subtree_labels(node: MDTree) -> frozenset[Label]:
    return node.labels() - {M(1)}


def tree_to_good_family(t: MDTree, m: int, d: int) -> frozenset[TwoPartition]:
    """One partition per edge: the labels hanging below that edge."""
    return frozenset(TwoPartition(_subtree_labels(t.vertex(p)), m, d) for p in t.edges())


def good_family_to_tree(family: Iterable[TwoPartition], m: int, d: int) -> MDTree:
    """Rebuild the (M,D)-tree from a good family.

    The ``h``-sides form a laminar family; each becomes a vertex whose parent is
    the smallest strictly larger ``h`` (or the root). A label sits at the
    smallest ``h`` containing it, or at the root.
    """
    family = list(family)
    hs = [p.h for p in family]
    if len(set(hs)) != len(hs):
        raise PartitionError("repeated partition in family")
    for p in family:
        if (p.m, p.d) != (m, d):
            raise PartitionError("partition built for a different (m, d)")
        if not p.is_stable():
            raise PartitionError(f"unstable partition {p}")
    if not is_good_family(family):
        raise PartitionError("family is not good")

    order = sorted(hs, key=len)
    parent: dict[frozenset, frozenset | None] = {}
    for i, h in enumerate(order):
        above = [g for g in order[i + 1 :] if h < g]
        parent[h] = min(above, key=len) if above else None

    every = ground_set(m, d) | {M(1)}
    home: dict[Label, frozenset | None] = {}
    for x in every:
        owners = [h for h in order if x in h]
        home[x] = owners[0] if owners else None

    def build(node: frozenset | None) -> MDTree:
        here = [x for x in every if home[x] == node]
        kids = tuple(build(h) for h in order if parent[h] == node)
        ms = tuple(sorted(x.index for x in here if x.kind == "M"))
        ds = tuple(sorted(x.index for x in here if x.kind == "D"))
        return MDTree(ms, ds, kids)

    tree = build(None).canonical()
    if not tree.is_stable():
        raise PartitionError("reconstructed tree is unstable")
    return tree


def contract_edge(t: MDTree, e: Path) -> MDTree:
    """Merge the vertex at path ``e`` into its parent."""
    if not e:
        raise PartitionError("the root is not an edge")

    def rebuild(node: MDTree, path: Path) -> MDTree:
        if len(path) == 1:
            gone = node.children[path[0]]
            kids = node.children[: path[0]] + node.children[path[0] + 1 :] + gone.children
            return MDTree(node.mlabels + gone.mlabels, node.dlabels + gone.dlabels, kids)
        i = path[0]
        kids = list(node.children)
        kids[i] = rebuild(kids[i], path[1:])
        return MDTree(node.mlabels, node.dlabels, tuple(kids))

    return rebuild(t, e).canonical()
