"""Rooted stable (M,d)-trees with labeled leaves, their b-structures, and the
polynomial each tree contributes to the Poincaré polynomial.

A tree is stored as nested frozen dataclasses whose children are kept sorted,
so two leaf-labeled rooted trees are isomorphic exactly when they compare
equal. Vertices are addressed by their path from the root (a tuple of child
indices); the root is ``()``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, combinations_with_replacement, groupby, product
from typing import Iterator, NamedTuple, Sequence

from .qpoly import ONE, Q, QPoly, q_int, sym_power

__all__ = [
    "Label",
    "RootedMTree",
    "MDTree",
    "BStructure",
    "TreeEnumerationError",
    "enumerate_stable_trees",
    "contributing_trees",
    "enumerate_b_structures",
    "b_range",
    "tree_contribution",
    "closed_form_contribution",
    "has_automorphisms",
    "assign_D_labels",
    "d_label_blocks",
    "enumerate_md_trees",
]

Path = tuple[int, ...]


class TreeEnumerationError(ValueError):
    """Raised for (m, d) with no stable trees, or outside the supported range."""


class Label(NamedTuple):
    """A leaf label: ``Label("M", 2)`` is ``2_M``, ``Label("D", 1)`` is ``1_D``."""

    kind: str
    index: int

    def __str__(self) -> str:
        return f"{self.index}_{self.kind}"

    @classmethod
    def parse(cls, text: str) -> Label:
        idx, _, kind = text.partition("_")
        if kind not in ("M", "D"):
            raise ValueError(f"bad label {text!r}")
        return cls(kind, int(idx))


def M(i: int) -> Label:
    return Label("M", i)


def D(j: int) -> Label:
    return Label("D", j)


@dataclass(frozen=True, order=True)
class RootedMTree:
    """A vertex of degree ``degree`` carrying marked-point labels ``leaves``
    (integers ``i`` standing for ``i_M``) and the sorted tuple ``children``."""

    degree: int
    leaves: tuple[int, ...] = ()
    children: tuple[RootedMTree, ...] = ()
    _hash: int = field(default=0, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_hash", hash((self.degree, self.leaves, self.children)))

    def __hash__(self) -> int:
        return self._hash

    def canonical(self) -> RootedMTree:
        kids = tuple(sorted(c.canonical() for c in self.children))
        return RootedMTree(self.degree, tuple(sorted(self.leaves)), kids)

    def vertices(self, path: Path = ()) -> Iterator[tuple[Path, RootedMTree]]:
        """Pre-order walk yielding ``(path, vertex)``."""
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.vertices(path + (i,))

    def vertex(self, path: Path) -> RootedMTree:
        node = self
        for i in path:
            node = node.children[i]
        return node

    @property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    @property
    def total_degree(self) -> int:
        return self.degree + sum(c.total_degree for c in self.children)

    def all_leaves(self) -> tuple[int, ...]:
        out = list(self.leaves)
        for c in self.children:
            out.extend(c.all_leaves())
        return tuple(sorted(out))

    def flags(self, is_root: bool) -> int:
        """n(v): leaves plus incident edges."""
        return len(self.leaves) + len(self.children) + (0 if is_root else 1)

    def is_stable(self, is_root: bool = True) -> bool:
        if not (self.flags(is_root) > 2 or self.degree > 0):
            return False
        return all(c.is_stable(False) for c in self.children)

    def to_json(self) -> dict:
        return {
            "d": self.degree,
            "leaves": [str(M(i)) for i in self.leaves],
            "children": [c.to_json() for c in self.children],
        }

    @classmethod
    def from_json(cls, obj: dict) -> RootedMTree:
        leaves = tuple(Label.parse(s).index for s in obj.get("leaves", ()))
        kids = tuple(cls.from_json(c) for c in obj.get("children", ()))
        return cls(int(obj["d"]), leaves, kids).canonical()

    def __str__(self) -> str:
        inner = ",".join(f"{i}_M" for i in self.leaves)
        kids = "".join(f"[{c}]" for c in self.children)
        return f"({self.degree}{':' + inner if inner else ''}){kids}"


# ---------------------------------------------------------------------------
# enumeration


def _subsets_containing(items: tuple, first) -> Iterator[tuple]:
    rest = tuple(x for x in items if x != first)
    for k in range(len(rest) + 1):
        for combo in combinations(rest, k):
            yield (first,) + combo


def _all_subsets(items: tuple) -> Iterator[tuple]:
    for k in range(len(items) + 1):
        yield from combinations(items, k)


def _int_partitions(n: int, max_part: int | None = None) -> Iterator[tuple[int, ...]]:
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for p in range(min(n, max_part), 0, -1):
        for rest in _int_partitions(n - p, p):
            yield (p,) + rest


@lru_cache(maxsize=None)
def _subtrees(labels: tuple[int, ...], budget: int) -> tuple[RootedMTree, ...]:
    """Stable non-root subtrees using exactly ``labels`` and total degree ``budget``."""
    out = set()
    for here in _all_subsets(labels):
        below = tuple(x for x in labels if x not in here)
        for d0 in range(budget + 1):
            # a bare degree-0 vertex needs >= 2 children, which also keeps the
            # recursion from calling itself on the same arguments
            proper = not here and d0 == 0
            for kids in _forests(below, budget - d0, proper):
                node = RootedMTree(d0, here, kids)
                if node.flags(False) > 2 or d0 > 0:
                    out.add(node)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _leafless_forests(budget: int, proper: bool) -> tuple[tuple[RootedMTree, ...], ...]:
    out = []
    for parts in _int_partitions(budget):
        if proper and len(parts) < 2:
            continue
        choices = []
        for value, grp in groupby(parts):
            k = len(list(grp))
            choices.append(list(combinations_with_replacement(_subtrees((), value), k)))
        for pick in product(*choices):
            out.append(tuple(sorted(t for block in pick for t in block)))
    return tuple(out)


@lru_cache(maxsize=None)
def _forests(labels: tuple[int, ...], budget: int, proper: bool) -> tuple[tuple[RootedMTree, ...], ...]:
    """Multisets of non-root subtrees partitioning ``labels`` and ``budget``.

    With ``proper`` set, forests of a single child are excluded.
    """
    if not labels:
        return _leafless_forests(budget, proper)
    first = labels[0]
    out = []
    for block in _subsets_containing(labels, first):
        rest = tuple(x for x in labels if x not in block)
        for e in range(budget + 1):
            whole = not rest and e == budget
            if proper and whole:
                continue
            for t in _subtrees(block, e):
                for f in _forests(rest, budget - e, False):
                    out.append(tuple(sorted((t,) + f)))
    return tuple(out)


def enumerate_stable_trees(m: int, d: int) -> list[RootedMTree]:
    """One representative per isomorphism class of rooted stable (M,d)-trees.

    The root is the vertex carrying ``1_M``. Output is sorted.
    """
    if m < 1 or d < 0:
        raise TreeEnumerationError(f"need m >= 1 and d >= 0, got m={m}, d={d}")
    if d == 0 and m < 3:
        raise TreeEnumerationError(f"no stable trees for m={m}, d=0")
    return list(_stable_trees(m, d))


@lru_cache(maxsize=64)
def _stable_trees(m: int, d: int) -> tuple[RootedMTree, ...]:
    labels = tuple(range(1, m + 1))
    found = set()
    for here in _subsets_containing(labels, 1):
        below = tuple(x for x in labels if x not in here)
        for d0 in range(d + 1):
            for kids in _forests(below, d - d0, False):
                node = RootedMTree(d0, here, kids)
                if node.flags(True) > 2 or d0 > 0:
                    found.add(node)
    return tuple(sorted(found))


def contributing_trees(m: int, d: int, n: int) -> list[RootedMTree]:
    """Stable trees admitting at least one b-structure in dimension ``n``."""
    return [t for t in enumerate_stable_trees(m, d) if not tree_contribution(t, n).is_zero()]


# ---------------------------------------------------------------------------
# b-structures


def b_range(node: RootedMTree, n: int, is_root: bool) -> range:
    bound = (n + 1) * node.degree + node.flags(is_root) - 2
    return range(0, bound) if is_root else range(1, bound)


@dataclass(frozen=True)
class BStructure:
    """Weights ``b(v)`` on the vertices of ``tree``, keyed by vertex path."""

    tree: RootedMTree
    n: int
    values: tuple[tuple[Path, int], ...]

    def __getitem__(self, path: Path) -> int:
        for p, b in self.values:
            if p == path:
                return b
        raise KeyError(path)

    def as_dict(self) -> dict[Path, int]:
        return dict(self.values)

    @property
    def total(self) -> int:
        return sum(b for _, b in self.values)

    def is_valid(self) -> bool:
        got = self.as_dict()
        for path, node in self.tree.vertices():
            if got.get(path) not in b_range(node, self.n, path == ()):
                return False
        return len(got) == self.tree.size


# a decoration is (b, child decorations aligned with node.children)
_Decoration = tuple


def _decorations(node: RootedMTree, n: int, is_root: bool) -> list[_Decoration]:
    groups: list[list[_Decoration]] = []
    for _, grp in groupby(node.children):
        grp = list(grp)
        opts = _decorations(grp[0], n, False)
        groups.append(list(combinations_with_replacement(opts, len(grp))))
    out = []
    for b in b_range(node, n, is_root):
        for pick in product(*groups):
            out.append((b, tuple(dec for block in pick for dec in block)))
    return sorted(out)


def _flatten(dec: _Decoration, path: Path = ()) -> Iterator[tuple[Path, int]]:
    b, kids = dec
    yield path, b
    for i, k in enumerate(kids):
        yield from _flatten(k, path + (i,))


def enumerate_b_structures(tree: RootedMTree, n: int) -> list[BStructure]:
    """One b-structure per orbit of the tree's automorphism group.

    Automorphisms of a leaf-labeled rooted tree only permute identical sibling
    subtrees, so an orbit is a choice of a multiset of decorations for every
    group of identical siblings.
    """
    return [BStructure(tree, n, tuple(_flatten(dec))) for dec in _decorations(tree, n, True)]


@lru_cache(maxsize=1 << 16)
def _weight(node: RootedMTree, n: int, is_root: bool) -> QPoly:
    r = b_range(node, n, is_root)
    if not r:
        return QPoly()
    w = q_int(len(r)).shift(r.start)
    for child, grp in groupby(node.children):
        w = w * sym_power(_weight(child, n, False), len(list(grp)))
    return w


def tree_contribution(tree: RootedMTree, n: int) -> QPoly:
    """Sum of ``q**(sum of b)`` over b-structure orbits on ``tree``."""
    return _weight(tree, n, True)


def has_automorphisms(tree: RootedMTree) -> bool:
    for _, node in tree.vertices():
        kids = node.children
        if any(a == b for a, b in zip(kids, kids[1:])):
            return True
    return False


def closed_form_contribution(tree: RootedMTree, n: int) -> QPoly:
    """``q^{|V|-1} prod_v [ (n+1)d(v) + n'(v) - 2 ]_q``, valid for automorphism-free trees."""
    out = ONE
    for path, node in tree.vertices():
        subordinate = len(node.leaves) + len(node.children)
        out = out * q_int((n + 1) * node.degree + subordinate - 2)
    return out * Q ** (tree.size - 1)


# ---------------------------------------------------------------------------
# (M,D)-trees


@dataclass(frozen=True, order=True)
class MDTree:
    """An (M,D)-tree vertex: marked labels, D-labels (one per unit of degree)
    and sorted children. Every subtree carries a label, so these trees have no
    non-trivial automorphisms."""

    mlabels: tuple[int, ...] = ()
    dlabels: tuple[int, ...] = ()
    children: tuple[MDTree, ...] = ()

    @property
    def degree(self) -> int:
        return len(self.dlabels)

    def canonical(self) -> MDTree:
        kids = tuple(sorted(c.canonical() for c in self.children))
        return MDTree(tuple(sorted(self.mlabels)), tuple(sorted(self.dlabels)), kids)

    def vertices(self, path: Path = ()) -> Iterator[tuple[Path, MDTree]]:
        yield path, self
        for i, c in enumerate(self.children):
            yield from c.vertices(path + (i,))

    def vertex(self, path: Path) -> MDTree:
        node = self
        for i in path:
            node = node.children[i]
        return node

    def edges(self) -> list[Path]:
        """Edges named by the path of their lower (child) endpoint."""
        return [p for p, _ in self.vertices() if p]

    def labels(self) -> frozenset[Label]:
        out = {M(i) for i in self.mlabels} | {D(j) for j in self.dlabels}
        for c in self.children:
            out |= c.labels()
        return frozenset(out)

    def flags(self, is_root: bool) -> int:
        return len(self.mlabels) + len(self.children) + (0 if is_root else 1)

    def is_stable(self, is_root: bool = True) -> bool:
        if not (self.flags(is_root) > 2 or self.degree > 0):
            return False
        return all(c.is_stable(False) for c in self.children)

    def forget(self) -> RootedMTree:
        """Drop the D-labels, keeping only the degree at each vertex."""
        kids = tuple(c.forget() for c in self.children)
        return RootedMTree(self.degree, self.mlabels, kids).canonical()

    def to_json(self) -> dict:
        return {
            "d": self.degree,
            "leaves": [str(M(i)) for i in self.mlabels] + [str(D(j)) for j in self.dlabels],
            "children": [c.to_json() for c in self.children],
        }

    def __str__(self) -> str:
        inner = ",".join([f"{i}_M" for i in self.mlabels] + [f"{j}_D" for j in self.dlabels])
        kids = "".join(f"[{c}]" for c in self.children)
        return f"({inner}){kids}"


def d_label_blocks(tree: RootedMTree) -> dict[Path, tuple[int, ...]]:
    """Consecutive blocks of D-labels handed out to vertices in pre-order."""
    blocks: dict[Path, tuple[int, ...]] = {}
    nxt = 1
    for path, node in tree.vertices():
        blocks[path] = tuple(range(nxt, nxt + node.degree))
        nxt += node.degree
    return blocks


def assign_D_labels(tree: RootedMTree) -> MDTree:
    """Canonical (M,D)-tree lying over ``tree``."""
    blocks = d_label_blocks(tree)

    def build(node: RootedMTree, path: Path) -> MDTree:
        kids = tuple(build(c, path + (i,)) for i, c in enumerate(node.children))
        return MDTree(node.leaves, blocks[path], kids)

    return build(tree, ()).canonical()


@lru_cache(maxsize=None)
def _md_subtrees(labels: tuple[Label, ...]) -> tuple[MDTree, ...]:
    out = set()
    for here in _all_subsets(labels):
        below = tuple(x for x in labels if x not in here)
        for kids in _md_forests(below, proper=not here):
            node = _md_node(here, kids)
            if node.flags(False) > 2 or node.degree > 0:
                out.add(node)
    return tuple(sorted(out))


@lru_cache(maxsize=None)
def _md_forests(labels: tuple[Label, ...], proper: bool) -> tuple[tuple[MDTree, ...], ...]:
    if not labels:
        return ((),)
    out = []
    for block in _subsets_containing(labels, labels[0]):
        rest = tuple(x for x in labels if x not in block)
        if proper and not rest:
            continue
        for t in _md_subtrees(block):
            for f in _md_forests(rest, False):
                out.append(tuple(sorted((t,) + f)))
    return tuple(out)


def _md_node(here: Sequence[Label], kids: tuple[MDTree, ...]) -> MDTree:
    ms = tuple(sorted(x.index for x in here if x.kind == "M"))
    ds = tuple(sorted(x.index for x in here if x.kind == "D"))
    return MDTree(ms, ds, kids)


def enumerate_md_trees(m: int, d: int) -> list[MDTree]:
    """All stable (M,D)-trees rooted at the vertex carrying ``1_M``."""
    if m < 1 or d < 0:
        raise TreeEnumerationError(f"need m >= 1 and d >= 0, got m={m}, d={d}")
    rest = tuple([M(i) for i in range(2, m + 1)] + [D(j) for j in range(1, d + 1)])
    found = set()
    for here in _all_subsets(rest):
        below = tuple(x for x in rest if x not in here)
        for kids in _md_forests(below, False):
            node = _md_node((M(1),) + here, kids)
            if node.flags(True) > 2 or node.degree > 0:
                found.add(node)
    return sorted(found)
