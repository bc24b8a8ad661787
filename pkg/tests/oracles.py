"""Brute-force reference implementations used only by the tests.

None of these share code paths with the library beyond the tree dataclasses
used to canonicalize results.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product

from stablemaps.qpoly import QPoly
from stablemaps.trees import RootedMTree


def poly_from_exponents(exps) -> QPoly:
    counts = Counter(exps)
    if not counts:
        return QPoly()
    top = max(counts)
    return QPoly([counts.get(i, 0) for i in range(top + 1)])


def objects_of(f: QPoly) -> list[int]:
    """Expand a non-negative integer polynomial into a list of object weights."""
    out = []
    for i, c in enumerate(f.coeffs):
        out.extend([i] * int(c))
    return out


def multisets_poly(f: QPoly, i: int) -> QPoly:
    """Generating polynomial of size-i multisets, by explicit listing."""
    objs = list(range(len(objects_of(f))))
    weight = objects_of(f)
    return poly_from_exponents(sum(weight[j] for j in combo) for combo in combinations_with_replacement(objs, i))


def q_rational(num: QPoly, den: QPoly) -> QPoly:
    """Exact quotient of two polynomials, asserting there is no remainder."""
    quot, rem = divmod(num, den)
    assert rem.is_zero(), f"{den} does not divide {num}"
    return quot


def qm(k: int) -> QPoly:
    """q^k - 1."""
    return QPoly.monomial(k) - QPoly([1])


# ---------------------------------------------------------------------------
# trees from parent arrays


def _parent_arrays(k: int):
    """Every rooted tree on vertices 0..k-1 with root 0, as parent lists.

    Vertex i > 0 picks a parent among 0..i-1; every rooted shape occurs.
    """
    return product(*[range(i) for i in range(1, k)])


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _build(parents, degrees, leaves_at) -> RootedMTree:
    k = len(degrees)
    kids = {v: [] for v in range(k)}
    for child, par in enumerate(parents, start=1):
        kids[par].append(child)

    def make(v):
        return RootedMTree(degrees[v], tuple(sorted(leaves_at[v])), tuple(make(c) for c in kids[v]))

    return make(0).canonical()


def brute_stable_trees(m: int, d: int) -> set[RootedMTree]:
    """Stable (M,d)-trees from raw parent arrays, labelings and degree maps."""
    max_vertices = max(1, m - 2 + 2 * d)
    found = set()
    for k in range(1, max_vertices + 1):
        for parents in _parent_arrays(k):
            for degrees in _compositions(d, k):
                for spots in product(range(k), repeat=m - 1):
                    leaves_at = {v: [] for v in range(k)}
                    leaves_at[0].append(1)
                    for label, v in enumerate(spots, start=2):
                        leaves_at[v].append(label)
                    tree = _build(parents, degrees, leaves_at)
                    if tree.is_stable():
                        found.add(tree)
    return found


def brute_leafless_trees(d: int) -> set[RootedMTree]:
    """Rooted leafless trees of total degree d whose non-root vertices are stable."""
    found = set()
    for k in range(1, 2 * d + 1):
        for parents in _parent_arrays(k):
            for degrees in _compositions(d, k):
                tree = _build(parents, degrees, {v: [] for v in range(k)})
                if all(c.is_stable(False) for c in tree.children):
                    found.add(tree)
    return found


# ---------------------------------------------------------------------------
# b-structure orbits


def _decorate(tree: RootedMTree, bs: dict, path=()):
    kids = tuple(sorted(_decorate(c, bs, path + (i,)) for i, c in enumerate(tree.children)))
    return (tree.degree, tree.leaves, bs[path], kids)


def brute_b_orbits(tree: RootedMTree, n: int, root_flags_extra: int = 0) -> list:
    """Distinct decorated trees over all raw b-assignments.

    ``root_flags_extra`` lets callers count the root with a parent edge it
    doesn't have (unused by default).
    """
    paths = [p for p, _ in tree.vertices()]
    ranges = []
    for p in paths:
        node = tree.vertex(p)
        is_root = p == ()
        flags = len(node.leaves) + len(node.children) + (0 if is_root else 1) + (root_flags_extra if is_root else 0)
        bound = (n + 1) * node.degree + flags - 2
        ranges.append(range(0, bound) if is_root else range(1, bound))
    seen = set()
    for combo in product(*ranges):
        seen.add(_decorate(tree, dict(zip(paths, combo))))
    return sorted(seen)


def brute_contribution(tree: RootedMTree, n: int) -> QPoly:
    def total(dec):
        return dec[2] + sum(total(k) for k in dec[3])

    return poly_from_exponents(total(dec) for dec in brute_b_orbits(tree, n))


def brute_p00(d: int, n: int) -> QPoly:
    """Leafless rooted decorated trees of degree d, root taking b >= 0."""
    acc = QPoly()
    for tree in brute_leafless_trees(d):
        acc = acc + brute_contribution(tree, n)
    return acc


# ---------------------------------------------------------------------------
# set systems


def is_laminar(sets) -> bool:
    return all(not (a & b) or a <= b or b <= a for a, b in combinations(sets, 2))


def all_cliques(items, compatible):
    """Every subset of ``items`` whose members are pairwise compatible."""
    items = list(items)
    out = []

    def grow(start, chosen):
        out.append(tuple(chosen))
        for i in range(start, len(items)):
            if all(compatible(items[i], c) for c in chosen):
                chosen.append(items[i])
                grow(i + 1, chosen)
                chosen.pop()

    grow(0, [])
    return out


def frac(x) -> Fraction:
    return Fraction(x)


def brute_md_trees(m: int, d: int) -> set:
    """Stable (M,D)-trees: every stable (M,d)-shape with every D-labelling."""
    from itertools import permutations

    from stablemaps.trees import MDTree

    found = set()
    max_vertices = max(1, m - 2 + 2 * d)
    for k in range(1, max_vertices + 1):
        for parents in _parent_arrays(k):
            kids = {v: [] for v in range(k)}
            for child, par in enumerate(parents, start=1):
                kids[par].append(child)
            for degrees in _compositions(d, k):
                for spots in product(range(k), repeat=m - 1):
                    leaves_at = {v: [] for v in range(k)}
                    leaves_at[0].append(1)
                    for label, v in enumerate(spots, start=2):
                        leaves_at[v].append(label)
                    for perm in permutations(range(1, d + 1)):
                        blocks, pos = {}, 0
                        for v in range(k):
                            blocks[v] = tuple(sorted(perm[pos : pos + degrees[v]]))
                            pos += degrees[v]

                        def make(v):
                            return MDTree(tuple(sorted(leaves_at[v])), blocks[v], tuple(make(c) for c in kids[v]))

                        tree = make(0).canonical()
                        if tree.is_stable():
                            found.add(tree)
    return found


def brute_p_l_m(l: int, m: int, d: int, n: int) -> QPoly:
    """P^l_m(d) from scratch: decorated rooted trees with leaves 1..m, leaves
    1..l pinned to the root, non-root vertices stable. The root's own b-range
    kills unstable roots, so they need no filtering."""
    found = set()
    # a weighted degree-0 vertex has at least three flags, so |V| <= m + 2d - 1
    for k in range(1, max(1, m + 2 * d - 1) + 1):
        for parents in _parent_arrays(k):
            for degrees in _compositions(d, k):
                for spots in product(range(k), repeat=m - l):
                    leaves_at = {v: [] for v in range(k)}
                    leaves_at[0].extend(range(1, l + 1))
                    for label, v in enumerate(spots, start=l + 1):
                        leaves_at[v].append(label)
                    tree = _build(parents, degrees, leaves_at)
                    if all(c.is_stable(False) for c in tree.children):
                        found.add(tree)
    acc = QPoly()
    for tree in found:
        acc = acc + brute_contribution(tree, n)
    return acc


def brute_forests(i: int, d: int, n: int, each: bool) -> QPoly:
    """Multisets of i leafless decorated trees; every tree of degree d when
    ``each`` is set, otherwise total degree d."""
    objects = []
    degs = [d] if each else range(d + 1)
    for e in degs:
        for tree in brute_leafless_trees(e):
            for dec in brute_b_orbits(tree, n):
                objects.append((e, dec))

    def weight(dec):
        return dec[2] + sum(weight(k) for k in dec[3])

    exps = []
    for combo in combinations_with_replacement(range(len(objects)), i):
        if each or sum(objects[j][0] for j in combo) == d:
            exps.append(sum(weight(objects[j][1]) for j in combo))
    return poly_from_exponents(exps)
