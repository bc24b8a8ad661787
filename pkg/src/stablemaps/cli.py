"""Command-line interface.

    stablemaps betti --n 2 --d 2 --m 2 --method both
    stablemaps trees --m 2 --d 2 [--n 2 | --all] [--json]
    stablemaps basis --n 1 --d 1 --m 1 --k 1 [--expand-sym]
    stablemaps relations --n 1 --d 1 --m 2 [--json]

Exit codes: 0 success, 2 invalid parameters, 3 cross-method mismatch.

The recursion tables are cached as JSON at ``$STABLEMAPS_CACHE``, defaulting
to ``~/.cache/stablemaps/memo.json``. A cache written by a different format
version is ignored.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

from . import poincare
from .basis import TractabilityError, class_expression, emit_relations, enumerate_basis
from .poincare import InvalidQuery, PoincareQuery, poincare_direct, poincare_recursive
from .qpoly import format_qpoly
from .trees import TreeEnumerationError, enumerate_stable_trees, tree_contribution

log = logging.getLogger(__name__)

CACHE_VERSION = "stablemaps-memo/1"
CACHE_ENV = "STABLEMAPS_CACHE"
EXIT_INVALID = 2
EXIT_MISMATCH = 3


def default_cache_path() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "stablemaps" / "memo.json"


def load_cache(path: Path) -> int:
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        return 0
    except (OSError, ValueError) as exc:
        log.warning("ignoring unreadable cache %s: %s", path, exc)
        return 0
    if not isinstance(raw, dict) or raw.get("version") != CACHE_VERSION:
        log.warning("ignoring cache %s with unknown version", path)
        return 0
    try:
        return poincare.import_memo(raw.get("entries", {}))
    except (ValueError, RuntimeError) as exc:
        # a corrupt cache must never leak into results
        log.warning("discarding corrupt cache %s: %s", path, exc)
        poincare.clear_memo()
        return 0


def save_cache(path: Path) -> None:
    payload = {"version": CACHE_VERSION, "entries": poincare.export_memo()}
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".memo-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(payload, fh, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))


def cmd_betti(args) -> int:
    query = PoincareQuery(args.n, args.d, args.m)
    results = {}
    if args.method in ("direct", "both"):
        results["direct"] = poincare_direct(query)
    if args.method in ("recursive", "both"):
        results["recursive"] = poincare_recursive(query)
    polys = list(results.values())
    if any(p != polys[0] for p in polys[1:]):
        for name, p in results.items():
            print(f"{name}: {format_qpoly(p)}", file=sys.stderr)
        print("error: direct and recursive methods disagree", file=sys.stderr)
        return EXIT_MISMATCH
    poly = polys[0]
    if poly.degree != query.dim:
        print(f"error: degree {poly.degree} differs from dimension {query.dim}", file=sys.stderr)
        return EXIT_MISMATCH
    table = poly.int_coeffs()
    if args.json:
        _emit({"n": args.n, "d": args.d, "m": args.m, "method": args.method, "dimension": query.dim, "betti": table})
    else:
        print(f"P(q) = {format_qpoly(poly)}")
        print(f"betti: {table}")
    return 0


def cmd_trees(args) -> int:
    trees = enumerate_stable_trees(args.m, args.d)
    if args.all:
        what = "stable trees"
    else:
        # for n >= 2 whether a tree carries a b-structure does not depend on n
        n = 2 if args.n is None else args.n
        if n < 1:
            raise InvalidQuery("n must be >= 1")
        trees = [t for t in trees if not tree_contribution(t, n).is_zero()]
        what = "trees carrying b-structures" + ("" if args.n is None else f" for n={n}")
    if args.json:
        _emit([t.to_json() for t in trees])
    else:
        print(f"# {len(trees)} {what} (m={args.m}, d={args.d})")
        for t in trees:
            print(t)
    return 0


def cmd_basis(args) -> int:
    PoincareQuery(args.n, args.d, args.m)
    classes = enumerate_basis(args.n, args.d, args.m, args.k)
    rows = []
    for c in classes:
        row = c.to_json()
        row["class"] = class_expression(c)
        if args.expand_sym:
            row["expanded"] = class_expression(c, expand_sym=True).to_json()
        rows.append(row)
    if args.json:
        _emit(rows)
    else:
        print(f"# {len(classes)} basis classes of A^{args.k} (n={args.n}, d={args.d}, m={args.m})")
        for c in classes:
            line = f"{c.tree}  {class_expression(c)}"
            if args.expand_sym:
                line += f"  =  {class_expression(c, expand_sym=True)}"
            print(line)
    return 0


def cmd_relations(args) -> int:
    PoincareQuery(args.n, args.d, args.m)
    rels = emit_relations(args.n, args.d, args.m)
    if args.json:
        _emit([r.to_json() for r in rels])
    else:
        print(f"# {len(rels)} relations (n={args.n}, d={args.d}, m={args.m})")
        for r in rels:
            idx = " ".join(
                "{" + ",".join(str(y) for y in x) + "}" if isinstance(x, tuple) else str(x) for x in r.index
            )
            head = f"({r.family}) {idx}" if idx else f"({r.family})"
            print(f"{head}: {r.expr}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stablemaps", description=__doc__.splitlines()[0])
    parser.add_argument("--cache", type=Path, default=None, help=f"cache file (default ${CACHE_ENV} or ~/.cache)")
    parser.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", help="Poincaré polynomial and Betti numbers")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--method", choices=("direct", "recursive", "both"), default="recursive")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("trees", help="stable rooted (M,d)-trees")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--n", type=int, default=None, help="keep trees carrying a b-structure in P^n (default: any n >= 2)")
    p.add_argument("--all", action="store_true", help="list every stable tree, including those with no b-structure")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("basis", help="additive basis of A^k")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--expand-sym", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("relations", help="relation ideal generators")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_relations)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    cache = None
    if not args.no_cache and args.command == "betti":
        cache = args.cache or default_cache_path()
        loaded = load_cache(cache)
        log.debug("loaded %d cache entries from %s", loaded, cache)
    try:
        code = args.func(args)
    except (InvalidQuery, TreeEnumerationError, TractabilityError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if cache is not None and code == 0:
        try:
            save_cache(cache)
        except OSError as exc:
            log.warning("could not write cache %s: %s", cache, exc)
    return code


if __name__ == "__main__":
    sys.exit(main())
