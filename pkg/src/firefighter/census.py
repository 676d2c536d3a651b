"""Enumeration of rooted trees and the integrality-gap census."""

from __future__ import annotations

import logging
from collections.abc import Callable, Iterator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .lp import GapReport, gap
from .tree import RootedTree, build_tree, from_level_sequence

log = logging.getLogger(__name__)

MAX_ENUM_N = 16
DEFAULT_CENSUS_N = 14


def level_sequences(n: int) -> Iterator[tuple[int, ...]]:
    """Canonical level sequences of all rooted trees on ``n`` vertices.

    Each isomorphism class appears once, as its lexicographically largest
    preorder level sequence, in decreasing lexicographic order.  The
    successor step copies the subtree pattern after the last vertex deeper
    than level 1, which is constant amortized time per tree.
    """
    if not 1 <= n <= MAX_ENUM_N:
        raise ValueError(f"n must be in 1..{MAX_ENUM_N}, got {n}")
    seq = list(range(n))
    while True:
        yield tuple(seq)
        p = n - 1
        while p > 0 and seq[p] <= 1:
            p -= 1
        if p == 0:
            return
        q = p - 1
        while seq[q] != seq[p] - 1:
            q -= 1
        shift = p - q
        for i in range(p, n):
            seq[i] = seq[i - shift]


def rooted_trees(n: int) -> Iterator[RootedTree]:
    for seq in level_sequences(n):
        yield from_level_sequence(seq)


def count_rooted_trees(n: int) -> int:
    return sum(1 for _ in level_sequences(n))


@dataclass
class CensusResult:
    n: int
    total: int
    gap_trees: list[GapReport]
    with_c6: bool = True
    leaf_extension_map: dict[str, list[str]] = field(default_factory=dict)

    def summary(self) -> str:
        return f"n={self.n} total={self.total} gaps={len(self.gap_trees)}"


def _gap_if_any(args: tuple[tuple[int, ...], bool, str]) -> GapReport | None:
    seq, with_c6, cut_levels = args
    report = gap(from_level_sequence(seq), with_c6=with_c6, cut_levels=cut_levels)
    return report if report.gap > 0 else None


def gap_census(
    n: int,
    with_c6: bool = True,
    cut_levels: str = "next",
    jobs: int = 1,
    guard: int = DEFAULT_CENSUS_N,
    on_gap: Callable[[GapReport], None] | None = None,
) -> CensusResult:
    """Run the LP/IP gap check on every rooted tree with ``n`` vertices."""
    if n > guard:
        raise ValueError(f"n={n} exceeds the census guard {guard}; raise it explicitly")
    work = ((seq, with_c6, cut_levels) for seq in level_sequences(n))
    found: list[GapReport] = []
    total = 0
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = pool.map(_gap_if_any, work, chunksize=256)
            for rep in results:
                total += 1
                if rep is not None:
                    found.append(rep)
    else:
        for item in work:
            total += 1
            rep = _gap_if_any(item)
            if rep is not None:
                found.append(rep)
    found.sort(key=lambda r: r.tree.level_sequence(), reverse=True)
    if on_gap is not None:
        for rep in found:
            on_gap(rep)
    log.info("census n=%d: %d trees, %d with a gap", n, total, len(found))
    return CensusResult(n, total, found, with_c6)


def delete_leaf(tree: RootedTree, leaf: int) -> RootedTree:
    if tree.children[leaf] or leaf == tree.root:
        raise ValueError(f"vertex {leaf} is not a non-root leaf")
    keep = [v for v in range(tree.n) if v != leaf]
    new_id = {v: i for i, v in enumerate(keep)}
    parents = [None if tree.parent[v] is None else new_id[tree.parent[v]] for v in keep]
    return build_tree(parents)


@dataclass(frozen=True)
class LeafExtensionVerdict:
    tree: str
    parents: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return bool(self.parents)


def leaf_extension_check(
    big: CensusResult, small: CensusResult
) -> tuple[list[LeafExtensionVerdict], dict[str, int]]:
    """Match each gap tree of ``big`` to the gap trees of ``small`` it extends.

    Returns per-tree verdicts and, for each small gap tree (by canonical
    form), how many big gap trees are one-leaf extensions of it.
    """
    small_forms = {r.tree.canonical() for r in small.gap_trees}
    verdicts = []
    multiplicity = {form: 0 for form in sorted(small_forms)}
    for rep in big.gap_trees:
        t = rep.tree
        parents = set()
        for leaf in t.leaves:
            form = delete_leaf(t, leaf).canonical()
            if form in small_forms:
                parents.add(form)
        for form in parents:
            multiplicity[form] += 1
        verdicts.append(LeafExtensionVerdict(t.canonical(), tuple(sorted(parents))))
    big.leaf_extension_map = {v.tree: list(v.parents) for v in verdicts}
    return verdicts, multiplicity
