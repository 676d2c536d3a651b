"""Vaccination strategies on rooted trees.

One vaccine per time step; the vaccine at time ``i`` goes on a level-``i``
vertex.  Ties are broken by lowest vertex id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .tree import RootedTree, build_tree, simulate

DEFAULT_SIZE_CAP = 60


class SizeCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class StrategyResult:
    """Outcome of a strategy.

    ``seq[i-1]`` is the vertex vaccinated at time ``i`` (``None`` when the
    step is skipped).  ``per_step_weight`` holds the weight credited at each
    step: plain ``wt`` for greedy/optimal, the adjusted weight for unburn.
    """

    seq: tuple[int | None, ...]
    saved: int
    per_step_weight: tuple[int, ...]
    choices: tuple[int, ...] = field(default=())


def greedy(tree: RootedTree) -> StrategyResult:
    seq: list[int | None] = []
    weights: list[int] = []
    frontier = list(tree.children[0])
    while frontier:
        best = max(frontier, key=lambda v: (tree.wt[v], -v))
        seq.append(best)
        weights.append(tree.wt[best])
        frontier = [c for v in frontier if v != best for c in tree.children[v]]
    return StrategyResult(tuple(seq), sum(weights), tuple(weights), tuple(seq))


def unburn(tree: RootedTree) -> StrategyResult:
    """Unburning: choose from the deepest level upwards by adjusted weight.

    The adjusted weight of ``v`` is ``wt(v)`` minus the vertices of ``T_v``
    already protected by deeper choices.
    """
    protected_below = [0] * tree.n  # |U_v| for the current level's vertices
    chosen: dict[int, int] = {}
    adjusted: dict[int, int] = {}
    covered = [0] * tree.n  # protected vertices inside T_v, pushed upward level by level
    for lv in range(tree.depth, 0, -1):
        verts = tree.by_level[lv]
        for v in verts:
            protected_below[v] = sum(covered[c] for c in tree.children[v])
        best = max(verts, key=lambda v: (tree.wt[v] - protected_below[v], -v))
        chosen[lv] = best
        adjusted[lv] = tree.wt[best] - protected_below[best]
        for v in verts:
            covered[v] = tree.wt[v] if v == best else protected_below[v]

    choices = tuple(chosen[lv] for lv in range(1, tree.depth + 1))
    seq: list[int | None] = []
    kept: list[int] = []
    for a in choices:
        if any(tree.is_ancestor(b, a) for b in kept):
            seq.append(None)
        else:
            seq.append(a)
            kept.append(a)
    weights = tuple(adjusted[lv] for lv in range(1, tree.depth + 1))
    saved, _ = simulate(tree, seq)
    return StrategyResult(tuple(seq), saved, weights, choices)


def optimal_bruteforce(tree: RootedTree, cap: int = DEFAULT_SIZE_CAP) -> StrategyResult:
    """Exact optimum over normal-form sequences.

    Depth-first search keyed by the set of still-burning vertices at the
    current level, with a per-level max-weight bound and sibling-isomorphism
    pruning.
    """
    if tree.n > cap:
        raise SizeCapExceeded(f"tree has {tree.n} vertices, cap is {cap}")
    if tree.n == 1:
        return StrategyResult((), 0, ())

    shape = _subtree_shapes(tree)
    memo: dict[frozenset[int], tuple[int, int | None]] = {}

    def bound(frontier: list[int]) -> int:
        total = 0
        while frontier:
            total += max(tree.wt[v] for v in frontier)
            frontier = [c for v in frontier for c in tree.children[v]]
        return total

    def best(frontier: frozenset[int]) -> tuple[int, int | None]:
        # frontier: unprotected vertices at the current level
        if not frontier:
            return 0, None
        hit = memo.get(frontier)
        if hit is not None:
            return hit
        result: tuple[int, int | None] = (-1, None)
        seen_shapes = set()
        for v in sorted(frontier, key=lambda v: (-tree.wt[v], v)):
            key = (tree.parent[v], shape[v])
            if key in seen_shapes:
                continue
            seen_shapes.add(key)
            rest = [c for u in frontier if u != v for c in tree.children[u]]
            if tree.wt[v] + bound(rest) <= result[0]:
                continue
            val = tree.wt[v] + best(frozenset(rest))[0]
            if val > result[0]:
                result = (val, v)
        memo[frontier] = result
        return result

    seq: list[int | None] = []
    weights: list[int] = []
    frontier = frozenset(tree.children[0])
    total, _ = best(frontier)
    while frontier:
        _, v = best(frontier)
        seq.append(v)
        weights.append(tree.wt[v])
        frontier = frozenset(c for u in frontier if u != v for c in tree.children[u])
    assert sum(weights) == total
    return StrategyResult(tuple(seq), total, tuple(weights), tuple(seq))


def _subtree_shapes(tree: RootedTree) -> list[int]:
    """Integer id of each subtree's isomorphism class."""
    ids: dict[tuple[int, ...], int] = {}
    shape = [0] * tree.n
    for lv in range(tree.depth, -1, -1):
        for v in tree.by_level[lv]:
            key = tuple(sorted(shape[c] for c in tree.children[v]))
            shape[v] = ids.setdefault(key, len(ids))
    return shape


@dataclass(frozen=True)
class KpqParams:
    k: int
    p: int
    q: int

    def __post_init__(self) -> None:
        for name in ("k", "p", "q"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be a positive integer")

    @property
    def adversarial(self) -> bool:
        k, p, q = self.k, self.p, self.q
        return 2 * q > k * (k - 3) and p > k + q - 1

    @classmethod
    def canonical(cls, k: int) -> KpqParams:
        q = k * (k - 3) // 2 + 1
        return cls(k, k + q, q)


def make_kpq(params: KpqParams) -> RootedTree:
    """The (k,p,q) tree.

    The root has ``k+1`` identical left subtrees, each a path of ``k+1``
    vertices below the root ending in ``q`` pendant leaves.  The right
    subtree's top vertex has ``k`` branches, paths of 1..k vertices, each
    ending in ``p`` leaves.
    """
    k, p, q = params.k, params.p, params.q
    parent: list[int | None] = [None]

    def add(par: int) -> int:
        parent.append(par)
        return len(parent) - 1

    for _ in range(k + 1):
        v = 0
        for _ in range(k + 1):
            v = add(v)
        for _ in range(q):
            add(v)
    top = add(0)
    for length in range(k):
        v = add(top)
        for _ in range(length):
            v = add(v)
        for _ in range(p):
            add(v)
    return build_tree(parent)


def so_formula(params: KpqParams) -> int:
    _require_regime(params)
    k, p, q = params.k, params.p, params.q
    return k * (k + p + q + 1) + 2


def su_formula(params: KpqParams) -> int:
    _require_regime(params)
    k, p, q = params.k, params.p, params.q
    return k * (p + 2) + q + 2


def canonical_ratio(k: int) -> Fraction:
    """Unburn/optimal ratio on the canonical (k,p,q) tree, in closed form."""
    return Fraction(k**3 + 3 * k + 6, 2 * (k**3 - k**2 + 3 * k + 2))


def _require_regime(params: KpqParams) -> None:
    if not params.adversarial:
        raise ValueError(
            f"{params} outside the regime q > k(k-3)/2, p > k+q-1 where the closed form holds"
        )
