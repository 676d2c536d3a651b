from itertools import product

from hypothesis import strategies as st

from firefighter.tree import RootedTree, build_tree


@st.composite
def random_trees(draw, min_n: int = 1, max_n: int = 12) -> RootedTree:
    n = draw(st.integers(min_n, max_n))
    parents = [None] + [draw(st.integers(0, v - 1)) for v in range(1, n)]
    return build_tree(parents)


def spread_saved(tree: RootedTree, seq) -> int:
    """Step-by-step fire spread, independent of the subtree bookkeeping."""
    burning = {0}
    protected: set[int] = set()
    for a in seq:
        if a is not None:
            protected.add(a)
        nxt = set()
        for v in burning:
            for c in tree.children[v]:
                if c not in protected and c not in burning:
                    nxt.add(c)
        burning |= nxt
        # vaccinated vertices shield their whole subtree
    frontier = set(burning)
    while frontier:
        frontier = {c for v in frontier for c in tree.children[v] if c not in protected} - burning
        burning |= frontier
    return tree.n - len(burning)


def brute_optimum(tree: RootedTree) -> int:
    """Max over every sequence picking one level-i vertex (or nothing) per step."""
    options = [list(tree.by_level[i]) + [None] for i in range(1, tree.depth + 1)]
    best = 0
    for seq in product(*options):
        if any(a is not None and b is not None and a != b and tree.is_ancestor(a, b) for a in seq for b in seq):
            continue
        best = max(best, spread_saved(tree, seq))
    return best
