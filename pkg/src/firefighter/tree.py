"""Rooted trees and forward simulation of a vaccination sequence.

Vertices are dense integers ``0..n-1``.  The root is always vertex 0 after
:func:`build_tree` relabels the input, and children are kept sorted by id so
tie-breaking downstream is reproducible.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property


class TreeError(ValueError):
    """Raised for malformed tree input."""


@dataclass(frozen=True)
class RootedTree:
    parent: tuple[int | None, ...]
    children: tuple[tuple[int, ...], ...]
    level: tuple[int, ...]
    wt: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.parent)

    @property
    def root(self) -> int:
        return 0

    @property
    def depth(self) -> int:
        return max(self.level)

    @cached_property
    def by_level(self) -> tuple[tuple[int, ...], ...]:
        """Vertices grouped by level, each group in increasing id order."""
        groups: list[list[int]] = [[] for _ in range(self.depth + 1)]
        for v, lv in enumerate(self.level):
            groups[lv].append(v)
        return tuple(tuple(g) for g in groups)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if not self.children[v] and v != 0)

    def ancestors(self, v: int, include_root: bool = False) -> list[int]:
        """Ancestors-or-self of ``v``, from ``v`` upwards."""
        out = []
        cur: int | None = v
        while cur is not None:
            if cur != 0 or include_root:
                out.append(cur)
            cur = self.parent[cur]
        return out

    def subtree(self, v: int) -> list[int]:
        out = [v]
        i = 0
        while i < len(out):
            out.extend(self.children[out[i]])
            i += 1
        return out

    def is_ancestor(self, a: int, v: int) -> bool:
        """True if ``a`` is an ancestor of ``v`` or equal to it."""
        while v is not None and self.level[v] >= self.level[a]:
            if v == a:
                return True
            v = self.parent[v]
        return False

    def to_text(self) -> str:
        entries = ["-" if p is None else str(p) for p in self.parent]
        return f"{self.n}\n{' '.join(entries)}\n"

    def canonical(self) -> str:
        """Canonical string of the tree up to root-preserving isomorphism."""
        return _canon(self, 0)

    def level_sequence(self) -> tuple[int, ...]:
        """Lexicographically largest preorder level sequence (canonical form)."""

        def seq(v: int) -> tuple[int, ...]:
            parts = sorted((seq(c) for c in self.children[v]), reverse=True)
            return (self.level[v],) + tuple(x for part in parts for x in part)

        return seq(0)


def _canon(tree: RootedTree, v: int) -> str:
    parts = sorted((_canon(tree, c) for c in tree.children[v]), reverse=True)
    return "(" + "".join(parts) + ")"


def build_tree(parent_list: Sequence[int | None]) -> RootedTree:
    """Build a tree from per-vertex parent ids (``None`` marks the root).

    If the root is not vertex 0 the vertices are relabelled in BFS order, so
    the result always has its root at id 0.
    """
    n = len(parent_list)
    if n == 0:
        raise TreeError("empty tree")
    roots = [v for v, p in enumerate(parent_list) if p is None]
    if len(roots) != 1:
        raise TreeError(f"expected exactly one root, found {len(roots)}")
    for v, p in enumerate(parent_list):
        if p is not None and not 0 <= p < n:
            raise TreeError(f"parent {p} of vertex {v} out of range")
        if p == v:
            raise TreeError(f"cycle detected at vertex {v}")

    kids: list[list[int]] = [[] for _ in range(n)]
    for v, p in enumerate(parent_list):
        if p is not None:
            kids[p].append(v)

    order = [roots[0]]
    seen = {roots[0]}
    i = 0
    while i < len(order):
        for c in kids[order[i]]:
            if c in seen:
                raise TreeError(f"cycle detected at vertex {c}")
            seen.add(c)
            order.append(c)
        i += 1
    if len(order) != n:
        # every vertex has one parent, so unreachable ones sit on a cycle
        raise TreeError(f"cycle detected: {n - len(order)} vertices unreachable from root")

    if roots[0] == 0:
        relabel = list(range(n))
    else:
        relabel = [0] * n
        for new, old in enumerate(order):
            relabel[old] = new

    parent: list[int | None] = [None] * n
    for old, p in enumerate(parent_list):
        if p is not None:
            parent[relabel[old]] = relabel[p]
    return _derive(parent)


def _derive(parent: list[int | None]) -> RootedTree:
    n = len(parent)
    children: list[list[int]] = [[] for _ in range(n)]
    for v, p in enumerate(parent):
        if p is not None:
            children[p].append(v)
    level = [0] * n
    order = [0]
    i = 0
    while i < len(order):
        v = order[i]
        for c in children[v]:
            level[c] = level[v] + 1
            order.append(c)
        i += 1
    wt = [1] * n
    for v in reversed(order):
        p = parent[v]
        if p is not None:
            wt[p] += wt[v]
    return RootedTree(
        parent=tuple(parent),
        children=tuple(tuple(c) for c in children),
        level=tuple(level),
        wt=tuple(wt),
    )


def from_level_sequence(seq: Sequence[int]) -> RootedTree:
    """Tree from a preorder level sequence such as ``(0, 1, 2, 1)``."""
    if not seq or seq[0] != 0:
        raise TreeError("level sequence must start with 0")
    parent: list[int | None] = [None]
    stack = [0]
    for v, lv in enumerate(seq[1:], start=1):
        if lv < 1 or lv > len(stack):
            raise TreeError(f"invalid level {lv} at position {v}")
        del stack[lv:]
        parent.append(stack[-1])
        stack.append(v)
    return _derive(parent)


def parse_tree(text: str) -> RootedTree:
    """Parse the text format: a count line, then that many parent entries."""
    tokens = text.split()
    if not tokens:
        raise TreeError("empty tree text")
    try:
        n = int(tokens[0])
    except ValueError:
        raise TreeError(f"bad vertex count {tokens[0]!r}") from None
    entries = tokens[1:]
    if len(entries) != n:
        raise TreeError(f"expected {n} parent entries, got {len(entries)}")
    parents: list[int | None] = []
    for tok in entries:
        if tok == "-":
            parents.append(None)
        else:
            try:
                parents.append(int(tok))
            except ValueError:
                raise TreeError(f"bad parent entry {tok!r}") from None
    return build_tree(parents)


def validate_sequence(tree: RootedTree, seq: Sequence[int | None]) -> tuple[bool, str | None]:
    """Check the normal form of a vaccination sequence.

    ``seq[i-1]`` is the vertex vaccinated at time ``i``; ``None`` skips a
    step.  Returns ``(ok, first_violation)``.
    """
    chosen: list[int] = []
    for i, a in enumerate(seq, start=1):
        if a is None:
            continue
        if not 0 <= a < tree.n:
            return False, f"vertex {a} out of range"
        if tree.level[a] != i:
            return False, f"level({a})={tree.level[a]}≠{i}"
        for b in chosen:
            if tree.is_ancestor(b, a):
                return False, f"{a} lies in the subtree of {b}"
        chosen.append(a)
    return True, None


def simulate(tree: RootedTree, seq: Sequence[int | None]) -> tuple[int, frozenset[int]]:
    """Run the spread against ``seq`` and return ``(saved, saved_vertices)``.

    Vertices outside every vaccinated subtree end up infected.
    """
    ok, why = validate_sequence(tree, seq)
    if not ok:
        raise TreeError(f"invalid vaccination sequence: {why}")
    saved: set[int] = set()
    for a in seq:
        if a is not None:
            saved.update(tree.subtree(a))
    return len(saved), frozenset(saved)


def path_tree(n: int) -> RootedTree:
    return build_tree([None] + list(range(n - 1)))


def star_tree(leaves: int) -> RootedTree:
    return build_tree([None] + [0] * leaves)

