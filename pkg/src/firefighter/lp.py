"""Integer program for the tree problem, its LP relaxation, and gap reports.

One variable ``x(v)`` per non-root vertex with objective weight ``wt(v)``.
Rows are ``sum x(v) <= 1`` over:

* every vertex of a level (one vaccine per time step),
* the non-root ancestors-or-self of every leaf (one vaccine per root path),
* with the strengthening cut enabled, the non-root ancestors-or-self of
  ``u`` together with the descendants of ``u`` at a deeper level ``i``.

By default the cut is generated only for ``i = l(u) + 1`` (``u``'s
children).  That family gives no gap on 12 or fewer vertices, two gap trees
on 13 and ten on 14, each with gap 1/2.  ``cut_levels="all"`` generates the
cut for every deeper level; it is strictly tighter and closes the second
13-vertex gap tree (the one with ``m = 8``).

The LP is solved exactly with an integer-preserving tableau simplex, so a
verdict such as ``15/2 > 7`` never depends on floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .strategies import DEFAULT_SIZE_CAP, optimal_bruteforce
from .tree import RootedTree


@dataclass(frozen=True)
class Row:
    coeffs: dict[int, Fraction]
    rhs: Fraction
    kind: str  # "level", "leaf" or "cut"

    @property
    def support(self) -> frozenset[int]:
        return frozenset(v for v, a in self.coeffs.items() if a)


@dataclass(frozen=True)
class LPModel:
    vars: tuple[int, ...]
    objective: dict[int, Fraction]
    rows: tuple[Row, ...]
    upper: Fraction = Fraction(1)

    def rows_of(self, kind: str) -> list[Row]:
        return [r for r in self.rows if r.kind == kind]

    def check(self, x: dict[int, Fraction]) -> list[Row]:
        """Rows violated by assignment ``x`` (exact re-substitution)."""
        bad = [r for r in self.rows if sum(a * x.get(v, 0) for v, a in r.coeffs.items()) > r.rhs]
        if any(not 0 <= x.get(v, 0) <= self.upper for v in self.vars):
            bad.append(Row({}, Fraction(0), "bounds"))
        return bad

    def value(self, x: dict[int, Fraction]) -> Fraction:
        return sum((c * x.get(v, 0) for v, c in self.objective.items()), Fraction(0))


@dataclass(frozen=True)
class GapReport:
    tree: RootedTree
    m: int
    m_star: Fraction
    x_star: dict[int, Fraction]

    @property
    def gap(self) -> Fraction:
        return self.m_star - self.m

    def to_record(self) -> dict:
        return {
            "tree": self.tree.to_text().strip(),
            "level_sequence": list(self.tree.level_sequence()),
            "m": self.m,
            "m_star": str(self.m_star),
            "gap": str(self.gap),
        }


def _one(vs) -> dict[int, Fraction]:
    return {v: Fraction(1) for v in sorted(vs)}


CUT_LEVELS = ("next", "all")


def build_ip(tree: RootedTree, with_c6: bool = True, cut_levels: str = "next") -> LPModel:
    """The integer program as an LP model (integrality dropped).

    Cut rows whose descendant part would be empty are omitted: they are
    implied by the leaf rows.
    """
    if cut_levels not in CUT_LEVELS:
        raise ValueError(f"cut_levels must be one of {CUT_LEVELS}")
    variables = tuple(range(1, tree.n))
    objective = {v: Fraction(tree.wt[v]) for v in variables}
    rows: list[Row] = []
    for lv in range(1, tree.depth + 1):
        rows.append(Row(_one(tree.by_level[lv]), Fraction(1), "level"))
    for leaf in tree.leaves:
        rows.append(Row(_one(tree.ancestors(leaf)), Fraction(1), "leaf"))
    if with_c6:
        for u in range(tree.n):
            up = tree.ancestors(u)
            below: dict[int, list[int]] = {}
            for w in tree.subtree(u)[1:]:
                below.setdefault(tree.level[w], []).append(w)
            levels = sorted(below)
            if cut_levels == "next":
                levels = levels[:1]
            for i in levels:
                rows.append(Row(_one(up + below[i]), Fraction(1), "cut"))
    return LPModel(variables, objective, tuple(rows))


def solve_lp(model: LPModel) -> tuple[Fraction, dict[int, Fraction]]:
    """Exact maximum of the relaxation and an optimal vertex.

    Rows whose support is contained in another row's support (same
    nonnegative 0/1 form) are dropped first; this leaves the feasible region
    unchanged.
    """
    rows = _presolve(model.rows)
    cols = list(model.vars)
    index = {v: j for j, v in enumerate(cols)}
    a_int: list[list[int]] = []
    b_int: list[int] = []
    for r in rows:
        scale = lcm(r.rhs.denominator, *(a.denominator for a in r.coeffs.values()))
        row = [0] * len(cols)
        for v, a in r.coeffs.items():
            row[index[v]] = int(a * scale)
        a_int.append(row)
        b_int.append(int(r.rhs * scale))
    cscale = lcm(*(c.denominator for c in model.objective.values())) if cols else 1
    c_int = [int(model.objective.get(v, 0) * cscale) for v in cols]
    value, x = simplex_max(c_int, a_int, b_int)
    return value / cscale, {v: x[j] for j, v in enumerate(cols)}


def _presolve(rows: tuple[Row, ...]) -> list[Row]:
    simple = all(r.rhs == 1 and all(a == 1 for a in r.coeffs.values()) for r in rows)
    if not simple:
        return list(rows)
    supports = sorted({r.support for r in rows}, key=len, reverse=True)
    kept: list[frozenset[int]] = []
    for s in supports:
        if not any(s <= k for k in kept):
            kept.append(s)
    return [Row(_one(s), Fraction(1), "presolved") for s in kept]


def simplex_max(c: list[int], a: list[list[int]], b: list[int]) -> tuple[Fraction, list[Fraction]]:
    """Maximize ``c.x`` subject to ``a x <= b``, ``x >= 0`` with ``b >= 0``.

    Integer-preserving tableau (every entry is a numerator over the common
    denominator ``d``, which is the last pivot) with Bland's rule, starting
    from the slack basis.
    """
    m, n = len(a), len(c)
    if any(bi < 0 for bi in b):
        raise ValueError("slack basis infeasible: negative right-hand side")
    width = n + m + 1
    tab = []
    for i in range(m):
        row = a[i] + [0] * m + [b[i]]
        row[n + i] = 1
        tab.append(row)
    z = [-cj for cj in c] + [0] * (m + 1)
    basis = [n + i for i in range(m)]
    d = 1
    while True:
        s = next((j for j in range(n + m) if z[j] < 0), None)
        if s is None:
            break
        r = None
        for i in range(m):
            if tab[i][s] > 0:
                if r is None:
                    r = i
                    continue
                # ratio b_i/a_is vs b_r/a_rs; ties go to the lowest basic index
                lhs = tab[i][-1] * tab[r][s]
                rhs = tab[r][-1] * tab[i][s]
                if lhs < rhs or (lhs == rhs and basis[i] < basis[r]):
                    r = i
        if r is None:
            raise ValueError("LP unbounded")
        p = tab[r][s]
        prow = tab[r]
        for i in range(m):
            if i == r:
                continue
            row = tab[i]
            f = row[s]
            if f:
                tab[i] = [(p * row[j] - f * prow[j]) // d for j in range(width)]
            elif p != d:
                tab[i] = [(p * row[j]) // d for j in range(width)]
        f = z[s]
        z = [(p * z[j] - f * prow[j]) // d for j in range(width)]
        basis[r] = s
        d = p
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = Fraction(tab[i][-1], d)
    return Fraction(z[-1], d), x


def branch_and_bound(model: LPModel) -> tuple[Fraction, dict[int, Fraction]]:
    """Exact 0/1 optimum of a model whose rows are all ``sum x <= 1`` packings.

    Branches on a fractional variable: ``x = 0`` drops it, ``x = 1`` also
    drops every variable sharing a row with it.
    """
    simple = all(r.rhs == 1 and all(a == 1 for a in r.coeffs.values()) for r in model.rows)
    if not simple:
        raise ValueError("branch_and_bound handles only 0/1 packing rows with right-hand side 1")
    best: list = [Fraction(-1), {}]

    def restrict(m: LPModel, keep: set[int]) -> LPModel:
        rows = []
        for r in m.rows:
            coeffs = {v: a for v, a in r.coeffs.items() if v in keep}
            if coeffs:
                rows.append(Row(coeffs, r.rhs, r.kind))
        return LPModel(tuple(v for v in m.vars if v in keep), {v: m.objective[v] for v in keep}, tuple(rows))

    def visit(m: LPModel, fixed: dict[int, Fraction], base: Fraction) -> None:
        value, x = solve_lp(m) if m.vars else (Fraction(0), {})
        if base + value <= best[0]:
            return
        frac = next((v for v in m.vars if x[v].denominator != 1), None)
        if frac is None:
            best[0] = base + value
            best[1] = {**fixed, **x}
            return
        clash = {u for r in m.rows if frac in r.coeffs for u in r.coeffs}
        visit(restrict(m, set(m.vars) - clash), {**fixed, frac: Fraction(1)}, base + m.objective[frac])
        visit(restrict(m, set(m.vars) - {frac}), {**fixed, frac: Fraction(0)}, base)

    visit(model, {}, Fraction(0))
    value, x = best
    return value, {v: x.get(v, Fraction(0)) for v in model.vars}


IP_METHODS = ("bnb", "search")


def solve_ip(tree: RootedTree, method: str = "bnb", cap: int = DEFAULT_SIZE_CAP) -> int:
    """Integer optimum.

    ``bnb`` runs branch and bound on the integer program; ``search`` uses the
    sequence search of ``optimal_bruteforce``.
    """
    if method == "search":
        return optimal_bruteforce(tree, cap=cap).saved
    if method != "bnb":
        raise ValueError(f"method must be one of {IP_METHODS}")
    if tree.n == 1:
        return 0
    value, _ = branch_and_bound(build_ip(tree))
    return int(value)


def gap(
    tree: RootedTree,
    with_c6: bool = True,
    cut_levels: str = "next",
    cap: int = DEFAULT_SIZE_CAP,
) -> GapReport:
    m = solve_ip(tree, method="search", cap=cap)
    m_star, x = solve_lp(build_ip(tree, with_c6=with_c6, cut_levels=cut_levels))
    return GapReport(tree, m, m_star, x)
