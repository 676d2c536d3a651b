"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly as a script.
"""

import os
import sys
import time
from collections import Counter
from fractions import Fraction

import pytest

from firefighter.census import count_rooted_trees, gap_census, leaf_extension_check, rooted_trees
from firefighter.grid import PENTAGONAL, get_topology
from firefighter.lp import build_ip, solve_ip, solve_lp
from firefighter.protocol import run
from firefighter.strategies import (
    KpqParams,
    greedy,
    make_kpq,
    optimal_bruteforce,
    so_formula,
    su_formula,
    unburn,
)

JOBS = os.cpu_count() or 1
HALF = Fraction(1, 2)


@pytest.fixture
def report(capsys):
    def emit(cid: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {cid} {detail}", flush=True)

    return emit


@pytest.fixture(scope="module")
def census():
    return {n: gap_census(n, jobs=JOBS) for n in range(1, 15)}


def _keys(outs):
    return Counter(o.key for o in outs)


def test_c01_rooted_tree_counts(report):
    start = time.perf_counter()
    counts = {n: count_rooted_trees(n) for n in (12, 13, 14)}
    elapsed = time.perf_counter() - start
    ok = counts == {12: 4766, 13: 12486, 14: 32973} and elapsed < 60
    report("C1", ok, f"counts {counts} in {elapsed:.1f}s")
    assert ok


def test_c02_gap_census(census, report):
    counts = {n: len(census[n].gap_trees) for n in census}
    gaps = {rep.gap for n in census for rep in census[n].gap_trees}
    ok = all(counts[n] == 0 for n in range(1, 13)) and counts[13] == 2 and counts[14] == 10 and gaps == {HALF}
    report("C2", ok, f"gap trees n<=12: {sum(counts[n] for n in range(1, 13))}, "
           f"n=13: {counts[13]}, n=14: {counts[14]}, gaps {sorted(map(str, gaps))}")
    assert ok


def test_c03_leaf_extension(census, report):
    verdicts, mult = leaf_extension_check(census[14], census[13])
    split = sorted(mult.values(), reverse=True)
    ok = len(verdicts) == 10 and all(v.ok for v in verdicts) and split == [6, 4]
    report("C3", ok, f"{sum(v.ok for v in verdicts)}/{len(verdicts)} extend a 13-vertex gap tree, split {split}")
    assert ok


def test_c04_figure_anchors(census, report):
    pairs = []
    for rep in census[13].gap_trees:
        m = solve_ip(rep.tree)
        m_star, _ = solve_lp(build_ip(rep.tree))
        pairs.append((m, m_star))
    pairs.sort()
    ok = pairs == [(7, Fraction(15, 2)), (8, Fraction(17, 2))]
    report("C4", ok, "(m, m*) = " + ", ".join(f"({m}, {s})" for m, s in pairs))
    assert ok


def test_c05_kpq_362(report):
    params = KpqParams(3, 6, 2)
    tree = make_kpq(params)
    o, g, u = optimal_bruteforce(tree).saved, greedy(tree).saved, unburn(tree).saved
    so, su = so_formula(params), su_formula(params)
    ok = (o, g, u, so, su) == (38, 38, 28, 38, 28)
    report("C5", ok, f"n={tree.n} optimal={o} greedy={g} unburn={u} so={so} su={su}")
    assert ok


def test_c06_closed_forms(report):
    rows = []
    for k in (3, 4, 5):
        q = k * (k - 3) // 2 + 1
        p = k * (k - 1) // 2 + 1
        tree = make_kpq(KpqParams(k, p, q))
        o = optimal_bruteforce(tree, cap=10**4).saved
        u = unburn(tree).saved
        rows.append((k, o, k * (k + p + q + 1) + 2, u, k * (p + 2) + q + 2, Fraction(u, o)))
    ratios = [r[-1] for r in rows]
    matches = all(o == so and u == su for _, o, so, u, su, _ in rows)
    decreasing = all(a > b for a, b in zip(ratios, ratios[1:])) and ratios[-1] > HALF
    # closed-form ratio far out, to see where the sequence heads
    k = 1000
    q = k * (k - 3) // 2 + 1
    far = KpqParams(k, k * (k - 1) // 2 + 1, q)
    tail = Fraction(su_formula(far), so_formula(far))
    ok = matches and decreasing and abs(tail - HALF) < Fraction(1, 1000)
    detail = "; ".join(f"k={k}: opt={o}/{so} unburn={u}/{su} ratio={float(r):.4f}" for k, o, so, u, su, r in rows)
    report("C6", ok, f"{detail}; ratio at k=1000 {float(tail):.5f}")
    assert ok


def test_c07_half_bound(report):
    start = time.perf_counter()
    checked, bad = 0, []
    for n in range(1, 11):
        for tree in rooted_trees(n):
            checked += 1
            o = optimal_bruteforce(tree).saved
            u, g = unburn(tree).saved, greedy(tree).saved
            if not (2 * u >= o and 2 * g >= o and solve_ip(tree) == o):
                bad.append(tree.level_sequence())
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    report("C7", ok, f"{checked} trees, {len(bad)} violations, {elapsed:.1f}s")
    assert ok


def test_c08_square(report):
    outs = run(get_topology("square"), [(0, 0)], 2)
    got = Counter((o.contained, o.steps, o.infected) for o in outs)
    ok = set(got) == {(True, 8, 18)}
    report("C8", ok, f"square budget 2: {dict(got)}")
    assert ok


def test_c09_triangular(report):
    outs = run(get_topology("triangular"), [(0, 0)], 3)
    ok = all(o.contained for o in outs) and _keys(outs) == Counter({(6, 17): 1, (7, 18): 2})
    report("C9", ok, f"triangular budget 3: {sorted(o.key for o in outs)}")
    assert ok


def test_c10_strong(report):
    outs = run(get_topology("strong"), [(0, 0)], 4)
    ok = all(o.contained for o in outs) and _keys(outs) == Counter({(8, 35): 2, (9, 41): 2})
    report("C10", ok, f"strong budget 4: {sorted(o.key for o in outs)}")
    assert ok


def test_c11_hexagonal(report):
    outs = run(get_topology("hexagonal"), [(0, 0)], 2)
    again = run(get_topology("hexagonal"), [(0, 0)], 2)
    ok = [o.key for o in outs] == [(2, 2)] and outs[0].contained and outs[0].trace == again[0].trace
    report("C11", ok, f"hexagonal budget 2: {[o.key for o in outs]}")
    assert ok


def _best(outs):
    keys = [o.key for o in outs if o.contained]
    return min(keys) if keys else None


def test_c12_pentagon(report):
    deg3 = run(PENTAGONAL, [(0, 1)], 2)
    deg4 = run(PENTAGONAL, [(0, 0)], 2)
    pair3 = run(PENTAGONAL, [(0, 1), (1, 1)], 2)
    hard = (
        all(o.contained for o in deg3 + deg4 + pair3)
        and {o.key for o in deg3} == {(2, 2)}
        and [o.key for o in deg4] == [(4, 7)] * 3
        and _keys(pair3) == Counter({(4, 8): 1, (6, 12): 4})
    )
    # the reference boards for the two remaining starts put some vaccines
    # more than distance two from every other one, so these runs drop that rule
    soft = {}
    for name, start, bound in (("mixed", [(0, 0), (0, 1)], (6, 15)), ("deg4-pair", [(0, 0), (2, 0)], (7, 20))):
        loose = _best(run(PENTAGONAL, start, 2, distance_rule=False, max_steps=10))
        strict = _best(run(PENTAGONAL, start, 2, max_steps=10))
        soft[name] = (loose, strict, bound)
    soft_ok = all(loose is not None and loose <= bound for loose, _, bound in soft.values())
    ok = hard and soft_ok
    detail = (
        f"deg3 {sorted({o.key for o in deg3})}, deg4 {[o.key for o in deg4]}, "
        f"deg3 pair {sorted(o.key for o in pair3)}; "
        + "; ".join(f"{n} best {lo} (bound {b}, with distance rule {st})" for n, (lo, st, b) in soft.items())
    )
    report("C12", ok, detail)
    for name, (loose, _, bound) in soft.items():
        if loose is not None and loose < bound:
            report("C12", True, f"finding: {name} start reaches {loose}, better than {bound}")
    assert ok


REFERENCE_RULES = ["CP1", "CP1", "CP3", "CP4", "CP1", "CP3", "CP4"]
REFERENCE_CELLS = [
    [(-1, 0), (0, -1)],
    [(-1, 1), (0, 2)],
    [(1, -2), (2, -1)],
    [(1, 3), (3, -1)],
    [(4, -1), (5, 0)],
    [(2, 4), (3, 3)],
    [(4, 3), (6, 1)],
]


def test_c13_square_trace(report):
    sq = get_topology("square")
    outs = run(sq, [(0, 0)], 2)
    point_group = sq.stabilizer(frozenset({(0, 0)}))
    want = [frozenset(cells) for cells in REFERENCE_CELLS]
    ok = bool(outs)
    for o in outs:
        rules = [r.decided_by for r in o.trace[:7]]
        placed = [frozenset(r.cells) for r in o.trace[:7]]
        same_cells = any([frozenset(sq.act(g, c) for c in cells) for cells in placed] == want for g in point_group)
        ok = ok and rules == REFERENCE_RULES and same_cells
    rules = " ".join(f"t{i}:{r.decided_by}" for i, r in enumerate(outs[0].trace[:7]))
    report("C13", ok, f"{len(outs)} branch(es), rules {rules}")
    assert ok


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
