from fractions import Fraction
from itertools import product

import pytest

from firefighter.census import (
    count_rooted_trees,
    delete_leaf,
    gap_census,
    leaf_extension_check,
    level_sequences,
    rooted_trees,
)
from firefighter.tree import build_tree, from_level_sequence


def _count_by_labelled_arrays(n: int) -> int:
    # every rooted tree has a labelling with parent(v) < v
    forms = set()
    for parents in product(*[range(v) for v in range(1, n)]):
        forms.add(build_tree([None, *parents]).canonical())
    return len(forms)


@pytest.mark.parametrize("n", range(1, 9))
def test_counts_match_labelled_enumeration(n):
    assert count_rooted_trees(n) == _count_by_labelled_arrays(n)


def test_first_sequence_values():
    assert [count_rooted_trees(n) for n in range(1, 12)] == [1, 1, 2, 4, 9, 20, 48, 115, 286, 719, 1842]


@pytest.mark.parametrize("n", [5, 9])
def test_sequences_are_canonical_distinct_and_decreasing(n):
    seqs = list(level_sequences(n))
    assert seqs == sorted(seqs, reverse=True)
    assert len({from_level_sequence(s).canonical() for s in seqs}) == len(seqs)
    for s in seqs:
        assert from_level_sequence(s).level_sequence() == s


def test_guard_and_range():
    with pytest.raises(ValueError):
        list(level_sequences(0))
    with pytest.raises(ValueError):
        list(level_sequences(17))
    with pytest.raises(ValueError, match="guard"):
        gap_census(15)


def test_rooted_trees_sizes():
    assert all(t.n == 6 for t in rooted_trees(6))


def test_no_gaps_small():
    for n in range(1, 11):
        res = gap_census(n)
        assert res.gap_trees == []
        assert res.summary() == f"n={n} total={count_rooted_trees(n)} gaps=0"


def test_cut_rows_close_the_first_gaps():
    # without constraint (6) the first gaps show up at 12 vertices
    assert all(gap_census(n, with_c6=False).gap_trees == [] for n in range(1, 12))
    loose = gap_census(12, with_c6=False)
    assert sorted(r.gap for r in loose.gap_trees) == [Fraction(1, 2), Fraction(3, 4)]
    assert gap_census(12).gap_trees == []


def test_pool_matches_serial():
    serial = gap_census(9, with_c6=False)
    pooled = gap_census(9, with_c6=False, jobs=2)
    assert serial.total == pooled.total
    assert [r.tree.level_sequence() for r in serial.gap_trees] == [
        r.tree.level_sequence() for r in pooled.gap_trees
    ]


def test_cut_rows_never_loosen_the_bound():
    from firefighter.lp import build_ip, solve_lp

    for t in rooted_trees(9):
        loose = solve_lp(build_ip(t, with_c6=False))[0]
        tight = solve_lp(build_ip(t))[0]
        assert tight <= loose


def test_delete_leaf():
    t = build_tree([None, 0, 1, 1])
    assert delete_leaf(t, 3).canonical() == build_tree([None, 0, 1]).canonical()
    with pytest.raises(ValueError):
        delete_leaf(t, 1)


def test_leaf_extension_on_synthetic_census():
    from firefighter.census import CensusResult
    from firefighter.lp import gap

    small_tree = from_level_sequence((0, 1, 2, 1))
    big_trees = [from_level_sequence(s) for s in ((0, 1, 2, 1, 1), (0, 1, 2, 2, 1), (0, 1, 1, 1, 1))]
    small = CensusResult(4, 4, [gap(small_tree)])
    big = CensusResult(5, 9, [gap(t) for t in big_trees])
    verdicts, mult = leaf_extension_check(big, small)
    assert len(verdicts) == len(big.gap_trees)
    assert set(mult) == {r.tree.canonical() for r in small.gap_trees}
    assert [v.ok for v in verdicts] == [True, True, False]
    assert mult == {small_tree.canonical(): 2}
    assert big.leaf_extension_map[big_trees[2].canonical()] == []
