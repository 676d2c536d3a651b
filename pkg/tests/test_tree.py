import pytest
from hypothesis import given

from firefighter.tree import (
    TreeError,
    build_tree,
    from_level_sequence,
    parse_tree,
    path_tree,
    simulate,
    star_tree,
    validate_sequence,
)

from conftest import random_trees, spread_saved


def test_parse_small():
    t = parse_tree("4\n- 0 0 1\n")
    assert t.n == 4
    assert t.children[0] == (1, 2)
    assert t.level == (0, 1, 1, 2)
    assert t.wt == (4, 2, 1, 1)
    assert t.leaves == (2, 3)
    assert t.depth == 2


def test_root_not_first_is_relabelled():
    t = build_tree([2, 2, None, 0])
    assert t.parent[0] is None
    assert sorted(t.wt, reverse=True)[:2] == [4, 2]


@pytest.mark.parametrize(
    "text, msg",
    [
        ("", "empty"),
        ("3\n- 0", "expected 3"),
        ("3\n- - 0", "exactly one root"),
        ("3\n- 0 7", "out of range"),
        ("3\n- 2 1", "cycle"),
        ("2\n- x", "bad parent"),
        ("two\n- 0", "bad vertex count"),
    ],
)
def test_parse_errors(text, msg):
    with pytest.raises(TreeError, match=msg):
        parse_tree(text)


def test_self_parent_is_cycle():
    with pytest.raises(TreeError, match="cycle"):
        build_tree([None, 1])


@given(random_trees())
def test_text_round_trip(t):
    assert parse_tree(t.to_text()) == t


@given(random_trees())
def test_level_sequence_round_trip_is_isomorphic(t):
    seq = t.level_sequence()
    assert seq[0] == 0 and len(seq) == t.n
    assert from_level_sequence(seq).canonical() == t.canonical()


@given(random_trees(max_n=9))
def test_level_sequence_is_lexicographically_largest(t):
    # relabelling children in any order cannot give a larger preorder sequence
    def preorder(v, order_key):
        out = [t.level[v]]
        for c in sorted(t.children[v], key=order_key):
            out += preorder(c, order_key)
        return out

    assert tuple(preorder(0, lambda c: c)) <= t.level_sequence()
    assert tuple(preorder(0, lambda c: -c)) <= t.level_sequence()


def test_canonical_ignores_child_order():
    a = build_tree([None, 0, 0, 1])
    b = build_tree([None, 0, 0, 2])
    assert a.canonical() == b.canonical()
    assert a.canonical() != path_tree(4).canonical()


def test_weights_and_ancestors():
    t = path_tree(4)
    assert t.wt == (4, 3, 2, 1)
    assert t.ancestors(3) == [3, 2, 1]
    assert t.ancestors(3, include_root=True)[-1] == 0
    assert t.is_ancestor(1, 3) and not t.is_ancestor(3, 1)
    assert t.subtree(2) == [2, 3]


def test_validate_sequence():
    t = parse_tree("5\n- 0 0 1 2")
    assert validate_sequence(t, [1, 4]) == (True, None)
    assert validate_sequence(t, [None, 3]) == (True, None)
    ok, why = validate_sequence(t, [3])
    assert not ok and "level" in why
    ok, why = validate_sequence(t, [1, 3])
    assert not ok and "subtree" in why


def test_simulate_rejects_bad_sequence():
    with pytest.raises(TreeError):
        simulate(star_tree(3), [0])


@given(random_trees(max_n=10))
def test_simulate_agrees_with_spread(t):
    seq = []
    taken = []
    for lv in range(1, t.depth + 1):
        pick = next((v for v in t.by_level[lv] if not any(t.is_ancestor(b, v) for b in taken)), None)
        seq.append(pick)
        if pick is not None:
            taken.append(pick)
    saved, verts = simulate(t, seq)
    assert saved == len(verts) == spread_saved(t, seq)
