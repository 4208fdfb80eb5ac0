"""Isolated points off the surface component.

The strict count test asserts the advertised total of 19. The enumeration
finds 24 classes, so that test fails; it is left as is on purpose.
"""

import pytest

from turnover_cusps.character import trace_vector
from turnover_cusps.cusps import faithfulness_obstruction
from turnover_cusps.errors import IsolatedPointCountError
from turnover_cusps.holonomy import verify_relations
from turnover_cusps.isolated import (
    EXPECTED_ISOLATED_COUNT,
    PUBLISHED_LIST,
    SURFACE_CLASS_MEMBER,
    block_sum,
    case_tallies,
    compare_with_published_list,
    conjugacy_orbits,
    enumerate_isolated_points,
    isolated_point_classes,
    satisfies_relators,
)
from turnover_cusps.linalg import Matrix
from turnover_cusps.words import word_ball


@pytest.fixture(scope="module")
def classes():
    return isolated_point_classes()


def test_every_block_pair_satisfies_relators():
    # R has order three, so all 81 block-diagonal pairs are representations
    pairs = [((i, j), (k, l)) for i in range(3) for j in range(3) for k in range(3) for l in range(3)]
    assert all(satisfies_relators(p) for p in pairs)
    assert len(conjugacy_orbits(pairs)) == 25


def test_count_is_nineteen(classes):
    assert len(classes) == EXPECTED_ISOLATED_COUNT


def test_enumeration_raises_on_mismatch():
    with pytest.raises(IsolatedPointCountError) as info:
        enumerate_isolated_points()
    assert len(info.value.classes) == 24
    assert info.value.tallies == {1: 6, 2: 6, 3: 9, 4: 3}
    assert info.value.expected == 19


def test_enumeration_returns_with_matching_expectation():
    reps = enumerate_isolated_points(expected=24)
    assert len(reps) == 24


def test_case_tallies(classes):
    assert case_tallies(classes) == {1: 6, 2: 6, 3: 9, 4: 3}


def test_surface_class_excluded(classes):
    assert all(SURFACE_CLASS_MEMBER not in c.members for c in classes)


def test_relators_exact(classes):
    for c in classes:
        assert verify_relations(c.representation()).passed


def test_witnesses_are_exact_conjugacies(classes):
    for c in classes:
        rep = c.representation()
        x, a = block_sum(c.a2b), block_sum(c.a)
        for p, (mx, ma) in c.conjugacy_witnesses():
            assert p @ x @ p.inv() == block_sum(mx)
            assert p @ a @ p.inv() == block_sum(ma)
            assert p.det() in (1, -1)
        assert rep.image("aab") == x


def test_classes_are_pairwise_disjoint(classes):
    seen = set()
    for c in classes:
        assert not seen & set(c.members)
        seen |= set(c.members)
    assert len(seen) == 81 - 4  # the surface class has four members


def test_not_faithful(classes):
    for c in classes:
        v = faithfulness_obstruction(c.representation())
        assert v.obstructed


def test_a2b_has_finite_order(classes):
    for c in classes:
        x = c.representation().image("aab")
        assert x @ x @ x == Matrix.identity(4)


def test_published_list_comparison():
    cmp = compare_with_published_list()
    assert cmp.literal_entries == len(PUBLISHED_LIST) == 21
    assert len(cmp.distinct_classes) == 16
    assert len(cmp.duplicates) == 4
    assert len(cmp.missing) == 8
    assert cmp.published_tallies == {1: 6, 2: 6, 3: 3, 4: 1}


def test_trace_vectors_do_not_separate_orientation_partners(classes):
    words = word_ball(4)
    vectors = {tuple(trace_vector(c.representation(), words)) for c in classes}
    assert len(vectors) == 14
