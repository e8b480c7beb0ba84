import random
from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from boolmeasure.algebra import AtomSpace, Collection
from boolmeasure.errors import InputError, SizeError
from boolmeasure.intersection import (
    intersection_number,
    intersection_number_bruteforce,
    kappa_of_sequence,
)


def _random_collection(rng, max_atoms=5, max_size=6):
    sp = AtomSpace(rng.randint(1, max_atoms))
    members = tuple(sp.from_mask(rng.randint(1, sp.unit_mask)) for _ in range(rng.randint(1, max_size)))
    return Collection(sp, members)


def test_kappa_of_sequence_examples():
    sp = AtomSpace(3)
    single = kappa_of_sequence([sp.element([0, 1])])
    assert single.kappa_s == F(1) and single.depth == single.length == 1

    disjoint = kappa_of_sequence([sp.singleton(i) for i in range(3)])
    assert disjoint.kappa_s == F(1, 3)
    assert disjoint.depth == 1
    assert disjoint.witness_atom == 0 and disjoint.witness_indices == (0,)

    mixed = kappa_of_sequence([sp.element([0]), sp.element([0, 1]), sp.element([1, 2])])
    assert mixed.depth == 2 and mixed.witness_atom == 0 and mixed.witness_indices == (0, 1)


def test_kappa_of_sequence_validation():
    sp = AtomSpace(2)
    with pytest.raises(InputError):
        kappa_of_sequence([])
    with pytest.raises(InputError):
        kappa_of_sequence([sp.zero])
    with pytest.raises(InputError):
        kappa_of_sequence([sp.unit, AtomSpace(3).unit])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_repetition_invariance(data):
    # repeating every term t times leaves the score unchanged
    n = data.draw(st.integers(1, 5))
    sp = AtomSpace(n)
    seq = data.draw(st.lists(st.integers(1, sp.unit_mask), min_size=1, max_size=5))
    t = data.draw(st.integers(1, 4))
    base = [sp.from_mask(m) for m in seq]
    repeated = [e for e in base for _ in range(t)]
    assert kappa_of_sequence(base).kappa_s == kappa_of_sequence(repeated).kappa_s


def test_intersection_number_examples():
    sp = AtomSpace(4)
    assert intersection_number(Collection(sp, (sp.element([0, 1]),))).value == 1

    sp3 = AtomSpace(3)
    disjoint = Collection(sp3, tuple(sp3.singleton(i) for i in range(3)))
    sol = intersection_number(disjoint)
    assert sol.value == F(1, 3)
    assert intersection_number_bruteforce(disjoint, 3) == F(1, 3)

    pairs = Collection(sp, tuple(sp.element(c) for c in combinations(range(4), 2)))
    sol = intersection_number(pairs)
    assert sol.value == F(1, 2)
    assert sol.atom_weights == (F(1, 4),) * 4
    assert intersection_number_bruteforce(pairs, 6) == F(1, 2)
    # the sequence of all six 2-subsets attains 1/2 with depth 3
    score = kappa_of_sequence(pairs.members)
    assert score.depth == 3 and score.kappa_s == F(1, 2)


def test_bruteforce_examples():
    sp = AtomSpace(2)
    single = Collection(sp, (sp.element([0]),))
    assert intersection_number_bruteforce(single, 4) == 1
    two = Collection(sp, (sp.element([0]), sp.element([1])))
    assert intersection_number_bruteforce(two, 2) == F(1, 2)


def test_bruteforce_budget_refusal():
    sp = AtomSpace(5)
    coll = Collection(sp, tuple(sp.from_mask(m) for m in range(1, 21)))
    with pytest.raises(SizeError):
        intersection_number_bruteforce(coll, 12, budget=1000)


def test_empty_collection_rejected():
    sp = AtomSpace(2)
    with pytest.raises(InputError):
        intersection_number(Collection(sp, ()))
    with pytest.raises(InputError):
        intersection_number_bruteforce(Collection(sp, ()), 2)


def test_game_solution_invariants_random():
    rng = random.Random(7)
    for _ in range(60):
        coll = _random_collection(rng)
        sol = intersection_number(coll)
        assert sum(sol.atom_weights) == 1 and sum(sol.member_weights) == 1
        assert all(w >= 0 for w in sol.atom_weights)
        assert all(w >= 0 for w in sol.member_weights)
        measures = [sum(sol.atom_weights[a] for a in c.atoms) for c in coll.members]
        assert min(measures) == sol.value
        loads = [
            sum(w for c, w in zip(coll.members, sol.member_weights) if (c.mask >> x) & 1)
            for x in range(coll.space.atom_count)
        ]
        assert max(loads) == sol.value


def test_every_sequence_scores_at_least_kappa():
    rng = random.Random(21)
    for _ in range(40):
        coll = _random_collection(rng)
        kappa = intersection_number(coll).value
        for _ in range(10):
            seq = [coll.members[rng.randrange(len(coll.members))] for _ in range(rng.randint(1, 6))]
            assert kappa_of_sequence(seq).kappa_s >= kappa


def test_monotonicity_under_collection_growth():
    rng = random.Random(33)
    for _ in range(40):
        sp = AtomSpace(rng.randint(1, 5))
        small = tuple(sp.from_mask(rng.randint(1, sp.unit_mask)) for _ in range(rng.randint(1, 4)))
        extra = tuple(sp.from_mask(rng.randint(1, sp.unit_mask)) for _ in range(rng.randint(1, 3)))
        k_small = intersection_number(Collection(sp, small)).value
        k_big = intersection_number(Collection(sp, small + extra)).value
        assert k_big <= k_small


def test_disjoint_members_cap_kappa():
    rng = random.Random(55)
    for _ in range(30):
        sp = AtomSpace(6)
        split = sorted(rng.sample(range(1, 6), rng.randint(1, 3))) + [6]
        parts = []
        prev = 0
        for cut in split:
            parts.append(sp.element(range(prev, cut)))
            prev = cut
        extra = tuple(sp.from_mask(rng.randint(1, sp.unit_mask)) for _ in range(rng.randint(0, 3)))
        coll = Collection(sp, tuple(parts) + extra)
        assert intersection_number(coll).value <= F(1, len(parts))


def test_lp_matches_bruteforce_at_value_denominator():
    rng = random.Random(99)
    for _ in range(60):
        coll = _random_collection(rng)
        kappa = intersection_number(coll).value
        assert intersection_number_bruteforce(coll, kappa.denominator) == kappa


def test_duplicates_and_supersets_do_not_change_kappa():
    sp = AtomSpace(4)
    base = (sp.element([0]), sp.element([1]))
    padded = base + (sp.element([0]), sp.element([0, 2]), sp.element([0, 1, 3]))
    assert intersection_number(Collection(sp, base)).value == intersection_number(
        Collection(sp, padded)
    ).value
