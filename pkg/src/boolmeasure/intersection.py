"""Kelley's intersection number, computed exactly.

For a finite collection C of nonzero elements, the intersection number is
the infimum over finite sequences from C (repetition allowed) of k/n, where
n is the sequence length and k the largest number of terms with a common
atom.  Sequences with repetition are exactly rational mixed strategies over
C, so the infimum is the value of the zero-sum game "pick a member" versus
"pick an atom" and is computed here by exact LP: on a set algebra it equals
the reciprocal of the fractional covering number of the membership
hypergraph.  A brute-force multiset search over short sequences provides an
independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb
from typing import Sequence

from .algebra import Collection, Element, canonical_key
from .errors import InputError, InternalError, SizeError
from .simplex import LEQ, LPConstraint, exact_lp_solve

#: Exact rationals are plain ``fractions.Fraction`` values (lowest terms,
#: positive denominator, guaranteed by the stdlib).
Rational = Fraction

#: Default cap on the number of multisets the brute-force search will visit.
BRUTEFORCE_BUDGET = 2_000_000


@dataclass(frozen=True)
class SequenceScore:
    """The score k/n of one explicit sequence, with its witness."""

    sequence: tuple[Element, ...]
    depth: int
    length: int
    kappa_s: Fraction
    witness_atom: int
    witness_indices: tuple[int, ...]


@dataclass(frozen=True)
class GameSolution:
    """Optimal value and both optimal mixtures of the intersection game.

    ``atom_weights`` is the optimizing probability vector over atoms (the
    measure side); ``member_weights`` the optimizing mixture over the
    collection, indexed like the input.  Both sum to one and satisfy
    ``min_c atom_weights(c) == value == max_x sum_c member_weights[c]*[x in c]``.
    """

    value: Fraction
    atom_weights: tuple[Fraction, ...]
    member_weights: tuple[Fraction, ...]


def kappa_of_sequence(sequence: Sequence[Element]) -> SequenceScore:
    """Score k/n of an explicit sequence.

    On a set algebra a subfamily has nonzero meet exactly when some atom lies
    in every term, so the depth is the maximum atom multiplicity.
    """
    seq = tuple(sequence)
    if not seq:
        raise InputError("sequence must be nonempty")
    space = seq[0].space
    counts: dict[int, int] = {}
    for i, e in enumerate(seq):
        if e.space != space:
            raise InputError("sequence members belong to different atom spaces")
        if e.is_zero:
            raise InputError(f"sequence member {i} is zero")
        for a in e.atoms:
            counts[a] = counts.get(a, 0) + 1
    depth = max(counts.values())
    atom = min(a for a, c in counts.items() if c == depth)
    indices = tuple(i for i, e in enumerate(seq) if (e.mask >> atom) & 1)
    return SequenceScore(seq, depth, len(seq), Fraction(depth, len(seq)), atom, indices)


def _minimal_distinct(members: Sequence[Element]) -> list[tuple[int, Element]]:
    """First-occurrence inclusion-minimal members.

    Dropping duplicates and non-minimal members leaves the game value
    unchanged: shrinking a played member never increases any atom's load, and
    removing members can only raise the value, so both reductions are exact.
    """
    seen: dict[int, int] = {}
    for i, e in enumerate(members):
        if e.mask not in seen:
            seen[e.mask] = i
    distinct = sorted(seen.items(), key=lambda kv: kv[1])
    out = []
    for mask, i in distinct:
        if not any(other != mask and other & mask == other for other in seen):
            out.append((i, members[i]))
    return out


def intersection_number(collection: Collection) -> GameSolution:
    """Exact intersection number with both optimal strategy vectors.

    Solves the packing LP ``max sum(y)`` subject to, per atom, total weight of
    members containing it at most one; the value is the reciprocal of the
    optimum and the LP duals give the atom-side optimum.  Equivalent to
    minimizing the best-response atom load over member mixtures.
    """
    members = collection.members
    if not members:
        raise InputError("collection must be nonempty")
    space = collection.space
    reduced = _minimal_distinct(members)
    atoms_used = sorted({a for _, e in reduced for a in e.atoms})
    cons = [
        LPConstraint(
            tuple(Fraction((e.mask >> x) & 1) for _, e in reduced),
            LEQ,
            Fraction(1),
        )
        for x in atoms_used
    ]
    sol = exact_lp_solve([Fraction(1)] * len(reduced), cons, maximize=True)
    tau = sol.objective
    if tau <= 0:
        raise InternalError("packing optimum must be positive for a nonempty collection")
    kappa = 1 / tau

    member_weights = [Fraction(0)] * len(members)
    for (i, _), y in zip(reduced, sol.variables):
        member_weights[i] = y * kappa
    atom_weights = [Fraction(0)] * space.atom_count
    for x, d in zip(atoms_used, sol.duals):
        atom_weights[x] = d * kappa

    _check_game_solution(members, space, kappa, atom_weights, member_weights)
    return GameSolution(kappa, tuple(atom_weights), tuple(member_weights))


def _check_game_solution(members, space, kappa, atom_weights, member_weights) -> None:
    # Exact saddle-point identities; a failure here is a solver bug.
    if sum(atom_weights) != 1 or sum(member_weights) != 1:
        raise InternalError("strategy vectors must sum to one")
    if any(v < 0 for v in atom_weights) or any(v < 0 for v in member_weights):
        raise InternalError("strategy vectors must be nonnegative")
    measures = [sum(atom_weights[a] for a in e.atoms) for e in members]
    if min(measures) != kappa:
        raise InternalError("atom-side optimum does not guarantee the game value")
    loads = [
        sum((w for e, w in zip(members, member_weights) if (e.mask >> x) & 1), Fraction(0))
        for x in range(space.atom_count)
    ]
    if max(loads) != kappa:
        raise InternalError("member-side optimum does not achieve the game value")


def intersection_number_bruteforce(
    collection: Collection, max_len: int, *, budget: int = BRUTEFORCE_BUDGET
) -> Fraction:
    """Minimum k/n over all multisets from C of size 1..max_len.

    The score of a sequence does not depend on its order, so multisets rather
    than tuples are enumerated.  The result is always >= the LP value; it is
    an independent oracle for it.
    """
    members = collection.members
    if not members:
        raise InputError("collection must be nonempty")
    if max_len < 1:
        raise InputError("max_len must be at least 1")
    distinct: dict[int, Element] = {}
    for e in members:
        distinct.setdefault(e.mask, e)
    pool = sorted(distinct.values(), key=canonical_key)
    u = len(pool)
    total = sum(comb(u + length - 1, length) for length in range(1, max_len + 1))
    if total > budget:
        raise SizeError(f"{total} multisets exceed the brute-force budget of {budget}")
    atom_lists = [e.atoms for e in pool]
    best: Fraction | None = None
    for length in range(1, max_len + 1):
        for combo in combinations_with_replacement(range(u), length):
            counts: dict[int, int] = {}
            for idx in combo:
                for a in atom_lists[idx]:
                    counts[a] = counts.get(a, 0) + 1
            score = Fraction(max(counts.values()), length)
            if best is None or score < best:
                best = score
    assert best is not None
    return best
