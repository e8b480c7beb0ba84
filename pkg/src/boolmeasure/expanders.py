"""Indexed families of 3-point sets with the expansion property.

A family {A_i : i in M} of 3-subsets of P = {0..p-1} "expands up to k" when
every index set I with |I| <= k satisfies |union of A_i| > |I|.  Such families
exist with positive probability whenever p/k >= 15 m/p (a counting argument),
so construction here is randomized with exhaustive verification and retries.
Strict expansion implies Hall's condition on every I with |I| <= k, so an
injective choice function exists and is extracted by augmenting-path matching.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable, Mapping

from .errors import ConstructionError, HallViolationError, InputError, SizeError

#: Default retry cap for the randomized construction.
RETRY_CAP = 1000

#: Default cap on the number of index sets verify_expansion will enumerate.
VERIFY_BUDGET = 2_000_000


@dataclass(frozen=True)
class ExpanderFamily:
    """m three-point subsets of {0..p-1}, expanding up to k when verified."""

    m_size: int
    p_size: int
    k: int
    sets: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if self.m_size < 1 or self.p_size < 1 or self.k < 1:
            raise InputError("family parameters must be positive")
        if len(self.sets) != self.m_size:
            raise InputError(f"expected {self.m_size} sets, got {len(self.sets)}")
        normalized = []
        for i, s in enumerate(self.sets):
            t = tuple(sorted(s))
            if len(t) != 3 or len(set(t)) != 3:
                raise InputError(f"set {i} is not a 3-element set: {s!r}")
            if t[0] < 0 or t[-1] >= self.p_size:
                raise InputError(f"set {i} leaves the point range 0..{self.p_size - 1}")
            normalized.append(t)
        object.__setattr__(self, "sets", tuple(normalized))

    def masks(self) -> list[int]:
        return [(1 << a) | (1 << b) | (1 << c) for (a, b, c) in self.sets]


@dataclass(frozen=True)
class ChoiceFunction:
    """An injective selection f(i) in A_i over the index set I."""

    indices: tuple[int, ...]
    assignment: Mapping[int, int]


@dataclass(frozen=True)
class ExpansionReport:
    ok: bool
    violating: tuple[int, ...] | None
    checked: int


def check_preconditions(m: int, p: int, k: int) -> bool:
    """Whether (m, p, k) admits the counting argument: 3 <= k <= p and
    p/k >= 15 m/p, as the exact integer test p*p >= 15*m*k."""
    if m < 1 or p < 1:
        return False
    return 3 <= k <= p and p * p >= 15 * m * k


def verify_expansion(family: ExpanderFamily, *, budget: int = VERIFY_BUDGET) -> ExpansionReport:
    """Exhaustively check |union over I| > |I| for every I with 1 <= |I| <= k.

    Index sets are visited by size, then lexicographically, so the reported
    violation (if any) is the least one; supersets of it are never reached.
    """
    m, k = family.m_size, min(family.k, family.m_size)
    total = sum(comb(m, j) for j in range(1, k + 1))
    if total > budget:
        raise SizeError(f"{total} index sets exceed the verification budget of {budget}")
    masks = family.masks()
    checked = 0
    for j in range(1, k + 1):
        for idx in combinations(range(m), j):
            union = 0
            for i in idx:
                union |= masks[i]
            checked += 1
            if union.bit_count() <= j:
                return ExpansionReport(False, idx, checked)
    return ExpansionReport(True, None, checked)


def build_expander(
    m: int,
    p: int,
    k: int,
    seed: int,
    *,
    retry_cap: int = RETRY_CAP,
    verify_budget: int = VERIFY_BUDGET,
) -> ExpanderFamily:
    """Sample random 3-subsets until exhaustive verification succeeds.

    Deterministic in ``seed``; raises :class:`ConstructionError` with the
    attempt count when the retry cap is exhausted.
    """
    if not check_preconditions(m, p, k):
        raise InputError(
            f"(m={m}, p={p}, k={k}) fails the construction precondition "
            "(need 3 <= k <= p and p*p >= 15*m*k)"
        )
    rng = random.Random(seed)
    for attempt in range(1, retry_cap + 1):
        sets = tuple(tuple(sorted(rng.sample(range(p), 3))) for _ in range(m))
        family = ExpanderFamily(m, p, k, sets)
        if verify_expansion(family, budget=verify_budget).ok:
            return family
    raise ConstructionError(
        f"no verified family within {retry_cap} attempts at (m={m}, p={p}, k={k})",
        attempts=retry_cap,
    )


def choice_function(
    family: ExpanderFamily,
    indices: Iterable[int],
    *,
    check_expansion: bool = False,
) -> ChoiceFunction:
    """Injective f with f(i) in A_i for all i in I, via augmenting paths.

    For a verified family this succeeds whenever |I| <= k (strict expansion
    gives Hall's condition with slack).  When no perfect matching exists a
    :class:`HallViolationError` carries a deficient subset of I.
    """
    idx = tuple(sorted(set(indices)))
    for i in idx:
        if not 0 <= i < family.m_size:
            raise InputError(f"index {i} outside 0..{family.m_size - 1}")
    if len(idx) > family.k:
        raise InputError(f"|I| = {len(idx)} exceeds the family's k = {family.k}")
    if check_expansion:
        report = verify_expansion(family)
        if not report.ok:
            raise InputError(f"family fails expansion at I = {report.violating}")

    match_of_point: dict[int, int] = {}

    def augment(i: int, banned: set[int]) -> bool:
        for point in family.sets[i]:
            if point in banned:
                continue
            banned.add(point)
            holder = match_of_point.get(point)
            if holder is None or augment(holder, banned):
                match_of_point[point] = i
                return True
        return False

    for i in idx:
        if not augment(i, set()):
            deficient = _deficient_subset(family, idx, match_of_point, i)
            raise HallViolationError(
                f"no injective choice on I = {idx}: indices {deficient} reach only "
                f"{len(set().union(*(set(family.sets[j]) for j in deficient)))} points",
                deficient=deficient,
            )
    assignment = {i: p for p, i in match_of_point.items()}
    return ChoiceFunction(idx, assignment)


def _deficient_subset(
    family: ExpanderFamily,
    idx: tuple[int, ...],
    match_of_point: dict[int, int],
    unmatched: int,
) -> tuple[int, ...]:
    """Indices reachable from an unmatched one by alternating paths; their
    point neighbourhood is one smaller, witnessing Hall's failure."""
    reach = {unmatched}
    frontier = [unmatched]
    while frontier:
        i = frontier.pop()
        for point in family.sets[i]:
            holder = match_of_point.get(point)
            if holder is not None and holder not in reach:
                reach.add(holder)
                frontier.append(holder)
    return tuple(sorted(reach))
