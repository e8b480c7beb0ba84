"""Certified lower bounds on level intersection numbers.

For a graded fragmentation whose level n+2 has exact antichain constant K,
the intersection number of level n is at least 1/(30 K^2).  ``certify_level``
checks that bound by exact LP; ``certify_fragmentation`` certifies every
level and blends the per-level dual measures into a strictly positive one.

``replay_proof`` makes the underlying combinatorial argument executable for
one explicit sequence: either the deepest atom already witnesses a large
common-intersection index set (this always closes on honest inputs), or the
signature partition, a random verified expander family, Hall choice
functions, and the induced (i, j) table are built and every assertion along
the contradiction route is checked one by one.  On fixtures whose levels are
mislabeled (claimed graded but not), the route runs to the end and pinpoints
the first assertion that fails.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .algebra import ENUMERATION_CAP, Collection, Element, canonical_key, enumerate_nonzero
from .errors import CertificationError, ContractError, InputError, InternalError
from .expanders import (
    RETRY_CAP,
    VERIFY_BUDGET,
    ExpanderFamily,
    build_expander,
    choice_function,
)
from .fragmentation import (
    AntichainReport,
    Fragmentation,
    check_fragmentation,
    check_graded,
    max_disjoint_family,
)
from .intersection import intersection_number, kappa_of_sequence
from .measures import Measure, check_measure_axioms, combine_measures

#: Sequences must be at least this factor times K^2 long for the replay.
MIN_SEQUENCE_FACTOR = 100


def intersection_bound(K: int) -> Fraction:
    """The certified lower bound 1/(30 K^2) for antichain constant K."""
    if K < 1:
        raise InputError("antichain constant must be at least 1")
    return Fraction(1, 30 * K * K)


def minimum_sequence_length(K: int) -> int:
    return MIN_SEQUENCE_FACTOR * K * K


@dataclass(frozen=True)
class KRParameters:
    """The derived integers of the counting argument.

    k is the largest integer >= 3 with k/m < 1/(30 K^2); p the largest
    integer >= k with p/m < 1/K.  Both the expander precondition
    p*p >= 15*m*k and p*K < m then hold, and are re-asserted on construction.
    """

    K: int
    m: int
    k: int
    p: int
    level: int | None = None

    def __post_init__(self):
        if self.p * self.p < 15 * self.m * self.k or self.p * self.K >= self.m:
            raise InternalError("derived parameters violate their guaranteed inequalities")


def select_parameters(K: int, m: int, *, level: int | None = None) -> KRParameters:
    """Compute (k, p) from (K, m) by exact integer comparisons."""
    if not isinstance(K, int) or K < 1:
        raise InputError(f"K must be a positive integer, got {K!r}")
    if not isinstance(m, int) or m < minimum_sequence_length(K):
        raise InputError(f"m must be at least 100*K^2 = {minimum_sequence_length(K)}, got {m!r}")
    d = 30 * K * K
    k = (m - 1) // d  # largest k with k*d < m
    if k < 3:
        raise InternalError("k >= 3 must follow from m >= 100*K^2")
    p = (m - 1) // K  # largest p with p*K < m
    if p < k:
        raise InternalError("p >= k must follow from K <= 30*K^2")
    if (k + 1) * d < m:
        raise InternalError("k is not maximal")
    return KRParameters(K=K, m=m, k=k, p=p, level=level)


@dataclass(frozen=True)
class IntersectionWitness:
    """A deepest atom with the indices of all members containing it."""

    indices: tuple[int, ...]
    atom: int
    ratio: Fraction
    meets_bound: bool


def witness_intersection(sequence: Sequence[Element], bound: Fraction) -> IntersectionWitness:
    """Deepest atom x, J = {i : x in c_i}, and whether |J|/m >= bound."""
    score = kappa_of_sequence(sequence)
    return IntersectionWitness(
        indices=score.witness_indices,
        atom=score.witness_atom,
        ratio=score.kappa_s,
        meets_bound=score.kappa_s >= bound,
    )


@dataclass(frozen=True)
class SignaturePartition:
    """Atoms grouped by their membership signature across the sequence.

    Only signatures that actually occur are materialized (at most one cell
    per atom, never 2^m).  Cells are pairwise disjoint, union to the unit,
    and the union of the cells whose signature contains i is exactly the
    i-th member.
    """

    sequence: tuple[Element, ...]
    cells: Mapping[frozenset[int], Element]

    def reconstruct(self, i: int) -> Element:
        space = self.sequence[i].space
        mask = 0
        for sig, cell in self.cells.items():
            if i in sig:
                mask |= cell.mask
        return Element(space, mask)


def build_signature_partition(sequence: Sequence[Element]) -> SignaturePartition:
    seq = tuple(sequence)
    if not seq:
        raise InputError("sequence must be nonempty")
    space = seq[0].space
    if any(e.space != space for e in seq):
        raise InputError("sequence members belong to different atom spaces")
    indices_of_atom: dict[int, list[int]] = {}
    for i, e in enumerate(seq):
        for x in e.atoms:
            indices_of_atom.setdefault(x, []).append(i)
    cell_masks: dict[frozenset[int], int] = {}
    covered = 0
    for x, idx in indices_of_atom.items():
        sig = frozenset(idx)
        cell_masks[sig] = cell_masks.get(sig, 0) | (1 << x)
        covered |= 1 << x
    rest = space.unit_mask & ~covered
    if rest:
        cell_masks[frozenset()] = rest
    cells = {sig: Element(space, mask) for sig, mask in cell_masks.items()}
    return SignaturePartition(seq, cells)


@dataclass(frozen=True)
class TraceVerdict:
    """Which step closed the argument.

    kind "witness": a large index set with nonzero meet was found directly.
    kind "descent_violation": the contradiction route ran to its end and the
    graded/nested descent failed at the recorded spot, localizing why the
    input was not the graded fragmentation it claimed to be.
    """

    kind: str
    witness: IntersectionWitness | None = None
    index: int | None = None
    failing_step: str | None = None
    level: int | None = None
    whole: Element | None = None
    part: Element | None = None


@dataclass(frozen=True)
class ProofTrace:
    parameters: KRParameters
    partition: SignaturePartition
    expander: ExpanderFamily | None
    a_table: Mapping[tuple[int, int], Element] | None
    verdict: TraceVerdict
    notes: tuple[str, ...] = ()


def _extended_levels(
    frag: Fragmentation, upto: int, cap: int = ENUMERATION_CAP
) -> tuple[list[frozenset[Element]], int]:
    levels = list(frag.levels)
    extended = 0
    if len(levels) < upto:
        full = frozenset(enumerate_nonzero(frag.space, cap))
        while len(levels) < upto:
            levels.append(full)
            extended += 1
    return levels, extended


def replay_proof(
    frag: Fragmentation,
    n: int,
    sequence: Sequence[Element],
    seed: int,
    *,
    trust_fragmentation: bool = False,
    retry_cap: int = RETRY_CAP,
    verify_budget: int = VERIFY_BUDGET,
) -> ProofTrace:
    """Replay the bound's argument on one explicit sequence from level n.

    With ``trust_fragmentation`` the validity and gradedness of the input are
    taken on the caller's word instead of being checked; that is how
    deliberately corrupted fixtures (and levels over atom spaces too large to
    enumerate) are driven into the contradiction route.
    """
    seq = tuple(sequence)
    if not seq:
        raise InputError("sequence must be nonempty")
    if n < 1 or n > frag.depth:
        raise InputError(f"level {n} does not exist")
    space = frag.space
    notes: list[str] = []
    if not trust_fragmentation:
        report = check_fragmentation(frag)
        if not report.valid:
            raise ContractError(
                f"not a valid fragmentation: {report.violation.kind} fails at level "
                f"{report.violation.level}"
            )
        graded = check_graded(frag)
        if not graded.graded:
            w = graded.witness
            raise ContractError(
                f"fragmentation is not graded at level {w.level} "
                f"(whole {w.whole.atoms}, part {w.part.atoms})"
            )
    levels, extended = _extended_levels(frag, n + 2)
    if extended:
        notes.append(f"extended with {extended} copies of B+ to reach level {n + 2}")
    level_n, level_n2 = levels[n - 1], levels[n + 1]
    for i, c in enumerate(seq):
        if c.space != space:
            raise InputError(f"sequence member {i} lives in a different atom space")
        if c not in level_n:
            raise ContractError(f"sequence member {i} is not in level {n}")

    K, _ = max_disjoint_family(
        level_n2, space, assume_upward_closed=not trust_fragmentation
    )
    m = len(seq)
    if m < minimum_sequence_length(K):
        raise InputError(
            f"sequence length {m} is below 100*K^2 = {minimum_sequence_length(K)} for K = {K}"
        )
    params = select_parameters(K, m, level=n)
    bound = intersection_bound(K)
    wit = witness_intersection(seq, bound)
    partition = build_signature_partition(seq)
    if wit.meets_bound:
        return ProofTrace(params, partition, None, None, TraceVerdict("witness", witness=wit), tuple(notes))

    # No index set of ratio >= 1/(30K^2) has a common atom, so every occurring
    # signature has size <= k.  Build the expander route and check each step.
    family = build_expander(m, params.p, params.k, seed, retry_cap=retry_cap, verify_budget=verify_budget)
    a_masks: dict[tuple[int, int], int] = {}
    for sig in sorted((s for s in partition.cells if s), key=sorted):
        if len(sig) > params.k:
            raise InternalError("an occurring signature exceeds k despite the depth check")
        f = choice_function(family, sig)
        cell_mask = partition.cells[sig].mask
        for i in sig:
            key = (i, f.assignment[i])
            a_masks[key] = a_masks.get(key, 0) | cell_mask
    a_table = {key: Element(space, mask) for key, mask in a_masks.items()}

    for i in range(m):  # each member must be the union of its three pieces
        mask = 0
        for j in family.sets[i]:
            mask |= a_masks.get((i, j), 0)
        if mask != seq[i].mask:
            raise InternalError(f"pieces of member {i} do not reconstruct it")
    columns: dict[int, list[tuple[int, int]]] = {}
    for (i, j), mask in a_masks.items():
        columns.setdefault(j, []).append((i, mask))
    for j, col in sorted(columns.items()):
        union = 0
        total = 0
        for _, mask in col:
            union |= mask
            total += mask.bit_count()
        if union.bit_count() != total:
            raise InternalError(f"pieces in column {j} are not pairwise disjoint")
        hits = sum(1 for i, _ in col if a_table[(i, j)] in level_n2)
        if hits > K:
            raise InternalError(
                f"column {j} holds {hits} > K = {K} members of level {n + 2}; "
                "the antichain constant was computed wrong"
            )
    if params.p * K >= m:
        raise InternalError("p*K < m must hold for selected parameters")

    bad_i = None
    for i in range(m):
        if all(a_table.get((i, j)) not in level_n2 for j in family.sets[i]):
            bad_i = i
            break
    if bad_i is None:
        raise InternalError("pigeonhole guarantees an index with no piece in level n+2")

    verdict = _descend(seq[bad_i], bad_i, family, a_table, n, levels)
    return ProofTrace(params, partition, family, a_table, verdict, tuple(notes))


def _descend(
    c: Element,
    index: int,
    family: ExpanderFamily,
    a_table: Mapping[tuple[int, int], Element],
    n: int,
    levels: Sequence[frozenset[Element]],
) -> TraceVerdict:
    """Run the graded descent at a member none of whose pieces reached
    level n+2; one of the checks below must fail, and its location is the
    verdict."""
    level_n1, level_n2 = levels[n], levels[n + 1]
    parts = [a_table[(index, j)] for j in family.sets[index] if (index, j) in a_table]
    parts = [p for p in parts if not p.is_zero]
    if len(parts) == 1:
        # c itself escaped level n+2 although it sits in level n.
        return TraceVerdict(
            "descent_violation",
            index=index,
            failing_step=f"nestedness: member of level {n} is outside level {n + 2}",
            level=n,
            whole=c,
            part=parts[0],
        )
    first, rest = parts[0], parts[1:]
    rest_union = rest[0] if len(rest) == 1 else rest[0].union(rest[1])
    if first not in level_n1 and rest_union not in level_n1:
        return TraceVerdict(
            "descent_violation",
            index=index,
            failing_step=f"gradedness between levels {n} and {n + 1}",
            level=n,
            whole=c,
            part=first,
        )
    if first in level_n1:
        return TraceVerdict(
            "descent_violation",
            index=index,
            failing_step=f"nestedness between levels {n + 1} and {n + 2}",
            level=n + 1,
            whole=first,
            part=first,
        )
    if len(rest) == 1:
        return TraceVerdict(
            "descent_violation",
            index=index,
            failing_step=f"nestedness between levels {n + 1} and {n + 2}",
            level=n + 1,
            whole=rest_union,
            part=rest_union,
        )
    return TraceVerdict(
        "descent_violation",
        index=index,
        failing_step=f"gradedness between levels {n + 1} and {n + 2}",
        level=n + 1,
        whole=rest_union,
        part=rest[0],
    )


@dataclass(frozen=True)
class LevelCertificate:
    """Exact intersection number of one level against its certified bound.

    ``kappa`` and ``bound`` are None only for an empty level, where the bound
    holds vacuously and any measure works.
    """

    level: int
    kappa: Fraction | None
    antichain: AntichainReport
    bound: Fraction | None
    measure: Measure
    notes: tuple[str, ...] = ()

    @property
    def K(self) -> int:
        return self.antichain.size


@dataclass(frozen=True)
class FragmentationCertificate:
    level_certificates: tuple[LevelCertificate, ...]
    measure: Measure
    notes: tuple[str, ...] = ()


def certify_level(frag: Fragmentation, n: int, *, validate: bool = True) -> LevelCertificate:
    """Exact kappa of level n, checked against 1/(30 K^2) with K = K_{n+2}.

    Missing levels n+1, n+2 are treated as copies of B+ (noted in the
    certificate).  Raises :class:`CertificationError` with the LP witness
    when the bound fails, which cannot happen for honest graded inputs.
    """
    if validate:
        report = check_fragmentation(frag)
        if not report.valid:
            raise ContractError(
                f"not a valid fragmentation: {report.violation.kind} fails at level "
                f"{report.violation.level}"
            )
        graded = check_graded(frag)
        if not graded.graded:
            w = graded.witness
            raise ContractError(
                f"fragmentation is not graded at level {w.level}; "
                "run extract_graded_subfragmentation first"
            )
    if n < 1 or n > frag.depth:
        raise InputError(f"level {n} does not exist")
    space = frag.space
    levels, extended = _extended_levels(frag, n + 2)
    notes = (f"levels {frag.depth + 1}..{n + 2} taken as B+",) if extended else ()

    size, witness = max_disjoint_family(levels[n + 1], space, assume_upward_closed=True)
    antichain = AntichainReport(n + 2, size, witness)

    level_n = levels[n - 1]
    if not level_n:
        uniform = Measure(space, tuple(Fraction(1, space.atom_count) for _ in range(space.atom_count)))
        return LevelCertificate(n, None, antichain, None, uniform, notes + ("level empty; bound vacuous",))

    ordered = tuple(sorted(level_n, key=canonical_key))
    solution = intersection_number(Collection(space, ordered))
    bound = intersection_bound(size)
    if solution.value < bound:
        raise CertificationError(
            f"kappa(level {n}) = {solution.value} < 1/(30*K^2) = {bound} with K = {size}",
            witness={
                "level": n,
                "kappa": solution.value,
                "bound": bound,
                "K": size,
                "member_weights": solution.member_weights,
                "members": ordered,
            },
        )
    return LevelCertificate(n, solution.value, antichain, bound, Measure(space, solution.atom_weights), notes)


def certify_fragmentation(frag: Fragmentation) -> FragmentationCertificate:
    """Certify every level and produce a strictly positive measure.

    The per-level dual measures are blended with weights 2^-n and the
    resulting measure's axioms are re-checked exhaustively.
    """
    report = check_fragmentation(frag)
    if not report.valid:
        raise ContractError(
            f"not a valid fragmentation: {report.violation.kind} fails at level "
            f"{report.violation.level}"
        )
    graded = check_graded(frag)
    if not graded.graded:
        w = graded.witness
        raise ContractError(
            f"fragmentation is not graded at level {w.level}; "
            "run extract_graded_subfragmentation first"
        )
    certs = tuple(certify_level(frag, n, validate=False) for n in range(1, frag.depth + 1))
    pairs = [
        (cert.measure, cert.kappa if cert.kappa is not None else Fraction(1)) for cert in certs
    ]
    blended = combine_measures(pairs, frag)
    check_measure_axioms(blended)
    if not blended.strictly_positive:
        raise InternalError("covering plus per-level bounds must force strict positivity")
    return FragmentationCertificate(certs, blended)
