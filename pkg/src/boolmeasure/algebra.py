"""Finite Boolean set algebras over an indexed atom space.

An element is a subset of ``{0, ..., atom_count - 1}`` stored as a bitmask,
so lattice questions like "is the meet of these sets nonzero" reduce to
integer arithmetic.  All values are immutable and all operations are pure
functions; everything here is safe to evaluate concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import InputError, SizeError

#: Exhaustive enumeration of B+ refuses beyond this many atoms.
ENUMERATION_CAP = 16

BOOLEAN_OPS = ("union", "intersection", "complement", "difference")
ORDER_RELATIONS = ("leq", "disjoint", "equal")


@dataclass(frozen=True)
class AtomSpace:
    """The algebra of all subsets of a ground set of ``atom_count`` atoms."""

    atom_count: int

    def __post_init__(self):
        if not isinstance(self.atom_count, int) or self.atom_count < 1:
            raise InputError(f"atom_count must be a positive integer, got {self.atom_count!r}")

    @property
    def unit_mask(self) -> int:
        return (1 << self.atom_count) - 1

    @property
    def zero(self) -> "Element":
        return Element(self, 0)

    @property
    def unit(self) -> "Element":
        return Element(self, self.unit_mask)

    def element(self, atoms: Iterable[int]) -> "Element":
        """Build an element from atom indices; duplicates are collapsed."""
        mask = 0
        for a in atoms:
            if not isinstance(a, int) or a < 0 or a >= self.atom_count:
                raise InputError(f"atom index {a!r} out of range for {self.atom_count} atoms")
            mask |= 1 << a
        return Element(self, mask)

    def from_mask(self, mask: int) -> "Element":
        if not isinstance(mask, int) or mask < 0 or mask > self.unit_mask:
            raise InputError(f"mask {mask!r} out of range for {self.atom_count} atoms")
        return Element(self, mask)

    def singleton(self, atom: int) -> "Element":
        return self.element((atom,))


@dataclass(frozen=True)
class Element:
    """A member of the set algebra: a subset of the atom space."""

    space: AtomSpace
    mask: int

    @property
    def atoms(self) -> tuple[int, ...]:
        mask, out = self.mask, []
        while mask:
            low = mask & -mask
            out.append(low.bit_length() - 1)
            mask ^= low
        return tuple(out)

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    @property
    def is_zero(self) -> bool:
        return self.mask == 0

    def union(self, other: "Element") -> "Element":
        _require_same_space(self, other)
        return Element(self.space, self.mask | other.mask)

    def intersection(self, other: "Element") -> "Element":
        _require_same_space(self, other)
        return Element(self.space, self.mask & other.mask)

    def complement(self) -> "Element":
        return Element(self.space, self.space.unit_mask & ~self.mask)

    def difference(self, other: "Element") -> "Element":
        _require_same_space(self, other)
        return Element(self.space, self.mask & ~other.mask)

    def leq(self, other: "Element") -> bool:
        _require_same_space(self, other)
        return self.mask & ~other.mask == 0

    def disjoint(self, other: "Element") -> bool:
        _require_same_space(self, other)
        return self.mask & other.mask == 0

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"Element({set(self.atoms) if self.mask else '{}'} of {self.space.atom_count})"


def _require_same_space(a: Element, b: Element) -> None:
    if a.space != b.space:
        raise InputError(
            f"elements live in different atom spaces ({a.space.atom_count} vs {b.space.atom_count})"
        )


def canonical_key(e: Element) -> tuple[int, tuple[int, ...]]:
    """Sort key fixing the canonical order: by size, then lexicographic."""
    return (e.size, e.atoms)


def apply_boolean(op: str, a: Element, b: Element | None = None) -> Element:
    """Dispatch a lattice operation by name.

    ``b`` must be absent exactly when ``op`` is ``complement``.
    """
    if op not in BOOLEAN_OPS:
        raise InputError(f"unknown boolean operation {op!r}")
    if op == "complement":
        if b is not None:
            raise InputError("complement takes a single element")
        return a.complement()
    if b is None:
        raise InputError(f"{op} needs two elements")
    if op == "union":
        return a.union(b)
    if op == "intersection":
        return a.intersection(b)
    return a.difference(b)


def order_test(rel: str, a: Element, b: Element) -> bool:
    """Dispatch an order relation by name: leq, disjoint, or equal."""
    if rel not in ORDER_RELATIONS:
        raise InputError(f"unknown order relation {rel!r}")
    if rel == "leq":
        return a.leq(b)
    if rel == "disjoint":
        return a.disjoint(b)
    _require_same_space(a, b)
    return a.mask == b.mask


@lru_cache(maxsize=32)
def _enumerate_cached(atom_count: int) -> tuple[Element, ...]:
    space = AtomSpace(atom_count)
    masks = sorted(range(1, space.unit_mask + 1), key=lambda m: canonical_key(Element(space, m)))
    return tuple(Element(space, m) for m in masks)


def enumerate_nonzero(space: AtomSpace, cap: int = ENUMERATION_CAP) -> tuple[Element, ...]:
    """All 2^n - 1 nonzero elements in canonical order (size, then lex).

    Refuses when the atom count exceeds ``cap``.
    """
    if space.atom_count > cap:
        raise SizeError(f"enumeration over {space.atom_count} atoms exceeds the cap of {cap}")
    return _enumerate_cached(space.atom_count)


@dataclass(frozen=True)
class Collection:
    """A finite list of nonzero elements; repetition is allowed."""

    space: AtomSpace
    members: tuple[Element, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        for m in self.members:
            if m.space != self.space:
                raise InputError("collection member belongs to a different atom space")
            if m.is_zero:
                raise InputError("collection members must be nonzero")

    def __len__(self) -> int:
        return len(self.members)


def collection(space: AtomSpace, members: Sequence[Element]) -> Collection:
    return Collection(space, tuple(members))
