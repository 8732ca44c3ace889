"""Intermediate representation of combs and filters, plus the built-in catalog.

A filter is an ordered list of blocks, one Pauli slot per qubit per block.
A slot is either a fixed Pauli or one leg of a contraction label; every label
occurs exactly twice across the filter, once with the index lowered and once
raised. Contracting a label pair sums the index over {0,1,3} with metric sign
-1 for the identity component (the y component has metric weight zero and
drops out of every sum).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from . import QcombError
from .pauli import METRIC_DIAG, PAULI_NAMES

# index values and signs that survive the metric contraction
CONTRACTION_VALUES = tuple(mu for mu, g in enumerate(METRIC_DIAG) if g != 0.0)
CONTRACTION_SIGNS = tuple(METRIC_DIAG[mu] for mu in CONTRACTION_VALUES)


class FilterError(QcombError):
    pass


class EmptyFilterError(FilterError):
    pass


class SlotCountMismatchError(FilterError):
    pass


class DuplicateLabelInBlockError(FilterError):
    pass


class UnpairedLabelError(FilterError):
    pass


@dataclass(frozen=True)
class Fixed:
    code: int  # Pauli index 0..3


@dataclass(frozen=True)
class Lower:
    label: str


@dataclass(frozen=True)
class Upper:
    label: str


Slot = Union[Fixed, Lower, Upper]


@dataclass(frozen=True)
class Block:
    """One tensor-product Pauli factor of a filter (one slot per qubit)."""

    slots: tuple[Slot, ...]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(s.label for s in self.slots if not isinstance(s, Fixed))


@dataclass(frozen=True)
class FilterDef:
    """A filter: prefactor times metric-contracted blocks of Pauli slots."""

    name: str
    num_qubits: int
    blocks: tuple[Block, ...]
    prefactor: Fraction = Fraction(1)

    @property
    def order(self) -> int:
        """Number of blocks; the value is homogeneous of degree 2*order."""
        return len(self.blocks)

    @property
    def degree(self) -> int:
        return 2 * len(self.blocks)

    @property
    def metric(self) -> tuple[float, float, float, float]:
        return METRIC_DIAG

    @property
    def labels(self) -> tuple[str, ...]:
        """Contraction labels in first-appearance order."""
        seen: dict[str, None] = {}
        for block in self.blocks:
            for label in block.labels:
                seen.setdefault(label, None)
        return tuple(seen)


def validate(f: FilterDef) -> FilterDef:
    """Structural checks; returns the filter unchanged when it is well formed."""
    if f.num_qubits < 1:
        raise EmptyFilterError(f"{f.name}: needs at least one qubit")
    if not f.blocks:
        raise EmptyFilterError(f"{f.name}: no blocks")
    lower_seen: dict[str, int] = {}
    upper_seen: dict[str, int] = {}
    for i, block in enumerate(f.blocks):
        if len(block.slots) != f.num_qubits:
            raise SlotCountMismatchError(
                f"{f.name}: block {i} has {len(block.slots)} slots, expected {f.num_qubits}"
            )
        in_block: set[str] = set()
        for slot in block.slots:
            if isinstance(slot, Fixed):
                if slot.code not in (0, 1, 2, 3):
                    raise FilterError(f"{f.name}: bad Pauli code {slot.code}")
                continue
            if not slot.label:
                raise FilterError(f"{f.name}: empty label in block {i}")
            if slot.label in in_block:
                raise DuplicateLabelInBlockError(f"{f.name}: label {slot.label!r} twice in block {i}")
            in_block.add(slot.label)
            side = lower_seen if isinstance(slot, Lower) else upper_seen
            side[slot.label] = side.get(slot.label, 0) + 1
    for label in sorted(set(lower_seen) | set(upper_seen)):
        lo, up = lower_seen.get(label, 0), upper_seen.get(label, 0)
        if (lo, up) != (1, 1):
            raise UnpairedLabelError(
                f"{f.name}: label {label!r} occurs {lo} times lowered and {up} times raised; "
                "need exactly one of each"
            )
    return f


def permute_qubits(f: FilterDef, perm: Sequence[int]) -> FilterDef:
    """Move every block's slot at position j to position perm[j]."""
    if sorted(perm) != list(range(f.num_qubits)):
        raise FilterError(f"{list(perm)} is not a permutation of 0..{f.num_qubits - 1}")
    blocks = []
    for block in f.blocks:
        slots: list[Slot | None] = [None] * f.num_qubits
        for j, slot in enumerate(block.slots):
            slots[perm[j]] = slot
        blocks.append(Block(tuple(slots)))  # type: ignore[arg-type]
    return validate(FilterDef(f.name, f.num_qubits, tuple(blocks), f.prefactor))


def _canonical_slots(f: FilterDef) -> list[tuple]:
    rename: dict[str, int] = {}
    out = []
    for block in f.blocks:
        for slot in block.slots:
            if isinstance(slot, Fixed):
                out.append(("fixed", slot.code))
            else:
                key = rename.setdefault(slot.label, len(rename))
                out.append(("lower" if isinstance(slot, Lower) else "upper", key))
        out.append(("|",))
    return out


def structurally_equal(f: FilterDef, g: FilterDef) -> bool:
    """Equality up to label renaming (names of the filters are ignored)."""
    return (
        f.num_qubits == g.num_qubits
        and f.prefactor == g.prefactor
        and _canonical_slots(f) == _canonical_slots(g)
    )


# --- catalog ----------------------------------------------------------------

_CODE_BY_NAME = {name: code for code, name in enumerate(PAULI_NAMES)}


def _slot(token: str) -> Slot:
    if token in _CODE_BY_NAME:
        return Fixed(_CODE_BY_NAME[token])
    if token.startswith("^"):
        return Upper(token[1:])
    return Lower(token)


def _filter(name: str, q: int, prefactor: Fraction, blocks: str) -> FilterDef:
    parsed = tuple(Block(tuple(_slot(t) for t in part.split())) for part in blocks.split("|"))
    return validate(FilterDef(name, q, parsed, prefactor))


class FilterCatalog:
    """Immutable name -> FilterDef collection."""

    def __init__(self, entries: Sequence[FilterDef]):
        self._entries = {f.name: f for f in entries}

    def get(self, name: str) -> FilterDef:
        try:
            return self._entries[name]
        except KeyError:
            raise FilterError(f"unknown filter {name!r}; known: {', '.join(self._entries)}") from None

    def names(self) -> tuple[str, ...]:
        return tuple(self._entries)

    def __iter__(self) -> Iterator[FilterDef]:
        return iter(self._entries.values())

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)


_CATALOG: FilterCatalog | None = None

_ONE = Fraction(1)


def catalog() -> FilterCatalog:
    """All built-in combs and filters, encoded exactly as printed.

    The six-block F4_3 reuses two letters across distinct contraction pairs
    in its usual printed form; here the pairs are kept apart as r1/t1 (blocks
    3-4) and r2/t2 (blocks 5-6) so every label pairs exactly once.
    """
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = FilterCatalog(
            [
                _filter("comb1", 1, _ONE, "y"),
                _filter("comb2", 1, _ONE, "m | ^m"),
                _filter("F2_1", 2, _ONE, "y y"),
                _filter("F2_2", 2, Fraction(1, 3), "m n | ^m ^n"),
                _filter("F3_1", 3, _ONE, "m y y | ^m y y"),
                _filter("F3_2", 3, Fraction(1, 3), "m n l | ^m ^n ^l"),
                _filter("F4_1", 4, _ONE, "m n y y | ^m y l y | y ^n ^l y"),
                _filter("F4_2", 4, _ONE, "m n y y | ^m y l y | y ^n y t | y y ^l ^t"),
                _filter(
                    "F4_3",
                    4,
                    Fraction(1, 2),
                    "m n y y | ^m ^n y y | r1 y t1 y | ^r1 y ^t1 y | y r2 t2 y | y ^r2 ^t2 y",
                ),
                _filter(
                    "F5_1",
                    5,
                    _ONE,
                    "m1 m2 m3 y y | ^m1 ^m2 y m4 y | m5 y ^m3 ^m4 y | ^m5 y y y y",
                ),
                _filter(
                    "F5_2",
                    5,
                    _ONE,
                    "m1 m2 m3 y y | ^m1 y y m4 m5 | y ^m2 y y y | y y ^m3 y y | y y y ^m4 y | y y y y ^m5",
                ),
                _filter(
                    "F5_3",
                    5,
                    _ONE,
                    "m1 m2 m3 y y | ^m1 ^m2 m4 y y | m5 y ^m3 m6 y | ^m5 y ^m4 m7 y | m8 y y ^m6 m9 | ^m8 y y ^m7 ^m9",
                ),
                _filter(
                    "F5_4",
                    5,
                    Fraction(1, 8),
                    "m1 m2 m3 y y | ^m1 ^m2 ^m3 y y | m4 y m5 m6 y | ^m4 y ^m5 ^m6 y | m7 y y m8 m9 | ^m7 y y ^m8 ^m9",
                ),
                _filter(
                    "F6_1",
                    6,
                    _ONE,
                    "m1 m2 y y y y | ^m1 y m3 y y y | m6 y y m4 y y | y y ^m3 y m5 y | ^m6 ^m2 y ^m4 ^m5 y",
                ),
                _filter(
                    "F6_2",
                    6,
                    _ONE,
                    "m1 m2 y y y y | ^m1 y m3 y y y | m6 ^m2 ^m3 m4 y y | y y y ^m4 m5 y | ^m6 y y y ^m5 y",
                ),
            ]
        )
    return _CATALOG
