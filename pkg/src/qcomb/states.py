"""Named reference states and seeded random state generators.

Catalog amplitudes are encoded exactly as printed: a per-state prefactor
1/sqrt(D) times integer-square-root coefficients on computational basis
strings. The squared coefficients are kept as exact rationals so norm
bookkeeping stays auditable (every catalog state is unit-norm except
``xi7_printed``, whose printed prefactor gives squared norm 9/8).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import QcombError
from .statevec import MAX_QUBITS, PureState, _frozen_array, make_state, permute_state


class StateCatalogError(QcombError):
    pass


@dataclass(frozen=True)
class StateEntry:
    """Catalog record: printed prefactor^2, squared coefficients, and length.

    ``length`` is the number of basis components in the canonical form.
    """

    name: str
    num_qubits: int
    length: int
    prefactor_sq: Fraction
    components: tuple[tuple[str, Fraction], ...]
    normalized: bool = True

    @property
    def printed_norm_sq(self) -> Fraction:
        return self.prefactor_sq * sum((c for _, c in self.components), Fraction(0))

    def build(self) -> PureState:
        entries = [(bits, math.sqrt(float(coeff_sq))) for bits, coeff_sq in self.components]
        if self.normalized:
            return make_state(self.num_qubits, entries)
        pref = math.sqrt(float(self.prefactor_sq))
        amps = np.zeros(2**self.num_qubits, dtype=complex)
        for bits, value in entries:
            amps[int(bits, 2)] = pref * value
        raw = float(np.sum(np.abs(amps) ** 2))
        return PureState(self.num_qubits, _frozen_array(amps), raw, raw)


def _ghz(q: int) -> StateEntry:
    return StateEntry(f"ghz{q}", q, 2, Fraction(1, 2), (("0" * q, Fraction(1)), ("1" * q, Fraction(1))))


def _w(q: int) -> StateEntry:
    # single-excitation pattern; see _ENTRIES for the four-qubit exception
    comps = tuple(("0" * j + "1" + "0" * (q - 1 - j), Fraction(1)) for j in range(q))
    return StateEntry(f"w{q}", q, q, Fraction(1, q), comps)


_ONE = Fraction(1)
_TWO = Fraction(2)
_THREE = Fraction(3)

_ENTRIES: tuple[StateEntry, ...] = (
    StateEntry("bell", 2, 2, Fraction(1, 2), (("00", _ONE), ("11", _ONE))),
    _ghz(2),
    _ghz(3),
    _ghz(4),
    _ghz(5),
    _ghz(6),
    _w(3),
    # the four-qubit W state appears in its three-excitation form
    StateEntry(
        "w4", 4, 4, Fraction(1, 4),
        (("0111", _ONE), ("1011", _ONE), ("1101", _ONE), ("1110", _ONE)),
    ),
    _w(5),
    _w(6),
    StateEntry("phi1", 4, 2, Fraction(1, 2), (("0000", _ONE), ("1111", _ONE))),
    StateEntry(
        "phi4", 4, 4, Fraction(1, 4),
        (("1111", _ONE), ("1100", _ONE), ("0010", _ONE), ("0001", _ONE)),
    ),
    StateEntry(
        "phi5", 4, 5, Fraction(1, 6),
        (("1111", _TWO), ("1000", _ONE), ("0100", _ONE), ("0010", _ONE), ("0001", _ONE)),
    ),
    StateEntry("psi2", 5, 2, Fraction(1, 2), (("11111", _ONE), ("00000", _ONE))),
    StateEntry(
        "psi4", 5, 4, Fraction(1, 4),
        (("11111", _ONE), ("11100", _ONE), ("00010", _ONE), ("00001", _ONE)),
    ),
    StateEntry(
        "psi5", 5, 5, Fraction(1, 6),
        (("11111", _TWO), ("11000", _ONE), ("00100", _ONE), ("00010", _ONE), ("00001", _ONE)),
    ),
    StateEntry(
        "psi6", 5, 6, Fraction(1, 8),
        (
            ("11111", _THREE),
            ("10000", _ONE), ("01000", _ONE), ("00100", _ONE), ("00010", _ONE), ("00001", _ONE),
        ),
    ),
    StateEntry("xi2", 6, 2, Fraction(1, 2), (("111111", _ONE), ("000000", _ONE))),
    StateEntry(
        "xi4", 6, 4, Fraction(1, 4),
        (("111111", _ONE), ("111100", _ONE), ("000010", _ONE), ("000001", _ONE)),
    ),
    StateEntry(
        "xi5", 6, 5, Fraction(1, 6),
        (("111111", _TWO), ("111000", _ONE), ("000100", _ONE), ("000010", _ONE), ("000001", _ONE)),
    ),
    StateEntry(
        "xi6", 6, 6, Fraction(1, 8),
        (
            ("111111", _THREE), ("110000", _ONE),
            ("001000", _ONE), ("000100", _ONE), ("000010", _ONE), ("000001", _ONE),
        ),
    ),
    # the printed prefactor 1/(2*sqrt(2)) leaves xi7 with squared norm 9/8;
    # both the as-printed state and its unit-norm rescaling are exposed
    StateEntry(
        "xi7", 6, 7, Fraction(1, 8),
        (
            ("111111", _THREE),
            ("100000", _ONE), ("010000", _ONE), ("001000", _ONE),
            ("000100", _ONE), ("000010", _ONE), ("000001", _ONE),
        ),
    ),
    StateEntry(
        "xi7_printed", 6, 7, Fraction(1, 8),
        (
            ("111111", _THREE),
            ("100000", _ONE), ("010000", _ONE), ("001000", _ONE),
            ("000100", _ONE), ("000010", _ONE), ("000001", _ONE),
        ),
        normalized=False,
    ),
)


class StateCatalog:
    """Immutable catalog of the named states."""

    def __init__(self, entries: Sequence[StateEntry]):
        self._entries = {e.name: e for e in entries}
        self._built: dict[str, PureState] = {}

    def entry(self, name: str) -> StateEntry:
        try:
            return self._entries[name]
        except KeyError:
            raise StateCatalogError(
                f"unknown state {name!r}; known: {', '.join(self._entries)}"
            ) from None

    def get(self, name: str) -> PureState:
        if name not in self._built:
            self._built[name] = self.entry(name).build()
        return self._built[name]

    def length(self, name: str) -> int:
        return self.entry(name).length

    def names(self) -> tuple[str, ...]:
        return tuple(self._entries)

    def names_for_qubits(self, q: int) -> tuple[str, ...]:
        return tuple(n for n, e in self._entries.items() if e.num_qubits == q)

    def __iter__(self) -> Iterator[StateEntry]:
        return iter(self._entries.values())

    def __contains__(self, name: str) -> bool:
        return name in self._entries


_CATALOG: StateCatalog | None = None


def catalog() -> StateCatalog:
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = StateCatalog(_ENTRIES)
    return _CATALOG


def get(name: str) -> PureState:
    return catalog().get(name)


# --- seeded randomness ------------------------------------------------------


class RandomSource:
    """Deterministic random stream: PCG64 keyed by a 64-bit seed.

    Gaussian draws go through an explicit Box-Muller transform of the raw
    uniform stream, so identical seeds reproduce identical samples.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def spawn(self, index: int) -> "RandomSource":
        """Independent sub-stream for trial ``index`` (seed XOR index)."""
        return RandomSource(self.seed ^ index)

    def uniforms(self, n: int) -> np.ndarray:
        return self._gen.random(n)

    def complex_gaussians(self, n: int) -> np.ndarray:
        u = self._gen.random(n)
        v = self._gen.random(n)
        radius = np.sqrt(-2.0 * np.log1p(-u))
        angle = 2.0 * math.pi * v
        return radius * np.cos(angle) + 1j * radius * np.sin(angle)

    def complex_square(self, shape) -> np.ndarray:
        """Entries uniform in the complex unit square [0,1) x [0,1)i."""
        return self._gen.random(shape) + 1j * self._gen.random(shape)


def random_pure(q: int, rng: RandomSource) -> PureState:
    """Haar-like random state: normalized vector of iid complex Gaussians."""
    if not 1 <= q <= MAX_QUBITS:
        raise StateCatalogError(f"qubit count {q} outside 1..{MAX_QUBITS}")
    amps = rng.complex_gaussians(2**q)
    raw = float(np.sum(np.abs(amps) ** 2))
    return PureState(q, _frozen_array(amps / math.sqrt(raw)), 1.0, raw)


def _normalize_partition(partition) -> list[tuple[int, ...]]:
    blocks: list[tuple[int, ...]] = []
    if all(isinstance(p, int) for p in partition):
        start = 0
        for size in partition:
            if size < 1:
                raise StateCatalogError(f"factor size {size} must be positive")
            blocks.append(tuple(range(start, start + size)))
            start += size
    else:
        blocks = [tuple(p) for p in partition]
    q = sum(len(b) for b in blocks)
    covered = sorted(pos for b in blocks for pos in b)
    if covered != list(range(q)):
        raise StateCatalogError(f"blocks {blocks} do not partition 0..{q - 1}")
    return blocks


def random_product(partition, rng: RandomSource) -> PureState:
    """Random product state across the given qubit partition.

    ``partition`` is either a list of factor sizes (contiguous qubit groups)
    or a list of explicit qubit-position groups.
    """
    blocks = _normalize_partition(partition)
    q = sum(len(b) for b in blocks)
    if q > MAX_QUBITS:
        raise StateCatalogError(f"{q} qubits exceeds the {MAX_QUBITS}-qubit limit")
    amps = np.array([1.0 + 0.0j])
    for block in blocks:
        amps = np.kron(amps, random_pure(len(block), rng).amplitudes)
    state = PureState.from_amplitudes(amps)
    order = [pos for block in blocks for pos in block]
    if order != list(range(q)):
        state = permute_state(state, order)
    return state
