"""Pauli words as signed bit permutations and the conjugating expectation value.

Everything here works with <psi| P |psi*>, the expectation of a linear Pauli
word P taken against the complex-conjugated ket. That quantity (not the usual
<psi|P|psi>) is the building block of every comb and filter in this package.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import QcombError
from .statevec import MAX_QUBITS, PureState, _frozen_array

# sigma_0 = identity, sigma_1 = x, sigma_2 = y, sigma_3 = z
PAULI_NAMES = ("id", "x", "y", "z")

# Minkowski-like metric over Pauli indices: contracting an index pair sums
# mu over {0,1,3} (the y component carries weight 0) with sign -1 for mu=0.
METRIC_DIAG = (-1.0, 1.0, 0.0, 1.0)

_PARITY = np.array([bin(i).count("1") & 1 for i in range(1 << MAX_QUBITS)], dtype=np.int64)
_SIGN = 1.0 - 2.0 * _PARITY
_INDICES = {q: np.arange(1 << q) for q in range(1, MAX_QUBITS + 1)}
_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


class PauliError(QcombError):
    pass


@dataclass(frozen=True)
class PauliString:
    """Length-q word over {0,1,2,3} encoding a tensor product of Pauli matrices."""

    codes: tuple[int, ...]

    def __post_init__(self):
        if not self.codes:
            raise PauliError("empty Pauli word")
        if any(c not in (0, 1, 2, 3) for c in self.codes):
            raise PauliError(f"codes {self.codes} outside 0..3")

    @property
    def num_qubits(self) -> int:
        return len(self.codes)

    def masks(self) -> tuple[int, int, int]:
        """(X-mask, Z-mask, number of y factors); qubit 0 is the high bit."""
        q = len(self.codes)
        xmask = zmask = ny = 0
        for j, code in enumerate(self.codes):
            bit = 1 << (q - 1 - j)
            if code in (1, 2):
                xmask |= bit
            if code in (2, 3):
                zmask |= bit
            if code == 2:
                ny += 1
        return xmask, zmask, ny

    def __str__(self) -> str:
        return ".".join(PAULI_NAMES[c] for c in self.codes)


def apply(p: PauliString, s: PureState) -> PureState:
    """Apply the Pauli word to a state; the result is not renormalized."""
    if p.num_qubits != s.num_qubits:
        raise PauliError(f"Pauli word on {p.num_qubits} qubits, state on {s.num_qubits}")
    xmask, zmask, ny = p.masks()
    src = _INDICES[s.num_qubits] ^ xmask
    out = _I_POWERS[ny % 4] * _SIGN[src & zmask] * s.amplitudes[src]
    return PureState(s.num_qubits, _frozen_array(out), s.norm_sq, s.raw_norm_sq)


def _expect(amplitudes: np.ndarray, q: int, codes: tuple[int, ...]) -> complex:
    xmask = zmask = ny = 0
    for j, code in enumerate(codes):
        bit = 1 << (q - 1 - j)
        if code in (1, 2):
            xmask |= bit
        if code in (2, 3):
            zmask |= bit
        if code == 2:
            ny += 1
    conj = np.conj(amplitudes)
    src = _INDICES[q] ^ xmask
    return _I_POWERS[ny % 4] * complex(np.dot(conj * _SIGN[src & zmask], conj[src]))


class ExpectationCache:
    """Memo table of <psi|P|psi*> values bound to one specific state.

    Entries are only valid for the bound state; rebind() clears them.
    """

    def __init__(self, state: PureState):
        self.state = state
        self._table: dict[tuple[int, ...], complex] = {}

    def rebind(self, state: PureState) -> None:
        self.state = state
        self._table.clear()

    def __len__(self) -> int:
        return len(self._table)

    def expect(self, codes: tuple[int, ...]) -> complex:
        value = self._table.get(codes)
        if value is None:
            value = _expect(self.state.amplitudes, self.state.num_qubits, codes)
            self._table[codes] = value
        return value


def antilinear_expect(s: PureState, p: PauliString, cache: ExpectationCache | None = None) -> complex:
    """<psi|P|psi*>: conjugate the ket, apply P, contract with the bra."""
    if p.num_qubits != s.num_qubits:
        raise PauliError(f"Pauli word on {p.num_qubits} qubits, state on {s.num_qubits}")
    if cache is None:
        return _expect(s.amplitudes, s.num_qubits, p.codes)
    if cache.state is not s:
        raise PauliError("expectation cache is bound to a different state")
    return cache.expect(p.codes)


def verify_comb2(s: PureState) -> float:
    """Residual of the order-2 single-qubit comb identity.

    |sum_mu g_mu <sigma_mu>_C^2| with g = diag(-1,1,0,1); identically zero
    for every single-qubit state, so the return value is a pure roundoff
    measure.
    """
    if s.num_qubits != 1:
        raise PauliError("the order-2 comb identity is a single-qubit statement")
    total = 0.0 + 0.0j
    for mu, weight in enumerate(METRIC_DIAG):
        if weight == 0.0:
            continue
        val = _expect(s.amplitudes, 1, (mu,))
        total += weight * val * val
    return abs(total)
