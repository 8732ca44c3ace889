"""Pure states and density matrices for small qubit registers.

Basis convention: a computational basis label is the bitstring b[0]b[1]...,
with qubit 0 the leftmost (most significant) bit, so |b> sits at index
int(b, 2) of the amplitude vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import QcombError

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
DEFAULT_RANK_TOL = 1e-10
JACOBI_OFF_TOL = 1e-13
MAX_QUBITS = 8


class StateError(QcombError):
    """Malformed state construction or state file."""


class NonHermitianError(QcombError):
    """Matrix handed to the eigensolver is not Hermitian within tolerance."""


class JacobiConvergenceError(QcombError):
    """Cyclic Jacobi sweep limit exceeded."""


def _frozen_array(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Complex amplitude vector over ``num_qubits`` qubits.

    ``norm_sq`` caches the squared norm of ``amplitudes``. ``raw_norm_sq``
    records the squared norm a constructor saw *before* renormalizing (it is
    None for states that were never renormalized).
    """

    num_qubits: int
    amplitudes: np.ndarray
    norm_sq: float
    raw_norm_sq: float | None = None

    def __post_init__(self):
        if self.num_qubits < 1:
            raise StateError(f"need at least one qubit, got {self.num_qubits}")
        if self.amplitudes.shape != (2**self.num_qubits,):
            raise StateError(
                f"amplitude vector of length {self.amplitudes.shape} does not match "
                f"{self.num_qubits} qubits"
            )
        actual = float(np.sum(np.abs(self.amplitudes) ** 2))
        if abs(actual - self.norm_sq) > NORM_TOL * max(1.0, actual):
            raise StateError(f"cached norm_sq {self.norm_sq} is stale (actual {actual})")

    @classmethod
    def from_amplitudes(cls, amplitudes, raw_norm_sq: float | None = None) -> "PureState":
        amps = _frozen_array(amplitudes)
        q = int(round(math.log2(amps.size)))
        if 2**q != amps.size:
            raise StateError(f"amplitude vector length {amps.size} is not a power of two")
        norm_sq = float(np.sum(np.abs(amps) ** 2))
        return cls(q, amps, norm_sq, raw_norm_sq)

    @property
    def is_normalized(self) -> bool:
        return abs(self.norm_sq - 1.0) < 1e-12

    def normalized(self) -> "PureState":
        """Unit-norm copy; remembers this state's norm in ``raw_norm_sq``."""
        if self.norm_sq == 0.0:
            raise StateError("cannot normalize the zero vector")
        amps = self.amplitudes / math.sqrt(self.norm_sq)
        return PureState(self.num_qubits, _frozen_array(amps), 1.0, self.norm_sq)


def _parse_bitstring(bits: str, q: int) -> int:
    if len(bits) != q or any(c not in "01" for c in bits):
        raise StateError(f"bad basis label {bits!r} for {q} qubits")
    return int(bits, 2)


def make_state(q: int, entries: Iterable[tuple[str, complex]]) -> PureState:
    """Unit-normalized state from (bitstring, coefficient) pairs.

    The squared norm of the raw coefficients is kept on the result as
    ``raw_norm_sq`` so printed prefactors stay auditable.
    """
    amps = np.zeros(2**q, dtype=complex)
    seen = set()
    for bits, coeff in entries:
        idx = _parse_bitstring(bits, q)
        if idx in seen:
            raise StateError(f"duplicate basis label {bits!r}")
        seen.add(idx)
        amps[idx] = coeff
    raw = float(np.sum(np.abs(amps) ** 2))
    if raw == 0.0:
        raise StateError("all coefficients are zero")
    return PureState(q, _frozen_array(amps / math.sqrt(raw)), 1.0, raw)


def conjugate(s: PureState) -> PureState:
    """Complex-conjugate every amplitude (an involution)."""
    return PureState(s.num_qubits, _frozen_array(np.conj(s.amplitudes)), s.norm_sq, s.raw_norm_sq)


def permute_state(s: PureState, perm: Sequence[int]) -> PureState:
    """Relabel qubits: the qubit at position j moves to position perm[j]."""
    q = s.num_qubits
    if sorted(perm) != list(range(q)):
        raise StateError(f"{list(perm)} is not a permutation of 0..{q - 1}")
    tensor = s.amplitudes.reshape([2] * q)
    # axis i of the result is the old axis j with perm[j] == i
    inverse = [0] * q
    for j, p in enumerate(perm):
        inverse[p] = j
    out = np.transpose(tensor, inverse).reshape(-1)
    return PureState(q, _frozen_array(out), s.norm_sq, s.raw_norm_sq)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite matrix on ``num_qubits`` qubits."""

    num_qubits: int
    entries: np.ndarray

    def __post_init__(self):
        dim = 2**self.num_qubits
        if self.entries.shape != (dim, dim):
            raise StateError(f"entries shape {self.entries.shape} does not match {self.num_qubits} qubits")
        if np.max(np.abs(self.entries - self.entries.conj().T)) > HERMITICITY_TOL:
            raise StateError("matrix is not Hermitian within 1e-12")
        tr = complex(np.trace(self.entries))
        if abs(tr - 1.0) > 1e-12:
            raise StateError(f"trace {tr} differs from 1 beyond 1e-12")
        # Gershgorin lower bound first; diagonalize only when inconclusive
        diag = np.real(np.diag(self.entries))
        radii = np.sum(np.abs(self.entries), axis=1) - np.abs(np.diag(self.entries))
        if float(np.min(diag - radii)) < EIGENVALUE_FLOOR:
            if float(np.min(hermitian_spectrum_raw(self.entries))) < EIGENVALUE_FLOOR:
                raise StateError("matrix has an eigenvalue below -1e-10")

    @classmethod
    def from_entries(cls, entries) -> "DensityMatrix":
        arr = _frozen_array(entries)
        q = int(round(math.log2(arr.shape[0])))
        return cls(q, arr)


def to_density(s: PureState) -> DensityMatrix:
    """Rank-1 projector of a unit-norm pure state."""
    if not s.is_normalized:
        raise StateError("to_density requires a unit-norm state")
    rho = np.outer(s.amplitudes, np.conj(s.amplitudes))
    return DensityMatrix(s.num_qubits, _frozen_array(rho))


def validate_subset(positions: Sequence[int], num_qubits: int, *, proper: bool = True) -> tuple[int, ...]:
    """Check an ordered qubit subset: strictly increasing, nonempty, in range."""
    subset = tuple(positions)
    if not subset:
        raise StateError("qubit subset is empty")
    if any(p < 0 or p >= num_qubits for p in subset):
        raise StateError(f"subset {subset} out of range for {num_qubits} qubits")
    if any(a >= b for a, b in zip(subset, subset[1:])):
        raise StateError(f"subset {subset} is not strictly increasing")
    if proper and len(subset) == num_qubits:
        raise StateError("subset must be proper for a partial trace")
    return subset


_LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


def partial_trace(rho: DensityMatrix, keep: Sequence[int]) -> DensityMatrix:
    """Trace out every qubit not in ``keep`` (kept qubits stay in ascending order)."""
    q = rho.num_qubits
    subset = validate_subset(keep, q, proper=True)
    tensor = rho.entries.reshape([2] * (2 * q))
    row = list(_LETTERS[:q])
    col = list(_LETTERS[q : 2 * q])
    for j in range(q):
        if j not in subset:
            col[j] = row[j]
    out = "".join(row[j] for j in subset) + "".join(col[j] for j in subset)
    reduced = np.einsum("".join(row) + "".join(col) + "->" + out, tensor)
    k = len(subset)
    return DensityMatrix(k, _frozen_array(reduced.reshape(2**k, 2**k)))


def reduced_density(s: PureState, keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state, without building the full projector."""
    q = s.num_qubits
    subset = validate_subset(keep, q, proper=True)
    traced = [j for j in range(q) if j not in subset]
    tensor = s.amplitudes.reshape([2] * q)
    psi = np.transpose(tensor, list(subset) + traced).reshape(2 ** len(subset), -1)
    rho = psi @ psi.conj().T
    return DensityMatrix(len(subset), _frozen_array(rho))


def hermitian_eig(matrix: np.ndarray, *, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Self-contained (no LAPACK): each rotation annihilates one off-diagonal
    entry with a complex Givens rotation; sweeps repeat until the
    off-diagonal Frobenius norm drops below 1e-13 (or the roundoff floor of
    the input scale). Returns eigenvalues in descending order and the
    matching eigenvector columns.
    """
    a = np.array(matrix, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise NonHermitianError(f"matrix shape {a.shape} is not square")
    scale = float(np.linalg.norm(a))
    if np.max(np.abs(a - a.conj().T)) > 1e-10 * max(1.0, scale):
        raise NonHermitianError("matrix is not Hermitian within tolerance")
    a = (a + a.conj().T) / 2.0
    v = np.eye(n, dtype=complex)
    if n == 1:
        return np.array([a[0, 0].real]), v
    floor = 8 * n * np.finfo(float).eps * max(1.0, scale)
    converged = False
    off = 0.0
    offdiag_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a[offdiag_mask]))
        if off < JACOBI_OFF_TOL or off < floor:
            converged = True
            break
        skip = off * 1e-16
        for p in range(n - 1):
            for r in range(p + 1, n):
                b = a[p, r]
                if abs(b) <= skip:
                    continue
                alpha = a[p, p].real
                gamma = a[r, r].real
                mag = abs(b)
                phase = b / mag
                tau = (alpha - gamma) / (2.0 * mag)
                t = -math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                u = np.array([[c * phase, s * phase], [-s, c]], dtype=complex)
                a[[p, r], :] = u.conj().T @ a[[p, r], :]
                a[:, [p, r]] = a[:, [p, r]] @ u
                v[:, [p, r]] = v[:, [p, r]] @ u
                a[p, r] = 0.0
                a[r, p] = 0.0
                a[p, p] = a[p, p].real
                a[r, r] = a[r, r].real
    if not converged:
        raise JacobiConvergenceError(f"no convergence after {max_sweeps} sweeps (off-diagonal {off:g})")
    eigenvalues = np.real(np.diag(a))
    order = np.argsort(-eigenvalues)
    return eigenvalues[order], v[:, order]


def hermitian_spectrum_raw(matrix: np.ndarray) -> np.ndarray:
    """Descending real eigenvalues of a Hermitian ndarray."""
    values, _ = hermitian_eig(matrix)
    return values


def hermitian_spectrum(rho: DensityMatrix) -> np.ndarray:
    """Descending eigenvalues of a density matrix."""
    return hermitian_spectrum_raw(rho.entries)


def numerical_rank(rho: DensityMatrix, tol: float = DEFAULT_RANK_TOL) -> int:
    """Number of eigenvalues above ``tol``."""
    if tol <= 0:
        raise StateError("rank tolerance must be positive")
    return int(np.sum(hermitian_spectrum(rho) > tol))


# --- state file format ----------------------------------------------------
#
# UTF-8 text: first line "qubits: <q>", then one line per nonzero amplitude
# "<bitstring> <re> <im>". "#" starts a comment. The loader renormalizes and
# keeps the raw squared norm on the returned state.


def parse_state_text(text: str) -> PureState:
    q = None
    entries: list[tuple[str, complex]] = []
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if q is None:
            if not line.startswith("qubits:"):
                raise StateError(f"line {lineno}: expected 'qubits: <q>' header")
            try:
                q = int(line.removeprefix("qubits:").strip())
            except ValueError:
                raise StateError(f"line {lineno}: bad qubit count {line!r}") from None
            if not 1 <= q <= MAX_QUBITS:
                raise StateError(f"line {lineno}: qubit count {q} outside 1..{MAX_QUBITS}")
            continue
        parts = line.split()
        if len(parts) != 3:
            raise StateError(f"line {lineno}: expected '<bitstring> <re> <im>'")
        try:
            value = complex(float(parts[1]), float(parts[2]))
        except ValueError:
            raise StateError(f"line {lineno}: bad amplitude in {line!r}") from None
        entries.append((parts[0], value))
    if q is None:
        raise StateError("missing 'qubits:' header")
    try:
        return make_state(q, entries)
    except StateError as exc:
        raise StateError(f"state file: {exc}") from None


def load_state(path: str) -> PureState:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_state_text(fh.read())


def format_state(s: PureState) -> str:
    """Render a state in the text format accepted by the loader."""
    lines = [f"qubits: {s.num_qubits}"]
    for idx, amp in enumerate(s.amplitudes):
        if amp != 0:
            bits = format(idx, f"0{s.num_qubits}b")
            lines.append(f"{bits} {float(amp.real)!r} {float(amp.imag)!r}")
    return "\n".join(lines) + "\n"


# Density matrices use the same style: "qubits: <q>" then one line per
# nonzero entry "<row_bits> <col_bits> <re> <im>". Every entry must be
# given explicitly and the result must be a valid density matrix.


def parse_density_text(text: str) -> DensityMatrix:
    q = None
    entries: np.ndarray | None = None
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if q is None:
            if not line.startswith("qubits:"):
                raise StateError(f"line {lineno}: expected 'qubits: <q>' header")
            q = int(line.removeprefix("qubits:").strip())
            if not 1 <= q <= MAX_QUBITS:
                raise StateError(f"line {lineno}: qubit count {q} outside 1..{MAX_QUBITS}")
            entries = np.zeros((2**q, 2**q), dtype=complex)
            continue
        parts = line.split()
        if len(parts) != 4:
            raise StateError(f"line {lineno}: expected '<row_bits> <col_bits> <re> <im>'")
        row = _parse_bitstring(parts[0], q)
        col = _parse_bitstring(parts[1], q)
        entries[row, col] = complex(float(parts[2]), float(parts[3]))
    if q is None or entries is None:
        raise StateError("missing 'qubits:' header")
    return DensityMatrix(q, _frozen_array(entries))


def load_density(path: str) -> DensityMatrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_density_text(fh.read())
