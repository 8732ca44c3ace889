"""Named entanglement measures and the maximal-entanglement classifier.

Two-qubit concurrence comes in two filter forms (F2_1 and its square via
F2_2) plus the spin-flip convex-roof extension for mixed states. The
three-qubit tangle is evaluated through both filter forms and cross-checked
against the degree-4 hyperdeterminant polynomial of the amplitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import QcombError
from .evaluate import eval_planned
from .filter_ir import CONTRACTION_SIGNS, CONTRACTION_VALUES, catalog
from .statevec import (
    DensityMatrix,
    PureState,
    _frozen_array,
    hermitian_eig,
    numerical_rank,
    reduced_density,
)
from .states import RandomSource

RANK_TOL = 1e-10
DEFAULT_CLASSIFY_TOL = 1e-8
PHASE_TRIALS = 32

_SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
_YY = np.kron(_SIGMA[2], _SIGMA[2])


class MeasureError(QcombError):
    pass


def _require_qubits(s, q: int, what: str) -> None:
    if s.num_qubits != q:
        raise MeasureError(f"{what} needs {q} qubits, got {s.num_qubits}")


@dataclass(frozen=True)
class ConcurrenceReport:
    pure_value: float | None
    squared_value: float | None
    mixed_value: float | None = None

    def as_dict(self) -> dict:
        return {
            "pure_value": self.pure_value,
            "squared_value": self.squared_value,
            "mixed_value": self.mixed_value,
        }


def concurrence_pure(s: PureState) -> ConcurrenceReport:
    """Two-qubit pure-state concurrence in both filter forms."""
    _require_qubits(s, 2, "concurrence")
    if not s.is_normalized:
        raise MeasureError("concurrence_pure expects a unit-norm state")
    cat = catalog()
    return ConcurrenceReport(
        pure_value=abs(eval_planned(cat.get("F2_1"), s)),
        squared_value=abs(eval_planned(cat.get("F2_2"), s)),
    )


def _sqrt_psd(matrix: np.ndarray) -> np.ndarray:
    values, vectors = hermitian_eig(matrix)
    if float(np.min(values)) < -1e-10:
        raise MeasureError(f"matrix is not positive (eigenvalue {np.min(values):g})")
    roots = np.sqrt(np.clip(values, 0.0, None))
    return (vectors * roots) @ vectors.conj().T


def r_matrix(rho: DensityMatrix) -> np.ndarray:
    """Spin-flip matrix sqrt(rho) YY rho* YY sqrt(rho) of a two-qubit state."""
    _require_qubits(rho, 2, "r_matrix")
    sq = _sqrt_psd(rho.entries)
    return sq @ _YY @ np.conj(rho.entries) @ _YY @ sq


def _r_spectrum(rho: DensityMatrix) -> np.ndarray:
    values, _ = hermitian_eig(r_matrix(rho))
    values = np.clip(values, 0.0, None)
    # roundoff-floor eigenvalues would contribute sqrt(noise) ~ 1e-8
    values[values < 1e-13 * max(1.0, values[0])] = 0.0
    return values


def concurrence_mixed(rho: DensityMatrix) -> float:
    """Convex-roof concurrence from the spin-flip spectrum."""
    lam = np.sqrt(_r_spectrum(rho))
    return max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))


def q_matrix(rho: DensityMatrix) -> np.ndarray:
    """Fourth-order analogue of the spin-flip matrix.

    Sums sqrt(rho) P_a rho* P_b rho P_a rho* P_b sqrt(rho) over two-qubit
    Pauli words P with both tensor legs of each word metric-contracted
    between its two insertions (index values {0,1,3}, sign -1 for 0).
    """
    _require_qubits(rho, 2, "q_matrix")
    sq = _sqrt_psd(rho.entries)
    rc = np.conj(rho.entries)
    r = rho.entries
    words = []
    for i, mu in enumerate(CONTRACTION_VALUES):
        for j, nu in enumerate(CONTRACTION_VALUES):
            sign = CONTRACTION_SIGNS[i] * CONTRACTION_SIGNS[j]
            words.append((sign, np.kron(_SIGMA[mu], _SIGMA[nu])))
    total = np.zeros((4, 4), dtype=complex)
    for sign_a, pa in words:
        left = sq @ pa @ rc
        mid = pa @ rc
        for sign_b, pb in words:
            total += (sign_a * sign_b) * (left @ pb @ r @ mid @ pb @ sq)
    return total


def check_q_equals_r2(rho: DensityMatrix, tol: float = 1e-8) -> dict:
    """Least-squares comparison of the fourth-order matrix against R^2."""
    q = q_matrix(rho)
    r2 = r_matrix(rho)
    r2 = r2 @ r2
    denom = float(np.sum(np.abs(r2) ** 2))
    if denom == 0.0:
        scale = float(np.linalg.norm(q))
        return {"c": 0.0, "residual": scale, "pass": bool(scale < tol), "tol": tol}
    c = float(np.real(np.sum(np.conj(r2) * q)) / denom)
    residual = float(np.linalg.norm(q - c * r2) / np.linalg.norm(r2))
    return {"c": c, "residual": residual, "pass": bool(residual < tol), "tol": tol}


# --- three-qubit tangle -----------------------------------------------------


def cayley_tangle3(s: PureState) -> float:
    """Independent 3-tangle oracle: 4 |d1 - 2 d2 + 4 d3| from the amplitudes."""
    _require_qubits(s, 3, "tangle")
    a = s.amplitudes

    def amp(bits: str) -> complex:
        return a[int(bits, 2)]

    d1 = (
        amp("000") ** 2 * amp("111") ** 2
        + amp("001") ** 2 * amp("110") ** 2
        + amp("010") ** 2 * amp("101") ** 2
        + amp("100") ** 2 * amp("011") ** 2
    )
    d2 = (
        amp("000") * amp("111") * amp("011") * amp("100")
        + amp("000") * amp("111") * amp("101") * amp("010")
        + amp("000") * amp("111") * amp("110") * amp("001")
        + amp("011") * amp("100") * amp("101") * amp("010")
        + amp("011") * amp("100") * amp("110") * amp("001")
        + amp("101") * amp("010") * amp("110") * amp("001")
    )
    d3 = amp("000") * amp("110") * amp("101") * amp("011") + amp("111") * amp("001") * amp(
        "010"
    ) * amp("100")
    return float(4.0 * abs(d1 - 2.0 * d2 + 4.0 * d3))


@dataclass(frozen=True)
class Tangle3Report:
    via_first_form: float
    via_symmetric_form: float
    via_polynomial: float

    def as_dict(self) -> dict:
        return {
            "via_F3_1": self.via_first_form,
            "via_F3_2": self.via_symmetric_form,
            "via_polynomial": self.via_polynomial,
        }


def tangle3(s: PureState) -> Tangle3Report:
    """3-tangle through both filter forms and the polynomial oracle."""
    _require_qubits(s, 3, "tangle")
    if not s.is_normalized:
        raise MeasureError("tangle3 expects a unit-norm state")
    cat = catalog()
    return Tangle3Report(
        via_first_form=abs(eval_planned(cat.get("F3_1"), s)),
        via_symmetric_form=abs(eval_planned(cat.get("F3_2"), s)),
        via_polynomial=cayley_tangle3(s),
    )


# --- maximal-entanglement classifier ----------------------------------------


def _proper_subsets(q: int):
    out = []
    for mask in range(1, 2**q - 1):
        out.append(tuple(j for j in range(q) if mask >> j & 1))
    out.sort(key=lambda s: (len(s), s))
    return out


def _subset_spectra(s: PureState) -> dict[tuple[int, ...], np.ndarray]:
    return {sub: np.asarray(hermitian_eig(reduced_density(s, sub).entries)[0]) for sub in _proper_subsets(s.num_qubits)}


def _condition_i(spectra: dict, tol: float, rank_tol: float) -> dict:
    failures = []
    for sub, lam in spectra.items():
        nonzero = lam[lam > rank_tol]
        if len(nonzero) <= 2 and np.max(np.abs(nonzero - 0.5)) > tol:
            failures.append(list(sub))
    return {"pass": not failures, "failures": failures}


def _condition_i_strong(spectra: dict, tol: float, rank_tol: float) -> dict:
    failures = []
    for sub, lam in spectra.items():
        nonzero = lam[lam > rank_tol]
        if np.max(np.abs(nonzero - 1.0 / len(nonzero))) > tol:
            failures.append(list(sub))
    return {"pass": not failures, "failures": failures}


def _condition_ii(s: PureState, tol: float) -> dict:
    q = s.num_qubits
    pairs = []
    for sub in _proper_subsets(q):
        if len(sub) == 2:
            value = concurrence_mixed(reduced_density(s, sub))
            pairs.append({"subset": list(sub), "concurrence": value})
    not_evaluable = [p for p in range(3, q)]
    return {
        "pass": all(p["concurrence"] < tol for p in pairs),
        "pairs": pairs,
        "not_evaluable_p": not_evaluable,
        "note": "no operational mixed p-tangle for p >= 3" if not_evaluable else "",
    }


def _rephased(s: PureState, rng: RandomSource) -> PureState:
    amps = np.array(s.amplitudes)
    nonzero = np.flatnonzero(np.abs(amps) > 0)
    phases = np.exp(2j * math.pi * rng.uniforms(len(nonzero)))
    amps[nonzero] *= phases
    return PureState(s.num_qubits, _frozen_array(amps), s.norm_sq, s.raw_norm_sq)


@dataclass(frozen=True)
class MaxEntReport:
    state: str
    condition_i: dict
    condition_i_strong: dict
    condition_ii_p2: dict
    condition_iii: dict

    @property
    def passes_definition(self) -> bool:
        """Conditions (i), (ii) at p=2, and (iii) all hold."""
        return bool(
            self.condition_i["pass"] and self.condition_ii_p2["pass"] and self.condition_iii["pass"]
        )

    def as_dict(self) -> dict:
        return {
            "state": self.state,
            "condition_i": self.condition_i,
            "condition_i_strong": self.condition_i_strong,
            "condition_ii_p2": self.condition_ii_p2,
            "condition_iii": self.condition_iii,
        }


def classify_max_entanglement(
    s: PureState,
    tol: float = DEFAULT_CLASSIFY_TOL,
    name: str = "",
    seed: int = 202,
    rank_tol: float = RANK_TOL,
) -> MaxEntReport:
    """Scan every reduced density matrix of a pure state.

    (i) every reduction of rank <= 2 is maximally mixed; (i-strong) every
    reduction has a flat nonzero spectrum; (ii) every two-site reduction has
    zero mixed concurrence, with p >= 3 reported as not evaluable; (iii)
    conditions (i)+(ii) are unchanged when each basis component of the state
    picks up an independent random phase (32 seeded assignments).
    """
    if not 2 <= s.num_qubits <= 6:
        raise MeasureError(f"classifier supports 2..6 qubits, got {s.num_qubits}")
    if not s.is_normalized:
        raise MeasureError("classifier expects a unit-norm state")
    spectra = _subset_spectra(s)
    cond_i = _condition_i(spectra, tol, rank_tol)
    cond_i_strong = _condition_i_strong(spectra, tol, rank_tol)
    cond_ii = _condition_ii(s, tol)
    base_conc = {tuple(p["subset"]): p["concurrence"] for p in cond_ii["pairs"]}
    rng = RandomSource(seed)
    phase_pass = True
    worst = 0.0
    for trial in range(PHASE_TRIALS):
        rephased = _rephased(s, rng.spawn(trial))
        new_spectra = _subset_spectra(rephased)
        for sub, lam in spectra.items():
            worst = max(worst, float(np.max(np.abs(new_spectra[sub] - lam))))
        for sub, value in base_conc.items():
            worst = max(worst, abs(concurrence_mixed(reduced_density(rephased, sub)) - value))
        if worst > tol:
            phase_pass = False
            break
    return MaxEntReport(
        state=name,
        condition_i=cond_i,
        condition_i_strong=cond_i_strong,
        condition_ii_p2=cond_ii,
        condition_iii={"pass": phase_pass, "trials": PHASE_TRIALS, "worst_deviation": worst, "seed": seed},
    )
