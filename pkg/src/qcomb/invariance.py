"""Numerical verification of the defining filter properties.

Filters vanish on every product state, are exactly invariant (as complex
numbers) under determinant-one local operations, and some are permutation
invariant. Each check samples deterministic trials: trial i draws from an
independent sub-stream seeded with seed XOR i, so trials can run in any
order or in parallel without changing the report.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import QcombError
from .evaluate import eval_planned
from .filter_ir import FilterDef, permute_qubits, validate
from .pauli import ExpectationCache
from .statevec import PureState, _frozen_array
from .states import RandomSource, random_product

DET_ONE_TOL = 1e-12
UNITARY_TOL = 1e-12
DEFAULT_SL_TOL = 1e-8
DEFAULT_PRODUCT_TOL = 1e-10
DET_RESAMPLE_FLOOR = 0.1

# filters whose printed form is symmetric under every qubit permutation
PERMUTATION_INVARIANT_NAMES = frozenset({"F2_2", "F3_2"})


class LocalOperatorError(QcombError):
    pass


def _run_trials(count: int, trial, workers: int) -> list:
    """Run independent trials, optionally on a thread pool.

    Results come back in trial order either way, and every trial draws from
    its own sub-stream, so the worker count never changes the report.
    """
    if workers <= 1:
        return [trial(i) for i in range(count)]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(trial, range(count)))


@dataclass(frozen=True)
class LocalOperator:
    """One 2x2 matrix per qubit, tagged det-one or unitary."""

    matrices: tuple[np.ndarray, ...]
    kind: str  # "det-one" | "unitary"

    def __post_init__(self):
        for j, m in enumerate(self.matrices):
            if m.shape != (2, 2):
                raise LocalOperatorError(f"matrix {j} has shape {m.shape}")
            if self.kind == "det-one":
                det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
                if abs(det - 1.0) > DET_ONE_TOL:
                    raise LocalOperatorError(f"matrix {j} has det {det}, expected 1")
            elif self.kind == "unitary":
                if np.max(np.abs(m.conj().T @ m - np.eye(2))) > UNITARY_TOL:
                    raise LocalOperatorError(f"matrix {j} is not unitary within 1e-12")
            else:
                raise LocalOperatorError(f"unknown kind {self.kind!r}")

    @property
    def num_qubits(self) -> int:
        return len(self.matrices)


def random_det_one(q: int, rng: RandomSource) -> LocalOperator:
    """Per-qubit invertible matrices scaled to determinant one.

    Entries start uniform in the complex unit square; draws with |det| below
    0.1 are rejected so the rescale by the principal root of det stays well
    conditioned.
    """
    mats = []
    for _ in range(q):
        while True:
            m = rng.complex_square((2, 2))
            det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
            if abs(det) >= DET_RESAMPLE_FLOOR:
                break
        m = m / np.sqrt(det)
        m.setflags(write=False)
        mats.append(m)
    return LocalOperator(tuple(mats), "det-one")


def random_local_unitary(q: int, rng: RandomSource) -> LocalOperator:
    """Per-qubit unitaries: Gram-Schmidt of two random vectors, det fixed to 1."""
    mats = []
    for _ in range(q):
        a = rng.complex_gaussians(2)
        b = rng.complex_gaussians(2)
        a = a / np.linalg.norm(a)
        b = b - np.vdot(a, b) * a
        b = b / np.linalg.norm(b)
        u = np.column_stack([a, b])
        det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
        u = u / np.sqrt(det)
        u.setflags(write=False)
        mats.append(u)
    return LocalOperator(tuple(mats), "unitary")


def apply_local(op: LocalOperator, s: PureState) -> PureState:
    """Transform amplitudes by the tensor product of the per-qubit matrices.

    The norm is deliberately not restored: filter invariance is an exact
    statement about unnormalized vectors.
    """
    q = s.num_qubits
    if op.num_qubits != q:
        raise LocalOperatorError(f"operator on {op.num_qubits} qubits, state on {q}")
    tensor = s.amplitudes.reshape([2] * q)
    for j, m in enumerate(op.matrices):
        tensor = np.moveaxis(np.tensordot(m, tensor, axes=(1, j)), 0, j)
    return PureState.from_amplitudes(_frozen_array(tensor.reshape(-1)))


def _deviation(value: complex, base: complex) -> float:
    return abs(value - base) / max(1.0, abs(base))


def check_sl_invariance(
    f: FilterDef,
    s: PureState,
    trials: int = 200,
    seed: int = 0,
    tol: float = DEFAULT_SL_TOL,
    workers: int = 1,
) -> dict:
    """Compare the complex filter value before and after random det-one maps."""
    validate(f)
    rng = RandomSource(seed)
    base = eval_planned(f, s)

    def trial(i: int) -> float:
        op = random_det_one(s.num_qubits, rng.spawn(i))
        return _deviation(eval_planned(f, apply_local(op, s)), base)

    deviations = _run_trials(trials, trial, workers)
    worst = max(deviations, default=0.0)
    worst_trial = deviations.index(worst) if deviations else -1
    return {
        "filter": f.name,
        "check": "slocc",
        "trials": trials,
        "seed": seed,
        "tol": tol,
        "base_value": [base.real, base.imag],
        "worst_deviation": worst,
        "worst_trial": worst_trial,
        "pass": bool(worst < tol),
    }


def set_partitions(positions: tuple[int, ...]) -> list[list[tuple[int, ...]]]:
    """All partitions of the given positions into unordered nonempty blocks."""
    if not positions:
        return [[]]
    head, rest = positions[0], positions[1:]
    out = []
    for sub in set_partitions(rest):
        out.append([(head,)] + sub)
        for k, block in enumerate(sub):
            out.append(sub[:k] + [tuple(sorted((head,) + block))] + sub[k + 1 :])
    return out


def product_partitions(q: int) -> list[list[tuple[int, ...]]]:
    """Partitions a product state can factor over: at least two blocks.

    For a single qubit every state is trivially a product, so the one-block
    partition is kept there (it is how the order-1 comb property is swept).
    """
    parts = set_partitions(tuple(range(q)))
    if q == 1:
        return parts
    return [p for p in parts if len(p) >= 2]


def check_product_vanishing(
    f: FilterDef,
    trials: int = 1000,
    seed: int = 0,
    tol: float = DEFAULT_PRODUCT_TOL,
    workers: int = 1,
) -> dict:
    """Sample product states across every partition shape; all values must vanish."""
    validate(f)
    rng = RandomSource(seed)
    partitions = product_partitions(f.num_qubits)

    def trial(i: int) -> float:
        state = random_product(partitions[i % len(partitions)], rng.spawn(i))
        return abs(eval_planned(f, state))

    values = _run_trials(trials, trial, workers)
    worst = max(values, default=0.0)
    worst_trial = values.index(worst) if values else -1
    return {
        "filter": f.name,
        "check": "product",
        "trials": trials,
        "seed": seed,
        "tol": tol,
        "partition_shapes": len(partitions),
        "worst_deviation": worst,
        "worst_trial": worst_trial,
        "pass": bool(worst < tol),
    }


def check_permutation_invariance(f: FilterDef, s: PureState, tol: float = 1e-9) -> dict:
    """Evaluate under every qubit permutation of the state; report distinct values.

    Only the explicitly symmetric filters assert a single value; for the
    rest the distinct-value count is diagnostic.
    """
    validate(f)
    q = f.num_qubits
    values = []
    # permuting the filter slots instead of the state visits the same value
    # multiset and lets every evaluation share one expectation cache
    cache = ExpectationCache(s)
    for perm in itertools.permutations(range(q)):
        values.append(eval_planned(permute_qubits(f, perm), s, cache))
    distinct: list[complex] = []
    for v in values:
        if not any(abs(v - d) <= tol * max(1.0, abs(d)) for d in distinct):
            distinct.append(v)
    must_be_single = f.name in PERMUTATION_INVARIANT_NAMES
    spread = max(abs(v - values[0]) for v in values)
    return {
        "filter": f.name,
        "check": "perm",
        "trials": len(values),
        "tol": tol,
        "distinct_values": [[v.real, v.imag] for v in distinct],
        "worst_deviation": spread if must_be_single else 0.0,
        "pass": bool(len(distinct) == 1) if must_be_single else None,
    }
