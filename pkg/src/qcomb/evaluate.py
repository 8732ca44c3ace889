"""Filter evaluation: per-block expectation tensors, a brute-force reference
sum, and a planned pairwise contraction that must agree with it.

The value of a filter on a state is

    prefactor * sum over label assignments in {0,1,3}^L of
        (product of metric signs, -1 per label assigned 0)
        * (product over blocks of <psi| block Pauli word |psi*>)

The brute-force path accumulates that sum in lexicographic assignment order;
the planned path contracts per-block tensors pairwise and applies the metric
sign once per contracted label.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import QcombError
from .filter_ir import CONTRACTION_SIGNS, CONTRACTION_VALUES, Fixed, FilterDef, validate
from .pauli import ExpectationCache
from .statevec import PureState

_SIGNS = np.array(CONTRACTION_SIGNS)


class EvalError(QcombError):
    pass


class QubitCountMismatchError(EvalError):
    pass


@dataclass(frozen=True)
class BlockTensor:
    """Expectation values of one block over all assignments of its labels.

    ``values`` has one length-3 axis per label (axis order = ``labels``),
    the axis index running over Pauli values (0, 1, 3).
    """

    block_index: int
    labels: tuple[str, ...]
    values: np.ndarray


def _check_match(f: FilterDef, s: PureState) -> None:
    if f.num_qubits != s.num_qubits:
        raise QubitCountMismatchError(
            f"filter {f.name} acts on {f.num_qubits} qubits, state has {s.num_qubits}"
        )


def block_tensor(f: FilterDef, i: int, s: PureState, cache: ExpectationCache) -> BlockTensor:
    """Tensor of <psi|block|psi*> over the block's free labels.

    Raised and lowered legs produce the same Pauli word; the metric sign is
    applied later, once per contracted pair.
    """
    _check_match(f, s)
    block = f.blocks[i]
    labels = block.labels
    fixed = [slot.code if isinstance(slot, Fixed) else None for slot in block.slots]
    label_slots = [j for j, code in enumerate(fixed) if code is None]
    values = np.empty((3,) * len(labels), dtype=complex)
    for digits in itertools.product(range(3), repeat=len(labels)):
        codes = list(fixed)
        for j, d in zip(label_slots, digits):
            codes[j] = CONTRACTION_VALUES[d]
        values[digits] = cache.expect(tuple(codes))
    values.setflags(write=False)
    return BlockTensor(i, labels, values)


def block_tensors(f: FilterDef, s: PureState, cache: ExpectationCache | None = None) -> list[BlockTensor]:
    if cache is None:
        cache = ExpectationCache(s)
    return [block_tensor(f, i, s, cache) for i in range(len(f.blocks))]


def eval_brute(f: FilterDef, s: PureState) -> complex:
    """Reference evaluation: explicit sum over all label assignments.

    Terms accumulate in lexicographic assignment order so results are
    reproducible bit for bit.
    """
    validate(f)
    _check_match(f, s)
    tensors = block_tensors(f, s)
    labels = f.labels
    position = {label: k for k, label in enumerate(labels)}
    # per block: flattened values plus (global label position, stride) pairs
    flats = []
    for t in tensors:
        k = len(t.labels)
        strides = [(position[lab], 3 ** (k - 1 - a)) for a, lab in enumerate(t.labels)]
        flats.append((t.values.ravel(), strides))
    total = 0.0 + 0.0j
    for digits in itertools.product(range(3), repeat=len(labels)):
        term = -1.0 if digits.count(0) % 2 else 1.0
        for values, strides in flats:
            idx = 0
            for pos, stride in strides:
                idx += digits[pos] * stride
            term = term * values[idx]
        total += term
    return complex(total * float(f.prefactor))


@dataclass(frozen=True)
class PlanStep:
    """Merge working tensors ``left`` and ``right``, contracting ``labels``."""

    left: int
    right: int
    labels: tuple[str, ...]
    cost: int


@dataclass(frozen=True)
class ContractionPlan:
    steps: tuple[PlanStep, ...]
    cost: int


def make_plan(f: FilterDef) -> ContractionPlan:
    """Greedy pairwise merge order, cheapest step first.

    The cost of merging two tensors is 3^(number of distinct labels on
    either), i.e. result size times contracted axis sizes. Merge results are
    appended to the working list, so step indices >= len(blocks) refer to
    intermediates in creation order.
    """
    validate(f)
    order = {label: k for k, label in enumerate(f.labels)}
    working: list[set[str] | None] = [set(b.labels) for b in f.blocks]
    steps: list[PlanStep] = []
    total = 0
    alive = list(range(len(working)))
    while len(alive) > 1:
        best = None
        for a, i in enumerate(alive):
            for j in alive[a + 1 :]:
                union = working[i] | working[j]  # type: ignore[operator]
                key = (3 ** len(union), i, j)
                if best is None or key < best[0]:
                    best = (key, i, j)
        assert best is not None
        (cost, _, _), i, j = best
        shared = working[i] & working[j]  # type: ignore[operator]
        merged = (working[i] | working[j]) - shared  # type: ignore[operator]
        steps.append(PlanStep(i, j, tuple(sorted(shared, key=order.__getitem__)), cost))
        total += cost
        working[i] = None
        working[j] = None
        working.append(merged)
        alive = [k for k in alive if working[k] is not None] + [len(working) - 1]
    return ContractionPlan(tuple(steps), total)


def _contract(left: BlockTensor, right: BlockTensor, labels: tuple[str, ...]) -> BlockTensor:
    lvals, rvals = left.values, right.values
    laxes, raxes = [], []
    for lab in labels:
        la = left.labels.index(lab)
        laxes.append(la)
        raxes.append(right.labels.index(lab))
        # metric sign, attached once per contracted pair
        shape = [1] * lvals.ndim
        shape[la] = 3
        lvals = lvals * _SIGNS.reshape(shape)
    out = np.tensordot(lvals, rvals, axes=(laxes, raxes)) if labels else np.tensordot(lvals, rvals, axes=0)
    keep_left = tuple(lab for lab in left.labels if lab not in labels)
    keep_right = tuple(lab for lab in right.labels if lab not in labels)
    return BlockTensor(-1, keep_left + keep_right, np.asarray(out))


def eval_planned(f: FilterDef, s: PureState, cache: ExpectationCache | None = None) -> complex:
    """Evaluate via the greedy contraction plan; agrees with eval_brute."""
    validate(f)
    _check_match(f, s)
    plan = make_plan(f)
    working: list[BlockTensor | None] = list(block_tensors(f, s, cache))
    for step in plan.steps:
        left = working[step.left]
        right = working[step.right]
        assert left is not None and right is not None
        working[step.left] = None
        working[step.right] = None
        working.append(_contract(left, right, step.labels))
    last = working[-1]
    assert last is not None and last.values.ndim == 0
    return complex(last.values[()]) * float(f.prefactor)


def measure(f: FilterDef, s: PureState) -> float:
    """Modulus of the filter value (the monotone itself)."""
    return abs(eval_planned(f, s))
