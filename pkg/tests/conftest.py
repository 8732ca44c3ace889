"""Shared test helpers: dense oracles and random-structure generators."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from qcomb.filter_ir import Block, FilterDef, Fixed, Lower, Upper, validate
from qcomb.statevec import PureState

SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def dense_pauli(codes) -> np.ndarray:
    """Tensor product of Pauli matrices, built densely (test oracle only)."""
    out = np.array([[1.0 + 0.0j]])
    for c in codes:
        out = np.kron(out, SIGMA[c])
    return out


def dense_antilinear_expect(s: PureState, codes) -> complex:
    """<psi|P|psi*> straight from the dense matrix."""
    return complex(np.conj(s.amplitudes) @ dense_pauli(codes) @ np.conj(s.amplitudes))


def random_filter(
    rng: np.random.Generator,
    q: int | None = None,
    max_blocks: int = 4,
    max_pairs: int = 6,
    name: str = "R",
) -> FilterDef:
    """Random valid filter: fixed slots plus label pairs across distinct blocks."""
    q = int(rng.integers(1, 6)) if q is None else q
    n = int(rng.integers(1, max_blocks + 1))
    codes = rng.integers(0, 4, size=(n, q))
    slots: list[list] = [[Fixed(int(c)) for c in row] for row in codes]
    if n >= 2 and max_pairs > 0:
        free = [(b, j) for b in range(n) for j in range(q)]
        pairs = int(rng.integers(0, max_pairs + 1))
        for k in range(pairs):
            spots = [x for x in free]
            rng.shuffle(spots)
            chosen = None
            for i, first in enumerate(spots):
                for second in spots[i + 1 :]:
                    if second[0] != first[0]:
                        chosen = (first, second)
                        break
                if chosen:
                    break
            if chosen is None:
                break
            (b1, j1), (b2, j2) = chosen
            slots[b1][j1] = Lower(f"v{k}")
            slots[b2][j2] = Upper(f"v{k}")
            free.remove((b1, j1))
            free.remove((b2, j2))
    prefactor = Fraction(int(rng.integers(1, 4)), int(rng.integers(1, 5)))
    f = FilterDef(name, q, tuple(Block(tuple(row)) for row in slots), prefactor)
    return validate(f)


@pytest.fixture
def np_rng():
    return np.random.default_rng(20240901)
