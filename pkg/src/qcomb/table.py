"""Reference grid: the nine 4-6 qubit filters on their catalog states.

Expected constants are stored exactly (rational plus an optional rational
multiple of sqrt(3)) and only turned into floats at comparison time. The
length-7 state appears twice, once per normalization variant; see the
catalog notes on its printed prefactor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .evaluate import eval_planned
from .filter_ir import catalog as filter_catalog
from .states import catalog as state_catalog

DEFAULT_TABLE_TOL = 1e-9


@dataclass(frozen=True)
class ExactValue:
    """rational + sqrt3_coeff * sqrt(3), kept exact until rendered."""

    rational: Fraction = Fraction(0)
    sqrt3_coeff: Fraction = Fraction(0)

    def value(self) -> float:
        return float(self.rational) + float(self.sqrt3_coeff) * math.sqrt(3.0)

    def __str__(self) -> str:
        if self.sqrt3_coeff:
            c = self.sqrt3_coeff
            head = "sqrt(3)" if c.numerator == 1 else f"{c.numerator}*sqrt(3)"
            return head if c.denominator == 1 else f"{head}/{c.denominator}"
        r = self.rational
        return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


_ZERO = ExactValue()
_ONE = ExactValue(Fraction(1))

TABLE_FILTERS = ("F4_1", "F4_2", "F4_3", "F5_1", "F5_2", "F5_3", "F5_4", "F6_1", "F6_2")

TABLE_STATES = {
    4: ("phi1", "phi4", "phi5"),
    5: ("psi2", "psi4", "psi5", "psi6"),
    6: ("xi2", "xi4", "xi5", "xi6", "xi7", "xi7_printed"),
}

_EXPECTED: dict[tuple[str, str], ExactValue] = {}


def _fill(filter_name: str, expectations: dict[str, ExactValue]) -> None:
    for state_name, value in expectations.items():
        _EXPECTED[(filter_name, state_name)] = value


_fill("F4_1", {"phi1": _ONE, "phi4": _ZERO, "phi5": ExactValue(Fraction(8, 9))})
_fill("F4_2", {"phi1": _ONE, "phi4": _ZERO, "phi5": _ZERO})
_fill("F4_3", {"phi1": ExactValue(Fraction(1, 2)), "phi4": _ONE, "phi5": _ZERO})
_fill("F5_1", {"psi2": _ONE, "psi4": _ZERO, "psi5": _ZERO, "psi6": ExactValue(sqrt3_coeff=Fraction(3, 32))})
_fill("F5_2", {"psi2": _ONE, "psi4": _ZERO, "psi5": _ZERO, "psi6": _ZERO})
_fill("F5_3", {"psi2": _ONE, "psi4": _ZERO, "psi5": ExactValue(Fraction(2**6, 3**5)), "psi6": _ZERO})
_fill("F5_4", {"psi2": ExactValue(Fraction(1, 8)), "psi4": _ONE, "psi5": _ZERO, "psi6": _ZERO})
_fill("F6_1", {"xi2": _ONE, "xi4": _ZERO, "xi5": _ZERO, "xi6": _ZERO, "xi7": _ZERO, "xi7_printed": _ZERO})
_fill(
    "F6_2",
    {
        "xi2": _ONE,
        "xi4": _ZERO,
        "xi5": _ZERO,
        "xi6": _ZERO,
        # published length-7 constant; carried on both normalization variants
        "xi7": ExactValue(Fraction(2**8, 5**5)),
        "xi7_printed": ExactValue(Fraction(2**8, 5**5)),
    },
)


@dataclass(frozen=True)
class TableCell:
    filter_name: str
    state_name: str
    length: int
    variant: str  # "", "unit-norm", or "printed-prefactor"
    value: complex
    expected: ExactValue
    abs_error: float
    matches: bool

    @property
    def computed_abs(self) -> float:
        return abs(self.value)

    def as_dict(self) -> dict:
        return {
            "filter": self.filter_name,
            "state": self.state_name,
            "length": self.length,
            "variant": self.variant,
            "computed_re": self.value.real,
            "computed_im": self.value.imag,
            "computed_abs": self.computed_abs,
            "expected_abs": self.expected.value(),
            "expected_exact": str(self.expected),
            "abs_error": self.abs_error,
            "matches": self.matches,
        }


@dataclass(frozen=True)
class TableReport:
    cells: tuple[TableCell, ...]
    tol: float

    @property
    def all_match(self) -> bool:
        return all(c.matches for c in self.cells)

    def mismatches(self) -> tuple[TableCell, ...]:
        return tuple(c for c in self.cells if not c.matches)


def _variant(state_name: str) -> str:
    if state_name == "xi7":
        return "unit-norm"
    if state_name == "xi7_printed":
        return "printed-prefactor"
    return ""


def compute_table(tol: float = DEFAULT_TABLE_TOL, workers: int = 1) -> TableReport:
    """Evaluate every grid cell; a cell matches when |abs - expected| < tol."""
    fcat = filter_catalog()
    scat = state_catalog()
    jobs = []
    for filter_name in TABLE_FILTERS:
        f = fcat.get(filter_name)
        for state_name in TABLE_STATES[f.num_qubits]:
            jobs.append((f, state_name))

    def run(job) -> TableCell:
        f, state_name = job
        value = eval_planned(f, scat.get(state_name))
        expected = _EXPECTED[(f.name, state_name)]
        err = abs(abs(value) - expected.value())
        return TableCell(
            filter_name=f.name,
            state_name=state_name,
            length=scat.length(state_name),
            variant=_variant(state_name),
            value=value,
            expected=expected,
            abs_error=err,
            matches=bool(err < tol),
        )

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            cells = tuple(pool.map(run, jobs))
    else:
        cells = tuple(run(job) for job in jobs)
    return TableReport(cells, tol)


def render_csv(report: TableReport) -> str:
    lines = ["filter,state,length,computed_re,computed_im,computed_abs,expected_abs,abs_error"]
    for c in report.cells:
        lines.append(
            f"{c.filter_name},{c.state_name},{c.length},{c.value.real!r},{c.value.imag!r},"
            f"{c.computed_abs!r},{c.expected.value()!r},{c.abs_error!r}"
        )
    return "\n".join(lines) + "\n"


def render_json(report: TableReport) -> dict:
    return {
        "tol": report.tol,
        "all_match": report.all_match,
        "cells": [c.as_dict() for c in report.cells],
    }


def render_markdown(report: TableReport) -> str:
    """Grid by state length, one column per filter, as in the reference table."""
    lines = ["| length | " + " | ".join(TABLE_FILTERS) + " |"]
    lines.append("|---" * (len(TABLE_FILTERS) + 1) + "|")
    row_keys: list[tuple[int, str]] = [(2, ""), (4, ""), (5, ""), (6, ""), (7, "unit-norm"), (7, "printed-prefactor")]
    for length, variant in row_keys:
        label = str(length) if not variant else f"{length} ({variant})"
        cells = []
        for filter_name in TABLE_FILTERS:
            match = [
                c
                for c in report.cells
                if c.filter_name == filter_name and c.length == length and (length != 7 or c.variant == variant)
            ]
            if not match:
                cells.append("X")
            else:
                c = match[0]
                mark = "" if c.matches else " MISMATCH"
                cells.append(f"{c.computed_abs:.9f} ({c.expected}){mark}")
        lines.append(f"| {label} | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"
