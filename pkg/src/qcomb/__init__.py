"""Antilinear comb/filter entanglement monotones for 1-6 qubit pure states."""

__version__ = "0.1.0"


class QcombError(Exception):
    """Base class for all domain errors raised by this package."""
