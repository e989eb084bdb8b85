"""Numerical tolerances shared by every module.

Defaults live in :class:`Tolerances`.  Override them for a block of code with
:func:`tolerances`, which is backed by a context variable so concurrent
threads (or asyncio tasks) never see each other's overrides::

    with tolerances(unitarity=1e-8):
        spectrum(A)
"""

from __future__ import annotations

import contextlib
import contextvars
import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unitarity: float = 1e-10
    symmetry: float = 1e-10
    # angles within this distance of 0 (or 1) snap to 0
    angle_snap: float = 1e-9
    # two angles are one eigenvalue if their circular distance is below this
    cluster: float = 1e-7
    # eigenvalue clustering for simultaneous diagonalization
    simdiag_cluster: float = 1e-8
    takagi: float = 1e-9
    relation: float = 1e-8
    # singular value cutoff for real-linear nullspace computations
    rank: float = 1e-8
    index_integrality: float = 1e-8
    # singular-value ratio that counts as a rank gap
    gap_ratio: float = 1e4


_current: contextvars.ContextVar[Tolerances] = contextvars.ContextVar(
    "lagrep_tolerances", default=Tolerances()
)


def get_tolerances() -> Tolerances:
    return _current.get()


@contextlib.contextmanager
def tolerances(**overrides):
    """Temporarily override selected tolerances."""
    token = _current.set(dataclasses.replace(_current.get(), **overrides))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
