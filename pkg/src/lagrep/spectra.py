"""Eigenvalue data of representations: spectrum tuples and their strata.

Row indices (``s``, the set ``z``) are 0-based.  Positions inside a row, as
used by brackets such as ``[2,1,1]`` and by :class:`PartitionSelection`, are
1-based to match the usual bracket notation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import get_tolerances
from .numerics import cluster_angles


@dataclass(frozen=True, eq=False)
class SpectrumTuple:
    """``ell x n`` angles, each row ascending in ``[0, 1)``."""

    alpha: np.ndarray

    def __post_init__(self):
        a = np.array(self.alpha, dtype=float)
        if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError(f"alpha must be a non-empty ell x n array, got shape {a.shape}")
        if np.any(a < 0.0) or np.any(a >= 1.0):
            raise ValueError("angles must lie in [0, 1)")
        if np.any(np.diff(a, axis=1) < 0.0):
            raise ValueError("each row of alpha must be ascending")
        a.setflags(write=False)
        object.__setattr__(self, "alpha", a)

    @property
    def ell(self):
        return self.alpha.shape[0]

    @property
    def n(self):
        return self.alpha.shape[1]

    def __eq__(self, other):
        return isinstance(other, SpectrumTuple) and np.array_equal(self.alpha, other.alpha)

    def __hash__(self):
        return hash(self.alpha.tobytes())


@dataclass(frozen=True)
class MultiplicityStructure:
    """Per-row breakpoints ``0 = m_0 < ... < m_l = n`` and the zero set ``z``."""

    partitions: tuple
    z: frozenset

    @property
    def lengths(self):
        return tuple(len(p) - 1 for p in self.partitions)

    @property
    def multiplicities(self):
        return tuple(tuple(np.diff(p).tolist()) for p in self.partitions)

    @property
    def n(self):
        return self.partitions[0][-1]

    @classmethod
    def generic(cls, n, ell):
        return cls(tuple(tuple(range(n + 1)) for _ in range(ell)), frozenset())


@dataclass(frozen=True)
class PartitionSelection:
    """One set of 1-based positions per row, all of the same size ``k``."""

    subsets: tuple

    def __post_init__(self):
        subsets = tuple(frozenset(int(j) for j in s) for s in self.subsets)
        if len({len(s) for s in subsets}) > 1:
            raise ValueError("all subsets of a selection must have the same size")
        object.__setattr__(self, "subsets", subsets)

    @property
    def k(self):
        return len(self.subsets[0])

    @classmethod
    def bracket(cls, positions):
        return cls(tuple({j} for j in positions))

    def complement(self, n):
        full = frozenset(range(1, n + 1))
        return PartitionSelection(tuple(full - s for s in self.subsets))


class Feasibility(NamedTuple):
    feasible: bool
    violated: list


def index(a):
    """Sum of all angles of the tuple."""
    return float(np.sum(a.alpha))


def integer_index(a, tol=None):
    """The index rounded to an integer, or ``None`` when it is not integral."""
    tol = get_tolerances().index_integrality if tol is None else tol
    I = index(a)
    k = round(I)
    return int(k) if abs(I - k) <= tol else None


def normalize(raw):
    """Canonical tuple from an ``ell x n`` array with entries in ``[0, 1]``.

    Rows are sorted and entries equal to 1 become leading zeros.
    """
    raw = np.array(raw, dtype=float)
    if raw.ndim != 2:
        raise ValueError("expected an ell x n array")
    if np.any(raw < 0.0) or np.any(raw > 1.0):
        raise ValueError("entries must lie in [0, 1]")
    snap = get_tolerances().angle_snap
    out = np.where(raw >= 1.0 - snap, 0.0, raw)
    return SpectrumTuple(np.sort(out, axis=1))


def multiplicity_structure(a, tol=None):
    partitions, z = [], set()
    for s, row in enumerate(a.alpha):
        clusters = cluster_angles(row, tol)
        partitions.append(tuple(np.concatenate([[0], np.cumsum([m for _, m in clusters])]).tolist()))
        if clusters[0][0] == 0.0:
            z.add(s)
    return MultiplicityStructure(tuple(partitions), frozenset(z))


def collapse_drop(m, s0):
    """Size of the top cluster of row ``s0``: the index lost when it reaches 1."""
    p = m.partitions[s0]
    return p[-1] - p[-2]


def collapse_top(a, m, s0):
    """Send the top cluster of row ``s0`` to 1 and renormalize.

    Returns the new tuple and the multiplicity structure given by the
    collapse rules: the top cluster becomes a zero cluster, merging with an
    existing one when ``s0`` is already in ``z``.  The index of the limit
    point (top cluster at 1) drops by :func:`collapse_drop`.
    """
    if not 0 <= s0 < a.ell:
        raise ValueError(f"row {s0} out of range for ell = {a.ell}")
    p = list(m.partitions[s0])
    l = len(p) - 1
    mu = p[-1] - p[-2]
    if l == 1 and s0 in m.z:
        raise ValueError("row has no nonzero cluster to collapse")
    n = a.n
    alpha = np.array(a.alpha)
    alpha[s0, p[-2]:] = 1.0
    new_a = normalize(alpha)

    if s0 in m.z:
        new_p = [0] + [p[i] + mu for i in range(1, l)]
        new_z = set(m.z)
    else:
        new_p = [0, mu] + [p[i] + mu for i in range(1, l)]
        new_z = set(m.z) | {s0}
    assert new_p[-1] == n
    partitions = list(m.partitions)
    partitions[s0] = tuple(new_p)
    return new_a, MultiplicityStructure(tuple(partitions), frozenset(new_z))


def relative_index(a, p):
    if len(p.subsets) != a.ell:
        raise ValueError(f"selection has {len(p.subsets)} rows, tuple has {a.ell}")
    total = 0.0
    for s, subset in enumerate(p.subsets):
        if any(not 1 <= j <= a.n for j in subset):
            raise ValueError("selection position out of range")
        total += sum(a.alpha[s, j - 1] for j in subset)
    return float(total)


def bracket(a, positions):
    """``[i_1, ..., i_ell]`` evaluated on ``a`` (1-based positions)."""
    return float(sum(a.alpha[s, i - 1] for s, i in enumerate(positions)))


def bracket_name(positions, op, K):
    return "[" + ",".join(str(i) for i in positions) + f"]{op}{K}"


# Inequality families for ell = 3 with distinct nonzero angles, keyed by index.
# Each entry (positions, op, K) stands for itself and all its permutations.
U2_FAMILIES = {
    2: [((2, 1, 1), "<=", 1)],
    3: [((2, 2, 1), "<=", 2), ((2, 2, 2), ">=", 2)],
    4: [((2, 1, 1), "<=", 2)],
}

U3_FAMILIES = {
    3: [
        ((3, 1, 1), "<=", 1),
        ((2, 2, 1), "<=", 1),
        ((3, 3, 1), ">=", 1),
        ((3, 2, 2), ">=", 1),
        # dual of [2,1,1] >= 1 at I = 6; the reversed inequality fails on
        # realizable tuples such as three copies of (1/12, 4/12, 7/12)
        ((3, 3, 2), "<=", 2),
    ],
    4: [
        ((2, 1, 1), "<=", 1),
        ((3, 2, 1), ">=", 1),
        ((2, 2, 2), ">=", 1),
        ((3, 3, 1), "<=", 2),
        ((3, 2, 2), "<=", 2),
        ((3, 3, 3), ">=", 2),
    ],
    5: [
        ((1, 1, 1), "<=", 1),
        ((2, 2, 1), ">=", 1),
        ((3, 1, 1), ">=", 1),
        ((3, 2, 1), "<=", 2),
        ((2, 2, 2), "<=", 2),
        ((3, 3, 2), ">=", 2),
    ],
    6: [
        ((2, 1, 1), ">=", 1),
        ((3, 1, 1), "<=", 2),
        ((2, 2, 1), "<=", 2),
        ((3, 3, 1), ">=", 2),
        ((3, 2, 2), ">=", 2),
    ],
}

FAMILIES = {2: U2_FAMILIES, 3: U3_FAMILIES}


def wall_inequalities(n, I):
    """Every ``(positions, op, K)`` for index ``I``, permutations expanded."""
    if n not in FAMILIES:
        raise ValueError(f"inequality families are only tabulated for n = 2, 3 (got {n})")
    out = []
    for positions, op, K in FAMILIES[n].get(I, []):
        for perm in sorted(set(itertools.permutations(positions))):
            out.append((perm, op, K))
    return out


def _check_standing_assumptions(a, n):
    if a.ell != 3 or a.n != n:
        raise ValueError(f"expected ell = 3 and n = {n}, got ell = {a.ell}, n = {a.n}")
    tol = get_tolerances().cluster
    for row in a.alpha:
        if row[0] < tol or np.any(np.diff(row) < tol) or row[-1] > 1.0 - tol:
            raise ValueError("the inequality tables assume distinct nonzero angles in every row")
    I = integer_index(a)
    if I is None:
        raise ValueError(f"index {index(a):.10f} is not an integer")
    return I


def _evaluate(a, n, I, lo, hi):
    if not lo <= I <= hi:
        return Feasibility(False, [f"{lo}<=I<={hi}"])
    violated = []
    for positions, op, K in wall_inequalities(n, I):
        v = bracket(a, positions)
        ok = v <= K if op == "<=" else v >= K
        if not ok:
            violated.append(bracket_name(positions, op, K))
    return Feasibility(not violated, violated)


def feasible_u2(a):
    """Realizability of three U(2) classes with distinct nonzero angles."""
    I = _check_standing_assumptions(a, 2)
    return _evaluate(a, 2, I, 2, 4)


def feasible_u3(a):
    """Realizability of three U(3) classes with distinct nonzero angles."""
    I = _check_standing_assumptions(a, 3)
    return _evaluate(a, 3, I, 3, 6)


def feasible(a):
    return {2: feasible_u2, 3: feasible_u3}[a.n](a)


def wall_margin(a, I=None):
    """Smallest ``|bracket - K|`` over the walls of the tuple's index."""
    I = integer_index(a) if I is None else I
    walls = wall_inequalities(a.n, I)
    if not walls:
        return np.inf
    return min(abs(bracket(a, positions) - K) for positions, _, K in walls)


def index_bounds_ok(a, N0, N1, tol=None):
    tol = get_tolerances().index_integrality if tol is None else tol
    I = index(a)
    n, ell = a.n, a.ell
    return bool(n - N0 - tol <= I <= n * (ell - 1) + N0 - N1 + tol)
