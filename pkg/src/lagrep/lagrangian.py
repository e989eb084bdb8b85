"""Lagrangian subspaces of C^n and their involutions.

A Lagrangian ``L = g R^n`` is stored as the symmetric unitary matrix
``M = g g^T``; this does not depend on the choice of frame ``g`` and makes
the involution fixing ``L`` the antilinear map ``z -> M conj(z)``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .config import get_tolerances
from .numerics import (
    check_skew_hermitian,
    check_unitary,
    cluster_angles,
    multiplicity_of_zero,
    nullity,
    spectrum,
    takagi_symmetric_unitary,
    u_basis,
)


@dataclass(frozen=True, eq=False)
class Lagrangian:
    M: np.ndarray

    def __post_init__(self):
        tol = get_tolerances()
        M = check_unitary(self.M, "Lagrangian matrix M")
        asym = np.linalg.norm(M - M.T)
        if asym > tol.symmetry:
            raise ValueError(f"Lagrangian matrix M is not symmetric: |M - M^T|_F = {asym:.3e}")
        M = M.copy()
        M.setflags(write=False)
        object.__setattr__(self, "M", M)

    @property
    def n(self):
        return self.M.shape[0]

    @classmethod
    def standard(cls, n):
        """The real subspace R^n."""
        return cls(np.eye(n, dtype=complex))

    @functools.cached_property
    def frame(self):
        """A unitary ``g`` with ``L = g R^n`` (unique up to a right O(n) factor)."""
        return takagi_symmetric_unitary(self.M)

    def real_basis(self):
        """Orthonormal basis of ``L`` as columns of a real ``2n x n`` matrix."""
        g = self.frame
        return np.vstack([g.real, g.imag])

    def moved_by(self, u):
        """The Lagrangian ``u L`` for unitary ``u``."""
        M = u @ self.M @ u.T
        return Lagrangian(0.5 * (M + M.T))

    def __repr__(self):
        return f"Lagrangian(n={self.n})"


@dataclass(frozen=True, eq=False)
class LagrangianTuple:
    lagrangians: tuple

    def __post_init__(self):
        items = tuple(self.lagrangians)
        if len(items) < 2:
            raise ValueError("a Lagrangian tuple needs at least two entries")
        if len({L.n for L in items}) != 1:
            raise ValueError("all Lagrangians in a tuple must share the same dimension")
        object.__setattr__(self, "lagrangians", items)

    @property
    def n(self):
        return self.lagrangians[0].n

    @property
    def ell(self):
        return len(self.lagrangians)

    def __len__(self):
        return len(self.lagrangians)

    def __iter__(self):
        return iter(self.lagrangians)

    def __getitem__(self, i):
        return self.lagrangians[i]

    @classmethod
    def from_matrices(cls, Ms):
        return cls(tuple(Lagrangian(np.asarray(M)) for M in Ms))

    @classmethod
    def from_frames(cls, frames):
        return cls(tuple(lagrangian_from_frame(g) for g in frames))

    def moved_by(self, u):
        return LagrangianTuple(tuple(L.moved_by(u) for L in self))

    def matrices(self):
        return np.array([L.M for L in self])


def _same_dim(*Ls):
    if len({L.n for L in Ls}) != 1:
        raise ValueError("Lagrangians have different dimensions")


def lagrangian_from_frame(g):
    g = check_unitary(g, "frame")
    M = g @ g.T
    return Lagrangian(0.5 * (M + M.T))


def involution_apply(L, z):
    z = np.asarray(z, dtype=complex)
    if z.shape[0] != L.n:
        raise ValueError(f"vector has length {z.shape[0]}, expected {L.n}")
    return L.M @ np.conj(z)


def adjoint_involution(L, X):
    """Conjugation of a skew-hermitian ``X`` by the involution of ``L``."""
    X = check_skew_hermitian(X)
    if X.shape[0] != L.n:
        raise ValueError("dimension mismatch")
    return L.M @ np.conj(X) @ np.conj(L.M)


def _coords(X, basis):
    # coordinates in the orthonormal basis for <X, Y> = -Re Tr(XY)
    return -np.einsum("kij,ji->k", basis, X).real


def involution_matrix(L, basis=None):
    """Real matrix of ``X -> Ad_{sigma_L} X`` on u(n)."""
    basis = u_basis(L.n) if basis is None else basis
    Mc = np.conj(L.M)
    return np.array([_coords(L.M @ np.conj(E) @ Mc, basis) for E in basis]).T


def tau1(L):
    return L.M.copy()


def tau2(L1, L2):
    """The unitary ``sigma_{L1} sigma_{L2} = M1 conj(M2)``."""
    _same_dim(L1, L2)
    return L1.M @ np.conj(L2.M)


def stabilizer_algebra_dim(L1, L2):
    """``(dim o_1 ∩ o_2, dim z(g))`` for ``g = tau2(L1, L2)``."""
    _same_dim(L1, L2)
    n = L1.n
    basis = u_basis(n)
    eye = np.eye(n * n)
    stacked = np.vstack([involution_matrix(L1, basis) - eye, involution_matrix(L2, basis) - eye])
    dim_o = nullity(stacked)
    dim_z = sum(m * m for _, m in cluster_angles(spectrum(tau2(L1, L2))))
    return dim_o, dim_z


def tau2_split(g, fiber=None):
    """Write a unitary ``g`` as ``tau2(L1, L2)``.

    ``g = u d u^*`` (complex Schur form).  The fiber over ``g`` is the set of
    symmetric unitaries commuting with ``d``; ``fiber`` picks a point of it in
    the ``d``-basis (identity by default).  Then ``M1 = u h u^T`` and
    ``M2 = u (h conj(d)) u^T``.
    """
    g = check_unitary(g, "g")
    n = g.shape[0]
    T, u = scipy.linalg.schur(g, output="complex")
    d = np.diag(T)
    d = d / np.abs(d)
    if fiber is None:
        h = np.eye(n, dtype=complex)
    else:
        h = check_unitary(fiber, "fiber point")
        if h.shape != (n, n):
            raise ValueError("fiber point has the wrong dimension")
        if np.linalg.norm(h - h.T) > get_tolerances().symmetry * 100:
            raise ValueError("fiber point is not symmetric")
        if np.linalg.norm(h * d[None, :] - d[:, None] * h) > get_tolerances().cluster:
            raise ValueError("fiber point does not commute with the diagonal form of g")
    M1 = u @ h @ u.T
    M2 = u @ (h * np.conj(d)[None, :]) @ u.T
    return Lagrangian(0.5 * (M1 + M1.T)), Lagrangian(0.5 * (M2 + M2.T))


def dim_intersection(L1, L2):
    """Real dimension of ``L1 ∩ L2`` (multiplicity of angle 0 in ``tau2``)."""
    return multiplicity_of_zero(spectrum(tau2(L1, L2)))


def pairwise_symmetrizers(lam):
    """Conjugators ``c_s`` making ``gamma_s`` and ``gamma_{s+1}`` symmetric.

    ``c_s`` is the inverse of a frame of ``L_{s+1}``.
    """
    ell = len(lam)
    return [lam[(s + 1) % ell].frame.conj().T for s in range(ell)]


def symmetry_defect(c, A):
    B = c @ A @ c.conj().T
    return float(np.linalg.norm(B - B.T))


def direct_sum(lam1, lam2):
    """Block-diagonal tuple ``L_s = L1_s + L2_s`` (a reducible configuration)."""
    if len(lam1) != len(lam2):
        raise ValueError("tuples have different lengths")
    n1, n2 = lam1.n, lam2.n
    out = []
    for A, B in zip(lam1, lam2):
        M = np.zeros((n1 + n2, n1 + n2), dtype=complex)
        M[:n1, :n1] = A.M
        M[n1:, n1:] = B.M
        out.append(Lagrangian(M))
    return LagrangianTuple(tuple(out))
