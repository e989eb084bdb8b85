"""Representations of the punctured-sphere group and their deformations.

A representation is an ``ell``-tuple of unitaries with ``gamma_1 ... gamma_ell = I``.
Lagrangian tuples map to representations by ``gamma_s = tau2(L_s, L_{s+1})``.

Tangent vectors of a Lagrangian tuple are ``ell``-tuples ``K_s`` of
skew-hermitian matrices, meaning ``L_s(t) = exp(t K_s) L_s``.  Tangent
vectors of a representation are right-trivialized: ``X_s = gamma_s' gamma_s^{-1}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import get_tolerances
from .lagrangian import Lagrangian, LagrangianTuple, tau2
from .numerics import (
    TWO_PI,
    check_unitary,
    cluster_angles,
    expm_skew,
    gap_rank,
    multiplicity_of_zero,
    nullity,
    realify,
    spectrum,
    u_basis,
    unitary_eigh,
)
from .spectra import MultiplicityStructure, SpectrumTuple


@dataclass(frozen=True, eq=False)
class Representation:
    gammas: np.ndarray

    def __post_init__(self):
        g = np.array(self.gammas, dtype=complex)
        if g.ndim != 3 or g.shape[1] != g.shape[2] or g.shape[0] < 1:
            raise ValueError(f"gammas must have shape (ell, n, n), got {g.shape}")
        for s, A in enumerate(g):
            check_unitary(A, f"gamma_{s + 1}")
        defect = relation_defect(g)
        tol = get_tolerances().relation
        if defect > tol:
            raise ValueError(f"product relation violated: |gamma_1...gamma_ell - I|_F = {defect:.3e} > {tol:.1e}")
        g.setflags(write=False)
        object.__setattr__(self, "gammas", g)

    @property
    def ell(self):
        return self.gammas.shape[0]

    @property
    def n(self):
        return self.gammas.shape[1]

    def partial_products(self):
        """``P_0 = I, P_k = gamma_1 ... gamma_k`` for ``k = 0..ell``."""
        P = [np.eye(self.n, dtype=complex)]
        for g in self.gammas:
            P.append(P[-1] @ g)
        return P

    def conjugated(self, u):
        return Representation(np.array([u @ g @ u.conj().T for g in self.gammas]))


@dataclass(frozen=True)
class TangentFrame:
    """Tangent vectors ``(X_1, ..., X_ell)`` at a representation, stacked on axis 0."""

    vectors: np.ndarray


def relation_defect(gammas):
    P = np.eye(gammas[0].shape[0], dtype=complex)
    for g in gammas:
        P = P @ g
    return float(np.linalg.norm(P - np.eye(P.shape[0])))


def phi_tilde(lam):
    ell = len(lam)
    if ell < 2:
        raise ValueError("need at least two Lagrangians")
    return Representation(np.array([tau2(lam[s], lam[(s + 1) % ell]) for s in range(ell)]))


def spectral_projection(rho):
    return SpectrumTuple(np.array([spectrum(g) for g in rho.gammas]))


def commutant_dim(rho, tol=None):
    """Real dimension of the commutant of ``rho`` inside u(n)."""
    basis = u_basis(rho.n)
    cols = [realify(np.array([E @ g - g @ E for g in rho.gammas])) for E in basis]
    return nullity(np.array(cols).T, tol)


def is_irreducible(rho):
    return commutant_dim(rho) == 1


def N0(rho):
    """Dimension of the common fixed space of all ``gamma_s``."""
    tol = TWO_PI * get_tolerances().cluster
    n = rho.n
    stacked = np.vstack([g - np.eye(n) for g in rho.gammas])
    s = np.linalg.svd(stacked, compute_uv=False)
    return int(n - np.sum(s > tol))


def N1(rho):
    """Total multiplicity of the angle 0 over all ``gamma_s``."""
    return int(sum(multiplicity_of_zero(spectrum(g)) for g in rho.gammas))


# --- deformations -----------------------------------------------------------


def twist(lam, phases):
    """Rescale ``M_s`` by ``phases[s]**2``; every spectrum rotates rigidly."""
    phases = np.asarray(phases, dtype=complex)
    if phases.shape != (len(lam),):
        raise ValueError(f"need {len(lam)} phases, got shape {phases.shape}")
    if np.any(np.abs(np.abs(phases) - 1.0) > 1e-12):
        raise ValueError("twist phases must have modulus 1")
    return LagrangianTuple(tuple(Lagrangian(t * t * L.M) for t, L in zip(phases, lam)))


def twist_shift(phases):
    """Angle shift ``theta_s`` of each spectrum under :func:`twist`."""
    phases = np.asarray(phases, dtype=complex)
    t2 = phases**2
    return np.mod(np.angle(t2 * np.conj(np.roll(t2, -1))) / TWO_PI, 1.0)


def bend_element(L, A):
    """``b = g exp(A) g^{-1}`` for a frame ``g`` of ``L``; ``b`` fixes ``L``."""
    A = np.asarray(A)
    if np.iscomplexobj(A):
        if np.linalg.norm(A.imag) > 1e-12:
            raise ValueError("bending parameter must be real")
        A = A.real
    if A.shape != (L.n, L.n) or np.linalg.norm(A + A.T) > 1e-12 * max(1.0, np.linalg.norm(A)):
        raise ValueError("bending parameter must be a real antisymmetric n x n matrix")
    g = L.frame
    return g @ expm_skew(A.astype(complex)) @ g.conj().T


def bend(lam, s, r, A):
    """Move ``L_{s+1}, ..., L_{s+r}`` (0-based, cyclic) by ``b = g_s e^A g_s^{-1}``.

    ``gamma_s, ..., gamma_{s+r-1}`` are conjugated by ``b``; only the class of
    ``gamma_{s+r}`` can change.
    """
    ell = len(lam)
    if not 0 <= s < ell:
        raise ValueError(f"bend position {s} out of range")
    if not 1 <= r <= ell:
        raise ValueError(f"bend length must be in 1..{ell}")
    b = bend_element(lam[s], A)
    out = list(lam)
    for j in range(1, r + 1):
        k = (s + j) % ell
        if k != s:
            out[k] = lam[k].moved_by(b)
    return LagrangianTuple(tuple(out))


# --- differentials ----------------------------------------------------------


def _ad_sigma(M, K):
    return M @ np.conj(K) @ np.conj(M)


def dphi(lam, K):
    """Analytic differential of ``phi~``.

    ``K`` has shape ``(..., ell, n, n)``.  Varying ``L_s`` by ``exp(t K_s)``
    gives ``X_s = (I - Ad_s) K_s + Ad_s (I - Ad_{s+1}) K_{s+1}`` where
    ``Ad_s`` is conjugation by the involution of ``L_s``.
    """
    K = np.asarray(K, dtype=complex)
    ell = len(lam)
    Ms = lam.matrices()
    X = np.empty_like(K)
    for s in range(ell):
        t = (s + 1) % ell
        Ks, Kt = K[..., s, :, :], K[..., t, :, :]
        inner = Kt - _ad_sigma(Ms[t], Kt)
        X[..., s, :, :] = Ks - _ad_sigma(Ms[s], Ks) + _ad_sigma(Ms[s], inner)
    return X


def dphi_fd(lam, K, h=1e-5):
    """Central finite difference of ``phi~`` along one tangent ``K``."""
    K = np.asarray(K, dtype=complex)
    gam = phi_tilde(lam).gammas

    def moved(t):
        return LagrangianTuple(tuple(L.moved_by(expm_skew(t * Ks)) for L, Ks in zip(lam, K)))

    gp = phi_tilde(moved(h)).gammas
    gm = phi_tilde(moved(-h)).gammas
    X = (gp - gm) / (2 * h) @ np.conj(np.swapaxes(gam, -1, -2))
    return 0.5 * (X - np.conj(np.swapaxes(X, -1, -2)))


def _sym_basis(n):
    """Orthonormal basis of real symmetric matrices (Frobenius)."""
    out = []
    for j in range(n):
        E = np.zeros((n, n))
        E[j, j] = 1.0
        out.append(E)
    r = 1.0 / np.sqrt(2.0)
    for j, k in itertools.combinations(range(n), 2):
        E = np.zeros((n, n))
        E[j, k] = E[k, j] = r
        out.append(E)
    return out


def _antisym_basis(n):
    out = []
    r = 1.0 / np.sqrt(2.0)
    for j, k in itertools.combinations(range(n), 2):
        E = np.zeros((n, n))
        E[j, k], E[k, j] = r, -r
        out.append(E)
    return out


def lagrangian_tangent_basis(lam):
    """Basis of the tangent space of the tuple, shape ``(D, ell, n, n)``.

    Each slot moves by ``g_s (i S) g_s^{-1}`` with ``S`` real symmetric, the
    complement of the stabilizer algebra of ``L_s``;
    ``D = ell * n (n + 1) / 2``.
    """
    ell, n = len(lam), lam.n
    out = []
    for s in range(ell):
        g = lam[s].frame
        for S in _sym_basis(n):
            K = np.zeros((ell, n, n), complex)
            K[s] = g @ (1j * S) @ g.conj().T
            out.append(K)
    return np.array(out)


def twist_tangents(lam):
    ell, n = len(lam), lam.n
    out = np.zeros((ell, ell, n, n), complex)
    for s in range(ell):
        out[s, s] = 1j * np.eye(n)
    return out


def bend_tangents(lam):
    """Tangents of every bend ``(s, r, A)``, ``A`` running over a basis of o(n)."""
    ell, n = len(lam), lam.n
    out = []
    for s in range(ell):
        g = lam[s].frame
        for A in _antisym_basis(n):
            B = g @ A @ g.conj().T
            for r in range(1, ell):
                K = np.zeros((ell, n, n), complex)
                for j in range(1, r + 1):
                    K[(s + j) % ell] = B
                out.append(K)
    return np.array(out).reshape(-1, ell, n, n)


def _real_coords(X):
    X = np.asarray(X)
    return np.concatenate([X.real.reshape(X.shape[0], -1), X.imag.reshape(X.shape[0], -1)], axis=1)


def jacobian(lam):
    """Real matrix of ``D phi~`` on :func:`lagrangian_tangent_basis`."""
    K = lagrangian_tangent_basis(lam)
    return _real_coords(dphi(lam, K)).T


def _require_irreducible(lam):
    rho = phi_tilde(lam)
    if not is_irreducible(rho):
        raise ValueError("phi~(lambda) is reducible; the rank statement does not apply")
    return rho


def jacobian_rank(lam, check=True):
    if check:
        _require_irreducible(lam)
    rank, _ = gap_rank(jacobian(lam))
    return rank


def spectral_frames(rho, tol=None):
    """Eigenbases of every ``gamma_s``; refuses repeated eigenvalues."""
    tol = get_tolerances().cluster if tol is None else tol
    frames = []
    for s, g in enumerate(rho.gammas):
        alpha, V = unitary_eigh(g)
        if any(m > 1 for _, m in cluster_angles(alpha, tol)):
            raise ValueError(f"gamma_{s + 1} has a repeated eigenvalue; its spectrum is not differentiable")
        frames.append(V)
    return frames


def spectral_differential(rho, X, frames=None):
    """First-order change of every angle: ``Im(v^* X_s v) / 2 pi``.

    ``X`` has shape ``(..., ell, n, n)``; the result has shape ``(..., ell, n)``.
    """
    frames = spectral_frames(rho) if frames is None else frames
    X = np.asarray(X)
    out = []
    for s, V in enumerate(frames):
        d = np.einsum("ij,...ik,kj->...j", np.conj(V), X[..., s, :, :], V)
        out.append(d.imag / TWO_PI)
    return np.stack(out, axis=-2)


def spectral_jacobian(lam, K, rho=None):
    """Matrix ``(ell * n) x D`` of the angle map along the tangents ``K``."""
    rho = phi_tilde(lam) if rho is None else rho
    D = spectral_differential(rho, dphi(lam, K))
    return D.reshape(D.shape[0], -1).T


def spectral_tangent_rank(lam, check=True):
    """Rank of the angle map over the span of all twist and bend directions."""
    rho = _require_irreducible(lam) if check else phi_tilde(lam)
    K = np.concatenate([twist_tangents(lam), bend_tangents(lam)])
    rank, _ = gap_rank(spectral_jacobian(lam, K, rho))
    return rank


def cocycle_defect(rho, X):
    """``|X_1 + Ad_{gamma_1} X_2 + ... + Ad_{gamma_1...gamma_{ell-1}} X_ell|_F``."""
    P = rho.partial_products()
    total = sum(P[s] @ X[s] @ P[s].conj().T for s in range(rho.ell))
    return float(np.linalg.norm(total))


def expected_dimensions(n, ell, m=None):
    """Closed-form dimensions of the irreducible strata.

    Keys: ``rep_a`` and ``lrep_a`` (fixed multiplicity structure ``m``),
    ``rep`` and ``hom`` (all classes), ``lhom`` and ``lrep`` (Lagrangian
    loci).  Half-integers are returned as :class:`fractions.Fraction`.
    """
    if n < 1 or ell < 2:
        raise ValueError("need n >= 1 and ell >= 2")
    m = MultiplicityStructure.generic(n, ell) if m is None else m
    if len(m.partitions) != ell or any(p[0] != 0 or p[-1] != n for p in m.partitions):
        raise ValueError("multiplicity structure does not match (n, ell)")
    sq = sum(mu * mu for row in m.multiplicities for mu in row)
    rep_a = (ell - 2) * n * n + 2 - sq
    lhom = ell * n * (n + 1) // 2 - 1
    return {
        "rep_a": rep_a,
        "lrep_a": Fraction(ell - 2, 2) * n * n + 1 - Fraction(sq, 2),
        "hom": (ell - 1) * n * n,
        "rep": (ell - 2) * n * n + 1,
        "lhom": lhom,
        "lrep": lhom - (n * n - 1),
    }
