"""The quasi-Hamiltonian 2-form on a product of conjugacy classes.

A tangent vector at ``gamma`` in its conjugacy class is written through a
generator ``xi`` in u(n): ``gamma' gamma^{-1} = (I - Ad_gamma) xi``.  The
generator is only defined modulo the centralizer algebra ``z(gamma)``; this
module always uses the representative orthogonal to it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import get_tolerances
from .numerics import circular_distance, gap_rank, skew_part, u_basis, unitary_eigh
from .representation import (
    dphi,
    lagrangian_tangent_basis,
    phi_tilde,
    spectral_frames,
    spectral_differential,
)


@dataclass(frozen=True, eq=False)
class ClassTangent:
    """Generators ``xi_s``, one per factor, stacked on axis 0."""

    xis: np.ndarray

    def __post_init__(self):
        xis = np.array(self.xis, dtype=complex)
        if xis.ndim != 3 or xis.shape[1] != xis.shape[2]:
            raise ValueError(f"xis must have shape (ell, n, n), got {xis.shape}")
        object.__setattr__(self, "xis", xis)

    def fundamental(self, rho):
        """The tangent components ``X_s = (I - Ad_{gamma_s}) xi_s``."""
        return np.array([x - g @ x @ g.conj().T for g, x in zip(rho.gammas, self.xis)])


def lie_inner(X, Y):
    """``<X, Y> = -Re Tr(XY)``."""
    X, Y = np.asarray(X), np.asarray(Y)
    if X.shape != Y.shape:
        raise ValueError("shape mismatch")
    return float(-np.real(np.einsum("...ij,...ji->", X, Y)))


def solve_generator(gamma, X, tol=None):
    """Minimal-norm ``xi`` with ``(I - Ad_gamma) xi = X``.

    In an eigenbasis of ``gamma`` the map is entrywise multiplication by
    ``1 - d_j conj(d_k)``.  Entries inside one eigenvalue cluster must vanish
    in ``X``; otherwise ``X`` changes the conjugacy class and
    :class:`ValueError` is raised.
    """
    tols = get_tolerances()
    tol = tols.relation if tol is None else tol
    X = np.asarray(X, dtype=complex)
    alpha, V = unitary_eigh(gamma)
    if X.shape != gamma.shape:
        raise ValueError("shape mismatch")
    Xp = V.conj().T @ X @ V
    same = circular_distance(alpha[:, None], alpha[None, :]) < tols.cluster
    scale = max(1.0, float(np.linalg.norm(X)))
    leak = float(np.linalg.norm(Xp[same]))
    if leak > tol * scale:
        raise ValueError(f"tangent has a component {leak:.2e} along the centralizer; it changes the class")
    d = np.exp(2j * np.pi * alpha)
    denom = 1.0 - d[:, None] * np.conj(d)[None, :]
    xi_p = np.where(same, 0.0, Xp / np.where(same, 1.0, denom))
    return skew_part(V @ xi_p @ V.conj().T)


def class_tangent(rho, X):
    """:class:`ClassTangent` whose fundamental field is ``X``."""
    return ClassTangent(np.array([solve_generator(g, x) for g, x in zip(rho.gammas, X)]))


def _form_terms(rho, xi, eta):
    gam = rho.gammas
    P = rho.partial_products()
    total = 0.0
    for s, g in enumerate(gam):
        total += lie_inner(g @ xi[s] @ g.conj().T, eta[s])
    # Ad_{P_{a-1}} (I - Ad_{gamma_a}) applied to each generator
    A = [P[s] @ (xi[s] - g @ xi[s] @ g.conj().T) @ P[s].conj().T for s, g in enumerate(gam)]
    B = [P[s] @ (eta[s] - g @ eta[s] @ g.conj().T) @ P[s].conj().T for s, g in enumerate(gam)]
    prefix = np.zeros_like(A[0])
    for b in range(1, len(gam)):
        prefix = prefix + A[b - 1]
        total += lie_inner(prefix, B[b])
    return total


def two_form(rho, xi, eta):
    """``omega(xi#, eta#) = (F(xi, eta) - F(eta, xi)) / 2``.

    ``F`` sums ``<Ad_{gamma_s} xi_s, eta_s>`` over the factors and, over
    ``a < b``, ``<Ad_{P_{a-1}} (I - Ad_{gamma_a}) xi_a, Ad_{P_{b-1}} (I - Ad_{gamma_b}) eta_b>``
    with ``P_k = gamma_1 ... gamma_k``.
    """
    xi = xi.xis if isinstance(xi, ClassTangent) else np.asarray(xi)
    eta = eta.xis if isinstance(eta, ClassTangent) else np.asarray(eta)
    if xi.shape != rho.gammas.shape or eta.shape != rho.gammas.shape:
        raise ValueError("generators do not match the representation")
    return 0.5 * (_form_terms(rho, xi, eta) - _form_terms(rho, eta, xi))


def _kernel(A, cutoff):
    _, s, Vt = np.linalg.svd(A)
    rank = int(np.sum(s > cutoff))
    return Vt[rank:].T


def fixed_class_tangents(lam, cutoff=1e-7):
    """Images under ``D phi~`` of tuple tangents that keep every spectrum fixed.

    Uses the full tangent basis of the tuple (which contains every twist
    and bend direction) and the kernel of the angle map on it.
    """
    rho = phi_tilde(lam)
    frames = spectral_frames(rho)
    K = lagrangian_tangent_basis(lam)
    X = dphi(lam, K)
    S = spectral_differential(rho, X, frames).reshape(len(K), -1).T
    scale = max(1.0, float(np.linalg.svd(S, compute_uv=False)[0])) if S.size else 1.0
    C = _kernel(S, cutoff * scale)
    Xk = np.einsum("dk,dsij->ksij", C, X)
    norms = np.sqrt(np.einsum("ksij,ksij->k", Xk.conj(), Xk).real)
    return rho, Xk[norms > 1e-10]


def _tangent_norm(X):
    return float(np.sqrt(np.sum(np.abs(X) ** 2)))


def max_normalized_form(rho, tangents):
    """Largest ``|omega(X, Y)| / (|X| |Y|)`` over all pairs of tangents."""
    gens = [class_tangent(rho, X) for X in tangents]
    norms = [_tangent_norm(X) for X in tangents]
    worst = 0.0
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            v = abs(two_form(rho, gens[i], gens[j])) / (norms[i] * norms[j])
            worst = max(worst, v)
    return worst


def isotropy_report(lam, cutoff=1e-7):
    rho, tangents = fixed_class_tangents(lam, cutoff)
    return {"defect": max_normalized_form(rho, tangents), "tangents": len(tangents)}


def isotropy_defect(lam, cutoff=1e-7):
    """Max normalized ``|omega|`` over fixed-class Lagrangian tangent pairs."""
    return isotropy_report(lam, cutoff)["defect"]


def random_class_tangent(rho, rng):
    """Random generators orthogonal to each centralizer (any class-preserving motion)."""
    n = rho.n
    basis = u_basis(n)
    xis = []
    for g in rho.gammas:
        xi = np.tensordot(rng.standard_normal(len(basis)), basis, axes=1)
        alpha, V = unitary_eigh(g)
        same = circular_distance(alpha[:, None], alpha[None, :]) < get_tolerances().cluster
        xp = V.conj().T @ xi @ V
        xp[same] = 0.0
        xis.append(skew_part(V @ xp @ V.conj().T))
    return ClassTangent(np.array(xis))


def hom_class_tangents(rho):
    """Basis of class-preserving tangents that keep the product relation.

    Solves ``sum_s Ad_{P_{s-1}} (I - Ad_{gamma_s}) xi_s = 0`` for generators
    orthogonal to the centralizers and returns an orthonormal basis of the
    resulting fundamental fields, shape ``(k, ell, n, n)``.
    """
    n, ell = rho.n, rho.ell
    basis = u_basis(n)
    P = rho.partial_products()
    cols, gens = [], []
    for s, g in enumerate(rho.gammas):
        for E in basis:
            X = E - g @ E @ g.conj().T
            if np.linalg.norm(X) < 1e-12:
                continue
            xi = np.zeros((ell, n, n), complex)
            xi[s] = E
            gens.append(xi)
            Y = P[s] @ X @ P[s].conj().T
            cols.append(np.concatenate([Y.real.ravel(), Y.imag.ravel()]))
    C = _kernel(np.array(cols).T, 1e-9)
    xis = np.einsum("dk,dsij->ksij", C, np.array(gens))
    X = np.array([ClassTangent(x).fundamental(rho) for x in xis])
    flat = X.reshape(len(X), -1)
    U, sv, Vt = np.linalg.svd(np.concatenate([flat.real, flat.imag], axis=1), full_matrices=False)
    rank, _ = gap_rank(flat) if len(flat) else (0, 0.0)
    # orthonormal combinations of the fundamental fields
    return np.einsum("kd,dsij->ksij", U[:, :rank].T, X) / sv[:rank, None, None, None]
