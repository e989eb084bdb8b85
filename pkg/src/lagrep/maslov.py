"""Inertia (Maslov) indices of Lagrangian triples and tuples.

The symplectic form is ``omega(z, w) = -Im(z^* w)``.  In real coordinates
``z = x + i y`` this is ``-[x; y]^T J [u; v]`` with ``J = [[0, I], [-I, 0]]``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .lagrangian import LagrangianTuple, dim_intersection, tau2
from .numerics import nullity, signature, spectrum

# Sign of omega relative to Im(z^* w).  The opposite sign violates the triple
# identity tau = 3n - 2I - (n12 + n23 + n31) on every generic triple.
OMEGA_SIGN = -1.0


@dataclass(frozen=True)
class TripleInvariants:
    n0: int
    n12: int
    n23: int
    n31: int
    tau: int

    def as_dict(self):
        return asdict(self)


def _same_dim(*Ls):
    if len({L.n for L in Ls}) != 1:
        raise ValueError("Lagrangians have different dimensions")


def _omega_matrix(n):
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return OMEGA_SIGN * J


def kashiwara_form(L1, L2, L3):
    """The ``3n x 3n`` symmetric matrix of ``q = w(x1,x2) + w(x2,x3) + w(x3,x1)``."""
    _same_dim(L1, L2, L3)
    n = L1.n
    J = _omega_matrix(n)
    B = [L.real_basis() for L in (L1, L2, L3)]
    Q = np.zeros((3 * n, 3 * n))
    for j, k in ((0, 1), (1, 2), (2, 0)):
        W = 0.5 * B[j].T @ J @ B[k]
        Q[j * n:(j + 1) * n, k * n:(k + 1) * n] += W
        Q[k * n:(k + 1) * n, j * n:(j + 1) * n] += W.T
    return Q


def inertia_index(L1, L2, L3, tol=1e-8):
    """Signature ``n_plus - n_minus`` of the Kashiwara form."""
    n_plus, n_minus, _ = signature(kashiwara_form(L1, L2, L3), tol)
    return n_plus - n_minus


def common_dimension(lagrangians, tol=1e-8):
    """Real dimension of the intersection of all given Lagrangians."""
    n = lagrangians[0].n
    eye = np.eye(2 * n)
    blocks = []
    for L in lagrangians:
        B = L.real_basis()
        blocks.append(eye - B @ B.T)
    return nullity(np.vstack(blocks), tol)


def triple_invariants(L1, L2, L3):
    _same_dim(L1, L2, L3)
    return TripleInvariants(
        n0=common_dimension([L1, L2, L3]),
        n12=dim_intersection(L1, L2),
        n23=dim_intersection(L2, L3),
        n31=dim_intersection(L3, L1),
        tau=inertia_index(L1, L2, L3),
    )


def classify_valid(d, n):
    """Whether ``d`` satisfies the four conditions for a non-empty class."""
    s = d.n12 + d.n23 + d.n31
    return bool(
        0 <= d.n0 <= min(d.n12, d.n23, d.n31)
        and max(d.n12, d.n23, d.n31) <= n
        and s <= n + 2 * d.n0
        and abs(d.tau) <= n + 2 * d.n0 - s
        and (d.tau - (n - s)) % 2 == 0
    )


def generalized_maslov(lam):
    """``tau(L1, L2, L3) + tau(L1, L3, L4) + ... + tau(L1, L_{l-1}, L_l)``."""
    if len(lam) < 3:
        raise ValueError("the generalized index needs at least three Lagrangians")
    return int(sum(inertia_index(lam[0], lam[k], lam[k + 1]) for k in range(1, len(lam) - 1)))


def lagrangian_index(lam, tol=1e-8):
    """Index of the representation ``phi~(lam)``, rounded to an integer."""
    ell = len(lam)
    total = sum(np.sum(spectrum(tau2(lam[s], lam[(s + 1) % ell]))) for s in range(ell))
    k = int(round(total))
    if abs(total - k) > tol:
        raise ArithmeticError(f"index {total:.12f} is not an integer")
    return k


def check_index_identities(lam):
    """Evaluate both sides of the index/Maslov identities for a tuple.

    Returns a JSON-ready dict with the invariants and one boolean per identity.
    """
    if not isinstance(lam, LagrangianTuple):
        lam = LagrangianTuple(tuple(lam))
    ell, n = lam.ell, lam.n
    if ell < 3:
        raise ValueError("the identities need at least three Lagrangians")
    I = lagrangian_index(lam)
    tau = generalized_maslov(lam)
    njk = [dim_intersection(lam[s], lam[(s + 1) % ell]) for s in range(ell)]
    n0 = common_dimension(list(lam))
    N1 = sum(njk)
    identities = {
        "iandtau": tau == n * ell - 2 * I - N1,
        "maslov_bound": abs(tau) <= n * (ell - 2) + 2 * n0 - N1,
        "index_bounds": n - n0 <= I <= n * (ell - 1) + n0 - N1,
    }
    if ell == 3:
        d = TripleInvariants(n0, njk[0], njk[1], njk[2], tau)
        identities["indcomp"] = tau == 3 * n - 2 * I - N1
        identities["sympclass"] = classify_valid(d, n)
    else:
        sub = [lagrangian_index(LagrangianTuple((lam[0], lam[k], lam[k + 1]))) for k in range(1, ell - 1)]
        correction = sum(n - dim_intersection(lam[0], lam[i]) for i in range(2, ell - 1))
        identities["index_telescoping"] = I == sum(sub) - correction
    return {"tau": tau, "I": I, "n0": n0, "njk": njk, "identities": identities}
