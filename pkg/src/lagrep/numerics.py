"""Dense complex linear algebra shared by the rest of the package.

Angles follow one convention everywhere: a unitary eigenvalue is written
``exp(2*pi*i*alpha)`` with ``alpha`` in ``[0, 1)``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .config import get_tolerances

TWO_PI = 2.0 * np.pi


class SimultaneousDiagonalizationError(np.linalg.LinAlgError):
    pass


def unitarity_defect(A):
    A = np.asarray(A)
    return float(np.linalg.norm(A.conj().T @ A - np.eye(A.shape[0])))


def check_square(A, name="matrix"):
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"{name} must be a non-empty square matrix, got shape {A.shape}")
    return A


def check_unitary(A, name="matrix", tol=None):
    A = check_square(A, name)
    tol = get_tolerances().unitarity if tol is None else tol
    defect = unitarity_defect(A)
    if not defect <= tol:
        raise ValueError(f"{name} is not unitary: |A*A - I|_F = {defect:.3e} > {tol:.1e}")
    return A


def is_skew_hermitian(X, tol=1e-10):
    X = np.asarray(X)
    return bool(np.linalg.norm(X + X.conj().T) <= tol * max(1.0, np.linalg.norm(X)))


def check_skew_hermitian(X, name="X", tol=1e-10):
    X = check_square(X, name)
    if not is_skew_hermitian(X, tol):
        raise ValueError(f"{name} is not skew-hermitian")
    return X


def angles_from_eigenvalues(eigvals, snap=None):
    """Map unit eigenvalues to sorted angles in [0, 1).

    Works on the last axis, so stacks of eigenvalue lists are accepted.
    """
    snap = get_tolerances().angle_snap if snap is None else snap
    alpha = np.mod(np.angle(eigvals) / TWO_PI, 1.0)
    alpha = np.where((alpha < snap) | (alpha > 1.0 - snap), 0.0, alpha)
    return np.sort(alpha, axis=-1)


def spectrum(A):
    """Sorted eigenvalue angles of a unitary matrix.

    Examples
    --------
    >>> spectrum(np.diag([1j, -1]))
    array([0.25, 0.5 ])
    """
    A = check_unitary(A)
    return angles_from_eigenvalues(np.linalg.eigvals(A))


def unitary_eigh(A):
    """Angles and an orthonormal eigenbasis of a unitary matrix.

    Uses the complex Schur form, which is diagonal for normal matrices, so the
    basis stays orthonormal even inside eigenvalue clusters.  Columns follow
    the ascending angle order of :func:`spectrum`.
    """
    A = check_unitary(A)
    T, Z = scipy.linalg.schur(A, output="complex")
    alpha = np.mod(np.angle(np.diag(T)) / TWO_PI, 1.0)
    snap = get_tolerances().angle_snap
    alpha = np.where((alpha < snap) | (alpha > 1.0 - snap), 0.0, alpha)
    order = np.argsort(alpha, kind="stable")
    return alpha[order], Z[:, order]


def circular_distance(a, b):
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), 1.0))
    return np.minimum(d, 1.0 - d)


def cluster_angles(alpha, tol=None):
    """Group equal angles of one sorted canonical row.

    Returns a list of ``(value, multiplicity)`` pairs in ascending order.  The
    circle wraps: a top cluster within ``tol`` of 1 is merged into a cluster at 0.
    """
    tol = get_tolerances().cluster if tol is None else tol
    alpha = np.asarray(alpha, dtype=float)
    alpha = np.sort(np.where(alpha > 1.0 - tol, alpha - 1.0, alpha))
    clusters = []
    for a in alpha:
        if clusters and a - clusters[-1][-1] < tol:
            clusters[-1].append(a)
        else:
            clusters.append([a])
    out = []
    for c in clusters:
        value = float(np.mod(np.mean(c), 1.0))
        if circular_distance(value, 0.0) < tol:
            value = 0.0
        out.append((value, len(c)))
    return out


def multiplicity_of_zero(alpha, tol=None):
    tol = get_tolerances().cluster if tol is None else tol
    return int(np.sum(circular_distance(alpha, 0.0) < tol))


def haar_unitary(n, seed=None):
    """Haar-distributed unitary matrix.

    ``seed`` may be an integer or a ``numpy.random.Generator``; integer seeds
    give bitwise-reproducible output.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


def signature(Q, tol=1e-9):
    """Inertia ``(n_plus, n_minus, n_zero)`` of a real symmetric matrix."""
    Q = np.asarray(Q, dtype=float)
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise ValueError("signature needs a square matrix")
    if np.linalg.norm(Q - Q.T) > tol * max(1.0, np.linalg.norm(Q)):
        raise ValueError("signature needs a symmetric matrix")
    w = np.linalg.eigvalsh(0.5 * (Q + Q.T))
    n_plus = int(np.sum(w > tol))
    n_minus = int(np.sum(w < -tol))
    return n_plus, n_minus, len(w) - n_plus - n_minus


def _split_clusters(w, tol):
    """Index ranges of runs of (sorted) eigenvalues closer than ``tol``."""
    blocks, start = [], 0
    for i in range(1, len(w) + 1):
        if i == len(w) or w[i] - w[i - 1] > tol:
            blocks.append((start, i))
            start = i
    return blocks


def simultaneous_diagonalize(X, Y, tol=None):
    """Real orthogonal ``O`` with ``O.T @ X @ O`` and ``O.T @ Y @ O`` diagonal.

    ``X`` and ``Y`` must be commuting real symmetric matrices.  ``X`` is
    diagonalized first, then ``Y`` inside every eigenspace of ``X``.
    """
    tol = get_tolerances().simdiag_cluster if tol is None else tol
    X = 0.5 * (X + X.T)
    Y = 0.5 * (Y + Y.T)
    scale = max(1.0, np.linalg.norm(X), np.linalg.norm(Y))
    if np.linalg.norm(X @ Y - Y @ X) > 1e-8 * scale:
        raise SimultaneousDiagonalizationError("matrices do not commute")
    w, O = np.linalg.eigh(X)
    for a, b in _split_clusters(w, tol * scale):
        if b - a > 1:
            Ob = O[:, a:b]
            _, R = np.linalg.eigh(Ob.T @ Y @ Ob)
            O[:, a:b] = Ob @ R
    return O


def takagi_symmetric_unitary(M, tol=None):
    """Frame ``g`` with ``g @ g.T == M`` for a symmetric unitary ``M``.

    ``M = X + iY`` with commuting real symmetric ``X, Y``; a real orthogonal
    ``h`` diagonalizes both, ``D = h M h^T`` is a diagonal phase matrix and
    ``g = h^T D^{1/2}`` using the principal root (argument in ``[0, 2*pi)``).
    """
    tols = get_tolerances()
    tol = tols.takagi if tol is None else tol
    M = check_unitary(M, "M")
    if np.linalg.norm(M - M.T) > tols.symmetry:
        raise ValueError("M is not symmetric")
    n = M.shape[0]
    X, Y = M.real, M.imag
    candidates = [(X, Y)]
    # rotated pairs only as a fallback for near-degenerate X
    for theta in (0.6180339887, 1.3247179572, 2.2360679775):
        c, s = np.cos(theta), np.sin(theta)
        candidates.append((c * X + s * Y, -s * X + c * Y))
    best = None
    for A, B in candidates:
        h = simultaneous_diagonalize(A, B).T
        d = np.diag(h @ M @ h.T)
        d = d / np.abs(d)
        phase = np.mod(np.angle(d), TWO_PI)
        g = h.T * np.exp(0.5j * phase)
        err = np.linalg.norm(g @ g.T - M)
        if best is None or err < best[0]:
            best = (err, g)
        if err <= tol:
            return g
    raise SimultaneousDiagonalizationError(
        f"takagi reconstruction error {best[0]:.2e} exceeds {tol:.1e} (n={n})"
    )


def circular_matching_distance(alpha, beta):
    """Sum of squared chord lengths under the best cyclic matching.

    ``alpha`` and ``beta`` are sorted angle lists; leading axes broadcast.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    za = np.exp(1j * TWO_PI * alpha)
    zb = np.exp(1j * TWO_PI * beta)
    n = alpha.shape[-1]
    costs = [np.sum(np.abs(za - np.roll(zb, -k, axis=-1)) ** 2, axis=-1) for k in range(n)]
    return np.min(np.stack(costs, axis=-1), axis=-1)


def class_distance(A, target):
    A = check_unitary(A)
    target = np.asarray(target, dtype=float)
    if target.shape != (A.shape[0],):
        raise ValueError(f"target has shape {target.shape}, expected ({A.shape[0]},)")
    return float(circular_matching_distance(spectrum(A), np.sort(target)))


# --- real coordinates on u(n) ------------------------------------------------


def u_basis(n):
    """Orthonormal basis of u(n) for the inner product -Re Tr(XY)."""
    basis = []
    for j in range(n):
        E = np.zeros((n, n), complex)
        E[j, j] = 1j
        basis.append(E)
    r = 1.0 / np.sqrt(2.0)
    for j in range(n):
        for k in range(j + 1, n):
            E = np.zeros((n, n), complex)
            E[j, k], E[k, j] = r, -r
            basis.append(E)
            F = np.zeros((n, n), complex)
            F[j, k] = F[k, j] = 1j * r
            basis.append(F)
    return np.array(basis)


def realify(Z):
    """Flatten complex arrays into real vectors (real parts then imaginary parts)."""
    Z = np.asarray(Z)
    return np.concatenate([Z.real.ravel(), Z.imag.ravel()])


def nullity(A, tol=None):
    """Dimension of the kernel of a real matrix, singular-value cutoff ``tol``."""
    tol = get_tolerances().rank if tol is None else tol
    A = np.atleast_2d(A)
    if A.size == 0:
        return A.shape[1]
    s = np.linalg.svd(A, compute_uv=False)
    return int(A.shape[1] - np.sum(s > tol))


def gap_rank(A, ratio=None):
    """Numerical rank read off the largest consecutive singular-value gap.

    Returns ``(rank, gap)`` where ``gap`` is the ratio across the cut.  Values
    below ``1e-12 * s_max`` count as zero, so full-rank matrices report an
    infinite gap.
    """
    ratio = get_tolerances().gap_ratio if ratio is None else ratio
    s = np.linalg.svd(np.atleast_2d(A), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0, np.inf
    nonzero = int(np.count_nonzero(s > 1e-12 * s[0]))
    ratios = s[: nonzero - 1] / s[1:nonzero]
    if ratios.size and np.max(ratios) >= ratio:
        k = int(np.argmax(ratios))
        return k + 1, float(ratios[k])
    return nonzero, np.inf


def expm_skew(K):
    """Matrix exponential of (stacks of) skew-hermitian matrices."""
    H = 1j * np.asarray(K)
    H = 0.5 * (H + np.conj(np.swapaxes(H, -1, -2)))
    if H.shape[-1] == 2:
        return _expm_2x2(H)
    w, U = np.linalg.eigh(H)
    return (U * np.exp(-1j * w)[..., None, :]) @ np.conj(np.swapaxes(U, -1, -2))


def _expm_2x2(H):
    # exp(-iH) with H = h0 I + h.sigma: exp(-i h0) (cos r I - i sin(r)/r (H - h0 I))
    a, d, b = H[..., 0, 0].real, H[..., 1, 1].real, H[..., 0, 1]
    h0 = 0.5 * (a + d)
    r = np.sqrt((0.5 * (a - d)) ** 2 + np.abs(b) ** 2)
    c = np.cos(r)
    sr = np.sinc(r / np.pi)
    out = np.empty(H.shape, complex)
    out[..., 0, 0] = c - 1j * sr * (a - h0)
    out[..., 1, 1] = c - 1j * sr * (d - h0)
    out[..., 0, 1] = -1j * sr * b
    out[..., 1, 0] = -1j * sr * np.conj(b)
    return out * np.exp(-1j * h0)[..., None, None]


def skew_part(Z):
    return 0.5 * (Z - np.conj(np.swapaxes(Z, -1, -2)))
