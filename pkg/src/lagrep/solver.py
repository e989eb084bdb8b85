"""Numerical realization of prescribed eigenvalue data.

Both solvers run Riemannian gradient descent on a product of unitary groups
(left-trivialized gradients, exponential retraction, Barzilai-Borwein steps
with Armijo backtracking).  Restarts and, for scans, many target tuples are
stacked along a leading batch axis so each iteration is a handful of
vectorized numpy calls.

Restart ``i`` always starts from the Haar sample drawn from
``numpy.random.default_rng([seed, i])``; restarts run in chunks and the
search stops after the first chunk containing a success.  Among the
successes of that chunk (or among all restarts on failure) the result is the
lowest residual, ties broken by the lowest restart index.
"""

from __future__ import annotations

import csv
import io as _io
import itertools
from dataclasses import dataclass, field

import numpy as np

from .lagrangian import Lagrangian, LagrangianTuple
from .numerics import TWO_PI, expm_skew, haar_unitary, skew_part, takagi_symmetric_unitary
from .representation import Representation
from .spectra import SpectrumTuple, feasible, integer_index, wall_inequalities

# Residual below which a successful run is considered fully polished.
POLISH_TARGET = 1e-24
STAGNATION_WINDOW = 60
MAX_BACKTRACKS = 30
PLATEAU_ITERS = 12
PLATEAU_RTOL = 1e-9
STATIONARY_GRAD = 1e-20


@dataclass(frozen=True)
class SolveOptions:
    max_iters: int = 2000
    restarts: int = 50
    step: float = 1.0
    tol_residual: float = 1e-8
    seed: int = 0
    chunk: int = 8

    def __post_init__(self):
        if self.max_iters < 1 or self.restarts < 1 or self.chunk < 1:
            raise ValueError("max_iters, restarts and chunk must be positive")
        if not self.step > 0 or not self.tol_residual > 0:
            raise ValueError("step and tol_residual must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class SolveOutcome:
    success: bool
    witness: object
    residual: float
    restarts_used: int
    reason: str = ""
    residual_floor: float = float("nan")
    residuals: list = field(default_factory=list)


# --- generic batched descent ---------------------------------------------------


def _inner(A, B):
    return np.sum((np.conj(A) * B).real.reshape(A.shape[0], -1), axis=1)


def riemannian_descent(value_grad, X0, max_iters, tol, step=1.0):
    """Minimize over stacks ``X0`` of shape ``(B, m, n, n)`` of unitaries.

    ``value_grad(X, rows)`` returns values and skew-hermitian gradients for
    left perturbations ``X -> exp(K) X``, where ``rows`` gives the batch
    index of every entry of ``X``.  Every batch row is independent.
    Returns the final points, values and iteration counts.
    """
    X = np.array(X0, dtype=complex)
    B = X.shape[0]
    f, G = value_grad(X, np.arange(B))
    g2 = _inner(G, G)
    t = step / np.maximum(np.sqrt(g2), 1e-12)
    active = f > POLISH_TARGET
    f_ref = f.copy()
    iters = np.zeros(B, dtype=int)
    flat = np.zeros(B, dtype=int)
    for it in range(max_iters):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xa, fa, Ga, ga = X[idx], f[idx], G[idx], g2[idx]
        tt = t[idx].copy()
        newX, newf, newG = Xa.copy(), fa.copy(), Ga.copy()
        accepted = np.zeros(idx.size, dtype=bool)
        pending = np.arange(idx.size)
        for _ in range(MAX_BACKTRACKS):
            U = expm_skew(-tt[pending, None, None, None] * Ga[pending])
            Xt = U @ Xa[pending]
            ft, Gt = value_grad(Xt, idx[pending])
            ok = ft <= fa[pending] - 1e-4 * tt[pending] * ga[pending]
            ok |= (ft < fa[pending]) & (fa[pending] < 1e-12)
            sel = pending[ok]
            newX[sel], newf[sel], newG[sel] = Xt[ok], ft[ok], Gt[ok]
            accepted[sel] = True
            pending = pending[~ok]
            if pending.size == 0:
                break
            tt[pending] *= 0.5
        s_vec = -tt[:, None, None, None] * Ga
        y_vec = newG - Ga
        sy = _inner(s_vec, y_vec)
        ss = _inner(s_vec, s_vec)
        bb = np.where(sy > 1e-300, ss / np.where(sy > 1e-300, sy, 1.0), 2.0 * tt)
        t[idx] = np.clip(bb, 1e-10, 10.0 * tt)
        flat[idx] = np.where(fa - newf < PLATEAU_RTOL * fa, flat[idx] + 1, 0)
        X[idx], f[idx], G[idx] = newX, newf, newG
        g2[idx] = _inner(newG, newG)
        iters[idx] += 1
        # rows stuck at a positive floor: the gradient has vanished
        stalled = ~accepted | ((g2[idx] < STATIONARY_GRAD) & (newf > tol))
        stalled |= (flat[idx] >= PLATEAU_ITERS) & (newf > tol)
        done = newf <= POLISH_TARGET
        if (it + 1) % STAGNATION_WINDOW == 0:
            slow = newf > 0.5 * f_ref[idx]
            stalled |= slow
            f_ref[idx] = newf
        active[idx[stalled | done]] = False
    return X, f, iters


# --- unitary formulation ---------------------------------------------------------


def _diag_phases(alpha):
    return np.exp(1j * TWO_PI * np.asarray(alpha))


def _unitary_gammas(V, D):
    """``gamma_s = V_s D_s V_s^*`` with ``V_0 = I``; ``V`` is ``(B, ell-1, n, n)``."""
    B, m, n, _ = V.shape
    ell = D.shape[-2]
    gam = np.empty((B, ell, n, n), complex)
    gam[:, 0] = np.broadcast_to(np.eye(n) * D[..., 0, None, :], (B, n, n))
    gam[:, 1:] = (V * D[..., 1:, None, :]) @ np.conj(np.swapaxes(V, -1, -2))
    return gam


def _unitary_value_grad(D):
    def value_grad(V, rows):
        gam = _unitary_gammas(V, D[rows])
        B, ell, n, _ = gam.shape
        prefix = [np.broadcast_to(np.eye(n, dtype=complex), (B, n, n))]
        for s in range(ell):
            prefix.append(prefix[-1] @ gam[:, s])
        suffix = [np.broadcast_to(np.eye(n, dtype=complex), (B, n, n))]
        for s in range(ell - 1, -1, -1):
            suffix.append(gam[:, s] @ suffix[-1])
        suffix = suffix[::-1]  # suffix[s] = gamma_s ... gamma_{ell-1}
        R = prefix[-1] - np.eye(n)
        f = np.einsum("bij,bij->b", np.conj(R), R).real
        G = np.empty((B, ell - 1, n, n), complex)
        for s in range(1, ell):
            BA = suffix[s + 1] @ prefix[s]
            C = gam[:, s] @ BA - BA @ gam[:, s]
            G[:, s - 1] = 2.0 * skew_part(C)
        return f, G

    return value_grad


def _initial_frames(seed, restart_ids, count, n):
    out = np.empty((len(restart_ids), count, n, n), complex)
    for k, i in enumerate(restart_ids):
        rng = np.random.default_rng([seed, int(i)])
        for j in range(count):
            out[k, j] = haar_unitary(n, rng)
    return out


def _check_target(a):
    if not isinstance(a, SpectrumTuple):
        raise TypeError("target must be a SpectrumTuple")
    if a.ell < 2:
        raise ValueError("need at least two conjugacy classes")
    if integer_index(a) is None:
        return f"index {float(np.sum(a.alpha)):.10f} is not an integer"
    return None


def _check_batch(targets):
    targets = list(targets)
    if any(not isinstance(a, SpectrumTuple) for a in targets):
        raise TypeError("targets must be SpectrumTuple instances")
    if len({(a.ell, a.n) for a in targets}) > 1:
        raise ValueError("all targets in a batch must share (ell, n)")
    return targets


def _run_restarts(targets, opts, n_vars, value_grad_factory, make_witness, trivial):
    """Shared restart driver over a list of targets of one shape."""
    P = len(targets)
    n = targets[0].n
    outcomes = [None] * P
    best = [None] * P  # (residual, restart index, X)
    all_res = [[] for _ in range(P)]
    pending = []
    for p, a in enumerate(targets):
        reason = _check_target(a)
        if reason:
            outcomes[p] = SolveOutcome(False, None, float("inf"), 0, reason)
        elif trivial(a):
            outcomes[p] = SolveOutcome(True, make_witness(a, None), 0.0, 0, "", 0.0, [0.0])
        else:
            pending.append(p)
    start = 0
    while pending and start < opts.restarts:
        ids = list(range(start, min(start + opts.chunk, opts.restarts)))
        X0 = _initial_frames(opts.seed, ids, n_vars, n)
        X0 = np.tile(X0, (len(pending), 1, 1, 1, 1)).reshape(-1, n_vars, n, n)
        vg = value_grad_factory([targets[p] for p in pending], len(ids))
        X, f, _ = riemannian_descent(vg, X0, opts.max_iters, opts.tol_residual, opts.step)
        f = f.reshape(len(pending), len(ids))
        X = X.reshape(len(pending), len(ids), n_vars, n, n)
        still = []
        for k, p in enumerate(pending):
            all_res[p].extend(f[k].tolist())
            j = int(np.lexsort((np.arange(len(ids)), f[k]))[0])
            cand = (float(f[k, j]), ids[j], X[k, j])
            if best[p] is None or cand[0] < best[p][0]:
                best[p] = cand
            if f[k, j] <= opts.tol_residual:
                outcomes[p] = SolveOutcome(
                    True, make_witness(targets[p], cand[2]), cand[0], ids[-1] + 1, "", min(all_res[p]), all_res[p]
                )
            else:
                still.append(p)
        pending = still
        start = ids[-1] + 1
    for p in pending:
        r, _, _ = best[p]
        outcomes[p] = SolveOutcome(
            False, None, r, opts.restarts, "residual did not reach tolerance", min(all_res[p]), all_res[p]
        )
    return outcomes


def _phases_batch(targets, reps):
    D = np.array([_diag_phases(a.alpha) for a in targets])
    return np.repeat(D, reps, axis=0)


def realize_unitary_batch(targets, opts=None):
    """:func:`realize_unitary` on many targets of the same shape at once."""
    opts = SolveOptions() if opts is None else opts
    targets = _check_batch(targets)
    if not targets:
        return []
    ell, n = targets[0].ell, targets[0].n

    def factory(tlist, reps):
        return _unitary_value_grad(_phases_batch(tlist, reps))

    def witness(a, V):
        D = _diag_phases(a.alpha)[None]
        if V is None:
            V = np.broadcast_to(np.eye(n, dtype=complex), (1, ell - 1, n, n))
        gam = _unitary_gammas(np.asarray(V)[None] if np.ndim(V) == 3 else V, D)[0]
        return Representation(gam)

    def trivial(a):
        return bool(np.all(a.alpha == 0.0))

    return _run_restarts(targets, opts, ell - 1, factory, witness, trivial)


def realize_unitary(a, opts=None):
    """Search for unitaries in the prescribed classes with product ``I``."""
    return realize_unitary_batch([a], opts)[0]


# --- Lagrangian formulation -------------------------------------------------------


def _eig2_normal(A):
    """Closed-form eigenpairs of a stack of normal 2x2 matrices (unitary ``V``)."""
    a, b, c, d = A[..., 0, 0], A[..., 0, 1], A[..., 1, 0], A[..., 1, 1]
    half = 0.5 * (a + d)
    root = np.sqrt(0.25 * (a - d) ** 2 + b * c)
    w = np.stack([half + root, half - root], axis=-1)
    # two candidate eigenvectors for w[0]; keep the better conditioned one
    u1 = np.stack([b, w[..., 0] - a], axis=-1)
    u2 = np.stack([w[..., 0] - d, c], axis=-1)
    n1 = np.linalg.norm(u1, axis=-1)
    n2 = np.linalg.norm(u2, axis=-1)
    u = np.where((n1 >= n2)[..., None], u1, u2)
    nu = np.maximum(n1, n2)
    scalar = nu < 1e-14
    u = np.where(scalar[..., None], np.array([1.0, 0.0]), u / np.where(scalar, 1.0, nu)[..., None])
    V = np.empty(A.shape, complex)
    V[..., :, 0] = u
    V[..., 0, 1] = -np.conj(u[..., 1])
    V[..., 1, 1] = np.conj(u[..., 0])
    return w, V


def _sorted_eig(A):
    """Eigenpairs sorted by angle; also returns ``V^{-1}``."""
    if A.shape[-1] == 2:
        w, V = _eig2_normal(A)
    else:
        w, V = np.linalg.eig(A)
    ang = np.mod(np.angle(w) / TWO_PI, 1.0)
    order = np.argsort(ang, axis=-1)
    w = np.take_along_axis(w, order, axis=-1)
    V = np.take_along_axis(V, order[..., None, :], axis=-1)
    Vinv = np.conj(np.swapaxes(V, -1, -2)) if A.shape[-1] == 2 else np.linalg.inv(V)
    return w, V, Vinv


def _lagrangian_value_grad(Bt):
    """``Bt`` holds target eigenvalues ``exp(2 pi i alpha)``, shape ``(B, ell, n)``."""

    def value_grad(g, rows):
        Bsz, m, n, _ = g.shape
        ell = m + 1
        M = np.empty((Bsz, ell, n, n), complex)
        M[:, 0] = np.eye(n)
        M[:, 1:] = g @ np.swapaxes(g, -1, -2)
        Mc = np.conj(M)
        gam = M @ np.roll(Mc, -1, axis=1)
        lam, V, Vinv = _sorted_eig(gam)
        tgt = Bt[rows]
        costs = np.stack([np.sum(np.abs(lam - np.roll(tgt, -k, axis=-1)) ** 2, axis=-1) for k in range(n)], axis=-1)
        k = np.argmin(costs, axis=-1)
        f = np.sum(np.take_along_axis(costs, k[..., None], axis=-1)[..., 0], axis=-1)
        shift = (np.arange(n)[None, None, :] + k[..., None]) % n
        b = np.take_along_axis(tgt, shift, axis=-1)
        W = (V * (np.conj(b) * lam)[..., None, :]) @ Vinv
        Gs = 2.0 * skew_part(W)
        # dF/dK_s = (I - Ad_s) G_s + (I - Ad_s) Ad_{s-1} G_{s-1}
        prev = np.roll(Gs, 1, axis=1)
        ad_prev = np.roll(M, 1, axis=1) @ np.conj(prev) @ np.roll(Mc, 1, axis=1)
        H = Gs + ad_prev
        grad = H - M @ np.conj(H) @ Mc
        return f, skew_part(grad[:, 1:])

    return value_grad


def realize_lagrangian_batch(targets, opts=None):
    """:func:`realize_lagrangian` on many targets of the same shape at once."""
    opts = SolveOptions() if opts is None else opts
    targets = _check_batch(targets)
    if not targets:
        return []
    ell, n = targets[0].ell, targets[0].n

    def factory(tlist, reps):
        return _lagrangian_value_grad(_phases_batch(tlist, reps))

    def witness(a, g):
        if g is None:
            return LagrangianTuple(tuple(Lagrangian.standard(n) for _ in range(ell)))
        frames = [np.eye(n, dtype=complex)] + list(g)
        return LagrangianTuple.from_frames(frames)

    def trivial(a):
        return bool(np.all(a.alpha == 0.0))

    return _run_restarts(targets, opts, ell - 1, factory, witness, trivial)


def realize_lagrangian(a, opts=None):
    """Search for Lagrangians ``L_1 = R^n, L_2, ..., L_ell`` realizing ``a``.

    The objective is ``sum_s class_distance(tau2(L_s, L_{s+1}), alpha^s)``;
    the product relation holds by construction.
    """
    return realize_lagrangian_batch([a], opts)[0]


# --- gluing ---------------------------------------------------------------------


def _anchor(lam):
    """Move a tuple so its first Lagrangian is ``R^n`` (conjugation; spectra unchanged)."""
    u = lam[0].frame.conj().T
    moved = lam.moved_by(u)
    n = lam.n
    return LagrangianTuple((Lagrangian.standard(n),) + tuple(moved)[1:])


def _orthogonal_diagonalizer(M):
    """Real orthogonal ``h`` and ascending angles ``a`` with ``M = h^T diag(e^{2 pi i a}) h``."""
    g = takagi_symmetric_unitary(M)
    # each column of a takagi frame is a real unit vector times a phase
    n = M.shape[0]
    pivot = g[np.argmax(np.abs(g), axis=0), np.arange(n)]
    h = (g / (pivot / np.abs(pivot))[None, :]).real.T
    d = np.diag(h @ M @ h.T)
    a = np.mod(np.angle(d) / TWO_PI, 1.0)
    order = np.argsort(a, kind="stable")
    return h[order], a[order]


def compose_triple(sol_ell, sol_3, tol=1e-7):
    """Glue a solution for ``ell`` classes and one for three classes.

    ``sol_ell = (L_0, ..., L_{ell-1})`` realizes ``A_1, ..., A_{ell-1}`` and
    the class of ``A_ell A_{ell+1}`` as its last factor.  ``sol_3 = (L_0,
    L', L'')`` realizes the classes of ``A_{ell+1}^{-1}``, ``A_ell^{-1}`` and
    the same joint class.  Both tuples are first moved so that they start at
    ``R^n``.  A real orthogonal ``g`` with ``g L'' = L_{ell-1}`` exists
    because both joint factors are symmetric with equal spectra; the result is
    ``(L_0, ..., L_{ell-1}, g L')``, realizing ``A_1, ..., A_{ell+1}``.
    """
    if sol_3.ell != 3:
        raise ValueError("the second tuple must have three Lagrangians")
    if sol_ell.n != sol_3.n:
        raise ValueError("tuples have different dimensions")
    lam = _anchor(sol_ell)
    tri = _anchor(sol_3)
    ell = lam.ell
    M_last = lam[ell - 1].M
    M_pp = tri[2].M
    h1, a1 = _orthogonal_diagonalizer(M_last)
    h2, a2 = _orthogonal_diagonalizer(M_pp)
    mismatch = float(np.max(np.abs(np.exp(1j * TWO_PI * a1) - np.exp(1j * TWO_PI * a2))))
    if mismatch > TWO_PI * tol:
        raise ValueError(f"joint classes differ: spectra {np.round(a1, 9).tolist()} vs {np.round(a2, 9).tolist()}")
    g = h1.T @ h2
    err = float(np.linalg.norm(g @ M_pp @ g.T - M_last))
    if err > TWO_PI * tol * max(1, lam.n):
        raise ValueError(f"alignment failed: |g M'' g^T - M| = {err:.2e}")
    Lnew = tri[1].moved_by(g.astype(complex))
    return LagrangianTuple(tuple(lam) + (Lnew,))


# --- chamber scans --------------------------------------------------------------


def _row_units(n, K):
    return np.array(list(itertools.combinations(range(1, K), n)), dtype=int)


def grid_points(n, I, resolution, ell=3):
    """All grid tuples with distinct nonzero angles and index ``I``.

    Angles are multiples of ``resolution``; the result is an integer array
    of shape ``(N, ell, n)`` in units of ``resolution``.
    """
    K = int(round(1.0 / resolution))
    if abs(K * resolution - 1.0) > 1e-9:
        raise ValueError("resolution must divide 1")
    rows = _row_units(n, K)
    sums = rows.sum(axis=1)
    by_sum = {s: rows[sums == s] for s in np.unique(sums)}
    target = I * K
    out = []
    for prefix in itertools.product(range(len(rows)), repeat=ell - 1):
        need = target - sums[list(prefix)].sum()
        last = by_sum.get(need)
        if last is None:
            continue
        head = np.broadcast_to(rows[list(prefix)], (len(last), ell - 1, n))
        out.append(np.concatenate([head, last[:, None, :]], axis=1))
    if not out:
        return np.zeros((0, ell, n), dtype=int)
    return np.concatenate(out)


def sample_grid_points(n, I, resolution, count, rng, ell=3, max_tries=1_000_000):
    """Uniform samples (with replacement) from :func:`grid_points` without enumerating it."""
    K = int(round(1.0 / resolution))
    rows = _row_units(n, K)
    sums = rows.sum(axis=1)
    by_sum = {int(s): rows[sums == s] for s in np.unique(sums)}
    cap = max(len(v) for v in by_sum.values())
    target = I * K
    out = []
    for _ in range(max_tries):
        if len(out) == count:
            break
        head = rows[rng.integers(len(rows), size=ell - 1)]
        last = by_sum.get(int(target - head.sum()))
        if last is None or rng.random() * cap >= len(last):
            continue
        out.append(np.concatenate([head, last[rng.integers(len(last))][None]], axis=0))
    if len(out) < count:
        raise RuntimeError("could not draw enough grid points; is the index plane empty?")
    return np.array(out, dtype=int)


def margin_from_walls(alpha, n, I):
    """Distance of each tuple to the nearest wall of index ``I`` (``inf`` if none)."""
    walls = wall_inequalities(n, I) if n in (2, 3) else []
    if not walls:
        return np.full(len(alpha), np.inf)
    ar = np.arange(alpha.shape[1])
    vals = [np.abs(alpha[:, ar, np.array(pos) - 1].sum(axis=1) - K) for pos, _, K in walls]
    return np.min(np.array(vals), axis=0)


@dataclass
class ScanReport:
    n: int
    I: int
    resolution: float
    margin: float
    alpha: np.ndarray
    off_wall: np.ndarray
    wall_margin: np.ndarray
    predicate: np.ndarray
    unitary_success: np.ndarray
    unitary_residual: np.ndarray
    lagrangian_success: np.ndarray
    lagrangian_residual: np.ndarray

    @property
    def evaluated(self):
        return int(np.sum(self.off_wall))

    def agreement(self):
        m = self.off_wall
        p, u, l = self.predicate[m], self.unitary_success[m], self.lagrangian_success[m]
        total = max(1, int(m.sum()))
        return {
            "points": int(len(self.alpha)),
            "evaluated": int(m.sum()),
            "feasible": int(p.sum()),
            "unitary_agree": float(np.sum(p == u) / total),
            "lagrangian_agree": float(np.sum(p == l) / total),
            "all_agree": float(np.sum((p == u) & (p == l)) / total),
            "solver_success_predicate_fails": int(np.sum(~p & (u | l))),
        }

    def disagreements(self):
        m = self.off_wall & ((self.predicate != self.unitary_success) | (self.predicate != self.lagrangian_success))
        out = []
        for k in np.flatnonzero(m):
            out.append(
                {
                    "alpha": self.alpha[k].tolist(),
                    "predicate": bool(self.predicate[k]),
                    "unitary_residual": float(self.unitary_residual[k]),
                    "lagrangian_residual": float(self.lagrangian_residual[k]),
                }
            )
        return out

    def to_csv(self):
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        ell, n = self.alpha.shape[1:]
        head = [f"alpha_{s + 1}_{j + 1}" for s in range(ell) for j in range(n)]
        w.writerow(
            head
            + ["off_wall", "wall_margin", "predicate", "unitary_success", "unitary_residual"]
            + ["lagrangian_success", "lagrangian_residual"]
        )
        for k in range(len(self.alpha)):
            row = [repr(float(x)) for x in self.alpha[k].ravel()]
            row += [int(self.off_wall[k]), repr(float(self.wall_margin[k])), int(self.predicate[k])]
            if self.off_wall[k]:
                row += [int(self.unitary_success[k]), repr(float(self.unitary_residual[k]))]
                row += [int(self.lagrangian_success[k]), repr(float(self.lagrangian_residual[k]))]
            else:
                row += ["", "", "", ""]
            w.writerow(row)
        return buf.getvalue()


def scan_points(alpha, n, I, resolution, opts, margin=0.02, batch=4096):
    """Evaluate the predicate and both solvers on given tuples of index ``I``."""
    alpha = np.asarray(alpha, dtype=float)
    N = len(alpha)
    wm = margin_from_walls(alpha, n, I)
    off = wm > margin
    pred = np.array([feasible(SpectrumTuple(a)).feasible for a in alpha], dtype=bool)
    us = np.zeros(N, bool)
    ls = np.zeros(N, bool)
    ur = np.full(N, np.nan)
    lr = np.full(N, np.nan)
    idx = np.flatnonzero(off)
    for start in range(0, len(idx), batch):
        part = idx[start:start + batch]
        targets = [SpectrumTuple(alpha[k]) for k in part]
        for solver, succ, res in (
            (realize_unitary_batch, us, ur),
            (realize_lagrangian_batch, ls, lr),
        ):
            for k, o in zip(part, solver(targets, opts)):
                succ[k] = o.success
                res[k] = o.residual
    return ScanReport(n, I, resolution, margin, alpha, off, wm, pred, us, ur, ls, lr)


# Budget used for grid scans: a few restarts per point keep the full U(2)
# grid tractable while single-restart misses are rare.
SCAN_OPTIONS = SolveOptions(restarts=4, chunk=2, max_iters=2000)


def chamber_scan(n, I, resolution=0.05, opts=None, margin=0.02, samples=None, seed=0):
    """Compare the tabulated inequalities with both solvers on an index plane.

    ``n = 2`` scans the full grid; ``n = 3`` (or any ``samples`` value) draws
    that many uniform grid points instead.
    """
    if n not in (2, 3):
        raise ValueError("chamber scans are only supported for n = 2, 3")
    opts = SCAN_OPTIONS if opts is None else opts
    if samples is None and n == 3:
        samples = 100
    if samples is None:
        units = grid_points(n, I, resolution)
    else:
        units = sample_grid_points(n, I, resolution, samples, np.random.default_rng(seed))
    return scan_points(units * resolution, n, I, resolution, opts, margin)
