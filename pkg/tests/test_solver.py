import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lagrep.lagrangian import Lagrangian, LagrangianTuple
from lagrep.numerics import expm_skew, haar_unitary, spectrum
from lagrep.representation import phi_tilde, spectral_projection
from lagrep.solver import (
    SCAN_OPTIONS,
    SolveOptions,
    _diag_phases,
    _eig2_normal,
    _inner,
    _lagrangian_value_grad,
    _unitary_value_grad,
    chamber_scan,
    compose_triple,
    grid_points,
    margin_from_walls,
    realize_lagrangian,
    realize_lagrangian_batch,
    realize_unitary,
    realize_unitary_batch,
    sample_grid_points,
    scan_points,
)
from lagrep.spectra import SpectrumTuple, feasible, multiplicity_structure, wall_margin

from conftest import random_skew, random_tuple

seeds = st.integers(min_value=0, max_value=2**32 - 1)
FAST = SolveOptions(restarts=8, chunk=4)


def circ(a, b):
    d = np.abs(np.asarray(a) - np.asarray(b))
    return np.minimum(d, 1 - d)


def assert_unitary_witness(o, a):
    assert o.success and o.residual <= 1e-8
    assert np.max(circ(spectral_projection(o.witness).alpha, a.alpha)) < 1e-7
    P = o.witness.partial_products()[-1]
    assert np.linalg.norm(P - np.eye(a.n)) < 1e-4


def assert_lagrangian_witness(o, a):
    assert o.success and o.residual <= 1e-8
    rho = phi_tilde(o.witness)
    assert np.max(circ(spectral_projection(rho).alpha, a.alpha)) < 1e-7
    assert np.linalg.norm(rho.partial_products()[-1] - np.eye(a.n)) < 1e-10


# --- options ------------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs",
    [{"restarts": 0}, {"max_iters": 0}, {"chunk": 0}, {"step": 0.0}, {"tol_residual": -1.0}, {"seed": -1}],
)
def test_options_validation(kwargs):
    with pytest.raises(ValueError):
        SolveOptions(**kwargs)


# --- building blocks ----------------------------------------------------------


def test_eig2_normal_matches_numpy(rng):
    A = np.array([haar_unitary(2, rng) for _ in range(200)] + [np.eye(2), np.diag([1j, 1j])])
    w, V = _eig2_normal(A)
    np.testing.assert_allclose(V @ np.conj(np.swapaxes(V, -1, -2)), np.broadcast_to(np.eye(2), A.shape), atol=1e-12)
    np.testing.assert_allclose(A @ V, V * w[:, None, :], atol=1e-12)


def _fd_check(value_grad, X, rng, h=1e-6):
    rows = np.arange(X.shape[0])
    f, G = value_grad(X, rows)
    K = np.array([[random_skew(X.shape[-1], rng) for _ in range(X.shape[1])] for _ in range(X.shape[0])])
    fp, _ = value_grad(expm_skew(h * K) @ X, rows)
    fm, _ = value_grad(expm_skew(-h * K) @ X, rows)
    np.testing.assert_allclose((fp - fm) / (2 * h), _inner(G, K), rtol=1e-5, atol=1e-7)


@pytest.mark.parametrize("n, ell", [(2, 3), (3, 3), (2, 4)])
def test_unitary_gradient_matches_finite_differences(n, ell):
    rng = np.random.default_rng(n * ell)
    a = spectral_projection(phi_tilde(random_tuple(n, ell, rng)))
    V = np.array([[haar_unitary(n, rng) for _ in range(ell - 1)] for _ in range(3)])
    D = np.repeat(_diag_phases(a.alpha)[None], 3, axis=0)
    _fd_check(_unitary_value_grad(D), V, rng)


@pytest.mark.parametrize("n, ell", [(2, 3), (3, 3), (3, 4)])
def test_lagrangian_gradient_matches_finite_differences(n, ell):
    rng = np.random.default_rng(10 + n * ell)
    a = spectral_projection(phi_tilde(random_tuple(n, ell, rng)))
    g = np.array([[haar_unitary(n, rng) for _ in range(ell - 1)] for _ in range(3)])
    Bt = np.repeat(_diag_phases(a.alpha)[None], 3, axis=0)
    _fd_check(_lagrangian_value_grad(Bt), g, rng)


# --- realize_unitary ----------------------------------------------------------


def test_zero_tuple_is_trivial():
    a = SpectrumTuple(np.zeros((3, 2)))
    o = realize_unitary(a)
    assert o.success and o.residual == 0.0
    np.testing.assert_allclose(o.witness.gammas, np.broadcast_to(np.eye(2), (3, 2, 2)))
    o = realize_lagrangian(a)
    assert o.success and o.residual == 0.0
    assert all(np.array_equal(L.M, np.eye(2)) for L in o.witness)


def test_feasible_u2_point_both_solvers():
    a = SpectrumTuple([[0.25, 0.75]] * 3)
    assert_unitary_witness(realize_unitary(a, FAST), a)
    assert_lagrangian_witness(realize_lagrangian(a, FAST), a)


def test_infeasible_u2_point_fails_everywhere():
    a = SpectrumTuple([[0.05, 0.95], [0.2, 0.3], [0.2, 0.3]])
    for solver in (realize_unitary, realize_lagrangian):
        o = solver(a, SolveOptions(restarts=50))
        assert not o.success
        assert o.restarts_used == 50 and len(o.residuals) == 50
        assert o.residual_floor > 1e-3
        assert o.witness is None and o.reason


def test_fractional_index_fails_immediately():
    o = realize_unitary(SpectrumTuple([[1 / 6, 1 / 2, 5 / 6]] * 3))
    assert not o.success and "not an integer" in o.reason and o.restarts_used == 0


def test_target_type_and_batch_shape_errors():
    with pytest.raises(TypeError):
        realize_unitary(np.zeros((3, 2)))
    with pytest.raises(ValueError):
        realize_unitary_batch([SpectrumTuple(np.zeros((3, 2))), SpectrumTuple(np.zeros((3, 3)))])
    assert realize_lagrangian_batch([]) == []


def test_solver_is_deterministic():
    a = SpectrumTuple([[0.2, 0.7], [0.1, 0.5], [0.1, 0.4]])
    o1 = realize_lagrangian(a, SolveOptions(seed=7, restarts=4))
    o2 = realize_lagrangian(a, SolveOptions(seed=7, restarts=4))
    assert o1.residual == o2.residual
    assert all(np.array_equal(x.M, y.M) for x, y in zip(o1.witness, o2.witness))


def test_batching_does_not_change_outcomes():
    targets = [
        SpectrumTuple([[0.2, 0.7], [0.1, 0.5], [0.1, 0.4]]),
        SpectrumTuple([[0.05, 0.95], [0.2, 0.3], [0.2, 0.3]]),
        SpectrumTuple([[0.25, 0.75]] * 3),
    ]
    opts = SolveOptions(restarts=4, chunk=2)
    batch = realize_unitary_batch(targets, opts)
    for a, ob in zip(targets, batch):
        os_ = realize_unitary(a, opts)
        assert os_.success == ob.success
        assert os_.residual == ob.residual


@given(seeds)
def test_more_restarts_never_lose_a_success(seed):
    a = SpectrumTuple([[0.2, 0.7], [0.1, 0.5], [0.1, 0.4]])
    small = realize_lagrangian(a, SolveOptions(seed=seed, restarts=2, chunk=1, max_iters=300))
    big = realize_lagrangian(a, SolveOptions(seed=seed, restarts=6, chunk=1, max_iters=300))
    if small.success:
        assert big.success
        assert big.restarts_used == small.restarts_used
        assert big.residual == small.residual


@pytest.mark.parametrize("n, ell", [(1, 3), (2, 3), (2, 4), (3, 3)])
def test_projected_random_tuples_are_realized(n, ell):
    rng = np.random.default_rng(100 + n * ell)
    for _ in range(2):
        a = spectral_projection(phi_tilde(random_tuple(n, ell, rng)))
        assert_unitary_witness(realize_unitary(a, FAST), a)
        assert_lagrangian_witness(realize_lagrangian(a, FAST), a)


def test_u3_twelfths_certificate():
    # three copies of (1/12, 4/12, 7/12) are realizable, so the I = 3 walls must admit them
    a = SpectrumTuple([[1 / 12, 4 / 12, 7 / 12]] * 3)
    assert feasible(a).feasible
    assert_unitary_witness(realize_unitary(a, FAST), a)
    assert_lagrangian_witness(realize_lagrangian(a, FAST), a)


def test_feasible_u3_index_four_sample():
    rng = np.random.default_rng(3)
    units = sample_grid_points(3, 4, 0.05, 200, rng)
    for u in units:
        a = SpectrumTuple(u * 0.05)
        if wall_margin(a) > 0.05 and feasible(a).feasible:
            break
    else:
        pytest.fail("no feasible sample found")
    assert_unitary_witness(realize_unitary(a, FAST), a)
    assert_lagrangian_witness(realize_lagrangian(a, FAST), a)


def test_spectra_of_solver_witness_cluster_like_target():
    a = SpectrumTuple([[0.2, 0.7], [0.1, 0.5], [0.1, 0.4]])
    o = realize_lagrangian(a, FAST)
    assert multiplicity_structure(spectral_projection(phi_tilde(o.witness))) == multiplicity_structure(a)


# --- gluing -------------------------------------------------------------------


def test_compose_trivial():
    L0 = Lagrangian.standard(2)
    out = compose_triple(LagrangianTuple((L0,) * 3), LagrangianTuple((L0,) * 3))
    assert out.ell == 4
    assert all(np.linalg.norm(L.M - np.eye(2)) < 1e-12 for L in out)


def test_compose_from_a_known_four_tuple(rng):
    lam = random_tuple(3, 4, rng)
    u = haar_unitary(3, rng)
    sol_ell = LagrangianTuple((lam[0], lam[1], lam[2])).moved_by(haar_unitary(3, rng))
    sol_3 = LagrangianTuple((lam[0], lam[3], lam[2])).moved_by(u)
    out = compose_triple(sol_ell, sol_3)
    got = spectral_projection(phi_tilde(out)).alpha
    want = spectral_projection(phi_tilde(lam)).alpha
    assert np.max(circ(got, want)) < 1e-7


def test_compose_solver_outputs():
    rng = np.random.default_rng(17)
    lam = random_tuple(2, 4, rng)
    want = spectral_projection(phi_tilde(lam)).alpha
    joint = spectrum(phi_tilde(LagrangianTuple((lam[0], lam[2]))).gammas[1])
    inv = lambda row: np.sort(np.mod(1.0 - row, 1.0))  # noqa: E731
    t_ell = SpectrumTuple(np.array([want[0], want[1], joint]))
    t_3 = SpectrumTuple(np.array([inv(want[3]), inv(want[2]), joint]))
    s_ell, s_3 = realize_lagrangian(t_ell, FAST), realize_lagrangian(t_3, FAST)
    assert s_ell.success and s_3.success
    out = compose_triple(s_ell.witness, s_3.witness)
    got = spectral_projection(phi_tilde(out)).alpha
    assert np.max(circ(got, want)) < 1e-7


def test_compose_rejects_mismatched_joint_class(rng):
    a, b = random_tuple(2, 3, rng), random_tuple(2, 3, rng)
    with pytest.raises(ValueError, match="joint classes differ"):
        compose_triple(a, b)
    with pytest.raises(ValueError):
        compose_triple(a, random_tuple(2, 4, rng))


# --- grids and scans ----------------------------------------------------------


@pytest.mark.parametrize("n, I, res", [(2, 2, 0.125), (2, 3, 0.1), (3, 4, 0.125)])
def test_grid_points_match_brute_force(n, I, res):
    K = int(round(1 / res))
    rows = list(itertools.combinations(range(1, K), n))
    brute = {p for p in itertools.product(rows, repeat=3) if sum(map(sum, p)) == I * K}
    got = {tuple(tuple(int(x) for x in r) for r in g) for g in grid_points(n, I, res)}
    assert got == brute


def test_grid_resolution_must_divide_one():
    with pytest.raises(ValueError):
        grid_points(2, 3, 0.3)


def test_sample_grid_points_lie_on_the_plane(rng):
    units = sample_grid_points(3, 5, 0.05, 50, rng)
    assert units.shape == (50, 3, 3)
    assert np.all(units.sum(axis=(1, 2)) == 100)
    assert np.all(np.diff(units, axis=2) > 0) and np.all(units > 0) and np.all(units < 20)


def test_margin_from_walls_matches_wall_margin():
    units = grid_points(2, 3, 0.1)
    alpha = units * 0.1
    m = margin_from_walls(alpha, 2, 3)
    for k in range(0, len(alpha), 7):
        assert abs(m[k] - wall_margin(SpectrumTuple(alpha[k]))) < 1e-12


def test_scan_index_one_is_empty():
    rep = chamber_scan(2, 1, resolution=0.1)
    stats = rep.agreement()
    assert stats["points"] > 0
    assert stats["feasible"] == 0
    assert stats["all_agree"] == 1.0


def test_scan_report_csv_and_agreement():
    units = grid_points(2, 3, 0.1)
    rep = scan_points(units * 0.1, 2, 3, 0.1, SCAN_OPTIONS)
    lines = rep.to_csv().strip().split("\n")
    assert len(lines) == len(units) + 1
    assert lines[0].startswith("alpha_1_1,alpha_1_2,alpha_2_1")
    stats = rep.agreement()
    assert stats["evaluated"] == rep.evaluated
    assert stats["solver_success_predicate_fails"] == 0
    assert stats["all_agree"] >= 0.99
    assert len(rep.disagreements()) == round((1 - stats["all_agree"]) * stats["evaluated"])


def test_chamber_scan_unsupported_dimension():
    with pytest.raises(ValueError):
        chamber_scan(4, 6)
