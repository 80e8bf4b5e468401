import math

import numpy as np
import pytest

from mubforge.classes import build_classes_2n1, fixture_d4
from mubforge.entropy import (
    BudgetExceededError,
    avg_entropy,
    bounds,
    hermitian_eigmax,
    iter_sweep_rows,
    minimize_avg_entropy,
    outcome_distribution,
    pvec_operator,
    renyi_entropy,
    sample_max_eigen,
    sweep_max_eigen,
)
from mubforge.mub import build_mub_set, phase_ramp_states

TARGET_D4_L4 = 0.6780719051126378  # -log2(5/8)
TARGET_D4_L3 = 0.5849625007211562  # -log2(2/3)


@pytest.fixture(scope="module")
def ms4():
    return build_mub_set(fixture_d4(4))


@pytest.fixture(scope="module")
def ms3():
    return build_mub_set(fixture_d4(3))


def test_renyi_on_own_basis_element(ms4):
    psi = ms4.bases[0].vectors[:, 2]
    for alpha in (0.5, 1, 2, 7, math.inf):
        assert abs(renyi_entropy(ms4.bases[0], psi, alpha)) < 1e-9


def test_renyi_on_unbiased_state(ms4):
    psi = ms4.bases[1].vectors[:, 0]  # unbiased to basis 0
    for alpha in (0.5, 1, 2, math.inf):
        assert abs(renyi_entropy(ms4.bases[0], psi, alpha) - 2.0) < 1e-9


def test_renyi_ordering_random_states(ms4):
    rng = np.random.default_rng(41)
    for _ in range(200):
        x = rng.normal(size=8)
        psi = x[:4] + 1j * x[4:]
        psi /= np.linalg.norm(psi)
        B = ms4.bases[0]
        h1 = renyi_entropy(B, psi, 1)
        h2 = renyi_entropy(B, psi, 2)
        hinf = renyi_entropy(B, psi, math.inf)
        assert 2.0 + 1e-12 >= h1 >= h2 - 1e-12
        assert h2 >= hinf - 1e-12
        assert hinf >= -1e-12


def test_renyi_rejects_bad_input(ms4):
    with pytest.raises(ValueError):
        renyi_entropy(ms4.bases[0], np.array([1.0, 1.0, 0, 0]), 2)
    psi = ms4.bases[0].vectors[:, 0]
    with pytest.raises(ValueError):
        renyi_entropy(ms4.bases[0], psi, 0)
    with pytest.raises(ValueError):
        renyi_entropy(ms4.bases[0], psi, -1)


def test_density_matrix_input(ms4):
    rho = np.eye(4, dtype=complex) / 4
    assert abs(avg_entropy(ms4, rho, math.inf) - 2.0) < 1e-12
    p = outcome_distribution(ms4.bases[2], rho)
    assert np.allclose(p, 0.25)


def test_basis_element_on_complete_set():
    # a basis element scores 0 in its own basis and log2(d) in the other L-1,
    # the ceiling any state can reach once one term vanishes
    ms = build_mub_set(build_classes_2n1(2))
    psi = ms.bases[0].vectors[:, 1]
    for alpha in (1, 2, math.inf):
        want = (ms.L - 1) / ms.L * 2.0
        assert abs(avg_entropy(ms, psi, alpha) - want) < 1e-9


def test_avg_entropy_alpha_monotone(ms4):
    rng = np.random.default_rng(43)
    alphas = [0.7, 1, 1.5, 2, 5, 20, math.inf]
    for _ in range(50):
        x = rng.normal(size=8)
        psi = (x[:4] + 1j * x[4:])
        psi /= np.linalg.norm(psi)
        vals = [avg_entropy(ms4, psi, a) for a in alphas]
        for lo, hi in zip(vals[1:], vals[:-1]):
            assert lo <= hi + 1e-12


def test_bounds_values():
    bs = bounds(4, 4)
    assert abs(bs.small_L - TARGET_D4_L4) < 1e-12
    assert abs(bs.small_L + math.log2(5 / 8)) < 1e-12
    bs2 = bounds(2, 4)
    assert abs(bs2.small_L - bs2.deutsch) < 1e-12
    assert abs(bs2.deutsch + math.log2(3 / 4)) < 1e-12
    bs3 = bounds(3, 4)
    assert abs(bs3.small_L - TARGET_D4_L3) < 1e-12


def test_bounds_equal_at_L_eq_d():
    for d in (2, 4, 8, 16, 32):
        bs = bounds(d, d)
        assert abs(bs.small_L - bs.large_L) < 1e-12


def test_bounds_large_L_regime():
    bs = bounds(9, 8)
    assert bs.large_L > bs.small_L
    assert bs.best == bs.large_L


def test_pvec_operator_forms(ms4):
    b = (0, 1, 2, 3)
    mean = pvec_operator(ms4, b, "mean")
    total = pvec_operator(ms4, b, "sum")
    assert np.allclose(total.matrix, 4 * mean.matrix)
    assert abs(np.trace(mean.matrix) - 1) < 1e-12
    assert abs(np.trace(total.matrix) - 4) < 1e-12
    assert np.max(np.abs(mean.matrix - mean.matrix.conj().T)) < 1e-12
    with pytest.raises(IndexError):
        pvec_operator(ms4, (0, 1, 2, 9))
    with pytest.raises(ValueError):
        pvec_operator(ms4, (0, 1, 2))
    with pytest.raises(ValueError):
        pvec_operator(ms4, b, "other")


def test_pvec_single_basis_is_projector(ms4):
    P = pvec_operator([ms4.bases[0]], (2,), "mean").matrix
    assert np.allclose(P @ P, P, atol=1e-12)
    lam, _ = hermitian_eigmax(P)
    assert abs(lam - 1) < 1e-12


def test_pvec_eigenvalues_below_both_bounds(ms4):
    # mean-form top eigenvalue never exceeds either zeta expression
    L, d = 4, 4
    z1 = (1 / L) * (1 + (L - 1) / math.sqrt(d))
    z2 = (1 / d) * (1 + (d - 1) / math.sqrt(L))
    for b, lam in iter_sweep_rows(ms4):
        assert lam <= z1 + 1e-10
        assert lam <= z2 + 1e-10


def test_hermitian_eigmax_basics():
    lam, v = hermitian_eigmax(np.eye(3))
    assert lam == 1.0
    assert np.allclose(v, [1, 0, 0])
    lam, v = hermitian_eigmax(np.diag([0.1, 0.9]))
    assert abs(lam - 0.9) < 1e-15
    assert np.allclose(np.abs(v), [0, 1])
    with pytest.raises(ValueError):
        hermitian_eigmax(np.array([[0, 1], [0, 0]]))


def test_hermitian_eigmax_matches_full_spectrum():
    rng = np.random.default_rng(47)
    for _ in range(30):
        A = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        M = (A + A.conj().T) / 2
        lam, v = hermitian_eigmax(M)
        assert abs(lam - np.linalg.eigvalsh(M)[-1]) < 1e-10
        assert np.linalg.norm(M @ v - lam * v) < 1e-10


def test_sweep_fixture_l4(ms4):
    res = sweep_max_eigen(ms4)
    assert res.count == 256
    assert abs(res.lambda_star - 0.625) < 1e-10
    assert abs(res.min_avg_entropy - TARGET_D4_L4) < 1e-10


def test_sweep_fixture_l3(ms3):
    res = sweep_max_eigen(ms3)
    assert abs(res.lambda_star - 2 / 3) < 1e-10
    assert abs(res.min_avg_entropy - TARGET_D4_L3) < 1e-10


def test_sweep_d2_closed_form():
    # single qubit, two bases: top eigenvalue is (1 + 1/sqrt(2))/2 for every
    # string; cross-checked against a Bloch-circle grid oracle
    pair = build_mub_set(build_classes_2n1(1)).bases[:2]
    res = sweep_max_eigen(pair)
    want = (1 + 1 / math.sqrt(2)) / 2
    assert abs(res.lambda_star - want) < 1e-12
    # oracle: max over theta of (cos^2(t/2) + cos^2((t - pi/2)/2)) / 2
    ts = np.linspace(0, 2 * np.pi, 200001)
    vals = (np.cos(ts / 2) ** 2 + np.cos((ts - np.pi / 2) / 2) ** 2) / 2
    assert abs(res.lambda_star - vals.max()) < 1e-9


def test_sweep_deterministic_across_workers(ms4):
    a = sweep_max_eigen(ms4, workers=1)
    b = sweep_max_eigen(ms4, workers=4)
    assert a.lambda_star == b.lambda_star
    assert a.b_star == b.b_star
    assert a.histogram == b.histogram


def test_sweep_budget_refusal(ms4):
    with pytest.raises(BudgetExceededError):
        sweep_max_eigen(ms4, budget=100)


def test_sweep_argmax_on_cycle_orbit(ms4):
    # the winning string follows the induced permutations (the constant
    # string in cycle-matched labels)
    from mubforge.mub import verify_cycle

    res = sweep_max_eigen(ms4)
    perms = verify_cycle(ms4).permutations
    b = res.b_star
    orbit_ok = all(b[(j + 1) % 4] == perms[j][b[j]] for j in range(4))
    assert orbit_ok


def test_sample_max_eigen_is_lower_bound(ms4):
    full = sweep_max_eigen(ms4)
    samp = sample_max_eigen(ms4, samples=200, seed=5)
    assert samp.lambda_star <= full.lambda_star + 1e-12
    again = sample_max_eigen(ms4, samples=200, seed=5)
    assert samp.b_star == again.b_star


def test_iter_sweep_rows_matches_sweep(ms3):
    rows = list(iter_sweep_rows(ms3))
    assert len(rows) == 64
    best = max(lam for _, lam in rows)
    assert abs(best - sweep_max_eigen(ms3).lambda_star) < 1e-14
    assert rows[0][0] == (0, 0, 0)
    assert rows[-1][0] == (3, 3, 3)


def test_minimize_matches_bound_l4(ms4):
    psi, val = minimize_avg_entropy(ms4, math.inf, restarts=24, seed=11)
    assert abs(val - TARGET_D4_L4) < 1e-6
    assert val >= bounds(4, 4).best - 1e-9
    # the invariant superpositions attain the same minimum (the minimizer
    # manifold is larger: several strings share the top eigenvalue 5/8)
    coeffs = np.exp(1j * np.pi * np.arange(4) / 4) / 2
    for v in phase_ramp_states(ms4, coeffs):
        assert abs(avg_entropy(ms4, v, math.inf) - val) < 1e-9


def test_minimize_collision_l3(ms3):
    _, val = minimize_avg_entropy(ms3, 2, restarts=24, seed=13)
    assert abs(val - 1.0) < 1e-6


def test_minimize_collision_l5_complete_set():
    # for the complete set in d=4 the collision-entropy bound
    # -log2[(1/L)(1 + (L-1)/d)] is attained
    ms = build_mub_set(build_classes_2n1(2))
    _, val = minimize_avg_entropy(ms, 2, restarts=24, seed=19)
    want = -math.log2((1 / 5) * (1 + 4 / 4))
    assert abs(val - want) < 1e-6


def test_minimize_deterministic(ms3):
    a = minimize_avg_entropy(ms3, 2, restarts=8, seed=3)
    b = minimize_avg_entropy(ms3, 2, restarts=8, seed=3)
    assert a[1] == b[1]
    assert np.array_equal(a[0], b[0])


def test_minimize_shannon_runs(ms3):
    _, val = minimize_avg_entropy(ms3, 1, restarts=8, seed=17)
    assert bounds(3, 4).best - 1e-9 <= val <= 2.0


def test_jensen_chain_random_states(ms4):
    # avg Hinf >= -log2 max_b tr(rho P_b,mean) >= -log2 lambda*
    rng = np.random.default_rng(53)
    lam_star = sweep_max_eigen(ms4).lambda_star
    mats = [b.vectors for b in ms4.bases]
    for _ in range(100):
        x = rng.normal(size=8)
        psi = (x[:4] + 1j * x[4:])
        psi /= np.linalg.norm(psi)
        h = avg_entropy(ms4, psi, math.inf)
        peak = np.mean([np.max(np.abs(B.conj().T @ psi) ** 2) for B in mats])
        assert h >= -math.log2(peak) - 1e-12
        assert peak <= lam_star + 1e-12


def test_symmetrized_top_eigenstate_saturates_jensen(ms4):
    # top eigenvector of the orbit P_b has equal overlap with every selected
    # projector, so the Jensen step is tight there
    res = sweep_max_eigen(ms4)
    P = pvec_operator(ms4, res.b_star, "mean")
    lam, v = hermitian_eigmax(P.matrix)
    overlaps = [
        abs(ms4.bases[j].vectors[:, res.b_star[j]].conj() @ v) ** 2
        for j in range(4)
    ]
    assert np.max(overlaps) - np.min(overlaps) < 1e-8
    from mubforge.mub import symmetrize

    rho = np.outer(v, v.conj())
    sym = symmetrize(rho, ms4.U, 4)
    assert abs(np.trace(rho @ P.matrix) - np.trace(sym @ P.matrix)) < 1e-10
