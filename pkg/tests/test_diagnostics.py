import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlfft.complement import complete_b_outer
from nlfft.diagnostics import (
    admissible_sample,
    build_K,
    build_strip_matrices,
    displacement_residual,
    entry_error_profile,
    instability_experiment,
    instability_run,
    lipschitz_checks,
    local_lipschitz_check,
    log_linear_slope,
    mp_layer_strip,
    norm_bounds_report,
    random_real_b,
    residual_on_circle,
    theta_bound,
    verify_L_system,
    witness_rows,
)
from nlfft.errors import InvalidInput
from nlfft.inverse import layer_strip
from nlfft.laurent import LaurentPoly, lp_eval_circle
from nlfft.nlft import NlftPair, eta_of, forward_nlft_fast

GAMMA_11 = NlftPair(LaurentPoly(np.array([-0.5, 0.5]), -1), LaurentPoly(np.array([0.5, 0.5])))
THIRD = NlftPair(LaurentPoly.const(np.sqrt(3) / 2), LaurentPoly.const(0.5))
IDENTITY = NlftPair(LaurentPoly.const(1), LaurentPoly.zero())


def sample(n, seed, **kw):
    return admissible_sample(np.random.default_rng(seed), n, **kw)


def test_build_K_examples():
    assert np.array_equal(build_K([1.0], [0.0]), [[1]])
    K = build_K([0.5, -0.5], [0.5, 0.5])
    assert np.allclose(K, [[0.5, 0], [0, 1]], atol=1e-15)
    s = sample(50, 0)
    a, b = s.pair.arrays()
    assert displacement_residual(build_K(a, b), a, b) <= 1e-12


def test_strip_matrices_examples():
    S = build_strip_matrices(THIRD)
    assert np.allclose(S.L, [[1]]) and np.allclose(S.D, [1])
    S = build_strip_matrices(GAMMA_11)
    assert np.allclose(S.L, np.eye(2), atol=1e-15)
    assert np.allclose(S.D, [0.5, 1])
    assert np.allclose(S.U, S.L @ S.H)
    S = build_strip_matrices(sample(64, 1).pair)
    assert S.ldl_residual() <= 1e-10
    assert np.all(S.D > 0) and np.allclose(np.diag(S.L), 1)


def test_L_system_examples():
    assert verify_L_system(IDENTITY).residual == 0
    assert verify_L_system(GAMMA_11).residual <= 1e-12
    assert verify_L_system(sample(256, 2).pair).residual <= 1e-9


def test_norm_bounds_examples():
    r = norm_bounds_report(THIRD)
    assert r.eta == 0.5 and r.passed
    for seed in range(3):
        r = norm_bounds_report(sample(64, seed, eta=0.2).pair, windows=10, rng=seed)
        assert r.passed and len(r.windows) == 10


def test_norm_bounds_degenerate():
    # an overstated eta breaks the lower eigenvalue and (D L*)^-1 bounds
    p = complete_b_outer(LaurentPoly(np.array([0.45, 0.45])))
    checks = norm_bounds_report(p, eta=0.5).checks()
    assert not checks["lam_min >= eta(2-eta)"]
    assert not norm_bounds_report(p, eta=0.5).passed
    # eta = 0: a* has a zero on the circle and the certificate is refused
    with pytest.raises(InvalidInput):
        norm_bounds_report(complete_b_outer(LaurentPoly(np.array([0.5, 0.5]))))
    # lam_min sinks toward the degenerate bound as eta shrinks
    lams = [norm_bounds_report(sample(64, 1, eta=e).pair).lam_min for e in (0.3, 0.05, 0.01)]
    assert lams[0] > lams[1] > lams[2]


def test_residual_on_circle_examples():
    s = sample(40, 3)
    g = layer_strip(s.pair)
    assert residual_on_circle(s.pair, g) <= 1e-10
    h = s.gamma.copy()
    h[17] += 1e-3
    r = residual_on_circle(s.pair, h)
    assert 1e-4 <= r <= 1e-2


def test_instability_small_n():
    rows = instability_experiment(8, 7)
    assert rows[0].residual_outer <= 1e-8 and rows[0].residual_flipped <= 1e-8


def test_instability_deterministic():
    r1 = instability_run(20, 3)
    r2 = instability_run(20, 3)
    assert r1.row == r2.row
    assert np.array_equal(r1.gamma_flipped, r2.gamma_flipped)
    with pytest.raises(InvalidInput):
        instability_experiment(3, 0)


def test_random_real_b_scale(rng):
    b = random_real_b(30, rng)
    assert np.isclose(np.max(np.abs(lp_eval_circle(b, 120))), 0.5)
    assert np.all(b.coeffs.imag == 0) and b.coeffs.size == 30


def test_mp_reference_matches_double_on_outer():
    s = sample(30, 5)
    a, b = s.pair.arrays()
    assert np.max(np.abs(mp_layer_strip(a, b) - layer_strip(s.pair).values)) <= 1e-13
    assert np.max(entry_error_profile(s.pair, layer_strip(s.pair).values)) <= 1e-13


def test_log_linear_slope():
    assert np.isclose(log_linear_slope(10.0 ** np.arange(5)), 1)
    assert np.isclose(log_linear_slope(np.zeros(4)), 0)


def test_lipschitz_examples(rng):
    g = rng.normal(size=32) + 1j * rng.normal(size=32)
    r = lipschitz_checks(g, g)
    assert r.lhs == 0 and r.rhs == 0 and r.holds
    g2 = g + 0.1 * rng.normal(size=32)
    assert lipschitz_checks(g, g2, (2, 2, 2)).holds
    t = theta_bound(0, 1)
    assert t.norm2 <= np.sqrt(10) and t.holds
    with pytest.raises(InvalidInput):
        lipschitz_checks(g, g[:5])


@settings(max_examples=60)
@given(st.integers(1, 64), st.integers(0, 2 ** 32 - 1),
       st.sampled_from([1.0, 2.0, np.inf]), st.sampled_from([1.0, 2.0, np.inf]),
       st.sampled_from([1.0, 2.0, np.inf]))
def test_lipschitz_property(n, seed, p, q, r):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=n) + 1j * rng.normal(size=n)
    g2 = g + rng.uniform(0, 1) * (rng.normal(size=n) + 1j * rng.normal(size=n))
    assert lipschitz_checks(g, g2, (p, q, r)).holds


@given(st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
def test_theta_property(g1, g2):
    assert theta_bound(g1, g2).holds


def test_witness_rows():
    rows = witness_rows()
    assert [r.k for r in rows] == list(range(2, 41))
    for r in rows:
        assert r.holds
        assert np.isclose(r.gamma0, r.gamma0_expected, rtol=1e-12)


@settings(max_examples=30)
@given(st.integers(1, 6), st.integers(0, 2 ** 32 - 1), st.floats(1e-12, 1e-2))
def test_local_lipschitz(n, seed, eps):
    rng = np.random.default_rng(seed)
    g = rng.normal(size=n) + 1j * rng.normal(size=n)
    g2 = g + eps * (rng.normal(size=n) + 1j * rng.normal(size=n))
    assert local_lipschitz_check(g, g2).holds


def test_admissible_sample_hits_eta():
    s = sample(500, 9, eta=0.3)
    assert abs(s.eta - 0.3) <= 2e-3
    assert np.isclose(eta_of(forward_nlft_fast(s.gamma)), s.eta)
