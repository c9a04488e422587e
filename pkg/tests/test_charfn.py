import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mixedts import (CfGridSpec, CtsParams, EvaluationError, GammaMixParams,
                     InvalidParameter, MixedTsParams, OutsideMgfDomain,
                     StdCtsParams, cts_log_cf, gamma_log_mgf,
                     geostable_limit_log_cf, mixedts_log_cf,
                     scaled_stdcts_log_cf, stdcts_log_cf)
from oracles import draw_valid_mixedts, lk_quadrature_log_cf, mp_mixedts_log_cf


def test_all_exponents_vanish_at_origin(vfiax_params):
    cts = CtsParams(alpha=1.5, lambda_plus=1, lambda_minus=2, c_plus=1, c_minus=1, mu=0.3)
    std = StdCtsParams(alpha=1.5, lambda_plus=1, lambda_minus=2)
    assert cts_log_cf(0.0, cts) == 0
    assert stdcts_log_cf(0.0, std) == 0
    assert scaled_stdcts_log_cf(0.0, std, 2.5) == 0
    assert mixedts_log_cf(0.0, vfiax_params) == 0
    assert geostable_limit_log_cf(0.0, 1.5) == 0
    assert gamma_log_mgf(0.0, GammaMixParams(a=2.0, sigma2=0.5)) == 0
    vg = MixedTsParams(mu0=0, mu=0, sigma=1, a=1, lambda_plus=1, lambda_minus=1, alpha=2.0)
    assert mixedts_log_cf(0.0, vg) == 0


def test_symmetric_cts_has_real_cf():
    p = CtsParams(alpha=0.7, lambda_plus=1.5, lambda_minus=1.5,
                  c_plus=0.8, c_minus=0.8, mu=0.0)
    for u in (0.3, 1.0, 4.2):
        assert cts_log_cf(u, p).imag == pytest.approx(0.0, abs=1e-14)


@pytest.mark.parametrize("u,alpha,lp,lm,cp,cm,mu", [
    (1.0, 0.5, 2.0, 3.0, 1.0, 1.0, 0.0),
    (0.8, 1.5, 1.0, 2.0, 0.7, 1.3, 0.3),
    (-2.3, 1.2, 0.8, 1.1, 0.4, 0.9, -0.1),
])
def test_cts_matches_levy_khintchine_quadrature(u, alpha, lp, lm, cp, cm, mu):
    p = CtsParams(alpha=alpha, lambda_plus=lp, lambda_minus=lm,
                  c_plus=cp, c_minus=cm, mu=mu)
    expected = lk_quadrature_log_cf(u, alpha, lp, lm, cp, cm, mu)
    got = cts_log_cf(u, p)
    assert abs(got - expected) / abs(expected) < 1e-6


def test_stdcts_unit_variance_from_second_derivative():
    h = 1e-4
    for p in (StdCtsParams(1.5, 1.0, 2.0), StdCtsParams(0.5, 0.7, 0.9),
              StdCtsParams(1.8, 3.0, 0.5)):
        second = 2.0 * stdcts_log_cf(h, p).real / h ** 2
        assert second == pytest.approx(-1.0, abs=1e-5)


def test_stdcts_close_to_gaussian_near_alpha_two():
    p = StdCtsParams(alpha=1.999, lambda_plus=1.0, lambda_minus=1.0)
    assert stdcts_log_cf(1.0, p) == pytest.approx(-0.5, abs=1e-2)


class TestScaledExponent:
    def test_identity_at_unit_scale(self):
        p = StdCtsParams(1.5, 1.0, 2.0)
        for u in (0.3, 1.7):
            assert scaled_stdcts_log_cf(u, p, 1.0) == pytest.approx(
                stdcts_log_cf(u, p), rel=1e-14)

    def test_linearity_in_scale(self):
        p = StdCtsParams(1.3, 0.8, 2.5)
        for u in (0.5, 2.0):
            assert scaled_stdcts_log_cf(u, p, 3.0) == pytest.approx(
                3.0 * scaled_stdcts_log_cf(u, p, 1.0), rel=1e-14)

    def test_substitution_chain_oracle(self):
        # sqrt(h)*X with X ~ stdCTS(alpha, l*sqrt(h)) has the exponent of the
        # base standardized law evaluated at sqrt(h)*u with scaled tempering.
        p = StdCtsParams(alpha=1.5, lambda_plus=1.0, lambda_minus=2.0)
        h, u = 2.0, 0.7
        rt = np.sqrt(h)
        lhs = stdcts_log_cf(rt * u, StdCtsParams(1.5, 1.0 * rt, 2.0 * rt))
        assert scaled_stdcts_log_cf(u, p, h) == pytest.approx(lhs, rel=1e-12)
        # and equals the log cf of the sum of h iid standardized variates
        assert scaled_stdcts_log_cf(u, p, h) == pytest.approx(
            2.0 * stdcts_log_cf(u, p), rel=1e-12)

    def test_drift_variant_fails_substitution_oracle(self):
        # Dropping the 1/(alpha-1) drift normalization breaks the identity,
        # which is how the ambiguity between the two printed forms is settled.
        p = StdCtsParams(alpha=1.5, lambda_plus=1.0, lambda_minus=2.0)
        h, u = 2.0, 0.7
        rt = np.sqrt(h)
        lhs = stdcts_log_cf(rt * u, StdCtsParams(1.5, 1.0 * rt, 2.0 * rt))
        variant = scaled_stdcts_log_cf(u, p, h, drift_over_alpha_minus_one=False)
        assert abs(variant - lhs) > 1e-3

    def test_scale_consistency_random(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            alpha = rng.uniform(1.05, 1.9) if rng.random() < 0.5 else rng.uniform(0.1, 0.9)
            p = StdCtsParams(alpha=alpha, lambda_plus=rng.uniform(0.3, 3),
                             lambda_minus=rng.uniform(0.3, 3))
            u = rng.uniform(-5, 5)
            base = scaled_stdcts_log_cf(u, p, 1.0)
            for h in (1.0, 2.0, 3.0, 4.0):
                assert scaled_stdcts_log_cf(u, p, h) == pytest.approx(h * base, rel=1e-12)

    def test_rejects_nonpositive_scale(self):
        with pytest.raises(InvalidParameter):
            scaled_stdcts_log_cf(1.0, StdCtsParams(1.5, 1, 1), 0.0)


class TestGammaLogMgf:
    def test_real_point(self):
        g = GammaMixParams(a=1.0, sigma2=0.4)
        assert gamma_log_mgf(1.0 / (2 * 0.4), g) == pytest.approx(np.log(2.0), rel=1e-14)

    def test_domain_violation(self):
        with pytest.raises(OutsideMgfDomain):
            gamma_log_mgf(10.0, GammaMixParams(a=1.0, sigma2=0.5))

    def test_characteristic_exponents_stay_in_domain(self):
        g = GammaMixParams(a=2.0, sigma2=1.7)
        p = StdCtsParams(1.4, 1.2, 8.0)
        for u in np.linspace(-30, 30, 13):
            s = stdcts_log_cf(u, p)
            assert (1 - g.sigma2 * s).real >= 1.0
            gamma_log_mgf(s, g)


class TestMixedTs:
    def test_alpha_two_closed_form(self):
        p = MixedTsParams(mu0=0, mu=0, sigma=0.9, a=1.7,
                          lambda_plus=1, lambda_minus=1, alpha=2.0)
        for u in (0.5, 1.0, 3.0):
            expected = (1 + 0.5 * 0.9 ** 2 * u ** 2) ** -1.7
            assert np.exp(mixedts_log_cf(u, p)) == pytest.approx(expected, rel=1e-13)

    def test_high_precision_reference(self, vfiax_params):
        p = vfiax_params
        for u in (0.5, 1.0, 2.0):
            expected = mp_mixedts_log_cf(u, p.mu0, p.mu, p.sigma, p.a,
                                         p.lambda_plus, p.lambda_minus, p.alpha)
            assert abs(mixedts_log_cf(u, p) - expected) < 1e-10

    def test_equals_gamma_mgf_composition(self):
        # Zero-drift law assembled two ways: directly, and as the Gamma log-mgf
        # of the standardized exponent with the scale carried by the mixing law.
        sigma, a = 1.3, 2.2
        std = StdCtsParams(alpha=1.6, lambda_plus=0.9, lambda_minus=1.8)
        p = MixedTsParams(mu0=0.0, mu=0.0, sigma=sigma, a=a,
                          lambda_plus=0.9, lambda_minus=1.8, alpha=1.6)
        g = GammaMixParams(a=a, sigma2=sigma ** 2)
        for u in (-3.0, 0.4, 1.9):
            via_mgf = gamma_log_mgf(stdcts_log_cf(u, std), g)
            assert mixedts_log_cf(u, p) == pytest.approx(via_mgf, rel=1e-13)

    def test_modulus_bounded_by_one(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            p = draw_valid_mixedts(rng)
            u = rng.uniform(-20, 20, size=7)
            assert np.all(np.abs(np.exp(mixedts_log_cf(u, p))) <= 1 + 1e-12)
        assert np.exp(mixedts_log_cf(0.0, p)) == 1.0

    def test_stdcts_limit_in_mixing_shape(self):
        # With sigma = 1/sqrt(a) the law approaches the standardized core as the
        # shape grows; the gap shrinks monotonically along a = 1, 10, 100, 1000.
        std = StdCtsParams(alpha=1.4, lambda_plus=1.2, lambda_minus=8.0)
        u = np.linspace(-10, 10, 81)
        target = stdcts_log_cf(u, std)
        gaps = []
        for a in (1.0, 10.0, 100.0, 1000.0):
            p = MixedTsParams(mu0=0, mu=0, sigma=1 / np.sqrt(a), a=a,
                              lambda_plus=1.2, lambda_minus=8.0, alpha=1.4)
            gaps.append(np.max(np.abs(mixedts_log_cf(u, p) - target)))
        assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))
        # once a dominates |L| the gap scales like |L|**2 / (2a)
        assert gaps[-1] < gaps[-2] / 5
        assert gaps[-1] < gaps[0] / 50


class TestGeostableLimit:
    def test_limit_value_against_small_tempering_oracle(self):
        # The analytic limit is checked against the mixed law evaluated under
        # the coupled-scale conditions at a tiny tempering rate.
        alpha, lam = 1.5, 1e-4
        sigma = lam ** ((alpha - 2) / 2) * np.sqrt(
            abs(alpha * (alpha - 1) / np.cos(alpha * np.pi / 2)))
        p = MixedTsParams(mu0=0, mu=0, sigma=sigma, a=1.0,
                          lambda_plus=lam, lambda_minus=lam, alpha=alpha)
        for u in (0.5, 1.0, 2.0):
            assert abs(mixedts_log_cf(u, p) - geostable_limit_log_cf(u, alpha)) < 1e-2
        # at u=1 the limit is -log(2); the value without the coupled-scale
        # normalization, -log(1 - cos(3*pi/4)/0.75) ~ -0.6641, sits outside
        # the oracle tolerance.
        assert geostable_limit_log_cf(1.0, alpha) == pytest.approx(-np.log(2.0), rel=1e-12)
        unnormalized = -np.log(1 - np.cos(0.75 * np.pi) / 0.75)
        assert abs(mixedts_log_cf(1.0, p) - unnormalized) > 1e-2

    def test_pointwise_convergence_in_lambda(self):
        alpha, u = 1.5, 1.3
        target = geostable_limit_log_cf(u, alpha)
        gaps = []
        for lam in (1.0, 0.1, 0.01):
            sigma = lam ** ((alpha - 2) / 2) * np.sqrt(
                abs(alpha * (alpha - 1) / np.cos(alpha * np.pi / 2)))
            p = MixedTsParams(mu0=0, mu=0, sigma=sigma, a=1.0,
                              lambda_plus=lam, lambda_minus=lam, alpha=alpha)
            gaps.append(abs(mixedts_log_cf(u, p) - target))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_gamma_scaling(self):
        assert geostable_limit_log_cf(2.0, 1.5, gamma_scale=3.0) == pytest.approx(
            -np.log1p(6.0 ** 1.5), rel=1e-14)

    def test_rejects_bad_stability(self):
        with pytest.raises(InvalidParameter):
            geostable_limit_log_cf(1.0, 1.0)
        with pytest.raises(InvalidParameter):
            geostable_limit_log_cf(1.0, 2.0)


@settings(max_examples=60, deadline=None)
@given(u=st.floats(-40, 40, allow_nan=False),
       alpha=st.one_of(st.floats(0.1, 0.95), st.floats(1.05, 1.95)),
       lp=st.floats(0.2, 4.0), lm=st.floats(0.2, 4.0),
       a=st.floats(0.3, 5.0), sigma=st.floats(0.2, 2.0),
       mu0=st.floats(-1, 1), mu=st.floats(-0.5, 0.5))
def test_hermitian_symmetry_and_negative_real_part(u, alpha, lp, lm, a, sigma, mu0, mu):
    std = StdCtsParams(alpha=alpha, lambda_plus=lp, lambda_minus=lm)
    mixed = MixedTsParams(mu0=mu0, mu=mu, sigma=sigma, a=a,
                          lambda_plus=lp, lambda_minus=lm, alpha=alpha)
    cts = CtsParams(alpha=alpha, lambda_plus=lp, lambda_minus=lm,
                    c_plus=0.5, c_minus=1.5, mu=mu0)
    for fn, p in ((stdcts_log_cf, std), (mixedts_log_cf, mixed), (cts_log_cf, cts)):
        plus, minus = fn(u, p), fn(-u, p)
        assert minus == pytest.approx(np.conj(plus), rel=1e-9, abs=1e-12)
    assert stdcts_log_cf(u, std).real <= 1e-12
    assert scaled_stdcts_log_cf(u, std, 2.0) == pytest.approx(
        np.conj(scaled_stdcts_log_cf(-u, std, 2.0)), rel=1e-9, abs=1e-12)
    assert geostable_limit_log_cf(u, 1.5) == geostable_limit_log_cf(-u, 1.5)


def test_overflowing_parameters_raise_evaluation_error():
    p = CtsParams(alpha=1.5, lambda_plus=1e308, lambda_minus=1.0,
                  c_plus=1.0, c_minus=1.0, mu=0.0)
    with pytest.raises(EvaluationError):
        cts_log_cf(1.0, p)


def test_grid_spec_validation():
    CfGridSpec(u_max=10.0, n=1024)
    with pytest.raises(InvalidParameter):
        CfGridSpec(u_max=10.0, n=1000)
    with pytest.raises(InvalidParameter):
        CfGridSpec(u_max=-1.0, n=64)


def test_vector_and_scalar_frequencies_agree(vfiax_params):
    u = np.array([-2.0, -0.5, 0.0, 0.5, 2.0])
    vec = mixedts_log_cf(u, vfiax_params)
    assert vec.shape == u.shape
    for i, ui in enumerate(u):
        assert vec[i] == mixedts_log_cf(float(ui), vfiax_params)
