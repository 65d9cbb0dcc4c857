import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowres_mimo.asymptotics import (ScalingScenario, SigmaMatrix, moment_cross, moment_h2, moment_h4,
                                     mrc_sinr_approx, power_scaling_limit, sigma_imperfect, sigma_perfect,
                                     strong_los_limit, zf_sinr_approx)
from lowres_mimo.channel import RicianProfile, default_profile, los_inner_lambda
from lowres_mimo.errors import ConfigurationError, NumericalRankError
from lowres_mimo.estimation import EstimationStats, estimation_quality
from lowres_mimo.harness.validation import _random_moment_case, sample_moments
from lowres_mimo.quantization import alpha_for_bits, ideal_adc


def _stats(xi, beta, kf):
    xi, beta, kf = map(np.asarray, (xi, beta, kf))
    return EstimationStats(xi=xi, err_var=beta * (1 - xi) / (kf + 1), est_var=beta * xi / (kf + 1),
                           psi=np.full(xi.shape, np.nan))


def test_rayleigh_moments_reduce_to_wishart():
    prof = RicianProfile([2.0, 0.5], [0.0, 0.0], [0.1, 0.2])
    s = _stats([1.0, 1.0], prof.beta, prof.kfactor)
    m = 16
    assert moment_h2(prof, s, 0, m) == pytest.approx(m * 2.0)
    assert moment_h4(prof, s, 0, m) == pytest.approx(m * (m + 1) * 4.0)
    assert moment_cross(prof, s, 0, 1, m) == pytest.approx(m * 1.0)


def test_pure_los_moments_are_deterministic():
    prof = RicianProfile([1.0, 1.0], [3.0, 1.0], [0.3, -0.4])
    s = _stats([0.0, 0.0], prof.beta, prof.kfactor)
    m = 10
    h2 = moment_h2(prof, s, 0, m)
    assert h2 == pytest.approx(m * 0.75)
    assert moment_h4(prof, s, 0, m) == pytest.approx(h2**2)
    lam = los_inner_lambda(0.3, -0.4, m)
    assert moment_cross(prof, s, 0, 1, m) == pytest.approx(0.75 * 0.5 * lam**2)
    with pytest.raises(ValueError):
        moment_cross(prof, s, 1, 1, m)


@pytest.mark.parametrize("seed", [0, 1])
def test_moments_against_sampling(seed):
    rng = np.random.default_rng(seed)
    prof, s = _random_moment_case(rng, 8)
    samp = sample_moments(prof, s, 8, 40_000, rng)
    assert abs(samp.h2 - moment_h2(prof, s, 0, 8)) < 3.5 * samp.h2_se
    assert abs(samp.h4 - moment_h4(prof, s, 0, 8)) < 3.5 * samp.h4_se
    assert abs(samp.cross - moment_cross(prof, s, 0, 1, 8)) < 3.5 * samp.cross_se


def test_sigma_inverse_diag_matches_numpy():
    prof = default_profile(4, kfactor_db=3.0, rng=np.random.default_rng(2))
    sig = sigma_perfect(prof, 50)
    np.testing.assert_allclose(sig.mat, sig.mat.conj().T, atol=1e-14)
    np.testing.assert_allclose(sig.inv_diag(), np.real(np.diag(np.linalg.inv(sig.mat))), rtol=1e-10)


def test_sigma_singular_raises():
    with pytest.raises(NumericalRankError):
        SigmaMatrix(np.ones((2, 2), dtype=complex)).inv_diag()


def test_zf_approx_single_user_rayleigh_closed_form():
    prof = RicianProfile([0.5], [0.0], [0.0])
    adc = alpha_for_bits(2)
    a = adc.alpha
    m, p, s2 = 20, 3.0, 1.0
    expect = a**2 * p * (m - 1) * 0.5 / (a * s2 + a * (1 - a) * p * 0.5)
    assert zf_sinr_approx(prof, adc, p, s2, m)[0] == pytest.approx(expect)
    with pytest.raises(ConfigurationError):
        zf_sinr_approx(prof, adc, p, s2, 1)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 12), st.floats(-10, 30))
def test_imperfect_never_beats_perfect(seed, bits, p_db):
    rng = np.random.default_rng(seed)
    prof = default_profile(4, kfactor_db=float(rng.uniform(-10, 10)), rng=rng)
    adc = alpha_for_bits(bits)
    p = 10 ** (p_db / 10)
    stats = estimation_quality(prof, adc, p, 1.0, 4)
    m = 64
    try:
        zf_perf = zf_sinr_approx(prof, adc, p, 1.0, m)
        zf_imp = zf_sinr_approx(prof, adc, p, 1.0, m, stats)
    except NumericalRankError:
        return
    assert np.all(zf_imp <= zf_perf * (1 + 1e-12))


def test_mrc_moment_form_is_not_bounded_by_its_xi_one_value():
    # lower xi also shrinks the random part of the interference, so a weak user
    # next to a strong one can gain; only ZF has a perfect-CSI closed form to compare with
    rng = np.random.default_rng(4)
    prof = default_profile(4, kfactor_db=float(rng.uniform(-10, 10)), rng=rng)
    adc, p = alpha_for_bits(2), 10**2.6
    stats = estimation_quality(prof, adc, p, 1.0, 4)
    ideal = mrc_sinr_approx(prof, EstimationStats.perfect(prof), adc, p, 1.0, 64)
    assert mrc_sinr_approx(prof, stats, adc, p, 1.0, 64)[3] > ideal[3]


def test_reductions_at_full_estimation_quality():
    prof = default_profile(3, kfactor_db=5.0, rng=np.random.default_rng(8))
    perfect = EstimationStats.perfect(prof)
    np.testing.assert_allclose(sigma_imperfect(prof, perfect, 40).mat, sigma_perfect(prof, 40).mat, atol=1e-12)
    adc = alpha_for_bits(4)
    np.testing.assert_allclose(zf_sinr_approx(prof, adc, 5.0, 1.0, 40, perfect),
                               zf_sinr_approx(prof, adc, 5.0, 1.0, 40), rtol=1e-12)


def test_zf_approx_ideal_rayleigh_is_exact_mean_form():
    prof = RicianProfile([0.5, 2.0, 1.0], [0.0, 0.0, 0.0], [0.0, 0.4, -0.3])
    np.testing.assert_allclose(zf_sinr_approx(prof, ideal_adc(), 3.0, 1.0, 30), 3.0 * prof.beta * 27)


@settings(max_examples=40, deadline=None)
@given(st.floats(-20, 20), st.floats(0.1, 10), st.integers(1, 12), st.integers(2, 300))
def test_single_user_imperfect_sinr_increases_with_kfactor(kdb, dk, bits, m):
    adc = alpha_for_bits(bits)

    def both(kf):
        prof = RicianProfile([0.2], [kf], [0.3])
        stats = estimation_quality(prof, adc, 1.0, 1.0, 1)
        return (mrc_sinr_approx(prof, stats, adc, 1.0, 1.0, m)[0],
                zf_sinr_approx(prof, adc, 1.0, 1.0, m, stats)[0])

    lo, hi = both(10 ** (kdb / 10)), both(10 ** ((kdb + dk) / 10))
    assert hi[0] > lo[0] and hi[1] > lo[1]


def test_single_user_perfect_zf_does_not_depend_on_kfactor():
    adc = alpha_for_bits(3)
    vals = [zf_sinr_approx(RicianProfile([1.0], [kf], [0.2]), adc, 1.0, 1.0, 40)[0] for kf in (0.0, 1.0, 100.0)]
    np.testing.assert_allclose(vals, vals[0], rtol=1e-12)


def test_sigma_imperfect_uses_xi():
    prof = RicianProfile([1.0, 1.0], [0.0, 0.0], [0.0, 0.5])
    s = _stats([0.25, 0.5], prof.beta, prof.kfactor)
    np.testing.assert_allclose(np.diag(sigma_imperfect(prof, s, 10).mat).real, [0.25, 0.5])


def test_power_scaling_limit_example():
    lim = power_scaling_limit(1.0, 1.0, alpha_for_bits(3), ScalingScenario(10.0, 1.0), 1.0, 10)
    assert lim == pytest.approx(0.965462 * 10 / 2, rel=1e-6)


@pytest.mark.parametrize("nu,fading,expect", [
    (0.8, "rician", np.inf), (1.2, "rician", 0.0), (0.4, "rayleigh", np.inf),
    (0.7, "rayleigh", 0.0), (1.0, "rayleigh", 0.0)])
def test_power_scaling_regimes(nu, fading, expect):
    assert power_scaling_limit(1.0, 2.0, alpha_for_bits(3), ScalingScenario(10.0, nu, fading), 1.0, 10) == expect


def test_rayleigh_half_exponent_limit():
    adc = alpha_for_bits(2)
    lim = power_scaling_limit(0.5, 0.0, adc, ScalingScenario(2.0, 0.5, "rayleigh"), 1.0, 7)
    assert lim == pytest.approx(adc.alpha**2 * 4.0 * 0.25 * 7)


def test_scaling_argument_errors():
    with pytest.raises(ConfigurationError):
        ScalingScenario(1.0, 0.0)
    with pytest.raises(ConfigurationError):
        ScalingScenario(1.0, 1.0, "nakagami")
    with pytest.raises(ConfigurationError):
        power_scaling_limit(1.0, 0.0, alpha_for_bits(3), ScalingScenario(1.0, 1.0), 1.0, 10)


def test_strong_los_limit_ideal_adc_single_user():
    prof = RicianProfile([0.5], [1e9], [0.1])
    m, p = 30, 2.0
    for rx in ("mrc", "zf"):
        assert strong_los_limit(prof, ideal_adc(), p, 1.0, m, rx)[0] == pytest.approx(
            p * 0.5 * (m if rx == "mrc" else m - 1))
    with pytest.raises(ConfigurationError):
        strong_los_limit(prof, ideal_adc(), p, 1.0, 1, "zf")
