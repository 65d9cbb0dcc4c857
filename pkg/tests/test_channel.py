import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowres_mimo.channel import (RicianProfile, db2lin, default_beta, default_profile, lin2db, los_gram,
                                 los_inner_lambda, los_matrix, sample_channel, steering_vector)
from lowres_mimo.errors import ConfigurationError

angles = st.floats(-np.pi / 2, np.pi / 2, allow_nan=False)


def test_db_roundtrip():
    assert db2lin(10.0) == pytest.approx(10.0)
    assert lin2db(db2lin(-7.3)) == pytest.approx(-7.3)


def test_steering_vector_unit_modulus_and_phase():
    a = steering_vector(0.3, 16)
    assert a.shape == (16,)
    np.testing.assert_allclose(np.abs(a), 1.0)
    np.testing.assert_allclose(a[1] / a[0], np.exp(-1j * np.pi * np.sin(0.3)))


@settings(max_examples=60, deadline=None)
@given(angles, angles, st.integers(1, 64))
def test_lambda_matches_brute_force_inner_product(t1, t2, m):
    brute = np.vdot(steering_vector(t1, m), steering_vector(t2, m))
    assert abs(los_inner_lambda(t1, t2, m)) == pytest.approx(abs(brute), abs=1e-8 * m)


@pytest.mark.parametrize("m", [1, 7, 32])
def test_lambda_singular_points(m):
    assert los_inner_lambda(0.4, 0.4, m) == pytest.approx(m)
    # sin(pi/2) - sin(-pi/2) = 2: steering vectors coincide up to sign
    assert abs(los_inner_lambda(np.pi / 2, -np.pi / 2, m)) == pytest.approx(m)


@settings(max_examples=30, deadline=None)
@given(st.lists(angles, min_size=1, max_size=6), st.integers(1, 40))
def test_los_gram_closed_form(aoa, m):
    a = los_matrix(np.array(aoa), m)
    np.testing.assert_allclose(los_gram(np.array(aoa), m), a.conj().T @ a, atol=1e-8 * m)


def test_profile_validation():
    with pytest.raises(ConfigurationError):
        RicianProfile([1.0, -1.0], [0, 0], [0, 0])
    with pytest.raises(ConfigurationError):
        RicianProfile([1.0], [0, 0], [0, 0])
    with pytest.raises(ConfigurationError):
        RicianProfile([1.0], [-0.5], [0])
    with pytest.raises(ConfigurationError):
        RicianProfile([1.0], [1.0], [2.0])


def test_profile_json_roundtrip():
    p = default_profile(4, kfactor_db=3.0, rng=np.random.default_rng(1))
    q = RicianProfile.from_json(p.to_json())
    np.testing.assert_allclose(q.beta, p.beta)
    np.testing.assert_allclose(q.kfactor, p.kfactor)
    np.testing.assert_allclose(q.aoa, p.aoa)


def test_default_beta_shape():
    b = default_beta(10)
    assert b.shape == (10,)
    assert np.all(np.diff(b) < 0)
    assert b[0] < 1.0  # users sit beyond the reference distance


def test_sample_channel_statistics():
    rng = np.random.default_rng(0)
    prof = RicianProfile([1.0, 0.25], [3.0, 0.0], [0.2, -0.7])
    hs = np.stack([sample_channel(prof, 8, rng).h for _ in range(20000)])
    np.testing.assert_allclose(np.mean(np.abs(hs) ** 2, axis=(0, 1)), prof.beta, rtol=0.02)
    los = los_matrix(prof.aoa, 8)[:, 0] * np.sqrt(0.75)
    np.testing.assert_allclose(hs[:, :, 0].mean(axis=0), los, atol=0.02)
    np.testing.assert_allclose(hs[:, :, 1].mean(axis=0), 0, atol=0.02)


def test_realization_components_compose():
    rng = np.random.default_rng(3)
    prof = default_profile(3, kfactor_db=0.0, rng=rng)
    r = sample_channel(prof, 5, rng)
    w = np.sqrt(prof.beta)
    expect = (r.h_los * np.sqrt(prof.kfactor / (prof.kfactor + 1)) + r.h_nlos / np.sqrt(prof.kfactor + 1)) * w
    np.testing.assert_allclose(r.h, expect)


def test_rayleigh_profile_json_uses_null():
    p = RicianProfile([1.0, 2.0], [0.0, 1.0], [0.0, 0.1])
    obj = p.to_json()
    assert obj["kfactor_db"][0] is None
    np.testing.assert_allclose(RicianProfile.from_json(obj).kfactor, [0.0, 1.0])
