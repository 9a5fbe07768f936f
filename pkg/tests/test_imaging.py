import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from bodyblock.errors import BadWeights, DimsMismatch, ZeroReference, ZeroStates
from bodyblock.imaging import (
    ATTENUATION_CAP_DB,
    AttenuationMap,
    attenuation_db,
    footprint_centroid,
    mean_map,
    std_map,
)

finite = st.floats(-50, 50, allow_nan=False)


def test_attenuation_examples():
    e0 = 3 - 4j
    assert attenuation_db(e0, e0) == 0.0
    assert attenuation_db(0.5 * e0, e0) == pytest.approx(6.0206, abs=1e-4)
    assert attenuation_db(0.0, e0) == ATTENUATION_CAP_DB
    with pytest.raises(ZeroReference):
        attenuation_db(1.0, 0.0)


@settings(max_examples=200, deadline=None)
@given(st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3),
       st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3),
       st.complex_numbers(min_magnitude=1e-3, max_magnitude=1e3))
def test_scaling_invariance(e, e0, c):
    assert abs(attenuation_db(c * e, c * e0) - attenuation_db(e, e0)) < 1e-12


def test_mean_examples():
    m = np.arange(6.0).reshape(2, 3)
    assert np.array_equal(mean_map([m], [1.0]).values, m)
    stack = np.stack([np.full((2, 2), 4.0), np.full((2, 2), 8.0)])
    assert np.allclose(mean_map(stack, [0.5, 0.5]).values, 6.0)
    mean = mean_map(stack, [0.5, 0.5])
    assert np.allclose(std_map(stack, mean, [0.5, 0.5]).values, 2.0)


def test_identical_states_zero_std():
    stack = np.repeat(np.random.default_rng(1).normal(size=(1, 5, 4)), 7, axis=0)
    w = np.full(7, 1 / 7)
    assert np.all(std_map(stack, mean_map(stack, w), w).values == 0.0)


def brute_force(stack, w):
    s, r, c = stack.shape
    mean = np.zeros((r, c))
    std = np.zeros((r, c))
    for i in range(r):
        for j in range(c):
            mu = 0.0
            for n in range(s):
                mu += w[n] * stack[n, i, j]
            var = 0.0
            for n in range(s):
                var += w[n] * (stack[n, i, j] - mu) ** 2
            mean[i, j] = mu
            std[i, j] = var ** 0.5
    return mean, std


def test_against_brute_force(rng):
    stack = rng.normal(6, 3, size=(36, 12, 9))
    w = rng.uniform(0.1, 1, 36)
    w /= w.sum()
    mean = mean_map(stack, w)
    mu, sd = brute_force(stack, w)
    assert np.max(np.abs(mean.values - mu)) < 1e-12
    assert np.max(np.abs(std_map(stack, mean, w).values - sd)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(arrays(float, (5, 3, 4), elements=finite), finite)
def test_mean_bounds_and_offset_invariance(stack, offset):
    w = np.full(5, 0.2)
    mean = mean_map(stack, w).values
    assert np.all(stack.min(axis=0) - 1e-9 <= mean) and np.all(mean <= stack.max(axis=0) + 1e-9)
    sd = std_map(stack, mean, w).values
    shifted = stack + offset
    sd2 = std_map(shifted, mean_map(shifted, w), w).values
    assert np.max(np.abs(sd - sd2)) < 1e-9


def test_errors():
    stack = np.zeros((2, 3, 3))
    with pytest.raises(BadWeights):
        mean_map(stack, [0.5])
    with pytest.raises(BadWeights):
        mean_map(stack, [0.7, 0.7])
    with pytest.raises(BadWeights):
        mean_map(stack, [1.5, -0.5])
    with pytest.raises(DimsMismatch):
        mean_map([np.zeros((3, 3)), np.zeros((3, 4))], [0.5, 0.5])
    with pytest.raises(DimsMismatch):
        std_map(stack, np.zeros((2, 2)), [0.5, 0.5])
    with pytest.raises(ZeroStates):
        mean_map([], [])


def test_accepts_map_objects():
    maps = [AttenuationMap(np.full((2, 2), v)) for v in (1.0, 3.0)]
    assert np.allclose(mean_map(maps, [0.5, 0.5]).values, 2.0)


def test_footprint_centroid_sign():
    y = np.linspace(-1, 1, 21)
    left = np.zeros((3, 21))
    left[:, 5] = 10.0
    right = left[:, ::-1]
    assert footprint_centroid(left, y) < 0 < footprint_centroid(right, y)
    assert footprint_centroid(-np.ones((3, 21)), y) == 0.0
