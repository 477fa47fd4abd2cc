import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from repvar.su2 import (
    E1,
    I,
    J,
    K,
    MINUS_ONE,
    ONE,
    AlignmentError,
    align_conjugator,
    commutator,
    exp_axis_angle,
    geodesic,
    geodesic_distance,
    haar_random,
)


def rand_elements(seed, count=1):
    rng = np.random.default_rng(seed)
    return [haar_random(rng) for _ in range(count)]


su2s = st.integers(min_value=0, max_value=10_000).map(lambda s: rand_elements(s)[0])


def test_identity_and_quaternion_table():
    u = rand_elements(1)[0]
    assert (ONE * u).dist(u) == 0.0
    assert (I * J).dist(K) < 1e-15
    assert (J * K).dist(I) < 1e-15
    assert (K * I).dist(J) < 1e-15
    assert (I * I).dist(MINUS_ONE) < 1e-15


def test_long_product_chain_keeps_unit_norm():
    rng = np.random.default_rng(7)
    acc = ONE
    factors = [haar_random(rng) for _ in range(64)]
    for i in range(1_000_000):
        acc = acc * factors[i % 64]
    assert abs(acc.norm() - 1.0) < 1e-12


def test_inverse():
    assert ONE.inverse().dist(ONE) == 0.0
    assert I.inverse().dist(-I) < 1e-15
    for u in rand_elements(3, 50):
        assert (u * u.inverse()).dist(ONE) < 1e-12


def test_commutator_values():
    u = rand_elements(4)[0]
    assert commutator(u, u).dist(ONE) < 1e-12
    # oracle: direct quaternion multiplication i j (-i) (-j)
    direct = I * J * (-I) * (-J)
    assert direct.dist(MINUS_ONE) < 1e-15
    assert commutator(I, J).dist(direct) < 1e-15
    # powers of one element commute
    assert commutator(u.power(2), u.power(5)).dist(ONE) < 1e-12


def test_exp_axis_angle():
    assert exp_axis_angle(E1, 0.0).dist(ONE) == 0.0
    assert exp_axis_angle(E1, math.pi).dist(MINUS_ONE) < 1e-15
    assert exp_axis_angle(E1, math.pi / 2).dist(I) < 1e-15
    with pytest.raises(ValueError):
        exp_axis_angle((1.0, 1.0, 0.0), 0.5)


def test_power_exact_angle_scaling():
    u = exp_axis_angle(E1, 0.3)
    assert u.power(7).dist(exp_axis_angle(E1, 2.1)) < 1e-12
    assert u.power(0).dist(ONE) == 0.0
    assert u.power(-1).dist(u.inverse()) < 1e-15
    assert MINUS_ONE.power(3).dist(MINUS_ONE) == 0.0
    assert MINUS_ONE.power(4).dist(ONE) == 0.0
    v = rand_elements(9)[0]
    by_mult = v * v * v * v * v
    assert v.power(5).dist(by_mult) < 1e-12


def test_geodesic():
    u = rand_elements(5)[0]
    assert geodesic(u, u, 0.37).dist(u) < 1e-12
    assert geodesic(ONE, I, 1.0).dist(I) < 1e-15
    # slerp midpoint by angle
    assert geodesic(ONE, I, 0.5).dist(exp_axis_angle(E1, math.pi / 4)) < 1e-12
    with pytest.raises(ValueError):
        geodesic(u, -u, 0.5)


def test_haar_determinism_and_moments():
    a = haar_random(np.random.default_rng(11))
    b = haar_random(np.random.default_rng(11))
    assert a.dist(b) == 0.0
    rng = np.random.default_rng(12)
    traces = np.array([haar_random(rng).trace for _ in range(100_000)])
    assert abs(traces.mean()) < 0.05
    assert abs((traces**2).mean() - 1.0) < 0.05


def test_align_conjugator():
    assert align_conjugator(I, I).dist(ONE) == 0.0
    g = align_conjugator(I, J)
    assert I.conjugate_by(g).dist(J) < 1e-10
    with pytest.raises(AlignmentError):
        align_conjugator(I, ONE)
    # anti-parallel axes
    u = exp_axis_angle(E1, 0.9)
    v = exp_axis_angle((-1.0, 0.0, 0.0), 0.9)
    g = align_conjugator(u, v)
    assert u.conjugate_by(g).dist(v) < 1e-10


def test_align_random_conjugate_pairs():
    rng = np.random.default_rng(13)
    for _ in range(200):
        u = haar_random(rng)
        h = haar_random(rng)
        v = u.conjugate_by(h)
        g = align_conjugator(u, v)
        assert u.conjugate_by(g).dist(v) < 1e-10


def test_is_central():
    assert ONE.is_central()
    assert MINUS_ONE.is_central()
    assert not I.is_central()
    assert exp_axis_angle(E1, 1e-12).is_central(1e-9)
    assert not exp_axis_angle(E1, 1e-4).is_central(1e-9)


def test_centralizer_is_abelian():
    rng = np.random.default_rng(14)
    for _ in range(50):
        u = haar_random(rng)
        if u.is_central(1e-3):
            continue
        axis = u.axis()
        v = exp_axis_angle(axis, rng.uniform(-math.pi, math.pi))
        w = exp_axis_angle(axis, rng.uniform(-math.pi, math.pi))
        assert commutator(u, v).dist(ONE) < 1e-10
        assert commutator(u, w).dist(ONE) < 1e-10
        assert commutator(v, w).dist(ONE) < 1e-9


@settings(max_examples=200, deadline=None)
@given(su2s, su2s)
def test_products_stay_unit_and_trace_is_conjugation_invariant(g, u):
    p = g * u
    assert abs(p.norm() - 1.0) < 1e-12
    assert abs(u.conjugate_by(g).trace - u.trace) < 1e-12


@settings(max_examples=100, deadline=None)
@given(su2s, su2s, st.floats(min_value=0.0, max_value=1.0))
def test_geodesic_endpoints_and_unit_norm(u, v, t):
    if u.dot(v) < -1.0 + 1e-6:
        return
    p = geodesic(u, v, t)
    assert abs(p.norm() - 1.0) < 1e-12
    assert geodesic(u, v, 0.0).dist(u) < 1e-9
    assert geodesic(u, v, 1.0).dist(v) < 1e-9
    # acos amplifies rounding near coincident endpoints: allow 1e-7
    assert geodesic_distance(u, p) <= geodesic_distance(u, v) + 1e-7
