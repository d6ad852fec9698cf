import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matcocycle.cocycle import CocycleSpec, butler, identity_cocycle, positive_pair, rotation
from matcocycle.cones import (Cone, ConeDomainError, angle, birkhoff_data, cone_invariance, domination_check,
                              hilbert_distance, kappa_certificate)
from matcocycle.subshift import TransitionMatrix

Q2 = Cone.orthant(2)


def dense_circular_distance(v, w, C, samples=200001, span=10.0):
    """Brute force: scan lambda on a fine grid for the boundary crossings."""
    s = np.linspace(0, span, samples)
    def inside(x):
        ax = x @ C.axis
        return C.aperture * ax - np.linalg.norm(x - ax[:, None] * C.axis, axis=1) >= -1e-14
    alpha = s[inside(w[None, :] - s[:, None] * v[None, :])].max()
    beta = s[inside(s[:, None] * v[None, :] - w[None, :])].min()
    return alpha, beta


def test_quadrant_example():
    a, b, d = hilbert_distance([1, 1], [2, 1], Q2)
    assert (a, b) == (1.0, 2.0) and d == pytest.approx(math.log(2))


def test_scaled_vector_distance_zero():
    assert hilbert_distance([1, 2], [3, 6], Q2)[2] == 0.0


def test_boundary_gives_infinity():
    a, b, d = hilbert_distance([1, 0], [1, 1], Q2)
    assert d == math.inf


def test_outside_is_domain_error():
    with pytest.raises(ConeDomainError):
        hilbert_distance([1, -1], [1, 1], Q2)


def test_circular_matches_dense_oracle():
    C = Cone.circular([1, 0, 0], 1.0)
    v, w = np.array([1.0, 0, 0]), np.array([1.0, 0.5, 0])
    a, b, d = hilbert_distance(v, w, C)
    a0, b0 = dense_circular_distance(v, w, C)
    assert a == pytest.approx(a0, abs=1e-4) and b == pytest.approx(b0, abs=1e-4)
    assert (a, b) == pytest.approx((0.5, 1.5), abs=1e-12)
    assert d == pytest.approx(math.log(3), abs=1e-11)


def test_circular_off_axis_matches_dense_oracle():
    C = Cone.circular([1, 1, 0], 0.6)
    rng = np.random.default_rng(5)
    v, w = C.sample(2, rng)
    a, b, _ = hilbert_distance(v, w, C)
    a0, b0 = dense_circular_distance(v, w, C, span=8.0)
    assert a == pytest.approx(a0, abs=1e-4) and b == pytest.approx(b0, abs=1e-4)


interior_pt = st.lists(st.floats(0.01, 10), min_size=3, max_size=3).map(np.array)


@settings(max_examples=100, deadline=None)
@given(interior_pt, interior_pt, st.floats(0.01, 100), st.floats(0.01, 100))
def test_projective_invariance(v, w, s, t):
    C = Cone.orthant(3)
    assert hilbert_distance(s * v, t * w, C)[2] == pytest.approx(hilbert_distance(v, w, C)[2], abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(interior_pt, interior_pt, interior_pt)
def test_triangle_inequality(u, v, w):
    C = Cone.orthant(3)
    d = lambda a, b: hilbert_distance(a, b, C)[2]
    assert d(u, w) <= d(u, v) + d(v, w) + 1e-12


def test_generator_cone_facets():
    C = Cone.generated([[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1], [0.2, 0.2, 1]])
    assert len(C.rays) == 4
    assert C.interior([0, 0, 1]) and C.contains([1, 0, 1]) and not C.contains([1, 1, 0.5])
    # agrees with orthant when generated by the axes
    G = Cone.generated(np.eye(3))
    v, w = np.array([1.0, 2.0, 3.0]), np.array([2.0, 1.0, 1.0])
    assert hilbert_distance(v, w, G)[2] == pytest.approx(hilbert_distance(v, w, Cone.orthant(3))[2], rel=1e-12)


def test_cone_invariance_examples():
    single = CocycleSpec(TransitionMatrix.full(1), (np.array([[2.0, 1.0], [1.0, 1.0]]),))
    ok, margin = cone_invariance(single, Q2)
    assert ok and margin > 0
    assert not cone_invariance(CocycleSpec(TransitionMatrix.full(1), (rotation(math.pi / 2),)), Q2)[0]
    assert not cone_invariance(butler(), Q2)[0]


def test_birkhoff_examples():
    d, c = birkhoff_data(np.array([[2.0, 1.0], [1.0, 1.0]]), Q2)
    assert d == pytest.approx(math.log(2)) and c == pytest.approx(0.1715729, abs=1e-7)
    assert birkhoff_data(np.array([[1.0, 1.0], [2.0, 2.0]]), Q2) == (0.0, 0.0)
    assert birkhoff_data(rotation(math.pi / 2), Q2) == (math.inf, 1.0)


def test_contraction_on_circular_cone_2d():
    C = Cone.circular([1, 1], 0.8)
    M = np.array([[2.0, 1.0], [1.0, 2.0]])
    delta, coeff = birkhoff_data(M, C)
    assert 0 < coeff < 1
    rng = np.random.default_rng(3)
    for v, w in zip(C.sample(200, rng), C.sample(200, rng)):
        assert hilbert_distance(M @ v, M @ w, C)[2] <= coeff * hilbert_distance(v, w, C)[2] + 1e-9


def test_kappa_trivial_cases():
    scalar = CocycleSpec(TransitionMatrix.full(1), (np.array([[2.0]]),))
    cert = kappa_certificate(scalar, Cone.orthant(1))
    assert cert.kappa == 1.0 and cert.K1 == 0.0
    cert = kappa_certificate(identity_cocycle(TransitionMatrix.full(2)), Q2)
    assert cert.kappa == pytest.approx(1.0, abs=1e-12)


def test_kappa_positive_pair_certificate():
    cert = kappa_certificate(positive_pair(), Q2, validation_depth=6)
    assert 0 < cert.kappa <= 1 and cert.check_identities()
    assert cert.validation_min_ratio >= cert.kappa
    assert 0 < cert.lam < 1
    d = json.loads(json.dumps(cert.to_dict()))
    assert {"K1", "K2", "K3", "K4", "rho", "kappa", "lambda", "r"} <= set(d)


def test_kappa_requires_invariance():
    with pytest.raises(ValueError, match="invariant"):
        kappa_certificate(butler(), Q2)


def test_domination_examples():
    single = CocycleSpec(TransitionMatrix.full(1), (np.array([[2.0, 1.0], [1.0, 1.0]]),))
    rep = domination_check(single, 1, 8)
    assert rep.dominated and rep.fitted_tau == pytest.approx((3 - math.sqrt(5)) / (3 + math.sqrt(5)), rel=1e-6)
    assert not domination_check(butler(), 1, 8).dominated
    rot = CocycleSpec(TransitionMatrix.full(2), (rotation(0.3), rotation(1.1)))
    rep = domination_check(rot, 1, 6)
    assert not rep.dominated and np.allclose(rep.worst_ratio, 1.0)
    with pytest.raises(ValueError):
        domination_check(butler(), 2, 4)


def test_angle_metric():
    assert angle([1, 0], [0, 1]) == pytest.approx(math.pi / 2)
    assert angle([1, 1], [-2, -2]) == pytest.approx(0.0, abs=1e-7)
