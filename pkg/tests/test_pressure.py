import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from matcocycle.cocycle import CocycleSpec, butler, identity_cocycle, golden_mean, positive_pair, rotation
from matcocycle.pressure import (BracketError, CERTIFIED, HEURISTIC, QuasiMultConstants, block_bound,
                                 exponent_floor, growth_extremes, partition_sum, pressure_bracket,
                                 quasi_mult_search, verify_quasi_mult)
from matcocycle.subshift import TransitionMatrix, count_words

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


def butler_pressure(t: float) -> float:
    """Closed form for the sigma = 2 pair: log(2^t + 2^-t) for t >= 0, log 2 for t <= 0."""
    return math.log(2.0 ** t + 2.0 ** -t) if t >= 0 else math.log(2.0)


@pytest.mark.parametrize("t", [-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 4.0])
def test_butler_brackets_contain_closed_form(t):
    b = pressure_bracket(butler(), t, 12)
    assert b.contains(butler_pressure(t))
    assert b.rigor == CERTIFIED


def test_butler_p1_pinned_below():
    b = pressure_bracket(butler(), 1.0, 14)
    assert b.lower == pytest.approx(math.log(2.5), abs=1e-12)
    assert b.width <= 0.08


@pytest.mark.parametrize("t", [-2.0, 0.0, 3.0])
def test_identity_golden_mean_pinned(t):
    b = pressure_bracket(identity_cocycle(golden_mean()), t, 10)
    assert b.lower == pytest.approx(LOG_PHI, abs=1e-9)
    assert b.upper == pytest.approx(LOG_PHI, abs=1e-9)


@pytest.mark.parametrize("t", [-1.5, 0.0, 2.0])
def test_scalar_generators_affine_pressure(t):
    spec = CocycleSpec(TransitionMatrix.full(3), tuple(2.0 * np.eye(2) for _ in range(3)))
    b = pressure_bracket(spec, t, 6)
    exact = math.log(3) + t * math.log(2)
    assert b.lower == pytest.approx(exact, abs=1e-9) and b.upper == pytest.approx(exact, abs=1e-9)


def test_partition_sum_at_zero_counts_words():
    spec = identity_cocycle(golden_mean())
    assert partition_sum(spec, 0.0, 9) == pytest.approx(math.log(count_words(spec.shift, 9)), rel=1e-14)


def test_block_bound_sharpens_cylinder_sum():
    spec = positive_pair()
    for t in (0.5, 1.0, 3.0):
        assert block_bound(spec, t, 8) <= partition_sum(spec, t, 8) / 8 + 1e-12


def test_mixed_sign_rigor():
    spec = positive_pair()
    with pytest.raises(ValueError, match="mixed sign"):
        pressure_bracket(spec, [1.0, -0.5], 6, certified=True)
    assert pressure_bracket(spec, [1.0, -0.5], 6).rigor == HEURISTIC


def test_quasi_mult_constants_verified():
    spec = positive_pair()
    qm = quasi_mult_search(spec, 1, 0, 5)
    assert qm.m == 0 and 0 < qm.C <= 1
    # finite depth can only overshoot the limiting value 2/sqrt(5)
    assert 2 / math.sqrt(5) - 1e-12 <= qm.C <= 2 / math.sqrt(5) + 1e-6
    assert verify_quasi_mult(spec, qm, 5)
    assert not verify_quasi_mult(spec, QuasiMultConstants(0, min(1.0, qm.C * 1.01), 5), 5)


def test_quasi_mult_golden_needs_connector():
    qm = quasi_mult_search(identity_cocycle(golden_mean()), 1, 2, 3)
    assert qm.m == 1 and qm.C == pytest.approx(1.0)


def test_quasi_mult_lower_bound_is_used():
    spec = positive_pair()
    qm = quasi_mult_search(spec, 1, 0, 6)
    b = pressure_bracket(spec, 1.0, 10, qm=qm)
    assert b.width <= -math.log(qm.C) / 10 + 1e-12


def test_growth_extremes_butler():
    for n in (4, 7, 10):
        g = growth_extremes(butler(), n)
        assert g.beta_upper == pytest.approx(math.log(2), abs=1e-12)
        assert g.beta_lower == pytest.approx(math.log(2), abs=1e-12)
        assert g.argmax_word in ((0,) * n, (1,) * n)
        if n % 2 == 0:
            assert g.alpha_upper == pytest.approx(0.0, abs=1e-12)


def test_exponent_floor_is_below_every_periodic_exponent():
    spec = positive_pair()
    floor = exponent_floor(spec, 1, 8)
    for w in ((0,), (1,), (0, 1), (0, 0, 1)):
        P = np.eye(2)
        for s in w:
            P = spec.generators[s] @ P
        assert floor <= math.log(max(abs(np.linalg.eigvals(P)))) / len(w) + 1e-12


@st.composite
def random_specs(draw):
    """Two invertible 2x2 generators ``R(a) diag(s1, s2) R(b)`` on the full 2-shift."""
    angle = st.floats(0, 2 * math.pi)
    scale = st.floats(0.3, 3.0)
    gens = []
    for _ in range(2):
        a, b = draw(angle), draw(angle)
        d = np.diag([draw(scale), draw(scale) * draw(st.sampled_from([1.0, -1.0]))])
        gens.append(rotation(a) @ d @ rotation(b))
    return CocycleSpec(TransitionMatrix.full(2), tuple(gens))


@settings(max_examples=15, deadline=None)
@given(random_specs(), st.sampled_from([-1.0, 0.0, 0.7, 2.0]))
def test_certified_brackets_at_different_depths_overlap(spec, t):
    """Valid brackets of the same number must intersect."""
    brackets = [pressure_bracket(spec, t, n) for n in (4, 6, 8)]
    for a in brackets:
        for b in brackets:
            assert a.lower <= b.upper + 1e-9


def test_bracket_error_type_exists():
    assert issubclass(BracketError, RuntimeError)
