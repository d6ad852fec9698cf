import math

import numpy as np
import pytest

from matcocycle.cocycle import (CocycleSpec, SpecError, butler, conformal, cylinder_norm_table, fiber_bunched,
                                identity_cocycle, load_spec, positive_pair, rotation, save_spec, word_product)
from matcocycle.subshift import InadmissibleWordError, TransitionMatrix

GOLDEN = TransitionMatrix(np.array([[1, 1], [1, 0]]))


def test_word_product_order():
    spec = positive_pair()
    A0, A1 = spec.generators
    assert np.allclose(word_product(spec, (0, 1, 1)).value(), A1 @ A1 @ A0)


def test_butler_alternating_word_is_identity():
    assert np.allclose(word_product(butler(), (0, 1) * 5).value(), np.eye(2))


def test_cylinder_table_butler_values():
    table = cylinder_norm_table(butler(), 4)
    assert table[(0, 0, 0, 0)] == pytest.approx(4 * math.log(2))
    assert table[(0, 1, 1, 0)] == pytest.approx(0.0, abs=1e-15)
    assert len(table) == 16


def test_sharded_table_is_identical():
    a = cylinder_norm_table(positive_pair(), 8, shards=1)
    b = cylinder_norm_table(positive_pair(), 8, shards=2)
    assert np.array_equal(a.words, b.words)
    assert np.array_equal(a.log_norms, b.log_norms)


def test_inadmissible_word():
    with pytest.raises(InadmissibleWordError):
        word_product(identity_cocycle(GOLDEN), (1, 1))


def test_round_trip_json(tmp_path):
    spec = CocycleSpec(GOLDEN, (rotation(0.3) * 1.7, np.array([[1.0, 0.1], [0.0, 3.0]])), 0.25, 0.5)
    path = tmp_path / "spec.json"
    save_spec(spec, path)
    back = load_spec(path)
    assert back.digest() == spec.digest()
    assert all(np.array_equal(a, b) for a, b in zip(back.generators, spec.generators))


def test_errors_list_every_violation():
    d = {"alphabet": 2, "transition": [[1, 1], [0, 0]],
         "matrices": {"0": [[1, 0], [0, 0]], "1": [[1, 0], [0, 1]]}, "omega": 1.5}
    with pytest.raises(SpecError) as info:
        CocycleSpec.from_dict(d)
    msgs = " | ".join(info.value.problems)
    assert "dead symbol" in msgs and "symbol 0 is singular" in msgs and "omega" in msgs


def test_missing_fields():
    with pytest.raises(SpecError, match="matrices"):
        CocycleSpec.from_dict({"alphabet": 1, "transition": [[1]]})


def test_fiber_bunching_threshold():
    assert fiber_bunched(butler(1.4))[0]
    assert not fiber_bunched(butler(1.42))[0]
    assert fiber_bunched(butler(2.0))[1] == pytest.approx(2.0)


def test_conformal():
    assert conformal(identity_cocycle(GOLDEN))
    assert conformal(CocycleSpec(TransitionMatrix.full(1), (3 * rotation(0.2),)))
    assert not conformal(butler())
