import math

import numpy as np
import pytest

from normext.winding import (
    FinSupportVector,
    discontinuity_report,
    pair_distance,
    sum_norm,
    triangle_sample,
    winding_norm,
    winding_norm_array,
)

TOL = 1e-12


def test_examples():
    assert winding_norm(3, 0) == 0
    assert winding_norm(1, 1) == pytest.approx(math.sqrt(4 + 2 ** -4), abs=TOL)
    assert winding_norm(1, 1) > 2
    for k in range(1, 31):
        assert abs(winding_norm(k, 2) - 2.0 ** -k) < TOL


def test_unit_vector_identity():
    for k in range(1, 31):
        assert abs(winding_norm(k, 1) ** 2 - 4 - 4.0 ** -(k + 1)) < TOL


def test_positive_off_zero():
    rng = np.random.default_rng(1)
    for x in rng.uniform(-50, 50, 2000):
        if x != 0:
            assert winding_norm(2, float(x)) > 0


def test_pair_distance():
    assert pair_distance(4, 1.3, 1.3) == 0
    assert abs(pair_distance(1, 1, 0) - winding_norm(1, 1)) < TOL
    rng = np.random.default_rng(2)
    for _ in range(5000):
        k = int(rng.integers(1, 21))
        t, s = rng.uniform(-10, 10, 2)
        assert abs(pair_distance(k, t, s) - winding_norm(k, t - s)) < TOL


def test_array_matches_scalar():
    xs = np.linspace(-7, 7, 301)
    for k in (1, 3, 8):
        ref = np.array([winding_norm(k, float(x)) for x in xs])
        assert np.max(np.abs(winding_norm_array(k, xs) - ref)) < TOL


def test_sum_norm():
    assert sum_norm(FinSupportVector()) == 0
    for k in (1, 4, 9):
        assert abs(sum_norm(FinSupportVector.unit(k, 2.0)) - 2.0 ** -k) < TOL
    v = FinSupportVector.unit(1) + FinSupportVector.unit(2, 2.0)
    assert abs(sum_norm(v) - (winding_norm(1, 1) + 0.25)) < TOL
    assert sum_norm({1: 1.0}) == winding_norm(1, 1)
    with pytest.raises(ValueError):
        FinSupportVector({0: 1.0})


def test_discontinuity_report():
    rows = discontinuity_report(20)
    assert rows[0].e_norm == pytest.approx(2.0155644370746373, abs=TOL)
    assert rows[0].two_e_norm == pytest.approx(0.5, abs=TOL)
    assert rows[9].two_e_norm == pytest.approx(0.0009765625, abs=TOL)
    assert all(r.e_norm > 2 for r in rows)
    assert all(a.two_e_norm > b.two_e_norm for a, b in zip(rows, rows[1:]))
    assert all(a.ratio < b.ratio for a, b in zip(rows, rows[1:]))
    with pytest.raises(ValueError):
        discontinuity_report(0)


def test_triangle_sample():
    rng = np.random.default_rng(3)
    for k in range(1, 6):
        s = triangle_sample(k, 20_000, rng)
        assert s.ok(TOL)
