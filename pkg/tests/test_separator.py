import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ballsep import instances, oracle
from ballsep.errors import (Condition1Violated, Condition2Violated, DimensionError, DomainError,
                            FallbackWarning, PrimalityError, WidthError)
from ballsep.separator import (build_directions, check_conditions, determinant_lower_bound,
                               find_separator_nd, heilbronn_points, is_prime, lift_to_sphere,
                               min_abs_determinant, params_from_alpha, params_from_f, select_cut_point,
                               smallest_prime_at_least, spread, spread_threshold, unit_ball_volume,
                               window_ranks)
from conftest import grid

ROOT_HALF_PI = math.sqrt(math.pi / 2)


def near_count(values, p):
    return sum(1 for v in values if abs(v - p) <= 1.0)


def test_smallest_prime_examples():
    assert smallest_prime_at_least(1) == 2
    assert smallest_prime_at_least(8) == 11
    assert smallest_prime_at_least(97) == 97


def test_bertrand_range():
    for k in range(2, 2000):
        p = smallest_prime_at_least(k)
        assert k <= p <= 2 * k and is_prime(p)


def test_heilbronn_examples():
    assert heilbronn_points(5, 2).tolist() == [[0, 0], [0.2, 0.2], [0.4, 0.8], [0.6, 0.8], [0.8, 0.2]]
    assert heilbronn_points(3, 1).ravel().tolist() == [0, 1 / 3, 2 / 3]
    assert heilbronn_points(2, 2).tolist() == [[0, 0], [0.5, 0.5]]
    with pytest.raises(PrimalityError):
        heilbronn_points(9, 2)


def test_heilbronn_large_prime_stays_exact():
    k = 1_000_003
    pts = heilbronn_points(k, 3)[[2, k - 1]]
    assert pts[0].tolist() == [2 / k, 4 / k, 8 / k]
    # (k-1)^j mod k alternates k-1, 1, k-1
    assert pts[1].tolist() == [(k - 1) / k, 1 / k, (k - 1) / k]


def test_lift_examples():
    assert lift_to_sphere([0.5]).tolist() == [0.0, 1.0]
    np.testing.assert_allclose(lift_to_sphere([0.0]), [-math.sqrt(2) / 2, math.sqrt(2) / 2],
                               rtol=0, atol=1e-15)
    assert lift_to_sphere([0.5, 0.5]).tolist() == [0.0, 0.0, 1.0]
    with pytest.raises(DomainError):
        lift_to_sphere([1.2])


def test_build_directions_examples():
    ds = build_directions(4, 2)
    assert ds.source_prime == 5 and len(ds) == 5
    expected = [lift_to_sphere(p) for p in heilbronn_points(5, 1)]
    np.testing.assert_array_equal(ds.directions, expected)
    assert len(build_directions(2, 2)) == 2
    ds = build_directions(5, 3)
    assert len(ds) == 5
    bound = 2 ** 2 / (2 * 3 ** 1.5 * 25)
    assert determinant_lower_bound(3, 5) == pytest.approx(bound, rel=1e-15)
    assert min_abs_determinant(ds.directions) >= bound
    np.testing.assert_allclose(np.linalg.norm(ds.directions, axis=1), 1.0, atol=1e-12)
    assert np.all(ds.directions[:, -1] > 0)
    with pytest.raises(DimensionError):
        build_directions(3, 1)


@pytest.mark.parametrize("d", [2, 3])
def test_determinant_bound_small_primes(d):
    for k in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        dirs = build_directions(k, d).directions
        if len(dirs) < d:
            continue
        assert min_abs_determinant(dirs) >= determinant_lower_bound(d, k) - 1e-12


def test_check_conditions_examples():
    p = check_conditions(2, 10000, 5000, 4)
    assert p.t == pytest.approx(ROOT_HALF_PI * 100 / 8, rel=1e-12)
    assert round(p.t, 2) == 15.67
    with pytest.raises(Condition1Violated) as err:
        check_conditions(2, 100, 10, 3)
    assert (err.value.lhs, err.value.rhs) == (200, 30)
    assert "200 > 30" in str(err.value)
    with pytest.raises(Condition2Violated) as err:
        check_conditions(2, 16, 16, 2)
    # sqrt(16) = 4 enters the threshold, giving about 1.772 (still at most 2)
    assert err.value.lhs == pytest.approx(ROOT_HALF_PI * 4 / 2 ** 1.5, rel=1e-12)
    assert round(err.value.lhs, 3) == 1.772


def test_check_conditions_non_strict():
    p = check_conditions(2, 16, 16, 2, strict=False)
    assert not p.conditions_met and p.guaranteed_max_cut is None


def test_unit_ball_volumes():
    assert unit_ball_volume(2) == pytest.approx(math.pi)
    assert unit_ball_volume(3) == pytest.approx(4 * math.pi / 3)


def test_params_from_alpha_examples():
    p = params_from_alpha(2, 10000, 0.25)
    assert (p.b, p.k) == (5000, 4) and round(p.t, 2) == 15.67
    p = params_from_alpha(2, 10000, 0.001)
    assert (p.b, p.k) == (9980, 3)
    p = params_from_alpha(3, 10**6, 0.25)
    assert (p.b, p.k) == (500000, 6)
    v3 = 4 * math.pi / 3
    assert p.t == pytest.approx((v3 / (2 * 3 ** 0.5)) ** (1 / 3) * 100 / 6 ** (5 / 3), rel=1e-12)
    with pytest.raises(DomainError):
        params_from_alpha(2, 100, 0.5)


def test_params_from_alpha_odd_n_keeps_condition_one():
    # floor(1001 / 2) = 500 and 2 * 1001 > 4 * 500, so k must grow to 5
    p = params_from_alpha(2, 1001, 0.25)
    assert (p.b, p.k) == (500, 5) and p.conditions_met


def test_params_from_f_examples():
    p = params_from_f(2, 2**20, 20.0)
    assert (p.b, p.k) == (52429, 40)
    p = params_from_f(2, 10000, 1.0)
    assert (p.b, p.k) == (10000, 2) and p.d * p.n == p.k * p.b
    with pytest.raises(Condition2Violated):
        params_from_f(2, 100, 50.0)


def test_window_ranks_keep_both_sides():
    for n in range(1, 60):
        for b in range(1, n + 1):
            lo, hi = window_ranks(n, b)
            need = math.ceil((n - b) / 2)
            assert 1 <= lo <= hi <= n
            # a cut inside [lo, hi] keeps ranks 1..lo on one side and hi..n on the other
            assert lo >= need and n - hi + 1 >= need
            assert hi - lo + 1 >= min(b + 1, n) - 1


def test_spread_examples(row5):
    w, lo, hi, members = spread(row5, [1.0, 0.0], 1)
    assert (w, lo, hi) == (3.0, 3.0, 6.0)
    assert members.tolist() == [1, 2]
    w, lo, hi, _ = spread(row5, [1.0, 0.0], 3)
    assert (w, lo, hi) == (9.0, 0.0, 9.0)
    # with ceiling ranks the window is symmetric under v -> -v exactly when n - b is odd
    b = grid(101, seed=3)
    v = build_directions(5, 2).directions[1]
    assert spread(b, v, 40)[0] == pytest.approx(spread(b, -v, 40)[0], abs=1e-12)


def test_select_cut_point_examples():
    p = select_cut_point([], 0, 10)
    assert 1 < p < 9
    p = select_cut_point([5.0], 0, 10)
    assert 1 < p < 9 and near_count([5.0], p) == 0
    p = select_cut_point([1.0, 5.0, 9.0], 0, 10)
    assert 1 < p < 9 and near_count([1.0, 5.0, 9.0], p) == 0
    with pytest.raises(WidthError):
        select_cut_point([1.0], 0, 2)


def test_select_cut_point_crowded_center():
    vals = [5.0] * 50 + [2.0, 8.0]
    p = select_cut_point(vals, 0, 10)
    assert near_count(vals, p) <= 2 * len(vals) / 8


@settings(max_examples=300, deadline=None)
@given(st.floats(-100, 100), st.floats(2.1, 50), st.data())
def test_cut_point_contract_property(lo, w, data):
    hi = lo + w
    vals = data.draw(st.lists(st.floats(lo, hi), max_size=200))
    p = select_cut_point(vals, lo, hi)
    assert lo + 1 < p < hi - 1
    assert near_count(vals, p) <= 2 * len(vals) / (w - 2)


def test_separator_collinear_example(row5):
    # b = 1, k = 2 violates both conditions for n = 5; the search still runs, flagged
    params = check_conditions(2, 5, 1, 2, strict=False)
    with pytest.warns(FallbackWarning):
        res = find_separator_nd(row5, params)
    assert res.fallback and res.guaranteed_max_cut is None
    assert res.actual_left >= 2 and res.actual_right >= 2
    left, right, on = oracle.count_sides(row5, res.plane)
    assert (left + on, right + on) == (res.actual_left, res.actual_right)


def test_separator_grid42_example():
    # n = 100 is too small for t > 2 with alpha = 1/4; side counts still hold
    b = instances.jittered_grid(2, 10, 2.5, 42)
    params = params_from_alpha(2, 100, 0.25, strict=False)
    with pytest.warns(FallbackWarning):
        res = find_separator_nd(b, params)
    assert params.guaranteed_min_side == 25
    assert (res.actual_left, res.actual_right, res.actual_cut) == (49, 51, 10)


def test_separator_3d_f_mode_example():
    b = instances.jittered_grid(3, 10, 2.5, 0)
    n = len(b)
    f = math.log2(n)
    params = params_from_f(3, n, f, strict=False)
    with pytest.warns(FallbackWarning):
        res = find_separator_nd(b, params)
    assert min(res.actual_left, res.actual_right) >= (n / 2) * (1 - 1 / f)


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("layout", ["grid", "clusters"])
def test_separator_contract_when_conditions_hold(seed, layout):
    n = 1000
    b = grid(n, seed) if layout == "grid" else instances.clusters(2, n, 3, seed)
    params = params_from_alpha(2, n, 0.25)
    with warnings.catch_warnings():
        warnings.simplefilter("error", FallbackWarning)
        res = find_separator_nd(b, params)
    left, right, on = oracle.count_sides(b, res.plane)
    cut, _ = oracle.count_intersected(b, res.plane)
    assert left + on >= math.ceil((n - params.b) / 2)
    assert right + on >= math.ceil((n - params.b) / 2)
    assert cut <= 2 * params.b / (params.t - 2)
    assert res.spread >= params.t


def test_separator_deterministic():
    b = grid(1000, 4)
    params = params_from_alpha(2, 1000, 0.25)
    r1, r2 = find_separator_nd(b, params), find_separator_nd(b, params)
    assert r1 == r2
    assert r1.plane.normal.tobytes() == r2.plane.normal.tobytes()


def test_separator_rejects_mismatched_params():
    with pytest.raises(DimensionError):
        find_separator_nd(grid(50), params_from_alpha(2, 1000, 0.25))


def test_threshold_formula_matches_hand_value():
    assert spread_threshold(2, 10000, 4) == pytest.approx(15.6664, abs=1e-4)
