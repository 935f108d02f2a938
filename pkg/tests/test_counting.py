import math

import numpy as np
import pytest

from speclab.bump import HolderClass, lower_bound_constant
from speclab.counting import (
    ExpSum,
    PolySystem,
    count_exp_sum_zeros,
    enumerate_sign_vectors_1d,
    exp_sum_distance_floor,
    find_unattained_sequence,
    khovanskii_cell_bound,
    khovanskii_complement_bound,
    khovanskii_floor,
    sample_sign_vectors,
    warren_component_bound,
    warren_thresholds,
)

# 50-digit reference values, frozen:
WARREN_1_2_3 = 65.238763883017086  # 24e
WARREN_2_1_1 = 29.556224395722601  # (2e)^2
WARREN_1_4_3 = 130.47752776603417
WARREN_2_2_4 = 1891.5983613262465
KH_CELL_3_2_4 = 4478976.0
KH_COMPL_2_1_2_1 = 3578144.3605721409  # (16e)^4
KH_COMPL_2_1_2_2 = 57250309.769154254  # (32e)^4
KH_FLOOR_2_1_2 = 3.7175929342369073e-6
KH_FLOOR_4_2_4 = 1.243523243448639e-13


def _line(*coeff_lists):
    return PolySystem(1, [np.asarray(c, dtype=float) for c in coeff_lists])


class TestWarren:
    def test_frozen_values(self):
        assert warren_component_bound(1, 2, 3) == pytest.approx(WARREN_1_2_3, rel=1e-13)
        assert warren_component_bound(2, 1, 1) == pytest.approx(WARREN_2_1_1, rel=1e-13)
        assert warren_component_bound(1, 2, 3) == pytest.approx(24 * math.e, rel=1e-13)

    def test_monotone_in_d_and_q(self):
        base = warren_component_bound(2, 3, 5)
        assert warren_component_bound(2, 4, 5) > base
        assert warren_component_bound(2, 3, 6) > base

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            warren_component_bound(0, 2, 3)

    @pytest.mark.parametrize("n,d,expected", [(1, 2, (8, 18)), (3, 4, (48, 108)), (2, 3, (26, 58))])
    def test_thresholds(self, n, d, expected):
        assert warren_thresholds(n, d) == expected

    def test_thresholds_reject_degree_one(self):
        with pytest.raises(ValueError):
            warren_thresholds(1, 1)


class TestEnumerate1d:
    def test_single_linear(self):
        assert enumerate_sign_vectors_1d(_line([0.0, 1.0])) == {(-1,), (1,)}

    def test_two_linear(self):
        attained = enumerate_sign_vectors_1d(_line([0.0, 1.0], [-1.0, 1.0]))
        assert attained == {(-1, -1), (1, -1), (1, 1)}
        assert len(attained) <= warren_component_bound(1, 1, 2)

    def test_double_root_warns_but_returns(self):
        system = _line([0.0, 0.0, 1.0])  # zeta^2
        with pytest.warns(UserWarning, match="repeated roots"):
            attained = enumerate_sign_vectors_1d(system)
        assert attained == {(1,)}

    def test_rootless_system(self):
        assert enumerate_sign_vectors_1d(_line([1.0, 0.0, 1.0])) == {(1,)}

    def test_rejects_multivariate(self):
        system = PolySystem(2, [np.eye(2)])
        with pytest.raises(ValueError):
            enumerate_sign_vectors_1d(system)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_counts_below_bounds(self, seed):
        rng = np.random.Generator(np.random.Philox(seed))
        system = PolySystem.random(1, 3, 4, rng)
        attained = enumerate_sign_vectors_1d(system, resolution=3000)
        assert len(attained) <= 3 * 4 + 1
        assert len(attained) <= WARREN_1_4_3


class TestSampling:
    def test_positive_definite(self):
        table = np.zeros((3, 3))
        table[0, 0] = table[2, 0] = table[0, 2] = 1.0  # 1 + z1^2 + z2^2
        system = PolySystem(2, [table])
        rng = np.random.Generator(np.random.Philox(7))
        assert sample_sign_vectors(system, 400, 5.0, rng) == {(1,)}

    def test_single_sample_is_singleton(self):
        rng = np.random.Generator(np.random.Philox(11))
        system = PolySystem.random(2, 2, 2, rng)
        assert len(sample_sign_vectors(system, 1, 1.0, rng)) <= 1

    @pytest.mark.parametrize("seed", range(8))
    def test_cardinality_below_warren(self, seed):
        rng = np.random.Generator(np.random.Philox(seed))
        system = PolySystem.random(2, 4, 2, rng)
        attained = sample_sign_vectors(system, 500, 3.0, rng)
        assert len(attained) <= WARREN_2_2_4


class TestUnattained:
    def test_single_linear_attains_everything(self):
        assert find_unattained_sequence(_line([0.0, 1.0])) is None

    def test_two_linear_gap(self):
        assert find_unattained_sequence(_line([0.0, 1.0], [-1.0, 1.0])) == (-1, 1)

    def test_guaranteed_beyond_threshold(self):
        # q = 8 >= 8 * 1 * log2(2): a gap must exist
        rng = np.random.Generator(np.random.Philox(23))
        system = PolySystem.random(1, 8, 2, rng)
        assert find_unattained_sequence(system) is not None


class TestKhovanskii:
    def test_cell_frozen(self):
        assert khovanskii_cell_bound(2, 1, 2) == pytest.approx(128.0, rel=1e-13)
        assert khovanskii_cell_bound(2, 2, 2) == pytest.approx(2048.0, rel=1e-13)
        assert khovanskii_cell_bound(3, 2, 4) == pytest.approx(KH_CELL_3_2_4, rel=1e-13)

    def test_cell_growth_in_k(self):
        for k in (1, 2, 3):
            ratio = khovanskii_cell_bound(3, k + 1, 2) / khovanskii_cell_bound(3, k, 2)
            assert ratio >= 2 * 3 * 3

    def test_complement_frozen(self):
        assert khovanskii_complement_bound(2, 1, 2, 1) == pytest.approx(
            KH_COMPL_2_1_2_1, rel=1e-13
        )
        assert khovanskii_complement_bound(2, 1, 2, 2) == pytest.approx(
            KH_COMPL_2_1_2_2, rel=1e-13
        )

    def test_complement_doubling_m(self):
        ratio = khovanskii_complement_bound(3, 2, 2, 4) / khovanskii_complement_bound(
            3, 2, 2, 2
        )
        assert ratio == pytest.approx(2 ** (3 + 4), rel=1e-12)

    def test_floor_frozen(self):
        assert khovanskii_floor(2, 1, 2, HolderClass(1.0, 1)) == pytest.approx(
            KH_FLOOR_2_1_2, rel=1e-12
        )
        assert khovanskii_floor(4, 2, 4, HolderClass(2.0, 2)) == pytest.approx(
            KH_FLOOR_4_2_4, rel=1e-12
        )

    def test_floor_decay_in_k(self):
        h = HolderClass(1.0, 1)
        ratio = khovanskii_floor(2, 2, 2, h) / khovanskii_floor(2, 1, 2, h)
        assert ratio == pytest.approx(0.25, rel=1e-12)

    def test_floor_promotes_degenerate_args(self):
        h = HolderClass(1.5, 1)
        assert khovanskii_floor(1, 1, 2, h) == khovanskii_floor(2, 1, 2, h)
        assert khovanskii_floor(2, 1, 1, h) == khovanskii_floor(2, 1, 2, h)


class TestExpSumZeros:
    def test_positive_exponential(self):
        es = ExpSum([(np.array([1.0]), 3.0)], (-1.0, 1.0))
        assert count_exp_sum_zeros(es, 100) == 0

    @pytest.mark.parametrize("scan_points", [50, 51])
    def test_one_minus_exp(self, scan_points):
        es = ExpSum([(np.array([1.0]), 0.0), (np.array([-1.0]), 1.0)], (-1.0, 1.0))
        assert count_exp_sum_zeros(es, scan_points) == 1

    def test_tangential_zero_flagged_not_counted(self):
        es = ExpSum([(np.array([0.0, 0.0, 1.0]), 0.0)], (-1.0, 1.0))  # t^2
        with pytest.warns(UserWarning, match="tangential"):
            count = count_exp_sum_zeros(es, 101)
        assert count == 0

    def test_polynomial_factor_zeros(self):
        # t * e^t - small shift: t e^t = 0 only at t = 0
        es = ExpSum([(np.array([0.0, 1.0]), 1.0)], (-2.0, 2.0))
        assert count_exp_sum_zeros(es, 200) == 1

    def test_scan_budget_enforced(self):
        es = ExpSum([(np.array([1.0]), 1.0), (np.array([1.0]), 2.0)], (0.0, 1.0))
        with pytest.raises(ValueError):
            count_exp_sum_zeros(es, 15)

    def test_zero_sum_rejected_at_construction(self):
        with pytest.raises(ValueError):
            ExpSum([(np.array([0.0]), 1.0)], (0.0, 1.0))
        with pytest.raises(ValueError):
            ExpSum([(np.array([1.0]), 1.0), (np.array([1.0]), 1.0)], (0.0, 1.0))

    @pytest.mark.parametrize("seed", range(60))
    def test_descartes_bound_constant_coefficients(self, seed):
        rng = np.random.Generator(np.random.Philox(seed))
        n = int(rng.integers(1, 5))
        es = ExpSum.random_constant(n, rng, interval=(-2.0, 2.0))
        assert count_exp_sum_zeros(es, 40 * n + 50) <= n - 1

    @pytest.mark.parametrize("seed", range(5))
    def test_all_positive_means_no_zeros(self, seed):
        rng = np.random.Generator(np.random.Philox(1000 + seed))
        n = 3
        terms = [
            (np.array([float(rng.uniform(0.1, 1.0))]), float(z))
            for z in sorted(rng.uniform(0.1, 2.0, n))
        ]
        es = ExpSum(terms, (-1.0, 3.0))
        assert count_exp_sum_zeros(es, 200) == 0


class TestDistanceFloor:
    def test_matches_bump_constant(self):
        h = HolderClass(1.0, 1)
        expected = lower_bound_constant("uniform", h) / 2.0
        assert exp_sum_distance_floor(2, (0, 0), h) == pytest.approx(expected, rel=1e-13)

    def test_degree_free_form(self):
        h = HolderClass(1.5, 1)
        c = lower_bound_constant("uniform", h)
        assert exp_sum_distance_floor(3, (0, 0, 0), h) == pytest.approx(
            c / 3 ** 1.5, rel=1e-13
        )

    def test_rejects_multidimensional_holder(self):
        with pytest.raises(ValueError):
            exp_sum_distance_floor(2, (0, 0), HolderClass(1.0, 2))


class TestSystemTypes:
    def test_rejects_zero_polynomial(self):
        with pytest.raises(ValueError):
            PolySystem(1, [np.array([0.0, 0.0])])

    def test_rejects_constant_system(self):
        with pytest.raises(ValueError):
            PolySystem(1, [np.array([2.0])])

    def test_random_respects_total_degree(self):
        rng = np.random.Generator(np.random.Philox(5))
        system = PolySystem.random(2, 3, 2, rng)
        assert system.d <= 2
        for table in system.polys:
            idx = np.indices(table.shape).sum(axis=0)
            assert not np.any(table[idx > 2])

    def test_evaluate_matches_direct(self):
        table = np.zeros((3, 3))
        table[1, 0], table[0, 2], table[2, 1] = 2.0, -1.0, 0.5
        system = PolySystem(2, [table])
        pts = np.array([[0.3, -1.2], [2.0, 0.5]])
        vals = system.evaluate(pts)
        direct = 2 * pts[:, 0] - pts[:, 1] ** 2 + 0.5 * pts[:, 0] ** 2 * pts[:, 1]
        assert np.allclose(vals[0], direct, rtol=1e-14)
