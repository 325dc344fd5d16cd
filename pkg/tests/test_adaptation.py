"""
Tests de l'adaptation des prémisses (avec oubli) et des conclusions (WRLS)
"""

import math

import numpy as np
import pytest

from parafis.calculations.adaptation import (
    one_hot, update_premise, update_consequent, effective_membership, sub_rule_weights
)
from parafis.models.hyperparams import ForgettingFactor, HyperParams
from parafis.models.rule_system import AnticipationPair
from parafis.utils.errors import ConfigurationError
from conftest import make_rule, make_system


class TestForgettingFactor:

    def test_tmax(self):
        assert ForgettingFactor(0.9).tmax == 10
        assert ForgettingFactor(0.95).tmax == 20
        assert math.isinf(ForgettingFactor(1.0).tmax)

    def test_effective_count_saturates(self):
        forgetting = ForgettingFactor(0.9)
        assert forgetting.effective_count(0) == 1
        assert forgetting.effective_count(4) == 5
        assert forgetting.effective_count(500) == 10
        assert ForgettingFactor(1.0).effective_count(500) == 501

    @pytest.mark.parametrize("alpha", [0.0, -0.5, 1.5, 0.1])
    def test_invalid_alpha(self, alpha):
        with pytest.raises(ValueError):
            ForgettingFactor(alpha)


class TestHyperParams:

    def test_defaults(self):
        hp = HyperParams()
        assert (hp.alpha1, hp.alpha2, hp.n_min, hp.omega) == (1.0, 0.9, 20, 100.0)
        assert hp.uses_anticipation

    def test_alpha_order(self):
        with pytest.raises(ConfigurationError) as excinfo:
            HyperParams(alpha1=0.9, alpha2=0.95)
        assert excinfo.value.field == 'alpha2'

    def test_gefs_star_without_anticipation(self):
        with pytest.raises(ConfigurationError):
            HyperParams(creation_rule='gefs_star')
        hp = HyperParams(creation_rule='gefs_star', init_method='I2')
        assert not hp.uses_anticipation

    def test_dict_round_trip(self):
        hp = HyperParams(alpha2=0.95, n_min=15, init_method='I3')
        assert HyperParams.from_dict(hp.to_dict()) == hp


class TestUpdatePremise:

    def test_first_point_sets_center(self):
        rule = make_rule([0.4, -3.0], covariance=0.01 * np.eye(2))
        x = np.array([0.123, 0.456])
        update_premise(rule, x, ForgettingFactor(1.0))
        np.testing.assert_array_equal(rule.center, x)
        np.testing.assert_allclose(rule.covariance, 1e-10 * np.eye(2))
        assert rule.sample_count == 1

    def test_second_point_hand_evaluated(self):
        rule = make_rule([0.0, 0.0], covariance=0.01 * np.eye(2), count=1)
        update_premise(rule, np.array([2.0, 2.0]), ForgettingFactor(1.0))
        np.testing.assert_allclose(rule.center, [1.0, 1.0])
        np.testing.assert_allclose(rule.covariance, [[0.505, 0.5], [0.5, 0.505]])
        assert rule.sample_count == 2

    def test_running_mean_without_forgetting(self):
        rng = np.random.default_rng(0)
        points = rng.normal(size=(1000, 3))
        rule = make_rule([9.0, 9.0, 9.0])
        for x in points:
            update_premise(rule, x, ForgettingFactor(1.0))
        assert np.abs(rule.center - points.mean(axis=0)).max() < 1e-10

    def test_constant_stream_converges(self):
        target = np.array([1.0, 2.0])
        forgetting = ForgettingFactor(0.9)

        fresh = make_rule([5.0, 5.0])
        for _ in range(100):
            update_premise(fresh, target, forgetting)
        assert np.linalg.norm(fresh.center - target) < 1e-6

        mature = make_rule([2.0, 2.0], count=50)
        for _ in range(200):
            update_premise(mature, target, forgetting)
        assert np.linalg.norm(mature.center - target) < 1e-6

    def test_forgetting_tracks_recent_points(self):
        rule = make_rule([0.0, 0.0])
        for _ in range(30):
            update_premise(rule, np.zeros(2), ForgettingFactor(0.9))
        for _ in range(30):
            update_premise(rule, np.ones(2), ForgettingFactor(0.9))
        # Poids de l'ancien régime : 0.9^30
        np.testing.assert_allclose(rule.center, 1.0 - 0.9 ** 30)

    def test_cached_inverse_stays_accurate(self):
        rng = np.random.default_rng(4)
        rule = make_rule([0.0, 0.0, 0.0])
        for x in rng.normal(size=(1000, 3)):
            update_premise(rule, x, ForgettingFactor(0.95))
            assert np.abs(rule.covariance_inverse - np.linalg.inv(rule.covariance)).max() <= 1e-8
            assert np.linalg.eigvalsh(rule.covariance).min() > 0


class TestUpdateConsequent:

    def test_zero_weight_is_noop(self):
        rule = make_rule([0.0, 0.0], conclusion=[[1.0, 2.0, 3.0]])
        conclusion = rule.conclusion.copy()
        correlation = rule.correlation.copy()
        update_consequent(rule, np.array([0.5, 0.5]), np.array([1.0]), 0.0)
        np.testing.assert_array_equal(rule.conclusion, conclusion)
        np.testing.assert_array_equal(rule.correlation, correlation)

    def test_single_update_hand_evaluated(self):
        rule = make_rule([0.0], omega=100.0)
        update_consequent(rule, np.array([0.0]), np.array([1.0]), 1.0)
        assert rule.correlation[0, 0] == pytest.approx(100 / 101)
        assert rule.conclusion[0, 0] == pytest.approx(100 / 101)
        assert rule.conclusion[0, 1] == pytest.approx(0.0)

    def test_invalid_weight(self):
        rule = make_rule([0.0])
        with pytest.raises(ValueError):
            update_consequent(rule, np.array([0.0]), np.array([1.0]), 1.5)

    def test_matches_batch_ridge(self):
        rng = np.random.default_rng(5)
        omega = 100.0
        xs = rng.uniform(-1.0, 1.0, size=(50, 1))
        labels = (xs[:, 0] + rng.normal(0.0, 0.3, 50) > 0).astype(int) + 1
        targets = np.array([one_hot(label, 2) for label in labels])

        rule = make_rule([0.0], n_classes=2, omega=omega)
        for x, target in zip(xs, targets):
            update_consequent(rule, x, target, 1.0)

        design = np.hstack([np.ones((50, 1)), xs])
        ridge = np.linalg.solve(design.T @ design + np.eye(2) / omega, design.T @ targets)
        np.testing.assert_allclose(rule.conclusion, ridge.T, atol=1e-6)

    def test_correlation_stays_symmetric_psd(self):
        rng = np.random.default_rng(6)
        rule = make_rule([0.0, 0.0], n_classes=3)
        for x in rng.normal(size=(500, 2)):
            update_consequent(rule, x, one_hot(int(rng.integers(1, 4)), 3), float(rng.uniform()))
        np.testing.assert_array_equal(rule.correlation, rule.correlation.T)
        assert np.linalg.eigvalsh(rule.correlation).min() >= -1e-10


class TestWeights:

    def test_one_hot(self):
        np.testing.assert_array_equal(one_hot(2, 3), [0.0, 1.0, 0.0])
        with pytest.raises(ValueError):
            one_hot(4, 3)

    def test_effective_membership(self):
        system = make_system([make_rule([0.0, 0.0])], ['a'])
        assert effective_membership(system, np.array([3.0, 3.0]), 0) == pytest.approx(1.0)

        system = make_system([make_rule([0.0, 0.0]), make_rule([0.0, 0.0])], ['a'])
        assert effective_membership(system, np.array([1.0, 1.0]), 1) == pytest.approx(0.5)

    def test_sub_rule_weights_share_parent_mass(self):
        pair = AnticipationPair(fast=make_rule([0.0, 0.0]), slow=make_rule([1.0, 0.0]))
        fast, slow = sub_rule_weights(pair, np.array([0.0, 0.0]), 0.6)
        assert fast + slow == pytest.approx(0.6)
        assert fast == pytest.approx(0.6 * 1.0 / 1.5)
