import numpy as np
import pytest

from driftwatch.cluster import ocsvm_predict, ocsvm_train


def trained(rng, n=60, nu=0.2):
    data = rng.normal(100, 5, n)
    gamma = 1.0 / (2.0 * data.var())
    return data, ocsvm_train(data, nu=nu, gamma=gamma)


class TestDualSolution:
    def test_alpha_box_and_sum(self):
        rng = np.random.default_rng(0)
        for trial in range(5):
            data, model = trained(rng)
            cap = 1.0 / (0.2 * data.size)
            assert np.all(model.alphas > 0)
            assert np.all(model.alphas <= cap + 1e-12)
            assert model.alphas.sum() == pytest.approx(1.0, abs=1e-6)

    def test_nu_bounds(self):
        rng = np.random.default_rng(1)
        for nu in (0.1, 0.2):
            for _ in range(3):
                data = rng.normal(50, 3, 80)
                model = ocsvm_train(data, nu=nu, gamma=1.0 / (2 * data.var()))
                inliers, _ = ocsvm_predict(model, data)
                outlier_fraction = 1.0 - inliers.mean()
                sv_fraction = model.support_values.size / data.size
                assert outlier_fraction <= nu + 0.05
                assert sv_fraction >= nu - 0.05

    def test_constant_data_all_inliers(self):
        model = ocsvm_train([7.0] * 20, nu=0.1, gamma=1.0)
        inliers, decision = ocsvm_predict(model, [7.0] * 20)
        assert inliers.all()
        assert np.allclose(decision, 0.0, atol=1e-9)

    def test_margin_support_vector_decision_near_zero(self):
        rng = np.random.default_rng(2)
        data, model = trained(rng, n=80)
        cap = 1.0 / (0.2 * data.size)
        free = (model.alphas > 1e-6 * cap) & (model.alphas < cap * (1 - 1e-6))
        assert free.any()
        _, decision = ocsvm_predict(model, model.support_values[free])
        assert np.all(np.abs(decision) < 1e-3)

    def test_errors(self):
        with pytest.raises(ValueError):
            ocsvm_train([1.0], nu=0.1, gamma=1.0)
        with pytest.raises(ValueError):
            ocsvm_train([1.0, 2.0], nu=0.0, gamma=1.0)
        with pytest.raises(ValueError):
            ocsvm_train([1.0, 2.0], nu=0.1, gamma=0.0)


class TestPrediction:
    def test_far_point_is_outlier(self):
        rng = np.random.default_rng(3)
        data, model = trained(rng)
        inlier, decision = ocsvm_predict(model, [1000.0])
        # oracle: evaluate the decision function directly from the model fields
        expected = (
            model.alphas * np.exp(-model.gamma * (1000.0 - model.support_values) ** 2)
        ).sum() - model.rho
        assert decision[0] == pytest.approx(expected, abs=1e-12)
        assert not inlier[0]
        assert decision[0] < 0

    def test_training_points_mostly_inliers(self):
        rng = np.random.default_rng(4)
        data, model = trained(rng, nu=0.1)
        inliers, _ = ocsvm_predict(model, data)
        assert 1.0 - inliers.mean() <= 0.1 + 0.05

    def test_decision_matches_manual_kernel_expansion(self):
        rng = np.random.default_rng(5)
        data, model = trained(rng)
        probes = rng.normal(100, 20, 10)
        _, decision = ocsvm_predict(model, probes)
        for x, d in zip(probes, decision):
            manual = (
                model.alphas * np.exp(-model.gamma * (x - model.support_values) ** 2)
            ).sum() - model.rho
            assert d == pytest.approx(manual, abs=1e-12)
