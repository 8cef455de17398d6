import numpy as np
import pytest

from driftwatch.detectors import (
    MODEL_NAMES,
    DriftDetector,
    ModelType,
    detect,
    verdict_record,
)
from driftwatch.telemetry import Batch

from oracles import dbscan_reference, mixture_data

COUNT_MODELS = ("affinity", "dbscan", "hierarchical", "optics")


def batch_of(values, start=0.0):
    values = list(values)
    return Batch(start, start + len(values), tuple(values))


class TestEstimatorApi:
    def test_get_set_params_round_trip(self):
        det = DriftDetector("kmeans", multiplier=3.0, seed=11)
        params = det.get_params()
        assert params["model"] == "kmeans"
        assert params["multiplier"] == 3.0
        clone = DriftDetector(**params)
        assert clone.get_params() == params

    def test_set_params_chains_and_validates(self):
        det = DriftDetector()
        assert det.set_params(min_pts=6).min_pts == 6
        with pytest.raises(ValueError):
            det.set_params(nonsense=1)

    def test_sklearn_clone_compatible(self):
        sklearn_base = pytest.importorskip("sklearn.base")
        det = DriftDetector("greedy", margin=0.5)
        clone = sklearn_base.clone(det)
        assert clone.get_params() == det.get_params()

    def test_predict_requires_fit(self):
        with pytest.raises(RuntimeError):
            DriftDetector("dbscan").predict([1, 2, 3])

    def test_model_state_mismatch_rejected(self):
        det = DriftDetector("greedy").fit([1, 2, 3])
        det.model = "dbscan"
        with pytest.raises(ValueError, match="state"):
            det.evaluate([1, 2, 3])

    def test_accepts_batches_and_arrays(self):
        det = DriftDetector("greedy").fit(batch_of([1, 2, 3]))
        assert det.predict(np.array([1.0, 2.0])) is False

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError, match="unknown model"):
            DriftDetector("svm").fit([1, 2])


class TestFitState:
    def test_greedy_monitoring_max(self):
        det = DriftDetector("greedy").fit([100, 120, 90])
        assert det.state_.monitoring_max == 120.0

    def test_dbscan_eps_from_train_std(self):
        # population std of alternating 90/110 is exactly 10
        train = [90.0, 110.0] * 6
        det = DriftDetector("dbscan", eps_factor=3.0).fit(train)
        assert det.state_.eps == 30.0
        assert det.state_.k_train == 1

    def test_kmeans_two_blob_gap(self):
        train = [1.0, 2.0, 9.0, 10.0, 11.0]
        det = DriftDetector("kmeans").fit(train)
        assert det.state_.k_train == 2
        assert det.state_.old_max_gap == pytest.approx(8.5)

    def test_hierarchical_threshold_from_mean(self):
        det = DriftDetector("hierarchical", threshold_fraction=0.5).fit([10.0, 30.0])
        assert det.state_.distance_threshold == pytest.approx(10.0)

    def test_affinity_preference_is_min_similarity(self):
        det = DriftDetector("affinity").fit([0.0, 1.0, 10.0])
        assert det.state_.preference == -100.0

    def test_affinity_preference_override(self):
        det = DriftDetector("affinity", ap_preference_override=-4.0).fit([0.0, 1.0, 10.0])
        assert det.state_.preference == -4.0

    def test_ocsvm_auto_gamma(self):
        rng = np.random.default_rng(0)
        train = rng.normal(50, 4, 40)
        det = DriftDetector("ocsvm").fit(train)
        assert det.state_.gamma == pytest.approx(1.0 / (2.0 * train.var()))

    def test_min_train_sizes(self):
        DriftDetector("greedy").fit([5.0])  # greedy accepts one value
        with pytest.raises(ValueError):
            DriftDetector("dbscan").fit([5.0])


class TestDecisionRules:
    def test_greedy_margin_rule(self):
        verdict = detect([100.0, 80.0], [150.0], model="greedy", margin=0.2)
        assert verdict.drift is True
        verdict = detect([100.0, 80.0], [119.0], model="greedy", margin=0.2)
        assert verdict.drift is False

    def test_dbscan_unimodal_to_bimodal(self):
        rng = np.random.default_rng(1)
        train = rng.normal(100, 5, 30)
        test = np.concatenate([rng.normal(100, 1, 12), rng.normal(200, 1, 12)])
        det = DriftDetector("dbscan").fit(train)
        verdict = det.evaluate(test)
        assert verdict.drift is True
        # the oracle sees the same two clusters with the trained eps
        labels = dbscan_reference(test, det.state_.eps, det.min_pts)
        k_oracle = len(set(labels[labels >= 0].tolist()))
        assert k_oracle == 2 > det.state_.k_train

    def test_kmeans_gap_multiplier_rule(self):
        rng = np.random.default_rng(2)
        train = np.concatenate([rng.normal(0, 0.3, 10), rng.normal(10, 0.3, 10)])
        spread = np.concatenate([rng.normal(0, 0.3, 10), rng.normal(50, 0.3, 10)])
        det = DriftDetector("kmeans", multiplier=2.0).fit(train)
        assert det.evaluate(spread).drift is True
        assert det.evaluate(train).drift is False

    def test_ocsvm_outlier_fraction_score(self):
        rng = np.random.default_rng(3)
        train = rng.normal(100, 3, 50)
        det = DriftDetector("ocsvm").fit(train)
        verdict = det.evaluate(np.full(10, 500.0))
        assert verdict.drift is True
        assert verdict.score == 1.0

    def test_count_models_score_sign_matches_drift(self):
        rng = np.random.default_rng(4)
        for model in COUNT_MODELS:
            for trial in range(8):
                train = mixture_data(rng, 30)
                test = mixture_data(rng, 15)
                verdict = DriftDetector(model).fit(train).evaluate(test)
                assert (verdict.score > 0) == verdict.drift

    def test_verdict_detail_mentions_model(self):
        verdict = detect([1.0, 2.0], [1.0, 2.0], model="hierarchical")
        assert "hierarchical" in verdict.detail

    def test_detect_is_fit_then_evaluate(self):
        rng = np.random.default_rng(9)
        train = mixture_data(rng, 20)
        test = mixture_data(rng, 12)
        for model in MODEL_NAMES:
            assert detect(train, test, model=model) == (
                DriftDetector(model).fit(train).evaluate(test)
            )


class TestDetectorInvariants:
    @pytest.mark.parametrize("model", [m for m in MODEL_NAMES if m != "ocsvm"])
    def test_identical_batches_no_drift(self, model):
        rng = np.random.default_rng(5)
        for trial in range(10):
            values = mixture_data(rng, int(rng.integers(5, 30)))
            verdict = detect(values, values, model=model)
            assert verdict.drift is False, f"{model} flagged identical batches: {verdict}"

    def test_identical_batches_ocsvm_bounded(self):
        rng = np.random.default_rng(6)
        for trial in range(10):
            values = mixture_data(rng, 40)
            verdict = detect(values, values, model="ocsvm", nu=0.1)
            assert verdict.score <= 0.1 + 0.05

    @pytest.mark.parametrize("model", ["greedy", "kmeans", "gmm", "dbscan"])
    def test_scale_invariance(self, model):
        rng = np.random.default_rng(7)
        for trial in range(6):
            train = mixture_data(rng, 24)
            test = mixture_data(rng, 18)
            base = detect(train, test, model=model).drift
            for c in (0.5, 4.0):  # exact powers of two keep float scaling exact
                scaled = detect(train * c, test * c, model=model).drift
                assert scaled == base

    @pytest.mark.parametrize("model", MODEL_NAMES)
    def test_deterministic(self, model):
        rng = np.random.default_rng(8)
        train = mixture_data(rng, 30)
        test = mixture_data(rng, 12)
        a = detect(train, test, model=model)
        b = detect(train, test, model=model)
        assert a == b


class TestVerdictRecord:
    def test_wire_format_fields(self):
        verdict = detect([1.0, 2.0], [10.0, 20.0], model="greedy")
        record = verdict_record("greedy", verdict, t_start=0.0, t_end=9.0, elapsed_ms=1.5)
        assert set(record) == {
            "model", "drift", "score", "detail", "t_start", "t_end", "elapsed_ms",
        }
        assert record["model"] == "greedy"
        assert record["drift"] is True

    def test_model_type_round_trip(self):
        for name in MODEL_NAMES:
            assert ModelType.coerce(name).value == name
        assert ModelType.coerce(ModelType.DBSCAN) is ModelType.DBSCAN
