import numpy as np
import pytest

from driftwatch.cluster import NOISE, dbscan

from oracles import canonical, dbscan_reference, mixture_data


class TestDbscanExamples:
    def test_cluster_plus_noise(self):
        res = dbscan([1, 1.1, 1.2, 9], eps=0.5, min_pts=2)
        assert res.n_clusters == 1
        assert list(res.labels) == [0, 0, 0, NOISE]
        assert canonical(res.labels) == canonical(dbscan_reference([1, 1.1, 1.2, 9], 0.5, 2))

    def test_constant_data_one_cluster(self):
        res = dbscan([3, 3, 3, 3], eps=0.1, min_pts=4)
        assert res.n_clusters == 1
        assert NOISE not in res.labels

    def test_all_noise(self):
        res = dbscan([0, 5, 10], eps=1, min_pts=2)
        assert res.n_clusters == 0
        assert list(res.labels) == [NOISE] * 3
        assert canonical(res.labels) == canonical(dbscan_reference([0, 5, 10], 1, 2))

    def test_two_groups(self):
        data = [0, 0.5, 1.0, 10, 10.5, 11]
        res = dbscan(data, eps=0.6, min_pts=2)
        assert res.n_clusters == 2
        assert canonical(res.labels) == (0, 0, 0, 1, 1, 1)

    def test_labels_follow_first_visit_order(self):
        data = [10, 10.1, 0, 0.1]
        res = dbscan(data, eps=0.5, min_pts=2)
        assert list(res.labels) == [0, 0, 1, 1]

    def test_errors(self):
        with pytest.raises(ValueError):
            dbscan([1, 2], eps=0, min_pts=2)
        with pytest.raises(ValueError):
            dbscan([1, 2], eps=1, min_pts=0)


class TestDbscanProperties:
    def test_matches_reference_on_random_inputs(self):
        rng = np.random.default_rng(99)
        for _ in range(150):
            n = int(rng.integers(2, 64))
            data = mixture_data(rng, n)
            eps = float(rng.uniform(0.2, 10.0))
            min_pts = int(rng.integers(1, 6))
            mine = dbscan(data, eps, min_pts)
            assert canonical(mine.labels) == canonical(dbscan_reference(data, eps, min_pts))

    def test_translation_invariance(self):
        data = np.array([1.0, 1.5, 2.0, 8.0, 8.5, 20.0])
        base = dbscan(data, 0.6, 2)
        for offset in (100.0, -3.0):
            shifted = dbscan(data + offset, 0.6, 2)
            assert np.array_equal(base.labels, shifted.labels)

    def test_centroids_are_cluster_means(self):
        data = np.array([0.0, 1.0, 2.0, 10.0, 11.0, 12.0])
        res = dbscan(data, 1.5, 2)
        assert res.n_clusters == 2
        assert res.centroids[0] == pytest.approx(1.0)
        assert res.centroids[1] == pytest.approx(11.0)
