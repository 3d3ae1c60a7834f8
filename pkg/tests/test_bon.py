"""Neighbor search and bag-of-neighbors tests."""

import numpy as np
import pytest

from mvle.bon import bon_vectors, knn, pairwise_distance
from mvle.errors import ClassCountMismatchError, KTooLargeError


class TestPairwiseDistance:
    def test_identical_rows(self):
        x = np.array([[1.0, 2.0], [1.0, 2.0]])
        assert pairwise_distance(x, 0, 1) == 0.0

    def test_three_four_five(self):
        x = np.array([[0.0, 0.0], [3.0, 4.0]])
        assert pairwise_distance(x, 0, 1) == pytest.approx(5.0, abs=1e-12)

    def test_scalar_loop_oracle(self):
        # Oracle: per-component squared difference summed in a plain loop.
        rng = np.random.default_rng(61)
        x = rng.normal(size=(10, 7))
        for a in range(10):
            for b in range(10):
                total = 0.0
                for j in range(7):
                    total += (x[a, j] - x[b, j]) ** 2
                expect = total**0.5
                assert pairwise_distance(x, a, b) == pytest.approx(expect, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(62)
        x = rng.normal(size=(6, 3))
        for a in range(6):
            for b in range(6):
                assert pairwise_distance(x, a, b) == pairwise_distance(x, b, a)


class TestKnn:
    def test_forced_ordering(self):
        x = np.array([[0.0], [1.0], [2.0], [10.0]])
        table = knn(x, 2)
        assert set(table.indices[0].tolist()) == {1, 2}
        assert table.indices[0].tolist() == [1, 2]
        assert table.indices[3].tolist() == [2, 1]

    def test_all_identical_tie_break(self):
        x = np.zeros((5, 3))
        table = knn(x, 2)
        assert table.indices[0].tolist() == [1, 2]
        assert table.indices[3].tolist() == [0, 1]

    def test_self_excluded(self):
        rng = np.random.default_rng(63)
        x = rng.normal(size=(20, 4))
        table = knn(x, 5)
        for a in range(20):
            assert a not in table.indices[a]
            assert len(table.indices[a]) == 5

    def test_exhaustive_sort_oracle(self):
        # Oracle: full distance sort per sample with explicit tie handling.
        rng = np.random.default_rng(64)
        x = rng.normal(size=(50, 5))
        table = knn(x, 7)
        for a in range(50):
            dists = [
                (pairwise_distance(x, a, b), b) for b in range(50) if b != a
            ]
            dists.sort()
            expect = [b for _, b in dists[:7]]
            assert table.indices[a].tolist() == expect

    def test_neighbors_sorted_by_distance(self):
        rng = np.random.default_rng(65)
        x = rng.normal(size=(30, 3))
        table = knn(x, 6)
        for a in range(30):
            seq = [pairwise_distance(x, a, b) for b in table.indices[a]]
            assert all(seq[i] <= seq[i + 1] + 1e-15 for i in range(len(seq) - 1))

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(66)
        x = rng.normal(size=(15, 4))
        perm = rng.permutation(15)
        inverse = np.argsort(perm)
        base = knn(x, 4)
        shuffled = knn(x[perm], 4)
        for new_idx, old_idx in enumerate(perm):
            mapped = [inverse[b] for b in base.indices[old_idx]]
            assert shuffled.indices[new_idx].tolist() == mapped

    def test_rotation_invariance(self):
        rng = np.random.default_rng(67)
        x = rng.normal(size=(25, 6))
        q, _ = np.linalg.qr(rng.normal(size=(6, 6)))
        base = knn(x, 5)
        rotated = knn(x @ q, 5)
        assert np.array_equal(base.indices, rotated.indices)

    def test_k_too_large(self):
        x = np.zeros((4, 2))
        with pytest.raises(KTooLargeError):
            knn(x, 4)
        with pytest.raises(KTooLargeError):
            knn(x, 0)


class TestBonVectors:
    def test_direct_count(self):
        x = np.array([[0.0], [0.1], [0.2], [5.0]])
        table = knn(x, 3)
        labels = np.array([1, 1, 2, 3])
        bon = bon_vectors(table, labels, 3)
        # Neighbors of sample 3 are all of 0,1,2: labels 1,1,2.
        assert bon.counts[3].tolist() == [2, 1, 0]
        assert bon.label_set(3) == {1, 2}

    def test_degenerate_single_class_neighborhood(self):
        x = np.array([[0.0], [0.1], [0.2], [0.3]])
        labels = np.array([2, 2, 2, 2])
        bon = bon_vectors(knn(x, 3), labels, 3)
        for a in range(4):
            assert bon.counts[a].tolist() == [0, 3, 0]

    def test_row_sum_conservation(self):
        rng = np.random.default_rng(71)
        for _ in range(10):
            n = int(rng.integers(8, 40))
            k = int(rng.integers(1, n - 1))
            c = int(rng.integers(2, 6))
            x = rng.normal(size=(n, 3))
            labels = rng.integers(1, c + 1, size=n)
            bon = bon_vectors(knn(x, k), labels, c)
            assert np.all(bon.counts.sum(axis=1) == k)
            assert np.all(bon.counts >= 0)
            assert np.all(bon.counts <= k)

    def test_label_presence_matches_counts(self):
        rng = np.random.default_rng(72)
        x = rng.normal(size=(20, 2))
        labels = rng.integers(1, 4, size=20)
        bon = bon_vectors(knn(x, 5), labels, 3)
        for a in range(20):
            expect = {t + 1 for t in range(3) if bon.counts[a, t] > 0}
            assert bon.label_set(a) == expect

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(73)
        x = rng.normal(size=(18, 3))
        labels = rng.integers(1, 4, size=18)
        perm = rng.permutation(18)
        base = bon_vectors(knn(x, 4), labels, 3)
        shuffled = bon_vectors(knn(x[perm], 4), labels[perm], 3)
        for new_idx, old_idx in enumerate(perm):
            assert shuffled.counts[new_idx].tolist() == base.counts[old_idx].tolist()

    def test_label_above_class_count(self):
        x = np.zeros((4, 2))
        labels = np.array([1, 2, 3, 4])
        with pytest.raises(ClassCountMismatchError):
            bon_vectors(knn(x, 2), labels, 3)
