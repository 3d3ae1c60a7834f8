"""K-nearest neighbors and bag-of-neighbors label counts within one view.

A sample's bag-of-neighbors (BON) vector counts, per class, how many of its
K nearest same-view neighbors carry that class label. Row sums therefore
always equal K, and the vector lives on the scaled simplex regardless of
the view's feature dimension, which is what lets views of different widths
share one weight graph downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .errors import ClassCountMismatchError, KTooLargeError, LabelOutOfRangeError


@dataclass(frozen=True)
class NeighborTable:
    """Indices of the k nearest neighbors of each sample, nearest first."""

    indices: np.ndarray
    k: int


@dataclass(frozen=True)
class BonMatrix:
    """Per-sample label counts over the k nearest neighbors."""

    counts: np.ndarray
    k: int

    @property
    def class_count(self) -> int:
        return self.counts.shape[1]

    @property
    def label_presence(self) -> np.ndarray:
        """Boolean (n, c) mask: class present among the sample's neighbors."""
        return self.counts > 0

    def label_set(self, i: int) -> set[int]:
        """Classes (1-based) that appear among sample ``i``'s neighbors."""
        return {int(t) + 1 for t in np.flatnonzero(self.counts[i] > 0)}


def pairwise_distance(x, a: int, b: int) -> float:
    """Euclidean distance between rows ``a`` and ``b`` of ``x``."""
    m = np.asarray(x, dtype=np.float64)
    return float(np.linalg.norm(m[a] - m[b]))


def knn(x, k: int) -> NeighborTable:
    """K nearest neighbors of every row of ``x`` by Euclidean distance.

    The sample itself is excluded. Distance ties break deterministically
    toward the lower row index.

    Raises
    ------
    KTooLargeError
        Unless ``1 <= k <= n - 1``.
    """
    m = np.asarray(x, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"need a nonempty 2-D array, got shape {m.shape}")
    n = m.shape[0]
    if not 1 <= k <= n - 1:
        raise KTooLargeError(f"k must satisfy 1 <= k <= {n - 1}, got {k}")
    dist = cdist(m, m)
    np.fill_diagonal(dist, np.inf)
    # Stable sort keeps equal-distance candidates in ascending index order.
    order = np.argsort(dist, axis=1, kind="stable")
    return NeighborTable(indices=order[:, :k].astype(np.int64), k=k)


def bon_vectors(table: NeighborTable, labels, class_count: int) -> BonMatrix:
    """Count neighbor labels per class for every sample.

    Raises
    ------
    ClassCountMismatchError
        If a label exceeds ``class_count``.
    """
    lab = np.asarray(labels, dtype=np.int64)
    if lab.ndim != 1 or lab.shape[0] != table.indices.shape[0]:
        raise ValueError(
            f"labels shape {lab.shape} does not match {table.indices.shape[0]} samples"
        )
    if lab.min() < 1:
        raise LabelOutOfRangeError(f"labels must be >= 1, found {lab.min()}")
    if lab.max() > class_count:
        raise ClassCountMismatchError(
            f"label {lab.max()} exceeds class_count {class_count}"
        )
    neighbor_labels = lab[table.indices]
    counts = np.zeros((lab.shape[0], class_count), dtype=np.int64)
    for cls in range(1, class_count + 1):
        counts[:, cls - 1] = (neighbor_labels == cls).sum(axis=1)
    return BonMatrix(counts=counts, k=table.k)
