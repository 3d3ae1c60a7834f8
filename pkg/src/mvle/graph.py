"""Joint weight graph over all samples of all views.

Nodes are samples; views contribute contiguous index blocks. Two samples
a and b (same view or not) are connected when each one's label occurs in
the other's bag-of-neighbors label set. Connected pairs get heat-kernel
weight exp(-||bon_a - bon_b||^2 / t); everything else, the diagonal
included, is zero. Because BON vectors share the class axis across views,
this single rule couples views of different feature dimensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .bon import BonMatrix
from .errors import ClassCountMismatchError, IsolatedSampleError, LengthMismatchError


@dataclass(frozen=True)
class WeightGraph:
    """Dense joint graph with per-view block offsets and derived operators."""

    w: np.ndarray
    block_offsets: tuple[int, ...]
    degrees: np.ndarray
    laplacian: np.ndarray
    heat_t: float

    @property
    def n(self) -> int:
        return self.w.shape[0]

    @property
    def block_slices(self) -> tuple[slice, ...]:
        bounds = list(self.block_offsets) + [self.n]
        return tuple(slice(bounds[i], bounds[i + 1]) for i in range(len(self.block_offsets)))


def degree_and_laplacian(w) -> tuple[np.ndarray, np.ndarray]:
    """Row-sum degrees and the combinatorial Laplacian ``L = diag(d) - W``.

    Raises
    ------
    IsolatedSampleError
        If some row of ``W`` sums to zero; the usual fix is a larger
        neighbor count so label sets overlap more.
    """
    m = np.asarray(w, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"W must be square, got shape {m.shape}")
    degrees = m.sum(axis=1)
    isolated = np.flatnonzero(degrees == 0.0)
    if isolated.size:
        raise IsolatedSampleError(
            f"sample {isolated[0]} has zero total edge weight; "
            "try a larger neighbor count K so bag-of-neighbors label sets overlap"
        )
    laplacian = np.diag(degrees) - m
    return degrees, laplacian


def build_weight_graph(
    bons: Sequence[BonMatrix], labels: Sequence, t: float
) -> WeightGraph:
    """Assemble the joint weight graph from per-view BON matrices.

    Parameters
    ----------
    bons : sequence of BonMatrix
        One per view, all sharing the same class axis.
    labels : sequence of 1-D int arrays
        Label vector per view, aligned with the BON rows.
    t : float
        Heat-kernel bandwidth; positive.

    Raises
    ------
    ClassCountMismatchError
        If the BON matrices disagree on the number of classes.
    IsolatedSampleError
        If a sample ends up with zero total edge weight.
    """
    if len(bons) != len(labels):
        raise LengthMismatchError(
            f"{len(bons)} BON matrices but {len(labels)} label vectors"
        )
    if not bons:
        raise ValueError("need at least one view")
    if t <= 0:
        raise ValueError(f"heat bandwidth t must be positive, got {t}")
    class_count = bons[0].class_count
    for i, b in enumerate(bons):
        if b.class_count != class_count:
            raise ClassCountMismatchError(
                f"view {i} has {b.class_count} classes, view 0 has {class_count}"
            )

    label_parts = []
    for i, (b, lab) in enumerate(zip(bons, labels)):
        lab = np.asarray(lab, dtype=np.int64)
        if lab.shape[0] != b.counts.shape[0]:
            raise LengthMismatchError(
                f"view {i}: {b.counts.shape[0]} BON rows but {lab.shape[0]} labels"
            )
        label_parts.append(lab)

    counts = np.vstack([b.counts for b in bons]).astype(np.float64)
    stacked_labels = np.concatenate(label_parts)
    sizes = [b.counts.shape[0] for b in bons]
    offsets = tuple(int(v) for v in np.concatenate([[0], np.cumsum(sizes)[:-1]]))

    # has_label[a, b]: does b's class occur among a's neighbors?
    presence = counts > 0
    has_label = presence[:, stacked_labels - 1]
    connected = has_label & has_label.T

    sq_dist = cdist(counts, counts, "sqeuclidean")
    w = np.where(connected, np.exp(-sq_dist / t), 0.0)
    np.fill_diagonal(w, 0.0)
    w = np.triu(w, k=1)
    w = w + w.T

    degrees, laplacian = degree_and_laplacian(w)
    return WeightGraph(
        w=w,
        block_offsets=offsets,
        degrees=degrees,
        laplacian=laplacian,
        heat_t=float(t),
    )
