"""Multi-view Laplacian eigenmap over the joint BON-weighted graph.

The fit normalizes each view, builds per-view K-nearest-neighbor tables
and bag-of-neighbors vectors, assembles the joint weight graph, and solves
the generalized eigenproblem L y = lambda D y. The all-ones direction
(eigenvalue 0) is dropped and the next ``dim`` eigenvectors, scaled so
Y^T D Y = I, become the embedding. Row blocks of Y map back to the views
in input order.
"""

from __future__ import annotations

import json
import os
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from . import bon as bon_mod
from .dataset import MultiViewDataset, NormStats, zscore_normalize
from .errors import ClassTooSmallError, DimTooLargeError
from .graph import WeightGraph, build_weight_graph
from .linalg import generalized_eig_diag

ZERO_EIGENVALUE_TOL = 1e-8


@dataclass(frozen=True)
class Embedding:
    """Joint embedding rows with the per-view partition."""

    y: np.ndarray
    per_view: tuple[np.ndarray, ...]
    eigenvalues: np.ndarray
    dim: int


@dataclass(frozen=True)
class FitArtifacts:
    """Everything the fit derived along the way, kept for reuse downstream."""

    bons: tuple[bon_mod.BonMatrix, ...]
    graph: WeightGraph
    norm_stats: tuple[NormStats, ...]
    k: int
    t: float


def fit(
    ds: MultiViewDataset, k: int, dim: int, t: float | None = None
) -> tuple[Embedding, FitArtifacts]:
    """Fit the multi-view embedding.

    Parameters
    ----------
    ds : MultiViewDataset
        Every class must appear in every view.
    k : int
        Neighbor count for the BON stage; ``1 <= k <= n_i - 1`` per view.
    dim : int
        Embedding dimension; ``1 <= dim <= N - 1`` for N total samples.
    t : float, optional
        Heat-kernel bandwidth. Defaults to the class count.

    Raises
    ------
    ClassTooSmallError
        If some class is missing from some view.
    DimTooLargeError
        If ``dim`` exceeds ``N - 1``.
    KTooLargeError, IsolatedSampleError, SingularDegreeError
        Propagated from the neighbor, graph, and eigen stages.
    """
    for view_id, view in enumerate(ds.views):
        present = np.unique(view.labels)
        for cls in range(1, ds.class_count + 1):
            if cls not in present:
                raise ClassTooSmallError(
                    f"class {cls} has no samples in view {view_id}; "
                    "every class must appear in every view"
                )
    n_total = ds.n_total
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if dim > n_total - 1:
        raise DimTooLargeError(
            f"dim {dim} exceeds N - 1 = {n_total - 1} for {n_total} total samples"
        )
    heat_t = float(ds.class_count) if t is None else float(t)

    stats = []
    bons = []
    for view in ds.views:
        normalized, st = zscore_normalize(view.features)
        stats.append(st)
        table = bon_mod.knn(normalized, k)
        bons.append(bon_mod.bon_vectors(table, view.labels, ds.class_count))

    graph = build_weight_graph(bons, [v.labels for v in ds.views], heat_t)
    eig = generalized_eig_diag(graph.laplacian, graph.degrees)

    near_zero = int(np.count_nonzero(eig.values < ZERO_EIGENVALUE_TOL))
    if near_zero > 1:
        warnings.warn(
            f"joint graph has {near_zero} near-zero eigenvalues (disconnected "
            "components); dropping only the first trivial direction",
            UserWarning,
            stacklevel=2,
        )

    y = eig.vectors[:, 1 : dim + 1]
    values = eig.values[1 : dim + 1].copy()
    per_view = tuple(y[sl].copy() for sl in graph.block_slices)
    embedding = Embedding(y=y.copy(), per_view=per_view, eigenvalues=values, dim=dim)
    artifacts = FitArtifacts(
        bons=tuple(bons),
        graph=graph,
        norm_stats=tuple(stats),
        k=k,
        t=heat_t,
    )
    return embedding, artifacts


def objective(y, graph: WeightGraph) -> float:
    """Graph smoothness cost: sum over all ordered pairs of ``||y_a - y_b||^2 W_ab``.

    Computed as the literal double sum, not through the Laplacian, so it can
    serve as an independent check of ``2 * trace(Y^T L Y)``.
    """
    ym = np.asarray(y, dtype=np.float64)
    if ym.ndim == 1:
        ym = ym[:, None]
    if ym.shape[0] != graph.n:
        raise ValueError(f"y has {ym.shape[0]} rows, graph has {graph.n} nodes")
    sq = cdist(ym, ym, "sqeuclidean")
    return float((sq * graph.w).sum())


def export_embedding(
    embedding: Embedding,
    artifacts: FitArtifacts,
    out_dir,
    seed: int | None = None,
) -> list[str]:
    """Write per-view embedding CSVs plus a JSON sidecar of fit metadata.

    Returns the list of paths written, views first, sidecar last.
    """
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for i, block in enumerate(embedding.per_view, start=1):
        path = os.path.join(out_dir, f"embedding_view{i}.csv")
        with open(path, "w", encoding="utf-8") as fh:
            for row in block:
                fh.write(",".join(repr(float(v)) for v in row))
                fh.write("\n")
        paths.append(path)
    meta = {
        "eigenvalues": [float(v) for v in embedding.eigenvalues],
        "k": int(artifacts.k),
        "t": float(artifacts.t),
        "dim": int(embedding.dim),
        "seed": seed,
    }
    meta_path = os.path.join(out_dir, "embedding_meta.json")
    with open(meta_path, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    paths.append(meta_path)
    return paths
