"""Comparison methods: single-view LE, LDA, CCA+LDA, PLS, MvDA, and ELM.

All projector-producing fits share one output type, :class:`LinearProjector`,
whose ``transform`` applies optional stored normalization stats and then the
per-view projection matrix. The fits themselves consume features as given
(centering internally only where the underlying covariances require it), so
callers control normalization policy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
from scipy.spatial.distance import cdist
from scipy.special import expit

from .dataset import MultiViewDataset, NormStats, zscore_apply
from .embedding import Embedding
from .errors import (
    DimMismatchError,
    DimTooLargeError,
    LengthMismatchError,
    NoConvergenceError,
    UnpairedViewsError,
    VcDimMismatchError,
)
from .graph import WeightGraph, degree_and_laplacian
from .linalg import generalized_eig_diag, ridge_solve

SCATTER_REG = 1e-6
CCA_KAPPA = 1e-4


def _fix_column_signs(w: np.ndarray) -> np.ndarray:
    lead = np.argmax(np.abs(w), axis=0)
    signs = np.sign(w[lead, np.arange(w.shape[1])])
    signs[signs == 0] = 1.0
    return w * signs


@dataclass(frozen=True)
class LinearProjector:
    """Per-view linear maps produced by one of the subspace fits."""

    method: str
    projections: tuple[np.ndarray, ...]
    norm_stats: tuple[NormStats, ...] | None = None

    @property
    def dim(self) -> int:
        return self.projections[0].shape[1]

    def transform(self, view_index: int, x) -> np.ndarray:
        xm = np.asarray(x, dtype=np.float64)
        w = self.projections[view_index]
        if xm.ndim != 2 or xm.shape[1] != w.shape[0]:
            raise DimMismatchError(
                f"view {view_index} expects {w.shape[0]} features, got shape {xm.shape}"
            )
        if self.norm_stats is not None:
            xm = zscore_apply(xm, self.norm_stats[view_index])
        return xm @ w


def le_fit(
    x,
    dim: int,
    *,
    k: int | None = None,
    eps: float | None = None,
    heat_t: float = 1.0,
) -> tuple[Embedding, WeightGraph]:
    """Single-view Laplacian eigenmap on raw feature distances.

    Exactly one of ``k`` (symmetric K-nearest-neighbor adjacency) or ``eps``
    (connect pairs with squared distance below ``eps``) selects the graph
    mode. Edge weights are exp(-||x_a - x_b||^2 / heat_t). The all-ones
    eigenvector is dropped, as in the multi-view fit.
    """
    from .bon import knn as knn_table

    xm = np.asarray(x, dtype=np.float64)
    if xm.ndim != 2 or xm.size == 0:
        raise ValueError(f"need a nonempty 2-D array, got shape {xm.shape}")
    if (k is None) == (eps is None):
        raise ValueError("give exactly one of k or eps")
    if heat_t <= 0:
        raise ValueError(f"heat_t must be positive, got {heat_t}")
    n = xm.shape[0]
    if not 1 <= dim <= n - 1:
        raise DimTooLargeError(f"dim must satisfy 1 <= dim <= {n - 1}, got {dim}")

    sq = cdist(xm, xm, "sqeuclidean")
    if k is not None:
        table = knn_table(xm, k)
        adj = np.zeros((n, n), dtype=bool)
        rows = np.repeat(np.arange(n), k)
        adj[rows, table.indices.ravel()] = True
        adj |= adj.T
    else:
        if eps <= 0:
            raise ValueError(f"eps must be positive, got {eps}")
        adj = sq < eps
        np.fill_diagonal(adj, False)

    w = np.where(adj, np.exp(-sq / heat_t), 0.0)
    np.fill_diagonal(w, 0.0)
    w = np.triu(w, k=1)
    w = w + w.T
    degrees, laplacian = degree_and_laplacian(w)
    graph = WeightGraph(
        w=w, block_offsets=(0,), degrees=degrees, laplacian=laplacian, heat_t=float(heat_t)
    )
    eig = generalized_eig_diag(laplacian, degrees)
    y = eig.vectors[:, 1 : dim + 1].copy()
    emb = Embedding(
        y=y,
        per_view=(y,),
        eigenvalues=eig.values[1 : dim + 1].copy(),
        dim=dim,
    )
    return emb, graph


def _class_scatters(x: np.ndarray, labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    classes = np.unique(labels)
    d = x.shape[1]
    mu = x.mean(axis=0)
    s_w = np.zeros((d, d))
    s_b = np.zeros((d, d))
    for cls in classes:
        block = x[labels == cls]
        mu_c = block.mean(axis=0)
        centered = block - mu_c
        s_w += centered.T @ centered
        diff = (mu_c - mu)[:, None]
        s_b += block.shape[0] * (diff @ diff.T)
    return s_w, s_b


def _top_generalized(numer: np.ndarray, denom: np.ndarray, dim: int) -> np.ndarray:
    # Denominator gets a trace-scaled ridge so rank deficiency cannot break
    # the solve; eigenvalues come back ascending, so slice from the top.
    d = denom.shape[0]
    reg = SCATTER_REG * np.trace(denom) / d
    denom_reg = denom + reg * np.eye(d)
    denom_reg = 0.5 * (denom_reg + denom_reg.T)
    numer = 0.5 * (numer + numer.T)
    try:
        _, vecs = scipy.linalg.eigh(numer, denom_reg)
    except scipy.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"generalized eigensolve failed: {exc}") from exc
    return vecs[:, ::-1][:, :dim]


def _lda_directions(x: np.ndarray, labels: np.ndarray, dim: int) -> np.ndarray:
    s_w, s_b = _class_scatters(x, labels)
    w = _top_generalized(s_b, s_w, dim)
    norms = np.linalg.norm(w, axis=0)
    norms[norms == 0] = 1.0
    return _fix_column_signs(w / norms)


def lda_fit(x, labels, dim: int) -> LinearProjector:
    """Fisher discriminant directions, unit-norm columns.

    Raises
    ------
    DimTooLargeError
        If ``dim`` exceeds ``class_count - 1``, the discriminant rank.
    """
    xm = np.asarray(x, dtype=np.float64)
    lab = np.asarray(labels, dtype=np.int64)
    if xm.shape[0] != lab.shape[0]:
        raise LengthMismatchError(f"{xm.shape[0]} rows but {lab.shape[0]} labels")
    c = np.unique(lab).size
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if dim > c - 1:
        raise DimTooLargeError(
            f"dim {dim} exceeds class_count - 1 = {c - 1}; Fisher scatter rank caps there"
        )
    if dim > xm.shape[1]:
        raise DimTooLargeError(f"dim {dim} exceeds feature dimension {xm.shape[1]}")
    return LinearProjector(method="lda", projections=(_lda_directions(xm, lab, dim),))


@dataclass(frozen=True)
class CcaResult:
    """Canonical directions (columns) and their correlations, descending."""

    wx: np.ndarray
    wy: np.ndarray
    correlations: np.ndarray


def _inv_sqrt_psd(a: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh(0.5 * (a + a.T))
    vals = np.clip(vals, 1e-12, None)
    return (vecs / np.sqrt(vals)) @ vecs.T


def cca_fit(x, y, dim: int | None = None, kappa: float = CCA_KAPPA) -> CcaResult:
    """Regularized canonical correlation analysis of two paired blocks.

    Autocovariances are ridged with ``kappa * I`` before whitening; the
    whitened cross-covariance is then decomposed by SVD. Directions satisfy
    ``w^T (S + kappa I) w = 1`` per block.

    Raises
    ------
    UnpairedViewsError
        If the blocks disagree on sample count.
    """
    xm = np.asarray(x, dtype=np.float64)
    ym = np.asarray(y, dtype=np.float64)
    if xm.shape[0] != ym.shape[0]:
        raise UnpairedViewsError(
            f"paired blocks required: {xm.shape[0]} vs {ym.shape[0]} samples"
        )
    n = xm.shape[0]
    if n < 2:
        raise ValueError("need at least 2 samples")
    xc = xm - xm.mean(axis=0)
    yc = ym - ym.mean(axis=0)
    sxx = xc.T @ xc / (n - 1) + kappa * np.eye(xm.shape[1])
    syy = yc.T @ yc / (n - 1) + kappa * np.eye(ym.shape[1])
    sxy = xc.T @ yc / (n - 1)
    wx_white = _inv_sqrt_psd(sxx)
    wy_white = _inv_sqrt_psd(syy)
    u, s, vt = np.linalg.svd(wx_white @ sxy @ wy_white)
    r = min(xm.shape[1], ym.shape[1])
    if dim is not None:
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        r = min(r, dim)
    wx = _fix_column_signs(wx_white @ u[:, :r])
    wy = _fix_column_signs(wy_white @ vt.T[:, :r])
    return CcaResult(wx=wx, wy=wy, correlations=s[:r].copy())


def cca_lda_fit(
    ds: MultiViewDataset, dim: int, kappa: float = CCA_KAPPA,
    norm_stats: tuple[NormStats, ...] | None = None,
) -> LinearProjector:
    """CCA to the full canonical space, then per-view LDA on canonical scores.

    The discriminant stage is capped at ``class_count - 1`` columns, so the
    resulting projector may be narrower than ``dim``.
    """
    if ds.view_count != 2:
        raise ValueError(f"needs exactly 2 views, got {ds.view_count}")
    v1, v2 = ds.views
    if v1.n != v2.n:
        raise UnpairedViewsError(f"paired views required: {v1.n} vs {v2.n} samples")
    if not np.array_equal(v1.labels, v2.labels):
        raise UnpairedViewsError("paired views must share one label sequence")
    cca = cca_fit(v1.features, v2.features, dim=None, kappa=kappa)
    lda_dim = min(dim, ds.class_count - 1)
    if lda_dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    projections = []
    for view, w_cca in ((v1, cca.wx), (v2, cca.wy)):
        scores = (view.features - view.features.mean(axis=0)) @ w_cca
        w_lda = _lda_directions(scores, view.labels, lda_dim)
        projections.append(w_cca @ w_lda)
    return LinearProjector(
        method="cca-lda", projections=tuple(projections), norm_stats=norm_stats
    )


@dataclass(frozen=True)
class PlsResult:
    """NIPALS outputs: unit-norm weights, loadings, scores, and rotations."""

    x_weights: np.ndarray
    y_weights: np.ndarray
    x_loadings: np.ndarray
    y_loadings: np.ndarray
    x_scores: np.ndarray
    y_scores: np.ndarray
    x_rotations: np.ndarray
    y_rotations: np.ndarray


def nipals_pls(
    x, y, dim: int, max_iter: int = 500, tol: float = 1e-10
) -> PlsResult:
    """Two-block NIPALS partial least squares with symmetric deflation.

    Raises
    ------
    NoConvergenceError
        If a component's power iteration exhausts ``max_iter``.
    UnpairedViewsError
        If the blocks disagree on sample count.
    """
    xm = np.asarray(x, dtype=np.float64)
    ym = np.asarray(y, dtype=np.float64)
    if xm.shape[0] != ym.shape[0]:
        raise UnpairedViewsError(
            f"paired blocks required: {xm.shape[0]} vs {ym.shape[0]} samples"
        )
    n = xm.shape[0]
    cap = min(dim, xm.shape[1], ym.shape[1], n - 1)
    if cap < 1:
        raise ValueError(f"cannot extract any component for dim {dim}")
    xd = xm - xm.mean(axis=0)
    yd = ym - ym.mean(axis=0)

    wx_list, wy_list, px_list, qy_list, tx_list, uy_list = [], [], [], [], [], []
    for _ in range(cap):
        if np.linalg.norm(xd) < 1e-12 or np.linalg.norm(yd) < 1e-12:
            break
        u = yd[:, int(np.argmax(np.einsum("ij,ij->j", yd, yd)))].copy()
        wx = np.zeros(xd.shape[1])
        for _ in range(max_iter):
            wx_new = xd.T @ u
            nrm = np.linalg.norm(wx_new)
            if nrm < 1e-15:
                raise NoConvergenceError("X weights collapsed to zero")
            wx_new /= nrm
            t_scores = xd @ wx_new
            wy = yd.T @ t_scores
            nrm = np.linalg.norm(wy)
            if nrm < 1e-15:
                raise NoConvergenceError("Y weights collapsed to zero")
            wy /= nrm
            u = yd @ wy
            if np.linalg.norm(wx_new - wx) < tol:
                wx = wx_new
                break
            wx = wx_new
        else:
            raise NoConvergenceError(
                f"NIPALS did not converge within {max_iter} iterations"
            )
        t_scores = xd @ wx
        u_scores = yd @ wy
        tt = float(t_scores @ t_scores)
        uu = float(u_scores @ u_scores)
        if tt < 1e-15 or uu < 1e-15:
            break
        px = xd.T @ t_scores / tt
        qy = yd.T @ u_scores / uu
        xd = xd - np.outer(t_scores, px)
        yd = yd - np.outer(u_scores, qy)
        wx_list.append(wx)
        wy_list.append(wy)
        px_list.append(px)
        qy_list.append(qy)
        tx_list.append(t_scores)
        uy_list.append(u_scores)

    if not wx_list:
        raise NoConvergenceError("no PLS component could be extracted")
    wxm = np.column_stack(wx_list)
    wym = np.column_stack(wy_list)
    pxm = np.column_stack(px_list)
    qym = np.column_stack(qy_list)
    x_rot = wxm @ np.linalg.pinv(pxm.T @ wxm)
    y_rot = wym @ np.linalg.pinv(qym.T @ wym)
    return PlsResult(
        x_weights=wxm,
        y_weights=wym,
        x_loadings=pxm,
        y_loadings=qym,
        x_scores=np.column_stack(tx_list),
        y_scores=np.column_stack(uy_list),
        x_rotations=x_rot,
        y_rotations=y_rot,
    )


def pls_fit(
    ds: MultiViewDataset, dim: int,
    max_iter: int = 500, tol: float = 1e-10,
    norm_stats: tuple[NormStats, ...] | None = None,
) -> LinearProjector:
    """Paired-view PLS projector; rotations map raw features to scores."""
    if ds.view_count != 2:
        raise ValueError(f"needs exactly 2 views, got {ds.view_count}")
    v1, v2 = ds.views
    result = nipals_pls(v1.features, v2.features, dim, max_iter=max_iter, tol=tol)
    return LinearProjector(
        method="pls",
        projections=(result.x_rotations, result.y_rotations),
        norm_stats=norm_stats,
    )


def _mvda_scatters(ds: MultiViewDataset) -> tuple[np.ndarray, np.ndarray, list[int]]:
    dims = [v.dim for v in ds.views]
    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    total = int(offsets[-1])

    padded_blocks = []
    labels_all = []
    for i, v in enumerate(ds.views):
        block = np.zeros((v.n, total))
        block[:, offsets[i] : offsets[i + 1]] = v.features
        padded_blocks.append(block)
        labels_all.append(v.labels)
    e = np.vstack(padded_blocks)
    lab = np.concatenate(labels_all)

    s_w = np.zeros((total, total))
    s_b = np.zeros((total, total))
    grand = e.mean(axis=0)
    for cls in range(1, ds.class_count + 1):
        rows = e[lab == cls]
        if rows.shape[0] == 0:
            continue
        mu = rows.mean(axis=0)
        centered = rows - mu
        s_w += centered.T @ centered
        diff = (mu - grand)[:, None]
        s_b += rows.shape[0] * (diff @ diff.T)
    return s_b, s_w, dims


def mvda_fit(
    ds: MultiViewDataset,
    dim: int,
    view_consistency_lambda: float | None = None,
    norm_stats: tuple[NormStats, ...] | None = None,
) -> LinearProjector:
    """Multi-view discriminant analysis over the stacked view space.

    Class means pool samples from every view, so the projections of all
    views are driven toward one shared discriminant layout. With
    ``view_consistency_lambda`` set, a coupling penalty proportional to
    the pairwise differences of the per-view projections joins the
    denominator scatter; that variant requires equal view dimensions.

    Raises
    ------
    DimTooLargeError
        If ``dim`` exceeds the stacked dimension.
    VcDimMismatchError
        If the coupling variant sees views of different widths.
    """
    s_b, s_w, dims = _mvda_scatters(ds)
    total = s_b.shape[0]
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if dim > total:
        raise DimTooLargeError(f"dim {dim} exceeds stacked dimension {total}")

    denom = s_w
    if view_consistency_lambda is not None:
        if view_consistency_lambda < 0:
            raise ValueError(
                f"view_consistency_lambda must be >= 0, got {view_consistency_lambda}"
            )
        if len(set(dims)) != 1:
            raise VcDimMismatchError(
                f"view-consistency coupling needs equal view dimensions, got {dims}"
            )
        v = len(dims)
        d = dims[0]
        coupling = np.zeros((total, total))
        eye = np.eye(d)
        for i in range(v):
            for j in range(v):
                block = (v - 1) * eye if i == j else -eye
                coupling[i * d : (i + 1) * d, j * d : (j + 1) * d] = block
        denom = s_w + view_consistency_lambda * coupling

    beta = _top_generalized(s_b, denom, dim)
    norms = np.linalg.norm(beta, axis=0)
    norms[norms == 0] = 1.0
    beta = _fix_column_signs(beta / norms)

    offsets = np.concatenate([[0], np.cumsum(dims)]).astype(int)
    projections = tuple(
        beta[offsets[i] : offsets[i + 1]].copy() for i in range(len(dims))
    )
    method = "mvda-vc" if view_consistency_lambda is not None else "mvda"
    return LinearProjector(method=method, projections=projections, norm_stats=norm_stats)


@dataclass(frozen=True)
class ElmClassifier:
    """Single random sigmoid layer with a ridge-solved linear readout."""

    a: np.ndarray
    b: np.ndarray
    beta: np.ndarray
    class_count: int
    ridge_lambda: float
    seed: int


def elm_train(
    x,
    labels,
    class_count: int,
    hidden: int = 256,
    ridge_lambda: float = 1e-2,
    seed: int = 0,
) -> ElmClassifier:
    """Train the reference classifier on any feature representation."""
    from .mhon import one_hot

    xm = np.asarray(x, dtype=np.float64)
    lab = np.asarray(labels, dtype=np.int64)
    if xm.ndim != 2 or xm.shape[0] != lab.shape[0]:
        raise LengthMismatchError(
            f"x shape {xm.shape} does not align with {lab.shape[0]} labels"
        )
    if hidden < 1:
        raise ValueError(f"hidden must be >= 1, got {hidden}")
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1.0, 1.0, size=(xm.shape[1], hidden))
    b = rng.uniform(-1.0, 1.0, size=hidden)
    h = expit(xm @ a + b)
    beta = ridge_solve(h, one_hot(lab, class_count), ridge_lambda)
    return ElmClassifier(
        a=a, b=b, beta=beta, class_count=class_count,
        ridge_lambda=ridge_lambda, seed=seed,
    )


def elm_predict(clf: ElmClassifier, x) -> np.ndarray:
    """Predicted 1-based labels; ties resolve to the lowest class id."""
    xm = np.asarray(x, dtype=np.float64)
    if xm.ndim != 2 or xm.shape[1] != clf.a.shape[0]:
        raise DimMismatchError(
            f"classifier expects {clf.a.shape[0]} features, got shape {xm.shape}"
        )
    scores = expit(xm @ clf.a + clf.b) @ clf.beta
    return np.argmax(scores, axis=1).astype(np.int64) + 1


PROJECTOR_FORMAT = "linear-projector"
PROJECTOR_VERSION = 1


def projector_to_json(proj: LinearProjector) -> str:
    """Serialize a projector to JSON; floats round-trip exactly."""
    import json

    def arr(a: np.ndarray) -> dict:
        return {"shape": list(a.shape), "data": [float(v) for v in a.ravel()]}

    doc = {
        "format": PROJECTOR_FORMAT,
        "version": PROJECTOR_VERSION,
        "method": proj.method,
        "projections": [arr(w) for w in proj.projections],
        "norm_stats": None
        if proj.norm_stats is None
        else [
            {"mean": [float(v) for v in s.mean], "std": [float(v) for v in s.std]}
            for s in proj.norm_stats
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def projector_from_json(text: str) -> LinearProjector:
    """Rebuild a projector from :func:`projector_to_json` output."""
    import json

    doc = json.loads(text)
    if doc.get("format") != PROJECTOR_FORMAT:
        raise ValueError(f"not a {PROJECTOR_FORMAT} document")
    if doc.get("version") != PROJECTOR_VERSION:
        raise ValueError(f"unsupported version {doc.get('version')}")
    projections = tuple(
        np.array(p["data"], dtype=np.float64).reshape(p["shape"])
        for p in doc["projections"]
    )
    stats = None
    if doc["norm_stats"] is not None:
        stats = tuple(
            NormStats(
                mean=np.array(s["mean"], dtype=np.float64),
                std=np.array(s["std"], dtype=np.float64),
            )
            for s in doc["norm_stats"]
        )
    return LinearProjector(
        method=doc["method"], projections=projections, norm_stats=stats
    )
