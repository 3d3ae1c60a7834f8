"""Multi-view dataset containers, CSV ingestion, normalization, splitting.

File format: features are comma-separated numeric rows with no header and
'.' as the decimal mark; labels are one integer per line, classes numbered
1..c. A features/labels pair makes one view; views of a dataset may have
different sample counts and feature dimensions but share the class set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClassTooSmallError,
    LabelOutOfRangeError,
    LengthMismatchError,
    NonNumericCellError,
    RaggedRowsError,
)


@dataclass(frozen=True)
class View:
    """One view: a feature matrix with an aligned label vector."""

    features: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.features, dtype=np.float64)
        if f.ndim != 2 or f.size == 0:
            raise ValueError(f"features must be a nonempty 2-D array, got shape {f.shape}")
        if not np.all(np.isfinite(f)):
            raise ValueError("features contain NaN or Inf")
        lab = np.asarray(self.labels)
        if lab.ndim != 1:
            raise ValueError(f"labels must be 1-D, got shape {lab.shape}")
        if not np.issubdtype(lab.dtype, np.integer):
            if not np.all(lab == np.floor(lab)):
                raise LabelOutOfRangeError("labels must be integers")
        lab = lab.astype(np.int64)
        if lab.shape[0] != f.shape[0]:
            raise LengthMismatchError(
                f"{f.shape[0]} feature rows but {lab.shape[0]} labels"
            )
        if lab.size and lab.min() < 1:
            raise LabelOutOfRangeError(f"labels must be >= 1, found {lab.min()}")
        object.__setattr__(self, "features", f)
        object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return self.features.shape[0]

    @property
    def dim(self) -> int:
        return self.features.shape[1]


@dataclass(frozen=True)
class MultiViewDataset:
    """A tuple of views drawing labels from one shared class set 1..c."""

    views: tuple[View, ...]
    class_count: int

    def __post_init__(self):
        views = tuple(self.views)
        if not views:
            raise ValueError("dataset needs at least one view")
        if self.class_count < 1:
            raise ValueError(f"class_count must be >= 1, got {self.class_count}")
        for i, v in enumerate(views):
            if v.labels.max() > self.class_count:
                raise LabelOutOfRangeError(
                    f"view {i} has label {v.labels.max()} > class_count {self.class_count}"
                )
        object.__setattr__(self, "views", views)

    @property
    def view_count(self) -> int:
        return len(self.views)

    @property
    def n_total(self) -> int:
        return sum(v.n for v in self.views)


@dataclass(frozen=True)
class NormStats:
    """Per-feature mean and population standard deviation of a training view."""

    mean: np.ndarray
    std: np.ndarray


def zscore_fit(x) -> NormStats:
    """Compute per-feature mean and population std (ddof=0) of ``x``."""
    m = np.asarray(x, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise ValueError(f"need a nonempty 2-D array, got shape {m.shape}")
    if m.shape[0] < 2:
        raise ValueError("need at least 2 rows to estimate spread")
    return NormStats(mean=m.mean(axis=0), std=m.std(axis=0))


def zscore_apply(x, stats: NormStats) -> np.ndarray:
    """Center and scale ``x`` with stored stats; zero-std features divide by 1."""
    m = np.asarray(x, dtype=np.float64)
    safe = np.where(stats.std == 0.0, 1.0, stats.std)
    return (m - stats.mean) / safe


def zscore_normalize(x) -> tuple[np.ndarray, NormStats]:
    """Fit stats on ``x`` and apply them; equals ``zscore_apply(x, zscore_fit(x))``."""
    stats = zscore_fit(x)
    return zscore_apply(x, stats), stats


def load_view_csv(features_path, labels_path) -> View:
    """Read a features/labels pair into a :class:`View`.

    Raises
    ------
    RaggedRowsError
        If the feature rows disagree on field count.
    NonNumericCellError
        If a cell does not parse as a finite number.
    LabelOutOfRangeError
        If a label line is not an integer >= 1.
    LengthMismatchError
        If the two files disagree on row count.
    OSError
        Propagated from the filesystem.
    """
    rows: list[list[float]] = []
    width = None
    with open(features_path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise RaggedRowsError(
                    f"{features_path}: row {line_no} has {len(cells)} fields, expected {width}"
                )
            parsed = []
            for col, cell in enumerate(cells, start=1):
                try:
                    value = float(cell)
                except ValueError:
                    raise NonNumericCellError(
                        f"{features_path}: row {line_no}, column {col}: {cell!r} is not numeric"
                    ) from None
                if not math.isfinite(value):
                    raise NonNumericCellError(
                        f"{features_path}: row {line_no}, column {col}: {cell!r} is not finite"
                    )
                parsed.append(value)
            rows.append(parsed)

    labels: list[int] = []
    with open(labels_path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                label = int(line)
            except ValueError:
                raise LabelOutOfRangeError(
                    f"{labels_path}: line {line_no}: {line!r} is not an integer label"
                ) from None
            if label < 1:
                raise LabelOutOfRangeError(
                    f"{labels_path}: line {line_no}: label {label} is < 1"
                )
            labels.append(label)

    if len(rows) != len(labels):
        raise LengthMismatchError(
            f"{features_path} has {len(rows)} rows but {labels_path} has {len(labels)} labels"
        )
    if not rows:
        raise ValueError(f"{features_path} is empty")
    return View(features=np.array(rows, dtype=np.float64), labels=np.array(labels, dtype=np.int64))


def write_view_csv(view: View, features_path, labels_path) -> None:
    """Write a view back to disk; round-trips through :func:`load_view_csv` exactly.

    Floats are written with ``repr``, the shortest decimal that recovers the
    same binary value, so identical arrays always produce identical bytes.
    """
    with open(features_path, "w", encoding="utf-8") as fh:
        for row in view.features:
            fh.write(",".join(repr(float(v)) for v in row))
            fh.write("\n")
    with open(labels_path, "w", encoding="utf-8") as fh:
        for label in view.labels:
            fh.write(f"{int(label)}\n")


def _class_indices(labels: np.ndarray, class_count: int) -> list[np.ndarray]:
    return [np.flatnonzero(labels == cls) for cls in range(1, class_count + 1)]


def split(
    ds: MultiViewDataset, train_fraction: float, seed: int
) -> tuple[MultiViewDataset, MultiViewDataset]:
    """Stratified shuffle split of every view.

    Within each class of each view, ``ceil(train_fraction * count)`` samples
    go to the training portion. The shuffle for a class depends only on
    ``(seed, class, class size)``, so views holding the same label layout are
    split identically and sample pairing across such views survives the split.

    Raises
    ------
    ClassTooSmallError
        If some class has fewer than 2 samples in some view.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    train_views = []
    test_views = []
    for view_id, view in enumerate(ds.views):
        train_idx: list[np.ndarray] = []
        test_idx: list[np.ndarray] = []
        for cls, idx in enumerate(_class_indices(view.labels, ds.class_count), start=1):
            if idx.size < 2:
                raise ClassTooSmallError(
                    f"class {cls} has {idx.size} sample(s) in view {view_id}; need >= 2"
                )
            rng = np.random.default_rng([seed, cls, idx.size])
            shuffled = idx[rng.permutation(idx.size)]
            n_train = math.ceil(train_fraction * idx.size)
            train_idx.append(shuffled[:n_train])
            test_idx.append(shuffled[n_train:])
        tr = np.sort(np.concatenate(train_idx))
        te = np.sort(np.concatenate(test_idx))
        train_views.append(View(view.features[tr], view.labels[tr]))
        test_views.append(View(view.features[te], view.labels[te]))
    return (
        MultiViewDataset(tuple(train_views), ds.class_count),
        MultiViewDataset(tuple(test_views), ds.class_count),
    )


NONLINEARITY_MODES = ("linear", "swissroll-like")

# Latent geometry of the synthetic generator: class anchors are drawn on a
# circle of this radius at uneven seeded angles, samples scatter around their
# anchor, and the nonlinear view folds the latent plane onto a torus with
# angular frequency _WARP_FREQ. Uneven anchor spacing keeps cluster
# adjacencies asymmetric, so downstream graph spectra stay simple instead of
# picking up eigenvalue ties from a perfectly symmetric layout.
_ANCHOR_RADIUS = 4.6
_LATENT_SIGMA = 0.42
_WARP_FREQ = 2.3
_MIN_GAP_FACTOR = 0.45


def _latent_anchors(rng: np.random.Generator, class_count: int) -> np.ndarray:
    """Draw class anchors on the latent circle with a minimum angular gap."""
    even_gap = 2.0 * np.pi / class_count
    while True:
        angles = np.sort(rng.uniform(0.0, 2.0 * np.pi, class_count))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * np.pi]]))
        if gaps.min() >= even_gap * _MIN_GAP_FACTOR:
            return _ANCHOR_RADIUS * np.column_stack([np.cos(angles), np.sin(angles)])


@dataclass(frozen=True)
class SyntheticSpec:
    """Parameters of the synthetic paired-view generator."""

    class_count: int = 4
    samples_per_class: int = 60
    view_dims: tuple[int, int] = (20, 15)
    noise_sigma: float = 0.3
    nonlinearity: str = "swissroll-like"
    seed: int = 7

    def __post_init__(self):
        if self.class_count < 2:
            raise ValueError(f"class_count must be >= 2, got {self.class_count}")
        if self.samples_per_class < 2:
            raise ValueError(
                f"samples_per_class must be >= 2, got {self.samples_per_class}"
            )
        dims = tuple(int(d) for d in self.view_dims)
        if len(dims) != 2 or any(d < 1 for d in dims):
            raise ValueError(f"view_dims must be two positive ints, got {self.view_dims}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.nonlinearity not in NONLINEARITY_MODES:
            raise ValueError(
                f"nonlinearity must be one of {NONLINEARITY_MODES}, got {self.nonlinearity!r}"
            )
        object.__setattr__(self, "view_dims", dims)


def gen_synthetic(spec: SyntheticSpec = SyntheticSpec()) -> MultiViewDataset:
    """Draw a paired two-view dataset from a shared 2-D latent space.

    Both views observe the same latent points, so row i of view 1 and row i
    of view 2 describe the same sample. View 1 is a random linear lift of
    the latent plane plus isotropic noise. In ``swissroll-like`` mode view 2
    first wraps each latent coordinate through sin/cos at a frequency high
    enough that distinct classes fold onto each other, then lifts linearly;
    in ``linear`` mode view 2 is a plain linear lift like view 1.
    """
    rng = np.random.default_rng(spec.seed)
    c = spec.class_count
    m = spec.samples_per_class
    n = c * m
    d1, d2 = spec.view_dims

    anchors = _latent_anchors(rng, c)
    labels = np.repeat(np.arange(1, c + 1), m)
    latent = anchors[labels - 1] + _LATENT_SIGMA * rng.normal(size=(n, 2))

    lift1 = rng.normal(size=(2, d1)) / np.sqrt(2.0)
    view1 = latent @ lift1 + spec.noise_sigma * rng.normal(size=(n, d1))

    if spec.nonlinearity == "linear":
        lift2 = rng.normal(size=(2, d2)) / np.sqrt(2.0)
        view2 = latent @ lift2 + spec.noise_sigma * rng.normal(size=(n, d2))
    else:
        phase = _WARP_FREQ * latent
        warped = np.column_stack(
            [np.sin(phase[:, 0]), np.cos(phase[:, 0]), np.sin(phase[:, 1]), np.cos(phase[:, 1])]
        )
        lift2 = rng.normal(size=(4, d2)) / np.sqrt(4.0)
        view2 = warped @ lift2 + spec.noise_sigma * rng.normal(size=(n, d2))

    return MultiViewDataset(
        views=(View(view1, labels), View(view2, labels.copy())),
        class_count=c,
    )
