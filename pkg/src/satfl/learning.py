"""Desk-scale learners: losses, local SGD, data partitioning, evaluation.

The default learner is multinomial logistic regression on synthetic
Gaussian-blob data; a one-hidden-layer MLP is available to stress
non-convexity. Model parameters are flat float64 vectors throughout, with
a wire size of 32 bits per parameter.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WIRE_BITS_PER_PARAM = 32


@dataclass
class LocalDataset:
    """Feature matrix and integer class labels for one satellite."""

    features: np.ndarray  # (n, d)
    labels: np.ndarray    # (n,)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=int)
        if self.features.ndim != 2 or len(self.features) != len(self.labels):
            raise ValueError("features must be (n, d) with matching labels")

    @property
    def size(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class ComputeProfile:
    """Per-satellite compute parameters for local training."""

    eta: float
    batch_size: int
    local_iters: int = 1
    cycles_per_bit: float | None = None
    cpu_hz: float | None = None

    def __post_init__(self):
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")
        if self.batch_size < 1 or self.local_iters < 1:
            raise ValueError("batch_size and local_iters must be >= 1")


def wire_bits(params: np.ndarray) -> int:
    """Serialized size of a parameter vector in bits."""
    return WIRE_BITS_PER_PARAM * params.size


def _softmax(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


class LogisticRegressionLearner:
    """Multinomial logistic regression with bias, cross-entropy loss."""

    def __init__(self, classes: int, feature_dim: int):
        self.classes = classes
        self.feature_dim = feature_dim

    @property
    def param_dim(self) -> int:
        return self.classes * (self.feature_dim + 1)

    def init_params(self, rng: np.random.Generator | None = None) -> np.ndarray:
        return np.zeros(self.param_dim)

    def _unpack(self, params):
        wb = params.reshape(self.classes, self.feature_dim + 1)
        return wb[:, :-1], wb[:, -1]

    def logits(self, params: np.ndarray, X: np.ndarray) -> np.ndarray:
        W, b = self._unpack(params)
        return X @ W.T + b

    def loss(self, params: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
        p = _softmax(self.logits(params, X))
        return float(-np.mean(np.log(p[np.arange(len(y)), y] + 1e-300)))

    def gradient(self, params: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        n = len(y)
        p = _softmax(self.logits(params, X))
        p[np.arange(n), y] -= 1.0
        p /= n
        gw = p.T @ X
        gb = p.sum(axis=0)
        return np.concatenate([gw, gb[:, None]], axis=1).ravel()

    def predict(self, params: np.ndarray, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.logits(params, X), axis=1)


class MLPLearner:
    """One-hidden-layer tanh network with softmax output."""

    def __init__(self, classes: int, feature_dim: int, hidden: int = 16):
        self.classes = classes
        self.feature_dim = feature_dim
        self.hidden = hidden

    @property
    def param_dim(self) -> int:
        return self.hidden * (self.feature_dim + 1) + self.classes * (self.hidden + 1)

    def init_params(self, rng: np.random.Generator | None = None) -> np.ndarray:
        rng = rng or np.random.default_rng(0)
        return 0.1 * rng.standard_normal(self.param_dim)

    def _unpack(self, params):
        h, d, c = self.hidden, self.feature_dim, self.classes
        i = h * d
        W1 = params[:i].reshape(h, d)
        b1 = params[i:i + h]
        j = i + h
        W2 = params[j:j + c * h].reshape(c, h)
        b2 = params[j + c * h:]
        return W1, b1, W2, b2

    def logits(self, params: np.ndarray, X: np.ndarray) -> np.ndarray:
        W1, b1, W2, b2 = self._unpack(params)
        return np.tanh(X @ W1.T + b1) @ W2.T + b2

    def loss(self, params: np.ndarray, X: np.ndarray, y: np.ndarray) -> float:
        p = _softmax(self.logits(params, X))
        return float(-np.mean(np.log(p[np.arange(len(y)), y] + 1e-300)))

    def gradient(self, params: np.ndarray, X: np.ndarray, y: np.ndarray) -> np.ndarray:
        W1, b1, W2, b2 = self._unpack(params)
        n = len(y)
        a = np.tanh(X @ W1.T + b1)
        p = _softmax(a @ W2.T + b2)
        p[np.arange(n), y] -= 1.0
        p /= n
        gW2 = p.T @ a
        gb2 = p.sum(axis=0)
        da = (p @ W2) * (1.0 - a * a)
        gW1 = da.T @ X
        gb1 = da.sum(axis=0)
        return np.concatenate([gW1.ravel(), gb1, gW2.ravel(), gb2])

    def predict(self, params: np.ndarray, X: np.ndarray) -> np.ndarray:
        return np.argmax(self.logits(params, X), axis=1)


def make_learner(kind: str, classes: int, feature_dim: int, hidden: int = 16):
    if kind == "logreg":
        return LogisticRegressionLearner(classes, feature_dim)
    if kind == "mlp":
        return MLPLearner(classes, feature_dim, hidden)
    raise ValueError(f"unknown learner kind: {kind!r}")


def local_loss(learner, params: np.ndarray, data: LocalDataset) -> float:
    """Mean per-sample loss over one satellite's dataset."""
    if data.size == 0:
        raise ValueError("dataset is empty")
    return learner.loss(params, data.features, data.labels)


def global_loss(learner, params: np.ndarray, datasets: list[LocalDataset]) -> float:
    """Sample-count-weighted mean of the local losses."""
    total = sum(d.size for d in datasets)
    if total == 0:
        raise ValueError("no data across satellites")
    return sum(
        (d.size / total) * local_loss(learner, params, d) for d in datasets
    )


def local_sgd(
    learner,
    start: np.ndarray,
    data: LocalDataset,
    profile: ComputeProfile,
    seed: int | np.random.SeedSequence,
) -> np.ndarray:
    """Run local mini-batch SGD and return the updated parameter vector.

    Each of the local_iters epochs shuffles the dataset once with the
    seeded generator and steps through batches of batch_size.
    """
    rng = np.random.default_rng(seed)
    w = np.array(start, dtype=float, copy=True)
    n = data.size
    for _ in range(profile.local_iters):
        order = rng.permutation(n)
        for lo in range(0, n, profile.batch_size):
            idx = order[lo:lo + profile.batch_size]
            g = learner.gradient(w, data.features[idx], data.labels[idx])
            w -= profile.eta * g
    return w


def training_time(profile: ComputeProfile, data_bits: float) -> float:
    """Compute time: cycles_per_bit * iterations * data_bits / cpu_hz."""
    if profile.cycles_per_bit is None or profile.cpu_hz is None:
        raise ValueError("profile lacks cycles_per_bit / cpu_hz")
    if profile.cycles_per_bit <= 0 or profile.cpu_hz <= 0 or data_bits <= 0:
        raise ValueError("compute parameters must be strictly positive")
    return profile.cycles_per_bit * profile.local_iters * data_bits / profile.cpu_hz


def partition_non_iid(
    dataset: LocalDataset,
    groups: list[list[int]],
    labels_per_group: int,
    seed: int = 0,
) -> dict[int, LocalDataset]:
    """Label-skewed split: group g keeps labels [g*lpg, (g+1)*lpg).

    Each label's samples are shuffled deterministically and dealt round-robin
    to the group's satellites. Returns satellite id -> LocalDataset; the
    shards are pairwise disjoint and their union is the input dataset.
    """
    rng = np.random.default_rng(seed)
    n_labels = labels_per_group * len(groups)
    if np.any(dataset.labels >= n_labels) or np.any(dataset.labels < 0):
        raise ValueError(
            f"dataset labels must lie in [0, {n_labels}) to divide across groups"
        )
    shards: dict[int, list[int]] = {k: [] for g in groups for k in g}
    for g_idx, members in enumerate(groups):
        if not members:
            raise ValueError(f"group {g_idx} has no satellites")
        group_labels = range(g_idx * labels_per_group, (g_idx + 1) * labels_per_group)
        for label in group_labels:
            idx = np.flatnonzero(dataset.labels == label)
            if len(idx) < len(members):
                raise ValueError(
                    f"label {label}: {len(idx)} samples cannot cover "
                    f"{len(members)} satellites"
                )
            idx = rng.permutation(idx)
            for i, sample in enumerate(idx):
                shards[members[i % len(members)]].append(int(sample))
    return {
        k: LocalDataset(dataset.features[sorted(v)], dataset.labels[sorted(v)])
        for k, v in shards.items()
    }


def evaluate_accuracy(learner, params: np.ndarray, test_set: LocalDataset) -> float:
    """Fraction of argmax-correct predictions on the test set."""
    if test_set.size == 0:
        raise ValueError("test set is empty")
    pred = learner.predict(params, test_set.features)
    return float(np.mean(pred == test_set.labels))


def generate_synthetic_task(
    classes: int,
    feature_dim: int,
    samples_per_class: int,
    seed: int,
    spread: float = 1.0,
    test_samples_per_class: int | None = None,
) -> tuple[LocalDataset, LocalDataset]:
    """Gaussian-blob multiclass data with unit-norm class centers.

    spread scales the per-class noise; small spread makes the task linearly
    separable. Deterministic under seed; train and test draws are disjoint.
    """
    if classes < 2 or feature_dim < 1 or samples_per_class < 1:
        raise ValueError("sizes must be positive (classes >= 2)")
    rng = np.random.default_rng(seed)
    centers = rng.standard_normal((classes, feature_dim))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    n_test = test_samples_per_class or max(1, samples_per_class // 5)

    def draw(per_class):
        X = np.empty((classes * per_class, feature_dim))
        y = np.empty(classes * per_class, dtype=int)
        for c in range(classes):
            lo = c * per_class
            X[lo:lo + per_class] = centers[c] + spread * rng.standard_normal(
                (per_class, feature_dim)
            )
            y[lo:lo + per_class] = c
        return LocalDataset(X, y)

    return draw(samples_per_class), draw(n_test)
