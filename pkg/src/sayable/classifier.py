"""Probabilistic binary classifier over embedding vectors.

A linear decision function with a logistic link: P(hard | x) = sigmoid(w.x + b).
Training minimizes class-weighted logistic loss with L2 regularization, so
heavily imbalanced feedback streams do not drown out the minority class.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.optimize import minimize

from .errors import DegenerateLabels, DimensionMismatch, OutOfRange


class Label(enum.Enum):
    EASY = 0
    HARD = 1


@dataclass(frozen=True)
class LabeledExample:
    word: str
    vector: np.ndarray
    label: Label


@dataclass(frozen=True)
class TrainingConfig:
    regularization: float = 0.1
    max_epochs: int = 2000
    tolerance: float = 1e-6
    seed: int = 42


DEFAULT_TRAINING = TrainingConfig()


@dataclass(frozen=True)
class TriggerModel:
    weights: np.ndarray
    bias: float
    config: TrainingConfig

    @property
    def dimension(self) -> int:
        return self.weights.shape[0]


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=float)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def train(
    examples: list[LabeledExample],
    config: TrainingConfig = DEFAULT_TRAINING,
    initial: TriggerModel | None = None,
) -> TriggerModel:
    """Fit the decision function on labeled examples.

    Classes are weighted inversely to their counts. Optimization runs to the
    configured tolerance or epoch cap and is deterministic; passing a
    previous model as ``initial`` warm-starts the solver (used when
    retraining after a single feedback event).
    """
    if not examples:
        raise DegenerateLabels("no training examples")
    dims = {e.vector.shape[0] for e in examples}
    if len(dims) != 1:
        raise DimensionMismatch(f"mixed vector dimensions: {sorted(dims)}")
    dim = dims.pop()

    X = np.vstack([np.asarray(e.vector, dtype=float) for e in examples])
    y = np.array([1.0 if e.label is Label.HARD else 0.0 for e in examples])
    n_hard = int(y.sum())
    n_easy = len(y) - n_hard
    if n_hard == 0 or n_easy == 0:
        raise DegenerateLabels(
            f"need both classes, got {n_easy} easy / {n_hard} hard")

    n = len(y)
    weights = np.where(y == 1.0, n / (2.0 * n_hard), n / (2.0 * n_easy))
    # regularization applies to the summed (not mean) weighted loss, so small
    # seed sets stay noticeably regularized while large oracle-labeled sets
    # can realize the full margin the feature space supports
    lam = config.regularization

    def loss_and_grad(params: np.ndarray):
        w, b = params[:dim], params[dim]
        z = X @ w + b
        s = 2.0 * y - 1.0
        losses = np.logaddexp(0.0, -s * z)
        value = float(np.dot(weights, losses) + 0.5 * lam * np.dot(w, w))
        dz = weights * (_sigmoid(z) - y)
        grad = np.empty(dim + 1)
        grad[:dim] = X.T @ dz + lam * w
        grad[dim] = dz.sum()
        return value, grad

    if initial is not None:
        if initial.dimension != dim:
            raise DimensionMismatch(
                f"initial model has dimension {initial.dimension}, examples {dim}")
        x0 = np.concatenate([initial.weights, [initial.bias]])
    else:
        x0 = np.zeros(dim + 1)

    result = minimize(
        loss_and_grad,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={
            "maxiter": config.max_epochs,
            # tolerance is per-example: the summed-loss gradient scales with n
            "gtol": config.tolerance * n,
            "ftol": 1e-12,
        },
    )
    params = result.x
    return TriggerModel(weights=params[:dim].copy(), bias=float(params[dim]), config=config)


def decision_values(model: TriggerModel, matrix) -> np.ndarray:
    """w.x + b for every row of a (possibly sparse) matrix."""
    if matrix.shape[1] != model.dimension:
        raise DimensionMismatch(
            f"matrix has {matrix.shape[1]} columns, model expects {model.dimension}")
    z = matrix @ model.weights
    if sparse.issparse(z):  # pragma: no cover - csr @ dense yields ndarray
        z = np.asarray(z).ravel()
    return np.asarray(z).ravel() + model.bias


def prob_hard(model: TriggerModel, vector: np.ndarray) -> float:
    """P(hard) for a single embedding vector."""
    vector = np.asarray(vector, dtype=float).ravel()
    if vector.shape[0] != model.dimension:
        raise DimensionMismatch(
            f"vector has dimension {vector.shape[0]}, model expects {model.dimension}")
    z = float(vector @ model.weights + model.bias)
    return float(_sigmoid(np.array([z]))[0])


def prob_hard_many(model: TriggerModel, matrix) -> np.ndarray:
    """P(hard) for every row of a matrix of embedding vectors."""
    return _sigmoid(decision_values(model, matrix))


def entropy(p: float) -> float:
    """Binary entropy in bits, with 0*log2(0) taken as 0."""
    if not 0.0 <= p <= 1.0:
        raise OutOfRange(f"probability out of [0, 1]: {p}")
    if p == 0.0 or p == 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1.0 - p) * np.log2(1.0 - p))


def entropy_many(p: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if np.any(p < 0.0) or np.any(p > 1.0):
        raise OutOfRange("probabilities out of [0, 1]")
    out = np.zeros_like(p)
    interior = (p > 0.0) & (p < 1.0)
    q = p[interior]
    out[interior] = -q * np.log2(q) - (1.0 - q) * np.log2(1.0 - q)
    return out


MODEL_FORMAT_VERSION = 1


def model_to_dict(model: TriggerModel, embedding_fingerprint: str) -> dict:
    """Versioned JSON-ready representation for session persistence."""
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "weights": model.weights.tolist(),
        "bias": model.bias,
        "training_config": {
            "regularization": model.config.regularization,
            "max_epochs": model.config.max_epochs,
            "tolerance": model.config.tolerance,
            "seed": model.config.seed,
        },
        "embedding_fingerprint": embedding_fingerprint,
    }


def model_from_dict(data: dict) -> tuple[TriggerModel, str]:
    version = data.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format version: {version}")
    cfg = data["training_config"]
    model = TriggerModel(
        weights=np.asarray(data["weights"], dtype=float),
        bias=float(data["bias"]),
        config=TrainingConfig(
            regularization=float(cfg["regularization"]),
            max_epochs=int(cfg["max_epochs"]),
            tolerance=float(cfg["tolerance"]),
            seed=int(cfg["seed"]),
        ),
    )
    return model, data["embedding_fingerprint"]
