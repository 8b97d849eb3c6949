"""Weighted ridge regression for the local surrogate model.

Minimizes  sum_i w_i (y_i - b - x_i . c)^2 + lambda ||c||^2  over the
coefficients c and an unpenalized intercept b, by the closed-form normal
equations. For lambda > 0 and positive weights the system matrix is
positive definite, so a direct solve is always safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateLocalRegionError, InvalidParameterError
from .perturb import PerturbedSample


@dataclass
class ExplanationModel:
    """Fitted surrogate: per-term coefficients plus fit diagnostics.

    Positive coefficient = keeping the term pushes the document toward the
    relevant class; negative pushes away.
    """

    coefficients: dict[str, float]
    intercept: float
    local_fit_r2: float
    n_samples_used: int


def fit_local_model(
    samples: Sequence[PerturbedSample],
    regularization: float,
    terms: Sequence[str],
) -> ExplanationModel:
    """Fit the weighted ridge surrogate over labeled, weighted samples.

    ``terms`` names the presence-vector columns, in the same canonical
    order ``perturb`` used.
    """
    if regularization <= 0:
        raise InvalidParameterError(
            f"regularization must be > 0, got {regularization}"
        )
    if len(samples) < 2:
        raise InvalidParameterError(
            f"need at least 2 labeled samples to fit, got {len(samples)}"
        )
    for s in samples:
        if s.label is None or s.weight is None:
            raise InvalidParameterError("every sample needs a label and a weight")

    X = np.stack([s.presence for s in samples]).astype(np.float64)
    y = np.array([s.label for s in samples], dtype=np.float64)
    w = np.array([s.weight for s in samples], dtype=np.float64)
    n, p = X.shape
    if p != len(terms):
        raise InvalidParameterError(
            f"presence vectors have {p} features but {len(terms)} terms were given"
        )
    if np.all(y == y[0]):
        raise DegenerateLocalRegionError(
            "all perturbation labels are identical "
            f"(label={y[0]}); the local region is flat, nothing to explain"
        )

    # Design matrix with a leading intercept column the penalty skips.
    design = np.hstack([np.ones((n, 1)), X])
    wd = design * w[:, None]
    gram = design.T @ wd
    penalty = regularization * np.eye(p + 1)
    penalty[0, 0] = 0.0
    rhs = wd.T @ y
    theta = np.linalg.solve(gram + penalty, rhs)
    intercept = float(theta[0])
    coef = theta[1:]

    residual = y - design @ theta
    wrss = float(np.sum(w * residual**2))
    y_mean = float(np.sum(w * y) / np.sum(w))
    wtss = float(np.sum(w * (y - y_mean) ** 2))
    r2 = 1.0 - wrss / wtss if wtss > 0 else 0.0

    return ExplanationModel(
        coefficients={term: float(c) for term, c in zip(terms, coef)},
        intercept=intercept,
        local_fit_r2=r2,
        n_samples_used=n,
    )
