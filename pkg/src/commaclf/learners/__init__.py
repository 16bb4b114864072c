"""The six stacking base learners plus the final estimator, all in-repo."""

from .base import (
    BASE_LEARNER_ORDER,
    FORMAT_VERSION,
    LEARNER_KINDS,
    STOCHASTIC_KINDS,
    LearnerModel,
    LearnerSpec,
    derived_seed,
    predict_proba,
    train_learner,
)
from .features import DenseFeaturizer, N_SURFACE_FEATURES
from .gradcheck import gradient_check

__all__ = [
    "BASE_LEARNER_ORDER",
    "FORMAT_VERSION",
    "LEARNER_KINDS",
    "STOCHASTIC_KINDS",
    "DenseFeaturizer",
    "N_SURFACE_FEATURES",
    "LearnerModel",
    "LearnerSpec",
    "derived_seed",
    "gradient_check",
    "predict_proba",
    "train_learner",
]
