"""commaclf: trilingual-or-more social-media text labeling without linguistics.

Classifies ComMA-format datasets on three tasks at once (aggression level,
gender bias, communal charge) with two systems: a chi-square-selected cosine
KNN classifier and a cross-validated stacking ensemble of six base learners.
"""

__version__ = "0.1.0"

from .corpus import (
    Corpus,
    Instance,
    LabelTriple,
    TASKS,
    TASK_CLASSES,
    corpus_stats,
    load_dataset,
    save_dataset,
)
from .text import SurfaceFeatures, TokenizedDoc, surface_features, tokenize
from .vsm import FeatureSet, SparseVector, Vocabulary, build_vocabulary, chi2_score, cosine, select_features, vectorize
from .knn import KnnModel, SweepGrid, knn_fit, knn_predict, knn_sweep
from .learners import LearnerModel, LearnerSpec, gradient_check, predict_proba, train_learner
from .stacking import StackModel, fit_stacked, make_oof_meta_features, predict_stacked
from .evaluation import EvalReport, PredictionSet, instance_f1, make_report, overall_micro_f1, task_micro_f1
from .synth import SyntheticSpec, generate_synthetic, separated_spec

__all__ = [
    "Corpus",
    "Instance",
    "LabelTriple",
    "TASKS",
    "TASK_CLASSES",
    "corpus_stats",
    "load_dataset",
    "save_dataset",
    "SurfaceFeatures",
    "TokenizedDoc",
    "surface_features",
    "tokenize",
    "FeatureSet",
    "SparseVector",
    "Vocabulary",
    "build_vocabulary",
    "chi2_score",
    "cosine",
    "select_features",
    "vectorize",
    "KnnModel",
    "SweepGrid",
    "knn_fit",
    "knn_predict",
    "knn_sweep",
    "LearnerModel",
    "LearnerSpec",
    "gradient_check",
    "predict_proba",
    "train_learner",
    "StackModel",
    "fit_stacked",
    "make_oof_meta_features",
    "predict_stacked",
    "EvalReport",
    "PredictionSet",
    "instance_f1",
    "make_report",
    "overall_micro_f1",
    "task_micro_f1",
    "SyntheticSpec",
    "generate_synthetic",
    "separated_spec",
    "__version__",
]
