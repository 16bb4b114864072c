"""Figure rendering for sweep grids and evaluation reports."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .corpus import TASK_CLASSES, TASKS
from .evaluation import EvalReport
from .knn import SweepGrid

__all__ = ["save_confusion_figure", "save_sweep_heatmap"]


def save_sweep_heatmap(grid: SweepGrid, path: str | Path) -> Path:
    """Accuracy heatmap over the (K, feature count) grid, best cell marked."""
    path = Path(path)
    acc = np.asarray(grid.accuracy)  # (n_counts, n_ks)
    fig, ax = plt.subplots(figsize=(max(6, 0.28 * len(grid.feature_counts)), 4.2))
    im = ax.imshow(acc.T, aspect="auto", origin="lower", cmap="viridis")
    ax.set_xticks(range(len(grid.feature_counts)))
    ax.set_xticklabels(grid.feature_counts, rotation=90, fontsize=7)
    ax.set_yticks(range(len(grid.ks)))
    ax.set_yticklabels(grid.ks)
    ax.set_xlabel("features")
    ax.set_ylabel("K")
    best_n, best_k, best_acc = grid.best
    ax.scatter(
        [grid.feature_counts.index(best_n)],
        [grid.ks.index(best_k)],
        marker="*",
        s=160,
        c="red",
        label=f"best {best_acc:.3f}",
    )
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title(f"{grid.task}: dev accuracy")
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_confusion_figure(report: EvalReport, path: str | Path) -> Path:
    """One figure with the three per-task confusion matrices."""
    path = Path(path)
    fig, axes = plt.subplots(1, len(TASKS), figsize=(4.2 * len(TASKS), 3.8))
    for ax, task in zip(np.atleast_1d(axes), TASKS):
        classes = TASK_CLASSES[task]
        matrix = np.array(
            [[report.confusion[task][g][p] for p in classes] for g in classes], dtype=float
        )
        ax.imshow(matrix, cmap="Blues")
        ax.set_xticks(range(len(classes)))
        ax.set_xticklabels(classes)
        ax.set_yticks(range(len(classes)))
        ax.set_yticklabels(classes)
        ax.set_xlabel("predicted")
        ax.set_ylabel("gold")
        ax.set_title(f"{task} (acc {report.accuracy[task]:.3f})")
        for i in range(len(classes)):
            for j in range(len(classes)):
                ax.text(j, i, int(matrix[i, j]), ha="center", va="center", fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
