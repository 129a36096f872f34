# -*- coding: utf-8 -*-
# Learning-curve and cross-strategy figures, rendered off-screen.
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from evocar.backend.utils.report import atomic_write


def plot_curves(path, histories, title=""):
    """
    # Args
        path : str, png file
        histories : dict, label -> EvolutionHistory
    """
    fig, ax = plt.subplots(figsize=(7., 4.))
    for label, history in histories.items():
        generations = np.arange(len(history))
        line, = ax.plot(generations, history.best_fitness(), label="{} best".format(label))
        ax.plot(generations, history.mean_fitness(), color=line.get_color(), linestyle="--", linewidth=0.8)
    ax.set_xlabel("generation")
    ax.set_ylabel("fitness (steps)")
    if title:
        ax.set_title(title)
    ax.legend(fontsize="small")
    fig.tight_layout()
    _save(fig, path)


def plot_matrix(path, matrix):
    values = np.asarray(matrix.values, dtype=np.float64)
    fig, ax = plt.subplots(figsize=(5., 4.))
    image = ax.imshow(values, cmap="viridis")
    ax.set_xticks(range(len(matrix.strategies)))
    ax.set_yticks(range(len(matrix.strategies)))
    ax.set_xticklabels(matrix.strategies, rotation=45, ha="right")
    ax.set_yticklabels(matrix.strategies)
    ax.set_xlabel("trained on")
    ax.set_ylabel("deployed in")
    for (i, j), v in np.ndenumerate(values):
        ax.text(j, i, "{:.0f}".format(v), ha="center", va="center", color="w", fontsize="small")
    fig.colorbar(image, ax=ax)
    fig.tight_layout()
    _save(fig, path)


def _save(fig, path):
    with atomic_write(path, "wb") as f:
        fig.savefig(f, format="png")
    plt.close(fig)
