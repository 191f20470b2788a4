"""Report files: delimited tables plus matplotlib figures rendered to disk."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .cohomology import BettiTable


def write_betti_csv(path, table: BettiTable) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["degree", "dimension"])
        for k, d in table.entries:
            writer.writerow([k, d])


def write_betti_figure(path, table: BettiTable, title: str) -> None:
    degrees = [k for k, _ in table.entries]
    dims = [d for _, d in table.entries]
    fig, ax = plt.subplots(figsize=(6.4, 3.2))
    ax.bar(degrees, dims, width=0.8, color="#3465a4")
    ax.set_xlabel("degree")
    ax.set_ylabel("dim H^k")
    ax.set_title(title)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_corpus_csv(path, results) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["check", "passed", "detail"])
        for res in results:
            writer.writerow([res.name, "pass" if res.passed else "fail", res.detail])


def write_corpus_figure(path, results) -> None:
    names = [res.name for res in results]
    values = [1 if res.passed else 0 for res in results]
    colors = ["#4e9a06" if v else "#a40000" for v in values]
    fig, ax = plt.subplots(figsize=(7.0, 0.34 * len(names) + 1.2))
    ax.barh(range(len(names)), [1] * len(names), color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=8)
    ax.set_xticks([])
    ax.invert_yaxis()
    ax.set_title("fixture suite: green = pass, red = fail")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def ensure_dir(path) -> Path:
    p = Path(path)
    p.mkdir(parents=True, exist_ok=True)
    return p
