"""Summary plots for the ``report`` command."""

from __future__ import annotations

from pathlib import Path
from typing import List, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .reporting import Report  # noqa: E402


def checks_figure(rows: List[Tuple[int, str, Report, float]], path) -> Path:
    """Stacked pass/fail counts per criterion (log scale)."""
    labels = [f"{k}" for k, *_ in rows]
    passed = [r.passed for _, _, r, _ in rows]
    failed = [r.failed for _, _, r, _ in rows]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar(labels, passed, color="#4c8c4a", label="passed")
    ax.bar(labels, failed, bottom=passed, color="#c0392b", label="failed")
    ax.set_yscale("log")
    ax.set_xlabel("criterion")
    ax.set_ylabel("checks")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def timing_figure(rows: List[Tuple[int, str, Report, float]], path) -> Path:
    labels = [f"{k}" for k, *_ in rows]
    secs = [s for *_, s in rows]
    fig, ax = plt.subplots(figsize=(7, 3.5))
    ax.bar(labels, secs, color="#34699a")
    ax.set_xlabel("criterion")
    ax.set_ylabel("seconds")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def first_failure_figure(rep: Report, path) -> Path:
    """Histogram of the first failing hbar order over twist candidates."""
    hist = rep.notes.get("first_failure_histogram", {})
    keys = list(hist)
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar([("none" if k == "None" else f"h^{k}") for k in keys], [hist[k] for k in keys], color="#8e6bb0")
    ax.set_xlabel("first failing order")
    ax.set_ylabel("candidates")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)
