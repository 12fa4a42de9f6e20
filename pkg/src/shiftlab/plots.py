"""Optional figures for CLI reports (rendered off-screen with Agg)."""
from __future__ import annotations

import math
import os
from typing import List

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finite(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _save(fig, out_dir: str, name: str) -> str:
    path = os.path.join(out_dir, name)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def _series(rows, key_x, key_y):
    pts = [(r[key_x], r[key_y]) for r in rows if _finite(r.get(key_x)) and _finite(r.get(key_y))]
    return [p[0] for p in pts], [p[1] for p in pts]


def plot_pressure(rows: List[dict], out_dir: str) -> List[str]:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for key, style in (("upper", "-o"), ("lower", "--")):
        xs, ys = _series(rows, "n", key)
        if xs:
            ax.plot(xs, ys, style, label=key, ms=3)
    ax.set_xlabel("n")
    ax.set_ylabel("pressure bound")
    ax.legend()
    return [_save(fig, out_dir, "pressure.png")]


def plot_hyperbolicity(rows: List[dict], out_dir: str) -> List[str]:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for key, style in (("upper", "-"), ("lower", "--"), ("supI_upper", ":")):
        xs, ys = _series(rows, "t", key)
        if xs:
            ax.plot(xs, ys, style, label=key)
    for r in rows:
        if r.get("verdict") == "HYPERBOLIC" and _finite(r.get("lower")):
            ax.plot(r["t"], r["lower"], "g^", ms=4)
        elif r.get("verdict") == "NOT-HYPERBOLIC" and _finite(r.get("upper")):
            ax.plot(r["t"], r["upper"], "rv", ms=4)
    ax.set_xlabel("t")
    ax.set_ylabel("P(t phi)")
    ax.legend()
    return [_save(fig, out_dir, "hyperbolicity.png")]


def plot_series(rows: List[dict], out_dir: str) -> List[str]:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs, ys = _series(rows, "t", "value")
    ax.plot(xs, ys, "-o", ms=3)
    ax.axhline(0, color="0.6", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("P(t phi) from series")
    return [_save(fig, out_dir, "series.png")]


def plot_approach(rows: List[dict], out_dir: str) -> List[str]:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    for key, style in (("worst_distance", "-o"), ("budget", "--")):
        xs, ys = _series(rows, "n", key)
        if xs:
            ax.plot(xs, ys, style, label=key, ms=3)
    ax.set_xlabel("n")
    ax.set_ylabel("Hamming distance")
    ax.legend()
    return [_save(fig, out_dir, "approach.png")]


def plot_enumerate(rows: List[dict], out_dir: str) -> List[str]:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs, ys = _series(rows, "n", "count")
    ax.semilogy(xs, ys, "-o", ms=3)
    ax.set_xlabel("n")
    ax.set_ylabel("#L_n")
    return [_save(fig, out_dir, "enumerate.png")]


PLOTTERS = {
    "pressure": plot_pressure,
    "hyperbolicity": plot_hyperbolicity,
    "series": plot_series,
    "approach": plot_approach,
    "enumerate": plot_enumerate,
}


def render(command: str, rows: List[dict], out_dir: str) -> List[str]:
    """Figures for a report; commands without a natural plot yield none."""
    fn = PLOTTERS.get(command)
    if fn is None or not rows:
        return []
    return fn(rows, out_dir)
