"""Figure rendering for sweep and density outputs.

Figures are static artifacts written next to the CSV; matplotlib runs on the
Agg backend with a fixed hash salt and no embedded dates so that identical
inputs produce byte-identical SVG/PNG files.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "swipt-daf"

import matplotlib.pyplot as plt  # noqa: E402

from .sweep import SweepResult  # noqa: E402

_AXIS_LABELS = {
    "p0_db": "transmit power P0 (dB)",
    "d1": "source-relay distance d1",
    "theta": "power-splitting ratio theta",
}

_METHOD_STYLE = {
    "EXACT_QUAD": dict(linestyle="-", marker=""),
    "ASYMPTOTIC_CLOSED": dict(linestyle="--", marker=""),
    "ASYMPTOTIC_QUAD": dict(linestyle=":", marker=""),
}


def _save(fig, path: str) -> None:
    meta = {"Date": None} if path.endswith(".svg") else {}
    fig.savefig(path, metadata=meta)
    plt.close(fig)


def render_sweep(result: SweepResult, path: str) -> None:
    """Log-scale ABER curves, one line (or marker series for MC) per
    (series, method) pair; failed points are skipped."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=120)
    groups: dict = {}
    for r in result.rows:
        if r.value is None:
            continue
        groups.setdefault((r.series, r.method), []).append(r)
    for (series, method), rows in sorted(groups.items()):
        xs = [r.axis_value for r in rows]
        ys = [r.value for r in rows]
        label = f"{series} ({method})"
        if method == "MC":
            errs = [r.error for r in rows]
            ax.errorbar(xs, ys, yerr=errs, linestyle="", marker="o",
                        markersize=4, capsize=2, label=label)
        else:
            ax.plot(xs, ys, label=label, **_METHOD_STYLE.get(method, {}))
    ax.set_yscale("log")
    ax.set_xlabel(_AXIS_LABELS.get(result.spec.axis.value, result.spec.axis.value))
    ax.set_ylabel("average bit-error rate")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7)
    fig.tight_layout()
    _save(fig, path)


def render_pdf(z, curves: dict, path: str) -> None:
    """Density curves over SNR; curves maps label -> values."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8), dpi=120)
    for label in sorted(curves):
        ax.loglog(z, curves[label], label=label)
    ax.set_xlabel("two-hop SNR z")
    ax.set_ylabel("density")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    _save(fig, path)
