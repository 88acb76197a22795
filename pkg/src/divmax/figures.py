"""Matplotlib renderings of benchmark reports, written next to the tables."""

import os
from collections import OrderedDict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _group_rows(rows):
    """rows -> {(dataset, k): {algorithm: best row over seeds}}."""
    groups = OrderedDict()
    for row in rows:
        if row.get("error") or row.get("value_norm") is None:
            continue
        key = (row["dataset"], row["k"])
        algos = groups.setdefault(key, OrderedDict())
        prev = algos.get(row["algorithm"])
        if prev is None or row["value_norm"] > prev["value_norm"]:
            algos[row["algorithm"]] = row
    return groups


def value_figure(rows, path):
    """Grouped bars of normalized values per algorithm, with relaxation
    bounds overlaid as markers."""
    groups = _group_rows(rows)
    if not groups:
        return None
    fig, ax = plt.subplots(figsize=(max(6, 2.2 * len(groups)), 4))
    width = 0.8
    ticks, labels = [], []
    pos = 0.0
    for (dataset, k), algos in groups.items():
        names = list(algos)
        for offset, name in enumerate(names):
            row = algos[name]
            x = pos + offset * width / max(1, len(names)) * 0.9
            ax.bar(x, row["value_norm"], width=width / max(1, len(names)) * 0.8,
                   label=name if (dataset, k) == next(iter(groups)) else None)
            if row.get("relax_bound_norm") is not None:
                ax.plot([x], [row["relax_bound_norm"]], marker="v", color="black",
                        markersize=5)
        ticks.append(pos + width * 0.45)
        labels.append(f"{dataset}\nk={k:g}")
        pos += 1.4
    ax.set_xticks(ticks)
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("normalized diversity value")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def runtime_figure(rows, path):
    groups = _group_rows(rows)
    if not groups:
        return None
    fig, ax = plt.subplots(figsize=(max(6, 2.2 * len(groups)), 4))
    width = 0.8
    ticks, labels = [], []
    pos = 0.0
    for (dataset, k), algos in groups.items():
        names = list(algos)
        for offset, name in enumerate(names):
            row = algos[name]
            x = pos + offset * width / max(1, len(names)) * 0.9
            ax.bar(x, max(row.get("runtime_ms") or 0.0, 1e-3),
                   width=width / max(1, len(names)) * 0.8,
                   label=name if (dataset, k) == next(iter(groups)) else None)
        ticks.append(pos + width * 0.45)
        labels.append(f"{dataset}\nk={k:g}")
        pos += 1.4
    ax.set_yscale("log")
    ax.set_xticks(ticks)
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("runtime (ms)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def bounds_figure(rows, path):
    """Per (dataset, k): the three spectral/row bounds next to the best value."""
    groups = _group_rows(rows)
    keys = [key for key, algos in groups.items()
            if any(r.get("bound_gersh") is not None for r in algos.values())]
    if not keys:
        return None
    fig, ax = plt.subplots(figsize=(max(6, 1.8 * len(keys)), 4))
    ticks, labels = [], []
    series = {"best value": [], "eigen": [], "gersh": [], "rowsum": []}
    for key in keys:
        algos = groups[key]
        any_row = next(iter(algos.values()))
        best = max(r["value_norm"] for r in algos.values())
        eta_norm = best - max(r["gain"] for r in algos.values())
        series["best value"].append(best)
        series["eigen"].append(eta_norm + any_row["bound_eigen"])
        series["gersh"].append(eta_norm + any_row["bound_gersh"])
        series["rowsum"].append(eta_norm + any_row["bound_rowsum"])
        labels.append(f"{key[0]}\nk={key[1]:g}")
    x = range(len(keys))
    width = 0.2
    for i, (name, vals) in enumerate(series.items()):
        ax.bar([xx + i * width for xx in x], vals, width=width * 0.9, label=name)
    ax.set_xticks([xx + 1.5 * width for xx in x])
    ax.set_xticklabels(labels, fontsize=8)
    ax.set_ylabel("normalized value / bound")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def render_all(rows, out_dir):
    """Render the standard figure set into out_dir; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written = []
    for name, renderer in (
        ("values.png", value_figure),
        ("runtimes.png", runtime_figure),
        ("bounds.png", bounds_figure),
    ):
        path = os.path.join(out_dir, name)
        if renderer(rows, path):
            written.append(path)
    return written
