"""Optional report figures (matplotlib, imported on demand)."""
from __future__ import annotations

COLORS = {"pass": "#4c956c", "fail": "#c44536", "info": "#8d99ae", "untestable": "#bcb8b1"}


def report_figure(report_dict, path):
    """Horizontal bars of instance counts per check, colored by verdict."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    checks = report_dict["checks"]
    names = [c["name"] for c in checks]
    counts = [max(c["instances"], 0) for c in checks]
    colors = [COLORS.get(c["verdict"], "#999999") for c in checks]
    fig, ax = plt.subplots(figsize=(7, 0.45 * max(len(names), 2) + 1))
    ax.barh(range(len(names)), counts, color=colors)
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("instances checked")
    if any(counts):
        ax.set_xscale("symlog")
    ax.set_title(report_dict["command"])
    fig.tight_layout()
    fig.savefig(path, metadata={"Software": None} if path.endswith(".png") else None)
    plt.close(fig)
    return path
