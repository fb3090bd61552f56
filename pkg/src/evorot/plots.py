"""Figure rendering for the report commands.

Figures are written straight to files next to the delimited output; no
interactive backend is ever touched.
"""

from __future__ import annotations

from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def save_cumulative_rotation(
    series_by_group: Mapping[str, tuple[Sequence[float], Sequence[float]]],
    boundaries: Sequence[int],
    path,
    title: str = "Accumulated rotation by group",
) -> None:
    """One cumulative-rotation curve per group, re-zeroed at game switches.

    boundaries are the global round indices where the payoff matrix changed;
    they are drawn as vertical rules.
    """
    fig, ax = plt.subplots(figsize=(9, 4.5))
    for group, (t, cum) in sorted(series_by_group.items()):
        ax.plot(t, cum, lw=1.0, label=group)
    for b in boundaries:
        ax.axvline(b, color="0.75", lw=0.8, zorder=0)
    ax.axhline(0.0, color="0.4", lw=0.8, zorder=0)
    ax.set_xlabel("round")
    ax.set_ylabel("accumulated rotation")
    ax.set_title(title)
    if len(series_by_group) <= 16:
        ax.legend(fontsize="x-small", ncol=2, frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_phase_field(pp, qq, dp, dq, path, nash=None, title: str = "") -> None:
    """Quiver plot of a sampled replicator field on the unit square."""
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    ax.quiver(pp, qq, dp, dq, angles="xy", width=0.003, color="0.2")
    if nash is not None:
        ax.plot([float(nash[0])], [float(nash[1])], "o", color="crimson", ms=6)
    ax.set_xlim(-0.05, 1.05)
    ax.set_ylim(-0.05, 1.05)
    ax.set_aspect("equal")
    ax.set_xlabel("p")
    ax.set_ylabel("q")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
