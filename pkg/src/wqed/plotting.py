"""Optional matplotlib rendering for the `figure` command.

The CSV/JSON data files are the contractual output; these renderings are a
convenience preview written next to them when `--plot` is passed.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def render_figure(figure_id: str, header: Sequence[str],
                  rows: Sequence[Sequence[float]], comments: Sequence[str],
                  path: Path) -> None:
    cols = {name: [row[i] for row in rows] for i, name in enumerate(header)}
    if figure_id == "fig5d":
        fig, ax = plt.subplots(figsize=(6, 4))
        styles = {"T_a": "y:", "T_b": "r--", "T_c": "b-"}
        for name, style in styles.items():
            ax.plot(cols["k"], cols[name], style, label=name)
        ax.set_xlabel("k")
        ax.set_ylabel("T")
        ax.legend()
    elif figure_id == "fig7":
        fig, axes = plt.subplots(1, 3, figsize=(12, 3), sharex=True)
        for ax, label in zip(axes, "abc"):
            ax.plot(cols["k"], cols[f"uA2_{label}"], "r--", label="$|u_A|^2$")
            ax.plot(cols["k"], cols[f"uB2_{label}"], "b-", label="$|u_B|^2$")
            ax.set_xlabel("k")
            ax.set_title(f"case {label}")
        axes[0].set_ylabel("occupation")
        axes[0].legend()
    elif figure_id == "fig9":
        fig, axes = plt.subplots(1, 2, figsize=(9, 3.5))
        energies = dict(c.split("=") for c in comments)
        axes[0].stem(cols["j"], cols["u_upper"])
        axes[0].set_title(f"upper bound state, E={float(energies['E_b1']):.4f}")
        axes[1].stem(cols["j"], cols["u_lower"])
        axes[1].set_title(f"lower bound state, E={float(energies['E_b2']):.4f}")
        for ax in axes:
            ax.set_xlabel("j")
            ax.set_ylabel("$|u_j|$")
    else:
        raise ValueError(f"unknown figure id {figure_id!r}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
