"""Tab-separated summary of a homology table plus two figures."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .branching import vr_dim_sn  # noqa: E402

COLUMNS = ("n", "degree", "provenance", "terms", "total_mult", "dim", "max_rows")


def table_rows(table) -> list[tuple]:
    rows = []
    for (n, i), rep in sorted(table.entries.items()):
        rows.append((n, i, table.provenance[(n, i)], len(rep), rep.total_multiplicity(), vr_dim_sn(rep), rep.max_rows()))
    return rows


def tsv(table) -> str:
    lines = ["\t".join(COLUMNS)]
    lines += ["\t".join(map(str, r)) for r in table_rows(table)]
    return "\n".join(lines) + "\n"


def _dims_figure(table, path: Path) -> None:
    ns = sorted(table.covered)
    degrees = sorted({i for _, i in table.entries}) or [0]
    grid = np.full((len(degrees), len(ns)), np.nan)
    for (n, i), rep in table.entries.items():
        grid[degrees.index(i), ns.index(n)] = math.log10(vr_dim_sn(rep))
    fig, ax = plt.subplots(figsize=(9, 3.6))
    im = ax.imshow(grid, origin="lower", aspect="auto", cmap="viridis")
    ax.set_xticks(range(len(ns)), [str(n) for n in ns], fontsize=7)
    ax.set_yticks(range(len(degrees)), [str(i) for i in degrees])
    ax.set_xlabel("n")
    ax.set_ylabel("homological degree")
    ax.set_title("log10 dim of reduced homology of C^3_n")
    fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def _rows_figure(table, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(9, 3.6))
    for (n, i), rep in sorted(table.entries.items()):
        counts: dict[int, int] = {}
        for lam, c in rep.items():
            counts[len(lam)] = counts.get(len(lam), 0) + c
        for k, c in counts.items():
            ax.scatter(n, k, s=8 + 6 * c, c=f"C{i % 10}", alpha=0.6, edgecolors="none")
    for i in sorted({i for _, i in table.entries}):
        ax.scatter([], [], c=f"C{i % 10}", label=f"degree {i}")
    ax.set_xlabel("n")
    ax.set_ylabel("rows of partition")
    ax.set_title("row counts of irreducible summands (marker size ~ multiplicity)")
    ax.legend(fontsize=7, ncol=4, loc="upper left")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_report(table, outdir: str | Path, steps=None) -> list[Path]:
    """Write homology.tsv, steps.tsv (if given) and the figures into outdir."""
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = [out / "homology.tsv", out / "dims.png", out / "rows.png"]
    written[0].write_text(tsv(table))
    _dims_figure(table, written[1])
    _rows_figure(table, written[2])
    if steps:
        path = out / "steps.tsv"
        path.write_text("step\tmethod\tassertion\toutcome\n" + "".join(s.line() + "\n" for s in steps))
        written.append(path)
    return written
