#!/usr/bin/env python3
"""Plot the CSV series emitted by `rankfreq fig`.

The toolkit deliberately emits data, not images; this is the small
companion script that turns a figure directory into log-log plots.

Usage:
    rankfreq fig fig1 text.txt --out figs/
    python3 docs/plot_figures.py figs/
"""
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def read_series(path):
    ranks, freqs = [], []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if line.startswith("#"):
                continue
            parts = line.rstrip("\n").split(",")
            if parts[0] in ("rank", "rank_center"):
                header = parts
                continue
            ranks.append(float(parts[0]))
            freqs.append(float(parts[-1]))
    return ranks, freqs


def main(fig_dir):
    fig_dir = Path(fig_dir)
    csvs = sorted(p for p in fig_dir.glob("*.csv") if "delta" not in p.name)
    if not csvs:
        sys.exit(f"no series CSVs found in {fig_dir}")

    plt.figure(figsize=(7, 5))
    for path in csvs:
        ranks, freqs = read_series(path)
        label = path.stem.split(".", 1)[-1]
        style = "--" if "reference" in path.name else "-"
        plt.loglog(ranks, freqs, style, label=label, linewidth=1)
    plt.xlabel("rank $r$")
    plt.ylabel("frequency $f(r)$")
    plt.legend(fontsize=8)
    plt.grid(True, which="both", alpha=0.25)

    # annotate fits if a figure JSON is present
    for json_path in fig_dir.glob("fig*.json"):
        with open(json_path, encoding="utf-8") as f:
            data = json.load(f)
        plt.title(json_path.stem)
        break

    out = fig_dir / "figure.png"
    plt.tight_layout()
    plt.savefig(out, dpi=150)
    print(f"wrote {out}")

    # gap profile, if this is a comparison figure
    deltas = list(fig_dir.glob("*delta.csv"))
    if deltas:
        plt.figure(figsize=(7, 3))
        ranks, gaps = read_series(deltas[0])
        plt.semilogx(ranks, gaps, ".-", markersize=3)
        plt.axhline(0.0, color="k", linewidth=0.5)
        plt.xlabel("rank $r$")
        plt.ylabel(r"$\Delta(r) = \log_{10} f_A - \log_{10} f_B$")
        plt.grid(True, which="both", alpha=0.25)
        out = fig_dir / "delta.png"
        plt.tight_layout()
        plt.savefig(out, dpi=150)
        print(f"wrote {out}")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
