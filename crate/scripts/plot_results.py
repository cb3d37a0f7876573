#!/usr/bin/env python3
"""Plot a CSV written by `lpdec experiment`.

One line per decoder variant, sweep value on the x axis.

    python3 scripts/plot_results.py fig4.csv --metric wer --log --out fig4.png
"""

import argparse
import csv
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

NUMERIC = {
    "avg_iter",
    "max_iter",
    "avg_final_pc_constraints",
    "max_final_pc_constraints",
    "wer",
    "wer_ci95",
    "ml_lower_bound",
    "avg_decode_ms",
}


def load(path):
    with open(path, newline="") as f:
        rows = list(csv.DictReader(f))
    if not rows:
        raise SystemExit(f"{path}: no data rows")
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csv")
    ap.add_argument("--metric", default="avg_final_pc_constraints", choices=sorted(NUMERIC))
    ap.add_argument("--log", action="store_true", help="logarithmic y axis")
    ap.add_argument("--out", default=None, help="image path (default: <csv>.<metric>.png)")
    args = ap.parse_args()

    rows = load(args.csv)
    series = defaultdict(list)
    for r in rows:
        if r[args.metric] == "":
            continue
        series[r["variant"]].append((float(r["sweep_value"]), float(r[args.metric]), r))

    fig, ax = plt.subplots(figsize=(6, 4))
    for variant, pts in series.items():
        pts.sort(key=lambda p: p[0])
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        if args.metric == "wer":
            err = [float(p[2]["wer_ci95"]) for p in pts]
            ax.errorbar(xs, ys, yerr=err, marker="o", capsize=3, label=variant)
        else:
            ax.plot(xs, ys, marker="o", label=variant)
    if args.metric == "wer" and "rpc" in " ".join(series):
        pts = sorted(series[max(series)], key=lambda p: p[0])
        ax.plot([p[0] for p in pts], [float(p[2]["ml_lower_bound"]) for p in pts], "k--", label="ML lower bound")
    ax.set_xlabel(rows[0]["sweep_var"])
    ax.set_ylabel(args.metric)
    if args.log:
        ax.set_yscale("log")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    out = args.out or f"{args.csv}.{args.metric}.png"
    fig.savefig(out, dpi=120)
    print(out)


if __name__ == "__main__":
    main()
