"""Figure and table rendering for report output directories.

The report path can drop a small audit trail next to the delimited
output: a cases.csv with one row per case, a verdict bar chart, and a
histogram of the orders of the finite groups appearing in the report.
Everything is derived from the report payload alone, so the files are
reproducible from the JSON.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _finite_orders(value):
    """Collect |A| for every finite group payload nested in a value."""
    if isinstance(value, dict):
        if set(value) == {"rank", "divisors"} and value["rank"] == 0:
            order = 1
            for d in value["divisors"]:
                order *= d
            yield order
        else:
            for v in value.values():
                yield from _finite_orders(v)
    elif isinstance(value, list):
        for v in value:
            yield from _finite_orders(v)


def render_report_files(payload: dict, outdir) -> list:
    """Write cases.csv and the figures for one report payload.

    Returns the list of paths written. The verdict chart is always
    produced; the group-order histogram only when some case mentions a
    finite group.
    """
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    csv_path = outdir / "cases.csv"
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["case", "verdict", "payload"])
        for case in payload["cases"]:
            rest = {
                k: v for k, v in sorted(case.items()) if k not in ("case", "verdict")
            }
            writer.writerow(
                [
                    case.get("case", ""),
                    case.get("verdict", ""),
                    json.dumps(rest, sort_keys=True),
                ]
            )
    written.append(csv_path)

    counts = {}
    for case in payload["cases"]:
        verdict = case.get("verdict", "unknown")
        counts[verdict] = counts.get(verdict, 0) + 1
    labels = sorted(counts)
    colors = {"pass": "#2a9d4e", "fail": "#c1121f", "not-computed": "#8d99ae"}
    fig, ax = plt.subplots(figsize=(4.5, 3.0))
    ax.bar(
        range(len(labels)),
        [counts[k] for k in labels],
        color=[colors.get(k, "#577590") for k in labels],
    )
    ax.set_xticks(range(len(labels)))
    ax.set_xticklabels(labels)
    ax.set_ylabel("cases")
    ax.set_title(f"{payload['task']}: verdicts")
    fig.tight_layout()
    verdict_path = outdir / "verdicts.png"
    fig.savefig(verdict_path, dpi=100)
    plt.close(fig)
    written.append(verdict_path)

    orders = sorted(_finite_orders(payload["cases"]))
    if orders:
        fig, ax = plt.subplots(figsize=(4.5, 3.0))
        bins = max(orders) if max(orders) <= 40 else 40
        ax.hist(orders, bins=bins, color="#577590")
        ax.set_xlabel("order of finite group in report")
        ax.set_ylabel("occurrences")
        ax.set_title(f"{payload['task']}: group orders")
        fig.tight_layout()
        hist_path = outdir / "group_orders.png"
        fig.savefig(hist_path, dpi=100)
        plt.close(fig)
        written.append(hist_path)

    return [str(p) for p in written]
