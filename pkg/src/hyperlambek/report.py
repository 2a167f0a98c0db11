"""Files written for an equivalence sweep: JSON report, CSV table and a figure."""
from __future__ import annotations

import csv
import json
from collections import Counter
from dataclasses import asdict, fields
from pathlib import Path

from .harness import EquivalenceReport, Verdict


def write_json(report: EquivalenceReport, path: Path) -> Path:
    path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n")
    return path


def write_csv(report: EquivalenceReport, path: Path) -> Path:
    names = [f.name for f in fields(Verdict)]
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=names)
        w.writeheader()
        for v in report.verdicts:
            w.writerow(asdict(v))
    return path


def plot(report: EquivalenceReport, path: Path) -> Path:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by_size: dict[int, Counter] = {}
    for v in report.verdicts:
        by_size.setdefault(v.ops, Counter())[("derivable" if v.nlm else "underivable")] += 1
    sizes = sorted(by_size)
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    yes = [by_size[k]["derivable"] for k in sizes]
    no = [by_size[k]["underivable"] for k in sizes]
    ax1.bar(sizes, no, label="underivable", color="#bbbbbb")
    ax1.bar(sizes, yes, bottom=no, label="derivable", color="#3b75af")
    ax1.set_xlabel("connectives + brackets")
    ax1.set_ylabel("sequents")
    ax1.set_yscale("log")
    ax1.legend()
    s = report.summary()
    ax1.set_title(f"{s['total']} sequents, {s['disagreements']} disagreements")

    times = sorted(v.seconds * 1000 for v in report.verdicts)
    if times:
        ax2.plot(range(len(times)), times, color="#3b75af")
        ax2.set_yscale("log")
    ax2.set_xlabel("sequent (sorted by time)")
    ax2.set_ylabel("ms per sequent")
    ax2.set_title(f"total {s['seconds']:.1f} s")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def write_report(report: EquivalenceReport, outdir: str | Path, stem: str = "equiv") -> dict[str, Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    return {
        "json": write_json(report, out / f"{stem}.json"),
        "csv": write_csv(report, out / f"{stem}.csv"),
        "figure": plot(report, out / f"{stem}.png"),
    }
