"""Cross-run aggregation into comparison tables.

Consumes one or more ``report.json`` files (plus, optionally, prediction
reports produced out-of-process by the next-byte predictor) and emits
four tables: statistical pass/fail matrix, LZ-76 complexity, Borel
normality grid, and model-vs-guessing prediction accuracy.
"""

from __future__ import annotations

import glob
import json
import os

from ..sts.suite import TEST_ORDER

_CELLS = {"pass": ".", "fail": "#", "n/a": "-"}


def load_run(run_dir: str) -> dict:
    with open(os.path.join(run_dir, "report.json")) as f:
        return json.load(f)


def load_prediction_reports(pred_dir: str) -> list[dict]:
    out = []
    for path in sorted(glob.glob(os.path.join(pred_dir, "*.json"))):
        with open(path) as f:
            out.append(json.load(f))
    return out


def _iter_stages(report: dict):
    for label, entry in report.get("sources", {}).items():
        for stage, data in entry.get("stages", {}).items():
            yield label, stage, data


def sts_matrix(reports: list[dict]) -> tuple[dict, str]:
    rows = []
    for rep in reports:
        for label, stage, data in _iter_stages(rep):
            suite = data.get("sts")
            if not suite:
                continue
            cells = {}
            for r in suite["results"]:
                cells[r["test"]] = (
                    "n/a" if not r["applicable"] else ("pass" if r["pass"] else "fail")
                )
            rows.append({"label": label, "stage": stage, "cells": cells})
    if not rows:
        return {"tests": [t.value for t in TEST_ORDER], "rows": []}, "(no sts results)"
    width = max(len(f"{r['label']}/{r['stage']}") for r in rows) + 2
    lines = [" " * width + " ".join(f"{i + 1:>2d}" for i in range(len(TEST_ORDER)))]
    for r in rows:
        name = f"{r['label']}/{r['stage']}".ljust(width)
        lines.append(
            name
            + " ".join(
                f"{_CELLS[r['cells'].get(t.value, 'n/a')]:>2s}" for t in TEST_ORDER
            )
        )
    lines.append("")
    lines.extend(f"{i + 1:>3d}: {t.value}" for i, t in enumerate(TEST_ORDER))
    return {"tests": [t.value for t in TEST_ORDER], "rows": rows}, "\n".join(lines)


def lz76_table(reports: list[dict]) -> tuple[dict, str]:
    rows = []
    for rep in reports:
        for label, stage, data in _iter_stages(rep):
            lz = data.get("lz76")
            if not lz:
                continue
            rows.append({"label": label, "stage": stage, **lz})
    if not rows:
        return {"rows": []}, "(no lz76 results)"
    lines = [f"{'source/stage':<28s}{'C':>10s}{'normalized':>12s}{'rel_to_seed':>12s}"]
    for r in rows:
        rel = "-" if r["relative_to_seed"] is None else f"{r['relative_to_seed']:.4f}"
        lines.append(
            f"{r['label'] + '/' + r['stage']:<28s}{r['C']:>10d}"
            f"{r['normalized']:>12.4f}{rel:>12s}"
        )
    return {"rows": rows}, "\n".join(lines)


def borel_grid(reports: list[dict]) -> tuple[dict, str]:
    rows = []
    max_m = 0
    for rep in reports:
        for label, stage, data in _iter_stages(rep):
            borel = data.get("borel")
            if not borel:
                continue
            cells = {lv["m"]: (1 if lv["pass"] else 0) for lv in borel["levels"]}
            max_m = max(max_m, *cells.keys())
            rows.append({"label": label, "stage": stage, "cells": cells})
    if not rows:
        return {"rows": []}, "(no borel results)"
    width = max(len(f"{r['label']}/{r['stage']}") for r in rows) + 2
    lines = [" " * width + " ".join(f"{m}-bit" for m in range(1, max_m + 1))]
    for r in rows:
        name = f"{r['label']}/{r['stage']}".ljust(width)
        lines.append(
            name
            + " ".join(
                f"{r['cells'].get(m, '-'):>5}" for m in range(1, max_m + 1)
            )
        )
    return {"rows": rows}, "\n".join(lines)


def prediction_table(
    reports: list[dict], predictions: list[dict] | None
) -> tuple[dict, str]:
    """P_ml vs P_g per exported dataset; absent predictions render as '-'."""
    datasets = []
    for rep in reports:
        for label, stage, data in _iter_stages(rep):
            if "dataset" in data:
                datasets.append({"label": label, "stage": stage})
    by_key = {}
    for pred in predictions or []:
        meta = pred.get("dataset", {})
        key = (meta.get("source_label"), meta.get("stage"))
        by_key[key] = pred
    rows = []
    for ds in datasets:
        pred = by_key.get((ds["label"], ds["stage"]))
        rows.append(
            {
                **ds,
                "p_ml_percent": pred.get("p_ml_percent") if pred else None,
                "p_g_percent": pred.get("p_g_percent") if pred else None,
                "ci95": pred.get("ci95") if pred else None,
            }
        )
    # Predictions without a matching dataset row are still worth showing.
    known = {(r["label"], r["stage"]) for r in rows}
    for (label, stage), pred in by_key.items():
        if (label, stage) not in known and label is not None:
            rows.append(
                {
                    "label": label,
                    "stage": stage,
                    "p_ml_percent": pred.get("p_ml_percent"),
                    "p_g_percent": pred.get("p_g_percent"),
                    "ci95": pred.get("ci95"),
                }
            )
    if not rows:
        return {"rows": []}, "(no predictor datasets)"
    lines = [f"{'source/stage':<28s}{'P_ml':>10s}{'P_g':>10s}"]
    for r in rows:
        pml = "-" if r["p_ml_percent"] is None else f"{r['p_ml_percent']:.3f}%"
        pg = "-" if r["p_g_percent"] is None else f"{r['p_g_percent']:.4f}%"
        lines.append(f"{r['label'] + '/' + r['stage']:<28s}{pml:>10s}{pg:>10s}")
    return {"rows": rows}, "\n".join(lines)


def aggregate(run_dirs: list[str], predictions_dir: str | None = None) -> tuple[dict, str]:
    """Build all four comparison tables from stored run reports."""
    if not run_dirs:
        raise ValueError("need at least one run directory")
    reports = [load_run(d) for d in run_dirs]
    predictions = load_prediction_reports(predictions_dir) if predictions_dir else None
    tables = {}
    texts = []
    for name, builder in (
        ("sts", lambda: sts_matrix(reports)),
        ("lz76", lambda: lz76_table(reports)),
        ("borel", lambda: borel_grid(reports)),
        ("prediction", lambda: prediction_table(reports, predictions)),
    ):
        data, text = builder()
        tables[name] = data
        texts.append(f"== {name} ==\n{text}")
    return tables, "\n\n".join(texts)
