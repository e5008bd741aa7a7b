"""Report serialization (JSON / CSV) and optional figure rendering.

CSV rows follow the fixed header

    theorem,n,k,lhs,rhs,ratio,epsilon,est_error,pass

with floats printed through repr (shortest round-trip), so identical runs
produce byte-identical files.  The JSON document carries the full report
including the witness frame and any proof-replay steps, and survives an
emit -> parse -> emit round trip unchanged.

Figures are an opt-in rendering of already-emitted reports (ratio per
instance against the pass threshold, constants curves); they never feed
back into the verification path.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

import numpy as np

from .constants import c_nk, d_n, slicing_constants
from .errors import InputError
from .verify import ReplayStep, VerificationReport

__all__ = [
    "CSV_HEADER",
    "report_to_dict",
    "report_from_dict",
    "emit_report",
    "parse_report",
    "reports_to_csv",
    "render_sweep_figures",
    "render_constants_figure",
]

CSV_HEADER = "theorem,n,k,lhs,rhs,ratio,epsilon,est_error,pass"


def report_to_dict(report: VerificationReport) -> dict:
    wf = report.witness_frame
    return {
        "theorem": report.theorem,
        "n": report.n,
        "k": report.k,
        "lhs": report.lhs,
        "rhs": report.rhs,
        "ratio": report.ratio,
        "epsilon": report.epsilon,
        "margin": report.margin,
        "est_error": report.est_error,
        "pass": report.passed,
        "witness_frame": None if wf is None else np.asarray(wf).tolist(),
        "seed": report.seed,
        "constants": {
            "n": report.constants_used.n,
            "k": report.constants_used.k,
            "ball_vol_n": report.constants_used.ball_vol_n,
            "sphere_vol_n": report.constants_used.sphere_vol_n,
            "c_nk": report.constants_used.c_nk,
            "factor": report.constants_used.factor,
        },
        "replay": [
            {"name": s.name, "lhs": s.lhs, "rhs": s.rhs, "pass": s.passed,
             "note": s.note}
            for s in report.replay
        ],
        "extras": _jsonable(report.extras),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def report_from_dict(doc: dict) -> VerificationReport:
    consts = slicing_constants(doc["constants"]["n"], doc["constants"]["k"])
    wf = doc.get("witness_frame")
    return VerificationReport(
        theorem=doc["theorem"], n=doc["n"], k=doc["k"], lhs=doc["lhs"],
        rhs=doc["rhs"], ratio=doc["ratio"], epsilon=doc["epsilon"],
        margin=doc["margin"], est_error=doc["est_error"], passed=doc["pass"],
        witness_frame=None if wf is None else np.asarray(wf),
        constants_used=consts, seed=doc["seed"],
        replay=[ReplayStep(name=s["name"], lhs=s["lhs"], rhs=s["rhs"],
                           passed=s["pass"], note=s.get("note", ""))
                for s in doc.get("replay", [])],
        extras=doc.get("extras", {}),
    )


def emit_report(report: VerificationReport, fmt: str = "json") -> str:
    """Serialize one report; csv output includes the fixed header line."""
    if fmt == "json":
        return json.dumps(report_to_dict(report), sort_keys=True, indent=2)
    if fmt == "csv":
        return CSV_HEADER + "\n" + _csv_row(report) + "\n"
    raise InputError(f"unknown report format {fmt!r}")


def parse_report(text: str) -> VerificationReport:
    return report_from_dict(json.loads(text))


def _csv_row(report: VerificationReport) -> str:
    return ",".join([
        report.theorem, str(report.n), str(report.k),
        repr(report.lhs), repr(report.rhs), repr(report.ratio),
        repr(report.epsilon), repr(report.est_error),
        "true" if report.passed else "false",
    ])


def reports_to_csv(reports: Sequence[VerificationReport]) -> str:
    lines = [CSV_HEADER]
    lines.extend(_csv_row(r) for r in reports)
    return "\n".join(lines) + "\n"


# ----------------------------------------------------------------------
# figures
# ----------------------------------------------------------------------

def _pyplot():
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    return plt


def render_sweep_figures(reports: Sequence[VerificationReport], outdir) -> list:
    """Render ratio and epsilon charts for a sweep; returns written paths."""
    from pathlib import Path

    plt = _pyplot()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    themes = sorted({r.theorem for r in reports})
    for theorem in themes:
        idx = [i for i, r in enumerate(reports) if r.theorem == theorem]
        ax.plot(idx, [reports[i].ratio for i in idx], "o", ms=5, label=theorem)
    ax.axhline(1.0, color="k", lw=1.0, ls="--", label="bound")
    ax.set_xlabel("instance")
    ax.set_ylabel("lhs / rhs")
    ax.set_title("verification ratios (pass requires ratio <= 1 + margin)")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = outdir / "ratios.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(8.0, 4.5))
    for theorem in themes:
        idx = [i for i, r in enumerate(reports) if r.theorem == theorem]
        ax.plot(idx, [max(reports[i].epsilon, 0.0) for i in idx], "s", ms=5,
                label=theorem)
    ax.set_xlabel("instance")
    ax.set_ylabel("measured max-section quantity")
    ax.set_title("per-instance epsilon / max section value")
    ax.set_yscale("symlog", linthresh=1e-12)
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = outdir / "epsilons.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    written.append(path)
    return written


def render_constants_figure(nmax: int, outdir) -> list:
    """c(n,k) for k = 1..3 and d(n), all strictly below 1."""
    from pathlib import Path

    plt = _pyplot()
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    for k in (1, 2, 3):
        ns = [n for n in range(k + 1, nmax + 1)]
        ax.plot(ns, [c_nk(n, k) for n in ns], label=f"c(n, {k})")
    ncs = list(range(2, nmax // 2 + 1))
    if ncs:
        ax.plot([2 * n for n in ncs], [d_n(n) for n in ncs], "--",
                label="d(n) at 2n")
    ax.axhline(1.0, color="k", lw=1.0)
    ax.set_xlabel("ambient dimension")
    ax.set_ylabel("constant")
    ax.set_title("slicing constants stay below 1")
    ax.legend(fontsize=8)
    fig.tight_layout()
    path = outdir / "constants.png"
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return [path]
