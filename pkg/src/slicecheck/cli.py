"""Command-line surface: reproducible verification runs and reports.

Subcommands:

* ``constants``  -- ball volumes, sphere measures, c(n,k), d(n)
* ``integrate``  -- quadrature values (measure / volume / section-*)
* ``oracle``     -- Monte Carlo cross-checks of the same quantities
* ``sandwich``   -- John sandwich construction + sampled containment check
* ``verify``     -- one theorem instance, JSON or CSV report
* ``sweep``      -- a grid of theorem instances, CSV/JSON reports plus a
  per-theorem summary; exit code 0 iff every instance passes

Bodies and densities are JSON documents or shorthand names (ball, cube,
ellipsoid, l1-ball, l4-ball, complex-l1, complex-l2, complex-l4; densities
1, gaussian, 1+r2).  All randomness flows from --seed, which is recorded
in every report; two runs with the same arguments produce byte-identical
output files.  --figures-dir renders charts next to the delimited output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bodies import StarBody, body_from_spec
from .constants import ball_volume, c_nk, d_n, sphere_surface
from .densities import Density, density_from_spec
from .errors import InputError
from .grassmann import SearchConfig, haar_sample
from .john import sandwich_ellipsoid, verify_sandwich
from .oracle import mc_body_measure, mc_section_measure
from .quadrature import QuadratureSpec
from .report import (CSV_HEADER, emit_report, render_constants_figure,
                     render_sweep_figures, report_to_dict, reports_to_csv)
from .sections import body_measure, body_volume, section_measure, section_volume
from .verify import (THEOREMS, check_km, check_slicing_complex,
                     check_slicing_real, check_stability_complex,
                     check_stability_real)

__all__ = ["main", "RunConfig", "run_sweep"]

_COMPLEX_THEOREMS = ("thm3", "thm4")


@dataclass(frozen=True)
class RunConfig:
    """One CLI invocation, round-trippable through JSON."""

    command: str
    options: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps({"command": self.command, "options": self.options},
                          sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        doc = json.loads(text)
        return cls(command=doc["command"], options=doc.get("options", {}))


def _parse_spec_arg(text: str):
    text = text.strip()
    if text.startswith("{"):
        return json.loads(text)
    return text


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="slicecheck",
                                 description="section measures and slicing-"
                                             "inequality verification")
    ap.add_argument("--config", help="JSON run config replacing the CLI flags")
    sub = ap.add_subparsers(dest="command")

    def add_common(p, with_density=True):
        p.add_argument("--body", default="ball", help="body spec or shorthand")
        if with_density:
            p.add_argument("--density", default="1", help="density spec or shorthand")
        p.add_argument("--dim", type=int, default=3)
        p.add_argument("--codim", type=int, default=1)
        p.add_argument("--nodes", type=int, default=4096)
        p.add_argument("--radial-nodes", type=int, default=64)
        p.add_argument("--scheme", choices=["product-gauss", "randomized-qmc"])
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("constants", help="dimensional constants")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--nmax", type=int, help="emit the whole grid up to nmax")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.add_argument("--figures-dir")

    p = sub.add_parser("integrate", help="quadrature integrals")
    p.add_argument("--what", default="measure",
                   choices=["measure", "volume", "section-measure", "section-volume"])
    add_common(p)

    p = sub.add_parser("oracle", help="Monte Carlo estimates")
    p.add_argument("--what", default="measure", choices=["measure", "section-measure"])
    add_common(p)
    p.add_argument("--samples", type=int, default=1_000_000)

    p = sub.add_parser("sandwich", help="John sandwich ellipsoid")
    add_common(p, with_density=False)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("verify", help="verify one theorem instance")
    p.add_argument("--theorem", required=True, choices=list(THEOREMS))
    add_common(p)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--evals", type=int, default=120)
    p.add_argument("--replay", action="store_true", help="replay the proof chain")

    p = sub.add_parser("sweep", help="verify a grid of instances")
    p.add_argument("--theorems", default="thm1,km,thm2",
                   help="comma list from thm1,km,thm2,thm3,thm4")
    p.add_argument("--bodies", default="ball", help="comma list of shorthands")
    p.add_argument("--densities", default="1", help="comma list of shorthands")
    p.add_argument("--dims", default="3,4", help="comma list of ambient dims")
    p.add_argument("--codims", default="1", help="comma list of codimensions")
    p.add_argument("--nodes", type=int, default=4096)
    p.add_argument("--radial-nodes", type=int, default=64)
    p.add_argument("--scheme", choices=["product-gauss", "randomized-qmc"])
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--evals", type=int, default=120)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--replay", action="store_true")
    p.add_argument("--format", choices=["json", "csv"], default="csv")
    p.add_argument("--out", help="write instance reports here")
    p.add_argument("--summary-out", help="write the per-theorem summary here")
    p.add_argument("--figures-dir", help="render figures alongside the output")
    return ap


def _quad_spec(opts) -> QuadratureSpec:
    return QuadratureSpec(sphere_nodes=opts["nodes"],
                          radial_nodes=opts["radial_nodes"],
                          seed=opts["seed"], scheme=opts.get("scheme"))


def _search_config(opts) -> SearchConfig:
    return SearchConfig(restarts=opts.get("restarts", 8),
                        evals=opts.get("evals", 120), seed=opts["seed"])


def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


# ----------------------------------------------------------------------
# subcommand implementations
# ----------------------------------------------------------------------

def _cmd_constants(opts) -> int:
    if opts.get("nmax"):
        rows = []
        for n in range(2, opts["nmax"] + 1):
            for k in range(1, n):
                rows.append({"n": n, "k": k, "ball_vol_n": ball_volume(n),
                             "sphere_vol_n": sphere_surface(n), "c_nk": c_nk(n, k),
                             "d_n": d_n(n // 2) if (n % 2 == 0 and n >= 4 and k == 2) else None})
        if opts["format"] == "csv":
            lines = ["n,k,ball_vol_n,sphere_vol_n,c_nk,d_n"]
            for r in rows:
                dn = "" if r["d_n"] is None else repr(r["d_n"])
                lines.append(f"{r['n']},{r['k']},{r['ball_vol_n']!r},"
                             f"{r['sphere_vol_n']!r},{r['c_nk']!r},{dn}")
            _emit("\n".join(lines) + "\n", opts.get("out"))
        else:
            _emit(json.dumps(rows, sort_keys=True, indent=2), opts.get("out"))
        if opts.get("figures_dir"):
            render_constants_figure(opts["nmax"], opts["figures_dir"])
        return 0
    n, k = opts["n"], opts["k"]
    doc = {"n": n, "k": k, "ball_vol_n": ball_volume(n),
           "sphere_vol_n": sphere_surface(n), "c_nk": c_nk(n, k),
           "km_factor": (n / (n - k)) * c_nk(n, k),
           "slicing_factor": n ** (k / 2.0) * (n / (n - k)) * c_nk(n, k)}
    if n % 2 == 0 and n >= 4:
        doc["d_n_complex"] = d_n(n // 2)
    if opts["format"] == "csv":
        keys = sorted(doc)
        text = ",".join(keys) + "\n" + ",".join(repr(doc[key]) if isinstance(doc[key], float)
                                                else str(doc[key]) for key in keys) + "\n"
        _emit(text, opts.get("out"))
    else:
        _emit(json.dumps(doc, sort_keys=True, indent=2), opts.get("out"))
    if opts.get("figures_dir"):
        render_constants_figure(max(n, 10), opts["figures_dir"])
    return 0


def _body_density(opts, need_density=True):
    body = body_from_spec(_parse_spec_arg(opts["body"]), dim=opts["dim"])
    density = None
    if need_density:
        density = density_from_spec(_parse_spec_arg(opts["density"]), dim=body.dim)
    return body, density


def _result_doc(kind, value, err=None, extra=None):
    doc = {"what": kind, "value": value}
    if err is not None:
        doc["est_error"] = err
    if extra:
        doc.update(extra)
    return doc


def _cmd_integrate(opts) -> int:
    body, density = _body_density(opts)
    spec = _quad_spec(opts)
    what = opts["what"]
    if what == "measure":
        r = body_measure(body, density, spec)
        doc = _result_doc(what, r.value, r.est_error, {"nodes_used": r.nodes_used})
    elif what == "volume":
        r = body_volume(body, spec)
        doc = _result_doc(what, r.value, r.est_error, {"nodes_used": r.nodes_used})
    else:
        H = haar_sample(body.dim, opts["codim"], opts["seed"])
        if what == "section-measure":
            r = section_measure(body, density, H, spec)
        else:
            r = section_volume(body, H, spec)
        doc = _result_doc(what, r.value, r.est_error,
                          {"nodes_used": r.nodes_used, "codim": opts["codim"],
                           "frame": H.frame.tolist()})
    doc["seed"] = opts["seed"]
    _emit_doc(doc, opts)
    return 0


def _cmd_oracle(opts) -> int:
    body, density = _body_density(opts)
    if opts["what"] == "measure":
        est = mc_body_measure(body, density, samples=opts["samples"], seed=opts["seed"])
        doc = _result_doc("mc-measure", est.mean, extra={"std_error": est.std_error})
    else:
        H = haar_sample(body.dim, opts["codim"], opts["seed"])
        est = mc_section_measure(body, density, H, samples=opts["samples"],
                                 seed=opts["seed"])
        doc = _result_doc("mc-section-measure", est.mean,
                          extra={"std_error": est.std_error, "codim": opts["codim"]})
    doc["samples"] = opts["samples"]
    doc["seed"] = opts["seed"]
    _emit_doc(doc, opts)
    return 0


def _cmd_sandwich(opts) -> int:
    body, _ = _body_density(opts, need_density=False)
    sand = sandwich_ellipsoid(body)
    check = verify_sandwich(body, sand, samples=opts["samples"], tol=opts["tol"])
    doc = {"what": "sandwich", "ratio": sand.ratio, "certified": sand.certified,
           "shape": sand.shape.tolist(), "check_passed": check.passed,
           "max_violation": check.max_violation, "samples": check.samples}
    _emit_doc(doc, opts)
    return 0 if check.passed else 1


def _emit_doc(doc: dict, opts):
    if opts["format"] == "csv":
        keys = sorted(k for k, v in doc.items() if not isinstance(v, (list, dict)))
        row = ",".join(repr(doc[k]) if isinstance(doc[k], float) else str(doc[k])
                       for k in keys)
        _emit(",".join(keys) + "\n" + row + "\n", opts.get("out"))
    else:
        _emit(json.dumps(doc, sort_keys=True, indent=2), opts.get("out"))


def _run_one(theorem: str, body: StarBody, density: Density, k: int,
             spec: QuadratureSpec, search: SearchConfig, replay: bool):
    if theorem == "thm1":
        return check_stability_real(body, density, k, spec, search,
                                    proof_replay=replay)
    if theorem == "km":
        return check_km(body, density, k, spec, search)
    if theorem == "thm2":
        return check_slicing_real(body, density, k, spec, search,
                                  proof_replay=replay)
    if theorem == "thm3":
        return check_stability_complex(body, density, spec, search,
                                       proof_replay=replay)
    if theorem == "thm4":
        return check_slicing_complex(body, density, spec, search,
                                     proof_replay=replay)
    raise InputError(f"unknown theorem {theorem!r}")


def _cmd_verify(opts) -> int:
    body, density = _body_density(opts)
    report = _run_one(opts["theorem"], body, density, opts["codim"],
                      _quad_spec(opts), _search_config(opts),
                      opts.get("replay", False))
    _emit(emit_report(report, opts["format"]), opts.get("out"))
    ok = report.passed and report.replay_passed()
    return 0 if ok else 1


def run_sweep(opts) -> tuple[list, dict, int]:
    """Execute the theorem grid; returns (reports, summary, exit_code)."""
    theorems = [t.strip() for t in opts["theorems"].split(",") if t.strip()]
    bodies = [b.strip() for b in opts["bodies"].split(",") if b.strip()]
    densities = [d.strip() for d in opts["densities"].split(",") if d.strip()]
    dims = [int(d) for d in str(opts["dims"]).split(",") if str(d).strip()]
    codims = [int(c) for c in str(opts["codims"]).split(",") if str(c).strip()]
    if not (theorems and bodies and densities and dims and codims):
        raise InputError("sweep needs at least one theorem, body, density, "
                         "dim, and codim")
    for t in theorems:
        if t not in THEOREMS:
            raise InputError(f"unknown theorem {t!r} in sweep grid")

    spec = _quad_spec(opts)
    search = _search_config(opts)
    reports = []
    for theorem in theorems:
        for body_name in bodies:
            for dim in dims:
                for density_name in densities:
                    for k in (codims if theorem not in _COMPLEX_THEOREMS else [2]):
                        try:
                            body = body_from_spec(_parse_spec_arg(body_name), dim=dim)
                            density = density_from_spec(
                                _parse_spec_arg(density_name), dim=body.dim)
                        except InputError as e:
                            raise InputError(
                                f"sweep instance theorem={theorem} body={body_name} "
                                f"dim={dim}: {e}") from e
                        reports.append(_run_one(theorem, body, density, k, spec,
                                                search, opts.get("replay", False)))

    summary = {}
    for theorem in theorems:
        rs = [r for r in reports if r.theorem == theorem]
        if rs:
            summary[theorem] = {
                "instances": len(rs),
                "min_ratio": min(r.ratio for r in rs),
                "max_ratio": max(r.ratio for r in rs),
                "all_pass": all(r.passed and r.replay_passed() for r in rs),
            }
    code = 0 if all(v["all_pass"] for v in summary.values()) else 1
    return reports, summary, code


def _cmd_sweep(opts) -> int:
    reports, summary, code = run_sweep(opts)
    if opts["format"] == "csv":
        text = reports_to_csv(reports)
    else:
        text = json.dumps([report_to_dict(r) for r in reports],
                          sort_keys=True, indent=2)
    _emit(text, opts.get("out"))

    summary_lines = ["theorem,instances,min_ratio,max_ratio,all_pass"]
    for theorem, s in summary.items():
        summary_lines.append(f"{theorem},{s['instances']},{s['min_ratio']!r},"
                             f"{s['max_ratio']!r},"
                             f"{'true' if s['all_pass'] else 'false'}")
    summary_text = "\n".join(summary_lines) + "\n"
    if opts.get("summary_out"):
        _emit(summary_text, opts["summary_out"])
    else:
        sys.stdout.write(summary_text)

    if opts.get("figures_dir"):
        render_sweep_figures(reports, opts["figures_dir"])
    return code


_COMMANDS = {
    "constants": _cmd_constants,
    "integrate": _cmd_integrate,
    "oracle": _cmd_oracle,
    "sandwich": _cmd_sandwich,
    "verify": _cmd_verify,
    "sweep": _cmd_sweep,
}


def main(argv=None) -> int:
    ap = _build_parser()
    ns = ap.parse_args(argv)
    if ns.config:
        try:
            config = RunConfig.from_json(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            print(f"error: cannot read config: {e}", file=sys.stderr)
            return 2
    else:
        if not ns.command:
            ap.print_usage(sys.stderr)
            return 2
        opts = {k.replace("-", "_"): v for k, v in vars(ns).items()
                if k not in ("command", "config")}
        config = RunConfig(command=ns.command, options=opts)
    if config.command not in _COMMANDS:
        print(f"error: unknown command {config.command!r}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[config.command](dict(config.options))
    except InputError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
