"""Command line runner.

    oscillint <command> [--config FILE] [--out DIR] [--seed N] [options]

Commands: symbol, kernel, lemma1, statphase, opnorm, besov, seq-ineq, all.
Each run writes its reports into the output directory together with a
``manifest.json`` listing every file with its SHA-256.

Exit codes: 0 success, 1 invalid input or config, 2 coverage or
resolution rejection, 3 an acceptance threshold was missed (``all``).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, acceptance
from .asymptotics import parallelepiped_nodes
from .besov import dilation_invariance_check, radial_phase_multiplier
from .bumps import SmoothBump
from .config import config_hash, load_config
from .errors import ConfigError, CoverageError, ResolutionError
from .grid import save_field
from .plotting import loglog_svg
from .symbol import SymbolSpec, grid_for, sample_symbol, spatial_spec
from .transform import kernel_fft, write_point_csv

EXIT_OK, EXIT_INVALID, EXIT_COVERAGE, EXIT_ACCEPTANCE = 0, 1, 2, 3


def _plain(obj):
    """Recursively convert numpy scalars/arrays and complex numbers for JSON."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return repr(obj)
    return obj


class Run:
    """Output directory bookkeeping: every file written is hashed into the manifest."""

    def __init__(self, out: Path, command: str, cfg: dict, workers: int):
        self.out = out
        self.command = command
        self.cfg = cfg
        self.workers = workers
        self.files = {}
        out.mkdir(parents=True, exist_ok=True)

    def _record(self, path: Path) -> None:
        self.files[str(path.relative_to(self.out))] = hashlib.sha256(path.read_bytes()).hexdigest()

    def json(self, name: str, obj) -> Path:
        path = self.out / name
        path.write_text(json.dumps(_plain(obj), indent=2, sort_keys=True) + "\n")
        self._record(path)
        return path

    def csv(self, name: str, header, rows) -> Path:
        path = self.out / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
        self._record(path)
        return path

    def text(self, name: str, body: str) -> Path:
        path = self.out / name
        path.write_text(body)
        self._record(path)
        return path

    def points(self, name: str, points, values) -> Path:
        path = self.out / name
        write_point_csv(path, points, values)
        self._record(path)
        return path

    def field(self, name: str, fld, sidecar=None) -> Path:
        path = self.out / name
        save_field(path, fld, sidecar)
        self._record(path)
        self._record(Path(str(path) + ".json"))
        return path

    def manifest(self, started: float) -> Path:
        doc = {
            "command": self.command,
            "version": __version__,
            "seed": self.cfg["seed"],
            "config_hash": config_hash(self.cfg),
            "threads": self.workers,
            "wall_time_seconds": round(time.perf_counter() - started, 3),
            "files": dict(sorted(self.files.items())),
        }
        path = self.out / "manifest.json"
        path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return path


def _tag(lam) -> str:
    return f"{float(lam):g}".replace(".", "p").replace("-", "m")


# ---------------------------------------------------------------------------
# writers shared by the individual commands and by ``all``


def write_lemma1(run: Run, details: dict, res: dict) -> dict:
    for rep in res["reports"]:
        rs, ths = rep.extras["r_nodes"], rep.extras["theta_nodes"]
        rows = ((r, t, float(rep.table[i, j])) for i, r in enumerate(rs) for j, t in enumerate(ths))
        run.csv(f"lemma1_lambda{_tag(rep.lam)}.csv", ["r", "theta_xy", "discrepancy"], rows)
    summary = dict(details)
    summary["reports"] = [rep.to_dict() for rep in res["reports"]]
    run.json("lemma1.json", summary)
    lams = [rep.lam for rep in res["reports"]]
    run.text("lemma1.svg", loglog_svg([("sup discrepancy", lams, res["sups"])],
                                      "Planar asymptotic-formula discrepancy", ylabel="sup"))
    return details


def write_kernel(run: Run, details: dict, runs: list) -> dict:
    for r in runs:
        tag = _tag(r["lambda"])
        run.points(f"kernel_fft_lambda{tag}.csv", r["points"], r["fft"])
        run.points(f"kernel_reduction_lambda{tag}.csv", r["points"], r["reduction"])
    run.json("kernel.json", {"summary": details, "runs": runs})
    return details


def write_opnorm(run: Run, details: dict, res: dict) -> dict:
    series = []
    reports = {}
    for p, rep in res["reports"].items():
        run.csv(f"opnorm_p{_tag(p)}.csv", ["log_lambda", "log_value"],
                ((math.log(a), math.log(b)) for a, b in rep.ladder))
        reports[f"{p:.6g}"] = rep.to_dict()
        series.append((f"p = {p:.4g}", list(rep.lams), list(rep.values)))
    per_lam = {f"{k:g}": {(f"{p:.6g}" if isinstance(p, float) else p): v for p, v in d.items()}
               for k, d in res["per_lambda"].items()}
    run.json("opnorm.json", {"acceptance": details, "reports": reports, "per_lambda": per_lam})
    run.text("opnorm.svg", loglog_svg(series, "||K*f||_p / ||f||_p", reference_slope=1.0))
    return details


def write_statphase(run: Run, sp_details: dict, sp: dict, pp_details: dict, reps: list) -> dict:
    run.json("statphase.json", {"acceptance": sp_details, "result": sp})
    keys = ["direction", "lambda", "r", "alpha1", "alpha2", "rel_error", "leading_abs", "reduced_abs"]
    run.csv("statphase.csv", keys, ([row[k] for k in keys] for row in sp["rows"]))
    for rep in reps:
        reg = rep.region
        nodes, _ = parallelepiped_nodes(reg["centre"], np.array(reg["edges"]), reg["lengths"], reg["n"])
        run.json(f"parallelepiped_lambda{_tag(rep.lam)}.json", rep.to_dict())
        run.points(f"parallelepiped_lambda{_tag(rep.lam)}.csv", nodes.reshape(-1, 3), np.ravel(rep.table))
    run.json("parallelepiped.json", pp_details)
    return {"statphase": sp_details, "parallelepiped": pp_details}


def write_besov(run: Run, details: dict, rep, interp_details: dict, dilation: dict) -> dict:
    for lam, s in rep.extras["spectra"].items():
        run.csv(f"besov_spectrum_lambda{_tag(lam)}.csv", ["k", "a_k"], enumerate(s["a"]))
    run.json("besov.json", {"scaling": rep.to_dict(), "acceptance": details, "interpolation": interp_details,
                            "dilation": dilation})
    run.text("besov.svg", loglog_svg([("besov norm", list(rep.lams), list(rep.values))],
                                     "Besov norm of the oscillating window", reference_slope=1.0))
    return details


def write_seq(run: Run, details: dict, runs: list) -> dict:
    run.json("seq_ineq.json", {"summary": details, "runs": runs})
    return details


# ---------------------------------------------------------------------------
# commands


def _symbol_spec(cfg: dict) -> SymbolSpec:
    c = cfg["symbol"]
    lam = float(c["lambda"])
    if c["dimension"] == 3:
        return spatial_spec(lam, c.get("cap_radius", 0.5),
                            **({"radial": SmoothBump.from_dict(c["radial"])} if "radial" in c else {}))
    kw = {}
    if "radial" in c:
        kw["radial"] = SmoothBump.from_dict(c["radial"])
    if "angular" in c:
        kw["angular"] = SmoothBump.from_dict(c["angular"])
    return SymbolSpec(2, lam, **kw)


def cmd_symbol(run: Run) -> dict:
    c = run.cfg["symbol"]
    spec = _symbol_spec(run.cfg)
    grid = grid_for(spec, c["box_half_side"], c["points_per_wavelength"])
    fld = sample_symbol(spec, grid, c["points_per_wavelength"])
    run.field("symbol.gfld", fld, {"spec": spec.to_dict()})
    summary = {
        "lambda": spec.lam, "dimension": spec.dimension, "points_per_axis": grid.points_per_axis,
        "spacing": grid.spacing, "phase_increment_bound": fld.meta["phase_increment_bound"],
        "max_abs": float(np.max(np.abs(fld.samples))), "l2_norm": fld.l2_norm(),
    }
    if run.cfg["kernel"]["save_fields"]:
        run.field("symbol_kernel.gfld", kernel_fft(fld, workers=run.workers), {"spec": spec.to_dict()})
    run.json("symbol.json", summary)
    return summary


def cmd_kernel(run: Run) -> dict:
    ok, details, runs = acceptance.kernel(run.cfg, run.workers)
    details["passed"] = ok
    return write_kernel(run, details, runs)


def cmd_lemma1(run: Run) -> dict:
    ok, details, res = acceptance.lemma1(run.cfg, run.workers)
    details["passed"] = ok
    return write_lemma1(run, details, res)


def cmd_statphase(run: Run) -> dict:
    ok1, d1, sp = acceptance.statphase(run.cfg)
    ok2, d2, reps = acceptance.parallelepiped(run.cfg, run.workers)
    d1 = {"per_direction": d1, "passed": ok1}
    d2["passed"] = ok2
    return write_statphase(run, d1, sp, d2, reps)


def cmd_opnorm(run: Run) -> dict:
    ok, details, res = acceptance.opnorm(run.cfg, run.workers)
    details = {"slopes": details, "passed": ok}
    return write_opnorm(run, details, res)


def _dilation(run: Run) -> dict:
    c = run.cfg["besov"]
    lam = float(c["ladder"][0])
    return {
        "lambda": lam,
        "dilations": c["dilations"],
        "homogeneous_deviation": dilation_invariance_check(lam, c["dilations"], workers=run.workers),
        "radial_phase_deviation": dilation_invariance_check(lam, c["dilations"], radial_phase_multiplier,
                                                            run.workers),
    }


def cmd_besov(run: Run) -> dict:
    ok, details, rep = acceptance.besov(run.cfg, run.workers)
    ok7, interp, _ = acceptance.interpolation(run.cfg, rep, run.workers)
    details["passed"] = ok
    interp["passed"] = ok7
    return write_besov(run, details, rep, interp, _dilation(run))


def cmd_seq(run: Run) -> dict:
    ok, details, runs = acceptance.sequence(run.cfg)
    details["passed"] = ok
    return write_seq(run, details, runs)


def cmd_all(run: Run) -> dict:
    results = {}

    def record(num, ok, details):
        name, desc = acceptance.CRITERIA[num]
        results[str(num)] = {"name": name, "description": desc, "passed": bool(ok), "details": details}

    ok, d, res = acceptance.lemma1(run.cfg, run.workers)
    record(1, ok, write_lemma1(run, d, res))
    ok, d, runs = acceptance.kernel(run.cfg, run.workers)
    record(2, ok, write_kernel(run, d, runs))
    ok, d, res = acceptance.opnorm(run.cfg, run.workers)
    record(3, ok, write_opnorm(run, d, res))
    ok4, d4, sp = acceptance.statphase(run.cfg)
    ok5, d5, reps = acceptance.parallelepiped(run.cfg, run.workers)
    write_statphase(run, d4, sp, d5, reps)
    record(4, ok4, d4)
    record(5, ok5, d5)
    ok6, d6, rep = acceptance.besov(run.cfg, run.workers)
    ok7, d7, _ = acceptance.interpolation(run.cfg, rep, run.workers)
    write_besov(run, d6, rep, d7, _dilation(run))
    record(6, ok6, d6)
    record(7, ok7, d7)
    ok, d, runs = acceptance.sequence(run.cfg)
    record(8, ok, write_seq(run, d, runs))
    name, desc = acceptance.CRITERIA[9]
    results["9"] = {"name": name, "description": desc, "passed": None,
                    "details": "checked by comparing two output directories (see compare_runs)"}
    run.json("acceptance.json", results)
    return results


COMMANDS = {
    "symbol": cmd_symbol,
    "kernel": cmd_kernel,
    "lemma1": cmd_lemma1,
    "statphase": cmd_statphase,
    "opnorm": cmd_opnorm,
    "besov": cmd_besov,
    "seq-ineq": cmd_seq,
    "all": cmd_all,
}


def compare_runs(a, b) -> list:
    """Files that differ between two output directories (JSON/CSV only; manifest wall time ignored)."""
    a, b = Path(a), Path(b)
    names = sorted({p.name for d in (a, b) for p in d.iterdir() if p.suffix in (".json", ".csv")})
    diffs = []
    for name in names:
        pa, pb = a / name, b / name
        if not (pa.exists() and pb.exists()):
            diffs.append(name)
        elif name == "manifest.json":
            ma, mb = json.loads(pa.read_text()), json.loads(pb.read_text())
            ma.pop("wall_time_seconds"), mb.pop("wall_time_seconds")
            if ma != mb:
                diffs.append(name)
        elif pa.read_bytes() != pb.read_bytes():
            diffs.append(name)
    return diffs


# ---------------------------------------------------------------------------
# argument parsing


def _floats(text: str):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (defaults are used for missing keys)")
    common.add_argument("--out", help="output directory (overrides output_dir)")
    common.add_argument("--seed", type=int, help="override the config seed")
    common.add_argument("--threads", type=int, help="worker count (OSCILLINT_THREADS overrides)")

    parser = argparse.ArgumentParser(prog="oscillint", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("symbol", parents=[common], help="sample a symbol and dump it")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--dimension", type=int, choices=(2, 3))

    for name, helptext in [("kernel", "FFT kernels against the 1D reduction"),
                           ("lemma1", "discrepancy of the asymptotic kernel formula along a ladder"),
                           ("statphase", "d = 3 stationary phase and parallelepiped scan"),
                           ("opnorm", "L_p lower bounds and their exponents"),
                           ("besov", "Besov scaling, dilation and interpolation reports")]:
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--ladder", type=_floats, help="comma separated lambda values")
        if name == "opnorm":
            p.add_argument("--p", dest="ps", type=_floats, help="comma separated exponents")
        if name == "kernel":
            p.add_argument("--n-points", type=int)
        if name == "lemma1":
            p.add_argument("--n-r", type=int)
            p.add_argument("--n-theta", type=int)

    p = sub.add_parser("seq-ineq", parents=[common], help="sequence inequality: constant and random search")
    p.add_argument("--A", dest="A", type=float, action="append", help="base A > 1 (repeatable)")
    p.add_argument("--trials", type=int)
    sub.add_parser("all", parents=[common], help="run the acceptance suite")
    return parser


def _overrides(args) -> dict:
    o = {}
    if args.seed is not None:
        o["seed"] = args.seed
    if args.threads is not None:
        o["threads"] = args.threads
    section = {"seq-ineq": "seq_ineq"}.get(args.command, args.command)
    sec = {}
    if getattr(args, "ladder", None):
        sec["ladder"] = args.ladder
    for attr, key in [("ps", "ps"), ("n_points", "n_points"), ("n_r", "n_r"), ("n_theta", "n_theta"),
                      ("A", "A"), ("trials", "trials"), ("lam", "lambda"), ("dimension", "dimension")]:
        v = getattr(args, attr, None)
        if v is not None:
            sec[key] = v
    if sec:
        o[section] = sec
    return o


def _workers(cfg: dict) -> int:
    env = os.environ.get("OSCILLINT_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"OSCILLINT_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ConfigError("OSCILLINT_THREADS must be >= 1")
        return n
    return int(cfg["threads"])


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        cfg = load_config(args.config, _overrides(args))
        out = Path(args.out or cfg["output_dir"])
        run = Run(out, args.command, cfg, _workers(cfg))
        summary = COMMANDS[args.command](run)
        run.manifest(started)
    except (CoverageError, ResolutionError) as exc:
        print(f"oscillint: {exc}", file=sys.stderr)
        return EXIT_COVERAGE
    except (ConfigError, ValueError) as exc:
        print(f"oscillint: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(json.dumps(_plain(summary), indent=2, sort_keys=True))
    if args.command == "all":
        failed = [k for k, v in summary.items() if v["passed"] is False]
        if failed:
            print(f"oscillint: acceptance criteria failed: {', '.join(failed)}", file=sys.stderr)
            return EXIT_ACCEPTANCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
