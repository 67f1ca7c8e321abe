"""Command-line interface: build, sweep, thresholds, classify, verify.

Exit codes: 0 success, 1 property failure, 2 usage error, 3 size ceiling.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__, oracle, thermo, thresholds
from .hilbert import (MAX_SITES, ChainSpec, ChainSpecError, Model, ResourceLimitError,
                      build_hamiltonian, sector_blocks)
from .witness import CLASSES, classify

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CEILING = 0, 1, 2, 3
OUTPUT_DIR_ENV = "CHAINENT_OUTPUT_DIR"

SWEEP_COLUMNS = ["T", "U", "U_per_site"] + [f"fired_{c.value}" for c in CLASSES] + \
    [f"margin_{c.value}" for c in CLASSES]
THRESHOLD_COLUMNS = ["class", "T", "T_lo", "T_hi", "residual", "bound"]

log = logging.getLogger("chainent")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class GridSpec:
    start: float
    stop: float
    count: int
    log: bool = False

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise UsageError(f"grid must be start:stop:count[:log|lin], got {text!r}")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError as exc:
            raise UsageError(f"bad grid {text!r}: {exc}") from None
        spacing = parts[3] if len(parts) == 4 else "lin"
        if spacing not in ("lin", "log"):
            raise UsageError(f"grid spacing must be lin or log, got {spacing!r}")
        if count < 1 or start < 0 or stop < start:
            raise UsageError("grid needs count >= 1 and 0 <= start <= stop")
        if spacing == "log" and start <= 0:
            raise UsageError("log grids need start > 0")
        return cls(start, stop, count, spacing == "log")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        if self.log:
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, str):
        return x
    return "%.12g" % x


def _json_value(x):
    if isinstance(x, (bool, np.bool_)):
        return int(x)
    if isinstance(x, str) or x is None:
        return x
    return float("%.12g" % x)


def render(rows: list[dict], columns: list[str], fmt_name: str, config: dict,
           seed: int | None) -> str:
    if fmt_name == "json":
        doc = {"config": config,
               "rows": [{c: _json_value(r[c]) for c in columns} for r in rows],
               "provenance": {"version": __version__, "seed": seed}}
        return json.dumps(doc, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


def _output_path(path: str | None) -> Path | None:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def emit(text: str, path: str | None):
    out = _output_path(path)
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    log.info("wrote %s", out)


def _spec(args) -> ChainSpec:
    if args.n_sites is None:
        raise UsageError("-n/--n-sites is required")
    if args.n_sites > MAX_SITES:
        raise ResourceLimitError(f"n_sites={args.n_sites} exceeds the ceiling of {MAX_SITES}")
    # computation runs at J = 1; --coupling rescales the output
    return ChainSpec(Model(args.model), args.n_sites, 1.0)


def _config(args, **extra) -> dict:
    cfg = {"command": args.command, "model": args.model, "n_sites": args.n_sites,
           "coupling": args.coupling}
    cfg.update(extra)
    return cfg


PLOT_TEMPLATE = '''"""Plot {kind} data written by chainent (requires matplotlib)."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else {data!r}
with open(path) as fh:
    rows = list(csv.DictReader(fh))
{body}
plt.tight_layout()
plt.savefig(path.rsplit(".", 1)[0] + ".png")
'''

_SWEEP_BODY = '''T = [float(r["T"]) for r in rows]
u = [float(r["U_per_site"]) for r in rows]
plt.plot(T, u, label="U/N")
plt.xlabel("kT / J")
plt.ylabel("U / (J N)")
plt.legend()'''

_THRESH_BODY = '''rows = [r for r in rows if r["T"] != "none"]
plt.bar([r["class"] for r in rows], [float(r["T"]) for r in rows])
plt.ylabel("threshold kT / J")'''


def write_plot_script(path: str, data_path: str | None, kind: str):
    body = _SWEEP_BODY if kind == "sweep" else _THRESH_BODY
    emit(PLOT_TEMPLATE.format(kind=kind, data=data_path or "data.csv", body=body), path)


# ---------------------------------------------------------------- commands

def cmd_build(args) -> int:
    spec = _spec(args)
    op = build_hamiltonian(spec)
    blocks = sector_blocks(op)
    dec = thermo.diagonalize(op, vectors=False, spec=spec)
    info = {
        "model": spec.model.value, "n_sites": spec.n_sites, "dimension": op.dimension,
        "nonzeros": int(op.matrix.nnz),
        "sectors": {str(b.magnetization): int(b.indices.size) for b in blocks},
        "trace": float(op.matrix.diagonal().sum()) * args.coupling,
        "ground_energy": float("%.12g" % (dec.ground_energy * args.coupling)),
        "ground_energy_per_site": float("%.12g" % (dec.ground_energy / spec.n_sites)),
    }
    emit(json.dumps(info, indent=2) + "\n", args.output)
    return EXIT_OK


def sweep_rows(spec: ChainSpec, temps, coupling: float = 1.0) -> list[dict]:
    rows = []
    for r in thresholds.temperature_sweep(spec, temps):
        row = {"T": r.temperature * coupling, "U": r.energy * coupling,
               "U_per_site": r.energy_per_site * coupling}
        for c in CLASSES:
            row[f"fired_{c.value}"] = r.verdict.fired(c)
            row[f"margin_{c.value}"] = r.verdict.margin(c)
        rows.append(row)
    return rows


def cmd_sweep(args) -> int:
    spec = _spec(args)
    grid = GridSpec.parse(args.t)
    rows = sweep_rows(spec, grid.values() / args.coupling, args.coupling)
    cfg = _config(args, grid=args.t)
    emit(render(rows, SWEEP_COLUMNS, args.format, cfg, args.seed), args.output)
    if args.plot_script:
        write_plot_script(args.plot_script, args.output, "sweep")
    return EXIT_OK


def threshold_rows(spec: ChainSpec, xtol: float, coupling: float = 1.0) -> list[dict]:
    dec = thermo.solve(spec, vectors=False)
    rows = []
    for c in CLASSES:
        try:
            r = thresholds.threshold_temperature(spec, c, dec, xtol=xtol)
        except thresholds.NoThresholdError:
            rows.append({"class": c.value, "T": "none", "T_lo": "none", "T_hi": "none",
                         "residual": "none",
                         "bound": thresholds.bound_value(spec.model, c, spec.n_sites) * coupling})
            continue
        rows.append({"class": c.value, "T": r.temperature * coupling,
                     "T_lo": r.bracket[0] * coupling, "T_hi": r.bracket[1] * coupling,
                     "residual": r.residual * coupling, "bound": r.bound * coupling})
    return rows


def limit_rows(xtol: float, coupling: float = 1.0) -> list[dict]:
    rows = []
    for c in CLASSES:
        r = thresholds.xy_limit_threshold_result(c, xtol=xtol)
        rows.append({"class": c.value, "T": r.temperature * coupling,
                     "T_lo": r.bracket[0] * coupling, "T_hi": r.bracket[1] * coupling,
                     "residual": r.residual * coupling, "bound": r.bound * coupling})
    return rows


def cmd_thresholds(args) -> int:
    xtol = args.tol if args.tol is not None else thresholds.T_TOL
    if args.limit:
        if Model(args.model) is not Model.XY:
            raise UsageError("--limit is only available for the XY model")
        rows = limit_rows(xtol, args.coupling)
    else:
        rows = threshold_rows(_spec(args), xtol, args.coupling)
    cfg = _config(args, limit=args.limit, tol=xtol)
    emit(render(rows, THRESHOLD_COLUMNS, args.format, cfg, args.seed), args.output)
    if args.plot_script:
        write_plot_script(args.plot_script, args.output, "thresholds")
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.energy is None:
        raise UsageError("--energy is required")
    spec = _spec(args)
    verdict = classify(args.energy / args.coupling, spec)
    row = {"energy": args.energy}
    for c in CLASSES:
        row[f"fired_{c.value}"] = verdict.fired(c)
        row[f"margin_{c.value}"] = verdict.margin(c)
    cols = ["energy"] + SWEEP_COLUMNS[3:]
    emit(render([row], cols, args.format, _config(args, energy=args.energy), args.seed),
         args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = oracle.quick_config() if args.quick else oracle.DEFAULT_CONFIG
    table = oracle.faulty_table() if args.inject_fault else None
    cdir = args.counterexample_dir or os.environ.get(OUTPUT_DIR_ENV) or "counterexamples"
    report = oracle.verify_all(args.seed if args.seed is not None else 0, cfg, table, cdir)
    print(report.summary())
    for c in report.failures():
        if c.counterexample:
            print(f"counterexample: {c.counterexample}")
    return EXIT_OK if report.passed else EXIT_FAIL


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=[m.value for m in Model], default="heisenberg")
    common.add_argument("-n", "--n-sites", type=int, dest="n_sites")
    common.add_argument("--coupling", type=float, default=1.0,
                        help="J used to rescale reported energies and temperatures")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("-o", "--output", help=f"output file (relative to ${OUTPUT_DIR_ENV} if set)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--tol", type=float, default=None, help="bisection tolerance in T")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="chainent", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", parents=[common], help="summarize a ring Hamiltonian")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sweep", parents=[common], help="U(T) and verdicts on a grid")
    p.add_argument("--t", default="0.1:4:40", metavar="START:STOP:COUNT[:log]")
    p.add_argument("--plot-script", help="also write a matplotlib script for the table")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("thresholds", parents=[common], help="threshold temperatures")
    p.add_argument("--limit", action="store_true", help="XY thermodynamic limit")
    p.add_argument("--plot-script", help="also write a matplotlib script for the table")
    p.set_defaults(func=cmd_thresholds)

    p = sub.add_parser("classify", parents=[common], help="verdict for a given energy")
    p.add_argument("--energy", type=float)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", parents=[common], help="run every oracle check")
    p.add_argument("--quick", action="store_true", help="reduced sample counts")
    p.add_argument("--inject-fault", action="store_true",
                   help="tighten the Heisenberg C3 coefficient to -1.6 (must fail)")
    p.add_argument("--counterexample-dir")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.coupling <= 0:
        parser.error("--coupling must be positive")
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"chainent: {exc}", file=sys.stderr)
        return EXIT_CEILING
    except (UsageError, ChainSpecError) as exc:
        print(f"chainent: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
