"""Command-line front end.

Subcommands: report, spectrum, sweep-lambda-i, sweep-moduli, threshold,
gap-scan, oracle-check, fig.  Chain parameters come from flags or a JSON
config file (flags win); MODCHAIN_OUTDIR sets the default output directory.
Exit codes: 0 success, 1 solver failure, 2 argument validation failure,
3 oracle-check mismatch.  Failures print one machine-readable JSON line on
stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from ._version import __version__
from .chain import ChainSpec, CouplingVector, resolve_couplings, validate_mirror_symmetry
from .entanglement import report
from .fermion import solve
from .oracle import run_equivalence_grid
from .output import dumps_canonical, rows_to_csv
from .recipes import RECIPES
from .sweep import (GAP_SCAN_COLUMNS, THRESHOLD_BRACKET_WIDTH,
                    THRESHOLD_CONCURRENCE_TOL, THRESHOLD_SCAN_MAX, THRESHOLD_SCAN_STEP,
                    find_threshold, gap_scan, sweep_lambda_i, sweep_moduli)

EXIT_OK = 0
EXIT_SOLVER = 1
EXIT_USAGE = 2
EXIT_ORACLE = 3

REPORT_CSV_COLUMNS = ["N", "n", "lam", "lam_i", "n_t", "C_end", "one_tangle",
                      "tau_res", "sqrt_tau_res", "gap", "ground_state_energy",
                      "degenerate"]


class UsageError(ValueError):
    pass


def _chain_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--moduli", type=int, default=None, help="number of moduli N")
    p.add_argument("--sites", type=int, default=None, help="sites per modulus n")
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="end-bond coupling (units of J)")
    p.add_argument("--lambda-i", dest="lam_i", type=float, default=None,
                   help="inter-modulus coupling (units of J)")
    p.add_argument("--couplings", type=str, default=None,
                   help="explicit comma-separated bond list (alternative to the pattern flags)")


def _common_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=str, default=None, help="JSON config mirroring the flags")
    p.add_argument("--output", "-o", type=str, default=None,
                   help="output file (default: stdout; relative paths join MODCHAIN_OUTDIR)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--jobs", type=int, default=1, help="concurrent grid evaluations")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="modchain",
                                 description="Ground-state entanglement of modular XX chains")
    ap.add_argument("--version", action="version", version=f"modchain {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="full entanglement report of one chain")
    _chain_flags(p)
    _common_flags(p)

    p = sub.add_parser("spectrum", help="single-particle energies as CSV")
    _chain_flags(p)
    _common_flags(p)

    p = sub.add_parser("sweep-lambda-i", help="scan the inter-modulus coupling")
    _chain_flags(p)
    _common_flags(p)
    p.set_defaults(format="csv")
    p.add_argument("--grid-start", type=float, default=0.0)
    p.add_argument("--grid-stop", type=float, default=2.0)
    p.add_argument("--grid-step", type=float, default=0.01)

    p = sub.add_parser("sweep-moduli", help="scan the number of moduli")
    _chain_flags(p)
    _common_flags(p)
    p.set_defaults(format="csv")
    p.add_argument("--max-moduli", type=int, default=20)

    p = sub.add_parser("threshold", help="onset coupling of end-to-end entanglement")
    _chain_flags(p)
    _common_flags(p)
    p.add_argument("--tol", type=float, default=THRESHOLD_CONCURRENCE_TOL,
                   help="concurrence detection tolerance")
    p.add_argument("--scan-step", type=float, default=THRESHOLD_SCAN_STEP)
    p.add_argument("--scan-max", type=float, default=THRESHOLD_SCAN_MAX)
    p.add_argument("--bracket", type=float, default=THRESHOLD_BRACKET_WIDTH)

    p = sub.add_parser("gap-scan", help="energy gap vs number of moduli")
    _chain_flags(p)
    _common_flags(p)
    p.set_defaults(format="csv")
    p.add_argument("--max-moduli", type=int, default=20)

    p = sub.add_parser("oracle-check", help="free-fermion vs dense-ED equivalence table")
    _common_flags(p)
    p.add_argument("--max-sites", type=int, default=12)

    p = sub.add_parser("fig", help="emit a named benchmark dataset as CSV")
    p.add_argument("name", choices=sorted(RECIPES))
    _common_flags(p)
    return ap


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return cfg


_CONFIG_KEYS = ("moduli", "sites", "lam", "lam_i", "couplings", "format", "jobs",
                "grid_start", "grid_stop", "grid_step", "max_moduli",
                "tol", "scan_step", "scan_max", "bracket", "max_sites", "output")


def _merge_config(args: argparse.Namespace, cfg: dict) -> None:
    # flags win: only fill attributes the command line left at None
    for key, value in cfg.items():
        k = key.replace("-", "_")
        if k == "lambda":
            k = "lam"
        elif k == "lambda_i":
            k = "lam_i"
        if k not in _CONFIG_KEYS:
            raise UsageError(f"unknown config key: {key}")
        if getattr(args, k, None) is None and hasattr(args, k):
            setattr(args, k, value)


def _spec_from_args(args: argparse.Namespace, need_moduli: bool = True) -> ChainSpec:
    if args.couplings is not None:
        if any(v is not None for v in (args.moduli, args.sites, args.lam, args.lam_i)):
            raise UsageError("--couplings excludes --moduli/--sites/--lambda/--lambda-i")
        try:
            values = [float(x) for x in str(args.couplings).split(",") if x.strip() != ""]
        except ValueError as exc:
            raise UsageError(f"bad --couplings list: {exc}") from None
        return ChainSpec(explicit_couplings=CouplingVector(np.array(values)))
    if args.sites is None or args.lam is None or (need_moduli and args.moduli is None):
        raise UsageError("need --moduli, --sites and --lambda (or --couplings)")
    return ChainSpec(moduli_count=args.moduli, sites_per_modulus=args.sites,
                     end_bond=args.lam, inter_modulus=args.lam_i)


def _write_output(text: str, args: argparse.Namespace) -> None:
    path = getattr(args, "output", None)
    if path is None:
        sys.stdout.write(text)
        return
    outdir = os.environ.get("MODCHAIN_OUTDIR")
    if outdir and not os.path.isabs(path):
        path = os.path.join(outdir, path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _warn_if_asymmetric(spec: ChainSpec) -> None:
    ok, msg = validate_mirror_symmetry(resolve_couplings(spec))
    if not ok:
        print(f"warning: {msg}", file=sys.stderr)


def _report_csv(rep) -> str:
    chain = rep.chain
    row = {
        "N": chain.get("moduli_count"),
        "n": chain.get("sites_per_modulus"),
        "lam": chain.get("end_bond"),
        "lam_i": chain.get("inter_modulus"),
        "n_t": rep.total_sites,
        "C_end": rep.end_to_end_concurrence,
        "one_tangle": rep.one_tangle,
        "tau_res": rep.residual_tangle,
        "sqrt_tau_res": rep.sqrt_residual_tangle,
        "gap": rep.gap,
        "ground_state_energy": rep.ground_state_energy,
        "degenerate": rep.degenerate,
    }
    prov = {"tool": "modchain", "code_version": __version__, "chain": chain}
    return rows_to_csv(REPORT_CSV_COLUMNS, [row], prov)


def _run(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "report":
        spec = _spec_from_args(args)
        _warn_if_asymmetric(spec)
        rep = report(spec)
        _write_output(dumps_canonical(rep.to_dict()) if args.format == "json"
                      else _report_csv(rep), args)
        return EXIT_OK

    if cmd == "spectrum":
        spec = _spec_from_args(args)
        _warn_if_asymmetric(spec)
        m = solve(resolve_couplings(spec))
        rows = [{"k": k + 1, "energy": float(e)} for k, e in enumerate(m.energies)]
        prov = {"tool": "modchain", "code_version": __version__, "chain": spec.describe(),
                "zero_mode_count": m.zero_mode_count, "min_abs_energy": m.min_abs_energy}
        _write_output(rows_to_csv(["k", "energy"], rows, prov), args)
        return EXIT_OK

    if cmd == "sweep-lambda-i":
        spec = _spec_from_args(args)
        if args.grid_step <= 0 or args.grid_stop < args.grid_start:
            raise UsageError("bad grid definition")
        npts = int(round((args.grid_stop - args.grid_start) / args.grid_step))
        grid = [round(args.grid_start + k * args.grid_step, 12) for k in range(npts + 1)]
        table = sweep_lambda_i(spec, grid, jobs=args.jobs)
        _write_output(table.to_csv() if args.format == "csv" else table.to_json(), args)
        return EXIT_OK

    if cmd == "sweep-moduli":
        spec = _spec_from_args(args, need_moduli=False)
        table = sweep_moduli(spec, args.max_moduli, jobs=args.jobs)
        _write_output(table.to_csv() if args.format == "csv" else table.to_json(), args)
        return EXIT_OK

    if cmd == "threshold":
        spec = _spec_from_args(args)
        res = find_threshold(spec, concurrence_tol=args.tol, scan_step=args.scan_step,
                             scan_max=args.scan_max, bracket_width=args.bracket)
        _write_output(dumps_canonical(res.to_dict()), args)
        return EXIT_OK

    if cmd == "gap-scan":
        spec = _spec_from_args(args, need_moduli=False)
        table = gap_scan(spec, args.max_moduli, jobs=args.jobs)
        _write_output(rows_to_csv(GAP_SCAN_COLUMNS, table.rows, table.provenance)
                      if args.format == "csv" else table.to_json(), args)
        return EXIT_OK

    if cmd == "oracle-check":
        results = run_equivalence_grid(max_sites=args.max_sites)
        all_ok = all(r["pass"] for r in results)
        lines = []
        header = (f"{'N':>3} {'n':>3} {'lam':>5} {'lam_i':>6} {'n_t':>4} {'deg':>4} "
                  f"{'dE0':>10} {'dgap':>10} {'dRDM':>10} {'dC':>10} {'dtau':>10}  result")
        lines.append(header)
        for r in results:
            lines.append(
                f"{r['moduli_count']:>3} {r['sites_per_modulus']:>3} {r['end_bond']:>5} "
                f"{'-' if r['inter_modulus'] is None else r['inter_modulus']:>6} "
                f"{r['total_sites']:>4} {'yes' if r['degenerate'] else 'no':>4} "
                f"{r['delta_energy']:>10.2e} {r['delta_gap']:>10.2e} {r['delta_rdm']:>10.2e} "
                f"{r['delta_concurrence']:>10.2e} {r['delta_residual_tangle']:>10.2e}  "
                f"{'PASS' if r['pass'] else 'FAIL'}")
        lines.append(f"{'ALL PASS' if all_ok else 'MISMATCH'}: "
                     f"{sum(r['pass'] for r in results)}/{len(results)} chains")
        _write_output("\n".join(lines) + "\n", args)
        return EXIT_OK if all_ok else EXIT_ORACLE

    if cmd == "fig":
        _write_output(RECIPES[args.name](jobs=args.jobs), args)
        return EXIT_OK

    raise UsageError(f"unknown command {cmd}")


def _fail(code: int, message: str) -> int:
    print(json.dumps({"error": message, "exit_code": code}), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _load_config(getattr(args, "config", None))
        _merge_config(args, cfg)
        return _run(args)
    except UsageError as exc:
        return _fail(EXIT_USAGE, str(exc))
    except (ValueError, OSError) as exc:
        return _fail(EXIT_USAGE if isinstance(exc, ValueError) else EXIT_SOLVER, str(exc))
    except Exception as exc:  # solver/internal failure
        return _fail(EXIT_SOLVER, f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
