"""Command-line front end: ``rabi-gvm {ground,sweep,figure,check}``.

Parameters are read in units of omega unless ``--absolute`` is given, and
energies are reported in the same units.
"""

import argparse
import json
import os
import sys
from dataclasses import replace

from . import gvm, harness
from .checks import run_checks
from .exact import ground_state, mean_photon_exact, mean_sigma_x_exact
from .grwa import grwa_energy, grwa_mean_photon
from .model import ModelParams, TruncationConfig, default_nmax

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNCONVERGED = 2

METHOD_CHOICES = ("exact", "gvm", "gvm-closed", "grwa", "all")


def _text(value):
    return f"{value + 0.0:.10g}"


def _add_common(parser):
    parser.add_argument("--omega", type=float, default=1.0, help="photon frequency (default 1)")
    parser.add_argument("--nmax", type=int, default=None, help="Fock cutoff (default $RABI_GVM_NMAX or 60)")
    parser.add_argument("--tol", type=float, default=1e-12, help="root and eigensolver tolerance")
    parser.add_argument("--absolute", action="store_true", help="read and print raw units instead of units of omega")
    parser.add_argument("--format", choices=("text", "csv", "json"), default="text")
    parser.add_argument("--out", default=None, help="output path (figure: directory)")


def build_parser():
    parser = argparse.ArgumentParser(prog="rabi-gvm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground", help="ground state at one parameter point")
    _add_common(p)
    p.add_argument("--Omega", type=float, default=0.0, help="atomic splitting")
    p.add_argument("--g", type=float, default=0.0, help="coupling strength")
    p.add_argument("--method", choices=METHOD_CHOICES, default="all")

    p = sub.add_parser("sweep", help="one-dimensional parameter sweep")
    _add_common(p)
    p.add_argument("--axis", choices=harness.AXES, required=True)
    p.add_argument("--start", type=float, default=0.0)
    p.add_argument("--stop", type=float, required=True)
    p.add_argument("--count", type=int, default=41)
    p.add_argument("--fixed", type=float, required=True, help="value of the other parameter")
    p.add_argument("--methods", nargs="+", choices=harness.METHODS, default=list(harness.METHODS))
    p.add_argument("--observable", choices=harness.OBSERVABLES, default="energy")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("figure", help="reproduce one figure's data as figure_<id>.<ext>")
    _add_common(p)
    p.add_argument("--id", dest="fig_id", required=True, choices=sorted(harness.FIGURES))
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("check", help="run the invariant self-check suite")
    _add_common(p)
    p.add_argument("--Omega", type=float, default=None, help="restrict checks to this Omega")
    p.add_argument("--g", type=float, default=None, help="restrict checks to this g")
    return parser


def _cutoff(args):
    n = args.nmax if args.nmax is not None else default_nmax()
    return TruncationConfig(n_max=n, eig_tol=args.tol)


def _params(args):
    w = args.omega
    if args.absolute:
        return ModelParams(w, args.Omega, args.g)
    return ModelParams(w, args.Omega * w, args.g * w)


def cmd_ground(args, out):
    params = _params(args)
    cutoff = _cutoff(args)
    unit = 1.0 if args.absolute else params.omega
    methods = ("exact", "gvm", "gvm-closed", "grwa") if args.method == "all" else (args.method,)

    report = {"omega": params.omega, "Omega": params.Omega, "g": params.g, "units": "absolute" if args.absolute else "omega"}
    status = EXIT_OK
    if "exact" in methods:
        res = ground_state(params, cutoff)
        report["exact"] = {
            "energy": res.ground_energy / unit,
            "mean_photon": mean_photon_exact(res),
            "mean_sigma_x": mean_sigma_x_exact(res),
            "n_max_used": res.n_max_used,
            "converged": res.converged,
            "energy_delta": res.energy_delta / unit,
        }
        if not res.converged:
            status = EXIT_UNCONVERGED
    if "gvm" in methods:
        sol = gvm.solve(params, tol=args.tol)
        report["gvm"] = {
            "energy": sol.energy / unit,
            "mean_photon": sol.mean_photon,
            "lambda": sol.lam,
            "F_lambda": sol.f_lambda / unit,
            "E0_unperturbed": sol.e0_unperturbed / unit,
            "E0_second": sol.e0_second / unit,
            "series_terms_used": sol.series_terms_used,
        }
    if "gvm-closed" in methods:
        report["gvm-closed"] = {
            "energy": gvm.energy_closed_form(params) / unit,
            "mean_photon": gvm.mean_photon_closed(params),
            "lambda": gvm.lambda_closed_form(params),
        }
    if "grwa" in methods:
        report["grwa"] = {"energy": grwa_energy(params) / unit, "mean_photon": grwa_mean_photon(params)}

    if args.format == "json":
        text = json.dumps(report, indent=1) + "\n"
    elif args.format == "csv":
        lines = ["method,energy,mean_photon"]
        for m in methods:
            lines.append(f"{m},{report[m]['energy']:.12g},{report[m]['mean_photon']:.12g}")
        text = "\n".join(lines) + "\n"
    else:
        suffix = "" if args.absolute else " omega"
        lines = [f"omega={_text(params.omega)} Omega={_text(params.Omega)} g={_text(params.g)}"]
        for m in methods:
            entry = report[m]
            lines.append(f"{m:<11} E0 = {_text(entry['energy'])}{suffix}   <a^dag a> = {_text(entry['mean_photon'])}")
            for key, val in entry.items():
                if key in ("energy", "mean_photon"):
                    continue
                shown = _text(val) if isinstance(val, float) else str(val)
                lines.append(f"    {key} = {shown}")
        text = "\n".join(lines) + "\n"
    _write(text, args.out, out)
    return status


def _write(text, path, out):
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        out.write(text)


def cmd_sweep(args, out):
    w = args.omega
    scale = 1.0 / w if args.absolute else 1.0
    spec = harness.SweepSpec(
        axis=args.axis,
        start=args.start * scale,
        stop=args.stop * scale,
        count=args.count,
        fixed=args.fixed * scale,
        methods=tuple(args.methods),
        observable=args.observable,
        omega=w,
    )
    rows = harness.run_sweep(spec, _cutoff(args), workers=args.workers)
    harness.emit(rows, "json" if args.format == "json" else "csv", args.out or out)
    return EXIT_OK if all(r.converged is not False for r in rows) else EXIT_UNCONVERGED


def cmd_figure(args, out):
    spec = replace(harness.figure_preset(args.fig_id), omega=args.omega)
    rows = harness.run_sweep(spec, _cutoff(args), workers=args.workers)
    ext = "json" if args.format == "json" else "csv"
    directory = args.out or "."
    os.makedirs(directory, exist_ok=True)
    path = os.path.join(directory, f"figure_{args.fig_id}.{ext}")
    harness.emit(rows, ext, path)
    summary = harness.summarize(rows)
    out.write(f"wrote {path} ({len(rows)} rows)\n")
    for key, val in summary.items():
        if val is not None:
            out.write(f"max |{key}| = {_text(val)}\n")
    return EXIT_OK if all(r.converged is not False for r in rows) else EXIT_UNCONVERGED


def cmd_check(args, out):
    Omega, g = args.Omega, args.g
    if args.absolute:
        Omega = None if Omega is None else Omega / args.omega
        g = None if g is None else g / args.omega
    results = run_checks(n_max=args.nmax, Omega=Omega, g=g)
    width = max(len(r.name) for r in results)
    for r in results:
        out.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}\n")
    failed = sum(not r.passed for r in results)
    out.write(f"{len(results) - failed}/{len(results)} invariants passed\n")
    return EXIT_OK if failed == 0 else EXIT_INVALID


COMMANDS = {"ground": cmd_ground, "sweep": cmd_sweep, "figure": cmd_figure, "check": cmd_check}


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on bad usage; 2 is reserved for non-convergence
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except ValueError as exc:
        sys.stderr.write(f"rabi-gvm: error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
