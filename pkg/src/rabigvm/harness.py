"""Parameter sweeps comparing the exact, variational and GRWA solutions."""

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import gvm
from .exact import ground_state, mean_photon_exact
from .grwa import grwa_energy, grwa_mean_photon
from .model import ModelParams, TruncationConfig

METHODS = ("NS", "GVM_closed", "GVM_full", "GRWA")
AXES = ("Omega", "g")
OBSERVABLES = ("energy", "mean_photon")
MAX_RANGE = 3.0  # validity envelope, units of omega
SIG_DIGITS = 12


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional sweep. ``start``, ``stop`` and ``fixed`` are in units of omega."""

    axis: str
    start: float
    stop: float
    count: int
    fixed: float
    methods: tuple = METHODS
    observable: str = "energy"
    omega: float = 1.0

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        if self.observable not in OBSERVABLES:
            raise ValueError(f"observable must be one of {OBSERVABLES}, got {self.observable!r}")
        if self.count < 2:
            raise ValueError("a sweep needs at least 2 points")
        for value in (self.start, self.stop, self.fixed):
            if not 0.0 <= value <= MAX_RANGE:
                raise ValueError(
                    f"sweep values must lie in [0, {MAX_RANGE}] omega, got {value}"
                )
        methods = tuple(m for m in METHODS if m in self.methods)
        unknown = set(self.methods) - set(METHODS)
        if unknown or not methods:
            raise ValueError(f"methods must be a non-empty subset of {METHODS}")
        object.__setattr__(self, "methods", methods)

    def grid(self):
        return np.linspace(self.start, self.stop, self.count)

    def params_at(self, x):
        w = self.omega
        if self.axis == "Omega":
            return ModelParams(w, x * w, self.fixed * w)
        return ModelParams(w, self.fixed * w, x * w)

    def gvm_reference(self):
        """Method whose error is reported as ``err_gvm``."""
        for name in ("GVM_closed", "GVM_full"):
            if name in self.methods:
                return name
        return None


@dataclass
class ComparisonRow:
    x: float
    values: dict
    errors: dict = field(default_factory=dict)
    n_max_used: int | None = None
    converged: bool | None = None

    @property
    def err_gvm(self):
        return self.errors.get("err_gvm")

    @property
    def err_grwa(self):
        return self.errors.get("err_grwa")


FIGURES = {
    "1a": SweepSpec("Omega", 0.0, 2.0, 41, 0.2),
    "1b": SweepSpec("Omega", 0.0, 2.0, 41, 0.6),
    "2a": SweepSpec("g", 0.0, 0.8, 41, 1.0),
    "2b": SweepSpec("g", 0.0, 0.8, 41, 1.5),
    "3": SweepSpec("Omega", 0.0, 2.0, 41, 1.0, methods=("NS", "GVM_full", "GRWA")),
    "4": SweepSpec("Omega", 0.0, 2.0, 41, 0.6, observable="mean_photon"),
    "4-inset": SweepSpec("g", 0.0, 0.8, 41, 1.5, observable="mean_photon"),
}


def figure_preset(fig_id):
    """Sweep reproducing one figure: ``1a, 1b, 2a, 2b, 3, 4, 4-inset``."""
    try:
        return FIGURES[str(fig_id)]
    except KeyError:
        raise ValueError(f"unknown figure id {fig_id!r}; choose from {sorted(FIGURES)}") from None


def error_columns(spec):
    cols = []
    if "NS" not in spec.methods:
        return cols
    ref = spec.gvm_reference()
    if ref is not None:
        cols.append("err_gvm")
    if ref == "GVM_closed" and "GVM_full" in spec.methods:
        cols.append("err_gvm_full")
    if "GRWA" in spec.methods:
        cols.append("err_grwa")
    return cols


def evaluate_point(spec, x, cutoff):
    """All requested methods at one grid coordinate."""
    params = spec.params_at(x)
    w = spec.omega
    energy = spec.observable == "energy"
    values = {}
    n_used = converged = None
    if "NS" in spec.methods:
        result = ground_state(params, cutoff)
        values["NS"] = result.ground_energy / w if energy else mean_photon_exact(result)
        n_used, converged = result.n_max_used, result.converged
    if "GVM_closed" in spec.methods:
        values["GVM_closed"] = (
            gvm.energy_closed_form(params) / w if energy else gvm.mean_photon_closed(params)
        )
    if "GVM_full" in spec.methods:
        sol = gvm.solve(params)
        values["GVM_full"] = sol.energy / w if energy else sol.mean_photon
    if "GRWA" in spec.methods:
        values["GRWA"] = grwa_energy(params) / w if energy else grwa_mean_photon(params)

    errors = {}
    if "NS" in values:
        ref = spec.gvm_reference()
        if ref is not None:
            errors["err_gvm"] = abs(values[ref] - values["NS"])
        if ref == "GVM_closed" and "GVM_full" in values:
            errors["err_gvm_full"] = abs(values["GVM_full"] - values["NS"])
        if "GRWA" in values:
            errors["err_grwa"] = abs(values["GRWA"] - values["NS"])
    return ComparisonRow(float(x), values, errors, n_used, converged)


def _evaluate_args(args):
    return evaluate_point(*args)


def run_sweep(spec, cutoff=None, workers=1):
    """Evaluate a sweep; rows come back ordered by ``x``.

    Energies are reported in units of omega. Non-converged exact points
    are flagged in the row, never raised. ``workers > 1`` evaluates points
    in separate processes with identical results.
    """
    if cutoff is None:
        cutoff = TruncationConfig.from_env()
    jobs = [(spec, float(x), cutoff) for x in spec.grid()]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_args, jobs))
    else:
        rows = [evaluate_point(*job) for job in jobs]
    rows.sort(key=lambda r: r.x)
    return rows


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    return f"{value:.{SIG_DIGITS}g}"


def columns_for(rows):
    first = rows[0]
    methods = [m for m in METHODS if m in first.values]
    errors = [e for e in ("err_gvm", "err_gvm_full", "err_grwa") if e in first.errors]
    cols = ["x", *methods, *errors]
    if first.n_max_used is not None:
        cols += ["n_max_used", "converged"]
    return cols


def _record(row, cols):
    out = {}
    for c in cols:
        if c == "x":
            out[c] = row.x
        elif c in row.values:
            out[c] = row.values[c]
        elif c in row.errors:
            out[c] = row.errors[c]
        else:
            out[c] = getattr(row, c)
    return out


def _round(value):
    if isinstance(value, float) and math.isfinite(value):
        return float(f"{value:.{SIG_DIGITS}g}")
    return value


def emit(rows, fmt, destination):
    """Write rows as CSV or JSON to a path or an open text stream.

    CSV columns are ``x``, the methods, the error columns, then the exact
    solver's ``n_max_used`` and ``converged`` when present. Numbers carry 12
    significant digits in both formats.
    """
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to emit")
    cols = columns_for(rows)
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            rec = _record(row, cols)
            writer.writerow([_fmt(rec[c]) for c in cols])
        text = buf.getvalue()
    elif fmt == "json":
        records = [{c: _round(v) for c, v in _record(row, cols).items()} for row in rows]
        text = json.dumps(records, indent=1) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")

    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "w", newline="") as fh:
            fh.write(text)
    else:
        destination.write(text)


def _parse_cell(name, text):
    if text == "":
        return None
    if name == "converged":
        return text == "true"
    if name == "n_max_used":
        return int(text)
    return float(text)


def read_rows(source, fmt="csv"):
    """Parse an emitted file back into a list of plain dicts."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            text = fh.read()
    else:
        text = source.read()
    if fmt == "json":
        return json.loads(text)
    reader = csv.DictReader(io.StringIO(text))
    return [{k: _parse_cell(k, v) for k, v in rec.items()} for rec in reader]


def summarize(rows):
    """Largest ``err_gvm`` and ``err_grwa`` over a sweep (None if absent)."""
    out = {}
    for key in ("err_gvm", "err_grwa"):
        vals = [r.errors[key] for r in rows if key in r.errors]
        out[key] = max(vals) if vals else None
    return out
