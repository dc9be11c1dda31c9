"""Experimental data, comparison tables and figure data."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .constants import DEFAULT_CONSTANTS, Constants
from .errors import DatasetError, DomainError
from .hydrogenic import (
    comparison_curves,
    energy_level,
    level_gap_1s2s,
    model_curve,
    schrodinger_level,
    solve_eta0,
)
from .selfconsistent import omega_approximation, omega_curve

QUANTITIES = ("ground_energy", "gap_1s_2s")
FIELDS = ("Z", "quantity", "value_eV", "source")
OMEGA_DEFAULT = Fraction(32, 729)


@dataclass(frozen=True)
class ExperimentalRecord:
    Z: int
    quantity: str
    value: float
    source: str = ""


def bundled_dataset_path():
    return resources.files("ncqm") / "data" / "experimental.csv"


def ingest_experimental(path=None) -> list[ExperimentalRecord]:
    """Read and validate a ``Z,quantity,value_eV,source`` file.

    The bundled dataset is used when ``path`` is None. Ground energies must
    be negative, gaps positive, and each (Z, quantity) may appear once.
    Errors carry the 1-based line number.
    """
    source = bundled_dataset_path() if path is None else Path(path)
    text = source.read_text(encoding="utf-8")
    if not text.strip():
        return []
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(h.strip() for h in header) != FIELDS:
        raise DatasetError(f"expected header {','.join(FIELDS)}", line=1)
    records = []
    seen = {}
    for row in reader:
        line = reader.line_num
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(FIELDS):
            raise DatasetError(f"expected {len(FIELDS)} fields, got {len(row)}", line=line)
        z_text, quantity, value_text, tag = (cell.strip() for cell in row)
        try:
            Z = int(z_text)
            value = float(value_text)
        except ValueError as exc:
            raise DatasetError(f"cannot parse row: {exc}", line=line) from None
        if Z <= 0:
            raise DatasetError(f"Z must be positive, got {Z}", line=line)
        if quantity not in QUANTITIES:
            raise DatasetError(f"unknown quantity {quantity!r}", line=line)
        if not math.isfinite(value):
            raise DatasetError("value must be finite", line=line)
        if quantity == "ground_energy" and value >= 0:
            raise DatasetError(f"ground energy must be negative, got {value}", line=line)
        if quantity == "gap_1s_2s" and value <= 0:
            raise DatasetError(f"gap must be positive, got {value}", line=line)
        key = (Z, quantity)
        if key in seen:
            raise DatasetError(f"duplicate {quantity} for Z={Z} (first on line {seen[key]})", line=line)
        seen[key] = line
        records.append(ExperimentalRecord(Z, quantity, value, tag))
    return records


@dataclass(frozen=True)
class Table1Row:
    Z: int
    E: float
    E_exp: float
    E_S: float
    E_S_minus_exp: float
    E_minus_exp: float


@dataclass(frozen=True)
class Table2Row:
    Z: int
    gap: float
    gap_exp: float
    gap_S: float
    exp_minus_gap_S: float
    exp_minus_gap: float


def _select(dataset, quantity):
    if dataset is None:
        dataset = ingest_experimental()
    return sorted((r for r in dataset if r.quantity == quantity), key=lambda r: r.Z)


def table1(omega=OMEGA_DEFAULT, constants: Constants = DEFAULT_CONSTANTS, dataset=None) -> list[Table1Row]:
    """Ground-state energies against experiment (differences theory - experiment)."""
    rows = []
    for rec in _select(dataset, "ground_energy"):
        E = energy_level(rec.Z, 1, omega=omega, constants=constants)
        E_S = schrodinger_level(rec.Z, 1, constants)
        rows.append(Table1Row(rec.Z, E, rec.value, E_S, E_S - rec.value, E - rec.value))
    return rows


def table2(omega=OMEGA_DEFAULT, constants: Constants = DEFAULT_CONSTANTS, dataset=None) -> list[Table2Row]:
    """1s-2s gaps against experiment (differences experiment - theory)."""
    rows = []
    for rec in _select(dataset, "gap_1s_2s"):
        gap = level_gap_1s2s(rec.Z, omega=omega, constants=constants)
        gap_S = schrodinger_level(rec.Z, 2, constants) - schrodinger_level(rec.Z, 1, constants)
        rows.append(Table2Row(rec.Z, gap, rec.value, gap_S, rec.value - gap_S, rec.value - gap))
    return rows


@dataclass
class FigureData:
    name: str
    columns: list
    data: np.ndarray
    notes: str = ""

    def rows(self):
        return [list(r) for r in self.data]


def _fig1(n, omega, constants):
    eta = np.linspace(0.0, 2.0, n)
    cols = ["eta", "eta_over_1_plus_eta_4"]
    data = [eta, eta / (1.0 + eta) ** 4]
    for az in (0.5, float(Fraction(27, 32)), 0.95):
        cols.append(f"cut_alphaZ_{az:g}")
        data.append(np.full(n, 4.0 * float(omega) * az**3))
    return cols, np.column_stack(data), "horizontal cuts are 4 omega (alpha Z)^3"


def _fig2(n, omega, constants):
    top = float(Fraction(27, 32))
    az = np.linspace(top / n, top, n)
    rows = [[a, model_curve(a, omega), *comparison_curves(a)] for a in az]
    cols = ["alphaZ", "model_over_mu_c2", "schrodinger_over_mu_c2", "dirac_over_mu_c2", "klein_gordon_over_mu_c2"]
    return cols, np.array(rows), "energies in units of mu c^2; NaN outside a curve's domain"


def _fig3(n, omega, constants):
    # log-spaced from hydrogen (Z = 1) up to the critical coupling
    top = float(Fraction(27, 32))
    az = np.geomspace(constants.alpha, top, n)
    az[-1] = top
    eta = np.array([solve_eta0(omega, a) for a in az])
    return ["alphaZ", "eps21"], np.column_stack([az, eta / (1.0 + eta)]), "alphaZ log-spaced from alpha"


def _fig4(n, omega, constants):
    curve = omega_curve(n)
    approx = np.array([omega_approximation(r) for r in curve[:, 0]])
    return ["mu_over_M", "omega", "omega_linear_approx"], np.column_stack([curve, approx]), ""


FIGURES = {"fig1": _fig1, "fig2": _fig2, "fig3": _fig3, "fig4": _fig4}


def figure_data(
    which: str, resolution: int = 200, omega=OMEGA_DEFAULT, constants: Constants = DEFAULT_CONSTANTS
) -> FigureData:
    if which not in FIGURES:
        raise DomainError(f"unknown figure {which!r}; choose from {sorted(FIGURES)}")
    if resolution < 16:
        raise DomainError("resolution must be at least 16")
    cols, data, notes = FIGURES[which](int(resolution), omega, constants)
    return FigureData(which, cols, data, notes)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def rows_to_csv(columns, rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return out.getvalue()


def rows_to_json(columns, rows, meta=None) -> str:
    def clean(v):
        if isinstance(v, (int, np.integer)):
            return int(v)
        if isinstance(v, str):
            return v
        v = float(v)
        return v if math.isfinite(v) else None

    payload = {"columns": list(columns), "rows": [[clean(v) for v in r] for r in rows]}
    if meta:
        payload["meta"] = meta
    return json.dumps(payload, indent=2, allow_nan=False)


def table_columns(rows) -> list:
    if not rows:
        return []
    return list(asdict(rows[0]).keys())


def table_values(rows) -> list:
    return [list(asdict(r).values()) for r in rows]
