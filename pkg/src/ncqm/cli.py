"""Command-line interface.

Usage:
    ncqm table1 --omega 32/729
    ncqm table2 --format json
    ncqm fig fig2 --resolution 200 -o fig2.csv
    ncqm solve --potential yukawa --coupling 0.6 --screening 2
    ncqm solve --potential coulomb --Z 120
    ncqm calibrate --ratio 0 --ratio 0.25
    ncqm nbody-check --n 3 --seed 7
    ncqm selftest

Exit status: 0 on success, 1 on usage errors, 2 when a computation fails
(a missing bound state is still reported in the output payload).
"""

from __future__ import annotations

import math
import sys
from fractions import Fraction

import click
import numpy as np

from .algebra import angular_coefficients, check_commutators, NoncommParams
from .constants import DEFAULT_CONSTANTS, ParticlePair, load_constants
from .errors import NCQMError, NoBoundState
from .manybody import NBodySystem, check_nbody_commutators, transform_and_check_decoupling
from .radial import Potential
from .report import (
    OMEGA_DEFAULT,
    figure_data,
    ingest_experimental,
    rows_to_csv,
    rows_to_json,
    table1,
    table2,
    table_columns,
    table_values,
)
from .selfconsistent import calibrate_omega, solve_self_consistent

EXIT_OK, EXIT_USAGE, EXIT_COMPUTE = 0, 1, 2


class FractionParam(click.ParamType):
    """Accepts ``32/729``, ``0.25`` or ``1e-3`` and keeps it exact."""

    name = "fraction"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value).strip())
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a number or fraction", param, ctx)


class MassParam(click.ParamType):
    """A particle name (electron, proton, ...), a mass in eV, or ``inf``."""

    name = "mass"

    def convert(self, value, param, ctx):
        if isinstance(value, float):
            return value
        text = str(value).strip().lower()
        if text in DEFAULT_CONSTANTS.masses:
            return text
        try:
            mass = float(text)
        except ValueError:
            self.fail(f"{value!r} is neither a particle name nor a mass in eV", param, ctx)
        if not mass > 0:
            self.fail("mass must be positive", param, ctx)
        return mass


FRACTION = FractionParam()
MASS = MassParam()


def _emit(columns, rows, fmt, out, meta=None):
    text = rows_to_json(columns, rows, meta) + "\n" if fmt == "json" else rows_to_csv(columns, rows)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _constants(ctx):
    return ctx.obj["constants"]


format_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
out_option = click.option("--out", "-o", type=click.Path(dir_okay=False, writable=True), default=None)


@click.group()
@click.option("--config", type=click.Path(exists=True, dir_okay=False), default=None,
              help="INI file overriding physical constants.")
@click.pass_context
def cli(ctx, config):
    """Hydrogen-like bound states with noncommuting particle coordinates."""
    ctx.ensure_object(dict)
    ctx.obj["constants"] = load_constants(config) if config else DEFAULT_CONSTANTS


def _table_command(name, builder, help_text):
    @cli.command(name, help=help_text)
    @click.option("--omega", type=FRACTION, default=str(OMEGA_DEFAULT), show_default=True)
    @click.option("--data", type=click.Path(exists=True, dir_okay=False), default=None,
                  help="Experimental dataset (defaults to the bundled one).")
    @format_option
    @out_option
    @click.pass_context
    def command(ctx, omega, data, fmt, out):
        rows = builder(omega, _constants(ctx), ingest_experimental(data))
        _emit(table_columns(rows), table_values(rows), fmt, out, {"omega": str(omega)})
        return EXIT_OK

    return command


_table_command("table1", table1, "Ground-state energies against experiment (eV).")
_table_command("table2", table2, "1s-2s gaps against experiment (eV).")


@cli.command("fig")
@click.argument("which", type=click.Choice(["fig1", "fig2", "fig3", "fig4"]))
@click.option("--resolution", type=click.IntRange(min=16), default=200, show_default=True)
@click.option("--omega", type=FRACTION, default=str(OMEGA_DEFAULT), show_default=True)
@format_option
@out_option
@click.pass_context
def fig(ctx, which, resolution, omega, fmt, out):
    """Data behind the figures as plain columns."""
    fd = figure_data(which, resolution, omega, _constants(ctx))
    _emit(fd.columns, fd.rows(), fmt, out, {"figure": which, "notes": fd.notes})
    return EXIT_OK


def _pair(m1, m2, constants):
    masses = [constants.mass(m) if isinstance(m, str) else m for m in (m1, m2)]
    return ParticlePair(*masses)


@cli.command("solve")
@click.option("--potential", type=click.Choice(["coulomb", "yukawa", "hulthen"]), default="coulomb", show_default=True)
@click.option("--coupling", type=float, default=None, help="Dimensionless coupling g (alpha Z for Coulomb).")
@click.option("--Z", "Z", type=float, default=None, help="Nuclear charge; sets g = alpha Z.")
@click.option("--screening", type=float, default=None, help="Screening length in hbar/(mu c).")
@click.option("--m1", type=MASS, default="electron", show_default=True)
@click.option("--m2", type=MASS, default="inf", show_default=True)
@click.option("--omega", type=FRACTION, default=None, help="Defaults to the value calibrated for mu/M.")
@format_option
@out_option
@click.pass_context
def solve(ctx, potential, coupling, Z, screening, m1, m2, omega, fmt, out):
    """Self-consistent ground state for a central potential."""
    constants = _constants(ctx)
    if (coupling is None) == (Z is None):
        raise click.UsageError("give exactly one of --coupling and --Z")
    g = coupling if coupling is not None else constants.alpha * Z
    if potential != "coulomb" and screening is None:
        raise click.UsageError(f"--screening is required for {potential}")
    pair = _pair(m1, m2, constants)
    if omega is None:
        omega = OMEGA_DEFAULT if pair.ratio == 0 else calibrate_omega(pair.ratio).omega
    pot = Potential(potential, g, screening if potential != "coulomb" else None)
    delta = math.sqrt(1.0 - 2.0 * pair.ratio)
    columns = ["status", "potential", "coupling", "screening", "mu_over_M", "omega", "energy_eV",
               "energy_over_mu_c2", "beta", "eps12", "eps21", "xi", "mean_r", "delta12", "iterations",
               "residual", "message"]
    base = [potential, g, screening if screening is not None else math.nan, pair.ratio, float(omega)]
    try:
        res = solve_self_consistent(pot, pair, omega)
    except NoBoundState as exc:
        nan = math.nan
        row = ["no_bound_state", *base, nan, nan, nan, nan, nan, nan, nan, delta,
               exc.details.get("iterations", 0), nan, str(exc)]
        _emit(columns, [row], fmt, out)
        return EXIT_COMPUTE
    p = res.params
    row = ["ok", *base, res.energy, res.solution.energy_reduced, p.beta, p.eps12, p.eps21, p.xi,
           res.solution.mean_r, delta, res.iterations, res.residual, ""]
    _emit(columns, [row], fmt, out)
    return EXIT_OK


@cli.command("calibrate")
@click.option("--ratio", type=float, multiple=True, default=(0.0,), show_default=True, help="mu/M in [0, 1/4].")
@format_option
@out_option
def calibrate(ratio, fmt, out):
    """Omega for which the critical mean distance equals the resolution limit."""
    columns = ["mu_over_M", "omega", "critical_alphaZ", "eta_critical", "beta_critical",
               "min_mean_distance", "delta12"]
    rows = []
    for r in ratio:
        c = calibrate_omega(r)
        rows.append([c.ratio, c.omega, c.critical_alphaZ, c.eta_critical, c.beta_critical,
                     c.min_mean_distance, c.delta12])
    _emit(columns, rows, fmt, out)
    return EXIT_OK


@cli.command("nbody-check")
@click.option("--n", "sizes", type=click.IntRange(2, 3), multiple=True, default=(2, 3), show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--draws", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@format_option
@out_option
def nbody_check(sizes, seed, draws, tol, fmt, out):
    """Random-draw check that the free-motion coordinate decouples."""
    rng = np.random.default_rng(seed)
    rows = []
    failed = False
    for n in sizes:
        worst = worst_cm = 0.0
        for _ in range(draws):
            eps = rng.uniform(0.0, 0.2, (n, n))
            np.fill_diagonal(eps, 0.0)
            system = NBodySystem(tuple(rng.uniform(0.1, 10.0, n)), eps)
            rep = transform_and_check_decoupling(system)
            worst = max(worst, rep.residual)
            worst_cm = max(worst_cm, abs(rep.cm_coefficient * system.total_mass - 1.0))
        ok = worst < tol and worst_cm < tol
        failed |= not ok
        rows.append([n, draws, worst, worst_cm, "pass" if ok else "fail"])
    _emit(["N", "draws", "max_cross_residual", "max_cm_deviation", "status"], rows, fmt, out)
    return EXIT_COMPUTE if failed else EXIT_OK


@cli.command("selftest")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--draws", type=click.IntRange(min=1), default=100, show_default=True)
@format_option
@out_option
def selftest(seed, draws, fmt, out):
    """Commutator and reconstruction identities on random parameters."""
    rng = np.random.default_rng(seed)
    worst = {"two_body_commutators": 0.0, "angular_reconstruction": 0.0, "three_body_commutators": 0.0}
    for _ in range(draws):
        params = NoncommParams.from_eps(*rng.uniform(0.0, 0.45, 2))
        rep = check_commutators(params, degree=3)
        worst["two_body_commutators"] = max(worst["two_body_commutators"], rep.max_residual)
        res = angular_coefficients(params).reconstruction_residuals(params)
        worst["angular_reconstruction"] = max(worst["angular_reconstruction"], float(np.max(np.abs(res))))
        eps = rng.uniform(0.0, 0.3, (3, 3))
        np.fill_diagonal(eps, 0.0)
        rep3 = check_nbody_commutators(NBodySystem((1.0, 1.0, 1.0), eps), degree=2)
        worst["three_body_commutators"] = max(worst["three_body_commutators"], rep3.max_residual)
    tol = {"two_body_commutators": 1e-12, "angular_reconstruction": 1e-14, "three_body_commutators": 1e-12}
    rows = [[k, v, tol[k], "pass" if v < tol[k] else "fail"] for k, v in worst.items()]
    _emit(["suite", "max_residual", "tolerance", "status"], rows, fmt, out)
    return EXIT_OK if all(r[-1] == "pass" for r in rows) else EXIT_COMPUTE


def main(args=None) -> int:
    """Entry point; maps click usage errors to 1 and computation errors to 2."""
    try:
        rv = cli.main(args=args, prog_name="ncqm", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except (click.UsageError, click.BadParameter) as exc:
        exc.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except NCQMError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_COMPUTE
    return rv if isinstance(rv, int) else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
