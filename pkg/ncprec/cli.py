# -*- coding: utf-8 -*-
#
# This file is part of ncprec.
# Copyright (C) 2024 ncprec contributors.
#
# ncprec is free software; you can redistribute it and/or modify it
# under the terms of the MIT License; see LICENSE file for more details.

"""Click command-line interface of the benchmark harness.

Exit codes: 0 on success, 1 on usage or input errors and 2 on numerical
failures.
"""

import logging
import os

import click
from click_default_group import DefaultGroup

from . import config
from .bench import (
    ExperimentConfig,
    ScalingRecord,
    compute_scaling,
    degree_sweep,
    generate_matrix,
    run_solve,
    scaling_records,
    sweep_csv,
    table1,
    table1_csv,
    weak_scaling_check,
)
from .errors import NCPrecError, NumericalError
from .ext import NCPrec
from .linop import save_matrix_market
from .pcg import RHS_KINDS
from .serializer import (
    ScalingRowSchema,
    SolveRecordSchema,
    json_serializer,
    load_config,
)
from .spectrum import spectrum_csv, spectrum_reports

LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO}


class BenchGroup(DefaultGroup):
    """Command group mapping errors to the harness exit codes."""

    def make_context(self, *args, **kwargs):
        """Create the context, with usage errors exiting with 1."""
        try:
            return super(BenchGroup, self).make_context(*args, **kwargs)
        except click.UsageError as e:
            e.exit_code = 1
            raise

    def invoke(self, ctx):
        """Invoke the subcommand."""
        try:
            return super(BenchGroup, self).invoke(ctx)
        except click.UsageError as e:
            e.exit_code = 1
            raise
        except NumericalError as e:
            click.secho("Numerical failure: {0}".format(e), fg="red", err=True)
            ctx.exit(2)
        except NCPrecError as e:
            click.secho("Error: {0}".format(e), fg="red", err=True)
            ctx.exit(1)


def _write_or_echo(state, out, text):
    if out in (None, "-"):
        click.echo(text, nl=False)
    else:
        checksum = state.storage(out).save(text)
        click.secho("Wrote {0} ({1})".format(out, checksum), fg="green", err=True)


def _int_list(ctx, param, value):
    """Parse a comma separated list of integers."""
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise click.BadParameter("Expected integers separated by commas.")


def _points(count):
    """Parse repeated ``A:B[:C]`` numeric points."""

    def callback(ctx, param, value):
        points = []
        for item in value:
            parts = item.split(":")
            if len(parts) != count:
                raise click.BadParameter("Malformed point {0!r}.".format(item))
            try:
                ints = [int(p) for p in parts[:-1]]
                points.append(tuple(ints) + (float(parts[-1]),))
            except ValueError:
                raise click.BadParameter("Malformed point {0!r}.".format(item))
        return points

    return callback


def problem_options(f):
    """Options selecting a problem and its solver settings."""
    options = [
        click.option("--gen", "problem", help="Generator, e.g. lap2d:78."),
        click.option("--matrix", help="MatrixMarket file of a symmetric matrix."),
        click.option(
            "--eigs",
            type=click.Choice(["analytic", "power+dacg"]),
            help="Bound estimation (analytic for generators by default).",
        ),
        click.option("--tol", type=float, default=config.NC_TOL, show_default=True),
        click.option("--maxit", type=int, default=config.NC_MAXIT, show_default=True),
        click.option(
            "--seed", type=int, default=config.NC_EIGEN_SEED, show_default=True
        ),
        click.option(
            "--rhs",
            type=click.Choice(RHS_KINDS),
            default=config.NC_RHS,
            show_default=True,
            help="Exact solution behind the right-hand side.",
        ),
        click.option(
            "--threads",
            type=int,
            help="Threads of the CSR product (NC_THREADS by default).",
        ),
        click.option("--repetitions", type=int, help="Timed repetitions per solve."),
        click.option(
            "--form",
            type=click.Choice(["stencil", "assembled"]),
            default="stencil",
            show_default=True,
            help="Operator form of generated Laplacians.",
        ),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _experiment_config(state, problem, matrix, eigs, prec="none", **kwargs):
    threads = kwargs.pop("threads", None)
    repetitions = kwargs.pop("repetitions", None)
    if eigs is None:
        eigs = "analytic" if matrix is None else "power+dacg"
    return ExperimentConfig(
        problem=problem,
        matrix=matrix,
        prec=prec,
        eigs=eigs,
        threads=state.config["NC_THREADS"] if threads is None else threads,
        repetitions=repetitions or 1,
        **kwargs
    )


@click.group(cls=BenchGroup, default="solve")
@click.option("-v", "--verbose", count=True, help="Log INFO, or DEBUG with -vv.")
@click.pass_context
def cli(ctx, verbose):
    """Newton-Chebyshev preconditioned conjugate gradient benchmarks."""
    logging.basicConfig(
        level=LOG_LEVELS.get(verbose, logging.DEBUG),
        format="%(levelname)s %(name)s: %(message)s",
    )
    ctx.obj = NCPrec()


@cli.command()
@problem_options
@click.option("--prec", default="none", show_default=True, help="E.g. newton:nlev=5.")
@click.option("--config", "config_file", help="Rerun the config of a JSON report.")
@click.option("--out", help="Write the JSON report there ('-' for stdout).")
@click.pass_obj
def solve(state, config_file, out, **kwargs):
    """Run one preconditioned solve."""
    if config_file:
        if kwargs["problem"] or kwargs["matrix"]:
            raise click.UsageError("--config excludes --gen and --matrix.")
        cfg = load_config(state.storage(config_file).read_text())
        if kwargs["threads"] is not None:
            cfg.threads = kwargs["threads"]
        if kwargs["repetitions"] is not None:
            cfg.repetitions = kwargs["repetitions"]
    else:
        cfg = _experiment_config(state, out=out, **kwargs)
    record = run_solve(cfg, state)

    report = record.report
    rows = [
        ("problem", "{0} (n={1})".format(record.problem.name, record.problem.n)),
        ("preconditioner", "{0} (degree {1})".format(record.prec, record.degree)),
        (
            "bounds",
            "[{0.alpha0:.6g}, {0.beta0:.6g}] {0.method}".format(record.bounds),
        ),
        ("iterations", report.iters),
        ("ddot", report.ddot),
        ("matvec", report.matvec),
        ("rel_res", "{0:.3e}".format(report.rel_res)),
        ("true_rel_res", "{0:.3e}".format(report.true_rel_res)),
        ("error_inf", "{0:.3e}".format(record.error_inf)),
        ("setup_time", "{0:.3f} s".format(record.setup_time)),
        (
            "solve_time",
            "{0:.3f} s (mean {1:.3f} s)".format(record.time_min, record.time_mean),
        ),
    ]
    for key, value in rows:
        click.echo("{0:<16}{1}".format(key, value))
    if report.converged:
        click.secho("converged", fg="green")
    else:
        click.secho("not converged", fg="yellow")

    if out:
        _write_or_echo(state, out, json_serializer(record, SolveRecordSchema) + "\n")


@cli.command("table1")
@click.option("--nx", type=int, default=78, show_default=True)
@click.option(
    "--scale", type=float, default=config.NC_SCALE_DEMO, show_default=True
)
@click.option(
    "--form",
    type=click.Choice(["newton", "chebyshev"]),
    default="newton",
    show_default=True,
)
@click.option("--tol", type=float, default=config.NC_TOL, show_default=True)
@click.option("--maxit", type=int, default=config.NC_MAXIT, show_default=True)
@click.option(
    "--tol-fallback",
    is_flag=True,
    help="Add rows at 1e-6 and 1e-10 when counts leave the published band.",
)
@click.option(
    "--rhs",
    type=click.Choice(RHS_KINDS),
    default=config.NC_RHS,
    show_default=True,
    help="Exact solution behind the right-hand side.",
)
@click.option("--out", help="CSV file, stdout by default.")
@click.pass_obj
def table1_command(state, nx, scale, form, tol, maxit, tol_fallback, rhs, out):
    """Spectral analysis and iterations, original and scaled polynomials."""
    rows = table1(
        nx=nx,
        scale=scale,
        form=form,
        tol=tol,
        maxit=maxit,
        tol_fallback=tol_fallback,
        rhs=rhs,
    )
    _write_or_echo(state, out, table1_csv(rows))


@cli.command()
@problem_options
@click.option(
    "--nlev",
    "nlevs",
    default="0,1,2,3,4,5",
    show_default=True,
    callback=_int_list,
    help="Newton depths, degree 2**nlev - 1.",
)
@click.option(
    "--prec-form",
    type=click.Choice(["newton", "chebyshev"]),
    default="newton",
    show_default=True,
)
@click.option(
    "--scale", type=float, default=config.NC_SCALE_BENCH, show_default=True
)
@click.option("--out", help="CSV file, stdout by default.")
@click.pass_obj
def sweep(state, nlevs, prec_form, scale, out, **kwargs):
    """Solve one problem for increasing polynomial degrees."""
    cfg = _experiment_config(state, **kwargs)
    rows = degree_sweep(cfg, nlevs, form=prec_form, scale=scale, state=state)
    _write_or_echo(state, out, sweep_csv(rows))


@cli.command()
@click.option(
    "--point",
    "points",
    multiple=True,
    required=True,
    callback=_points(2),
    help="P:T, processors and wall time.",
)
@click.option("--baseline", callback=_points(2), multiple=True, help="N0:T_N0.")
@click.option("--json", "as_json", is_flag=True, help="Print JSON.")
@click.pass_obj
def scaling(state, points, baseline, as_json):
    """Compute pseudo speedup and efficiency from timings."""
    if len(baseline) > 1:
        raise click.UsageError("Give --baseline at most once.")
    if baseline:
        n0, T_n0 = baseline[0]
        records = [ScalingRecord(p, T, n0, T_n0) for p, T in points]
    else:
        records = scaling_records(points)
    rows = compute_scaling(records)
    if as_json:
        click.echo(json_serializer(rows, ScalingRowSchema, many=True))
        return
    click.echo("p,T_p,S_p,E_p")
    for row in rows:
        click.echo("{0},{1:g},{2:.6g},{3:.4f}".format(*row))


@cli.command()
@click.option(
    "--point",
    "points",
    multiple=True,
    required=True,
    callback=_points(3),
    help="NX:P:T, grid size, processors and wall time.",
)
@click.pass_obj
def weak(state, points):
    """Compare weak scaling timings with the ideal nx**4 / p law."""
    click.echo("nx,p,T,ratio,ideal")
    for row in weak_scaling_check(points):
        click.echo("{0},{1},{2:g},{3:.4g},{4:.4g}".format(*row))


@cli.command()
@click.argument("problem")
@click.argument("path")
@click.pass_obj
def gen(state, problem, path):
    """Write a generated problem as a MatrixMarket file."""
    matrix = generate_matrix(problem)
    checksum = save_matrix_market(matrix, state.storage(path))
    click.secho(
        "Wrote {0}: n={1}, nnz={2} ({3})".format(path, matrix.n, matrix.nnz, checksum),
        fg="green",
    )


@cli.command()
@click.option("--nx", type=int, default=78, show_default=True)
@click.option("--kind", type=click.Choice(["2d", "3d"]), default="2d")
@click.option(
    "--degrees",
    default="3,7,15,31",
    show_default=True,
    callback=_int_list,
)
@click.option(
    "--scale", type=float, default=config.NC_SCALE_DEMO, show_default=True
)
@click.option(
    "--form",
    type=click.Choice(["newton", "chebyshev"]),
    default="chebyshev",
    show_default=True,
)
@click.option("--out", default=".", show_default=True, help="Output directory.")
@click.pass_obj
def spectrum(state, nx, kind, degrees, scale, form, out):
    """Write the eigenvalues of p(A) A, exact and scaled parameters."""
    blocks = [("original", 1.0)]
    if scale != 1.0:
        blocks.append(("scaled", scale))
    for block, s in blocks:
        for report in spectrum_reports(nx, degrees, scale=s, kind=kind, form=form):
            path = os.path.join(out, "spectrum_m{0}_{1}.csv".format(report.m, block))
            state.storage(path).save(spectrum_csv(report))
            click.echo(
                "{0} m={1.m}: mu=[{1.mu_min:.4e}, {1.mu_max:.4e}] "
                "kappa={1.kappa:.4g} l={1.l}".format(block, report)
            )
