import logging
import os
import sys
from typing import Optional

import click
import typer

from derham_lab import check_geometry, run_checks
from derham_lab._errors import DerhamLabError
from derham_lab.loaders import (
    REFERENCE_NAMES,
    dump_json,
    load_cochain,
    load_complex,
    load_form,
    reference_complex,
)

logger = logging.getLogger(__name__)

app = typer.Typer()

# exit codes
EXIT_OK = 0
EXIT_INPUT = 1
EXIT_FAILED = 2

INPUT_ERRORS = (DerhamLabError, ValueError, KeyError, FileNotFoundError)


@app.callback()
def _configure(
    verbose: bool = typer.Option(False, "--verbose", help="Log debug messages to stderr"),
):
    """Lipschitz de Rham calculus on simplicial complexes.

    Reports are written to stdout as JSON (CSV for the eps scan); logs go to
    stderr. Exit code 0 means success, 2 a failed verification and 1 an input
    error.
    """
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO)


def _complex(path: str):
    """Load a complex file, or build a reference complex by name."""
    if not os.path.exists(path) and path in REFERENCE_NAMES:
        return reference_complex(path)
    return load_complex(path)


def _emit(payload, out_path: Optional[str], passed: bool = True):
    typer.echo(dump_json(payload, out_path))
    if not passed:
        raise typer.Exit(code=EXIT_FAILED)


def _input_error(e: Exception):
    logger.error(f"{type(e).__name__}: {e}")
    raise typer.Exit(code=EXIT_INPUT)


@app.command("check-geometry")
def check_geometry_cmd(
    complex_path: str = typer.Option(
        ..., "--complex", help="Complex JSON or reference name", show_default=False
    ),
    bound: Optional[float] = typer.Option(
        None, "--L", help="Bounded geometry constant, the file's L by default"
    ),
    out_path: Optional[str] = typer.Option(None, "--out", help="Also write the report here"),
):
    """Star bound, connectivity and edge-length range of a complex."""
    try:
        report = check_geometry(_complex(complex_path), bound)
    except INPUT_ERRORS as e:
        _input_error(e)
    _emit(report.to_dict(), out_path, report.bounded_geometry)


@app.command()
def cohomology(
    complex_path: str = typer.Option(
        ..., "--complex", help="Complex JSON or reference name", show_default=False
    ),
    p: float = typer.Option(2.0, "--p", help="Norm exponent"),
    verify_derham: bool = typer.Option(
        False, "--verify-derham", help="Also check the de Rham isomorphism degree by degree"
    ),
    eps: float = typer.Option(0.1, "--eps", help="Kernel width of the regularization leg"),
    quad_degree: int = typer.Option(20, "--quad-degree", help="Degree of the norm rules"),
    out_path: Optional[str] = typer.Option(None, "--out", help="Also write the report here"),
):
    """Betti numbers of a complex from its cochain complex.

    With --verify-derham the Whitney subcomplex is compared with the cochain
    complex and, on graphs, closed representatives are regularized.
    """
    from derham_lab.cohomology import betti_numbers, derham_iso_check, euler_from_betti

    try:
        K = _complex(complex_path)
        betti = betti_numbers(K)
        payload = {
            "complex": K.name,
            "betti": betti,
            "euler_characteristic": euler_from_betti(betti),
            "checks": {},
        }
        if verify_derham:
            payload["checks"] = derham_iso_check(K, p, eps=eps, quad_degree=quad_degree)
    except INPUT_ERRORS as e:
        _input_error(e)
    _emit(payload, out_path, payload["checks"].get("holds", True))


@app.command()
def whitney(
    complex_path: str = typer.Option(
        ..., "--complex", help="Complex JSON or reference name", show_default=False
    ),
    cochain_path: str = typer.Option(..., "--cochain", help="Cochain JSON", show_default=False),
    normalized: bool = typer.Option(
        False, "--normalized", help="Rescale so that the de Rham map inverts it"
    ),
    out_path: Optional[str] = typer.Option(None, "--out", help="Also write the form here"),
):
    """Whitney form of a cochain, as piecewise form JSON."""
    from derham_lab.whitney import whitney as whitney_map
    from derham_lab.whitney import whitney_normalized

    try:
        c = load_cochain(cochain_path, _complex(complex_path))
        form = whitney_normalized(c) if normalized else whitney_map(c)
    except INPUT_ERRORS as e:
        _input_error(e)
    _emit(form.to_dict(), out_path)


@app.command()
def derham_map(
    complex_path: str = typer.Option(
        ..., "--complex", help="Complex JSON or reference name", show_default=False
    ),
    form_path: str = typer.Option(..., "--form", help="Piecewise form JSON", show_default=False),
    exact: bool = typer.Option(
        False, "--exact", help="Exact integrals in the reference simplex measure"
    ),
    quad_degree: Optional[int] = typer.Option(
        None, "--quad-degree", help="Rule degree, the trace degree by default"
    ),
    out_path: Optional[str] = typer.Option(None, "--out", help="Also write the cochain here"),
):
    """Integrals of a form over every simplex of its degree, as cochain JSON."""
    from derham_lab.whitney import derham_map as integrate
    from derham_lab.whitney import reference_derham_map

    try:
        omega = load_form(form_path, _complex(complex_path))
        c = reference_derham_map(omega) if exact else integrate(omega, quad_degree=quad_degree)
    except INPUT_ERRORS as e:
        _input_error(e)
    _emit(c.to_dict(), out_path)


@app.command()
def regularize(
    complex_path: str = typer.Option(
        ..., "--complex", help="Complex JSON or reference name", show_default=False
    ),
    form_path: str = typer.Option(..., "--form", help="Piecewise form JSON", show_default=False),
    eps: float = typer.Option(0.1, "--eps", help="Starting kernel width of every star"),
    p: float = typer.Option(2.0, "--p", help="Norm exponent"),
    quad_degree: int = typer.Option(20, "--quad-degree", help="Degree of the norm rules"),
    kernel_degree: int = typer.Option(10, "--kernel-degree", help="Degree of the kernel rule"),
    vertex: Optional[int] = typer.Option(
        None, "--vertex", help="Regularize around one vertex of a graph through its bouquet chart"
    ),
    tol: float = typer.Option(1e-4, "--tol", help="Accepted homotopy residual"),
    out_path: Optional[str] = typer.Option(None, "--out", help="Also write the report here"),
):
    """Regularize a form and measure R w - w - d A w - A d w.

    Without --vertex all stars are processed in ascending vertex order; with
    it only the star of that vertex, which may have any even degree.
    """
    from derham_lab.mollify import (
        bouquet_star_regularize,
        complex_smoothness_samples,
        global_regularize,
    )

    try:
        K = _complex(complex_path)
        omega = load_form(form_path, K)
        if vertex is not None:
            result = bouquet_star_regularize(
                K, vertex, omega, eps, kernel_degree=kernel_degree, p=p, quad_degree=quad_degree
            )
            payload = result.to_dict()
            payload["eps_schedule"] = {str(vertex): result.eps}
            payload["residual_norms"] = {"residual": result.residual}
        else:
            result = global_regularize(
                omega, eps, kernel_degree=kernel_degree, p=p, quad_degree=quad_degree
            )
            payload = result.to_dict()
            payload["residual_norms"] = {
                "residual": result.residual,
                "commutation_defect": result.commutation_defect,
            }
        payload["smoothness_samples"] = complex_smoothness_samples(result.regularized)
    except INPUT_ERRORS as e:
        _input_error(e)
    _emit(payload, out_path, result.residual <= tol)


@app.command()
def verify_cartan(
    cases: int = typer.Option(200, "--cases", help="Number of random forms"),
    seed: int = typer.Option(0, "--seed", help="Seed of the random forms"),
    out_path: Optional[str] = typer.Option(None, "--out", help="Also write the report here"),
):
    """Exact check of the Cartan homotopy formula on random polynomial forms."""
    from derham_lab.checks import CartanIdentityCheck

    result = CartanIdentityCheck(cases=cases, seed=seed).compute()
    _emit(result.results, out_path, result.passed)


@app.command()
def norms(
    eps: Optional[list[float]] = typer.Option(
        None, "--eps", help="Kernel widths, repeatable; 0.4 0.2 0.1 0.05 by default"
    ),
    p: float = typer.Option(2.0, "--p", help="Norm exponent"),
    out_path: Optional[str] = typer.Option(None, "--out", help="Also write the CSV table here"),
):
    """Operator norm scan of the flat regularization as a CSV table."""
    from derham_lab.mollify import DEFAULT_EPS, operator_norm_scan, scan_trends

    try:
        table = operator_norm_scan(eps or DEFAULT_EPS, p=p)
    except INPUT_ERRORS as e:
        _input_error(e)
    text = table.to_csv(index=False)
    if out_path is not None:
        table.to_csv(out_path, index=False)
    typer.echo(text, nl=False)
    trends = scan_trends(table)
    logger.info(f"Trends: {trends}")
    if not trends["holds"]:
        raise typer.Exit(code=EXIT_FAILED)


@app.command()
def verify_all(
    seed: int = typer.Option(0, "--seed", help="Seed of the randomized checks"),
    threads: int = typer.Option(
        1, "--threads", envvar="DERHAM_LAB_THREADS", help="Largest number of worker threads"
    ),
    quick: bool = typer.Option(
        False, "--quick", help="Fewer random cases, for smoke runs", show_default=False
    ),
    out_path: Optional[str] = typer.Option(None, "--out", help="Also write the report here"),
):
    """Run every verification check on the reference complexes."""
    from derham_lab import checks

    scale = 10 if quick else 1
    suite = [
        checks.CartanIdentityCheck(cases=200 // scale, seed=seed),
        checks.MollifierHomotopyCheck(cases=100 // scale, seed=seed),
        checks.KernelMomentCheck(),
        checks.WhitneySplitCheck(),
        checks.ChainMapCheck(),
        checks.DeRhamCheck(),
        checks.OperatorNormTrendCheck(),
        checks.SupBoundCheck(),
        checks.ExtensionNormCheck(),
        checks.GlobalRegularizationCheck(),
        checks.ExactnessWitnessCheck(cases=20 // scale, seed=seed),
    ]
    results = run_checks(suite, threads=threads)
    _emit(results, out_path, all(r["passed"] for r in results))


typer_click_object = typer.main.get_command(app)


def main():
    try:
        code = typer_click_object.main(standalone_mode=False)
    except click.ClickException as e:
        e.show()
        code = EXIT_INPUT
    except click.Abort:
        code = EXIT_INPUT
    sys.exit(code or EXIT_OK)
