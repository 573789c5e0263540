"""Command-line interface.

Structured results go to stdout (JSON) or as CSV series followed by the fit
JSON; human summaries and logs go to stderr.
"""

from __future__ import annotations

import csv
import io
import math
import secrets
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path

import click
from loguru import logger
from pydantic import BaseModel, ValidationError
from rich.console import Console
from rich.table import Table

from config import get_settings, log_error, setup_logging
from models import (
    AlgebraSpec,
    BlockSequence,
    ChainStructure,
    CodingConfig,
    EntropyMethod,
    EntropyReport,
    FormulaKind,
    JordanLengths,
    MatrixModel,
    McConfig,
    SequenceConfig,
    SlopeFit,
    SymPowerSpec,
    TripleReport,
    VolumeRow,
)

from . import __version__
from ._errors import NotQuasiUnipotentError, SlopeAssertionError, SlowEntropyError
from .algebra_zoo import (
    block_nilpotent,
    from_spec,
    heisenberg_type,
    principal_nilpotent,
    sl_basis,
    sym_power_rep,
    synthetic_from_structure,
    to_spec,
    twisted_algebra,
)
from .chains import analyze as analyze_algebra
from .chains import jordan_lengths
from .closed_forms import r_block_sequence, r_nilpotent_example, r_twisted
from .dynamics import (
    brudnyi_trials,
    mc_bowen_volume,
    mc_sequence_bowen_volume,
    shearing_trials,
    visit_constant,
)
from .exact_linalg import RatMatrix
from .sl2 import Sl2Triple, block_triple, entropy_via_triple, jacobson_morozov, principal_triple
from .torus_coding import empirical_slow_entropy

console = Console(stderr=True)


# ---- helpers ------------------------------------------------------------


def _int_list(ctx: click.Context, param: click.Parameter, value: str | None) -> tuple[int, ...] | None:
    if value is None:
        return None
    try:
        return tuple(int(x) for x in value.split(",") if x.strip())
    except ValueError as exc:
        raise click.BadParameter(f"expected comma-separated integers, got {value!r}") from exc


def _parse_double(text: str) -> tuple[int, str]:
    depth, sep, alpha = text.partition(":")
    if not sep:
        raise click.BadParameter(f"double chains are given as depth:alpha, got {text!r}")
    try:
        return int(depth), alpha.strip()
    except ValueError as exc:
        raise click.BadParameter(f"bad double chain {text!r}") from exc


def _structure(depths: Sequence[int], doubles: Sequence[str]) -> ChainStructure:
    parsed = [_parse_double(d) for d in doubles]
    all_depths = list(depths)
    for m, _ in parsed:
        all_depths += [m, m]
    if not all_depths:
        raise click.UsageError("give at least one --depth or --double")
    return ChainStructure(
        depths=tuple(all_depths),
        alphas=tuple(float(Fraction(a)) for _, a in parsed),
        double_depths=tuple(m for m, _ in parsed),
    )


def _seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbits(63)
        console.print(f"seed: {seed}")
    return seed


def _emit_json(model: BaseModel, output: Path | None) -> None:
    text = model.model_dump_json(indent=2, exclude_none=True, by_alias=True)
    if output:
        output.write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


def _emit_series(header: Sequence[str], rows: Sequence[Sequence[object]], fit: SlopeFit, output: Path | None) -> None:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    fit_json = fit.model_dump_json(indent=2)
    if output:
        output.write_text(buffer.getvalue(), encoding="utf-8")
        click.echo(fit_json)
    else:
        click.echo(buffer.getvalue() + "\n" + fit_json)


def _volume_rows(rows: Sequence[VolumeRow]) -> list[list[object]]:
    return [[f"{r.t:g}", f"{r.volume:.10g}", f"{r.log10_t:.6f}", f"{r.log10_volume:.6f}", r.accepted, r.samples] for r in rows]


def _check_slope(fitted: float, target: float, tolerance: float) -> None:
    if abs(fitted - target) > tolerance:
        raise SlopeAssertionError(fitted, target, tolerance)


def _summary_table(title: str, values: dict[str, object]) -> None:
    table = Table(title=title, show_header=False)
    for key, value in values.items():
        table.add_row(key, str(value))
    console.print(table)


def _report_triple(basis: Sequence[RatMatrix], triple: Sl2Triple, output: Path | None) -> None:
    spectrum, r = entropy_via_triple(basis, triple)
    report = TripleReport(
        v=MatrixModel.model_validate(triple.v.to_json()),
        x=MatrixModel.model_validate(triple.x.to_json()),
        u_prime=MatrixModel.model_validate(triple.u_prime.to_json()),
        spectrum=spectrum,
        R=str(r),
    )
    _summary_table("sl(2)-triple", {"R": r, "spectrum": spectrum.multiplicities})
    _emit_json(report, output)


output_option = click.option(
    "--output", "-o", type=click.Path(dir_okay=False, writable=True, path_type=Path), default=None,
    help="Write to this file instead of stdout",
)


# ---- commands -----------------------------------------------------------


@click.group()
@click.version_option(__version__, prog_name="slowentropy")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    default=None,
    help="Override SLOWENT_LOG_LEVEL",
)
def cli(log_level: str | None) -> None:
    """Slow entropy of quasi-unipotent flows."""
    if log_level:
        get_settings().log_level = log_level.upper()
    setup_logging()
    logger.enable("slowentropy")


@cli.command()
@click.argument("algebra_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--u-index", type=int, default=None, help="Use basis element I as U")
@click.option("--u-matrix", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None, help="JSON matrix for U")
@click.option("--tol", type=float, default=None, help="Spectral tolerance")
@click.option("--lambda", "lam", type=float, default=None, help="Also report the sequence entropy R log(lambda)")
@output_option
def analyze(
    algebra_file: Path,
    u_index: int | None,
    u_matrix: Path | None,
    tol: float | None,
    lam: float | None,
    output: Path | None,
) -> None:
    """Chain structure and R of the flow generated by U on an algebra file."""
    spec = AlgebraSpec.model_validate_json(algebra_file.read_text(encoding="utf-8"))
    basis, u = from_spec(spec)
    if u_index is not None:
        if not 0 <= u_index < len(basis):
            raise click.BadParameter(f"index out of range 0..{len(basis) - 1}", param_hint="--u-index")
        u = basis[u_index]
    elif u_matrix is not None:
        u = RatMatrix.from_json(MatrixModel.model_validate_json(u_matrix.read_text(encoding="utf-8")).model_dump())
    if u is None:
        raise click.UsageError("the algebra file has no generator; pass --u-index or --u-matrix")
    report = analyze_algebra(basis, u, tol=tol, lam=lam, name=spec.name)
    _summary_table(spec.name, {"R": report.R, "depths": report.structure.depths if report.structure else ()})
    _emit_json(report, output)


@cli.group()
def formulas() -> None:
    """Closed-form exponents."""


@formulas.command("blocks")
@click.argument("k", nargs=-1, type=int, required=True)
@output_option
def formulas_blocks(k: tuple[int, ...], output: Path | None) -> None:
    """Block-diagonal nilpotent in sl(d) with nondecreasing blocks K."""
    r = r_block_sequence(k)
    _emit_json(EntropyReport(R=str(r), method=EntropyMethod.CLOSED_FORM, formula=FormulaKind.BLOCK_SEQUENCE), output)


@formulas.command("nilpotent")
@click.argument("d", type=int)
@output_option
def formulas_nilpotent(d: int, output: Path | None) -> None:
    """Skew-shift algebra over the D-torus."""
    r = r_nilpotent_example(d)
    _emit_json(EntropyReport(R=str(r), method=EntropyMethod.CLOSED_FORM, formula=FormulaKind.NILPOTENT), output)


@formulas.command("twisted")
@click.option("--blocks", "blocks", callback=_int_list, required=True, help="Block sizes, e.g. 2 or 1,2")
@click.option("--lengths", callback=_int_list, default=None, help="Jordan lengths of drho(U)")
@click.option("--sym", type=int, default=None, help="Use Sym^n of the standard representation")
@output_option
def formulas_twisted(
    blocks: tuple[int, ...], lengths: tuple[int, ...] | None, sym: int | None, output: Path | None
) -> None:
    """Semisimple part plus representation contribution."""
    if (lengths is None) == (sym is None):
        raise click.UsageError("pass exactly one of --lengths and --sym")
    if sym is not None:
        rho = SymPowerSpec(n=sym)
        d = sum(blocks)
        lengths = jordan_lengths(sym_power_rep(d, rho.n, block_nilpotent(blocks))).lengths
    r = r_twisted(BlockSequence(k=blocks), JordanLengths(lengths=lengths or ()))
    _emit_json(EntropyReport(R=str(r), method=EntropyMethod.CLOSED_FORM, formula=FormulaKind.TWISTED), output)


@cli.group()
def triple() -> None:
    """sl(2)-triples and the centralizer spectrum."""


@triple.command("principal")
@click.argument("d", type=int)
@output_option
def triple_principal(d: int, output: Path | None) -> None:
    """Principal triple of sl(D)."""
    _report_triple(sl_basis(d), principal_triple(d), output)


@triple.command("blocks")
@click.argument("k", nargs=-1, type=int, required=True)
@output_option
def triple_blocks(k: tuple[int, ...], output: Path | None) -> None:
    """Block-diagonal triple with block sizes K in sl(sum K)."""
    _report_triple(sl_basis(sum(k)), block_triple(k), output)


@triple.command("jm")
@click.argument("algebra_file", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--u-index", type=int, default=None, help="Use basis element I as U'")
@output_option
def triple_jm(algebra_file: Path, u_index: int | None, output: Path | None) -> None:
    """Jacobson-Morozov triple through the generator of an algebra file."""
    spec = AlgebraSpec.model_validate_json(algebra_file.read_text(encoding="utf-8"))
    basis, u = from_spec(spec)
    if u_index is not None:
        u = basis[u_index]
    if u is None:
        raise click.UsageError("the algebra file has no generator; pass --u-index")
    _report_triple(basis, jacobson_morozov(basis, u), output)


@cli.group()
def zoo() -> None:
    """Emit example algebras as JSON (input for analyze)."""


@zoo.command("sl")
@click.argument("d", type=int)
@output_option
def zoo_sl(d: int, output: Path | None) -> None:
    """Basis of sl(D) without a generator."""
    _emit_json(to_spec(f"sl({d})", sl_basis(d), None), output)


@zoo.command("principal")
@click.argument("d", type=int)
@output_option
def zoo_principal(d: int, output: Path | None) -> None:
    """sl(D) with its principal nilpotent."""
    _emit_json(to_spec(f"sl({d}) principal", sl_basis(d), principal_nilpotent(d)), output)


@zoo.command("blocks")
@click.argument("k", nargs=-1, type=int, required=True)
@output_option
def zoo_blocks(k: tuple[int, ...], output: Path | None) -> None:
    """sl(sum K) with the block nilpotent of sizes K."""
    label = ",".join(map(str, k))
    _emit_json(to_spec(f"sl({sum(k)}) blocks {label}", sl_basis(sum(k)), block_nilpotent(k)), output)


@zoo.command("heisenberg")
@click.argument("d", type=int)
@click.option("--alpha", default="1/2", show_default=True, help="Rotation speed as p/q")
@output_option
def zoo_heisenberg(d: int, alpha: str, output: Path | None) -> None:
    """Skew-shift algebra over the D-torus."""
    basis, u = heisenberg_type(d, Fraction(alpha))
    _emit_json(to_spec(f"skew-shift d={d}", basis, u), output)


@zoo.command("twisted")
@click.option("--blocks", "blocks", callback=_int_list, required=True, help="Block sizes of the semisimple part")
@click.option("--sym", type=int, required=True, help="Symmetric power n")
@output_option
def zoo_twisted(blocks: tuple[int, ...], sym: int, output: Path | None) -> None:
    """sl(d) acting on Sym^n(R^d)."""
    basis, u = twisted_algebra(blocks, SymPowerSpec(n=sym))
    _emit_json(to_spec(f"twisted sym{sym}", basis, u), output)


@zoo.command("synthetic")
@click.option("--depth", "depths", type=int, multiple=True, help="Chain depth (repeatable)")
@click.option("--double", "doubles", multiple=True, help="Double chain depth:alpha (repeatable)")
@output_option
def zoo_synthetic(depths: tuple[int, ...], doubles: tuple[str, ...], output: Path | None) -> None:
    """Abelian realisation of a prescribed chain structure."""
    parsed = [(m, Fraction(a)) for m, a in map(_parse_double, doubles)]
    if not depths and not parsed:
        raise click.UsageError("give at least one --depth or --double")
    basis, u = synthetic_from_structure(depths, parsed)
    _emit_json(to_spec("synthetic", basis, u), output)


@cli.group()
def simulate() -> None:
    """Empirical checks on the cover."""


structure_options = [
    click.option("--depth", "depths", type=int, multiple=True, help="Chain depth (repeatable)"),
    click.option("--double", "doubles", multiple=True, help="Double chain depth:alpha (repeatable)"),
]


def _with_structure(func):  # type: ignore[no-untyped-def]
    for option in reversed(structure_options):
        func = option(func)
    return func


@simulate.command("bowen")
@_with_structure
@click.option("--epsilon", type=float, default=None)
@click.option("--tmin", type=float, default=None)
@click.option("--tratio", type=float, default=None)
@click.option("--tcount", type=int, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--sup-mode", type=click.Choice(["roots", "grid"]), default=None)
@click.option("--threads", type=int, default=None)
@click.option("--assert-slope", is_flag=True, help="Exit 3 unless the slope is within --slope-tol of -R")
@click.option("--slope-tol", type=float, default=0.3, show_default=True)
@click.option("--report", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write the full JSON report")
@output_option
def simulate_bowen(
    depths: tuple[int, ...],
    doubles: tuple[str, ...],
    epsilon: float | None,
    tmin: float | None,
    tratio: float | None,
    tcount: int | None,
    samples: int | None,
    seed: int | None,
    sup_mode: str | None,
    threads: int | None,
    assert_slope: bool,
    slope_tol: float,
    report: Path | None,
    output: Path | None,
) -> None:
    """Bowen-ball volumes against T for a chain structure."""
    structure = _structure(depths, doubles)
    cfg = McConfig.from_settings(
        epsilon=epsilon, tmin=tmin, tratio=tratio, tcount=tcount, samples=samples,
        seed=_seed(seed), sup_mode=sup_mode, threads=threads,
    )
    result = mc_bowen_volume(structure, cfg)
    if report:
        _emit_json(result, report)
    _summary_table("Bowen volumes", {"slope": f"{result.fit.exponent:.4f}", "predicted": result.predicted_exponent})
    _emit_series(["T", "volume", "log10_T", "log10_V", "accepted", "samples"], _volume_rows(result.rows), result.fit, output)
    if assert_slope:
        _check_slope(result.fit.exponent, result.predicted_exponent, slope_tol)


@simulate.command("sequence")
@_with_structure
@click.option("--L", "base_time", type=float, default=1.0, show_default=True, help="Base time L")
@click.option("--lambda", "lam", type=float, default=2.0, show_default=True)
@click.option("--nmax", type=int, default=10, show_default=True)
@click.option("--epsilon", type=float, default=None)
@click.option("--samples", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--threads", type=int, default=None)
@click.option("--assert-slope", is_flag=True, help="Exit 3 unless the slope is within --slope-rtol of -R log(lambda)")
@click.option("--slope-rtol", type=float, default=0.1, show_default=True)
@output_option
def simulate_sequence(
    depths: tuple[int, ...],
    doubles: tuple[str, ...],
    base_time: float,
    lam: float,
    nmax: int,
    epsilon: float | None,
    samples: int | None,
    seed: int | None,
    threads: int | None,
    assert_slope: bool,
    slope_rtol: float,
    output: Path | None,
) -> None:
    """Sequence-Bowen volumes against N along the times L lambda^k."""
    settings = get_settings()
    structure = _structure(depths, doubles)
    cfg = SequenceConfig(
        epsilon=epsilon or settings.mc_epsilon,
        base_time=base_time,
        lam=lam,
        n_max=nmax,
        samples=samples or settings.mc_samples,
        seed=_seed(seed),
        chunk_size=settings.mc_chunk_size,
        threads=threads or settings.threads,
    )
    result = mc_sequence_bowen_volume(structure, cfg)
    _summary_table("Sequence volumes", {"slope": f"{result.fit.exponent:.4f}", "predicted": f"{result.predicted_exponent:.4f}"})
    rows = [[int(r.t), f"{r.volume:.10g}", f"{math.log(r.volume):.6f}", r.accepted, r.samples] for r in result.rows]
    _emit_series(["N", "volume", "ln_volume", "accepted", "samples"], rows, result.fit, output)
    if assert_slope:
        _check_slope(result.fit.exponent, result.predicted_exponent, slope_rtol * abs(result.predicted_exponent))


@simulate.command("shearing")
@_with_structure
@click.option("--trials", type=int, default=1000, show_default=True)
@click.option("--c", "c", type=float, default=None, help="Visit radius factor (default from the degree)")
@click.option("--eta", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=None)
@output_option
def simulate_shearing(
    depths: tuple[int, ...],
    doubles: tuple[str, ...],
    trials: int,
    c: float | None,
    eta: float,
    seed: int | None,
    output: Path | None,
) -> None:
    """Fraction of time near the origin before a displacement separates."""
    structure = _structure(depths, doubles)
    degree = 2 * max(structure.depths)
    summary = shearing_trials(structure, trials, c if c is not None else visit_constant(degree), eta, _seed(seed))
    _summary_table("Shearing visits", {"max fraction": f"{summary.max_fraction:.4g}", "bound": f"{summary.remez_bound:.4g}"})
    _emit_json(summary, output)


@simulate.command("brudnyi")
@click.option("--trials", type=int, default=10_000, show_default=True)
@click.option("--max-degree", type=int, default=6, show_default=True)
@click.option("--seed", type=int, default=None)
@output_option
def simulate_brudnyi(trials: int, max_degree: int, seed: int | None, output: Path | None) -> None:
    """Random checks of the Remez-type polynomial inequality."""
    summary = brudnyi_trials(trials, max_degree, _seed(seed))
    _summary_table("Remez inequality", {"violations": summary.violations, "worst ratio": f"{summary.worst_ratio:.4g}"})
    _emit_json(summary, output)


@cli.command()
@click.option("--d", "d", type=int, required=True, help="Torus dimension")
@click.option("--alpha", type=float, default=None, help="Rotation number (default sqrt(2)-1)")
@click.option("--q", "q", type=int, default=None, help="Cells per axis")
@click.option("--epsilon", type=float, default=None, help="Hamming radius")
@click.option("--samples", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--n-grid", callback=_int_list, default="25,50,100,200", show_default=True)
@click.option("--assert-slope", is_flag=True, help="Exit 3 unless the slope is within --slope-tol of d(d-1)/2")
@click.option("--slope-tol", type=float, default=0.3, show_default=True)
@output_option
def torus(
    d: int,
    alpha: float | None,
    q: int | None,
    epsilon: float | None,
    samples: int | None,
    seed: int | None,
    n_grid: tuple[int, ...],
    assert_slope: bool,
    slope_tol: float,
    output: Path | None,
) -> None:
    """Hamming-ball covering counts of the skew-shift on the D-torus."""
    settings = get_settings()
    values: dict[str, object] = {
        "d": d,
        "q": q or settings.torus_q,
        "epsilon": epsilon or settings.torus_epsilon,
        "samples": samples or settings.torus_samples,
        "seed": _seed(seed),
        "n": n_grid[-1],
    }
    if alpha is not None:
        values["alpha"] = alpha
    cfg = CodingConfig.model_validate(values)
    result = empirical_slow_entropy(cfg, n_grid)
    rows = [
        [e.n, e.greedy, e.separated, f"{math.log10(e.n):.6f}", f"{math.log10(e.greedy):.6f}", f"{e.covered:.4f}"]
        for e in result.estimates
    ]
    _summary_table("Torus coding", {"slope": f"{result.fit.exponent:.4f}", "predicted": result.predicted_exponent})
    _emit_series(["n", "S_greedy", "S_separated", "log10_n", "log10_S_greedy", "covered"], rows, result.fit, output)
    if assert_slope:
        _check_slope(result.fit.exponent, result.predicted_exponent, slope_tol)


def main(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and map failures to exit codes (usage 1, domain 2, assertion 3)."""
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name="slowentropy", standalone_mode=False)
    except click.exceptions.Abort:
        console.print("[red]Aborted[/red]")
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except NotQuasiUnipotentError as exc:
        log_error(exc, {"eigenvalue": str(exc.eigenvalue)})
        console.print(f"[red]{exc}[/red]")
        return 2
    except SlopeAssertionError as exc:
        log_error(exc, {"fitted": exc.fitted, "target": exc.target})
        console.print(f"[red]{exc}[/red]")
        return 3
    except (SlowEntropyError, ValidationError) as exc:
        log_error(exc)
        console.print(f"[red]{exc}[/red]")
        return 1
    return rv if isinstance(rv, int) else 0
