"""Command-line interface for the spiked-oscillator QES solver."""

import argparse
import sys
from pathlib import Path
from typing import Optional

import pandas as pd
from rich.console import Console
from rich.table import Table

from spiked_qes import __version__
from spiked_qes.exceptions import GoldenTableError, IndexOutOfRangeError
from spiked_qes.manager import VerificationManager
from spiked_qes.models.problem import Parity, QESProblem, QESSolution
from spiked_qes.models.spectrum import SpectrumRequest
from spiked_qes.polyalg import fraction_to_decimal
from spiked_qes.services import qes_core, spectral_verify, wavefunction
from spiked_qes.utils.config import Config
from spiked_qes.utils.file_handler import FileHandler
from spiked_qes.utils.golden import compare_with_golden, is_match, load_golden_tables
from spiked_qes.utils.logger import QESLogger, console as err_console

# data goes to stdout, diagnostics to stderr
console = Console()


class UsageError(Exception):
    """Bad command-line input discovered after parsing."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spiked-qes",
        description="Exact QES solutions of the spiked harmonic oscillator V(x) = (|x| - d)^2.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", type=Path, help="Path to config.yml")
    parser.add_argument("--env-file", type=Path, help="Path to .env file")
    parser.add_argument("--log-level", help="Console log level (DEBUG, INFO, WARNING, ...)")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="Solve one (N, parity) family")
    solve.add_argument("--N", type=int, required=True, dest="N")
    solve.add_argument("--parity", choices=[p.value for p in Parity], required=True)
    solve.add_argument("--digits", type=int, help="Decimal digits of the refined shifts")
    solve.add_argument("--format", choices=["json", "csv"], default="json")
    solve.add_argument("--verify", action="store_true", help="Attach the finite-difference check")
    solve.add_argument("--output", type=Path, help="Output file (default stdout)")

    tables = sub.add_parser("tables", help="Reduced condition polynomials per N and parity")
    tables.add_argument("--N-max", type=int, dest="n_max")
    tables.add_argument("--format", choices=["text", "json"], default="text")
    tables.add_argument("--golden", type=Path, help="Alternative golden tables file")

    wave = sub.add_parser("wavefunction", help="Plot-ready grid of psi and V")
    wave.add_argument("--N", type=int, required=True, dest="N")
    wave.add_argument("--parity", choices=[p.value for p in Parity], required=True)
    wave.add_argument("--root-index", type=int, default=0)
    wave.add_argument("--x-max", type=float)
    wave.add_argument("--points", type=int)
    wave.add_argument("--emit", choices=["csv"], default="csv")
    wave.add_argument("--output", type=Path, help="Output file (default stdout)")

    spectrum = sub.add_parser("spectrum", help="Lowest finite-difference eigenvalues")
    spectrum.add_argument("--d", type=float, required=True)
    spectrum.add_argument("--L", type=float, dest="L", help="Box half-width (default |d| + padding)")
    spectrum.add_argument("--n", type=int, help="Interior grid points (forced odd)")
    spectrum.add_argument("--k", type=int, default=4)
    spectrum.add_argument("--format", choices=["json", "csv"], default="json")
    spectrum.add_argument("--output", type=Path, help="Output file (default stdout)")

    verify = sub.add_parser("verify", help="Run the full verification suite")
    verify.add_argument("--N-max", type=int, dest="n_max")
    verify.add_argument("--skip-spectral", action="store_true")
    verify.add_argument("--skip-convergence", action="store_true")
    verify.add_argument("--golden", type=Path, help="Alternative golden tables file")

    return parser


def _solution_record(sol: QESSolution, nodes: int, check: Optional[dict]) -> dict:
    places = sol.digits + qes_core.GUARD_DIGITS
    record = {
        "d": fraction_to_decimal(sol.d_value, sol.digits),
        "bracket": [fraction_to_decimal(sol.d_bracket.lo, places),
                    fraction_to_decimal(sol.d_bracket.hi, places)],
        "coefficients": list(sol.coefficients),
        "well_type": sol.well_type.value,
        "nodes": nodes,
    }
    if check is not None:
        record["numeric_check"] = check
    return record


def cmd_solve(args, config: Config, logger: QESLogger) -> int:
    digits = args.digits if args.digits is not None else config.digits
    problem = QESProblem(args.N, Parity(args.parity))
    solutions = qes_core.solve(problem, digits)
    logger.info(f"{problem}: {len(solutions)} QES shifts")

    records = []
    for sol in solutions:
        nodes = wavefunction.count_nodes(sol)
        check = None
        if args.verify:
            match = spectral_verify.validate_solution(
                sol, padding=config.box_padding, n=config.grid_points
            ).matched
            check = {
                "nearest_eigenvalue": match.nearest_eigenvalue,
                "gap": match.gap,
                "eigenindex": match.eigenindex,
                "index_matches_nodes": match.index_matches_nodes,
            }
            if match.gap >= config.match_tolerance:
                logger.warning(f"d={sol.d:.10f}: gap {match.gap:.3e} exceeds tolerance")
        records.append(_solution_record(sol, nodes, check))

    if args.format == "json":
        payload = {
            "tool_version": __version__,
            "config": {**config.as_dict(), "digits": digits},
            "N": problem.N,
            "parity": problem.parity.value,
            "energy": problem.energy,
            "solutions": records,
        }
        text = FileHandler.to_json(payload)
    else:
        rows = []
        for index, record in enumerate(records):
            row = {
                "N": problem.N,
                "parity": problem.parity.value,
                "energy": problem.energy,
                "root_index": index,
                "d": record["d"],
                "bracket_lo": record["bracket"][0],
                "bracket_hi": record["bracket"][1],
                "well_type": record["well_type"],
                "nodes": record["nodes"],
            }
            row.update({f"a_{n}": c for n, c in enumerate(record["coefficients"])})
            row.update(record.get("numeric_check", {}))
            rows.append(row)
        columns = ["N", "parity", "energy", "root_index", "d", "bracket_lo", "bracket_hi",
                   "well_type", "nodes"]
        text = FileHandler.to_csv(pd.DataFrame(rows, columns=None if rows else columns))
    FileHandler.write_text(text, args.output)
    return 0


def cmd_tables(args, config: Config, logger: QESLogger) -> int:
    n_max = args.n_max if args.n_max is not None else config.tables_n_max
    if n_max < 2:
        raise UsageError(f"--N-max must be at least 2, got {n_max}")
    golden = load_golden_tables(args.golden or config.golden_tables_path)

    rows = []
    for parity in Parity:
        for N in range(2, n_max + 1):
            problem = QESProblem(N, parity)
            reduced = qes_core.reduced_condition(problem)
            row = golden.get(problem)
            verdict = compare_with_golden(row, reduced.poly) if row is not None else None
            rows.append({
                "N": N,
                "parity": parity.value,
                "variable": problem.table_variable,
                "coefficients": [int(c) for c in reduced.poly.coeffs],
                "polynomial": reduced.poly.to_string(problem.table_variable),
                "stripped_power": reduced.stripped_zero_multiplicity,
                "golden": verdict,
            })

    mismatches = [r for r in rows if r["golden"] is not None and not is_match(r["golden"])]
    if args.format == "json":
        FileHandler.write_text(FileHandler.to_json({"tool_version": __version__, "rows": rows}))
    else:
        for parity in Parity:
            table = Table(title=f"Condition polynomials, {parity.value} parity",
                          show_header=True, header_style="bold magenta")
            table.add_column("N", style="cyan", justify="right")
            table.add_column("Polynomial", style="green")
            table.add_column("Coefficients (ascending)")
            table.add_column("Stripped", justify="right")
            table.add_column("Golden", style="yellow")
            for r in rows:
                if r["parity"] != parity.value:
                    continue
                table.add_row(str(r["N"]), r["polynomial"], str(r["coefficients"]),
                              f"{r['variable']}^{r['stripped_power']}", r["golden"] or "-")
            console.print(table)

    for r in mismatches:
        logger.error(f"N={r['N']} {r['parity']}: {r['polynomial']} disagrees with the golden row")
    return 1 if mismatches else 0


def cmd_wavefunction(args, config: Config, logger: QESLogger) -> int:
    problem = QESProblem(args.N, Parity(args.parity))
    solutions = qes_core.solve(problem, config.digits)
    if not 0 <= args.root_index < len(solutions):
        raise IndexOutOfRangeError(
            f"--root-index {args.root_index} out of range: {problem} has {len(solutions)} shifts"
        )
    sol = solutions[args.root_index]
    x_max = args.x_max if args.x_max is not None else abs(sol.d) + config.wave_padding
    points = args.points if args.points is not None else config.wave_points
    grid = wavefunction.sample(sol, x_max, points)
    logger.info(f"{problem} d={sol.d:.10f}: norm {grid.norm:.6g} over {len(grid)} points")

    df = pd.DataFrame({
        "x": grid.xs,
        "psi_normalized": grid.psi_normalized,
        "V": wavefunction.potential(grid.xs, sol.d),
    })
    FileHandler.write_text(FileHandler.to_csv(df, float_format="%.12g"), args.output)
    return 0


def cmd_spectrum(args, config: Config, logger: QESLogger) -> int:
    L = args.L if args.L is not None else abs(args.d) + config.box_padding
    n = args.n if args.n is not None else config.grid_points
    req = SpectrumRequest(d=args.d, L=L, n=n, k=args.k)
    if req.n_used != n:
        logger.info(f"n={n} raised to {req.n_used} so that x = 0 is a grid node")
    report = spectral_verify.lowest_eigenvalues(req, rtol=config.eigen_rtol)
    values = [format(v, ".10g") for v in report.eigenvalues]

    if args.format == "json":
        payload = {
            "tool_version": __version__,
            "d": report.d,
            "L": report.L,
            "n_used": report.n_used,
            "h": report.h,
            "eigenvalues": values,
        }
        text = FileHandler.to_json(payload)
    else:
        df = pd.DataFrame({"index": range(len(values)), "eigenvalue": values})
        text = FileHandler.to_csv(df)
    FileHandler.write_text(text, args.output)
    return 0


def display_verification(summary: dict):
    """Render the verification summary table on stdout."""
    table = Table(title="Verification summary", show_header=True, header_style="bold magenta")
    table.add_column("Family", style="cyan", no_wrap=True)
    table.add_column("Root", no_wrap=True)
    table.add_column("Check")
    table.add_column("Result")
    table.add_column("Detail", style="dim")
    for r in summary['results']:
        result = "[green]PASS[/green]" if r.passed else "[red bold]FAIL[/red bold]"
        table.add_row(r.family, r.root, r.check, result, r.detail)
    console.print(table)
    console.print(
        f"{summary['total_checks']} checks, {summary['failed_checks']} failed, "
        f"duration {summary['duration']}"
    )


def cmd_verify(args, config: Config, logger: QESLogger) -> int:
    n_max = args.n_max if args.n_max is not None else config.verify_n_max
    if n_max < 0:
        raise UsageError(f"--N-max must be non-negative, got {n_max}")
    manager = VerificationManager(
        config, logger,
        golden_path=args.golden,
        skip_spectral=args.skip_spectral,
        skip_convergence=args.skip_convergence,
    )
    summary = manager.run(n_max)
    display_verification(summary)
    return 0 if summary['passed'] else 1


COMMANDS = {
    "solve": cmd_solve,
    "tables": cmd_tables,
    "wavefunction": cmd_wavefunction,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
}


def main(argv: Optional[list[str]] = None) -> int:
    """Main CLI entry point; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        config = Config(env_file=args.env_file, config_file=args.config)
        config.create_directories()

        is_valid, errors = config.validate()
        if not is_valid:
            err_console.print("[red bold]Configuration Errors:[/red bold]")
            for error in errors:
                err_console.print(f"  [red]✗ {error}[/red]")
            return 2

        logger = QESLogger(
            log_dir=config.logs_folder if config.log_to_file else None,
            level=args.log_level or config.log_level,
        )
        logger.debug(f"spiked-qes {__version__}: {args.command}")
        return COMMANDS[args.command](args, config, logger)

    except KeyboardInterrupt:
        err_console.print("\n[yellow]Interrupted by user.[/yellow]")
        return 130

    except GoldenTableError as e:
        err_console.print(f"[red bold]Golden tables:[/red bold] {e}")
        return 1

    except (UsageError, ValueError) as e:
        err_console.print(f"[red bold]Error:[/red bold] {e}")
        return 2

    except Exception as e:
        err_console.print(f"[red bold]Fatal Error:[/red bold] {e}")
        import traceback
        traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
