"""Command-line interface for hom-twist."""

import os
import sys
from collections import OrderedDict
from pathlib import Path
from typing import Dict, Optional, Tuple

import click
from rich.console import Console
from rich.table import Table

from . import __version__
from .algebra_io import (
    LoadedAlgebra,
    default_report_path,
    from_algebra_file,
    load_algebra,
    parse_text,
    serialize,
    to_algebra_file,
    write_algebra,
    write_report,
)
from .config_manager import get_settings
from .correspondence import check_twist_lift_commutation
from .error_handler import ExitCode, error_handler
from .examples_library import get_instance, is_known_instance, list_instances, module_algebras, module_coalgebras
from .exceptions import ParseError, TheoremCheckFailed
from .hom_structures import (
    check_antipode,
    check_flavor_agreement,
    check_hom_algebra,
    check_hom_bialgebra,
    check_hom_coalgebra,
    check_hom_module,
    check_result,
    verify_suite,
)
from .logging_setup import setup_logging
from .models import Flavor, ReportFile, RMatrixSystem, Suite, VerificationReport
from .quasitriangular import check_r13_readings, twist_rmatrix, validate_rmatrix
from .rep_category import check_identity_collapse, default_modules, grid_configs, probe_functor_G_shifts, run_rep_grid
from .twist_engine import (
    build_twisted_bialgebra,
    build_twisted_hopf,
    check_twisted_cocycle_identity,
    twist_module_algebra,
    twist_module_coalgebra,
    validate_twist,
)
from .validators import InputValidator


# Windows-compatible console setup
def create_console():
    """Create a Rich console with Windows compatibility"""
    try:
        if os.name == 'nt':
            return Console(legacy_windows=False, force_terminal=True)
        return Console()
    except Exception:
        return Console(no_color=True, force_terminal=True)


console = create_console()

# Define cross-platform symbols
if os.name == 'nt':  # Windows
    SYMBOLS = {
        'check': 'OK',
        'error': 'ERROR',
        'info': 'INFO',
        'warning': 'WARN',
        'arrow': '->',
        'bullet': '*'
    }
else:  # Unix/Linux/Mac
    SYMBOLS = {
        'check': '✓',
        'error': '✗',
        'info': 'ℹ',
        'warning': '⚠',
        'arrow': '→',
        'bullet': '•'
    }

# Reports longer than this are summarised per check id
FULL_TABLE_LIMIT = 40


def safe_print(message, style=None):
    """Print with Windows-safe encoding"""
    try:
        if style:
            console.print(message, style=style)
        else:
            console.print(message)
    except UnicodeEncodeError:
        plain_message = message
        if hasattr(message, 'plain'):
            plain_message = message.plain
        print(str(plain_message).encode('ascii', 'replace').decode('ascii'))


def _fail(error: Exception, context: Optional[Dict] = None):
    details = error_handler.handle_error(error, context)
    safe_print(f"[red]{SYMBOLS['error']} {details['exception_type']}: {details['message']}[/red]")
    for check_id in details.get("failed_checks", [])[:10]:
        safe_print(f"  {SYMBOLS['bullet']} {check_id}")
    sys.exit(details["exit_code"])


def _load_source(source: str) -> Tuple[LoadedAlgebra, str]:
    """An algebra file path, or the name of a library instance."""
    path = Path(source)
    if path.exists():
        loaded = load_algebra(path)
        return loaded, loaded.data.name or path.stem
    if is_known_instance(source):
        inst = get_instance(source)
        loaded = LoadedAlgebra(
            data=inst.data,
            twists={name: tw.sigma for name, tw in inst.twists.items()},
            rmatrices={name: (rm.system, rm.R) for name, rm in inst.rmatrices.items()},
        )
        return loaded, inst.name
    raise ParseError(f"{source} is neither a readable algebra file nor a library instance", path=source)


def _display_report(report: VerificationReport):
    """Full table for short reports, per-check totals for long ones."""
    if len(report.checks) <= FULL_TABLE_LIMIT:
        table = Table(title=report.subject or "Verification")
        table.add_column("Check", style="cyan")
        table.add_column("Identity", style="white")
        table.add_column("Status")
        table.add_column("Counterexample", style="yellow")
        for check in report.checks:
            style = {"PASS": "green", "FAIL": "red", "INFO": "blue"}[check.status]
            table.add_row(
                check.check_id,
                check.anchor,
                f"[{style}]{check.status}[/{style}]",
                "" if check.passed else str(check.counterexample),
            )
    else:
        totals: "OrderedDict[str, list]" = OrderedDict()
        for check in report.checks:
            key = check.check_id.split(":", 1)[-1]
            row = totals.setdefault(key, [0, 0, 0])
            row[0 if check.passed else (2 if check.informational else 1)] += 1
        table = Table(title=f"{report.subject} ({len(report.checks)} checks)")
        table.add_column("Check", style="cyan")
        table.add_column("Passed", style="green")
        table.add_column("Failed", style="red")
        table.add_column("Info", style="blue")
        for key, (passed, failed, info) in totals.items():
            table.add_row(key, str(passed), str(failed), str(info))
    console.print(table)
    symbol, style = (SYMBOLS['check'], "green") if report.ok else (SYMBOLS['error'], "red")
    safe_print(f"[{style}]{symbol} {report.passed}/{report.total} required checks passed[/{style}]")


def _finish(command: str, name: str, report: VerificationReport, report_path: Optional[str], parameters: Dict):
    """Print, write the report file and exit with 0 or 1."""
    _display_report(report)
    settings = get_settings()
    path = Path(report_path) if report_path else default_report_path(command, name)
    ok, message = InputValidator.validate_output_path(path)
    if not ok:
        raise ParseError(message, path=str(path))
    report_file = ReportFile.from_report(command, report, parameters, include_timing=settings.reports.include_timing)
    write_report(path, report_file)
    safe_print(f"{SYMBOLS['info']} Report saved to {path}")
    sys.exit(ExitCode.OK if report.ok else ExitCode.CHECK_FAILED)


@click.group()
@click.version_option(version=__version__, prog_name="hom-twist")
@click.option("--verbose", is_flag=True, help="Log at DEBUG level on the console")
def cli(verbose: bool):
    """hom-twist - exact verification of Hom-bialgebras, twists and R-matrices."""
    setup_logging("DEBUG" if verbose else None)


@cli.command()
@click.argument("source")
@click.option(
    "--suite",
    type=click.Choice([s.value for s in Suite]),
    default=Suite.ALL.value,
    help="Which axiom suite to run",
)
@click.option("--report", "report_path", type=click.Path(), help="Report file path")
def verify(source: str, suite: str, report_path: Optional[str]):
    """Verify the axioms of an algebra file or library instance."""
    try:
        loaded, name = _load_source(source)
        H = loaded.data
        suite = Suite(suite)
        with console.status(f"Verifying {name} ({suite.value})..."):
            if suite is Suite.ALGEBRA:
                report = check_hom_algebra(H)
            elif suite is Suite.COALGEBRA:
                report = check_hom_coalgebra(H)
            elif suite is Suite.BIALGEBRA:
                report = check_hom_bialgebra(H)
            elif suite is Suite.HOPF:
                report = check_antipode(H)
            elif suite is Suite.MODULE:
                report = VerificationReport(subject=f"{H.name} modules")
                for module in default_modules(H):
                    report.extend(check_hom_module(module))
            else:
                report = verify_suite(H)
                if H.alpha.is_identity():
                    report.extend(check_flavor_agreement(H).as_informational())
                if H.alpha_powers.invertible:
                    for module in default_modules(H):
                        report.extend(check_hom_module(module))
                # named elements are only defined over a valid Hom-bialgebra
                if report.ok:
                    report.extend(_named_elements(H, loaded))
        _finish("verify", name, report, report_path, {"source": source, "suite": suite.value})
    except SystemExit:
        raise
    except Exception as e:
        _fail(e, {"command": "verify", "source": source})


def _named_elements(H, loaded: LoadedAlgebra) -> VerificationReport:
    """Validation records of the twists and R-matrices stored with H."""
    report = VerificationReport(subject=f"{H.name} named elements")
    if H.flavor is Flavor.MONOIDAL:
        for name, sigma in loaded.twists.items():
            outcome = validate_twist(H, sigma, name)
            report.extend(outcome.report, prefix=f"{name}:")
    for name, (system, R) in loaded.rmatrices.items():
        if system.flavor is H.flavor:
            outcome = validate_rmatrix(H, R, system, name)
            report.extend(outcome.report, prefix=f"{name}:")
    return report


@cli.command()
@click.argument("source")
@click.option("--twist", "twist_name", required=True, help="Name of the twist stored with the algebra")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Where to write H^σ")
@click.option("--report", "report_path", type=click.Path(), help="Report file path")
def twist(source: str, twist_name: str, out_path: str, report_path: Optional[str]):
    """Twist a monoidal Hom-bialgebra and write the plain Hom-bialgebra H^σ."""
    try:
        ok, message = InputValidator.validate_name(twist_name, "Twist name")
        if not ok:
            raise ParseError(message)
        ok, message = InputValidator.validate_output_path(out_path)
        if not ok:
            raise ParseError(message, path=out_path)
        loaded, name = _load_source(source)
        H = loaded.data
        if twist_name not in loaded.twists:
            raise ParseError(f"{name} has no twist named {twist_name!r}; known: {sorted(loaded.twists)}")

        outcome = validate_twist(H, loaded.twists[twist_name], twist_name)
        report = VerificationReport(subject=f"{name} twisted by {twist_name}")
        report.extend(outcome.report)
        parameters = {"source": source, "twist": twist_name, "out": out_path}
        if not outcome.ok:
            safe_print(f"[red]{SYMBOLS['error']} {twist_name} is not a twist of {name}[/red]")
            _finish("twist", f"{name}-{twist_name}", report, report_path, parameters)
        tw = outcome.value

        with console.status(f"Twisting {name} by {twist_name}..."):
            twisted = build_twisted_bialgebra(H, tw, collect=report)
            report.extend(check_twisted_cocycle_identity(H, tw))
            if H.antipode is not None:
                hopf = build_twisted_hopf(H, tw, twisted)
                report.extend(hopf.report, prefix="twisted.")
                twisted = hopf.algebra
            if H.alpha_powers.invertible:
                report.extend(check_twist_lift_commutation(H, tw))
            twisted_rmatrices = {}
            for rm_name, (system, R) in loaded.rmatrices.items():
                if system is not RMatrixSystem.MONOIDAL_Q:
                    continue
                rm_outcome = validate_rmatrix(H, R, system, rm_name)
                if not rm_outcome.ok:
                    report.extend(rm_outcome.report, prefix=f"{rm_name}:")
                    continue
                report.extend(check_r13_readings(H, rm_outcome.value).as_informational(), prefix=f"{rm_name}:")
                twisted_rm = twist_rmatrix(H, tw, rm_outcome.value, twisted=twisted)
                report.extend(twisted_rm.report, prefix=f"{twisted_rm.name}:")
                twisted_rmatrices[rm_name] = (RMatrixSystem.PLAIN_Q, twisted_rm.R)
            if is_known_instance(source) and not Path(source).exists():
                report.extend(_module_twists(source, tw))

        write_algebra(out_path, to_algebra_file(twisted, rmatrices=twisted_rmatrices))
        safe_print(f"[green]{SYMBOLS['check']} Wrote {twisted.name} to {out_path}[/green]")
        _finish("twist", f"{name}-{twist_name}", report, report_path, parameters)
    except SystemExit:
        raise
    except Exception as e:
        _fail(e, {"command": "twist", "source": source, "twist": twist_name})


def _module_twists(instance_name: str, tw) -> VerificationReport:
    """Axiom reports of the twisted module algebras and coalgebras of a library instance."""
    inst = get_instance(instance_name)
    report = VerificationReport(subject=f"{inst.name} module (co)algebras")
    for label, A_mod in module_algebras(inst).items():
        try:
            algebra = twist_module_algebra(inst.data, tw, A_mod)
            report.extend(check_hom_algebra(algebra), prefix=f"module_algebra.{label}.")
        except TheoremCheckFailed as e:
            report.extend(e.report, prefix=f"module_algebra.{label}.")
    for label, C_mod in module_coalgebras(inst).items():
        try:
            coalgebra = twist_module_coalgebra(inst.data, tw, C_mod)
            report.extend(check_hom_coalgebra(coalgebra, space="C", ctx=coalgebra.context()),
                          prefix=f"module_coalgebra.{label}.")
        except TheoremCheckFailed as e:
            report.extend(e.report, prefix=f"module_coalgebra.{label}.")
    return report


@cli.command()
@click.argument("source")
@click.option("--grid", nargs=2, type=str, default=None, metavar="I_RANGE J_RANGE",
              help="Grid ranges such as -2..2 -2..2 (default from config)")
@click.option("--modules", "module_spec", default=None, help="Comma-separated module kinds")
@click.option("--seed", default=None, type=int, help="Seed of the random module")
@click.option("--rmatrix", "rmatrix_name", default=None, help="Braid with this stored R-matrix")
@click.option("--twist", "twist_name", default=None, help="Also check the twisted-category functor")
@click.option("--probe", is_flag=True, help="Probe functor shifts at (0,0) (informational)")
@click.option("--report", "report_path", type=click.Path(), help="Report file path")
def repcheck(source: str, grid: Optional[Tuple[str, str]], module_spec: Optional[str], seed: Optional[int],
             rmatrix_name: Optional[str], twist_name: Optional[str], probe: bool, report_path: Optional[str]):
    """Check monoidal and braided coherence of Rep^{i,j} over a grid."""
    try:
        settings = get_settings().rep_category
        if grid:
            ranges = []
            for value in grid:
                ok, message, parsed = InputValidator.validate_grid_range(value)
                if not ok:
                    raise ParseError(message)
                ranges.append(parsed)
        else:
            ranges = [(settings.grid_min, settings.grid_max)] * 2
        kinds = settings.module_set
        if module_spec:
            ok, message, kinds = InputValidator.validate_module_set(module_spec)
            if not ok:
                raise ParseError(message)
        if seed is not None:
            ok, message, seed = InputValidator.validate_seed(seed)
            if not ok:
                raise ParseError(message)

        loaded, name = _load_source(source)
        H = loaded.data
        window = H.alpha_window
        (i_lo, i_hi), (j_lo, j_hi) = ranges
        configs = grid_configs(H.flavor, i_lo, i_hi, window, j_range=(j_lo, j_hi))
        modules = default_modules(H, kinds, seed)

        Rm = None
        if rmatrix_name:
            if rmatrix_name not in loaded.rmatrices:
                raise ParseError(f"{name} has no R-matrix named {rmatrix_name!r}")
            system, R = loaded.rmatrices[rmatrix_name]
            outcome = validate_rmatrix(H, R, system, rmatrix_name)
            if not outcome.ok:
                _finish("repcheck", name, outcome.report, report_path, {"source": source})
            Rm = outcome.value
        tw = None
        if twist_name:
            if twist_name not in loaded.twists:
                raise ParseError(f"{name} has no twist named {twist_name!r}")
            outcome = validate_twist(H, loaded.twists[twist_name], twist_name)
            if not outcome.ok:
                _finish("repcheck", name, outcome.report, report_path, {"source": source})
            tw = outcome.value

        with console.status(f"Checking {len(configs)} grid points on {name}..."):
            report = run_rep_grid(configs, modules, Rm=Rm, tw=tw)
            if H.alpha.is_identity():
                report.extend(check_identity_collapse(H, modules, Rm))
            if probe and tw is not None:
                report.extend(probe_functor_G_shifts(H, tw, modules, Rm=Rm).as_report())
        parameters = {
            "source": source,
            "grid": [list(ranges[0]), list(ranges[1])],
            "modules": list(kinds),
            "seed": settings.seed if seed is None else seed,
            "rmatrix": rmatrix_name,
            "twist": twist_name,
        }
        _finish("repcheck", name, report, report_path, parameters)
    except SystemExit:
        raise
    except Exception as e:
        _fail(e, {"command": "repcheck", "source": source})


@cli.command("export-example")
@click.argument("name")
@click.option("--out", "out_path", required=True, type=click.Path(), help="Output algebra file")
@click.option("--plain", is_flag=True, help="Export the plain lift instead of the monoidal one")
@click.option("--report", "report_path", type=click.Path(), help="Report file path")
def export_example(name: str, out_path: str, plain: bool, report_path: Optional[str]):
    """Write a library instance as a canonical algebra file."""
    try:
        ok, message = InputValidator.validate_name(name, "Instance name")
        if not ok:
            raise ParseError(message)
        ok, message = InputValidator.validate_output_path(out_path)
        if not ok:
            raise ParseError(message, path=out_path)
        inst = get_instance(name)
        if plain:
            model = to_algebra_file(inst.plain)
        else:
            model = to_algebra_file(
                inst.data,
                twists={n: tw.sigma for n, tw in inst.twists.items()},
                rmatrices={n: (rm.system, rm.R) for n, rm in inst.rmatrices.items()},
            )
        text = serialize(model)
        reparsed = from_algebra_file(parse_text(text))
        again = serialize(to_algebra_file(reparsed.data, reparsed.twists, reparsed.rmatrices))
        report = VerificationReport(subject=f"export {name}")
        report.add(check_result("export.round_trip", "serialize(parse(file)) = file", again == text,
                                counterexample=None if again == text else [out_path]))
        write_algebra(out_path, model)
        safe_print(f"[green]{SYMBOLS['check']} Exported {name} to {out_path}[/green]")
        _finish("export-example", name, report, report_path, {"name": name, "out": out_path, "plain": plain})
    except SystemExit:
        raise
    except Exception as e:
        _fail(e, {"command": "export-example", "name": name})


@cli.command("list-examples")
def list_examples():
    """List the built-in instances."""
    try:
        table = Table(title="Library instances")
        table.add_column("Name", style="cyan")
        table.add_column("Dim", style="yellow")
        table.add_column("α", style="magenta")
        table.add_column("Twists", style="green")
        table.add_column("R-matrices", style="blue")
        with console.status("Building instances..."):
            for name in list_instances():
                inst = get_instance(name)
                table.add_row(
                    name,
                    str(inst.data.dim),
                    "id" if inst.alpha.is_identity() else "non-trivial",
                    ", ".join(inst.twists),
                    ", ".join(inst.rmatrices),
                )
        console.print(table)
        safe_print(f"{SYMBOLS['info']} Parametric names: group_<n>_<m>, sweedler_<p>_<q>")
    except Exception as e:
        _fail(e, {"command": "list-examples"})


def main():
    """Main entry point."""
    cli()


if __name__ == "__main__":
    main()
