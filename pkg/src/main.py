#!/usr/bin/env python3
import argparse
import json
import logging
import sys
from pathlib import Path

from rich.console import Console
from rich.logging import RichHandler
from rich.progress import BarColumn, MofNCompleteColumn, Progress, SpinnerColumn, TextColumn, TimeElapsedColumn
from rich.table import Table

from .config import ConfigError, get_config, load_config
from .degeneration import (
    classical_limit_check,
    classical_moment_expr,
    classical_ring,
    hbar_moment_check,
    hbar_moment_table,
)
from .models import CheckReport, CheckStatus, QuiverEcho, RunConfig, RunReport
from .moment import (
    CharacterSpec,
    edge_moment_at,
    localized_presentation,
    moment_ideal_generators,
    scalar_value,
    vertex_moment,
)
from .quiver import Quiver, QuiverParseError, flatness_report, load_quiver
from .relations import AlgebraKind, UnsupportedError, full_presentation, render_relation
from .suites import SuiteContext, get_suite, list_available_suites
from .verify import GuardExceeded, hilbert_table, ideal_span, rank_crosscheck

console = Console()
err_console = Console(stderr=True)

EXIT_USAGE = 3

STATUS_STYLE = {
    CheckStatus.PASS: "[green]pass[/green]",
    CheckStatus.FAIL: "[red]fail[/red]",
    CheckStatus.INCONCLUSIVE: "[yellow]inconclusive[/yellow]",
}


class UsageError(Exception):
    """Bad command-line input; exits with code 3."""


class QmqvArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        err_console.print(f"[red]{self.prog}: error: {message}[/red]")
        sys.exit(EXIT_USAGE)


def _progress() -> Progress:
    return Progress(
        SpinnerColumn(),
        TextColumn("[progress.description]{task.description}"),
        BarColumn(),
        MofNCompleteColumn(),
        TimeElapsedColumn(),
        console=err_console,
        transient=True,
    )


def _text_mode(args: argparse.Namespace) -> bool:
    return args.format == "text"


def _run_config(args: argparse.Namespace, config: dict, suites: list[str] | None = None) -> RunConfig:
    return RunConfig(
        quiver_path=str(args.quiver),
        command=args.command,
        suites=suites or [],
        max_degree=getattr(args, "max_degree", None),
        output_format=args.format,
        seed=config["crosscheck"]["seed"],
        max_words=config["guards"]["max_words"],
        max_generators=config["guards"]["max_generators"],
        deterministic=args.deterministic,
    )


def _report(args: argparse.Namespace, config: dict, q: Quiver, checks: list[CheckReport], payload: dict | None,
            suites: list[str] | None = None) -> RunReport:
    echo = q.to_dict()
    return RunReport(
        command=args.command,
        config=_run_config(args, config, suites),
        quiver=QuiverEcho(name=q.name, vertices=echo["vertices"], edges=echo["edges"]),
        checks=checks,
        payload=payload,
    )


def _kind(args: argparse.Namespace) -> AlgebraKind:
    return AlgebraKind.OQ if args.kind.lower() == "oq" else AlgebraKind.DQ


def _print_checks(checks: list[CheckReport], title: str) -> None:
    if not checks:
        return
    table = Table(title=title)
    table.add_column("Check", style="cyan")
    table.add_column("Parameters")
    table.add_column("Status")
    table.add_column("Details", overflow="fold")
    for check in checks:
        params = ", ".join(f"{k}={v}" for k, v in check.parameters.items() if not isinstance(v, (list, dict)))
        details = json.dumps(check.witness, ensure_ascii=False) if check.witness else ""
        table.add_row(check.check_name, params, STATUS_STYLE[check.status], details[:200])
    console.print(table)


def cmd_relations(args: argparse.Namespace, config: dict, q: Quiver) -> RunReport:
    """Print the full O_q or D_q presentation."""
    p = full_presentation(q, _kind(args))
    rows = [
        {"label": label, "text": render_relation(r, p), "poly": r.to_schema(p.rank)}
        for label, r in zip(p.labels, p.relations)
    ]
    payload = {
        "kind": p.kind.value,
        "generators": [g.to_schema() for g in p.generators],
        "groups": p.groups(),
        "relations": rows,
    }
    if _text_mode(args):
        table = Table(title=f"{p.kind.value} relations ({len(rows)})")
        table.add_column("Group", style="magenta")
        table.add_column("Relation")
        for row in rows:
            table.add_row(row["label"], row["text"] + " = 0")
        console.print(table)
    return _report(args, config, q, [], payload)


def cmd_verify(args: argparse.Namespace, config: dict, q: Quiver) -> RunReport:
    """Run verification suites."""
    names = list_available_suites() if args.suite == "all" else [args.suite]
    suites = [get_suite(name) for name in names]
    ctx = SuiteContext(q, config, args.max_degree)
    checks: list[CheckReport] = []
    if _text_mode(args):
        with _progress() as progress:
            task = progress.add_task("Verifying", total=len(suites))
            for suite in suites:
                progress.update(task, description=f"Suite {suite.suite_name()}")
                checks.extend(suite.run(ctx))
                progress.advance(task)
        _print_checks(checks, f"Verification of {q.name or args.quiver}")
    else:
        for suite in suites:
            checks.extend(suite.run(ctx))
    return _report(args, config, q, checks, None, names)


def _weights(text: str | None) -> dict[str, int] | None:
    """Parse ``u=-2,v=1`` into a weight vector."""
    if text is None:
        return None
    weights: dict[str, int] = {}
    for part in text.split(","):
        vid, sep, value = part.partition("=")
        try:
            weights[vid.strip()] = int(value)
        except ValueError:
            raise UsageError(f"--lambda expects vertex=integer pairs, got {part!r}") from None
        if not sep or not vid.strip():
            raise UsageError(f"--lambda expects vertex=integer pairs, got {part!r}")
    return weights


def cmd_flatness(args: argparse.Namespace, config: dict, q: Quiver) -> RunReport:
    """p(d) and the decomposition criterion for flatness of the moment map."""
    bound = args.bound if args.bound is not None else config["flatness"]["component_bound"]
    report = flatness_report(q, None, bound, _weights(args.lam))
    if _text_mode(args):
        verdict = "flat" if report.ok else ("not flat" if report.status is CheckStatus.FAIL else "undecided")
        if report.ok and report.parameters.get("strict"):
            verdict = "flat (strict)"
        console.print(f"[bold]p(d) = {report.parameters.get('p_value', '?')}[/bold]  {verdict}")
        if report.ok and not report.parameters.get("strict") and args.lam is None:
            console.print("[dim]Ties over zero; pass --lambda with weights orthogonal to d for a generic fibre.[/dim]")
        _print_checks([report], "Flatness")
    return _report(args, config, q, [report], None)


def cmd_hilbert(args: argparse.Namespace, config: dict, q: Quiver) -> RunReport:
    """Filtered and graded dimensions against the classical counts."""
    p = full_presentation(q, _kind(args))
    bounds = config["degree_bounds"]
    if args.max_degree is not None:
        D = args.max_degree
    elif len(p.generators) > bounds["pbw_large_threshold"]:
        D = bounds["pbw_large"]
    else:
        D = bounds["pbw_small"]
    params = {"kind": p.kind.value, "bound": D}
    try:
        span = ideal_span(p, D, config["guards"]["max_words"], config["guards"]["max_generators"])
        if _text_mode(args):
            with _progress() as progress:
                task = progress.add_task("Echelonizing", total=D + 1)
                table = hilbert_table(span, lambda k, _: progress.update(task, completed=k + 1))
        else:
            table = hilbert_table(span)
    except GuardExceeded as exc:
        check = CheckReport.inconclusive("hilbert", params, str(exc), bound=D)
        if _text_mode(args):
            _print_checks([check], "Hilbert series")
        return _report(args, config, q, [check], None)

    crosscheck = rank_crosscheck(span, config["crosscheck"]["points"], config["crosscheck"]["seed"])
    mismatch = next((r for r in table.rows if not r.matches), None)
    if mismatch is None:
        check = CheckReport.passed("hilbert", params, {"filtered": table.filtered})
    else:
        check = CheckReport.failed("hilbert", params, {
            "degree": mismatch.degree, "filtered": mismatch.filtered, "classical": mismatch.classical_filtered,
        })
    if _text_mode(args):
        out = Table(title=f"{p.kind.value} Hilbert table ({table.generators} generators)")
        for column in ("Degree", "Filtered", "Classical", "Graded", "Span rank"):
            out.add_column(column, justify="right")
        for row in table.rows:
            style = "" if row.matches else "[red]"
            out.add_row(str(row.degree), f"{style}{row.filtered}", str(row.classical_filtered),
                        str(row.graded), str(row.rank))
        console.print(out)
        agree = "[green]agree[/green]" if crosscheck["agree"] else "[red]disagree[/red]"
        console.print(f"[dim]rank cross-check at q0 = {', '.join(crosscheck['points'])}:[/dim] {agree}")
    return _report(args, config, q, [check], {"hilbert": table.to_dict(), "crosscheck": crosscheck})


def cmd_moment(args: argparse.Namespace, config: dict, q: Quiver) -> RunReport:
    """Edge and vertex moment matrices and the moment ideal generators."""
    t = scalar_value(args.t)
    xi = scalar_value(args.xi)
    p = localized_presentation(q, t)
    checks: list[CheckReport] = []
    vertices = []
    for v in q.vertex_ids:
        params = {"vertex": v, "t": str(t)}
        try:
            m = vertex_moment(q, v, t)
        except UnsupportedError as exc:
            checks.append(CheckReport.inconclusive("moment_map", params, f"unsupported: {exc}", bound=None))
            continue
        edges = [edge_moment_at(q, e, v, t).to_schema(p.rank) for e in q.incident_edges(v)]
        vertices.append({**m.to_schema(p.rank), "edges": edges})
        checks.append(CheckReport.passed("moment_map", params, {"dim": m.dim}))
        if _text_mode(args):
            table = Table(title=f"mu_{v}(l^i_j)")
            table.add_column("Entry", style="cyan")
            table.add_column("Image", overflow="fold")
            for i in range(1, m.dim + 1):
                for j in range(1, m.dim + 1):
                    table.add_row(f"l^{i}_{j}", m.entry(i, j).render(p.rank, pretty=True))
            console.print(table)
    payload: dict = {"t": str(t), "vertices": vertices}
    if all(c.ok for c in checks):
        generators = moment_ideal_generators(q, CharacterSpec.uniform(q, xi), t)
        payload["ideal"] = {"xi": str(xi), "generators": [g.to_schema(p.rank) for g in generators]}
    if _text_mode(args):
        _print_checks([c for c in checks if not c.ok], "Refused vertices")
    return _report(args, config, q, checks, payload)


def cmd_degenerate(args: argparse.Namespace, config: dict, q: Quiver) -> RunReport:
    """Classical limit of the relations and h^2 coefficients of the moment ideal."""
    order = args.order if args.order is not None else config["degeneration"]["order"]
    checks = [classical_limit_check(full_presentation(q, kind)) for kind in (AlgebraKind.OQ, AlgebraKind.DQ)]
    payload: dict = {"order": order}
    loops = [e.id for e in q.edges if e.is_loop]
    if loops:
        checks.append(CheckReport.inconclusive(
            "hbar_moment", {"order": order}, f"unsupported: loop edges {', '.join(loops)}", bound=order
        ))
    else:
        rows = hbar_moment_table(q, order=order)
        cr = classical_ring(q)
        payload["entries"] = [r.to_dict() for r in rows]
        payload["classical"] = {v: classical_moment_expr(q, v, cr).render() for v in q.vertex_ids}
        checks.append(hbar_moment_check(q, order=order))
        if _text_mode(args):
            table = Table(title=f"h-expansion of mu_v(l) - xi_v, order {order}")
            table.add_column("Vertex", style="cyan")
            table.add_column("Entry")
            table.add_column("h^2 coefficient", overflow="fold")
            table.add_column("2 (classical - L/2)", overflow="fold")
            for r in rows:
                table.add_row(r.vertex, f"({r.row},{r.col})", str(r.coefficients[2]), str(r.expected))
            console.print(table)
    if _text_mode(args):
        _print_checks(checks, "Degeneration")
    return _report(args, config, q, checks, payload)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("quiver", help="Path to the quiver JSON file")
    common.add_argument("-c", "--config", help="Path to config file (default: search for config.yaml)")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    common.add_argument("--seed", type=int, help="Seed for rank cross-checks (never affects verdicts)")
    common.add_argument("--format", choices=["text", "json"], default="text", help="Output format on stdout")
    common.add_argument("--json", dest="json_out", metavar="OUT", help="Also write the JSON report to OUT")
    common.add_argument("--deterministic", action="store_true", help="Omit timings for byte-stable JSON")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = QmqvArgumentParser(
        prog="qmqv",
        description="Exact verification of q-deformed quiver algebras",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s relations quivers/kronecker_2_2.json --kind Dq
  %(prog)s verify quivers/calogero_moser_1_1.json --suite all
  %(prog)s hilbert quivers/kronecker_1_1.json --kind Dq --max-degree 3
  %(prog)s flatness quivers/calogero_moser_1_2.json
  %(prog)s degenerate quivers/kronecker_1_2.json --format json
        """
    )
    common = _common_options()
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    relations_parser = subparsers.add_parser("relations", parents=[common], help="Print the presentation")
    relations_parser.add_argument("--kind", choices=["Oq", "Dq", "oq", "dq"], default="Oq")

    verify_parser = subparsers.add_parser("verify", parents=[common], help="Run verification suites")
    verify_parser.add_argument("--suite", choices=list_available_suites() + ["all"], default="all")
    verify_parser.add_argument("--max-degree", type=int, help="Degree bound for every suite")

    flatness_parser = subparsers.add_parser("flatness", parents=[common], help="Flatness criterion p(d)")
    flatness_parser.add_argument("--bound", type=int, help="Largest dimension component to enumerate")
    flatness_parser.add_argument(
        "--lambda", dest="lam", metavar="W", help="Weights such as u=-2,v=1; only roots orthogonal to them count"
    )

    hilbert_parser = subparsers.add_parser("hilbert", parents=[common], help="Hilbert table")
    hilbert_parser.add_argument("--kind", choices=["Oq", "Dq", "oq", "dq"], default="Oq")
    hilbert_parser.add_argument("--max-degree", type=int, help="Largest filtration degree")

    moment_parser = subparsers.add_parser("moment", parents=[common], help="Moment maps")
    moment_parser.add_argument("--t", default="1", help="Deformation parameter t (rational, default 1)")
    moment_parser.add_argument("--xi", default="1", help="Character value at every vertex (default 1)")

    degenerate_parser = subparsers.add_parser("degenerate", parents=[common], help="Classical and h-limits")
    degenerate_parser.add_argument("--order", type=int, help="Truncation order in h")
    return parser


def _setup_logging(config: dict, verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, str(config["logging"]["level"]).upper(), logging.WARNING)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        handlers=[RichHandler(console=err_console, show_path=False)],
        force=True,
    )


def main() -> None:
    """Main entry point."""
    parser = build_parser()
    args = parser.parse_args()

    if not args.command:
        parser.print_help()
        sys.exit(EXIT_USAGE)

    commands = {
        "relations": cmd_relations,
        "verify": cmd_verify,
        "flatness": cmd_flatness,
        "hilbert": cmd_hilbert,
        "moment": cmd_moment,
        "degenerate": cmd_degenerate,
    }

    try:
        config = load_config(args.config) if args.config else get_config()
        _setup_logging(config, args.verbose)
        if args.seed is not None:
            config["crosscheck"]["seed"] = args.seed
        if getattr(args, "max_degree", None) is not None and args.max_degree < 0:
            raise UsageError("--max-degree must be nonnegative")
        q = load_quiver(args.quiver)
        report = commands[args.command](args, config, q)
    except FileNotFoundError as e:
        err_console.print(f"[red]{e}[/red]")
        sys.exit(EXIT_USAGE)
    except (QuiverParseError, ConfigError, UsageError, ZeroDivisionError) as e:
        err_console.print(f"[red]Error: {e}[/red]")
        sys.exit(EXIT_USAGE)
    except ValueError as e:
        err_console.print(f"[red]Invalid input: {e}[/red]")
        sys.exit(EXIT_USAGE)

    text = report.to_json()
    if args.json_out:
        Path(args.json_out).write_text(text, encoding="utf-8")
    if args.format == "json":
        sys.stdout.write(text)
    else:
        console.print(f"\n[bold]Aggregate:[/bold] {STATUS_STYLE[report.aggregate]}")
    sys.exit(report.exit_code())


if __name__ == "__main__":
    main()
