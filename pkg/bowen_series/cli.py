"""Command-line front end.

Examples:
  bowen-series catalog build --map hbs --k 3 --out map.json
  bowen-series verify --map C
  bowen-series sft matrix --map map.json --format csv
  bowen-series phi eval --map map.json --theta 0.123 --depth 30
  bowen-series qmark --x 5/13
  bowen-series dim hausdorff --variant hbs3 --width 0.02
  bowen-series render tessellation --group G2 --depth 3 --out g2.svg

Exit status: 0 when the command passes, 2 when a check fails or the input
is rejected, 1 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from .catalog import CATALOG_MAPS, build_named_map, describe, group_presentation, load_map
from .circle_maps import as_piecewise, check_markov, covering_degree, mateability_report
from .conjugacy import DEFAULT_PHI_DEPTH, QMARK_DEPTH, build_phi, is_dyadic, minkowski_q, minkowski_q_inverse
from .dimension import (
    DEFAULT_TARGET_WIDTH,
    MONTE_CARLO_SAMPLES,
    VARIANTS,
    birkhoff_hausdorff_estimate,
    hausdorff_mme,
    interval_map,
    lyapunov_bracket,
    question_mark_conjugacy_check,
    vertex_set,
)
from .freegroup import (
    boundary_mass_scaling,
    hbs_generating_set,
    ps_partial_cone_mass,
    sphere_sizes,
    standard_generating_set,
    volume_entropy,
)
from .render import TARGETS, RenderSpec, render_fundamental_domain, render_interval_map, render_tessellation
from .report_store import KIND_DIMENSION, KIND_ENTROPY, KIND_MATRIX, KIND_VERIFY, ReportYamlRepository
from .symbolic import (
    DEFAULT_OE_DEPTH,
    Cylinder,
    admissible_words,
    cylinder_mass,
    entropy,
    parry_measure,
    perron,
    sft_of,
)

FORMATS = ("json", "csv", "svg")
EXIT_PASS = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


@dataclass
class CommandResult:
    subject: str
    data: dict[str, Any]
    passed: bool = True
    csv: str | None = None
    svg: str | None = None
    kind: str | None = None
    default_format: str = "json"
    notes: list[str] = field(default_factory=list)

    def render(self, fmt: str | None) -> str:
        fmt = fmt or self.default_format
        if fmt == "json":
            return json.dumps(self.data, indent=2, ensure_ascii=False) + "\n"
        text = self.csv if fmt == "csv" else self.svg
        if text is None:
            raise ValueError(f"{fmt} output is not available for {self.subject}")
        return text


def _exact(value: Fraction | float) -> str | float:
    return str(value) if isinstance(value, Fraction) else float(value)


def _turn(value: float) -> float:
    return float(f"{value:.15g}")


def _selection(text: str | None) -> list[int] | None:
    if not text:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"Invalid selection: {text}") from None


def _is_map_file(text: str) -> bool:
    return text.endswith(".json") or Path(text).is_file()


def _map_source(text: str) -> str:
    if text in CATALOG_MAPS or _is_map_file(text):
        return text
    raise argparse.ArgumentTypeError(f"expected one of {', '.join(CATALOG_MAPS)} or a map .json file, got {text!r}")


def _map_from_args(args: argparse.Namespace) -> Any:
    if args.map not in CATALOG_MAPS:
        path = Path(args.map)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except OSError as error:
            raise ValueError(f"cannot read map file {path}: {error.strerror or error}") from None
        if not isinstance(data, dict):
            raise ValueError(f"{path} does not hold a map object")
        return load_map(data)
    return build_named_map(args.map, d=args.d, k=args.k, selection=_selection(args.selection))


def _map_subject(obj: Any) -> str:
    return as_piecewise(obj).name or "map"


def _csv_lines(header: Sequence[Any], rows: Sequence[Sequence[Any]]) -> str:
    lines = [",".join(str(v) for v in header)]
    lines += [",".join(str(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def cmd_catalog(args: argparse.Namespace) -> CommandResult:
    if args.action == "build" and args.map is None:
        raise ValueError("catalog build needs --map")
    if args.action == "list" or args.map is None:
        return CommandResult("catalog", {"maps": list(CATALOG_MAPS)}, csv=_csv_lines(["map"], [[m] for m in CATALOG_MAPS]))
    obj = _map_from_args(args)
    pm = as_piecewise(obj)
    rows = [
        [piece.name, str(piece.label) if piece.label is not None else "", _turn(piece.arc.start_turn), _turn(piece.arc.end_turn)]
        for piece in pm.pieces
    ]
    return CommandResult(
        _map_subject(obj),
        describe(obj),
        csv=_csv_lines(["arc", "label", "start", "end"], rows),
        svg=render_fundamental_domain(obj),
    )


def cmd_verify(args: argparse.Namespace) -> CommandResult:
    obj = _map_from_args(args)
    report = mateability_report(
        obj,
        oe_depth=args.oe_depth,
        expansivity_depth=args.expansivity_depth,
        samples=args.samples,
        seed=args.seed,
    )
    notes = [f"item {i.number} ({i.name}): {i.status}; {i.detail}" for i in report.items if i.detail]
    return CommandResult(report.subject, report.to_dict(), report.passed, csv=report.to_csv(), kind=KIND_VERIFY, notes=notes)


def cmd_matrix(args: argparse.Namespace) -> CommandResult:
    obj = _map_from_args(args)
    matrix = check_markov(obj)
    data = matrix.to_dict()
    data["row_sums"] = list(matrix.row_sums)
    data["degree"] = covering_degree(obj)
    return CommandResult(_map_subject(obj), data, csv=matrix.to_csv(), kind=KIND_MATRIX)


def cmd_entropy(args: argparse.Namespace) -> CommandResult:
    obj = _map_from_args(args)
    sft = sft_of(obj)
    data = {
        "map": _map_subject(obj),
        "symbols": sft.size,
        "eigenvalue": perron(sft.matrix).eigenvalue,
        "entropy": entropy(sft),
        "irreducible": sft.is_irreducible(),
    }
    return CommandResult(_map_subject(obj), data, kind=KIND_ENTROPY)


def cmd_measure(args: argparse.Namespace) -> CommandResult:
    obj = _map_from_args(args)
    sft = sft_of(obj)
    measure = parry_measure(sft)
    if args.cylinder:
        words = [Cylinder.parse(args.cylinder).word]
    else:
        words = admissible_words(sft, args.rank)
    rows = []
    for word in words:
        mass = cylinder_mass(measure, word)
        rows.append({"cylinder": [s + 1 for s in word], "mass": _exact(mass), "admissible": sft.admissible(word)})
    data = {"map": _map_subject(obj), "exact": measure.exact, "cylinders": rows}
    csv = _csv_lines(["cylinder", "mass"], [["-".join(map(str, r["cylinder"])), r["mass"]] for r in rows])
    return CommandResult(_map_subject(obj), data, csv=csv)


def cmd_growth(args: argparse.Namespace) -> CommandResult:
    gs = hbs_generating_set() if args.set == "hbs" else standard_generating_set(args.d)
    sizes = sphere_sizes(gs, args.rmax)
    data: dict[str, Any] = {"generating_set": gs.name, "sphere_sizes": sizes}
    if args.rmax >= 4:
        ve = volume_entropy(gs, args.rmax)
        data["volume_entropy"] = ve.exact if ve.exact is not None else ve.finite
        data["growth_ratio"] = str(ve.ratio) if ve.ratio is not None else None
    return CommandResult(gs.name, data, csv=_csv_lines(["radius", "size"], list(enumerate(sizes))))


def cmd_psmass(args: argparse.Namespace) -> CommandResult:
    cone = ps_partial_cone_mass(args.d, args.n, args.r)
    data = {
        "d": args.d,
        "n": args.n,
        "r": args.r,
        "partial": str(cone.partial),
        "limit": str(cone.limit),
        "scaling": str(boundary_mass_scaling(args.d, args.r)),
    }
    return CommandResult(f"F{args.d}", data)


def cmd_sft(args: argparse.Namespace) -> CommandResult:
    return {"matrix": cmd_matrix, "entropy": cmd_entropy, "mass": cmd_measure}[args.action](args)


def cmd_group(args: argparse.Namespace) -> CommandResult:
    return {"growth": cmd_growth, "psmass": cmd_psmass}[args.action](args)


def cmd_phi(args: argparse.Namespace) -> CommandResult:
    obj = _map_from_args(args)
    phi = build_phi(obj, args.depth)
    values = []
    for text in args.theta:
        value = phi.evaluate(Fraction(text), args.depth)
        values.append({"theta": text, "turn": _turn(value.turn), "error": value.error})
    data = {"map": _map_subject(obj), "degree": phi.degree, "depth": args.depth, "values": values}
    csv = _csv_lines(["theta", "turn", "error"], [[v["theta"], v["turn"], v["error"]] for v in values])
    return CommandResult(_map_subject(obj), data, csv=csv)


def cmd_qmark(args: argparse.Namespace) -> CommandResult:
    texts = list(args.x or []) + list(args.values)
    if not texts:
        raise ValueError("qmark needs at least one value (--x or positional)")
    values = []
    for text in texts:
        if args.inverse:
            y = minkowski_q_inverse(text, args.depth)
            values.append({"y": text, "x": str(y)})
        else:
            q = minkowski_q(text, args.depth)
            values.append({"x": text, "q": str(q), "dyadic": is_dyadic(q)})
    data: dict[str, Any] = {"inverse": args.inverse, "values": values}
    passed = True
    if args.conjugacy_rank is not None:
        passed = question_mark_conjugacy_check(args.conjugacy_rank)
        data["conjugacy_rank"] = args.conjugacy_rank
        data["conjugacy"] = passed
    keys = ["y", "x"] if args.inverse else ["x", "q"]
    return CommandResult("qmark", data, passed, csv=_csv_lines(keys, [[v[k] for k in keys] for v in values]))


def cmd_dim(args: argparse.Namespace) -> CommandResult:
    imap = interval_map(args.variant)
    if args.action == "vertices":
        vertices = vertex_set(imap, args.rank)
        data = {"variant": args.variant, "rank": args.rank, "vertices": [str(v) for v in vertices]}
        return CommandResult(args.variant, data, csv=_csv_lines(["vertex"], [[str(v)] for v in vertices]))
    if args.action == "lyapunov":
        bracket = lyapunov_bracket(imap, args.rank)
        return CommandResult(args.variant, bracket.to_dict(), kind=KIND_DIMENSION)
    estimate = hausdorff_mme(imap, args.target_width)
    data = estimate.to_dict()
    if args.monte_carlo:
        if args.variant != "hbs3":
            raise ValueError("the Monte-Carlo estimate is available for hbs3 only")
        data["birkhoff"] = birkhoff_hausdorff_estimate(args.samples, args.seed)
    return CommandResult(args.variant, data, estimate.reached, kind=KIND_DIMENSION)


def cmd_render(args: argparse.Namespace) -> CommandResult:
    spec = RenderSpec(args.target, depth=args.depth, size=args.size)
    if args.target == "tessellation":
        subject = args.group
        svg = render_tessellation(group_presentation(args.group), args.depth, spec)
    elif args.target == "domain":
        obj = _map_from_args(args)
        subject = _map_subject(obj)
        svg = render_fundamental_domain(obj, spec)
    else:
        subject = args.variant
        svg = render_interval_map(interval_map(args.variant), spec)
    return CommandResult(subject, {"target": args.target, "subject": subject, "svg": svg}, svg=svg, default_format="svg")


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", type=Path, default=None, help="write the result to this file instead of stdout")
    parser.add_argument("--format", choices=FORMATS, default=None, help="output format (json unless stated otherwise)")
    parser.add_argument("--data-dir", type=Path, default=None, help="record the run in the YAML report store here")


def _add_map(parser: argparse.ArgumentParser, default: str | None = "bs") -> None:
    parser.add_argument(
        "--map",
        type=_map_source,
        default=default,
        help=f"catalog name ({', '.join(CATALOG_MAPS)}) or a map .json written by 'catalog build'",
    )
    parser.add_argument("--d", type=int, default=None, help="number of free generators (bs)")
    parser.add_argument("--k", type=int, default=None, help="polygon size (hbs, cfm, interp, B)")
    parser.add_argument("--selection", default=None, help="comma-separated top-edge indices for interp")


def _add_cylinder(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--cylinder", "--word", dest="cylinder", default=None, help="1-based symbols, e.g. 1,3,5")
    parser.add_argument("--rank", type=int, default=1, help="list every admissible cylinder of this rank")


def _add_growth(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--set", choices=("std", "standard", "hbs"), default="std")
    parser.add_argument("--rmax", type=int, default=6)


def _add_psmass(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=10)
    parser.add_argument("--r", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="bowen-series",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("catalog", help="list the catalog or build one map as JSON")
    p.add_argument("action", nargs="?", choices=("list", "build"), default=None)
    _add_map(p, default=None)
    _add_output(p)
    p.set_defaults(handler=cmd_catalog)

    p = sub.add_parser("verify", help="mateability report for a catalog map")
    _add_map(p)
    p.add_argument("--oe-depth", type=int, default=DEFAULT_OE_DEPTH)
    p.add_argument("--expansivity-depth", type=int, default=8)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=2024)
    _add_output(p)
    p.set_defaults(handler=cmd_verify)

    for name, handler, text in (
        ("matrix", cmd_matrix, "transition matrix of the Markov partition"),
        ("entropy", cmd_entropy, "topological entropy of the coding subshift"),
    ):
        p = sub.add_parser(name, help=text)
        _add_map(p)
        _add_output(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("measure", help="Parry measure of cylinders")
    _add_map(p)
    _add_cylinder(p)
    _add_output(p)
    p.set_defaults(handler=cmd_measure)

    p = sub.add_parser("sft", help="coding subshift: matrix, entropy or cylinder mass")
    p.add_argument("action", choices=("matrix", "entropy", "mass"))
    _add_map(p)
    _add_cylinder(p)
    _add_output(p)
    p.set_defaults(handler=cmd_sft)

    p = sub.add_parser("growth", help="sphere sizes and volume entropy of a free group")
    p.add_argument("--d", type=int, default=2)
    _add_growth(p)
    _add_output(p)
    p.set_defaults(handler=cmd_growth)

    p = sub.add_parser("psmass", help="Patterson-Sullivan cone masses")
    p.add_argument("--d", type=int, default=2)
    _add_psmass(p)
    _add_output(p)
    p.set_defaults(handler=cmd_psmass)

    p = sub.add_parser("group", help="free-group growth or Patterson-Sullivan cone masses")
    p.add_argument("action", choices=("growth", "psmass"))
    p.add_argument("--d", type=int, default=2)
    _add_growth(p)
    _add_psmass(p)
    _add_output(p)
    p.set_defaults(handler=cmd_group)

    p = sub.add_parser("phi", help="conjugacy from z^deg to a Markov circle map")
    p.add_argument("action", nargs="?", choices=("eval",), default="eval")
    _add_map(p)
    p.add_argument("--theta", nargs="+", default=["1/3"], help="turns as fractions or decimals")
    p.add_argument("--depth", type=int, default=DEFAULT_PHI_DEPTH)
    _add_output(p)
    p.set_defaults(handler=cmd_phi)

    p = sub.add_parser("qmark", help="Minkowski question-mark function")
    p.add_argument("values", nargs="*", metavar="x")
    p.add_argument("--x", action="append", default=None, help="argument of ?, repeatable")
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--depth", type=int, default=QMARK_DEPTH)
    p.add_argument("--conjugacy-rank", type=int, default=None)
    _add_output(p)
    p.set_defaults(handler=cmd_qmark)

    p = sub.add_parser("dim", help="interval-map vertices, Lyapunov brackets and dimension")
    p.add_argument("action", choices=("vertices", "lyapunov", "hausdorff"))
    p.add_argument("--variant", choices=tuple(VARIANTS), default="bs3")
    p.add_argument("--rank", type=int, default=3)
    p.add_argument("--width", "--target-width", dest="target_width", type=float, default=DEFAULT_TARGET_WIDTH)
    p.add_argument("--monte-carlo", action="store_true")
    p.add_argument("--samples", type=int, default=MONTE_CARLO_SAMPLES)
    p.add_argument("--seed", type=int, default=2024)
    _add_output(p)
    p.set_defaults(handler=cmd_dim)

    p = sub.add_parser("render", help="SVG drawings (svg output by default)")
    p.add_argument("target", choices=TARGETS)
    _add_map(p)
    p.add_argument("--group", default="G2", help="G<d> or Gamma0")
    p.add_argument("--variant", choices=tuple(VARIANTS), default="bs3")
    p.add_argument("--depth", type=int, default=3, help="word length or vertex rank")
    p.add_argument("--size", type=int, default=512)
    _add_output(p)
    p.set_defaults(handler=cmd_render)
    return parser


def _status(line: str) -> None:
    print(line, file=sys.stderr)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    _status(f"[OK] written {out}")


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as error:
        parser.print_usage(sys.stderr)
        _status(f"[ERROR] {error}")
        return EXIT_USAGE
    except SystemExit as exit_:
        return int(exit_.code or 0)

    handler: Callable[[argparse.Namespace], CommandResult] = args.handler
    repository = ReportYamlRepository(args.data_dir) if args.data_dir is not None else None
    try:
        result = handler(args)
        text = result.render(args.format)
    except ValueError as error:
        _status(f"[ERROR] {args.command}: {error}")
        if repository is not None:
            repository.log_failure(args.command, error)
        return EXIT_FAILED

    _emit(text, args.out)
    for note in result.notes:
        _status(f"[INFO] {note}")
    if repository is not None and result.kind is not None:
        record = repository.add_report(result.kind, result.subject, result.passed, result.data)
        _status(f"[INFO] report {record.report_id} saved to {repository.reports_file}")
    if not result.passed:
        _status(f"[ERROR] {args.command} {result.subject}: check failed")
        return EXIT_FAILED
    _status(f"[OK] {args.command} {result.subject}")
    return EXIT_PASS


cli_main = main
