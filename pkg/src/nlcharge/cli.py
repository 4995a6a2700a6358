"""Command-line interface: ``sweep``, ``figure``, ``state`` and ``verify``.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 numeric failure (non-convergence, out of radius).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from . import fock
from .checks import format_report, run_checks
from .errors import InvalidParameter, NumericError, UnknownMeasure, UnknownModel
from .nonclassicality import MEASURE_NAMES, UNDEFINED
from .nonlinearity import MODEL_NAMES, get_model
from .numerics import TruncationPolicy
from .presets import PRESETS, SweepSpec, run_sweep
from .states import build_state, eigen_residual, write_state_csv

log = logging.getLogger("nlcharge")

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    if v is None:
        return UNDEFINED
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".17g")


def _parse_value(text: str):
    try:
        return float(text)
    except ValueError:
        return text


def _params(items) -> dict:
    """``['nu=3', 'kappa=0.5']`` (or an already parsed mapping) to a dict."""
    if isinstance(items, dict):
        return dict(items)
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects key=value, got {item!r}")
        out[key.strip()] = _parse_value(value.strip())
    return out


def _policy(args) -> TruncationPolicy:
    return TruncationPolicy(rel_tail_tol=args.tail_tol, max_terms=args.max_terms)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w", newline="", encoding="utf-8"), True


def write_rows(fh, measures, reports) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["x", *measures])
    for rep in reports:
        writer.writerow([_fmt(rep.x)] + [_fmt(rep.values[m]) for m in measures])


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise UsageError(f"missing required option(s): {flags}")


def cmd_sweep(args) -> int:
    _require(args, "model", "q")
    measures = [m.strip() for m in args.measures.split(",") if m.strip()]
    spec = SweepSpec(
        model=args.model,
        q=args.q,
        parity=args.parity,
        x_min=args.x_min,
        x_max=args.x_max,
        count=args.points,
        spacing="log" if args.log else "linear",
        measures=tuple(measures),
        params=tuple(_params(args.param).items()),
        output=args.output,
    )
    reports = run_sweep(spec, jobs=args.jobs, policy=_policy(args))
    fh, close = _open_out(args.output)
    try:
        write_rows(fh, spec.measures, reports)
    finally:
        if close:
            fh.close()
    return EXIT_OK


_PLOT_TEMPLATE = '''"""Plot figure {fid}: {title}.

Generated by nlcharge; reads the CSV files next to this script.
"""
import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).resolve().parent
CURVES = {curves!r}
MEASURES = {measures!r}


def load(name):
    with open(HERE / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    x = [float(r["x"]) for r in rows]
    cols = {{m: [float("nan") if r[m] == "undefined" else float(r[m]) for r in rows] for m in MEASURES}}
    return x, cols


fig, axes = plt.subplots(1, len(MEASURES), figsize=(5 * len(MEASURES), 4), squeeze=False)
for label, style, name in CURVES:
    x, cols = load(name)
    for ax, m in zip(axes[0], MEASURES):
        ax.plot(x, cols[m], linestyle="--" if style == "dashed" else "-", label=label)
for ax, m in zip(axes[0], MEASURES):
    ax.set_xlabel("x = |xi|^2")
    ax.set_ylabel(m)
    ax.legend()
fig.suptitle({title!r})
fig.tight_layout()
fig.savefig(HERE / "fig{fid:02d}.png", dpi=150)
'''


def _slug(label: str) -> str:
    return "".join(ch if ch.isalnum() or ch == "_" else "" for ch in label.replace("=", ""))


def cmd_figure(args) -> int:
    _require(args, "id")
    preset = PRESETS[args.id]
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    curves = []
    for curve in preset.curves:
        name = f"fig{preset.id:02d}_{_slug(curve.label)}.csv"
        reports = run_sweep(curve.spec, jobs=args.jobs, policy=_policy(args))
        with open(out / name, "w", newline="", encoding="utf-8") as fh:
            write_rows(fh, preset.measures, reports)
        curves.append((curve.label, curve.style, name))
        log.info("wrote %s", out / name)
    script = _PLOT_TEMPLATE.format(fid=preset.id, title=preset.title, curves=curves, measures=list(preset.measures))
    (out / f"plot_fig{preset.id:02d}.py").write_text(script, encoding="utf-8")
    return EXIT_OK


def cmd_state(args) -> int:
    _require(args, "model", "q")
    model = get_model(args.model, **_params(args.param))
    xi = complex(args.xi_re, args.xi_im)
    state = build_state(xi, args.q, model, args.parity, _policy(args))
    squared = state.parity != "full"
    meta = {
        "model": model.describe(),
        "q": state.q,
        "xi": f"{_fmt(xi.real)},{_fmt(xi.imag)}",
        "parity": state.parity,
        "n_used": state.n_used,
        "log_normalization": _fmt(state.norm_log.log_magnitude),
        "eigen_residual" + ("_squared" if squared else ""): _fmt(eigen_residual(state, squared)),
    }
    write_state_csv(state, sys.stdout if args.output in (None, "-") else args.output, meta)
    return EXIT_OK


def cmd_verify(args) -> int:
    builder = fock.build_K0
    if args.inject_k0_offset:
        offset = args.inject_k0_offset

        def builder(model):
            return fock.build_K0(model) + offset * fock.identity()

    results = run_checks(args.level, k0_builder=builder)
    report = format_report(results)
    if args.output in (None, "-"):
        print(report)
    else:
        Path(args.output).write_text(report + "\n", encoding="utf-8")
        print(report.splitlines()[-1])
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


def _add_model_args(p):
    p.add_argument("--model", help=f"nonlinearity ({', '.join(MODEL_NAMES)}; aliases pt, h, bg, ...)")
    p.add_argument("--param", action="append", default=[], metavar="K=V", help="model parameter, e.g. nu=3")
    p.add_argument("--q", type=int, help="charge number n1 - n2")
    p.add_argument("--parity", choices=("full", "even", "odd"), default="full")


def _add_policy_args(p):
    p.add_argument("--max-terms", type=int, default=TruncationPolicy.max_terms)
    p.add_argument("--tail-tol", type=float, default=TruncationPolicy.rel_tail_tol)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nlcharge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sweep", help="evaluate measures along an x grid")
    _add_model_args(p)
    p.add_argument("--x-min", type=float, default=0.2)
    p.add_argument("--x-max", type=float, default=20.0)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--log", action="store_true", help="geometric grid spacing")
    p.add_argument("--measures", default="g", help=f"comma list from {', '.join(MEASURE_NAMES)}")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--jobs", type=int, default=1)
    _add_policy_args(p)
    p.add_argument("--config", help="JSON file whose keys mirror these flags")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="regenerate a figure preset (CSV + plot script)")
    p.add_argument("--id", type=int, choices=sorted(PRESETS))
    p.add_argument("-o", "--output", default="figures")
    p.add_argument("--jobs", type=int, default=1)
    _add_policy_args(p)
    p.add_argument("--config")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("state", help="dump ladder coefficients of one state")
    _add_model_args(p)
    p.add_argument("--xi-re", type=float, default=0.0)
    p.add_argument("--xi-im", type=float, default=0.0)
    p.add_argument("-o", "--output", default="-")
    _add_policy_args(p)
    p.add_argument("--config")
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("verify", help="run the self-verification suite")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument("-o", "--output", default="-")
    p.add_argument("--inject-k0-offset", type=float, default=0.0, help=argparse.SUPPRESS)
    p.add_argument("--config")
    p.set_defaults(func=cmd_verify)

    parser._subparser_map = sub.choices
    return parser


def _apply_config(parser, argv):
    """Re-parse with defaults taken from ``--config``; explicit flags win."""
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    try:
        cfg = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    cfg = {k.replace("-", "_"): v for k, v in cfg.items()}
    sp = parser._subparser_map[args.command]
    known = {a.dest for a in sp._actions}
    unknown = set(cfg) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    if isinstance(cfg.get("param"), dict):
        cfg["param"] = [f"{k}={v}" for k, v in cfg["param"].items()]
    if isinstance(cfg.get("measures"), list):
        cfg["measures"] = ",".join(cfg["measures"])
    sp.set_defaults(**cfg)
    return parser.parse_args(argv)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = _apply_config(parser, argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
        return args.func(args)
    except (UsageError, UnknownModel, UnknownMeasure, InvalidParameter) as exc:
        msg = exc.args[0] if exc.args else str(exc)
        print(f"nlcharge: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"nlcharge: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
