"""Command-line interface.

    capflow corr --input data.csv --vars Dcp,M2PIB,IDE
    capflow regress fh --input data.csv --inv IPIB --sav SPIB --no-intercept
    capflow adf --input data.csv --vars FNCPIB,TCN --assume-stationary CFPC
    capflow var select --input data.csv --vars A,B,C --max-lags 8
    capflow var fevd --input data.csv --target A --horizons 18 --ordering A,B,C

Exit codes: 0 success, 2 configuration error, 3 data error, 4 numerical error.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .core import Dataset, Frequency, HP_LAMBDA_MONTHLY, align, difference, hp_filter, lag, load_csv, log, write_csv
from .errors import CapflowError, ConfigError
from .macrofin import bonanza_series, classify_depth, detect_bonanza
from .regress import absolute_size, dynamic_regression, feldstein_horioka
from .render import (
    adf_table,
    bonanza_table,
    corr_table,
    depth_table,
    dynamic_fit_table,
    fevd_table,
    fh_table,
    fit_table,
    granger_table,
    lag_selection_table,
    lm_table,
    render_many,
    var_fit_tables,
)
from .stats import corr_matrix
from .unitroot import Deterministic, integration_order
from .varkit import companion_roots, fevd, granger_matrix, lag_select, lm_serial_test, var_estimate

logger = logging.getLogger("capflow")


def _name_list(text: str) -> list[str]:
    items = [s.strip() for s in str(text).split(",") if s.strip()]
    if not items:
        raise argparse.ArgumentTypeError("expected a comma-separated list of names")
    return items


def _lags_arg(text: str):
    if str(text).lower() == "auto":
        return None
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("lag count must be non-negative")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _common_parser(needs_input: bool = True) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("data and output")
    g.add_argument("--input", type=Path, required=False, help="CSV file" + ("" if needs_input else " (optional)"))
    g.add_argument("--date-col", default=None, help="date column (default: first column)")
    g.add_argument("--freq", default="monthly", help="monthly, quarterly or annual")
    g.add_argument("--transform", action="append", default=[], metavar="COL:OP[:OP]",
                   help="transform a column in place; OP is diff, diffN, lag, lagN, log or hp (repeatable)")
    g.add_argument("--hp-lambda", type=float, default=HP_LAMBDA_MONTHLY, help="HP smoothing parameter")
    g.add_argument("--format", choices=("text", "csv", "json"), default="text")
    g.add_argument("--locale", choices=("point", "comma"), default="point", help="decimal separator on output")
    g.add_argument("--seed", type=int, default=None, help="seed for stochastic utilities")
    g.add_argument("--config", type=Path, default=None, help="key = value file; command-line flags win")
    return p


def build_parser() -> tuple[argparse.ArgumentParser, dict[tuple[str, ...], argparse.ArgumentParser]]:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="capflow", description="Capital-flow volatility econometrics toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    leaves: dict[tuple[str, ...], argparse.ArgumentParser] = {}

    p = sub.add_parser("corr", parents=[common], help="correlation matrix with significance stars")
    p.add_argument("--vars", type=_name_list, default=None)
    p.add_argument("--alpha", type=float, default=0.05)
    leaves[("corr",)] = p

    reg = sub.add_parser("regress", help="dynamic, Feldstein-Horioka and absolute-size regressions")
    rsub = reg.add_subparsers(dest="model", required=True)
    p = rsub.add_parser("dynamic", parents=[common], help="y on x and lagged y")
    p.add_argument("--y", required=False)
    p.add_argument("--x", type=_name_list, required=False)
    p.add_argument("--no-intercept", action="store_true")
    leaves[("regress", "dynamic")] = p
    p = rsub.add_parser("fh", parents=[common], help="investment rate on saving rate (capital mobility)")
    p.add_argument("--inv", required=False)
    p.add_argument("--sav", required=False)
    p.add_argument("--no-intercept", action="store_true")
    leaves[("regress", "fh")] = p
    p = rsub.add_parser("size", parents=[common], help="absolute size of the financial system")
    p.add_argument("--y", required=False)
    p.add_argument("--credit", required=False)
    p.add_argument("--depth", required=False)
    p.add_argument("--no-intercept", action="store_true")
    leaves[("regress", "size")] = p

    p = sub.add_parser("adf", parents=[common], help="ADF unit-root tests and integration order")
    p.add_argument("--vars", type=_name_list, default=None)
    p.add_argument("--max-diff", type=int, default=2)
    p.add_argument("--deterministic", default="constant_trend", help="none, constant or constant_trend")
    p.add_argument("--lags", type=_lags_arg, default=None, help="augmentation lags or 'auto' (AIC)")
    p.add_argument("--assume-stationary", type=_name_list, default=[])
    leaves[("adf",)] = p

    var = sub.add_parser("var", help="vector autoregression tools")
    vsub = var.add_subparsers(dest="action", required=True)
    p = vsub.add_parser("select", parents=[common], help="lag-order selection criteria")
    p.add_argument("--vars", type=_name_list, default=None)
    p.add_argument("--max-lags", type=_positive_int, default=8)
    p.add_argument("--alpha", type=float, default=0.05)
    leaves[("var", "select")] = p
    p = vsub.add_parser("fit", parents=[common], help="estimate, stability roots and LM test")
    p.add_argument("--vars", type=_name_list, default=None)
    p.add_argument("--lags", type=int, default=1)
    p.add_argument("--lm-lags", type=_positive_int, default=4)
    leaves[("var", "fit")] = p
    p = vsub.add_parser("granger", parents=[common], help="pairwise Granger causality")
    p.add_argument("--vars", type=_name_list, default=None)
    p.add_argument("--lags", type=_positive_int, default=1)
    leaves[("var", "granger")] = p
    p = vsub.add_parser("fevd", parents=[common], help="Cholesky variance decomposition")
    p.add_argument("--vars", type=_name_list, default=None)
    p.add_argument("--ordering", type=_name_list, default=None)
    p.add_argument("--target", default=None, help="variable to decompose (default: every variable)")
    p.add_argument("--horizons", type=_positive_int, default=10)
    p.add_argument("--lags", type=int, default=1, help="VAR order")
    leaves[("var", "fevd")] = p

    p = sub.add_parser("classify", parents=[_common_parser(False)], help="financial-depth tiers")
    p.add_argument("--credit-gdp", type=float, required=False)
    p.add_argument("--liquid-gdp", type=float, required=False)
    p.add_argument("--credit-deposits", type=float, default=None)
    leaves[("classify",)] = p

    p = sub.add_parser("bonanza", parents=[_common_parser(False)], help="capital-bonanza detection")
    p.add_argument("--column", default=None, help="current-account column of --input")
    p.add_argument("--values", type=lambda s: [float(v) for v in _name_list(s)], default=None)
    p.add_argument("--periods", type=_name_list, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--openness", choices=("closed", "open"), default=None)
    p.add_argument("--sign-convention", choices=("deficit_negative", "deficit_positive"), default=None)
    p.add_argument("--join-output", type=Path, default=None, help="write the input data plus a 0/1 bonanza column")
    leaves[("bonanza",)] = p

    p = sub.add_parser("synth", parents=[_common_parser(False)], help="write the synthetic example panel")
    p.add_argument("--output", type=Path, required=False)
    p.add_argument("--periods-count", type=_positive_int, default=132)
    leaves[("synth",)] = p
    return parser, leaves


# ---------------------------------------------------------------------------
# config file
# ---------------------------------------------------------------------------


def read_config(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines (``#`` starts a comment); keys may use - or _."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    out = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":" if ":" in line else None
        if sep is None:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, value = line.split(sep, 1)
        out[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return out


def _apply_config(args: argparse.Namespace, leaf: argparse.ArgumentParser, argv: Sequence[str]) -> None:
    config = read_config(args.config)
    actions = {a.dest: a for a in leaf._actions if a.option_strings}
    given = set()
    for a in actions.values():
        for opt in a.option_strings:
            if any(tok == opt or tok.startswith(opt + "=") for tok in argv):
                given.add(a.dest)
    for key, raw in config.items():
        action = actions.get(key)
        if action is None or key == "config":
            raise ConfigError(f"unknown config key {key!r}")
        if key in given:
            continue
        try:
            if isinstance(action, argparse._StoreTrueAction):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(action, argparse._AppendAction):
                value = [v.strip() for v in raw.split(",") if v.strip()]
            elif action.type is not None:
                value = action.type(raw)
            else:
                value = raw
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise ConfigError(f"config key {key!r}: {exc}") from None
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"config key {key!r}: {value!r} not in {list(action.choices)}")
        setattr(args, key, value)


# ---------------------------------------------------------------------------
# data pipeline
# ---------------------------------------------------------------------------


def _apply_transform(d: Dataset, spec: str, hp_lambda: float) -> Dataset:
    col, *ops = [s.strip() for s in spec.split(":")]
    if not ops:
        raise ConfigError(f"transform {spec!r} must look like COL:OP[:OP...]")
    s = d[col]
    for op in ops:
        name = op.lower()
        if name == "log":
            s = log(s)
        elif name == "hp":
            _, s = hp_filter(s, hp_lambda)
            s = s.rename(col)
        elif name.startswith("diff"):
            s = difference(s, int(name[4:] or 1))
        elif name.startswith("lag"):
            s = lag(s, int(name[3:] or 1))
        else:
            raise ConfigError(f"unknown transform {op!r} in {spec!r}; use diff, lag, log or hp")
    return d.with_series(s)


def load_data(args) -> Dataset:
    if args.input is None:
        raise ConfigError("--input is required for this command")
    d = load_csv(args.input, args.date_col, Frequency.coerce(args.freq))
    for spec in args.transform:
        d = _apply_transform(d, spec, args.hp_lambda)
    return d


def _select(d: Dataset, names) -> Dataset:
    return d if names is None else d.select(names)


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError("missing required option(s): " + ", ".join("--" + n.replace("_", "-") for n in missing))


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_corr(args):
    d = _select(load_data(args), args.vars)
    return [corr_table(corr_matrix(d, args.alpha))]


def cmd_regress(args):
    d = load_data(args)
    intercept = not args.no_intercept
    if args.model == "dynamic":
        _require(args, "y", "x")
        sub = align(d, names=[args.y, *args.x])
        dyn = dynamic_regression(sub[args.y], sub.select(args.x), intercept=intercept)
        return [dynamic_fit_table(dyn)]
    if args.model == "fh":
        _require(args, "inv", "sav")
        sub = align(d, names=[args.inv, args.sav])
        fh = feldstein_horioka(sub[args.inv], sub[args.sav], include_intercept=intercept)
        return [fh_table(fh)]
    _require(args, "y", "credit", "depth")
    sub = align(d, names=[args.y, args.credit, args.depth])
    fit = absolute_size(sub[args.y], sub[args.credit], sub[args.depth], intercept=intercept)
    return [fit_table(fit, "Estimation de la taille absolue du système financier", pvalues=False)]


def cmd_adf(args):
    d = load_data(args)
    names = list(args.vars) if args.vars is not None else list(d.names)
    for n in args.assume_stationary:
        if n not in d:
            raise ConfigError(f"unknown column {n!r} in --assume-stationary")
        if n not in names:
            names.append(n)
    det = Deterministic.coerce(args.deterministic)
    orders = []
    for name in names:
        if name in args.assume_stationary:
            orders.append(integration_order(d[name], args.max_diff, det, assume_stationary=True))
        else:
            series = align(d, names=[name])[name]
            orders.append(integration_order(series, args.max_diff, det, args.lags))
    return [adf_table(orders)]


def _var_data(args, names=None) -> Dataset:
    d = load_data(args)
    return align(d, names=names if names is not None else args.vars)


def cmd_var(args):
    if args.action == "select":
        d = _var_data(args)
        return [lag_selection_table(lag_select(d, args.max_lags, args.alpha))]
    if args.action == "fit":
        m = var_estimate(_var_data(args), args.lags)
        roots, stable = companion_roots(m)
        return [*var_fit_tables(m, roots, stable), lm_table(lm_serial_test(m, args.lm_lags))]
    if args.action == "granger":
        d = _select(load_data(args), args.vars)
        return [granger_table(granger_matrix(d, args.lags), args.lags)]
    names = args.vars
    if args.ordering is not None:
        if names is not None and sorted(names) != sorted(args.ordering):
            raise ConfigError(f"--ordering {args.ordering} is not a permutation of --vars {names}")
        if len(set(args.ordering)) != len(args.ordering):
            raise ConfigError(f"--ordering {args.ordering} repeats a variable")
        names = args.ordering
    d = _var_data(args, names)
    m = var_estimate(d, args.lags)
    _, stable = companion_roots(m)
    targets = [args.target] if args.target is not None else list(m.names)
    tables = [fevd_table(fevd(m, t, args.horizons)) for t in targets]
    if not stable:
        warning = "WARNING: the VAR is not stable (a companion root lies on or outside the unit circle)"
        print(warning, file=sys.stderr)
        for t in tables:
            t.footer.append(warning)
    return tables


def cmd_classify(args):
    _require(args, "credit_gdp", "liquid_gdp")
    return [depth_table(classify_depth(args.credit_gdp, args.liquid_gdp, args.credit_deposits))]


def cmd_bonanza(args):
    if args.sign_convention is None:
        raise ConfigError("--sign-convention is required (deficit_negative or deficit_positive)")
    if args.values is not None:
        flags = detect_bonanza(args.values, args.threshold, args.openness, args.sign_convention, args.periods)
        return [bonanza_table(flags)]
    _require(args, "column")
    d = load_data(args)
    s = d[args.column]
    flags = detect_bonanza(s, args.threshold, args.openness, args.sign_convention)
    if args.join_output is not None:
        write_csv(d.with_series(bonanza_series(flags, s, f"{args.column}_bonanza")), args.join_output)
    return [bonanza_table(flags)]


def cmd_synth(args):
    from .datasets import DEFAULT_SEED, synthetic_panel

    _require(args, "output")
    d = synthetic_panel(DEFAULT_SEED if args.seed is None else args.seed, args.periods_count)
    write_csv(d, args.output)
    print(f"wrote {len(d)} series x {d.nobs} periods to {args.output}", file=sys.stderr)
    return []


COMMANDS = {
    "corr": cmd_corr,
    "regress": cmd_regress,
    "adf": cmd_adf,
    "var": cmd_var,
    "classify": cmd_classify,
    "bonanza": cmd_bonanza,
    "synth": cmd_synth,
}


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, leaves = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    key = tuple(x for x in (args.command, getattr(args, "model", None), getattr(args, "action", None)) if x)
    try:
        if args.config is not None:
            _apply_config(args, leaves[key], argv)
        tables = COMMANDS[args.command](args)
        if tables:
            print(render_many(tables, args.format, args.locale))
    except CapflowError as exc:
        print(f"capflow: error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
