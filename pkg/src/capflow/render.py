"""Tables in the layouts of the published results, rendered as text, CSV or JSON.

A :class:`Table` keeps raw numbers; formatting happens only at render time,
so the three outputs of one table carry the same values.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .core import Dataset
from .errors import ConfigError
from .macrofin import BonanzaFlag, DepthProfile
from .regress import DynamicFit, FeldsteinHorioka, OlsFit
from .stats import CorrMatrix
from .unitroot import IntegrationOrder
from .varkit import FevdTable, GrangerEntry, LagSelection, LmResult, VarModel, significance_stars

__all__ = [
    "Cell",
    "Table",
    "render",
    "render_many",
    "corr_table",
    "fit_table",
    "adf_table",
    "lag_selection_table",
    "var_fit_tables",
    "lm_table",
    "granger_table",
    "fevd_table",
    "depth_table",
    "bonanza_table",
    "LAG_LEGEND",
]

FORMATS = ("text", "csv", "json")


@dataclass(frozen=True)
class Cell:
    """A number with a display suffix such as significance stars."""

    value: Any
    suffix: str = ""


@dataclass
class Table:
    title: str
    columns: list[str]
    rows: list[list[Any]]
    formats: list[str]
    footer: list[str] = field(default_factory=list)
    data: Any = None

    def raw_rows(self) -> list[list[Any]]:
        return [[_raw(c) for c in row] for row in self.rows]


def _raw(cell):
    v = cell.value if isinstance(cell, Cell) else cell
    if isinstance(v, (np.floating, np.integer)):
        v = v.item()
    return v


def _fmt_number(v, spec: str, comma: bool) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, float) and math.isnan(v):
        return "NA"
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    text = format(v, spec) if spec != "s" else str(v)
    return text.replace(".", ",") if comma else text


def _text_cell(cell, spec: str, comma: bool) -> str:
    if isinstance(cell, Cell):
        return _fmt_number(_raw(cell), spec, comma) + cell.suffix
    return _fmt_number(_raw(cell), spec, comma)


def _render_text(t: Table, comma: bool) -> str:
    body = [[_text_cell(c, spec, comma) for c, spec in zip(row, t.formats)] for row in t.rows]
    widths = [len(h) for h in t.columns]
    for row in body:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = [t.title, ""] if t.title else []
    lines.append("  ".join(h.ljust(w) if i == 0 else h.rjust(w) for i, (h, w) in enumerate(zip(t.columns, widths))).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for row in body:
        lines.append("  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(row, widths))).rstrip())
    if t.footer:
        lines.append("")
        lines.extend(t.footer)
    return "\n".join(lines)


def _render_csv(t: Table, comma: bool) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=";" if comma else ",", lineterminator="\n")
    writer.writerow(t.columns)
    for row in t.raw_rows():
        cells = []
        for v in row:
            if v is None:
                cells.append("")
            elif isinstance(v, float):
                s = repr(v)
                cells.append(s.replace(".", ",") if comma else s)
            else:
                cells.append(str(v))
        writer.writerow(cells)
    return buf.getvalue().rstrip("\n")


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        v = v.item()
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def _table_json(t: Table) -> dict:
    return _jsonable({
        "title": t.title,
        "columns": t.columns,
        "rows": t.raw_rows(),
        "footer": t.footer,
        "data": t.data,
    })


def render(table: Table, fmt: str = "text", locale: str = "point") -> str:
    return render_many([table], fmt, locale)


def render_many(tables: Sequence[Table], fmt: str = "text", locale: str = "point") -> str:
    if fmt not in FORMATS:
        raise ConfigError(f"unknown output format {fmt!r}; expected one of {', '.join(FORMATS)}")
    if locale not in ("point", "comma"):
        raise ConfigError(f"unknown locale {locale!r}; expected point or comma")
    comma = locale == "comma"
    if fmt == "json":
        payload = [_table_json(t) for t in tables]
        return json.dumps(payload[0] if len(payload) == 1 else payload, indent=2, ensure_ascii=False)
    if fmt == "csv":
        return "\n\n".join(_render_csv(t, comma) for t in tables)
    return "\n\n".join(_render_text(t, comma) for t in tables)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def corr_table(cm: CorrMatrix) -> Table:
    k = len(cm.names)
    rows = []
    for i in range(k):
        row = [cm.names[i]]
        for j in range(k):
            star = "**" if i != j and cm.significant[i, j] else ""
            row.append(Cell(float(cm.r[i, j]), star))
        rows.append(row)
    off = cm.n[~np.eye(k, dtype=bool)]
    return Table(
        title="Matrice de corrélation",
        columns=["", *cm.names],
        rows=rows,
        formats=["s"] + [".2f"] * k,
        footer=[
            f"** significatif au seuil de {100 * cm.alpha:g}% (test t bilatéral, n - 2 ddl)",
            f"observations par paire : {int(off.min())}-{int(off.max())}",
        ],
        data=cm.to_dict(),
    )


def fit_table(fit: OlsFit, title: str = "Estimation MCO", labels: dict[str, str] | None = None,
              pvalues: bool = True, extra_footer: Sequence[str] = ()) -> Table:
    labels = labels or {}
    rows = []
    for i, name in enumerate(fit.names):
        row = [labels.get(name, name), Cell(float(fit.params[i]), significance_stars(float(fit.pvalues[i]))),
               float(fit.bse[i]), float(fit.tvalues[i])]
        if pvalues:
            row.append(Cell(float(fit.pvalues[i]), ""))
        rows.append(row)
    columns = ["Variable", "Estimate", "Std. Error", "t-Statistic"] + (["(p-value)"] if pvalues else [])
    footer = [
        f"R² = {100 * fit.rsquared:.0f}%" if math.isfinite(fit.rsquared) else "R² = NA",
        f"R² ajusté = {100 * fit.rsquared_adj:.0f}%" if math.isfinite(fit.rsquared_adj) else "R² ajusté = NA",
        f"n = {fit.nobs} observations",
        "*** p<0.01, ** p<0.05, * p<0.10",
        *extra_footer,
    ]
    return Table(title, columns, rows, ["s", ".2f", ".2f", ".2f"] + ([".4f"] if pvalues else []), footer,
                 data=fit.to_dict())


def dynamic_fit_table(dyn: DynamicFit, title: str = "Régression dynamique", labels=None) -> Table:
    footer = [f"stability |γ₂| < 1: {'yes' if dyn.stable else 'no'} (γ₂ = {dyn.gamma2:.4f})"]
    footer += [n for n in dyn.notes if n.startswith("STABILITY WARNING")]
    t = fit_table(dyn.base, title, labels, extra_footer=footer)
    t.data = {**t.data, "gamma2": dyn.gamma2, "stable": dyn.stable}
    return t


def fh_table(fh: FeldsteinHorioka, labels=None) -> Table:
    t = dynamic_fit_table(fh.fit, "Test du degré de mobilité des capitaux", labels)
    t.footer.insert(0, fh.interpretation())
    t.footer.insert(0, f"retention = β₁ = {fh.retention:.4f}; foreign share = 1 - β₁ = {fh.foreign_share:.4f}")
    t.data = {**t.data, "retention": fh.retention, "foreign_share": fh.foreign_share, "mobility": fh.mobility}
    return t


def adf_table(orders: Sequence[IntegrationOrder]) -> Table:
    rows = []
    for o in orders:
        res = o.deciding_result
        if res is None:
            rows.append([o.name, None, None, o.label, o.decision])
        else:
            rows.append([o.name, res.statistic, res.critical_values["5%"], o.label, o.decision])
    return Table(
        "Test de racine unitaire (ADF)",
        ["Variable", "ADF", "VCM 5%", "Ordre", "Décision"],
        rows,
        ["s", ".2f", ".2f", "s", "s"],
        ["ADF: statistic of the first rejecting difference (or the last one tested)",
         "Stationnaire: stationary at the stated order of differencing"],
        data=[o.to_dict() for o in orders],
    )


LAG_LEGEND = [
    "* indicates lag order selected by the criterion",
    "LR: sequential modified LR test statistic (each test at 5% level)",
    "FPE: Final prediction error",
    "AIC: Akaike information criterion",
    "SC: Schwarz information criterion",
    "HQ: Hannan-Quinn information criterion",
]


def lag_selection_table(sel: LagSelection) -> Table:
    rows = []
    for p in sel.lags:
        row = [int(p), float(sel.logl[p])]
        for crit in ("LR", "FPE", "AIC", "SC", "HQ"):
            v = float(sel.column(crit)[p])
            if crit == "LR" and p == 0:
                row.append(Cell("NA"))
            else:
                row.append(Cell(v, "*" if sel.selected[crit] == p else ""))
        rows.append(row)
    legend = list(LAG_LEGEND)
    if sel.alpha != 0.05:
        legend[1] = f"LR: sequential modified LR test statistic (each test at {100 * sel.alpha:g}% level)"
    return Table(
        "VAR Lag Order Selection Criteria",
        ["Lag", "LogL", "LR", "FPE", "AIC", "SC", "HQ"],
        rows,
        ["d", ".3f", ".4f", ".3e", ".4f", ".4f", ".4f"],
        [f"Included observations: {sel.nobs}", *legend],
        data=sel.to_dict(),
    )


def var_fit_tables(m: VarModel, roots: np.ndarray, stable: bool) -> list[Table]:
    tv = m.tvalues
    rows = []
    for i, reg in enumerate(m.regressor_names):
        rows.append([reg, *[Cell(float(m.params[i, j]), significance_stars(float(m.pvalues[i, j])))
                            for j in range(m.k)]])
    coef = Table(
        f"VAR({m.p}) estimates",
        ["", *m.names],
        rows,
        ["s"] + [".4f"] * m.k,
        [f"Included observations: {m.nobs}", "*** p<0.01, ** p<0.05, * p<0.10 (t = estimate / s.e.)"],
        data={**m.to_dict(), "tvalues": tv.tolist()},
    )
    verdict = ("No root lies outside the unit circle: roots inside the unit circle, VAR satisfies the stability condition"
               if stable else "WARNING: at least one root lies on or outside the unit circle; VAR is not stable")
    root_rows = [[f"{r.real:.6f}{r.imag:+.6f}i", float(abs(r))] for r in roots]
    rt = Table(
        "Inverse Roots of AR Characteristic Polynomial",
        ["Root", "Modulus"],
        root_rows,
        ["s", ".6f"],
        [verdict],
        data={"roots": [[float(r.real), float(r.imag)] for r in roots], "moduli": np.abs(roots).tolist(),
              "stable": stable},
    )
    return [coef, rt]


def lm_table(results: Sequence[LmResult]) -> Table:
    rows = [[r.lag, r.statistic, r.pvalue] for r in results]
    footer = ["Null Hypothesis: no serial correlation at lag order h",
              f"Probs from chi-square with {results[0].df} df." if results else ""]
    footer += [f"lag {r.lag}: {r.error}" for r in results if r.error]
    return Table("VAR Residual Serial Correlation LM Tests", ["Lags", "LM-Stat", "Prob"], rows,
                 ["d", ".4f", ".4f"], footer, data=[r.to_dict() for r in results])


def granger_table(entries: Sequence[GrangerEntry], p: int) -> Table:
    rows = []
    for i, e in enumerate(entries):
        first = i % 2 == 0
        if e.result is None:
            rows.append([f"{e.cause} ne cause pas (au sens de granger) {e.effect}", None, Cell("ERROR"), Cell(e.error or "")])
            continue
        r = e.result
        rows.append([r.null, r.n if first else None, r.F, Cell(r.p_value, r.stars)])
    return Table(
        "Résultats des tests de causalité",
        ["Hypothèse nulle", "Obs", "F-Statistic", "p-value"],
        rows,
        ["s", "d", ".5f", ".4f"],
        [f"Nombre de retards inclus : {p}", "*** p<0.01, ** p<0.05, * p<0.10"],
        data=[e.to_dict() for e in entries],
    )


def fevd_table(t: FevdTable) -> Table:
    rows = [[int(h), float(se), *map(float, shares)] for h, se, shares in zip(t.horizons, t.se, t.shares)]
    return Table(
        f"Variance Decomposition of {t.target}",
        ["Période", "S.E.", *t.ordering],
        rows,
        ["d", ".2f"] + [".2f"] * len(t.ordering),
        [f"Cholesky Ordering: {' '.join(t.ordering)}"],
        data=t.to_dict(),
    )


def depth_table(profile: DepthProfile) -> Table:
    values = {
        "credit_to_gdp": profile.credit_to_gdp,
        "liquid_liabilities_to_gdp": profile.liquid_liabilities_to_gdp,
        "credit_to_deposits": profile.credit_to_deposits,
    }
    rows = [[ind, values[ind], tier.value, tier.label_fr] for ind, tier in profile.tiers.items()]
    return Table("Indicateurs de profondeur du système financier", ["Indicator", "Value (%)", "Tier", "Catégorie"],
                 rows, ["s", ".2f", "s", "s"], [], data=profile.to_dict())


def bonanza_table(flags: Sequence[BonanzaFlag]) -> Table:
    rows = [[f.period, f.current_account_deficit_to_gdp, "yes" if f.is_bonanza else "no"] for f in flags]
    threshold = flags[0].threshold if flags else float("nan")
    return Table("Bonanza de capitaux", ["Period", "Deficit/GDP (%)", "Bonanza"], rows, ["s", ".2f", "s"],
                 [f"bonanza: current-account deficit/GDP > {threshold:g}%",
                  f"{sum(f.is_bonanza for f in flags)} of {len(flags)} periods flagged"],
                 data=[f.to_dict() for f in flags])


def dataset_summary(d: Dataset) -> str:
    return f"{len(d)} series x {d.nobs} periods ({d.index.label(0)} to {d.index.label(-1)})"
