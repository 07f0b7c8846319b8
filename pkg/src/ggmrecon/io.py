"""File formats: data CSV, edge lists, decision TSV, GraphML, curves, reports.

Dialect for everything emitted here: comma (or tab) separated, '.' decimal,
UTF-8, LF line endings, no quoting. Floats are written with repr so every
file re-loads to exactly the values it was written from; NaN/absent values
are empty cells.
"""

from __future__ import annotations

import math
import os
from xml.etree import ElementTree

import numpy as np

from .edges import EdgeDecisionSet, pair_arrays, pair_count
from .errors import (
    EmptySweep,
    LoadError,
    NonNumericCell,
    RaggedRow,
    TooFewSamples,
)
from .evaluate import BenchmarkReport, BenchmarkRow, RocCurve
from .graphs import AdjacencyMatrix, from_edges
from .stats import DataMatrix


def _fmt(x) -> str:
    if x is None:
        return ""
    x = float(x)
    return "" if math.isnan(x) else repr(x)


def _check_name(name: str) -> str:
    if any(ch in name for ch in ",\t\n\r"):
        raise ValueError(f"variable name {name!r} contains a delimiter")
    return name


def _write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _read_lines(path) -> list[str]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise LoadError(f"cannot read {path}: {exc}") from exc
    return [line.rstrip("\r") for line in raw.split("\n") if line.strip() != ""]


# -- data matrix ------------------------------------------------------------

def load_matrix_csv(path, transpose: bool = False) -> DataMatrix:
    """Load a sample matrix: first row variable names, remaining rows samples.

    With `transpose` the raw cell grid is transposed before interpretation,
    which reads files laid out as one variable per row with the name in the
    first cell. Errors carry 0-based body coordinates.
    """
    lines = _read_lines(path)
    if not lines:
        raise LoadError(f"{path} is empty")
    grid = [line.split(",") for line in lines]
    width = len(grid[0])
    for k, row in enumerate(grid[1:], start=1):
        if len(row) != width:
            raise RaggedRow(k, width, len(row))
    if transpose:
        grid = [list(col) for col in zip(*grid)]
    names = [_check_name(c.strip()) for c in grid[0]]
    body = grid[1:]
    if len(body) < 2:
        raise TooFewSamples(f"need at least 2 sample rows, got {len(body)}")
    values = np.empty((len(body), len(names)))
    for r, row in enumerate(body):
        for c, cell in enumerate(row):
            try:
                v = float(cell)
            except ValueError:
                raise NonNumericCell(r, c, cell) from None
            if not math.isfinite(v):
                raise NonNumericCell(r, c, cell)
            values[r, c] = v
    return DataMatrix(values, names=names)


def write_matrix_csv(data: DataMatrix, path):
    names = data.names or [f"v{k}" for k in range(data.p)]
    lines = [",".join(_check_name(n) for n in names)]
    lines += [",".join(_fmt(v) for v in row) for row in data.values]
    _write_text(path, "\n".join(lines) + "\n")


# -- adjacency edge list ----------------------------------------------------

def write_edge_list(adj: AdjacencyMatrix, path):
    """One 'i<TAB>j' line per edge, 0-based, i < j."""
    lines = [f"{i}\t{j}" for i, j in adj.edge_pairs()]
    _write_text(path, "\n".join(lines) + ("\n" if lines else ""))


def read_edge_list(path, p: int, model: str = "custom") -> AdjacencyMatrix:
    edges = []
    for k, line in enumerate(_read_lines(path)):
        parts = line.split("\t")
        if len(parts) != 2:
            raise LoadError(f"line {k}: expected 'i<TAB>j', got {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise LoadError(f"line {k}: non-integer node id in {line!r}") from None
        edges.append((i, j))
    return from_edges(p, edges, model)


# -- dense matrix CSV (covariance / precision debugging) ---------------------

def write_dense_csv(matrix: np.ndarray, path):
    lines = [",".join(_fmt(v) for v in row) for row in np.asarray(matrix)]
    _write_text(path, "\n".join(lines) + "\n")


def read_dense_csv(path) -> np.ndarray:
    rows = [[float(c) for c in line.split(",")] for line in _read_lines(path)]
    return np.asarray(rows)


# -- full decision sets -----------------------------------------------------

def write_decisions_tsv(dset: EdgeDecisionSet, path):
    """All pairs with statistic, p-value and decision; names when available."""
    ii, jj = pair_arrays(dset.p)
    if dset.names is not None:
        left = [_check_name(dset.names[i]) for i in ii]
        right = [_check_name(dset.names[j]) for j in jj]
    else:
        left = [str(i) for i in ii]
        right = [str(j) for j in jj]
    lines = [f"# method={dset.method}", "i\tj\tstatistic\tp_value\tdecided"]
    pv = dset.p_value
    for k in range(ii.size):
        pcell = "" if pv is None else _fmt(pv[k])
        lines.append(
            f"{left[k]}\t{right[k]}\t{_fmt(dset.statistic[k])}\t{pcell}\t"
            f"{int(dset.decided[k])}"
        )
    _write_text(path, "\n".join(lines) + "\n")


def read_decisions_tsv(path) -> EdgeDecisionSet:
    lines = _read_lines(path)
    method = ""
    if lines and lines[0].startswith("# method="):
        method = lines[0][len("# method="):]
        lines = lines[1:]
    if not lines or lines[0].split("\t")[:2] != ["i", "j"]:
        raise LoadError(f"{path}: missing decision header")
    body = [line.split("\t") for line in lines[1:]]
    m = len(body)
    # pair count m = p(p-1)/2  =>  p = (1 + sqrt(1 + 8m)) / 2
    p = int(round((1 + math.sqrt(1 + 8 * m)) / 2))
    if pair_count(p) != m:
        raise LoadError(f"{path}: {m} rows is not a full pair set")
    named = False
    try:
        int(body[0][0])
    except ValueError:
        named = True
    names: list[str] | None = None
    if named:
        names = [body[0][0], body[0][1]]
        names += [body[k][1] for k in range(1, p - 1)]
    stat = np.full(m, np.nan)
    pval = np.full(m, np.nan)
    dec = np.zeros(m, dtype=bool)
    has_pval = False
    for k, row in enumerate(body):
        if len(row) != 5:
            raise RaggedRow(k, 5, len(row))
        stat[k] = float(row[2]) if row[2] else np.nan
        if row[3]:
            pval[k] = float(row[3])
            has_pval = True
        dec[k] = row[4] == "1"
    return EdgeDecisionSet(
        p=p, statistic=stat, p_value=pval if has_pval else None,
        decided=dec, method=method, names=names,
    )


# -- decided-edge exports ---------------------------------------------------

def _edge_labels(dset: EdgeDecisionSet):
    names = dset.names or [str(k) for k in range(dset.p)]
    return [_check_name(n) for n in names]


def export_edge_list(dset: EdgeDecisionSet, path, fmt: str = "tsv"):
    """Decided edges only, as 'source target statistic p_value' TSV or GraphML."""
    if fmt == "tsv":
        _export_edges_tsv(dset, path)
    elif fmt == "graphml":
        _export_edges_graphml(dset, path)
    else:
        raise ValueError(f"unknown edge export format {fmt!r}")


def _export_edges_tsv(dset: EdgeDecisionSet, path):
    names = _edge_labels(dset)
    ii, jj = pair_arrays(dset.p)
    lines = ["source\ttarget\tstatistic\tp_value"]
    pv = dset.p_value
    for k in np.nonzero(dset.decided)[0]:
        pcell = "" if pv is None else _fmt(pv[k])
        lines.append(
            f"{names[ii[k]]}\t{names[jj[k]]}\t{_fmt(dset.statistic[k])}\t{pcell}"
        )
    _write_text(path, "\n".join(lines) + "\n")


_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def _export_edges_graphml(dset: EdgeDecisionSet, path):
    names = _edge_labels(dset)
    root = ElementTree.Element("graphml", xmlns=_GRAPHML_NS)
    for key_id, attr in (("d_stat", "statistic"), ("d_pval", "p_value")):
        ElementTree.SubElement(
            root, "key",
            id=key_id, **{"for": "edge", "attr.name": attr, "attr.type": "double"},
        )
    graph = ElementTree.SubElement(root, "graph", id="G", edgedefault="undirected")
    for name in names:
        ElementTree.SubElement(graph, "node", id=name)
    ii, jj = pair_arrays(dset.p)
    pv = dset.p_value
    for k in np.nonzero(dset.decided)[0]:
        edge = ElementTree.SubElement(
            graph, "edge", source=names[ii[k]], target=names[jj[k]]
        )
        stat_el = ElementTree.SubElement(edge, "data", key="d_stat")
        stat_el.text = _fmt(dset.statistic[k])
        if pv is not None and not math.isnan(pv[k]):
            pv_el = ElementTree.SubElement(edge, "data", key="d_pval")
            pv_el.text = _fmt(pv[k])
    tree = ElementTree.ElementTree(root)
    ElementTree.indent(tree)
    tree.write(path, encoding="utf-8", xml_declaration=True)


# -- ROC curves -------------------------------------------------------------

def write_curve_csv(curve: RocCurve, path):
    """Columns (param, sensitivity, specificity); invalid points keep their
    parameter but have empty coordinate cells."""
    lines = [f"# method={curve.method}", "param,sensitivity,specificity"]
    for k in range(curve.params.size):
        if curve.valid[k]:
            lines.append(
                f"{_fmt(curve.params[k])},{_fmt(curve.sensitivity[k])},"
                f"{_fmt(curve.specificity[k])}"
            )
        else:
            lines.append(f"{_fmt(curve.params[k])},,")
    _write_text(path, "\n".join(lines) + "\n")


def read_curve_csv(path) -> RocCurve:
    lines = _read_lines(path)
    method = ""
    if lines and lines[0].startswith("# method="):
        method = lines[0][len("# method="):]
        lines = lines[1:]
    if not lines or lines[0] != "param,sensitivity,specificity":
        raise LoadError(f"{path}: missing curve header")
    params, sens, spec, valid = [], [], [], []
    for line in lines[1:]:
        cells = line.split(",")
        if len(cells) != 3:
            raise LoadError(f"{path}: malformed curve row {line!r}")
        params.append(float(cells[0]))
        ok = cells[1] != "" and cells[2] != ""
        valid.append(ok)
        sens.append(float(cells[1]) if ok else np.nan)
        spec.append(float(cells[2]) if ok else np.nan)
    return RocCurve(
        params=np.asarray(params), sensitivity=np.asarray(sens),
        specificity=np.asarray(spec), valid=np.asarray(valid), method=method,
    )


# -- benchmark reports ------------------------------------------------------

def write_benchmark_csv(report: BenchmarkReport, path):
    lines = ["graph,p,n,method,mean_auc,sd_auc,replications,failed,seed"]
    for r in report.rows:
        lines.append(
            f"{r.graph},{r.p},{r.n},{r.method},{_fmt(r.mean_auc)},"
            f"{_fmt(r.sd_auc)},{r.replications},{r.failed},{report.seed}"
        )
    _write_text(path, "\n".join(lines) + "\n")


def read_benchmark_csv(path) -> BenchmarkReport:
    lines = _read_lines(path)
    if not lines or not lines[0].startswith("graph,"):
        raise LoadError(f"{path}: missing benchmark header")
    rows = []
    seed = 0
    reps = 0
    for line in lines[1:]:
        g, p, n, m, mean, sd, r, f, s = line.split(",")
        rows.append(BenchmarkRow(
            graph=g, p=int(p), n=int(n), method=m,
            mean_auc=float(mean) if mean else float("nan"),
            sd_auc=float(sd) if sd else float("nan"),
            replications=int(r), failed=int(f),
        ))
        seed = int(s)
        reps = int(r)
    return BenchmarkReport(rows=rows, seed=seed, replications=reps, grids={})


def _mean_sd_cell(mean: float, sd: float) -> str:
    if math.isnan(mean):
        return "n/a"
    return f"{mean:.4f}".lstrip("0") + "(" + f"{sd:.4f}".lstrip("0") + ")"


def format_benchmark_table(report: BenchmarkReport) -> str:
    """Fixed-width text table: one row per (size, graph), mean(sd) per method."""
    methods = list(dict.fromkeys(r.method for r in report.rows))
    cells = sorted(
        dict.fromkeys((r.p, r.n, r.graph) for r in report.rows),
        key=lambda t: (t[0], t[1]),
    )
    header = ["(variables, sample size)", "graph type"] + methods
    table = [header]
    for p, n, graph in cells:
        row = [f"(p={p}, n={n})", graph]
        for m in methods:
            r = report.row(graph, p, n, m)
            row.append(_mean_sd_cell(r.mean_auc, r.sd_auc))
        table.append(row)
    widths = [max(len(row[c]) for row in table) for c in range(len(header))]
    lines = [
        "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip()
        for row in table
    ]
    return "\n".join(lines) + "\n"


# -- SVG plot ---------------------------------------------------------------

_SVG_COLORS = ("#c0392b", "#2980b9", "#27ae60", "#8e44ad", "#d68910")


def write_roc_svg(curves: list[RocCurve], path, size: int = 460):
    """Minimal standalone SVG: one polyline per averaged curve plus axes."""
    pad = 50
    span = size - 2 * pad

    def sx(fpr):
        return pad + fpr * span

    def sy(sens):
        return size - pad - sens * span

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
        f'<line x1="{pad}" y1="{size - pad}" x2="{size - pad}" y2="{size - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{size - pad}" stroke="black"/>',
        f'<line x1="{sx(0)}" y1="{sy(0)}" x2="{sx(1)}" y2="{sy(1)}" stroke="#bbbbbb" stroke-dasharray="4"/>',
        f'<text x="{size / 2:.0f}" y="{size - 12}" text-anchor="middle" font-size="13">1 - specificity</text>',
        f'<text x="14" y="{size / 2:.0f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 14 {size / 2:.0f})">sensitivity</text>',
    ]
    for k, curve in enumerate(curves):
        color = _SVG_COLORS[k % len(_SVG_COLORS)]
        sel = curve.valid
        fpr = 1.0 - curve.specificity[sel]
        sens = curve.sensitivity[sel]
        order = np.lexsort((sens, fpr))
        pts = [(0.0, 0.0), *zip(fpr[order], sens[order]), (1.0, 1.0)]
        path_str = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in pts)
        parts.append(
            f'<polyline points="{path_str}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        label = curve.method or f"curve {k}"
        parts.append(
            f'<text x="{size - pad - 4}" y="{pad + 16 * (k + 1)}" text-anchor="end" '
            f'font-size="12" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    _write_text(path, "\n".join(parts) + "\n")
