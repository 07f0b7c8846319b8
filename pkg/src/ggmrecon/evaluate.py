"""Scoring of reconstructions: ROC sweeps, AUC, benchmark, overlap reports."""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import lpc as _lpc
from .edges import EdgeDecisionSet, pair_arrays, pair_count
from .errors import DimensionMismatch, EmptyCurve, GgmError, GridMismatch
from .glasso import GlassoConfig, glasso_edges, glasso_fit, glasso_path
from .graphs import AdjacencyMatrix, generate_graph
from .ridge import ggmridge_scores, ridge_decisions_at
from .stats import DataMatrix, empirical_covariance, pearson_matrix
from .synth import synthesize_dataset

METHODS = ("ggmridge", "glasso", "lpc")

# Significance levels are clamped into the open unit interval when a sweep
# grid formally includes an endpoint.
_LEVEL_EPS = 1e-12


def default_grid(method: str) -> np.ndarray:
    """The stock regularization sweep for each method, ascending."""
    if method == "glasso":
        return 0.001 + 0.005 * np.arange(200)
    if method == "lpc":
        return np.concatenate([1e-4 + 0.01 * np.arange(40),
                               [0.6, 0.7, 0.8, 0.9, 1.0]])
    if method == "ggmridge":
        return np.concatenate([1e-4 + 0.001 * np.arange(1000), [1.0]])
    raise ValueError(f"unknown method {method!r}")


DEFAULT_FIXED = {
    "glasso": {"tol": 1e-4, "max_outer": 100, "zero_tol": 1e-12},
    # alpha None means the screening level is tied to the swept test level
    "lpc": {"alpha": None},
    "ggmridge": {"lambda_r": 1.0, "null_reps": 20},
}


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def sensitivity(self) -> float:
        denom = self.tp + self.fn
        return 1.0 if denom == 0 else self.tp / denom

    @property
    def specificity(self) -> float:
        denom = self.tn + self.fp
        return 1.0 if denom == 0 else self.tn / denom


def confusion(est: EdgeDecisionSet, truth: AdjacencyMatrix) -> ConfusionCounts:
    """Count decided edges against the ground-truth graph over all pairs."""
    if est.p != truth.p:
        raise DimensionMismatch(f"estimate has p={est.p}, truth p={truth.p}")
    actual = truth.matrix[pair_arrays(truth.p)]
    dec = est.decided
    tp = int((dec & actual).sum())
    fp = int((dec & ~actual).sum())
    fn = int((~dec & actual).sum())
    tn = int((~dec & ~actual).sum())
    return ConfusionCounts(tp=tp, fp=fp, tn=tn, fn=fn)


@dataclass(frozen=True)
class RocCurve:
    """Swept (sensitivity, specificity) points; invalid points carry NaN."""

    params: np.ndarray
    sensitivity: np.ndarray
    specificity: np.ndarray
    valid: np.ndarray
    method: str = ""
    counts: np.ndarray | None = None  # replicates behind each averaged point

    def __post_init__(self):
        m = np.asarray(self.params, dtype=np.float64)
        se = np.asarray(self.sensitivity, dtype=np.float64)
        sp = np.asarray(self.specificity, dtype=np.float64)
        va = np.asarray(self.valid, dtype=bool)
        if not (m.shape == se.shape == sp.shape == va.shape):
            raise DimensionMismatch("curve arrays must share one shape")
        ok = va & np.isfinite(se) & np.isfinite(sp)
        if np.any(va & ~ok):
            raise ValueError("valid points must have finite coordinates")
        if se[va].size and (se[va].min() < 0 or se[va].max() > 1
                            or sp[va].min() < 0 or sp[va].max() > 1):
            raise ValueError("sensitivity/specificity must lie in [0, 1]")
        object.__setattr__(self, "params", m)
        object.__setattr__(self, "sensitivity", se)
        object.__setattr__(self, "specificity", sp)
        object.__setattr__(self, "valid", va)
        if self.counts is not None:
            object.__setattr__(self, "counts",
                               np.asarray(self.counts, dtype=np.int64))


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under sensitivity vs (1 - specificity).

    Points are sorted, anchored at (0, 0) and (1, 1), and invalid points are
    skipped; duplicates contribute zero-width trapezoids, so the result is
    invariant to point order and repetition.
    """
    sel = curve.valid
    if not np.any(sel):
        raise EmptyCurve("no valid points to integrate")
    fpr = 1.0 - curve.specificity[sel]
    sens = curve.sensitivity[sel]
    order = np.lexsort((sens, fpr))
    x = np.concatenate([[0.0], fpr[order], [1.0]])
    y = np.concatenate([[0.0], sens[order], [1.0]])
    return float(np.trapezoid(y, x))


def average_curves(curves: list[RocCurve]) -> RocCurve:
    """Pointwise mean of sensitivity and specificity per grid index.

    Invalid points are excluded pairwise; the returned `counts` records how
    many replicates entered each averaged point.
    """
    if not curves:
        raise GridMismatch("no curves to average")
    base = curves[0]
    for c in curves[1:]:
        if not np.array_equal(c.params, base.params):
            raise GridMismatch("curves were computed on different grids")
    valid = np.stack([c.valid for c in curves])
    sens = np.stack([np.where(c.valid, c.sensitivity, 0.0) for c in curves])
    spec = np.stack([np.where(c.valid, c.specificity, 0.0) for c in curves])
    counts = valid.sum(axis=0)
    ok = counts > 0
    denom = np.where(ok, counts, 1)
    return RocCurve(
        params=base.params,
        sensitivity=np.where(ok, sens.sum(axis=0) / denom, np.nan),
        specificity=np.where(ok, spec.sum(axis=0) / denom, np.nan),
        valid=ok,
        method=base.method,
        counts=counts,
    )


def _clamp_level(a: float) -> float:
    return min(max(a, _LEVEL_EPS), 1.0 - _LEVEL_EPS)


def _validate_grid(grid: np.ndarray):
    if grid.size == 0:
        raise ValueError("sweep grid is empty")
    d = np.diff(grid)
    if not (np.all(d >= 0) or np.all(d <= 0)):
        raise ValueError("sweep grid must be monotone")


def roc_sweep(
    method: str,
    grid,
    data: DataMatrix,
    truth: AdjacencyMatrix,
    fixed: dict | None = None,
    center: bool = False,
    seed=0,
) -> RocCurve:
    """One (sensitivity, specificity) point per grid value on fixed data.

    The swept parameter is the penalty for 'glasso', the edge-test level for
    'lpc' (whose screening level is tied to the same value unless
    fixed['alpha'] is set), and the test level for 'ggmridge'. Per-point
    estimator failures mark the point invalid instead of aborting.
    """
    grid = np.asarray(grid, dtype=np.float64)
    _validate_grid(grid)
    opts = DEFAULT_FIXED[method] | (fixed or {})
    sens = np.full(grid.size, np.nan)
    spec = np.full(grid.size, np.nan)
    valid = np.zeros(grid.size, dtype=bool)

    def score(k: int, est: EdgeDecisionSet):
        c = confusion(est, truth)
        sens[k] = c.sensitivity
        spec[k] = c.specificity
        valid[k] = True

    if method == "glasso":
        s = empirical_covariance(data, center=center)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # non-convergence still yields a usable iterate
            fits = glasso_path(s, grid, tol=opts["tol"], max_outer=opts["max_outer"])
        for k, fit in enumerate(fits):
            try:
                score(k, glasso_edges(fit, zero_tol=opts["zero_tol"]))
            except GgmError:
                pass
    elif method == "lpc":
        if opts["alpha"] is not None:
            stats = _lpc.lpc_statistics(data, _clamp_level(opts["alpha"]), center=center)
            for k, g in enumerate(grid):
                try:
                    score(k, _lpc.lpc_decisions_at(stats, _clamp_level(g)))
                except GgmError:
                    pass
        else:
            corr = pearson_matrix(data)
            s = empirical_covariance(data, center=center)
            for k, g in enumerate(grid):
                level = _clamp_level(g)
                try:
                    stats = _lpc._statistics_from_moments(
                        s, corr, data.n, level, names=data.names
                    )
                    score(k, _lpc.lpc_decisions_at(stats, level))
                except GgmError:
                    pass
    elif method == "ggmridge":
        scores = ggmridge_scores(
            data,
            lambda_r=opts["lambda_r"],
            null_reps=opts["null_reps"],
            seed=seed,
            center=center,
        )
        for k, g in enumerate(grid):
            try:
                score(k, ridge_decisions_at(scores, _clamp_level(g)))
            except GgmError:
                pass
    else:
        raise ValueError(f"unknown method {method!r}")

    return RocCurve(params=grid, sensitivity=sens, specificity=spec,
                    valid=valid, method=method)


def decision_sweep(
    method: str,
    grid,
    data: DataMatrix,
    fixed: dict | None = None,
    center: bool = True,
    seed=0,
):
    """Yield (param, EdgeDecisionSet) along a grid, sharing the expensive
    statistics pass across grid values where the method allows it.

    For 'lpc' the screening level stays fixed (fixed['alpha'], default 0.1)
    so only the edge-test threshold moves; 'ggmridge' reuses one null
    pipeline; 'glasso' walks a warm-started penalty path. Consumers must not
    rely on yield order (glasso yields in descending-penalty order).
    """
    grid = np.asarray(grid, dtype=np.float64)
    _validate_grid(grid)
    opts = DEFAULT_FIXED[method] | (fixed or {})
    if method == "lpc":
        alpha = opts["alpha"] if opts["alpha"] is not None else 0.1
        stats = _lpc.lpc_statistics(data, _clamp_level(alpha), center=center)
        for g in grid:
            yield float(g), _lpc.lpc_decisions_at(stats, _clamp_level(g))
    elif method == "ggmridge":
        scores = ggmridge_scores(
            data, lambda_r=opts["lambda_r"], null_reps=opts["null_reps"],
            seed=seed, center=center,
        )
        for g in grid:
            yield float(g), ridge_decisions_at(scores, _clamp_level(g))
    elif method == "glasso":
        # Walked from the sparse end so each fit warm-starts the next; only
        # one fit is alive at a time. Yield order is therefore descending.
        s = empirical_covariance(data, center=center)
        names = data.names if isinstance(data, DataMatrix) else None
        prev = None
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for k in np.argsort(-grid):
                cfg = GlassoConfig(lam=float(grid[k]), tol=opts["tol"],
                                   max_outer=opts["max_outer"])
                prev = glasso_fit(s, cfg, init=prev)
                yield float(grid[k]), glasso_edges(
                    prev, zero_tol=opts["zero_tol"], names=names
                )
    else:
        raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class BenchmarkRow:
    graph: str
    p: int
    n: int
    method: str
    mean_auc: float
    sd_auc: float
    replications: int
    failed: int


@dataclass(frozen=True)
class BenchmarkReport:
    rows: list[BenchmarkRow]
    seed: int
    replications: int
    grids: dict[str, np.ndarray]
    curves: dict[tuple, RocCurve] = field(default_factory=dict)

    def row(self, graph: str, p: int, n: int, method: str) -> BenchmarkRow:
        for r in self.rows:
            if (r.graph, r.p, r.n, r.method) == (graph, p, n, method):
                return r
        raise KeyError((graph, p, n, method))


def _normalize_models(models) -> list[tuple[str, dict]]:
    out = []
    for m in models:
        if isinstance(m, str):
            out.append((m, {}))
        else:
            name, params = m
            out.append((name, dict(params)))
    return out


def benchmark(
    models,
    sizes,
    methods=METHODS,
    replications: int = 50,
    seed: int = 0,
    grids: dict | None = None,
    fixed: dict | None = None,
    threads: int = 1,
    center: bool = False,
) -> BenchmarkReport:
    """Replicated graph -> covariance -> sample -> sweep -> AUC protocol.

    Every (model, size) cell draws `replications` independent datasets; all
    methods score the same data within a replication. Task seeds are derived
    as seed + task index in a fixed enumeration, and reductions consume
    per-replication values in replication order, so the report is identical
    for any thread count.
    """
    if replications < 1:
        raise ValueError("replications must be >= 1")
    models = _normalize_models(models)
    sizes = [(int(p), int(n)) for p, n in sizes]
    methods = list(methods)
    grids = {m: np.asarray(g, dtype=np.float64)
             for m, g in ((grids or {}).items())}
    fixed = fixed or {}
    cells = [(gi, si) for gi in range(len(models)) for si in range(len(sizes))]

    def run_task(cell_idx: int, rep: int):
        (model, params), (p, n) = models[cells[cell_idx][0]], sizes[cells[cell_idx][1]]
        task_seed = seed + cell_idx * replications + rep
        rng = np.random.default_rng(task_seed)
        result: dict[str, tuple[RocCurve, float] | None] = {}
        try:
            adj = generate_graph(model, p, rng, **params)
            _, data = synthesize_dataset(adj, n, rng)
        except GgmError:
            return {m: None for m in methods}
        for m in methods:
            try:
                curve = roc_sweep(
                    m, grids.get(m, default_grid(m)), data, adj,
                    fixed=fixed.get(m), center=center, seed=rng,
                )
                result[m] = (curve, auc(curve))
            except GgmError:
                result[m] = None
        return result

    tasks = [(ci, rep) for ci in range(len(cells)) for rep in range(replications)]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outputs = list(pool.map(lambda t: run_task(*t), tasks))
    else:
        outputs = [run_task(*t) for t in tasks]
    by_task = dict(zip(tasks, outputs))

    if replications == 1:
        warnings.warn("sd is 0 by convention with a single replication",
                      stacklevel=2)
    rows: list[BenchmarkRow] = []
    curves: dict[tuple, RocCurve] = {}
    for cell_idx, (gi, si) in enumerate(cells):
        model, _ = models[gi]
        p, n = sizes[si]
        for m in methods:
            results = [by_task[(cell_idx, rep)][m] for rep in range(replications)]
            good = [r for r in results if r is not None]
            aucs = np.array([a for _, a in good])
            rows.append(BenchmarkRow(
                graph=model, p=p, n=n, method=m,
                mean_auc=float(aucs.mean()) if aucs.size else float("nan"),
                sd_auc=float(aucs.std(ddof=1)) if aucs.size > 1 else 0.0,
                replications=replications,
                failed=replications - len(good),
            ))
            if good:
                curves[(model, p, n, m)] = average_curves([c for c, _ in good])
    return BenchmarkReport(rows=rows, seed=seed, replications=replications,
                           grids={m: grids.get(m, default_grid(m)) for m in methods},
                           curves=curves)


@dataclass(frozen=True)
class NetworkComparison:
    """Per-method network sizes plus node/edge overlaps of method subsets."""

    methods: list[str]
    node_counts: dict[str, int]
    edge_counts: dict[str, int]
    max_degrees: dict[str, int]
    shared_nodes: dict[tuple[str, ...], int]
    shared_edges: dict[tuple[str, ...], int]


def compare_networks(sets: list[EdgeDecisionSet]) -> NetworkComparison:
    """Node/edge counts, max degree, and all subset overlaps (pairs up to the
    full intersection), from which Venn cells are derivable."""
    if not sets:
        raise ValueError("need at least one decision set")
    p = sets[0].p
    names0 = sets[0].names
    labels: list[str] = []
    for k, s in enumerate(sets):
        if s.p != p:
            raise DimensionMismatch(f"set {k} has p={s.p}, expected {p}")
        if (s.names is None) != (names0 is None) or (
            s.names is not None and s.names != names0
        ):
            raise DimensionMismatch(f"set {k} has different variable names")
        base = s.method or f"set{k}"
        labels.append(base if base not in labels else f"{base}_{k}")

    node_sets = {}
    edge_sets = {}
    node_counts = {}
    edge_counts = {}
    max_degrees = {}
    for label, s in zip(labels, sets):
        deg = s.degrees()
        node_sets[label] = frozenset(np.nonzero(deg > 0)[0].tolist())
        edge_sets[label] = frozenset(s.decided_pairs())
        node_counts[label] = len(node_sets[label])
        edge_counts[label] = len(edge_sets[label])
        max_degrees[label] = int(deg.max()) if deg.size else 0

    shared_nodes: dict[tuple[str, ...], int] = {}
    shared_edges: dict[tuple[str, ...], int] = {}
    for r in range(2, len(labels) + 1):
        for combo in itertools.combinations(labels, r):
            nodes = frozenset.intersection(*(node_sets[c] for c in combo))
            edges = frozenset.intersection(*(edge_sets[c] for c in combo))
            shared_nodes[combo] = len(nodes)
            shared_edges[combo] = len(edges)
    return NetworkComparison(
        methods=labels,
        node_counts=node_counts,
        edge_counts=edge_counts,
        max_degrees=max_degrees,
        shared_nodes=shared_nodes,
        shared_edges=shared_edges,
    )
