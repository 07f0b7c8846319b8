"""Random-graph generators producing ground-truth adjacency matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidK, InvalidM, InvalidProbability


@dataclass(frozen=True)
class AdjacencyMatrix:
    """Undirected simple graph stored as a p x p boolean matrix."""

    p: int
    matrix: np.ndarray
    model: str = "custom"

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=bool)
        if a.shape != (self.p, self.p):
            raise ValueError(f"matrix shape {a.shape} does not match p={self.p}")
        if np.any(np.diagonal(a)):
            raise ValueError("adjacency matrix has a nonzero diagonal")
        if not np.array_equal(a, a.T):
            raise ValueError("adjacency matrix is not symmetric")
        object.__setattr__(self, "matrix", a)

    @property
    def edge_count(self) -> int:
        return int(self.matrix.sum()) // 2

    def degrees(self) -> np.ndarray:
        return self.matrix.sum(axis=0).astype(np.int64)

    def edge_pairs(self) -> list[tuple[int, int]]:
        """Edges as sorted (i, j) pairs with i < j."""
        ii, jj = np.nonzero(np.triu(self.matrix, k=1))
        return list(zip(ii.tolist(), jj.tolist()))


def from_edges(p: int, edges, model: str = "custom") -> AdjacencyMatrix:
    """Build an adjacency matrix from an iterable of (i, j) pairs."""
    a = np.zeros((p, p), dtype=bool)
    for i, j in edges:
        if i == j:
            raise ValueError(f"self-loop at node {i}")
        if not (0 <= i < p and 0 <= j < p):
            raise ValueError(f"edge ({i}, {j}) outside 0..{p - 1}")
        a[i, j] = True
        a[j, i] = True
    return AdjacencyMatrix(p, a, model)


def chain_graph(p: int) -> AdjacencyMatrix:
    """Path graph 0-1-2-...-(p-1); handy as an easy ground truth."""
    return from_edges(p, [(i, i + 1) for i in range(p - 1)], model="custom")


def erdos_renyi(p: int, edge_prob: float, seed) -> AdjacencyMatrix:
    """Uniform random graph: each pair is an edge with probability edge_prob."""
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    if not 0.0 <= edge_prob <= 1.0:
        raise InvalidProbability(f"edge_prob must lie in [0, 1], got {edge_prob!r}")
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(p, k=1)
    hit = rng.random(iu[0].size) < edge_prob
    a = np.zeros((p, p), dtype=bool)
    a[iu] = hit
    a |= a.T
    return AdjacencyMatrix(p, a, "erdos_renyi")


def barabasi_albert(p: int, m: int, seed) -> AdjacencyMatrix:
    """Preferential-attachment graph.

    Starts from m isolated seed nodes; each arriving node attaches to m
    distinct existing nodes drawn with probability proportional to
    (degree + 1), so zero-degree seed nodes keep positive mass. The result
    always has m * (p - m) edges.
    """
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    if not 1 <= m < p:
        raise InvalidM(f"need 1 <= m < p, got m={m}, p={p}")
    rng = np.random.default_rng(seed)
    a = np.zeros((p, p), dtype=bool)
    deg = np.zeros(p, dtype=np.int64)
    for v in range(m, p):
        weights = (deg[:v] + 1).astype(np.float64)
        targets: list[int] = []
        for _ in range(m):
            probs = weights / weights.sum()
            t = int(rng.choice(v, p=probs))
            targets.append(t)
            weights[t] = 0.0
        for t in targets:
            a[v, t] = True
            a[t, v] = True
            deg[t] += 1
        deg[v] += m
    return AdjacencyMatrix(p, a, "barabasi_albert")


def watts_strogatz(p: int, k: int, beta: float, seed) -> AdjacencyMatrix:
    """Ring lattice with k nearest neighbors, each lattice edge rewired with
    probability beta to a uniformly chosen non-duplicate, non-self target.

    Only the far endpoint of an edge is redirected, so every node keeps its
    k/2 clockwise stubs and the edge count is always p * k / 2.
    """
    if p < 2:
        raise ValueError(f"need p >= 2, got {p}")
    if k % 2 != 0 or not 2 <= k < p:
        raise InvalidK(f"need even k with 2 <= k < p, got k={k}, p={p}")
    if not 0.0 <= beta <= 1.0:
        raise InvalidProbability(f"beta must lie in [0, 1], got {beta!r}")
    rng = np.random.default_rng(seed)
    a = np.zeros((p, p), dtype=bool)
    for i in range(p):
        for d in range(1, k // 2 + 1):
            j = (i + d) % p
            a[i, j] = True
            a[j, i] = True
    for i in range(p):
        for d in range(1, k // 2 + 1):
            if rng.random() >= beta:
                continue
            j_old = (i + d) % p
            allowed = np.nonzero(~a[i])[0]
            allowed = allowed[allowed != i]
            if allowed.size == 0:
                continue
            j_new = int(rng.choice(allowed))
            a[i, j_old] = False
            a[j_old, i] = False
            a[i, j_new] = True
            a[j_new, i] = True
    return AdjacencyMatrix(p, a, "watts_strogatz")


# Per-model default parameters; chosen so the expected edge count is of
# order p (sparse regime) for every model.
DEFAULT_GRAPH_PARAMS = {
    "erdos_renyi": lambda p: {"edge_prob": 2.0 / p},
    "barabasi_albert": lambda p: {"m": 2},
    "watts_strogatz": lambda p: {"k": 2, "beta": 0.1},
}

MODEL_ALIASES = {
    "er": "erdos_renyi",
    "ba": "barabasi_albert",
    "ws": "watts_strogatz",
    "erdos_renyi": "erdos_renyi",
    "barabasi_albert": "barabasi_albert",
    "watts_strogatz": "watts_strogatz",
}


def generate_graph(model: str, p: int, seed, **params) -> AdjacencyMatrix:
    """Dispatch to a generator by model name ('er', 'ba', 'ws' or full names).

    Unspecified parameters fall back to DEFAULT_GRAPH_PARAMS.
    """
    try:
        name = MODEL_ALIASES[model]
    except KeyError:
        raise ValueError(f"unknown graph model {model!r}") from None
    merged = DEFAULT_GRAPH_PARAMS[name](p) | params
    if name == "erdos_renyi":
        return erdos_renyi(p, merged["edge_prob"], seed)
    if name == "barabasi_albert":
        return barabasi_albert(p, merged["m"], seed)
    return watts_strogatz(p, merged["k"], merged["beta"], seed)
