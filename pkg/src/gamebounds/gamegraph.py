"""Game graphs: one vertex per winning quadruple, edges marking incompatible answers.

Two winning quadruples (x,y,a,b) and (x',y',a',b') are adjacent when the two
players could not both be playing a single deterministic strategy that emits
them: same x with different a, or same y with different b.  An independent
set therefore picks at most one consistent answer pair per question pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .games import Game


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph with bitset adjacency rows."""

    n: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if len(self.rows) != self.n:
            raise ValueError("adjacency row count does not match n")
        for i, row in enumerate(self.rows):
            if row & (1 << i):
                raise ValueError(f"self-loop at vertex {i}")
            if row >> self.n:
                raise ValueError(f"adjacency row {i} references vertices >= n")
        for i in range(self.n):
            for j in range(i + 1, self.n):
                if bool(self.rows[i] >> j & 1) != bool(self.rows[j] >> i & 1):
                    raise ValueError(f"adjacency not symmetric at ({i},{j})")

    @staticmethod
    def from_edges(n: int, edges) -> "Graph":
        rows = [0] * n
        for i, j in edges:
            if i == j:
                raise ValueError(f"self-loop at vertex {i}")
            rows[i] |= 1 << j
            rows[j] |= 1 << i
        return Graph(n, tuple(rows))

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i in range(self.n):
            row = self.rows[i] >> (i + 1) << (i + 1)
            while row:
                low = row & -row
                out.append((i, low.bit_length() - 1))
                row ^= low
        return out

    @property
    def num_edges(self) -> int:
        return sum(r.bit_count() for r in self.rows) // 2

    def degree(self, i: int) -> int:
        return self.rows[i].bit_count()


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def empty_graph(n: int) -> Graph:
    return Graph(n, tuple([0] * n))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    edges = g.edges() + [(i + g.n, j + g.n) for i, j in h.edges()]
    return Graph.from_edges(g.n + h.n, edges)


@dataclass(frozen=True)
class GameGraph:
    """Graph on the winning quadruples of a game, in lexicographic order.

    ``weights`` is None for the plain 0/1 construction; for the weighted
    construction weight(v) = predicate(v) * pi(x, y).
    """

    vertices: tuple[tuple[int, int, int, int], ...]
    edges: frozenset[tuple[int, int]]
    source_k: int
    weights: tuple[float, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def weight_array(self) -> np.ndarray:
        if self.weights is None:
            raise ValueError("game graph carries no weights")
        return np.asarray(self.weights)


def _edges_for_vertices(vertices) -> frozenset[tuple[int, int]]:
    """Adjacency rule applied within groups that share x or share y."""
    by_x: dict[int, list[int]] = {}
    by_y: dict[int, list[int]] = {}
    for idx, (x, y, a, b) in enumerate(vertices):
        by_x.setdefault(x, []).append(idx)
        by_y.setdefault(y, []).append(idx)
    edges = set()
    for group in by_x.values():
        for p in range(len(group)):
            i = group[p]
            for q in range(p + 1, len(group)):
                j = group[q]
                if vertices[i][2] != vertices[j][2]:
                    edges.add((i, j))
    for group in by_y.values():
        for p in range(len(group)):
            i = group[p]
            for q in range(p + 1, len(group)):
                j = group[q]
                if vertices[i][3] != vertices[j][3]:
                    edges.add((i, j))
    return frozenset(edges)


def build_game_graph(g: Game) -> GameGraph:
    """Game graph of a 0/1 game: vertices are the winning quadruples."""
    if not g.is_boolean():
        raise ValueError(
            "game has a non-boolean predicate; use build_weighted_game_graph")
    vertices = tuple(g.winning_quadruples())
    return GameGraph(vertices, _edges_for_vertices(vertices), g.k)


def build_weighted_game_graph(g: Game) -> GameGraph:
    """Weighted game graph: vertex weight = predicate * input probability.

    Quadruples of zero weight (predicate zero, or question probability zero)
    are dropped: they can never contribute to a strategy's value and would
    only inflate the downstream optimization problems.
    """
    vertices = []
    weights = []
    for x in range(g.nx):
        for y in range(g.ny):
            pxy = g.distribution[x, y]
            for a in range(g.na):
                for b in range(g.nb):
                    w = float(g.predicate[x, y, a, b] * pxy)
                    if w > 0.0:
                        vertices.append((x, y, a, b))
                        weights.append(w)
    vertices = tuple(vertices)
    return GameGraph(vertices, _edges_for_vertices(vertices), g.k,
                     tuple(weights))


def to_plain_graph(gg: GameGraph) -> Graph:
    """Drop labels and weights, keeping only the adjacency structure."""
    return Graph.from_edges(gg.n, gg.edges)


def to_dimacs(gg: GameGraph) -> str:
    """DIMACS-style edge list (1-based vertex numbers)."""
    lines = [f"p edge {gg.n} {gg.num_edges}"]
    for i, j in sorted(gg.edges):
        lines.append(f"e {i + 1} {j + 1}")
    return "\n".join(lines) + "\n"


def dimacs_sidecar(gg: GameGraph) -> dict:
    """JSON sidecar mapping vertex index (0-based) to quadruple and weight."""
    entries = []
    for idx, quad in enumerate(gg.vertices):
        entry = {"index": idx, "quadruple": list(quad)}
        if gg.weights is not None:
            entry["weight"] = gg.weights[idx]
        entries.append(entry)
    return {"num_vertices": gg.n, "num_edges": gg.num_edges,
            "source_k": gg.source_k, "vertices": entries}


def parse_dimacs(text: str) -> Graph:
    """Read a DIMACS edge list back into a plain graph."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "edge":
                raise ValueError(f"line {lineno}: malformed problem line")
            n = int(parts[2])
        elif parts[0] == "e":
            if n is None:
                raise ValueError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise ValueError(f"line {lineno}: malformed edge line")
            edges.append((int(parts[1]) - 1, int(parts[2]) - 1))
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing problem line")
    return Graph.from_edges(n, edges)
