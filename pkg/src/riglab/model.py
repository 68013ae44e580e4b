"""Random intersection graph model.

A graph G(n, m, p) is built from a random bipartite attachment: each of n
vertices picks each of m objects independently with probability p, and two
vertices are adjacent when their object sets intersect.  This module holds
the parameter and graph types, the seeded sampler, the bipartite-to-graph
projection, and the plain-text exchange formats.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations

import numpy as np

__all__ = [
    "ModelParams",
    "BipartiteAssignment",
    "IntersectionGraph",
    "vertex_substream",
    "sample_assignment",
    "pair_adjacent",
    "project",
    "degree",
    "is_connected",
    "format_edgelist",
    "parse_edgelist",
    "format_assignment",
    "parse_assignment",
]

_MASK64 = (1 << 64) - 1
_HEADER_RE = re.compile(
    r"^#\s*rig\s+n=(?P<n>\S+)\s+m=(?P<m>\S+)\s+p=(?P<p>\S+)\s+seed=(?P<seed>\S+)\s*$"
)


@dataclass(frozen=True)
class ModelParams:
    """Model parameters: n vertices, m objects, attachment probability p."""

    n: int
    m: int
    p: float

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"m must be an integer >= 1, got {self.m!r}")
        p = self.p
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise ValueError(f"p must be a real number in [0, 1], got {p!r}")
        if math.isnan(p) or not 0.0 <= p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {p!r}")
        object.__setattr__(self, "p", float(p))


@dataclass(frozen=True)
class BipartiteAssignment:
    """Per-vertex object sets, stored as strictly increasing index tuples."""

    params: ModelParams
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.sets) != self.params.n:
            raise ValueError(
                f"expected {self.params.n} object sets, got {len(self.sets)}"
            )
        m = self.params.m
        for v, objects in enumerate(self.sets):
            prev = -1
            for w in objects:
                if not isinstance(w, int) or not 0 <= w < m:
                    raise ValueError(
                        f"vertex {v}: object index {w!r} outside [0, {m})"
                    )
                if w <= prev:
                    raise ValueError(
                        f"vertex {v}: object indices must be strictly increasing"
                    )
                prev = w


@dataclass(frozen=True)
class IntersectionGraph:
    """Simple undirected graph on vertices 0..n-1 with canonical (i, j), i < j edges."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"n must be an integer >= 1, got {self.n!r}")
        for edge in self.edges:
            i, j = edge
            if not (0 <= i < j < self.n):
                raise ValueError(f"edge {edge!r} is not canonical for n={self.n}")


def vertex_substream(seed: int, index: int) -> np.random.Generator:
    """Return the dedicated random stream for one substream index.

    Streams are Philox counter-based generators keyed by the 128-bit pair
    (seed mod 2**64, index).  Distinct indices give independent streams, so
    any vertex's attachments can be regenerated in isolation and sampling is
    reproducible under any parallel schedule.  This derivation is part of the
    sampling contract and must not change.
    """
    key = np.array([seed & _MASK64, index & _MASK64], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_assignment(params: ModelParams, seed: int) -> BipartiteAssignment:
    """Draw a bipartite attachment: each (vertex, object) pair kept with probability p.

    Vertex v consumes exactly m uniforms from ``vertex_substream(seed, v)``;
    object w is attached when the w-th uniform falls below p.  The same seed
    with a larger p therefore attaches a superset of objects.
    """
    sets = []
    for v in range(params.n):
        u = vertex_substream(seed, v).random(params.m)
        sets.append(tuple(int(w) for w in np.flatnonzero(u < params.p)))
    return BipartiteAssignment(params=params, sets=tuple(sets))


def pair_adjacent(assignment: BipartiteAssignment, i: int, j: int) -> bool:
    """True when vertices i and j share at least one object."""
    n = assignment.params.n
    for v in (i, j):
        if not isinstance(v, int) or not 0 <= v < n:
            raise ValueError(f"vertex index {v!r} outside [0, {n})")
    if i == j:
        raise ValueError(f"adjacency is undefined for a vertex with itself (i=j={i})")
    a, b = assignment.sets[i], assignment.sets[j]
    if len(b) < len(a):
        a, b = b, a
    other = set(b)
    return any(w in other for w in a)


def project(assignment: BipartiteAssignment) -> IntersectionGraph:
    """Project the bipartite attachment to the intersection graph.

    Uses an inverted object-to-owners index, so the cost is the sum of
    squared object degrees rather than n**2 set intersections.
    """
    owners: list[list[int]] = [[] for _ in range(assignment.params.m)]
    for v, objects in enumerate(assignment.sets):
        for w in objects:
            owners[w].append(v)
    edges: set[tuple[int, int]] = set()
    for vs in owners:
        # vertices were appended in increasing order, so pairs are canonical
        edges.update(combinations(vs, 2))
    return IntersectionGraph(n=assignment.params.n, edges=frozenset(edges))


def degree(graph: IntersectionGraph, v: int) -> int:
    """Number of edges incident to vertex v."""
    if not isinstance(v, int) or not 0 <= v < graph.n:
        raise ValueError(f"vertex index {v!r} outside [0, {graph.n})")
    return sum(1 for i, j in graph.edges if v == i or v == j)


class _DisjointSet:
    """Union-find with path compression and union by size."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def is_connected(graph: IntersectionGraph) -> bool:
    """True when every vertex is reachable from every other.  n=1 counts as connected."""
    if graph.n == 1:
        return True
    dsu = _DisjointSet(graph.n)
    for i, j in graph.edges:
        dsu.union(i, j)
    root0 = dsu.find(0)
    return all(dsu.find(v) == root0 for v in range(1, graph.n))


def _format_p(p: float) -> str:
    return repr(float(p))


def _header_line(params: ModelParams, seed: int) -> str:
    return f"# rig n={params.n} m={params.m} p={_format_p(params.p)} seed={seed}"


def format_edgelist(
    graph: IntersectionGraph, params: ModelParams, seed: int, extra_comments: tuple[str, ...] = ()
) -> str:
    """Render a graph as the `# rig ...` header plus one `i j` line per edge.

    Edges appear in ascending lexicographic order with i < j.  Additional
    comment lines may follow the header; parsers skip every `#` line after
    reading the first header.
    """
    if graph.n != params.n:
        raise ValueError(f"graph has n={graph.n} but params have n={params.n}")
    lines = [_header_line(params, seed)]
    lines.extend(f"# {text}" for text in extra_comments)
    lines.extend(f"{i} {j}" for i, j in sorted(graph.edges))
    return "\n".join(lines) + "\n"


def _parse_header(lines: list[str], what: str) -> tuple[ModelParams, int]:
    for line in lines:
        match = _HEADER_RE.match(line)
        if match:
            params = ModelParams(
                n=int(match["n"]), m=int(match["m"]), p=float(match["p"])
            )
            return params, int(match["seed"])
    raise ValueError(f"{what}: missing `# rig n=... m=... p=... seed=...` header")


def parse_edgelist(text: str) -> tuple[IntersectionGraph, ModelParams, int]:
    """Parse ``format_edgelist`` output back into a graph.

    Returns the graph together with the header parameters and seed.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    params, seed = _parse_header(lines, "edge list")
    edges = set()
    for line in lines:
        if line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ValueError(f"edge list: malformed line {line!r}")
        i, j = int(fields[0]), int(fields[1])
        edges.add((i, j))
    return IntersectionGraph(n=params.n, edges=frozenset(edges)), params, seed


def format_assignment(assignment: BipartiteAssignment, seed: int) -> str:
    """Render per-vertex object sets, one `v: w1 w2 ...` line per vertex."""
    lines = [_header_line(assignment.params, seed)]
    for v, objects in enumerate(assignment.sets):
        body = " ".join(str(w) for w in objects)
        lines.append(f"{v}: {body}".rstrip())
    return "\n".join(lines) + "\n"


def parse_assignment(text: str) -> tuple[BipartiteAssignment, int]:
    """Parse ``format_assignment`` output back into an assignment."""
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    params, seed = _parse_header(lines, "assignment")
    sets: dict[int, tuple[int, ...]] = {}
    for line in lines:
        if line.startswith("#"):
            continue
        head, _, tail = line.partition(":")
        if not _:
            raise ValueError(f"assignment: malformed line {line!r}")
        v = int(head)
        if v in sets:
            raise ValueError(f"assignment: duplicate vertex {v}")
        sets[v] = tuple(int(w) for w in tail.split())
    if sorted(sets) != list(range(params.n)):
        raise ValueError("assignment: vertex lines do not cover 0..n-1 exactly")
    ordered = tuple(sets[v] for v in range(params.n))
    return BipartiteAssignment(params=params, sets=ordered), seed
