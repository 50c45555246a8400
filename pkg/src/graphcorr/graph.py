"""Finite directed multigraphs on a fixed vertex set.

Conventions: an edge ``e`` points from its source ``s(e)`` to its range
``r(e)``. A *sink* is a vertex that emits no edge (nothing has it as
source) and a *source* is a vertex that receives no edge (nothing has it
as range). Graph theory texts often use the opposite words; these are the
ones under which "no sinks" matches fullness of the graph correspondence
and "no sources" matches faithfulness of its left action.

Morphisms are vertex-fixing: both graphs share the same vertex set and a
morphism is an injective map on edges preserving range and source.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import GraphError
from .reports import Report, Violation


@dataclass(frozen=True)
class Edge:
    id: str
    range: str
    source: str


def auto_edge_id(u: str, v: str, k: int) -> str:
    """Identifier of the ``k``-th edge with range ``u`` and source ``v``."""
    return f"{u}->{v}#{k}"


def _check_vertices(vertices) -> tuple[str, ...]:
    vs = tuple(vertices)
    for v in vs:
        if not isinstance(v, str):
            raise GraphError(f"vertex labels must be strings, got {v!r}")
    if len(set(vs)) != len(vs):
        raise GraphError(f"duplicate vertex labels in {list(vs)}")
    return vs


@dataclass(frozen=True, eq=False)
class DirectedGraph:
    """Graph ``(V, E^1, r, s)`` with ordered vertices and ordered, labeled edges.

    Equality is labeled equality: same vertex tuple and the same set of
    ``(id, range, source)`` triples. Edge order is kept for presentation
    purposes (it fixes generator order in the graph correspondence) but
    does not affect equality.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        vs = _check_vertices(self.vertices)
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        known = set(vs)
        seen = set()
        for e in edges:
            if e.id in seen:
                raise GraphError(f"duplicate edge id {e.id!r}")
            seen.add(e.id)
            if e.range not in known or e.source not in known:
                raise GraphError(f"edge {e.id!r} has an endpoint outside the vertex set")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_pairs(cls, vertices: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "DirectedGraph":
        """Build a graph from ``(range, source)`` pairs with auto-generated ids."""
        counter: dict = defaultdict(int)
        edges = []
        for u, v in pairs:
            edges.append(Edge(auto_edge_id(u, v, counter[u, v]), u, v))
            counter[u, v] += 1
        return cls(tuple(vertices), tuple(edges))

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return self.vertices == other.vertices and set(self.edges) == set(other.edges)

    def __hash__(self):
        return hash((self.vertices, frozenset(self.edges)))

    @property
    def edge_ids(self) -> tuple[str, ...]:
        return tuple(e.id for e in self.edges)

    def edge(self, edge_id: str) -> Edge:
        for e in self.edges:
            if e.id == edge_id:
                return e
        raise KeyError(edge_id)

    def edges_between(self, u: str, v: str) -> list[Edge]:
        """The edges with range ``u`` and source ``v``, in edge-list order."""
        return [e for e in self.edges if e.range == u and e.source == v]

    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}


@dataclass(frozen=True)
class GraphMorphism:
    """Edge map between two graphs; not validated on construction."""

    domain: DirectedGraph
    codomain: DirectedGraph
    edge_map: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "edge_map", dict(self.edge_map))

    def __call__(self, edge_id: str) -> str:
        return self.edge_map[edge_id]

    @classmethod
    def identity(cls, graph: DirectedGraph) -> "GraphMorphism":
        return cls(graph, graph, {e.id: e.id for e in graph.edges})

    def then(self, other: "GraphMorphism") -> "GraphMorphism":
        """Composite ``other o self``."""
        if self.codomain != other.domain:
            raise GraphError("morphisms are not composable")
        return GraphMorphism(self.domain, other.codomain,
                             {e: other.edge_map[f] for e, f in self.edge_map.items()})


@dataclass(frozen=True, eq=False)
class DimensionMatrix:
    """Counts indexed by ordered vertex pairs; ``counts[i, j]`` is for ``(u_i, v_j)``."""

    vertices: tuple[str, ...]
    counts: np.ndarray

    def __post_init__(self):
        vs = _check_vertices(self.vertices)
        counts = np.array(self.counts, dtype=np.int64)
        if counts.shape != (len(vs), len(vs)):
            raise GraphError(f"counts must be {len(vs)}x{len(vs)}, got {counts.shape}")
        if np.any(counts < 0):
            raise GraphError("counts must be nonnegative")
        counts.setflags(write=False)
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "counts", counts)

    def __getitem__(self, pair: tuple[str, str]) -> int:
        idx = {v: i for i, v in enumerate(self.vertices)}
        u, v = pair
        return int(self.counts[idx[u], idx[v]])

    def __eq__(self, other):
        if not isinstance(other, DimensionMatrix):
            return NotImplemented
        return self.vertices == other.vertices and np.array_equal(self.counts, other.counts)

    def __repr__(self):
        return f"DimensionMatrix({list(self.vertices)}, {self.counts.tolist()})"

    def total(self) -> int:
        return int(self.counts.sum())

    def to_dict(self) -> dict[str, dict[str, int]]:
        return {u: {v: int(self.counts[i, j]) for j, v in enumerate(self.vertices)}
                for i, u in enumerate(self.vertices)}


def adjacency_matrix(graph: DirectedGraph) -> DimensionMatrix:
    """``counts(u, v)`` = number of edges with range ``u`` and source ``v``."""
    idx = graph.vertex_index()
    counts = np.zeros((len(graph.vertices),) * 2, dtype=np.int64)
    for e in graph.edges:
        counts[idx[e.range], idx[e.source]] += 1
    return DimensionMatrix(graph.vertices, counts)


def validate_graph_morphism(phi: GraphMorphism) -> Report:
    violations = []
    dom, cod = phi.domain, phi.codomain
    if dom.vertices != cod.vertices:
        violations.append(Violation("vertex_sets", "domain and codomain have different vertex sets"))
    dom_ids = set(dom.edge_ids)
    cod_edges = {e.id: e for e in cod.edges}
    missing = [e for e in dom.edge_ids if e not in phi.edge_map]
    extra = [e for e in phi.edge_map if e not in dom_ids]
    if missing or extra:
        violations.append(Violation("total", f"edge map undefined on {missing}, defined off-domain on {extra}",
                                    tuple(missing + extra)))
    unknown = [e for e, f in phi.edge_map.items() if f not in cod_edges]
    if unknown:
        violations.append(Violation("codomain_edges", f"edges {unknown} map outside the codomain", tuple(unknown)))
    images: dict = defaultdict(list)
    for e, f in phi.edge_map.items():
        images[f].append(e)
    clashes = {f: es for f, es in images.items() if len(es) > 1}
    if clashes:
        f, es = next(iter(clashes.items()))
        violations.append(Violation("injective", f"edges {es} all map to {f!r}", tuple(es)))
    for e in dom.edges:
        f = cod_edges.get(phi.edge_map.get(e.id))
        if f is None:
            continue
        if f.range != e.range or f.source != e.source:
            violations.append(Violation(
                "range_source",
                f"edge {e.id!r} ({e.source}->{e.range}) maps to {f.id!r} ({f.source}->{f.range})",
                (e.id, f.id)))
            break
    return Report("graph_morphism", tuple(violations))


def is_vertex_fixing_isomorphism(phi: GraphMorphism) -> bool:
    """True iff the (valid) morphism is a bijection onto the codomain edges."""
    report = validate_graph_morphism(phi)
    if not report.accepted:
        raise GraphError(f"invalid graph morphism: {report.failed_clauses}")
    return set(phi.edge_map.values()) == set(phi.codomain.edge_ids)


def canonical_pairing_isomorphism(E: DirectedGraph, F: DirectedGraph) -> GraphMorphism | None:
    """Pair the k-th edge of each class ``uE^1v`` with the k-th edge of ``uF^1v``.

    Returns ``None`` when the adjacency matrices differ.
    """
    if E.vertices != F.vertices:
        raise GraphError("graphs have different vertex sets")
    if adjacency_matrix(E) != adjacency_matrix(F):
        return None
    classes: dict = defaultdict(list)
    for f in F.edges:
        classes[f.range, f.source].append(f.id)
    taken: dict = defaultdict(int)
    edge_map = {}
    for e in E.edges:
        key = (e.range, e.source)
        edge_map[e.id] = classes[key][taken[key]]
        taken[key] += 1
    return GraphMorphism(E, F, edge_map)


def functional_graph(sigma: Mapping[str, str], vertices: Iterable[str] | None = None) -> DirectedGraph:
    """The graph with one edge ``(sigma(v), v)`` from ``v`` to ``sigma(v)`` per vertex."""
    vs = _check_vertices(sigma.keys() if vertices is None else vertices)
    missing = [v for v in vs if v not in sigma]
    if missing:
        raise GraphError(f"sigma is undefined on {missing}")
    bad = [v for v in vs if sigma[v] not in vs]
    if bad:
        raise GraphError(f"sigma maps {bad} outside the vertex set")
    return DirectedGraph(vs, tuple(Edge(f"({sigma[v]},{v})", sigma[v], v) for v in vs))


def sinks_and_sources(graph: DirectedGraph) -> tuple[list[str], list[str]]:
    emitting = {e.source for e in graph.edges}
    receiving = {e.range for e in graph.edges}
    sinks = [v for v in graph.vertices if v not in emitting]
    sources = [v for v in graph.vertices if v not in receiving]
    return sinks, sources


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(graph: DirectedGraph, name: str = "E") -> str:
    """Graphviz rendering; arrows run from source to range, labeled by edge id."""
    lines = [f"digraph {_dot_quote(name)} {{"]
    lines += [f"  {_dot_quote(v)};" for v in graph.vertices]
    lines += [f"  {_dot_quote(e.source)} -> {_dot_quote(e.range)} [label={_dot_quote(e.id)}];"
              for e in graph.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"
