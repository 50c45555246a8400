"""Seeded random graphs, maps, transforms and morphisms for property checks.

All functions take a ``numpy.random.Generator``; use :func:`rng` to make
one from an integer seed.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from .correspondence import CorrespondenceMorphism
from .graph import DirectedGraph, Edge, GraphMorphism


def rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def vertex_labels(k: int) -> tuple[str, ...]:
    return tuple(f"v{i}" for i in range(k))


def random_graph(gen: np.random.Generator, max_vertices: int = 6, max_edges: int = 25,
                 min_edges: int = 1, prefix: str = "e") -> DirectedGraph:
    k = int(gen.integers(1, max_vertices + 1))
    m = int(gen.integers(min_edges, max_edges + 1))
    vs = vertex_labels(k)
    ends = gen.integers(0, k, size=(m, 2))
    return DirectedGraph(vs, tuple(Edge(f"{prefix}{i}", vs[r], vs[s]) for i, (r, s) in enumerate(ends)))


def random_sigma(gen: np.random.Generator, max_vertices: int = 8) -> dict[str, str]:
    vs = vertex_labels(int(gen.integers(1, max_vertices + 1)))
    return {v: vs[int(i)] for v, i in zip(vs, gen.integers(0, len(vs), size=len(vs)))}


def random_unitary(gen: np.random.Generator, k: int) -> np.ndarray:
    z = gen.standard_normal((k, k)) + 1j * gen.standard_normal((k, k))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_well_conditioned(gen: np.random.Generator, k: int, half_log_cond: float) -> np.ndarray:
    """``U diag(s) W^H`` with ``s`` in ``[10**-h, 10**h]``, so condition <= ``10**(2h)``."""
    s = 10.0 ** gen.uniform(-half_log_cond, half_log_cond, size=k)
    return random_unitary(gen, k) @ np.diag(s) @ random_unitary(gen, k).conj().T


def block_compatible_transform(gen: np.random.Generator, E: DirectedGraph, max_cond: float = 1e3) -> np.ndarray:
    """Random invertible ``T`` commuting with every action matrix of ``Gamma(E)``.

    ``T`` is block diagonal over the classes ``uE^1v``; its condition number
    is at most ``max_cond``.
    """
    h = gen.uniform(0.0, np.log10(max_cond) / 2)
    classes = defaultdict(list)
    for i, e in enumerate(E.edges):
        classes[e.range, e.source].append(i)
    T = np.zeros((len(E.edges),) * 2, dtype=complex)
    for idx in classes.values():
        T[np.ix_(idx, idx)] = random_well_conditioned(gen, len(idx), h)
    return T


def random_phase_unitary(gen: np.random.Generator, n: int) -> np.ndarray:
    return np.diag(np.exp(1j * gen.uniform(0, 2 * np.pi, size=n)))


def random_isomorphism(gen: np.random.Generator, E: DirectedGraph, prefix: str = "f") -> GraphMorphism:
    """``E`` onto a shuffled copy with fresh edge ids."""
    order = gen.permutation(len(E.edges))
    fresh = {e.id: f"{prefix}{i}" for i, e in enumerate(E.edges)}
    F = DirectedGraph(E.vertices, tuple(Edge(fresh[E.edges[i].id], E.edges[i].range, E.edges[i].source)
                                        for i in order))
    return GraphMorphism(E, F, fresh)


def random_inclusion(gen: np.random.Generator, F: DirectedGraph, proper: bool = True) -> GraphMorphism:
    """Inclusion of a random nonempty edge subset of ``F``; strict when ``proper`` and possible."""
    m = len(F.edges)
    hi = m - 1 if proper and m > 1 else m
    size = int(gen.integers(1, hi + 1))
    keep = sorted(gen.choice(m, size=size, replace=False))
    E = DirectedGraph(F.vertices, tuple(F.edges[i] for i in keep))
    return GraphMorphism(E, F, {e.id: e.id for e in E.edges})


def random_injective_morphism(gen: np.random.Generator, max_vertices: int = 6,
                              max_edges: int = 25) -> GraphMorphism:
    """Random ``phi: E -> F``: an inclusion, optionally followed by a relabelling."""
    F = random_graph(gen, max_vertices, max_edges)
    phi = random_inclusion(gen, F, proper=bool(gen.integers(0, 2)))
    if gen.integers(0, 2):
        phi = phi.then(random_isomorphism(gen, F))
    return phi


def mutate_graph(gen: np.random.Generator, E: DirectedGraph) -> DirectedGraph:
    """A labeled graph different from ``E`` on the same vertex set."""
    edges = list(E.edges)
    vs = E.vertices
    choices = ["rename", "add"]
    if len(edges) > 1:
        choices.append("remove")
    if len(vs) > 1 and edges:
        choices += ["range", "source"]
    kind = choices[int(gen.integers(0, len(choices)))]
    if kind == "add" or not edges:
        edges.append(Edge(f"new{len(edges)}", vs[int(gen.integers(0, len(vs)))], vs[int(gen.integers(0, len(vs)))]))
        return DirectedGraph(vs, tuple(edges))
    i = int(gen.integers(0, len(edges)))
    e = edges[i]
    if kind == "remove":
        del edges[i]
    elif kind == "rename":
        edges[i] = Edge(e.id + "'", e.range, e.source)
    else:
        current = e.range if kind == "range" else e.source
        other = [v for v in vs if v != current][int(gen.integers(0, len(vs) - 1))]
        edges[i] = Edge(e.id, other, e.source) if kind == "range" else Edge(e.id, e.range, other)
    return DirectedGraph(vs, tuple(edges))


def phase_twist(gen: np.random.Generator, psi: CorrespondenceMorphism) -> CorrespondenceMorphism:
    """``D o psi`` for a random diagonal unitary ``D`` on a graph correspondence codomain."""
    D = random_phase_unitary(gen, psi.codomain.dim)
    return CorrespondenceMorphism(psi.domain, psi.codomain, D @ psi.matrix)
