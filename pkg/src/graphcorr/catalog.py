"""Small named graphs, correspondences and morphisms used as fixtures."""

from __future__ import annotations

import numpy as np

from .correspondence import Correspondence, CorrespondenceMorphism, graph_correspondence
from .graph import DirectedGraph, Edge, GraphMorphism


def loop_graph(vertex: str = "w", edge_id: str = "e") -> DirectedGraph:
    return DirectedGraph((vertex,), (Edge(edge_id, vertex, vertex),))


def two_cycle_graph() -> DirectedGraph:
    """``u -> v`` and ``v -> u``, edge ids named after the generators ``chi_u``, ``chi_v``."""
    return DirectedGraph(("u", "v"), (Edge("chi_u", "v", "u"), Edge("chi_v", "u", "v")))


def phase_morphism(X: Correspondence, angle: float) -> CorrespondenceMorphism:
    return CorrespondenceMorphism(X, X, np.exp(1j * angle) * np.eye(X.dim))


def loop_phase_morphism(angle: float = np.pi / 4) -> CorrespondenceMorphism:
    return phase_morphism(graph_correspondence(loop_graph()), angle)


def swap_sigma() -> dict[str, str]:
    return {"u": "v", "v": "u"}


def parallel_inclusion() -> GraphMorphism:
    """One edge ``v -> u`` included into two parallel edges ``v -> u``."""
    F = DirectedGraph(("u", "v"), (Edge("a", "u", "v"), Edge("b", "u", "v")))
    E = DirectedGraph(("u", "v"), (Edge("a", "u", "v"),))
    return GraphMorphism(E, F, {"a": "a"})


def balanced_graph() -> DirectedGraph:
    """Two vertices, no sinks or sources: parallel ``a, b: v -> u``, ``c: u -> v`` and loops ``d``, ``g``."""
    return DirectedGraph(("u", "v"), (
        Edge("a", "u", "v"), Edge("b", "u", "v"), Edge("c", "v", "u"), Edge("d", "u", "u"), Edge("g", "v", "v")))


def _unit(n, i, j):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1
    return m


def clause_perturbations(eps: float = 1e-3) -> dict[str, Correspondence]:
    """One broken copy of ``Gamma(balanced_graph())`` per validator clause, keyed by clause.

    Each copy moves entries by ``eps``. Some clauses cannot fail alone (the
    right action is determined by the Gram blocks, and for Hermitian data
    the two right-linearity clauses are adjoint to each other), so a copy
    may break further clauses besides its key.
    """
    X = graph_correspondence(balanced_graph())
    n = X.dim
    a, b, c, d, g = range(5)
    iu, iv = X.index("u"), X.index("v")

    def copy(gram=None, right=None, left=None):
        return Correspondence(X.vertices,
                              X.gram if gram is None else gram,
                              X.right_action if right is None else right,
                              X.left_action if left is None else left,
                              X.generators)

    out = {}
    G = X.gram.copy()
    G[iv] += eps * _unit(n, a, b)
    out["gram_hermitian_psd"] = copy(gram=G)

    R = X.right_action.copy()
    R[iv] += eps * _unit(n, c, c)
    out["right_projections"] = copy(right=R)

    L = X.left_action.copy()
    N = _unit(n, a, b) + _unit(n, b, a)
    L[iu] += eps * N
    L[iv] -= eps * N
    out["left_projections"] = copy(left=L)

    L = X.left_action.copy()
    M = _unit(n, a, c) + _unit(n, c, a)
    L[iu] += eps * M
    L[iv] -= eps * M
    out["bimodule_commutation"] = copy(left=L)

    G = X.gram.copy()
    G[iu] += eps * _unit(n, a, a)
    out["inner_product_right_linear"] = copy(gram=G)

    G = X.gram.copy()
    G[iu] += eps * (_unit(n, a, a) + _unit(n, a, d) + _unit(n, d, a))
    out["inner_product_right_adjoint"] = copy(gram=G)

    # similarity by I + eps E_ag keeps L a partition of unity commuting with R
    L = X.left_action.copy()
    L[iu] -= eps * _unit(n, a, g)
    L[iv] += eps * _unit(n, a, g)
    out["left_action_adjointable"] = copy(left=L)
    return out
