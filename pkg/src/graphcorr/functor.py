"""The graph-correspondence functor and graph extraction.

``Gamma`` sends a graph ``E`` to :func:`graph_correspondence` ``(E)`` and a
vertex-fixing injective morphism ``phi`` to the generator map
``chi_e -> chi_{phi(e)}``. In the other direction, :func:`build_graph`
decomposes any valid presentation into its blocks ``X_uv``, picks an
orthonormal basis of each, and reads off a graph with one edge per basis
vector, together with an explicit isomorphism onto its graph
correspondence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .complexla import TOL_RANK, TOL_VAL, form_orthonormalize, invert, max_abs, orthonormal_extension
from .correspondence import (
    Correspondence,
    CorrespondenceMorphism,
    correspondences_equal,
    dimension_matrix,
    graph_correspondence,
    validate_correspondence_morphism,
)
from .errors import (
    CorrespondenceError,
    DecompositionError,
    GraphError,
    OrthonormalityError,
    SingularMatrixError,
)
from .graph import (
    DirectedGraph,
    Edge,
    GraphMorphism,
    auto_edge_id,
    canonical_pairing_isomorphism,
    is_vertex_fixing_isomorphism,
    validate_graph_morphism,
)


@dataclass(frozen=True, eq=False)
class OrthoBasisFamily:
    """Orthonormal bases of the blocks ``X_uv``, keyed by ``(u, v)``."""

    correspondence: Correspondence
    blocks: Mapping[tuple[str, str], tuple[np.ndarray, ...]]

    def sizes(self) -> dict[tuple[str, str], int]:
        return {k: len(b) for k, b in self.blocks.items()}

    def total(self) -> int:
        return sum(len(b) for b in self.blocks.values())

    def residual(self) -> float:
        """Worst deviation from the block-membership and orthonormality invariants."""
        X = self.correspondence
        worst = 0.0
        for (u, v), vecs in self.blocks.items():
            if not vecs:
                continue
            B = np.stack(vecs, axis=1)
            worst = max(worst, max_abs(X.L(u) @ B - B), max_abs(X.R(v) @ B - B),
                        max_abs(B.conj().T @ X.G(v) @ B - np.eye(B.shape[1])))
        return worst


@dataclass(frozen=True, eq=False)
class CharacterizationResult:
    """A graph extracted from ``X`` with the isomorphism ``witness: X -> Gamma(graph)``."""

    graph: DirectedGraph
    witness: CorrespondenceMorphism
    basis: OrthoBasisFamily
    edge_vectors: Mapping[str, np.ndarray]


@dataclass(frozen=True, eq=False)
class EssentialFullnessSquare:
    """Commuting square ``Gamma(phi) o upsilon_E = upsilon_F o psi``."""

    psi: CorrespondenceMorphism
    E: DirectedGraph
    F: DirectedGraph
    phi: GraphMorphism
    upsilon_E: CorrespondenceMorphism
    upsilon_F: CorrespondenceMorphism
    gamma_phi: CorrespondenceMorphism

    @property
    def residual(self) -> float:
        lhs = self.gamma_phi.matrix @ self.upsilon_E.matrix
        rhs = self.upsilon_F.matrix @ self.psi.matrix
        return max_abs(lhs - rhs)


@dataclass(frozen=True)
class ReflectionReport:
    gamma_invertible: bool
    graph_isomorphism: bool

    @property
    def agree(self) -> bool:
        return self.gamma_invertible == self.graph_isomorphism


def gamma_on_morphism(phi: GraphMorphism) -> CorrespondenceMorphism:
    """``Gamma(phi)``: the 0/1 matrix with a 1 at row ``phi(e)``, column ``e``."""
    report = validate_graph_morphism(phi)
    if not report.accepted:
        raise GraphError(f"invalid graph morphism: {report.failed_clauses}")
    E, F = phi.domain, phi.codomain
    cod_index = {f: i for i, f in enumerate(F.edge_ids)}
    M = np.zeros((len(F.edges), len(E.edges)), dtype=complex)
    for j, e in enumerate(E.edge_ids):
        M[cod_index[phi.edge_map[e]], j] = 1
    return CorrespondenceMorphism(graph_correspondence(E), graph_correspondence(F), M)


def _block_keys(X: Correspondence):
    return [(u, v) for u in X.vertices for v in X.vertices]


def decompose(X: Correspondence, tol: float = TOL_RANK) -> OrthoBasisFamily:
    """Orthonormal bases of every block ``X_uv = p_u . X . p_v``.

    Each block is spanned by the compressed generators ``L_u R_v xi_i``,
    which are orthonormalized against ``G_v``.

    Raises
    ------
    DecompositionError
        If the blocks do not exhaust ``X`` or disagree with the rank count.
    """
    blocks = {}
    for u, v in _block_keys(X):
        P = X.compression(u, v)
        blocks[u, v] = tuple(form_orthonormalize(list(P.T), X.G(v), tol))
    family = OrthoBasisFamily(X, blocks)
    total = family.total()
    if total != X.dim:
        raise DecompositionError(
            f"blocks hold {total} basis vectors but dim is {X.dim} (deficit {X.dim - total}); "
            "presentation is invalid or numerically marginal")
    try:
        dims = dimension_matrix(X, tol)
    except CorrespondenceError as exc:
        raise DecompositionError(str(exc)) from exc
    for (u, v), size in family.sizes().items():
        if dims[u, v] != size:
            raise DecompositionError(f"block ({u}, {v}) has {size} basis vectors but rank {dims[u, v]}")
    return family


def _anchor(vec: np.ndarray) -> int:
    return int(np.argmax(np.abs(vec)))


def build_graph(X: Correspondence, tol_rank: float = TOL_RANK, tol_val: float = TOL_VAL) -> CharacterizationResult:
    """Extract a graph ``E`` and an isomorphism ``X -> Gamma(E)``.

    Every basis vector of block ``(u, v)`` becomes an edge with range ``u``,
    source ``v`` and id ``"u->v#k"``. Edges are listed by the position of
    each vector's largest coefficient (block order breaks ties), so a graph
    correspondence yields its own edge order back and an identity witness.
    The witness sends ``xi`` to its coordinates in the edge basis.
    """
    family = decompose(X, tol_rank)
    labelled = []
    for rank, (u, v) in enumerate(_block_keys(X)):
        for k, vec in enumerate(family.blocks[u, v]):
            labelled.append((_anchor(vec), rank, k, Edge(auto_edge_id(u, v, k), u, v), vec))
    labelled.sort(key=lambda t: t[:3])
    graph = DirectedGraph(X.vertices, tuple(t[3] for t in labelled))
    B = np.stack([t[4] for t in labelled], axis=1)
    try:
        W = invert(B, tol_val)
    except SingularMatrixError as exc:
        raise DecompositionError(f"edge basis is not invertible: {exc}") from exc
    witness = CorrespondenceMorphism(X, graph_correspondence(graph), W)
    return CharacterizationResult(graph, witness, family, {t[3].id: t[4] for t in labelled})


def recover_graph_isomorphism(F: DirectedGraph, tol_rank: float = TOL_RANK) -> GraphMorphism:
    """Rebuild a graph from ``Gamma(F)`` and pair it with ``F`` class by class."""
    E = build_graph(graph_correspondence(F), tol_rank).graph
    phi = canonical_pairing_isomorphism(E, F)
    if phi is None:
        raise DecompositionError("rebuilt graph has a different adjacency matrix")
    return phi


def essential_fullness(psi: CorrespondenceMorphism, tol_rank: float = TOL_RANK,
                       tol_val: float = TOL_VAL) -> EssentialFullnessSquare:
    """Complete ``psi: X -> Y`` to a square over ``Gamma`` of a graph morphism.

    ``E`` comes from :func:`build_graph` on ``X``. For each block the images
    ``psi(E_uv)`` must be orthonormal in ``Y_uv``; they are extended to a
    basis ``F_uv`` of ``Y_uv`` and ``phi`` sends the k-th edge of ``E``'s
    ``(u, v)`` class to the k-th edge of ``F``'s.

    Raises
    ------
    OrthonormalityError
        If some image family is not orthonormal in its block, which means
        ``psi`` is not a valid morphism.
    """
    X, Y, M = psi.domain, psi.codomain, psi.matrix
    if X.vertices != Y.vertices:
        raise CorrespondenceError("domain and codomain have different vertex sets")
    char = build_graph(X, tol_rank, tol_val)
    scale = max(X.gram_scale(), Y.gram_scale())
    f_edges, f_vectors, edge_map = [], [], {}
    for u, v in _block_keys(X):
        onset = [M @ b for b in char.basis.blocks[u, v]]
        P = Y.compression(u, v)
        if onset:
            imgs = np.stack(onset, axis=1)
            err = max(max_abs(P @ imgs - imgs),
                      max_abs(imgs.conj().T @ Y.G(v) @ imgs - np.eye(len(onset)))) / scale
            if err > 10 * tol_val:
                raise OrthonormalityError(
                    f"images of block ({u}, {v}) are not orthonormal in the target block (residual {err:.3e})")
        try:
            full = orthonormal_extension(onset, list(P.T), Y.G(v), tol_rank)
        except OrthonormalityError as exc:
            raise OrthonormalityError(f"cannot extend block ({u}, {v}): {exc}") from exc
        for k, vec in enumerate(full):
            f_edges.append(Edge(auto_edge_id(u, v, k), u, v))
            f_vectors.append(vec)
        for k in range(len(onset)):
            edge_map[auto_edge_id(u, v, k)] = auto_edge_id(u, v, k)
    if len(f_edges) != Y.dim:
        raise DecompositionError(f"extended bases hold {len(f_edges)} vectors but target dim is {Y.dim}")
    F = DirectedGraph(Y.vertices, tuple(f_edges))
    try:
        UF = invert(np.stack(f_vectors, axis=1), tol_val)
    except SingularMatrixError as exc:
        raise DecompositionError(f"extended basis is not invertible: {exc}") from exc
    phi = GraphMorphism(char.graph, F, edge_map)
    upsilon_F = CorrespondenceMorphism(Y, graph_correspondence(F), UF)
    return EssentialFullnessSquare(psi, char.graph, F, phi, char.witness, upsilon_F, gamma_on_morphism(phi))


def canonical_graph(X: Correspondence, tol: float = TOL_VAL) -> DirectedGraph:
    """Recover ``E`` from a presentation that is literally ``Gamma(E)``.

    Needs generator tags (used as edge ids) and 0/1 diagonal action
    matrices.

    Raises
    ------
    CorrespondenceError
        If ``X`` is not a canonical graph correspondence.
    """
    if X.generators is None:
        raise CorrespondenceError("presentation has no generator tags; not a canonical graph correspondence")
    edges = []
    for j, tag in enumerate(X.generators):
        ranges = [u for i, u in enumerate(X.vertices) if abs(X.left_action[i][j, j] - 1) <= tol]
        sources = [v for i, v in enumerate(X.vertices) if abs(X.right_action[i][j, j] - 1) <= tol]
        if len(ranges) != 1 or len(sources) != 1:
            raise CorrespondenceError(f"generator {tag!r} does not sit in a single block")
        edges.append(Edge(tag, ranges[0], sources[0]))
    E = DirectedGraph(X.vertices, tuple(edges))
    if not correspondences_equal(X, graph_correspondence(E), tol):
        raise CorrespondenceError("presentation is not the canonical graph correspondence of its tags")
    return E


def gamma_image_preimage(psi: CorrespondenceMorphism, tol: float = TOL_VAL) -> GraphMorphism | None:
    """The ``phi`` with ``Gamma(phi) = psi``, or ``None`` if ``psi`` is not in the image.

    Every column must be a standard basis vector to within ``tol``; a
    unimodular phase other than 1 disqualifies it.
    """
    E = canonical_graph(psi.domain, tol)
    F = canonical_graph(psi.codomain, tol)
    M = psi.matrix
    edge_map = {}
    for j, e in enumerate(E.edge_ids):
        col = M[:, j]
        near_one = np.abs(col - 1) <= tol
        near_zero = np.abs(col) <= tol
        if not np.all(near_one | near_zero) or near_one.sum() != 1:
            return None
        edge_map[e] = F.edge_ids[int(np.argmax(near_one))]
    phi = GraphMorphism(E, F, edge_map)
    return phi if validate_graph_morphism(phi).accepted else None


def check_reflects_isomorphism(phi: GraphMorphism, tol: float = TOL_VAL) -> ReflectionReport:
    """Compare invertibility of ``Gamma(phi)`` with bijectivity of ``phi``."""
    M = gamma_on_morphism(phi).matrix
    invertible = False
    if M.shape[0] == M.shape[1]:
        try:
            invert(M, tol)
            invertible = True
        except SingularMatrixError:
            pass
    return ReflectionReport(invertible, is_vertex_fixing_isomorphism(phi))


def is_isomorphism(psi: CorrespondenceMorphism, tol: float = TOL_VAL) -> bool:
    """Valid morphism with an invertible matrix."""
    if not validate_correspondence_morphism(psi, tol).accepted:
        return False
    M = psi.matrix
    if M.shape[0] != M.shape[1]:
        return False
    try:
        invert(M, tol)
    except SingularMatrixError:
        return False
    return True

