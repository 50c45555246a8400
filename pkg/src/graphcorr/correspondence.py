"""Finite-dimensional presentations of C*-correspondences over c0(V).

A presentation fixes a linear basis ``xi_1..xi_n`` of the module ``X`` and
records, for every vertex, three ``n x n`` matrices in those coordinates:

* ``gram[v]``: ``(G_v)_ij = <xi_i, xi_j>(v)``, the c0(V)-valued inner
  product evaluated at ``v`` (conjugate-linear in the first slot);
* ``right_action[v]``: ``R_v``, the matrix of ``xi -> xi . p_v``;
* ``left_action[u]``: ``L_u``, the matrix of ``xi -> p_u . xi``.

Here ``p_v`` is the indicator of ``{v}``, a minimal projection of c0(V).
Block subspaces ``X_uv = p_u . X . p_v`` are the ranges of ``L_u R_v``.

Generators may carry text tags (graph correspondences tag them with edge
ids). Tags take part in equality, see :func:`correspondences_equal`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .complexla import TOL_RANK, TOL_VAL, as_matrix, hermitian_rank, invert, max_abs
from .errors import CorrespondenceError, DimensionError, NonFiniteError
from .graph import DimensionMatrix, DirectedGraph
from .reports import Report, Violation

CLAUSES = (
    "gram_hermitian_psd",
    "right_projections",
    "left_projections",
    "bimodule_commutation",
    "inner_product_right_linear",
    "inner_product_right_adjoint",
    "left_action_adjointable",
)

MORPHISM_CLAUSES = ("shape", "right_equivariant", "left_equivariant", "inner_product")


def _stack(per_vertex, vertices, n, name) -> np.ndarray:
    if isinstance(per_vertex, Mapping):
        missing = [v for v in vertices if v not in per_vertex]
        if missing:
            raise DimensionError(f"{name} is missing vertices {missing}")
        mats = [per_vertex[v] for v in vertices]
    else:
        mats = list(per_vertex)
    if len(mats) != len(vertices):
        raise DimensionError(f"{name} has {len(mats)} matrices for {len(vertices)} vertices")
    out = np.empty((len(vertices), n, n), dtype=complex)
    for i, m in enumerate(mats):
        m = as_matrix(m, f"{name}[{vertices[i]}]")
        if m.shape != (n, n):
            raise DimensionError(f"{name}[{vertices[i]}] has shape {m.shape}, expected ({n}, {n})")
        out[i] = m
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Correspondence:
    """Gram-plus-actions presentation; shapes are checked, axioms are not.

    Use :func:`validate_correspondence` to check the module axioms.
    """

    vertices: tuple[str, ...]
    gram: np.ndarray
    right_action: np.ndarray
    left_action: np.ndarray
    generators: tuple[str, ...] | None = None

    def __post_init__(self):
        vs = tuple(self.vertices)
        if len(set(vs)) != len(vs) or not vs:
            raise CorrespondenceError("vertex labels must be distinct and nonempty")
        probe = self.gram[vs[0]] if isinstance(self.gram, Mapping) else self.gram[0]
        n = np.asarray(probe).shape[0] if np.ndim(probe) == 2 else 0
        if n == 0:
            raise CorrespondenceError("the zero correspondence (dim 0) has no basis presentation")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "gram", _stack(self.gram, vs, n, "gram"))
        object.__setattr__(self, "right_action", _stack(self.right_action, vs, n, "right_action"))
        object.__setattr__(self, "left_action", _stack(self.left_action, vs, n, "left_action"))
        if self.generators is not None:
            tags = tuple(self.generators)
            if len(tags) != n or len(set(tags)) != n:
                raise CorrespondenceError(f"need {n} distinct generator tags, got {list(tags)}")
            object.__setattr__(self, "generators", tags)

    @property
    def dim(self) -> int:
        return self.gram.shape[1]

    def index(self, v: str) -> int:
        return self.vertices.index(v)

    def G(self, v: str) -> np.ndarray:
        return self.gram[self.index(v)]

    def R(self, v: str) -> np.ndarray:
        return self.right_action[self.index(v)]

    def L(self, u: str) -> np.ndarray:
        return self.left_action[self.index(u)]

    def compression(self, u: str, v: str) -> np.ndarray:
        """Matrix of ``xi -> p_u . xi . p_v``, whose range is ``X_uv``."""
        return self.L(u) @ self.R(v)

    def gram_scale(self) -> float:
        return max(1.0, max_abs(self.gram))


@dataclass(frozen=True, eq=False)
class CorrespondenceMorphism:
    """Linear map ``domain -> codomain`` given by a ``codomain.dim x domain.dim`` matrix."""

    domain: Correspondence
    codomain: Correspondence
    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix, "morphism matrix")
        if m.shape != (self.codomain.dim, self.domain.dim):
            raise DimensionError(
                f"morphism matrix has shape {m.shape}, expected {(self.codomain.dim, self.domain.dim)}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __call__(self, xi) -> np.ndarray:
        return self.matrix @ np.asarray(xi, dtype=complex)

    @classmethod
    def identity(cls, X: Correspondence) -> "CorrespondenceMorphism":
        return cls(X, X, np.eye(X.dim, dtype=complex))


class _ClauseLog:
    """Tracks the max residual per clause and the first offending index tuple."""

    def __init__(self, clauses, tol, scale):
        self.tol = tol
        self.scale = scale
        self.residuals = {c: 0.0 for c in clauses}
        self.first: dict[str, Violation] = {}

    def record(self, clause, residual, indices, what):
        r = residual / self.scale
        self.residuals[clause] = max(self.residuals[clause], r)
        if r > self.tol and clause not in self.first:
            self.first[clause] = Violation(clause, f"{what}: residual {r:.3e}", tuple(indices), r)

    def flag(self, clause, message, indices=(), residual=None):
        if clause not in self.first:
            self.first[clause] = Violation(clause, message, tuple(indices), residual)

    def report(self, subject, order):
        return Report(subject, tuple(self.first[c] for c in order if c in self.first), dict(self.residuals))


def validate_correspondence(X: Correspondence, tol: float = TOL_VAL) -> Report:
    """Check every presentation axiom at ``tol`` (scaled max-entry residuals).

    One violation is reported per failing clause, naming the first
    offending vertex indices found.
    """
    vs = X.vertices
    n = X.dim
    eye = np.eye(n)
    log = _ClauseLog(CLAUSES, tol, X.gram_scale())
    G, R, L = X.gram, X.right_action, X.left_action

    for i, v in enumerate(vs):
        g = G[i]
        log.record("gram_hermitian_psd", max_abs(g - g.conj().T), (v,), f"G_{v} is not Hermitian")
        eig = np.linalg.eigvalsh((g + g.conj().T) / 2)
        top = max(1.0, float(np.max(np.abs(eig))))
        log.record("gram_hermitian_psd", max(0.0, -eig[0]) / top * log.scale, (v,),
                   f"G_{v} has a negative eigenvalue {eig[0]:.3e}")
    total = G.sum(axis=0)
    eig = np.linalg.eigvalsh((total + total.conj().T) / 2)
    if eig[0] <= tol * max(1.0, float(eig[-1])):
        log.flag("gram_hermitian_psd", f"sum of Gram blocks is not positive definite (min eigenvalue {eig[0]:.3e})",
                 (), float(eig[0]))

    for clause, A, name in (("right_projections", R, "R"), ("left_projections", L, "L")):
        for i, v in enumerate(vs):
            for j, w in enumerate(vs):
                target = A[i] if i == j else 0
                log.record(clause, max_abs(A[i] @ A[j] - target), (v, w), f"{name}_{v} {name}_{w} != delta {name}_{v}")
        log.record(clause, max_abs(A.sum(axis=0) - eye), (), f"sum of {name}_v is not the identity")

    for i, u in enumerate(vs):
        for j, v in enumerate(vs):
            log.record("bimodule_commutation", max_abs(L[i] @ R[j] - R[j] @ L[i]), (u, v),
                       f"L_{u} and R_{v} do not commute")

    for j, v in enumerate(vs):
        for k, w in enumerate(vs):
            target = G[k] if j == k else 0
            log.record("inner_product_right_linear", max_abs(G[k] @ R[j] - target), (v, w),
                       f"G_{w} R_{v} != delta G_{w}")
            log.record("inner_product_right_adjoint", max_abs(R[j].conj().T @ G[k] - target), (v, w),
                       f"R_{v}^H G_{w} != delta G_{w}")

    for i, u in enumerate(vs):
        for k, w in enumerate(vs):
            log.record("left_action_adjointable", max_abs(L[i].conj().T @ G[k] - G[k] @ L[i]), (u, w),
                       f"L_{u}^H G_{w} != G_{w} L_{u}")

    return log.report("correspondence", CLAUSES)


def _diag_stack(masks) -> np.ndarray:
    return np.array([np.diag(m.astype(complex)) for m in masks])


def graph_correspondence(E: DirectedGraph) -> Correspondence:
    """The graph correspondence of ``E`` with generators ``chi_e`` in edge order.

    ``<chi_e, chi_f> = p_{s(e)}`` if ``e == f`` and 0 otherwise; ``p_u``
    acts on the left at the range and ``p_v`` on the right at the source.
    """
    if not E.edges:
        raise CorrespondenceError("edgeless graph: its correspondence is zero and has no basis presentation")
    src = np.array([e.source for e in E.edges])
    rng = np.array([e.range for e in E.edges])
    right = _diag_stack([src == v for v in E.vertices])
    left = _diag_stack([rng == u for u in E.vertices])
    return Correspondence(E.vertices, right, right, left, generators=E.edge_ids)


def sigma_correspondence(sigma: Mapping[str, str], vertices: Sequence[str] | None = None) -> Correspondence:
    """``X = c0(V)`` with ``a . xi . b = (a o sigma) xi b`` and ``<xi, eta> = conj(xi) eta``.

    Generators are the point masses ``chi_v`` in vertex order.
    """
    vs = tuple(sigma.keys() if vertices is None else vertices)
    bad = [v for v in vs if v not in sigma or sigma[v] not in vs]
    if bad:
        raise CorrespondenceError(f"sigma is not a total self-map of the vertex set at {bad}")
    labels = np.array(vs)
    images = np.array([sigma[v] for v in vs])
    units = _diag_stack([labels == v for v in vs])
    left = _diag_stack([images == u for u in vs])
    return Correspondence(vs, units, units, left, generators=tuple(f"chi_{v}" for v in vs))


def _vertex_function(X: Correspondence, a) -> np.ndarray:
    if isinstance(a, Mapping):
        return np.array([a.get(v, 0) for v in X.vertices], dtype=complex)
    if np.isscalar(a):
        return np.full(len(X.vertices), a, dtype=complex)
    arr = np.asarray(a, dtype=complex)
    if arr.shape != (len(X.vertices),):
        raise DimensionError(f"function on V must have {len(X.vertices)} values, got shape {arr.shape}")
    return arr


def _vector(X: Correspondence, xi) -> np.ndarray:
    arr = np.asarray(xi, dtype=complex)
    if arr.shape != (X.dim,):
        raise DimensionError(f"vector must have length {X.dim}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteError("vector has non-finite entries")
    return arr


def inner_product_values(X: Correspondence, xi, eta) -> np.ndarray:
    """``<xi, eta>`` as an array indexed like ``X.vertices``."""
    xi, eta = _vector(X, xi), _vector(X, eta)
    return np.einsum("i,vij,j->v", xi.conj(), X.gram, eta)


def inner_product(X: Correspondence, xi, eta) -> dict[str, complex]:
    """The c0(V)-valued inner product ``v -> xi^H G_v eta``."""
    return dict(zip(X.vertices, (complex(z) for z in inner_product_values(X, xi, eta))))


def module_action(X: Correspondence, a, xi, b) -> np.ndarray:
    """``a . xi . b`` for functions ``a, b`` on V (mappings, arrays or scalars)."""
    a, b = _vertex_function(X, a), _vertex_function(X, b)
    xi = _vector(X, xi)
    left = np.tensordot(a, X.left_action, axes=1)
    right = np.tensordot(b, X.right_action, axes=1)
    return right @ (left @ xi)


def validate_correspondence_morphism(psi: CorrespondenceMorphism, tol: float = TOL_VAL) -> Report:
    """Check bimodule equivariance and inner-product preservation at ``tol``."""
    X, Y, M = psi.domain, psi.codomain, psi.matrix
    scale = max(X.gram_scale(), Y.gram_scale())
    log = _ClauseLog(MORPHISM_CLAUSES[1:], tol, scale)
    if X.vertices != Y.vertices:
        log.flag("shape", "domain and codomain have different vertex sets")
        return log.report("correspondence_morphism", MORPHISM_CLAUSES)
    for i, v in enumerate(X.vertices):
        log.record("right_equivariant", max_abs(M @ X.right_action[i] - Y.right_action[i] @ M), (v,),
                   f"M R_{v} != R_{v} M")
        log.record("left_equivariant", max_abs(M @ X.left_action[i] - Y.left_action[i] @ M), (v,),
                   f"M L_{v} != L_{v} M")
        log.record("inner_product", max_abs(M.conj().T @ Y.gram[i] @ M - X.gram[i]), (v,),
                   f"M^H G_{v} M != G_{v}")
    return log.report("correspondence_morphism", MORPHISM_CLAUSES)


def compose_morphisms(psi2: CorrespondenceMorphism, psi1: CorrespondenceMorphism) -> CorrespondenceMorphism:
    """``psi2 o psi1``; requires the codomain of ``psi1`` to be the domain of ``psi2``."""
    if psi1.codomain is not psi2.domain and not correspondences_equal(psi1.codomain, psi2.domain):
        raise CorrespondenceError("morphisms are not composable")
    return CorrespondenceMorphism(psi1.domain, psi2.codomain, psi2.matrix @ psi1.matrix)


def dimension_matrix(X: Correspondence, tol: float = TOL_RANK) -> DimensionMatrix:
    """``counts(u, v) = dim X_uv`` measured as a rank of the compressed Gram block.

    Raises
    ------
    CorrespondenceError
        If the block dimensions do not add up to ``X.dim``.
    """
    k = len(X.vertices)
    counts = np.zeros((k, k), dtype=np.int64)
    for i, u in enumerate(X.vertices):
        for j, v in enumerate(X.vertices):
            P = X.left_action[i] @ X.right_action[j]
            counts[i, j] = hermitian_rank(P.conj().T @ X.gram[j] @ P, tol)
    if counts.sum() != X.dim:
        raise CorrespondenceError(
            f"block dimensions sum to {counts.sum()}, not {X.dim}: invalid or numerically marginal presentation")
    return DimensionMatrix(X.vertices, counts)


def is_full(X: Correspondence, tol: float = TOL_VAL) -> bool:
    """True iff every Gram block is nonzero, i.e. the inner products span c0(V)."""
    scale = X.gram_scale()
    return all(max_abs(g) > tol * scale for g in X.gram)


def is_left_faithful(X: Correspondence, tol: float = TOL_VAL) -> bool:
    """True iff no ``p_u`` acts as zero on the left."""
    return all(max_abs(l) > tol for l in X.left_action)


def change_of_generators(X: Correspondence, T, tol: float = TOL_VAL) -> Correspondence:
    """Re-present ``X`` in the basis ``xi'_j = sum_i T_ij xi_i``.

    Old coordinates are ``T`` times new ones, so ``G' = T^H G T`` and
    ``A' = T^-1 A T`` for each action matrix. Generator tags are dropped.
    """
    T = as_matrix(T, "T")
    if T.shape != (X.dim, X.dim):
        raise DimensionError(f"T must be {X.dim}x{X.dim}, got {T.shape}")
    Tinv = invert(T, tol)
    return Correspondence(
        X.vertices,
        T.conj().T @ X.gram @ T,
        Tinv @ X.right_action @ T,
        Tinv @ X.left_action @ T,
    )


def generator_change_morphism(X: Correspondence, T, tol: float = TOL_VAL) -> CorrespondenceMorphism:
    """The identity of the underlying module as an isomorphism ``X -> change_of_generators(X, T)``.

    Its matrix is ``T^-1``; the inverse isomorphism has matrix ``T``.
    """
    Xp = change_of_generators(X, T, tol)
    return CorrespondenceMorphism(X, Xp, invert(as_matrix(T), tol))


def _generator_order(X: Correspondence, Y: Correspondence):
    if X.generators is None or Y.generators is None:
        return np.arange(Y.dim)
    if set(X.generators) != set(Y.generators):
        return None
    pos = {t: i for i, t in enumerate(Y.generators)}
    return np.array([pos[t] for t in X.generators])


def correspondences_equal(X: Correspondence, Y: Correspondence, tol: float = TOL_VAL) -> bool:
    """Structural equality of presentations.

    When both presentations carry generator tags they must carry the same
    tags, and matrices are compared after aligning generators by tag;
    otherwise generators are compared positionally.
    """
    if X.vertices != Y.vertices or X.dim != Y.dim:
        return False
    order = _generator_order(X, Y)
    if order is None:
        return False
    sel = np.ix_(order, order)
    scale = max(X.gram_scale(), Y.gram_scale())
    for a, b in ((X.gram, Y.gram), (X.right_action, Y.right_action), (X.left_action, Y.left_action)):
        if max_abs(a - b[(slice(None),) + sel]) > tol * scale:
            return False
    return True
