import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphcorr import catalog
from graphcorr import random_models as rm
from graphcorr.correspondence import (
    CLAUSES,
    Correspondence,
    CorrespondenceMorphism,
    change_of_generators,
    compose_morphisms,
    correspondences_equal,
    dimension_matrix,
    generator_change_morphism,
    graph_correspondence,
    inner_product,
    inner_product_values,
    is_full,
    is_left_faithful,
    module_action,
    sigma_correspondence,
    validate_correspondence,
    validate_correspondence_morphism,
)
from graphcorr.errors import CorrespondenceError, DimensionError, SingularMatrixError
from graphcorr.functor import gamma_on_morphism
from graphcorr.graph import DirectedGraph, Edge, adjacency_matrix, sinks_and_sources

TOL_VAL = 1e-9


def two_cycle():
    return graph_correspondence(catalog.two_cycle_graph())


def loop():
    return graph_correspondence(catalog.loop_graph())


def single_edge():
    return graph_correspondence(DirectedGraph(("u", "v"), (Edge("e", "u", "v"),)))


def with_matrices(X, **kw):
    return Correspondence(X.vertices, kw.get("gram", X.gram), kw.get("right", X.right_action),
                          kw.get("left", X.left_action), X.generators)


class TestValidate:
    def test_two_cycle_accepted_exactly(self):
        rep = validate_correspondence(two_cycle())
        assert rep.accepted
        assert rep.max_residual == 0.0

    def test_degenerate_left_action(self):
        X = two_cycle()
        L = X.left_action.copy()
        L[X.index("u")] = 0
        rep = validate_correspondence(with_matrices(X, left=L))
        assert "left_projections" in rep.failed_clauses
        v = next(v for v in rep.violations if v.clause == "left_projections")
        assert v.residual >= 1 - 1e-12

    def test_off_hermitian_gram(self):
        X = two_cycle()
        G = X.gram.copy()
        G[0, 0, 1] += 1e-3
        rep = validate_correspondence(with_matrices(X, gram=G))
        assert rep.failed_clauses[0] == "gram_hermitian_psd"
        assert rep.violations[0].indices == ("u",)
        assert rep.violations[0].residual == pytest.approx(1e-3)

    def test_indefinite_sum(self):
        X = two_cycle()
        G = X.gram.copy()
        G[1] = 0
        rep = validate_correspondence(with_matrices(X, gram=G))
        assert "gram_hermitian_psd" in rep.failed_clauses

    @pytest.mark.parametrize("clause", CLAUSES)
    def test_each_clause_is_detected(self, clause):
        broken = catalog.clause_perturbations()[clause]
        assert clause in validate_correspondence(broken).failed_clauses

    def test_zero_dim_rejected(self):
        with pytest.raises(CorrespondenceError):
            Correspondence(("u",), np.zeros((1, 0, 0)), np.zeros((1, 0, 0)), np.zeros((1, 0, 0)))

    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            Correspondence(("u",), [np.eye(2)], [np.eye(3)], [np.eye(2)])
        with pytest.raises(DimensionError):
            Correspondence(("u", "v"), [np.eye(2)], [np.eye(2)], [np.eye(2)])


class TestConstructions:
    def test_loop(self):
        X = loop()
        assert X.dim == 1
        for m in (X.G("w"), X.R("w"), X.L("w")):
            assert np.array_equal(m, [[1]])

    def test_two_cycle_grams(self):
        X = two_cycle()
        assert np.array_equal(X.G("u"), np.diag([1, 0]))
        assert np.array_equal(X.G("v"), np.diag([0, 1]))

    def test_parallel_edges(self):
        X = graph_correspondence(catalog.parallel_inclusion().codomain)
        assert np.array_equal(X.G("v"), np.eye(2))
        assert np.array_equal(X.L("u"), np.eye(2))
        assert dimension_matrix(X)["u", "v"] == 2

    def test_edgeless_rejected(self):
        with pytest.raises(CorrespondenceError):
            graph_correspondence(DirectedGraph(("u",)))

    def test_sigma_swap(self):
        X = sigma_correspondence(catalog.swap_sigma())
        assert np.array_equal(X.L("u"), np.diag([0, 1]))
        assert np.array_equal(X.L("v"), np.diag([1, 0]))
        assert validate_correspondence(X).max_residual == 0.0

    def test_sigma_identity_matches_loop(self):
        X = sigma_correspondence({"w": "w"})
        assert correspondences_equal(X, loop()) is False  # tags differ: chi_w vs e
        Y = Correspondence(X.vertices, X.gram, X.right_action, X.left_action)
        assert correspondences_equal(Y, loop())

    def test_sigma_constant(self):
        X = sigma_correspondence({"u": "u", "v": "u"})
        assert np.array_equal(X.L("u"), np.eye(2))
        assert np.array_equal(X.L("v"), np.zeros((2, 2)))
        assert validate_correspondence(X).accepted
        D = dimension_matrix(X)
        assert D["u", "u"] == 1 and D["u", "v"] == 1 and D.total() == 2

    def test_sigma_not_total(self):
        with pytest.raises(CorrespondenceError):
            sigma_correspondence({"u": "x"})


class TestModuleOps:
    def test_inner_product_of_generators(self):
        X = two_cycle()
        e = np.array([1, 0])  # chi_u, source u
        f = np.array([0, 1])
        assert inner_product(X, e, e) == {"u": 1, "v": 0}
        assert inner_product(X, e, f) == {"u": 0, "v": 0}

    def test_inner_product_sum_same_source(self):
        X = graph_correspondence(catalog.parallel_inclusion().codomain)
        assert inner_product(X, [1, 1], [1, 1]) == {"u": 0, "v": 2}

    def test_conjugate_linear_first_slot(self):
        X = loop()
        assert inner_product(X, [1j], [1])["w"] == -1j

    def test_module_action_examples(self):
        X = two_cycle()
        xi = np.array([2 - 1j, 3j])
        assert np.array_equal(module_action(X, 1, xi, 1), xi)
        chi_v = np.array([0, 1])  # range u, source v
        assert np.array_equal(module_action(X, {"u": 1}, chi_v, {"v": 1}), chi_v)
        assert np.array_equal(module_action(X, {"v": 1}, chi_v, {"v": 1}), [0, 0])

    def test_dimension_errors(self):
        with pytest.raises(DimensionError):
            inner_product(loop(), [1, 0], [1])
        with pytest.raises(DimensionError):
            module_action(loop(), [1, 2], [1], 1)

    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_inner_product_right_linear(self, seed):
        gen = rm.rng(seed)
        E = rm.random_graph(gen, max_edges=10)
        X = change_of_generators(graph_correspondence(E), rm.block_compatible_transform(gen, E))
        n, k = X.dim, len(X.vertices)
        xi, eta = (gen.standard_normal(n) + 1j * gen.standard_normal(n) for _ in range(2))
        b = gen.standard_normal(k) + 1j * gen.standard_normal(k)
        lhs = inner_product_values(X, xi, module_action(X, 1, eta, b))
        rhs = inner_product_values(X, xi, eta) * b
        assert np.max(np.abs(lhs - rhs)) <= TOL_VAL * X.gram_scale() * max(1, np.max(np.abs(rhs)))


class TestMorphisms:
    def test_identity_accepted(self):
        for X in (two_cycle(), loop(), sigma_correspondence(catalog.swap_sigma())):
            assert validate_correspondence_morphism(CorrespondenceMorphism.identity(X)).accepted

    def test_phase_accepted(self):
        rep = validate_correspondence_morphism(catalog.loop_phase_morphism())
        assert rep.accepted and rep.max_residual <= 1e-12

    def test_scalar_two_rejected(self):
        rep = validate_correspondence_morphism(CorrespondenceMorphism(loop(), loop(), 2 * np.eye(1)))
        assert rep.failed_clauses == ["inner_product"]
        assert rep.violations[0].residual == pytest.approx(3.0)

    def test_compose(self):
        X = loop()
        psi = catalog.phase_morphism(X, 0.3)
        ident = CorrespondenceMorphism.identity(X)
        assert np.array_equal(compose_morphisms(psi, ident).matrix, psi.matrix)
        assert np.array_equal(compose_morphisms(ident, psi).matrix, psi.matrix)
        both = compose_morphisms(catalog.phase_morphism(X, 0.5), psi)
        assert both.matrix[0, 0] == pytest.approx(np.exp(0.8j))
        with pytest.raises(CorrespondenceError):
            compose_morphisms(psi, CorrespondenceMorphism.identity(two_cycle()))

    def test_shape_mismatch(self):
        with pytest.raises(DimensionError):
            CorrespondenceMorphism(loop(), two_cycle(), np.eye(2))

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_accepted_morphisms_are_isometric(self, seed):
        gen = rm.rng(seed)
        phi = rm.random_injective_morphism(gen, max_edges=10)
        psi = rm.phase_twist(gen, gamma_on_morphism(phi))
        assert validate_correspondence_morphism(psi).accepted
        X = psi.domain
        for _ in range(20):
            xi = gen.standard_normal(X.dim) + 1j * gen.standard_normal(X.dim)
            diff = inner_product_values(psi.codomain, psi(xi), psi(xi)) - inner_product_values(X, xi, xi)
            scale = max(1.0, float(np.real(xi.conj() @ xi)))
            assert np.max(np.abs(diff)) <= 10 * TOL_VAL * scale


class TestDimensionAndPredicates:
    def test_sigma_swap_dims(self):
        D = dimension_matrix(sigma_correspondence(catalog.swap_sigma()))
        assert D.counts.tolist() == [[0, 1], [1, 0]]

    def test_full_and_faithful_examples(self):
        assert is_full(two_cycle()) and is_left_faithful(two_cycle())
        assert not is_full(single_edge())
        assert not is_left_faithful(single_edge())
        assert is_left_faithful(loop())
        assert is_full(sigma_correspondence({"u": "u", "v": "u"}))

    def test_invalid_sum_raises(self):
        X = two_cycle()
        bad = with_matrices(X, right=np.zeros_like(X.right_action))
        with pytest.raises(CorrespondenceError):
            dimension_matrix(bad)

    @settings(max_examples=100, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_dimension_matrix_equals_adjacency(self, seed):
        E = rm.random_graph(rm.rng(seed))
        X = graph_correspondence(E)
        assert validate_correspondence(X).max_residual == 0.0
        assert dimension_matrix(X) == adjacency_matrix(E)

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_predicates_match_graph(self, seed):
        E = rm.random_graph(rm.rng(seed), max_edges=6)
        sinks, sources = sinks_and_sources(E)
        X = graph_correspondence(E)
        assert is_full(X) == (not sinks)
        assert is_left_faithful(X) == (not sources)


class TestChangeOfGenerators:
    def test_identity_transform(self):
        X = two_cycle()
        Y = change_of_generators(X, np.eye(2))
        assert correspondences_equal(X, Y)

    def test_phase_transform(self):
        X = graph_correspondence(catalog.balanced_graph())
        T = np.diag(np.exp(1j * np.arange(5)))
        Y = change_of_generators(X, T)
        for v in X.vertices:
            assert np.allclose(Y.G(v), T.conj().T @ X.G(v) @ T)
        assert dimension_matrix(Y) == dimension_matrix(X)

    def test_ill_conditioned(self):
        with pytest.raises(SingularMatrixError):
            change_of_generators(two_cycle(), np.diag([1, 1e-12]))

    def test_witness_direction(self):
        gen = rm.rng(0)
        E = catalog.balanced_graph()
        X = graph_correspondence(E)
        T = rm.block_compatible_transform(gen, E)
        fwd = generator_change_morphism(X, T)
        assert validate_correspondence_morphism(fwd).accepted
        back = CorrespondenceMorphism(fwd.codomain, X, T)
        assert validate_correspondence_morphism(back).accepted

    @settings(max_examples=50, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_scrambling_preserves_validity_and_dims(self, seed):
        gen = rm.rng(seed)
        E = rm.random_graph(gen)
        T = rm.block_compatible_transform(gen, E)
        assert np.linalg.cond(T) <= 1e3 * (1 + 1e-9)
        Y = change_of_generators(graph_correspondence(E), T)
        assert validate_correspondence(Y).accepted
        assert dimension_matrix(Y) == adjacency_matrix(E)


class TestEquality:
    def test_reflexive(self):
        assert correspondences_equal(two_cycle(), two_cycle())

    def test_edge_id_matters(self):
        assert not correspondences_equal(loop(), graph_correspondence(catalog.loop_graph(edge_id="f")))

    def test_direction_matters(self):
        a = graph_correspondence(DirectedGraph(("u", "v"), (Edge("e", "u", "v"),)))
        b = graph_correspondence(DirectedGraph(("u", "v"), (Edge("e", "v", "u"),)))
        assert not correspondences_equal(a, b)

    def test_generator_order_irrelevant_with_tags(self):
        C = catalog.two_cycle_graph()
        flipped = DirectedGraph(C.vertices, C.edges[::-1])
        assert correspondences_equal(graph_correspondence(C), graph_correspondence(flipped))
