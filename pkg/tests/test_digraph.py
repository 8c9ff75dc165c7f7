import numpy as np
import pytest

from passinet import digraph as dg
from passinet.errors import DomainError, InvalidInputError, MultiplicityError, TopologyError

from _corpus import corpus, random_digraph, tree_corpus


def roots_by_reachability(g):
    """Vertices reachable from every vertex along arcs (brute-force closure)."""
    reach = (g.adjacency() > 0) | np.eye(g.n, dtype=bool)
    for _ in range(g.n):
        reach = reach | ((reach.astype(int) @ reach.astype(int)) > 0)
    return tuple(int(j) + 1 for j in range(g.n) if reach[:, j].all())


def test_laplace_three_node():
    L = dg.laplace_matrix(dg.make_three_node_example())
    np.testing.assert_array_equal(L, [[0, 0, 0], [-1, 1, 0], [-1, -1, 2]])


def test_laplace_weighted_entries():
    g = dg.WeightedDigraph(3, ((1, 2, 0.5), (1, 3, 2.0), (3, 1, 1.5)))
    np.testing.assert_array_equal(dg.laplace_matrix(g), [[2.5, -0.5, -2.0], [0, 0, 0], [-1.5, 0, 1.5]])


def test_laplace_rows_sum_to_zero():
    for g in corpus(1, 200):
        L = dg.laplace_matrix(g)
        np.testing.assert_allclose(L.sum(axis=1), 0, atol=1e-12)
        off = L[~np.eye(g.n, dtype=bool)]
        assert np.all(off <= 0)


def test_digraph_validation():
    with pytest.raises(InvalidInputError):
        dg.WeightedDigraph(0)
    with pytest.raises(InvalidInputError):
        dg.WeightedDigraph(2, ((1, 1, 1.0),))
    with pytest.raises(InvalidInputError):
        dg.WeightedDigraph(2, ((1, 3, 1.0),))
    with pytest.raises(InvalidInputError):
        dg.WeightedDigraph(2, ((1, 2, -1.0),))
    with pytest.raises(InvalidInputError):
        dg.WeightedDigraph(2, ((1, 2), (1, 2, 2.0)))


def test_digraph_dict_round_trip():
    g = dg.make_dodeca_example()
    assert dg.WeightedDigraph.from_dict(g.to_dict()) == g


def test_spanning_tree_matches_reachability_and_zero_multiplicity():
    trees = 0
    for g in corpus(2, 500):
        expected = len(roots_by_reachability(g)) > 0
        assert dg.has_directed_spanning_tree(g) is expected
        rep = dg.spectrum_report(g)
        assert (rep.zero_multiplicity == 1) is expected
        trees += expected
    # the corpus must exercise both outcomes
    assert 50 < trees < 450


def test_leading_set_matches_reachability_and_v_support():
    for g in tree_corpus(3, 200):
        lead = dg.leading_set(g)
        assert lead == roots_by_reachability(g)
        v = dg.left_zero_eigenvector(dg.laplace_matrix(g))
        assert tuple(int(i) + 1 for i in np.flatnonzero(v > 1e-10)) == lead
        assert np.all(v >= 0)
        assert v.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(v @ dg.laplace_matrix(g), 0, atol=1e-10)


def test_leading_set_raises_without_tree():
    g = dg.WeightedDigraph(3, ((2, 1, 1.0),))
    with pytest.raises(TopologyError):
        dg.leading_set(g)
    with pytest.raises(MultiplicityError):
        dg.left_zero_eigenvector(dg.laplace_matrix(g))


def test_left_eigenvector_with_gains_corpus():
    rng = np.random.default_rng(4)
    for g in tree_corpus(4, 100):
        k = rng.uniform(0.2, 3.0, g.n)
        KL = np.diag(k) @ dg.laplace_matrix(g)
        v = dg.left_zero_eigenvector(KL)
        np.testing.assert_allclose(v @ KL, 0, atol=1e-10)
        # oracle: null space from SVD
        _, _, vh = np.linalg.svd(KL.T)
        w = np.abs(vh[-1])
        np.testing.assert_allclose(v, w / w.sum(), atol=1e-8)


def test_cycle_hyperbola_from_left_vector():
    rng = np.random.default_rng(5)
    for n in range(2, 12):
        g = dg.make_cycle(n)
        k = rng.uniform(0.1, 5.0, n)
        v = dg.spectrum_report(g, k).v_left
        prod = k * v
        assert np.ptp(prod) <= 1e-9 * prod.max()


def test_cycle_gains_one_two_four():
    v = dg.spectrum_report(dg.make_cycle(3), [1.0, 2.0, 4.0]).v_left
    np.testing.assert_allclose(v, [4 / 7, 2 / 7, 1 / 7], atol=1e-12)


def test_uniform_cycle_left_vector():
    v = dg.spectrum_report(dg.make_cycle(7)).v_left
    np.testing.assert_allclose(v, np.full(7, 1 / 7), atol=1e-12)


def test_dodeca_structure():
    g = dg.make_dodeca_example()
    assert g.n == 20 and len(g.arcs) == 30
    assert dg.leading_set(g) == tuple(range(1, 11))
    rep = dg.spectrum_report(g)
    assert rep.zero_multiplicity == 1
    assert np.all(rep.v_left[10:] == 0)
    np.testing.assert_allclose(rep.v_left[:10], 0.1, atol=1e-12)


def test_cycle_r():
    rep = dg.spectrum_report(dg.make_cycle(10))
    assert rep.r == pytest.approx(1 - np.cos(2 * np.pi / 10), abs=1e-12)
    expected = np.sort_complex(np.array([1 - np.exp(2j * np.pi * j / 10) for j in range(1, 10)]))
    got = np.sort_complex(rep.nonzero_eigenvalues)
    np.testing.assert_allclose(got, expected, atol=1e-10)


def test_three_node_spectrum_with_leader_gain_zero():
    g = dg.make_three_node_example()
    for delta in (0.1, 0.3, 2 / 3, 0.9):
        rep = dg.spectrum_report(g, [0.0, delta, 1 - delta])
        assert rep.zero_multiplicity == 1
        got = np.sort(rep.nonzero_eigenvalues.real)
        np.testing.assert_allclose(got, np.sort([delta, 2 - 2 * delta]), atol=1e-12)
        np.testing.assert_allclose(rep.nonzero_eigenvalues.imag, 0, atol=1e-12)
        np.testing.assert_allclose(rep.v_left, [1, 0, 0], atol=1e-12)


def test_gain_matrix_rules():
    g = dg.make_three_node_example()
    np.testing.assert_array_equal(dg.gain_matrix(g, [0.0, 1.0, 2.0]), np.diag([0, 1, 2]))
    with pytest.raises(DomainError):
        dg.gain_matrix(g, [1.0, 0.0, 1.0])
    with pytest.raises(DomainError):
        dg.gain_matrix(g, [1.0, -1.0, 1.0])
    with pytest.raises(DomainError):
        dg.gain_matrix(g, [1.0, 1.0])


def test_spectrum_scales_with_weights():
    rng = np.random.default_rng(6)
    for _ in range(30):
        g = random_digraph(rng)
        a = np.sort_complex(dg.spectrum_report(g).eigenvalues)
        b = np.sort_complex(dg.spectrum_report(g.scaled(2.5)).eigenvalues)
        np.testing.assert_allclose(b, 2.5 * a, atol=1e-9)


def test_single_vertex():
    g = dg.WeightedDigraph(1)
    rep = dg.spectrum_report(g)
    assert rep.has_spanning_tree and rep.leading_set == (1,)
    np.testing.assert_array_equal(rep.v_left, [1.0])
