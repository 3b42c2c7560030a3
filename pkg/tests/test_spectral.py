import itertools

import networkx as nx
import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import EXAMPLE10_LAPLACIAN
from ildcc.errors import DisconnectedGraphError, DomainError, NumericError
from ildcc.spectral import (
    NetworkGraph,
    Spectrum,
    average_distance,
    dump_matrix,
    eigenvalues,
    fiedler_value,
    jacobi_eigenvalues,
    laplacian,
    link_probability,
    wiener_paths,
    wiener_spectral,
)
from oracles import random_tree_edges

# smallest nonzero root of the 10-node example characteristic polynomial (sympy, 20 digits)
EXAMPLE10_LAMBDA2 = 0.17643628918201697909
# all-pairs BFS on the 10-node example (networkx.wiener_index)
EXAMPLE10_WIENER_PATHS = 123


def path(n):
    return NetworkGraph(n, [(i, i + 1) for i in range(n - 1)])


def complete(n):
    return NetworkGraph(n, itertools.combinations(range(n), 2))


def test_example10_laplacian_exact(example10_graph):
    np.testing.assert_array_equal(laplacian(example10_graph), EXAMPLE10_LAPLACIAN)
    assert len(example10_graph.edges) == 12


def test_laplacian_trivial_cases():
    np.testing.assert_array_equal(laplacian(NetworkGraph(4)), np.zeros((4, 4)))
    np.testing.assert_array_equal(laplacian(complete(3)), [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]])


def test_graph_rejects_bad_edges():
    with pytest.raises(DomainError):
        NetworkGraph(3, [(1, 1)])
    with pytest.raises(DomainError):
        NetworkGraph(3, [(0, 3)])
    assert len(NetworkGraph(3, [(0, 1), (1, 0)]).edges) == 1


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_example10_fiedler(example10_graph, method):
    spec = eigenvalues(EXAMPLE10_LAPLACIAN, method=method)
    assert spec.fiedler == pytest.approx(0.1764, abs=5e-4)
    assert spec.fiedler == pytest.approx(EXAMPLE10_LAMBDA2, abs=1e-10)
    assert fiedler_value(example10_graph, method=method) == pytest.approx(EXAMPLE10_LAMBDA2, abs=1e-10)


@pytest.mark.parametrize("method", ["lapack", "jacobi"])
def test_eigenvalues_trivial(method):
    np.testing.assert_allclose(eigenvalues(np.zeros((5, 5)), method=method).eigenvalues, 0.0, atol=1e-14)
    vals = eigenvalues(laplacian(complete(6)), method=method).eigenvalues
    np.testing.assert_allclose(vals, [0, 6, 6, 6, 6, 6], atol=1e-10)


def test_eigenvalues_errors():
    with pytest.raises(DomainError):
        eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        eigenvalues(np.ones((2, 3)))
    with pytest.raises(NumericError):
        jacobi_eigenvalues(EXAMPLE10_LAPLACIAN, max_sweeps=1)


def test_jacobi_agrees_with_lapack():
    rng = np.random.default_rng(3)
    for n in (2, 5, 17, 30):
        m = rng.normal(size=(n, n))
        m = m + m.T
        np.testing.assert_allclose(jacobi_eigenvalues(m), np.linalg.eigvalsh(m), atol=1e-9)


def test_fiedler_examples():
    assert fiedler_value(NetworkGraph(4, [(0, 1), (2, 3)])) == 0.0
    # P3: characteristic polynomial l (l - 1) (l - 3)
    lam = sp.symbols("l")
    roots = sorted(sp.solve(sp.Matrix(laplacian(path(3))).charpoly(lam).as_expr(), lam))
    assert roots == [0, 1, 3]
    assert fiedler_value(path(3)) == pytest.approx(float(roots[1]), abs=1e-12)
    with pytest.raises(DomainError):
        fiedler_value(NetworkGraph(1))


@pytest.mark.parametrize(
    "vals, n, expected",
    [
        ([0, 1, 3], 3, 4.0),  # P3, equal to its BFS Wiener index
        ([0, 1, 1, 4], 4, 9.0),  # star K1,3
        ([0, 3, 3], 3, 2.0),  # K3: spectral form differs from BFS (3) off trees
    ],
)
def test_wiener_spectral_examples(vals, n, expected):
    assert wiener_spectral(Spectrum(np.array(vals, float)), n) == pytest.approx(expected)


def test_wiener_spectral_disconnected():
    with pytest.raises(DisconnectedGraphError):
        wiener_spectral(Spectrum(np.array([0.0, 0.0, 2.0])), 3)


def test_wiener_paths_examples(example10_graph):
    assert wiener_paths(NetworkGraph(2, [(0, 1)])) == 1
    assert wiener_paths(path(3)) == 4
    assert wiener_paths(complete(3)) == 3
    assert wiener_paths(example10_graph) == EXAMPLE10_WIENER_PATHS
    with pytest.raises(DisconnectedGraphError):
        wiener_paths(NetworkGraph(3, [(0, 1)]))


def test_average_distance():
    m = average_distance(4.0, 3, 0.0)
    assert m.mu == pytest.approx(4 / 3)
    assert m.mu_w == m.mu
    assert average_distance(4.0, 3, 0.1).mu_w == pytest.approx(4 / 3 + 0.1)
    assert average_distance(1.0, 2).mu == 1.0
    with pytest.raises(DomainError):
        average_distance(1.0, 1)
    with pytest.raises(DomainError):
        average_distance(1.0, 2, -0.1)


def test_link_probability():
    assert link_probability(0.0, 4.8, 0.3, 0.7) == pytest.approx(0.7)
    assert link_probability(0.0, 4.8, 0.3, 2.0) == 1.0
    assert link_probability(55.0, 4.8, 0.0, 0.8) == pytest.approx(0.8)
    ds = np.linspace(0, 3, 200)
    ps = [link_probability(d, 2.0, 0.5, 1.0) for d in ds]
    assert all(a >= b for a, b in zip(ps, ps[1:]))


def test_dump_matrix(tmp_path):
    path_ = tmp_path / "L.txt"
    dump_matrix(EXAMPLE10_LAPLACIAN, path_)
    np.testing.assert_array_equal(np.loadtxt(path_, dtype=int), EXAMPLE10_LAPLACIAN)


def random_graph(rng, n, p):
    return NetworkGraph(n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p])


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 25), p=st.floats(0, 1))
def test_laplacian_identities(seed, n, p):
    g = random_graph(np.random.default_rng(seed), n, p)
    lap = laplacian(g)
    assert (lap == lap.T).all()
    assert (lap.sum(axis=1) == 0).all()
    vals = eigenvalues(lap).eigenvalues
    assert vals.min() > -1e-9
    assert abs(vals.sum() - 2 * len(g.edges)) <= 1e-6 * max(1, 2 * len(g.edges))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n1=st.integers(1, 12), n2=st.integers(1, 12))
def test_fiedler_zero_for_two_components(seed, n1, n2):
    rng = np.random.default_rng(seed)
    a = random_tree_edges(n1, rng)
    b = [(u + n1, v + n1) for u, v in random_tree_edges(n2, rng)]
    extra = [e for e in itertools.combinations(range(n1), 2) if rng.random() < 0.3]
    g = NetworkGraph(n1 + n2, a + b + extra)
    assert fiedler_value(g) == 0.0


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 50))
def test_fiedler_positive_on_trees(seed, n):
    g = NetworkGraph(n, random_tree_edges(n, np.random.default_rng(seed)))
    assert fiedler_value(g) > 0


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 30))
def test_spectral_wiener_exact_on_trees(seed, n):
    g = NetworkGraph(n, random_tree_edges(n, np.random.default_rng(seed)))
    ws = wiener_spectral(eigenvalues(laplacian(g)), n)
    wp = wiener_paths(g)
    assert ws == pytest.approx(wp, rel=1e-6)
    assert wp == nx.wiener_index(nx.Graph(list(g.edges)))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 20), p=st.floats(0, 0.6))
def test_edge_addition_monotone(seed, n, p):
    rng = np.random.default_rng(seed)
    g = NetworkGraph(n, random_tree_edges(n, rng) + list(random_graph(rng, n, p).edges))
    missing = [e for e in itertools.combinations(range(n), 2) if e not in g.edges]
    if not missing:
        return
    h = g.with_edge(*missing[rng.integers(len(missing))])
    lg, lh = eigenvalues(laplacian(g)), eigenvalues(laplacian(h))
    assert lh.fiedler >= lg.fiedler - 1e-9
    assert wiener_spectral(lh, n) <= wiener_spectral(lg, n) * (1 + 1e-9)
