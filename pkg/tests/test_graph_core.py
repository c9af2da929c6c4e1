"""Graph substrate: types, generators, validation, edge-list round trips."""

import random

import pytest

from hamlab import (
    Graph,
    GraphFormatError,
    Path,
    clique_plus_isolated,
    complete,
    complete_bipartite,
    cycle_graph,
    generate,
    gnp,
    is_connected,
    load_edge_list,
    neighborhood,
    path_graph,
    petersen,
    random_regular,
    save_edge_list,
    validate_cycle,
    validate_path,
)


def test_graph_rejects_self_loop_and_duplicates():
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 5)])


def test_adjacency_symmetric_and_degree_sum():
    g = gnp(40, 0.2, seed=3)
    for u in range(g.n):
        for v in g.neighbors(u):
            assert u in g.neighbors(v)
    assert sum(g.degree(v) for v in range(g.n)) == 2 * len(g.edges)


def test_neighborhood_examples():
    assert neighborhood(complete(3), {0}) == {1, 2}
    assert neighborhood(path_graph(3), {0, 2}) == {1}
    assert neighborhood(cycle_graph(6), {0, 1}) == {5, 2}


def test_neighborhood_disjoint_and_empty():
    g = gnp(30, 0.15, seed=9)
    rng = random.Random(4)
    for _ in range(50):
        s = set(rng.sample(range(g.n), rng.randint(0, 8)))
        nb = neighborhood(g, s)
        assert nb.isdisjoint(s)
    assert neighborhood(g, set()) == set()


def test_neighborhood_out_of_range():
    with pytest.raises(ValueError):
        neighborhood(complete(3), {7})


def test_is_connected_examples():
    assert is_connected(complete(4))
    assert not is_connected(clique_plus_isolated(5, 1))
    assert is_connected(Graph(1))


def test_generator_shapes():
    assert len(complete(4).edges) == 6
    g = clique_plus_isolated(5, 1)
    assert g.degree(5) == 0 and g.n == 6
    assert len(complete_bipartite(3, 4).edges) == 12
    assert len(cycle_graph(5).edges) == 5
    assert len(path_graph(5).edges) == 4
    p = petersen()
    assert p.n == 10 and all(p.degree(v) == 3 for v in range(10))


def test_generator_errors():
    with pytest.raises(ValueError):
        cycle_graph(2)
    with pytest.raises(ValueError):
        gnp(10, 1.5)
    with pytest.raises(ValueError):
        random_regular(5, 3)  # n*d odd


def test_gnp_determinism():
    a = gnp(100, 0.05, seed=7)
    b = gnp(100, 0.05, seed=7)
    assert a.edges == b.edges
    c = gnp(100, 0.05, seed=8)
    assert a.edges != c.edges


def test_random_regular_degrees():
    for d, n in ((3, 20), (4, 15), (6, 24)):
        g = random_regular(n, d, seed=11)
        assert all(g.degree(v) == d for v in range(n))


def test_generate_dispatch():
    g = generate("gnp", seed=7, n=50, p=0.1)
    assert g.edges == gnp(50, 0.1, seed=7).edges
    with pytest.raises(ValueError):
        generate("mystery")


def test_edge_list_examples():
    g = load_edge_list("3 2\n0 1\n1 2")
    assert g.edges == path_graph(3).edges
    with pytest.raises(GraphFormatError):
        load_edge_list("2 1\n0 0")
    with pytest.raises(GraphFormatError):
        load_edge_list("abc")
    with pytest.raises(GraphFormatError):
        load_edge_list("3 2\n0 1\n0 1")
    with pytest.raises(GraphFormatError):
        load_edge_list("3 1\n0 5")
    with pytest.raises(GraphFormatError):
        load_edge_list("3 2\n0 1")


def test_edge_list_round_trip_corpus():
    # spec invariant: identity on canonical form, 1000 random graphs, n <= 200
    rng = random.Random(12345)
    for i in range(1000):
        n = rng.randint(1, 200)
        p = rng.uniform(0.0, 0.1)
        g = gnp(n, p, seed=f"roundtrip:{i}")
        text = save_edge_list(g)
        again = load_edge_list(text)
        assert again.n == g.n and again.edges == g.edges
        assert save_edge_list(again) == text


def test_path_type():
    p = Path((3, 1, 2))
    assert p.first == 3 and p.last == 2 and len(p) == 3
    assert p.pos[1] == 1
    assert p.reversed().vertices == (2, 1, 3)
    with pytest.raises(ValueError):
        Path((1, 2, 1))


def test_validate_path():
    g = path_graph(4)
    assert validate_path(g, (0, 1, 2, 3))
    assert not validate_path(g, (0, 2))
    assert not validate_path(g, (0, 1, 0))
    assert validate_path(g, (1, 2, 3), endpoints=(3, 1))
    assert not validate_path(g, (1, 2, 3), endpoints=(0, 3))


def test_validate_cycle_examples():
    c5 = cycle_graph(5)
    assert validate_cycle(c5, (0, 1, 2, 3, 4), hamilton=True)
    k4 = complete(4)
    v = validate_cycle(k4, (0, 1, 0, 2))
    assert not v and "repeated" in v.reason
    v = validate_cycle(k4, (0, 1, 2), hamilton=True)
    assert not v and "3" in v.reason
    assert not validate_cycle(cycle_graph(6), (0, 1, 2))  # chord missing
    assert not validate_cycle(c5, (0, 1))
