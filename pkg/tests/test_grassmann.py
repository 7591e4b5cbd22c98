import itertools

import networkx as nx
import pytest

from grassembed.errors import BudgetExceeded, DimensionError, FormatError
from grassembed.gf import field_for_order
from grassembed.grassmann import (CliqueDescriptor, GrassmannGraph, GrassmannMap,
                                  adjacent, automorphism_group_order,
                                  automorphism_group_order_adj, distance, dual_isomorphism,
                                  enumerate_vertices, export_graph, gaussian_binomial,
                                  identity_map, import_edge_list, maximal_cliques_containing)
from grassembed.linalg import Matrix, Subspace, annihilator
from grassembed.oracles import (bfs_distances, gaussian_product, gl_order_formula,
                                maximal_cliques, oracle_graph)
from grassembed.semilinear import gl_elements

F2, F3 = field_for_order(2), field_for_order(3)


def span(*vs, F=F2):
    return Subspace.span(F, len(vs[0]), vs)


e = [tuple(1 if i == j else 0 for j in range(4)) for i in range(4)]


@pytest.mark.parametrize("n,k,q,want", [(4, 2, 2, 35), (4, 4, 2, 1), (5, 1, 3, 121),
                                        (6, 3, 2, 1395), (4, 0, 5, 1), (5, 2, 3, 1210)])
def test_gaussian_binomial(n, k, q, want):
    assert gaussian_binomial(n, k, q) == want == gaussian_product(n, k, q)


def test_rref_brute_force_count_at_2_4_2():
    # every 2x4 matrix over GF(2) in RREF, built by hand
    count = 0
    for rows in itertools.product(itertools.product(range(2), repeat=4), repeat=2):
        M = Matrix(F2, rows)
        R, rank, _ = M.rref()
        if rank == 2 and R.rows == M.rows:
            count += 1
    assert count == 35


def test_enumeration_small():
    V = enumerate_vertices(2, 2, 1)
    assert [X.rows[0] for X in V] == [(0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (3, 4, 2), (2, 5, 3), (4, 3, 1)])
def test_index_is_a_bijection(q, n, k):
    G = GrassmannGraph(q, n, k)
    V = G.vertices
    assert len(set(V)) == G.order
    for i, X in enumerate(V):
        assert G.index(X) == i
        assert G._unrank(i) == X


def test_first_vertex_is_last_coordinates():
    G = GrassmannGraph(2, 5, 2)
    assert G.vertex(0) == Subspace.coordinate(F2, 5, [3, 4])


def test_lazy_vertex_access_on_large_graph():
    G = GrassmannGraph(32, 4, 2)
    assert G.order == 1083425
    X = G.vertex(123456)
    assert G.index(X) == 123456


def test_adjacency_and_distance_examples():
    X12, X13, X34 = span(e[0], e[1]), span(e[0], e[2]), span(e[2], e[3])
    assert adjacent(X12, X13)
    assert not adjacent(X12, X12)
    assert not adjacent(X12, X34)
    assert distance(X12, X12) == 0
    assert distance(X12, X34) == 2
    with pytest.raises(DimensionError):
        GrassmannGraph(2, 4, 2).distance(X12, span(e[0]))


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (2, 5, 2), (3, 4, 2)])
def test_distance_matches_bfs_and_diameter(q, n, k):
    G = GrassmannGraph(q, n, k)
    V = G.vertices
    dist = bfs_distances(oracle_graph(G.field, V, k))
    for i, j in itertools.combinations(range(G.order), 2):
        assert G.distance(V[i], V[j]) == dist[i][j]
    assert max(max(d.values()) for d in dist.values()) == G.diameter == min(k, n - k)


def test_cached_adjacency_matches_oracle_and_degree():
    for q, n, k in [(2, 4, 2), (3, 4, 2), (2, 5, 2)]:
        G = GrassmannGraph(q, n, k)
        H = oracle_graph(G.field, G.vertices, k)
        assert sorted(G.edges()) == sorted(tuple(sorted(ed)) for ed in H.edges())
        assert {d for _, d in H.degree()} == {G.degree}
        assert G.edge_count == H.number_of_edges()


def test_line_example():
    G = GrassmannGraph(2, 4, 2)
    S, U = span(e[0]), span(e[0], e[1], e[2])
    L = G.line(S, U)
    want = {span(e[0], e[1]), span(e[0], e[2]), span(e[0], (0, 1, 1, 0))}
    assert set(L) == want
    for X, Y in itertools.combinations(L, 2):
        assert adjacent(X, Y)
    with pytest.raises(DimensionError):
        G.line(span(e[3]), U)


def test_star_and_top_sizes_and_errors():
    G = GrassmannGraph(2, 4, 2)
    assert len(G.star(span(e[0]))) == G.star_size == 7
    assert len(G.top(span(e[0], e[1], e[2]))) == G.top_size == 7
    with pytest.raises(DimensionError):
        G.star(span(e[0], e[1]))
    with pytest.raises(DimensionError):
        G.top(span(e[0]))


def test_star_top_intersections_at_2_4_2():
    G = GrassmannGraph(2, 4, 2)
    for S, star in G.stars():
        for U, top in G.tops():
            common = set(star) & set(top)
            if S.issubset(U):
                assert common == set(G.line(S, U))
            else:
                assert len(common) <= 1


def test_maximal_cliques_are_stars_and_tops():
    G = GrassmannGraph(2, 4, 2)
    cliques = set(maximal_cliques(oracle_graph(F2, G.vertices, 2)))
    stars = {frozenset(map(G.index, m)) for _, m in G.stars()}
    tops = {frozenset(map(G.index, m)) for _, m in G.tops()}
    assert cliques == stars | tops
    assert len(stars) == len(tops) == 15
    # distinct maximal cliques meet in nothing, a vertex, or a line of a star/top pair
    for A, B in itertools.combinations(cliques, 2):
        m = len(A & B)
        assert m in (0, 1, 3)
        if m == 3:
            assert (A in stars) != (B in stars)


def test_maximal_cliques_containing_an_edge():
    X, Y = span(e[0], e[1]), span(e[0], e[2])
    star, top = maximal_cliques_containing(X, Y)
    assert star == CliqueDescriptor("star", span(e[0]))
    assert top == CliqueDescriptor("top", span(e[0], e[1], e[2]))
    with pytest.raises(DimensionError):
        maximal_cliques_containing(X, span(e[2], e[3]))
    # every edge lies in exactly one star and one top
    G = GrassmannGraph(2, 4, 2)
    cliques = maximal_cliques(oracle_graph(F2, G.vertices, 2))
    for i, j in G.edges():
        containing = [c for c in cliques if i in c and j in c]
        assert len(containing) == 2
        s, t = maximal_cliques_containing(G.vertex(i), G.vertex(j))
        got = {frozenset(map(G.index, s.members(G))), frozenset(map(G.index, t.members(G)))}
        assert got == set(containing)


def test_dual_isomorphism():
    d = dual_isomorphism(2, 4, 2)
    G = d.domain
    assert sorted(d.table) == list(range(35))
    assert d.compose(d) == identity_map(G)
    V = G.vertices
    for i, j in itertools.combinations(range(35), 2):
        assert G.distance(V[i], V[j]) == G.distance(d(V[i]), d(V[j]))
    d3 = dual_isomorphism(3, 5, 2)
    assert d3.codomain.k == 3
    assert all(Y == annihilator(X) for X, Y in zip(d3.domain.vertices, d3.images()))


def test_automorphism_orders():
    assert automorphism_group_order(GrassmannGraph(2, 2, 1)) == 6
    assert automorphism_group_order(GrassmannGraph(2, 4, 2)) == 2 * gl_order_formula(4, 2) == 40320
    # Chow at (3,4,2): PΓL(4,3) = PGL(4,3), doubled by duality
    assert automorphism_group_order(GrassmannGraph(3, 4, 2)) == 2 * gl_order_formula(4, 3) // 2


def test_automorphism_order_against_small_oracle_graphs():
    for H in (nx.petersen_graph(), nx.cycle_graph(7), nx.complete_bipartite_graph(3, 3),
              nx.path_graph(5), nx.hypercube_graph(3)):
        H = nx.convert_node_labels_to_integers(H)
        adj = [0] * H.number_of_nodes()
        for a, b in H.edges():
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        gm = nx.algorithms.isomorphism.GraphMatcher(H, H)
        brute = sum(1 for _ in gm.isomorphisms_iter())
        assert automorphism_group_order_adj(adj) == brute


def test_automorphism_budget_refusal():
    with pytest.raises(BudgetExceeded):
        automorphism_group_order(GrassmannGraph(2, 6, 3))


def test_gl_4_2_acts_faithfully():
    G = GrassmannGraph(2, 4, 2)
    V = G.vertices
    seen = set()
    count = 0
    for u in gl_elements(F2, 4):
        perm = tuple(G.index(Subspace.span(F2, 4, [u.apply(r) for r in X.rows])) for X in V)
        seen.add(perm)
        count += 1
    assert count == len(seen) == 20160


def test_export_and_reimport():
    G = GrassmannGraph(2, 2, 1)
    text = export_graph(G)
    assert text.splitlines()[1:] == ["0 1", "0 2", "1 2"]
    count, edges = import_edge_list(export_graph(GrassmannGraph(2, 4, 2)))
    assert count == 35 and len(edges) == 315
    assert edges == list(GrassmannGraph(2, 4, 2).edges())
    dot = export_graph(G, "dot")
    assert "graph G {" in dot and "0 -- 1;" in dot
    assert export_graph(G) == export_graph(GrassmannGraph(2, 2, 1))
    with pytest.raises(FormatError):
        export_graph(G, "gml")
    with pytest.raises(FormatError, match="line 2"):
        import_edge_list("0 1\n0 x\n")


def test_grassmann_map_validation():
    G = GrassmannGraph(2, 3, 1)
    with pytest.raises(DimensionError):
        GrassmannMap(G, G, [0] * 6)
    with pytest.raises(DimensionError):
        GrassmannMap(G, G, [7] * 7)
