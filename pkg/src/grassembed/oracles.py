"""Brute-force oracles that share no code path with the RREF machinery.

Subspaces are handled here as explicit sets of vectors; graph algorithms
come from networkx.
"""

from __future__ import annotations

import itertools

import networkx as nx

from .gf import FieldSpec


def span_set(F: FieldSpec, vectors, n) -> frozenset:
    """All F-linear combinations of ``vectors`` as a frozenset of tuples."""
    out = {tuple([0] * n)}
    for v in vectors:
        new = set(out)
        for x in out:
            for a in F.nonzero:
                new.add(tuple(F.add(xi, F.mul(a, vi)) for xi, vi in zip(x, v)))
        out = new
    return frozenset(out)


def oracle_graph(F: FieldSpec, vertices, k) -> nx.Graph:
    """Γ_k on the given subspaces, adjacency from |X ∩ Y| = q^(k-1)."""
    sets = [span_set(F, X.rows, X.n) for X in vertices]
    target = F.q ** (k - 1)
    G = nx.Graph()
    G.add_nodes_from(range(len(sets)))
    for i, j in itertools.combinations(range(len(sets)), 2):
        if len(sets[i] & sets[j]) == target:
            G.add_edge(i, j)
    return G


def bfs_distances(G: nx.Graph) -> dict:
    return dict(nx.all_pairs_shortest_path_length(G))


def maximal_cliques(G: nx.Graph) -> list:
    """Every maximal clique (Bron–Kerbosch with pivoting, via networkx)."""
    return [frozenset(c) for c in nx.find_cliques(G)]


def gaussian_product(n, k, q) -> int:
    """Number of k-subspaces of F_q^n as ordered bases over |GL(k, q)|."""
    num = den = 1
    for i in range(k):
        num *= q ** n - q ** i
        den *= q ** k - q ** i
    return num // den


def gl_order_formula(n, q) -> int:
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out
