"""The desk-scale acceptance suite and the seeded catalogs it runs on.

Each criterion is a function returning ``(passed, detail)``; :func:`run`
adds the wall-clock limit and produces one result line per criterion.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass

import networkx as nx

from .embeddings import (check_l_rigidity, construct_type_A, construct_type_B,
                         contragredient, decompose, dualize_codomain, transform_subspace,
                         verify)
from .gf import field_for_order, hom_enumerate
from .grassmann import (GrassmannGraph, automorphism_group_order, gaussian_binomial)
from .linalg import Matrix, Subspace, annihilator, rank_rows
from .oracles import (bfs_distances, gaussian_product, gl_order_formula,
                      maximal_cliques, oracle_graph)
from .semilinear import (SemilinearMap, induced_map, is_independent, is_injective,
                         is_m_embedding, is_semilinear_embedding_via_extension,
                         is_simplex, permutations_inducible, proportionality)

DEFAULT_SEED = 20240601


# -- random objects -----------------------------------------------------------------

def random_full_rank(rng, F, nrows, ncols):
    """Random nrows x ncols matrix of rank nrows (nrows <= ncols)."""
    while True:
        rows = [tuple(rng.randrange(F.q) for _ in range(ncols)) for _ in range(nrows)]
        if rank_rows(F, rows, ncols) == nrows:
            return rows


def random_invertible(rng, F, n) -> Matrix:
    return Matrix(F, random_full_rank(rng, F, n, n), n)


def random_subspace(rng, F, n, d) -> Subspace:
    if d == 0:
        return Subspace.zero(F, n)
    return Subspace.span(F, n, random_full_rank(rng, F, d, n))


def random_semilinear(rng, F, n, Fp, m, full_rank=True) -> SemilinearMap:
    sigma = rng.choice(hom_enumerate(F, Fp))
    if full_rank:
        rows = random_full_rank(rng, Fp, n, m)
    else:
        rows = [tuple(rng.randrange(Fp.q) for _ in range(m)) for _ in range(n)]
    return SemilinearMap(sigma, rows, m)


# -- catalogs -------------------------------------------------------------------

def special_maps():
    """Hand-picked maps with known m-embedding behaviour."""
    F2, F4, F8, F32 = (field_for_order(q) for q in (2, 4, 8, 32))
    inc = lambda Fp: hom_enumerate(F2, Fp)[0]
    return {
        # injective, not a 3-embedding; the stated 2-embedding claim is tested as-is
        "gf2^3->gf4^2": SemilinearMap(inc(F4), [(1, 0), (0, 1), (2, 2)], 2),
        # a genuine 2-embedding of F_2^3 into F_8^2 that is not a 3-embedding
        "gf2^3->gf8^2": SemilinearMap(inc(F8), [(1, 0), (0, 1), (2, 4)], 2),
        # a 4-embedding of F_2^5 into F_32^4 that cannot be a 5-embedding
        "gf2^5->gf32^4": SemilinearMap(inc(F32), [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
                                                  (0, 0, 0, 1), (2, 4, 8, 16)], 4),
    }


def embedding_map_catalog(seed=DEFAULT_SEED) -> list:
    """(name, l) with l a (2k)-embedding for k = 2, n in {4, 5}."""
    rng = random.Random(seed)
    F2, F3, F4, F8 = (field_for_order(q) for q in (2, 3, 4, 8))
    out = []
    plan = [(F2, 4, F2, 4, 3), (F2, 4, F2, 5, 3), (F2, 4, F2, 6, 2),
            (F2, 5, F2, 5, 2), (F2, 5, F2, 6, 2), (F2, 4, F4, 4, 3),
            (F2, 4, F4, 5, 1), (F2, 4, F8, 4, 1), (F3, 4, F3, 4, 1),
            (F4, 4, F4, 4, 1)]
    for F, n, Fp, m, count in plan:
        for t in range(count):
            out.append((f"GF({F.q})^{n}->GF({Fp.q})^{m}#{t}", random_semilinear(rng, F, n, Fp, m)))
    # a Frobenius-twisted map over GF(4)
    frob = [h for h in hom_enumerate(F4, F4) if not h.is_identity()][0]
    out.append(("GF(4)^4->GF(4)^4 frobenius", SemilinearMap(frob, random_full_rank(rng, F4, 4, 4), 4)))
    out.append(("GF(2)^5->GF(32)^4 4-embedding", special_maps()["gf2^5->gf32^4"]))
    return out


def roundtrip_instances(seed=DEFAULT_SEED, count=20):
    """(kind, subspace, inner map) at (2,4,2) -> (2,6,3)."""
    rng = random.Random(seed + 1)
    F2 = field_for_order(2)
    out = []
    for _ in range(count):
        S = random_subspace(rng, F2, 6, 1)
        out.append(("A", S, random_semilinear(rng, F2, 4, F2, 5)))
    for _ in range(count):
        U = random_subspace(rng, F2, 6, 5)
        out.append(("B", U, random_semilinear(rng, F2, 4, F2, 5)))
    return out


def build(kind, sub, inner, k=2):
    return construct_type_A(sub, inner, k) if kind == "A" else construct_type_B(sub, inner, k)


def embedding_catalog(seed=DEFAULT_SEED) -> list:
    """(name, f) isometric embeddings used by the rigidity and duality checks."""
    out = [(f"induced {name}", induced_map(l, 2)) for name, l in embedding_map_catalog(seed)]
    for t, (kind, sub, inner) in enumerate(roundtrip_instances(seed, 4)):
        out.append((f"type {kind} #{t}", build(kind, sub, inner)))
    return out


def semilinear_catalog(seed=DEFAULT_SEED, size=120) -> list:
    """Injective semilinear maps with n <= 3 over q in {2, 4}."""
    rng = random.Random(seed + 2)
    F2, F4 = field_for_order(2), field_for_order(4)
    pairs = [(F2, F2), (F2, F4), (F4, F4)]
    out = [l for l in special_maps().values() if l.n <= 3 and l.target.q <= 4]
    while len(out) < size:
        F, Fp = rng.choice(pairs)
        n = rng.choice((2, 3))
        m = rng.choice((1, 2, 3, 4))
        l = random_semilinear(rng, F, n, Fp, m, full_rank=False)
        if is_injective(l):
            out.append(l)
    return out


# -- criteria -----------------------------------------------------------------

def criterion_1():
    checked = 0
    for q, n, k in ((2, 4, 2), (2, 5, 2), (3, 4, 2)):
        G = GrassmannGraph(q, n, k)
        V = G.vertices
        dist = bfs_distances(oracle_graph(G.field, V, k))
        for i, j in itertools.combinations(range(len(V)), 2):
            if G.distance(V[i], V[j]) != dist[i][j]:
                return False, f"({q},{n},{k}) pair {i},{j}: formula {G.distance(V[i], V[j])} bfs {dist[i][j]}"
            checked += 1
    return True, f"{checked} pairs agree"


def criterion_2():
    for q in (2, 3):
        for n in range(2, 6):
            for k in range(1, n):
                G = GrassmannGraph(q, n, k)
                V = G.vertices
                want = gaussian_product(n, k, q)
                if len(V) != want or len(set(V)) != want or G.order != want:
                    return False, f"({q},{n},{k}): {len(V)} vertices, expected {want}"
                if gaussian_binomial(n, k, q) != want:
                    return False, f"gaussian_binomial({n},{k},{q}) != {want}"
    G = GrassmannGraph(2, 4, 2)
    edges = list(G.edges())
    H = nx.Graph(edges)
    stars = {len(m) for _, m in G.stars()}
    tops = {len(m) for _, m in G.tops()}
    facts = (G.order, len(edges), G.edge_count, nx.diameter(H), G.diameter, stars, tops)
    if facts != (35, 315, 315, 2, 2, {7}, {7}):
        return False, f"Γ_2(F_2^4) facts {facts}"
    return True, "vertex counts and Γ_2(F_2^4) invariants match"


def criterion_3():
    G = GrassmannGraph(2, 4, 2)
    cliques = set(maximal_cliques(oracle_graph(G.field, G.vertices, 2)))
    stars = {frozenset(G.index(X) for X in members) for _, members in G.stars()}
    tops = {frozenset(G.index(X) for X in members) for _, members in G.tops()}
    ok = len(stars) == 15 and len(tops) == 15 and cliques == stars | tops
    return ok, f"{len(cliques)} maximal cliques, {len(stars)} stars, {len(tops)} tops"


def criterion_4():
    order = automorphism_group_order(GrassmannGraph(2, 4, 2))
    want = 2 * gl_order_formula(4, 2)
    return order == want == 40320, f"order {order}, expected {want}"


def criterion_5(seed=DEFAULT_SEED):
    cat = embedding_map_catalog(seed)
    bad = []
    subfield = 0
    for name, l in cat:
        if l.source != l.target:
            subfield += 1
        if not is_m_embedding(l, min(4, l.n)):
            bad.append(f"{name}: not a (2k)-embedding")
            continue
        rep = verify(induced_map(l, 2))
        if not rep.isometric:
            bad.append(f"{name}: {rep.witnesses[:1]}")
    ok = not bad and len(cat) >= 20 and subfield > 0
    return ok, f"{len(cat)} maps ({subfield} subfield-semilinear), violations: {bad or 'none'}"


def criterion_6(seed=DEFAULT_SEED):
    fails = []
    inst = roundtrip_instances(seed)
    for t, (kind, sub, inner) in enumerate(inst):
        f = build(kind, sub, inner)
        dec = decompose(f)
        got = dec.S if kind == "A" else dec.U
        if dec.type != kind or got != sub or proportionality(dec.inner_map, inner) is None:
            fails.append(t)
        elif dec.reconstruct().table != f.table:
            fails.append(t)
    return not fails, f"{len(inst)} instances, failures {fails or 'none'}"


def criterion_7():
    F2 = field_for_order(2)
    points = GrassmannGraph(F2, 3, 1).vertices
    checked, bad = 0, []
    for size in range(1, 5):
        for subset in itertools.combinations(points, size):
            lhs = permutations_inducible(F2, list(subset))
            rhs = is_independent(F2, list(subset)) or is_simplex(F2, list(subset))
            checked += 1
            if lhs != rhs:
                bad.append([P.rows for P in subset])
    return not bad, f"{checked} point sets, disagreements {bad or 'none'}"


def criterion_8(seed=DEFAULT_SEED):
    cat = semilinear_catalog(seed)
    dis = []
    positives = 0
    for t, l in enumerate(cat):
        a = is_semilinear_embedding_via_extension(l)
        b = is_m_embedding(l, l.n)
        positives += b
        if a != b:
            dis.append(t)
    return (not dis and len(cat) >= 100,
            f"{len(cat)} maps ({positives} embeddings), disagreements {dis or 'none'}")


def criterion_9():
    l = special_maps()["gf2^3->gf4^2"]
    inj = is_injective(l)
    two = is_m_embedding(l, 2)
    three = is_m_embedding(l, 3)
    return (inj and two and not three,
            f"injective={inj} 2-embedding={two} 3-embedding={three}")


def criterion_10(seed=DEFAULT_SEED):
    fails = []
    count = 0
    for t, (kind, sub, inner) in enumerate(roundtrip_instances(seed)):
        count += 1
        if not check_l_rigidity(build(kind, sub, inner)).rigid:
            fails.append(f"type {kind} #{t}")
    for name, f in embedding_catalog(seed):
        if f.domain.n != 2 * f.domain.k or name.startswith("type"):
            continue
        count += 1
        if not check_l_rigidity(f).rigid:
            fails.append(name)
    return not fails, f"{count} embeddings, non-rigid: {fails or 'none'}"


def criterion_11(seed=DEFAULT_SEED):
    flip = {"A": "B", "B": "A"}
    bad = []
    cat = embedding_catalog(seed)
    for name, f in cat:
        r1, r2 = verify(f), verify(dualize_codomain(f))
        if not (r1.isometric and r2.isometric and r1.type in flip and r2.type == flip[r1.type]):
            bad.append(name)
    F2 = field_for_order(2)
    subs = [X for d in range(5) for X in GrassmannGraph(F2, 4, d).vertices]
    rng = random.Random(seed + 3)
    eq_fail = 0
    for _ in range(50):
        u = random_invertible(rng, F2, 4)
        cu = contragredient(u)
        for S in subs:
            if transform_subspace(annihilator(S), cu) != annihilator(transform_subspace(S, u)):
                eq_fail += 1
    ok = not bad and eq_fail == 0 and len(subs) == 67
    return ok, (f"{len(cat)} embeddings, type/isometry failures {bad or 'none'}; "
                f"{len(subs)} subspaces x 50 maps, equivariance failures {eq_fail}")


@dataclass
class Criterion:
    number: int
    name: str
    limit: float
    func: object


CRITERIA = [
    Criterion(1, "distance formula vs BFS", 10, criterion_1),
    Criterion(2, "vertex counts and Γ_2(F_2^4) invariants", 1, criterion_2),
    Criterion(3, "maximal cliques are stars and tops", 5, criterion_3),
    Criterion(4, "automorphism group order of Γ_2(F_2^4)", 60, criterion_4),
    Criterion(5, "induced maps are isometric", 60, criterion_5),
    Criterion(6, "construct/decompose roundtrip", 120, criterion_6),
    Criterion(7, "inducible permutations vs independent or simplex", 60, criterion_7),
    Criterion(8, "extension criterion vs n-embedding", 120, criterion_8),
    Criterion(9, "GF(2)^3 -> GF(4)^2 strictness witness", 1, criterion_9),
    Criterion(10, "rigidity positive suite", 300, criterion_10),
    Criterion(11, "duality coherence", 30, criterion_11),
]


@dataclass
class Result:
    number: int
    name: str
    passed: bool
    elapsed: float
    limit: float
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"criterion {self.number}: {status} ({self.elapsed:.2f}s / {self.limit:g}s) "
                f"{self.name}: {self.detail}")


def run_one(c: Criterion, seed=None) -> Result:
    kwargs = {}
    if seed is not None and "seed" in c.func.__code__.co_varnames:
        kwargs["seed"] = seed
    t0 = time.perf_counter()
    try:
        ok, detail = c.func(**kwargs)
    except Exception as exc:  # a crash is a failed criterion, reported with its cause
        ok, detail = False, f"raised {type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - t0
    if elapsed > c.limit:
        ok = False
        detail += "; exceeded time limit"
    return Result(c.number, c.name, ok, elapsed, c.limit, detail)


def run(numbers=None, seed=None, out=print) -> list:
    results = []
    for c in CRITERIA:
        if numbers and c.number not in numbers:
            continue
        r = run_one(c, seed)
        out(r.line())
        results.append(r)
    return results
