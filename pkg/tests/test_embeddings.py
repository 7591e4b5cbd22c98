import itertools
import random

import pytest

from grassembed.acceptance import (random_invertible, random_semilinear, random_subspace,
                                   special_maps)
from grassembed.embeddings import (_common_clique, _quotient_extension, balanced_as_type_A,
                                   check_l_rigidity, classify, construct_balanced,
                                   construct_type_A, construct_type_B, contragredient,
                                   decompose, descend, descent_chain, dualize_codomain,
                                   dualize_domain, extends, feasibility, transform_subspace,
                                   verify)
from grassembed.errors import (BudgetExceeded, DimensionError, NotAnEmbeddingError)
from grassembed.gf import field_for_order, hom_enumerate
from grassembed.grassmann import GrassmannGraph, GrassmannMap, dual_isomorphism, identity_map
from grassembed.linalg import Matrix, Subspace, annihilator, subspace_intersection
from grassembed.semilinear import (SemilinearMap, apply, gl_generators, induced_map,
                                   proportionality)

F2, F3, F4 = field_for_order(2), field_for_order(3), field_for_order(4)


def inclusion(n, m, F=F2):
    """Coordinate inclusion F^n -> F^m."""
    return SemilinearMap.linear(F, [tuple(1 if i == j else 0 for j in range(m)) for i in range(n)], m)


def example_A():
    S = Subspace.coordinate(F2, 6, [5])
    return S, inclusion(4, 5), construct_type_A(S, inclusion(4, 5), 2)


def example_B():
    U = Subspace.coordinate(F2, 6, range(5))
    return U, inclusion(4, 5), construct_type_B(U, inclusion(4, 5), 2)


# -- verify --------------------------------------------------------------------

def test_verify_identity():
    r = verify(identity_map(GrassmannGraph(2, 4, 2)))
    assert r.injective and r.adjacency_forward and r.adjacency_backward
    assert r.isometric and r.type == "A" and r.witnesses == []


def test_verify_dual_isomorphism_is_type_B():
    r = verify(dual_isomorphism(2, 4, 2))
    assert r.isometric and r.type == "B"


def test_verify_constant_map():
    G = GrassmannGraph(2, 4, 2)
    r = verify(GrassmannMap(G, G, [0] * 35))
    assert not r.injective and r.type == "NotAnEmbedding"
    assert r.witnesses


def test_verify_swapped_pair_reports_witness():
    G = GrassmannGraph(2, 4, 2)
    table = list(range(35))
    # swap two non-adjacent vertices
    j = next(j for j in range(1, 35) if G.distance_idx(0, j) == 2)
    table[1], table[j] = table[j], table[1]
    r = verify(GrassmannMap(G, G, table))
    assert r.injective and not r.isometric
    assert r.type == "NotAnEmbedding"
    assert all(w[2] != w[3] for w in r.witnesses)


def test_verify_degenerate_grade():
    r = verify(identity_map(GrassmannGraph(2, 3, 1)))
    assert r.isometric and r.type == "degenerate"


def test_verify_flags_field_mismatch():
    f = induced_map(special_maps()["gf2^3->gf8^2"], 1)
    assert verify(f).field_mismatch


def test_verify_is_biconditional_on_adjacency():
    # a random injective table is not an embedding
    G = GrassmannGraph(2, 4, 2)
    H = GrassmannGraph(2, 5, 2)
    rng = random.Random(0)
    table = rng.sample(range(H.order), 35)
    r = verify(GrassmannMap(G, H, table))
    assert r.injective
    assert not (r.adjacency_forward and r.adjacency_backward)


# -- constructors ----------------------------------------------------------------

def test_construct_type_A_example():
    S, l, f = example_A()
    r = verify(f)
    assert r.isometric and r.type == "A"
    assert all(S.issubset(Y) for Y in f.images())
    assert f.codomain.params == (2, 6, 3)


def test_construct_type_A_with_zero_S_is_induced_map():
    rng = random.Random(1)
    l = random_semilinear(rng, F2, 4, F2, 5)
    assert construct_type_A(Subspace.zero(F2, 5), l, 2) == induced_map(l, 2)


def test_construct_type_A_errors():
    S = Subspace.coordinate(F2, 6, [5])
    with pytest.raises(DimensionError):
        construct_type_A(S, inclusion(4, 4), 2)  # l must map onto V'/S of dimension 5
    inc = hom_enumerate(F2, F4)[0]
    # injective, rank 3 over GF(4): not a 4-embedding
    l = SemilinearMap(inc, [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (2, 2, 0, 0)], 4)
    with pytest.raises(NotAnEmbeddingError) as err:
        construct_type_A(Subspace.zero(F4, 4), l, 2)
    assert err.value.witness.dim == 4


def test_construct_type_B_example():
    U, v, f = example_B()
    r = verify(f)
    assert r.isometric and r.type == "B"
    assert all(Y.issubset(U) for Y in f.images())
    assert verify(dualize_codomain(f)).type == "A"


def test_construct_type_B_errors():
    U = Subspace.coordinate(F2, 6, range(5))
    with pytest.raises(DimensionError):
        construct_type_B(U, inclusion(4, 6), 2)


@pytest.mark.parametrize("flavor", ["quotient", "dual-quotient"])
def test_construct_balanced(flavor):
    rng = random.Random(3)
    S = Subspace.coordinate(F2, 6, [0])
    U = Subspace.coordinate(F2, 6, range(5))
    w = SemilinearMap.linear(F2, random_invertible(rng, F2, 4).rows, 4)
    f = construct_balanced(S, U, w, 2, flavor)
    r = verify(f)
    assert r.isometric
    assert r.type == ("A" if flavor == "quotient" else "B")
    for Y in f.images():
        assert S.issubset(Y) and Y.issubset(U)
    if flavor == "quotient":
        assert f == construct_type_A(S, balanced_as_type_A(S, U, w), 2)


def test_construct_balanced_errors():
    S = Subspace.coordinate(F2, 6, [5])
    U = Subspace.coordinate(F2, 6, range(5))
    w = inclusion(4, 4)
    with pytest.raises(DimensionError):
        construct_balanced(S, U, w, 2)  # S not inside U
    with pytest.raises(DimensionError):
        construct_balanced(Subspace.coordinate(F2, 7, [0]), Subspace.coordinate(F2, 7, range(6)),
                           inclusion(5, 5), 2)
    with pytest.raises(ValueError):
        construct_balanced(Subspace.coordinate(F2, 6, [0]), U, w, 2, "other")


def test_each_clique_image_in_exactly_one_clique():
    for f in (example_A()[2], example_B()[2]):
        cod = f.codomain
        for _, members in itertools.chain(f.domain.stars(), f.domain.tops()):
            kind = _common_clique(cod.field, cod.n, cod.k, [f(X) for X in members])
            assert kind in ("star", "top")


def test_classification_by_one_star_agrees_with_all():
    for f in (example_A()[2], example_B()[2]):
        cod = f.codomain
        _, first = next(f.domain.stars())
        one = _common_clique(cod.field, cod.n, cod.k, [f(X) for X in first])
        assert one == ("star" if classify(f) == "A" else "top")


# -- descent ---------------------------------------------------------------------

def test_descend_identity():
    G = GrassmannGraph(2, 4, 2)
    assert descend(identity_map(G)) == identity_map(GrassmannGraph(2, 4, 1))


def test_descend_recovers_S_and_containment():
    S, l, f = example_A()
    f1 = descend(f, check=True)
    assert descend(f, validate=True) == f1
    inter = f1.image_of_index(0)
    for Y in f1.images():
        inter = subspace_intersection(inter, Y)
    assert inter == S
    # f_1(<Y]_1) lies inside f_2(Y)
    for Y in f.domain.vertices:
        for P in GrassmannGraph(F2, 4, 1).vertices:
            if P.issubset(Y):
                assert f1(P).issubset(f(Y))


def test_descend_chain_and_errors():
    rng = random.Random(4)
    l = random_semilinear(rng, F2, 6, F2, 6)
    f = induced_map(l, 3)
    chain = descent_chain(f)
    assert [g.domain.k for g in chain] == [2, 1]
    assert chain[-1] == induced_map(l, 1)
    with pytest.raises(NotAnEmbeddingError):
        descend(dual_isomorphism(2, 4, 2), check=True)
    with pytest.raises(DimensionError):
        descend(f, steps=3)


# -- decomposition -----------------------------------------------------------------

def test_decompose_type_A_roundtrip_random():
    rng = random.Random(5)
    for _ in range(5):
        S = random_subspace(rng, F2, 6, 1)
        l = random_semilinear(rng, F2, 4, F2, 5)
        f = construct_type_A(S, l, 2)
        d = decompose(f)
        assert d.type == "A" and d.S == S
        assert proportionality(l, d.inner_map) is not None
        assert d.reconstruct() == f
        # n = 2k: the partner U is pi(<im l>)
        assert d.U.dim == 5 and S.issubset(d.U)


def test_decompose_type_B_roundtrip_random():
    rng = random.Random(6)
    for _ in range(5):
        U = random_subspace(rng, F2, 6, 5)
        v = random_semilinear(rng, F2, 4, F2, 5)
        f = construct_type_B(U, v, 2)
        d = decompose(f)
        assert d.type == "B" and d.U == U
        assert proportionality(v, d.inner_map) is not None
        assert d.reconstruct() == f
        assert d.S.dim == 1 and d.S.issubset(U)


def test_decompose_over_gf3_and_gf4_semilinear():
    rng = random.Random(7)
    S = random_subspace(rng, F3, 5, 1)
    l = random_semilinear(rng, F3, 4, F3, 4)
    f = construct_type_A(S, l, 2)
    assert decompose(f).reconstruct() == f
    frob = [h for h in hom_enumerate(F4, F4) if not h.is_identity()][0]
    l = SemilinearMap(frob, random_invertible(rng, F4, 4).rows, 4)
    d = decompose(induced_map(l, 2))
    assert d.inner_map.sigma == frob
    assert proportionality(l, d.inner_map) is not None


def test_decompose_dual_isomorphism():
    d = decompose(dual_isomorphism(2, 4, 2))
    assert d.type == "B"
    assert d.U == Subspace.whole(F2, 4)
    assert Matrix(F2, d.inner_map.rows).is_invertible()


def test_decompose_non_isometric_refused():
    G = GrassmannGraph(2, 4, 2)
    with pytest.raises(NotAnEmbeddingError):
        decompose(GrassmannMap(G, G, [0] * 35))


def test_decompose_with_domain_dualization():
    rng = random.Random(8)
    l = random_semilinear(rng, F2, 5, F2, 6)
    f = induced_map(l, 3)  # k = 3 > n - k
    with pytest.raises(DimensionError):
        decompose(f)
    d = decompose(f, dualize=True)
    assert d.dualized_domain
    assert d.reconstruct() == f


# -- duality ---------------------------------------------------------------------

def test_dualize_involutions_and_type_flips():
    for f in (example_A()[2], example_B()[2]):
        assert dualize_codomain(dualize_codomain(f)) == f
        r, rc = verify(f), verify(dualize_codomain(f))
        assert rc.isometric and {r.type, rc.type} == {"A", "B"}
    f = identity_map(GrassmannGraph(2, 5, 2))
    assert dualize_domain(dualize_domain(f)) == f
    rd = verify(dualize_domain(f))
    assert rd.isometric and rd.type == "B"


def test_contragredient_examples():
    assert contragredient(Matrix.identity(F3, 3)) == Matrix.identity(F3, 3)
    P = Matrix(F2, [(0, 1, 0), (0, 0, 1), (1, 0, 0)])
    assert contragredient(P) == P
    with pytest.raises(DimensionError):
        contragredient(Matrix(F2, [(1, 1), (1, 1)]))


@pytest.mark.parametrize("F,n,count", [(F2, 4, 67), (F3, 3, 28)])
def test_contragredient_equivariance_all_subspaces(F, n, count):
    subs = [X for d in range(n + 1) for X in GrassmannGraph(F, n, d).vertices]
    assert len(subs) == count
    rng = random.Random(9)
    for _ in range(20):
        u = random_invertible(rng, F, n)
        cu = contragredient(u)
        for S in subs:
            assert transform_subspace(annihilator(S), cu) == annihilator(transform_subspace(S, u))


# -- rigidity ----------------------------------------------------------------------

def test_rigid_type_A_from_full_embedding():
    rep = check_l_rigidity(example_A()[2])
    assert rep.rigid and rep.failures == [] and rep.type == "A"
    assert len(rep.checked_generators) == 12
    assert set(rep.witnesses) == set(range(12))


def test_rigid_type_B_example_6_3():
    # n <= k + k' <= n': 4 <= 5 <= 6
    f = example_B()[2]
    rep = check_l_rigidity(f)
    assert rep.rigid and rep.type == "B"
    for gi, up in rep.witnesses.items():
        assert extends(f, rep.checked_generators[gi], up)


def test_rigid_balanced_and_gf3():
    rng = random.Random(10)
    S = Subspace.coordinate(F2, 6, [0])
    U = Subspace.coordinate(F2, 6, range(5))
    w = SemilinearMap.linear(F2, random_invertible(rng, F2, 4).rows, 4)
    for flavor in ("quotient", "dual-quotient"):
        assert check_l_rigidity(construct_balanced(S, U, w, 2, flavor)).rigid
    l = random_semilinear(rng, F3, 4, F3, 5)
    rep = check_l_rigidity(induced_map(l, 2))
    assert rep.rigid and len(rep.checked_generators) == 13


def test_rigidity_with_dualized_domain():
    rng = random.Random(11)
    l = random_semilinear(rng, F2, 5, F2, 6)
    rep = check_l_rigidity(induced_map(l, 3))
    assert rep.rigid and rep.dualized_domain


def test_rigidity_subgroup_property():
    f = example_A()[2]
    rep = check_l_rigidity(f)
    gens = rep.checked_generators
    rng = random.Random(12)
    for _ in range(15):
        a, b = rng.sample(range(len(gens)), 2)
        ua, ub = gens[a], gens[b]
        wa, wb = rep.witnesses[a], rep.witnesses[b]
        assert extends(f, ua @ ub, wa @ wb)
        assert extends(f, ua.inverse(), wa.inverse())


def test_non_rigid_instance_over_gf32():
    l = special_maps()["gf2^5->gf32^4"]
    f = induced_map(l, 2)
    r = verify(f)
    assert r.isometric and r.type == "A"
    # the type A dimension inequality fails: n - k = 3 > n' - k' = 2
    assert feasibility(2, 5, 2, 32, 4, 2)["rigid_A"] is False
    rep = check_l_rigidity(f)
    assert not rep.rigid and rep.failures


def test_failing_generator_has_forced_and_failing_quotient_map():
    # with l(e_1..e_4) a basis, any w must send l(e_i) to a multiple of l(u e_i)
    # and all multiples agree; the fifth point then pins the answer
    l = special_maps()["gf2^5->gf32^4"]
    F = l.target
    u = gl_generators(F2, 5)[0]
    assert list(_quotient_extension(l, u, 1 << 16)) == []
    w = Matrix(F, [apply(l, r) for r in u.rows[:4]])  # the forced candidate, scale 1
    img = w.apply(l.rows[4])
    target = apply(l, u.rows[4])
    assert Subspace.span(F, 4, [img]) != Subspace.span(F, 4, [target])


def test_rigidity_budget_refusal():
    with pytest.raises(BudgetExceeded):
        check_l_rigidity(example_A()[2], budget=0)


# -- feasibility -------------------------------------------------------------------

def test_feasibility_examples():
    assert feasibility(2, 4, 2, 2, 6, 3) == {"diameter": True, "rigid_A": True,
                                              "rigid_B": True, "field_hom": True}
    assert feasibility(2, 6, 3, 2, 4, 2)["diameter"] is False
    r = feasibility(2, 5, 2, 2, 5, 3)
    assert r["rigid_A"] is False and r["rigid_B"] is True
    assert feasibility(4, 4, 2, 8, 4, 2)["field_hom"] is False
    with pytest.raises(DimensionError):
        feasibility(2, 4, 1, 2, 6, 3)
    with pytest.raises(DimensionError):
        feasibility(2, 4, 2, 2, 6, 5)
