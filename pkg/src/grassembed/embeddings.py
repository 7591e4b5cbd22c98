"""Embeddings between Grassmann graphs: constructors, verifier, decomposition
and l-rigidity.

Embeddings are explicit tables (:class:`~grassembed.grassmann.GrassmannMap`).
The constructors build the quotient (type A), dual (type B) and balanced
families from a subspace and a semilinear map; :func:`decompose` runs the
descent f_k -> f_{k-1} -> ... -> f_1 on an isometric table and recovers the
subspace and the semilinear map that induce it.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from .errors import (BudgetExceeded, DimensionError, NotAnEmbeddingError,
                     NotInducedError)
from .gf import hom_enumerate
from .grassmann import GrassmannGraph, GrassmannMap, containing
from .linalg import (Matrix, Subspace, annihilator, quotient_make, rank_rows,
                     solve_combination, subspace_intersection, sum_dim,
                     vec_combination, vec_scale)
from .semilinear import (DEFAULT_BUDGET, PointMap, SemilinearMap, _extend_linear,
                         apply, ftpg_recover, gl_generators, m_embedding_witness)

log = logging.getLogger(__name__)

MAX_WITNESSES = 10


# -- verification -------------------------------------------------------------

@dataclass
class VerificationReport:
    injective: bool
    adjacency_forward: bool
    adjacency_backward: bool
    isometric: bool
    type: str  # "A", "B", "NotAnEmbedding", or "degenerate" for k in {1, n-1}
    witnesses: list = field(default_factory=list)
    field_mismatch: bool = False

    @property
    def is_embedding(self) -> bool:
        return self.injective and self.adjacency_forward and self.adjacency_backward


def _common_clique(F, n, kp, subspaces):
    """('star' | 'top' | 'both' | None) for a set of k'-subspaces."""
    inter = subspaces[0]
    for Y in subspaces[1:]:
        inter = subspace_intersection(inter, Y)
        if inter.dim < kp - 1:
            break
    total = Subspace.span(F, n, [r for Y in subspaces for r in Y.rows])
    in_star = inter.dim >= kp - 1
    in_top = total.dim <= kp + 1
    if in_star and in_top:
        return "both"
    return "star" if in_star else "top" if in_top else None


def classify(f: GrassmannMap) -> str:
    """Type of an embedding from the images of every star and every top."""
    dom, cod = f.domain, f.codomain
    if not 1 < dom.k < dom.n - 1:
        return "degenerate"
    star_kinds = set()
    top_kinds = set()
    for _, members in dom.stars():
        star_kinds.add(_common_clique(cod.field, cod.n, cod.k, [f(X) for X in members]))
        if len(star_kinds) > 1:
            return "NotAnEmbedding"
    for _, members in dom.tops():
        top_kinds.add(_common_clique(cod.field, cod.n, cod.k, [f(X) for X in members]))
        if len(top_kinds) > 1:
            return "NotAnEmbedding"
    if star_kinds == {"star"} and top_kinds == {"top"}:
        return "A"
    if star_kinds == {"top"} and top_kinds == {"star"}:
        return "B"
    return "NotAnEmbedding"


def verify(f: GrassmannMap) -> VerificationReport:
    """All-pairs check of injectivity, adjacency (both directions) and
    distance preservation, then the A/B classification."""
    dom, cod = f.domain, f.codomain
    V = dom.vertices
    imgs = f.images()
    N = dom.order
    injective = len(set(f.table)) == N
    fwd = bwd = iso = True
    witnesses = []
    k, kp = dom.k, cod.k
    for i in range(N):
        Xi, Yi = V[i], imgs[i]
        for j in range(i + 1, N):
            d = sum_dim(Xi, V[j]) - k
            dp = 0 if f.table[i] == f.table[j] else sum_dim(Yi, imgs[j]) - kp
            if d == dp:
                continue
            iso = False
            if d == 1 and dp != 1:
                fwd = False
            if dp == 1 and d != 1:
                bwd = False
            if len(witnesses) < MAX_WITNESSES:
                witnesses.append((i, j, d, dp))
    if not injective:
        seen = {}
        for i, t in enumerate(f.table):
            if t in seen and len(witnesses) < MAX_WITNESSES:
                witnesses.append((seen[t], i, "same image"))
            seen.setdefault(t, i)
    kind = "NotAnEmbedding"
    if injective and fwd and bwd:
        kind = classify(f)
    return VerificationReport(injective, fwd, bwd, iso, kind, witnesses,
                              field_mismatch=dom.field != cod.field)


# -- constructors ----------------------------------------------------------

def _require_embedding(l: SemilinearMap, k: int):
    """l must be a min(2k, n)-embedding; returns that m."""
    m = min(2 * k, l.n)
    if m > l.n_target:
        raise DimensionError(f"target of dimension {l.n_target} cannot host a {m}-embedding")
    X = m_embedding_witness(l, m)
    if X is not None:
        raise NotAnEmbeddingError(f"l is not a semilinear {m}-embedding", X)
    return m


def _check_grades(n, k, kp, np_):
    if not 1 <= k <= n - 1:
        raise DimensionError(f"grade k = {k} out of range for n = {n}")
    if not 1 <= kp <= np_ - 1:
        raise DimensionError(f"grade k' = {kp} out of range for n' = {np_}")


def construct_type_A(S: Subspace, l: SemilinearMap, k: int) -> GrassmannMap:
    """X -> π(⟨l(X)⟩) for l: V -> V'/S, with k' = k + dim S.

    Accepts a (2k)-embedding with k <= n-k, or a full semilinear embedding
    when k <= k' and n-k <= n'-k'.
    """
    Q = quotient_make(S)
    n, np_ = l.n, S.n
    kp = k + S.dim
    _check_grades(n, k, kp, np_)
    if l.target != S.field:
        raise DimensionError("l must take values over the field of S")
    if l.n_target != Q.dim:
        raise DimensionError(f"l must map into V'/S of dimension {Q.dim}, got {l.n_target}")
    if Q.dim < min(2 * k, n):
        raise DimensionError(f"dim V'/S = {Q.dim} is below {min(2 * k, n)}")
    _require_embedding(l, k)
    dom = GrassmannGraph(l.source, n, k)
    cod = GrassmannGraph(S.field, np_, kp)
    table = [cod.index(Q.lift_subspace(l.image_span(X))) for X in dom.vertices]
    return GrassmannMap(dom, cod, table)


def _ann_in(U: Subspace, W: Subspace) -> Subspace:
    """The subspace of U whose U-coordinates annihilate W ⊂ F^{dim U}."""
    A = annihilator(W)
    return Subspace.span(U.field, U.n, [U.from_coords(r) for r in A.rows])


def construct_type_B(U: Subspace, v: SemilinearMap, k: int) -> GrassmannMap:
    """X -> annihilator of ⟨v(X)⟩ inside U, for v: V -> U*; k' = dim U - k.

    U* is F'^{dim U} paired with the coordinates of U in its RREF basis.
    """
    n, np_ = v.n, U.n
    kp = U.dim - k
    _check_grades(n, k, kp, np_)
    if v.target != U.field:
        raise DimensionError("v must take values over the field of U")
    if v.n_target != U.dim:
        raise DimensionError(f"v must map into U* of dimension {U.dim}, got {v.n_target}")
    _require_embedding(v, k)
    dom = GrassmannGraph(v.source, n, k)
    cod = GrassmannGraph(U.field, np_, kp)
    table = [cod.index(_ann_in(U, v.image_span(X))) for X in dom.vertices]
    return GrassmannMap(dom, cod, table)


class _Section:
    """Coordinates on U/S for incident S ⊂ U, realized inside U ⊂ V'."""

    def __init__(self, S: Subspace, U: Subspace):
        if not S.issubset(U):
            raise DimensionError("S is not contained in U")
        self.S, self.U = S, U
        S_in_U = Subspace.span(U.field, U.dim, [U.coords(r) for r in S.rows])
        self.Q = quotient_make(S_in_U)
        self.dim = self.Q.dim

    def embed(self, y) -> tuple:
        return self.U.from_coords(self.Q.lift(y))

    def lift_subspace(self, W: Subspace) -> Subspace:
        return Subspace.span(self.U.field, self.U.n,
                             list(self.S.rows) + [self.embed(r) for r in W.rows])

    def project(self, x) -> tuple:
        return self.Q.project(self.U.coords(x))


def construct_balanced(S: Subspace, U: Subspace, w: SemilinearMap, k: int,
                       flavor: str = "quotient") -> GrassmannMap:
    """n = 2k, S ⊂ U with dim U/S = 2k, w an embedding of V into U/S
    (``quotient``) or into (U/S)* (``dual-quotient``)."""
    if flavor not in ("quotient", "dual-quotient"):
        raise ValueError(f"unknown flavor {flavor!r}")
    n = w.n
    if n != 2 * k:
        raise DimensionError(f"balanced embeddings need n = 2k, got n={n}, k={k}")
    sec = _Section(S, U)
    if sec.dim != 2 * k:
        raise DimensionError(f"dim U/S must be {2 * k}, got {sec.dim}")
    if w.n_target != sec.dim:
        raise DimensionError("w must map into U/S")
    kp = k + S.dim
    _check_grades(n, k, kp, S.n)
    _require_embedding(w, k)
    dom = GrassmannGraph(w.source, n, k)
    cod = GrassmannGraph(S.field, S.n, kp)
    table = []
    for X in dom.vertices:
        W = w.image_span(X)
        if flavor == "dual-quotient":
            W = annihilator(W)
        table.append(cod.index(sec.lift_subspace(W)))
    return GrassmannMap(dom, cod, table)


def balanced_as_type_A(S: Subspace, U: Subspace, w: SemilinearMap) -> SemilinearMap:
    """The map V -> V'/S whose type-A construction equals the quotient flavor."""
    sec = _Section(S, U)
    Q = quotient_make(S)
    return SemilinearMap(w.sigma, [Q.project(sec.embed(r)) for r in w.rows], Q.dim)


# -- duality ----------------------------------------------------------------

def dualize_codomain(f: GrassmannMap) -> GrassmannMap:
    """X -> f(X)^0, into Γ_{n'-k'}(V'*)."""
    cod = f.codomain
    new = GrassmannGraph(cod.field, cod.n, cod.n - cod.k)
    return GrassmannMap(f.domain, new, [new.index(annihilator(Y)) for Y in f.images()])


def dualize_domain(f: GrassmannMap) -> GrassmannMap:
    """X -> f(X^0), from Γ_{n-k}(V*)."""
    dom = f.domain
    new = GrassmannGraph(dom.field, dom.n, dom.n - dom.k)
    return GrassmannMap(new, f.codomain,
                        [f.table[dom.index(annihilator(X))] for X in new.vertices])


def contragredient(u: Matrix) -> Matrix:
    """Inverse transpose: sends S^0 to u(S)^0.

    Taking the transpose as the adjoint relies on the field being commutative.
    """
    if not u.is_invertible():
        raise DimensionError("contragredient of a singular matrix")
    return u.inverse().transpose()


def transform_subspace(X: Subspace, u: Matrix) -> Subspace:
    """u(X) for a linear u acting on row vectors."""
    return Subspace.span(X.field, u.ncols, [u.apply(r) for r in X.rows])


# -- descent and decomposition ---------------------------------------------

def _descend_once(fi: GrassmannMap, validate: bool) -> GrassmannMap:
    dom, cod = fi.domain, fi.codomain
    i = dom.k
    lower = GrassmannGraph(dom.field, dom.n, i - 1)
    target = GrassmannGraph(cod.field, cod.n, cod.k - 1)
    want = cod.k - 1
    table = []
    for X in lower.vertices:
        star = containing(dom.field, dom.n, i, X)
        inter = None
        for Y in star:
            img = fi(Y)
            inter = img if inter is None else subspace_intersection(inter, img)
            if not validate and inter.dim <= want:
                break
        if inter.dim != want:
            raise NotAnEmbeddingError(
                f"images of the star over {X.rows} meet in dimension {inter.dim}, not {want}", X)
        table.append(target.index(inter))
    return GrassmannMap(lower, target, table)


def descent_chain(f: GrassmannMap, steps: int = None, validate: bool = False,
                  check: bool = False) -> list:
    """[f_{k-1}, f_{k-2}, ...]: f_{i-1}(X) is the intersection of f_i over [X⟩_i."""
    k = f.domain.k
    if steps is None:
        steps = k - 1
    if not 1 <= steps <= k - 1:
        raise DimensionError(f"steps must lie in 1..{k - 1}")
    if check:
        rep = verify(f)
        if not rep.isometric or rep.type != "A":
            raise NotAnEmbeddingError("descent needs an isometric embedding of type A")
        if k > f.domain.n - k:
            raise DimensionError("descent needs k <= n - k")
    chain = []
    cur = f
    for _ in range(steps):
        cur = _descend_once(cur, validate)
        if check:
            rep = verify(cur)
            if not rep.isometric or rep.type not in ("A", "degenerate"):
                raise NotAnEmbeddingError(f"descended map {cur!r} is not isometric of type A")
        chain.append(cur)
    return chain


def descend(f: GrassmannMap, steps: int = None, validate: bool = False,
            check: bool = False) -> GrassmannMap:
    return descent_chain(f, steps, validate, check)[-1]


@dataclass
class Decomposition:
    type: str
    k: int
    inner_map: SemilinearMap
    S: Optional[Subspace] = None
    U: Optional[Subspace] = None
    dualized_domain: bool = False

    def reconstruct(self) -> GrassmannMap:
        if self.type == "A":
            f = construct_type_A(self.S, self.inner_map, self.k)
        else:
            f = construct_type_B(self.U, self.inner_map, self.k)
        return dualize_domain(f) if self.dualized_domain else f


def _decompose_type_A(f: GrassmannMap):
    dom, cod = f.domain, f.codomain
    k, kp = dom.k, cod.k
    f1 = descent_chain(f)[-1] if k > 1 else f
    S = None
    for Y in f1.images():
        S = Y if S is None else subspace_intersection(S, Y)
    if S.dim != kp - k:
        raise NotInducedError(f"points of f_1 share a subspace of dimension {S.dim}, "
                              f"expected {kp - k}", S)
    Q = quotient_make(S)
    g = PointMap.from_function(dom.field, dom.n, cod.field, Q.dim,
                               lambda P: Q.project_subspace(f1(P)))
    l = ftpg_recover(g)
    rebuilt = construct_type_A(S, l, k)
    if rebuilt.table != f.table:
        raise NotInducedError("the recovered (S, l) does not reproduce the table")
    return S, l


def decompose(f: GrassmannMap, dualize: bool = False, check: bool = True) -> Decomposition:
    """Recover (S, l) or (U, v) inducing an isometric embedding.

    With ``dualize=True`` an input with k > n - k is first precomposed with
    the annihilator map of the domain, and the result describes f(X^0).
    """
    dom = f.domain
    dualized = False
    if dom.k > dom.n - dom.k:
        if not dualize:
            raise DimensionError("decompose needs k <= n - k; pass dualize=True")
        f = dualize_domain(f)
        dom = f.domain
        dualized = True
    kind = classify(f)
    if check:
        rep = verify(f)
        if not rep.isometric:
            raise NotAnEmbeddingError("decompose needs an isometric embedding", rep.witnesses)
        kind = rep.type
    k = dom.k
    if kind == "A":
        S, l = _decompose_type_A(f)
        return Decomposition("A", k, l, S=S, U=_partner_U(S, l, dom.n, k),
                             dualized_domain=dualized)
    if kind == "B":
        S_dual, _ = _decompose_type_A(dualize_codomain(f))
        U = annihilator(S_dual)
        cod = f.codomain
        inner = GrassmannGraph(cod.field, U.dim, k)
        h = GrassmannMap(dom, inner, [
            inner.index(annihilator(Subspace.span(U.field, U.dim, [U.coords(r) for r in Y.rows])))
            for Y in f.images()])
        S0, v = _decompose_type_A(h)
        if S0.dim != 0:
            raise NotInducedError("dual part did not reduce to a zero subspace", S0)
        if construct_type_B(U, v, k).table != f.table:
            raise NotInducedError("the recovered (U, v) does not reproduce the table")
        return Decomposition("B", k, v, U=U, S=_partner_S(U, v, dom.n, k),
                             dualized_domain=dualized)
    raise NotAnEmbeddingError(f"cannot decompose a map classified as {kind}")


def _partner_U(S, l, n, k):
    """For n = 2k: U = π(⟨im l⟩), of dimension k' + k."""
    if n != 2 * k:
        return None
    Q = quotient_make(S)
    return Q.lift_subspace(Subspace.span(l.target, l.n_target, l.rows))


def _partner_S(U, v, n, k):
    if n != 2 * k:
        return None
    return _ann_in(U, Subspace.span(v.target, v.n_target, v.rows))


def same_up_to_scalar(l1: SemilinearMap, l2: SemilinearMap) -> bool:
    from .semilinear import proportionality
    return proportionality(l1, l2) is not None


# -- l-rigidity ---------------------------------------------------------------

@dataclass
class RigidityReport:
    rigid: bool
    checked_generators: list
    failures: list
    witnesses: dict
    type: str = ""
    dualized_domain: bool = False


def extends(f: GrassmannMap, u: Matrix, up: Matrix) -> bool:
    """u'_{k'} ∘ f = f ∘ u_k, checked on every vertex."""
    dom, cod = f.domain, f.codomain
    for i, X in enumerate(dom.vertices):
        lhs = transform_subspace(f.image_of_index(i), up)
        rhs = f.table[dom.index(transform_subspace(X, u))]
        if cod.index(lhs) != rhs:
            return False
    return True


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def _quotient_extension(l: SemilinearMap, u: Matrix, budget: int):
    """Candidates w in GL(F'^m) with w⟨l(x)⟩ = ⟨l(u x)⟩ on basis and sum points."""
    import itertools
    Fp, m = l.target, l.n_target
    src = [tuple(r) for r in l.rows]
    tgt = [apply(l, r) for r in u.rows]
    idx = []
    for i, r in enumerate(src):
        if rank_rows(Fp, [src[j] for j in idx] + [r], m) > len(idx):
            idx.append(i)
    if rank_rows(Fp, [tgt[i] for i in idx], m) < len(idx):
        return
    uf = _UnionFind(idx)
    for a, b in itertools.combinations(idx, 2):
        # w(l(e_a) + l(e_b)) must be proportional to tgt_a + tgt_b
        if rank_rows(Fp, [tgt[a], tgt[b]], m) == 2:
            uf.union(a, b)
    classes = sorted({uf.find(i) for i in idx})
    free = classes[1:]
    size = (Fp.q - 1) ** len(free)
    if size > budget:
        raise BudgetExceeded(f"scalar search of size {size} exceeds budget {budget}", budget)
    W = [src[i] for i in idx]
    others = [j for j in range(l.n) if j not in idx]
    coords = {j: solve_combination(Fp, W, src[j], m) for j in others}
    for lams in itertools.product(Fp.nonzero, repeat=len(free)):
        value = {classes[0]: 1}
        value.update(zip(free, lams))
        lam = [value[uf.find(i)] for i in idx]
        Wimg = [vec_scale(Fp, c, tgt[i]) for c, i in zip(lam, idx)]
        ok = True
        for j in others:
            img = vec_combination(Fp, coords[j], Wimg, m)
            if not any(img) or rank_rows(Fp, [img, tgt[j]], m) != 1:
                ok = False
                break
        if not ok:
            continue
        w = _extend_linear(Fp, m, W, Wimg)
        if w is not None:
            yield w


def _lift_quotient_map(S: Subspace, w: Matrix) -> Matrix:
    """u' on V' acting as the identity on S and as w on V'/S."""
    Q = quotient_make(S)
    F, n = S.field, S.n
    basis = list(S.rows) + [Q.lift(r) for r in Matrix.identity(F, Q.dim).rows]
    images = list(S.rows) + [Q.lift(w.apply(r)) for r in Matrix.identity(F, Q.dim).rows]
    return Matrix(F, basis, n).inverse() @ Matrix(F, images, n)


def _rigidity_type_A(f, S, l, gens, budget):
    failures, witnesses = [], {}
    for gi, u in enumerate(gens):
        found = None
        for w in _quotient_extension(l, u, budget):
            up = _lift_quotient_map(S, w)
            if extends(f, u, up):
                found = up
                break
        if found is None:
            failures.append(gi)
        else:
            witnesses[gi] = found
    return failures, witnesses


def check_l_rigidity(f: GrassmannMap, budget: int = DEFAULT_BUDGET) -> RigidityReport:
    """Generator check of l-rigidity, structured by the decomposition of f.

    Extendable automorphisms form a subgroup of GL(V), so it is enough that
    every elementary transvection and one primitive diagonal map extend.
    Type B is reduced to type A on the dual codomain; the witness is then the
    contragredient. Inputs with k > n - k are handled on the dual domain.
    """
    dualized = False
    g = f
    if f.domain.k > f.domain.n - f.domain.k:
        g = dualize_domain(f)
        dualized = True
    dec = decompose(g)
    gens = gl_generators(g.domain.field, g.domain.n)
    if dec.type == "A":
        failures, witnesses = _rigidity_type_A(g, dec.S, dec.inner_map, gens, budget)
    else:
        gd = dualize_codomain(g)
        decd = decompose(gd)
        failures, wd = _rigidity_type_A(gd, decd.S, decd.inner_map, gens, budget)
        witnesses = {}
        for gi, up in wd.items():
            cu = contragredient(up)
            if not extends(g, gens[gi], cu):
                raise AssertionError("contragredient witness fails to extend")
            witnesses[gi] = cu
    return RigidityReport(not failures, gens, failures, witnesses, dec.type, dualized)


# -- feasibility ----------------------------------------------------------------

def feasibility(q, n, k, q2, n2, k2) -> dict:
    """Which necessary conditions hold for (q,n,k) -> (q2,n2,k2)."""
    from .grassmann import _as_field
    if not 1 < k < n - 1:
        raise DimensionError(f"k = {k} must satisfy 1 < k < n - 1 (n = {n})")
    if not 1 < k2 < n2 - 1:
        raise DimensionError(f"k' = {k2} must satisfy 1 < k' < n' - 1 (n' = {n2})")
    F, F2 = _as_field(q), _as_field(q2)
    return {
        "diameter": min(k, n - k) <= min(k2, n2 - k2),
        "rigid_A": k <= k2 and n - k <= n2 - k2,
        "rigid_B": n <= k + k2 <= n2,
        "field_hom": bool(hom_enumerate(F, F2)),
    }
