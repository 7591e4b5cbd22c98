"""Semilinear maps between coordinate spaces over finite fields.

A :class:`SemilinearMap` from F^n to F'^n' is a field homomorphism
``sigma: F -> F'`` together with an n x n' matrix over F' whose rows are the
images of the standard basis, acting by ``x -> sum_i sigma(x_i) * row_i``.

Checking m-embeddings runs over the m-dimensional subspaces of the source
instead of over m-element independent subsets: for a semilinear l the span
of l(X) equals the span of l(B) for any basis B of X, so dim ⟨l(X)⟩ = m for
every m-subspace X is the same condition.
"""

from __future__ import annotations

import itertools
import logging

from .errors import (BudgetExceeded, DimensionError, NotAnEmbeddingError,
                     NotInducedError, NotLinePreservingError)
from .gf import FieldHom, FieldSpec, field_make, hom_enumerate
from .grassmann import GrassmannGraph, GrassmannMap
from .linalg import (Matrix, Subspace, all_vectors, normalize, rank_rows,
                     solve_combination, vec_add, vec_combination,
                     vec_scale)

log = logging.getLogger(__name__)

EXHAUSTION_LIMIT = 1 << 20
DEFAULT_BUDGET = 1 << 16


class SemilinearMap:
    """Semilinear map F^n -> F'^n' given by sigma and the basis images."""

    def __init__(self, sigma: FieldHom, rows, n_target: int = None):
        self.sigma = sigma
        self.source = sigma.source
        self.target = sigma.target
        rows = [tuple(int(x) for x in r) for r in rows]
        if n_target is None:
            if not rows:
                raise DimensionError("n_target is required for a map from the zero space")
            n_target = len(rows[0])
        self.matrix = Matrix(self.target, rows, n_target)
        self.n = len(rows)
        self.n_target = n_target

    @classmethod
    def linear(cls, field: FieldSpec, rows, n_target=None):
        return cls(FieldHom.identity(field), rows, n_target)

    @classmethod
    def identity(cls, field: FieldSpec, n: int):
        return cls.linear(field, Matrix.identity(field, n).rows, n)

    @property
    def rows(self):
        return self.matrix.rows

    def __repr__(self):
        return (f"SemilinearMap({self.source.header()}^{self.n} -> "
                f"{self.target.header()}^{self.n_target}, sigma: {self._sigma_text()}, "
                f"rows={list(self.rows)})")

    def _sigma_text(self):
        if self.source.e == 1:
            return "prime field"
        return f"x -> {self.sigma.image_of_generator}"

    def __eq__(self, other):
        return (isinstance(other, SemilinearMap) and self.sigma == other.sigma
                and self.matrix == other.matrix)

    def __hash__(self):
        return hash((self.sigma, self.matrix))

    def __call__(self, x) -> tuple:
        return apply(self, x)

    def image_span(self, X: Subspace) -> Subspace:
        """⟨l(X)⟩."""
        return Subspace.span(self.target, self.n_target, [apply(self, r) for r in X.rows])

    def scaled(self, c: int) -> "SemilinearMap":
        return SemilinearMap(self.sigma, [vec_scale(self.target, c, r) for r in self.rows],
                             self.n_target)

    def compose_linear(self, M: Matrix) -> "SemilinearMap":
        """x -> l(x) @ M for a linear M on the target."""
        return SemilinearMap(self.sigma, [M.apply(r) for r in self.rows], M.ncols)

    def precompose_linear(self, u: Matrix) -> "SemilinearMap":
        """x -> l(x @ u) for a linear u on the source."""
        return SemilinearMap(self.sigma, [apply(self, r) for r in u.rows], self.n_target)


def apply(l: SemilinearMap, x) -> tuple:
    if len(x) != l.n:
        raise DimensionError(f"vector of length {len(x)} for a map from dimension {l.n}")
    s = l.sigma.table
    return vec_combination(l.target, [s[a] for a in x], l.rows, l.n_target)


def proportionality(l1: SemilinearMap, l2: SemilinearMap):
    """c with l2 = c * l1 (same sigma), or None.

    c * l1 is again sigma-semilinear because the target field is commutative.
    """
    if l1.sigma != l2.sigma or l1.n_target != l2.n_target or l1.n != l2.n:
        return None
    F = l1.target
    c = None
    for r1, r2 in zip(l1.rows, l2.rows):
        for a, b in zip(r1, r2):
            if (a == 0) != (b == 0):
                return None
            if a:
                ratio = F.div(b, a)
                if c is None:
                    c = ratio
                elif ratio != c:
                    return None
    return 1 if c is None else c


def prime_field_matrix(l: SemilinearMap) -> list:
    """l as a GF(p)-linear map: rows are the images of x^j e_i in prime digits."""
    F, Fp = l.source, l.target
    powers = [1]
    for _ in range(F.e - 1):
        powers.append(F.mul(powers[-1], F.generator))
    out = []
    for i in range(l.n):
        for pw in powers:
            x = [0] * l.n
            x[i] = pw
            y = apply(l, x)
            out.append(tuple(d for c in y for d in Fp.prime_digits(c)))
    return out


def is_injective(l: SemilinearMap, cross_check: bool = None) -> bool:
    """True iff l has trivial kernel.

    l is additive and fixes the prime field, so it is linear over GF(p);
    injectivity is a rank check on that expansion. Small sources are also
    exhausted as a guard on the expansion.
    """
    if l.n == 0:
        return True
    Fp = field_make(l.target.p)
    rows = prime_field_matrix(l)
    by_rank = rank_rows(Fp, rows, l.n_target * l.target.e) == l.n * l.source.e
    if cross_check is None:
        cross_check = l.source.q ** l.n <= 1 << 12
    if cross_check and l.source.q ** l.n <= EXHAUSTION_LIMIT:
        zero = (0,) * l.n_target
        by_exhaustion = sum(1 for x in all_vectors(l.source, l.n) if apply(l, x) == zero) == 1
        if by_exhaustion != by_rank:
            raise AssertionError("prime-field expansion disagrees with exhaustion")
    return by_rank


def m_embedding_witness(l: SemilinearMap, m: int):
    """An m-subspace X with dim ⟨l(X)⟩ < m, or None."""
    if not 0 <= m <= min(l.n, l.n_target):
        raise DimensionError(f"m = {m} out of range for {l.n} -> {l.n_target}")
    for X in GrassmannGraph(l.source, l.n, m):
        if rank_rows(l.target, [apply(l, r) for r in X.rows], l.n_target) < m:
            return X
    return None


def is_m_embedding(l: SemilinearMap, m: int) -> bool:
    if m > min(l.n, l.n_target):
        if m > l.n:
            raise DimensionError(f"m = {m} exceeds the source dimension {l.n}")
        return False
    if not is_injective(l):
        return False
    return m_embedding_witness(l, m) is None


def is_embedding(l: SemilinearMap) -> bool:
    """A semilinear embedding: an n-embedding (images of bases independent)."""
    return is_m_embedding(l, l.n)


def induced_map(l: SemilinearMap, p: int, codomain: GrassmannGraph = None) -> GrassmannMap:
    """l_p: X -> ⟨l(X)⟩ on p-subspaces."""
    if not is_injective(l):
        raise NotAnEmbeddingError("l is not injective")
    dom = GrassmannGraph(l.source, l.n, p)
    cod = codomain or GrassmannGraph(l.target, l.n_target, p)
    table = []
    for X in dom.vertices:
        Y = l.image_span(X)
        if Y.dim < p:
            raise NotAnEmbeddingError(f"l is not a {p}-embedding: dim <l(X)> = {Y.dim}", X)
        table.append(cod.index(Y))
    return GrassmannMap(dom, cod, table)


# -- point maps and the fundamental theorem -----------------------------------

class PointMap:
    """A map from the points of PG(F^n) to the points of PG(F'^n')."""

    def __init__(self, source: FieldSpec, n: int, target: FieldSpec, n_target: int, table):
        self.domain = GrassmannGraph(source, n, 1)
        self.codomain = GrassmannGraph(target, n_target, 1)
        self.table = tuple(int(t) for t in table)
        if len(self.table) != self.domain.order:
            raise DimensionError("point map is not total")
        for t in self.table:
            if not 0 <= t < self.codomain.order:
                raise DimensionError(f"point index {t} out of range")

    @classmethod
    def from_function(cls, source, n, target, n_target, fn):
        cod = GrassmannGraph(target, n_target, 1)
        dom = GrassmannGraph(source, n, 1)
        return cls(source, n, target, n_target, [cod.index(fn(P)) for P in dom.vertices])

    @classmethod
    def induced_by(cls, l: SemilinearMap):
        return cls.from_function(l.source, l.n, l.target, l.n_target,
                                 lambda P: l.image_span(P))

    @property
    def source(self):
        return self.domain.field

    @property
    def target(self):
        return self.codomain.field

    def rep(self, x) -> tuple:
        """Normalized representative of g(⟨x⟩)."""
        P = Subspace.span(self.source, self.domain.n, [x])
        return self.codomain.vertices[self.table[self.domain.index(P)]].rows[0]

    def __eq__(self, other):
        return (isinstance(other, PointMap) and self.domain == other.domain
                and self.codomain == other.codomain and self.table == other.table)

    def __hash__(self):
        return hash((self.domain, self.codomain, self.table))


def _projective_lines(F, n):
    for L in GrassmannGraph(F, n, 2):
        yield L, [Subspace.span(F, n, [v]) for v in _line_points(F, L)]


def _line_points(F, L):
    a, b = L.rows
    yield a
    for t in F.elements:
        yield vec_add(F, vec_scale(F, t, a), b)


def check_line_preserving(g: PointMap):
    """Raise NotLinePreservingError naming a line whose image spans > 2 dims."""
    F, n = g.source, g.domain.n
    Fp, m = g.target, g.codomain.n
    Vc = g.codomain.vertices
    for L, pts in _projective_lines(F, n):
        reps = [Vc[g.table[g.domain.index(P)]].rows[0] for P in pts]
        if rank_rows(Fp, reps, m) > 2:
            raise NotLinePreservingError(f"line {L.rows} is not sent into a line", L)


def _unit(n, i):
    return tuple(1 if j == i else 0 for j in range(n))


def _solve_scalar(F, m, base, direction, target_point):
    """t in F' with base + t*direction in ⟨target_point⟩ (base, direction independent)."""
    c = solve_combination(F, [base, direction], target_point, m)
    # target = c0*base + c1*direction; rescale so the base coefficient is 1
    if c is None or c[0] == 0:
        return None
    return F.div(c[1], c[0])


def ftpg_recover(g: PointMap, budget: int = DEFAULT_BUDGET) -> SemilinearMap:
    """A semilinear injection inducing the line-preserving point map g.

    Gauge: l(e_1) is the normalized representative of g(⟨e_1⟩); every other
    basis image is pinned through points ⟨e_i + e_j⟩, and sigma is read off
    the points ⟨e_1 + a e_j⟩. If all basis points collapse to one image point
    the remaining freedom is searched exhaustively within ``budget``.
    """
    F, n = g.source, g.domain.n
    Fp, m = g.target, g.codomain.n
    if n < 3:
        raise DimensionError("point-map recovery needs a source of dimension >= 3")
    check_line_preserving(g)
    w = [g.rep(_unit(n, i)) for i in range(n)]

    def rep_sum(i, j, a=1):
        x = [0] * n
        x[i] = 1
        x[j] = a
        return g.rep(tuple(x))

    def distinct(i, j):
        return rank_rows(Fp, [w[i], w[j]], m) == 2

    j0 = next((j for j in range(1, n) if distinct(0, j)), None)
    if j0 is None:
        return _recover_by_search(g, w, budget)

    coeff = [None] * n
    coeff[0] = 1
    base = w[0]
    t = _solve_scalar(Fp, m, base, w[j0], rep_sum(0, j0))
    if t is None or t == 0:
        raise NotInducedError("no scalar fits the point <e_1 + e_j>", (0, j0))
    coeff[j0] = t
    # sigma(a) from <e_1 + a e_j0>
    anchor = vec_scale(Fp, t, w[j0])
    sigma_table = [0] * F.q
    for a in F.nonzero:
        s = _solve_scalar(Fp, m, base, anchor, rep_sum(0, j0, a))
        if s is None or s == 0:
            raise NotInducedError(f"no field value for the point <e_1 + {a} e_j>", (0, j0, a))
        sigma_table[a] = s
    sigma = _as_hom(F, Fp, sigma_table)

    for i in range(1, n):
        if coeff[i] is not None:
            continue
        if distinct(0, i):
            c = _solve_scalar(Fp, m, base, w[i], rep_sum(0, i))
        else:
            c = _solve_scalar(Fp, m, anchor, w[i], rep_sum(j0, i))
        if c is None or c == 0:
            raise NotInducedError("no scalar fits the basis point", i)
        coeff[i] = c
    rows = [vec_scale(Fp, coeff[i], w[i]) for i in range(n)]
    l = SemilinearMap(sigma, rows, m)
    _verify_induces(l, g)
    return l


def _as_hom(F, Fp, table):
    for h in hom_enumerate(F, Fp):
        if list(h.table) == list(table):
            return h
    raise NotInducedError("the recovered scalar action is not a field homomorphism", table)


def _verify_induces(l: SemilinearMap, g: PointMap):
    if not is_injective(l):
        raise NotInducedError("recovered map is not injective")
    cod = g.codomain
    for idx, P in enumerate(g.domain.vertices):
        if cod.index(l.image_span(P)) != g.table[idx]:
            raise NotInducedError(f"recovered map disagrees with g at point {P.rows[0]}", P)


def _recover_by_search(g, w, budget):
    F, n = g.source, g.domain.n
    Fp, m = g.target, g.codomain.n
    homs = hom_enumerate(F, Fp)
    size = len(homs) * (Fp.q - 1) ** (n - 1)
    if size > budget:
        raise BudgetExceeded(f"degenerate point map needs {size} candidates, budget {budget}",
                             budget)
    for sigma in homs:
        for cs in itertools.product(Fp.nonzero, repeat=n - 1):
            rows = [w[0]] + [vec_scale(Fp, c, w[i + 1]) for i, c in enumerate(cs)]
            l = SemilinearMap(sigma, rows, m)
            try:
                _verify_induces(l, g)
            except NotInducedError:
                continue
            return l
    raise NotInducedError("no semilinear injection induces g")


# -- independence and simplices -------------------------------------------

def _reps(points):
    reps = []
    for P in points:
        if isinstance(P, Subspace):
            if P.dim != 1:
                raise DimensionError("points must be 1-dimensional")
            reps.append(P.rows[0])
        else:
            reps.append(tuple(P))
    return reps


def _check_distinct(F, reps):
    seen = set()
    for r in reps:
        key = normalize(F, r)
        if not any(key):
            raise DimensionError("zero vector is not a point")
        if key in seen:
            raise DimensionError(f"duplicate point {key}")
        seen.add(key)


def is_independent(field: FieldSpec, points) -> bool:
    reps = _reps(points)
    _check_distinct(field, reps)
    if not reps:
        return True
    return rank_rows(field, reps, len(reps[0])) == len(reps)


def is_simplex(field: FieldSpec, points) -> bool:
    """(m+1) points, dependent, with every m of them independent."""
    reps = _reps(points)
    _check_distinct(field, reps)
    if len(reps) < 2:
        return False
    n = len(reps[0])
    if rank_rows(field, reps, n) == len(reps):
        return False
    return all(rank_rows(field, list(sub), n) == len(reps) - 1
               for sub in itertools.combinations(reps, len(reps) - 1))


def _semilinear_apply(F, sigma, M_rows, x, n):
    return vec_combination(F, [sigma.table[a] for a in x], M_rows, n)


def find_inducing_automorphism(field: FieldSpec, points, perm, budget=DEFAULT_BUDGET):
    """A semilinear automorphism (sigma, matrix) sending point i to point perm[i].

    Unknowns are the scalars λ_b on a maximal independent subset B of the
    representatives: u(x_b) = λ_b x_{perm(b)}. Every other point fixes its own
    image up to scalar, which is checked for each (sigma, λ) candidate.
    """
    F = field
    reps = _reps(points)
    n = len(reps[0])
    basis_idx = []
    for i, r in enumerate(reps):
        if rank_rows(F, [reps[j] for j in basis_idx] + [r], n) > len(basis_idx):
            basis_idx.append(i)
    r = len(basis_idx)
    B = [reps[i] for i in basis_idx]
    # complete B to a basis of F^n with standard vectors
    completion = []
    for j in range(n):
        e = _unit(n, j)
        if rank_rows(F, B + completion + [e], n) > r + len(completion):
            completion.append(e)
    full = Matrix(F, B + completion, n)
    full_inv = full.inverse()
    others = [i for i in range(len(reps)) if i not in basis_idx]
    # coordinates (over F) of every other point in the basis B
    coords = {i: solve_combination(F, B, reps[i], n) for i in others}
    autos = F.automorphisms
    size = len(autos) * (F.q - 1) ** max(r - 1, 0)
    if size > budget:
        raise BudgetExceeded(f"{size} candidates exceed budget {budget}", budget)
    targets = [reps[perm[b]] for b in basis_idx]
    if rank_rows(F, targets, n) < r:
        return None
    for sigma in autos:
        for lams in itertools.product(F.nonzero, repeat=max(r - 1, 0)):
            lam = (1,) + lams if r else ()
            images = [vec_scale(F, c, t) for c, t in zip(lam, targets)]
            ok = True
            for i in others:
                img = vec_combination(F, [sigma.table[a] for a in coords[i]], images, n)
                if not any(img) or rank_rows(F, [img, reps[perm[i]]], n) != 1:
                    ok = False
                    break
            if not ok:
                continue
            img_rows = _complete_images(F, images, completion, n)
            if img_rows is None:
                continue
            # matrix in the standard basis: e = full_inv @ full, u(e) per sigma
            M = _semilinear_matrix(F, sigma, full_inv, img_rows, n)
            return sigma, M
    return None


def _complete_images(F, images, completion, n):
    """Extend independent ``images`` to a basis by reusing the completion or
    standard vectors."""
    rows = list(images)
    pool = list(completion) + [_unit(n, j) for j in range(n)]
    for v in pool:
        if len(rows) == n:
            break
        if rank_rows(F, rows + [v], n) > len(rows):
            rows.append(v)
    return rows if len(rows) == n else None


def _semilinear_matrix(F, sigma, full_inv, img_rows, n):
    """Rows u(e_j) for the semilinear u with u(basis_t) = img_rows[t].

    e_j = sum_t full_inv[j][t] basis_t, so u(e_j) = sum_t sigma(full_inv[j][t]) img_t.
    """
    return Matrix(F, [vec_combination(F, [sigma.table[a] for a in row], img_rows, n)
                      for row in full_inv.rows], n)


def permutations_inducible(field: FieldSpec, points, budget=DEFAULT_BUDGET) -> bool:
    """Whether every permutation of the point set comes from a semilinear automorphism."""
    reps = _reps(points)
    _check_distinct(field, reps)
    if len(reps) > 6:
        raise BudgetExceeded("permutation check is limited to 6 points", 6)
    if len(reps) <= 1:
        return True
    for perm in itertools.permutations(range(len(reps))):
        if find_inducing_automorphism(field, reps, perm, budget) is None:
            return False
    return True


# -- extensions through l (commuting squares) -------------------------------

def gl_generators(field: FieldSpec, n: int) -> list:
    """Elementary transvections e_i -> e_i + e_j and diag(primitive, 1, ..., 1)."""
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                rows = [list(_unit(n, t)) for t in range(n)]
                rows[i][j] = 1
                gens.append(Matrix(field, rows, n))
    if field.q > 2 and n > 0:
        rows = [list(_unit(n, t)) for t in range(n)]
        rows[0][0] = field.primitive
        gens.append(Matrix(field, rows, n))
    return gens


def gl_elements(field: FieldSpec, n: int):
    """Every invertible n x n matrix (desk scale only)."""
    for rows in itertools.product(list(all_vectors(field, n)), repeat=n):
        M = Matrix(field, rows, n)
        if M.is_invertible():
            yield M


def gl_order(q: int, n: int) -> int:
    out = 1
    for i in range(n):
        out *= q ** n - q ** i
    return out


def gl_extension_exists(l: SemilinearMap, u: Matrix, check: bool = True):
    """u' in GL(V') with u' ∘ l = l ∘ u, or None.

    On W = ⟨im l⟩ the condition forces u'(l(e_i)) = l(u(e_i)); u' exists iff
    this is well defined and injective on W. Off W u' is unconstrained and is
    taken to be the identity on a standard complement.
    """
    if not u.is_invertible() or u.nrows != l.n:
        raise DimensionError("u must be an invertible matrix on the source")
    Fp, m = l.target, l.n_target
    src = [tuple(r) for r in l.rows]
    dst = [apply(l, r) for r in u.rows]  # l(u(e_i))
    idx = []
    for i, r in enumerate(src):
        if rank_rows(Fp, [src[j] for j in idx] + [r], m) > len(idx):
            idx.append(i)
    W = [src[i] for i in idx]
    Wimg = [dst[i] for i in idx]
    if rank_rows(Fp, Wimg, m) < len(idx):
        return None
    for j in range(l.n):
        if j in idx:
            continue
        c = solve_combination(Fp, W, src[j], m)
        if vec_combination(Fp, c, Wimg, m) != dst[j]:
            return None
    up = _extend_linear(Fp, m, W, Wimg)
    if up is None:
        return None
    if check and l.source.q ** l.n <= EXHAUSTION_LIMIT:
        for x in all_vectors(l.source, l.n):
            if up.apply(apply(l, x)) != apply(l, u.apply(x)):
                raise AssertionError("extension fails to commute")
    return up


def _extend_linear(F, m, W, Wimg):
    """Linear automorphism of F^m sending W[t] -> Wimg[t], identity on a complement."""
    comp = []
    for j in range(m):
        e = _unit(m, j)
        if rank_rows(F, W + comp + [e], m) > len(W) + len(comp):
            comp.append(e)
    src = W + comp
    dst = Wimg + comp
    if rank_rows(F, dst, m) < m:
        # the complement collides with the image of W: swap in other standard vectors
        dst = list(Wimg)
        for j in range(m):
            e = _unit(m, j)
            if len(dst) == m:
                break
            if rank_rows(F, dst + [e], m) > len(dst):
                dst.append(e)
        if len(dst) < m:
            return None
    S = Matrix(F, src, m)
    return S.inverse() @ Matrix(F, dst, m)


def is_semilinear_embedding_via_extension(l: SemilinearMap) -> bool:
    """Whether every generator of GL(V) extends through l to GL(V').

    Extendable automorphisms form a subgroup, so the generators decide it.
    """
    if not is_injective(l):
        raise NotAnEmbeddingError("l is not injective")
    return all(gl_extension_exists(l, u) is not None for u in gl_generators(l.source, l.n))
