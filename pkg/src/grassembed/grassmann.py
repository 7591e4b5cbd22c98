"""Grassmann graphs Γ_k(F^n) with a stable vertex numbering.

Vertices are the k-dimensional subspaces of F^n. They are numbered by pivot
set first (colexicographic order on reversed column indices, so the first
vertex is spanned by the last k standard vectors) and then by the free RREF
entries read row by row as a base-q number, most significant first.
"""

from __future__ import annotations

import itertools
from functools import cached_property

from .errors import BudgetExceeded, DimensionError, FormatError
from .gf import FieldSpec, field_for_order
from .linalg import (Subspace, annihilator, gf2_rank, intersection_dim,
                     subspace_intersection, subspace_sum, sum_dim)

ADJACENCY_CACHE_LIMIT = 4096
DEFAULT_AUT_BUDGET = 200


def gaussian_binomial(n: int, k: int, q: int) -> int:
    """Number of k-dimensional subspaces of F_q^n."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _as_field(field) -> FieldSpec:
    return field if isinstance(field, FieldSpec) else field_for_order(int(field))


class GrassmannGraph:
    """The Grassmann graph Γ_k(V) for V = F^n.

    Adjacency is computed from the RREF bases on demand; ``adjacency`` gives
    a cached bitset form for graphs of at most 4096 vertices.
    """

    def __init__(self, field, n: int, k: int):
        if not 0 <= k <= n:
            raise DimensionError(f"grade {k} out of range for dimension {n}")
        self.field = _as_field(field)
        self.q = self.field.q
        self.n = n
        self.k = k
        self._build_index()

    def __repr__(self):
        return f"GrassmannGraph(q={self.q}, n={self.n}, k={self.k})"

    def __eq__(self, other):
        return (isinstance(other, GrassmannGraph) and self.field == other.field
                and self.n == other.n and self.k == other.k)

    def __hash__(self):
        return hash((self.field, self.n, self.k))

    @property
    def params(self):
        return (self.q, self.n, self.k)

    # -- indexing ------------------------------------------------------------

    def _free_positions(self, pivots):
        pivset = set(pivots)
        return tuple((i, j) for i, p in enumerate(pivots)
                     for j in range(p + 1, self.n) if j not in pivset)

    def _build_index(self):
        n, k = self.n, self.k
        sets = sorted(itertools.combinations(range(n), k),
                      key=lambda A: sorted((n - 1 - p for p in A), reverse=True))
        self._pivot_sets = sets
        self._offsets = {}
        self._free = {}
        self._blocks = []
        off = 0
        for A in sets:
            free = self._free_positions(A)
            self._offsets[A] = off
            self._free[A] = free
            self._blocks.append((off, A))
            off += self.q ** len(free)
        self.order = off

    def __len__(self):
        return self.order

    def index(self, X: Subspace) -> int:
        if X.n != self.n or X.dim != self.k:
            raise DimensionError(f"{X!r} is not a vertex of {self!r}")
        A = X.pivots
        num = 0
        q = self.q
        for i, j in self._free[A]:
            num = num * q + X.rows[i][j]
        return self._offsets[A] + num

    def vertex(self, idx: int) -> Subspace:
        if "vertices" in self.__dict__:
            return self.__dict__["vertices"][idx]
        return self._unrank(idx)

    def _unrank(self, idx: int) -> Subspace:
        if not 0 <= idx < self.order:
            raise IndexError(idx)
        lo, hi = 0, len(self._blocks) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._blocks[mid][0] <= idx:
                lo = mid
            else:
                hi = mid - 1
        off, A = self._blocks[lo]
        num = idx - off
        free = self._free[A]
        rows = [[0] * self.n for _ in range(self.k)]
        for i, p in enumerate(A):
            rows[i][p] = 1
        for i, j in reversed(free):
            rows[i][j] = num % self.q
            num //= self.q
        return Subspace(self.field, self.n, [tuple(r) for r in rows], A)

    @cached_property
    def vertices(self) -> list:
        return [self._unrank(i) for i in range(self.order)]

    def __iter__(self):
        return iter(self.vertices)

    # -- metric ---------------------------------------------------------------

    def _check(self, X, Y):
        if X.dim != self.k or Y.dim != self.k or X.n != self.n or Y.n != self.n:
            raise DimensionError("grade mismatch")

    def distance(self, X: Subspace, Y: Subspace) -> int:
        self._check(X, Y)
        return sum_dim(X, Y) - self.k

    def adjacent(self, X: Subspace, Y: Subspace) -> bool:
        return self.distance(X, Y) == 1

    def distance_idx(self, i: int, j: int) -> int:
        V = self.vertices
        return sum_dim(V[i], V[j]) - self.k

    @property
    def diameter(self) -> int:
        return min(self.k, self.n - self.k)

    @property
    def degree(self) -> int:
        q = self.q
        return q * gaussian_binomial(self.k, 1, q) * gaussian_binomial(self.n - self.k, 1, q)

    @property
    def edge_count(self) -> int:
        return self.order * self.degree // 2

    @cached_property
    def adjacency(self) -> list:
        """Neighbour bitsets, one Python int per vertex."""
        N = self.order
        if N > ADJACENCY_CACHE_LIMIT:
            raise BudgetExceeded(f"adjacency cache limited to {ADJACENCY_CACHE_LIMIT} vertices",
                                 ADJACENCY_CACHE_LIMIT)
        V = self.vertices
        k1 = self.k + 1
        adj = [0] * N
        if self.q == 2:
            packed = [v.packed for v in V]
            for i in range(N):
                pi = packed[i]
                for j in range(i + 1, N):
                    if gf2_rank(pi + packed[j]) == k1:
                        adj[i] |= 1 << j
                        adj[j] |= 1 << i
        else:
            for i in range(N):
                for j in range(i + 1, N):
                    if sum_dim(V[i], V[j]) == k1:
                        adj[i] |= 1 << j
                        adj[j] |= 1 << i
        return adj

    def neighbors(self, i: int) -> list:
        a = self.adjacency[i]
        return [j for j in range(self.order) if a >> j & 1]

    def edges(self):
        """Sorted edge list (i < j)."""
        adj = self.adjacency
        for i in range(self.order):
            a = adj[i] >> (i + 1)
            j = i + 1
            while a:
                if a & 1:
                    yield (i, j)
                a >>= 1
                j += 1

    # -- cliques ----------------------------------------------------------------

    def star(self, S: Subspace) -> list:
        """[S⟩_k: every k-subspace containing S (dim S = k - 1)."""
        if S.dim != self.k - 1 or S.n != self.n:
            raise DimensionError(f"star center must have dimension {self.k - 1}")
        return containing(self.field, self.n, self.k, S)

    def top(self, U: Subspace) -> list:
        """⟨U]_k: every k-subspace of U (dim U = k + 1)."""
        if U.dim != self.k + 1 or U.n != self.n:
            raise DimensionError(f"top center must have dimension {self.k + 1}")
        return contained_in(self.field, self.k, U)

    def line(self, S: Subspace, U: Subspace) -> list:
        """[S,U]_k: the q + 1 subspaces between S and U."""
        if S.dim != self.k - 1 or U.dim != self.k + 1:
            raise DimensionError("line needs dim S = k-1 and dim U = k+1")
        if not S.issubset(U):
            raise DimensionError("S is not contained in U")
        return [X for X in self.top(U) if S.issubset(X)]

    def stars(self):
        """All (center, members) pairs for stars."""
        for S in GrassmannGraph(self.field, self.n, self.k - 1):
            yield S, self.star(S)

    def tops(self):
        for U in GrassmannGraph(self.field, self.n, self.k + 1):
            yield U, self.top(U)

    @property
    def star_size(self) -> int:
        return gaussian_binomial(self.n - self.k + 1, 1, self.q)

    @property
    def top_size(self) -> int:
        return gaussian_binomial(self.k + 1, 1, self.q)


def containing(field, n, k, S: Subspace) -> list:
    """Every k-subspace of F^n containing S."""
    from .linalg import quotient_make
    Q = quotient_make(S)
    out = []
    for W in GrassmannGraph(field, Q.dim, k - S.dim):
        out.append(Q.lift_subspace(W))
    return out


def contained_in(field, k, U: Subspace) -> list:
    """Every k-subspace of U."""
    out = []
    for W in GrassmannGraph(field, U.dim, k):
        out.append(Subspace.span(field, U.n, [U.from_coords(r) for r in W.rows]))
    return out


def grassmann_graph(q, n, k) -> GrassmannGraph:
    return GrassmannGraph(q, n, k)


def enumerate_vertices(q, n, k) -> list:
    return GrassmannGraph(q, n, k).vertices


def adjacent(X: Subspace, Y: Subspace) -> bool:
    if X.dim != Y.dim or X.n != Y.n:
        raise DimensionError("grade mismatch")
    return intersection_dim(X, Y) == X.dim - 1


def distance(X: Subspace, Y: Subspace) -> int:
    if X.dim != Y.dim or X.n != Y.n:
        raise DimensionError("grade mismatch")
    return X.dim - intersection_dim(X, Y)


class CliqueDescriptor:
    """A star (center of dim k-1) or a top (center of dim k+1)."""

    __slots__ = ("kind", "center")

    def __init__(self, kind: str, center: Subspace):
        if kind not in ("star", "top"):
            raise ValueError(kind)
        self.kind = kind
        self.center = center

    def members(self, graph: GrassmannGraph) -> list:
        return graph.star(self.center) if self.kind == "star" else graph.top(self.center)

    def __eq__(self, other):
        return isinstance(other, CliqueDescriptor) and (self.kind, self.center) == (other.kind, other.center)

    def __hash__(self):
        return hash((self.kind, self.center))

    def __repr__(self):
        return f"CliqueDescriptor({self.kind}, {self.center!r})"


def maximal_cliques_containing(X: Subspace, Y: Subspace):
    """The star and the top through an edge {X, Y}."""
    if not adjacent(X, Y):
        raise DimensionError("X and Y are not adjacent")
    return (CliqueDescriptor("star", subspace_intersection(X, Y)),
            CliqueDescriptor("top", subspace_sum(X, Y)))


class GrassmannMap:
    """A total map from the vertices of one Grassmann graph to another's."""

    def __init__(self, domain: GrassmannGraph, codomain: GrassmannGraph, table):
        self.domain = domain
        self.codomain = codomain
        self.table = tuple(int(t) for t in table)
        if len(self.table) != domain.order:
            raise DimensionError(f"table has {len(self.table)} entries, domain has {domain.order}")
        for t in self.table:
            if not 0 <= t < codomain.order:
                raise DimensionError(f"image index {t} out of range")

    @classmethod
    def from_function(cls, domain, codomain, fn):
        return cls(domain, codomain, [codomain.index(fn(X)) for X in domain.vertices])

    def __call__(self, X: Subspace) -> Subspace:
        return self.codomain.vertex(self.table[self.domain.index(X)])

    def image_of_index(self, i: int) -> Subspace:
        return self.codomain.vertex(self.table[i])

    def images(self) -> list:
        return [self.codomain.vertex(t) for t in self.table]

    def __eq__(self, other):
        return (isinstance(other, GrassmannMap) and self.domain == other.domain
                and self.codomain == other.codomain and self.table == other.table)

    def __hash__(self):
        return hash((self.domain, self.codomain, self.table))

    def __repr__(self):
        d, c = self.domain, self.codomain
        return f"GrassmannMap({d.params} -> {c.params})"

    def compose(self, inner: "GrassmannMap") -> "GrassmannMap":
        """self ∘ inner."""
        if inner.codomain != self.domain:
            raise DimensionError("maps are not composable")
        return GrassmannMap(inner.domain, self.codomain, [self.table[t] for t in inner.table])


def dual_isomorphism(q, n, k) -> GrassmannMap:
    """X -> X^0, from Γ_k(V) to Γ_{n-k}(V*)."""
    dom = GrassmannGraph(q, n, k)
    cod = GrassmannGraph(dom.field, n, n - k)
    return GrassmannMap.from_function(dom, cod, annihilator)


def identity_map(graph: GrassmannGraph) -> GrassmannMap:
    return GrassmannMap(graph, graph, range(graph.order))


# -- automorphisms ----------------------------------------------------------

def _refine(cells, adj):
    """Equitable refinement; returns (cells, trace)."""
    trace = []
    while True:
        masks = []
        for c in cells:
            m = 0
            for v in c:
                m |= 1 << v
            masks.append(m)
        new = []
        for c in cells:
            if len(c) == 1:
                new.append(c)
                trace.append(None)
                continue
            groups = {}
            for v in c:
                a = adj[v]
                sig = tuple((a & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            keys = sorted(groups)
            trace.append(tuple((key, len(groups[key])) for key in keys))
            new.extend(tuple(groups[key]) for key in keys)
        if len(new) == len(cells):
            return new, tuple(trace)
        cells = new


def _individualize(cells, c, v, adj):
    cell = cells[c]
    rest = tuple(w for w in cell if w != v)
    split = list(cells[:c]) + [(v,), rest] + list(cells[c + 1:])
    return _refine(split, adj)


def _is_automorphism(mapping, adj):
    for v, a in enumerate(adj):
        img = 0
        u = 0
        while a:
            if a & 1:
                img |= 1 << mapping[u]
            a >>= 1
            u += 1
        if adj[mapping[v]] != img:
            return False
    return True


def _extend(L, R, adj, N):
    c = next((i for i, cell in enumerate(L) if len(cell) > 1), None)
    if c is None:
        mapping = [0] * N
        for a, b in zip(L, R):
            mapping[a[0]] = b[0]
        return mapping if _is_automorphism(mapping, adj) else None
    v = L[c][0]
    L2, tL = _individualize(L, c, v, adj)
    for w in R[c]:
        R2, tR = _individualize(R, c, w, adj)
        if tL != tR:
            continue
        found = _extend(L2, R2, adj, N)
        if found is not None:
            return found
    return None


def _orbit(v, gens):
    seen = {v}
    stack = [v]
    while stack:
        x = stack.pop()
        for g in gens:
            y = g[x]
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def automorphism_group_order_adj(adj, budget=DEFAULT_AUT_BUDGET) -> int:
    """Order of the automorphism group of a graph given by neighbour bitsets.

    Individualization-refinement along a base; each level multiplies in the
    orbit length of the base point inside the current pointwise stabilizer.
    """
    N = len(adj)
    if N > budget:
        raise BudgetExceeded(f"{N} vertices exceeds the automorphism budget {budget}", budget)
    if N == 0:
        return 1
    L, _ = _refine([tuple(range(N))], adj)
    order = 1
    while True:
        c = next((i for i, cell in enumerate(L) if len(cell) > 1), None)
        if c is None:
            return order
        v = L[c][0]
        L2, tL = _individualize(L, c, v, adj)
        gens = []
        orbit = {v}
        for w in L[c]:
            if w in orbit:
                continue
            R2, tR = _individualize(L, c, w, adj)
            if tR != tL:
                continue
            g = _extend(L2, R2, adj, N)
            if g is not None:
                gens.append(g)
                orbit = _orbit(v, gens)
        order *= len(orbit)
        L = L2


def automorphism_group_order(graph: GrassmannGraph, budget=DEFAULT_AUT_BUDGET) -> int:
    if graph.order > budget:
        raise BudgetExceeded(f"{graph.order} vertices exceeds the automorphism budget {budget}",
                             budget)
    return automorphism_group_order_adj(graph.adjacency, budget)


# -- export / import ----------------------------------------------------------

def export_graph(graph: GrassmannGraph, format: str = "edge-list") -> str:
    if format not in ("edge-list", "dot"):
        raise FormatError(f"unknown graph format {format!r}")
    head = f"{graph.field.header()} n={graph.n} k={graph.k} vertices={graph.order}"
    edges = list(graph.edges())
    if format == "edge-list":
        lines = [f"# {head} edges={len(edges)}"]
        lines += [f"{i} {j}" for i, j in edges]
    else:
        lines = [f"// {head}", "graph G {"]
        lines += [f"  {i};" for i in range(graph.order)]
        lines += [f"  {i} -- {j};" for i, j in edges]
        lines.append("}")
    return "\n".join(lines) + "\n"


def import_edge_list(text: str):
    """Parse an edge list; returns (vertex_count or None, sorted edges)."""
    count = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            for tok in line[1:].split():
                if tok.startswith("vertices="):
                    count = int(tok.split("=", 1)[1])
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError("expected 'i j'", lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise FormatError("non-integer vertex index", lineno) from None
        edges.append((min(i, j), max(i, j)))
    return count, sorted(edges)
