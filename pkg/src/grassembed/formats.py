"""Plain-text file formats.

Every format is line oriented; blank lines and ``#`` comments are ignored and
parse errors carry the 1-based line number of the offending line.

Matrix::

    GF(2^2;1,1,1)        (optional; default field of order q otherwise)
    q n_rows n_cols
    <n_rows lines of n_cols element codes>

Semilinear map::

    GF(...)              source field
    GF(...)              target field
    sigma <code>         image of the generator of the source field
    n n'
    <n lines of n' element codes>

Point map (indices in the canonical order of G_1)::

    q n q' n'
    GF(...)
    GF(...)
    i j

Grassmann map (indices in the canonical orders of G_k and G_k')::

    q n k q' n' k'
    GF(...)
    GF(...)
    i j
"""

from __future__ import annotations

from .errors import FieldError, FormatError
from .gf import FieldHom, FieldSpec, field_for_order, parse_field
from .grassmann import GrassmannGraph, GrassmannMap
from .linalg import Matrix
from .semilinear import PointMap, SemilinearMap


def _lines(text: str):
    """(line_number, tokens) for meaningful lines."""
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


class _Reader:
    def __init__(self, text):
        self.items = list(_lines(text))
        self.pos = 0

    def next(self, what):
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 0
            raise FormatError(f"unexpected end of input, expected {what}", last + 1)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else None

    def ints(self, what, count=None):
        no, toks = self.next(what)
        try:
            vals = [int(t) for t in toks]
        except ValueError:
            raise FormatError(f"expected integers for {what}, got {' '.join(toks)!r}", no)
        if count is not None and len(vals) != count:
            raise FormatError(f"expected {count} integers for {what}, got {len(vals)}", no)
        return no, vals

    def field(self, what):
        no, toks = self.next(what)
        try:
            return no, parse_field(" ".join(toks))
        except FieldError as exc:
            raise FormatError(str(exc), no)

    def done(self):
        if self.pos < len(self.items):
            raise FormatError("trailing content", self.items[self.pos][0])


def _check_codes(F: FieldSpec, vals, no):
    for v in vals:
        if not 0 <= v < F.q:
            raise FormatError(f"element code {v} out of range for {F.header()}", no)


def _field_of_order(q, no):
    try:
        return field_for_order(q)
    except FieldError as exc:
        raise FormatError(str(exc), no)


def _check_order(F, q, no):
    if F.q != q:
        raise FormatError(f"field header {F.header()} does not have order {q}", no)


# -- matrices ----------------------------------------------------------------

def write_matrix(M: Matrix) -> str:
    out = [M.field.header(), f"{M.field.q} {M.nrows} {M.ncols}"]
    out += [" ".join(map(str, r)) for r in M.rows]
    return "\n".join(out) + "\n"


def read_matrix(text: str) -> Matrix:
    rd = _Reader(text)
    F = None
    first = rd.peek()
    if first is not None and first[1][0].startswith("GF("):
        _, F = rd.field("field header")
    no, (q, r, c) = rd.ints("matrix header 'q n_rows n_cols'", 3)
    if F is None:
        F = _field_of_order(q, no)
    _check_order(F, q, no)
    rows = []
    for _ in range(r):
        no, vals = rd.ints("matrix row", c)
        _check_codes(F, vals, no)
        rows.append(tuple(vals))
    rd.done()
    return Matrix(F, rows, c)


# -- semilinear maps -------------------------------------------------------------

def write_semilinear(l: SemilinearMap) -> str:
    out = [l.source.header(), l.target.header(), f"sigma {l.sigma.image_of_generator}",
           f"{l.n} {l.n_target}"]
    out += [" ".join(map(str, r)) for r in l.rows]
    return "\n".join(out) + "\n"


def read_semilinear(text: str) -> SemilinearMap:
    rd = _Reader(text)
    _, F = rd.field("source field header")
    _, Fp = rd.field("target field header")
    no, toks = rd.next("'sigma <code>'")
    if len(toks) != 2 or toks[0] != "sigma" or not toks[1].isdigit():
        raise FormatError("expected 'sigma <code>'", no)
    code = int(toks[1])
    _check_codes(Fp, [code], no)
    try:
        sigma = FieldHom.from_generator_image(F, Fp, code)
    except FieldError as exc:
        raise FormatError(str(exc), no)
    no, (n, m) = rd.ints("dimensions 'n n''", 2)
    rows = []
    for _ in range(n):
        no, vals = rd.ints("matrix row", m)
        _check_codes(Fp, vals, no)
        rows.append(tuple(vals))
    rd.done()
    return SemilinearMap(sigma, rows, m)


# -- index tables ---------------------------------------------------------------

def _read_pairs(rd, size, target_size):
    table = [None] * size
    while rd.peek() is not None:
        no, (i, j) = rd.ints("index pair 'i j'", 2)
        if not 0 <= i < size:
            raise FormatError(f"domain index {i} out of range 0..{size - 1}", no)
        if not 0 <= j < target_size:
            raise FormatError(f"codomain index {j} out of range 0..{target_size - 1}", no)
        if table[i] is not None:
            raise FormatError(f"domain index {i} listed twice", no)
        table[i] = j
    missing = [i for i, t in enumerate(table) if t is None]
    if missing:
        last = rd.items[-1][0] if rd.items else 0
        raise FormatError(f"table is not total: index {missing[0]} has no image", last)
    return table


def write_pointmap(g: PointMap) -> str:
    out = [f"{g.source.q} {g.domain.n} {g.target.q} {g.codomain.n}",
           g.source.header(), g.target.header()]
    out += [f"{i} {j}" for i, j in enumerate(g.table)]
    return "\n".join(out) + "\n"


def read_pointmap(text: str) -> PointMap:
    rd = _Reader(text)
    no, (q, n, q2, n2) = rd.ints("header 'q n q' n''", 4)
    no1, F = rd.field("source field header")
    _check_order(F, q, no1)
    no2, Fp = rd.field("target field header")
    _check_order(Fp, q2, no2)
    src = GrassmannGraph(F, n, 1)
    tgt = GrassmannGraph(Fp, n2, 1)
    table = _read_pairs(rd, src.order, tgt.order)
    return PointMap(F, n, Fp, n2, table)


def write_emb(f: GrassmannMap) -> str:
    d, c = f.domain, f.codomain
    out = [f"{d.q} {d.n} {d.k} {c.q} {c.n} {c.k}", d.field.header(), c.field.header()]
    out += [f"{i} {j}" for i, j in enumerate(f.table)]
    return "\n".join(out) + "\n"


def read_emb(text: str) -> GrassmannMap:
    rd = _Reader(text)
    no, (q, n, k, q2, n2, k2) = rd.ints("header 'q n k q' n' k''", 6)
    for nn, kk in ((n, k), (n2, k2)):
        if not 0 <= kk <= nn or nn < 1:
            raise FormatError(f"invalid grade k={kk} for n={nn}", no)
    no1, F = rd.field("domain field header")
    _check_order(F, q, no1)
    no2, Fp = rd.field("codomain field header")
    _check_order(Fp, q2, no2)
    dom = GrassmannGraph(F, n, k)
    cod = GrassmannGraph(Fp, n2, k2)
    table = _read_pairs(rd, dom.order, cod.order)
    return GrassmannMap(dom, cod, table)
