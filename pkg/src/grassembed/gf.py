"""Finite fields GF(p^e) and injective homomorphisms between them.

Elements are integers ``0 .. p^e - 1``: the base-p digits of an element are
the coefficients of its polynomial representative, lowest degree first.
So in GF(4) with modulus x^2 + x + 1 the element ``2`` is ``x``.
"""

from __future__ import annotations

import itertools
import re
from functools import cached_property

from .errors import FieldError

TABLE_LIMIT = 256  # full add/mul tables up to this order, log tables above
MAX_ORDER = 1 << 16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


# -- dense polynomials over GF(p), coefficient lists lowest degree first ----

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a, m, p):
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _is_irreducible(coeffs_low_first, p):
    """Trial division by every monic polynomial of degree 1..deg/2."""
    e = len(coeffs_low_first) - 1
    for d in range(1, e // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not _polymod(coeffs_low_first, divisor, p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple:
    """Lexicographically smallest monic irreducible of degree e.

    Returned high degree first: ``(1, c_{e-1}, ..., c_0)``.
    """
    for tail in itertools.product(range(p), repeat=e):
        high_first = (1,) + tail
        if _is_irreducible(list(reversed(high_first)), p):
            return high_first
    raise FieldError(f"no irreducible polynomial of degree {e} over GF({p})")


class FieldSpec:
    """The finite field GF(p^e) with a fixed modulus.

    ``modulus`` is given high degree first, ``(1, c_{e-1}, ..., c_0)``,
    matching the textual header ``GF(p^e;c_e,...,c_0)``.
    """

    def __init__(self, p: int, e: int = 1, modulus=None):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if e < 1:
            raise FieldError(f"extension degree must be >= 1, got {e}")
        if p ** e > MAX_ORDER:
            raise FieldError(f"GF({p}^{e}) exceeds the supported order {MAX_ORDER}")
        if modulus is None:
            modulus = smallest_irreducible(p, e)
        modulus = tuple(int(c) for c in modulus)
        if len(modulus) != e + 1:
            raise FieldError(f"modulus must have {e + 1} coefficients, got {len(modulus)}")
        if modulus[0] != 1:
            raise FieldError("modulus must be monic")
        if any(not 0 <= c < p for c in modulus):
            raise FieldError(f"modulus coefficients must lie in 0..{p - 1}")
        if not _is_irreducible(list(reversed(modulus)), p):
            raise FieldError(f"modulus {modulus} is reducible over GF({p})")
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = modulus
        self._build()

    # -- construction ------------------------------------------------------

    def _digits(self, a):
        p = self.p
        out = []
        for _ in range(self.e):
            out.append(a % p)
            a //= p
        return out

    def _undigits(self, ds):
        a = 0
        for d in reversed(ds):
            a = a * self.p + d
        return a

    def _poly_mul(self, a, b):
        p, e = self.p, self.e
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        red = _polymod(prod, list(reversed(self.modulus)), p)
        return self._undigits(red + [0] * (e - len(red)))

    def _build(self):
        q, p = self.q, self.p
        self._neg = [self._undigits([(-d) % p for d in self._digits(a)]) for a in range(q)]
        # a generator of the multiplicative group drives the log tables
        order = q - 1
        factors = [r for r in range(2, order + 1) if order % r == 0 and is_prime(r)]
        prim = None
        for g in range(1, q):
            if all(self._poly_pow(g, order // r) != 1 for r in factors):
                prim = g
                break
        self.primitive = prim
        exp = [1] * (2 * order)
        for i in range(1, 2 * order):
            exp[i] = self._poly_mul(exp[i - 1], prim)
        log = [0] * q
        for i in range(order):
            log[exp[i]] = i
        self._exp, self._log = exp, log
        self._inv = [0] + [exp[(order - log[a]) % order] for a in range(1, q)]
        if q <= TABLE_LIMIT:
            self._add_table = [[self._digit_add(a, b) for b in range(q)] for a in range(q)]
            self._mul_table = [[self._log_mul(a, b) for b in range(q)] for a in range(q)]
        else:
            self._add_table = None
            self._mul_table = None

    def _poly_pow(self, a, n):
        r = 1
        while n:
            if n & 1:
                r = self._poly_mul(r, a)
            a = self._poly_mul(a, a)
            n >>= 1
        return r

    def _digit_add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        return self._undigits([(x + y) % p for x, y in zip(self._digits(a), self._digits(b))])

    def _log_mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    # -- arithmetic --------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._digit_add(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if self._mul_table is not None:
            return self._mul_table[a][b]
        return self._log_mul(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, n: int) -> int:
        if a == 0:
            return 0 if n > 0 else 1
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def frobenius(self, a: int) -> int:
        return self.power(a, self.p)

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def nonzero(self) -> range:
        return range(1, self.q)

    @property
    def generator(self) -> int:
        """The class of x (the polynomial generator); equals ``-c_0`` when e = 1."""
        if self.e == 1:
            return (-self.modulus[1]) % self.p
        return self.p

    def prime_digits(self, a: int) -> list:
        """Coordinates of ``a`` over the prime field, basis 1, x, ..., x^{e-1}."""
        return self._digits(a)

    def evaluate(self, coeffs_high_first, x: int) -> int:
        acc = 0
        for c in coeffs_high_first:
            acc = self.add(self.mul(acc, x), c % self.p)
        return acc

    # -- identity / serialization -----------------------------------------

    def header(self) -> str:
        return f"GF({self.p}^{self.e};{','.join(str(c) for c in self.modulus)})"

    def __repr__(self):
        return self.header()

    def __eq__(self, other):
        return (isinstance(other, FieldSpec) and self.p == other.p
                and self.e == other.e and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.e, self.modulus))

    @cached_property
    def automorphisms(self) -> list:
        return hom_enumerate(self, self)


_FIELD_CACHE: dict = {}

_HEADER_RE = re.compile(r"^\s*GF\(\s*(\d+)\s*\^\s*(\d+)\s*;\s*([\d,\s]+)\)\s*$")


def field_make(p: int, e: int = 1, modulus=None) -> FieldSpec:
    """Build (or fetch from cache) GF(p^e)."""
    key = (p, e, None if modulus is None else tuple(modulus))
    if key not in _FIELD_CACHE:
        _FIELD_CACHE[key] = FieldSpec(p, e, modulus)
    return _FIELD_CACHE[key]


def field_for_order(q: int) -> FieldSpec:
    """Default field of order q (q must be a prime power)."""
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                raise FieldError(f"{q} is not a prime power")
            return field_make(p, e)
    raise FieldError(f"{q} is not a prime power")


def parse_field(text: str) -> FieldSpec:
    m = _HEADER_RE.match(text)
    if not m:
        raise FieldError(f"bad field header {text!r}")
    p, e = int(m.group(1)), int(m.group(2))
    coeffs = tuple(int(c) for c in m.group(3).split(","))
    return field_make(p, e, coeffs)


class FieldHom:
    """An injective homomorphism ``source -> target`` stored as a lookup table."""

    def __init__(self, source: FieldSpec, target: FieldSpec, table):
        self.source = source
        self.target = target
        self.table = tuple(table)
        if len(self.table) != source.q:
            raise FieldError("homomorphism table has the wrong length")

    @classmethod
    def from_generator_image(cls, source: FieldSpec, target: FieldSpec, image: int) -> "FieldHom":
        """The homomorphism sending the class of x to ``image``.

        ``image`` must be a root of the source modulus inside the target.
        """
        if source.p != target.p:
            raise FieldError("fields of different characteristic")
        if target.evaluate(source.modulus, image) != 0:
            raise FieldError(f"{image} is not a root of {source.header()} in {target.header()}")
        powers = [1]
        for _ in range(source.e - 1):
            powers.append(target.mul(powers[-1], image))
        table = []
        for a in range(source.q):
            acc = 0
            for d, pw in zip(source.prime_digits(a), powers):
                if d:
                    acc = target.add(acc, target.mul(d, pw))
            table.append(acc)
        return cls(source, target, table)

    @classmethod
    def identity(cls, field: FieldSpec) -> "FieldHom":
        return cls(field, field, range(field.q))

    @property
    def image_of_generator(self) -> int:
        return self.table[self.source.generator]

    def __call__(self, a: int) -> int:
        return self.table[a]

    def apply(self, a: int) -> int:
        return self.table[a]

    def compose(self, other: "FieldHom") -> "FieldHom":
        """``self ∘ other``: apply ``other`` first."""
        return hom_compose(self, other)

    def is_identity(self) -> bool:
        return self.source == self.target and all(i == v for i, v in enumerate(self.table))

    def is_bijective(self) -> bool:
        return self.source.q == self.target.q

    def image(self) -> frozenset:
        return frozenset(self.table)

    def __eq__(self, other):
        return (isinstance(other, FieldHom) and self.source == other.source
                and self.target == other.target and self.table == other.table)

    def __hash__(self):
        return hash((self.source, self.target, self.table))

    def __repr__(self):
        return f"FieldHom({self.source.header()} -> {self.target.header()}, x -> {self.image_of_generator})"


def hom_enumerate(source: FieldSpec, target: FieldSpec) -> list:
    """All homomorphisms source -> target, ordered by the image of x."""
    if source.p != target.p or target.e % source.e != 0:
        return []
    homs = []
    for r in target.elements:
        if target.evaluate(source.modulus, r) == 0:
            homs.append(FieldHom.from_generator_image(source, target, r))
    return homs


def hom_apply(h: FieldHom, a: int) -> int:
    return h.table[a]


def hom_compose(outer: FieldHom, inner: FieldHom) -> FieldHom:
    """``outer ∘ inner``."""
    if inner.target != outer.source:
        raise FieldError(
            f"cannot compose: {inner.target.header()} is not {outer.source.header()}")
    return FieldHom(inner.source, outer.target, [outer.table[v] for v in inner.table])


def frobenius_hom(field: FieldSpec, power: int = 1) -> FieldHom:
    """The automorphism a -> a^(p^power)."""
    table = list(range(field.q))
    for _ in range(power):
        table = [field.frobenius(v) for v in table]
    return FieldHom(field, field, table)
