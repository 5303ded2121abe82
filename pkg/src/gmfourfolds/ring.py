"""Sparse multivariate polynomials over a prime field.

Monomials are packed into single Python integers whose natural ordering
agrees with the ring's monomial order, and whose addition implements
monomial multiplication.  With W bits per exponent and n variables:

  degrevlex   key = deg * B**n - rev,   rev = sum_i e_i * B**i
  lex         key = sum_i e_i * B**(n-1-i)
  block(k)    key = drl(e[:k]) * B**(n-k+1) + drl(e[k:])

where B = 2**W.  All three keys are additive under multiplication, so a
polynomial is just a list of (key, coeff) pairs sorted by descending key,
and multiplying by a monomial is adding a constant to every key.

Polynomials are immutable; coefficients are ints in [1, p).
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

WIDTH = 16
BASE = 1 << WIDTH


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """Arithmetic in Z/p for a prime p (default 65521)."""

    __slots__ = ("p", "_inv_cache")

    def __init__(self, p: int = 65521):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self._inv_cache: dict[int, int] = {}

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in prime field")
        r = self._inv_cache.get(a)
        if r is None:
            r = pow(a, self.p - 2, self.p)
            if len(self._inv_cache) < 1 << 16:
                self._inv_cache[a] = r
        return r

    def random(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def random_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class PolyRing:
    """A polynomial ring over a prime field with a fixed monomial order.

    order is "degrevlex", "lex", or ("block", k) which eliminates the
    first k variables (degrevlex inside each block).  The standard
    grading (all weights 1) is used throughout.
    """

    def __init__(self, field: PrimeField, names: Sequence[str], order="degrevlex"):
        self.field = field
        self.names = tuple(names)
        self.n = len(self.names)
        if self.n == 0:
            raise ValueError("need at least one variable")
        if len(set(self.names)) != self.n:
            raise ValueError("duplicate variable names")
        self.order = order if not isinstance(order, list) else tuple(order)
        self._decode_cache: dict[int, tuple] = {}
        if self.order == "degrevlex":
            self._block = None
        elif self.order == "lex":
            self._block = None
        elif isinstance(self.order, tuple) and self.order[0] == "block":
            k = self.order[1]
            if not 0 < k < self.n:
                raise ValueError("block split must be strictly inside the variables")
            self._block = k
        else:
            raise ValueError(f"unknown monomial order: {order!r}")
        # conservative upper bound on key bit size, used by module layers
        self.key_bits = WIDTH * (self.n + 2) + 8
        self._one_terms = ((0, 1),)

    # -- monomial packing -------------------------------------------------

    def encode(self, exps: Sequence[int]) -> int:
        if len(exps) != self.n:
            raise ValueError("wrong exponent vector length")
        o = self.order
        if o == "degrevlex":
            return self._drl(exps)
        if o == "lex":
            key = 0
            for e in exps:
                key = (key << WIDTH) | e
            return key
        k = self._block
        hi = self._drl_of(exps[:k])
        lo = self._drl_of(exps[k:])
        return hi * (BASE ** (self.n - k + 1)) + lo

    def _drl(self, exps) -> int:
        return self._drl_of(exps)

    @staticmethod
    def _drl_of(exps) -> int:
        deg = 0
        rev = 0
        shift = 0
        for e in exps:
            deg += e
            rev += e << shift
            shift += WIDTH
        return (deg << shift) - rev

    def decode(self, key: int) -> tuple:
        """Exponent tuple of a packed monomial key."""
        t = self._decode_cache.get(key)
        if t is not None:
            return t
        o = self.order
        if o == "degrevlex":
            t = self._decode_drl(key, self.n)
        elif o == "lex":
            exps = []
            k = key
            for _ in range(self.n):
                exps.append(k & (BASE - 1))
                k >>= WIDTH
            t = tuple(reversed(exps))
        else:
            kk = self._block
            m2 = self.n - kk
            hi, lo = divmod(key, BASE ** (m2 + 1))
            t = self._decode_drl(hi, kk) + self._decode_drl(lo, m2)
        if len(self._decode_cache) < 1 << 20:
            self._decode_cache[key] = t
        return t

    @staticmethod
    def _decode_drl(key: int, m: int) -> tuple:
        if key == 0:
            return (0,) * m
        q, r = divmod(key, BASE ** m)
        if r == 0:
            rev = 0
        else:
            q += 1
            rev = BASE ** m - r
        exps = []
        for _ in range(m):
            exps.append(rev & (BASE - 1))
            rev >>= WIDTH
        return tuple(exps)

    def key_degree(self, key: int) -> int:
        o = self.order
        if o == "degrevlex":
            q, r = divmod(key, BASE ** self.n)
            return q if r == 0 else q + 1
        return sum(self.decode(key))

    def key_divides(self, ka: int, kb: int) -> bool:
        """Does monomial ka divide monomial kb."""
        ea, eb = self.decode(ka), self.decode(kb)
        for x, y in zip(ea, eb):
            if x > y:
                return False
        return True

    def key_div(self, kb: int, ka: int) -> int:
        """Key of mono(kb)/mono(ka); caller guarantees divisibility."""
        return kb - ka

    def key_lcm(self, ka: int, kb: int) -> int:
        ea, eb = self.decode(ka), self.decode(kb)
        return self.encode(tuple(max(x, y) for x, y in zip(ea, eb)))

    # -- element construction ---------------------------------------------

    @property
    def zero(self) -> "Polynomial":
        return Polynomial(self, ())

    @property
    def one(self) -> "Polynomial":
        return Polynomial(self, self._one_terms)

    def var(self, i: int) -> "Polynomial":
        exps = [0] * self.n
        exps[i] = 1
        return Polynomial(self, ((self.encode(exps), 1),))

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.n)]

    def monomial(self, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        c = coeff % self.field.p
        if c == 0:
            return self.zero
        return Polynomial(self, ((self.encode(exps), c),))

    def from_dict(self, d: dict) -> "Polynomial":
        p = self.field.p
        terms = []
        for exps, c in d.items():
            c %= p
            if c:
                terms.append((self.encode(exps), c))
        terms.sort(reverse=True)
        return Polynomial(self, tuple(terms))

    def constant(self, c: int) -> "Polynomial":
        c %= self.field.p
        return Polynomial(self, ((0, c),) if c else ())

    def linear_form(self, coeffs: Sequence[int]) -> "Polynomial":
        d = {}
        for i, c in enumerate(coeffs):
            if c % self.field.p:
                e = [0] * self.n
                e[i] = 1
                d[tuple(e)] = c
        return self.from_dict(d)

    def random_poly(self, deg: int, rng: random.Random, homogeneous=True) -> "Polynomial":
        from itertools import combinations_with_replacement

        d = {}
        degs = [deg] if homogeneous else range(deg + 1)
        for dd in degs:
            for combo in combinations_with_replacement(range(self.n), dd):
                e = [0] * self.n
                for i in combo:
                    e[i] += 1
                d[tuple(e)] = rng.randrange(self.field.p)
        return self.from_dict(d)

    def monomials_of_degree(self, deg: int) -> list[int]:
        """All monomial keys of total degree deg, sorted descending."""
        from itertools import combinations_with_replacement

        keys = []
        for combo in combinations_with_replacement(range(self.n), deg):
            e = [0] * self.n
            for i in combo:
                e[i] += 1
            keys.append(self.encode(e))
        keys.sort(reverse=True)
        return keys

    # -- ring maps ----------------------------------------------------------

    def with_order(self, order) -> "PolyRing":
        return PolyRing(self.field, self.names, order)

    def subring(self, names: Sequence[str], order="degrevlex") -> "PolyRing":
        return PolyRing(self.field, names, order)

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and other.field == self.field
            and other.names == self.names
            and other.order == self.order
        )

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    def __repr__(self):
        return f"GF({self.field.p})[{', '.join(self.names)}; {self.order}]"


class Polynomial:
    """Immutable sparse polynomial: (key, coeff) terms, descending keys."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def lead_key(self) -> int:
        return self.terms[0][0]

    def lead_coeff(self) -> int:
        return self.terms[0][1]

    def lead_exps(self) -> tuple:
        return self.ring.decode(self.terms[0][0])

    def degree(self) -> int:
        """Total degree (-1 for the zero polynomial)."""
        if not self.terms:
            return -1
        kd = self.ring.key_degree
        return max(kd(k) for k, _ in self.terms)

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        kd = self.ring.key_degree
        d0 = kd(self.terms[0][0])
        return all(kd(k) == d0 for k, _ in self.terms)

    def coeff_of(self, exps: Sequence[int]) -> int:
        key = self.ring.encode(exps)
        for k, c in self.terms:
            if k == key:
                return c
        return 0

    def as_dict(self) -> dict:
        dec = self.ring.decode
        return {dec(k): c for k, c in self.terms}

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        return Polynomial(self.ring, add_terms(self.terms, other.terms, self.ring.field.p))

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        p = self.ring.field.p
        return Polynomial(self.ring, tuple((k, p - c) for k, c in self.terms))

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = self.ring.constant(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = other % self.ring.field.p
            return self.scale(c)
        p = self.ring.field.p
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ring.zero
        if len(a) == 1:
            k, c = a[0]
            return Polynomial(self.ring, shift_scale(b, k, c, p))
        if len(b) == 1:
            k, c = b[0]
            return Polynomial(self.ring, shift_scale(a, k, c, p))
        acc: dict[int, int] = {}
        for k1, c1 in a:
            for k2, c2 in b:
                k = k1 + k2
                acc[k] = (acc.get(k, 0) + c1 * c2) % p
        terms = sorted(((k, c) for k, c in acc.items() if c), reverse=True)
        return Polynomial(self.ring, tuple(terms))

    def __rmul__(self, other):
        return self.__mul__(other)

    def scale(self, c: int) -> "Polynomial":
        p = self.ring.field.p
        c %= p
        if c == 0:
            return self.ring.zero
        if c == 1:
            return self
        return Polynomial(self.ring, tuple((k, (c * cf) % p) for k, cf in self.terms))

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(self.ring.field.inv(self.terms[0][1]))

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power")
        result = self.ring.one
        base = self
        while e:
            if e & 1:
                result = result * base
            base2 = base * base if e > 1 else base
            base = base2
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((id(self.ring), self.terms))

    # -- calculus / evaluation ---------------------------------------------

    def derivative(self, i: int) -> "Polynomial":
        ring = self.ring
        p = ring.field.p
        d = {}
        for k, c in self.terms:
            e = ring.decode(k)
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            cc = (c * e[i]) % p
            if cc:
                d[tuple(ne)] = (d.get(tuple(ne), 0) + cc) % p
        return ring.from_dict(d)

    def evaluate(self, point: Sequence[int]) -> int:
        """Value at a point (full substitution of all variables)."""
        ring = self.ring
        p = ring.field.p
        total = 0
        for k, c in self.terms:
            e = ring.decode(k)
            v = c
            for xi, ei in zip(point, e):
                if ei:
                    v = v * pow(xi, ei, p) % p
            total = (total + v) % p
        return total

    def substitute(self, target_ring: PolyRing, images: Sequence["Polynomial"]) -> "Polynomial":
        """Ring map sending variable i to images[i] (a target polynomial)."""
        if len(images) != self.ring.n:
            raise ValueError("need one image per variable")
        cache: dict[tuple[int, int], Polynomial] = {}

        def power(i: int, e: int) -> Polynomial:
            r = cache.get((i, e))
            if r is None:
                r = images[i] ** e
                cache[(i, e)] = r
            return r

        result = target_ring.zero
        for k, c in self.terms:
            e = self.ring.decode(k)
            term = target_ring.constant(c)
            for i, ei in enumerate(e):
                if ei:
                    term = term * power(i, ei)
            result = result + term
        return result

    # -- display ------------------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        names = self.ring.names
        chunks = []
        for k, c in self.terms:
            e = self.ring.decode(k)
            parts = []
            for nm, ei in zip(names, e):
                if ei == 1:
                    parts.append(nm)
                elif ei > 1:
                    parts.append(f"{nm}^{ei}")
            if not parts:
                chunks.append(str(c))
            elif c == 1:
                chunks.append("*".join(parts))
            else:
                chunks.append(f"{c}*" + "*".join(parts))
        return " + ".join(chunks)


# -- term list kernels (hot path helpers) -----------------------------------


def shift_scale(terms: tuple, key_offset: int, c: int, p: int) -> tuple:
    """c * monomial(key_offset) * terms; key addition preserves order."""
    return tuple((k + key_offset, (c * cf) % p) for k, cf in terms)


def add_terms(a, b, p: int) -> tuple:
    """Merge-add two descending term lists."""
    if not a:
        return tuple(b)
    if not b:
        return tuple(a)
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ka, ca = a[i]
        kb, cb = b[j]
        if ka > kb:
            out.append(a[i])
            i += 1
        elif ka < kb:
            out.append(b[j])
            j += 1
        else:
            c = (ca + cb) % p
            if c:
                out.append((ka, c))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def sub_mul_terms(f, g, key_offset: int, c: int, p: int) -> tuple:
    """f - c * monomial(key_offset) * g as descending term lists."""
    out = []
    i = j = 0
    lf, lg = len(f), len(g)
    while i < lf and j < lg:
        kf, cf = f[i]
        kg = g[j][0] + key_offset
        if kf > kg:
            out.append(f[i])
            i += 1
        elif kf < kg:
            cc = (-c * g[j][1]) % p
            if cc:
                out.append((kg, cc))
            j += 1
        else:
            cc = (cf - c * g[j][1]) % p
            if cc:
                out.append((kf, cc))
            i += 1
            j += 1
    if i < lf:
        out.extend(f[i:])
    while j < lg:
        kg, cg = g[j]
        cc = (-c * cg) % p
        if cc:
            out.append((kg + key_offset, cc))
        j += 1
    return tuple(out)
