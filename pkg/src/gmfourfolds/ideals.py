"""Ideals: Groebner caches, elimination, saturation, quotients, Hilbert data.

Every projective scheme in the pipeline is carried as an Ideal.  The
Hilbert series is computed from the lead-term ideal of a Groebner basis
by the pivot recursion on monomial ideals; dimension and degree fall out
of the numerator.
"""

from __future__ import annotations

import json
import random
from functools import lru_cache
from typing import Iterable, Sequence

from .budget import Budget, FREE
from .groebner import (
    ModuleContext,
    buchberger,
    groebner_basis,
    ideal_context,
    module_kernel,
    normal_form,
)
from .ring import PolyRing, Polynomial, PrimeField


class Ideal:
    """A finitely generated ideal with cached Groebner/Hilbert data.

    The cache belongs to the generator tuple: any operation producing new
    generators returns a new Ideal.
    """

    def __init__(self, ring: PolyRing, gens: Iterable[Polynomial]):
        self.ring = ring
        seen = set()
        gs = []
        for g in gens:
            if g is None or not g:
                continue
            if g.ring != ring:
                raise ValueError("generator from a different ring")
            if g.terms in seen:
                continue
            seen.add(g.terms)
            gs.append(g)
        self.gens = tuple(gs)
        self._gb: list[Polynomial] | None = None
        self._hs = None

    # -- basics ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.gens

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.gens)

    def groebner(self, budget: Budget = FREE) -> list[Polynomial]:
        if self._gb is None:
            self._gb = groebner_basis(list(self.gens), budget)
        return self._gb

    def normal_form(self, f: Polynomial, budget: Budget = FREE) -> Polynomial:
        return normal_form(f, self.groebner(budget), budget)

    def contains(self, f: Polynomial, budget: Budget = FREE) -> bool:
        return not self.normal_form(f, budget)

    def contains_ideal(self, other: "Ideal", budget: Budget = FREE) -> bool:
        return all(self.contains(g, budget) for g in other.gens)

    def is_one(self, budget: Budget = FREE) -> bool:
        gb = self.groebner(budget)
        return len(gb) == 1 and gb[0].degree() == 0

    def __add__(self, other: "Ideal") -> "Ideal":
        if other.ring != self.ring:
            raise ValueError("ring mismatch")
        return Ideal(self.ring, self.gens + other.gens)

    def __mul__(self, other: "Ideal") -> "Ideal":
        return Ideal(self.ring, [f * g for f in self.gens for g in other.gens])

    def degree_piece(self, d: int):
        """Basis (as coefficient rows) of the degree-d piece of the ideal,
        together with the ordered monomial keys of the ambient space."""
        import numpy as np

        ring = self.ring
        keys = ring.monomials_of_degree(d)
        pos = {k: i for i, k in enumerate(keys)}
        rows = []
        for g in self.gens:
            dg = g.degree()
            if dg > d or not g.is_homogeneous():
                continue
            for mk in ring.monomials_of_degree(d - dg):
                row = [0] * len(keys)
                for k, c in g.terms:
                    row[pos[k + mk]] = c
                rows.append(row)
        from .linalg import as_matrix, rref

        if not rows:
            return np.zeros((0, len(keys)), dtype=np.int64), keys
        m, _ = rref(as_matrix(rows, ring.field.p), ring.field.p)
        return m, keys

    def dim_degree_piece(self, d: int) -> int:
        m, _ = self.degree_piece(d)
        return m.shape[0]

    # -- elimination ------------------------------------------------------------

    def eliminate(self, k: int, budget: Budget = FREE) -> "Ideal":
        """Intersect with the subring dropping the first k variables.

        The ideal is moved into a block order eliminating those variables,
        a basis is computed, and the generators free of them are returned
        as an ideal of the smaller ring.
        """
        ring = self.ring
        if k >= ring.n:
            raise ValueError("cannot eliminate all variables")
        blk = ring.with_order(("block", k))
        moved = [transfer(g, blk) for g in self.gens]
        gb = groebner_basis(moved, budget)
        small = ring.subring(ring.names[k:])
        out = []
        for g in gb:
            keep = True
            polys = []
            for key, c in g.terms:
                e = blk.decode(key)
                if any(e[:k]):
                    keep = False
                    break
                polys.append((small.encode(e[k:]), c))
            if keep:
                polys.sort(reverse=True)
                out.append(Polynomial(small, tuple(polys)))
        return Ideal(small, out)

    # -- quotients and saturation -------------------------------------------------

    def quotient(self, other: "Ideal", budget: Budget = FREE) -> "Ideal":
        """Ideal quotient (self : other)."""
        result = None
        for g in other.gens:
            q = self._quotient_single(g, budget)
            result = q if result is None else result.intersect(q, budget)
        if result is None:
            return Ideal(self.ring, [self.ring.one])
        return result

    def _quotient_single(self, g: Polynomial, budget: Budget = FREE) -> "Ideal":
        """(self : g) via syzygies of [gens, g]."""
        ring = self.ring
        cols = list(self.gens) + [g]
        ctx = ideal_context(ring)
        packed = [ctx.vector([f]) for f in cols]
        twists = [f.degree() for f in cols]
        kern, src = module_kernel(packed, ctx, twists, budget)
        out = []
        for vec in kern:
            comps = src.unpack(vec)
            if comps[-1]:
                out.append(comps[-1].monic())
        return Ideal(ring, out)

    def intersect(self, other: "Ideal", budget: Budget = FREE) -> "Ideal":
        """Intersection via the kernel of R -> R/self + R/other."""
        ring = self.ring
        ctx = ModuleContext(ring, 2)
        cols = [ctx.vector([ring.one, ring.one])]
        for f in self.gens:
            cols.append(ctx.vector([f, None]))
        for f in other.gens:
            cols.append(ctx.vector([None, f]))
        twists = [0] + [f.degree() for f in self.gens] + [f.degree() for f in other.gens]
        kern, src = module_kernel(cols, ctx, twists, budget)
        out = []
        for vec in kern:
            comps = src.unpack(vec)
            if comps[0]:
                out.append(comps[0])
        return Ideal(ring, out)

    def saturate(self, other: "Ideal", budget: Budget = FREE, max_rounds: int = 50) -> "Ideal":
        """Saturation (self : other^infty) by iterated quotients."""
        cur = self
        for _ in range(max_rounds):
            nxt = cur.quotient(other, budget)
            if equal_ideals(nxt, cur, budget):
                return cur
            cur = nxt
        raise RuntimeError("saturation did not stabilize")

    def saturate_variable(self, i: int, budget: Budget = FREE) -> "Ideal":
        """(self : x_i^infty) for homogeneous self, by the reverse-lex trick.

        In degrevlex with x_i moved last, dividing every basis element by
        its maximal x_i power generates the saturation.
        """
        ring = self.ring
        perm = [j for j in range(ring.n) if j != i] + [i]
        permuted = ring.subring([ring.names[j] for j in perm])
        inv = [0] * ring.n
        for pos, j in enumerate(perm):
            inv[j] = pos
        moved = []
        for g in self.gens:
            d = {}
            for key, c in g.terms:
                e = ring.decode(key)
                d[tuple(e[j] for j in perm)] = c
            moved.append(permuted.from_dict(d))
        gb = groebner_basis(moved, budget)
        out = []
        for g in gb:
            shift = min(permuted.decode(k)[-1] for k, _ in g.terms)
            d = {}
            for key, c in g.terms:
                e = list(permuted.decode(key))
                e[-1] -= shift
                d[tuple(e[inv[j]] for j in range(ring.n))] = c
            out.append(ring.from_dict(d))
        return Ideal(ring, out)

    def saturate_irrelevant(self, rng: random.Random | None = None, check: bool = False,
                            budget: Budget = FREE) -> "Ideal":
        """Saturation with respect to the irrelevant maximal ideal.

        Uses a random linear change of coordinates so the last variable is
        a general linear form, then a single reverse-lex saturation; with
        check=True two independent draws must agree.
        """
        rng = rng or random.Random(17)
        first = self._saturate_general_linear(rng, budget)
        if check:
            second = self._saturate_general_linear(rng, budget)
            if not equal_ideals(first, second, budget):
                third = self._saturate_general_linear(rng, budget)
                for cand in (first, second):
                    if equal_ideals(cand, third, budget):
                        return cand
                raise RuntimeError("irrelevant saturation draws disagree")
        return first

    def _saturate_general_linear(self, rng: random.Random, budget: Budget) -> "Ideal":
        ring = self.ring
        n = ring.n
        coeffs = [rng.randrange(1, ring.field.p) for _ in range(n - 1)]
        gens = ring.gens()
        # x_last -> x_last - sum c_j x_j, an invertible triangular substitution
        images = list(gens[:-1]) + [gens[-1] - ring.linear_form(coeffs + [0])]
        moved = [g.substitute(ring, images) for g in self.gens]
        sat = Ideal(ring, moved).saturate_variable(n - 1, budget)
        back = list(gens[:-1]) + [gens[-1] + ring.linear_form(coeffs + [0])]
        return Ideal(ring, [g.substitute(ring, back) for g in sat.gens])

    # -- Hilbert data ---------------------------------------------------------------

    def hilbert_numerator(self, budget: Budget = FREE) -> list[int]:
        """Numerator of the Hilbert series over (1-t)^n, as coefficients."""
        if self._hs is not None:
            return self._hs
        for g in self.gens:
            if not g.is_homogeneous():
                raise ValueError("Hilbert series needs a homogeneous ideal")
        gb = self.groebner(budget)
        ring = self.ring
        leads = [g.lead_exps() for g in gb]
        self._hs = monomial_hilbert_numerator(tuple(map(tuple, leads)), ring.n)
        return self._hs

    def hilbert_function(self, d: int, budget: Budget = FREE) -> int:
        """dim_k (R/I)_d."""
        if d < 0:
            return 0
        num = self.hilbert_numerator(budget)
        return series_coefficient(num, self.ring.n, d)

    def hilbert_polynomial(self, budget: Budget = FREE) -> list:
        """Coefficients [c0, c1, ...] of the Hilbert polynomial in t."""
        num = self.hilbert_numerator(budget)
        q, d0 = strip_ones(num)
        dim_plus_1 = self.ring.n - d0
        if dim_plus_1 <= 0:
            return []
        from fractions import Fraction

        # HP(t) = sum_j q_j * C(t - j + m - 1, m - 1) with m = dim_plus_1
        m = dim_plus_1
        coeffs = [Fraction(0)] * m
        for j, qq in enumerate(q):
            if qq == 0:
                continue
            poly = [Fraction(1)]
            for i in range(1, m):
                poly = poly_mul_frac(poly, [Fraction(m - 1 - j - (i - 1), 1), Fraction(1)])
            fact = Fraction(1)
            for i in range(1, m):
                fact *= i
            poly = [c / fact * qq for c in poly]
            for i, c in enumerate(poly):
                coeffs[i] += c
        out = []
        for c in coeffs:
            if c.denominator == 1:
                out.append(int(c))
            else:
                out.append(c)
        return out

    def hilbert_polynomial_value(self, d: int, budget: Budget = FREE):
        hp = self.hilbert_polynomial(budget)
        val = 0
        for i, c in enumerate(hp):
            val += c * d**i
        return int(val)

    def dim_degree(self, budget: Budget = FREE) -> tuple[int, int]:
        """(projective dimension, degree); (-1, 0) for irrelevant-empty."""
        if not self.gens:
            return self.ring.n - 1, 1
        num = self.hilbert_numerator(budget)
        if not any(num):
            return -1, 0
        q, d0 = strip_ones(num)
        krull = self.ring.n - d0
        if krull <= 0:
            return -1, 0
        return krull - 1, sum(q)

    # -- serialization -----------------------------------------------------------------

    def to_json(self) -> dict:
        order = self.ring.order
        return {
            "ring": {
                "prime": self.ring.field.p,
                "vars": list(self.ring.names),
                "order": list(order) if isinstance(order, tuple) else order,
            },
            "polys": [poly_to_json(g) for g in self.gens],
        }

    @staticmethod
    def from_json(data: dict) -> "Ideal":
        ring = ring_from_json(data["ring"])
        return Ideal(ring, [poly_from_json(ring, p) for p in data["polys"]])

    def __repr__(self):
        return f"Ideal({len(self.gens)} gens in {self.ring!r})"


# -- helpers ------------------------------------------------------------------


def transfer(f: Polynomial, target: PolyRing) -> Polynomial:
    """Move f to a ring with the same variables but another order."""
    if target.names != f.ring.names or target.field != f.ring.field:
        raise ValueError("transfer needs identical variables")
    d = {}
    for k, c in f.terms:
        d[f.ring.decode(k)] = c
    return target.from_dict(d)


def equal_ideals(a: Ideal, b: Ideal, budget: Budget = FREE) -> bool:
    ga = a.groebner(budget)
    gb = b.groebner(budget)
    if len(ga) != len(gb):
        return False
    return all(x.terms == y.terms for x, y in zip(ga, gb))


def poly_to_json(g: Polynomial) -> list:
    return [[c, list(g.ring.decode(k))] for k, c in g.terms]


def poly_from_json(ring: PolyRing, data: list) -> Polynomial:
    d = {}
    for c, exps in data:
        d[tuple(exps)] = c
    return ring.from_dict(d)


def ring_from_json(data: dict) -> PolyRing:
    order = data["order"]
    if isinstance(order, list):
        order = tuple(order)
    return PolyRing(PrimeField(data["prime"]), data["vars"], order)


# -- monomial-ideal Hilbert series ----------------------------------------------


def monomial_hilbert_numerator(gens: tuple, n: int) -> list[int]:
    """Numerator of the Hilbert series of R/(monomial ideal).

    gens is a tuple of exponent tuples; the recursion picks a pivot
    variable power, splitting along 0 -> R/(I:p)(-deg p) -> R/I -> R/(I+p) -> 0.
    """
    gens = _minimalize(gens)
    return list(_hilbnum(gens, n))


def _minimalize(gens) -> tuple:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out = []
    for e in gens:
        if not any(_dividesT(f, e) for f in out):
            out.append(e)
    return tuple(out)


def _dividesT(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


@lru_cache(maxsize=1 << 18)
def _hilbnum(gens: tuple, n: int) -> tuple:
    if not gens:
        return (1,)
    if any(sum(e) == 0 for e in gens):
        return (0,)
    # split variables into connected components to multiply numerators
    comp = _components(gens, n)
    if len(comp) > 1:
        result = (1,)
        for sub in comp:
            result = _polymul(result, _hilbnum(sub, n))
        return result
    # single generator
    if len(gens) == 1:
        d = sum(gens[0])
        out = [0] * (d + 1)
        out[0] = 1
        out[d] = -1
        return tuple(out)
    # all pure powers and pairwise coprime supports are handled by the
    # component split; pick a pivot variable occurring most often
    counts = [0] * n
    for e in gens:
        for i, ei in enumerate(e):
            if ei:
                counts[i] += 1
    piv = max(range(n), key=lambda i: counts[i])
    # pivot monomial: x_piv
    plus = []
    for e in gens:
        if e[piv] == 0:
            plus.append(e)
    plus.append(tuple(1 if i == piv else 0 for i in range(n)))
    colon = []
    for e in gens:
        if e[piv] > 0:
            f = list(e)
            f[piv] -= 1
            colon.append(tuple(f))
        else:
            colon.append(e)
    a = _hilbnum(_minimalize(tuple(plus)), n)
    b = _hilbnum(_minimalize(tuple(colon)), n)
    return tuple(_polyadd(a, _polyshift(b, 1)))


def _components(gens, n):
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i, j):
        parent[find(i)] = find(j)

    for e in gens:
        sup = [i for i, ei in enumerate(e) if ei]
        for i in sup[1:]:
            union(sup[0], i)
    groups: dict[int, list] = {}
    for e in gens:
        sup = [i for i, ei in enumerate(e) if ei]
        groups.setdefault(find(sup[0]), []).append(e)
    return [tuple(v) for v in groups.values()]


def _polymul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return tuple(out)


def _polyadd(a, b):
    la, lb = len(a), len(b)
    out = [0] * max(la, lb)
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    while out and out[-1] == 0:
        out.pop()
    return tuple(out) if out else (0,)


def _polyshift(a, k):
    return tuple([0] * k + list(a))


def strip_ones(num: list[int]) -> tuple[list[int], int]:
    """Divide the numerator by (1-t) as often as possible."""
    q = list(num)
    d0 = 0
    while q and sum(q) == 0:
        # divide by (1 - t): synthetic division
        out = []
        acc = 0
        for c in q[:-1]:
            acc += c
            out.append(acc)
        q = out if out else [0]
        while q and q[-1] == 0:
            q.pop()
        if not q:
            q = [0]
        d0 += 1
        if q == [0]:
            break
    return q, d0


def series_coefficient(num: list[int], n: int, d: int) -> int:
    """Coefficient of t^d in num(t) / (1-t)^n."""
    if d < 0:
        return 0
    from math import comb

    total = 0
    for j, c in enumerate(num):
        if c and j <= d:
            total += c * comb(d - j + n - 1, n - 1)
    return total


def poly_mul_frac(a, b):
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out
