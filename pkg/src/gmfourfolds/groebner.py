"""Buchberger engine for ideals and submodules of free modules.

A vector in a free module F = sum_c R(-a_c) is stored exactly like a
polynomial: a descending tuple of (key, coeff) where the key packs
(elimination priority, twist-adjusted monomial key, component).  Since
multiplying by a ring monomial shifts every key by the same amount, all
the term-merge kernels from ring.py apply unchanged.

The pair queue uses the sugar strategy; pair elimination uses the
Gebauer-Moeller chain criteria (the coprime criterion is applied only in
the ideal case, where it is valid).
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence

from .budget import Budget, BudgetExceededError, FREE
from .ring import BASE, PolyRing, Polynomial, add_terms, shift_scale, sub_mul_terms


class ModuleContext:
    """Packs (component, monomial) pairs into ordered integer keys.

    twists[c] is the generator degree of component c; the twist is folded
    into the degree field of the monomial key so that key comparison is
    compatible with the grading.  Components with prio 1 dominate all
    prio-0 components (used to eliminate a block of components when
    computing kernels).
    """

    __slots__ = ("ring", "ncomps", "twists", "prios", "CB", "PB", "_off", "_deg_cache")

    def __init__(self, ring: PolyRing, ncomps: int, twists=None, prios=None):
        self.ring = ring
        self.ncomps = ncomps
        self.twists = tuple(twists) if twists is not None else (0,) * ncomps
        self.prios = tuple(prios) if prios is not None else (0,) * ncomps
        if len(self.twists) != ncomps or len(self.prios) != ncomps:
            raise ValueError("twist/prio length mismatch")
        self._off = -min(0, min(self.twists, default=0))
        comp_bits = max(ncomps + 1, 2).bit_length() + 1
        self.CB = 1 << comp_bits
        self.PB = self.CB << (ring.key_bits + WIDTH_PAD)
        self._deg_cache: dict[int, int] = {}

    def key(self, comp: int, monkey: int) -> int:
        tw = (self.twists[comp] + self._off) * (BASE ** self.ring.n)
        return self.prios[comp] * self.PB + (monkey + tw) * self.CB + (self.ncomps - comp)

    def decomp(self, mkey: int) -> tuple[int, int]:
        body = mkey % self.PB
        monkey_tw, crank = divmod(body, self.CB)
        comp = self.ncomps - crank
        monkey = monkey_tw - (self.twists[comp] + self._off) * (BASE ** self.ring.n)
        return comp, monkey

    def term_degree(self, mkey: int) -> int:
        d = self._deg_cache.get(mkey)
        if d is None:
            comp, monkey = self.decomp(mkey)
            d = self.ring.key_degree(monkey) + self.twists[comp]
            if len(self._deg_cache) < 1 << 20:
                self._deg_cache[mkey] = d
        return d

    def unit(self, comp: int, coeff: int = 1):
        return ((self.key(comp, 0), coeff),)

    def vector(self, polys: Sequence[Polynomial]):
        """Pack a tuple of polynomials (one per component) into a vector."""
        p = self.ring.field.p
        terms = []
        for c, poly in enumerate(polys):
            if poly is None or not poly:
                continue
            for k, cf in poly.terms:
                terms.append((self.key(c, k), cf % p))
        terms.sort(reverse=True)
        return tuple(terms)

    def unpack(self, terms) -> list[Polynomial]:
        """Split a vector back into one polynomial per component."""
        buckets: list[list] = [[] for _ in range(self.ncomps)]
        for mk, cf in terms:
            comp, monkey = self.decomp(mk)
            buckets[comp].append((monkey, cf))
        out = []
        for b in buckets:
            b.sort(reverse=True)
            out.append(Polynomial(self.ring, tuple(b)))
        return out

    def vector_degree(self, terms) -> int:
        if not terms:
            return -1
        return max(self.term_degree(mk) for mk, _ in terms)

    def is_homogeneous(self, terms) -> bool:
        if not terms:
            return True
        d0 = self.term_degree(terms[0][0])
        return all(self.term_degree(mk) == d0 for mk, _ in terms)


WIDTH_PAD = 24


def ideal_context(ring: PolyRing) -> ModuleContext:
    return ModuleContext(ring, 1)


class _Entry:
    __slots__ = ("terms", "comp", "monkey", "exps", "sugar", "inv_lc")

    def __init__(self, terms, ctx: ModuleContext, sugar=None):
        self.terms = terms
        mk = terms[0][0]
        self.comp, self.monkey = ctx.decomp(mk)
        self.exps = ctx.ring.decode(self.monkey)
        self.sugar = sugar if sugar is not None else ctx.vector_degree(terms)
        self.inv_lc = ctx.ring.field.inv(terms[0][1])


def _reduce(terms, entries_by_comp, ctx: ModuleContext, budget: Budget, tail=True):
    """Full normal form of a vector against a list of entries.

    Returns (reduced_terms, sugar_bump) where sugar_bump is the largest
    sugar degree introduced by the reductions performed.
    """
    ring = ctx.ring
    p = ring.field.p
    decode = ring.decode
    result = []
    work = terms
    bump = -1
    while work:
        mk, cf = work[0]
        comp, monkey = ctx.decomp(mk)
        exps = decode(monkey)
        hit = None
        for e in entries_by_comp.get(comp, ()):
            if e.monkey > monkey:
                break
            ee = e.exps
            ok = True
            for x, y in zip(ee, exps):
                if x > y:
                    ok = False
                    break
            if ok:
                hit = e
                break
        if hit is None:
            if not tail:
                return tuple(list(result) + list(work)), bump
            result.append((mk, cf))
            work = work[1:]
            continue
        budget.charge(1)
        offset = (monkey - hit.monkey) * ctx.CB
        c = (cf * hit.inv_lc) % p
        work = sub_mul_terms(work, hit.terms, offset, c, p)
        sb = hit.sugar + ring.key_degree(monkey - hit.monkey)
        if sb > bump:
            bump = sb
    return tuple(result), bump


def normal_form(f: Polynomial, G: Iterable[Polynomial], budget: Budget = FREE) -> Polynomial:
    """Remainder of f under multivariate division by the list G.

    No monomial of the result is divisible by a leading monomial of G;
    deterministic for a fixed monomial order.
    """
    gs = [g for g in G if g]
    if not gs:
        return f
    ring = f.ring
    for g in gs:
        if g.ring != ring:
            raise ValueError("normal_form: ring mismatch")
    ctx = ideal_context(ring)
    entries = sorted((_Entry(ctx.vector([g]), ctx) for g in gs), key=lambda e: e.monkey)
    red, _ = _reduce(ctx.vector([f]), {0: entries}, ctx, budget)
    return ctx.unpack(red)[0]


def _coprime(e1: _Entry, e2: _Entry) -> bool:
    return all(min(a, b) == 0 for a, b in zip(e1.exps, e2.exps))


def _lcm_exps(e1: _Entry, e2: _Entry) -> tuple:
    return tuple(max(a, b) for a, b in zip(e1.exps, e2.exps))


def _divides(a: tuple, b: tuple) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def buchberger(vectors, ctx: ModuleContext, budget: Budget = FREE, interreduce: bool = True):
    """Reduced Groebner basis of the submodule generated by vectors.

    vectors are descending (key, coeff) tuples in the packed encoding of
    ctx.  The result is monic, auto-reduced, and sorted by ascending
    leading key, hence canonical for the given order.
    """
    ring = ctx.ring
    ideal_case = ctx.ncomps == 1
    G: list[_Entry] = []
    by_comp: dict[int, list[_Entry]] = {}

    def insert(entry: _Entry):
        lst = by_comp.setdefault(entry.comp, [])
        lo, hi = 0, len(lst)
        while lo < hi:
            mid = (lo + hi) // 2
            if lst[mid].monkey < entry.monkey:
                lo = mid + 1
            else:
                hi = mid
        lst.insert(lo, entry)
        G.append(entry)

    pairs: list = []  # heap of (sugar, lcm_key, i, j)
    lcms: dict[tuple[int, int], tuple] = {}
    counter = 0

    def push_pairs(new_idx: int):
        nonlocal counter
        h = G[new_idx]
        fresh = []
        for i, g in enumerate(G[:new_idx]):
            if g is None or g.comp != h.comp:
                continue
            lcm = _lcm_exps(g, h)
            fresh.append((i, lcm))
        # Gebauer-Moeller: drop new pairs whose lcm is a strict multiple of
        # another new pair's lcm; keep one representative among equals.
        keep = []
        for i, lcm in fresh:
            dominated = False
            for j, lcm2 in fresh:
                if j == i:
                    continue
                if lcm2 != lcm and _divides(lcm2, lcm):
                    dominated = True
                    break
            if not dominated:
                keep.append((i, lcm))
        seen = {}
        keep2 = []
        for i, lcm in keep:
            if lcm in seen:
                continue
            seen[lcm] = i
            keep2.append((i, lcm))
        # chain criterion against old pairs
        for (i, j), lcm in list(lcms.items()):
            g1, g2 = G[i], G[j]
            if g1 is None or g2 is None or g1.comp != h.comp:
                continue
            if (
                _divides(h.exps, lcm)
                and _lcm_exps(g1, h) != lcm
                and _lcm_exps(g2, h) != lcm
            ):
                lcms.pop((i, j), None)
        for i, lcm in keep2:
            g = G[i]
            if ideal_case and _coprime(g, h):
                continue
            lcm_key = ring.encode(lcm)
            sugar = max(
                g.sugar + ring.key_degree(lcm_key - g.monkey),
                h.sugar + ring.key_degree(lcm_key - h.monkey),
            )
            lcms[(i, new_idx)] = lcm
            counter += 1
            heapq.heappush(pairs, (sugar, lcm_key, i, new_idx, counter))

    start = [v for v in vectors if v]
    start.sort(key=lambda t: (ctx.vector_degree(t), t[0][0]))
    for v in start:
        e = _Entry(v, ctx)
        red, bump = _reduce(v, by_comp, ctx, budget)
        if not red:
            continue
        e = _Entry(red, ctx, sugar=max(ctx.vector_degree(red), bump) if bump >= 0 else None)
        insert(e)
        push_pairs(len(G) - 1)

    while pairs:
        sugar, lcm_key, i, j, _ = heapq.heappop(pairs)
        if (i, j) not in lcms:
            continue
        lcm = lcms.pop((i, j))
        g1, g2 = G[i], G[j]
        if g1 is None or g2 is None:
            continue
        p = ring.field.p
        m1 = lcm_key - g1.monkey
        m2 = lcm_key - g2.monkey
        s = sub_mul_terms(
            shift_scale(g1.terms, m1 * ctx.CB, g1.inv_lc, p),
            g2.terms,
            m2 * ctx.CB,
            g2.inv_lc,
            p,
        )
        if not s:
            continue
        red, bump = _reduce(s, by_comp, ctx, budget)
        if not red:
            continue
        e = _Entry(red, ctx, sugar=max(sugar, bump, ctx.vector_degree(red)))
        insert(e)
        push_pairs(len(G) - 1)

    basis = [e for e in G if e is not None]
    # minimalize: drop elements whose lead is divisible by another lead
    basis.sort(key=lambda e: (e.comp, e.monkey))
    kept: list[_Entry] = []
    for e in basis:
        redundant = False
        for f in kept:
            if f.comp == e.comp and _divides(f.exps, e.exps):
                redundant = True
                break
        if not redundant:
            kept.append(e)
    if interreduce:
        final = []
        bc: dict[int, list[_Entry]] = {}
        for e in kept:
            bc.setdefault(e.comp, []).append(e)
        for e in kept:
            others = {
                c: [f for f in lst if f is not e] for c, lst in bc.items()
            }
            red, _ = _reduce(e.terms, others, ctx, budget)
            if red:
                inv = ring.field.inv(red[0][1])
                red = tuple((k, (c * inv) % ring.field.p) for k, c in red)
                final.append(_Entry(red, ctx, sugar=e.sugar))
        kept = final
    kept.sort(key=lambda e: e.terms[0][0])
    return [e.terms for e in kept]


def groebner_basis(polys: Sequence[Polynomial], budget: Budget = FREE) -> list[Polynomial]:
    """Reduced Groebner basis of an ideal, canonical for the ring order."""
    polys = [f for f in polys if f]
    if not polys:
        return []
    ring = polys[0].ring
    ctx = ideal_context(ring)
    out = buchberger([ctx.vector([f]) for f in polys], ctx, budget)
    return [ctx.unpack(t)[0] for t in out]


def module_kernel(columns, target_ctx: ModuleContext, source_twists, budget: Budget = FREE):
    """Kernel of the map F_source -> F_target given by columns.

    columns[i] is the packed image vector of the i-th source generator.
    Returns kernel generators as packed vectors in a source-only context,
    together with that context.  Computed by a Groebner basis of the graph
    module with target components eliminated.
    """
    ring = target_ctx.ring
    nt = target_ctx.ncomps
    ns = len(columns)
    twists = tuple(target_ctx.twists) + tuple(source_twists)
    prios = (1,) * nt + (0,) * ns
    big = ModuleContext(ring, nt + ns, twists, prios)
    vecs = []
    for i, col in enumerate(columns):
        terms = list(_retag(col, target_ctx, big, 0))
        terms.extend(big.unit(nt + i))
        terms.sort(reverse=True)
        vecs.append(tuple(terms))
    gb = buchberger(vecs, big, budget)
    src_ctx = ModuleContext(ring, ns, tuple(source_twists))
    kernel = []
    for terms in gb:
        comp0, _ = big.decomp(terms[0][0])
        if comp0 >= nt:
            kernel.append(_retag(terms, big, src_ctx, -nt))
    return kernel, src_ctx


def _retag(terms, src_ctx: ModuleContext, dst_ctx: ModuleContext, comp_shift: int):
    out = []
    for mk, cf in terms:
        comp, monkey = src_ctx.decomp(mk)
        out.append((dst_ctx.key(comp + comp_shift, monkey), cf))
    out.sort(reverse=True)
    return tuple(out)


def spoly_reduces_to_zero(gb: Sequence[Polynomial], budget: Budget = FREE) -> bool:
    """Check the Buchberger criterion for a candidate ideal basis."""
    gs = [g for g in gb if g]
    if not gs:
        return True
    ring = gs[0].ring
    p = ring.field.p
    ctx = ideal_context(ring)
    entries = sorted((_Entry(ctx.vector([g]), ctx) for g in gs), key=lambda e: e.monkey)
    by_comp = {0: entries}
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            g1, g2 = entries[i], entries[j]
            lcm_key = ring.encode(_lcm_exps(g1, g2))
            s = sub_mul_terms(
                shift_scale(g1.terms, (lcm_key - g1.monkey) * ctx.CB, g1.inv_lc, p),
                g2.terms,
                (lcm_key - g2.monkey) * ctx.CB,
                g2.inv_lc,
                p,
            )
            red, _ = _reduce(s, by_comp, ctx, budget)
            if red:
                return False
    return True
