"""Graded modules, free resolutions, Hom, and sheaf cohomology.

A GradedModule is a subquotient (span(gens) + span(rels)) / span(rels)
inside a graded free module F = sum_c R(-a_c).  Presentations are
computed by module kernels, resolutions by iterated kernels with unit
pruning, and local cohomology through graded duality:

    H^i_m(M)_d  =  dim Ext^(n-i)(M, R(-n))_(-d)

over a ring with n variables.  Sheaf cohomology on projective space is
read off from local cohomology; for i = 0 the section dimension is
M_d - h^0_m(M)_d + h^1_m(M)_d.
"""

from __future__ import annotations

import numpy as np
from typing import Sequence

from .budget import Budget, FREE
from .groebner import ModuleContext, buchberger, module_kernel
from .ideals import Ideal, monomial_hilbert_numerator, series_coefficient, strip_ones
from .linalg import nullspace, rank, rref
from .ring import PolyRing, Polynomial


class GradedModule:
    """Subquotient module with cached homological data."""

    def __init__(self, ring: PolyRing, ambient_twists: Sequence[int], gens=None, rels=None):
        self.ring = ring
        self.ambient_twists = tuple(ambient_twists)
        self.ctx = ModuleContext(ring, len(self.ambient_twists), self.ambient_twists)
        if gens is None:
            gens = [self.ctx.vector([ring.one if c == i else None for c in range(len(self.ambient_twists))]) for i in range(len(self.ambient_twists))]
        self.gens = [g for g in gens if g]
        self.rels = [r for r in (rels or []) if r]
        for v in self.gens + self.rels:
            if not self.ctx.is_homogeneous(v):
                raise ValueError("module data must be homogeneous")
        self._pres = None
        self._res: list | None = None
        self._piece_cache: dict[int, int] = {}
        self._hilb = None

    # -- constructors -----------------------------------------------------------

    @staticmethod
    def free(ring: PolyRing, twists: Sequence[int]) -> "GradedModule":
        return GradedModule(ring, twists)

    @staticmethod
    def quotient_ring(I: Ideal) -> "GradedModule":
        ring = I.ring
        m = GradedModule(ring, (0,))
        m.rels = [m.ctx.vector([g]) for g in I.gens]
        return m

    @staticmethod
    def ideal_module(I: Ideal) -> "GradedModule":
        ring = I.ring
        m = GradedModule(ring, (0,))
        m.gens = [m.ctx.vector([g]) for g in I.gens]
        m.rels = []
        return m

    @staticmethod
    def from_presentation(ring: PolyRing, gen_degrees: Sequence[int], columns) -> "GradedModule":
        """coker of a matrix whose columns are lists of polynomials."""
        m = GradedModule(ring, gen_degrees)
        m.rels = [m.ctx.vector(col) for col in columns]
        return m

    def twist(self, k: int) -> "GradedModule":
        """M(k): all degrees shifted down by k."""
        shifted = GradedModule(self.ring, tuple(a - k for a in self.ambient_twists))
        shifted.gens = [_retwist(v, self.ctx, shifted.ctx) for v in self.gens]
        shifted.rels = [_retwist(v, self.ctx, shifted.ctx) for v in self.rels]
        return shifted

    # -- graded pieces -----------------------------------------------------------

    def gen_degrees(self) -> list[int]:
        return [self.ctx.vector_degree(g) for g in self.gens]

    def piece_dim(self, d: int, budget: Budget = FREE) -> int:
        """dim_k M_d."""
        if d in self._piece_cache:
            return self._piece_cache[d]
        num_all, num_rel = self._hilbert_numerators(budget)
        n = self.ring.n
        val = _laurent_series_coefficient(num_all, n, d) - _laurent_series_coefficient(
            num_rel, n, d
        )
        self._piece_cache[d] = val
        return val

    def _hilbert_numerators(self, budget: Budget = FREE):
        if self._hilb is not None:
            return self._hilb
        num_all = _submodule_numerator(self.gens + self.rels, self.ctx, budget)
        num_rel = _submodule_numerator(self.rels, self.ctx, budget)
        self._hilb = (num_all, num_rel)
        return self._hilb

    def hilbert_polynomial_value(self, d: int, budget: Budget = FREE) -> int:
        num_all, num_rel = self._hilbert_numerators(budget)
        n = self.ring.n
        return _laurent_poly_value(num_all, n, d) - _laurent_poly_value(num_rel, n, d)

    def piece_basis(self, d: int, budget: Budget = FREE):
        """Rows spanning M_d expressed in the ambient monomial basis,
        together with the relation rows (for quotient interpretation)."""
        amb = _ambient_basis(self.ctx, d)
        G = _expand_rows(self.gens, self.ctx, d, amb)
        R = _expand_rows(self.rels, self.ctx, d, amb)
        return G, R, amb

    # -- presentation and resolution ----------------------------------------------

    def presentation(self, budget: Budget = FREE, minimal: bool = True):
        """(gen_degrees, columns) of a presentation of M, pruned if minimal."""
        if self._pres is not None:
            return self._pres
        gdegs = self.gen_degrees()
        cols = list(self.gens) + list(self.rels)
        twists = gdegs + [self.ctx.vector_degree(r) for r in self.rels]
        kern, src = module_kernel(cols, self.ctx, twists, budget)
        ng = len(self.gens)
        pres_ctx = ModuleContext(self.ring, ng, tuple(gdegs))
        pres_cols = []
        for vec in kern:
            comps = src.unpack(vec)
            head = comps[:ng]
            if any(head):
                pres_cols.append(pres_ctx.vector(head))
        pres_cols = minimal_generators(pres_cols, pres_ctx)
        grid = _Grid.from_packed(self.ring, list(gdegs), pres_cols, pres_ctx)
        if minimal:
            grid = _prune_presentation(grid)
        self._pres = (tuple(grid.row_degrees), grid)
        return self._pres

    def resolution(self, max_length: int, budget: Budget = FREE) -> "FreeResolution":
        """Free resolution  F_max <- ... <- F_1 <- F_0  of M (as coker)."""
        if self._res is None:
            gdegs, grid = self.presentation(budget)
            self._res = FreeResolution(self.ring, list(gdegs), [grid])
        res = self._res
        while len(res.maps) < max_length and not res.finished:
            res.extend(budget)
        return res

    # -- hom and cohomology ------------------------------------------------------------

    def hom(self, other: "GradedModule", budget: Budget = FREE) -> "GradedModule":
        """Hom_R(self, other) as a subquotient module."""
        gdegs, grid = self.presentation(budget)
        ng = len(gdegs)
        o_amb = other.ambient_twists
        o_gens = other.gens
        o_rels = other.rels
        # ambient of Hom: one copy of other's ambient per generator of self,
        # twisted by the generator degree
        big_twists = []
        for a in gdegs:
            big_twists.extend(t - a for t in o_amb)
        big = ModuleContext(self.ring, len(big_twists), tuple(big_twists))
        no = len(o_amb)

        def place(vec_terms, slot):
            out = []
            for mk, cf in vec_terms:
                comp, monkey = other.ctx.decomp(mk)
                out.append((big.key(slot * no + comp, monkey), cf))
            out.sort(reverse=True)
            return tuple(out)

        # candidate section space: generators of other placed in each slot
        cand = []
        for slot in range(ng):
            for gvec in o_gens:
                cand.append(place(gvec, slot))
        padding = []
        for slot in range(ng):
            for rvec in o_rels:
                padding.append(place(rvec, slot))
        # constraint: composing with each presentation column lands in rels
        ncols = grid.ncols
        tgt_twists = []
        for col_deg in grid.col_degrees:
            tgt_twists.extend(t - col_deg for t in o_amb)
        tgt = ModuleContext(self.ring, len(tgt_twists), tuple(tgt_twists))

        def apply_pres(vec, slot_of_vec):
            # image of a slot-placed vector under composition with the
            # presentation matrix: for column j, multiply by entry (slot, j)
            out = {}
            for j in range(ncols):
                entry = grid.entry(slot_of_vec, j)
                if entry is None or not entry:
                    continue
                for mk, cf in vec:
                    comp, monkey = other.ctx.decomp(mk)
                    for ek, ec in entry.terms:
                        kk = tgt.key(j * no + comp, monkey + ek)
                        out[kk] = (out.get(kk, 0) + cf * ec) % self.ring.field.p
            return tuple(sorted(((k, c) for k, c in out.items() if c), reverse=True))

        cols = []
        src_twists = []
        for slot in range(ng):
            for gvec in o_gens:
                cols.append(apply_pres(gvec, slot))
                src_twists.append(other.ctx.vector_degree(gvec) - gdegs[slot])
        pad_tgt = []
        pad_twists = []
        for j in range(ncols):
            for rvec in o_rels:
                moved = []
                for mk, cf in rvec:
                    comp, monkey = other.ctx.decomp(mk)
                    moved.append((tgt.key(j * no + comp, monkey), cf))
                moved.sort(reverse=True)
                pad_tgt.append(tuple(moved))
                pad_twists.append(other.ctx.vector_degree(rvec) - grid.col_degrees[j])
        kern, src = module_kernel(cols + pad_tgt, tgt, src_twists + pad_twists, budget)
        hom_gens = []
        nsec = len(cols)
        for vec in kern:
            comps = src.unpack(vec)
            head = comps[:nsec]
            if not any(head):
                continue
            combined = {}
            for idx, coefpoly in enumerate(head):
                if not coefpoly:
                    continue
                base = cand[idx]
                for pk, pc in coefpoly.terms:
                    for mk, cf in base:
                        kk = mk + pk * big.CB
                        combined[kk] = (combined.get(kk, 0) + pc * cf) % self.ring.field.p
            vecc = tuple(sorted(((k, c) for k, c in combined.items() if c), reverse=True))
            if vecc:
                hom_gens.append(vecc)
        hom_gens = minimal_generators(hom_gens, big)
        out = GradedModule(self.ring, tuple(big_twists))
        out.gens = hom_gens
        out.rels = padding
        return out

    def local_cohomology_dim(self, i: int, d: int, budget: Budget = FREE) -> int:
        """dim H^i_m(M)_d via graded duality."""
        n = self.ring.n
        j = n - i
        if j < 0:
            return 0
        return self.ext_dual_dim(j, -d, budget)

    def ext_dual_dim(self, j: int, e: int, budget: Budget = FREE) -> int:
        """dim Ext^j(M, R(-n))_e from a free resolution."""
        if j < 0:
            return 0
        res = self.resolution(j + 1, budget)
        return res.ext_into_canonical_dim(j, e)

    def sheaf_h(self, i: int, d: int, budget: Budget = FREE) -> int:
        """h^i of the associated sheaf on P^(n-1), twisted by d."""
        if i < 0:
            raise ValueError("cohomology index must be nonnegative")
        n = self.ring.n
        if i == 0:
            h0m = self.local_cohomology_dim(0, d, budget)
            h1m = self.local_cohomology_dim(1, d, budget)
            return self.piece_dim(d, budget) - h0m + h1m
        if i >= n:
            return 0
        return self.local_cohomology_dim(i + 1, d, budget)

    def saturate(self, budget: Budget = FREE, window: Sequence[int] | None = None) -> "GradedModule":
        """Module of sections of the associated sheaf.

        Strips the finite-length torsion submodule; if H^1_m vanishes on
        the requested window (checked by duality) the result's pieces are
        exactly the section dimensions there.  Otherwise sections are
        accumulated by mapping into Hom(m^[t], M) until stable.
        """
        window = list(window) if window is not None else list(range(-2, 5))
        rels_sat = _saturate_submodule(self.rels, self.ctx, budget)
        stripped = GradedModule(self.ring, self.ambient_twists)
        stripped.gens = self.gens
        stripped.rels = rels_sat
        if all(stripped.local_cohomology_dim(1, d, budget) == 0 for d in window):
            return stripped
        t = 2
        prev = None
        while t <= 8:
            power = Ideal(self.ring, [g ** t for g in self.ring.gens()])
            hom = GradedModule.ideal_module(power).hom(stripped, budget)
            dims = tuple(hom.piece_dim(d, budget) for d in window)
            if prev == dims:
                return hom
            prev = dims
            t += 1
        raise RuntimeError("module saturation did not stabilize")

    def __repr__(self):
        return (
            f"GradedModule({len(self.gens)} gens, {len(self.rels)} rels "
            f"in free module of rank {len(self.ambient_twists)})"
        )


def normal_sheaf(ambient: Ideal, sub: Ideal, budget: Budget = FREE) -> GradedModule:
    """Normal module Hom(J/J^2, O_sub) for sub inside V(ambient).

    J is the image of the ideal of the subscheme in the coordinate ring of
    the ambient scheme; requires containment of schemes.
    """
    if not sub.contains_ideal(ambient, budget):
        raise ValueError("subscheme ideal must contain the ambient ideal")
    ring = sub.ring
    conormal = GradedModule(ring, (0,))
    conormal.gens = [conormal.ctx.vector([g]) for g in sub.gens]
    sq = [f * g for i, f in enumerate(sub.gens) for g in sub.gens[i:]]
    conormal.rels = [conormal.ctx.vector([g]) for g in list(ambient.gens) + sq]
    structure = GradedModule.quotient_ring(sub)
    return conormal.hom(structure, budget)


# -- free resolutions -------------------------------------------------------------


class FreeResolution:
    """Chain of graded free modules with matrices stored as grids."""

    def __init__(self, ring: PolyRing, gen_degrees: list[int], maps: list["_Grid"]):
        self.ring = ring
        self.degrees = [list(gen_degrees)]
        self.maps = []
        self.finished = False
        for m in maps:
            self._append(m)

    def _append(self, grid: "_Grid"):
        self.maps.append(grid)
        self.degrees.append(list(grid.col_degrees))
        if grid.ncols == 0:
            self.finished = True

    def extend(self, budget: Budget = FREE):
        if self.finished:
            return
        last = self.maps[-1]
        ctx = ModuleContext(self.ring, last.nrows, tuple(last.row_degrees))
        cols = [last.packed_col(j, ctx) for j in range(last.ncols)]
        kern, src = module_kernel(cols, ctx, tuple(last.col_degrees), budget)
        nxt_ctx = ModuleContext(self.ring, last.ncols, tuple(last.col_degrees))
        packed = [_retag_same(v, src, nxt_ctx) for v in kern]
        packed = minimal_generators(packed, nxt_ctx)
        grid = _Grid.from_packed(self.ring, list(last.col_degrees), packed, nxt_ctx)
        if grid.ncols and len(self.maps) >= 1:
            grid = _prune_step(self.maps, grid)
        self._append(grid)

    def length(self) -> int:
        return len(self.maps)

    def betti(self) -> list[dict[int, int]]:
        """Betti-style table: for each homological degree, {gen degree: count}."""
        out = []
        for degs in self.degrees:
            row: dict[int, int] = {}
            for a in degs:
                row[a] = row.get(a, 0) + 1
            out.append(row)
        return out

    def check_complex(self, budget: Budget = FREE) -> bool:
        """d_i . d_(i+1) = 0 for all consecutive maps."""
        for a, b in zip(self.maps, self.maps[1:]):
            for j in range(b.ncols):
                for r in range(a.nrows):
                    acc = self.ring.zero
                    for s in range(a.ncols):
                        e1 = a.entry(r, s)
                        e2 = b.entry(s, j)
                        if e1 and e2:
                            acc = acc + e1 * e2
                    if acc:
                        return False
        return True

    # numeric Ext pieces ----------------------------------------------------

    def _hom_block(self, level: int, e: int):
        """Monomial bases of Hom(F_level, R(-n))_e per generator."""
        n = self.ring.n
        degs = self.degrees[level] if level < len(self.degrees) else []
        blocks = []
        for a in degs:
            d = a + e - n
            blocks.append(self.ring.monomials_of_degree(d) if d >= 0 else [])
        return blocks

    def _hom_matrix(self, level: int, e: int):
        """Matrix of Hom(F_(level-1), R(-n))_e -> Hom(F_level, R(-n))_e."""
        p = self.ring.field.p
        src_blocks = self._hom_block(level - 1, e)
        dst_blocks = self._hom_block(level, e)
        src_offsets = _offsets(src_blocks)
        dst_offsets = _offsets(dst_blocks)
        rows = dst_offsets[-1]
        cols = src_offsets[-1]
        mat = np.zeros((rows, cols), dtype=np.int64)
        grid = self.maps[level - 1]
        for s in range(grid.ncols):  # generator s of F_level
            for r in range(grid.nrows):  # generator r of F_(level-1)
                entry = grid.entry(r, s)
                if not entry:
                    continue
                src_keys = src_blocks[r]
                if not src_keys:
                    continue
                dst_pos = {k: i for i, k in enumerate(dst_blocks[s])}
                for ci, mk in enumerate(src_keys):
                    for ek, ec in entry.terms:
                        kk = mk + ek
                        ri = dst_pos.get(kk)
                        if ri is not None:
                            mat[dst_offsets[s] + ri, src_offsets[r] + ci] = (
                                mat[dst_offsets[s] + ri, src_offsets[r] + ci] + ec
                            ) % p
        return mat

    def ext_into_canonical_dim(self, j: int, e: int) -> int:
        """dim Ext^j(M, R(-n))_e; resolution must reach step j+1 or finish."""
        if j >= len(self.degrees):
            return 0
        blocks_j = self._hom_block(j, e)
        dim_j = _offsets(blocks_j)[-1]
        if dim_j == 0:
            return 0
        p = self.ring.field.p
        if j + 1 < len(self.degrees) and j < len(self.maps):
            d_next = self._hom_matrix(j + 1, e)
            ker = dim_j - rank(d_next.T, p) if d_next.size else dim_j
        else:
            ker = dim_j
        if j == 0:
            return ker
        d_prev = self._hom_matrix(j, e)
        return ker - (rank(d_prev, p) if d_prev.size else 0)


def _offsets(blocks):
    out = [0]
    for b in blocks:
        out.append(out[-1] + len(b))
    return out


# -- matrices of polynomials (grids) -------------------------------------------


class _Grid:
    """Sparse matrix of polynomials with graded row/column degrees."""

    def __init__(self, ring, row_degrees, col_degrees, entries):
        self.ring = ring
        self.row_degrees = list(row_degrees)
        self.col_degrees = list(col_degrees)
        self.entries = entries  # dict (r, c) -> Polynomial

    @property
    def nrows(self):
        return len(self.row_degrees)

    @property
    def ncols(self):
        return len(self.col_degrees)

    def entry(self, r, c):
        return self.entries.get((r, c))

    @staticmethod
    def from_packed(ring, row_degrees, packed_cols, ctx: ModuleContext) -> "_Grid":
        entries = {}
        col_degrees = []
        for j, vec in enumerate(packed_cols):
            col_degrees.append(ctx.vector_degree(vec))
            for poly_idx, poly in enumerate(ctx.unpack(vec)):
                if poly:
                    entries[(poly_idx, j)] = poly
        return _Grid(ring, row_degrees, col_degrees, entries)

    def packed_col(self, j, ctx: ModuleContext):
        terms = []
        for (r, c), poly in self.entries.items():
            if c != j:
                continue
            for k, cf in poly.terms:
                terms.append((ctx.key(r, k), cf))
        terms.sort(reverse=True)
        return tuple(terms)

    def drop(self, rows=(), cols=()):
        rows = set(rows)
        cols = set(cols)
        rmap = {}
        for r in range(self.nrows):
            if r not in rows:
                rmap[r] = len(rmap)
        cmap = {}
        for c in range(self.ncols):
            if c not in cols:
                cmap[c] = len(cmap)
        entries = {}
        for (r, c), poly in self.entries.items():
            if r in rows or c in cols:
                continue
            entries[(rmap[r], cmap[c])] = poly
        return _Grid(
            self.ring,
            [d for i, d in enumerate(self.row_degrees) if i not in rows],
            [d for i, d in enumerate(self.col_degrees) if i not in cols],
            entries,
        )


def _find_unit(grid: _Grid):
    for (r, c), poly in grid.entries.items():
        if poly and poly.degree() == 0:
            return r, c
    return None


def _prune_presentation(grid: _Grid) -> _Grid:
    """Remove unit entries from a presentation matrix (no neighbors)."""
    while True:
        hit = _find_unit(grid)
        if hit is None:
            return grid
        r, c = hit
        grid = _clear_with_unit(grid, r, c)
        grid = grid.drop(rows=[r], cols=[c])


def _clear_with_unit(grid: _Grid, r: int, c: int) -> _Grid:
    ring = grid.ring
    u = grid.entry(r, c)
    inv = ring.field.inv(u.terms[0][1])
    entries = dict(grid.entries)
    pivot_col = {rr: entries[(rr, c)] for rr in range(grid.nrows) if (rr, c) in entries}
    for cc in range(grid.ncols):
        if cc == c:
            continue
        lam = entries.get((r, cc))
        if not lam:
            continue
        factor = lam.scale(inv)
        for rr, pv in pivot_col.items():
            cur = entries.get((rr, cc), ring.zero)
            new = cur - factor * pv
            if new:
                entries[(rr, cc)] = new
            else:
                entries.pop((rr, cc), None)
    return _Grid(ring, grid.row_degrees, grid.col_degrees, entries)


def _prune_step(prev_maps: list[_Grid], grid: _Grid) -> _Grid:
    """Prune units in a freshly computed kernel matrix, fixing the previous map."""
    while True:
        hit = _find_unit(grid)
        if hit is None:
            return grid
        r, c = hit
        grid = _clear_with_unit(grid, r, c)
        grid = grid.drop(rows=[r], cols=[c])
        prev = prev_maps[-1]
        prev_maps[-1] = prev.drop(cols=[r])


def _retag_same(vec, src: ModuleContext, dst: ModuleContext):
    out = []
    for mk, cf in vec:
        comp, monkey = src.decomp(mk)
        out.append((dst.key(comp, monkey), cf))
    out.sort(reverse=True)
    return tuple(out)


def minimal_generators(vectors, ctx: ModuleContext):
    """Subset of vectors spanning V/mV (a minimal generating set).

    Graded Nakayama: processed by increasing degree, a vector is kept only
    if it is independent from lower-degree multiples and the earlier
    keepers of its own degree.
    """
    p = ctx.ring.field.p
    vecs = sorted((v for v in vectors if v), key=lambda v: (ctx.vector_degree(v), v[0][0]))
    kept: list = []
    i = 0
    while i < len(vecs):
        d = ctx.vector_degree(vecs[i])
        group = []
        while i < len(vecs) and ctx.vector_degree(vecs[i]) == d:
            group.append(vecs[i])
            i += 1
        amb = _ambient_basis(ctx, d)
        pos = {cm: k for k, cm in enumerate(amb)}
        span = _expand_rows(kept, ctx, d, amb)
        ech, _ = rref(span, p) if span.size else (span, [])
        for v in group:
            row = np.zeros((1, len(amb)), dtype=np.int64)
            for tk, cf in v:
                comp, monkey = ctx.decomp(tk)
                row[0, pos[(comp, monkey)]] = cf
            stacked = np.vstack([ech, row]) if ech.size else row
            ech2, piv = rref(stacked, p)
            if ech2.shape[0] > ech.shape[0]:
                kept.append(v)
                ech = ech2
    return kept


def _retwist(vec, src: ModuleContext, dst: ModuleContext):
    return _retag_same(vec, src, dst)


# -- submodule hilbert data ---------------------------------------------------------


def _submodule_numerator(vectors, ctx: ModuleContext, budget: Budget = FREE):
    """Laurent numerator {exponent: coeff} of the submodule Hilbert series."""
    ring = ctx.ring
    n = ring.n
    total: dict[int, int] = {}
    if not vectors:
        return total
    gb = buchberger(list(vectors), ctx, budget)
    per_comp: dict[int, list] = {}
    for terms in gb:
        comp, monkey = ctx.decomp(terms[0][0])
        per_comp.setdefault(comp, []).append(ring.decode(monkey))
    for comp, leads in per_comp.items():
        quot = monomial_hilbert_numerator(tuple(map(tuple, leads)), n)
        # numerator of the submodule piece: t^twist * (1 - numerator(R/leads))
        shift = ctx.twists[comp]
        total[shift] = total.get(shift, 0) + 1
        for j, c in enumerate(quot):
            if c:
                total[shift + j] = total.get(shift + j, 0) - c
    return {k: v for k, v in total.items() if v}


def _laurent_series_coefficient(num: dict, n: int, d: int) -> int:
    from math import comb

    total = 0
    for j, c in num.items():
        if c and d - j >= 0:
            total += c * comb(d - j + n - 1, n - 1)
    return total


def _laurent_poly_value(num: dict, n: int, d: int) -> int:
    if not num:
        return 0
    off = min(num)
    coeffs = [0] * (max(num) - off + 1)
    for j, c in num.items():
        coeffs[j - off] = c
    q, d0 = strip_ones(coeffs)
    m = n - d0
    if m <= 0:
        return 0
    from fractions import Fraction

    total = Fraction(0)
    for j, c in enumerate(q):
        if c:
            num_f = Fraction(1)
            for i in range(m - 1):
                num_f *= Fraction(d - off - j + m - 1 - i)
            fact = 1
            for i in range(1, m):
                fact *= i
            total += Fraction(c) * num_f / fact
    return int(total)


def _ambient_basis(ctx: ModuleContext, d: int):
    """Module monomials of degree d in the ambient free module."""
    ring = ctx.ring
    out = []
    for comp, a in enumerate(ctx.twists):
        dd = d - a
        if dd < 0:
            continue
        for mk in ring.monomials_of_degree(dd):
            out.append((comp, mk))
    return out


def _expand_rows(vectors, ctx: ModuleContext, d: int, amb):
    ring = ctx.ring
    p = ring.field.p
    pos = {cm: i for i, cm in enumerate(amb)}
    rows = []
    for vec in vectors:
        vdeg = ctx.vector_degree(vec)
        dd = d - vdeg
        if dd < 0 or not vec:
            continue
        for mk in ring.monomials_of_degree(dd):
            row = [0] * len(amb)
            ok = True
            for tk, cf in vec:
                comp, monkey = ctx.decomp(tk)
                idx = pos.get((comp, monkey + mk))
                if idx is None:
                    ok = False
                    break
                row[idx] = cf
            if ok:
                rows.append(row)
    return np.array(rows, dtype=np.int64) if rows else np.zeros((0, len(amb)), dtype=np.int64)


def _saturate_submodule(rels, ctx: ModuleContext, budget: Budget = FREE, max_rounds: int = 30):
    """(rels : m^infty) inside the ambient free module."""
    ring = ctx.ring
    cur = list(rels)
    for _ in range(max_rounds):
        nxt = _module_colon_irrelevant(cur, ctx, budget)
        if _same_submodule(cur, nxt, ctx, budget):
            return cur
        cur = nxt
    raise RuntimeError("submodule saturation did not stabilize")


def _module_colon_irrelevant(rels, ctx: ModuleContext, budget: Budget = FREE):
    """{v in F : x_i v in span(rels) for all i}."""
    ring = ctx.ring
    nv = ring.n
    nr = len(ctx.twists)
    # target: one copy of F per variable
    big_twists = []
    for i in range(nv):
        big_twists.extend(t - 1 for t in ctx.twists)
    big = ModuleContext(ring, len(big_twists), tuple(big_twists))
    cols = []
    twists = []
    # candidate v -> (x_0 v, ..., x_(n-1) v): source gens = ambient unit vectors
    for comp in range(nr):
        terms = []
        for i in range(nv):
            e = [0] * nv
            e[i] = 1
            terms.append((big.key(i * nr + comp, ring.encode(e)), 1))
        terms.sort(reverse=True)
        cols.append(tuple(terms))
        twists.append(ctx.twists[comp])
    # padding: relations placed in each variable copy
    for i in range(nv):
        for rvec in rels:
            moved = []
            for mk, cf in rvec:
                comp, monkey = ctx.decomp(mk)
                moved.append((big.key(i * nr + comp, monkey), cf))
            moved.sort(reverse=True)
            cols.append(tuple(moved))
            twists.append(ctx.vector_degree(rvec) + 1)
    kern, src = module_kernel(cols, big, twists, budget)
    out = list(rels)
    for vec in kern:
        comps = src.unpack(vec)
        head = comps[:nr]
        if any(head):
            out.append(ctx.vector(head))
    return out


def _same_submodule(a, b, ctx: ModuleContext, budget: Budget = FREE) -> bool:
    ga = buchberger(list(a), ctx, budget) if a else []
    gb = buchberger(list(b), ctx, budget) if b else []
    return ga == gb
