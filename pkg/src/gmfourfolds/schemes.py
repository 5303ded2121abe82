"""Embedded schemes: invariants, smoothness, parametrized surfaces.

Surfaces are built from plane or quadric-surface linear systems with
assigned base points, forced through a given curve by solving the
restriction problem along a source curve; their numeric invariants come
from the Hilbert polynomial of the saturated ideal, the self-intersection
data from static structure recipes plus Noether's formula.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .budget import Budget, FREE
from .ideals import Ideal
from .linalg import nullspace, rank, rref
from .points import NotZeroDimensional, quotient_basis, sample_point_on
from .ring import PolyRing, Polynomial
from . import univariate as uv


class ConstructionError(RuntimeError):
    """A random draw failed a postcondition; the caller should reseed."""


# -- parametrizations ------------------------------------------------------------


@dataclass
class Parametrization:
    """A rational parametrization of a projective scheme.

    source is "P1", "P2" or "P1xP1"; forms live on the matching source
    ring (2, 3 or 4 variables; bihomogeneous in the product case).
    """

    source: str
    ring: PolyRing
    forms: list[Polynomial]

    def evaluate(self, point) -> tuple:
        p = self.ring.field.p
        vals = tuple(f.evaluate(point) % p for f in self.forms)
        if not any(vals):
            raise ValueError("parametrization base point")
        return vals

    def random_source_point(self, rng: random.Random) -> tuple:
        p = self.ring.field.p
        if self.source == "P1xP1":
            return (
                rng.randrange(p), rng.randrange(1, p),
                rng.randrange(p), rng.randrange(1, p),
            )
        return tuple(rng.randrange(p) for _ in range(self.ring.n - 1)) + (1,)

    def sample_image_point(self, rng: random.Random, tries: int = 50) -> tuple:
        for _ in range(tries):
            try:
                return self.evaluate(self.random_source_point(rng))
            except ValueError:
                continue
        raise ConstructionError("could not sample the parametrized scheme")

    def jacobian_rank_at(self, point) -> int:
        p = self.ring.field.p
        rows = []
        for i in range(self.ring.n):
            rows.append([f.derivative(i).evaluate(point) for f in self.forms])
        return rank(np.array(rows, dtype=np.int64) % p, p)

    def compose_forms(self, outer: Sequence[Polynomial]) -> list[Polynomial]:
        """outer forms evaluated on this parametrization (no factor stripped)."""
        return [g.substitute(self.ring, self.forms) for g in outer]


@dataclass
class SmoothnessCertificate:
    level: str  # PROVEN_SMOOTH | LIKELY_SMOOTH | SINGULAR
    detail: str = ""
    witness: Optional[tuple] = None

    def at_least(self, other_level: str) -> bool:
        order = {"SINGULAR": 0, "LIKELY_SMOOTH": 1, "PROVEN_SMOOTH": 2}
        return order[self.level] >= order[other_level]


@dataclass
class EmbeddedScheme:
    """An ideal with cached numeric invariants and optional provenance."""

    ideal: Ideal
    parametrization: Optional[Parametrization] = None
    structure: Optional[tuple] = None  # ("blown_plane", r) | ("scroll",) | ("ci_quadrics",)
    certificate: Optional[SmoothnessCertificate] = None
    _cache: dict = field(default_factory=dict)

    def dim_degree(self, budget: Budget = FREE):
        if "dimdeg" not in self._cache:
            self._cache["dimdeg"] = self.ideal.dim_degree(budget)
        return self._cache["dimdeg"]

    def surface_invariants(self, budget: Budget = FREE) -> tuple[int, int, int]:
        """(degree, sectional genus, chi(O)) from the Hilbert polynomial."""
        if "surface" in self._cache:
            return self._cache["surface"]
        dim, deg = self.dim_degree(budget)
        if dim != 2:
            raise ValueError(f"not a surface (dim {dim})")
        hp = self.ideal.hilbert_polynomial(budget)
        # P(t) = (deg/2) t^2 + (deg/2 + 1 - g) t + chi
        c2 = hp[2] if len(hp) > 2 else 0
        c1 = hp[1] if len(hp) > 1 else 0
        chi = int(hp[0]) if hp else 0
        if 2 * c2 != deg:
            raise ValueError("Hilbert polynomial degree term mismatch")
        g = deg // 2 + 1 - c1
        if g != int(g):
            raise ValueError("non-integral sectional genus")
        out = (deg, int(g), chi)
        self._cache["surface"] = out
        return out

    def chern_numbers(self, budget: Budget = FREE) -> "ChernRecord":
        """K^2 and topological Euler number from the structure recipe."""
        if self.structure is None:
            raise ValueError("no structure provenance; cannot derive K^2")
        kind = self.structure[0]
        if kind == "blown_plane":
            k2 = 9 - self.structure[1]
        elif kind == "scroll":
            k2 = 8
        elif kind == "ci_quadrics":
            k2 = 0
        else:
            raise ValueError(f"unknown structure {self.structure!r}")
        _, _, chi = self.surface_invariants(budget)
        e = 12 * chi - k2
        return ChernRecord(k2=k2, euler=e, source="recipe-derived")


@dataclass
class ChernRecord:
    k2: int
    euler: int
    source: str

    def chi(self) -> int:
        if (self.k2 + self.euler) % 12:
            raise ValueError("Noether's formula fails")
        return (self.k2 + self.euler) // 12


# -- smoothness ---------------------------------------------------------------------


def smoothness_certificate(
    scheme: EmbeddedScheme | Ideal,
    rng: random.Random,
    budget: Budget = FREE,
    proven: bool = True,
    point_checks: int = 50,
    minor_batch: int = 24,
    draws: int = 3,
) -> SmoothnessCertificate:
    """Smoothness of a projective scheme over the prime field.

    PROVEN_SMOOTH: the ideal plus codim-size Jacobian minors of codim+1
    random generator combinations (accumulated over independent draws)
    saturates to the irrelevant ideal.  LIKELY_SMOOTH: full Jacobian rank
    at sampled parametrization points.  SINGULAR: a witness point where
    the Jacobian drops rank.
    """
    I = scheme.ideal if isinstance(scheme, EmbeddedScheme) else scheme
    par = scheme.parametrization if isinstance(scheme, EmbeddedScheme) else None
    ring = I.ring
    p = ring.field.p
    dim, _ = I.dim_degree(budget)
    if dim < 0:
        return SmoothnessCertificate("PROVEN_SMOOTH", "empty scheme")
    codim = ring.n - 1 - dim
    if proven:
        extra: list[Polynomial] = []
        jac_full = [[g.derivative(i) for i in range(ring.n)] for g in I.gens]
        for _ in range(draws):
            combos = []
            for _ in range(codim + 1):
                row = [ring.zero] * ring.n
                for g_idx, g in enumerate(I.gens):
                    c = rng.randrange(p)
                    if c:
                        for i in range(ring.n):
                            row[i] = row[i] + jac_full[g_idx][i].scale(c)
                combos.append(row)
            minor_iter = _random_minors(combos, codim, rng)
            progressed = False
            for chunk in _chunks(minor_iter, minor_batch):
                extra.extend(chunk)
                J = Ideal(ring, list(I.gens) + extra)
                if J.dim_degree(budget) == (-1, 0):
                    return SmoothnessCertificate(
                        "PROVEN_SMOOTH", f"minor certificate with {len(extra)} minors"
                    )
                progressed = True
            if not progressed:
                break
        # the accumulated candidate locus stayed nonempty: inspect directly
        witness = _singular_witness(I, rng, budget)
        if witness is not None:
            return SmoothnessCertificate("SINGULAR", "Jacobian rank drop", witness)
    if par is not None:
        failures = 0
        done = 0
        while done < point_checks:
            pt = par.random_source_point(rng)
            try:
                par.evaluate(pt)
            except ValueError:
                continue
            done += 1
            if par.jacobian_rank_at(pt) != dim + 1:
                failures += 1
        if failures == 0:
            return SmoothnessCertificate("LIKELY_SMOOTH", f"{done} rank checks")
    witness = _singular_witness(I, rng, budget)
    if witness is not None:
        return SmoothnessCertificate("SINGULAR", "Jacobian rank drop", witness)
    return SmoothnessCertificate("LIKELY_SMOOTH", "sampled singular locus empty")


def _random_minors(rows: list[list[Polynomial]], size: int, rng: random.Random):
    """Yield size x size minors of the matrix in a shuffled order."""
    ring = rows[0][0].ring
    m = len(rows)
    n = len(rows[0])
    row_sets = list(itertools.combinations(range(m), size))
    col_sets = list(itertools.combinations(range(n), size))
    pairs = [(rs, cs) for rs in row_sets for cs in col_sets]
    rng.shuffle(pairs)
    for rs, cs in pairs:
        yield _det([[rows[r][c] for c in cs] for r in rs], ring)


def _det(mat: list[list[Polynomial]], ring: PolyRing) -> Polynomial:
    n = len(mat)
    if n == 1:
        return mat[0][0]
    if n == 2:
        return mat[0][0] * mat[1][1] - mat[0][1] * mat[1][0]
    out = ring.zero
    for j in range(n):
        sub = [[mat[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = mat[0][j] * _det(sub, ring)
        out = out + term if j % 2 == 0 else out - term
    return out


def _chunks(it, size):
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == size:
            yield buf
            buf = []
    if buf:
        yield buf


def _singular_witness(I: Ideal, rng: random.Random, budget: Budget) -> Optional[tuple]:
    """A rational point of the scheme where the full Jacobian drops rank."""
    ring = I.ring
    p = ring.field.p
    dim, _ = I.dim_degree(budget)
    codim = ring.n - 1 - dim
    jac = [[g.derivative(i) for i in range(ring.n)] for g in I.gens]
    minors = []
    rows_all = list(range(len(I.gens)))
    cols_all = list(range(ring.n))
    for rs in itertools.combinations(rows_all, min(codim, len(rows_all))):
        for cs in itertools.combinations(cols_all, min(codim, len(cols_all))):
            minors.append(_det([[jac[r][c] for c in cs] for r in rs], ring))
            if len(minors) >= 80:
                break
        if len(minors) >= 80:
            break
    J = Ideal(ring, list(I.gens) + minors)
    jdim, _ = J.dim_degree(budget)
    if jdim < 0:
        return None
    try:
        pt = sample_point_on(J, rng, budget, tries=20)
    except (RuntimeError, ValueError):
        return None
    rows = [[e.evaluate(pt) for e in row] for row in jac]
    if rank(np.array(rows, dtype=np.int64) % p, p) < codim:
        return pt
    return None


# -- images of parametrized or ideal-theoretic subvarieties --------------------------


def image_ideal_pieces(
    map_forms: Sequence[Polynomial],
    V: Ideal,
    target_ring: PolyRing,
    degrees: Sequence[int],
    budget: Budget = FREE,
) -> dict[int, list[Polynomial]]:
    """Degree-d pieces of the ideal of the image of V under the map.

    A form q of degree d vanishes on the image exactly when q(map forms)
    reduces to zero modulo the ideal of V; each piece is a kernel over
    the coefficient field.
    """
    source_ring = map_forms[0].ring
    p = source_ring.field.p
    gb = V.groebner(budget)
    out: dict[int, list[Polynomial]] = {}
    reduced_cache: dict[tuple, Polynomial] = {}

    def reduced_product(exps: tuple) -> Polynomial:
        got = reduced_cache.get(exps)
        if got is not None:
            return got
        prod = source_ring.one
        for i, e in enumerate(exps):
            for _ in range(e):
                prod = prod * map_forms[i]
        from .groebner import normal_form

        red = normal_form(prod, gb, budget)
        reduced_cache[exps] = red
        return red

    for d in degrees:
        keys = target_ring.monomials_of_degree(d)
        cols: list[Polynomial] = []
        support: dict[int, int] = {}
        vecs = []
        for mk in keys:
            e = target_ring.decode(mk)
            red = reduced_product(e)
            vecs.append(red)
            for k, _ in red.terms:
                if k not in support:
                    support[k] = len(support)
        mat = np.zeros((len(keys), len(support)), dtype=np.int64)
        for r, red in enumerate(vecs):
            for k, c in red.terms:
                mat[r, support[k]] = c
        # left kernel: combinations of the monomial rows reducing to zero
        ker = nullspace(mat.T, p)
        piece = []
        for row in ker:
            dd = {}
            for mi, c in enumerate(row):
                if c:
                    dd[target_ring.decode(keys[mi])] = int(c)
            piece.append(target_ring.from_dict(dd))
        out[d] = piece
    return out


def saturated_image_ideal(
    map_forms: Sequence[Polynomial],
    V: Ideal,
    target_ring: PolyRing,
    gen_degree_bound: int,
    rng: random.Random,
    budget: Budget = FREE,
) -> Ideal:
    """Ideal of the image closure, assuming generators in degrees <= bound."""
    pieces = image_ideal_pieces(
        map_forms, V, target_ring, range(1, gen_degree_bound + 1), budget
    )
    gens: list[Polynomial] = []
    for d in range(1, gen_degree_bound + 1):
        gens.extend(pieces[d])
    raw = Ideal(target_ring, gens)
    return raw.saturate_irrelevant(rng, budget=budget)


# -- double point schemes --------------------------------------------------------------


def double_point_count(par: Parametrization, rng: random.Random, budget: Budget = FREE) -> int:
    """Node count of the image: half the length of the off-diagonal locus.

    Works in source x source coordinates, saturating out the diagonal;
    raises if the double locus is positive dimensional.
    """
    if par.source != "P2":
        raise ValueError("double point count implemented for plane sources")
    ring = par.ring
    p = ring.field.p
    big = PolyRing(ring.field, [f"s{i}" for i in range(3)] + [f"u{i}" for i in range(3)])
    sv = [big.var(i) for i in range(3)]
    uvv = [big.var(3 + i) for i in range(3)]
    fs = [f.substitute(big, sv) for f in par.forms]
    fu = [f.substitute(big, uvv) for f in par.forms]
    gens = []
    for i in range(len(fs)):
        for j in range(i + 1, len(fs)):
            gens.append(fs[i] * fu[j] - fs[j] * fu[i])
    diag = Ideal(
        big,
        [sv[i] * uvv[j] - sv[j] * uvv[i] for i in range(3) for j in range(3) if i < j],
    )
    locus = Ideal(big, gens).saturate(diag, budget)
    lengths = []
    for _ in range(3):
        ln = _biaffine_length(locus, rng, budget)
        lengths.append(ln)
    if len(set(lengths)) != 1:
        raise ConstructionError(f"double point lengths disagree: {lengths}")
    total = lengths[0]
    if total % 2:
        raise ConstructionError("odd double point length")
    return total // 2


def _biaffine_length(locus: Ideal, rng: random.Random, budget: Budget) -> int:
    """Length of a bi-projective zero-dimensional scheme on a random chart."""
    big = locus.ring
    p = big.field.p
    aff = PolyRing(big.field, ["a1", "a2", "b1", "b2"])
    fr1 = [[rng.randrange(p) for _ in range(3)] for _ in range(3)]
    fr2 = [[rng.randrange(p) for _ in range(3)] for _ in range(3)]
    imgs = []
    for i in range(3):
        f = aff.constant(fr1[i][0])
        f = f + aff.var(0).scale(fr1[i][1]) + aff.var(1).scale(fr1[i][2])
        imgs.append(f)
    for i in range(3):
        f = aff.constant(fr2[i][0])
        f = f + aff.var(2).scale(fr2[i][1]) + aff.var(3).scale(fr2[i][2])
        imgs.append(f)
    I = Ideal(aff, [g.substitute(aff, imgs) for g in locus.gens])
    try:
        return len(quotient_basis(I, budget))
    except NotZeroDimensional:
        raise ConstructionError("double point locus is not finite")


# -- parametrized curves ---------------------------------------------------------------


@dataclass
class CurveOnScheme:
    """A rational curve given by binary forms landing on a host scheme."""

    ring: PolyRing  # P^1 coordinate ring (2 variables)
    coords: list[Polynomial]  # forms of common degree, gcd-free
    ideal: Optional[Ideal] = None  # ideal in the host's ambient ring

    @property
    def degree(self) -> int:
        return self.coords[0].degree()

    def evaluate(self, t: tuple) -> tuple:
        p = self.ring.field.p
        vals = tuple(f.evaluate(t) % p for f in self.coords)
        if not any(vals):
            raise ValueError("degenerate curve parameter")
        return vals


def strip_common_binary_factor(forms: list[Polynomial]) -> list[Polynomial]:
    """Divide binary forms by their gcd (as univariate polynomials)."""
    ring = forms[0].ring
    if ring.n != 2:
        raise ValueError("needs binary forms")
    p = ring.field.p
    polys = [_binary_to_uni(f) for f in forms]
    live = [(c, s) for c, s in polys if c]
    if not live:
        raise ValueError("all forms are zero")
    g = []
    for c, s in live:
        g = uv.ugcd(g, c, p) if g else list(c)
    shift = min(s for _, s in live)
    deg_after = max(len(c) - 1 + s for c, s in live) - (len(g) - 1) - shift
    out = []
    for c, s in polys:
        if not c:
            out.append(ring.zero)
            continue
        q, r = uv.udivmod(c, g, p)
        if r:
            raise ArithmeticError("gcd division failed")
        out.append(_uni_to_binary(q, s - shift, deg_after, ring))
    return out


def _binary_to_uni(f: Polynomial):
    """f(t0, t1) = t0^shift * c(t1/t0 ...) as (coeffs in t1, shift in t1-degree)."""
    ring = f.ring
    coeffs: dict[int, int] = {}
    for k, c in f.terms:
        e0, e1 = ring.decode(k)
        coeffs[e1] = c
    if not coeffs:
        return [], 0
    shift = min(coeffs)
    top = max(coeffs)
    out = [0] * (top - shift + 1)
    for e, c in coeffs.items():
        out[e - shift] = c
    return out, shift


def _uni_to_binary(coeffs, shift, total_degree, ring: PolyRing) -> Polynomial:
    d = {}
    for i, c in enumerate(coeffs):
        if c:
            e1 = i + shift
            e0 = total_degree - e1
            d[(e0, e1)] = c
    return ring.from_dict(d)


# -- linear systems on the plane and the quadric ------------------------------------------


@dataclass
class PlaneSystem:
    degree: int
    simple_points: int
    multiple_point: Optional[int] = None  # multiplicity if present

    def expected_dim(self) -> int:
        from math import comb

        dim = comb(self.degree + 2, 2) - self.simple_points
        if self.multiple_point:
            m = self.multiple_point
            dim -= m * (m + 1) // 2
        return dim


@dataclass
class ProductSystem:
    bidegree: tuple[int, int]

    def expected_dim(self) -> int:
        a, b = self.bidegree
        return (a + 1) * (b + 1)


def plane_system_basis(ring: PolyRing, system: PlaneSystem, pts, mpt, budget: Budget = FREE):
    """Basis of plane curves of the given degree through the assigned points."""
    p = ring.field.p
    keys = ring.monomials_of_degree(system.degree)
    rows = []
    for pt in pts:
        rows.append([_eval_key(ring, k, pt) for k in keys])
    if mpt is not None:
        m = system.multiple_point
        # vanishing of all partials of order < m
        for order in range(m):
            for combo in itertools.combinations_with_replacement(range(3), order):
                row = []
                for k in keys:
                    f = ring.monomial(ring.decode(k))
                    for i in combo:
                        f = f.derivative(i)
                    row.append(f.evaluate(mpt))
                rows.append(row)
    mat = np.array(rows, dtype=np.int64) % p if rows else np.zeros((0, len(keys)), dtype=np.int64)
    ker = nullspace(mat, p)
    basis = []
    for vec in ker:
        d = {}
        for i, c in enumerate(vec):
            if c:
                d[ring.decode(keys[i])] = int(c)
        basis.append(ring.from_dict(d))
    return basis


def _eval_key(ring: PolyRing, key: int, point) -> int:
    p = ring.field.p
    e = ring.decode(key)
    v = 1
    for xi, ei in zip(point, e):
        if ei:
            v = v * pow(xi, ei, p) % p
    return v


def parametrize_conic(q: Polynomial, rng: random.Random, tries: int = 80):
    """Rational parametrization of a smooth plane conic via a point on it."""
    ring = q.ring
    p = ring.field.p
    base = None
    for _ in range(tries):
        # intersect with a random line through a random point
        a = [rng.randrange(p) for _ in range(3)]
        b = [rng.randrange(p) for _ in range(3)]
        # q(a + t b) = q(a) + t B(a,b) + t^2 q(b)
        qa = q.evaluate(a)
        qb = q.evaluate(b)
        bab = (q.evaluate([x + y for x, y in zip(a, b)]) - qa - qb) % p
        roots = uv.uroots([qa % p, bab, qb], p, rng)
        if roots:
            t = roots[0]
            base = tuple((x + t * y) % p for x, y in zip(a, b))
            if any(base):
                break
            base = None
    if base is None:
        raise ConstructionError("no rational point on conic")
    # pencil of lines through the base point: second intersection formula
    # x(t) = q(v(t)) * base - B(base, v(t)) * v(t), v(t) = v0 + t v1
    P1 = PolyRing(ring.field, ["t0", "t1"])
    while True:
        v0 = [rng.randrange(p) for _ in range(3)]
        v1 = [rng.randrange(p) for _ in range(3)]
        mat = np.array([base, v0, v1], dtype=np.int64)
        if rank(mat, p) == 3:
            break
    t0, t1 = P1.gens()
    # symbolic: work coordinatewise with binary-form coefficients
    coords = []
    qa = q.evaluate(base)
    assert qa == 0

    def bilin(a_vec, b_vec):
        return (
            q.evaluate([x + y for x, y in zip(a_vec, b_vec)])
            - q.evaluate(a_vec)
            - q.evaluate(b_vec)
        ) % p

    qv0 = q.evaluate(v0)
    qv1 = q.evaluate(v1)
    qv01 = bilin(v0, v1)
    b0 = bilin(base, v0)
    b1 = bilin(base, v1)
    # q(v(t)) = qv0 t0^2 + qv01 t0 t1 + qv1 t1^2 ; B(base, v(t)) = b0 t0 + b1 t1
    for i in range(3):
        f = (
            (t0 * t0).scale(qv0 * base[i])
            + (t0 * t1).scale(qv01 * base[i])
            + (t1 * t1).scale(qv1 * base[i])
            - (t0 * t0).scale(b0 * v0[i])
            - (t0 * t1).scale(b0 * v1[i] + b1 * v0[i])
            - (t1 * t1).scale(b1 * v1[i])
        )
        coords.append(f)
    coords = strip_common_binary_factor(coords)
    if coords[0].degree() != 2:
        raise ConstructionError("conic parametrization degenerated")
    return Parametrization("P1", P1, coords)


def parametrize_line(through: Sequence[tuple], ring: PolyRing, rng: random.Random):
    """Parametrize a line in the plane through up to two given points."""
    p = ring.field.p
    pts = [tuple(x) for x in through]
    while len(pts) < 2:
        cand = tuple(rng.randrange(p) for _ in range(3))
        if any(cand) and cand not in pts:
            pts.append(cand)
    P1 = PolyRing(ring.field, ["t0", "t1"])
    t0, t1 = P1.gens()
    coords = [t0.scale(pts[0][i]) + t1.scale(pts[1][i]) for i in range(3)]
    return Parametrization("P1", P1, coords)
