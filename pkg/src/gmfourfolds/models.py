"""Standard models: G(1,4), the del Pezzo fivefold, and its P^5 models.

Everything is anchored to the Pluecker embedding of G(1,4) in P^9 with a
fixed hyperplane H0 = p04 - p13 + p23 (a rank-4 two-form, so the section
Y0 is smooth) containing a coordinate rho-plane and sigma-plane.  The two
birational parametrizations of Y0 from P^5 are obtained by inverting the
projections from the rho-plane and from the span of a conic; inverses are
interpolated from sampled points of Y0 and certified by exact ideal
membership.  The base loci (a cubic scroll surface and a projected
quartic scroll threefold) come with recovered ruling structures so that
curves of prescribed degree can be drawn on them.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .budget import Budget, FREE
from .ideals import Ideal
from .linalg import nullspace, rank
from .maps import RationalMap, certify_inverse_forms, invert_birational
from .ring import PolyRing, Polynomial, PrimeField
from .schemes import ConstructionError, CurveOnScheme, smoothness_certificate
from .scrolls import ScrollStructure, fit_scroll_structure, invert_on_curve

PAIRS = list(itertools.combinations(range(5), 2))
PAIR_INDEX = {ij: k for k, ij in enumerate(PAIRS)}

# P^8 coordinates: all Pluecker coordinates except p04, which is recovered
# from the hyperplane p04 = p13 - p23
P8_PAIRS = [ij for ij in PAIRS if ij != (0, 4)]


def pluecker_coords(a, b, p):
    """Pluecker vector of the line spanned by rows a, b in P^4."""
    return tuple((a[i] * b[j] - a[j] * b[i]) % p for i, j in PAIRS)


@dataclass
class StandardModels:
    """Fixed models of Y0 = G(1,4) cap H0 and its two P^5 structures."""

    prime: int
    ring_p9: PolyRing
    pluecker_ideal: Ideal
    h0: Polynomial
    ring_p8: PolyRing
    y_ideal: Ideal  # del Pezzo fivefold in P^8
    rho_plane: Ideal  # in ring_p8
    sigma_plane: Ideal  # in ring_p8
    ring_p5: PolyRing
    psi0: RationalMap  # P^5 -> P^8, quadrics through the cubic scroll
    b0: Ideal  # cubic scroll surface in P^5
    scroll0: ScrollStructure
    psi1: RationalMap  # P^5 -> P^8, cubics through the projected quartic scroll
    b1: Ideal  # quartic scroll threefold in P^5
    scroll1: ScrollStructure
    conic_center: list  # three P^8 points spanning the conic projection plane

    def p9_to_p8(self, pt9) -> tuple:
        p = self.prime
        return tuple(pt9[PAIR_INDEX[ij]] % p for ij in P8_PAIRS)

    def p8_to_p9(self, pt8) -> tuple:
        p = self.prime
        vals = {}
        for ij, v in zip(P8_PAIRS, pt8):
            vals[ij] = v % p
        vals[(0, 4)] = (vals[(1, 3)] - vals[(2, 3)]) % p
        return tuple(vals[ij] for ij in PAIRS)

    def lift_ideal_to_p9(self, I: Ideal) -> Ideal:
        """Ideal of the same scheme regarded inside P^9 (adds H0)."""
        imgs = []
        for ij in PAIRS:
            if ij == (0, 4):
                f = self.ring_p9.var(PAIR_INDEX[(1, 3)]) - self.ring_p9.var(
                    PAIR_INDEX[(2, 3)]
                )
            else:
                f = self.ring_p9.var(PAIR_INDEX[ij])
            imgs.append(f)
        # substitution: a P^8 polynomial written in the nine coordinates
        lift_imgs = [imgs[PAIR_INDEX[ij]] for ij in P8_PAIRS]
        gens = [g.substitute(self.ring_p9, lift_imgs) for g in I.gens]
        return Ideal(self.ring_p9, gens + [self.h0])

    def sample_y_point(self, rng: random.Random) -> tuple:
        """Random rational point of Y0 in P^8 coordinates."""
        p = self.prime
        for _ in range(200):
            a = [rng.randrange(p) for _ in range(5)]
            if not any(a):
                continue
            # h0(a wedge b) = 0 is linear in b
            coeffs = [0] * 5
            for (i, j), c in (((0, 4), 1), ((1, 3), -1), ((2, 3), 1)):
                coeffs[j] = (coeffs[j] + c * a[i]) % p
                coeffs[i] = (coeffs[i] - c * a[j]) % p
            ker = nullspace(np.array([coeffs], dtype=np.int64), p)
            b = [0] * 5
            for row in ker:
                c = rng.randrange(p)
                if c:
                    b = [(x + c * y) % p for x, y in zip(b, row)]
            pt9 = pluecker_coords(a, b, p)
            if any(pt9):
                return self.p9_to_p8(pt9)
        raise ConstructionError("failed to sample the fivefold")

    def projection_from_rho(self, pt8) -> tuple:
        """The six coordinates of P^8 vanishing on the rho-plane."""
        return tuple(pt8[i] for i in self._rho_complement)

    @property
    def _rho_complement(self):
        # indices of P8_PAIRS away from {p01, p02, p12}
        return [
            k
            for k, ij in enumerate(P8_PAIRS)
            if ij not in ((0, 1), (0, 2), (1, 2))
        ]


_MODEL_CACHE: dict[int, StandardModels] = {}


def standard_models(prime: int = 65521, budget: Budget = FREE) -> StandardModels:
    """Build (and cache) the standard models over the given prime."""
    if prime in _MODEL_CACHE:
        return _MODEL_CACHE[prime]
    models = _build(prime, budget)
    _MODEL_CACHE[prime] = models
    return models


def _build(prime: int, budget: Budget) -> StandardModels:
    field_ = PrimeField(prime)
    rng = random.Random(prime * 7 + 3)
    ring_p9 = PolyRing(field_, [f"p{i}{j}" for i, j in PAIRS])

    def pv(i, j):
        return ring_p9.var(PAIR_INDEX[(i, j)])

    gens = []
    for a, b, c, d in itertools.combinations(range(5), 4):
        gens.append(pv(a, b) * pv(c, d) - pv(a, c) * pv(b, d) + pv(a, d) * pv(b, c))
    pluecker = Ideal(ring_p9, gens)
    h0 = pv(0, 4) - pv(1, 3) + pv(2, 3)

    ring_p8 = PolyRing(field_, [f"x{i}{j}" for i, j in P8_PAIRS])
    # push the Pluecker quadrics into P^8 coordinates
    imgs = []
    for ij in PAIRS:
        if ij == (0, 4):
            imgs.append(
                ring_p8.var(P8_PAIRS.index((1, 3))) - ring_p8.var(P8_PAIRS.index((2, 3)))
            )
        else:
            imgs.append(ring_p8.var(P8_PAIRS.index(ij)))
    y_gens = [g.substitute(ring_p8, imgs) for g in pluecker.gens]
    y_ideal = Ideal(ring_p8, y_gens)

    rho_plane = Ideal(
        ring_p8,
        [ring_p8.var(k) for k, ij in enumerate(P8_PAIRS) if ij not in ((0, 1), (0, 2), (1, 2))],
    )
    sigma_plane = Ideal(
        ring_p8,
        [ring_p8.var(k) for k, ij in enumerate(P8_PAIRS) if ij not in ((0, 1), (0, 2), (0, 3))],
    )

    models_stub = StandardModels(
        prime=prime,
        ring_p9=ring_p9,
        pluecker_ideal=pluecker,
        h0=h0,
        ring_p8=ring_p8,
        y_ideal=y_ideal,
        rho_plane=rho_plane,
        sigma_plane=sigma_plane,
        ring_p5=PolyRing(field_, [f"u{i}" for i in range(6)]),
        psi0=None,
        b0=None,
        scroll0=None,
        psi1=None,
        b1=None,
        scroll1=None,
        conic_center=None,
    )

    # sanity: the planes lie on the fivefold, and dim/degree are right
    for pl in (rho_plane, sigma_plane):
        for g in y_ideal.gens:
            if not pl.contains(g, budget):
                raise ConstructionError("model plane escapes the fivefold")
    if y_ideal.dim_degree(budget) != (5, 5):
        raise ConstructionError("fivefold dimension/degree check failed")

    ring_p5 = models_stub.ring_p5

    # ---- psi0: invert the projection from the rho-plane -------------------
    comp = models_stub._rho_complement

    def forward0(pt8):
        out = tuple(pt8[i] for i in comp)
        if not any(out):
            raise ValueError("point on the rho-plane")
        return out

    psi0 = invert_birational(
        forward_eval=forward0,
        sample_source=models_stub.sample_y_point,
        source_ring=ring_p8,
        target_ring=ring_p5,
        inverse_degree=2,
        source_ideal=y_ideal,
        rng=rng,
        forward_forms=[ring_p8.var(i) for i in comp],
    )
    _certify_image_in(psi0, y_ideal)
    b0 = Ideal(ring_p5, psi0.forms).saturate_irrelevant(rng, check=True, budget=budget)
    if b0.dim_degree(budget) != (2, 3):
        raise ConstructionError("base locus of the quadric model is not a cubic scroll")
    scroll0 = _fit_with_retries(b0, 1, 3, (2, 1), rng, budget)

    # ---- psi1: invert the projection from the span of a conic --------------
    # the conic is the psi0-image of a fixed general line in P^5
    p = prime
    line_pts = []
    t = 0
    while len(line_pts) < 3:
        t += 1
        a = [(7 + 13 * i + t) % p for i in range(6)]
        b = [(3 + 5 * i * i + 2 * t) % p for i in range(6)]
        lam = (t * 11 + 1) % p
        pt5 = tuple((x + lam * y) % p for x, y in zip(a, b))
        try:
            line_pts.append(psi0.evaluate(pt5))
        except ValueError:
            continue
    span = np.array(line_pts, dtype=np.int64) % p
    if rank(span, p) != 3:
        raise ConstructionError("conic span is degenerate")
    comp_forms = nullspace(span, p)  # 6 forms vanishing on the plane

    def forward1(pt8):
        out = tuple(
            int(sum(int(c) * x for c, x in zip(row, pt8)) % p) for row in comp_forms
        )
        if not any(out):
            raise ValueError("point on the conic span")
        return out

    forward1_forms = [
        ring_p8.linear_form([int(c) for c in row]) for row in comp_forms
    ]
    psi1 = invert_birational(
        forward_eval=forward1,
        sample_source=models_stub.sample_y_point,
        source_ring=ring_p8,
        target_ring=ring_p5,
        inverse_degree=3,
        source_ideal=y_ideal,
        rng=rng,
        forward_forms=forward1_forms,
    )
    _certify_image_in(psi1, y_ideal)
    b1 = Ideal(ring_p5, psi1.forms).saturate_irrelevant(rng, check=True, budget=budget)
    if b1.dim_degree(budget) != (3, 4):
        raise ConstructionError("base locus of the cubic model is not a quartic scroll")
    scroll1 = _fit_with_retries(b1, 2, 4, (2, 1, 1), rng, budget)

    models = StandardModels(
        prime=prime,
        ring_p9=ring_p9,
        pluecker_ideal=pluecker,
        h0=h0,
        ring_p8=ring_p8,
        y_ideal=y_ideal,
        rho_plane=rho_plane,
        sigma_plane=sigma_plane,
        ring_p5=ring_p5,
        psi0=psi0,
        b0=b0,
        scroll0=scroll0,
        psi1=psi1,
        b1=b1,
        scroll1=scroll1,
        conic_center=[tuple(int(x) for x in r) for r in line_pts],
    )
    _spot_check_birational(models, rng)
    return models


def _fit_with_retries(I, fiber_dim, family_degree, row_degrees, rng, budget, tries=6):
    last = None
    for _ in range(tries):
        try:
            return fit_scroll_structure(
                I, fiber_dim, family_degree, row_degrees, rng, budget=budget
            )
        except ConstructionError as exc:
            last = exc
    raise ConstructionError(f"scroll fitting failed: {last}")


def _certify_image_in(phi: RationalMap, target_ideal: Ideal) -> None:
    """Each target equation composed with the map must vanish identically."""
    for g in target_ideal.gens:
        if g.substitute(phi.source, phi.forms):
            raise ConstructionError("map image escapes the target variety")


def _spot_check_birational(models: StandardModels, rng: random.Random, count: int = 3):
    """Graph-fiber degree 1 at a few random points of both P^5 models."""
    p = models.prime
    for phi, proj in (
        (models.psi0, models.projection_from_rho),
        (models.psi1, None),
    ):
        for _ in range(count):
            pt5 = tuple(rng.randrange(p) for _ in range(6))
            try:
                img = phi.evaluate(pt5)
            except ValueError:
                continue
            if proj is not None:
                back = proj(img)
                if not _proportional(back, pt5, p):
                    raise ConstructionError("projection does not invert the model map")


def _proportional(a, b, p):
    for i in range(len(a)):
        for j in range(len(a)):
            if (a[i] * b[j] - a[j] * b[i]) % p:
                return False
    return any(a) and any(b)


# -- curves on the standard scrolls -------------------------------------------------


def curve_on_scroll(
    struct: ScrollStructure,
    kind: str,
    rng: random.Random,
    base_ideal: Ideal,
) -> CurveOnScheme:
    """Draw a named curve class on a standard scroll base.

    kind is one of: ruling_line, directrix, conic, twisted_cubic,
    quartic, quintic, three_rulings_plus_directrix (surface scroll only).
    """
    rows = struct.rows
    P1 = struct.param_ring
    p = P1.field.p
    surface = len(rows) == 2

    def section(weight_degrees):
        for _ in range(18):
            c = struct.curve(weight_degrees, rng)
            if _curve_ok(c, base_ideal):
                return c
        raise ConstructionError(f"could not draw a {kind} on the scroll")

    if kind == "ruling_line":
        t = (1, rng.randrange(p))
        pts = struct.fiber_points(t, rng, count=2)
        return _line_through(pts, P1, base_ideal)
    if kind == "fiber_conic":
        # a smooth conic inside one fiber plane (threefold scroll only)
        t = (1, rng.randrange(p))
        return _conic_in_plane(struct, t, rng, base_ideal)
    if kind == "directrix":
        if not surface:
            raise ValueError("directrix is defined for the surface scroll")
        # the degree-1 row is the directrix section
        low = min(range(len(rows)), key=lambda i: max(f.degree() for f in rows[i] if f))
        coords = [f for f in rows[low]]
        return CurveOnScheme(P1, coords)
    if kind == "conic":
        if surface:
            # constant weight on the degree-2 row, linear on the ruling row
            return section((0, 1))
        return section((0, 1, 1))
    if kind == "twisted_cubic":
        if surface:
            return section((1, 2))
        return section((1, 2, 2))
    if kind == "quartic":
        if surface:
            return section((2, 3))
        return section((2, 3, 3))
    if kind == "quintic":
        if surface:
            return section((3, 4))
        return section((3, 4, 4))
    raise ValueError(f"unknown curve kind {kind!r}")


def _curve_ok(curve: CurveOnScheme, base_ideal: Ideal) -> bool:
    for g in base_ideal.gens:
        if g.substitute(curve.ring, curve.coords):
            return False
    # rational normal of its degree: coefficient rank must be full
    d = curve.degree
    mat = []
    for f in curve.coords:
        row = [0] * (d + 1)
        for k, c in f.terms:
            e0, e1 = curve.ring.decode(k)
            row[e1] = c
        mat.append(row)
    arr = np.array(mat, dtype=np.int64)
    return rank(arr, curve.ring.field.p) == min(len(curve.coords), d + 1)


def _line_through(pts, P1, base_ideal) -> CurveOnScheme:
    t0, t1 = P1.gens()
    coords = [t0.scale(pts[0][i]) + t1.scale(pts[1][i]) for i in range(len(pts[0]))]
    c = CurveOnScheme(P1, coords)
    for g in base_ideal.gens:
        if g.substitute(P1, coords):
            raise ConstructionError("ruling line escapes the scroll")
    return c


def _conic_in_plane(struct: ScrollStructure, t, rng, base_ideal) -> CurveOnScheme:
    """A smooth conic drawn inside the fiber plane over t."""
    P1 = struct.param_ring
    p = P1.field.p
    vals = [[f.evaluate(t) % p for f in row] for row in struct.rows]
    # conic in plane coordinates (w0:w1:w2): image of (a:b) -> (a^2, ab, b^2)
    # under a random frame
    frame = [[rng.randrange(p) for _ in range(3)] for _ in range(3)]
    t0, t1 = P1.gens()
    w = [t0 * t0, t0 * t1, t1 * t1]
    # point of the conic: sum_r (sum_k frame[k][r] w_k(t)) * row_r
    coords = []
    for i in range(len(vals[0])):
        f = P1.zero
        for r in range(3):
            poly = P1.zero
            for k in range(3):
                if frame[k][r]:
                    poly = poly + w[k].scale(frame[k][r])
            f = f + poly.scale(vals[r][i])
        coords.append(f)
    from .schemes import strip_common_binary_factor

    coords = strip_common_binary_factor(coords)
    c = CurveOnScheme(P1, coords)
    for g in base_ideal.gens:
        if g.substitute(P1, coords):
            raise ConstructionError("fiber conic escapes the scroll")
    if c.degree != 2:
        raise ConstructionError("fiber conic degenerated")
    return c
