"""Ruling structure of rational normal scrolls and their projections.

A scroll base (the cubic scroll surface, or the projected quartic scroll
threefold) carries a pencil of linear fibers.  We recover a parametrized
family  rows v_1(t), ..., v_r(t)  of vector-valued binary forms whose
span at each t is the fiber, certified by substituting the resulting
parametrization into the defining ideal.  Curves on the scroll are then
drawn as  sum_i w_i(t) v_i(t)  for binary forms w_i.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .budget import Budget, FREE
from .ideals import Ideal
from .linalg import nullspace, rank, rref
from .points import sample_point_on
from .ring import PolyRing, Polynomial
from .schemes import (
    ConstructionError,
    CurveOnScheme,
    Parametrization,
    parametrize_conic,
    strip_common_binary_factor,
)


@dataclass
class ScrollStructure:
    """Fiber family of a scroll inside P^N.

    rows[i] is a tuple of N+1 binary forms of common degree; the fiber
    over t is the span of rows evaluated at t.
    """

    ambient: PolyRing  # coordinate ring of P^N
    param_ring: PolyRing  # binary forms ring k[t0, t1]
    rows: list[list[Polynomial]]

    @property
    def fiber_dim(self) -> int:
        return len(self.rows) - 1

    def row_degrees(self) -> list[int]:
        return [max(f.degree() for f in row if f) for row in self.rows]

    def fiber_points(self, t: tuple, rng: random.Random, count: int = 2) -> list[tuple]:
        p = self.ambient.field.p
        vals = [[f.evaluate(t) % p for f in row] for row in self.rows]
        out = []
        for _ in range(count):
            while True:
                cs = [rng.randrange(p) for _ in vals]
                pt = tuple(
                    sum(c * v[i] for c, v in zip(cs, vals)) % p
                    for i in range(self.ambient.n)
                )
                if any(pt):
                    out.append(pt)
                    break
        return out

    def curve(self, weight_degrees: Sequence[int], rng: random.Random) -> CurveOnScheme:
        """Random curve  sum w_i(t) v_i(t)  with deg w_i = weight_degrees[i].

        Entries of weight_degrees may be -1 to drop a row entirely.
        """
        P1 = self.param_ring
        p = P1.field.p
        coords = [P1.zero] * self.ambient.n
        for row, wd in zip(self.rows, weight_degrees):
            if wd < 0:
                continue
            w = _random_binary_form(P1, wd, rng)
            for i, f in enumerate(row):
                if f:
                    coords[i] = coords[i] + w * f
        coords = strip_common_binary_factor(coords)
        return CurveOnScheme(P1, coords)

    def parametrization(self) -> Parametrization:
        """Full scroll parametrization over k[t0, t1, w_0..w_r]."""
        names = ["t0", "t1"] + [f"w{i}" for i in range(len(self.rows))]
        big = PolyRing(self.ambient.field, names)
        timg = [big.var(0), big.var(1)]
        forms = []
        for i in range(self.ambient.n):
            f = big.zero
            for ri, row in enumerate(self.rows):
                if row[i]:
                    f = f + big.var(2 + ri) * row[i].substitute(big, timg)
            forms.append(f)
        return Parametrization("scroll", big, forms)


def certify_scroll(struct: ScrollStructure, ideal: Ideal) -> None:
    """Exact check that the scroll parametrization lands inside the ideal."""
    par = struct.parametrization()
    for g in ideal.gens:
        if g.substitute(par.ring, par.forms):
            raise ConstructionError("scroll structure fails the ideal membership check")


# -- fiber extraction -----------------------------------------------------------------


def fiber_through_point(I: Ideal, point: tuple, rng: random.Random,
                        budget: Budget = FREE) -> list[tuple]:
    """The linear fiber of a scroll through one of its points.

    Computes the locus of directions x with the whole line (point, x)
    inside the scheme; for a scroll point on a unique fiber this is the
    fiber itself.  Returns a basis of the linear subspace (as points),
    or raises when the locus is not linear.
    """
    ring = I.ring
    p = ring.field.p
    tring = PolyRing(ring.field, list(ring.names) + ["tau"])
    xs = [tring.var(i) for i in range(ring.n)]
    tau = tring.var(ring.n)
    gens = []
    for g in I.gens:
        moved = g.substitute(tring, [xs[i].scale(1) + tau.scale(point[i]) for i in range(ring.n)])
        # expand in powers of tau: each coefficient must vanish
        buckets: dict[int, dict] = {}
        for k, c in moved.terms:
            e = tring.decode(k)
            buckets.setdefault(e[-1], {})[e[:-1]] = c
        for coeffs in buckets.values():
            gens.append(ring.from_dict(coeffs))
    J = Ideal(ring, gens).saturate_irrelevant(rng, budget=budget)
    lin = [g for g in J.groebner(budget) if g.degree() == 1]
    if len(lin) != len(J.groebner(budget)):
        raise ConstructionError("fiber locus is not a linear space")
    rows = []
    for g in lin:
        row = [0] * ring.n
        for k, c in g.terms:
            e = ring.decode(k)
            row[e.index(1)] = c
        rows.append(row)
    basis = nullspace(np.array(rows, dtype=np.int64), p)
    return [tuple(int(c) for c in b) for b in basis]


def _random_binary_form(P1: PolyRing, degree: int, rng: random.Random) -> Polynomial:
    p = P1.field.p
    d = {}
    for i in range(degree + 1):
        d[(degree - i, i)] = rng.randrange(p)
    f = P1.from_dict(d)
    if not f:
        return _random_binary_form(P1, degree, rng)
    return f


# -- rational normal curve fitting ------------------------------------------------------


def fit_rational_curve_through(points: list[tuple], degree: int, field,
                               rng: random.Random):
    """Parametrize the rational normal curve of given degree through points.

    The points must lie on a unique such curve (they are sampled from
    one).  Returns (parameters, coords): parameter values t_k matched to
    the input points and binary forms of the stated degree.
    """
    p = field.p
    pts = [tuple(x) for x in points]
    amb_dim = len(pts[0])
    # restrict to the projective span of the points
    mat = np.array(pts, dtype=np.int64) % p
    ech, piv = rref(mat, p)
    span_dim = ech.shape[0]
    if span_dim != degree + 1:
        raise ConstructionError(
            f"points span a P^{span_dim - 1}, expected P^{degree} for the curve"
        )
    reduced = [_coords_in_span(pt, ech, piv, p) for pt in pts]
    # project from the first two points down to a conic
    work = reduced
    centers = []
    while len(work[0]) > 3:
        center = work[0]
        centers.append(center)
        work = [_project_point(pt, center, p) for pt in work[1:]]
    if len(work[0]) != 3:
        raise ConstructionError("projection chain failed")
    ts = _conic_parameters(work, field, rng)
    # parameters for the dropped centers are unknown: refit on the rest
    kept_pts = reduced[len(centers):]
    params = ts
    coords = _interpolate_curve(params, kept_pts, degree, field)
    # express back in ambient coordinates
    lift = []
    for i in range(amb_dim):
        f = None
        for row_idx in range(span_dim):
            c = int(ech[row_idx, i])
            term = coords[row_idx].scale(c)
            f = term if f is None else f + term
        lift.append(f)
    return params, lift


def _coords_in_span(pt, ech, piv, p):
    # coordinates of pt with respect to the echelon basis rows
    return tuple(int(pt[c]) % p for c in piv)


def _project_point(pt, center, p):
    # drop the coordinate where the center has its pivot
    idx = max(range(len(center)), key=lambda i: center[i] != 0)
    inv = pow(center[idx], p - 2, p)
    out = []
    for i, c in enumerate(pt):
        if i == idx:
            continue
        out.append((c - center[i] * inv * pt[idx]) % p)
    if not any(out):
        raise ConstructionError("projection collapsed a sample point")
    return tuple(out)


def _conic_parameters(pts, field, rng: random.Random):
    """Fit a conic through plane points and read off their parameters."""
    p = field.p
    rows = []
    for x, y, z in pts:
        rows.append([x * x % p, x * y % p, x * z % p, y * y % p, y * z % p, z * z % p])
    ker = nullspace(np.array(rows, dtype=np.int64), p)
    if ker.shape[0] != 1:
        raise ConstructionError("conic through fiber samples is not unique")
    c = [int(v) for v in ker[0]]
    R = PolyRing(field, ["x", "y", "z"])
    x, y, z = R.gens()
    q = (
        (x * x).scale(c[0]) + (x * y).scale(c[1]) + (x * z).scale(c[2])
        + (y * y).scale(c[3]) + (y * z).scale(c[4]) + (z * z).scale(c[5])
    )
    par = parametrize_conic(q, rng)
    ts = [invert_on_curve(par.forms, pt) for pt in pts]
    return ts


def invert_on_curve(coords: Sequence[Polynomial], pt: tuple):
    """Parameter t with coords(t) proportional to pt (pt on the curve)."""
    P1 = coords[0].ring
    p = P1.field.p
    from . import univariate as uv

    g = None
    for i in range(len(pt)):
        for j in range(i + 1, len(pt)):
            # pt_j * coords_i(t) - pt_i * coords_j(t) vanishes at t
            f = coords[i].scale(pt[j]) - coords[j].scale(pt[i])
            cu, shift = _to_uni(f)
            if cu:
                g = cu if g is None else uv.ugcd(g, cu, p)
    if g is None:
        raise ConstructionError("point equations all vanished")
    roots = uv.uroots(g, p)
    for r in roots:
        val = tuple(f.evaluate((1, r)) % p for f in coords)
        if _proportional(val, pt, p):
            return (1, r)
    # check the point at infinity t = (0:1)
    val = tuple(f.evaluate((0, 1)) % p for f in coords)
    if _proportional(val, pt, p):
        return (0, 1)
    raise ConstructionError("could not invert curve parametrization at a point")


def _to_uni(f: Polynomial):
    coeffs: dict[int, int] = {}
    for k, c in f.terms:
        e0, e1 = f.ring.decode(k)
        coeffs[e1] = c
    if not coeffs:
        return [], 0
    shift = min(coeffs)
    out = [0] * (max(coeffs) - shift + 1)
    for e, c in coeffs.items():
        out[e - shift] = c
    return out, shift


def _proportional(a, b, p):
    for i in range(len(a)):
        for j in range(len(a)):
            if (a[i] * b[j] - a[j] * b[i]) % p:
                return False
    return any(a) and any(b)


def _interpolate_curve(params, pts, degree, field):
    """Binary forms of the given degree hitting pts at params (projectively)."""
    p = field.p
    m = len(pts)
    dim = len(pts[0])
    nco = dim * (degree + 1)
    rows = []
    for t, pt in zip(params, pts):
        t0, t1 = t
        mons = [pow(t0, degree - i, p) * pow(t1, i, p) % p for i in range(degree + 1)]
        jstar = max(range(dim), key=lambda j: pt[j] != 0)
        for j in range(dim):
            if j == jstar:
                continue
            row = [0] * nco
            for mi, mv in enumerate(mons):
                row[j * (degree + 1) + mi] = mv * pt[jstar] % p
                row[jstar * (degree + 1) + mi] = (
                    row[jstar * (degree + 1) + mi] - mv * pt[j]
                ) % p
            rows.append(row)
    ker = nullspace(np.array(rows, dtype=np.int64), p)
    if ker.shape[0] != 1:
        raise ConstructionError(
            f"curve interpolation space has dimension {ker.shape[0]}, expected 1"
        )
    vec = ker[0]
    P1 = PolyRing(field, ["t0", "t1"])
    out = []
    for j in range(dim):
        d = {}
        for i in range(degree + 1):
            c = int(vec[j * (degree + 1) + i]) % p
            if c:
                d[(degree - i, i)] = c
        out.append(P1.from_dict(d))
    return out


# -- scroll family fitting ----------------------------------------------------------------


def fit_scroll_structure(
    I: Ideal,
    fiber_dim: int,
    family_degree: int,
    row_degrees: Sequence[int],
    rng: random.Random,
    samples: int = 14,
    budget: Budget = FREE,
) -> ScrollStructure:
    """Recover the linear fiber family of a scroll from its ideal.

    Fibers are found through sampled points, wedged into a rational
    normal curve of the stated family degree in the Pluecker space, and
    the row forms of the stated degrees are solved for by interpolation.
    The result is certified against the ideal before returning.
    """
    ring = I.ring
    p = ring.field.p
    n = ring.n
    fibers = []
    seen_plueckers = set()
    attempts = 0
    while len(fibers) < samples and attempts < 12 * samples:
        attempts += 1
        try:
            pt = sample_point_on(I, rng, budget, tries=8)
            basis = fiber_through_point(I, pt, rng, budget)
        except (ConstructionError, RuntimeError, ValueError):
            continue
        if len(basis) != fiber_dim + 1:
            continue
        pl = _pluecker_vector(basis, p)
        if pl in seen_plueckers:
            continue
        seen_plueckers.add(pl)
        fibers.append((basis, pl))
    if len(fibers) < samples:
        raise ConstructionError("could not sample enough scroll fibers")
    params, _ = fit_rational_curve_through(
        [pl for _, pl in fibers], family_degree, ring.field, rng
    )
    used = fibers[len(fibers) - len(params):]
    P1 = PolyRing(ring.field, ["t0", "t1"])
    rows: list[list[Polynomial]] = []
    degrees_sorted = sorted(row_degrees)
    for d in degrees_sorted:
        new_rows = _solve_membership_rows(used, params, d, ring, rows, P1)
        rows.extend(new_rows)
        if len(rows) > fiber_dim + 1:
            raise ConstructionError("too many scroll rows found")
    if len(rows) != fiber_dim + 1:
        raise ConstructionError(
            f"found {len(rows)} scroll rows, expected {fiber_dim + 1}"
        )
    struct = ScrollStructure(ring, P1, rows)
    certify_scroll(struct, I)
    return struct


def _pluecker_vector(basis: list[tuple], p: int) -> tuple:
    k = len(basis)
    n = len(basis[0])
    mat = [list(b) for b in basis]
    out = []
    for cols in itertools.combinations(range(n), k):
        sub = [[mat[r][c] for c in cols] for r in range(k)]
        out.append(_numeric_det(sub, p))
    # normalize projectively
    for c in out:
        if c:
            inv = pow(c, p - 2, p)
            return tuple(x * inv % p for x in out)
    raise ConstructionError("degenerate fiber basis")


def _numeric_det(mat, p):
    import copy

    m = [row[:] for row in mat]
    n = len(m)
    det = 1
    for c in range(n):
        piv = None
        for r in range(c, n):
            if m[r][c] % p:
                piv = r
                break
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det = det * m[c][c] % p
        inv = pow(m[c][c], p - 2, p)
        for r in range(c + 1, n):
            f = m[r][c] * inv % p
            if f:
                for cc in range(c, n):
                    m[r][cc] = (m[r][cc] - f * m[c][cc]) % p
    return det % p


def _solve_membership_rows(fibers, params, degree, ring, known_rows, P1):
    """Vector binary forms of given degree lying in every sampled fiber,
    modulo binary-form combinations of the known rows."""
    p = ring.field.p
    n = ring.n
    nco = n * (degree + 1)
    rows = []
    for (basis, _), t in zip(fibers, params):
        t0, t1 = t
        mons = [pow(t0, degree - i, p) * pow(t1, i, p) % p for i in range(degree + 1)]
        # conditions: value lies in the span of basis = killed by its
        # orthogonal complement rows
        mat = np.array(basis, dtype=np.int64) % p
        comp = nullspace(mat, p)  # forms vanishing on the fiber
        for form in comp:
            row = [0] * nco
            for j in range(n):
                if form[j] == 0:
                    continue
                for mi, mv in enumerate(mons):
                    row[j * (degree + 1) + mi] = (
                        row[j * (degree + 1) + mi] + int(form[j]) * mv
                    ) % p
            rows.append(row)
    ker = nullspace(np.array(rows, dtype=np.int64), p)
    # subtract the space generated by known rows times binary forms
    old_vecs = []
    for row_forms in known_rows:
        rd = max(f.degree() for f in row_forms if f)
        shift = degree - rd
        if shift < 0:
            continue
        for i in range(shift + 1):
            vec = [0] * nco
            for j in range(n):
                f = row_forms[j]
                if not f:
                    continue
                for k, c in f.terms:
                    e0, e1 = P1.decode(k) if f.ring == P1 else f.ring.decode(k)
                    # multiply by t0^(shift - i) t1^i
                    mi = e1 + i
                    vec[j * (degree + 1) + mi] = (vec[j * (degree + 1) + mi] + c) % p
            old_vecs.append(vec)
    new_rows = []
    if old_vecs:
        ech, _ = rref(np.array(old_vecs, dtype=np.int64), p)
    else:
        ech = np.zeros((0, nco), dtype=np.int64)
    for vec in ker:
        stacked = np.vstack([ech, vec.reshape(1, -1)])
        ech2, _ = rref(stacked, p)
        if ech2.shape[0] > ech.shape[0]:
            ech = ech2
            forms = []
            for j in range(n):
                d = {}
                for i in range(degree + 1):
                    c = int(vec[j * (degree + 1) + i]) % p
                    if c:
                        d[(degree - i, i)] = c
                forms.append(P1.from_dict(d))
            new_rows.append(forms)
    return new_rows
