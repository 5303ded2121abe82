"""Rational maps between projective spaces and subvarieties.

A map is a tuple of forms of common degree on the source ring.  Images
are computed through the graph ideal (saturated by the base locus) and
block elimination; birational inverses are found by interpolation on
sampled graph points and then certified exactly by ideal membership.
"""

from __future__ import annotations

import random
from typing import Callable, Sequence

from .budget import Budget, FREE
from .ideals import Ideal, transfer
from .ring import PolyRing, Polynomial
from . import univariate as uv


class RationalMap:
    """Forms of common degree defining source ⇢ target."""

    def __init__(self, source: PolyRing, target: PolyRing, forms: Sequence[Polynomial]):
        if len(forms) != target.n:
            raise ValueError("need one form per target coordinate")
        degs = {f.degree() for f in forms if f}
        if len(degs) != 1:
            raise ValueError("forms must be nonzero of a common degree")
        self.source = source
        self.target = target
        self.forms = list(forms)
        self.degree = degs.pop()
        self._image_cache: dict = {}

    def evaluate(self, point: Sequence[int]) -> tuple:
        p = self.source.field.p
        out = tuple(f.evaluate(point) % p for f in self.forms)
        if not any(out):
            raise ValueError("point lies in the base locus")
        return out

    def base_ideal(self) -> Ideal:
        return Ideal(self.source, self.forms)

    def base_locus(self, rng: random.Random | None = None, budget: Budget = FREE) -> Ideal:
        return self.base_ideal().saturate_irrelevant(rng or random.Random(11), budget=budget)

    def graph_ring(self) -> PolyRing:
        names = [f"s_{nm}" for nm in self.source.names] + [f"t_{nm}" for nm in self.target.names]
        return PolyRing(self.source.field, names, ("block", self.source.n))

    def graph_ideal(self, restrict_to: Ideal | None = None, budget: Budget = FREE) -> Ideal:
        """Ideal of the graph closure over restrict_to (default: the source)."""
        gr = self.graph_ring()
        ns = self.source.n
        sx = [gr.var(i) for i in range(ns)]
        ty = [gr.var(ns + i) for i in range(self.target.n)]
        lift = lambda f: f.substitute(gr, sx)
        gens = []
        if restrict_to is not None:
            gens.extend(lift(g) for g in restrict_to.gens)
        lifted = [lift(f) for f in self.forms]
        for i in range(self.target.n):
            for j in range(i + 1, self.target.n):
                gens.append(ty[i] * lifted[j] - ty[j] * lifted[i])
        graph = Ideal(gr, gens)
        return graph.saturate(Ideal(gr, lifted), budget)

    def image(self, restrict_to: Ideal | None = None, budget: Budget = FREE) -> Ideal:
        """Saturated ideal of the closure of the image of restrict_to."""
        key = tuple(g.terms for g in restrict_to.gens) if restrict_to is not None else None
        if key in self._image_cache:
            return self._image_cache[key]
        if restrict_to is not None and all(
            Ideal(self.source, list(restrict_to.gens) + [f]).groebner(budget)
            == restrict_to.groebner(budget)
            for f in self.forms
        ):
            raise ValueError("the subscheme lies inside the base locus")
        graph = self.graph_ideal(restrict_to, budget)
        img = graph.eliminate(self.source.n, budget)
        out = Ideal(self.target, [transfer_names(g, self.target) for g in img.gens])
        self._image_cache[key] = out
        return out

    def compose_linear(self, mat: Sequence[Sequence[int]], new_target: PolyRing) -> "RationalMap":
        """Postcompose with the linear map given by mat (rows = new coords)."""
        forms = []
        for row in mat:
            f = self.source.zero
            for c, form in zip(row, self.forms):
                if c % self.source.field.p:
                    f = f + form.scale(c)
            forms.append(f)
        return RationalMap(self.source, new_target, forms)

    def __repr__(self):
        return (
            f"RationalMap(degree {self.degree}: "
            f"P^{self.source.n - 1} -> P^{self.target.n - 1})"
        )


def transfer_names(f: Polynomial, target: PolyRing) -> Polynomial:
    """Move a polynomial to a ring with the same shape but fresh names."""
    if target.n != f.ring.n or target.field != f.ring.field:
        raise ValueError("variable count mismatch")
    d = {}
    for k, c in f.terms:
        d[f.ring.decode(k)] = c
    return target.from_dict(d)


def linear_projection(center: Ideal, Z: Ideal, budget: Budget = FREE,
                      rng: random.Random | None = None) -> tuple[Ideal, "RationalMap"]:
    """Project Z from a linear center; returns (image ideal, projection map).

    The center must be a linear subspace not containing Z; the projection
    coordinates are a basis of the linear forms vanishing on the center.
    """
    ring = Z.ring
    lin = [g for g in center.gens if g.degree() == 1]
    if len(lin) != len(center.gens):
        raise ValueError("center must be generated by linear forms")
    import numpy as np

    from .linalg import rref

    p = ring.field.p
    rows = []
    for g in lin:
        row = [0] * ring.n
        for k, c in g.terms:
            e = g.ring.decode(k)
            row[e.index(1)] = c
        rows.append(row)
    mat, piv = rref(np.array(rows, dtype=np.int64), p)
    basis = [ring.linear_form([int(c) for c in row]) for row in mat]
    if Z.is_zero() or all(Ideal(ring, list(Z.gens) + [b]).groebner(budget) == Z.groebner(budget) for b in basis):
        raise ValueError("center contains the scheme")
    target = PolyRing(ring.field, [f"q{i}" for i in range(len(basis))])
    proj = RationalMap(ring, target, basis)
    return proj.image(Z, budget), proj


# -- inversion by interpolation + certification ---------------------------------


def invert_birational(
    forward_eval: Callable[[Sequence[int]], tuple],
    sample_source: Callable[[random.Random], tuple],
    source_ring: PolyRing,
    target_ring: PolyRing,
    inverse_degree: int,
    source_ideal: Ideal | None,
    rng: random.Random,
    oversample: int = 40,
    budget: Budget = FREE,
    forward_forms: Sequence[Polynomial] | None = None,
) -> RationalMap:
    """Inverse of a birational map target <- source given by sampling.

    forward_eval sends a sampled source point to its target image; the
    inverse forms of the stated degree are solved from proportionality
    constraints at the samples and then certified: every 2x2 minor of
    [source point | candidate(forward image)] must reduce to zero modulo
    the source ideal.  Raises if the candidate space is not a single ray.
    """
    import numpy as np

    from .linalg import nullspace

    p = source_ring.field.p
    mon_keys = target_ring.monomials_of_degree(inverse_degree)
    nmon = len(mon_keys)
    ncoord = source_ring.n
    unknowns = ncoord * nmon
    rows = []
    samples = []
    need = unknowns // max(1, ncoord - 1) + oversample
    tries = 0
    while len(samples) < need and tries < 40 * need:
        tries += 1
        try:
            x = sample_source(rng)
            y = forward_eval(x)
        except (ValueError, ZeroDivisionError):
            continue
        if not any(y):
            continue
        samples.append((x, y))
    if len(samples) < need:
        raise RuntimeError("could not sample enough graph points")
    for x, y in samples:
        mon_vals = [_eval_key(target_ring, mk, y) for mk in mon_keys]
        jstar = max(range(ncoord), key=lambda j: x[j] != 0)
        for j in range(ncoord):
            if j == jstar:
                continue
            row = [0] * unknowns
            for mi, mv in enumerate(mon_vals):
                row[j * nmon + mi] = mv * x[jstar] % p
                row[jstar * nmon + mi] = (row[jstar * nmon + mi] - mv * x[j]) % p
            rows.append(row)
    ker = nullspace(np.array(rows, dtype=np.int64), p)
    if ker.shape[0] != 1:
        raise RuntimeError(
            f"inverse interpolation space has dimension {ker.shape[0]}, expected 1"
        )
    vec = ker[0]
    forms = []
    for j in range(ncoord):
        d = {}
        for mi, mk in enumerate(mon_keys):
            c = int(vec[j * nmon + mi]) % p
            if c:
                d[target_ring.decode(mk)] = c
        forms.append(target_ring.from_dict(d))
    if any(not f for f in forms):
        # a coordinate can legitimately vanish only if the source sits in a
        # hyperplane, which never happens for our nondegenerate sources
        raise RuntimeError("degenerate inverse candidate")
    inv = RationalMap(target_ring, source_ring, forms)
    if forward_forms is not None:
        certify_inverse_forms(inv, forward_forms, source_ideal, budget)
    return inv


def _eval_key(ring: PolyRing, key: int, point) -> int:
    p = ring.field.p
    e = ring.decode(key)
    v = 1
    for xi, ei in zip(point, e):
        if ei:
            v = v * pow(xi, ei, p) % p
    return v


def certify_inverse_forms(
    inv: RationalMap,
    forward_forms: Sequence[Polynomial],
    source_ideal: Ideal | None,
    budget: Budget = FREE,
) -> None:
    """Check x_i * inv_j(F(x)) - x_j * inv_i(F(x)) ∈ I_source exactly."""
    ring = forward_forms[0].ring
    composed = [g.substitute(ring, list(forward_forms)) for g in inv.forms]
    n = len(composed)
    gens = ring.gens()
    for i in range(n):
        for j in range(i + 1, n):
            expr = gens[i] * composed[j] - gens[j] * composed[i]
            if source_ideal is None or not source_ideal.gens:
                ok = not expr
            else:
                ok = source_ideal.contains(expr, budget)
            if not ok:
                raise RuntimeError("inverse certificate failed")
