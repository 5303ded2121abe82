"""Zero-dimensional schemes: lengths, rational points, Galois orbits.

Affine systems are handled through the quotient-algebra basis given by a
Groebner basis; eigenvalues of a random linear coordinate split the
scheme.  Projective schemes are sliced to affine charts first.
"""

from __future__ import annotations

import random
from typing import Sequence

from .budget import Budget, FREE
from .ideals import Ideal
from .ring import PolyRing, Polynomial
from .univariate import ufactor, uroots


class NotZeroDimensional(RuntimeError):
    pass


def quotient_basis(I: Ideal, budget: Budget = FREE, cap: int = 4096) -> list[int]:
    """Monomial keys of a vector space basis of R/I (affine quotient)."""
    gb = I.groebner(budget)
    if any(g.degree() == 0 for g in gb):
        return []
    ring = I.ring
    leads = [g.lead_exps() for g in gb]
    basis = []
    seen = set()
    stack = [(0,) * ring.n]
    while stack:
        e = stack.pop()
        if e in seen:
            continue
        seen.add(e)
        if any(all(a >= b for a, b in zip(e, le)) for le in leads):
            continue
        basis.append(e)
        if len(basis) > cap:
            raise NotZeroDimensional("quotient basis exceeds cap; not zero-dimensional?")
        for i in range(ring.n):
            f = list(e)
            f[i] += 1
            stack.append(tuple(f))
    basis.sort(key=ring.encode)
    return [ring.encode(e) for e in basis]


def multiplication_matrix(I: Ideal, f: Polynomial, basis_keys: list[int], budget: Budget = FREE):
    import numpy as np

    ring = I.ring
    pos = {k: i for i, k in enumerate(basis_keys)}
    m = np.zeros((len(basis_keys), len(basis_keys)), dtype=np.int64)
    for j, bk in enumerate(basis_keys):
        prod = f * ring.monomial(ring.decode(bk))
        red = I.normal_form(prod, budget)
        for k, c in red.terms:
            m[pos[k], j] = c
    return m


def minimal_polynomial(I: Ideal, f: Polynomial, basis_keys, budget: Budget = FREE) -> list[int]:
    """Minimal polynomial of multiplication by f on the cyclic space k[f]*1."""
    import numpy as np

    from .linalg import nullspace

    ring = I.ring
    p = ring.field.p
    M = multiplication_matrix(I, f, basis_keys, budget)
    n = len(basis_keys)
    v = np.zeros(n, dtype=np.int64)
    one_key = ring.encode((0,) * ring.n)
    v[basis_keys.index(one_key)] = 1
    krylov = [v]
    for _ in range(n):
        krylov.append(M @ krylov[-1] % p)
        A = np.array(krylov, dtype=np.int64).T
        ker = nullspace(A, p)
        if ker.shape[0]:
            # take the relation with the fewest trailing zeros = minimal degree
            best = None
            for row in ker:
                deg = max(i for i, c in enumerate(row) if c)
                if best is None or deg < best[0]:
                    best = (deg, row)
            deg, row = best
            coeffs = [int(c) for c in row[: deg + 1]]
            inv = pow(coeffs[-1], p - 2, p)
            return [c * inv % p for c in coeffs]
    raise RuntimeError("no minimal polynomial found")


def rational_points(I: Ideal, rng: random.Random, budget: Budget = FREE, depth: int = 0):
    """All GF(p)-points of an affine zero-dimensional ideal."""
    ring = I.ring
    p = ring.field.p
    basis = quotient_basis(I, budget)
    if not basis:
        return []
    if depth > ring.n + 4:
        raise RuntimeError("point solver recursion too deep")
    coords = []
    ok = True
    for i in range(ring.n):
        red = I.normal_form(ring.var(i), budget)
        if red.degree() <= 0:
            coords.append(0 if red.is_zero() else red.terms[0][1])
        else:
            ok = False
            break
    if ok:
        return [tuple(coords)]
    lam = ring.linear_form([rng.randrange(p) for _ in range(ring.n)])
    mp = minimal_polynomial(I, lam, basis, budget)
    pts = []
    for r in uroots(mp, p, rng):
        J = Ideal(ring, list(I.gens) + [lam - ring.constant(r)])
        pts.extend(rational_points(J, rng, budget, depth + 1))
    uniq = sorted(set(pts))
    return uniq


def galois_orbits(I: Ideal, rng: random.Random, budget: Budget = FREE, retries: int = 6):
    """Split an affine zero-dimensional scheme into Galois orbit ideals.

    Returns [(orbit_ideal, field_degree)] with sum of lengths equal to the
    total length; retries with a fresh linear form when the chosen one
    fails to separate.
    """
    ring = I.ring
    p = ring.field.p
    basis = quotient_basis(I, budget)
    total = len(basis)
    if total == 0:
        return []
    for _ in range(retries):
        lam = ring.linear_form([rng.randrange(p) for _ in range(ring.n)])
        mp = minimal_polynomial(I, lam, basis, budget)
        factors = ufactor(mp, p, rng)
        orbits = []
        length_sum = 0
        good = True
        for irr, mult in factors:
            val = _eval_univariate(irr, lam, ring)
            J = Ideal(ring, list(I.gens) + [val])
            try:
                blen = len(quotient_basis(J, budget))
            except NotZeroDimensional:
                good = False
                break
            length_sum += blen
            orbits.append((J, len(irr) - 1))
        if good and length_sum == total:
            return orbits
    raise RuntimeError("failed to split scheme into orbits")


def _eval_univariate(coeffs, f: Polynomial, ring: PolyRing) -> Polynomial:
    out = ring.zero
    power = ring.one
    for c in coeffs:
        if c:
            out = out + power.scale(c)
        power = power * f
    return out


# -- projective sampling ---------------------------------------------------------


def dehomogenize(I: Ideal, chart: Sequence[int], rng: random.Random) -> tuple[Ideal, list]:
    """Random affine chart: substitute a random affine frame into I.

    Returns the affine ideal in n-1 variables together with the frame
    (a matrix sending affine points back to projective coordinates).
    """
    ring = I.ring
    p = ring.field.p
    n = ring.n
    aff = ring.subring([f"a{i}" for i in range(n - 1)])
    frame = [[rng.randrange(p) for _ in range(n)] for _ in range(n)]
    gens_aff = []
    images = []
    for i in range(n):
        coeffs = frame[i]
        img = aff.constant(coeffs[0])
        for j in range(1, n):
            if coeffs[j]:
                img = img + aff.var(j - 1).scale(coeffs[j])
        images.append(img)
    for g in I.gens:
        gens_aff.append(g.substitute(aff, images))
    return Ideal(aff, gens_aff), frame


def projective_rational_points(I: Ideal, rng: random.Random, budget: Budget = FREE):
    """GF(p)-points of a projective zero-dimensional scheme (generic chart)."""
    ring = I.ring
    p = ring.field.p
    for _ in range(8):
        aff, frame = dehomogenize(I, [], rng)
        try:
            pts = rational_points(aff, rng, budget)
        except NotZeroDimensional:
            continue
        out = []
        for a in pts:
            proj = []
            for i in range(ring.n):
                coeffs = frame[i]
                v = coeffs[0]
                for j in range(1, ring.n):
                    v = (v + coeffs[j] * a[j - 1]) % p
                proj.append(v)
            if any(proj):
                out.append(normalize_point(tuple(proj), p))
        return sorted(set(out))
    raise RuntimeError("projective point sampling failed")


def normalize_point(pt: tuple, p: int) -> tuple:
    for c in pt:
        if c:
            inv = pow(c, p - 2, p)
            return tuple(x * inv % p for x in pt)
    raise ValueError("zero vector is not a projective point")


def sample_point_on(I: Ideal, rng: random.Random, budget: Budget = FREE, tries: int = 60):
    """One random rational point on a positive-dimensional projective scheme.

    Slices with random hyperplanes down to expected dimension zero and
    solves; retries until a rational point appears.
    """
    ring = I.ring
    p = ring.field.p
    dim, _ = I.dim_degree(budget)
    if dim < 0:
        raise ValueError("empty scheme")
    for _ in range(tries):
        cuts = [
            ring.linear_form([rng.randrange(p) for _ in range(ring.n)]) for _ in range(dim)
        ]
        J = Ideal(ring, list(I.gens) + cuts)
        try:
            pts = projective_rational_points(J, rng, budget)
        except (NotZeroDimensional, RuntimeError):
            continue
        good = [pt for pt in pts if all(g.evaluate(pt) == 0 for g in I.gens)]
        if good:
            return good[rng.randrange(len(good))]
    raise RuntimeError("no rational point found; try another prime or seed")
