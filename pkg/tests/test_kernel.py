"""Kernel oracle suite: division, Groebner bases, Hilbert data.

Expected values here are either immediate, checked against a textbook
division oracle written independently below, or checked against
brute-force linear algebra over the prime field.
"""

import itertools
import random

import numpy as np
import pytest

from gmfourfolds.groebner import groebner_basis, normal_form, spoly_reduces_to_zero
from gmfourfolds.ideals import Ideal
from gmfourfolds.linalg import as_matrix, rank
from gmfourfolds.ring import PolyRing, PrimeField

F = PrimeField(65521)


# -- an independent schoolbook division oracle (dict-based, no packing) ------


def naive_divide(f, G):
    """Multivariate division using dict arithmetic and explicit exponents."""
    ring = f.ring
    p = ring.field.p
    rem = {}
    work = dict(f.as_dict())

    def lead(d):
        return max(d, key=ring.encode)

    while work:
        m = lead(work)
        c = work[m]
        hit = None
        for g in G:
            lm = g.lead_exps()
            if all(a >= b for a, b in zip(m, lm)):
                hit = g
                break
        if hit is None:
            rem[m] = c
            del work[m]
            continue
        lm, lc = hit.lead_exps(), hit.lead_coeff()
        q = tuple(a - b for a, b in zip(m, lm))
        factor = c * pow(lc, p - 2, p) % p
        for e, cc in hit.as_dict().items():
            key = tuple(a + b for a, b in zip(q, e))
            work[key] = (work.get(key, 0) - factor * cc) % p
            if work[key] == 0:
                del work[key]
    return ring.from_dict(rem)


def brute_force_member(f, gens, p):
    """Membership in bounded degree by linear algebra on monomial columns."""
    ring = f.ring
    d = f.degree()
    cols = {}
    rows = []
    for g in gens:
        for dd in range(d - g.degree() + 1):
            for mk in ring.monomials_of_degree(dd):
                h = g * ring.monomial(ring.decode(mk))
                vec = {}
                for k, c in h.terms:
                    vec[k] = c
                rows.append(vec)
    keys = sorted({k for r in rows for k in r} | {k for k, _ in f.terms}, reverse=True)
    pos = {k: i for i, k in enumerate(keys)}
    if not rows:
        return not f
    mat = np.zeros((len(rows), len(keys)), dtype=np.int64)
    for i, r in enumerate(rows):
        for k, c in r.items():
            mat[i, pos[k]] = c
    target = np.zeros(len(keys), dtype=np.int64)
    for k, c in f.terms:
        target[pos[k]] = c
    r0 = rank(mat, p)
    r1 = rank(np.vstack([mat, target]), p)
    return r0 == r1


# -- normal form ---------------------------------------------------------------


class TestNormalForm:
    def test_power_by_variable(self):
        R = PolyRing(F, ["x", "y"])
        x, y = R.gens()
        assert normal_form(x * x, [x]).is_zero()

    def test_empty_divisors(self):
        R = PolyRing(F, ["x", "y"])
        x, y = R.gens()
        assert normal_form(x, []) == x

    def test_already_reduced_vs_naive_oracle(self):
        R = PolyRing(F, ["x", "y"])
        x, y = R.gens()
        gb = groebner_basis([x * x - 1, y * y - 1])
        f = x * y - 1
        assert normal_form(f, gb) == naive_divide(f, gb)
        assert normal_form(f, gb) == f

    def test_ring_mismatch(self):
        R1 = PolyRing(F, ["x", "y"])
        R2 = PolyRing(F, ["u", "v"])
        with pytest.raises(ValueError):
            normal_form(R1.var(0), [R2.var(0)])

    def test_random_against_naive(self):
        rng = random.Random(5)
        R = PolyRing(F, ["x", "y", "z"])
        for _ in range(15):
            G = [R.random_poly(2, rng) for _ in range(2)]
            f = R.random_poly(3, rng)
            assert normal_form(f, G) == naive_divide(f, G)


# -- groebner bases ---------------------------------------------------------------


def twisted_cubic_ideal():
    R = PolyRing(F, ["x", "y", "z", "w"])
    x, y, z, w = R.gens()
    return Ideal(R, [x * z - y * y, y * w - z * z, x * w - y * z])


def pluecker_g14(prime=65521):
    Fp = PrimeField(prime)
    pairs = list(itertools.combinations(range(5), 2))
    R = PolyRing(Fp, [f"p{i}{j}" for i, j in pairs])
    idx = {ij: k for k, ij in enumerate(pairs)}

    def pv(i, j):
        return R.var(idx[(i, j)])

    gens = []
    for a, b, c, d in itertools.combinations(range(5), 4):
        gens.append(pv(a, b) * pv(c, d) - pv(a, c) * pv(b, d) + pv(a, d) * pv(b, c))
    return Ideal(R, gens)


class TestGroebner:
    def test_single_variable(self):
        R = PolyRing(F, ["x", "y"])
        x, _ = R.gens()
        assert groebner_basis([x]) == [x]

    def test_twisted_cubic_already_basis(self):
        I = twisted_cubic_ideal()
        gb = I.groebner()
        assert len(gb) == 3
        assert {g.degree() for g in gb} == {2}
        # every S-polynomial reduces to zero under the naive oracle too
        assert spoly_reduces_to_zero(gb)
        for gi, gj in itertools.combinations(gb, 2):
            li, lj = gi.lead_exps(), gj.lead_exps()
            lcm = tuple(max(a, b) for a, b in zip(li, lj))
            R = gi.ring
            mi = R.monomial(tuple(a - b for a, b in zip(lcm, li)))
            mj = R.monomial(tuple(a - b for a, b in zip(lcm, lj)))
            s = mi * gi.scale(R.field.inv(gi.lead_coeff())) - mj * gj.scale(
                R.field.inv(gj.lead_coeff())
            )
            assert naive_divide(s, gb).is_zero()

    def test_pluecker_dim_degree(self):
        G = pluecker_g14()
        assert G.dim_degree() == (6, 5)

    def test_determinism(self):
        I1 = twisted_cubic_ideal()
        I2 = twisted_cubic_ideal()
        a = [g.terms for g in I1.groebner()]
        b = [g.terms for g in I2.groebner()]
        assert a == b

    def test_membership_vs_linear_algebra(self):
        rng = random.Random(11)
        hits = 0
        for trial in range(20):
            nv = rng.choice([2, 3, 4])
            R = PolyRing(F, [f"x{i}" for i in range(nv)])
            gens = [R.random_poly(rng.choice([1, 2]), rng) for _ in range(2)]
            I = Ideal(R, gens)
            # a member: random combination
            f = R.zero
            for g in gens:
                f = f + g * R.random_poly(rng.choice([0, 1]), rng)
            nf_member = I.contains(f)
            assert nf_member == brute_force_member(f, gens, F.p) or f.is_zero()
            # a random polynomial of small degree
            h = R.random_poly(2, rng)
            assert I.contains(h) == brute_force_member(h, gens, F.p)
            hits += 1
        assert hits == 20


# -- elimination, saturation, quotient -----------------------------------------


class TestIdealOps:
    def test_eliminate_parabola(self):
        R = PolyRing(F, ["t", "x", "y"])
        t, x, y = R.gens()
        E = Ideal(R, [x - t, y - t * t]).eliminate(1)
        (g,) = E.gens
        assert g.monic().as_dict() in ({(2, 0): 1, (0, 1): F.p - 1},)

    def test_eliminate_veronese_conic(self):
        # affine graph of (s,t) -> (s^2, st, t^2); both the affine ideal and
        # the source-saturated projective graph eliminate to the conic
        R = PolyRing(F, ["s", "t", "x", "y", "z"])
        s, t, x, y, z = R.gens()
        conic = {(0, 2, 0): 1, (1, 0, 1): F.p - 1}
        E = Ideal(R, [x - s * s, y - s * t, z - t * t]).eliminate(2)
        assert [g.monic().as_dict() for g in E.groebner()] == [conic]
        graph = Ideal(
            R,
            [x * s * t - y * s * s, x * t * t - z * s * s, y * t * t - z * s * t],
        )
        E2 = graph.saturate(Ideal(R, [s, t])).eliminate(2)
        assert [g.monic().as_dict() for g in E2.groebner()] == [conic]

    def test_quotient_basic(self):
        R = PolyRing(F, ["x", "y"])
        x, y = R.gens()
        Q = Ideal(R, [x * y]).quotient(Ideal(R, [x]))
        assert [g.monic() for g in Q.groebner()] == [y]

    def test_quotient_removes_irrelevant(self):
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        f = x * x + y * z  # irreducible quadric
        I = Ideal(R, [x * f, y * f])
        S = I.saturate(Ideal(R, [x, y]))
        assert [g.monic() for g in S.groebner()] == [f.monic()]

    def test_saturate_idempotent(self):
        R = PolyRing(F, ["x", "y"])
        x, y = R.gens()
        I = Ideal(R, [x * x * y])
        J = Ideal(R, [x])
        S1 = I.saturate(J)
        S2 = S1.saturate(J)
        assert [g.terms for g in S1.groebner()] == [g.terms for g in S2.groebner()]

    def test_quotient_contains_ideal(self):
        rng = random.Random(23)
        R = PolyRing(F, ["x", "y", "z"])
        for _ in range(5):
            I = Ideal(R, [R.random_poly(2, rng)])
            J = Ideal(R, [R.random_poly(1, rng)])
            Q = I.quotient(J)
            assert Q.contains_ideal(I)


# -- hilbert series -----------------------------------------------------------------


class TestHilbert:
    def test_projective_plane(self):
        R = PolyRing(F, ["x", "y", "z"])
        I = Ideal(R, [])
        assert I.hilbert_numerator() == [1] or I.hilbert_numerator() == (1,)
        assert I.dim_degree() == (2, 1)

    def test_twisted_cubic_series(self):
        I = twisted_cubic_ideal()
        # numerator over (1-t)^4 is 1 - 3t^2 + 2t^3 = (1+2t)(1-t)^2
        assert list(I.hilbert_numerator()) == [1, 0, -3, 2]
        assert I.dim_degree() == (1, 3)
        # h^0(O_{P1}(3t)) = 3t + 1 oracle
        for d in range(1, 8):
            assert I.hilbert_function(d) == 3 * d + 1

    def test_hilbert_vs_monomial_count(self):
        rng = random.Random(7)
        R = PolyRing(F, ["x", "y", "z"])
        for _ in range(10):
            gens = [R.random_poly(rng.choice([1, 2, 3]), rng) for _ in range(2)]
            I = Ideal(R, gens)
            gb = I.groebner()
            leads = {g.lead_exps() for g in gb}
            for d in range(5):
                count = 0
                for mk in R.monomials_of_degree(d):
                    e = R.decode(mk)
                    if not any(all(a >= b for a, b in zip(e, le)) for le in leads):
                        count += 1
                assert I.hilbert_function(d) == count

    def test_zero_dim_degree_equals_length(self):
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        # three distinct points on a line in P^2
        I = Ideal(R, [x * y * (x - y), z])
        Isat = I.saturate_irrelevant(random.Random(1))
        dim, deg = Isat.dim_degree()
        assert (dim, deg) == (0, 3)
        assert Isat.hilbert_function(6) == 3

    def test_single_point(self):
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        I = Ideal(R, [x, y])
        assert I.dim_degree() == (0, 1)

    def test_nonhomogeneous_rejected(self):
        R = PolyRing(F, ["x", "y"])
        x, y = R.gens()
        with pytest.raises(ValueError):
            Ideal(R, [x * x - y]).hilbert_numerator()

    def test_unit_ideal_empty(self):
        R = PolyRing(F, ["x", "y"])
        I = Ideal(R, [R.one])
        assert I.dim_degree() == (-1, 0)


class TestSerialization:
    def test_round_trip(self):
        I = twisted_cubic_ideal()
        J = Ideal.from_json(I.to_json())
        assert [g.terms for g in J.gens] == [g.terms for g in I.gens]
        assert J.ring == I.ring
