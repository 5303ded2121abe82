"""Point solver and univariate factorization against planted data."""

import random

from gmfourfolds.ideals import Ideal
from gmfourfolds.points import (
    galois_orbits,
    projective_rational_points,
    quotient_basis,
    rational_points,
    sample_point_on,
)
from gmfourfolds.ring import PolyRing, PrimeField
from gmfourfolds.univariate import udivmod, ufactor, umul, uroots

P = 65521
F = PrimeField(P)


class TestUnivariate:
    def test_roots_of_planted_product(self):
        rng = random.Random(1)
        roots = sorted(rng.sample(range(P), 4))
        f = [1]
        for r in roots:
            f = umul(f, [(-r) % P, 1], P)
        assert uroots(f, P) == roots

    def test_factor_degrees(self):
        rng = random.Random(2)
        # (x^2 - a) irreducible for a non-square times two linear factors
        a = 3
        while pow(a, (P - 1) // 2, P) == 1:
            a += 1
        f = umul([(-a) % P, 0, 1], umul([1, 1], [2, 1], P), P)
        factors = ufactor(f, P, rng)
        degs = sorted(len(g) - 1 for g, m in factors)
        assert degs == [1, 1, 2]
        prod = [1]
        for g, m in factors:
            for _ in range(m):
                prod = umul(prod, g, P)
        assert udivmod(prod, f, P)[1] == []

    def test_multiplicity(self):
        f = umul([1, 1], umul([1, 1], [5, 1], P), P)
        factors = ufactor(f, P)
        assert sorted(m for _, m in factors) == [1, 2]


class TestAffinePoints:
    def test_planted_points(self):
        rng = random.Random(7)
        R = PolyRing(F, ["x", "y"])
        pts = {(3, 5), (10, 2), (7, 7)}
        # vanishing ideal: product interpolation, x-slices
        x, y = R.gens()
        gens = []
        fx = R.one
        for a, _ in pts:
            fx = fx * (x - R.constant(a))
        gens.append(fx)
        # Lagrange-style: y - g(x) through the points
        from gmfourfolds.linalg import as_matrix, solve
        import numpy as np

        A = [[pow(a, i, P) for i in range(3)] for a, _ in pts]
        b = [bb for _, bb in pts]
        sol = solve(as_matrix(A, P), np.array(b, dtype=np.int64), P)
        g = R.zero
        for i, c in enumerate(sol):
            g = g + (x ** i).scale(int(c))
        gens.append(y - g)
        I = Ideal(R, gens)
        assert len(quotient_basis(I)) == 3
        assert set(rational_points(I, rng)) == pts

    def test_orbit_split(self):
        rng = random.Random(9)
        R = PolyRing(F, ["x"])
        (x,) = R.gens()
        a = 3
        while pow(a, (P - 1) // 2, P) == 1:
            a += 1
        # one rational point and one conjugate quadratic pair
        f = (x - R.constant(4)) * (x * x - R.constant(a))
        orbits = galois_orbits(Ideal(R, [f]), rng)
        degs = sorted(k for _, k in orbits)
        assert degs == [1, 2]


class TestProjectivePoints:
    def test_three_points_on_line(self):
        rng = random.Random(4)
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        I = Ideal(R, [z, x * y * (x - y)])
        pts = projective_rational_points(I, rng)
        assert len(pts) == 3

    def test_sample_on_conic(self):
        rng = random.Random(5)
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        I = Ideal(R, [x * z - y * y])
        pt = sample_point_on(I, rng)
        assert all(g.evaluate(pt) == 0 for g in I.gens)
