"""Scheme-level operations: invariants, smoothness, double points."""

import random

import pytest

from gmfourfolds.ideals import Ideal
from gmfourfolds.ring import PolyRing, PrimeField
from gmfourfolds.schemes import (
    ConstructionError,
    EmbeddedScheme,
    Parametrization,
    double_point_count,
    image_ideal_pieces,
    parametrize_conic,
    parametrize_line,
    saturated_image_ideal,
    smoothness_certificate,
    strip_common_binary_factor,
)

F = PrimeField(65521)


def veronese_parametrization():
    R = PolyRing(F, ["s0", "s1", "s2"])
    s0, s1, s2 = R.gens()
    forms = [s0 * s0, s0 * s1, s0 * s2, s1 * s1, s1 * s2, s2 * s2]
    return Parametrization("P2", R, forms)


def _monomial_exponents(d):
    out = []
    for a in range(d, -1, -1):
        for b in range(d - a, -1, -1):
            out.append((a, b, d - a - b))
    return out


def _project_from_secant_point(par, a, b, rng):
    """Project a plane parametrization from the sum of two image points."""
    import numpy as np

    from gmfourfolds.linalg import nullspace

    p = F.p
    va = par.evaluate(a)
    vb = par.evaluate(b)
    center = tuple((x + y) % p for x, y in zip(va, vb))
    comp = nullspace(np.array([center], dtype=np.int64), p)
    forms = []
    for row in comp:
        f = par.ring.zero
        for c, g in zip(row, par.forms):
            if c:
                f = f + g.scale(int(c))
        forms.append(f)
    return Parametrization("P2", par.ring, forms)


def veronese_surface():
    rng = random.Random(1)
    par = veronese_parametrization()
    T = PolyRing(F, [f"x{i}" for i in range(6)])
    I = saturated_image_ideal(par.forms, Ideal(par.ring, []), T, 2, rng)
    return EmbeddedScheme(I, parametrization=par, structure=("blown_plane", 0))


class TestInvariants:
    def test_veronese(self):
        S = veronese_surface()
        assert S.surface_invariants() == (4, 0, 1)
        ch = S.chern_numbers()
        assert ch.k2 == 9 and ch.euler == 3 and ch.chi() == 1

    def test_quadric_surface(self):
        rng = random.Random(2)
        R = PolyRing(F, ["a0", "a1", "b0", "b1"])
        a0, a1, b0, b1 = R.gens()
        par = Parametrization("P1xP1", R, [a0 * b0, a0 * b1, a1 * b0, a1 * b1])
        T = PolyRing(F, [f"x{i}" for i in range(4)])
        I = saturated_image_ideal(par.forms, Ideal(R, []), T, 2, rng)
        S = EmbeddedScheme(I, parametrization=par, structure=("scroll",))
        assert S.surface_invariants() == (2, 0, 1)
        ch = S.chern_numbers()
        assert ch.k2 == 8 and ch.euler == 4

    def test_wrong_dimension_rejected(self):
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        S = EmbeddedScheme(Ideal(R, [x]))
        with pytest.raises(ValueError):
            S.surface_invariants()


class TestSmoothness:
    def test_veronese_proven_smooth(self):
        rng = random.Random(3)
        S = veronese_surface()
        cert = smoothness_certificate(S, rng)
        assert cert.level in ("PROVEN_SMOOTH", "LIKELY_SMOOTH")
        assert cert.at_least("LIKELY_SMOOTH")

    def test_nodal_cubic_singular(self):
        rng = random.Random(4)
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        # node at (0:0:1)
        I = Ideal(R, [y * y * z - x * x * (x + z)])
        cert = smoothness_certificate(I, rng)
        assert cert.level == "SINGULAR"
        assert cert.witness is not None
        wx, wy, wz = cert.witness
        assert (wx, wy) == (0, 0) and wz != 0

    def test_cone_singular_at_vertex(self):
        rng = random.Random(5)
        R = PolyRing(F, ["x", "y", "z", "w"])
        x, y, z, w = R.gens()
        I = Ideal(R, [x * z - y * y])  # cone over a conic, vertex (0:0:0:1)
        cert = smoothness_certificate(I, rng)
        assert cert.level == "SINGULAR"
        assert cert.witness[:3] == (0, 0, 0)

    def test_smooth_quadric_threefold(self):
        rng = random.Random(6)
        R = PolyRing(F, ["x0", "x1", "x2", "x3", "x4"])
        g = R.zero
        for i in range(5):
            g = g + R.var(i) * R.var(i)
        cert = smoothness_certificate(Ideal(R, [g]), rng)
        assert cert.level == "PROVEN_SMOOTH"


class TestDoublePoints:
    def test_veronese_embedding_has_none(self):
        rng = random.Random(7)
        par = veronese_parametrization()
        assert double_point_count(par, rng) == 0

    def test_quadratic_veronese_secant_projection_not_finite(self):
        # the quadratic Veronese is secant defective: through a rank-2
        # center there is a whole pencil of secants, so the double locus
        # is a curve and the operation must refuse
        rng = random.Random(8)
        par = veronese_parametrization()
        proj = _project_from_secant_point(par, (1, 0, 0), (0, 0, 1), rng)
        with pytest.raises(ConstructionError):
            double_point_count(proj, rng)

    def test_cubic_veronese_secant_projection_one_node(self):
        # nu_3(P^2) in P^9 is not secant defective: a general secant point
        # lies on a single secant, so the projection has exactly one node
        rng = random.Random(88)
        R = PolyRing(F, ["s0", "s1", "s2"])
        forms = [R.monomial(e) for e in _monomial_exponents(3)]
        par = Parametrization("P2", R, forms)
        proj = _project_from_secant_point(par, (1, 2, 3), (5, 1, 4), rng)
        assert double_point_count(proj, rng) == 1


class TestCurves:
    def test_conic_parametrization(self):
        rng = random.Random(9)
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        q = x * z - y * y
        par = parametrize_conic(q, rng)
        for _ in range(5):
            pt = par.evaluate((rng.randrange(F.p), 1))
            assert q.evaluate(pt) == 0

    def test_line_parametrization(self):
        rng = random.Random(10)
        R = PolyRing(F, ["x", "y", "z"])
        par = parametrize_line([(1, 2, 3)], R, rng)
        assert par.forms[0].degree() == 1
        assert par.evaluate((1, 0)) == (1, 2, 3)

    def test_strip_common_factor(self):
        R = PolyRing(F, ["t0", "t1"])
        t0, t1 = R.gens()
        g = t0 * t0 + t1 * t1
        forms = [g * t0 * t0, g * t0 * t1, g * t1 * t1]
        out = strip_common_binary_factor(forms)
        assert [f.degree() for f in out] == [2, 2, 2]
        assert out[0].as_dict() == {(2, 0): 1}


class TestImagePieces:
    def test_veronese_quadric_count(self):
        rng = random.Random(11)
        par = veronese_parametrization()
        T = PolyRing(F, [f"x{i}" for i in range(6)])
        pieces = image_ideal_pieces(par.forms, Ideal(par.ring, []), T, [1, 2])
        assert len(pieces[1]) == 0
        assert len(pieces[2]) == 6
