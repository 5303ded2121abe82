"""Rational map operations: images, projections, inversion."""

import random

import pytest

from gmfourfolds.ideals import Ideal
from gmfourfolds.maps import (
    RationalMap,
    invert_birational,
    certify_inverse_forms,
    linear_projection,
)
from gmfourfolds.ring import PolyRing, PrimeField

F = PrimeField(65521)


class TestImage:
    def test_identity_system_fixes_conic(self):
        R = PolyRing(F, ["x", "y", "z"])
        T = PolyRing(F, ["a", "b", "c"])
        x, y, z = R.gens()
        phi = RationalMap(R, T, [x, y, z])
        conic = Ideal(R, [x * z - y * y])
        img = phi.image(conic)
        gb = img.groebner()
        assert len(gb) == 1
        a, b, c = T.gens()
        assert gb[0].monic() == (a * c - b * b).monic() or gb[0].monic() == (
            b * b - a * c
        ).monic()

    def test_veronese_image_of_line(self):
        R = PolyRing(F, ["s", "t"])
        T = PolyRing(F, ["x", "y", "z"])
        s, t = R.gens()
        nu = RationalMap(R, T, [s * s, s * t, t * t])
        img = nu.image(Ideal(R, []))
        assert img.dim_degree() == (1, 2)

    def test_image_of_base_locus_rejected(self):
        R = PolyRing(F, ["x", "y", "z"])
        T = PolyRing(F, ["a", "b", "c"])
        x, y, z = R.gens()
        phi = RationalMap(R, T, [x * y, x * z, x * x])
        with pytest.raises(ValueError):
            phi.image(Ideal(R, [x]))

    def test_quadratic_cremona_image_is_plane(self):
        R = PolyRing(F, ["x", "y", "z"])
        T = PolyRing(F, ["a", "b", "c"])
        x, y, z = R.gens()
        phi = RationalMap(R, T, [y * z, x * z, x * y])
        img = phi.image(Ideal(R, []))
        assert img.is_zero() or img.dim_degree() == (2, 1)


class TestProjection:
    def test_space_conic_from_external_point(self):
        R = PolyRing(F, ["x", "y", "z", "w"])
        x, y, z, w = R.gens()
        # conic x z = y^2 in the plane w = 0, center point (0:0:0:1)
        conic = Ideal(R, [x * z - y * y, w])
        center = Ideal(R, [x, y, z])
        img, proj = linear_projection(center, conic)
        assert img.dim_degree() == (1, 2)

    def test_center_containing_scheme_rejected(self):
        R = PolyRing(F, ["x", "y", "z"])
        x, y, z = R.gens()
        pt = Ideal(R, [x, y])
        with pytest.raises(ValueError):
            linear_projection(pt, pt)


class TestInversion:
    def test_invert_projection_of_conic(self):
        # project the plane conic from a point on it: the inverse of the
        # resulting P^1-parametrization has quadric forms
        rng = random.Random(3)
        R = PolyRing(F, ["x", "y", "z"])  # plane
        L = PolyRing(F, ["u", "v"])  # line
        x, y, z = R.gens()
        conic = Ideal(R, [x * z - y * y])

        def sample(rr):
            s = rr.randrange(F.p)
            t = rr.randrange(1, F.p)
            return (s * s % F.p, s * t % F.p, t * t % F.p)

        def forward(pt):
            # projection from (1:0:0): (y : z), defined away from the point
            if pt[1] == 0 and pt[2] == 0:
                raise ValueError("base point")
            return (pt[1], pt[2])

        inv = invert_birational(
            forward_eval=forward,
            sample_source=sample,
            source_ring=R,
            target_ring=L,
            inverse_degree=2,
            source_ideal=conic,
            rng=rng,
        )
        certify_inverse_forms(inv, [y, z], conic)
        # the inverse parametrizes the conic
        u, v = L.gens()
        for g in conic.gens:
            comp = g.substitute(L, inv.forms)
            assert comp.is_zero()

    def test_cremona_involution(self):
        rng = random.Random(9)
        R = PolyRing(F, ["x", "y", "z"])
        T = PolyRing(F, ["a", "b", "c"])
        x, y, z = R.gens()
        forms = [y * z, x * z, x * y]

        def sample(rr):
            return tuple(rr.randrange(1, F.p) for _ in range(3))

        def forward(pt):
            p = F.p
            return (pt[1] * pt[2] % p, pt[0] * pt[2] % p, pt[0] * pt[1] % p)

        inv = invert_birational(
            forward_eval=forward,
            sample_source=sample,
            source_ring=R,
            target_ring=T,
            inverse_degree=2,
            source_ideal=None,
            rng=rng,
            forward_forms=forms,
        )
        a, b, c = T.gens()
        assert [f.monic() for f in inv.forms] == [b * c, a * c, a * b]
