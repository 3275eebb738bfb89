"""Singular locus extraction, the cycle verdict, and Hilbert tables."""

import math
from fractions import Fraction

import pytest

from gbtcycles.algebra import Polynomial, RationalFunction
from gbtcycles.equilibria import TopologyReport
from gbtcycles.riemann import curvature_pipeline
from gbtcycles.sysdsl import parse_system
from gbtcycles.verdict import (
    bezout_bound,
    christopher_lloyd_bound,
    gbt_limit_cycle_verdict,
    growth_table,
    hilbert_number,
    singular_locus,
    symmetry_check,
)

QUAD_CENTER = "name: qc\nds1/dt = s1^2 - s2\nds2/dt = s1*s2 + s1\n"

X = Polynomial.variable("x").reordered(("x", "y"))
Y = Polynomial.variable("y").reordered(("x", "y"))
ONE = Polynomial.one(("x", "y"))


def rf_over(den):
    return RationalFunction(ONE, den)


def positive_topology():
    return TopologyReport([], 1, "positive", [])


class TestSingularLocus:
    def test_quad_center_single_point(self):
        curv = curvature_pipeline(parse_system(QUAD_CENTER))
        locus = singular_locus(curv)
        assert len(locus.components) == 1
        assert len(locus.points) >= 1
        for x, y in locus.points:
            assert math.hypot(x - 0.0, y - (-1.0)) <= 1e-6
        assert locus.symmetric is False
        assert locus.indeterminate == []

    def test_quad_center_stable_across_grids(self):
        curv = curvature_pipeline(parse_system(QUAD_CENTER))
        for grid in (64, 256):
            locus = singular_locus(curv, grid=grid)
            assert len(locus.components) == 1
            x, y = locus.points[0]
            assert math.hypot(x, y + 1.0) <= 1e-6

    def test_unit_circle(self):
        locus = singular_locus(rf_over(X**2 + Y**2 - 1), box=((-3, 3), (-3, 3)))
        assert len(locus.components) == 1
        assert locus.symmetric is True
        for x, y in locus.points:
            assert abs(math.hypot(x, y) - 1.0) <= 1e-6

    def test_two_circles(self):
        den = (X**2 + Y**2 - 1) * (X**2 + Y**2 - 4)
        locus = singular_locus(rf_over(den), box=((-3, 3), (-3, 3)))
        assert len(locus.components) == 2
        # components hold indices into locus.points
        radii = sorted(
            sum(math.hypot(*locus.points[i]) for i in comp) / len(comp)
            for comp in locus.components
        )
        assert abs(radii[0] - 1.0) <= 1e-6
        assert abs(radii[1] - 2.0) <= 1e-6

    def test_shifted_circle_not_symmetric(self):
        den = (X - 1) ** 2 + Y**2 - Polynomial.constant(Fraction(1, 4), ("x", "y"))
        locus = singular_locus(rf_over(den), box=((-3, 3), (-3, 3)))
        assert len(locus.components) == 1
        assert locus.symmetric is False

    def test_zero_free_denominator_empty(self):
        locus = singular_locus(rf_over(X**2 + Y**2 + 1), box=((-3, 3), (-3, 3)))
        assert locus.points == []
        assert locus.components == []
        assert locus.symmetric is True

    def test_constant_denominator_empty(self):
        locus = singular_locus(RationalFunction(X, ONE))
        assert locus.points == []

    def test_common_zero_is_indeterminate(self):
        # numerator and denominator both vanish at the origin
        locus = singular_locus(RationalFunction(X, X**2 + Y**2),
                               box=((-2, 2), (-2, 2)))
        assert locus.points == []
        assert len(locus.indeterminate) == 1
        x, y = locus.indeterminate[0]
        assert math.hypot(x, y) <= 1e-6

    def test_repeated_factor_deflated(self):
        # a squared factor has the same zero set as the circle itself
        locus = singular_locus(rf_over((X**2 + Y**2 - 1) ** 2),
                               box=((-3, 3), (-3, 3)))
        assert len(locus.components) == 1
        for x, y in locus.points:
            assert abs(math.hypot(x, y) - 1.0) <= 1e-6


class TestSymmetryCheck:
    def test_empty_is_symmetric(self):
        assert symmetry_check([]) is True

    def test_mirrored_pair(self):
        assert symmetry_check([(0.5, 0.25), (-0.5, -0.25)]) is True

    def test_lone_point_fails(self):
        assert symmetry_check([(0.5, 0.25)]) is False

    def test_tolerance_respected(self):
        pts = [(1.0, 0.0), (-1.0, 5e-4)]
        assert symmetry_check(pts, tol=1e-3) is True
        assert symmetry_check(pts, tol=1e-5) is False


class TestVerdict:
    def test_two_circles_count_two(self):
        den = (X**2 + Y**2 - 1) * (X**2 + Y**2 - 4)
        locus = singular_locus(rf_over(den), box=((-3, 3), (-3, 3)))
        verdict = gbt_limit_cycle_verdict(positive_topology(), locus)
        assert verdict.sign == "positive"
        assert verdict.count == 2
        assert verdict.periodic_only is False

    def test_empty_locus_periodic_only(self):
        locus = singular_locus(rf_over(X**2 + Y**2 + 1), box=((-3, 3), (-3, 3)))
        verdict = gbt_limit_cycle_verdict(positive_topology(), locus)
        assert verdict.count == 0
        assert verdict.periodic_only is True

    def test_nonpositive_sign_blocks_count(self):
        den = (X**2 + Y**2 - 1) * (X**2 + Y**2 - 4)
        locus = singular_locus(rf_over(den), box=((-3, 3), (-3, 3)))
        topo = TopologyReport([], -1, "nonpositive", [])
        verdict = gbt_limit_cycle_verdict(topo, locus)
        assert verdict.count == 0
        assert verdict.periodic_only is False

    def test_asymmetric_locus_blocks_count(self):
        curv = curvature_pipeline(parse_system(QUAD_CENTER))
        locus = singular_locus(curv)
        verdict = gbt_limit_cycle_verdict(positive_topology(), locus)
        assert locus.symmetric is False
        assert verdict.count == 0
        assert verdict.periodic_only is True


class TestHilbertFormulas:
    def test_small_values(self):
        assert hilbert_number(2) == 4
        assert hilbert_number(3) == 24
        assert hilbert_number(4) == 60

    def test_closed_form_general(self):
        for n in (5, 11, 100):
            assert hilbert_number(n) == 2 * (n - 1) * (4 * (n - 1) - 2)

    def test_domain(self):
        with pytest.raises(ValueError):
            hilbert_number(1)

    def test_ratio_limit(self):
        n = 10**4
        assert hilbert_number(n) / n**2 > 7.99

    def test_christopher_lloyd_exact(self):
        assert christopher_lloyd_bound(1) == Fraction(1, 2)
        assert christopher_lloyd_bound(2) == 3
        assert christopher_lloyd_bound(3) == 25

    def test_christopher_lloyd_domain(self):
        with pytest.raises(ValueError):
            christopher_lloyd_bound(0)

    def test_bezout(self):
        assert bezout_bound(3, 4) == 12
        assert bezout_bound(5, 5) == 25

    def test_growth_table_shape(self):
        table = growth_table(6, k_max=2)
        assert [row[0] for row in table.rows] == [2, 3, 4, 5, 6]
        assert [row[1] for row in table.rows] == [4, 24, 60, 112, 180]
        assert table.cl_rows == [(1, Fraction(1, 2)), (2, 3)]
