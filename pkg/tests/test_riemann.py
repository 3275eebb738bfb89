"""Metric construction and the curvature pipeline."""

import math
import random
from fractions import Fraction

import pytest

from gbtcycles.algebra import Polynomial, RationalFunction
from gbtcycles.riemann import (
    DegenerateMetricError,
    MetricTensor,
    christoffel,
    curvature_pipeline,
    gauss_curvature_2d_numeric,
    gbt_metric,
    metric_inverse,
    riemann_tensor,
    scalar_curvature_2d_diagonal,
)
from gbtcycles.sysdsl import parse_system

ROTATION = "name: rot\nds1/dt = -s2\nds2/dt = s1\n"
QUAD_CENTER = "name: qc\nds1/dt = s1^2 - s2\nds2/dt = s1*s2 + s1\n"
CUBIC = (
    "name: cubic\n"
    "ds1/dt = -s2 + s1*(s1^2 + s2^2 - 1)\n"
    "ds2/dt = s1 + s2*(s1^2 + s2^2 - 1)\n"
)
QUINTIC = (
    "name: quintic\n"
    "ds1/dt = -s2 + s1*(s1^2 + s2^2 - 1)*(s1^2 + s2^2 - 4)\n"
    "ds2/dt = s1 + s2*(s1^2 + s2^2 - 1)*(s1^2 + s2^2 - 4)\n"
)
CORPUS = (ROTATION, QUAD_CENTER, CUBIC, QUINTIC)


def s(name):
    return Polynomial.variable(name).reordered(("s1", "s2"))


class TestMetric:
    def test_quad_center_metric_entries(self):
        vf = parse_system(QUAD_CENTER)
        m = gbt_metric(vf)
        s1, s2 = s("s1"), s("s2")
        # G_ii = 2 * sum_j (d f_j / d coord_i)^2
        assert m.entries[0][0] == RationalFunction(
            2 * ((2 * s1) ** 2 + (s2 + 1) ** 2), 1)
        assert m.entries[1][1] == RationalFunction(2 * (1 + s1**2), 1)
        assert m.is_diagonal()

    def test_rotation_metric_is_constant(self):
        m = gbt_metric(parse_system(ROTATION))
        assert m.entries[0][0] == RationalFunction(
            Polynomial.constant(2, ("s1", "s2")), 1)
        assert m.entries[1][1] == m.entries[0][0]

    def test_degenerate_direction_rejected(self):
        vf = parse_system("name: d\nds1/dt = 1\nds2/dt = 1\n")
        with pytest.raises(DegenerateMetricError):
            gbt_metric(vf)

    def test_metric_inverse(self):
        m = gbt_metric(parse_system(QUAD_CENTER))
        inv = metric_inverse(m)
        one = RationalFunction(Polynomial.one(("s1", "s2")), 1)
        zero = RationalFunction(Polynomial.zero(("s1", "s2")), 1)
        for i in range(2):
            for j in range(2):
                acc = zero
                for k in range(2):
                    acc = acc + m.entries[i][k] * inv.entries[k][j]
                assert acc == (one if i == j else zero)

    def test_asymmetric_matrix_rejected(self):
        one = Polynomial.one(("x", "y"))
        with pytest.raises(Exception):
            MetricTensor(("x", "y"), ((one, one), (one + one, one)))


class TestTensorProperties:
    def test_christoffel_lower_symmetry(self):
        for text in CORPUS:
            gamma = christoffel(gbt_metric(parse_system(text)))
            n = len(gamma.coords)
            for a in range(n):
                for i in range(n):
                    for j in range(n):
                        assert gamma.gamma[a][i][j] == gamma.gamma[a][j][i]

    def test_riemann_last_pair_antisymmetry(self):
        for text in CORPUS:
            rm = riemann_tensor(christoffel(gbt_metric(parse_system(text))))
            n = len(rm.coords)
            for a in range(n):
                for b in range(n):
                    for c in range(n):
                        for d in range(n):
                            assert rm.components[a][b][c][d] == \
                                -rm.components[a][b][d][c]

    def test_pipeline_matches_liouville_shortcut(self):
        for text in CORPUS:
            vf = parse_system(text)
            full = curvature_pipeline(vf)
            short = scalar_curvature_2d_diagonal(gbt_metric(vf))
            assert full.expr == short.expr

    def test_convention_flips_sign(self):
        for text in (QUAD_CENTER, CUBIC):
            vf = parse_system(text)
            gbt = curvature_pipeline(vf, convention="gbt")
            std = curvature_pipeline(vf, convention="standard")
            assert std.expr == -gbt.expr

    def test_unknown_convention_rejected(self):
        with pytest.raises(ValueError):
            curvature_pipeline(parse_system(CUBIC), convention="mystery")


class TestScalarCurvature:
    def test_flat_rotation_curvature_is_zero(self):
        curv = curvature_pipeline(parse_system(ROTATION))
        assert curv.expr.numerator.is_zero()

    def test_quad_center_closed_form(self):
        # R = 1 / ((s1^2+1)^2 * (4 s1^2 + (s2+1)^2)) for this system
        curv = curvature_pipeline(parse_system(QUAD_CENTER))
        s1, s2 = s("s1"), s("s2")
        den = (s1**2 + 1) ** 2 * (4 * s1**2 + (s2 + 1) ** 2)
        expect = RationalFunction(Polynomial.one(("s1", "s2")), den)
        assert curv.expr == expect

    def test_quad_center_sample_values(self):
        curv = curvature_pipeline(parse_system(QUAD_CENTER))
        assert curv.evaluate({"s1": Fraction(0), "s2": Fraction(0)}) == 1
        assert curv.evaluate({"s1": Fraction(1), "s2": Fraction(0)}) == Fraction(1, 20)

    def test_cubic_origin_value(self):
        curv = curvature_pipeline(parse_system(CUBIC))
        assert curv.evaluate({"s1": Fraction(0), "s2": Fraction(0)}) == -1

    def test_evaluate_float_matches_exact(self):
        curv = curvature_pipeline(parse_system(QUAD_CENTER))
        rng = random.Random(512)
        for _ in range(20):
            px = Fraction(rng.randrange(-8, 9), 4)
            py = Fraction(rng.randrange(-8, 9), 4)
            exact = curv.evaluate({"s1": px, "s2": py})
            approx = curv.evaluate_float({"s1": float(px), "s2": float(py)})
            assert math.isclose(float(exact), approx, rel_tol=1e-9, abs_tol=1e-12)


def test_sphere_numeric_check():
    # round sphere of radius a in (theta, phi): E = a^2, G = a^2 sin^2 theta
    a = 1.3
    for theta in (0.4, 0.7, 1.1, 2.0):
        st, ct = math.sin(theta), math.cos(theta)
        k = gauss_curvature_2d_numeric(
            E=a * a, Ex=0.0, Ey=0.0, Eyy=0.0,
            G=a * a * st * st,
            Gx=2 * a * a * st * ct,
            Gy=0.0,
            Gxx=2 * a * a * math.cos(2 * theta),
        )
        r_standard = 2.0 * k
        assert abs(r_standard * a * a - 2.0) <= 1e-9
