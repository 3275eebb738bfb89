"""Certified equilibrium search, classification, and index topology."""

from fractions import Fraction

import pytest

from gbtcycles.equilibria import (
    BoundaryContactError,
    DegenerateIndexError,
    classify,
    euler_characteristic,
    find_equilibria,
    poincare_index,
    winding_number,
)
from gbtcycles.sysdsl import parse_system

BOX = ((Fraction(-5), Fraction(5)), (Fraction(-5), Fraction(5)))

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
QUAD_CENTER = "name: qc\nds1/dt = s1^2 - s2\nds2/dt = s1*s2 + s1\n"


class TestClassify:
    def test_chart_labels(self):
        f = Fraction
        cases = [
            (((f(1), f(0)), (f(0), f(-1))), "saddle"),
            (((f(3), f(0)), (f(0), f(1))), "source-node"),
            (((f(-3), f(0)), (f(0), f(-1))), "sink-node"),
            (((f(1), f(-2)), (f(2), f(1))), "source-focus"),
            (((f(-1), f(-2)), (f(2), f(-1))), "sink-focus"),
            (((f(0), f(-1)), (f(1), f(0))), "linear-center"),
            (((f(1), f(1)), (f(1), f(1))), "degenerate"),
        ]
        for jac, expected in cases:
            assert classify(jac) == expected

    def test_boundary_case_equal_roots(self):
        # tr^2 = 4 det sits with the nodes, not the foci
        f = Fraction
        assert classify(((f(2), f(0)), (f(0), f(2)))) == "source-node"

    def test_index_from_matrix(self):
        f = Fraction
        assert poincare_index(((f(1), f(0)), (f(0), f(-1)))) == -1
        assert poincare_index(((f(2), f(0)), (f(0), f(3)))) == 1

    def test_index_degenerate_rejected(self):
        f = Fraction
        with pytest.raises(DegenerateIndexError):
            poincare_index(((f(1), f(1)), (f(1), f(1))))


class TestFindEquilibria:
    def test_cubic_origin(self):
        vf = parse_system(CUBIC)
        eqs = find_equilibria(vf, BOX)
        assert len(eqs) == 1
        eq = eqs[0]
        assert eq.certified
        assert eq.is_exact()
        assert eq.exact_point == (0, 0)
        assert eq.trace == -2
        assert eq.det == 2
        assert eq.classification == "sink-focus"
        assert eq.index == 1

    def test_quintic_origin(self):
        eqs = find_equilibria(parse_system(QUINTIC), BOX)
        assert len(eqs) == 1
        assert eqs[0].exact_point == (0, 0)
        assert eqs[0].trace == 8
        assert eqs[0].det == 17
        assert eqs[0].classification == "source-focus"

    def test_quad_center_origin(self):
        eqs = find_equilibria(parse_system(QUAD_CENTER), BOX)
        assert len(eqs) == 1
        assert eqs[0].exact_point == (0, 0)
        assert eqs[0].trace == 0
        assert eqs[0].det == 1
        assert eqs[0].classification == "linear-center"

    def test_three_equilibria_pitchfork(self):
        vf = parse_system("name: p\nds1/dt = s1 - s1^3\nds2/dt = -s2\n")
        eqs = find_equilibria(vf, BOX)
        points = [eq.exact_point for eq in eqs]
        assert points == [(-1, 0), (0, 0), (1, 0)]
        labels = [eq.classification for eq in eqs]
        assert labels == ["sink-node", "saddle", "sink-node"]
        assert [eq.index for eq in eqs] == [1, -1, 1]

    def test_rational_root_snapped_exactly(self):
        vf = parse_system("name: r\nds1/dt = 2*s1 - 1\nds2/dt = 3*s2 + 2\n")
        eqs = find_equilibria(vf, BOX)
        assert len(eqs) == 1
        assert eqs[0].exact_point == (Fraction(1, 2), Fraction(-2, 3))

    def test_irrational_root_located(self):
        # s1^2 = 2 has no rational root; the point is certified numerically
        vf = parse_system("name: i\nds1/dt = s1^2 - 2\nds2/dt = s2\n")
        box = ((Fraction(0), Fraction(5)), (Fraction(-5), Fraction(5)))
        eqs = find_equilibria(vf, box)
        assert len(eqs) == 1
        assert eqs[0].certified
        assert abs(eqs[0].point[0] - 2 ** 0.5) < 1e-9
        assert abs(eqs[0].point[1]) < 1e-9

    def test_params_must_be_bound(self):
        vf = parse_system("name: p\nparams: m\nds1/dt = m*s1\nds2/dt = -s2\n")
        with pytest.raises(ValueError):
            find_equilibria(vf, BOX)

    def test_boundary_root_raises(self):
        vf = parse_system("name: b\nds1/dt = s1 - 1\nds2/dt = s2\n")
        box = ((Fraction(-1), Fraction(1)), (Fraction(-1), Fraction(1)))
        with pytest.raises(BoundaryContactError):
            find_equilibria(vf, box)


class TestTopology:
    def test_chi_single_focus(self):
        topo = euler_characteristic(find_equilibria(parse_system(CUBIC), BOX))
        assert topo.chi == 1
        assert topo.gbt_sign == "positive"

    def test_chi_sums_indices(self):
        vf = parse_system("name: p\nds1/dt = s1 - s1^3\nds2/dt = -s2\n")
        topo = euler_characteristic(find_equilibria(vf, BOX))
        assert topo.chi == 1

    def test_chi_saddle_nonpositive(self):
        vf = parse_system("name: s\nds1/dt = s1\nds2/dt = -s2\n")
        topo = euler_characteristic(find_equilibria(vf, BOX))
        assert topo.chi == -1
        assert topo.gbt_sign == "nonpositive"

    def test_winding_matches_index(self):
        cases = [
            (CUBIC, 1),
            ("name: s\nds1/dt = s1\nds2/dt = -s2\n", -1),
        ]
        for text, expected in cases:
            vf = parse_system(text)
            w = winding_number(vf, (0.0, 0.0), 0.5)
            assert w == expected
