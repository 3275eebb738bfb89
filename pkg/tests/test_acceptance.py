"""Acceptance criteria for the analysis toolkit, one test per criterion.

Each test is self-contained, pins its tolerances explicitly, and prints a
single summary line on success; run with -v to get one pass/fail line per
criterion. Reference expressions appearing here are frozen test data.
"""

import json
import math
import random
import time
from fractions import Fraction
from importlib import resources

from gbtcycles import cli
from gbtcycles.algebra import Polynomial, RationalFunction
from gbtcycles.equilibria import euler_characteristic, find_equilibria
from gbtcycles.oracle import find_limit_cycles, integrate, radial_reduction, return_map
from gbtcycles.riemann import (
    christoffel,
    curvature_pipeline,
    gbt_metric,
    riemann_tensor,
    scalar_curvature,
    scalar_curvature_2d_diagonal,
)
from gbtcycles.sysdsl import parse_system, parse_system_path
from gbtcycles.verdict import (
    bezout_bound,
    christopher_lloyd_bound,
    gbt_limit_cycle_verdict,
    hilbert_number,
    singular_locus,
)

_MODULE_T0 = time.perf_counter()

BOX = ((Fraction(-5), Fraction(5)), (Fraction(-5), Fraction(5)))
ALL_SYSTEMS = ("ex01", "ex01a", "ex02", "ex02a", "ex03")


def sys_file(name):
    return str(resources.files("gbtcycles") / "systems" / f"{name}.sys")


def load(name):
    return parse_system_path(sys_file(name))


def svars():
    x = Polynomial.variable("s1").reordered(("s1", "s2"))
    y = Polynomial.variable("s2").reordered(("s1", "s2"))
    return x, y


def test_criterion_1_quad_center_closed_form_curvature():
    t0 = time.perf_counter()
    curv = curvature_pipeline(load("ex03"))
    x, y = svars()
    den = (x**2 + 1) ** 2 * (4 * x**2 + (y + 1) ** 2)
    closed_form = RationalFunction(Polynomial.one(("s1", "s2")), den)
    assert curv.expr == closed_form
    assert curv.evaluate({"s1": Fraction(0), "s2": Fraction(0)}) == 1
    assert curv.evaluate({"s1": Fraction(1), "s2": Fraction(0)}) == Fraction(1, 20)
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    print(f"criterion 1 pass: R equals the closed form exactly; "
          f"R(0,0)=1, R(1,0)=1/20 ({elapsed:.2f}s)")


def _cubic_reference_expression():
    """Frozen reference R for the cubic system, as 4N / A^2."""
    x, y = svars()
    n = 4 * (
        18 * x**10
        - 3 * x**8 * (18 * y**2 + 17)
        - 80 * x**7 * y
        + x**6 * (-764 * y**4 + 116 * y**2 + 92)
        + 48 * x**5 * (y**3 + y)
        - 2 * x**4 * (382 * y**6 - 295 * y**4 + 38 * y**2 + 30)
        - 48 * x**3 * y**5
        - 2 * x**2 * (27 * y**8 - 58 * y**6 + 38 * y**4 + 12 * y**2 - 12)
        + 16 * x * y**5 * (5 * y**2 - 3)
        + 18 * y**10 - 51 * y**8 + 92 * y**6 - 60 * y**4 + 24 * y**2 - 4
    )
    a = (9 * x**4 + 2 * x**2 * (5 * y**2 - 3) + 4 * x * y + y**4 - 2 * y**2 + 2) * \
        (x**4 + 2 * x**2 * (5 * y**2 - 1) - 4 * x * y + 9 * y**4 - 6 * y**2 + 2)
    return RationalFunction(n, a * a)


def test_criterion_2_cubic_origin_value_and_magnitude_agreement():
    t0 = time.perf_counter()
    engine = curvature_pipeline(load("ex01"))
    reference = _cubic_reference_expression()

    origin = {"s1": Fraction(0), "s2": Fraction(0)}
    assert engine.evaluate(origin) == -1
    assert reference.evaluate(origin) == -1

    rng = random.Random(20240814)
    rel_tol = Fraction(1, 10**9)
    mismatches = []
    for _ in range(20):
        point = {"s1": Fraction(rng.randrange(-200, 201), 100),
                 "s2": Fraction(rng.randrange(-200, 201), 100)}
        e = abs(engine.evaluate(point))
        r = abs(reference.evaluate(point))
        scale = r if r else Fraction(1, 10**12)
        if abs(e - r) > rel_tol * scale:
            mismatches.append(
                f"  ({float(point['s1'])}, {float(point['s2'])}): "
                f"engine |R|={float(e)!r} reference |R|={float(r)!r}")
    if mismatches:
        print("compatibility report, magnitude mismatches:")
        for line in mismatches:
            print(line)
    assert not mismatches, f"{len(mismatches)} of 20 points disagree"
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    print(f"criterion 2 pass: R(0,0)=-1 and |R| matches the reference "
          f"expression at 20 rational points to 1e-9 ({elapsed:.2f}s)")


def test_criterion_3_jacobian_and_topology_facts():
    expected = {
        "ex01": (-2, 2, "sink-focus"),
        "ex02": (8, 17, "source-focus"),
        "ex03": (0, 1, "linear-center"),
    }
    for name, (tr, det, label) in expected.items():
        eqs = find_equilibria(load(name), BOX)
        assert len(eqs) == 1
        eq = eqs[0]
        assert eq.exact_point == (0, 0)
        assert eq.trace == tr
        assert eq.det == det
        assert eq.classification == label
        topo = euler_characteristic(eqs)
        assert topo.chi == 1
        assert topo.gbt_sign == "positive"
    print("criterion 3 pass: exact traces, determinants, chi=1 and "
          "positive sign on all three example systems")


def test_criterion_4_quad_center_verdict_chain():
    vf = load("ex03")
    curv = curvature_pipeline(vf)
    topo = euler_characteristic(find_equilibria(vf, BOX))
    locus = singular_locus(curv)

    assert len(locus.components) == 1
    for px, py in locus.points:
        assert math.hypot(px - 0.0, py + 1.0) <= 1e-6
    assert locus.symmetric is False

    verdict = gbt_limit_cycle_verdict(topo, locus)
    assert verdict.sign == "positive"
    assert verdict.count == 0
    assert verdict.periodic_only is True

    # the denominator root is (0, -1); the mirrored point (0, +1) is not a
    # root, so any account placing the divergence at (0, 1) contradicts the
    # formula it accompanies
    den = curv.expr.denominator
    assert den.evaluate({"s1": Fraction(0), "s2": Fraction(-1)}) == 0
    at_plus = den.evaluate({"s1": Fraction(0), "s2": Fraction(1)})
    assert at_plus != 0
    print("criterion 4 pass: locus = {(0,-1)} within 1e-6, asymmetric, "
          f"count 0, periodic-only; note: |R| diverges at (0,-1) while "
          f"den(0,+1) = {at_plus} != 0, so (0,+1) is not a divergence point")


def test_criterion_5_oracle_ground_truths():
    t0 = time.perf_counter()

    r1 = find_limit_cycles(load("ex01"))
    assert len(r1.cycles) == 1
    assert abs(r1.cycles[0].radius - 1.0) <= 1e-6
    assert r1.cycles[0].stability == "unstable"

    r2 = find_limit_cycles(load("ex02"))
    assert len(r2.cycles) == 2
    assert abs(r2.cycles[0].radius - 1.0) <= 1e-6
    assert r2.cycles[0].stability == "stable"
    assert abs(r2.cycles[1].radius - 2.0) <= 1e-6
    assert r2.cycles[1].stability == "unstable"

    vf3 = load("ex03")
    r3 = find_limit_cycles(vf3)
    assert r3.center_detected is True
    assert r3.cycles == []
    checked = 0
    for k in range(1, 21):
        r = 0.9 * k / 20.0
        p, _ = return_map(vf3, r, escape_norm=28.0)
        assert p is not None and math.isfinite(p)
        assert abs(p - r) <= 1e-6
        checked += 1
    assert checked == 20

    elapsed = time.perf_counter() - t0
    assert elapsed < 120.0
    print(f"criterion 5 pass: cycle radii/stabilities and the center verdict "
          f"match ground truth; |P(r)-r| <= 1e-6 on 20 radii ({elapsed:.1f}s)")


def test_criterion_6_hilbert_tables():
    assert hilbert_number(2) == 4
    assert hilbert_number(3) == 24
    assert hilbert_number(4) == 60
    n = 10**4
    assert hilbert_number(n) / n**2 > 7.99
    assert christopher_lloyd_bound(3) == 25
    for d in range(2, 7):
        assert bezout_bound(d, d) == d * d
    print("criterion 6 pass: H(2,3,4) = 4,24,60; H(1e4)/1e8 > 7.99; "
          "lower bound at k=3 (degree 7) equals 25; bezout(n,n)=n^2")


def test_criterion_7_tensor_engine_properties():
    flat = curvature_pipeline(parse_system("name: rot\nds1/dt = -s2\nds2/dt = s1\n"))
    assert flat.expr.numerator.is_zero()

    for name in ALL_SYSTEMS:
        vf = load(name)
        metric = gbt_metric(vf)
        gamma = christoffel(metric)
        n = len(gamma.coords)
        for a in range(n):
            for i in range(n):
                for j in range(n):
                    assert gamma.gamma[a][i][j] == gamma.gamma[a][j][i]
        rm = riemann_tensor(gamma, "gbt")
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    for d in range(n):
                        assert rm.components[a][b][c][d] == \
                            -rm.components[a][b][d][c]
        r_gbt = scalar_curvature(metric, rm)
        shortcut = scalar_curvature_2d_diagonal(metric, "gbt")
        assert r_gbt.expr == shortcut.expr
        r_std = scalar_curvature(metric, riemann_tensor(gamma, "standard"))
        assert r_std.expr == -r_gbt.expr
    print("criterion 7 pass: flat field gives R=0; symmetry, antisymmetry, "
          "shortcut equality and exact convention flip hold on all five "
          "bundled systems")


def test_criterion_8_numerics_properties():
    # symbolic partials against central finite differences
    vf = load("ex02")
    jac = vf.jacobian()
    rng = random.Random(777)
    h = 1e-6
    for _ in range(50):
        px = rng.uniform(-2.0, 2.0)
        py = rng.uniform(-2.0, 2.0)
        for i, comp in enumerate(vf.components):
            for j, sname in enumerate(vf.states):
                sym = jac[i][j].evaluate_float({"s1": px, "s2": py})
                hi = {"s1": px, "s2": py}
                lo = {"s1": px, "s2": py}
                hi[sname] += h
                lo[sname] -= h
                fd = (comp.evaluate_float(hi) - comp.evaluate_float(lo)) / (2 * h)
                assert abs(fd - sym) <= 1e-6 * (1.0 + abs(sym))

    # integrator convergence order on the rotation field
    rot = parse_system("name: rot\nds1/dt = -s2\nds2/dt = s1\n")
    errs = []
    for step in (0.2, 0.1, 0.05):
        traj = integrate(rot, (1.0, 0.0), (0.0, 2 * math.pi), fixed_step=step)
        errs.append(math.hypot(traj.ys[-1][0] - 1.0, traj.ys[-1][1]))
    slope = min(
        math.log(errs[i] / errs[i + 1]) / math.log(2.0) for i in range(2)
    )
    assert slope >= 4.0

    # radial reduction against bisected return-map fixed points
    for name in ("ex01", "ex02"):
        vf = load(name)
        red = radial_reduction(vf)
        found = find_limit_cycles(vf)
        assert red is not None
        assert len(red.radii) == len(found.cycles)
        for r, cycle in zip(red.radii, found.cycles):
            assert abs(r - cycle.radius) <= 1e-6
    print(f"criterion 8 pass: FD agreement at 50 points, integrator order "
          f"slope {slope:.2f} >= 4, radial radii match return-map fixed "
          f"points to 1e-6")


def test_criterion_9_determinism(tmp_path):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    argv = ["analyze", sys_file("ex03"), "--box", "-3:3,-3:3", "--report"]
    assert cli.main(argv + [str(first)]) == 0
    assert cli.main(argv + [str(second)]) == 0
    assert first.read_bytes() == second.read_bytes()
    report = json.loads(first.read_text())
    assert report["agreement"]["status"] == "agree"

    elapsed = time.perf_counter() - _MODULE_T0
    assert elapsed < 600.0
    print(f"criterion 9 pass: repeated analyze runs byte-identical; "
          f"acceptance module finished in {elapsed:.1f}s")
