"""Independent classical oracle: adaptive integration and return maps.

None of this code touches the curvature machinery.  Limit cycles are found
the classical way: integrate the field with an adaptive Dormand-Prince 5(4)
scheme, build the Poincare return map P on a ray section through the origin,
and locate fixed points of P by bracketing and bisection on P(r) - r.
Trajectories that leave a large ball are treated as returning +infinity,
which makes unstable cycles ordinary sign changes of the displacement map.

For fields of the rigid-rotation form ds1/dt = -s2 + s1 g(u), ds2/dt =
s1 + s2 g(u) with u = s1^2 + s2^2, an exact radial reduction dr/dt =
r g(r^2) is recovered and verified symbolically, giving a second oracle.
"""

import math

from fractions import Fraction

import numpy as np

from .algebra import DomainError, Polynomial, exact_div

__all__ = [
    "Trajectory",
    "CycleFinding",
    "RadialReduction",
    "OracleResult",
    "AgreementReport",
    "integrate",
    "first_return",
    "return_map",
    "find_limit_cycles",
    "radial_reduction",
    "compare",
]

# Dormand-Prince 5(4), FSAL
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (
    5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
    -92097 / 339200, 187 / 2100, 1 / 40,
)
_ERR = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

_MIN_TOL = 1e-12
_MAX_TOL = 1e-3


def _compile_rhs(vf):
    """Compile the field into a fast float callable point -> list."""
    if vf.params:
        raise ValueError(f"parameters {vf.params} must be bound before integration")
    n = len(vf.states)
    comp_terms = []
    max_exp = [0] * n
    for comp in vf.components:
        items = []
        for exp, c in comp.terms.items():
            items.append((float(c), exp))
            for i, e in enumerate(exp):
                if e > max_exp[i]:
                    max_exp[i] = e
        comp_terms.append(items)

    def rhs(y):
        pows = []
        for i in range(n):
            row = [1.0]
            v = y[i]
            for _ in range(max_exp[i]):
                row.append(row[-1] * v)
            pows.append(row)
        out = []
        for items in comp_terms:
            acc = 0.0
            for c, exp in items:
                t = c
                for i, e in enumerate(exp):
                    if e:
                        t *= pows[i][e]
                acc += t
            out.append(acc)
        return out

    return rhs, n


class Trajectory:
    """Adaptive integration result with per-run statistics."""

    __slots__ = ("ts", "ys", "stats", "truncated", "reason")

    def __init__(self, ts, ys, stats, truncated, reason):
        self.ts = ts
        self.ys = ys
        self.stats = stats
        self.truncated = truncated
        self.reason = reason

    def __repr__(self):
        return (
            f"Trajectory({len(self.ts)} samples, t_end={self.ts[-1]:.6g}, "
            f"truncated={self.truncated})"
        )


def _check_tol(tol):
    if not (_MIN_TOL <= tol <= _MAX_TOL):
        raise ValueError(
            f"tolerance {tol} outside supported range [{_MIN_TOL}, {_MAX_TOL}]"
        )


def integrate(vf, x0, t_span, tol=1e-9, max_steps=2_000_000,
              escape_norm=None, fixed_step=None, observer=None):
    """Integrate the field over t_span with DP 5(4) adaptive stepping.

    observer, when given, is called as observer(t0, y0, f0, t1, y1, f1, h)
    after every accepted step and may return True to stop the run early.
    fixed_step disables step-size control (used by convergence tests).
    """
    _check_tol(tol)
    rhs, n = _compile_rhs(vf)
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        raise ValueError("t_span must be increasing")
    y = [float(v) for v in x0]
    if len(y) != n:
        raise ValueError(f"initial point has {len(y)} coordinates for {n} states")
    t = t0
    h = fixed_step if fixed_step else min(1e-3, (t1 - t0) / 10)
    ts = [t]
    ys = [tuple(y)]
    k1 = rhs(y)
    steps = 0
    rejected = 0
    max_err = 0.0
    truncated = False
    reason = None
    ks = [None] * 7
    while t < t1:
        if steps >= max_steps:
            truncated, reason = True, "max-steps"
            break
        if h < 1e-14 * max(1.0, abs(t)):
            truncated, reason = True, "step-underflow"
            break
        if t + h > t1:
            h = t1 - t
        ks[0] = k1
        for i in range(1, 7):
            yi = list(y)
            ai = _A[i]
            for j in range(i):
                aij = ai[j]
                if aij:
                    kj = ks[j]
                    for m in range(n):
                        yi[m] += h * aij * kj[m]
            ks[i] = rhs(yi)
        ynew = list(y)
        for i in range(7):
            bi = _B5[i]
            if bi:
                ki = ks[i]
                for m in range(n):
                    ynew[m] += h * bi * ki[m]
        errn = 0.0
        for m in range(n):
            e = 0.0
            for i in range(7):
                ei = _ERR[i]
                if ei:
                    e += ei * ks[i][m]
            e *= h
            sc = tol + tol * max(abs(y[m]), abs(ynew[m]))
            q = e / sc
            errn += q * q
        errn = math.sqrt(errn / n)
        if fixed_step or errn <= 1.0:
            steps += 1
            if errn > max_err:
                max_err = errn
            f_old = k1
            t_old = t
            y_old = y
            t = t + h
            y = ynew
            # FSAL: stage 7 is the derivative at the accepted point
            k1 = ks[6]
            ts.append(t)
            ys.append(tuple(y))
            if observer is not None:
                if observer(t_old, y_old, f_old, t, y, k1, t - t_old):
                    truncated, reason = True, "observer-stop"
                    break
            if escape_norm is not None:
                if math.sqrt(sum(v * v for v in y)) > escape_norm:
                    truncated, reason = True, "escape"
                    break
        else:
            rejected += 1
        if not fixed_step:
            factor = 0.9 * errn ** -0.2 if errn > 0 else 5.0
            h *= min(5.0, max(0.2, factor))
    stats = {
        "steps": steps,
        "rejected": rejected,
        "max_error_estimate": max_err,
        "rhs_components": n,
    }
    return Trajectory(ts, ys, stats, truncated, reason)


# -- section crossings -----------------------------------------------------------


def _hermite(y0, f0, y1, f1, h, tau):
    t2 = tau * tau
    t3 = t2 * tau
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + tau
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return [
        h00 * a + h10 * h * fa + h01 * b + h11 * h * fb
        for a, fa, b, fb in zip(y0, f0, y1, f1)
    ]


def _refine_crossing(y0, f0, y1, f1, h, sigma):
    """Bisect the Hermite interpolant for sigma(y(tau)) = 0, tau in (0,1]."""
    lo, hi = 0.0, 1.0
    slo = sigma(y0)
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        ym = _hermite(y0, f0, y1, f1, h, mid)
        sm = sigma(ym)
        if (slo < 0) == (sm < 0):
            lo, slo = mid, sm
        else:
            hi = mid
        if (hi - lo) * h <= 1e-10:
            break
    tau = 0.5 * (lo + hi)
    return tau, _hermite(y0, f0, y1, f1, h, tau)


def first_return(vf, start, theta=0.0, tol=1e-9, t_max=1000.0,
                 escape_norm=None):
    """Time and point of the first counterclockwise return to the ray section.

    The section is {x cos(theta) + y sin(theta) > 0} intersected with the
    line through the origin at angle theta.  Returns (t, point) on success,
    ('escape', t) when the trajectory leaves the escape ball, and
    ('no-return', t_max) when no crossing happens before t_max.
    """
    ct, st = math.cos(theta), math.sin(theta)

    def sigma(p):
        return -st * p[0] + ct * p[1]

    def rho(p):
        return ct * p[0] + st * p[1]

    hit = []
    state = {"armed": False, "prev": None}

    def observer(t0, y0, f0, t1, y1, f1, h):
        s0 = sigma(y0) if state["prev"] is None else state["prev"]
        s1 = sigma(y1)
        state["prev"] = s1
        if not state["armed"]:
            # wait until the trajectory clearly leaves the section line
            if abs(s1) > 1e-12 * (1 + abs(rho(y1))):
                state["armed"] = True
            return False
        if s0 < 0.0 <= s1:
            tau, yc = _refine_crossing(y0, f0, y1, f1, h, sigma)
            if rho(yc) > 0.0:
                hit.append((t0 + tau * h, tuple(yc)))
                return True
        return False

    traj = integrate(
        vf, start, (0.0, t_max), tol=tol,
        escape_norm=escape_norm, observer=observer,
    )
    if hit:
        return hit[0]
    if traj.truncated and traj.reason == "escape":
        return ("escape", traj.ts[-1])
    return ("no-return", t_max)


def return_map(vf, r, theta=0.0, tol=1e-9, t_max=1000.0, escape_norm=None):
    """Radial return map P(r) on the ray section.

    Returns (P(r), period).  P(r) is math.inf when the trajectory escapes
    and None when it neither escapes nor returns before t_max.
    """
    if r <= 0:
        raise ValueError("section radius must be positive")
    start = (r * math.cos(theta), r * math.sin(theta))
    out = first_return(vf, start, theta, tol, t_max, escape_norm)
    if out[0] == "escape":
        return math.inf, out[1]
    if out[0] == "no-return":
        return None, out[1]
    t, p = out
    ct, st = math.cos(theta), math.sin(theta)
    return ct * p[0] + st * p[1], t


# -- cycle search ------------------------------------------------------------------


class CycleFinding:
    """One certified-by-bisection fixed point of the radial return map."""

    __slots__ = ("radius", "period", "stability", "return_derivative", "point")

    def __init__(self, radius, period, stability, return_derivative, point):
        self.radius = radius
        self.period = period
        self.stability = stability
        self.return_derivative = return_derivative
        self.point = point

    def __repr__(self):
        return (
            f"CycleFinding(r={self.radius:.9g}, period={self.period:.6g}, "
            f"{self.stability})"
        )


class RadialReduction:
    """Exact reduction dr/dt = r g(r^2) for rigid-rotation fields."""

    __slots__ = ("g", "radii", "stabilities")

    def __init__(self, g, radii, stabilities):
        self.g = g
        self.radii = radii
        self.stabilities = stabilities

    def __repr__(self):
        return f"RadialReduction(g={self.g.text()!r}, radii={self.radii})"


class OracleResult:
    """Cycle findings plus center detection and the radial cross-check."""

    __slots__ = ("cycles", "center_detected", "radial", "theta", "tol", "notes")

    def __init__(self, cycles, center_detected, radial, theta, tol, notes):
        self.cycles = cycles
        self.center_detected = center_detected
        self.radial = radial
        self.theta = theta
        self.tol = tol
        self.notes = notes

    def __repr__(self):
        return (
            f"OracleResult({len(self.cycles)} cycles, "
            f"center={self.center_detected})"
        )


class AgreementReport:
    """Comparison of the curvature verdict against the classical oracle."""

    __slots__ = ("status", "notes")

    def __init__(self, status, notes):
        self.status = status
        self.notes = notes

    def __repr__(self):
        return f"AgreementReport({self.status!r})"


def _is_linear_center(vf):
    """Exact test: origin is an equilibrium with Tr J = 0 and det J > 0."""
    if len(vf.states) != 2:
        return False
    zero = {s: Fraction(0) for s in vf.states}
    if any(c.evaluate(zero) != 0 for c in vf.components):
        return False
    jac = vf.jacobian()
    j = [[e.evaluate(zero) for e in row] for row in jac]
    tr = j[0][0] + j[1][1]
    det = j[0][0] * j[1][1] - j[0][1] * j[1][0]
    return tr == 0 and det > 0


def find_limit_cycles(vf, r_max=2.8, theta=0.0, tol=1e-9, t_max=1000.0,
                      n_seeds=40, center_tol=1e-6):
    """Classical cycle search on a ray section.

    Samples the displacement d(r) = P(r) - r over n_seeds radii, brackets
    its sign changes (escape counts as +inf), and bisects each bracket to a
    fixed point.  Stability is read off the d sign pattern on both sides.
    A center verdict needs an exact linear-center origin and |d| <= center_tol
    across at least 20 sampled radii.
    """
    if len(vf.states) != 2:
        raise ValueError("cycle search is defined for planar fields")
    _check_tol(tol)
    if r_max <= 0:
        raise ValueError("r_max must be positive")
    escape_norm = 10.0 * r_max
    notes = []
    seeds = [r_max * (i + 1) / n_seeds for i in range(n_seeds)]
    dvals = []
    returned = 0
    for r in seeds:
        p, _t = return_map(vf, r, theta, tol, t_max, escape_norm)
        if p is None:
            dvals.append(None)
        else:
            dvals.append(p - r)
            if math.isfinite(p):
                returned += 1
    if returned == 0:
        notes.append("no seed produced a section return; flow may not rotate")

    center = False
    if _is_linear_center(vf):
        # the closed-orbit basin is the contiguous returning prefix of the
        # scan; resample it densely and require an identity return map there
        r_edge = 0.0
        for r, d in zip(seeds, dvals):
            if d is None or math.isinf(d):
                break
            r_edge = r
        if r_edge > 0.0:
            probes = []
            for j in range(1, 26):
                rp = r_edge * j / 25.0
                p, _t = return_map(vf, rp, theta, tol, t_max, escape_norm)
                if p is None or math.isinf(p):
                    probes = None
                    break
                probes.append(p - rp)
            if probes is not None and len(probes) >= 20 \
                    and all(abs(d) <= center_tol for d in probes):
                center = True
                notes.append(
                    f"return map is the identity within {center_tol:g} on "
                    f"{len(probes)} radii up to r={r_edge:.6g}; linear "
                    "center confirmed at the origin"
                )
    cycles = []
    if not center:
        sig = 10.0 * center_tol
        pairs = [
            (r, d) for r, d in zip(seeds, dvals) if d is not None
        ]
        for (r1, d1), (r2, d2) in zip(pairs, pairs[1:]):
            if (d1 < -sig and d2 > sig) or (d1 > sig and d2 < -sig):
                cyc = _bisect_cycle(vf, r1, d1, r2, d2, theta, tol, t_max,
                                    escape_norm)
                if cyc is not None:
                    cycles.append(cyc)
    radial = radial_reduction(vf)
    return OracleResult(cycles, center, radial, theta, tol, notes)


def _bisect_cycle(vf, r1, d1, r2, d2, theta, tol, t_max, escape_norm):
    period = None
    for _ in range(60):
        if r2 - r1 <= 1e-8 * (1.0 + r2):
            break
        rm = 0.5 * (r1 + r2)
        p, t = return_map(vf, rm, theta, tol, t_max, escape_norm)
        if p is None:
            return None
        dm = p - rm
        if math.isfinite(dm):
            period = t
        if (dm < 0) == (d1 < 0):
            r1, d1 = rm, dm
        else:
            r2, d2 = rm, dm
    root = 0.5 * (r1 + r2)
    p_root, t_root = return_map(vf, root, theta, tol, t_max, escape_norm)
    if p_root is not None and math.isfinite(p_root):
        period = t_root
    delta = max(1e-3 * root, 1e-3)
    dl, _ = return_map(vf, max(root - delta, 1e-6), theta, tol, t_max,
                       escape_norm)
    dr, _ = return_map(vf, root + delta, theta, tol, t_max, escape_norm)
    left = None if dl is None else dl - (root - delta)
    right = None if dr is None else dr - (root + delta)
    stability = "undetermined"
    if left is not None and right is not None:
        lpos = left > 0
        rpos = right > 0
        if lpos and not rpos:
            stability = "stable"
        elif not lpos and rpos:
            stability = "unstable"
        else:
            stability = "semi-stable"
    deriv = None
    h = 1e-5 * (1.0 + root)
    pa, _ = return_map(vf, root - h, theta, tol, t_max, escape_norm)
    if pa is not None and p_root is not None and math.isfinite(pa) \
            and math.isfinite(p_root):
        deriv = (p_root - pa) / h
    point = (root * math.cos(theta), root * math.sin(theta))
    return CycleFinding(root, period, stability, deriv, point)


# -- exact radial reduction ----------------------------------------------------------


def radial_reduction(vf):
    """Recover dr/dt = r g(r^2) exactly, or None if the field does not match.

    Requires ds1/dt = -s2 + s1 g(u), ds2/dt = s1 + s2 g(u) with
    u = s1^2 + s2^2.  The candidate g is read off the pure-s2 rows of
    (ds1/dt + s2)/s1 and certified by exact polynomial identity.
    """
    if vf.params or len(vf.states) != 2:
        return None
    sx, sy = vf.states
    table = vf.components[0].variables
    x = Polynomial.variable(sx).reordered(table)
    y = Polynomial.variable(sy).reordered(table)
    f1, f2 = vf.components
    try:
        q1 = exact_div(f1 + y, x)
        q2 = exact_div(f2 - x, y)
    except DomainError:
        return None
    if q1 != q2:
        return None
    # read coefficients of g from the pure-s2 terms of q1
    ix = table.index(sx)
    iy = table.index(sy)
    coeffs = {}
    for exp, c in q1.terms.items():
        if all(e == 0 for i, e in enumerate(exp) if i not in (ix, iy)):
            if exp[ix] == 0:
                if exp[iy] % 2:
                    return None
                coeffs[exp[iy] // 2] = c
    if not coeffs and not q1.is_zero():
        return None
    g = Polynomial(("u",), {(k,): c for k, c in coeffs.items()})
    # certify: q1 must equal g(s1^2 + s2^2) exactly
    u_poly = x * x + y * y
    acc = Polynomial.constant(0, table)
    upow = Polynomial.constant(1, table)
    last = 0
    for k in sorted(coeffs):
        upow = upow * u_poly ** (k - last)
        last = k
        acc = acc + upow * coeffs[k]
    if acc != q1:
        return None
    radii, stabs = _radial_roots(g)
    return RadialReduction(g, radii, stabs)


def _radial_roots(g):
    """Positive simple roots of g(r^2) = 0 with stability from sign g'."""
    if g.is_zero() or g.is_constant():
        return [], []
    deg = max(e[0] for e in g.terms)
    coeffs = [0.0] * (deg + 1)
    for exp, c in g.terms.items():
        coeffs[deg - exp[0]] = float(c)
    roots = np.roots(coeffs)
    gp = g.diff("u")
    radii = []
    stabs = []
    for z in roots:
        if abs(z.imag) > 1e-9 * (1.0 + abs(z.real)):
            continue
        u = float(z.real)
        if u <= 0:
            continue
        slope = gp.evaluate_float({"u": u})
        if slope < 0:
            stab = "stable"
        elif slope > 0:
            stab = "unstable"
        else:
            stab = "semi-stable"
        radii.append(math.sqrt(u))
        stabs.append(stab)
    order = np.argsort(radii)
    return [radii[i] for i in order], [stabs[i] for i in order]


def compare(verdict, oracle):
    """Agreement report between the curvature verdict and the oracle."""
    notes = []
    count_match = verdict.count == len(oracle.cycles)
    if count_match:
        notes.append(
            f"cycle count matches: verdict {verdict.count}, oracle "
            f"{len(oracle.cycles)}"
        )
    else:
        notes.append(
            f"cycle count differs: verdict {verdict.count}, oracle "
            f"{len(oracle.cycles)}"
        )
    periodic_match = bool(verdict.periodic_only) == bool(oracle.center_detected)
    if periodic_match:
        notes.append(
            f"periodic-only flag matches center detection "
            f"({oracle.center_detected})"
        )
    else:
        notes.append(
            f"periodic-only flag {verdict.periodic_only} vs oracle center "
            f"detection {oracle.center_detected}"
        )
    if count_match and periodic_match:
        status = "agree"
    elif count_match or periodic_match:
        status = "partial"
    else:
        status = "disagree"
    return AgreementReport(status, notes)
