"""Curvature singular locus, limit-cycle verdict, and growth tables.

The locus where |R| blows up is located numerically: the search box is cut
into a uniform grid, cells whose denominator enclosure excludes zero are
discarded (float interval arithmetic with generous outward slop), survivors
are refined by damped Gauss-Newton on the denominator, and refined points
are verified against a relative residual bound, clustered, and grouped into
connected components.  Points where the numerator also vanishes are split
into an indeterminate list instead of the locus proper.

The verdict stage combines the Euler-characteristic sign rule with the
locus: when the sign is positive and the locus is centrally symmetric, the
number of symmetry classes of locus components is reported as the limit
cycle count; a positive sign with an empty or asymmetric locus is reported
as periodic-only behavior.
"""

import math
from fractions import Fraction

import numpy as np

from .algebra import exact_div, poly_gcd

__all__ = [
    "SingularLocus",
    "GbtVerdict",
    "HilbertTable",
    "singular_locus",
    "symmetry_check",
    "gbt_limit_cycle_verdict",
    "hilbert_number",
    "christopher_lloyd_bound",
    "bezout_bound",
    "growth_table",
]


# -- vectorized polynomial helpers ----------------------------------------------


def _term_arrays(poly, cmax=None):
    # normalized by the largest magnitude so float residual scales stay
    # sane; derivatives of a polynomial must share its normalizer
    exps = []
    coeffs = []
    for exp, c in poly.terms.items():
        exps.append(exp)
        coeffs.append(float(c))
    if cmax is None:
        cmax = max((abs(c) for c in coeffs), default=1.0) or 1.0
    coeffs = [c / cmax for c in coeffs]
    return exps, coeffs, cmax


def _exact_residual_ok(poly, point, tol):
    """Exact-arithmetic check |poly(p)| <= tol * scale(p) at a float point."""
    pr = tuple(Fraction(x).limit_denominator(10**9) for x in point)
    val = poly.evaluate(dict(zip(poly.variables, pr)))
    cmax = max(abs(c) for c in poly.terms.values())
    scale = Fraction(1)
    apr = [abs(q) for q in pr]
    for (e1, e2), c in poly.terms.items():
        scale += abs(Fraction(c)) / cmax * apr[0] ** e1 * apr[1] ** e2
    return abs(Fraction(val)) <= Fraction(tol) * scale * cmax


def _pow_tables(X, Y, exps):
    max_e1 = max((e[0] for e in exps), default=0)
    max_e2 = max((e[1] for e in exps), default=0)
    px = [np.ones_like(X)]
    for _ in range(max_e1):
        px.append(px[-1] * X)
    py = [np.ones_like(Y)]
    for _ in range(max_e2):
        py.append(py[-1] * Y)
    return px, py


def _eval_grid(exps, coeffs, X, Y):
    px, py = _pow_tables(X, Y, exps)
    out = np.zeros_like(X)
    for (e1, e2), c in zip(exps, coeffs):
        out += c * px[e1] * py[e2]
    return out


def _scale_grid(exps, coeffs, X, Y):
    # magnitude scale sum |c| * |x|^e1 * |y|^e2, floored at 1
    px, py = _pow_tables(np.abs(X), np.abs(Y), exps)
    out = np.ones_like(X)
    for (e1, e2), c in zip(exps, coeffs):
        out += abs(c) * px[e1] * py[e2]
    return out


def _interval_pow_axis(lo, hi, k):
    """Elementwise [lo,hi]^k over parallel arrays; returns (plo, phi)."""
    if k == 0:
        return np.ones_like(lo), np.ones_like(hi)
    if k == 1:
        return lo.copy(), hi.copy()
    plo = lo**k
    phi = hi**k
    if k % 2:
        return plo, phi
    swapped_lo = np.where(hi <= 0, phi, plo)
    swapped_hi = np.where(hi <= 0, plo, phi)
    straddle = (lo < 0) & (hi > 0)
    top = np.maximum(plo, phi)
    return (
        np.where(straddle, 0.0, swapped_lo),
        np.where(straddle, top, swapped_hi),
    )


def _grid_exclusion(exps, coeffs, xedges, yedges):
    """Boolean mask of cells that may contain a zero of the polynomial."""
    xlo = xedges[:-1][:, None]
    xhi = xedges[1:][:, None]
    ylo = yedges[:-1][None, :]
    yhi = yedges[1:][None, :]
    max_e1 = max((e[0] for e in exps), default=0)
    max_e2 = max((e[1] for e in exps), default=0)
    xp = [_interval_pow_axis(xlo, xhi, k) for k in range(max_e1 + 1)]
    yp = [_interval_pow_axis(ylo, yhi, k) for k in range(max_e2 + 1)]
    shape = (len(xedges) - 1, len(yedges) - 1)
    slo = np.zeros(shape)
    shi = np.zeros(shape)
    mag = np.zeros(shape)
    for (e1, e2), c in zip(exps, coeffs):
        alo, ahi = xp[e1]
        blo, bhi = yp[e2]
        p1 = alo * blo
        p2 = alo * bhi
        p3 = ahi * blo
        p4 = ahi * bhi
        tlo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
        thi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
        if c >= 0:
            slo += c * tlo
            shi += c * thi
        else:
            slo += c * thi
            shi += c * tlo
        mag += abs(c) * np.maximum(np.abs(tlo), np.abs(thi))
    # outward slop: cover accumulated rounding of the non-directed float ops
    pad = 1e-12 * mag + 1e-300
    return (slo - pad <= 0.0) & (0.0 <= shi + pad)


def _interval_eval_cells(exps, coeffs, xlo, xhi, ylo, yhi):
    """Interval enclosure of the polynomial over a flat list of cells."""
    max_e1 = max((e[0] for e in exps), default=0)
    max_e2 = max((e[1] for e in exps), default=0)
    xp = [_interval_pow_axis(xlo, xhi, k) for k in range(max_e1 + 1)]
    yp = [_interval_pow_axis(ylo, yhi, k) for k in range(max_e2 + 1)]
    slo = np.zeros_like(xlo)
    shi = np.zeros_like(xlo)
    for (e1, e2), c in zip(exps, coeffs):
        alo, ahi = xp[e1]
        blo, bhi = yp[e2]
        p1 = alo * blo
        p2 = alo * bhi
        p3 = ahi * blo
        p4 = ahi * bhi
        tlo = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
        thi = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
        if c >= 0:
            slo += c * tlo
            shi += c * thi
        else:
            slo += c * thi
            shi += c * tlo
    return slo, shi


# -- locus types -------------------------------------------------------------------


class SingularLocus:
    """Refined, verified, clustered zero set of the curvature denominator."""

    __slots__ = (
        "points",
        "components",
        "indeterminate",
        "box",
        "tol",
        "cluster_tol",
        "symmetry_tol",
        "grid",
        "symmetric",
        "notes",
    )

    def __init__(self, points, components, indeterminate, box, tol,
                 cluster_tol, symmetry_tol, grid, symmetric, notes):
        self.points = points
        self.components = components
        self.indeterminate = indeterminate
        self.box = box
        self.tol = tol
        self.cluster_tol = cluster_tol
        self.symmetry_tol = symmetry_tol
        self.grid = grid
        self.symmetric = symmetric
        self.notes = notes

    def __repr__(self):
        return (
            f"SingularLocus({len(self.points)} points, "
            f"{len(self.components)} components, symmetric={self.symmetric})"
        )


class GbtVerdict:
    """Limit-cycle count read off the sign rule and the singular locus."""

    __slots__ = ("sign", "count", "periodic_only", "locus", "notes")

    def __init__(self, sign, count, periodic_only, locus, notes):
        self.sign = sign
        self.count = count
        self.periodic_only = periodic_only
        self.locus = locus
        self.notes = notes

    def __repr__(self):
        return (
            f"GbtVerdict(sign={self.sign!r}, count={self.count}, "
            f"periodic_only={self.periodic_only})"
        )


class HilbertTable:
    """Growth table for the closed-form bound H(n) = 2(n-1)(4(n-1)-2)."""

    __slots__ = ("rows", "cl_rows")

    def __init__(self, rows, cl_rows):
        self.rows = rows
        self.cl_rows = cl_rows

    def __repr__(self):
        return f"HilbertTable({len(self.rows)} rows, {len(self.cl_rows)} bound rows)"


# -- locus computation ---------------------------------------------------------------


def _as_rational(curvature):
    expr = getattr(curvature, "expr", curvature)
    return expr


def _cluster(points, radius):
    """Greedy union of points closer than radius; returns centroid reps."""
    if not len(points):
        return []
    pts = np.asarray(points)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    parent = list(range(len(pts)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    r2 = radius * radius
    for i in range(len(pts)):
        # sorted by x, so only a bounded window ahead can be within radius
        j = i + 1
        while j < len(pts) and pts[j, 0] - pts[i, 0] <= radius:
            d = pts[j] - pts[i]
            if d @ d <= r2:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
            j += 1
    groups = {}
    for i in range(len(pts)):
        groups.setdefault(find(i), []).append(i)
    reps = [tuple(pts[idx].mean(axis=0)) for idx in groups.values()]
    reps.sort()
    return reps


def _connect_components(reps, radius):
    n = len(reps)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    r2 = radius * radius
    for i in range(n):
        for j in range(i + 1, n):
            dx = reps[j][0] - reps[i][0]
            if dx > radius:
                break
            dy = reps[j][1] - reps[i][1]
            if dx * dx + dy * dy <= r2:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    comps = sorted(groups.values(), key=lambda idx: idx[0])
    return comps


def symmetry_check(points, tol=1e-3):
    """True when the point set maps onto itself under x -> -x within tol."""
    if not points:
        return True
    pts = np.asarray(points)
    for p in pts:
        d = np.min(np.sum((pts + p) ** 2, axis=1))
        if d > tol * tol:
            return False
    return True


def singular_locus(curvature, box=((-5, 5), (-5, 5)), tol=1e-8, grid=128,
                   cluster_tol=1e-4, symmetry_tol=1e-3):
    """Locate the zero set of the curvature denominator inside a box.

    curvature may be a ScalarCurvature or a bare RationalFunction.  Returns
    a SingularLocus whose points satisfy |den(p)| <= tol * scale(p), where
    scale is the term-magnitude sum of the denominator at p.
    """
    expr = _as_rational(curvature)
    den = expr.denominator
    num = expr.numerator
    if len(den.variables) != 2:
        raise ValueError("singular locus search supports planar systems only")
    (xlo, xhi), (ylo, yhi) = [(float(a), float(b)) for a, b in box]
    if not (xlo < xhi and ylo < yhi):
        raise ValueError("empty search box")
    grid = int(grid)
    if grid < 4:
        raise ValueError("grid must be at least 4")
    notes = []
    if den.is_constant():
        # constant denominator: no poles anywhere
        return SingularLocus(
            [], [], [], ((xlo, xhi), (ylo, yhi)), tol, cluster_tol,
            symmetry_tol, grid, True, ["denominator is constant; locus empty"],
        )
    # Deflate to the square-free part: same zero set, far better float
    # conditioning (repeated factors square the cancellation depth).
    vx, vy = den.variables
    g = poly_gcd(poly_gcd(den, den.diff(vx)), den.diff(vy))
    if not g.is_constant():
        den = exact_div(den, g).content_primitive()[1]
        notes.append("denominator deflated to its square-free part")
    exps_d, coeffs_d, cmax_d = _term_arrays(den)
    exps_n, coeffs_n, _ = _term_arrays(num)
    dx_poly = den.diff(vx)
    dy_poly = den.diff(vy)
    exps_dx, coeffs_dx, _ = _term_arrays(dx_poly, cmax_d)
    exps_dy, coeffs_dy, _ = _term_arrays(dy_poly, cmax_d)

    xedges = np.linspace(xlo, xhi, grid + 1)
    yedges = np.linspace(ylo, yhi, grid + 1)
    mask = _grid_exclusion(exps_d, coeffs_d, xedges, yedges)
    ii, jj = np.nonzero(mask)
    if ii.size == 0:
        return SingularLocus(
            [], [], [], ((xlo, xhi), (ylo, yhi)), tol, cluster_tol,
            symmetry_tol, grid, True, ["no candidate cells; locus empty"],
        )
    cx = 0.5 * (xedges[ii] + xedges[ii + 1])
    cy = 0.5 * (yedges[jj] + yedges[jj + 1])

    # mean-value second pass: |f(c)| must be reachable within the cell
    gxlo, gxhi = _interval_eval_cells(
        exps_dx, coeffs_dx, xedges[ii], xedges[ii + 1], yedges[jj], yedges[jj + 1]
    )
    gylo, gyhi = _interval_eval_cells(
        exps_dy, coeffs_dy, xedges[ii], xedges[ii + 1], yedges[jj], yedges[jj + 1]
    )
    fc = _eval_grid(exps_d, coeffs_d, cx, cy)
    sc = _scale_grid(exps_d, coeffs_d, cx, cy)
    hx = 0.5 * (xhi - xlo) / grid
    hy = 0.5 * (yhi - ylo) / grid
    reach = (
        hx * np.maximum(np.abs(gxlo), np.abs(gxhi))
        + hy * np.maximum(np.abs(gylo), np.abs(gyhi))
        + 1e-10 * sc
    )
    keep = np.abs(fc) <= reach
    cx, cy = cx[keep], cy[keep]
    if cx.size == 0:
        return SingularLocus(
            [], [], [], ((xlo, xhi), (ylo, yhi)), tol, cluster_tol,
            symmetry_tol, grid, True, ["no candidate cells; locus empty"],
        )

    X = cx.copy()
    Y = cy.copy()
    for _ in range(120):
        F = _eval_grid(exps_d, coeffs_d, X, Y)
        GX = _eval_grid(exps_dx, coeffs_dx, X, Y)
        GY = _eval_grid(exps_dy, coeffs_dy, X, Y)
        g2 = GX * GX + GY * GY
        step = F / (g2 + 1e-300)
        sx = step * GX
        sy = step * GY
        # damp oversized steps so iterates stay near their cells
        norm = np.hypot(sx, sy)
        cap = 0.5 * max(xhi - xlo, yhi - ylo) / grid * 4
        factor = np.where(norm > cap, cap / (norm + 1e-300), 1.0)
        X = X - sx * factor
        Y = Y - sy * factor
        if np.max(norm) < 1e-14 * max(1.0, abs(xhi), abs(yhi)):
            break

    margin = 1e-6 * max(xhi - xlo, yhi - ylo)
    inside = (
        (X >= xlo - margin) & (X <= xhi + margin)
        & (Y >= ylo - margin) & (Y <= yhi + margin)
    )
    F = _eval_grid(exps_d, coeffs_d, X, Y)
    S = _scale_grid(exps_d, coeffs_d, X, Y)
    # Newton backward error |f|/|grad f| estimates the distance to the
    # nearest zero; it separates true zeros from deep cancellation valleys
    # that the residual test alone cannot reject.
    GX = _eval_grid(exps_dx, coeffs_dx, X, Y)
    GY = _eval_grid(exps_dy, coeffs_dy, X, Y)
    dist = np.abs(F) / (np.hypot(GX, GY) + 1e-300)
    near = dist <= 1e-6 * (1.0 + np.hypot(X, Y))
    good = inside & (np.abs(F) <= tol * S) & near
    X, Y = X[good], Y[good]
    if X.size == 0:
        return SingularLocus(
            [], [], [], ((xlo, xhi), (ylo, yhi)), tol, cluster_tol,
            symmetry_tol, grid, True,
            notes + ["candidate cells did not refine to verified zeros"],
        )
    reps = _cluster(np.stack([X, Y], axis=1), cluster_tol)
    # confirm each representative in exact rational arithmetic
    reps = [p for p in reps if _exact_residual_ok(den, p, tol)]

    # split off points where the numerator vanishes as well
    locus_pts = []
    indeterminate = []
    for p in reps:
        nv = _eval_grid(exps_n, coeffs_n, np.array([p[0]]), np.array([p[1]]))[0]
        ns = _scale_grid(exps_n, coeffs_n, np.array([p[0]]), np.array([p[1]]))[0]
        if abs(nv) <= 1e-6 * ns:
            indeterminate.append(p)
        else:
            locus_pts.append(p)
    if indeterminate:
        notes.append(
            f"{len(indeterminate)} locus point(s) also null the numerator; "
            "listed as indeterminate"
        )

    cell = math.hypot((xhi - xlo) / grid, (yhi - ylo) / grid)
    comps = _connect_components(locus_pts, 2.5 * cell)
    symmetric = symmetry_check(locus_pts, symmetry_tol)
    return SingularLocus(
        locus_pts, comps, indeterminate, ((xlo, xhi), (ylo, yhi)), tol,
        cluster_tol, symmetry_tol, grid, symmetric, notes,
    )


def _symmetry_classes(locus):
    """Number of orbit classes of components under x -> -x."""
    comps = locus.components
    pts = locus.points
    if not comps:
        return 0
    tol = locus.symmetry_tol
    comp_of_point = {}
    for ci, idxs in enumerate(comps):
        for i in idxs:
            comp_of_point[i] = ci
    arr = np.asarray(pts)

    def nearest(p):
        d = np.sum((arr - p) ** 2, axis=1)
        k = int(np.argmin(d))
        return k, math.sqrt(float(d[k]))

    n = len(comps)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for ci, idxs in enumerate(comps):
        p = arr[idxs[0]]
        k, dist = nearest(-p)
        if dist <= tol:
            cj = comp_of_point[k]
            ri, rj = find(ci), find(cj)
            if ri != rj:
                parent[rj] = ri
    return len({find(i) for i in range(n)})


def gbt_limit_cycle_verdict(topology, locus):
    """Combine the sign rule with the locus into a cycle-count verdict."""
    notes = []
    sign = topology.gbt_sign
    if sign != "positive":
        count = 0
        notes.append(f"sign rule gives {sign!r}; no cycle classes counted")
    elif not locus.symmetric:
        count = 0
        notes.append(
            "singular locus is not centrally symmetric; "
            "no isolated cycles indicated"
        )
    else:
        count = _symmetry_classes(locus)
        if count == 0:
            notes.append("locus empty; no isolated cycles indicated")
    periodic_only = sign == "positive" and count == 0
    return GbtVerdict(sign, count, periodic_only, locus, notes)


# -- growth tables ----------------------------------------------------------------------


def hilbert_number(n):
    """Closed-form bound H(n) = 2(n-1)(4(n-1)-2) for degree n >= 2."""
    n = int(n)
    if n < 2:
        raise ValueError(f"degree must be at least 2, got {n}")
    return 2 * (n - 1) * (4 * (n - 1) - 2)


def christopher_lloyd_bound(k):
    """Exact rational bound 4^(k-1) (2k - 35/6) + 3*2^k - 5/3 for k >= 1."""
    k = int(k)
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    return (
        Fraction(4) ** (k - 1) * (2 * k - Fraction(35, 6))
        + 3 * Fraction(2) ** k
        - Fraction(5, 3)
    )


def bezout_bound(df, dg):
    """Bezout product bound for two planar polynomial components."""
    df, dg = int(df), int(dg)
    if df < 1 or dg < 1:
        raise ValueError("component degrees must be at least 1")
    return df * dg


def growth_table(n_max, k_max=0):
    """Rows (n, H(n), n^2, n^2 ln n, H(n)/n^2) for n = 2..n_max.

    With k_max > 0, exact Christopher-Lloyd bound rows (k, bound) are
    attached for k = 1..k_max.
    """
    n_max = int(n_max)
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max}")
    rows = []
    for n in range(2, n_max + 1):
        h = hilbert_number(n)
        n2 = n * n
        rows.append((n, h, n2, n2 * math.log(n), h / n2))
    cl_rows = [(k, christopher_lloyd_bound(k)) for k in range(1, int(k_max) + 1)]
    return HilbertTable(rows, cl_rows)
