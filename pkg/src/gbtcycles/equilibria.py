"""Certified equilibrium finding, classification, and index theory.

Equilibria of a fully specialized vector field are located inside a box by
branch-and-prune subdivision with exact rational interval arithmetic: a
sub-box is discarded when some component's interval evaluation excludes zero,
and accepted when the Krawczyk operator maps it strictly into itself, which
certifies existence and uniqueness of a zero inside.  Certified roots are
then polished by float Newton iteration and, when they round to a nearby
rational point at which the field vanishes exactly, upgraded to exact points
with exact Jacobians.

Classification follows the standard trace-determinant chart.  The Poincare
index of a nondegenerate equilibrium is the sign of det J, and the Euler
characteristic reported for the box is the sum of the indices; the GBT sign
rule reads chi > 0 as "curvature expected positive".
"""

import math
from fractions import Fraction

from .algebra import DomainError, Polynomial

CLASSIFICATIONS = (
    "saddle",
    "source-node",
    "sink-node",
    "source-focus",
    "sink-focus",
    "linear-center",
    "degenerate",
)

_MIN_REL_WIDTH = Fraction(1, 10**7)
# Split off-center so roots sitting exactly at box midpoints (the origin is
# one for every corpus system) end up strictly inside one child.
_SPLIT = Fraction(33, 64)


class BoundaryContactError(Exception):
    """A possible zero touches the search-box boundary; perturb the box."""


class DegenerateIndexError(Exception):
    """Poincare index requested where det J = 0."""


# -- exact interval arithmetic ------------------------------------------------
# Intervals are (lo, hi) pairs of Fractions with lo <= hi.


def _iv(value):
    return (value, value)


def _iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _iv_sub(a, b):
    return (a[0] - b[1], a[1] - b[0])


def _iv_mul(a, b):
    p1 = a[0] * b[0]
    p2 = a[0] * b[1]
    p3 = a[1] * b[0]
    p4 = a[1] * b[1]
    return (min(p1, p2, p3, p4), max(p1, p2, p3, p4))


def _iv_scale(a, c):
    if c >= 0:
        return (a[0] * c, a[1] * c)
    return (a[1] * c, a[0] * c)


def _iv_pow(a, k):
    if k == 0:
        return (Fraction(1), Fraction(1))
    if k == 1:
        return a
    lo, hi = a
    plo, phi = lo**k, hi**k
    if k % 2:
        return (plo, phi)
    if lo >= 0:
        return (plo, phi)
    if hi <= 0:
        return (phi, plo)
    return (Fraction(0), max(plo, phi))


def _pow_table(box, max_exps):
    # pows[i][k] = box[i] ** k, shared across the terms of one evaluation
    pows = []
    for iv_x, top in zip(box, max_exps):
        row = [(Fraction(1), Fraction(1)), iv_x]
        for k in range(2, top + 1):
            row.append(_iv_pow(iv_x, k))
        pows.append(row)
    return pows


def _poly_interval(term_items, box, pows=None):
    # box: tuple of intervals, one per variable of the polynomial's table.
    if pows is None:
        max_exps = [0] * len(box)
        for exp, _ in term_items:
            for i, k in enumerate(exp):
                if k > max_exps[i]:
                    max_exps[i] = k
        pows = _pow_table(box, max_exps)
    total = (Fraction(0), Fraction(0))
    for exp, coeff in term_items:
        term = None
        for i, k in enumerate(exp):
            if k:
                p = pows[i][k]
                term = p if term is None else _iv_mul(term, p)
        if term is None:
            term = (Fraction(1), Fraction(1))
        total = _iv_add(total, _iv_scale(term, coeff))
    return total


def _contains_zero(iv):
    return iv[0] <= 0 <= iv[1]


# -- outward-rounded float intervals -------------------------------------------
# Used for fast sound exclusion tests; every operation widens its result by
# one ulp per bound, so the true range is always enclosed.  Certification
# itself stays in exact rational arithmetic.


def _fout(lo, hi):
    return (math.nextafter(lo, -math.inf), math.nextafter(hi, math.inf))


def _fiv_add(a, b):
    return _fout(a[0] + b[0], a[1] + b[1])


def _fiv_mul(a, b):
    p1 = a[0] * b[0]
    p2 = a[0] * b[1]
    p3 = a[1] * b[0]
    p4 = a[1] * b[1]
    return _fout(min(p1, p2, p3, p4), max(p1, p2, p3, p4))


def _fiv_pow(a, k):
    if k == 0:
        return (1.0, 1.0)
    if k == 1:
        return a
    lo, hi = a
    plo, phi = lo**k, hi**k
    # pow may be off by >1 ulp; widen twice
    if k % 2:
        return _fout(*_fout(plo, phi))
    if lo >= 0:
        return _fout(*_fout(plo, phi))
    if hi <= 0:
        return _fout(*_fout(phi, plo))
    return _fout(*_fout(0.0, max(plo, phi)))


def _coeff_interval(c):
    cf = float(c)
    if Fraction(cf) == c:
        return (cf, cf)
    return _fout(cf, cf)


def _float_box(box):
    out = []
    for lo, hi in box:
        lo_f = float(lo)
        if Fraction(lo_f) > lo:
            lo_f = math.nextafter(lo_f, -math.inf)
        hi_f = float(hi)
        if Fraction(hi_f) < hi:
            hi_f = math.nextafter(hi_f, math.inf)
        out.append((lo_f, hi_f))
    return tuple(out)


def _pow_table_f(fbox, max_exps):
    pows = []
    for iv_x, top in zip(fbox, max_exps):
        row = [(1.0, 1.0), iv_x]
        for k in range(2, top + 1):
            row.append(_fiv_pow(iv_x, k))
        pows.append(row)
    return pows


def _poly_interval_f(term_items, pows):
    acc = (0.0, 0.0)
    for exp, civ in term_items:
        term = civ
        for i, k in enumerate(exp):
            if k:
                term = _fiv_mul(term, pows[i][k])
        acc = _fiv_add(acc, term)
    return acc


# -- linear algebra over Fractions -------------------------------------------


def _mat_inverse(m):
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if aug[r][col]:
                pivot = r
                break
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# -- Krawczyk certification ---------------------------------------------------


class _Problem:
    """Precompiled field and Jacobian for one subdivision run."""

    def __init__(self, vf):
        self.states = vf.states
        self.components = vf.components
        self.comp_items = [list(c.terms.items()) for c in vf.components]
        jac = vf.jacobian()
        self.jac = jac
        self.jac_items = [[list(e.terms.items()) for e in row] for row in jac]
        self.n = len(vf.states)
        max_exps = [0] * self.n
        for items in self.comp_items:
            for exp, _ in items:
                for i, k in enumerate(exp):
                    if k > max_exps[i]:
                        max_exps[i] = k
        self.max_exps = max_exps
        self.comp_items_f = [
            [(exp, _coeff_interval(c)) for exp, c in items]
            for items in self.comp_items
        ]
        self.jac_items_f = [
            [[(exp, _coeff_interval(c)) for exp, c in entry] for entry in row]
            for row in self.jac_items
        ]

    def pows(self, box):
        return _pow_table(box, self.max_exps)

    def pows_f(self, fbox):
        return _pow_table_f(fbox, self.max_exps)

    def f_exact(self, point):
        binds = dict(zip(self.states, point))
        return [c.evaluate(binds) for c in self.components]

    def jac_exact(self, point):
        binds = dict(zip(self.states, point))
        return [[e.evaluate(binds) for e in row] for row in self.jac]

    def f_float(self, point):
        binds = dict(zip(self.states, point))
        return [c.evaluate_float(binds) for c in self.components]

    def jac_float(self, point):
        binds = dict(zip(self.states, point))
        return [[e.evaluate_float(binds) for e in row] for row in self.jac]


def _excludes_zero_f(problem, fbox):
    """True when some component provably has no zero in the box.

    Tries the naive term-wise enclosure first, then the mean-value form
    f(m) + J(X) * (X - m), which is far tighter once boxes shrink.  All
    arithmetic is outward-rounded float interval arithmetic, so a True
    answer is a certificate.
    """
    pows = problem.pows_f(fbox)
    mid_pows = None
    shifted = None
    for ci in range(len(problem.comp_items_f)):
        naive = _poly_interval_f(problem.comp_items_f[ci], pows)
        if not _contains_zero(naive):
            return True
        if mid_pows is None:
            mid = tuple((lo + hi) / 2 for lo, hi in fbox)
            mid_box = tuple((m, m) for m in mid)
            mid_pows = problem.pows_f(mid_box)
            shifted = [
                _fout(lo - m, hi - m) for (lo, hi), m in zip(fbox, mid)
            ]
        mv = _poly_interval_f(problem.comp_items_f[ci], mid_pows)
        for j in range(problem.n):
            jiv = _poly_interval_f(problem.jac_items_f[ci][j], pows)
            mv = _fiv_add(mv, _fiv_mul(jiv, shifted[j]))
        if not _contains_zero(mv):
            return True
    return False


def _krawczyk_float(problem, fbox):
    """Float-interval Krawczyk screen: 'exclude', 'unique', or 'unknown'.

    'exclude' is sound (outward rounding); 'unique' is only a hint and is
    re-proved with exact rational arithmetic before anything is certified.
    """
    n = problem.n
    mid = tuple((lo + hi) / 2 for lo, hi in fbox)
    jm = problem.jac_float(mid)
    try:
        Y = _mat_inverse_float(jm)
    except ZeroDivisionError:
        return "unknown"
    if Y is None:
        return "unknown"
    mid_pows = problem.pows_f(tuple((m, m) for m in mid))
    fm = [_poly_interval_f(items, mid_pows) for items in problem.comp_items_f]
    pows = problem.pows_f(fbox)
    jx = [
        [_poly_interval_f(problem.jac_items_f[i][j], pows) for j in range(n)]
        for i in range(n)
    ]
    shifted = [_fout(lo - m, hi - m) for (lo, hi), m in zip(fbox, mid)]
    inside = True
    for i in range(n):
        base = (mid[i], mid[i])
        for j in range(n):
            base = _fiv_add(base, _fiv_mul((-Y[i][j], -Y[i][j]), fm[j]))
        acc = base
        for j in range(n):
            entry = (0.0, 0.0)
            for k in range(n):
                entry = _fiv_add(entry, _fiv_mul((Y[i][k], Y[i][k]), jx[k][j]))
            delta = 1.0 if i == j else 0.0
            entry = _fout(delta - entry[1], delta - entry[0])
            acc = _fiv_add(acc, _fiv_mul(entry, shifted[j]))
        lo, hi = fbox[i]
        if acc[1] < lo or acc[0] > hi:
            return "exclude"
        if not (lo < acc[0] and acc[1] < hi):
            inside = False
    return "unique" if inside else "unknown"


def _mat_inverse_float(m):
    n = len(m)
    aug = [list(map(float, row)) + [float(i == j) for j in range(n)]
           for i, row in enumerate(m)]
    for col in range(n):
        pivot = max(range(col, n), key=lambda r: abs(aug[r][col]))
        if aug[pivot][col] == 0:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _krawczyk_test(problem, box):
    """Return 'exclude', 'unique', or 'unknown' for a sub-box."""
    n = problem.n
    mid = tuple((lo + hi) / 2 for lo, hi in box)
    fm = problem.f_exact(mid)
    jm = problem.jac_exact(mid)
    Y = _mat_inverse(jm)
    if Y is None:
        return "unknown"
    pows = problem.pows(box)
    jx = [
        [_poly_interval(problem.jac_items[i][j], box, pows) for j in range(n)]
        for i in range(n)
    ]
    yfm = [sum((Y[i][j] * fm[j] for j in range(n)), Fraction(0)) for i in range(n)]
    shifted = [(lo - m, hi - m) for (lo, hi), m in zip(box, mid)]
    inside = True
    for i in range(n):
        acc = (mid[i] - yfm[i], mid[i] - yfm[i])
        for j in range(n):
            # (I - Y*J(X))[i][j]
            entry = (Fraction(0), Fraction(0))
            for k in range(n):
                entry = _iv_add(entry, _iv_scale(jx[k][j], Y[i][k]))
            delta = Fraction(int(i == j))
            entry = (delta - entry[1], delta - entry[0])
            acc = _iv_add(acc, _iv_mul(entry, shifted[j]))
        lo, hi = box[i]
        if acc[1] < lo or acc[0] > hi:
            return "exclude"
        if not (lo < acc[0] and acc[1] < hi):
            inside = False
    return "unique" if inside else "unknown"


# -- public types --------------------------------------------------------------


class Equilibrium:
    """A located equilibrium with certification and linearization data."""

    __slots__ = (
        "point",
        "exact_point",
        "box",
        "radius",
        "trace",
        "det",
        "classification",
        "index",
        "certified",
        "note",
    )

    def __init__(self, point, exact_point, box, trace, det, classification,
                 index, certified, note=""):
        self.point = tuple(float(x) for x in point)
        self.exact_point = exact_point
        self.box = box
        self.radius = max((hi - lo) / 2 for lo, hi in box) if box else None
        self.trace = trace
        self.det = det
        self.classification = classification
        self.index = index
        self.certified = certified
        self.note = note

    def is_exact(self):
        return self.exact_point is not None

    def __repr__(self):
        return (
            f"Equilibrium(point={self.point!r}, {self.classification}, "
            f"index={self.index}, certified={self.certified})"
        )


class TopologyReport:
    """Equilibria plus the index sum and the GBT sign verdict."""

    __slots__ = ("equilibria", "chi", "gbt_sign", "notes")

    def __init__(self, equilibria, chi, gbt_sign, notes=()):
        self.equilibria = list(equilibria)
        self.chi = chi
        self.gbt_sign = gbt_sign
        self.notes = list(notes)

    def __repr__(self):
        return f"TopologyReport(chi={self.chi}, gbt_sign={self.gbt_sign!r})"


# -- classification ------------------------------------------------------------


def classify(jac):
    """Trace-determinant chart label for a 2x2 linearization.

    Comparisons against zero are exact for int/Fraction entries; float
    callers are classified by the float sign pattern.
    """
    (a, b), (c, d) = jac
    tr = a + d
    det = a * d - b * c
    if det < 0:
        return "saddle"
    if det == 0:
        return "degenerate"
    if tr == 0:
        return "linear-center"
    disc = tr * tr - 4 * det
    if tr > 0:
        return "source-focus" if disc < 0 else "source-node"
    return "sink-focus" if disc < 0 else "sink-node"


def poincare_index(eq):
    """Index of a nondegenerate equilibrium: sign of det J."""
    det = eq.det if not isinstance(eq, (list, tuple)) else None
    if det is None:
        (a, b), (c, d) = eq
        det = a * d - b * c
    if det > 0:
        return 1
    if det < 0:
        return -1
    raise DegenerateIndexError("det J = 0: index undefined for degenerate point")


def euler_characteristic(equilibria):
    """Index sum over the box plus the GBT sign rule (chi > 0 => positive)."""
    notes = []
    for eq in equilibria:
        if not eq.certified:
            return TopologyReport(
                equilibria, None, "undetermined",
                [f"uncertified candidate near {eq.point}; chi not computable"],
            )
        if eq.classification == "degenerate":
            return TopologyReport(
                equilibria, None, "undetermined",
                [f"degenerate equilibrium at {eq.point}; index undefined"],
            )
    chi = sum(eq.index for eq in equilibria)
    sign = "positive" if chi > 0 else "nonpositive"
    return TopologyReport(equilibria, chi, sign, notes)


# -- search ---------------------------------------------------------------------


def _to_fraction(x):
    if isinstance(x, float):
        return Fraction(x)
    return Fraction(x)


def _normalize_box(box, n):
    out = []
    for pair in box:
        lo, hi = pair
        lo = _to_fraction(lo)
        hi = _to_fraction(hi)
        if not lo < hi:
            raise ValueError(f"empty box side ({lo}, {hi})")
        out.append((lo, hi))
    if len(out) != n:
        raise ValueError(f"box has {len(out)} sides for {n} states")
    return tuple(out)


def _touches(box, outer):
    return any(
        lo == olo or hi == ohi for (lo, hi), (olo, ohi) in zip(box, outer)
    )


def _newton_polish(problem, start, tol, max_iter=60):
    point = [float(x) for x in start]
    n = problem.n
    for _ in range(max_iter):
        f = problem.f_float(point)
        if all(abs(v) <= tol for v in f):
            break
        j = problem.jac_float(point)
        try:
            jinv = _mat_inverse([[Fraction(v) for v in row] for row in j])
        except (ValueError, ZeroDivisionError, OverflowError):
            jinv = None
        if jinv is None:
            break
        step = [sum(float(jinv[i][k]) * f[k] for k in range(n)) for i in range(n)]
        point = [p - s for p, s in zip(point, step)]
    return point


def _try_snap(problem, point):
    # Upgrade to an exact rational equilibrium when one is this close.
    candidate = tuple(Fraction(x).limit_denominator(1000) for x in point)
    if all(abs(float(c) - x) <= 1e-6 * (1 + abs(x)) for c, x in zip(candidate, point)):
        if all(v == 0 for v in problem.f_exact(candidate)):
            return candidate
    return None


def find_equilibria(vf, box, tol=1e-10):
    """All equilibria of a specialized field in a box, interval-certified.

    Returns Equilibrium entries sorted by coordinates.  Raises
    BoundaryContactError when a candidate zero cannot be separated from the
    box boundary, and ValueError for unbound parameters.
    """
    if vf.params:
        raise ValueError(f"parameters {vf.params} must be bound before root search")
    problem = _Problem(vf)
    outer = _normalize_box(box, problem.n)
    queue = [outer]
    certified = []
    uncertain = []
    while queue:
        cur = queue.pop()
        fbox = _float_box(cur)
        if _excludes_zero_f(problem, fbox):
            continue
        widths = [hi - lo for lo, hi in cur]
        w = max(widths)
        # Krawczyk rarely certifies wide boxes; skip it until subdivision
        # has narrowed the candidate.  The float screen is sound for
        # exclusion; a 'unique' hint is re-proved in exact arithmetic.
        if w <= Fraction(1, 2):
            verdict = _krawczyk_float(problem, fbox)
            if verdict == "exclude":
                continue
            if verdict == "unique" and _krawczyk_test(problem, cur) == "unique":
                certified.append(cur)
                continue
        scale = 1 + max(abs(lo) + abs(hi) for lo, hi in cur) / 2
        if w < _MIN_REL_WIDTH * scale:
            if _touches(cur, outer):
                raise BoundaryContactError(
                    f"possible zero touches the box boundary near "
                    f"{[float((lo + hi) / 2) for lo, hi in cur]}; "
                    "perturb the box edges and rerun"
                )
            uncertain.append(cur)
            continue
        axis = widths.index(w)
        lo, hi = cur[axis]
        cut = Fraction(float(lo + (hi - lo) * _SPLIT))
        if not lo < cut < hi:
            cut = lo + (hi - lo) * _SPLIT
        left = tuple((lo, cut) if i == axis else s for i, s in enumerate(cur))
        right = tuple((cut, hi) if i == axis else s for i, s in enumerate(cur))
        queue.append(left)
        queue.append(right)

    results = []
    for sub in certified:
        mid = tuple((lo + hi) / 2 for lo, hi in sub)
        point = _newton_polish(problem, mid, tol)
        exact = _try_snap(problem, point)
        if exact is not None:
            point = [float(x) for x in exact]
            jac = problem.jac_exact(exact)
        else:
            jac = problem.jac_float(point)
        tr = jac[0][0] + jac[1][1] if problem.n == 2 else None
        det = _mat_det(jac)
        label = classify(jac) if problem.n == 2 else None
        if det > 0:
            index = 1
        elif det < 0:
            index = -1
        else:
            index = None
        results.append(
            Equilibrium(point, exact, sub, tr, det, label, index, True)
        )
    for sub in uncertain:
        mid = tuple((lo + hi) / 2 for lo, hi in sub)
        point = _newton_polish(problem, mid, tol)
        results.append(
            Equilibrium(
                point, None, sub, None, None, "degenerate", None, False,
                note="certification failed at minimum box width; "
                "root may be degenerate or clustered",
            )
        )
    results.sort(key=lambda e: e.point)
    return results


def _mat_det(m):
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        term = m[0][j] * _mat_det(minor)
        total = total - term if j % 2 else total + term
    return total


def winding_number(vf, center, radius, samples=64):
    """Winding number of the field along a circle, by angle accumulation.

    Independent numerical cross-check of the Poincare index.
    """
    if len(vf.states) != 2:
        raise ValueError("winding number is defined for planar fields")
    problem = _Problem(vf)
    total = 0.0
    prev = None
    for k in range(samples + 1):
        ang = 2 * math.pi * k / samples
        x = center[0] + radius * math.cos(ang)
        y = center[1] + radius * math.sin(ang)
        fx, fy = problem.f_float((x, y))
        if fx == 0 and fy == 0:
            raise DomainError("field vanishes on the test circle")
        theta = math.atan2(fy, fx)
        if prev is not None:
            d = theta - prev
            while d > math.pi:
                d -= 2 * math.pi
            while d < -math.pi:
                d += 2 * math.pi
            total += d
        prev = theta
    return round(total / (2 * math.pi))
