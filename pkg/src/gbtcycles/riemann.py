"""Symbolic curvature pipeline for the metric induced by a vector field.

The gbt construction assigns to a polynomial vector field
Phi = (Phi_1, ..., Phi_N) the diagonal metric

    G_ii = 2 * sum_j (d Phi_j / d coord_i)^2,

a positive semidefinite polynomial metric on the chosen coordinates.  The
pipeline then follows the classical tensor calculus: Christoffel symbols of
the second kind, the Riemann tensor, and the scalar curvature R obtained by
contracting with the inverse metric.  All steps are exact rational-function
computations, so results are canonical and comparable symbolically.

Sign convention.  The ``gbt`` convention defines the Riemann tensor as

    R^a_{xsl} = Gamma^a_{xs,l} - Gamma^a_{xl,s}
                + Gamma^m_{xs} Gamma^a_{ml} - Gamma^m_{xl} Gamma^a_{ms},

which is the negative of the common textbook definition; in two dimensions it
gives R = -2K for Gaussian curvature K.  The ``convention`` argument selects
``"gbt"`` (default, as above) or ``"standard"`` (textbook); the two scalar
curvatures differ exactly by sign in any dimension.

``scalar_curvature_2d_diagonal`` is an independent shortcut for the
two-dimensional diagonal case built on the Liouville formula for Gaussian
curvature; it must agree with the generic pipeline symbolically and is used
to cross-check it.
"""

from fractions import Fraction

from .algebra import Polynomial, RationalFunction
from .sysdsl import VectorField

CONVENTIONS = ("gbt", "standard")


class MetricError(Exception):
    """Metric construction or shape violates a pipeline precondition."""


class DegenerateMetricError(MetricError):
    """Metric is identically singular (zero row or identically zero determinant)."""


def _check_convention(convention):
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    return convention


def _as_rf(value, coords):
    # Entries may use symbols beyond the coordinates (symbolic parameters),
    # so their variable tables are left alone; arithmetic aligns tables.
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction(value)
    if isinstance(value, (int, Fraction)):
        return RationalFunction(Polynomial.constant(value, coords))
    raise TypeError(f"metric entries must be exact, got {type(value).__name__}")


def _zero_rf(coords):
    return RationalFunction(Polynomial.zero(coords))


class MetricTensor:
    """Symmetric matrix of exact rational functions over ordered coordinates."""

    __slots__ = ("coords", "entries")

    def __init__(self, coords, entries):
        coords = tuple(coords)
        rows = tuple(tuple(_as_rf(e, coords) for e in row) for row in entries)
        n = len(coords)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise MetricError(f"metric must be {n}x{n} to match {coords!r}")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise MetricError(f"metric is not symmetric at ({i}, {j})")
        self.coords = coords
        self.entries = rows

    @property
    def dim(self):
        return len(self.coords)

    def is_diagonal(self):
        n = self.dim
        return all(
            self.entries[i][j].is_zero() for i in range(n) for j in range(n) if i != j
        )

    def determinant(self):
        return _det(self.entries)

    def __eq__(self, other):
        if not isinstance(other, MetricTensor):
            return NotImplemented
        return self.coords == other.coords and self.entries == other.entries

    def __repr__(self):
        body = "; ".join(
            ", ".join(e.text() for e in row) for row in self.entries
        )
        return f"MetricTensor({self.coords!r}: {body})"


class ChristoffelSet:
    """Christoffel symbols Gamma[a][x][s], symmetric in the lower pair."""

    __slots__ = ("coords", "gamma")

    def __init__(self, coords, gamma):
        self.coords = tuple(coords)
        self.gamma = gamma


class RiemannTensor:
    """Curvature tensor Rm[a][x][s][l] under a fixed sign convention."""

    __slots__ = ("coords", "components", "convention")

    def __init__(self, coords, components, convention):
        self.coords = tuple(coords)
        self.components = components
        self.convention = _check_convention(convention)


class ScalarCurvature:
    """Scalar curvature as a canonical rational function plus its convention."""

    __slots__ = ("expr", "convention")

    def __init__(self, expr, convention):
        self.expr = expr
        self.convention = _check_convention(convention)

    def evaluate(self, bindings):
        return self.expr.evaluate(bindings)

    def evaluate_float(self, bindings):
        return self.expr.evaluate_float(bindings)

    def text(self):
        return self.expr.text()

    def __eq__(self, other):
        if not isinstance(other, ScalarCurvature):
            return NotImplemented
        return self.convention == other.convention and self.expr == other.expr

    def __repr__(self):
        return f"ScalarCurvature({self.expr.text()!r}, convention={self.convention!r})"


def gbt_metric(vf, coords=None):
    """Diagonal GBT metric of a vector field over the chosen coordinates.

    Each diagonal entry is 2 * sum over components of the squared partial
    with respect to that coordinate.  A coordinate that no component uses
    would make the metric identically singular and raises
    DegenerateMetricError.
    """
    if not isinstance(vf, VectorField):
        raise TypeError("gbt_metric expects a VectorField")
    if coords is None:
        coords = vf.states
    coords = tuple(coords)
    allowed = set(vf.variables)
    for c in coords:
        if c not in allowed:
            raise MetricError(f"coordinate {c!r} is not a state or parameter of {vf.name}")
    table = vf.variables
    n = len(coords)
    rows = []
    for i, c in enumerate(coords):
        if not any(comp.uses(c) for comp in vf.components):
            raise DegenerateMetricError(
                f"coordinate {c!r} appears in no component; metric direction degenerate"
            )
        total = Polynomial.zero(table)
        for comp in vf.components:
            d = comp.diff(c)
            total = total + d * d
        entry = total * 2
        rows.append(
            tuple(
                entry if j == i else Polynomial.zero(table) for j in range(n)
            )
        )
    return MetricTensor(coords, rows)


def _det(entries):
    n = len(entries)
    if n == 1:
        return entries[0][0]
    if n == 2:
        return entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0]
    total = None
    for j in range(n):
        if entries[0][j].is_zero():
            continue
        minor = [
            [entries[i][k] for k in range(n) if k != j] for i in range(1, n)
        ]
        term = entries[0][j] * _det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        first = entries[0][0]
        return first - first
    return total


def metric_inverse(metric):
    """Inverse metric via adjugate over determinant; exact and symmetric."""
    n = metric.dim
    coords = metric.coords
    if metric.is_diagonal():
        rows = []
        for i in range(n):
            gii = metric.entries[i][i]
            if gii.is_zero():
                raise DegenerateMetricError(f"diagonal entry {i} is identically zero")
            rows.append(
                tuple(
                    gii.reciprocal() if j == i else _zero_rf(coords)
                    for j in range(n)
                )
            )
        return MetricTensor(coords, rows)
    det = metric.determinant()
    if det.is_zero():
        raise DegenerateMetricError("metric determinant is identically zero")
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [
                [metric.entries[r][c] for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            cof = _det(minor) if minor else _as_rf(1, coords)
            if (i + j) % 2:
                cof = -cof
            row.append(cof / det)
        rows.append(tuple(row))
    return MetricTensor(coords, rows)


def christoffel(metric):
    """Christoffel symbols of the second kind.

    Gamma^a_{xs} = (1/2) sum_m Ginv[m][a] (G_{mx,s} + G_{ms,x} - G_{xs,m}).
    """
    coords = metric.coords
    n = metric.dim
    inv = metric_inverse(metric)
    G = metric.entries
    dG = [
        [[G[i][j].diff(c) for c in coords] for j in range(n)] for i in range(n)
    ]
    zero = _zero_rf(coords)
    half = Fraction(1, 2)
    gamma = [[[zero] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for x in range(n):
            for s in range(x, n):
                total = None
                for m in range(n):
                    coeff = inv.entries[m][a]
                    if coeff.is_zero():
                        continue
                    bracket = dG[m][x][s] + dG[m][s][x] - dG[x][s][m]
                    if bracket.is_zero():
                        continue
                    term = coeff * bracket
                    total = term if total is None else total + term
                value = zero if total is None else total * half
                gamma[a][x][s] = value
                gamma[a][s][x] = value
    return ChristoffelSet(coords, gamma)


def riemann_tensor(gamma_set, convention="gbt"):
    """Riemann tensor in the GBT index convention (or its negation).

    R^a_{xsl} = Gamma^a_{xs,l} - Gamma^a_{xl,s}
                + Gamma^m_{xs} Gamma^a_{ml} - Gamma^m_{xl} Gamma^a_{ms};
    ``convention="standard"`` negates every component.  Antisymmetry in the
    last two indices holds by construction.
    """
    _check_convention(convention)
    coords = gamma_set.coords
    gamma = gamma_set.gamma
    n = len(coords)
    zero = _zero_rf(coords)
    comps = [[[[zero] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for a in range(n):
        for x in range(n):
            for s in range(n):
                for l in range(s + 1, n):
                    total = gamma[a][x][s].diff(coords[l]) - gamma[a][x][l].diff(
                        coords[s]
                    )
                    for m in range(n):
                        g1 = gamma[m][x][s]
                        g2 = gamma[a][m][l]
                        if not (g1.is_zero() or g2.is_zero()):
                            total = total + g1 * g2
                        g3 = gamma[m][x][l]
                        g4 = gamma[a][m][s]
                        if not (g3.is_zero() or g4.is_zero()):
                            total = total - g3 * g4
                    if convention == "standard":
                        total = -total
                    comps[a][x][s][l] = total
                    comps[a][x][l][s] = -total
    return RiemannTensor(coords, comps, convention)


def scalar_curvature(metric, riemann):
    """Scalar curvature R = sum_{m,v} Ginv[m][v] * sum_t Rm[t][m][t][v]."""
    coords = metric.coords
    n = metric.dim
    inv = metric_inverse(metric)
    total = None
    for m in range(n):
        for v in range(n):
            coeff = inv.entries[m][v]
            if coeff.is_zero():
                continue
            ric = None
            for t in range(n):
                comp = riemann.components[t][m][t][v]
                if comp.is_zero():
                    continue
                ric = comp if ric is None else ric + comp
            if ric is None:
                continue
            term = coeff * ric
            total = term if total is None else total + term
    if total is None:
        total = _zero_rf(coords)
    return ScalarCurvature(total, riemann.convention)


def curvature_pipeline(vf, coords=None, convention="gbt"):
    """Full pipeline: GBT metric -> Christoffel -> Riemann -> scalar R."""
    metric = gbt_metric(vf, coords)
    gamma = christoffel(metric)
    riem = riemann_tensor(gamma, convention)
    return scalar_curvature(metric, riem)


def scalar_curvature_2d_diagonal(metric, convention="gbt"):
    """Independent 2D shortcut via the Liouville formula.

    For a diagonal metric diag(E, G) in coordinates (x, y), the Gaussian
    curvature is

        K = -(E_yy + G_xx) / (2 E G)
            + (G_x (E_x G + E G_x) + E_y (E_y G + E G_y)) / (4 E^2 G^2),

    and the scalar curvature is 2K (standard convention) or -2K (GBT).
    """
    _check_convention(convention)
    if metric.dim != 2:
        raise MetricError("2D shortcut requires a two-dimensional metric")
    if not metric.is_diagonal():
        raise MetricError("2D shortcut requires a diagonal metric")
    x, y = metric.coords
    E = metric.entries[0][0]
    G = metric.entries[1][1]
    if E.is_zero() or G.is_zero():
        raise DegenerateMetricError("diagonal entry is identically zero")
    Ex = E.diff(x)
    Ey = E.diff(y)
    Eyy = Ey.diff(y)
    Gx = G.diff(x)
    Gy = G.diff(y)
    Gxx = Gx.diff(x)
    EG = E * G
    k = -(Eyy + Gxx) / (2 * EG) + (Gx * (Ex * G + E * Gx) + Ey * (Ey * G + E * Gy)) / (
        4 * EG * EG
    )
    r = -2 * k if convention == "gbt" else 2 * k
    return ScalarCurvature(r, convention)


def gauss_curvature_2d_numeric(E, Ex, Ey, Eyy, G, Gx, Gy, Gxx):
    """Float Liouville formula from point values of a diagonal metric.

    Useful for checking non-polynomial metrics (for example a round sphere)
    at sample points without symbolic machinery.
    """
    eg = E * G
    return -(Eyy + Gxx) / (2.0 * eg) + (
        Gx * (Ex * G + E * Gx) + Ey * (Ey * G + E * Gy)
    ) / (4.0 * eg * eg)
