"""Exact multivariate polynomial and rational-function arithmetic.

Polynomials are stored sparsely as a map from exponent tuples to Fraction
coefficients, together with an ordered tuple of variable names giving each
exponent position its meaning.  All arithmetic is exact; floats are rejected
as coefficients and only appear in the dedicated ``evaluate_float`` paths.

Rational functions are kept in a canonical reduced form: numerator and
denominator coprime, denominator with integer coefficients, content one and a
positive leading coefficient in graded lexicographic order.  Two equal
rational functions therefore compare equal structurally.

The gcd uses the subresultant polynomial remainder sequence (Brown's
algorithm) recursively: multivariate polynomials are viewed as univariate in
their first variable with polynomial coefficients, and contents are split off
at every level.  Rational coefficients are handled by factoring each input
into a rational content times a primitive integer polynomial.

Arbitrary-precision rationals are the standard library ``fractions.Fraction``
(re-exported as ``BigRational``); there is no reason to reimplement them.
"""

import heapq
import math
from fractions import Fraction

from . import backend

BigRational = Fraction


class AlgebraError(Exception):
    """Base class for exact-arithmetic errors."""


class DomainError(AlgebraError):
    """Operation left the supported domain (inexact division, bad operand)."""


class PoleError(AlgebraError):
    """Evaluation of a rational function at a zero of its denominator."""

    def __init__(self, point, message=None):
        self.point = dict(point)
        super().__init__(message or f"denominator vanishes at {self.point}")


def _glex(exp):
    # Graded lexicographic sort key: total degree first, then lex on exponents.
    return (sum(exp), exp)


def _glex_item(item):
    return _glex(item[0])


def _coeff(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(
        f"exact coefficient required (int or Fraction), got {type(value).__name__}"
    )


def _frac_text(q):
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class Polynomial:
    """Immutable sparse multivariate polynomial with Fraction coefficients."""

    __slots__ = ("_vars", "_terms", "_sig")

    def __init__(self, variables, terms):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables!r}")
        n = len(variables)
        clean = {}
        for exp, c in terms.items():
            exp = tuple(exp)
            if len(exp) != n or any((not isinstance(e, int)) or e < 0 for e in exp):
                raise ValueError(f"bad exponent tuple {exp!r} for {n} variables")
            c = _coeff(c)
            if c:
                clean[exp] = c
        self._vars = variables
        self._terms = clean
        self._sig = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables=()):
        return cls(variables, {})

    @classmethod
    def constant(cls, value, variables=()):
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): _coeff(value)})

    @classmethod
    def one(cls, variables=()):
        return cls.constant(1, variables)

    @classmethod
    def variable(cls, name):
        return cls((name,), {(1,): Fraction(1)})

    # -- inspection --------------------------------------------------------

    @property
    def variables(self):
        return self._vars

    @property
    def terms(self):
        """Term map as a plain dict copy (exponent tuple -> Fraction)."""
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(not any(e) for e in self._terms)

    def constant_value(self):
        """The value of a constant polynomial as a Fraction."""
        if not self._terms:
            return Fraction(0)
        if not self.is_constant():
            raise DomainError(f"{self} is not constant")
        return next(iter(self._terms.values()))

    def total_degree(self):
        """Maximum total degree, or -1 for the zero polynomial."""
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def degree_in(self, name):
        """Maximum exponent of one variable, or -1 for the zero polynomial."""
        if not self._terms:
            return -1
        try:
            i = self._vars.index(name)
        except ValueError:
            return 0
        return max(e[i] for e in self._terms)

    def uses(self, name):
        return self.degree_in(name) > 0

    def leading_term(self):
        """Graded-lex leading (exponent, coefficient) pair."""
        if not self._terms:
            raise DomainError("zero polynomial has no leading term")
        exp = max(self._terms, key=_glex)
        return exp, self._terms[exp]

    # -- structural equality -----------------------------------------------

    def _signature(self):
        # Variable-table independent canonical content, cached.
        if self._sig is None:
            self._sig = frozenset(
                (tuple(sorted((v, k) for v, k in zip(self._vars, e) if k)), c)
                for e, c in self._terms.items()
            )
        return self._sig

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, RationalFunction):
            return other == self
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._signature() == other._signature()

    def __hash__(self):
        # Constants hash like their numeric value so p == 3 implies equal hash.
        if self.is_constant():
            return hash(self.constant_value())
        return hash(self._signature())

    def __bool__(self):
        return bool(self._terms)

    # -- arithmetic ----------------------------------------------------------

    def _aligned(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other, self._vars)
        if not isinstance(other, Polynomial):
            return None, None, None
        if self._vars == other._vars:
            return self._vars, self._terms, other._terms
        merged = list(self._vars)
        seen = set(merged)
        for v in other._vars:
            if v not in seen:
                merged.append(v)
                seen.add(v)
        merged = tuple(merged)
        return merged, _remap(self, merged), _remap(other, merged)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        variables, a, b = self._aligned(other)
        if variables is None:
            return NotImplemented
        return _make(variables, backend.terms_add(a, b))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        variables, a, b = self._aligned(other)
        if variables is None:
            return NotImplemented
        return _make(variables, backend.terms_sub(a, b))

    def __rsub__(self, other):
        variables, a, b = self._aligned(other)
        if variables is None:
            return NotImplemented
        return _make(variables, backend.terms_sub(b, a))

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        if isinstance(other, (int, Fraction)):
            c = _coeff(other)
            if not c:
                return Polynomial.zero(self._vars)
            return _make(self._vars, backend.terms_scale(self._terms, c))
        variables, a, b = self._aligned(other)
        if variables is None:
            return NotImplemented
        return _make(variables, backend.terms_mul(a, b))

    __rmul__ = __mul__

    def __neg__(self):
        return _make(self._vars, backend.terms_neg(self._terms))

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"polynomial power must be a non-negative int, got {n!r}")
        result = {(0,) * len(self._vars): Fraction(1)}
        base = self._terms
        while n:
            if n & 1:
                result = backend.terms_mul(result, base)
            n >>= 1
            if n:
                base = backend.terms_mul(base, base)
        return _make(self._vars, result)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            c = _coeff(other)
            if not c:
                raise DomainError("division by zero")
            return _make(self._vars, backend.terms_scale(self._terms, 1 / c))
        if isinstance(other, Polynomial):
            return RationalFunction(self, other)
        return NotImplemented

    # -- calculus ------------------------------------------------------------

    def diff(self, name):
        """Exact partial derivative with respect to one variable."""
        try:
            i = self._vars.index(name)
        except ValueError:
            return Polynomial.zero(self._vars)
        out = {}
        for exp, c in self._terms.items():
            k = exp[i]
            if k:
                lowered = exp[:i] + (k - 1,) + exp[i + 1 :]
                out[lowered] = out.get(lowered, Fraction(0)) + c * k
        return _make(self._vars, {e: c for e, c in out.items() if c})

    # -- evaluation ------------------------------------------------------------

    def _values_for(self, bindings, caster):
        values = []
        for i, v in enumerate(self._vars):
            if v in bindings:
                values.append(caster(bindings[v]))
            elif any(e[i] for e in self._terms):
                raise DomainError(f"no value supplied for variable {v!r}")
            else:
                values.append(None)
        return values

    def evaluate(self, bindings):
        """Exact value at a rational point; bindings map name -> int | Fraction."""
        values = self._values_for(bindings, _coeff)
        total = Fraction(0)
        for exp, c in self._terms.items():
            prod = c
            for val, k in zip(values, exp):
                if k:
                    prod *= val**k
            total += prod
        return total

    def evaluate_float(self, bindings):
        """Float value via Horner's scheme, one variable at a time."""
        values = self._values_for(bindings, float)
        if not self._terms:
            return 0.0
        return _horner(list(self._terms.items()), 0, len(self._vars), values)

    def subs(self, bindings):
        """Substitute exact values for some variables; the rest stay symbolic."""
        binds = {}
        for name, value in bindings.items():
            if name in self._vars:
                binds[self._vars.index(name)] = _coeff(value)
        if not binds:
            return self
        n = len(self._vars)
        out = {}
        for exp, c in self._terms.items():
            for i, val in binds.items():
                k = exp[i]
                if k:
                    c = c * val**k
            if not c:
                continue
            new_exp = tuple(0 if i in binds else e for i, e in enumerate(exp))
            acc = out.get(new_exp)
            out[new_exp] = c if acc is None else acc + c
        return _make(self._vars, {e: c for e, c in out.items() if c})

    def drop_variables(self, names):
        """Remove table entries for variables the polynomial does not use."""
        names = set(names)
        for v in names:
            if self.uses(v):
                raise DomainError(f"cannot drop variable {v!r}: it appears in {self}")
        keep = [i for i, v in enumerate(self._vars) if v not in names]
        variables = tuple(self._vars[i] for i in keep)
        terms = {tuple(e[i] for i in keep): c for e, c in self._terms.items()}
        return _make(variables, terms)

    def reordered(self, variables):
        """The same polynomial over a replacement variable table."""
        variables = tuple(variables)
        for v in self._vars:
            if v not in variables and self.uses(v):
                raise DomainError(f"variable {v!r} missing from replacement table")
        return _make(variables, _remap(self, variables))

    # -- integer normal form -----------------------------------------------

    def content_primitive(self):
        """Split into (rational content, primitive integer polynomial).

        The primitive part has integer coefficients with gcd one and a
        positive graded-lex leading coefficient; the content carries sign and
        scale, so ``self == content * primitive``.  The zero polynomial
        splits as (0, 0).
        """
        if not self._terms:
            return Fraction(0), self
        num_gcd = 0
        den_lcm = 1
        for c in self._terms.values():
            num_gcd = math.gcd(num_gcd, c.numerator)
            den_lcm = math.lcm(den_lcm, c.denominator)
        content = Fraction(num_gcd, den_lcm)
        prim = {e: c / content for e, c in self._terms.items()}
        if prim[max(prim, key=_glex)] < 0:
            content = -content
            prim = {e: -c for e, c in prim.items()}
        return content, _make(self._vars, prim)

    def _int_terms(self):
        # Raw integer term map; caller guarantees integer coefficients.
        return {e: c.numerator for e, c in self._terms.items()}

    # -- rendering ---------------------------------------------------------

    def text(self):
        """Canonical human-readable form, graded-lex descending."""
        if not self._terms:
            return "0"
        parts = []
        for exp, c in sorted(self._terms.items(), key=_glex_item, reverse=True):
            factors = []
            for v, k in zip(self._vars, exp):
                if k == 1:
                    factors.append(v)
                elif k > 1:
                    factors.append(f"{v}^{k}")
            mag = abs(c)
            if not factors:
                body = _frac_text(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_frac_text(mag)] + factors)
            parts.append(("- " if c < 0 else "+ ") + body)
        head = parts[0]
        head = head[2:] if head.startswith("+ ") else "-" + head[2:]
        return " ".join([head] + parts[1:])

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"Polynomial({self.text()!r}, vars={self._vars!r})"


def _make(variables, terms):
    p = Polynomial.__new__(Polynomial)
    p._vars = variables
    p._terms = terms
    p._sig = None
    return p


def _remap(p, variables):
    index = [variables.index(v) for v in p._vars]
    n = len(variables)
    out = {}
    for exp, c in p._terms.items():
        new_exp = [0] * n
        for i, e in zip(index, exp):
            new_exp[i] = e
        out[tuple(new_exp)] = c
    return out


def _horner(items, vi, n, values):
    if vi == n:
        total = Fraction(0)
        for _, c in items:
            total += c
        return float(total)
    groups = {}
    for exp, c in items:
        groups.setdefault(exp[vi], []).append((exp, c))
    degrees = sorted(groups, reverse=True)
    if degrees == [0]:
        return _horner(items, vi + 1, n, values)
    x = values[vi]
    acc = 0.0
    prev = None
    for d in degrees:
        if prev is not None:
            acc *= x ** (prev - d)
        acc += _horner(groups[d], vi + 1, n, values)
        prev = d
    if degrees[-1]:
        acc *= x ** degrees[-1]
    return acc


# -- exact division over the rationals ---------------------------------------


def _heap_key(exp):
    # Min-heap entry that pops the graded-lex maximum first.
    return (-sum(exp), tuple(-x for x in exp))


def _long_division(ta, tb, coeff_div):
    # Shared exact long division: mutates a working copy of ta, tracking the
    # current graded-lex maximum with a lazy max-heap.  coeff_div divides two
    # coefficients exactly or raises DomainError.
    lead_b = max(tb, key=_glex)
    lcb = tb[lead_b]
    items_b = list(tb.items())
    remainder = dict(ta)
    heap = [(_heap_key(e), e) for e in remainder]
    heapq.heapify(heap)
    out = {}
    while heap:
        _, e = heapq.heappop(heap)
        c = remainder.get(e)
        if c is None:
            continue
        exp = tuple(x - y for x, y in zip(e, lead_b))
        if any(x < 0 for x in exp):
            raise DomainError("inexact polynomial division")
        q = coeff_div(c, lcb)
        out[exp] = q
        for eb, cb in items_b:
            t = tuple(x + y for x, y in zip(exp, eb))
            cur = remainder.get(t)
            if cur is None:
                remainder[t] = -q * cb
                heapq.heappush(heap, (_heap_key(t), t))
            else:
                cur -= q * cb
                if cur:
                    remainder[t] = cur
                else:
                    del remainder[t]
    return out


def _field_coeff_div(a, b):
    return a / b


def exact_div(a, b):
    """Quotient a / b when b divides a exactly; DomainError otherwise."""
    variables, ta, tb = a._aligned(b)
    if variables is None:
        raise TypeError("exact_div expects polynomials")
    if not tb:
        raise DomainError("division by the zero polynomial")
    if not ta:
        return Polynomial.zero(variables)
    return _make(variables, _long_division(ta, tb, _field_coeff_div))


# -- gcd over the integers (subresultant PRS) --------------------------------
#
# Integer term maps (dict[exponent tuple, int]) are viewed as univariate in
# exponent position 0 with coefficients that are integer term maps over the
# remaining positions.  "Ground" below always means that coefficient ring.


def _int_content(T):
    g = 0
    for c in T.values():
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _div_all(T, k):
    if k == 1:
        return T
    return {e: c // k for e, c in T.items()}


def _extract_monomial(T):
    m = None
    for exp in T:
        if m is None:
            m = list(exp)
        else:
            m = [min(a, b) for a, b in zip(m, exp)]
        if not any(m):
            return tuple(m), T
    m = tuple(m)
    return m, {tuple(a - b for a, b in zip(e, m)): c for e, c in T.items()}


def _pos_lead(T):
    if T and T[max(T, key=_glex)] < 0:
        return {e: -c for e, c in T.items()}
    return T


def _to_view(T):
    view = {}
    for exp, c in T.items():
        coeffs = view.setdefault(exp[0], {})
        coeffs[exp[1:]] = c
    return view


def _from_view(view):
    out = {}
    for d, coeffs in view.items():
        for rest, c in coeffs.items():
            out[(d, *rest)] = c
    return out


def _lift0(T):
    return {(0, *e): c for e, c in T.items()}


def _ground_one(nc):
    return {(0,) * nc: 1}


def _ground_pow(g, k):
    if k == 0:
        return {(): 1} if not g else _ground_one(len(next(iter(g))))
    result = None
    base = g
    while k:
        if k & 1:
            result = base if result is None else backend.terms_mul(result, base)
        k >>= 1
        if k:
            base = backend.terms_mul(base, base)
    return result


def _int_coeff_div(a, b):
    q, r = divmod(a, b)
    if r:
        raise DomainError("inexact division in gcd machinery")
    return q


def _exact_div_int(A, B, nc):
    # Exact division of integer term maps; raises DomainError if inexact.
    if not B:
        raise DomainError("division by zero in gcd machinery")
    if not A:
        return {}
    if len(B) == 1:
        ((eb, cb),) = B.items()
        out = {}
        for e, c in A.items():
            q, r = divmod(c, cb)
            exp = tuple(x - y for x, y in zip(e, eb))
            if r or any(x < 0 for x in exp):
                raise DomainError("inexact division in gcd machinery")
            out[exp] = q
        return out
    return _long_division(A, B, _int_coeff_div)


def _view_sub(A, B):
    out = {}
    for d in A.keys() | B.keys():
        t = backend.terms_sub(A.get(d, {}), B.get(d, {}))
        if t:
            out[d] = t
    return out


def _view_mul_ground(view, g):
    return {d: backend.terms_mul(coeffs, g) for d, coeffs in view.items()}


def _view_quo_ground(view, g, nc):
    return {d: _exact_div_int(coeffs, g, nc) for d, coeffs in view.items()}


def _view_content(view, nc):
    one = _ground_one(nc)
    content = None
    for coeffs in view.values():
        content = dict(coeffs) if content is None else _gcd_int_terms(content, coeffs, nc)
        if content == one:
            return content
    return _pos_lead(content)


def _view_prem(F, G, nc):
    # Pseudo-remainder prem(F, G) = rem(lc(G)^(dF-dG+1) * F, G), computed by
    # scaling once per reduction step and once more per unused step at the end.
    dF = max(F)
    dG = max(G)
    if dF < dG:
        return dict(F)
    n = dF - dG + 1
    lc_g = G[dG]
    R = dict(F)
    while R:
        dR = max(R)
        if dR < dG:
            break
        lc_r = R[dR]
        n -= 1
        shift = dR - dG
        scaled = _view_mul_ground(R, lc_g)
        sub = {d + shift: backend.terms_mul(coeffs, lc_r) for d, coeffs in G.items()}
        R = _view_sub(scaled, sub)
    if R and n > 0:
        R = _view_mul_ground(R, _ground_pow(lc_g, n))
    return R


def _prs_last(F, G, nc):
    # Subresultant PRS (Brown); F, G primitive views with deg F >= deg G >= 1.
    # Returns the final nonzero sequence element, whose primitive part is the
    # gcd of the inputs up to sign.
    dF = max(F)
    dG = max(G)
    d = dF - dG
    h = _view_prem(F, G, nc)
    if (d + 1) % 2:
        h = {k: backend.terms_neg(v) for k, v in h.items()}
    lc = G[dG]
    c = backend.terms_neg(_ground_pow(lc, d))
    m = dG
    last = G
    while h:
        k = max(h)
        last = h
        F, G = G, h
        m, d = k, m - k
        b = backend.terms_neg(backend.terms_mul(lc, _ground_pow(c, d)))
        h = _view_prem(F, G, nc)
        h = _view_quo_ground(h, b, nc)
        lc = G[max(G)]
        if d > 1:
            c = _exact_div_int(
                _ground_pow(backend.terms_neg(lc), d), _ground_pow(c, d - 1), nc
            )
        else:
            c = backend.terms_neg(lc)
    return last


def _gcd_int_terms(A, B, n):
    # Gcd of integer term maps over n variables, positive leading coefficient.
    if not A:
        return _pos_lead(dict(B))
    if not B:
        return _pos_lead(dict(A))
    if n == 0:
        return {(): math.gcd(A[()], B[()])}
    mono_a, A = _extract_monomial(A)
    mono_b, B = _extract_monomial(B)
    mono = tuple(min(a, b) for a, b in zip(mono_a, mono_b))
    ca = _int_content(A)
    cb = _int_content(B)
    c = math.gcd(ca, cb)
    A = _div_all(A, ca)
    B = _div_all(B, cb)
    core = _gcd_primitive(A, B, n)
    if c != 1:
        core = {e: coeff * c for e, coeff in core.items()}
    if any(mono):
        core = {tuple(x + y for x, y in zip(e, mono)): coeff for e, coeff in core.items()}
    return core


# Heuristic gcd: evaluate the first variable at a large integer xi, take the
# gcd of the resulting smaller objects, and lift it back by balanced base-xi
# digit expansion.  A candidate is accepted only after exact trial divisions,
# so a success is certified; on repeated failure the caller falls back to the
# subresultant PRS.  The starting xi exceeds twice the smaller coefficient
# norm, which keeps nonconstant factors from evaluating to a unit.

_HEU_TRIES = 6


def _eval_main(T, xi):
    powers = {0: 1}
    out = {}
    for exp, c in T.items():
        d = exp[0]
        p = powers.get(d)
        if p is None:
            p = powers[d] = xi**d
        rest = exp[1:]
        out[rest] = out.get(rest, 0) + c * p
    return {e: c for e, c in out.items() if c}


def _interp_main(g, xi, max_deg):
    out = {}
    cur = g
    half = xi // 2
    deg = 0
    while cur:
        if deg > max_deg:
            return None
        nxt = {}
        for exp, c in cur.items():
            r = c % xi
            if r > half:
                r -= xi
            if r:
                out[(deg, *exp)] = r
            q = (c - r) // xi
            if q:
                nxt[exp] = q
        cur = nxt
        deg += 1
    return out


def _heu_gcd(A, B, n):
    max_deg = min(max(e[0] for e in A), max(e[0] for e in B))
    norm_a = max(abs(c) for c in A.values())
    norm_b = max(abs(c) for c in B.values())
    xi = 2 * min(norm_a, norm_b) + 29
    one = {(0,) * n: 1}
    for _ in range(_HEU_TRIES):
        fa = _eval_main(A, xi)
        fb = _eval_main(B, xi)
        if fa and fb:
            g_sub = _gcd_int_terms(fa, fb, n - 1)
            G = _interp_main(g_sub, xi, max_deg)
            if G:
                content = _int_content(G)
                if content > 1:
                    G = _div_all(G, content)
                G = _pos_lead(G)
                if G == one:
                    return G
                try:
                    _exact_div_int(A, G, n)
                    _exact_div_int(B, G, n)
                    return G
                except DomainError:
                    pass
        xi = xi * 73794 // 27011
    return None


def _gcd_primitive(A, B, n):
    # A, B primitive (unit content, no common monomial factor within each).
    if len(A) == 1 or len(B) == 1:
        return {(0,) * n: 1}
    if A == B:
        return _pos_lead(dict(A))
    if _negated(A, B):
        return _pos_lead(dict(A))
    G = _heu_gcd(A, B, n)
    if G is not None:
        return G
    return _gcd_prs(A, B, n)


def _gcd_prs(A, B, n):
    # Subresultant PRS fallback for the rare heuristic failures.
    FA = _to_view(A)
    FB = _to_view(B)
    dA = max(FA)
    dB = max(FB)
    nc = n - 1
    if dA == 0 and dB == 0:
        return _lift0(_gcd_int_terms(FA[0], FB[0], nc))
    if dA == 0:
        return _lift0(_gcd_int_terms(FA[0], _view_content(FB, nc), nc))
    if dB == 0:
        return _lift0(_gcd_int_terms(FB[0], _view_content(FA, nc), nc))
    if dA < dB:
        FA, FB = FB, FA
    cont_a = _view_content(FA, nc)
    cont_b = _view_content(FB, nc)
    cont = _gcd_int_terms(cont_a, cont_b, nc)
    FA = _view_quo_ground(FA, cont_a, nc)
    FB = _view_quo_ground(FB, cont_b, nc)
    last = _prs_last(FA, FB, nc)
    if max(last) == 0:
        g_pp = {0: _ground_one(nc)}
    else:
        g_pp = _view_quo_ground(last, _view_content(last, nc), nc)
    if cont != _ground_one(nc):
        g_pp = _view_mul_ground(g_pp, cont)
    return _pos_lead(_from_view(g_pp))


def _negated(A, B):
    if len(A) != len(B):
        return False
    for e, c in A.items():
        if B.get(e) != -c:
            return False
    return True


def _frac_gcd(x, y):
    # gcd over the rationals: gcd(p/q, r/s) = gcd(p s, r q) / (q s).
    return Fraction(
        math.gcd(x.numerator * y.denominator, y.numerator * x.denominator),
        x.denominator * y.denominator,
    )


def poly_gcd(a, b):
    """Greatest common divisor, normalized to a positive leading coefficient.

    The rational contents of the inputs contribute their rational gcd, so for
    integer constants this agrees with the integer gcd and ``poly_gcd(p, 0)``
    returns p with the sign of its leading coefficient normalized.
    """
    variables, ta, tb = a._aligned(b)
    if variables is None:
        raise TypeError("poly_gcd expects polynomials")
    a = _make(variables, ta)
    b = _make(variables, tb)
    if a.is_zero() and b.is_zero():
        return Polynomial.zero(variables)
    ca, pa = a.content_primitive()
    cb, pb = b.content_primitive()
    c = _frac_gcd(abs(ca), abs(cb))
    if a.is_zero():
        core = pb._int_terms()
    elif b.is_zero():
        core = pa._int_terms()
    else:
        core = _gcd_int_terms(pa._int_terms(), pb._int_terms(), len(variables))
    return _make(variables, {e: Fraction(v) * c for e, v in core.items()})


# -- rational functions -------------------------------------------------------


class RationalFunction:
    """Quotient of two polynomials in canonical reduced form.

    Invariants: the denominator is nonzero, coprime with the numerator, has
    integer coefficients with content one, and its graded-lex leading
    coefficient is positive.  The zero function is 0/1.
    """

    __slots__ = ("_num", "_den")

    def __init__(self, numerator, denominator=None):
        if isinstance(numerator, (int, Fraction)):
            numerator = Polynomial.constant(numerator)
        if denominator is None:
            denominator = Polynomial.one(numerator.variables)
        if isinstance(denominator, (int, Fraction)):
            denominator = Polynomial.constant(denominator, numerator.variables)
        variables, tn, td = numerator._aligned(denominator)
        if variables is None:
            raise TypeError("RationalFunction expects polynomial operands")
        num = _make(variables, tn)
        den = _make(variables, td)
        if den.is_zero():
            raise DomainError("zero denominator")
        self._num, self._den = _rf_normalize(num, den, reduce=True)

    @classmethod
    def _raw(cls, num, den, reduce):
        rf = cls.__new__(cls)
        rf._num, rf._den = _rf_normalize(num, den, reduce)
        return rf

    # -- inspection ---------------------------------------------------------

    @property
    def numerator(self):
        return self._num

    @property
    def denominator(self):
        return self._den

    @property
    def variables(self):
        return self._num.variables

    def is_zero(self):
        return self._num.is_zero()

    def is_polynomial(self):
        return self._den == 1

    def is_constant(self):
        return self._num.is_constant() and self._den.is_constant()

    def constant_value(self):
        return self._num.constant_value() / self._den.constant_value()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Polynomial)):
            return self._den == 1 and self._num == other
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._den == 1:
            return hash(self._num)
        return hash((self._num._signature(), self._den._signature()))

    def __bool__(self):
        return not self._num.is_zero()

    # -- arithmetic -----------------------------------------------------------

    @staticmethod
    def _wrap(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return RationalFunction(other)
        return None

    def __add__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        a, b = self._num, self._den
        c, d = other._num, other._den
        if b == d:
            return RationalFunction._raw(a + c, b, reduce=True)
        g = poly_gcd(b, d)
        if g.is_constant():
            return RationalFunction._raw(a * d + c * b, b * d, reduce=False)
        b1 = exact_div(b, g)
        d1 = exact_div(d, g)
        num = a * d1 + c * b1
        h = poly_gcd(num, g)
        if h.is_constant():
            return RationalFunction._raw(num, b1 * d1 * g, reduce=False)
        return RationalFunction._raw(
            exact_div(num, h), b1 * d1 * exact_div(g, h), reduce=False
        )

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self._num, self._den, reduce=False)

    def __sub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        a, b = self._num, self._den
        c, d = other._num, other._den
        if a.is_zero() or c.is_zero():
            return RationalFunction(Polynomial.zero(a.variables))
        g1 = poly_gcd(a, d)
        if not g1.is_constant():
            a = exact_div(a, g1)
            d = exact_div(d, g1)
        g2 = poly_gcd(c, b)
        if not g2.is_constant():
            c = exact_div(c, g2)
            b = exact_div(b, g2)
        return RationalFunction._raw(a * c, b * d, reduce=False)

    __rmul__ = __mul__

    def reciprocal(self):
        if self._num.is_zero():
            raise DomainError("reciprocal of zero")
        return RationalFunction._raw(self._den, self._num, reduce=False)

    def __truediv__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        other = self._wrap(other)
        if other is None:
            return NotImplemented
        return other * self.reciprocal()

    def __pow__(self, n):
        if not isinstance(n, int):
            raise DomainError("rational-function power must be an int")
        if n < 0:
            return self.reciprocal() ** (-n)
        return RationalFunction._raw(self._num**n, self._den**n, reduce=False)

    # -- calculus -------------------------------------------------------------

    def diff(self, name):
        """Quotient-rule derivative, returned in canonical reduced form."""
        n, d = self._num, self._den
        if d == 1:
            return RationalFunction._raw(
                n.diff(name), Polynomial.one(n.variables), reduce=False
            )
        num = n.diff(name) * d - n * d.diff(name)
        return RationalFunction._raw(num, d * d, reduce=True)

    # -- evaluation -------------------------------------------------------------

    def evaluate(self, bindings):
        """Exact value at a rational point; PoleError where the denominator is 0."""
        den = self._den.evaluate(bindings)
        if den == 0:
            raise PoleError(bindings)
        return self._num.evaluate(bindings) / den

    def evaluate_float(self, bindings):
        den = self._den.evaluate_float(bindings)
        if den == 0.0:
            raise PoleError(bindings)
        return self._num.evaluate_float(bindings) / den

    def subs(self, bindings):
        return RationalFunction(self._num.subs(bindings), self._den.subs(bindings))

    def drop_variables(self, names):
        return RationalFunction._raw(
            self._num.drop_variables(names),
            self._den.drop_variables(names),
            reduce=False,
        )

    # -- rendering ----------------------------------------------------------------

    def text(self):
        if self._den == 1:
            return self._num.text()
        num = self._num.text()
        den = self._den.text()
        return f"({num}) / ({den})"

    def __str__(self):
        return self.text()

    def __repr__(self):
        return f"RationalFunction({self.text()!r})"


def _rf_normalize(num, den, reduce):
    # Shared canonicalization: optional gcd reduction, then scale the
    # denominator to its primitive integer representative.
    if num.is_zero():
        return num, Polynomial.one(num.variables)
    if reduce:
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = exact_div(num, g)
            den = exact_div(den, g)
    if den.is_constant():
        c = den.constant_value()
        return num * (1 / c), Polynomial.one(num.variables)
    c_den, den_prim = den.content_primitive()
    if c_den != 1:
        num = num * (1 / c_den)
    return num, den_prim
