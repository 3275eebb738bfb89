"""Pure-Python term-map kernels.

A term map is a dict sending exponent tuples (one non-negative int per
variable) to nonzero numeric coefficients.  Coefficient types are anything
with exact ring arithmetic; in practice Fraction at the API level and int
inside the gcd machinery.  These five functions are the only code that walks
term maps element by element, so they are the natural compilation target.
A compiled twin with identical semantics lives in ``_termops.pyx``;
``gbtcycles.backend`` selects one of the two at import time.

All functions return fresh dicts and never keep zero coefficients.
"""


def terms_add(a, b):
    """Sum of two term maps."""
    if not a:
        return dict(b)
    if not b:
        return dict(a)
    out = dict(a)
    for exp, c in b.items():
        acc = out.get(exp)
        if acc is None:
            out[exp] = c
        else:
            s = acc + c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def terms_sub(a, b):
    """Difference a - b of two term maps."""
    if not b:
        return dict(a)
    out = dict(a)
    for exp, c in b.items():
        acc = out.get(exp)
        if acc is None:
            out[exp] = -c
        else:
            s = acc - c
            if s:
                out[exp] = s
            else:
                del out[exp]
    return out


def terms_neg(a):
    """Negation of a term map."""
    return {exp: -c for exp, c in a.items()}


def terms_scale(a, c):
    """Term map scaled by a nonzero coefficient c."""
    return {exp: coeff * c for exp, coeff in a.items()}


def terms_mul(a, b):
    """Product of two term maps (schoolbook, accumulate by exponent)."""
    if not a or not b:
        return {}
    if len(a) > len(b):
        a, b = b, a
    items_b = list(b.items())
    out = {}
    for ea, ca in a.items():
        for eb, cb in items_b:
            exp = tuple(x + y for x, y in zip(ea, eb))
            acc = out.get(exp)
            if acc is None:
                out[exp] = ca * cb
            else:
                s = acc + ca * cb
                if s:
                    out[exp] = s
                else:
                    del out[exp]
    return out
