# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled term-map kernels.

Semantics are identical to ``gbtcycles._termops_py``; see that module for the
contract.  Coefficients stay generic Python objects (Fraction or int), so the
speedup comes from C-level loops, direct tuple construction and dict access,
not from coefficient arithmetic.
"""

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New, PyTuple_SET_ITEM


cdef inline tuple _exp_add(tuple ea, tuple eb):
    cdef Py_ssize_t n = PyTuple_GET_SIZE(ea)
    cdef tuple out = PyTuple_New(n)
    cdef Py_ssize_t j
    cdef object s
    for j in range(n):
        s = (<object>PyTuple_GET_ITEM(ea, j)) + (<object>PyTuple_GET_ITEM(eb, j))
        Py_INCREF(s)
        PyTuple_SET_ITEM(out, j, s)
    return out


def terms_add(dict a, dict b):
    """Sum of two term maps."""
    cdef dict out
    cdef tuple exp
    cdef object c, acc, s
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


def terms_sub(dict a, dict b):
    """Difference a - b of two term maps."""
    cdef dict out
    cdef tuple exp
    cdef object c, acc, s
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


def terms_neg(dict a):
    """Negation of a term map."""
    cdef dict out = {}
    cdef tuple exp
    cdef object c
    for exp, c in a.items():
        out[exp] = -c
    return out


def terms_scale(dict a, object c):
    """Term map scaled by a nonzero coefficient c."""
    cdef dict out = {}
    cdef tuple exp
    cdef object coeff
    for exp, coeff in a.items():
        out[exp] = coeff * c
    return out


def terms_mul(dict a, dict b):
    """Product of two term maps (schoolbook, accumulate by exponent)."""
    cdef dict out = {}
    cdef list items_b
    cdef tuple ea, eb, exp, item
    cdef object ca, cb, acc, s
    cdef Py_ssize_t i, nb
    if not a or not b:
        return out
    if len(a) > len(b):
        a, b = b, a
    items_b = list(b.items())
    nb = len(items_b)
    for ea, ca in a.items():
        for i in range(nb):
            item = <tuple>items_b[i]
            eb = <tuple>item[0]
            cb = item[1]
            exp = _exp_add(ea, eb)
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
