# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled polynomial kernels; same contract as ``_kernels_py``."""

from cpython.tuple cimport PyTuple_New, PyTuple_SET_ITEM, PyTuple_GET_ITEM, PyTuple_GET_SIZE
from cpython.ref cimport Py_INCREF

IMPLEMENTATION = "cython"


cdef inline tuple _shifted(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef tuple r = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = <long>(<object>PyTuple_GET_ITEM(a, i)) + <long>(<object>PyTuple_GET_ITEM(b, i))
        Py_INCREF(v)
        PyTuple_SET_ITEM(r, i, v)
    return r


cdef inline tuple _diff(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    cdef tuple r = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = <long>(<object>PyTuple_GET_ITEM(a, i)) - <long>(<object>PyTuple_GET_ITEM(b, i))
        Py_INCREF(v)
        PyTuple_SET_ITEM(r, i, v)
    return r


cdef inline bint _divides(tuple a, tuple b):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(a)
    for i in range(n):
        if <long>(<object>PyTuple_GET_ITEM(a, i)) > <long>(<object>PyTuple_GET_ITEM(b, i)):
            return False
    return True


cdef inline int _cmp_exp(tuple a, tuple b, tuple weights):
    cdef Py_ssize_t i, j, n = PyTuple_GET_SIZE(a)
    cdef long sa, sb
    cdef tuple row
    for row in weights:
        sa = 0
        sb = 0
        for j in range(n):
            sa += <long>(<object>PyTuple_GET_ITEM(row, j)) * <long>(<object>PyTuple_GET_ITEM(a, j))
            sb += <long>(<object>PyTuple_GET_ITEM(row, j)) * <long>(<object>PyTuple_GET_ITEM(b, j))
        if sa != sb:
            return 1 if sa > sb else -1
    return 0


def order_key(tuple exp, tuple weights):
    cdef Py_ssize_t j, n = PyTuple_GET_SIZE(exp)
    cdef long s
    cdef tuple row
    out = []
    for row in weights:
        s = 0
        for j in range(n):
            s += <long>(<object>PyTuple_GET_ITEM(row, j)) * <long>(<object>PyTuple_GET_ITEM(exp, j))
        out.append(s)
    return tuple(out)


cpdef tuple leading_exp(dict p, tuple weights):
    cdef tuple best = None
    cdef tuple exp
    for exp in p:
        if best is None or _cmp_exp(exp, best, weights) > 0:
            best = exp
    return best


def poly_add(dict p, dict q):
    cdef dict r = dict(p)
    cdef tuple exp
    for exp, c in q.items():
        s = r.get(exp)
        if s is None:
            r[exp] = c
        else:
            s = s + c
            if s:
                r[exp] = s
            else:
                del r[exp]
    return r


def poly_sub(dict p, dict q):
    cdef dict r = dict(p)
    cdef tuple exp
    for exp, c in q.items():
        s = r.get(exp)
        if s is None:
            r[exp] = -c
        else:
            s = s - c
            if s:
                r[exp] = s
            else:
                del r[exp]
    return r


def poly_mul(dict p, dict q):
    if len(p) < len(q):
        p, q = q, p
    cdef dict r = {}
    cdef tuple e1, e2, exp
    for e1, c1 in q.items():
        for e2, c2 in p.items():
            exp = _shifted(e1, e2)
            s = r.get(exp)
            if s is None:
                r[exp] = c1 * c2
            else:
                s = s + c1 * c2
                if s:
                    r[exp] = s
                else:
                    del r[exp]
    return r


cpdef dict sub_mul_term(dict p, dict q, object coeff, tuple shift):
    cdef dict r = dict(p)
    cdef tuple exp, e
    for exp, c in q.items():
        e = _shifted(exp, shift)
        t = coeff * c
        s = r.get(e)
        if s is None:
            r[e] = -t
        else:
            s = s - t
            if s:
                r[e] = s
            else:
                del r[e]
    return r


def divides(tuple a, tuple b):
    return _divides(a, b)


def normal_form(dict p, list basis, list leads, tuple weights):
    cdef dict rem = {}
    cdef tuple lt, lg
    cdef dict g
    cdef Py_ssize_t i, nb = len(basis)
    cdef bint reduced
    p = dict(p)
    while p:
        lt = leading_exp(p, weights)
        c = p[lt]
        reduced = False
        for i in range(nb):
            lg = <tuple>leads[i]
            if _divides(lg, lt):
                g = <dict>basis[i]
                p = sub_mul_term(p, g, c / g[lg], _diff(lt, lg))
                reduced = True
                break
        if not reduced:
            rem[lt] = c
            del p[lt]
    return rem


def spoly(dict f, dict g, tuple lf, tuple lg):
    cdef Py_ssize_t i, n = PyTuple_GET_SIZE(lf)
    lcm = tuple([max(<long>lf[i], <long>lg[i]) for i in range(n)])
    cdef tuple sf = _diff(lcm, lf)
    cdef tuple sg = _diff(lcm, lg)
    cdef dict left = {}
    cdef tuple e
    cf = f[lf]
    for e, c in f.items():
        left[_shifted(e, sf)] = c / cf
    return sub_mul_term(left, g, 1 / g[lg], sg)
