"""Pure-Python polynomial kernels.

Polynomials are plain dicts mapping exponent tuples to ``Fraction``
coefficients; zero coefficients are never stored.  Monomial orders are
weight matrices: a monomial ``e`` sorts by ``tuple(row . e for row in W)``.

The compiled twin in ``_kernels.pyx`` exposes exactly the same functions.
"""

from __future__ import annotations

IMPLEMENTATION = "python"


def order_key(exp, weights):
    return tuple([sum([w * e for w, e in zip(row, exp)]) for row in weights])


def leading_exp(p, weights):
    best = None
    best_key = None
    for exp in p:
        key = order_key(exp, weights)
        if best_key is None or key > best_key:
            best, best_key = exp, key
    return best


def poly_add(p, q):
    r = dict(p)
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


def poly_sub(p, q):
    r = dict(p)
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


def poly_mul(p, q):
    if len(p) < len(q):
        p, q = q, p
    r = {}
    for e1, c1 in q.items():
        for e2, c2 in p.items():
            exp = tuple([a + b for a, b in zip(e1, e2)])
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


def sub_mul_term(p, q, coeff, shift):
    """Return ``p - coeff * x^shift * q``."""
    r = dict(p)
    for exp, c in q.items():
        e = tuple([a + b for a, b in zip(exp, shift)])
        s = r.get(e)
        t = coeff * c
        if s is None:
            r[e] = -t
        else:
            s = s - t
            if s:
                r[e] = s
            else:
                del r[e]
    return r


def divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def normal_form(p, basis, leads, weights):
    """Fully reduce ``p`` by ``basis`` (with precomputed leading exponents)."""
    p = dict(p)
    rem = {}
    while p:
        lt = leading_exp(p, weights)
        c = p[lt]
        for g, lg in zip(basis, leads):
            if divides(lg, lt):
                shift = tuple([a - b for a, b in zip(lt, lg)])
                p = sub_mul_term(p, g, c / g[lg], shift)
                break
        else:
            rem[lt] = c
            del p[lt]
    return rem


def spoly(f, g, lf, lg):
    lcm = tuple([max(a, b) for a, b in zip(lf, lg)])
    sf = tuple([a - b for a, b in zip(lcm, lf)])
    sg = tuple([a - b for a, b in zip(lcm, lg)])
    left = {tuple([a + b for a, b in zip(e, sf)]): c / f[lf] for e, c in f.items()}
    return sub_mul_term(left, g, 1 / g[lg], sg)
