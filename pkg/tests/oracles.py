"""Independent reference implementations used by the tests.

Nothing here imports the package's Gröbner or fan code.

* Ideal membership through Macaulay matrices: the span of all ``m * g``
  with ``deg(m * g) <= D`` is row-reduced over the rationals for
  increasing ``D``.  The rows whose leading monomials are minimal form a
  candidate basis; once it passes the Buchberger S-pair test and reduces
  every generator to zero it is a Gröbner basis of the ideal, and the first
  such ``D`` is the computed degree bound.
* Minimal resolution of a 2D cone by exhaustive search: all lattice points
  of the fundamental parallelogram, then the lower convex chain seen from
  the origin.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement, product
from math import gcd


# ---------------------------------------------------------------------------
# polynomials as {exponent tuple: Fraction}


def grevlex_key(e):
    return (sum(e), tuple(-x for x in reversed(e)))


def monomials_up_to(n: int, D: int) -> list:
    out = []
    for d in range(D + 1):
        for combo in combinations_with_replacement(range(n), d):
            e = [0] * n
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


def shift(p: dict, m: tuple) -> dict:
    return {tuple(a + b for a, b in zip(e, m)): c for e, c in p.items()}


def degree(p: dict) -> int:
    return max((sum(e) for e in p), default=-1)


def lead(p: dict) -> tuple:
    return max(p, key=grevlex_key)


def sub_scaled(p: dict, q: dict, c: Fraction) -> dict:
    out = dict(p)
    for e, v in q.items():
        w = out.get(e, 0) - c * v
        if w:
            out[e] = w
        else:
            out.pop(e, None)
    return out


def divides(a: tuple, b: tuple) -> bool:
    return all(x <= y for x, y in zip(a, b))


def reduce_full(p: dict, basis: list) -> dict:
    """Remainder of full multivariate division (grevlex)."""
    p = dict(p)
    rem = {}
    while p:
        m = lead(p)
        c = p[m]
        for b in basis:
            lb = lead(b)
            if divides(lb, m):
                q = tuple(x - y for x, y in zip(m, lb))
                p = sub_scaled(p, shift(b, q), c / b[lb])
                break
        else:
            rem[m] = c
            del p[m]
    return rem


def spoly(f: dict, g: dict) -> dict:
    lf, lg = lead(f), lead(g)
    lcm = tuple(max(a, b) for a, b in zip(lf, lg))
    a = shift(f, tuple(x - y for x, y in zip(lcm, lf)))
    b = shift(g, tuple(x - y for x, y in zip(lcm, lg)))
    return sub_scaled({e: v / f[lf] for e, v in a.items()}, b, 1 / g[lg])


def row_echelon(rows: list) -> list:
    """Reduced row echelon form of a list of sparse polynomials (grevlex pivots)."""
    pivots: dict = {}
    for r in rows:
        r = {e: Fraction(c) for e, c in r.items() if c}
        while r:
            m = lead(r)
            if m in pivots:
                r = sub_scaled(r, pivots[m], r[m])
                continue
            c = r[m]
            r = {e: v / c for e, v in r.items()}
            for k, other in list(pivots.items()):
                if m in other:
                    pivots[k] = sub_scaled(other, r, other[m])
            pivots[m] = r
            break
    return list(pivots.values())


def macaulay_groebner(gens: list, n: int, max_degree: int = 24):
    """``(basis, D)``: a Gröbner basis certified at Macaulay degree ``D``."""
    gens = [g for g in gens if g]
    if not gens:
        return [], 0
    D = max(degree(g) for g in gens)
    while D <= max_degree:
        rows = []
        for g in gens:
            for m in monomials_up_to(n, D - degree(g)):
                rows.append(shift(g, m))
        ech = row_echelon(rows)
        leads = sorted((lead(r) for r in ech), key=grevlex_key)
        minimal = [m for m in leads if not any(o != m and divides(o, m) for o in leads)]
        by_lead = {lead(r): r for r in ech}
        basis = [by_lead[m] for m in minimal]
        if any(not any(e) for e in minimal):
            return [{(0,) * n: Fraction(1)}], D
        ok = all(not reduce_full(g, basis) for g in gens)
        if ok:
            for i in range(len(basis)):
                for j in range(i + 1, len(basis)):
                    if reduce_full(spoly(basis[i], basis[j]), basis):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            return basis, D
        D += 1
    raise RuntimeError("degree bound exceeded")


def oracle_member(gens: list, f: dict, n: int) -> bool:
    basis, _ = macaulay_groebner(gens, n)
    return not reduce_full(f, basis)


# ---------------------------------------------------------------------------
# 2D cones


def det2(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def brute_force_resolution_rays(u: tuple, w: tuple) -> list:
    """Rays inserted by the minimal regular subdivision of ``<u, w>``, ordered from ``u`` to ``w``."""
    if det2(u, w) < 0:
        u, w = w, u
    m = det2(u, w)
    # lattice points s*u + t*w with 0 <= s, t < 1: s = a/m, t = b/m
    pts = []
    xs = [u[0], w[0], 0, u[0] + w[0]]
    ys = [u[1], w[1], 0, u[1] + w[1]]
    for x, y in product(range(min(xs), max(xs) + 1), range(min(ys), max(ys) + 1)):
        p = (x, y)
        a = det2(p, w)  # = s * m
        b = det2(u, p)  # = t * m
        if 0 <= a < m and 0 <= b < m and (x, y) != (0, 0):
            pts.append(p)
    pts += [u, w]
    # keep the point nearest the origin in each direction
    by_dir = {}
    for p in pts:
        g = gcd(p[0], p[1])
        key = (p[0] // g, p[1] // g)
        if key not in by_dir or p[0] ** 2 + p[1] ** 2 < by_dir[key][0] ** 2 + by_dir[key][1] ** 2:
            by_dir[key] = p
    # counterclockwise from u to w
    pts = sorted(by_dir.values(), key=lambda p: Fraction(det2(u, p), det2(p, w) + det2(u, p)))
    chain = []
    for p in pts:
        # the boundary facing the origin only turns clockwise (or goes straight)
        while len(chain) >= 2:
            a, b = chain[-2], chain[-1]
            turn = det2((b[0] - a[0], b[1] - a[1]), (p[0] - b[0], p[1] - b[1]))
            if turn <= 0:
                break
            chain.pop()
        chain.append(p)
    return chain[1:-1]
