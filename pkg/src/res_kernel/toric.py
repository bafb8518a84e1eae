"""Rational polyhedral cones and fans: smoothness, multiplicity, subdivision.

All lattice arithmetic is exact (Python integers and ``Fraction``).  Linear
programming through scipy is used only for yes/no geometric questions about
non-simplicial cones and for the fan axiom check in dimension at least 3;
its inputs are small integer matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence


class FanError(ValueError):
    """Invalid cone or fan data."""


class FanSyntaxError(FanError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


# ---------------------------------------------------------------------------
# exact linear algebra


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> list:
    """Invariant factors ``d_1 | d_2 | ...`` of an integer matrix (nonzero ones only)."""
    A = [list(map(int, row)) for row in matrix]
    rows = len(A)
    cols = len(A[0]) if rows else 0
    factors = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(A[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if A[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    q = A[i][t] // A[t][t]
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    q = A[t][j] // A[t][t]
                    for row in A:
                        row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        done = False
            if not done:
                continue
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
        factors.append(abs(A[t][t]))
        t += 1
    return factors


def rank(vectors: Sequence[Sequence[int]]) -> int:
    return len(smith_normal_form(vectors)) if vectors else 0


def determinant(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix (fraction-free elimination)."""
    M = [list(map(int, r)) for r in rows]
    n = len(M)
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[-1][-1] if n else 1


def _solve(rays: Sequence[tuple], v: Sequence[int]):
    """Coefficients ``c`` with ``sum c_i rays_i = v`` for independent ``rays``; ``None`` if impossible."""
    k = len(rays)
    d = len(v)
    # augmented system: columns are rays
    M = [[Fraction(rays[j][i]) for j in range(k)] + [Fraction(v[i])] for i in range(d)]
    r = 0
    for c in range(k):
        p = next((i for i in range(r, d) if M[i][c] != 0), None)
        if p is None:
            return None
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [x * inv for x in M[r]]
        for i in range(d):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        r += 1
    if any(M[i][k] != 0 for i in range(r, d)):
        return None
    return [M[i][k] for i in range(k)]


def primitive(v: Sequence[int]) -> tuple:
    g = math.gcd(*v) if v else 0
    if g == 0:
        raise FanError("the zero vector is not a ray")
    return tuple(x // g for x in v)


# ---------------------------------------------------------------------------
# cones


def _linprog():
    from scipy.optimize import linprog

    return linprog


def _feasible(A_ub, b_ub, A_eq, b_eq, n) -> bool:
    linprog = _linprog()
    res = linprog(
        c=[0] * n,
        A_ub=A_ub or None,
        b_ub=b_ub or None,
        A_eq=A_eq or None,
        b_eq=b_eq or None,
        bounds=[(None, None)] * n,
        method="highs",
    )
    return res.status == 0


@dataclass(frozen=True, order=True)
class Cone:
    """The cone spanned by primitive integer ``rays`` in a lattice of rank ``dim``."""

    rays: tuple
    dim: int = field(default=0, compare=False)

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        dim = self.dim or (len(rays[0]) if rays else 0)
        if not dim:
            raise FanError("the dimension of an empty cone must be given")
        for r in rays:
            if len(r) != dim:
                raise FanError(f"ray {r} does not have {dim} entries")
            if not any(r):
                raise FanError("the zero vector is not a ray")
            if math.gcd(*r) != 1:
                raise FanError(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise FanError("repeated ray")
        rays = tuple(sorted(rays))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "dim", dim)
        # simplicial cones are automatically strongly convex
        if not self.is_simplicial() and not self._strongly_convex():
            raise FanError("cone is not strongly convex")

    def __str__(self) -> str:
        return "<" + ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.rays) + ">"

    def is_simplicial(self) -> bool:
        return rank(self.rays) == len(self.rays)

    def _strongly_convex(self) -> bool:
        # no nonnegative combination with total weight 1 sums to zero
        k = len(self.rays)
        A_eq = [[r[i] for r in self.rays] for i in range(self.dim)] + [[1] * k]
        b_eq = [0] * self.dim + [1]
        linprog = _linprog()
        res = linprog(c=[0] * k, A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * k, method="highs")
        return res.status != 0

    def contains(self, v: Sequence[int]) -> bool:
        if not any(v):
            return True
        if not self.rays:
            return False
        if self.is_simplicial():
            c = _solve(self.rays, v)
            return c is not None and all(x >= 0 for x in c)
        k = len(self.rays)
        A_eq = [[r[i] for r in self.rays] for i in range(self.dim)]
        linprog = _linprog()
        res = linprog(c=[0] * k, A_eq=A_eq, b_eq=list(v), bounds=[(0, None)] * k, method="highs")
        return res.status == 0

    def faces(self) -> list:
        """All faces including the cone itself and the origin."""
        if self.is_simplicial():
            return [Cone(S, self.dim) for k in range(len(self.rays) + 1) for S in combinations(self.rays, k)]
        out = [Cone((), self.dim)]
        for k in range(1, len(self.rays) + 1):
            for S in combinations(self.rays, k):
                rest = [r for r in self.rays if r not in S]
                A_eq = [list(r) for r in S]
                A_ub = [[-x for x in r] for r in rest]
                if _feasible(A_ub, [-1] * len(rest), A_eq, [0] * len(S), self.dim):
                    out.append(Cone(S, self.dim))
        return out

    def minimal_face_containing(self, v: Sequence[int]) -> "Cone":
        if not self.is_simplicial():
            raise FanError("only simplicial cones are supported here")
        c = _solve(self.rays, v)
        if c is None or any(x < 0 for x in c):
            raise FanError(f"{tuple(v)} does not lie in {self}")
        return Cone(tuple(r for r, x in zip(self.rays, c) if x > 0), self.dim)


def cone_is_smooth(c: Cone) -> bool:
    """Rays independent and extendable to a lattice basis."""
    if not c.rays:
        return True
    f = smith_normal_form(c.rays)
    return len(f) == len(c.rays) and all(x == 1 for x in f)


def multiplicity(c: Cone) -> int:
    """Index of the lattice spanned by the rays inside its saturation."""
    if not c.is_simplicial():
        raise FanError(f"{c} is not simplicial")
    return math.prod(smith_normal_form(c.rays)) if c.rays else 1


# ---------------------------------------------------------------------------
# fans


def _separated(s: Cone, t: Cone) -> bool:
    """``s`` and ``t`` meet in their common face (strict separating hyperplane test)."""
    common = set(s.rays) & set(t.rays)
    A_eq = [list(r) for r in common]
    A_ub, b_ub = [], []
    for r in s.rays:
        if r not in common:
            A_ub.append([-x for x in r])
            b_ub.append(-1)
    for r in t.rays:
        if r not in common:
            A_ub.append(list(r))
            b_ub.append(-1)
    if not A_ub:
        return True
    return _feasible(A_ub, b_ub, A_eq, [0] * len(A_eq), s.dim)


def _separated_2d(s: Cone, t: Cone) -> bool:
    # planar cones are angular intervals of width below pi; two of them
    # overlap beyond a common ray exactly when a ray of one lies in the other
    for a, b in ((s, t), (t, s)):
        for r in a.rays:
            if r not in b.rays and b.contains(r):
                return False
    return True


@dataclass(frozen=True)
class Fan:
    """A fan: a face-closed set of cones meeting along common faces."""

    dim: int
    cones: frozenset

    def __post_init__(self):
        for c in self.cones:
            if c.dim != self.dim:
                raise FanError(f"cone {c} does not live in dimension {self.dim}")
            for f in c.faces():
                if f not in self.cones:
                    raise FanError(f"face {f} of {c} is missing")

    @classmethod
    def from_cones(cls, dim: int, cones: Iterable, check: bool = True) -> "Fan":
        """Close the given cones (or ray lists) under faces and validate."""
        maximal = [c if isinstance(c, Cone) else Cone(tuple(map(tuple, c)), dim) for c in cones]
        closed = {Cone((), dim)}
        for c in maximal:
            closed.update(c.faces())
        fan = cls(dim, frozenset(closed))
        if check:
            fan.check()
        return fan

    def check(self):
        top = self.maximal_cones()
        sep = _separated_2d if self.dim == 2 else _separated
        for s, t in combinations(top, 2):
            if not sep(s, t):
                raise FanError(f"cones {s} and {t} do not meet along a common face")

    def maximal_cones(self) -> list:
        out = []
        for c in self.cones:
            if not any(c != d and set(c.rays) < set(d.rays) for d in self.cones):
                out.append(c)
        return sorted(out, key=lambda c: (-len(c.rays), c.rays))

    def rays(self) -> list:
        return sorted({r for c in self.cones for r in c.rays})

    def contains(self, v: Sequence[int]) -> bool:
        return any(c.contains(v) for c in self.maximal_cones())

    def __str__(self) -> str:
        return format_fan(self)


def affine_space_fan(d: int) -> Fan:
    """The fan of affine d-space: the positive orthant and its faces."""
    basis = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    return Fan.from_cones(d, [Cone(tuple(basis), d)])


def is_regular_fan(F: Fan) -> bool:
    return all(cone_is_smooth(c) for c in F.cones)


def stellar_subdivide(F: Fan, ray: Sequence[int]) -> Fan:
    """Insert ``ray``: every cone containing it is replaced by joins with the faces avoiding it."""
    v = primitive(tuple(ray))
    if len(v) != F.dim:
        raise FanError(f"ray {v} does not have {F.dim} entries")
    if v in F.rays():
        return F
    owners = [c for c in F.maximal_cones() if c.contains(v)]
    if not owners:
        raise FanError(f"ray {v} lies outside the support of the fan")
    for c in owners:
        if not c.is_simplicial():
            raise FanError("stellar subdivision is implemented for simplicial cones only")
    # the smallest cone of the fan containing v in its relative interior
    phi = min((c.minimal_face_containing(v) for c in owners), key=lambda f: len(f.rays))
    phi_rays = set(phi.rays)
    new_max = []
    for c in F.maximal_cones():
        if not phi_rays <= set(c.rays):
            new_max.append(c)
            continue
        for r in phi.rays:
            new_max.append(Cone(tuple(x for x in c.rays if x != r) + (v,), F.dim))
    return Fan.from_cones(F.dim, new_max)


def _hj_rays(u: tuple, w: tuple) -> list:
    """Interior rays of the minimal regular subdivision of the 2D cone ``<u, w>``, from ``u`` to ``w``."""
    out = []
    while True:
        m = abs(u[0] * w[1] - u[1] * w[0])
        if m == 1:
            return out
        # next ray: the unique (a*u + w)/m, 0 < a < m, that is a lattice point;
        # the cone <v, w> then has multiplicity a
        a = next(a for a in range(1, m) if all((a * x + y) % m == 0 for x, y in zip(u, w)))
        v = tuple((a * x + y) // m for x, y in zip(u, w))
        out.append(v)
        u = v


def resolve_fan_2d(F: Fan) -> Fan:
    """Minimal regular subdivision of a 2-dimensional fan (Hirzebruch-Jung)."""
    if F.dim != 2:
        raise FanError("resolve_fan_2d needs a fan in dimension 2")
    new_max = []
    for c in F.maximal_cones():
        if len(c.rays) < 2 or cone_is_smooth(c):
            new_max.append(c)
            continue
        u, w = c.rays
        if u[0] * w[1] - u[1] * w[0] < 0:
            u, w = w, u
        chain = [u] + _hj_rays(u, w) + [w]
        for a, b in zip(chain, chain[1:]):
            new_max.append(Cone((a, b), 2))
    return Fan.from_cones(2, new_max)


def inserted_rays(before: Fan, after: Fan) -> list:
    return sorted(set(after.rays()) - set(before.rays()))


# ---------------------------------------------------------------------------
# text format


def parse_fan(text: str) -> Fan:
    """Parse ``dim d`` followed by one cone per line, rays separated by ``;``.

    Entries of a ray are separated by commas or blanks; parentheses are
    optional.  Blank lines and ``#`` comments are ignored.
    """
    dim = None
    cones = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if dim is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "dim" or not parts[1].isdigit() or int(parts[1]) < 1:
                raise FanSyntaxError("expected 'dim d' with d a positive integer", lineno)
            dim = int(parts[1])
            continue
        rays = []
        for chunk in line.split(";"):
            chunk = chunk.strip().strip("()").replace(",", " ")
            if not chunk:
                continue
            try:
                vec = tuple(int(x) for x in chunk.split())
            except ValueError:
                raise FanSyntaxError(f"bad ray {chunk!r}", lineno) from None
            if len(vec) != dim:
                raise FanSyntaxError(f"ray {vec} does not have {dim} entries", lineno)
            try:
                rays.append(primitive(vec))
            except FanError as exc:
                raise FanSyntaxError(str(exc), lineno) from None
        if not rays:
            raise FanSyntaxError("empty cone", lineno)
        try:
            cones.append(Cone(tuple(rays), dim))
        except FanError as exc:
            raise FanSyntaxError(str(exc), lineno) from None
    if dim is None:
        raise FanSyntaxError("missing 'dim d' header", 1)
    return Fan.from_cones(dim, cones)


def format_fan(F: Fan) -> str:
    lines = [f"dim {F.dim}"]
    for c in F.maximal_cones():
        if c.rays:
            lines.append("; ".join(",".join(map(str, r)) for r in c.rays))
    return "\n".join(lines) + "\n"
