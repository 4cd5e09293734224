"""Exact rational linear algebra and predicates.

Nothing here touches floating point.  Inputs may be ints or Fractions; all
results are Fractions (or ints where a sign is all that is needed).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = tuple[Fraction, ...]


def vec(xs) -> Vector:
    return tuple(Fraction(x) for x in xs)


def sub(a, b) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def add(a, b) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def scale(s, a) -> Vector:
    return tuple(s * x for x in a)


def dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def cross(a, b) -> Vector:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def sign(x) -> int:
    return (x > 0) - (x < 0)


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact Gaussian elimination."""
    m = [[Fraction(x) for x in row] for row in rows]
    n = len(m)
    result = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            result = -result
        p = m[col][col]
        result *= p
        for r in range(col + 1, n):
            f = m[r][col] / p
            if f:
                row_r, row_c = m[r], m[col]
                for c in range(col, n):
                    row_r[c] -= f * row_c[c]
    return result


def orient3d(a, b, c, d) -> Fraction:
    """Signed volume determinant of the tetrahedron ``abcd`` (times 6)."""
    return det([sub(b, a), sub(c, a), sub(d, a)])


def orient2d(a, b, c) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def hyperplane(points: Sequence[Sequence]) -> tuple[Vector, Fraction]:
    """Normal ``N`` and offset ``c`` of the affine hull of d points in R^d.

    ``N`` is the generalized cross product of the edge vectors, so it is zero
    exactly when the points are affinely dependent.
    """
    pts = [vec(p) for p in points]
    d = len(pts[0])
    edges = [sub(p, pts[0]) for p in pts[1:]]
    normal = []
    for i in range(d):
        minor = [[e[j] for j in range(d) if j != i] for e in edges]
        normal.append((-1) ** i * det(minor) if minor else Fraction(1))
    normal = tuple(normal)
    return normal, dot(normal, pts[0])


def solve(a: Sequence[Sequence], b: Sequence) -> Vector | None:
    """Solve a consistent (possibly overdetermined) system exactly.

    Returns None if the system is inconsistent; raises if underdetermined.
    """
    m = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    rows, cols = len(m), len(m[0]) - 1
    r = 0
    pivots = []
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        m[r] = [x / pv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    if len(pivots) < cols:
        raise ValueError("system is underdetermined")
    if any(m[i][-1] != 0 for i in range(r, rows)):
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = m[i][-1]
    return tuple(x)


class LPResult:
    __slots__ = ("status", "value", "x")

    def __init__(self, status: str, value=None, x=None):
        self.status = status  # "optimal" | "infeasible" | "unbounded"
        self.value = value
        self.x = x

    def __repr__(self):
        return f"LPResult({self.status!r}, {self.value!r})"


def _pivot(tab, basis, row, col):
    pv = tab[row][col]
    tab[row] = [x / pv for x in tab[row]]
    for i in range(len(tab)):
        if i != row and tab[i][col] != 0:
            f = tab[i][col]
            ri = tab[i]
            rr = tab[row]
            tab[i] = [x - f * y for x, y in zip(ri, rr)]
    basis[row] = col


def _run_simplex(tab, basis, cost, allowed) -> str:
    # Bland's rule: smallest improving column, ties in ratio test by basis index.
    while True:
        entering = None
        for j in allowed:
            if j in basis:
                continue
            rc = cost[j] - sum((cost[basis[i]] * tab[i][j] for i in range(len(tab))), Fraction(0))
            if rc > 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        best = None
        for i, row in enumerate(tab):
            a = row[entering]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _pivot(tab, basis, best[1], entering)


def lp_maximize(c: Sequence, a_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Maximize ``c.x`` subject to ``a_eq x = b_eq``, ``x >= 0``, exactly.

    Two-phase tableau simplex with Bland's anti-cycling rule.
    """
    n = len(c)
    m = len(a_eq)
    tab = []
    for row, rhs in zip(a_eq, b_eq):
        row = [Fraction(x) for x in row]
        rhs = Fraction(rhs)
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        tab.append(row + [Fraction(0)] * m + [rhs])
    for i in range(m):
        tab[i][n + i] = Fraction(1)
    basis = [n + i for i in range(m)]
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    _run_simplex(tab, basis, phase1, range(n + m))
    if sum((tab[i][-1] for i in range(m) if basis[i] >= n), Fraction(0)) != 0:
        return LPResult("infeasible")
    # drive remaining (zero-level) artificials out of the basis
    keep = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tab[i][j] != 0 and j not in basis), None)
            if col is None:
                continue  # redundant row
            _pivot(tab, basis, i, col)
        keep.append(i)
    tab = [tab[i][:n] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]
    cost = [Fraction(x) for x in c]
    status = _run_simplex(tab, basis, cost, range(n))
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        x[j] = tab[i][-1]
    return LPResult("optimal", dot(cost, x), tuple(x))


def simplices_meet_properly(p: Sequence[Sequence], q: Sequence[Sequence], shared: int) -> bool:
    """Whether two affinely independent simplices meet exactly in a shared face.

    ``p`` and ``q`` are vertex coordinate lists with the first ``shared``
    entries of each being the same points (the common face).  Maximizes the
    barycentric weight that a common point puts on the non-shared vertices of
    ``p``; zero means every common point lies in the shared face.
    """
    dim = len(p[0])
    np_, nq = len(p), len(q)
    rows = []
    rhs = []
    for k in range(dim):
        rows.append([Fraction(x[k]) for x in p] + [-Fraction(y[k]) for y in q])
        rhs.append(0)
    rows.append([1] * np_ + [0] * nq)
    rhs.append(1)
    rows.append([0] * np_ + [1] * nq)
    rhs.append(1)
    obj = [0] * shared + [1] * (np_ - shared) + [0] * nq
    res = lp_maximize(obj, rows, rhs)
    if res.status == "infeasible":
        return True
    return res.value == 0


def boxes_disjoint(p: Sequence[Sequence], q: Sequence[Sequence]) -> bool:
    for k in range(len(p[0])):
        if max(x[k] for x in p) < min(y[k] for y in q) or max(y[k] for y in q) < min(x[k] for x in p):
            return True
    return False


def segment_intersection_2d(a, b, c, d):
    """Classify how closed segments ``ab`` and ``cd`` meet in the plane.

    Returns ``(kind, point, s, t)`` where kind is ``"none"``, ``"proper"``
    (single point interior to both), ``"touch"`` (single point at an
    endpoint of either) or ``"overlap"`` (collinear with a common
    sub-segment).  ``s`` and ``t`` are the parameters of the point along
    ``ab`` and ``cd``.
    """
    r = sub(b, a)
    s_ = sub(d, c)
    denom = r[0] * s_[1] - r[1] * s_[0]
    qp = sub(c, a)
    if denom == 0:
        if qp[0] * r[1] - qp[1] * r[0] != 0:
            return "none", None, None, None
        rr = dot(r, r)
        t0 = dot(qp, r) / rr
        t1 = t0 + dot(s_, r) / rr
        lo, hi = min(t0, t1), max(t0, t1)
        if hi < 0 or lo > 1:
            return "none", None, None, None
        if hi == 0 or lo == 1:
            t = Fraction(0) if hi == 0 else Fraction(1)
            pt = add(a, scale(t, r))
            u = Fraction(0) if pt == tuple(c) else Fraction(1)
            return "touch", pt, t, u
        return "overlap", None, None, None
    t = (qp[0] * s_[1] - qp[1] * s_[0]) / denom
    u = (qp[0] * r[1] - qp[1] * r[0]) / denom
    if t < 0 or t > 1 or u < 0 or u > 1:
        return "none", None, None, None
    pt = add(a, scale(t, r))
    if 0 < t < 1 and 0 < u < 1:
        return "proper", pt, t, u
    return "touch", pt, t, u
