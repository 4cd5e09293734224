"""Straight-line realizations: Schlegel projection and embedding verification.

Every predicate runs in exact rational arithmetic.  A polytope boundary given
by 4D coordinates is projected from a point just beyond one facet onto that
facet's hyperplane, giving a straight-line complex in R^3 that contains every
tetrahedron except the chosen facet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping

from .complex import Simplex, Triangulation
from .geometry import (
    Vector,
    add,
    boxes_disjoint,
    dot,
    hyperplane,
    orient3d,
    scale,
    simplices_meet_properly,
    solve,
    sub,
    vec,
)


class RealizationError(ValueError):
    pass


@dataclass(frozen=True)
class Facet:
    vertices: Simplex
    normal: Vector  # outward: other points satisfy normal.x < offset
    offset: Fraction

    def side(self, x) -> int:
        v = dot(self.normal, x) - self.offset
        return (v > 0) - (v < 0)


def supporting_facet(coords4: Mapping[int, Vector], tet: Iterable[int]) -> Facet:
    """Oriented hyperplane through ``tet`` with all other points strictly beneath.

    Raises :class:`RealizationError` if ``tet`` is degenerate or some other
    point is on or beyond its hyperplane.
    """
    tet = tuple(sorted(tet))
    normal, offset = hyperplane([coords4[v] for v in tet])
    if not any(normal):
        raise RealizationError(f"facet {tet} is affinely degenerate")
    signs = set()
    for v, p in coords4.items():
        if v in tet:
            continue
        s = dot(normal, p) - offset
        if s == 0:
            raise RealizationError(f"point {v} lies on the hyperplane of {tet}")
        signs.add(s > 0)
    if len(signs) > 1:
        raise RealizationError(f"{tet} is not a facet of the convex hull")
    if signs == {True}:
        normal = tuple(-x for x in normal)
        offset = -offset
    return Facet(tet, normal, offset)


def hull_facets(coords4: Mapping[int, Vector]) -> list[Facet]:
    """All simplicial hull facets, by brute force over 4-subsets."""
    out = []
    for tet in combinations(sorted(coords4), 4):
        try:
            out.append(supporting_facet(coords4, tet))
        except RealizationError:
            continue
    return out


def check_polytopal(t: Triangulation, coords4: Mapping[int, Vector]) -> list[Facet]:
    """Certify that ``coords4`` realizes ``t`` as a simplicial polytope boundary.

    Every tetrahedron must be a hull facet with all remaining points strictly
    beneath it.  Since ``t`` is a closed pseudomanifold, these facets then
    cover the whole hull boundary and every point is a vertex.
    """
    missing = [v for v in t.vertices if v not in coords4]
    if missing:
        raise RealizationError(f"no coordinates for vertex {missing[0]}")
    pts = {v: vec(coords4[v]) for v in t.vertices}
    return [supporting_facet(pts, tet) for tet in t.tetrahedra]


def beyond_point(coords4: Mapping[int, Vector], facet: Iterable[int],
                 facets: Iterable[Iterable[int]] | None = None) -> Vector:
    """A point beyond ``facet`` and beneath every other facet.

    The point is ``centroid + lam * normal`` with ``lam`` half of the largest
    value the other facets allow.  ``facets`` defaults to the brute-force hull
    facets of the point set.
    """
    pts = {v: vec(p) for v, p in coords4.items()}
    facet = tuple(sorted(facet))
    if len(set(facet)) != 4 or not set(facet) <= set(pts):
        raise RealizationError(f"{facet} is not a tetrahedron on the given points")
    if facets is None:
        all_facets = hull_facets(pts)
        covered = {v for f in all_facets for v in f.vertices}
        inner = sorted(set(pts) - covered)
        if inner:
            raise RealizationError(f"point {inner[0]} is not in convex position")
    else:
        all_facets = [supporting_facet(pts, f) for f in facets]
    target = next((f for f in all_facets if f.vertices == facet), None)
    if target is None:
        raise RealizationError(f"{facet} is not a facet of the hull")
    centroid = scale(Fraction(1, 4), _sum(pts[v] for v in facet))
    n = target.normal
    sup = None
    for f in all_facets:
        if f.vertices == facet:
            continue
        rate = dot(f.normal, n)
        if rate > 0:
            slack = f.offset - dot(f.normal, centroid)
            bound = slack / rate
            if sup is None or bound < sup:
                sup = bound
    lam = Fraction(1) if sup is None else sup / 2
    return add(centroid, scale(lam, n))


def _sum(vectors) -> Vector:
    vectors = list(vectors)
    out = vectors[0]
    for v in vectors[1:]:
        out = add(out, v)
    return out


@dataclass(frozen=True)
class Realization3:
    coords: dict[int, Vector]
    host: Triangulation
    omitted_facet: Simplex | None = None
    coords4: dict[int, Vector] | None = field(default=None, compare=False)

    @property
    def retained(self) -> list[Simplex]:
        return [tet for tet in self.host.tetrahedra if tet != self.omitted_facet]


def schlegel(g, facet: Iterable[int] | None = None) -> Realization3:
    """Central projection of ``g.coords4`` from beyond ``facet``.

    ``g`` is anything with ``triangulation`` and ``coords4`` attributes.  The
    result is expressed in the affine frame whose origin is the smallest
    vertex of ``facet`` and whose basis runs to the other three.
    """
    t: Triangulation = g.triangulation
    if g.coords4 is None:
        raise RealizationError("no 4D coordinates to project")
    facet = t.tetrahedra[0] if facet is None else tuple(sorted(facet))
    if facet not in t.tetrahedra:
        raise RealizationError(f"{facet} is not a tetrahedron of the triangulation")
    pts = {v: vec(p) for v, p in g.coords4.items()}
    view = beyond_point(pts, facet, t.tetrahedra)
    target = supporting_facet(pts, facet)
    n, c = target.normal, target.offset
    nview = dot(n, view)
    origin = pts[facet[0]]
    basis = [sub(pts[v], origin) for v in facet[1:]]
    frame = [[b[k] for b in basis] for k in range(4)]
    coords = {}
    for v in t.vertices:
        p = pts[v]
        if v in facet:
            y = p
        else:
            mu = (c - nview) / (dot(n, p) - nview)
            y = add(view, scale(mu, sub(p, view)))
        rel = solve(frame, sub(y, origin))
        if rel is None:  # pragma: no cover - y lies in the hyperplane by construction
            raise RealizationError(f"projection of {v} left the facet hyperplane")
        coords[v] = rel
    return Realization3(coords, t, facet, pts)


@dataclass
class EmbeddingCheck:
    ok: bool
    degenerate: list[Simplex] = field(default_factory=list)
    overlapping: list[tuple[Simplex, Simplex]] = field(default_factory=list)
    pairs_checked: int = 0

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return f"embedding verified ({self.pairs_checked} tetrahedron pairs)"
        parts = [f"degenerate tetrahedron {s}" for s in self.degenerate]
        parts += [f"improper intersection of {a} and {b}" for a, b in self.overlapping]
        return "; ".join(parts)


def verify_embedding(r: Realization3) -> EmbeddingCheck:
    """Exact check that the straight-line images form a geometric complex.

    (a) every retained tetrahedron has nonzero orientation determinant;
    (b) any two retained tetrahedra meet exactly in their common face.
    Checking tetrahedron pairs suffices: faces of non-degenerate simplices
    that meet properly also meet properly.
    """
    missing = [v for v in r.host.vertices if v not in r.coords]
    if missing:
        raise RealizationError(f"no coordinates for vertex {missing[0]}")
    pts = {v: vec(p) for v, p in r.coords.items()}
    tets = r.retained
    check = EmbeddingCheck(True)
    for tet in tets:
        if orient3d(*(pts[v] for v in tet)) == 0:
            check.degenerate.append(tet)
    if check.degenerate:
        check.ok = False
        return check
    for s, u in combinations(tets, 2):
        check.pairs_checked += 1
        shared = sorted(set(s) & set(u))
        p = [pts[v] for v in shared] + [pts[v] for v in s if v not in shared]
        q = [pts[v] for v in shared] + [pts[v] for v in u if v not in shared]
        if not shared and boxes_disjoint(p, q):
            continue
        if not simplices_meet_properly(p, q, len(shared)):
            check.overlapping.append((s, u))
    check.ok = not check.overlapping
    return check
