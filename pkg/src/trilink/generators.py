"""Reference triangulations of the 3-sphere.

Generators that know a convex 4-polytope realizing their output attach the
vertex coordinates as ``coords4``; that is the polytopality certificate used
downstream.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .complex import Triangulation, validate
from .moves import available_flips, pachner, stellar_subdivide
from .prng import Lcg64
from .realize import beyond_point


class GeneratorError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratedComplex:
    triangulation: Triangulation
    coords4: dict | None
    provenance: str


def _coords(d):
    return {v: tuple(Fraction(x) for x in p) for v, p in d.items()}


def simplex_boundary() -> GeneratedComplex:
    """Boundary of the standard 4-simplex: vertex i is e_i for i <= 4, vertex 5 the origin."""
    t = Triangulation.from_tetrahedra(combinations(range(1, 6), 4))
    pts = {i: tuple(int(i == j) for j in range(1, 5)) for i in range(1, 5)}
    pts[5] = (0, 0, 0, 0)
    return GeneratedComplex(t, _coords(pts), "simplex")


def gale_evenness(subset, m: int) -> bool:
    """Whether every two non-members are separated by an even number of members."""
    s = set(subset)
    outside = [i for i in range(1, m + 1) if i not in s]
    for i, j in zip(outside, outside[1:]):
        if sum(1 for x in s if i < x < j) % 2:
            return False
    return True


def cyclic_polytope_boundary(m: int) -> GeneratedComplex:
    if m < 5:
        raise GeneratorError(f"cyclic polytope needs m >= 5, got {m}")
    tets = [s for s in combinations(range(1, m + 1), 4) if gale_evenness(s, m)]
    t = Triangulation.from_tetrahedra(tets)
    pts = {i: (i, i**2, i**3, i**4) for i in range(1, m + 1)}
    return GeneratedComplex(t, _coords(pts), f"cyclic({m})")


A1, A2, A3, B1, B2, B3 = 1, 2, 3, 4, 5, 6


def join_of_triangles() -> GeneratedComplex:
    """Join of two triangles A = (1,2,3) and B = (4,5,6); contains the Hopf link A ∪ B."""
    tets = [ea + eb for ea in combinations((A1, A2, A3), 2) for eb in combinations((B1, B2, B3), 2)]
    t = Triangulation.from_tetrahedra(tets)
    pts = {
        A1: (2, 0, 0, 0), A2: (-1, 1, 0, 0), A3: (-1, -1, 0, 0),
        B1: (0, 0, 2, 0), B2: (0, 0, -1, 1), B3: (0, 0, -1, -1),
    }
    return GeneratedComplex(t, _coords(pts), "join_of_triangles")


def stacked_sphere(steps: int, seed: int) -> GeneratedComplex:
    """Iterated stellar subdivision of seeded-random tetrahedra, with coordinates.

    Each new vertex is the exact beyond point of the subdivided facet, so the
    point set stays in convex position and the polytopality certificate holds.
    """
    g = simplex_boundary()
    t, pts = g.triangulation, dict(g.coords4)
    rng = Lcg64(seed)
    for _ in range(steps):
        tet = rng.choice(t.tetrahedra)
        w = t.fresh_label()
        pts[w] = beyond_point(pts, tet, t.tetrahedra)
        t, _ = stellar_subdivide(t, tet, w)
    return GeneratedComplex(t, pts, f"stacked({steps},{seed})")


def pachner_walk(start: Triangulation, steps: int, seed: int,
                 kinds=("pachner_14", "pachner_23", "pachner_32", "pachner_41")) -> Triangulation:
    """Apply ``steps`` bistellar flips, each chosen uniformly among those applicable."""
    if not validate(start).valid:
        raise GeneratorError("pachner_walk needs a valid closed 3-manifold to start from")
    rng = Lcg64(seed)
    t = start
    for i in range(steps):
        flips = available_flips(t, kinds)
        if not flips:
            raise GeneratorError(f"no applicable flip at step {i}")
        kind, loc = rng.choice(flips)
        t, _ = pachner(t, kind, loc)
    return t


def walk(steps: int, seed: int) -> GeneratedComplex:
    return GeneratedComplex(pachner_walk(simplex_boundary().triangulation, steps, seed),
                            None, f"pachner_walk(simplex,{steps},{seed})")
