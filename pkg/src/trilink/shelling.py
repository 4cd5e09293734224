"""Shellings of triangulated 3-spheres.

An order of the tetrahedra is accepted when, for every k < n, the k-th
tetrahedron meets the union of its predecessors in a nonempty union of
complete boundary triangles of it (one, two or three of them, with no stray
lower-dimensional contact), and the last one meets the rest in its whole
boundary.  For pure closed pseudomanifolds this facet-intersection criterion
is equivalent to every initial union being a 3-ball.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

from .complex import Simplex, Triangulation, closure

DEFAULT_BUDGET = 10**7


class ShellingError(ValueError):
    pass


@dataclass(frozen=True)
class ShellingCheck:
    ok: bool
    failed_at: int | None = None  # 1-based position in the order
    reason: str = ""

    def __bool__(self):
        return self.ok


def _contact(tet: Simplex, faces: set) -> tuple[list[Simplex], str | None]:
    """Triangles of ``tet`` already present, and a defect if the contact is not generated by them."""
    tris = [f for f in combinations(tet, 3) if f in faces]
    present = {f for d in (1, 2) for f in combinations(tet, d) if f in faces}
    generated = {f for f in closure(tris) if len(f) < 3}
    stray = present - generated
    if stray:
        return tris, f"stray contact along {min(stray, key=lambda s: (len(s), s))}"
    return tris, None


def verify_shelling(t: Triangulation, order: Sequence[Sequence[int]]) -> ShellingCheck:
    order = [tuple(sorted(tet)) for tet in order]
    if sorted(order) != list(t.tetrahedra):
        raise ShellingError("order is not a permutation of the tetrahedra")
    n = len(order)
    faces: set = set()
    for k, tet in enumerate(order, start=1):
        if k > 1:
            tris, defect = _contact(tet, faces)
            if defect:
                return ShellingCheck(False, k, defect)
            if k < n and not 1 <= len(tris) <= 3:
                return ShellingCheck(False, k, f"meets its predecessors in {len(tris)} triangles")
            if k == n and len(tris) != 4:
                return ShellingCheck(False, k, "last tetrahedron is not glued along its whole boundary")
        faces |= closure([tet])
    return ShellingCheck(True)


@dataclass(frozen=True)
class ShellingResult:
    status: str  # "found" | "none" | "budget_exhausted"
    order: tuple[Simplex, ...] | None
    nodes: int


def find_shelling(t: Triangulation, budget: int = DEFAULT_BUDGET) -> ShellingResult:
    """Depth-first search for a shelling order.

    Candidates are tried in descending ``(shared triangles, tetrahedron)``
    order.  Each visited partial order costs one node of ``budget``.
    """
    n = t.n
    nodes = 0
    tets = t.tetrahedra
    adjacent = {tet: sorted({o for f in combinations(tet, 3) for o in t.triangle_tets[f] if o != tet})
                for tet in tets}

    order: list[Simplex] = []
    used: set = set()
    face_count: dict = {}

    def add(tet):
        order.append(tet)
        used.add(tet)
        for f in closure([tet]):
            face_count[f] = face_count.get(f, 0) + 1

    def remove(tet):
        order.pop()
        used.discard(tet)
        for f in closure([tet]):
            face_count[f] -= 1
            if not face_count[f]:
                del face_count[f]

    class Exhausted(Exception):
        pass

    def search() -> bool:
        nonlocal nodes
        if len(order) == n:
            return True
        frontier = {o for tet in order for o in adjacent[tet] if o not in used}
        cands = []
        for tet in frontier:
            tris, defect = _contact(tet, face_count.keys())
            k = len(order) + 1
            if defect:
                continue
            if (k < n and 1 <= len(tris) <= 3) or (k == n and len(tris) == 4):
                cands.append((len(tris), tet))
        cands.sort(reverse=True)
        for _, tet in cands:
            if nodes >= budget:
                raise Exhausted
            nodes += 1
            add(tet)
            if search():
                return True
            remove(tet)
        return False

    try:
        for start in tets:
            if nodes >= budget:
                raise Exhausted
            nodes += 1
            add(start)
            if search():
                found = tuple(order)
                if not verify_shelling(t, found):  # pragma: no cover
                    raise ShellingError("search produced an order that does not verify")
                return ShellingResult("found", found, nodes)
            remove(start)
    except Exhausted:
        return ShellingResult("budget_exhausted", None, nodes)
    return ShellingResult("none", None, nodes)
