"""Simplicial triangulations of closed 3-manifolds.

A :class:`Triangulation` is an immutable set of tetrahedra over integer vertex
labels.  Every face is stored as a sorted tuple, so the usual set operations
do the bookkeeping and no orientation is ever tracked combinatorially.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations
from typing import Iterable

Simplex = tuple[int, ...]


class TriangulationError(ValueError):
    """Raised for structurally malformed or non-closed input."""


def faces_of(simplex: Simplex, dim: int) -> list[Simplex]:
    """All ``dim``-dimensional faces of ``simplex`` (sorted tuples)."""
    return list(combinations(simplex, dim + 1))


def closure(simplices: Iterable[Simplex]) -> set[Simplex]:
    """Every nonempty face of every simplex in ``simplices``."""
    out: set[Simplex] = set()
    for s in simplices:
        for d in range(len(s)):
            out.update(combinations(s, d + 1))
    return out


@dataclass(frozen=True)
class Triangulation:
    vertices: tuple[int, ...]
    tetrahedra: tuple[Simplex, ...]
    _tet_set: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tets = []
        for tet in self.tetrahedra:
            tet = tuple(int(v) for v in tet)
            if len(tet) != 4:
                raise TriangulationError(f"tetrahedron {tet} does not have 4 vertices")
            if len(set(tet)) != 4:
                raise TriangulationError(f"tetrahedron {tet} has a repeated vertex")
            tets.append(tuple(sorted(tet)))
        tets.sort()
        for a, b in zip(tets, tets[1:]):
            if a == b:
                raise TriangulationError(f"duplicate tetrahedron {a}")
        verts = tuple(sorted({int(v) for v in self.vertices}))
        if len(verts) != len(self.vertices):
            raise TriangulationError("duplicate vertex label")
        used = {v for tet in tets for v in tet}
        stray = used - set(verts)
        if stray:
            raise TriangulationError(f"tetrahedron uses undeclared vertex {min(stray)}")
        unused = set(verts) - used
        if unused:
            raise TriangulationError(f"vertex {min(unused)} lies in no tetrahedron")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "tetrahedra", tuple(tets))
        object.__setattr__(self, "_tet_set", frozenset(tets))

    @classmethod
    def from_tetrahedra(cls, tetrahedra: Iterable[Iterable[int]]) -> "Triangulation":
        tets = [tuple(t) for t in tetrahedra]
        return cls(tuple(sorted({v for t in tets for v in t})), tuple(tets))

    @property
    def n(self) -> int:
        return len(self.tetrahedra)

    def __contains__(self, simplex) -> bool:
        s = tuple(sorted(simplex))
        if len(s) == 4:
            return s in self._tet_set
        return s in self.faces(len(s) - 1)

    @cached_property
    def _faces(self) -> dict[int, frozenset]:
        return {
            d: frozenset(f for tet in self.tetrahedra for f in combinations(tet, d + 1))
            for d in range(4)
        }

    def faces(self, dim: int) -> frozenset:
        return self._faces[dim]

    @property
    def edges(self) -> frozenset:
        return self._faces[1]

    @property
    def triangles(self) -> frozenset:
        return self._faces[2]

    @cached_property
    def triangle_tets(self) -> dict[Simplex, list[Simplex]]:
        """Map each triangle to the tetrahedra containing it."""
        out: dict[Simplex, list[Simplex]] = defaultdict(list)
        for tet in self.tetrahedra:
            for tri in combinations(tet, 3):
                out[tri].append(tet)
        return dict(out)

    @cached_property
    def vertex_tets(self) -> dict[int, list[Simplex]]:
        out: dict[int, list[Simplex]] = defaultdict(list)
        for tet in self.tetrahedra:
            for v in tet:
                out[v].append(tet)
        return dict(out)

    @cached_property
    def neighbors(self) -> dict[int, frozenset]:
        """Adjacency of the 1-skeleton."""
        adj: dict[int, set] = defaultdict(set)
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return {v: frozenset(adj[v]) for v in self.vertices}

    def star(self, simplex: Iterable[int]) -> list[Simplex]:
        """Tetrahedra containing ``simplex``."""
        s = set(simplex)
        first = min(s)
        return [tet for tet in self.vertex_tets.get(first, ()) if s <= set(tet)]

    def link(self, simplex: Iterable[int]) -> set[Simplex]:
        """The link of ``simplex`` as a closed set of faces."""
        s = set(simplex)
        maximal = [tuple(v for v in tet if v not in s) for tet in self.star(s)]
        return closure(maximal)

    def vertex_link_triangles(self, v: int) -> list[Simplex]:
        return [tuple(w for w in tet if w != v) for tet in self.vertex_tets[v]]

    def fresh_label(self) -> int:
        return max(self.vertices) + 1

    def to_json_obj(self) -> dict:
        return {"vertices": list(self.vertices), "tetrahedra": [list(t) for t in self.tetrahedra]}


@dataclass(frozen=True)
class ValidationReport:
    is_closed_pseudomanifold: bool
    is_connected: bool
    vertex_links_are_2spheres: bool
    euler_characteristic: int
    f_vector: tuple[int, int, int, int]
    failures: tuple[str, ...] = ()

    @property
    def valid(self) -> bool:
        return (
            self.is_closed_pseudomanifold
            and self.is_connected
            and self.vertex_links_are_2spheres
            and self.euler_characteristic == 0
        )

    def to_json_obj(self) -> dict:
        return {
            "valid": self.valid,
            "is_closed_pseudomanifold": self.is_closed_pseudomanifold,
            "is_connected": self.is_connected,
            "vertex_links_are_2spheres": self.vertex_links_are_2spheres,
            "euler_characteristic": self.euler_characteristic,
            "f_vector": list(self.f_vector),
            "failures": list(self.failures),
        }


def f_vector(t: Triangulation) -> tuple[int, int, int, int]:
    return tuple(len(t.faces(d)) for d in range(4))


def _surface_is_sphere(triangles: list[Simplex]) -> str | None:
    """Return None if ``triangles`` form a triangulated 2-sphere, else a reason."""
    edge_count: dict[Simplex, int] = defaultdict(int)
    for tri in triangles:
        for e in combinations(tri, 2):
            edge_count[e] += 1
    for e, c in sorted(edge_count.items()):
        if c != 2:
            return f"edge {e} lies in {c} triangles"
    verts = {v for tri in triangles for v in tri}
    # link of each vertex inside the surface must be one cycle
    around: dict[int, list[Simplex]] = defaultdict(list)
    for tri in triangles:
        for v in tri:
            around[v].append(tuple(w for w in tri if w != v))
    for v in sorted(around):
        segs = around[v]
        adj: dict[int, list[int]] = defaultdict(list)
        for a, b in segs:
            adj[a].append(b)
            adj[b].append(a)
        start = segs[0][0]
        seen = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(adj):
            return f"vertex {v} is a pinch point"
    # connectivity through shared edges
    by_edge: dict[Simplex, list[int]] = defaultdict(list)
    for i, tri in enumerate(triangles):
        for e in combinations(tri, 2):
            by_edge[e].append(i)
    seen_t = {0}
    stack = [0]
    while stack:
        i = stack.pop()
        for e in combinations(triangles[i], 2):
            for j in by_edge[e]:
                if j not in seen_t:
                    seen_t.add(j)
                    stack.append(j)
    if len(seen_t) != len(triangles):
        return "surface is disconnected"
    chi = len(verts) - len(edge_count) + len(triangles)
    if chi != 2:
        return f"surface has Euler characteristic {chi}"
    return None


def validate(t: Triangulation) -> ValidationReport:
    """Check that ``t`` is a connected closed combinatorial 3-manifold."""
    failures: list[str] = []
    fv = f_vector(t)
    chi = fv[0] - fv[1] + fv[2] - fv[3]

    closed = True
    for tri in sorted(t.triangle_tets):
        c = len(t.triangle_tets[tri])
        if c != 2:
            closed = False
            failures.append(f"triangle {tri} lies in {c} tetrahedra")

    spheres = True
    for v in t.vertices:
        reason = _surface_is_sphere(t.vertex_link_triangles(v))
        if reason is not None:
            spheres = False
            failures.append(f"link of vertex {v}: {reason}")

    seen = {t.tetrahedra[0]} if t.tetrahedra else set()
    stack = list(seen)
    while stack:
        tet = stack.pop()
        for tri in combinations(tet, 3):
            for other in t.triangle_tets[tri]:
                if other not in seen:
                    seen.add(other)
                    stack.append(other)
    connected = len(seen) == t.n and t.n > 0
    if not connected:
        failures.append(f"only {len(seen)} of {t.n} tetrahedra are reachable")
    if chi != 0:
        failures.append(f"Euler characteristic is {chi}, expected 0")

    return ValidationReport(closed, connected, spheres, chi, fv, tuple(failures))


@dataclass(frozen=True)
class DualGraph:
    nodes: tuple[Simplex, ...]
    arcs: tuple[tuple[Simplex, Simplex, Simplex], ...]
    """Each arc is ``(tet_a, tet_b, shared_triangle)``."""

    def degree(self, node: Simplex) -> int:
        return sum((a == node) + (b == node) for a, b, _ in self.arcs)

    def degrees(self) -> dict[Simplex, int]:
        deg = {v: 0 for v in self.nodes}
        for a, b, _ in self.arcs:
            deg[a] += 1
            deg[b] += 1
        return deg


def dual_graph(t: Triangulation) -> DualGraph:
    arcs = []
    for tri in sorted(t.triangle_tets):
        tets = t.triangle_tets[tri]
        if len(tets) != 2:
            raise TriangulationError(f"triangle {tri} is unpaired (lies in {len(tets)} tetrahedra)")
        a, b = sorted(tets)
        arcs.append((a, b, tri))
    return DualGraph(t.tetrahedra, tuple(arcs))


def relabel(t: Triangulation, mapping: dict[int, int]) -> Triangulation:
    return Triangulation.from_tetrahedra(
        tuple(mapping.get(v, v) for v in tet) for tet in t.tetrahedra
    )


def canonical_form(t: Triangulation) -> tuple[Simplex, ...]:
    """Isomorphism-invariant form, by brute force over vertex orders.

    Uses a BFS relabelling from every (tetrahedron, ordering) start, which is
    complete for connected pseudomanifolds and cheap at fixture sizes.
    """
    best = None
    for start in t.tetrahedra:
        for perm in permutations(start):
            order: dict[int, int] = {}
            for v in perm:
                order[v] = len(order)
            queue = [start]
            seen = {start}
            i = 0
            while i < len(queue):
                tet = queue[i]
                i += 1
                for tri in sorted(combinations(tet, 3), key=lambda f: sorted(order[x] for x in f)):
                    for other in t.triangle_tets[tri]:
                        if other in seen:
                            continue
                        for v in other:
                            if v not in order:
                                order[v] = len(order)
                        seen.add(other)
                        queue.append(other)
            if len(order) != len(t.vertices):
                continue
            form = tuple(sorted(tuple(sorted(order[v] for v in tet)) for tet in t.tetrahedra))
            if best is None or form < best:
                best = form
    return best


def isomorphic(s: Triangulation, t: Triangulation) -> bool:
    if f_vector(s) != f_vector(t):
        return False
    return canonical_form(s) == canonical_form(t)
