"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's own geometry and
combinatorics: hull facets come from sympy determinants, faces from plain
itertools enumeration, isomorphism from networkx.
"""

from __future__ import annotations

from itertools import combinations

import pytest

from trilink.generators import cyclic_polytope_boundary, join_of_triangles, simplex_boundary, stacked_sphere

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def simplex():
    return simplex_boundary()


@pytest.fixture(scope="session")
def join():
    return join_of_triangles()


@pytest.fixture(scope="session")
def cyclic6():
    return cyclic_polytope_boundary(6)


@pytest.fixture(scope="session")
def stacked3():
    return stacked_sphere(3, 11)


# --- oracles -----------------------------------------------------------------

def hull_facets_oracle(points: dict) -> set:
    """4-subsets whose affine hyperplane has every other point strictly on one side."""
    import sympy

    labels = sorted(points)
    facets = set()
    for quad in combinations(labels, 4):
        rows = [[1, *map(sympy.Rational, points[v])] for v in quad]
        signs = set()
        for w in labels:
            if w in quad:
                continue
            d = sympy.Matrix(rows + [[1, *map(sympy.Rational, points[w])]]).det()
            signs.add(sympy.sign(d))
        if len(signs) == 1 and 0 not in signs:
            facets.add(quad)
    return facets


def faces_oracle(tets) -> list[set]:
    faces = [set(), set(), set(), set()]
    for tet in tets:
        for d in range(4):
            faces[d].update(combinations(sorted(tet), d + 1))
    return faces


def incidence_graph(t):
    import networkx as nx

    g = nx.Graph()
    for v in t.vertices:
        g.add_node(("v", v), kind="v")
    for tet in t.tetrahedra:
        g.add_node(("t", tet), kind="t")
        for v in tet:
            g.add_edge(("v", v), ("t", tet))
    return g


def isomorphic_oracle(s, t) -> bool:
    import networkx as nx

    return nx.is_isomorphic(incidence_graph(s), incidence_graph(t), node_match=lambda a, b: a["kind"] == b["kind"])


def _surface_euler(tris) -> int | None:
    """Euler characteristic of a triangle set, or None if some edge is in more than two triangles."""
    use = {}
    for tri in tris:
        for e in combinations(sorted(tri), 2):
            use[e] = use.get(e, 0) + 1
    if any(c > 2 for c in use.values()):
        return None
    # connected through shared edges
    seen, stack = {tris[0]}, [tris[0]]
    while stack:
        cur = stack.pop()
        for other in tris:
            if other not in seen and len(set(cur) & set(other)) == 2:
                seen.add(other)
                stack.append(other)
    if len(seen) != len(tris):
        return None
    return len({v for tri in tris for v in tri}) - len(use) + len(tris)


def is_ball_oracle(tets) -> bool:
    """Small-complex 3-ball test: boundary a 2-sphere, vertex links disks or spheres, chi = 1."""
    faces = faces_oracle(tets)
    if sum((-1) ** d * len(faces[d]) for d in range(4)) != 1:
        return False
    count = {}
    for tet in tets:
        for tri in combinations(sorted(tet), 3):
            count[tri] = count.get(tri, 0) + 1
    if any(c > 2 for c in count.values()):
        return False
    boundary = [tri for tri, c in count.items() if c == 1]
    if not boundary or _surface_euler(boundary) != 2:
        return False
    for (v,) in faces[0]:
        link = [tuple(x for x in tet if x != v) for tet in tets if v in tet]
        if _surface_euler(link) not in (1, 2):
            return False
    return True
