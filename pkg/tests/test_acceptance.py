"""Acceptance gate: one test per criterion, each with its runtime limit.

Every test records a ``PASS``/``FAIL`` line (with elapsed time) that is
printed in the pytest terminal summary under "acceptance criteria".
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from itertools import combinations

from conftest import ACCEPTANCE_LINES, hull_facets_oracle
from trilink import bounds as b
from trilink.complex import dual_graph, validate
from trilink.diagram import crossing_count, generic_directions, linking_matrix, project
from trilink.generators import (
    cyclic_polytope_boundary,
    join_of_triangles,
    simplex_boundary,
    stacked_sphere,
    walk,
)
from trilink.linkset import check_link, enumerate_links
from trilink.moves import contract_edge, expand, random_expansion_spec, transport_link
from trilink.prng import Lcg64
from trilink.realize import schlegel, verify_embedding
from trilink.shelling import DEFAULT_BUDGET, find_shelling, verify_shelling


@contextmanager
def criterion(number: int, title: str, limit: float):
    start = time.perf_counter()
    try:
        yield
    except BaseException as exc:
        elapsed = time.perf_counter() - start
        line = f"FAIL  {number}. {title} ({elapsed:.2f} s; {type(exc).__name__}: {exc})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    ok = elapsed < limit
    line = f"{'PASS' if ok else 'FAIL'}  {number}. {title} ({elapsed:.2f} s, limit {limit:g} s)"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, f"criterion {number} took {elapsed:.2f} s, limit {limit} s"


def test_criterion_1_simplex_pipeline():
    with criterion(1, "simplex fixture: embedding verified, all 10 triangles draw with 0 < 100 crossings", 1.0):
        g = simplex_boundary()
        r = schlegel(g)
        assert verify_embedding(r)
        links = list(enumerate_links(g.triangulation, 1, 3))
        assert len(links) == 10
        bound = b.cr_bounds_all(5, 3)["thm_1_1_1"]
        assert bound == 100
        for l in links:
            (d,) = generic_directions(r, l, 1)
            assert crossing_count(project(r, l, d)) == 0 < bound


def test_criterion_2_hopf_pipeline():
    with criterion(2, "Hopf fixture: >= 5 generic directions, <= 15 < 324 crossings, linking number constant +-1", 5.0):
        g = join_of_triangles()
        r = schlegel(g)
        assert verify_embedding(r)
        l = check_link(g.triangulation, [(1, 2, 3), (4, 5, 6)])
        dirs = generic_directions(r, l, 6)
        assert len(set(dirs)) >= 5
        lks = set()
        for d in dirs:
            dg = project(r, l, d)
            assert crossing_count(dg) <= 15 < 324 == 4 * 9**2
            lks.add(linking_matrix(dg)[0, 1])
        assert len(lks) == 1 and abs(next(iter(lks))) == 1


def test_criterion_3_polytopal_fixtures_shell():
    with criterion(3, "polytopal fixtures: shelling found within default budget and re-verified", 30.0):
        fixtures = [simplex_boundary(), join_of_triangles()]
        fixtures += [cyclic_polytope_boundary(m) for m in (6, 7, 8)]
        fixtures += [stacked_sphere(steps, seed) for steps in range(11) for seed in (0, 7)]
        for g in fixtures:
            res = find_shelling(g.triangulation, DEFAULT_BUDGET)
            assert res.status == "found", g.provenance
            assert verify_shelling(g.triangulation, res.order), g.provenance


def test_criterion_4_moves_round_trip():
    with criterion(4, "100 seeded expansions: contract after expand is identity, transport <= k+1 and invertible", 30.0):
        fixtures = [simplex_boundary().triangulation, join_of_triangles().triangulation,
                    cyclic_polytope_boundary(7).triangulation, stacked_sphere(6, 3).triangulation,
                    walk(40, 1).triangulation]
        rng = Lcg64(20240101)
        transported = 0
        for i in range(100):
            t = fixtures[i % len(fixtures)]
            spec = random_expansion_spec(t, rng)
            out, rec = expand(t, spec)
            back, crec = contract_edge(out, rec.location["edge"])
            assert back == t
            through = [l for l in enumerate_links(t, 2, 6) if spec.v in l.vertices]
            assert through
            for l in through[:10]:
                moved = transport_link(l, rec)
                assert moved.k <= l.k + 1
                assert transport_link(moved, crec).components == l.components
                transported += 1
        assert transported >= 100


def test_criterion_5_bound_arithmetic():
    with criterion(5, "displayed bound arithmetic reproduced exactly", 10.0):
        assert 25088 * 25 + 6085 * 5 + 376 == 658001
        assert b.shellable_display(5) == 658001
        assert b.cr_bound_from_p(2 * 5, 7 * 5) == 658001**2
        for n in range(5, 1001):
            assert (25088 * n * n + 6085 * n + 376) ** 2 < 10**9 * n**4
            assert b.shellable_inequality_holds(n)
        for n in range(5, 9):
            e = 200 * n * n
            assert (512 * 2 ** (2 * e) + 869 * 2**e + 2 * n + 376) ** 2 < 2 ** (810 * n * n)
            assert b.general_inequality_holds(n)


def test_criterion_6_walk_invariants():
    with criterion(6, "200 seeded Pachner walks: valid, chi = 0, face relations, 4-regular dual graph", 60.0):
        for seed in range(200):
            t = walk(1 + seed % 100, seed).triangulation
            rep = validate(t)
            f0, f1, f2, f3 = rep.f_vector
            assert rep.valid and rep.euler_characteristic == 0
            assert f2 == 2 * f3 and f1 == f0 + f3 and f1 <= 2 * f3
            assert set(dual_graph(t).degrees().values()) == {4}


def test_criterion_7_enumeration_oracles():
    with criterion(7, "enumeration matches brute force: 10 simplex triangles, cyclic facets for m = 6, 7, 8", 10.0):
        g = simplex_boundary()
        t = g.triangulation
        edges = {e for tet in t.tetrahedra for e in combinations(tet, 2)}
        brute = {tri for tri in combinations(t.vertices, 3) if all(e in edges for e in combinations(tri, 2))}
        found = {l.components[0] for l in enumerate_links(t, 1, 3)}
        assert len(found) == 10 and found == brute
        for m in (6, 7, 8):
            c = cyclic_polytope_boundary(m)
            assert set(c.triangulation.tetrahedra) == hull_facets_oracle(c.coords4)
