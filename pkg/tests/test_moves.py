from itertools import combinations

import pytest

from conftest import isomorphic_oracle
from trilink.complex import Triangulation, canonical_form, isomorphic, validate
from trilink.diagram import generic_direction, linking_matrix, project
from trilink.generators import GeneratedComplex, cyclic_polytope_boundary, stacked_sphere, walk
from trilink.linkset import check_link, enumerate_links
from trilink.moves import (
    ExpansionSpec,
    MoveError,
    MoveRecord,
    apply_record,
    available_flips,
    contract_edge,
    expand,
    pachner,
    random_expansion_spec,
    spec_from_disk,
    stellar_subdivide,
    transport_link,
    undo,
)
from trilink.prng import Lcg64
from trilink.realize import beyond_point, schlegel, verify_embedding


def link_oracle(t, simplex):
    """Closed link of a simplex, from the tetrahedra alone."""
    s = set(simplex)
    out = set()
    for tet in t.tetrahedra:
        if s <= set(tet):
            rest = tuple(v for v in tet if v not in s)
            for d in range(len(rest) + 1):
                out.update(c for c in combinations(rest, d) if c)
    return out


def test_simplex_edges_fail_link_condition(simplex):
    t = simplex.triangulation
    for a, b in t.edges:
        extra = (link_oracle(t, (a,)) & link_oracle(t, (b,))) - link_oracle(t, (a, b))
        assert extra
        with pytest.raises(MoveError, match="link condition") as info:
            contract_edge(t, (a, b))
        witness = min(extra, key=lambda s: (len(s), s))
        assert str(witness) in str(info.value)


def test_join_edge_decided_by_enumeration(join):
    t = join.triangulation
    extra = (link_oracle(t, (1,)) & link_oracle(t, (4,))) - link_oracle(t, (1, 4))
    if extra:
        with pytest.raises(MoveError, match="witness"):
            contract_edge(t, (1, 4))
    else:
        out, _ = contract_edge(t, (1, 4))
        assert validate(out).valid


def test_stacked_contraction_gives_simplex(simplex):
    g = stacked_sphere(1, 0)
    t = g.triangulation
    for v in range(1, 6):
        if (v, 6) not in t.edges:
            continue
        out, rec = contract_edge(t, (v, 6))
        assert isomorphic(out, simplex.triangulation)
        assert isomorphic_oracle(out, simplex.triangulation)
        back, _ = expand(out, rec.location["inverse"])
        assert back == t


def test_expand_simplex_vertex(simplex):
    t = simplex.triangulation
    link = sorted(t.vertex_link_triangles(1))
    spec = spec_from_disk(t, 1, link[1:])
    assert len(spec.disk_a) == 1
    out, rec = expand(t, spec)
    assert validate(out).valid and out.n == 8
    back, _ = contract_edge(out, rec.location["edge"])
    assert back == t


def test_malformed_specs_are_rejected():
    t = cyclic_polytope_boundary(8).triangulation
    link = sorted(t.vertex_link_triangles(1))
    a, b = next((s, u) for s, u in combinations(link, 2) if len(set(s) & set(u)) == 1)
    bad = ExpansionSpec(1, frozenset({a, b}), frozenset(set(link) - {a, b}), (0, 0, 0), 99)
    with pytest.raises(MoveError, match="disk_a: disk is disconnected"):
        expand(t, bad)
    good = spec_from_disk(t, 1, link[:1])
    with pytest.raises(MoveError, match="already in use"):
        expand(t, ExpansionSpec(good.v, good.disk_a, good.disk_b, good.boundary_cycle, 2))
    with pytest.raises(MoveError, match="neither disk"):
        expand(t, ExpansionSpec(1, good.disk_a - {min(good.disk_a)}, good.disk_b, good.boundary_cycle, 99))
    with pytest.raises(MoveError, match="boundary differs"):
        expand(t, ExpansionSpec(1, good.disk_a, good.disk_b, (2, 3, 5), 99))


def test_disk_with_wrong_euler_characteristic():
    # an annulus in the link: Euler characteristic 0
    t = cyclic_polytope_boundary(9).triangulation
    link = sorted(t.vertex_link_triangles(1))
    rng = Lcg64(3)
    for _ in range(200):
        spec = random_expansion_spec(t, rng, 1)
        rest = sorted(spec.disk_a)
        # remove one interior triangle of disk_a if it leaves a hole
        for s in rest:
            if not set(s) & set(spec.boundary_cycle):
                holed = frozenset(set(spec.disk_a) - {s})
                with pytest.raises(MoveError, match="Euler characteristic|neither disk"):
                    expand(t, ExpansionSpec(1, holed, spec.disk_b | {s}, spec.boundary_cycle, 99))
                return
    assert link  # no interior triangle found; nothing to test


@pytest.mark.parametrize("sigma,n", [((1, 2, 3, 4), 8), ((1, 2, 3), 9), ((1, 2), 8)])
def test_stellar_counts(simplex, sigma, n):
    out, rec = stellar_subdivide(simplex.triangulation, sigma)
    assert out.n == n
    assert validate(out).valid
    assert rec.kind == "expand" and rec.location["stellar"] == sigma
    back, _ = contract_edge(out, rec.location["edge"])
    assert back == simplex.triangulation


def test_stellar_rejects_non_simplex(simplex):
    with pytest.raises(MoveError):
        stellar_subdivide(simplex.triangulation, (1,))
    with pytest.raises(MoveError):
        stellar_subdivide(simplex.triangulation, (1, 2, 9))


def _fixtures():
    return [cyclic_polytope_boundary(6).triangulation, cyclic_polytope_boundary(8).triangulation,
            stacked_sphere(5, 1).triangulation, walk(30, 2).triangulation, walk(60, 8).triangulation]


def test_round_trip_identity():
    rng = Lcg64(2024)
    for t in _fixtures():
        for _ in range(12):
            spec = random_expansion_spec(t, rng)
            out, rec = expand(t, spec)
            assert validate(out).valid
            back, crec = contract_edge(out, rec.location["edge"])
            assert back == t
            assert crec.location["inverse"] == spec
            again, _ = undo(back, crec)
            assert again == out


def test_expand_after_contract_restores_input():
    for t in _fixtures()[2:]:
        done = 0
        for e in sorted(t.edges):
            try:
                out, rec = contract_edge(t, e)
            except MoveError:
                continue
            assert validate(out).valid
            back, _ = undo(out, rec)
            assert back == t
            done += 1
        assert done


def test_record_json_round_trip(simplex):
    t = simplex.triangulation
    _, rec = stellar_subdivide(t, (1, 2, 3))
    assert MoveRecord.from_json_obj(rec.to_json_obj()) == rec
    out, _ = stellar_subdivide(t, (1, 2, 3))
    _, crec = contract_edge(out, (1, 6))
    assert MoveRecord.from_json_obj(crec.to_json_obj()) == crec


def test_pachner_moves_undo(simplex):
    t = walk(20, 4).triangulation
    for kind, loc in available_flips(t):
        out, rec = pachner(t, kind, loc)
        assert validate(out).valid
        assert undo(out, rec)[0] == t
        assert apply_record(t, rec)[0] == out


def test_pachner_errors(simplex):
    t = simplex.triangulation
    with pytest.raises(MoveError):
        pachner(t, "pachner_23", (1, 2, 3))  # would duplicate edge (4, 5)
    with pytest.raises(MoveError):
        pachner(t, "pachner_32", (1, 2))
    with pytest.raises(MoveError):
        pachner(t, "bogus", (1,))


# --- link transport ----------------------------------------------------------

def _through(t, v, max_edges=5):
    return [l for l in enumerate_links(t, 2, max_edges) if v in l.vertices]


def test_transport_avoiding_vertex_is_identity():
    t = cyclic_polytope_boundary(8).triangulation
    spec = random_expansion_spec(t, Lcg64(1), 1)
    _, rec = expand(t, spec)
    for l in enumerate_links(t, 1, 3):
        if 1 not in l.vertices:
            assert transport_link(l, rec).components == l.components


def test_transport_cases():
    seen = {"same_side": False, "split": False}
    rng = Lcg64(77)
    t = cyclic_polytope_boundary(9).triangulation
    for _ in range(60):
        spec = random_expansion_spec(t, rng)
        out, rec = expand(t, spec)
        v, b = spec.v, spec.new_label
        inner_a, inner_b = spec.interior_vertices("a"), spec.interior_vertices("b")
        for x, y in combinations(sorted(t.neighbors[v]), 2):
            if (x, y) not in t.edges:
                continue
            l = check_link(t, [(v, x, y)])
            moved = transport_link(l, rec)
            if x in inner_a and y in inner_a:
                assert moved.components == l.components and moved.k == 3
                seen["same_side"] = True
            if (x in inner_a and y in inner_b) or (x in inner_b and y in inner_a):
                assert moved.k == 4
                (cyc,) = moved.components
                assert set(cyc) == {v, b, x, y}
                i = cyc.index(v)
                assert b in (cyc[i - 1], cyc[(i + 1) % 4])
                seen["split"] = True
    assert all(seen.values())


def test_transport_bound_and_inverse():
    rng = Lcg64(5)
    cases = 0
    for t in _fixtures():
        for _ in range(6):
            spec = random_expansion_spec(t, rng)
            out, rec = expand(t, spec)
            _, crec = contract_edge(out, rec.location["edge"])
            for l in _through(t, spec.v)[:15]:
                moved = transport_link(l, rec)
                assert moved.host == out
                assert l.k <= moved.k <= l.k + 1
                assert transport_link(moved, crec).components == l.components
                cases += 1
    assert cases > 100


def test_transport_rejects_flips():
    t = walk(5, 1).triangulation
    kind, loc = available_flips(t)[0]
    _, rec = pachner(t, kind, loc)
    l = next(enumerate_links(t, 1, 3))
    with pytest.raises(MoveError):
        transport_link(l, rec)


def _subdivided(g, r, tet):
    t = g.triangulation
    w = t.fresh_label()
    pts = dict(g.coords4)
    pts[w] = beyond_point(pts, tet, t.tetrahedra)
    out, rec = stellar_subdivide(t, tet, w)
    r2 = schlegel(GeneratedComplex(out, pts, "stacked"), r.omitted_facet)
    assert verify_embedding(r2)
    return r2, rec


def _off_diagonal(r, l):
    return linking_matrix(project(r, l, generic_direction(r, l))).off_diagonal()


def test_transport_preserves_linking_on_stacked_spheres():
    compared = 0
    for steps, seed in [(3, 1), (4, 6), (5, 2)]:
        g = stacked_sphere(steps, seed)
        t = g.triangulation
        r = schlegel(g)
        rng = Lcg64(seed)
        for _ in range(3):
            tet = rng.choice([x for x in t.tetrahedra if x != r.omitted_facet])
            r2, rec = _subdivided(g, r, tet)
            links = [l for l in enumerate_links(t, 2, 7)
                     if len(l.components) == 2 and set(tet) & l.vertices]
            for l in links[::max(1, len(links) // 8)]:
                assert _off_diagonal(r, l) == _off_diagonal(r2, transport_link(l, rec))
                compared += 1
    assert compared


def test_transport_preserves_hopf_linking(join):
    r = schlegel(join)
    hopf = check_link(join.triangulation, [(1, 2, 3), (4, 5, 6)])
    before = _off_diagonal(r, hopf)
    assert abs(before[0, 1]) == 1
    for tet in join.triangulation.tetrahedra:
        if tet == r.omitted_facet:
            continue
        r2, rec = _subdivided(join, r, tet)
        moved = transport_link(hopf, rec)
        assert moved.k in (6, 7)
        assert _off_diagonal(r2, moved) == before


def test_canonical_form_invariant_under_round_trip():
    t = walk(25, 9).triangulation
    spec = random_expansion_spec(t, Lcg64(0))
    out, rec = expand(t, spec)
    back, _ = contract_edge(out, rec.location["edge"])
    assert canonical_form(back) == canonical_form(t)
    assert isinstance(back, Triangulation)
