"""Edge contractions, expansions, stellar subdivisions and bistellar flips.

An expansion splits a vertex ``v`` into an edge ``{a, b}`` (``a`` keeps the
label ``v``).  It is described by an :class:`ExpansionSpec`: a partition of
the link of ``v`` into two disks glued along a common boundary cycle.
Contracting the new edge undoes it exactly.

Pachner 2-3, 3-2 and 4-1 moves exist for generating test triangulations and
are never treated as expansions.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .complex import Simplex, Triangulation
from .linkset import EdgeLink, LinkError, canonical_cycle, check_link
from .prng import Lcg64


class MoveError(ValueError):
    pass


def _tri(xs) -> Simplex:
    return tuple(sorted(xs))


@dataclass(frozen=True)
class ExpansionSpec:
    v: int
    disk_a: frozenset
    disk_b: frozenset
    boundary_cycle: tuple[int, ...]
    new_label: int

    def __post_init__(self):
        object.__setattr__(self, "disk_a", frozenset(_tri(s) for s in self.disk_a))
        object.__setattr__(self, "disk_b", frozenset(_tri(s) for s in self.disk_b))
        object.__setattr__(self, "boundary_cycle", canonical_cycle(self.boundary_cycle))

    def to_json_obj(self) -> dict:
        return {
            "v": self.v,
            "disk_a": [list(s) for s in sorted(self.disk_a)],
            "disk_b": [list(s) for s in sorted(self.disk_b)],
            "boundary_cycle": list(self.boundary_cycle),
            "new_label": self.new_label,
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExpansionSpec":
        return cls(
            int(obj["v"]),
            frozenset(_tri(s) for s in obj["disk_a"]),
            frozenset(_tri(s) for s in obj["disk_b"]),
            tuple(obj["boundary_cycle"]),
            int(obj["new_label"]),
        )

    def interior_vertices(self, side: str) -> set[int]:
        disk = self.disk_a if side == "a" else self.disk_b
        return {v for s in disk for v in s} - set(self.boundary_cycle)


@dataclass(frozen=True)
class MoveRecord:
    kind: str  # contract | expand | pachner_14 | pachner_23 | pachner_32 | pachner_41
    location: dict
    vertex_map: dict = field(default_factory=dict)
    """Before-vertex -> after-vertex for vertices that are renamed or merged."""
    new_vertices: tuple[int, ...] = ()
    removed_vertices: tuple[int, ...] = ()

    def to_json_obj(self) -> dict:
        loc = {}
        for key, val in self.location.items():
            if isinstance(val, ExpansionSpec):
                loc[key] = val.to_json_obj()
            elif isinstance(val, tuple):
                loc[key] = list(val)
            else:
                loc[key] = val
        return {
            "kind": self.kind,
            "location": loc,
            "vertex_map": {str(k): v for k, v in sorted(self.vertex_map.items())},
            "new_vertices": list(self.new_vertices),
            "removed_vertices": list(self.removed_vertices),
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MoveRecord":
        loc = {}
        for key, val in obj["location"].items():
            if key in ("spec", "inverse"):
                loc[key] = ExpansionSpec.from_json_obj(val)
            elif isinstance(val, list):
                loc[key] = tuple(val)
            else:
                loc[key] = val
        return cls(
            obj["kind"],
            loc,
            {int(k): int(v) for k, v in obj.get("vertex_map", {}).items()},
            tuple(obj.get("new_vertices", ())),
            tuple(obj.get("removed_vertices", ())),
        )


# --- disks and cycles -----------------------------------------------------

def _boundary_edges(disk: Iterable[Simplex]) -> list[Simplex]:
    count: dict[Simplex, int] = defaultdict(int)
    for s in disk:
        for e in combinations(s, 2):
            count[e] += 1
    return sorted(e for e, c in count.items() if c == 1)


def _edges_to_cycle(edges: list[Simplex]) -> tuple[int, ...] | None:
    """Order a set of edges into one simple cycle, or None if they are not one."""
    if len(edges) < 3:
        return None
    adj: dict[int, list[int]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if any(len(nb) != 2 for nb in adj.values()):
        return None
    start = min(adj)
    cyc = [start]
    prev, cur = None, start
    while True:
        nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
        if nxt == start:
            break
        cyc.append(nxt)
        prev, cur = cur, nxt
    if len(cyc) != len(adj):
        return None
    return canonical_cycle(cyc)


def disk_defect(disk: frozenset) -> str | None:
    """None if ``disk`` is a triangulated disk, else a diagnostic."""
    if not disk:
        return "disk is empty"
    tris = sorted(disk)
    count: dict[Simplex, int] = defaultdict(int)
    for s in tris:
        for e in combinations(s, 2):
            count[e] += 1
    over = [e for e, c in count.items() if c > 2]
    if over:
        return f"edge {min(over)} lies in more than two disk triangles"
    seen = {tris[0]}
    stack = [tris[0]]
    by_edge: dict[Simplex, list[Simplex]] = defaultdict(list)
    for s in tris:
        for e in combinations(s, 2):
            by_edge[e].append(s)
    while stack:
        s = stack.pop()
        for e in combinations(s, 2):
            for u in by_edge[e]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
    if len(seen) != len(tris):
        return f"disk is disconnected ({len(seen)} of {len(tris)} triangles reachable)"
    verts = {v for s in tris for v in s}
    chi = len(verts) - len(count) + len(tris)
    if chi != 1:
        return f"Euler characteristic V - E + F = {len(verts)} - {len(count)} + {len(tris)} = {chi}, a disk needs 1"
    if _edges_to_cycle(_boundary_edges(tris)) is None:
        return "boundary edges do not form a single simple cycle"
    return None


def spec_from_disk(t: Triangulation, v: int, disk_b: Iterable[Sequence[int]],
                   new_label: int | None = None) -> ExpansionSpec:
    """Build the expansion that moves the triangles ``disk_b`` of lk(v) to the new vertex."""
    link = {_tri(s) for s in t.vertex_link_triangles(v)}
    disk_b = frozenset(_tri(s) for s in disk_b)
    bad = disk_b - link
    if bad:
        raise MoveError(f"triangle {min(bad)} is not in the link of {v}")
    cyc = _edges_to_cycle(_boundary_edges(disk_b))
    if cyc is None:
        raise MoveError("disk_b has no simple boundary cycle")
    return ExpansionSpec(v, frozenset(link - disk_b), disk_b, cyc,
                         t.fresh_label() if new_label is None else new_label)


def check_spec(t: Triangulation, spec: ExpansionSpec) -> None:
    """Raise :class:`MoveError` unless ``spec`` describes a valid expansion of ``t``."""
    if spec.v not in t.vertices:
        raise MoveError(f"vertex {spec.v} is not in the triangulation")
    if spec.new_label in t.vertices:
        raise MoveError(f"new label {spec.new_label} is already in use")
    link = {_tri(s) for s in t.vertex_link_triangles(spec.v)}
    if spec.disk_a & spec.disk_b:
        raise MoveError(f"triangle {min(spec.disk_a & spec.disk_b)} is in both disks")
    union = spec.disk_a | spec.disk_b
    if union - link:
        raise MoveError(f"triangle {min(union - link)} is not in the link of {spec.v}")
    if link - union:
        raise MoveError(f"link triangle {min(link - union)} is in neither disk")
    for name, disk in (("disk_a", spec.disk_a), ("disk_b", spec.disk_b)):
        why = disk_defect(disk)
        if why is not None:
            raise MoveError(f"{name}: {why}")
        if _edges_to_cycle(_boundary_edges(disk)) != spec.boundary_cycle:
            raise MoveError(f"{name}: boundary differs from boundary_cycle {spec.boundary_cycle}")


def _cycle_edges(cyc: Sequence[int]) -> list[Simplex]:
    return [_tri((cyc[i], cyc[(i + 1) % len(cyc)])) for i in range(len(cyc))]


# --- contraction / expansion ----------------------------------------------

def link_condition_witness(t: Triangulation, a: int, b: int) -> Simplex | None:
    """A simplex of (lk a ∩ lk b) \\ lk {a,b}, or None if the link condition holds."""
    extra = (t.link([a]) & t.link([b])) - t.link([a, b])
    if not extra:
        return None
    return min(extra, key=lambda s: (len(s), s))


def contract_edge(t: Triangulation, edge: Sequence[int]) -> tuple[Triangulation, MoveRecord]:
    """Collapse ``edge = (a, b)`` onto ``a``."""
    a, b = int(edge[0]), int(edge[1])
    if _tri((a, b)) not in t.edges:
        raise MoveError(f"{(a, b)} is not an edge")
    witness = link_condition_witness(t, a, b)
    if witness is not None:
        raise MoveError(f"link condition fails for edge {(a, b)}: witness {witness}")
    star_e = t.star([a, b])
    edge_link = _edges_to_cycle([_tri(set(tet) - {a, b}) for tet in star_e])
    inverse = ExpansionSpec(
        a,
        frozenset(_tri(s) for s in t.vertex_link_triangles(a) if b not in s),
        frozenset(_tri(s) for s in t.vertex_link_triangles(b) if a not in s),
        edge_link,
        b,
    )
    tets = [tuple(a if v == b else v for v in tet) for tet in t.tetrahedra if not (a in tet and b in tet)]
    out = Triangulation.from_tetrahedra(tets)
    rec = MoveRecord("contract", {"edge": (a, b), "inverse": inverse}, {b: a}, (), (b,))
    return out, rec


def expand(t: Triangulation, spec: ExpansionSpec) -> tuple[Triangulation, MoveRecord]:
    check_spec(t, spec)
    a, b = spec.v, spec.new_label
    tets = [tet for tet in t.tetrahedra if a not in tet]
    tets += [(a,) + s for s in spec.disk_a]
    tets += [(b,) + s for s in spec.disk_b]
    tets += [(a, b) + e for e in _cycle_edges(spec.boundary_cycle)]
    out = Triangulation.from_tetrahedra(tets)
    rec = MoveRecord("expand", {"spec": spec, "edge": (a, b)}, {}, (b,), ())
    return out, rec


def stellar_subdivide(t: Triangulation, sigma: Sequence[int],
                      new_label: int | None = None) -> tuple[Triangulation, MoveRecord]:
    """Cone off the star of ``sigma`` from a fresh vertex.

    Recorded as the equivalent expansion at ``min(sigma)``; the two
    constructions are compared and must agree.
    """
    sigma = _tri(sigma)
    if not 2 <= len(sigma) <= 4 or sigma not in t:
        raise MoveError(f"{sigma} is not a simplex of dimension 1..3 of the triangulation")
    w = t.fresh_label() if new_label is None else new_label
    star = t.star(sigma)
    tets = [tet for tet in t.tetrahedra if tet not in set(star)]
    for tet in star:
        rest = tuple(v for v in tet if v not in sigma)
        for face in combinations(sigma, len(sigma) - 1):
            tets.append((w,) + face + rest)
    out = Triangulation.from_tetrahedra(tets)

    x = sigma[0]
    opposite = tuple(v for v in sigma if v != x)
    disk_b = [_tri(opposite + tuple(v for v in tet if v not in sigma)) for tet in star]
    spec = spec_from_disk(t, x, disk_b, w)
    via_expand, rec = expand(t, spec)
    if via_expand != out:  # pragma: no cover - identity of the two constructions
        raise MoveError(f"stellar subdivision of {sigma} is not the derived expansion")
    rec = MoveRecord("expand", {"spec": spec, "edge": (x, w), "stellar": sigma}, {}, (w,), ())
    return out, rec


# --- bistellar flips --------------------------------------------------------

PACHNER_KINDS = ("pachner_14", "pachner_23", "pachner_32", "pachner_41")


def available_flips(t: Triangulation, kinds: Iterable[str] = PACHNER_KINDS) -> list[tuple[str, tuple]]:
    """Applicable bistellar flips in a fixed order: kind, then location."""
    kinds = set(kinds)
    out: list[tuple[str, tuple]] = []
    if "pachner_14" in kinds:
        out += [("pachner_14", tet) for tet in t.tetrahedra]
    if "pachner_23" in kinds:
        for tri in sorted(t.triangle_tets):
            pair = t.triangle_tets[tri]
            if len(pair) != 2:
                continue
            d, e = sorted(v for tet in pair for v in tet if v not in tri)
            if (d, e) not in t.edges:
                out.append(("pachner_23", tri))
    if "pachner_32" in kinds or "pachner_41" in kinds:
        edge_deg: dict[Simplex, int] = defaultdict(int)
        for tet in t.tetrahedra:
            for e in combinations(tet, 2):
                edge_deg[e] += 1
        if "pachner_32" in kinds:
            for e in sorted(edge_deg):
                if edge_deg[e] == 3:
                    opp = _tri({v for tet in t.star(e) for v in tet} - set(e))
                    if len(opp) == 3 and opp not in t.triangles:
                        out.append(("pachner_32", e))
        if "pachner_41" in kinds:
            for v in t.vertices:
                star = t.vertex_tets[v]
                if len(star) == 4:
                    opp = _tri({u for tet in star for u in tet} - {v})
                    if len(opp) == 4 and opp not in t:
                        out.append(("pachner_41", (v,)))
    return out


def pachner(t: Triangulation, kind: str, location: Sequence[int],
            new_label: int | None = None) -> tuple[Triangulation, MoveRecord]:
    loc = _tri(location)
    if kind == "pachner_14":
        if loc not in t:
            raise MoveError(f"{loc} is not a tetrahedron")
        w = t.fresh_label() if new_label is None else new_label
        tets = [tet for tet in t.tetrahedra if tet != loc]
        tets += [(w,) + f for f in combinations(loc, 3)]
        return Triangulation.from_tetrahedra(tets), MoveRecord(kind, {"tet": loc, "new_vertex": w}, {}, (w,))
    if kind == "pachner_23":
        pair = t.triangle_tets.get(loc, [])
        if len(pair) != 2:
            raise MoveError(f"{loc} is not an interior triangle")
        d, e = sorted(v for tet in pair for v in tet if v not in loc)
        if (d, e) in t.edges:
            raise MoveError(f"2-3 move on {loc} would duplicate edge {(d, e)}")
        tets = [tet for tet in t.tetrahedra if tet not in pair]
        tets += [(d, e) + f for f in combinations(loc, 2)]
        return Triangulation.from_tetrahedra(tets), MoveRecord(kind, {"triangle": loc, "edge": (d, e)})
    if kind == "pachner_32":
        star = t.star(loc)
        opp = _tri({v for tet in star for v in tet} - set(loc))
        if len(star) != 3 or len(opp) != 3:
            raise MoveError(f"edge {loc} does not have degree 3")
        if opp in t.triangles:
            raise MoveError(f"3-2 move on {loc} would duplicate triangle {opp}")
        tets = [tet for tet in t.tetrahedra if tet not in star]
        tets += [opp + (v,) for v in loc]
        return Triangulation.from_tetrahedra(tets), MoveRecord(kind, {"edge": loc, "triangle": opp})
    if kind == "pachner_41":
        (v,) = loc
        star = t.vertex_tets.get(v, [])
        opp = _tri({u for tet in star for u in tet} - {v})
        if len(star) != 4 or len(opp) != 4:
            raise MoveError(f"vertex {v} does not have degree 4")
        if opp in t:
            raise MoveError(f"4-1 move at {v} would duplicate tetrahedron {opp}")
        tets = [tet for tet in t.tetrahedra if v not in tet] + [opp]
        return Triangulation.from_tetrahedra(tets), MoveRecord(kind, {"vertex": v, "tet": opp}, {}, (), (v,))
    raise MoveError(f"unknown flip kind {kind!r}")


# --- replay and inversion ---------------------------------------------------

def apply_record(t: Triangulation, rec: MoveRecord) -> tuple[Triangulation, MoveRecord]:
    """Re-apply the move described by ``rec`` to ``t``."""
    loc = rec.location
    if rec.kind == "contract":
        return contract_edge(t, loc["edge"])
    if rec.kind == "expand":
        return expand(t, loc["spec"])
    if rec.kind == "pachner_14":
        return pachner(t, rec.kind, loc["tet"], loc["new_vertex"])
    if rec.kind == "pachner_23":
        return pachner(t, rec.kind, loc["triangle"])
    if rec.kind == "pachner_32":
        return pachner(t, rec.kind, loc["edge"])
    if rec.kind == "pachner_41":
        return pachner(t, rec.kind, (loc["vertex"],))
    raise MoveError(f"unknown move kind {rec.kind!r}")


def undo(t_after: Triangulation, rec: MoveRecord) -> tuple[Triangulation, MoveRecord]:
    """Apply the inverse of ``rec`` to the triangulation it produced."""
    loc = rec.location
    if rec.kind == "contract":
        return expand(t_after, loc["inverse"])
    if rec.kind == "expand":
        return contract_edge(t_after, loc["edge"])
    if rec.kind == "pachner_14":
        return pachner(t_after, "pachner_41", (loc["new_vertex"],))
    if rec.kind == "pachner_23":
        return pachner(t_after, "pachner_32", loc["edge"])
    if rec.kind == "pachner_32":
        return pachner(t_after, "pachner_23", loc["triangle"])
    if rec.kind == "pachner_41":
        return pachner(t_after, "pachner_14", loc["tet"], loc["vertex"])
    raise MoveError(f"unknown move kind {rec.kind!r}")


def random_expansion_spec(t: Triangulation, rng: Lcg64, v: int | None = None) -> ExpansionSpec:
    """Grow a random disk in lk(v) and split ``v`` along its boundary."""
    if v is None:
        v = rng.choice(t.vertices)
    link = sorted(_tri(s) for s in t.vertex_link_triangles(v))
    target = 1 + rng.randbelow(len(link) - 1)
    disk = {rng.choice(link)}
    while len(disk) < target:
        frontier_edges = set(_boundary_edges(disk))
        cands = [s for s in link if s not in disk
                 and any(e in frontier_edges for e in combinations(s, 2))
                 and disk_defect(frozenset(disk | {s})) is None]
        if not cands:
            break
        disk.add(rng.choice(cands))
    return spec_from_disk(t, v, disk)


# --- link transport ---------------------------------------------------------

def transport_link(l: EdgeLink, rec: MoveRecord, target: Triangulation | None = None) -> EdgeLink:
    """Carry ``l`` across an expansion or contraction.

    Across an expansion at ``v`` each neighbour of ``v`` on the link is sent
    to side ``a`` or ``b`` (interior of disk_b means ``b``; interior of disk_a
    and the boundary cycle mean ``a``), and ``v`` becomes ``a``, ``b`` or the
    path through the new edge.  At most one edge is added per component
    through ``v``.  Across a contraction ``b`` is renamed ``a`` and the
    doubled vertex collapses.
    """
    if target is None:
        target, _ = apply_record(l.host, rec)
    if rec.kind == "expand":
        spec: ExpansionSpec = rec.location["spec"]
        a, b = spec.v, spec.new_label
        inner_b = spec.interior_vertices("b")

        def side(x):
            return b if x in inner_b else a

        comps = []
        for comp in l.components:
            if a not in comp:
                comps.append(comp)
                continue
            i = comp.index(a)
            x, y = comp[i - 1], comp[(i + 1) % len(comp)]
            sx, sy = side(x), side(y)
            mid = [sx] if sx == sy else [sx, sy]
            comps.append(tuple(comp[:i]) + tuple(mid) + tuple(comp[i + 1:]))
    elif rec.kind == "contract":
        b, a = next(iter(rec.vertex_map.items()))
        comps = []
        for comp in l.components:
            seq = [a if v == b else v for v in comp]
            out = [v for i, v in enumerate(seq) if v != seq[i - 1]]
            comps.append(tuple(out))
    else:
        raise MoveError(f"links are only transported across expansions and contractions, not {rec.kind}")
    try:
        return check_link(target, comps)
    except LinkError as exc:
        raise MoveError(f"transported link is invalid: {exc}") from exc
