"""Link diagrams from orthogonal projections of straight-line links.

Conventions
-----------
* The projection plane for direction ``d`` has the exact (unnormalized)
  orthogonal frame ``u = (d1, -d0, 0)`` (or ``(1, 0, 0)`` when ``d0 = d1 = 0``)
  and ``w = d x u``.  Since ``u x w`` is a positive multiple of ``d``, the
  plane is seen from ``+d``; the strand with the larger ``d``-depth is over.
* A crossing is ``+1`` when the over direction rotated by +90 degrees points
  along the under direction (i.e. ``cross(over, under) > 0``).
* Segments are numbered from 1 in canonical component order.  PD edges are
  the arcs between consecutive crossings, numbered from 1 in the same
  traversal; each component's first arc is the one through its first vertex.
  ``X[a,b,c,d]`` starts at the incoming under arc and runs counterclockwise.
* Gauss codes list crossing labels along each component, positive for an
  over passage and negative for an under passage.  Crossing labels follow
  first encounter in the traversal.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .geometry import Vector, cross, dot, orient2d, segment_intersection_2d, sub, vec
from .linkset import EdgeLink
from .realize import Realization3

MAX_CANDIDATES = 10000


class DiagramError(ValueError):
    pass


def projection_frame(d: Sequence) -> tuple[Vector, Vector]:
    d = vec(d)
    if d[0] == 0 and d[1] == 0:
        u = vec((1, 0, 0))
    else:
        u = (d[1], -d[0], Fraction(0))
    return u, cross(d, u)


@dataclass(frozen=True)
class Segment:
    id: int  # 1-based, canonical order
    component: int
    index: int  # position within its component
    start: int
    end: int
    p: Vector
    q: Vector


def link_segments(r: Realization3, l: EdgeLink) -> list[Segment]:
    out = []
    for ci, comp in enumerate(l.components):
        for i, v in enumerate(comp):
            w = comp[(i + 1) % len(comp)]
            out.append(Segment(len(out) + 1, ci, i, v, w, vec(r.coords[v]), vec(r.coords[w])))
    return out


def _adjacent(s: Segment, t: Segment) -> bool:
    return bool({s.start, s.end} & {t.start, t.end})


@dataclass(frozen=True)
class Crossing:
    label: int
    over: int  # segment id
    under: int
    point: tuple[Fraction, Fraction]
    sign: int
    over_component: int
    under_component: int
    over_param: Fraction
    under_param: Fraction

    def to_json_obj(self) -> dict:
        return {
            "label": self.label,
            "over_segment": self.over,
            "under_segment": self.under,
            "point": [_q(x) for x in self.point],
            "sign": self.sign,
            "over_component": self.over_component,
            "under_component": self.under_component,
        }


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Diagram:
    direction: Vector
    components: tuple[tuple[int, ...], ...]
    strands: tuple[tuple[tuple[Fraction, Fraction], ...], ...]
    crossings: tuple[Crossing, ...]
    pd_code: tuple[tuple[int, int, int, int], ...]
    gauss_code: tuple[tuple[int, ...], ...]
    segment_count: int

    def pd_text(self) -> str:
        return "".join(f"X[{a},{b},{c},{d}]\n" for a, b, c, d in sorted(self.pd_code))

    def to_json_obj(self) -> dict:
        return {
            "direction": [_q(x) for x in self.direction],
            "components": [list(c) for c in self.components],
            "strands": [[[_q(x), _q(y)] for x, y in s] for s in self.strands],
            "crossings": [c.to_json_obj() for c in self.crossings],
            "crossing_count": len(self.crossings),
            "pd_code": [list(x) for x in sorted(self.pd_code)],
            "gauss_code": [list(g) for g in self.gauss_code],
            "segment_count": self.segment_count,
        }


def _raw_crossings(segs: list[Segment], d: Vector):
    """Yield (violation, crossings).  ``violation`` is None for a generic direction."""
    u, w = projection_frame(d)

    def proj(p):
        return (dot(p, u), dot(p, w))

    for s in segs:
        if not any(cross(sub(s.q, s.p), d)):
            return f"segment {s.id} ({s.start},{s.end}) is parallel to the direction", None
    images = {}
    for s in segs:
        for v, p in ((s.start, s.p), (s.end, s.q)):
            pt = proj(p)
            other = images.setdefault(pt, v)
            if other != v:
                return f"vertices {other} and {v} project to the same point", None
    flat = {s.id: (proj(s.p), proj(s.q)) for s in segs}
    found = []
    points = {}
    for s, t in combinations(segs, 2):
        (a, b), (c, e) = flat[s.id], flat[t.id]
        if _adjacent(s, t):
            shared = {s.start, s.end} & {t.start, t.end}
            if len(shared) > 1:
                continue
            (v,) = shared
            o = a if s.start == v else b
            x = b if s.start == v else a
            y = e if t.start == v else c
            if orient2d(o, x, y) == 0 and dot(sub(x, o), sub(y, o)) > 0:
                return f"adjacent segments {s.id} and {t.id} overlap in projection", None
            continue
        kind, pt, ps, pt_ = segment_intersection_2d(a, b, c, e)
        if kind == "none":
            continue
        if kind != "proper":
            return f"segments {s.id} and {t.id} meet non-transversally ({kind})", None
        ds = dot(s.p, d) + ps * dot(sub(s.q, s.p), d)
        dt = dot(t.p, d) + pt_ * dot(sub(t.q, t.p), d)
        if ds == dt:
            return f"segments {s.id} and {t.id} intersect in space", None
        if pt in points:
            return f"triple point at the crossing of {s.id} with {t.id} and {points[pt]}", None
        points[pt] = (s.id, t.id)
        if ds > dt:
            found.append((s, t, pt, ps, pt_))
        else:
            found.append((t, s, pt, pt_, ps))
    return None, (found, flat)


def genericity_violation(r: Realization3, l: EdgeLink, d: Sequence) -> str | None:
    violation, _ = _raw_crossings(link_segments(r, l), vec(d))
    return violation


def candidate_direction(t: int) -> Vector:
    return vec((1, t, t * t))


def generic_direction(r: Realization3, l: EdgeLink, start: int = 1,
                      max_candidates: int = MAX_CANDIDATES) -> Vector:
    """First ``(1, t, t^2)``, ``t = start, start+1, ...``, passing every genericity test."""
    segs = link_segments(r, l)
    last = None
    for t in range(start, start + max_candidates):
        d = candidate_direction(t)
        violation, _ = _raw_crossings(segs, d)
        if violation is None:
            return d
        last = (t, violation)
    raise DiagramError(f"no generic direction among {max_candidates} candidates; last: t={last[0]}: {last[1]}")


def generic_directions(r: Realization3, l: EdgeLink, count: int) -> list[Vector]:
    """The first ``count`` generic candidates on the moment curve."""
    out = []
    t = 1
    while len(out) < count:
        d = generic_direction(r, l, start=t)
        out.append(d)
        t = int(d[1]) + 1
    return out


def project(r: Realization3, l: EdgeLink, d: Sequence) -> Diagram:
    d = vec(d)
    segs = link_segments(r, l)
    violation, data = _raw_crossings(segs, d)
    if violation is not None:
        raise DiagramError(f"direction {tuple(str(x) for x in d)} is not generic: {violation}")
    found, flat = data

    # passages along each segment, ordered by parameter
    passages: dict[int, list] = {s.id: [] for s in segs}
    raw = []
    for idx, (over, under, pt, po, pu) in enumerate(found):
        (a, b), (c, e) = flat[over.id], flat[under.id]
        sgn = orient2d((0, 0), sub(b, a), sub(e, c))
        sign = 1 if sgn > 0 else -1
        raw.append((over, under, pt, sign, po, pu))
        passages[over.id].append((po, idx, True))
        passages[under.id].append((pu, idx, False))

    label_of: dict[int, int] = {}
    comp_passages: list[list[tuple[int, bool]]] = []
    for ci, comp in enumerate(l.components):
        seq = []
        for s in segs:
            if s.component != ci:
                continue
            for _, idx, is_over in sorted(passages[s.id]):
                if idx not in label_of:
                    label_of[idx] = len(label_of) + 1
                seq.append((idx, is_over))
        comp_passages.append(seq)

    # arcs: incoming arc at passage i is base+i, outgoing base+(i+1)%m
    arc_in: dict[tuple[int, bool], int] = {}
    arc_out: dict[tuple[int, bool], int] = {}
    base = 1
    for seq in comp_passages:
        m = len(seq)
        for i, key in enumerate(seq):
            arc_in[key] = base + i
            arc_out[key] = base + (i + 1) % m
        base += m

    crossings = []
    pd = []
    for idx, (over, under, pt, sign, po, pu) in enumerate(raw):
        crossings.append(Crossing(label_of[idx], over.id, under.id, pt, sign,
                                  over.component, under.component, po, pu))
        a_in, a_out = arc_in[(idx, False)], arc_out[(idx, False)]
        o_in, o_out = arc_in[(idx, True)], arc_out[(idx, True)]
        if sign > 0:
            pd.append((a_in, o_out, a_out, o_in))
        else:
            pd.append((a_in, o_in, a_out, o_out))
    crossings.sort(key=lambda c: c.label)
    gauss = tuple(
        tuple(label_of[idx] if is_over else -label_of[idx] for idx, is_over in seq)
        for seq in comp_passages
    )
    strands = tuple(
        tuple(flat[s.id][0] for s in segs if s.component == ci) for ci in range(len(l.components))
    )
    return Diagram(d, l.components, strands, tuple(crossings), tuple(sorted(pd)), gauss, len(segs))


def crossing_count(dg: Diagram) -> int:
    return len(dg.crossings)


@dataclass(frozen=True)
class LinkingMatrix:
    matrix: tuple[tuple[int, ...], ...]

    def __getitem__(self, ij):
        i, j = ij
        return self.matrix[i][j]

    def off_diagonal(self) -> dict[tuple[int, int], int]:
        n = len(self.matrix)
        return {(i, j): self.matrix[i][j] for i in range(n) for j in range(i + 1, n)}


def linking_matrix(dg: Diagram) -> LinkingMatrix:
    n = len(dg.components)
    twice = [[0] * n for _ in range(n)]
    for c in dg.crossings:
        i, j = c.over_component, c.under_component
        if i == j:
            twice[i][i] += 2 * c.sign
        else:
            twice[i][j] += c.sign
            twice[j][i] += c.sign
    for i in range(n):
        for j in range(n):
            if twice[i][j] % 2:  # pragma: no cover - closed curves cross evenly
                raise DiagramError(f"odd crossing sum between components {i} and {j}")
    return LinkingMatrix(tuple(tuple(x // 2 for x in row) for row in twice))


# --- SVG ---------------------------------------------------------------------

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf")


def render_svg(dg: Diagram, size: float = 400.0, margin: float = 20.0) -> str:
    """Deterministic SVG; each crossing gets one white gap marker over the under strand."""
    pts = [p for strand in dg.strands for p in strand]
    head = '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
    if not pts:
        return (head + f'width="{size:g}" height="{size:g}" viewBox="0 0 {size:g} {size:g}">\n'
                f'<rect x="0" y="0" width="{size:g}" height="{size:g}" fill="white"/>\n</svg>\n')
    xs = [float(p[0]) for p in pts]
    ys = [float(p[1]) for p in pts]
    span = max(max(xs) - min(xs), max(ys) - min(ys)) or 1.0
    k = (size - 2 * margin) / span
    x0, y1 = min(xs), max(ys)

    def tr(p):
        return margin + (float(p[0]) - x0) * k, margin + (y1 - float(p[1])) * k

    lines = [head + f'width="{size:g}" height="{size:g}" viewBox="0 0 {size:g} {size:g}">',
             f'<rect x="0" y="0" width="{size:g}" height="{size:g}" fill="white"/>']
    seg_ends = {}
    sid = 0
    for ci, strand in enumerate(dg.strands):
        colour = PALETTE[ci % len(PALETTE)]
        for i, p in enumerate(strand):
            q = strand[(i + 1) % len(strand)]
            sid += 1
            seg_ends[sid] = (tr(p), tr(q), colour)
            (ax, ay), (bx, by) = seg_ends[sid][:2]
            lines.append(f'<line class="strand" data-segment="{sid}" x1="{ax:.4f}" y1="{ay:.4f}" '
                         f'x2="{bx:.4f}" y2="{by:.4f}" stroke="{colour}" stroke-width="2"/>')
    gap = 6.0
    for c in dg.crossings:
        cx, cy = tr(c.point)
        (ax, ay), (bx, by), colour = seg_ends[c.over]
        length = ((bx - ax) ** 2 + (by - ay) ** 2) ** 0.5 or 1.0
        ux, uy = (bx - ax) / length * gap * 1.5, (by - ay) / length * gap * 1.5
        lines.append(f'<circle class="gap" data-crossing="{c.label}" cx="{cx:.4f}" cy="{cy:.4f}" '
                     f'r="{gap:g}" fill="white"/>')
        lines.append(f'<path class="over" d="M{cx - ux:.4f},{cy - uy:.4f} L{cx + ux:.4f},{cy + uy:.4f}" '
                     f'stroke="{colour}" stroke-width="2"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
