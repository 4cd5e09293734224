"""Links formed by edges of a triangulation's 1-skeleton."""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .complex import Triangulation


class LinkError(ValueError):
    pass


def canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate to start at the minimum vertex, then orient toward the smaller neighbour."""
    cycle = list(cycle)
    i = cycle.index(min(cycle))
    rot = cycle[i:] + cycle[:i]
    if len(rot) > 2 and rot[-1] < rot[1]:
        rot = [rot[0]] + rot[:0:-1]
    return tuple(rot)


@dataclass(frozen=True)
class EdgeLink:
    components: tuple[tuple[int, ...], ...]
    host: Triangulation

    @property
    def k(self) -> int:
        """Total number of edges."""
        return sum(len(c) for c in self.components)

    @property
    def vertices(self) -> set[int]:
        return {v for c in self.components for v in c}

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for comp in self.components:
            for i, v in enumerate(comp):
                out.append((v, comp[(i + 1) % len(comp)]))
        return out

    def to_json_obj(self) -> dict:
        return {"components": [list(c) for c in self.components]}


def check_link(t: Triangulation, cycles: Iterable[Sequence[int]]) -> EdgeLink:
    """Validate raw vertex cycles against ``t`` and return the canonical link."""
    comps = []
    owner: dict[int, int] = {}
    for ci, cyc in enumerate(cycles):
        cyc = [int(v) for v in cyc]
        if len(cyc) < 3:
            raise LinkError(f"component {ci} has {len(cyc)} vertices; at least 3 are needed")
        seen = set()
        for pos, v in enumerate(cyc):
            if v in seen:
                raise LinkError(f"component {ci} repeats vertex {v} at position {pos}")
            seen.add(v)
        for pos, v in enumerate(cyc):
            w = cyc[(pos + 1) % len(cyc)]
            if (min(v, w), max(v, w)) not in t.edges:
                raise LinkError(f"component {ci}: step {v}->{w} at position {pos} is not an edge")
        for v in cyc:
            if v in owner:
                raise LinkError(f"components {owner[v]} and {ci} share vertex {v}")
            owner[v] = ci
        comps.append(canonical_cycle(cyc))
    if not comps:
        raise LinkError("a link needs at least one component")
    comps.sort()
    return EdgeLink(tuple(comps), t)


def enumerate_cycles(t: Triangulation, max_len: int) -> list[tuple[int, ...]]:
    """All simple cycles of length 3..max_len in canonical form, sorted."""
    nbrs = {v: sorted(t.neighbors[v]) for v in t.vertices}
    out = []
    for s in t.vertices:
        path = [s]
        on_path = {s}

        def extend():
            last = path[-1]
            for w in nbrs[last]:
                if w == s and len(path) >= 3 and path[1] < path[-1]:
                    out.append(tuple(path))
                if w <= s or w in on_path or len(path) >= max_len:
                    continue
                path.append(w)
                on_path.add(w)
                extend()
                path.pop()
                on_path.discard(w)

        extend()
    out.sort()
    return out


def enumerate_links(t: Triangulation, max_components: int, max_total_edges: int) -> Iterator[EdgeLink]:
    """Every canonical link within the limits, once each, in lexicographic order."""
    if max_total_edges < 3 or max_components < 1:
        return
    cycles = enumerate_cycles(t, max_total_edges)
    # components are listed by increasing minimum vertex; cycles are sorted, so
    # the candidates for the next component start where that minimum grows
    firsts = [c[0] for c in cycles]

    def grow(chosen, used, total, start):
        for i in range(start, len(cycles)):
            c = cycles[i]
            if total + len(c) > max_total_edges or used.intersection(c):
                continue
            comps = chosen + [c]
            yield EdgeLink(tuple(comps), t)
            if len(comps) < max_components and total + len(c) + 3 <= max_total_edges:
                yield from grow(comps, used | set(c), total + len(c), bisect_right(firsts, c[0]))

    yield from grow([], set(), 0, 0)
