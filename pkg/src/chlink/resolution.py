"""Resolutions of marked vertices, strand tracing, and the splice engine.

``splice`` is the one structural rewrite primitive shared by resolutions
and the Reidemeister move engine: remove a set of sites and reconnect
selected pairs of edge-ends, merging the glued arcs.  A merged arc keeps
the smallest constituent edge identifier, which keeps traces
deterministic; arcs that close up away from all surviving sites become
free loops.
"""

from __future__ import annotations

from enum import Enum

from .chcode import ChDiagram, Crossing, MarkedVertex, edge_ends


class ResolutionSign(Enum):
    NEGATIVE = -1
    POSITIVE = 1

    def __str__(self):
        return "+" if self is ResolutionSign.POSITIVE else "-"


NEGATIVE = ResolutionSign.NEGATIVE
POSITIVE = ResolutionSign.POSITIVE


def splice(d: ChDiagram, removed, joins):
    """Remove ``removed`` sites, gluing edge-ends as prescribed by ``joins``.

    ``joins`` lists pairs of (site, slot) ends, all at removed sites; every
    slot of every removed site must appear in exactly one join.  Returns
    ``(diagram, edge_map)`` where ``edge_map`` sends each old edge to the
    arc that absorbed it (free loops map to themselves).
    """
    removed = set(removed)
    sites = d.sites()
    ends = edge_ends(d)
    partner = {}
    for (p, q) in joins:
        partner[p] = q
        partner[q] = p

    def other_end(e, end):
        a, b = ends[e]
        return b if end == a else a

    at = {(s, k): site.slots[k]
          for s, site in enumerate(sites) for k in range(4)}
    visited = set()
    new_attach = {}
    edge_map = {e: e for e in d.free_loops}

    surviving_ends = sorted(
        (s, k) for s, site in enumerate(sites) if s not in removed
        for k in range(4))
    for start in surviving_ends:
        if start in visited:
            continue
        chain = []
        end = start
        while True:
            visited.add(end)
            e = at[end]
            chain.append(e)
            nxt = other_end(e, end)
            visited.add(nxt)
            if nxt[0] not in removed:
                break
            end = partner[nxt]
        new_id = min(chain)
        for e in chain:
            edge_map[e] = new_id
        new_attach[start] = new_id
        new_attach[nxt] = new_id

    # Leftover chains never touch a surviving site: they close into loops.
    loops = list(d.free_loops)
    for s in sorted(removed):
        for k in range(4):
            end = (s, k)
            if end in visited:
                continue
            chain = []
            while end not in visited:
                visited.add(end)
                e = at[end]
                chain.append(e)
                nxt = other_end(e, end)
                visited.add(nxt)
                end = partner[nxt]
            new_id = min(chain)
            for e in chain:
                edge_map[e] = new_id
            loops.append(new_id)

    keep = [s for s in range(len(sites)) if s not in removed]
    crossings, vertices = [], []
    for s in keep:
        quad = tuple(new_attach[(s, k)] for k in range(4))
        if isinstance(sites[s], Crossing):
            crossings.append(Crossing(quad))
        else:
            vertices.append(MarkedVertex(quad))
    out = ChDiagram(tuple(crossings), tuple(vertices), tuple(sorted(loops)))
    return out, edge_map


_POS_JOINS = ((0, 1), (2, 3))
_NEG_JOINS = ((1, 2), (3, 0))


def resolve(d: ChDiagram, sign: ResolutionSign):
    """Smooth every marked vertex; positive joins slots 0-1 and 2-3.

    Returns ``(link_diagram, edge_map)``.  The result has no vertices;
    crossings are untouched except for arc renaming.
    """
    nc = len(d.crossings)
    removed = range(nc, nc + len(d.vertices))
    pattern = _POS_JOINS if sign is POSITIVE else _NEG_JOINS
    joins = []
    for s in removed:
        for (i, j) in pattern:
            joins.append(((s, i), (s, j)))
    return splice(d, removed, joins)


def resolve_partial(d: ChDiagram, vertex_indices, sign: ResolutionSign):
    """Smooth only the given vertices (indices into ``d.vertices``)."""
    nc = len(d.crossings)
    removed = [nc + i for i in vertex_indices]
    pattern = _POS_JOINS if sign is POSITIVE else _NEG_JOINS
    joins = []
    for s in removed:
        for (i, j) in pattern:
            joins.append(((s, i), (s, j)))
    return splice(d, removed, joins)


def _strands(d: ChDiagram, through_vertices: bool):
    """Partition edges into closed strands via pass-throughs at sites.

    At a crossing the under-strand connects slots 0-2 and the over-strand
    slots 1-3; the same pairing applies at marked vertices when
    ``through_vertices`` is set (tracing the underlying immersed curves).
    """
    ends = edge_ends(d)
    nc = len(d.crossings)
    out = []
    seen = set()
    for e0 in sorted(ends):
        if e0 in seen:
            continue
        strand = []
        end = ends[e0][0]
        e = e0
        # Walk forward until the strand closes.
        while e not in seen:
            seen.add(e)
            strand.append(e)
            s, k = end
            if s >= nc and not through_vertices:
                raise ValueError("strand tracing hit a marked vertex")
            cont = (s, (k + 2) % 4)
            e = d.sites()[s].slots[cont[1]]
            a, b = ends[e]
            end = b if cont == a else a
        out.append(frozenset(strand))
    for loop in d.free_loops:
        out.append(frozenset([loop]))
    return out


def circles(d: ChDiagram):
    """Closed strands of a vertex-free diagram, free loops included."""
    if d.vertices:
        raise ValueError("circles() requires a vertex-free diagram")
    return _strands(d, through_vertices=False)


def circle_count(d: ChDiagram) -> int:
    return len(circles(d))


def curves(d: ChDiagram):
    """Underlying immersed curves (strands traced through vertices too)."""
    return _strands(d, through_vertices=True)
