"""Ch-diagrams: marked singular link diagrams as combinatorial planar maps.

A diagram is a 4-valent planar map whose sites are classical crossings and
marked vertices, plus a set of free loops (closed circles meeting no site).
Each site stores its four incident edge identifiers in counterclockwise
order.  Conventions, fixed once here and relied on everywhere else:

* ``Crossing.slots = (a, b, c, d)`` counterclockwise; ``a, c`` form the
  under-strand and ``b, d`` the over-strand.  Rotating the tuple by two
  positions gives the same crossing.
* ``MarkedVertex.slots = (a, b, c, d)`` counterclockwise; the positive
  smoothing joins ``a-b`` and ``c-d``, the negative smoothing joins ``b-c``
  and ``d-a``.  Rotating by two gives the same marked vertex; rotating by
  one flips the marker.
* Faces are orbits of the dart map "arrive at slot k, leave at slot k+1";
  with slots counterclockwise this walks each face with the face on the
  right-hand side of every dart.

Edges are positive integers.  Every non-loop edge has exactly two ends,
each attached at a (site, slot) pair.  Free loops are edges with no ends.

The text format (one item per line)::

    # comment
    name: some diagram name
    meta: key=value
    X a b c d          crossing
    V a b c d          marked vertex
    O k                free loop

``canonical_text`` gives a label-independent normal form used for
structural equality, golden files and search transposition keys.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping


class ChCodeError(ValueError):
    """Syntax or structural error in a ch-code text or diagram."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = f"line {line}: {message}" if col is None else \
                f"line {line}, col {col}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Crossing:
    """A classical crossing; ``slots[0]``/``slots[2]`` carry the under-strand."""

    slots: tuple[int, int, int, int]

    def rotated(self, r):
        return Crossing(self.slots[r:] + self.slots[:r])


@dataclass(frozen=True)
class MarkedVertex:
    """A marked vertex; positive smoothing joins slots 0-1 and 2-3."""

    slots: tuple[int, int, int, int]

    def rotated(self, r):
        return MarkedVertex(self.slots[r:] + self.slots[:r])


Site = Crossing | MarkedVertex


@dataclass(frozen=True)
class ChDiagram:
    """An immutable ch-diagram.

    ``crossings`` and ``vertices`` hold the sites, ``free_loops`` the edge
    identifiers of crossingless circles.  ``meta`` carries atlas metadata
    and is ignored by all structural operations.
    """

    crossings: tuple[Crossing, ...] = ()
    vertices: tuple[MarkedVertex, ...] = ()
    free_loops: tuple[int, ...] = ()
    name: str | None = None
    meta: tuple[tuple[str, str], ...] = ()

    # -- basic views -------------------------------------------------------

    def sites(self) -> tuple[Site, ...]:
        """All sites, crossings first; site index = position in this tuple."""
        return self.crossings + self.vertices

    def is_crossing_site(self, s) -> bool:
        return s < len(self.crossings)

    def edges(self) -> set[int]:
        out = set(self.free_loops)
        for site in self.sites():
            out.update(site.slots)
        return out

    def arc_edges(self) -> set[int]:
        out = set()
        for site in self.sites():
            out.update(site.slots)
        return out

    def meta_dict(self) -> dict[str, str]:
        return dict(self.meta)

    def with_meta(self, name=None, meta=()) -> "ChDiagram":
        return replace(self, name=name, meta=tuple(meta))

    def strip_meta(self) -> "ChDiagram":
        return replace(self, name=None, meta=())


def edge_ends(d: ChDiagram) -> dict[int, list[tuple[int, int]]]:
    """Map edge -> list of its (site, slot) attachment points."""
    ends: dict[int, list[tuple[int, int]]] = {}
    for s, site in enumerate(d.sites()):
        for k, e in enumerate(site.slots):
            ends.setdefault(e, []).append((s, k))
    return ends


def attachment(d: ChDiagram) -> dict[tuple[int, int], int]:
    """Map (site, slot) -> edge."""
    return {(s, k): e
            for s, site in enumerate(d.sites())
            for k, e in enumerate(site.slots)}


# ---------------------------------------------------------------------------
# Faces of the rotation system


def faces(d: ChDiagram) -> list[tuple[tuple[int, int], ...]]:
    """Faces of the planar map, each a tuple of departing darts (site, slot).

    Free loops bound their own two faces and are not traced here.  The dart
    following an arrival at (s, k) departs at (s, (k + 1) % 4), which keeps
    the traced face on the right of every dart.
    """
    ends = edge_ends(d)
    other: dict[tuple[int, int], tuple[int, int]] = {}
    for e, pts in ends.items():
        if len(pts) == 2:
            other[pts[0]] = pts[1]
            other[pts[1]] = pts[0]
    out = []
    seen = set()
    for start in sorted(other):
        if start in seen:
            continue
        walk = []
        dart = start
        while dart not in seen:
            seen.add(dart)
            walk.append(dart)
            s, k = other[dart]
            dart = (s, (k + 1) % 4)
        out.append(tuple(walk))
    return out


def face_count(d: ChDiagram) -> int:
    return len(faces(d))


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    problems: tuple[str, ...]
    components: int

    def __str__(self):
        if self.ok:
            return f"valid; {self.components} component(s)"
        lines = [f"invalid; {self.components} component(s)"]
        lines += [f"  - {p}" for p in self.problems]
        return "\n".join(lines)


def site_components(d: ChDiagram) -> list[set[int]]:
    """Connected components of the 4-valent site graph (free loops excluded)."""
    n = len(d.sites())
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for pts in edge_ends(d).values():
        if len(pts) == 2:
            a, b = find(pts[0][0]), find(pts[1][0])
            if a != b:
                parent[a] = b
    groups: dict[int, set[int]] = {}
    for s in range(n):
        groups.setdefault(find(s), set()).add(s)
    return sorted(groups.values(), key=min)


def validate(d: ChDiagram) -> ValidationReport:
    """Check all structural invariants; problems are the payload, not raised."""
    problems = []
    counts: dict[int, int] = {}
    for site in d.sites():
        for e in site.slots:
            if e <= 0:
                problems.append(f"edge identifier {e} is not positive")
            counts[e] = counts.get(e, 0) + 1
    for e, c in sorted(counts.items()):
        if c != 2:
            problems.append(f"edge {e} has {c} slot occurrences (expected 2)")
    loop_seen = set()
    for e in d.free_loops:
        if e <= 0:
            problems.append(f"free loop identifier {e} is not positive")
        if e in counts:
            problems.append(f"free loop {e} also appears in a site slot")
        if e in loop_seen:
            problems.append(f"free loop {e} listed twice")
        loop_seen.add(e)

    comps = site_components(d)
    if not problems:
        # Euler formula V - E + F = 2 for each connected piece of the map.
        fs = faces(d)
        for comp in comps:
            v = len(comp)
            es = {e for s in comp for e in d.sites()[s].slots}
            f = sum(1 for face in fs if face and face[0][0] in comp)
            if v - len(es) + f != 2:
                problems.append(
                    f"component containing site {min(comp)} is non-planar: "
                    f"V={v} E={len(es)} F={f}")
    return ValidationReport(not problems, tuple(problems),
                            len(comps) + len(d.free_loops))


def check(d: ChDiagram) -> ChDiagram:
    """Return ``d`` if valid, else raise ``ChCodeError``."""
    rep = validate(d)
    if not rep.ok:
        raise ChCodeError("; ".join(rep.problems))
    return d


# ---------------------------------------------------------------------------
# Parsing and serialization


def _parse_site_line(kind, parts, lineno):
    if len(parts) != 4:
        raise ChCodeError(f"{kind} requires 4 slots, got {len(parts)}",
                          line=lineno)
    try:
        slots = tuple(int(p) for p in parts)
    except ValueError:
        raise ChCodeError(f"non-integer edge identifier in {kind} line",
                          line=lineno) from None
    return slots


def parse(text: str) -> ChDiagram:
    """Parse a single ch-code block; raises ``ChCodeError`` on any problem."""
    crossings = []
    vertices = []
    loops = []
    name = None
    meta = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("name:"):
            name = line[len("name:"):].strip()
            continue
        if line.startswith("meta:"):
            body = line[len("meta:"):].strip()
            if "=" not in body:
                raise ChCodeError("meta line must be 'meta: key=value'",
                                  line=lineno)
            key, _, value = body.partition("=")
            meta.append((key.strip(), value.strip()))
            continue
        parts = line.split()
        kind, args = parts[0], parts[1:]
        if kind == "X":
            crossings.append(Crossing(_parse_site_line("crossing", args, lineno)))
        elif kind == "V":
            vertices.append(MarkedVertex(_parse_site_line("marked vertex",
                                                          args, lineno)))
        elif kind == "O":
            if len(args) != 1:
                raise ChCodeError("free loop requires 1 identifier",
                                  line=lineno)
            try:
                loops.append(int(args[0]))
            except ValueError:
                raise ChCodeError("non-integer free loop identifier",
                                  line=lineno) from None
        else:
            raise ChCodeError(f"unknown line kind {kind!r}", line=lineno, col=1)
    d = ChDiagram(tuple(crossings), tuple(vertices), tuple(loops),
                  name=name, meta=tuple(meta))
    return check(d)


def parse_blocks(text: str) -> list[ChDiagram]:
    """Parse a file of blank-line-separated ch-code blocks."""
    blocks = []
    current: list[str] = []
    for raw in text.splitlines():
        if raw.strip():
            current.append(raw)
        elif current:
            blocks.append("\n".join(current))
            current = []
    if current:
        blocks.append("\n".join(current))
    return [parse(b) for b in blocks]


def body_lines(d: ChDiagram) -> list[str]:
    lines = [f"X {' '.join(map(str, c.slots))}" for c in d.crossings]
    lines += [f"V {' '.join(map(str, v.slots))}" for v in d.vertices]
    lines += [f"O {e}" for e in d.free_loops]
    return lines


def serialize(d: ChDiagram) -> str:
    """Canonical text of ``d`` with its name/meta header preserved."""
    c = canonical_form(d)
    lines = []
    if d.name is not None:
        lines.append(f"name: {d.name}")
    for k, v in d.meta:
        lines.append(f"meta: {k}={v}")
    lines += body_lines(c)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Canonical form


def _site_key(site):
    # Crossings sort before vertices; slot tuple breaks ties.
    return (0 if isinstance(site, Crossing) else 1, site.slots)


def _bfs_labeling(d, start, start_rot):
    """Relabel the component reachable from ``start`` by breadth-first walk.

    Returns (canonical line list, set of visited sites) or None when the
    start rotation is redundant.  At every site the tuple rotation (0 or 2)
    is forced by the slot of first arrival, so the walk is deterministic.
    """
    sites = d.sites()
    att = attachment(d)
    ends = edge_ends(d)
    label: dict[int, int] = {}
    rot: dict[int, int] = {start: start_rot}
    order = [start]
    queue = [start]
    while queue:
        s = queue.pop(0)
        r = rot[s]
        for i in range(4):
            k = (r + i) % 4
            e = sites[s].slots[k]
            if e not in label:
                label[e] = len(label) + 1
            a, b = ends[e]
            s2, k2 = b if a == (s, k) else a
            if s2 not in rot:
                # Rotate (by 0 or 2) so the arrival slot lands on 0 or 1.
                rot[s2] = k2 - (k2 % 2)
                order.append(s2)
                queue.append(s2)
    lines = []
    for s in order:
        site = sites[s].rotated(rot[s])
        slots = tuple(label[e] for e in site.slots)
        kind = "X" if isinstance(site, Crossing) else "V"
        lines.append((kind, slots))
    return lines, set(order), label


def _canonical_component(d, comp):
    """Minimal (lines, labels) over all BFS starts/rotations in ``comp``."""
    best = None
    for start in sorted(comp):
        for r in (0, 2):
            lines, _, label = _bfs_labeling(d, start, r)
            key = sorted((k, s) for k, s in lines)
            if best is None or key < best[0]:
                best = (key, label)
    return best


def canonical_form(d: ChDiagram) -> ChDiagram:
    """Relabel edges canonically; independent of the input labeling."""
    comps = site_components(d)
    pieces = [_canonical_component(d, comp) for comp in comps]
    pieces.sort(key=lambda p: p[0])
    # Offset each component's local labels into one global range.
    offset = 0
    out_x, out_v = [], []
    for key, label in pieces:
        for kind, slots in key:
            slots = tuple(s + offset for s in slots)
            if kind == "X":
                out_x.append(Crossing(slots))
            else:
                out_v.append(MarkedVertex(slots))
        offset += len(label)
    loops = tuple(range(offset + 1, offset + 1 + len(d.free_loops)))
    return ChDiagram(tuple(out_x), tuple(out_v), loops,
                     name=d.name, meta=d.meta)


def canonical_text(d: ChDiagram) -> str:
    """Label-independent normal form; equal texts mean equal diagrams."""
    return "\n".join(body_lines(canonical_form(d)))


def structurally_equal(a: ChDiagram, b: ChDiagram) -> bool:
    return canonical_text(a) == canonical_text(b)


# ---------------------------------------------------------------------------
# Basic invariants


def ch_index(d: ChDiagram) -> int:
    """Number of crossings plus number of marked vertices."""
    return len(d.crossings) + len(d.vertices)


def relabel(d: ChDiagram, mapping: Mapping[int, int]) -> ChDiagram:
    """Apply an injective edge relabeling (used by tests and the builder)."""
    def m(e):
        return mapping.get(e, e)

    return ChDiagram(
        tuple(Crossing(tuple(m(e) for e in c.slots)) for c in d.crossings),
        tuple(MarkedVertex(tuple(m(e) for e in v.slots)) for v in d.vertices),
        tuple(m(e) for e in d.free_loops),
        name=d.name, meta=d.meta)
