"""Build ch-diagrams from Morse-position rail words.

A word is a bottom-to-top sequence of letters acting on a list of open
"rails" (strand ends):

* ``b i``  birth: insert a cap ``∪`` whose two new rails sit at positions
  ``i`` and ``i+1``;
* ``d i``  death: close rails ``i`` and ``i+1`` with a cup ``∩``;
* ``x i s`` crossing between rails ``i`` and ``i+1``; ``s`` is ``+`` when
  the strand running from bottom-left to top-right passes over, ``-``
  when it passes under;
* ``v i m`` marked vertex between rails ``i`` and ``i+1``; ``m`` is ``h``
  when the positive smoothing is the horizontal pair ``≍`` (rails joined
  bottom-to-bottom and top-to-top), ``v`` when the positive smoothing is
  the vertical pair ``)(``.

Words compile to valid planar diagrams by construction, which makes them
convenient both for transcribing atlas pictures and for generating random
diagrams in property tests.

Compact string form: letters separated by spaces, e.g. ``"b0 b1 x1+ v0h
d1 d0"``.
"""

from __future__ import annotations

import re

from .chcode import ChDiagram, Crossing, MarkedVertex, check

_TOKEN = re.compile(r"^([bdxv])(\d+)([+\-hv]?)$")


class WordError(ValueError):
    pass


class _Arcs:
    """Union-find over arc pieces, tracking site attachments per arc."""

    def __init__(self):
        self.parent = {}
        self.att = {}

    def fresh(self):
        k = len(self.parent) + 1
        self.parent[k] = k
        self.att[k] = []
        return k

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return ra
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.att[ra] += self.att[rb]
        return ra

    def attach(self, a, site, slot):
        self.att[self.find(a)].append((site, slot))


def build(letters, name=None, meta=()) -> ChDiagram:
    """Compile a sequence of letter tuples to a validated ``ChDiagram``.

    Letters are ``("b", i)``, ``("d", i)``, ``("x", i, sign)`` with sign
    ``+1``/``-1``, and ``("v", i, marker)`` with marker ``"h"``/``"v"``.
    """
    arcs = _Arcs()
    rails: list[int] = []
    sites: list[tuple[str, tuple[int, int, int, int]]] = []
    loops: list[int] = []

    def need(i, width=2):
        if i < 0 or i + width - 1 >= len(rails):
            raise WordError(f"letter position {i} out of range for "
                            f"{len(rails)} rails")

    for letter in letters:
        op, i = letter[0], letter[1]
        if op == "b":
            if i < 0 or i > len(rails):
                raise WordError(f"birth position {i} out of range")
            a = arcs.fresh()
            rails[i:i] = [a, a]
        elif op == "d":
            need(i)
            p, q = arcs.find(rails[i]), arcs.find(rails[i + 1])
            del rails[i:i + 2]
            if p == q:
                if arcs.att[p]:
                    raise WordError("cup closed an arc that still has "
                                    "attachments on open rails")
                loops.append(p)
            else:
                arcs.union(p, q)
        elif op in ("x", "v"):
            need(i)
            sw, se = rails[i], rails[i + 1]
            nw, ne = arcs.fresh(), arcs.fresh()
            s = len(sites)
            variant = letter[2]
            if op == "x":
                # CCW slot order (SE, NE, NW, SW) puts the SW-NE strand over.
                quad = (se, ne, nw, sw) if variant > 0 else (sw, se, ne, nw)
                sites.append(("X", quad))
            else:
                quad = (sw, se, ne, nw) if variant == "h" else (se, ne, nw, sw)
                sites.append(("V", quad))
            for slot, e in enumerate(sites[-1][1]):
                arcs.attach(e, s, slot)
            rails[i] = nw
            rails[i + 1] = ne
        else:
            raise WordError(f"unknown letter {op!r}")
    if rails:
        raise WordError(f"{len(rails)} rails left open at end of word")

    # Resolve arc classes to final edge ids and rewrite the site tuples.
    final = {}
    for a in arcs.parent:
        r = arcs.find(a)
        if r not in final:
            final[r] = len(final) + 1
    crossings, vertices = [], []
    for kind, quad in sites:
        quad = tuple(final[arcs.find(e)] for e in quad)
        if kind == "X":
            crossings.append(Crossing(quad))
        else:
            vertices.append(MarkedVertex(quad))
    loop_ids = tuple(final[arcs.find(a)] for a in loops)

    d = ChDiagram(tuple(crossings), tuple(vertices), loop_ids,
                  name=name, meta=tuple(meta))
    return check(d)


def parse_letters(word: str):
    """Parse the compact string form into letter tuples."""
    letters = []
    for tok in word.split():
        m = _TOKEN.match(tok)
        if not m:
            raise WordError(f"bad token {tok!r}")
        op, i, suffix = m.group(1), int(m.group(2)), m.group(3)
        if op in "bd":
            if suffix:
                raise WordError(f"unexpected suffix on {tok!r}")
            letters.append((op, i))
        elif op == "x":
            if suffix not in "+-" or not suffix:
                raise WordError(f"crossing token {tok!r} needs + or -")
            letters.append((op, i, 1 if suffix == "+" else -1))
        else:
            if suffix not in "hv" or not suffix:
                raise WordError(f"vertex token {tok!r} needs h or v")
            letters.append((op, i, suffix))
    return letters


def from_word(word: str, name=None, meta=()) -> ChDiagram:
    """Build a diagram from the compact string form."""
    return build(parse_letters(word), name=name, meta=meta)


def random_word(rng, max_sites=6, max_rails=6, vertex_prob=0.35):
    """Generate a random valid word; used by property tests."""
    letters = [("b", 0)]
    rails = 2
    sites = 0
    while sites < max_sites or rails > 0:
        choices = []
        if rails >= 2:
            choices += ["d"] * 2
            if sites < max_sites:
                choices += ["x", "v"] * 3
        if rails < max_rails and sites < max_sites:
            choices += ["b"]
        if not choices:
            break
        op = rng.choice(choices)
        if op == "b":
            letters.append(("b", rng.randrange(rails + 1)))
            rails += 2
        elif op == "d":
            letters.append(("d", rng.randrange(rails - 1)))
            rails -= 2
        elif op == "x":
            letters.append(("x", rng.randrange(rails - 1),
                            rng.choice([1, -1])))
            sites += 1
        else:
            letters.append(("v", rng.randrange(rails - 1),
                            rng.choice(["h", "v"])))
            sites += 1
    return letters


def random_diagram(rng, max_sites=6, max_rails=6) -> ChDiagram:
    return build(random_word(rng, max_sites=max_sites, max_rails=max_rails))
