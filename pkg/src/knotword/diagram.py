"""
Crossing-ball diagrams and the curves a surface cuts on ``S^2_+`` and ``S^2_-``.

Conventions used throughout:

* A bubble has four corners ``0..3`` in counter-clockwise order, where the
  strands of the projection meet it.  Corners 0 and 2 belong to the
  overstrand, 1 and 3 to the understrand.  Quadrant ``k`` is the stretch of
  the equator between corners ``k`` and ``k+1``.
* Every saddle in a bubble crosses the equator once in each quadrant.  A
  point of the surface on the equator is therefore a pair
  ``(saddle, quadrant)``.
* On the upper hemisphere a saddle leaves two arcs, one around corner 1
  (quadrants 0 and 1) and one around corner 3 (quadrants 2 and 3).  On the
  lower hemisphere its arcs go around corners 2 and 0.
* Within a quadrant, walking from its even corner to its odd corner, the
  saddles are met from the top of the stack to the bottom.

A curve is listed as its cyclic sequence of saddle arcs; the type-I arc
after arc ``k`` runs from the end point of arc ``k`` to the start point of
arc ``k+1``.
"""

from __future__ import annotations

import itertools
import json
import re
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .wordcore import CyclicWord, D, Letter, P, R, S

__all__ = [
    "DiagramError", "MalformedDocument", "DanglingReference", "NonPlanarRotation",
    "SideConflict", "MissingSideData",
    "Bubble", "Strand", "CrossingBallDiagram", "SaddleArc", "Curve", "Puncture",
    "SurfacePresentation", "ConditionResult", "NormalPositionReport",
    "parse_presentation", "load_presentation", "dump_presentation",
    "label_curve", "check_normal_position", "dual_consistency",
    "curve_sides", "diagram_from_pd", "presentation_from_arcs", "face_points",
    "PLUS_PAIRS", "MINUS_PAIRS",
]

PLUS_PAIRS = (frozenset({0, 1}), frozenset({2, 3}))
MINUS_PAIRS = (frozenset({1, 2}), frozenset({3, 0}))
_PAIRS = {"+": PLUS_PAIRS, "-": MINUS_PAIRS}


class DiagramError(ValueError):
    kind = "diagram-error"


class MalformedDocument(DiagramError):
    kind = "malformed-document"


class DanglingReference(DiagramError):
    kind = "dangling-reference"


class NonPlanarRotation(DiagramError):
    kind = "non-planar-rotation-system"


class SideConflict(DiagramError):
    kind = "side-conflict"


class MissingSideData(DiagramError):
    kind = "missing-side-data"


# --------------------------------------------------------------------------
# the projection

@dataclass(frozen=True)
class Bubble:
    id: str
    corners: tuple[str, str, str, str]


@dataclass(frozen=True)
class Strand:
    id: str
    ends: tuple[tuple[str, int], tuple[str, int]]


@dataclass(frozen=True)
class FaceSide:
    """One piece of a face boundary: a strand or a bubble quadrant.

    Strands carry the direction they are walked in; quadrants are always
    walked clockwise, from corner ``q+1`` to corner ``q``.
    """
    kind: str
    ref: str
    index: int = 0


class CrossingBallDiagram:
    """A connected 4-valent projection with its rotation system."""

    def __init__(self, bubbles: Iterable[Bubble], strands: Iterable[Strand]):
        self.bubbles = {b.id: b for b in bubbles}
        self.strands = {s.id: s for s in strands}
        self._check_references()
        self.faces = self._trace_faces()
        self.quadrant_face = {}
        self.strand_faces = defaultdict(list)
        for k, face in enumerate(self.faces):
            for side in face:
                if side.kind == "q":
                    self.quadrant_face[(side.ref, side.index)] = k
                else:
                    self.strand_faces[side.ref].append(k)
        self._check_planar()

    def _check_references(self):
        seen = {}
        for b in self.bubbles.values():
            if len(b.corners) != 4:
                raise MalformedDocument(f"bubble {b.id} needs four corners")
            for c, sid in enumerate(b.corners):
                if sid not in self.strands:
                    raise DanglingReference(f"bubble {b.id} corner {c} names unknown strand {sid!r}")
                seen.setdefault(sid, []).append((b.id, c))
        for s in self.strands.values():
            for bid, c in s.ends:
                if bid not in self.bubbles:
                    raise DanglingReference(f"strand {s.id} ends on unknown bubble {bid!r}")
                if self.bubbles[bid].corners[c] != s.id:
                    raise DanglingReference(f"strand {s.id} and bubble {bid} disagree at corner {c}")
            if sorted(seen.get(s.id, [])) != sorted(tuple(e) for e in s.ends):
                raise DanglingReference(f"strand {s.id} is not attached at both ends")

    def other_end(self, bid: str, corner: int) -> tuple[str, int, bool]:
        s = self.strands[self.bubbles[bid].corners[corner]]
        a, b = s.ends
        if a == (bid, corner) and b != a:
            return b[0], b[1], True
        if b == (bid, corner) and a != b:
            return a[0], a[1], False
        # A strand from a corner back to the same corner cannot happen.
        raise MalformedDocument(f"strand {s.id} is degenerate")

    def _trace_faces(self):
        faces = []
        used = set()
        for bid in sorted(self.bubbles):
            for c in range(4):
                if (bid, c) in used:
                    continue
                face = []
                cur = (bid, c)
                while cur not in used:
                    used.add(cur)
                    nb, nc, forward = self.other_end(*cur)
                    face.append(FaceSide("s", self.bubbles[cur[0]].corners[cur[1]], int(forward)))
                    q = (nc - 1) % 4
                    face.append(FaceSide("q", nb, q))
                    cur = (nb, q)
                faces.append(tuple(face))
        return faces

    def _check_planar(self):
        if not self.bubbles:
            return
        v, e, f = len(self.bubbles), len(self.strands), len(self.faces)
        if not self.is_connected():
            raise NonPlanarRotation("projection graph is not connected")
        if v - e + f != 2:
            raise NonPlanarRotation(f"rotation system gives V-E+F = {v - e + f}, not 2")

    def is_connected(self) -> bool:
        if not self.bubbles:
            return True
        start = next(iter(self.bubbles))
        seen = {start}
        todo = [start]
        while todo:
            b = todo.pop()
            for c in range(4):
                nb, _, _ = self.other_end(b, c)
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        return len(seen) == len(self.bubbles)

    def adjacent_faces(self, f: int, g: int) -> bool:
        """Faces sharing a strand."""
        return f != g and any(set(fs) == {f, g} for fs in self.strand_faces.values())

    def link_components(self, sign: str) -> list[frozenset[str]]:
        """Strands grouped into the arcs of the link lying on ``S^2_sign``.

        On the upper sphere the overstrand passes over the bubble, so the
        strands at corners 0 and 2 join up; below, those at 1 and 3 do.
        """
        parent = {s: s for s in self.strands}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        offset = 0 if sign == "+" else 1
        for b in self.bubbles.values():
            x, y = b.corners[offset], b.corners[offset + 2]
            parent[find(x)] = find(y)
        groups = defaultdict(set)
        for s in self.strands:
            groups[find(s)].add(s)
        return sorted((frozenset(g) for g in groups.values()), key=sorted)


# --------------------------------------------------------------------------
# the surface

@dataclass(frozen=True)
class SaddleArc:
    """A type-II arc: the curve passes ``saddle`` from quadrant ``start``
    to quadrant ``end``.  ``side`` says whether the bubble is on the left
    (``"L"``) or right (``"R"``) of the curve."""
    saddle: str
    start: int | None = None
    end: int | None = None
    side: str | None = None

    @property
    def has_geometry(self) -> bool:
        return self.start is not None

    def __str__(self):
        out = self.saddle
        if self.has_geometry:
            out += f":{self.start}>{self.end}"
        if self.side is not None:
            out += f":{self.side}"
        return out


_ARC = re.compile(r"^(?P<saddle>[^:\s]+)(?::(?P<a>[0-3])>(?P<b>[0-3]))?(?::(?P<side>[LR]))?$")


def _parse_arc(token: str, sign: str) -> SaddleArc:
    m = _ARC.match(token.strip())
    if m is None:
        raise MalformedDocument(f"cannot read saddle arc {token!r}")
    saddle, side = m["saddle"], m["side"]
    if m["a"] is None:
        return SaddleArc(saddle, side=side)
    a, b = int(m["a"]), int(m["b"])
    if frozenset({a, b}) not in _PAIRS[sign]:
        raise MalformedDocument(f"arc {token!r} does not run around a corner on the {sign} side")
    derived = "L" if b == (a + 1) % 4 else "R"
    if side is not None and side != derived:
        raise SideConflict(f"arc {token!r} is marked {side} but runs {'counter-' if derived == 'L' else ''}clockwise")
    return SaddleArc(saddle, a, b, derived)


@dataclass(frozen=True)
class Curve:
    id: str
    sign: str
    arcs: tuple[SaddleArc, ...]

    def points(self, k: int) -> tuple[tuple, tuple]:
        """End points of the type-I arc following saddle arc ``k``."""
        a = self.arcs[k]
        b = self.arcs[(k + 1) % len(self.arcs)]
        return (a.saddle, a.end), (b.saddle, b.start)


@dataclass(frozen=True)
class Puncture:
    curve: str
    arc: int
    count: int
    strands: tuple[str, ...] = ()


@dataclass
class SurfacePresentation:
    curves_plus: list[Curve]
    curves_minus: list[Curve]
    stacks: dict[str, tuple[str, ...]]
    punctures: list[Puncture] = field(default_factory=list)
    boundary: str = "closed"
    diagram: CrossingBallDiagram | None = None
    name: str = ""
    sides: dict = field(default_factory=dict)

    def __post_init__(self):
        self.saddle_bubble = {}
        for bid, stack in self.stacks.items():
            for s in stack:
                if s in self.saddle_bubble:
                    raise DanglingReference(f"saddle {s} is stacked in two bubbles")
                self.saddle_bubble[s] = bid
        self._by_id = {}
        for c in self.curves_plus + self.curves_minus:
            if c.id in self._by_id:
                raise MalformedDocument(f"duplicate curve id {c.id!r}")
            self._by_id[c.id] = c
        self._validate()

    # ----------------------------------------------------------- lookups
    def curve(self, cid: str) -> Curve:
        return self._by_id[cid]

    def curves(self, sign: str | None = None) -> list[Curve]:
        if sign is None:
            return self.curves_plus + self.curves_minus
        return self.curves_plus if sign == "+" else self.curves_minus

    def bubble_of(self, saddle: str) -> str:
        return self.saddle_bubble[saddle]

    def depth(self, saddle: str, sign: str) -> int:
        """Saddles beneath ``saddle`` as seen from the ``sign`` ball."""
        stack = self.stacks[self.saddle_bubble[saddle]]
        i = stack.index(saddle)
        return i if sign == "+" else len(stack) - 1 - i

    @property
    def saddles(self) -> list[str]:
        return [s for b in sorted(self.stacks) for s in self.stacks[b]]

    @property
    def has_geometry(self) -> bool:
        return self.diagram is not None and all(a.has_geometry for c in self.curves() for a in c.arcs)

    def punctures_on(self, cid: str) -> dict[int, Puncture]:
        return {p.arc: p for p in self.punctures if p.curve == cid}

    def quadrant_points(self, bid: str, q: int) -> list[tuple[str, int]]:
        """Points of quadrant ``q`` in counter-clockwise order."""
        stack = self.stacks.get(bid, ())
        order = stack[::-1] if q % 2 == 0 else stack
        return [(s, q) for s in order]

    def type_one_arcs(self, sign: str) -> dict[frozenset, tuple[str, int]]:
        """Each type-I arc (as its pair of end points) with the curve and
        position it follows on the ``sign`` sphere."""
        out = {}
        for c in self.curves(sign):
            for k in range(len(c.arcs)):
                out[frozenset(c.points(k))] = (c.id, k)
        return out

    def arc_strands(self) -> dict[frozenset, tuple[tuple, tuple[str, ...]]]:
        """Punctured type-I arcs, keyed by end points, with the point the
        strand list starts from and the strands in walking order."""
        out = {}
        for p in self.punctures:
            c = self.curve(p.curve)
            if p.strands and c.arcs and c.arcs[0].has_geometry:
                pts = c.points(p.arc)
                out[frozenset(pts)] = (pts[0], p.strands)
        return out

    # --------------------------------------------------------- validation
    def _validate(self):
        for sign in "+-":
            used = {}
            uses = defaultdict(list)
            for c in self.curves(sign):
                if c.sign != sign:
                    raise MalformedDocument(f"curve {c.id} listed on the wrong side")
                for a in c.arcs:
                    if a.saddle not in self.saddle_bubble:
                        raise DanglingReference(f"curve {c.id} meets unknown saddle {a.saddle!r}")
                    # A saddle has two arcs on each side.
                    uses[a.saddle].append(c.id)
                    if len(uses[a.saddle]) > 2:
                        raise DanglingReference(
                            f"saddle {a.saddle} is met {len(uses[a.saddle])} times on the {sign} side "
                            f"({', '.join(uses[a.saddle])})")
                    if not a.has_geometry:
                        continue
                    key = (a.saddle, frozenset({a.start, a.end}))
                    if key in used:
                        raise DanglingReference(
                            f"saddle arc {a} is referenced twice on the {sign} side "
                            f"({used[key]} and {c.id})")
                    used[key] = c.id
                geo = [a.has_geometry for a in c.arcs]
                if any(geo) and not all(geo):
                    raise MalformedDocument(f"curve {c.id} mixes arcs with and without quadrants")
                if any(geo) and self.diagram is None:
                    raise MalformedDocument(f"curve {c.id} gives quadrants but there is no diagram")
        for cid, both in self.sides.items():
            if cid not in self._by_id:
                raise DanglingReference(f"sides given for unknown curve {cid!r}")
            for side, others in both.items():
                if side not in ("L", "R"):
                    raise MalformedDocument(f"side {side!r} of curve {cid} is not L or R")
                for o in others:
                    if o not in self._by_id or self._by_id[o].sign != self._by_id[cid].sign:
                        raise DanglingReference(f"curve {cid} lists {o!r}, not a curve of its sphere")
        for p in self.punctures:
            if p.curve not in self._by_id:
                raise DanglingReference(f"puncture on unknown curve {p.curve!r}")
            n = len(self.curve(p.curve).arcs)
            if not 0 <= p.arc < max(n, 1):
                raise DanglingReference(f"puncture on curve {p.curve} names arc {p.arc}")
            if p.count < 1:
                raise MalformedDocument("puncture count must be positive")
            if self.diagram is not None:
                for sid in p.strands:
                    if sid not in self.diagram.strands:
                        raise DanglingReference(f"puncture crosses unknown strand {sid!r}")
        if self.diagram is not None:
            for bid in self.stacks:
                if bid not in self.diagram.bubbles:
                    raise DanglingReference(f"saddle stack for unknown bubble {bid!r}")
            if self.has_geometry:
                self._check_faces()

    def _check_faces(self):
        # Both ends of an unpunctured type-I arc must sit on one face, and a
        # punctured one must walk from face to face across its strands.
        dg = self.diagram
        for c in self.curves():
            if not c.arcs:
                continue
            punct = self.punctures_on(c.id)
            for k in range(len(c.arcs)):
                (s1, q1), (s2, q2) = c.points(k)
                f = dg.quadrant_face[(self.bubble_of(s1), q1)]
                g = dg.quadrant_face[(self.bubble_of(s2), q2)]
                for sid in (punct[k].strands if k in punct else ()):
                    faces = dg.strand_faces[sid]
                    if f not in faces:
                        raise MalformedDocument(f"curve {c.id} arc {k} cannot cross strand {sid} from face {f}")
                    f = faces[1] if faces[0] == f else faces[0]
                if f != g:
                    raise MalformedDocument(f"type-I arc {k} of curve {c.id} does not lie on one face")


# --------------------------------------------------------------------------
# document format

def _need(obj, key, kind=dict):
    if key not in obj:
        raise MalformedDocument(f"missing key {key!r}")
    if not isinstance(obj[key], kind):
        raise MalformedDocument(f"key {key!r} has the wrong type")
    return obj[key]


def parse_presentation(document: str | dict) -> SurfacePresentation:
    """Build a presentation from the JSON document format.

    >>> p = parse_presentation('{"surface": {"saddles": {}, "curves_plus": [], "curves_minus": []}}')
    >>> p.curves()
    []
    """
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise MalformedDocument(f"not valid JSON: {exc}") from None
    if not isinstance(document, dict):
        raise MalformedDocument("top level must be an object")
    meta = document.get("meta", {})
    boundary = meta.get("boundary", "closed")
    if boundary not in ("closed", "meridional"):
        raise MalformedDocument(f"unknown boundary type {boundary!r}")
    diagram = None
    if "diagram" in document:
        d = document["diagram"]
        try:
            bubbles = [Bubble(str(b["id"]), tuple(b["corners"])) for b in _need(d, "bubbles", list)]
            strands = [Strand(str(s["id"]), tuple((str(e[0]), int(e[1])) for e in s["ends"]))
                       for s in _need(d, "strands", list)]
        except (KeyError, TypeError, IndexError, ValueError) as exc:
            raise MalformedDocument(f"bad diagram entry: {exc}") from None
        for s in strands:
            if len(s.ends) != 2 or any(not 0 <= c < 4 for _, c in s.ends):
                raise MalformedDocument(f"strand {s.id} needs two (bubble, corner) ends")
        diagram = CrossingBallDiagram(bubbles, strands)
    surf = _need(document, "surface")
    stacks_raw = surf.get("saddles", {})
    if not isinstance(stacks_raw, dict):
        raise MalformedDocument("saddles must map bubble ids to stacks")
    stacks = {str(b): tuple(str(s) for s in v) for b, v in stacks_raw.items()}

    def curves(key, sign):
        out = []
        for c in surf.get(key, []):
            if not isinstance(c, dict) or "id" not in c:
                raise MalformedDocument(f"bad curve entry in {key}")
            out.append(Curve(str(c["id"]), sign, tuple(_parse_arc(t, sign) for t in c.get("arcs", []))))
        return out

    punctures = []
    for p in surf.get("punctures", []):
        try:
            strands = tuple(str(s) for s in p.get("strands", ()))
            count = int(p.get("count", len(strands)))
            punctures.append(Puncture(str(p["curve"]), int(p["arc"]), count, strands))
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise MalformedDocument(f"bad puncture entry: {exc}") from None
        if strands and count != len(strands):
            raise MalformedDocument("puncture count disagrees with its strand list")
    sides_raw = surf.get("sides", {})
    if not isinstance(sides_raw, dict):
        raise MalformedDocument("sides must map curve ids to their L and R neighbours")
    try:
        sides = {str(c): {str(k): [str(x) for x in v] for k, v in d.items()} for c, d in sides_raw.items()}
    except (AttributeError, TypeError) as exc:
        raise MalformedDocument(f"bad sides entry: {exc}") from None
    return SurfacePresentation(curves("curves_plus", "+"), curves("curves_minus", "-"), stacks,
                               punctures, boundary, diagram, str(meta.get("name", "")), sides)


def load_presentation(path: str | Path) -> SurfacePresentation:
    return parse_presentation(Path(path).read_text())


def dump_presentation(p: SurfacePresentation) -> dict:
    """Inverse of ``parse_presentation``, as a JSON-ready dict."""
    doc = {"meta": {"name": p.name, "boundary": p.boundary}}
    if p.diagram is not None:
        doc["diagram"] = {
            "bubbles": [{"id": b.id, "corners": list(b.corners)} for b in p.diagram.bubbles.values()],
            "strands": [{"id": s.id, "ends": [list(e) for e in s.ends]} for s in p.diagram.strands.values()],
        }
    doc["surface"] = {
        "saddles": {b: list(s) for b, s in p.stacks.items()},
        "curves_plus": [{"id": c.id, "arcs": [str(a) for a in c.arcs]} for c in p.curves_plus],
        "curves_minus": [{"id": c.id, "arcs": [str(a) for a in c.arcs]} for c in p.curves_minus],
    }
    if p.punctures:
        doc["surface"]["punctures"] = [
            {"curve": x.curve, "arc": x.arc, "count": x.count, **({"strands": list(x.strands)} if x.strands else {})}
            for x in p.punctures]
    if p.sides:
        doc["surface"]["sides"] = p.sides
    return doc


# --------------------------------------------------------------------------
# words

def label_curve(c: Curve, p: SurfacePresentation) -> CyclicWord:
    """The cyclic word of a curve.

    Saddle arcs read ``S`` (``D{l}`` when ``l`` saddles lie beneath the one
    met, seen from the curve's ball).  The type-I arc after an arc reads
    ``R`` when the bubbles at both of its ends are on the same side of the
    curve, plus ``P{i}`` for ``i`` punctures.
    """
    n = len(c.arcs)
    if n == 0:
        return CyclicWord(())
    punct = p.punctures_on(c.id)
    letters: list[Letter] = []
    for k, a in enumerate(c.arcs):
        nxt = c.arcs[(k + 1) % n]
        if a.side is None or nxt.side is None:
            raise MissingSideData(f"curve {c.id}: no side recorded for arc {a if a.side is None else nxt}")
        l = p.depth(a.saddle, c.sign)
        letters.append(D(l) if l else S)
        if k in punct:
            letters.append(P(punct[k].count))
        if a.side == nxt.side:
            letters.append(R)
    return CyclicWord(tuple(letters))


# --------------------------------------------------------------------------
# planar pieces: faces and bubble disks cut by chords

class _Disk:
    """A disk whose boundary is a cyclic list of atoms and points."""

    def __init__(self, name):
        self.name = name
        self.tokens = []
        self.chords = []

    def add_atom(self, atom):
        self.tokens.append(("a", atom))

    def add_point(self, point):
        self.tokens.append(("p", point))

    def positions(self):
        return {t[1]: i for i, t in enumerate(self.tokens) if t[0] == "p"}


def _between(i, j, k):
    # Strictly inside the cyclic interval running from i forward to j.
    return (i < k < j) if i < j else (k > i or k < j)


def _crossing(c1, c2, pos):
    a, b = pos[c1[0]], pos[c1[1]]
    x, y = pos[c2[0]], pos[c2[1]]
    if len({a, b, x, y}) < 4:
        return False
    return _between(a, b, x) != _between(a, b, y)


def _disks(p: SurfacePresentation, sign: str):
    """Faces and bubble disks of ``S^2_sign`` with all surface points and
    every chord the curves of that sign draw in them."""
    dg = p.diagram
    strand_cuts = defaultdict(list)
    arc_strands = p.arc_strands()
    for pts, (_, strands) in arc_strands.items():
        key = tuple(sorted(pts))
        for j, sid in enumerate(strands):
            strand_cuts[sid].append((key, j))
    disks = []
    for k, face in enumerate(dg.faces):
        d = _Disk(("face", k))
        for side in face:
            if side.kind == "s":
                cuts = [("x",) + c for c in strand_cuts[side.ref]]
                if not side.index:
                    cuts = cuts[::-1]
                d.add_atom(("s", side.ref, 0))
                for i, x in enumerate(cuts, 1):
                    d.add_point(x)
                    d.add_atom(("s", side.ref, i))
            else:
                pts = p.quadrant_points(side.ref, side.index)[::-1]
                n = len(pts)
                d.add_atom(("g", side.ref, side.index, n))
                for i, pt in enumerate(pts):
                    d.add_point(pt)
                    d.add_atom(("g", side.ref, side.index, n - 1 - i))
        disks.append(d)
    for bid in sorted(dg.bubbles):
        d = _Disk(("bubble", bid))
        for q in range(4):
            pts = p.quadrant_points(bid, q)
            d.add_atom(("g", bid, q, 0))
            for i, pt in enumerate(pts, 1):
                d.add_point(pt)
                d.add_atom(("g", bid, q, i))
        disks.append(d)
    by_name = {d.name: d for d in disks}
    face_of = dg.quadrant_face
    for c in p.curves(sign):
        for a in c.arcs:
            by_name[("bubble", p.bubble_of(a.saddle))].chords.append(((a.saddle, a.start), (a.saddle, a.end), c.id))
        for k in range(len(c.arcs)):
            start, stop = c.points(k)
            key = tuple(sorted((start, stop)))
            f = face_of[(p.bubble_of(start[0]), start[1])]
            cur = start
            first, strands = arc_strands.get(frozenset((start, stop)), (start, ()))
            steps = list(enumerate(strands))
            if first != start:
                steps.reverse()
            for j, sid in steps:
                x = ("x", key, j)
                by_name[("face", f)].chords.append((cur, x, c.id))
                faces = dg.strand_faces[sid]
                f = faces[1] if faces[0] == f else faces[0]
                cur = x
            by_name[("face", f)].chords.append((cur, stop, c.id))
    return disks


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def _regions(disks, cut: set[str]) -> _UnionFind:
    """Atoms glued into the regions of the sphere minus the curves ``cut``."""
    uf = _UnionFind()
    for d in disks:
        pos = d.positions()
        chords = [(pos[a], pos[b]) for a, b, cid in d.chords if cid in cut]
        atoms = [(i, t[1]) for i, t in enumerate(d.tokens) if t[0] == "a"]
        for (i, x), (j, y) in itertools.combinations(atoms, 2):
            if all(_between(i, j, a) == _between(i, j, b) for a, b in chords):
                uf.union(x, y)
            else:
                uf.find(x)
                uf.find(y)
    return uf


def curve_sides(c: Curve, p: SurfacePresentation) -> dict[str, list[str]]:
    """The other curves of the same sphere on the left and right of ``c``.

    Without a diagram the answer comes from the document's ``sides``
    section, if it lists ``c``.
    """
    if not p.has_geometry:
        if c.id in p.sides:
            return {k: list(p.sides[c.id].get(k, [])) for k in ("L", "R")}
        raise MissingSideData("sides of a curve need the full diagram or a sides entry")
    if not c.arcs:
        raise MissingSideData(f"curve {c.id} meets no bubble, so its sides are not anchored")
    disks = _disks(p, c.sign)
    uf = _regions(disks, {c.id})
    a = c.arcs[0]
    bid = p.bubble_of(a.saddle)
    # The quadrant opposite the corner this arc turns around lies on the
    # bubble's side of the curve.
    corner = a.end if a.side == "L" else a.start
    far = ("g", bid, (corner + 1) % 4, 0)
    bubble_region = uf.find(far)
    out = {"L": [], "R": []}
    for other in p.curves(c.sign):
        if other.id == c.id or not other.arcs:
            continue
        s, q = other.arcs[0].saddle, other.arcs[0].start
        pts = p.quadrant_points(p.bubble_of(s), q)
        atom = ("g", p.bubble_of(s), q, pts.index((s, q)))
        same = uf.find(atom) == bubble_region
        out[a.side if same else ("R" if a.side == "L" else "L")].append(other.id)
    return out


# --------------------------------------------------------------------------
# normal position

@dataclass(frozen=True)
class ConditionResult:
    ok: bool | None
    witnesses: tuple = ()

    @property
    def status(self) -> str:
        return "skipped" if self.ok is None else ("pass" if self.ok else "FAIL")


@dataclass(frozen=True)
class NormalPositionReport:
    conditions: dict

    @property
    def ok(self) -> bool:
        return all(r.ok is not False for r in self.conditions.values())

    def failed(self) -> list[int]:
        return [k for k, r in sorted(self.conditions.items()) if r.ok is False]

    def to_dict(self) -> dict:
        return {str(k): {"status": r.status, "witnesses": [list(w) for w in r.witnesses]}
                for k, r in sorted(self.conditions.items())}


def _cond1(p):
    bad = sorted((c.sign, c.id) for c in p.curves() if not c.arcs)
    return ConditionResult(not bad, tuple(bad))


def _cond2(p):
    bad = []
    for c in p.curves():
        seen = defaultdict(int)
        for a in c.arcs:
            seen[p.bubble_of(a.saddle)] += 1
        bad.extend((c.sign, c.id, b) for b, n in sorted(seen.items()) if n > 1)
    return ConditionResult(not bad, tuple(sorted(bad)))


def _cond3(p):
    if not p.has_geometry:
        return ConditionResult(None)
    bad = set()
    for sign in "+-":
        for d in _disks(p, sign):
            pos = d.positions()
            for c1, c2 in itertools.combinations(d.chords, 2):
                if _crossing(c1, c2, pos):
                    bad.add((sign, *sorted((c1[2], c2[2]))))
    return ConditionResult(not bad, tuple(sorted(bad)))


def _cond4(p):
    bad = []
    dg = p.diagram
    for c in p.curves():
        met = {p.bubble_of(a.saddle) for a in c.arcs}
        for pu in p.punctures_on(c.id).values():
            for sid in pu.strands:
                ends = {b for b, _ in dg.strands[sid].ends}
                for b in sorted(ends & met):
                    bad.append((c.sign, c.id, b, sid))
    return ConditionResult(not bad, tuple(sorted(bad)))


def _cond5(p):
    bad = []
    for sign in "+-":
        comps = p.diagram.link_components(sign)
        comp_of = {s: k for k, g in enumerate(comps) for s in g}
        for c in p.curves(sign):
            hits = defaultdict(int)
            for pu in p.punctures_on(c.id).values():
                for sid in pu.strands:
                    hits[comp_of[sid]] += 1
            bad.extend((sign, c.id, ",".join(sorted(comps[k]))) for k, n in sorted(hits.items()) if n > 1)
    return ConditionResult(not bad, tuple(bad))


def _cond6(p):
    if not p.has_geometry:
        return ConditionResult(None)
    dg = p.diagram
    punctured = set(p.arc_strands())
    plus = p.type_one_arcs("+")
    minus = p.type_one_arcs("-")
    groups = defaultdict(list)
    for pts, (cid, _) in plus.items():
        if pts in minus and pts not in punctured:
            s, q = next(iter(pts))
            groups[(cid, minus[pts][0])].append((pts, dg.quadrant_face[(p.bubble_of(s), q)]))
    bad = []
    for (a, b), arcs in sorted(groups.items()):
        for (x, f), (y, g) in itertools.combinations(arcs, 2):
            if not (x & y) and dg.adjacent_faces(f, g):
                bad.append((a, b, f, g))
    return ConditionResult(not bad, tuple(bad))


def check_normal_position(p: SurfacePresentation) -> NormalPositionReport:
    """Evaluate the normal position conditions.

    (1) no empty word; (2) no curve meets a bubble twice; (3) the curves
    on each sphere are pairwise disjoint in the rotation system.  When the
    surface has meridional boundary also (4) no curve meets a bubble and a
    punctured strand ending on it, (5) no curve meets one arc of the link
    on its sphere twice, (6) no plus and minus curve share two
    unpunctured type-I arcs lying in faces that share a strand.
    """
    conds = {1: _cond1(p), 2: _cond2(p), 3: _cond3(p)}
    if p.boundary == "meridional" and p.diagram is not None:
        conds.update({4: _cond4(p), 5: _cond5(p), 6: _cond6(p)})
    else:
        conds.update({k: ConditionResult(None) for k in (4, 5, 6)})
    return NormalPositionReport(conds)


def dual_consistency(p: SurfacePresentation) -> bool:
    """True iff every saddle arc on both sides is used exactly once and the
    plus and minus curves run along the same type-I arcs."""
    if not p.has_geometry:
        return False
    for sign in "+-":
        used = set()
        for c in p.curves(sign):
            for a in c.arcs:
                used.add((a.saddle, frozenset({a.start, a.end})))
        want = {(s, pair) for s in p.saddle_bubble for pair in _PAIRS[sign]}
        if used != want:
            return False
    return set(p.type_one_arcs("+")) == set(p.type_one_arcs("-"))


# --------------------------------------------------------------------------
# constructors

def diagram_from_pd(pd: Iterable[Iterable[int]], prefix: str = "x") -> CrossingBallDiagram:
    """A diagram from a planar diagram code.

    Each crossing lists its four edge labels counter-clockwise starting at
    the incoming understrand, so PD position ``m`` is corner ``m+1``.

    >>> d = diagram_from_pd([(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)])
    >>> len(d.bubbles), len(d.strands), len(d.faces)
    (3, 6, 5)
    """
    ends = defaultdict(list)
    bubbles = []
    for i, x in enumerate(pd):
        x = tuple(x)
        if len(x) != 4:
            raise MalformedDocument("every PD crossing has four labels")
        bid = f"{prefix}{i + 1}"
        corners = [""] * 4
        for m, e in enumerate(x):
            corners[(m + 1) % 4] = f"e{e}"
            ends[f"e{e}"].append((bid, (m + 1) % 4))
        bubbles.append(Bubble(bid, tuple(corners)))
    strands = []
    for sid, e in sorted(ends.items(), key=lambda kv: int(kv[0][1:])):
        if len(e) != 2:
            raise DanglingReference(f"PD edge {sid} appears {len(e)} times")
        strands.append(Strand(sid, (e[0], e[1])))
    return CrossingBallDiagram(bubbles, strands)


def _partner(point, sign):
    s, q = point
    for pair in _PAIRS[sign]:
        if q in pair:
            return (s, next(iter(pair - {q})))
    raise AssertionError


def presentation_from_arcs(diagram: CrossingBallDiagram, stacks: dict[str, tuple[str, ...]],
                           type_one: Iterable[tuple[tuple, tuple]], name: str = "") -> SurfacePresentation:
    """Trace every curve of a closed surface from its type-I arcs.

    ``type_one`` pairs up all equator points ``(saddle, quadrant)``.  The
    curves on each sphere alternate between these arcs and the saddle arcs
    of that sphere.
    """
    match = {}
    for a, b in type_one:
        if a in match or b in match:
            raise DanglingReference(f"point {a if a in match else b} is used twice")
        match[a], match[b] = b, a
    points = [(s, q) for st in stacks.values() for s in st for q in range(4)]
    if set(match) != set(points):
        raise DanglingReference("the type-I arcs must use every equator point once")
    curves = {}
    for sign, tag in (("+", "p"), ("-", "m")):
        seen = set()
        out = []
        for start in sorted(points):
            if start in seen:
                continue
            arcs = []
            x = start
            while x not in seen:
                y = _partner(x, sign)
                seen.update((x, y))
                arcs.append(SaddleArc(x[0], x[1], y[1], "L" if y[1] == (x[1] + 1) % 4 else "R"))
                x = match[y]
            out.append(Curve(f"{tag}{len(out) + 1}", sign, tuple(arcs)))
        curves[sign] = out
    return SurfacePresentation(curves["+"], curves["-"], dict(stacks), [], "closed", diagram, name)


def face_points(diagram: CrossingBallDiagram, stacks: dict[str, tuple[str, ...]]) -> list[list[tuple]]:
    """Equator points around each face of the projection, in boundary order."""
    empty = SurfacePresentation([], [], dict(stacks), [], "closed", diagram)
    return [[t[1] for t in d.tokens if t[0] == "p"] for d in _disks(empty, "+") if d.name[0] == "face"]
