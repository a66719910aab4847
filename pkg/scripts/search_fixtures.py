"""Search small diagrams for closed surfaces with given properties.

Used to produce the example presentations under ``fixtures/``.  Every
surface is traced from a choice of non-crossing type-I arcs in each face.
"""

import itertools
import json
import sys

from knotword.diagram import (check_normal_position, diagram_from_pd, dump_presentation,
                              face_points, label_curve, presentation_from_arcs)
from knotword.pullback import PullbackError, build_pullback, euler
from knotword.virtual import check_main_theorem, pair_up_saddles

PD = {
    "hopf": [(4, 1, 3, 2), (2, 3, 1, 4)],
    "trefoil": [(1, 5, 2, 4), (3, 1, 4, 6), (5, 3, 6, 2)],
    "figure8": [(4, 2, 5, 1), (8, 6, 1, 5), (6, 3, 7, 4), (2, 7, 3, 8)],
    "torus24": [(6, 1, 7, 2), (8, 3, 5, 4), (2, 5, 3, 6), (4, 7, 1, 8)],
    "whitehead": [(6, 1, 7, 2), (10, 7, 5, 8), (4, 5, 1, 6), (2, 10, 3, 9), (8, 4, 9, 3)],
}


def noncrossing(points):
    if not points:
        yield []
        return
    first = points[0]
    for k in range(1, len(points), 2):
        for inner in noncrossing(points[1:k]):
            for outer in noncrossing(points[k + 1:]):
                yield [(first, points[k])] + inner + outer


def surfaces(diagram, stacks):
    per_face = []
    for pts in face_points(diagram, stacks):
        if len(pts) % 2:
            return
        per_face.append(list(noncrossing(pts)))
    for choice in itertools.product(*per_face):
        yield presentation_from_arcs(diagram, stacks, [a for part in choice for a in part])


def stackings(diagram, counts):
    ids = sorted(diagram.bubbles)
    for combo in itertools.product(*[counts] * len(ids)):
        stacks = {b: tuple(f"{b}s{i + 1}" for i in range(n)) for b, n in zip(ids, combo) if n}
        yield stacks


def describe(p):
    try:
        g = build_pullback(p)
    except PullbackError:
        return None
    if not g.is_connected():
        return None
    return {"chi": euler(g), "r": g.r_count, "report": check_normal_position(p),
            "verdicts": check_main_theorem(p)}


if __name__ == "__main__":
    knot = sys.argv[1]
    counts = [int(x) for x in sys.argv[2].split(",")]
    d = diagram_from_pd(PD[knot])
    for stacks in stackings(d, counts):
        for p in surfaces(d, stacks):
            info = describe(p)
            if info is None:
                continue
            words = [str(label_curve(c, p)) for c in p.curves()]
            print(json.dumps({"stacks": stacks, "chi": info["chi"], "r": info["r"],
                              "normal": info["report"].ok,
                              "reducible": all(v.reducible for v in info["verdicts"]),
                              "words": words}))


def projections(n):
    """All connected planar 4-valent diagrams on ``n`` crossings with every
    over/under choice, one per isomorphism class."""
    from knotword.diagram import Bubble, CrossingBallDiagram, DiagramError, Strand
    from knotword.pullback import PullbackGraph, canonical_code

    halves = [(v, c) for v in range(n) for c in range(4)]
    seen = set()
    seen_bare = set()

    def matchings(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for k in range(1, len(rest)):
            for m in matchings(rest[1:k] + rest[k + 1:]):
                yield [(a, rest[k])] + m

    for m in matchings(halves):
        idx = {h: i for i, h in enumerate(halves)}
        sigma = [idx[(v, (c + 1) % 4)] for v, c in halves]
        alpha = [0] * len(halves)
        for a, b in m:
            alpha[idx[a]], alpha[idx[b]] = idx[b], idx[a]
        try:
            bare = PullbackGraph(tuple(sigma), tuple(alpha), (False,) * len(halves))
        except Exception:
            continue
        if not bare.is_connected() or n - 2 * n + len(bare.minus_faces()) != 2:
            continue
        bare_code = canonical_code(bare)
        if bare_code in seen_bare:
            continue
        seen_bare.add(bare_code)
        for crossing in itertools.product((0, 1), repeat=n):
            marks = tuple((c + crossing[v]) % 2 == 0 for v, c in halves)
            g = PullbackGraph(tuple(sigma), tuple(alpha), marks)
            code = canonical_code(g)
            if code in seen:
                continue
            seen.add(code)
            strands = []
            corners = {}
            for k, (a, b) in enumerate(m):
                sid = f"e{k + 1}"
                ca = (a[1] + crossing[a[0]]) % 4
                cb = (b[1] + crossing[b[0]]) % 4
                strands.append(Strand(sid, ((f"x{a[0] + 1}", ca), (f"x{b[0] + 1}", cb))))
                corners[(a[0], ca)] = sid
                corners[(b[0], cb)] = sid
            bubbles = [Bubble(f"x{i + 1}", tuple(corners[(i, c)] for c in range(4))) for i in range(n)]
            try:
                yield CrossingBallDiagram(bubbles, strands)
            except DiagramError:
                continue


def pruned_surfaces(diagram, stacks):
    """Like ``surfaces`` but abandons a partial choice of type-I arcs as
    soon as some traced path on either sphere meets a bubble twice."""
    from knotword.diagram import _partner

    bubble = {s: b for b, st in stacks.items() for s in st}
    faces = [pts for pts in face_points(diagram, stacks)]
    if any(len(pts) % 2 for pts in faces):
        return
    state = {}
    for sign in "+-":
        other, seen = {}, {}
        for b, st in stacks.items():
            for s in st:
                for q in range(4):
                    other[(s, q)] = _partner((s, q), sign)
                    seen[(s, q)] = frozenset({b})
        state[sign] = (other, seen)
    log = []

    def link(x, y):
        mark = len(log)
        for sign in "+-":
            other, seen = state[sign]
            ox, oy = other[x], other[y]
            if ox == y:
                continue
            if seen[x] & seen[y]:
                undo(mark)
                return None
            log.append((sign, ox, oy, other[ox], other[oy], seen[ox], seen[oy]))
            union = seen[x] | seen[y]
            other[ox], other[oy] = oy, ox
            seen[ox] = seen[oy] = union
        return mark

    def undo(mark):
        while len(log) > mark:
            sign, ox, oy, a, b, sa, sb = log.pop()
            other, seen = state[sign]
            other[ox], other[oy] = a, b
            seen[ox], seen[oy] = sa, sb

    chosen = []

    def match(k, pts):
        if not pts:
            if k + 1 == len(faces):
                yield list(chosen)
            else:
                yield from match(k + 1, faces[k + 1])
            return
        first = pts[0]
        for j in range(1, len(pts), 2):
            mark = link(first, pts[j])
            if mark is None:
                continue
            chosen.append((first, pts[j]))
            # inner interval first, then the rest of the face
            yield from match_split(k, pts[1:j], pts[j + 1:])
            chosen.pop()
            undo(mark)

    def match_split(k, inner, rest):
        if not inner:
            yield from match(k, rest)
            return
        first = inner[0]
        for j in range(1, len(inner), 2):
            mark = link(first, inner[j])
            if mark is None:
                continue
            chosen.append((first, inner[j]))
            yield from match_split_two(k, inner[1:j], inner[j + 1:], rest)
            chosen.pop()
            undo(mark)

    def match_split_two(k, a, b, rest):
        # flatten the pending intervals into a queue
        yield from _queue(k, [a, b, rest])

    def _queue(k, parts):
        parts = [x for x in parts if x]
        if not parts:
            if k + 1 == len(faces):
                yield list(chosen)
            else:
                yield from _queue(k + 1, [faces[k + 1]])
            return
        head, tail = parts[0], parts[1:]
        first = head[0]
        for j in range(1, len(head), 2):
            mark = link(first, head[j])
            if mark is None:
                continue
            chosen.append((first, head[j]))
            yield from _queue(k, [head[1:j], head[j + 1:]] + tail)
            chosen.pop()
            undo(mark)

    if not faces:
        return
    for arcs in _queue(0, [faces[0]]):
        yield presentation_from_arcs(diagram, stacks, arcs)
