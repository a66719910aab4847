"""
Paired-up saddles and virtual bubbles.

When a curve ``C`` meets a saddle with ``l`` saddles beneath it (seen from
``C``'s ball), the bubble is replaced along ``C`` by ``2l+1`` virtual
bubbles met alternately from either side, the outer two on the side of the
real bubble.  The met saddle goes to the middle one; the ``j``-th saddle
beneath it is split between the virtual bubble ``j`` places before the
middle (its arc through ``C``'s entry quadrant) and the one ``j`` places
after (its arc through the exit quadrant).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .diagram import Curve, SurfacePresentation, _PAIRS, label_curve
from .wordcore import CyclicWord, Letter, P, R, ReductionTrace, S, is_omega_reducible, l_reduce

__all__ = [
    "PairingPartition", "VirtualBubble", "VirtualDiagram", "Witness", "Verdict",
    "PreconditionUnmet",
    "pair_up_saddles", "expand_virtual", "meridian_witness", "check_main_theorem",
    "lemma35_crosscheck",
]


class PreconditionUnmet(ValueError):
    pass


def _other(sign: str) -> str:
    return "-" if sign == "+" else "+"


# --------------------------------------------------------------------------
# pairing

@dataclass(frozen=True)
class PairingPartition:
    curve: str
    saddles: tuple[str, ...]
    assignment: dict

    def classes(self) -> dict[int, list[str]]:
        out: dict[int, list[str]] = {}
        for s in self.saddles:
            if s in self.assignment:
                out.setdefault(self.assignment[s], []).append(s)
        return out

    def unassigned(self) -> list[str]:
        return [s for s in self.saddles if s not in self.assignment]


def pair_up_saddles(c: Curve, p: SurfacePresentation) -> PairingPartition:
    """Group the saddles met by ``c`` by connecting operation.

    Two saddles are paired when a curve on the other sphere runs from one
    to the other without meeting ``c`` or another saddle of ``c`` on the
    way.  Classes are numbered by first appearance along ``c``.
    """
    met = [a.saddle for a in c.arcs]
    met_set = set(met)
    own_arcs = {frozenset(c.points(k)) for k in range(len(c.arcs))}
    parent = {s: s for s in met}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for b in p.curves(_other(c.sign)):
        n = len(b.arcs)
        hits = [k for k, a in enumerate(b.arcs) if a.saddle in met_set]
        if len(hits) < 2:
            continue
        for i, k in enumerate(hits):
            j = hits[(i + 1) % len(hits)]
            steps = (j - k) % n or n
            crossing = any(frozenset(b.points((k + t) % n)) in own_arcs for t in range(steps))
            s1, s2 = b.arcs[k].saddle, b.arcs[j].saddle
            if not crossing and s1 != s2:
                parent[find(s1)] = find(s2)
    groups: dict[str, list[str]] = {}
    for s in met:
        groups.setdefault(find(s), []).append(s)
    assignment = {}
    label = 0
    for s in met:
        members = groups[find(s)]
        if len(set(members)) < 2 or s in assignment:
            continue
        label += 1
        for t in members:
            assignment[t] = label
    return PairingPartition(c.id, tuple(met), assignment)


# --------------------------------------------------------------------------
# virtual diagrams

@dataclass(frozen=True)
class VirtualBubble:
    id: str
    origin: str
    arc: int
    index: int
    side: str
    saddles: tuple[str, ...]


@dataclass
class VirtualDiagram:
    """The expanded picture around one curve.

    ``base`` lists, per saddle arc of the curve, the virtual bubbles met in
    order; ``dual`` lists each curve of the other sphere as the sequence of
    bubbles it passes, virtual where the passage was re-routed.
    """
    curve: str
    sign: str
    bubbles: dict[str, VirtualBubble]
    base: list[tuple[str, ...]]
    type_one: list[tuple[bool, int]]
    dual: dict[str, list[str]] = field(default_factory=dict)

    def word(self) -> CyclicWord:
        """Read the virtual word straight off the expanded picture."""
        letters: list[Letter] = []
        n = len(self.base)
        for k, run in enumerate(self.base):
            letters.extend([S] * len(run))
            same, punct = self.type_one[k]
            if punct:
                letters.append(P(punct))
            last = self.bubbles[run[-1]].side
            first = self.bubbles[self.base[(k + 1) % n][0]].side
            if last == first:
                letters.append(R)
        return CyclicWord(tuple(letters))

    def to_dot(self) -> str:
        lines = [f'graph "{self.curve}" {{', "  node [shape=circle];"]
        for vb in self.bubbles.values():
            lines.append(f'  "{vb.id}" [label="{vb.id}\\n{vb.side}"];')
        flat = [b for run in self.base for b in run]
        for a, b in zip(flat, flat[1:] + flat[:1]):
            lines.append(f'  "{a}" -- "{b}" [color=red];')
        for name, stops in sorted(self.dual.items()):
            for a, b in zip(stops, stops[1:] + stops[:1]):
                lines.append(f'  "{a}" -- "{b}" [style=dotted, label="{name}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _beneath(p: SurfacePresentation, saddle: str, sign: str) -> list[str]:
    stack = p.stacks[p.bubble_of(saddle)]
    i = stack.index(saddle)
    return list(reversed(stack[:i])) if sign == "+" else list(stack[i + 1:])


def expand_virtual(c: Curve, p: SurfacePresentation) -> tuple[VirtualDiagram, CyclicWord]:
    """Replace every bubble ``c`` meets by its virtual bubbles.

    Returns the diagram and the virtual word ``l_reduce(label_curve(c, p))``.
    """
    word = l_reduce(label_curve(c, p))
    bubbles: dict[str, VirtualBubble] = {}
    base = []
    routed: dict[tuple[str, frozenset], str] = {}
    opp = _PAIRS[_other(c.sign)]
    for k, a in enumerate(c.arcs):
        below = _beneath(p, a.saddle, c.sign)
        l = len(below)
        flipped = "R" if a.side == "L" else "L"
        run = []
        owners: list[list[str]] = [[] for _ in range(2 * l + 1)]
        owners[l].append(a.saddle)
        for j, u in enumerate(below, 1):
            owners[l - j].append(u)
            owners[l + j].append(u)
        origin = p.bubble_of(a.saddle)
        for t in range(2 * l + 1):
            vid = f"{origin}#{k}.{t}"
            bubbles[vid] = VirtualBubble(vid, origin, k, t, a.side if t % 2 == 0 else flipped,
                                         tuple(owners[t]))
            run.append(vid)
        base.append(tuple(run))
        if not a.has_geometry:
            continue
        entry = next(pr for pr in opp if a.start in pr)
        exit_ = next(pr for pr in opp if a.end in pr)
        routed[(a.saddle, entry)] = run[l]
        routed[(a.saddle, exit_)] = run[l]
        for j, u in enumerate(below, 1):
            routed[(u, entry)] = run[l - j]
            routed[(u, exit_)] = run[l + j]
    punct = p.punctures_on(c.id)
    n = len(c.arcs)
    type_one = [(c.arcs[k].side == c.arcs[(k + 1) % n].side, punct[k].count if k in punct else 0)
                for k in range(n)]
    vd = VirtualDiagram(c.id, c.sign, bubbles, base, type_one)
    if not p.has_geometry:
        return vd, word
    for b in p.curves(_other(c.sign)):
        stops = []
        for a in b.arcs:
            key = (a.saddle, frozenset({a.start, a.end}))
            stops.append(routed.get(key, p.bubble_of(a.saddle)))
        vd.dual[b.id] = stops
    return vd, word


@dataclass(frozen=True)
class Witness:
    bubble: str
    loop: str
    virtual: tuple[str, ...]

    def __str__(self):
        return f"loop {self.loop} passes bubble {self.bubble} twice (via {', '.join(self.virtual)})"


def meridian_witness(vd: VirtualDiagram) -> Witness | None:
    """A loop of the dual picture meeting one virtual bubble twice, or two
    virtual bubbles cut from the same real bubble, if there is one."""
    for name in sorted(vd.dual):
        seen: dict[str, list[str]] = {}
        for stop in vd.dual[name]:
            if stop in vd.bubbles:
                seen.setdefault(vd.bubbles[stop].origin, []).append(stop)
        for origin in sorted(seen):
            if len(seen[origin]) > 1:
                return Witness(origin, name, tuple(seen[origin]))
    return None


# --------------------------------------------------------------------------
# the necessary condition

@dataclass(frozen=True)
class Verdict:
    curve: str
    sign: str
    word: CyclicWord
    virtual_word: CyclicWord
    reducible: bool | None
    trace: ReductionTrace | None = None
    witness: Witness | None = None
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "curve": self.curve, "sign": self.sign, "word": str(self.word),
            "virtual_word": str(self.virtual_word), "reducible": self.reducible,
            "witness": str(self.witness) if self.witness else None, "note": self.note,
        }


def check_main_theorem(p: SurfacePresentation) -> list[Verdict]:
    """Virtual word and reducibility for every curve on both spheres.

    An irreducible verdict shows that ``p`` cannot be a separating sphere or
    an essential surface in normal position.  Curves meeting no bubble are
    listed with ``reducible=None``.
    """
    out = []
    for sign in "+-":
        for c in sorted(p.curves(sign), key=lambda c: c.id):
            if not c.arcs:
                empty = CyclicWord(())
                out.append(Verdict(c.id, sign, empty, empty, None, note="empty word"))
                continue
            vd, vw = expand_virtual(c, p)
            ok, trace = is_omega_reducible(vw)
            out.append(Verdict(c.id, sign, label_curve(c, p), vw, ok, trace, meridian_witness(vd)))
    return out


def lemma35_crosscheck(c: Curve, p: SurfacePresentation) -> bool:
    """With every saddle of ``c`` paired up, ``c``'s word must reduce."""
    part = pair_up_saddles(c, p)
    if not c.arcs or part.unassigned():
        raise PreconditionUnmet(f"curve {c.id}: unpaired saddles {part.unassigned()}")
    return is_omega_reducible(label_curve(c, p))[0]
