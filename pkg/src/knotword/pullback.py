"""
Pullback graphs of closed surfaces and their census.

Collapsing every saddle of a closed surface in normal position to a
point leaves a 4-regular graph on the surface whose faces are the disks
bounded by the intersection curves, alternately above and below the
projection sphere.  We store it through its *plus map* ``M``:

* a dart of ``M`` is a plus-side saddle arc, so every saddle owns two
  darts and ``alpha`` swaps them;
* ``sigma`` steps to the next saddle arc along the (oriented) plus curve,
  so the cycles of ``sigma`` are the plus faces;
* the corner after dart ``x`` is the type-I arc leaving ``x`` along its
  curve; ``marks[x]`` says whether that arc is labelled R;
* the cycles of ``alpha * sigma`` (``x -> alpha[sigma[x]]``) are the minus
  faces, and the corners they visit are the same type-I arcs.

The 4-regular pullback graph is the medial graph of ``M``: its vertices
are the ``alpha`` pairs (saddles), its edges the corners.
"""

from __future__ import annotations

import hashlib
import itertools
import math
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .wordcore import CyclicWord, R, S, is_omega_reducible

__all__ = [
    "PullbackError", "CensusMismatch", "PunctureError", "OddEuler", "RangeError",
    "PullbackGraph", "BoundReport", "EnumerationReport",
    "euler", "classify", "check_bounds", "enumerate_configurations",
    "canonical_code", "admissible", "is_realizable", "nesting_witness",
    "build_pullback", "region_r_lower_bound", "config_digest",
]


class PullbackError(ValueError):
    pass


class CensusMismatch(PullbackError):
    """The two Euler characteristic computations disagree."""


class PunctureError(PullbackError):
    """Pullback graphs are only defined for closed surfaces."""


class OddEuler(PullbackError):
    pass


class RangeError(PullbackError):
    pass


def _cycles(perm):
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x)
            x = perm[x]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class PullbackGraph:
    sigma: tuple[int, ...]
    alpha: tuple[int, ...]
    marks: tuple[bool, ...]
    # Optional provenance: dart -> (plus curve id, minus curve id), saddle ids.
    plus_names: tuple[str, ...] | None = None
    minus_names: tuple[str, ...] | None = None
    saddle_names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.sigma)
        if len(self.alpha) != n or len(self.marks) != n:
            raise PullbackError("sigma, alpha and marks must have equal length")
        if sorted(self.sigma) != list(range(n)):
            raise PullbackError("sigma is not a permutation")
        for x in range(n):
            if self.alpha[x] == x or self.alpha[self.alpha[x]] != x:
                raise PullbackError("alpha must be a fixed-point-free involution")

    # -- combinatorics -----------------------------------------------------

    @property
    def num_darts(self) -> int:
        return len(self.sigma)

    @property
    def psi(self) -> tuple[int, ...]:
        return tuple(self.alpha[self.sigma[x]] for x in range(self.num_darts))

    def plus_faces(self) -> list[tuple[int, ...]]:
        return _cycles(self.sigma)

    def minus_faces(self) -> list[tuple[int, ...]]:
        return _cycles(self.psi)

    def faces(self) -> list[tuple[str, tuple[int, ...]]]:
        return ([("+", f) for f in self.plus_faces()]
                + [("-", f) for f in self.minus_faces()])

    def saddles(self) -> list[tuple[int, int]]:
        return sorted({(min(x, self.alpha[x]), max(x, self.alpha[x]))
                       for x in range(self.num_darts)})

    @property
    def num_saddles(self) -> int:
        return self.num_darts // 2

    @property
    def r_count(self) -> int:
        return sum(self.marks)

    def census(self) -> dict[int, int]:
        """Face count ``F_n`` by vertex count ``n``."""
        return dict(sorted(Counter(len(f) for _, f in self.faces()).items()))

    def face_word(self, face: tuple[int, ...]) -> CyclicWord:
        letters = []
        for x in face:
            letters.append(S)
            if self.marks[x]:
                letters.append(R)
        return CyclicWord(tuple(letters))

    def is_connected(self) -> bool:
        n = self.num_darts
        if n == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in (self.sigma[x], self.alpha[x]):
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return len(seen) == n

    def graph(self):
        """The 4-regular pullback graph as ``(vertices, edges)``.

        Vertices are saddle indices; each edge is a corner, joining the
        saddle of its dart to the saddle of the following dart, with its
        R mark.
        """
        saddle_of = {}
        for k, (a, b) in enumerate(self.saddles()):
            saddle_of[a] = saddle_of[b] = k
        edges = [(saddle_of[x], saddle_of[self.sigma[x]], self.marks[x])
                 for x in range(self.num_darts)]
        return list(range(self.num_saddles)), edges

    def degrees(self) -> dict[int, int]:
        vertices, edges = self.graph()
        deg = Counter()
        for u, v, _ in edges:
            deg[u] += 1
            deg[v] += 1
        return {v: deg[v] for v in vertices}

    def checkerboard_ok(self) -> bool:
        """Every corner has one plus face and one minus face on its sides."""
        plus = {x: k for k, f in enumerate(self.plus_faces()) for x in f}
        minus = {x: k for k, f in enumerate(self.minus_faces()) for x in f}
        return set(plus) == set(minus) == set(range(self.num_darts))

    def dual(self) -> "PullbackGraph":
        """Swap the roles of the plus and minus faces."""
        return PullbackGraph(self.psi, self.alpha, self.marks)

    def mirror(self) -> "PullbackGraph":
        inv = [0] * self.num_darts
        for x, y in enumerate(self.sigma):
            inv[y] = x
        marks = tuple(self.marks[inv[x]] for x in range(self.num_darts))
        return PullbackGraph(tuple(inv), self.alpha, marks)

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        chi = euler(self)
        return {
            "sigma": list(self.sigma),
            "alpha": list(self.alpha),
            "marks": [int(m) for m in self.marks],
            "saddles": self.num_saddles,
            "r": self.r_count,
            "census": {str(k): v for k, v in self.census().items()},
            "euler": chi,
            "genus": classify(chi),
            "plus_faces": [str(self.face_word(f)) for f in self.plus_faces()],
            "minus_faces": [str(self.face_word(f)) for f in self.minus_faces()],
        }

    def to_dot(self, name: str = "pullback") -> str:
        vertices, edges = self.graph()
        lines = [f"graph {name} {{"]
        for v in vertices:
            label = self.saddle_names[v] if self.saddle_names else f"s{v}"
            lines.append(f'  v{v} [label="{label}"];')
        for u, v, marked in edges:
            style = ' [color=red, label="R"]' if marked else ""
            lines.append(f"  v{u} -- v{v}{style};")
        lines.append("}")
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Euler characteristic and classification

def euler(g: PullbackGraph) -> int:
    """Euler characteristic, computed from the cell counts and from the census.

    >>> g = PullbackGraph((1, 0, 3, 2), (2, 3, 0, 1), (True,) * 4)
    >>> euler(g)
    2
    """
    if g.num_darts == 0:
        raise CensusMismatch("empty graph has no faces")
    vertices, edges = g.graph()
    faces = g.faces()
    direct = len(vertices) - len(edges) + len(faces)
    census = g.census()
    saddle_count = sum(Fraction(n, 4) * f for n, f in census.items())
    if saddle_count.denominator != 1 or 4 * len(vertices) != sum(n * f for n, f in census.items()):
        raise CensusMismatch(f"census {census} does not match {len(vertices)} vertices")
    via_census = sum(census.values()) - int(saddle_count)
    if direct != via_census:
        raise CensusMismatch(f"V-E+F = {direct} but sum F_n - |S| = {via_census}")
    return direct


def classify(chi: int) -> int:
    """Genus of a closed orientable surface with Euler characteristic ``chi``."""
    if chi % 2:
        raise OddEuler(f"odd Euler characteristic {chi} is not an orientable closed surface")
    if chi > 2:
        raise OddEuler(f"Euler characteristic {chi} exceeds 2")
    return (2 - chi) // 2


# --------------------------------------------------------------------------
# bounds

@dataclass
class BoundReport:
    r: int
    saddles: int
    euler: int
    max_face: int
    face_count: int
    faces_short_of_r: list = field(default_factory=list)  # (sign, face index, R count)
    margins: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v >= 0 for v in self.margins.values()) and not self.faces_short_of_r


def check_bounds(g: PullbackGraph) -> BoundReport:
    """Check the necessary bounds and record their margins.

    * every face carries at least two R edges,
    * the largest face has at most ``|R| - 2`` vertices,
    * there are at most ``|R|`` faces,
    * ``chi <= |R| - |S|``.
    """
    r = g.r_count
    chi = euler(g)
    faces = g.faces()
    short = []
    for sign in "+-":
        group = [f for s, f in faces if s == sign]
        for k, f in enumerate(group):
            count = sum(g.marks[x] for x in f)
            if count < 2:
                short.append((sign, k, count))
    max_face = max(len(f) for _, f in faces)
    margins = {
        "face_r_min": min(sum(g.marks[x] for x in f) for _, f in faces) - 2,
        "max_face": (r - 2) - max_face,
        "face_count": r - len(faces),
        "euler": (r - g.num_saddles) - chi,
    }
    return BoundReport(r, g.num_saddles, chi, max_face, len(faces), short, margins)


# --------------------------------------------------------------------------
# canonical form

def _relabel_code(sigma, alpha, marks, root):
    label = {root: 0}
    order = [root]
    k = 0
    while k < len(order):
        x = order[k]
        for y in (sigma[x], alpha[x]):
            if y not in label:
                label[y] = len(order)
                order.append(y)
        k += 1
    if len(order) != len(sigma):
        return None
    return tuple((label[sigma[x]], label[alpha[x]], int(marks[x])) for x in order)


def canonical_code(g: PullbackGraph, mirror: bool = True) -> tuple:
    """Isomorphism invariant of a connected decorated map.

    Two graphs get equal codes iff some relabelling of darts (optionally
    composed with a reflection) carries one onto the other, preserving
    face signs and R marks.
    """
    variants = [g]
    if mirror:
        variants.append(g.mirror())
    best = None
    for h in variants:
        for root in range(h.num_darts):
            code = _relabel_code(h.sigma, h.alpha, h.marks, root)
            if code is not None and (best is None or code < best):
                best = code
    return best


# --------------------------------------------------------------------------
# enumeration

@dataclass
class EnumerationReport:
    r_value: int
    genus_max: int | None
    configurations: list = field(default_factory=list)   # list[PullbackGraph]
    codes: list = field(default_factory=list)
    sign_swap_classes: int = 0

    @property
    def genera(self) -> list[int]:
        return [classify(euler(g)) for g in self.configurations]

    def counts_by_genus(self) -> dict[int, int]:
        return dict(sorted(Counter(self.genera).items()))

    def euler_distribution(self) -> dict[int, int]:
        return dict(sorted(Counter(euler(g) for g in self.configurations).items()))

    def max_face(self) -> int:
        return max((max(len(f) for _, f in g.faces()) for g in self.configurations), default=0)

    def summary_rows(self) -> list[tuple]:
        rows = []
        for k, g in enumerate(self.configurations):
            rows.append((k, g.num_saddles, euler(g), classify(euler(g)),
                         max(len(f) for _, f in g.faces()), len(g.faces()), g.census()))
        return rows




# --------------------------------------------------------------------------
# planar nesting of the curves on each sphere
#
# A saddle's bubble centre lies on the side of a curve C that contains the
# other curve through that saddle, so the R/empty labels around C say which
# neighbouring curves share a side of C.  The curves on one sphere are
# disjoint circles, hence those sides must come from one nesting forest.

def _face_items(g: PullbackGraph, sign: str):
    """Per face: list of (other face index, corner mark after the item)."""
    if sign == "+":
        faces = g.plus_faces()
        index = {x: k for k, f in enumerate(faces) for x in f}
        items = [[(index[g.alpha[x]], g.marks[x]) for x in f] for f in faces]
        return faces, items
    faces = g.minus_faces()
    index = {y: k for k, f in enumerate(faces) for y in f}
    sigma_inv = [0] * g.num_darts
    for x, y in enumerate(g.sigma):
        sigma_inv[y] = x
    psi = g.psi
    items = []
    for f in faces:
        row = []
        for y in f:
            twin = sigma_inv[g.alpha[g.sigma[y]]]
            row.append((index[twin], g.marks[psi[y]]))
        items.append(row)
    return faces, items


def side_splits(g: PullbackGraph, sign: str):
    """For each face, the two groups of neighbouring faces forced onto
    opposite sides of it, as bitmasks; ``None`` if the labels are
    contradictory or a face meets itself through a saddle."""
    faces, items = _face_items(g, sign)
    splits = []
    for k, row in enumerate(items):
        side = 0
        groups = [0, 0]
        for other, mark in row:
            if other == k:
                return None
            groups[side] |= 1 << other
            if not mark:
                side ^= 1
        if side != 0 or groups[0] & groups[1]:
            return None
        splits.append((groups[0], groups[1]))
    return splits


@lru_cache(maxsize=None)
def _forests(k: int) -> tuple[tuple[int, ...], ...]:
    """Descendant bitmasks of every rooted forest on ``k`` labelled nodes."""
    out = []
    for parent in itertools.product(range(-1, k), repeat=k):
        if any(parent[i] == i for i in range(k)):
            continue
        desc = [0] * k
        ok = True
        for i in range(k):
            j = parent[i]
            steps = 0
            while j != -1:
                desc[j] |= 1 << i
                j = parent[j]
                steps += 1
                if steps > k:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(desc))
    return tuple(out)


def _face_r_counts(g: PullbackGraph, sign: str) -> list[int]:
    faces = g.plus_faces() if sign == "+" else g.minus_faces()
    return [sum(g.marks[x] for x in f) for f in faces]


def nesting_witness(g: PullbackGraph, sign: str, lower_bound: bool = True):
    """A nesting forest of the ``sign`` curves compatible with the labels.

    Returns the tuple of descendant bitmasks (curve ``k``'s inside), or
    ``None`` when no arrangement of disjoint circles produces these R
    labels.  With ``lower_bound`` the forest must also give every side
    of every curve at least as many R arcs on the curves inside it as
    saddles of the curve that face that side.
    """
    splits = side_splits(g, sign)
    if splits is None:
        return None
    faces, items = _face_items(g, sign)
    k = len(faces)
    rcounts = _face_r_counts(g, sign)
    full = (1 << k) - 1
    for desc in _forests(k):
        good = True
        for c, (g0, g1) in enumerate(splits):
            d = desc[c]
            if not ((g0 & ~d == 0 and g1 & d == 0) or (g1 & ~d == 0 and g0 & d == 0)):
                good = False
                break
        if not good:
            continue
        if lower_bound and not _region_bounds_hold(desc, items, rcounts, full):
            continue
        return desc
    return None


def _region_bounds_hold(desc, items, rcounts, full) -> bool:
    for c, row in enumerate(items):
        inside = desc[c]
        outside = full & ~inside & ~(1 << c)
        for region in (inside, outside):
            m0 = sum(1 for other, _ in row if region >> other & 1)
            found = sum(rcounts[d] for d in range(len(rcounts)) if region >> d & 1)
            if found < m0:
                return False
    return True


def is_realizable(g: PullbackGraph, lower_bound: bool = True) -> bool:
    return (nesting_witness(g, "+", lower_bound) is not None
            and nesting_witness(g, "-", lower_bound) is not None)


# --------------------------------------------------------------------------
# enumeration

@lru_cache(maxsize=None)
def _reducible_pattern(pattern: tuple[bool, ...]) -> bool:
    letters = []
    for marked in pattern:
        letters.append(S)
        if marked:
            letters.append(R)
    return is_omega_reducible(CyclicWord(tuple(letters)))[0]


@lru_cache(maxsize=None)
def _face_patterns(n: int, r: int) -> tuple[tuple[bool, ...], ...]:
    # Corner markings of an n-gon with at least two R's and a reducible word.
    out = []
    for k in range(2, min(n, r) + 1):
        for chosen in itertools.combinations(range(n), k):
            pattern = tuple(i in chosen for i in range(n))
            if _reducible_pattern(pattern):
                out.append(pattern)
    return tuple(out)


class _Paths:
    """Partial permutation grown one arrow at a time, tracking its open
    paths by their endpoints and the lengths of closed cycles."""

    def __init__(self, size: int, max_len: int, max_cycles: int):
        self.other = list(range(size))
        self.length = [1] * size
        self.max_len = max_len
        self.max_cycles = max_cycles
        self.cycles = 0
        self.cycle_darts = 0
        self.log = []

    def link(self, y: int, z: int) -> bool:
        head, tail = self.other[y], self.other[z]
        if head == z:
            n = self.length[y]
            self.log.append(("close", n))
            self.cycles += 1
            self.cycle_darts += n
            return n % 2 == 0 and n <= self.max_len and self.cycles <= self.max_cycles
        n = self.length[y] + self.length[z]
        self.log.append(("merge", head, tail, self.other[head], self.other[tail],
                         self.length[head], self.length[tail]))
        self.other[head], self.other[tail] = tail, head
        self.length[head] = self.length[tail] = n
        return n <= self.max_len

    def undo_to(self, mark: int) -> None:
        while len(self.log) > mark:
            item = self.log.pop()
            if item[0] == "close":
                self.cycles -= 1
                self.cycle_darts -= item[1]
            else:
                _, head, tail, oh, ot, lh, lt = item
                self.other[head], self.other[tail] = oh, ot
                self.length[head], self.length[tail] = lh, lt

    def room(self, used: int) -> bool:
        # Darts not yet on a closed cycle need at least this many more.
        return self.cycles + -(-(used - self.cycle_darts) // self.max_len) <= self.max_cycles


def _rooted_maps(max_deg: int, max_vertices: int, max_faces: int, root_degree: int):
    """Every connected map with even vertex and face degrees at most
    ``max_deg``, at most ``max_vertices`` vertices and ``max_faces``
    faces, whose root vertex has ``root_degree`` darts, each generated
    once.  Darts are labelled in the breadth-first order used by
    ``canonical_code`` and a map is kept only if that labelling from
    dart 0 is its canonical one."""
    max_darts = max_deg * max_vertices
    sigma = [-1] * max_darts
    alpha = [-1] * max_darts
    sigma_inv = [-1] * max_darts
    verts = _Paths(max_darts, max_deg, max_vertices)
    faces = _Paths(max_darts, max_deg, max_faces)
    size = [1]

    def set_sigma(x, y) -> bool:
        sigma[x] = y
        sigma_inv[y] = x
        if not verts.link(x, y):
            return False
        if alpha[y] != -1 and not faces.link(x, alpha[y]):
            return False
        return True

    def set_alpha(x, y) -> bool:
        alpha[x] = y
        alpha[y] = x
        if sigma_inv[x] != -1 and not faces.link(sigma_inv[x], y):
            return False
        if x != y and sigma_inv[y] != -1 and not faces.link(sigma_inv[y], x):
            return False
        return True

    def ok() -> bool:
        m = size[0]
        return verts.room(m) and faces.room(m)

    def fresh(fn, x):
        m = size[0]
        if m >= max_darts:
            return
        size[0] = m + 1
        mv, mf = len(verts.log), len(faces.log)
        if fn(x, m) and ok():
            yield m
        verts.undo_to(mv)
        faces.undo_to(mf)
        if fn is set_sigma:
            sigma[x] = sigma_inv[m] = -1
        else:
            alpha[x] = alpha[m] = -1
        size[0] = m

    def choose_sigma(p):
        m = size[0]
        for q in range(m):
            if sigma_inv[q] != -1:
                continue
            mv, mf = len(verts.log), len(faces.log)
            if set_sigma(p, q) and ok():
                yield from choose_alpha(p)
            verts.undo_to(mv)
            faces.undo_to(mf)
            sigma_inv[q] = -1
            sigma[p] = -1
        for _ in fresh(set_sigma, p):
            yield from choose_alpha(p)

    def choose_alpha(p):
        if alpha[p] != -1:
            yield from step(p + 1)
            return
        m = size[0]
        for q in range(p + 1, m):
            if alpha[q] != -1:
                continue
            mf = len(faces.log)
            if set_alpha(p, q) and ok():
                yield from step(p + 1)
            faces.undo_to(mf)
            alpha[p] = alpha[q] = -1
        for _ in fresh(set_alpha, p):
            yield from step(p + 1)

    def beaten(p) -> bool:
        # Some other root (or the mirror image) already gives a smaller
        # code prefix, so this labelling can never be the canonical one.
        m = size[0]
        for succ, skip in ((sigma, 0), (sigma_inv, None)):
            for x in range(m):
                if x == skip:
                    continue
                label = {x: 0}
                order = [x]
                for k in range(p):
                    if k >= len(order):
                        break
                    y = order[k]
                    sy, ay = succ[y], alpha[y]
                    if sy == -1 or ay == -1:
                        break
                    for z in (sy, ay):
                        if z not in label:
                            label[z] = len(order)
                            order.append(z)
                    entry = (label[sy], label[ay])
                    ref = (sigma[k], alpha[k])
                    if entry != ref:
                        if entry < ref:
                            return True
                        break
        return False

    def step(p):
        if p and beaten(p):
            return
        if p == size[0]:
            yield tuple(sigma[:p]), tuple(alpha[:p])
            return
        yield from choose_sigma(p)

    for sig, alp in step(0):
        g = PullbackGraph(sig, alp, (False,) * len(sig))
        root = next(f for f in g.plus_faces() if 0 in f)
        if len(root) != root_degree:
            continue
        if _relabel_code(sig, alp, g.marks, 0) == canonical_code(g):
            yield g


def _marks_for_map(g: PullbackGraph, r: int):
    """Every R marking of the corners with exactly ``r`` marks such that
    all faces carry >= 2 marks and reducible words."""
    plus = g.plus_faces()
    minus = g.minus_faces()
    options = [_face_patterns(len(f), r) for f in plus]
    if any(not o for o in options):
        return
    marks = [False] * g.num_darts

    def rec(k, used):
        if k == len(plus):
            if used != r:
                return
            for f in minus:
                pattern = tuple(marks[x] for x in f)
                if sum(pattern) < 2 or not _reducible_pattern(pattern):
                    return
            yield tuple(marks)
            return
        face = plus[k]
        for pattern in options[k]:
            extra = sum(pattern)
            if used + extra + 2 * (len(plus) - k - 1) > r:
                continue
            for x, m in zip(face, pattern):
                marks[x] = m
            yield from rec(k + 1, used + extra)
        for x in face:
            marks[x] = False

    yield from rec(0, 0)


def admissible(g: PullbackGraph, r: int | None = None) -> bool:
    """All enumeration filters: connectivity, the bounds, reducible face
    words and a planar nesting on both spheres."""
    if r is not None and g.r_count != r:
        return False
    if not g.is_connected() or not check_bounds(g).ok:
        return False
    for _, f in g.faces():
        if len(f) % 2 or not _reducible_pattern(tuple(g.marks[x] for x in f)):
            return False
    return is_realizable(g)


def _enumerate_root_degree(args):
    root_degree, r, genus_max = args
    found = {}
    for bare in _rooted_maps(r - 2, r // 2, r // 2, root_degree):
        chi = len(bare.plus_faces()) - bare.num_saddles + len(bare.minus_faces())
        if genus_max is not None and (2 - chi) // 2 > genus_max:
            continue
        if 2 * bare.num_saddles < r:
            continue
        for marks in _marks_for_map(bare, r):
            g = PullbackGraph(bare.sigma, bare.alpha, marks)
            if not admissible(g):
                continue
            code = canonical_code(g)
            if code not in found:
                found[code] = g
    return found


def enumerate_configurations(r: int, genus_max: int | None = None, jobs: int = 1) -> EnumerationReport:
    """All decorated pullback graphs with exactly ``r`` R edges that pass
    the necessary filters, one per isomorphism class.

    Filters: at most ``r/2`` faces of each sign, every face even with at
    most ``r - 2`` vertices, at least two R edges and an omega-reducible
    word, and the R labels realizable by nested circles on both spheres
    with the region lower bound.
    """
    if r % 2 or r < 4 or r > 12:
        raise RangeError(f"r must be even with 4 <= r <= 12, got {r}")
    tasks = [(d, r, genus_max) for d in range(2, r - 1, 2)]
    found = {}
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_enumerate_root_degree, tasks):
                found.update(part)
    else:
        for task in tasks:
            found.update(_enumerate_root_degree(task))
    codes = sorted(found)
    report = EnumerationReport(r, genus_max)
    report.codes = codes
    report.configurations = [_normalize(found[c]) for c in codes]
    report.sign_swap_classes = len({min(c, canonical_code(g.dual()))
                                    for c, g in zip(codes, report.configurations)})
    return report


def _normalize(g: PullbackGraph) -> PullbackGraph:
    # Relabel darts in canonical order so output is scheduling-independent.
    code = canonical_code(g)
    return PullbackGraph(tuple(c[0] for c in code), tuple(c[1] for c in code),
                         tuple(bool(c[2]) for c in code))


def config_digest(g: PullbackGraph) -> str:
    return hashlib.sha256(repr(canonical_code(g)).encode()).hexdigest()[:16]


# --------------------------------------------------------------------------
# from a presentation

def _orient_curves(p) -> dict[str, bool]:
    """Choose a direction for every plus curve so that the two upper arcs
    of each saddle turn the same way around its bubble, as they do along
    the boundary of the saddle.  Returns ``curve id -> reversed?``."""
    arcs_at = defaultdict(list)
    for c in p.curves_plus:
        for a in c.arcs:
            arcs_at[a.saddle].append((c.id, a.side))
    links = defaultdict(list)
    for saddle, pair in arcs_at.items():
        if len(pair) != 2:
            raise PullbackError(f"saddle {saddle} needs two upper arcs, found {len(pair)}")
        (c1, s1), (c2, s2) = pair
        links[c1].append((c2, s1 != s2))
        links[c2].append((c1, s1 != s2))
    flip = {}
    for c in p.curves_plus:
        if c.id in flip:
            continue
        flip[c.id] = False
        todo = [c.id]
        while todo:
            x = todo.pop()
            for y, differ in links[x]:
                want = flip[x] ^ differ
                if y not in flip:
                    flip[y] = want
                    todo.append(y)
                elif flip[y] != want:
                    raise PullbackError("the curves admit no coherent orientation")
    return flip


def build_pullback(p) -> PullbackGraph:
    """The pullback graph of a closed surface given by its curves on both
    spheres.

    The minus faces of the result are checked against the presentation's
    minus curves; a mismatch means the presentation does not describe an
    embedded surface.
    """
    from .diagram import dual_consistency

    if p.punctures:
        raise PunctureError("the pullback graph is defined for closed surfaces only")
    if not dual_consistency(p):
        raise PullbackError("the presentation needs both spheres with every saddle arc used once")
    flip = _orient_curves(p)
    darts = []
    for c in p.curves_plus:
        n = len(c.arcs)
        order = list(range(n))
        if flip[c.id]:
            order = order[::-1]
        base = len(darts)
        for j, k in enumerate(order):
            nxt = order[(j + 1) % n]
            a, b = c.arcs[k], c.arcs[nxt]
            pts = frozenset({(a.saddle, a.end if not flip[c.id] else a.start),
                             (b.saddle, b.start if not flip[c.id] else b.end)})
            darts.append({"curve": c.id, "saddle": a.saddle, "mark": a.side == b.side,
                          "corner": pts, "next": base + (j + 1) % n})
    sigma = tuple(d["next"] for d in darts)
    by_saddle = defaultdict(list)
    for x, d in enumerate(darts):
        by_saddle[d["saddle"]].append(x)
    alpha = [0] * len(darts)
    for x, y in by_saddle.values():
        alpha[x], alpha[y] = y, x
    marks = tuple(d["mark"] for d in darts)
    minus_of = {}
    for c in p.curves_minus:
        for k in range(len(c.arcs)):
            minus_of[frozenset(c.points(k))] = c.id
    g = PullbackGraph(sigma, tuple(alpha), marks)
    minus_names = [None] * len(darts)
    for face in g.minus_faces():
        owners = {minus_of.get(darts[x]["corner"]) for x in face}
        if len(owners) != 1 or None in owners:
            raise PullbackError("minus faces do not match the minus curves")
        name = owners.pop()
        for x in face:
            minus_names[x] = name
    names = Counter(minus_names)
    for c in p.curves_minus:
        if names[c.id] != len(c.arcs):
            raise PullbackError(f"minus curve {c.id} is not a single face")
    return PullbackGraph(sigma, tuple(alpha), marks,
                         tuple(d["curve"] for d in darts), tuple(minus_names),
                         tuple(d["saddle"] for d in darts))


def region_r_lower_bound(c, p, side: str | None = None) -> tuple[int, int]:
    """Count, for one side of curve ``c``, the saddles of ``c`` whose bubble
    lies there (``m0``) and the R labels on the other curves of the same
    sphere lying there (``found_R``).

    Every curve that bounds a disk must see ``found_R >= m0`` on both
    sides; the function asserts it.
    """
    from .diagram import MissingSideData, curve_sides, label_curve

    if side not in ("L", "R"):
        raise MissingSideData("region-ambiguous: choose side 'L' or 'R'")
    m0 = sum(1 for a in c.arcs if a.side == side)
    inside = curve_sides(c, p)[side]
    found = sum(sum(1 for x in label_curve(p.curve(cid), p) if x == R) for cid in inside)
    assert found >= m0, f"curve {c.id} side {side}: {found} R labels for {m0} saddles"
    return m0, found
