"""
Cyclic and partial words over the saddle alphabet, and the rewriting
calculus that decides their reducibility.

Letters are ``S`` (a saddle arc), ``R`` (a type-I arc whose two end
bubbles lie on the same side of the curve), ``P{i}`` (a type-I arc
punctured ``i`` times) and ``D{l}`` (a saddle with ``l`` saddles stacked
beneath it from the viewing side).  The empty label on a type-I arc is
simply the absence of a letter.

The five rewriting rules are::

    I    R^{2i}        -> (nothing)
    II   S^i R S^i     -> R
    III  (SR)^{2i} S   -> R
    IV   P^i           -> (nothing)
    V    D{l}          -> S^{2l+1}

A cyclic word is *reducible* if some sequence of I-IV empties it; a
partial word of odd length is *R-reducible* if some sequence of I-III
leaves the single letter R.  The system is not confluent, so both
deciders search the whole rewrite graph.

    >>> is_omega_reducible(parse_word("SP2RSRSPSSRSS"))[0]
    True
    >>> is_omega_reducible(parse_word("SS"))[0]
    False
    >>> is_R_omega_reducible(parse_word("RSRSRSSRS", cyclic=False))[0]
    True
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence, Union

__all__ = [
    "SADDLE", "RCROSS", "PUNCTURE", "DEEP_SADDLE",
    "Letter", "S", "R", "P", "D",
    "CyclicWord", "PartialWord", "Word",
    "Site", "Step", "ReductionTrace",
    "WordError", "InvalidSite", "ContractViolation", "LengthBoundExceeded",
    "parse_word", "format_letters", "canonicalize", "canonical_key",
    "reduction_sites", "apply_rule", "strip_punctures",
    "is_omega_reducible", "is_R_omega_reducible", "l_reduce",
    "brute_force_oracle", "cyclic_sr_words",
]

SADDLE = "S"
RCROSS = "R"
PUNCTURE = "P"
DEEP_SADDLE = "D"

# S < R < P < D, ties broken by multiplicity.
_KIND_RANK = {SADDLE: 0, RCROSS: 1, PUNCTURE: 2, DEEP_SADDLE: 3}


class WordError(ValueError):
    """Malformed word string or letter."""


class InvalidSite(WordError):
    """A rule was applied at a site where its pattern does not match."""


class ContractViolation(WordError):
    """An operation was called outside its precondition."""


class LengthBoundExceeded(WordError):
    pass


@dataclass(frozen=True, order=False)
class Letter:
    kind: str
    multiplicity: int = 1

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise WordError(f"unknown letter kind {self.kind!r}")
        if self.kind in (SADDLE, RCROSS) and self.multiplicity != 1:
            raise WordError(f"{self.kind} carries no multiplicity")
        if self.kind == PUNCTURE and self.multiplicity < 1:
            raise WordError("puncture count must be at least 1")
        if self.kind == DEEP_SADDLE and self.multiplicity < 0:
            raise WordError("saddle depth must be non-negative")

    @property
    def sort_key(self):
        return (_KIND_RANK[self.kind], self.multiplicity)

    @property
    def is_saddle(self) -> bool:
        # D letters read as plain saddles for the pattern rules.
        return self.kind in (SADDLE, DEEP_SADDLE)

    def __str__(self):
        if self.kind == PUNCTURE:
            return f"P{self.multiplicity}" if self.multiplicity != 1 else "P"
        if self.kind == DEEP_SADDLE:
            return f"D{self.multiplicity}"
        return self.kind

    def __repr__(self):
        return f"Letter({self})"


S = Letter(SADDLE)
R = Letter(RCROSS)


def P(i: int = 1) -> Letter:
    return Letter(PUNCTURE, i)


def D(l: int) -> Letter:
    return Letter(DEEP_SADDLE, l)


_TOKEN = re.compile(r"\s*(?:(S)|(R)|P(\d*)|D(\d+))")


def _parse_letters(text: str) -> tuple[Letter, ...]:
    text = text.strip()
    if text in ("", "∅", "-", "0"):
        return ()
    letters = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise WordError(f"cannot parse word {text!r} at offset {pos}")
        s, r, p, d = m.groups()
        if s:
            letters.append(S)
        elif r:
            letters.append(R)
        elif p is not None:
            letters.append(P(int(p) if p else 1))
        else:
            letters.append(D(int(d)))
        pos = m.end()
        while pos < len(text) and text[pos] in " ,":
            pos += 1
    return tuple(letters)


def format_letters(letters: Iterable[Letter]) -> str:
    out = "".join(str(x) for x in letters)
    return out if out else "∅"


class _WordBase:
    letters: tuple[Letter, ...]
    cyclic: bool

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __str__(self):
        return format_letters(self.letters)

    @property
    def sr_length(self) -> int:
        """Number of S, R and D letters (punctures excluded)."""
        return sum(1 for x in self.letters if x.kind != PUNCTURE)

    def with_letters(self, letters):
        return type(self)(tuple(letters))


@dataclass(frozen=True, eq=False)
class CyclicWord(_WordBase):
    """A word read around a closed curve.

    Two cyclic words are equal when they differ by rotation, reversal,
    or by reordering the P and R letters that share a type-I arc.
    """
    letters: tuple[Letter, ...] = ()
    cyclic = True

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __eq__(self, other):
        if not isinstance(other, CyclicWord):
            return NotImplemented
        return canonical_key(self) == canonical_key(other)

    def __hash__(self):
        return hash(canonical_key(self))

    def __repr__(self):
        return f"CyclicWord({self})"

    def rotate(self, k: int) -> "CyclicWord":
        n = len(self.letters)
        if n == 0:
            return self
        k %= n
        return CyclicWord(self.letters[k:] + self.letters[:k])

    def reverse(self) -> "CyclicWord":
        return CyclicWord(self.letters[::-1])


@dataclass(frozen=True)
class PartialWord(_WordBase):
    """A word read along an arc of a curve; no wraparound."""
    letters: tuple[Letter, ...] = ()
    cyclic = False

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))

    def __repr__(self):
        return f"PartialWord({self})"


Word = Union[CyclicWord, PartialWord]


def parse_word(text: str, cyclic: bool = True) -> Word:
    """Parse the compact string form, e.g. ``SP2RSD1``.

    ``P`` without a count means one puncture.  Whether the word is cyclic
    must be stated by the caller; it is never inferred.
    """
    letters = _parse_letters(text)
    return CyclicWord(letters) if cyclic else PartialWord(letters)


# --------------------------------------------------------------------------
# canonical forms

def _normalize_runs(letters: Sequence[Letter], cyclic: bool) -> tuple[Letter, ...]:
    # P letters precede R letters inside each maximal run between saddles.
    n = len(letters)
    if n == 0:
        return ()
    if cyclic:
        start = next((k for k, x in enumerate(letters) if x.is_saddle), None)
        if start is None:
            return tuple(sorted(letters, key=lambda x: (x.kind != PUNCTURE, x.sort_key)))
        letters = tuple(letters[start:]) + tuple(letters[:start])
    out: list[Letter] = []
    run: list[Letter] = []
    for x in letters:
        if x.is_saddle:
            out.extend(_order_run(run))
            run = []
            out.append(x)
        else:
            run.append(x)
    out.extend(_order_run(run))
    return tuple(out)


def _order_run(run):
    ps = sorted((x for x in run if x.kind == PUNCTURE), key=lambda x: x.multiplicity)
    rs = [x for x in run if x.kind != PUNCTURE]
    return ps + rs


def _min_rotation(keys: tuple) -> tuple:
    n = len(keys)
    if n == 0:
        return keys
    doubled = keys + keys
    return min(doubled[k:k + n] for k in range(n))


def canonical_key(w: Word) -> tuple:
    """Sort-key tuple of the canonical representative of ``w``."""
    if w.cyclic:
        fwd = _normalize_runs(w.letters, True)
        bwd = _normalize_runs(w.letters[::-1], True)
        return min(_min_rotation(tuple(x.sort_key for x in fwd)),
                   _min_rotation(tuple(x.sort_key for x in bwd)))
    fwd = _normalize_runs(w.letters, False)
    bwd = _normalize_runs(w.letters[::-1], False)
    return min(tuple(x.sort_key for x in fwd), tuple(x.sort_key for x in bwd))


_FROM_KEY = {v: k for k, v in _KIND_RANK.items()}


def canonicalize(w: CyclicWord) -> CyclicWord:
    """Lexicographically least rotation over both orientations.

    >>> canonicalize(parse_word("RSRS"))
    CyclicWord(SRSR)
    >>> canonicalize(parse_word("RSS")) == canonicalize(parse_word("SSR"))
    True
    """
    if not w.cyclic:
        raise ContractViolation("canonicalize expects a cyclic word")
    key = canonical_key(w)
    return CyclicWord(tuple(Letter(_FROM_KEY[k], m) for k, m in key))


# --------------------------------------------------------------------------
# rule sites

class Site(NamedTuple):
    """An occurrence of a rule pattern.

    ``start`` indexes the first letter of the match, ``length`` is the
    number of letters consumed (wrapping for cyclic words) and ``i`` the
    exponent of the rule instance.
    """
    rule: str
    start: int
    length: int
    i: int


def _is_s(x: Letter) -> bool:
    return x.is_saddle


def _is_r(x: Letter) -> bool:
    return x.kind == RCROSS


def _pattern(rule: str, i: int) -> list:
    if rule == "I":
        return [_is_r] * (2 * i)
    if rule == "II":
        return [_is_s] * i + [_is_r] + [_is_s] * i
    if rule == "III":
        return [_is_s, _is_r] * (2 * i) + [_is_s]
    raise WordError(f"no pattern for rule {rule!r}")


def _matches(letters, start, pattern, cyclic) -> bool:
    n = len(letters)
    if len(pattern) > n:
        return False
    if not cyclic and start + len(pattern) > n:
        return False
    for k, test in enumerate(pattern):
        if not test(letters[(start + k) % n]):
            return False
    return True


def reduction_sites(w: Word) -> list[Site]:
    """Every place where one of rules I-IV matches.

    Cyclic matches may wrap, but never use a letter twice.

    >>> [s for s in reduction_sites(parse_word("SRSR")) if s.rule == "II"]
    [Site(rule='II', start=0, length=3, i=1), Site(rule='II', start=2, length=3, i=1)]
    >>> reduction_sites(parse_word("SS"))
    []
    """
    letters = w.letters
    n = len(letters)
    cyclic = w.cyclic
    sites = []
    for start in range(n):
        for rule, span in (("I", lambda i: 2 * i), ("II", lambda i: 2 * i + 1),
                           ("III", lambda i: 4 * i + 1)):
            i = 1
            while span(i) <= n:
                if _matches(letters, start, _pattern(rule, i), cyclic):
                    sites.append(Site(rule, start, span(i), i))
                elif rule != "II":
                    # I and III patterns extend their shorter instances.
                    break
                i += 1
        if letters[start].kind == PUNCTURE:
            sites.append(Site("IV", start, 1, letters[start].multiplicity))
    sites.sort(key=lambda s: (s.start, ("I", "II", "III", "IV").index(s.rule), s.i))
    return sites


def apply_rule(w: Word, rule: str, site) -> Word:
    """Rewrite ``w`` at ``site`` with ``rule``.

    ``site`` is a :class:`Site` or a start index (the smallest matching
    instance is used).  For a cyclic word the result is read starting at
    the replacement, so replaying a trace is deterministic.

    >>> str(apply_rule(parse_word("RR"), "I", 0))
    '∅'
    >>> str(apply_rule(parse_word("SRSRS", cyclic=False), "III", 0))
    'R'
    """
    if not isinstance(site, Site):
        candidates = [s for s in reduction_sites(w) if s.rule == rule and s.start == site]
        if not candidates:
            raise InvalidSite(f"rule {rule} does not match {w} at {site}")
        site = candidates[0]
    if site.rule != rule:
        raise InvalidSite(f"site is for rule {site.rule}, not {rule}")
    letters = w.letters
    n = len(letters)
    if not 0 <= site.start < n:
        raise InvalidSite(f"start {site.start} out of range for {w}")
    if rule == "IV":
        x = letters[site.start]
        if x.kind != PUNCTURE or site.length != 1:
            raise InvalidSite(f"no puncture at {site.start} in {w}")
        replacement: tuple[Letter, ...] = ()
    else:
        pattern = _pattern(rule, site.i)
        if len(pattern) != site.length or not _matches(letters, site.start, pattern, w.cyclic):
            raise InvalidSite(f"rule {rule} (i={site.i}) does not match {w} at {site.start}")
        replacement = () if rule == "I" else (R,)
    if w.cyclic:
        rotated = letters[site.start:] + letters[:site.start]
        return CyclicWord(replacement + rotated[site.length:])
    return PartialWord(letters[:site.start] + replacement + letters[site.start + site.length:])


def strip_punctures(w: Word) -> Word:
    return w.with_letters(x for x in w.letters if x.kind != PUNCTURE)


# --------------------------------------------------------------------------
# traces

@dataclass(frozen=True)
class Step:
    rule: str
    site: Site
    before: str
    after: str


@dataclass
class ReductionTrace:
    """Replayable record of a reduction; ``target`` is ``""`` or ``"R"``."""
    initial: str
    cyclic: bool
    target: str
    steps: list[Step] = field(default_factory=list)

    @property
    def final(self) -> str:
        return self.steps[-1].after if self.steps else format_letters(_parse_letters(self.initial))

    def replay(self) -> bool:
        """Re-apply every step and check each intermediate word.

        Raises :class:`InvalidSite` at the first step that does not match.
        """
        word = parse_word(self.initial, cyclic=self.cyclic)
        for step in self.steps:
            if str(word) != step.before:
                raise InvalidSite(f"trace expected {step.before}, have {word}")
            if step.rule == "V":
                word = l_reduce(word)
            else:
                word = apply_rule(word, step.rule, step.site)
            if str(word) != step.after:
                raise InvalidSite(f"step {step.rule} gave {word}, trace says {step.after}")
        return format_letters(word.letters) == format_letters(_parse_letters(self.target))

    def to_json(self) -> str:
        return json.dumps({
            "initial": self.initial,
            "cyclic": self.cyclic,
            "target": self.target,
            "steps": [
                {"rule": s.rule, "site": list(s.site), "before": s.before, "after": s.after}
                for s in self.steps
            ],
        }, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> "ReductionTrace":
        data = json.loads(text)
        steps = [Step(s["rule"], Site(*s["site"]), s["before"], s["after"]) for s in data["steps"]]
        return cls(data["initial"], bool(data["cyclic"]), data["target"], steps)

    def __str__(self):
        lines = [f"{self.initial}"]
        for s in self.steps:
            lines.append(f"  --{s.rule:>3} @{s.site.start} (i={s.site.i})--> {s.after}")
        return "\n".join(lines)


# --------------------------------------------------------------------------
# deciders

def _successors(w: Word):
    for site in reduction_sites(w):
        if site.rule != "IV":
            yield site, apply_rule(w, site.rule, site)


def _strip_with_trace(w: Word, trace: ReductionTrace) -> Word:
    while True:
        ps = [s for s in reduction_sites(w) if s.rule == "IV"]
        if not ps:
            return w
        after = apply_rule(w, "IV", ps[0])
        trace.steps.append(Step("IV", ps[0], str(w), str(after)))
        w = after


class _Searcher:
    def __init__(self, goal):
        self.goal = goal
        self.memo: dict[tuple, bool] = {}

    def solvable(self, w: Word) -> bool:
        key = canonical_key(w)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if self.goal(w):
            result = True
        elif w.sr_length % 2 != self._goal_parity:
            # I-III preserve parity of the S/R length.
            result = False
        else:
            result = any(self.solvable(nxt) for _, nxt in _successors(w))
        self.memo[key] = result
        return result

    def witness(self, w: Word, trace: ReductionTrace) -> None:
        while not self.goal(w):
            for site, nxt in _successors(w):
                if self.solvable(nxt):
                    trace.steps.append(Step(site.rule, site, str(w), str(nxt)))
                    w = nxt
                    break
            else:  # pragma: no cover - guarded by solvable()
                raise AssertionError("witness search lost its path")


class _CyclicSearcher(_Searcher):
    _goal_parity = 0

    def __init__(self):
        super().__init__(lambda w: len(w.letters) == 0)


class _PartialSearcher(_Searcher):
    _goal_parity = 1

    def __init__(self):
        super().__init__(lambda w: len(w.letters) == 1 and w.letters[0] == R)


def is_omega_reducible(w: CyclicWord) -> tuple[bool, ReductionTrace | None]:
    """Decide whether ``w`` rewrites to the empty word.

    Punctures are removed first (rule IV never blocks anything), then the
    rewrite graph is searched exhaustively with a memo keyed on canonical
    forms.  Returns the verdict and, when reducible, a witness trace.
    """
    if not w.cyclic:
        raise ContractViolation("is_omega_reducible expects a cyclic word")
    trace = ReductionTrace(str(w), True, "")
    w = _strip_with_trace(w, trace)
    search = _CyclicSearcher()
    if not search.solvable(w):
        return False, None
    search.witness(w, trace)
    return True, trace


def is_R_omega_reducible(w: PartialWord) -> tuple[bool, ReductionTrace | None]:
    """Decide whether an odd-length partial word rewrites to ``R``.

    Raises :class:`ContractViolation` for even length (counted over
    non-puncture letters), where the notion is undefined.
    """
    if w.cyclic:
        raise ContractViolation("is_R_omega_reducible expects a partial word")
    if w.sr_length % 2 == 0:
        raise ContractViolation(f"partial word {w} has even length {w.sr_length}")
    trace = ReductionTrace(str(w), False, "R")
    w = _strip_with_trace(w, trace)
    search = _PartialSearcher()
    if not search.solvable(w):
        return False, None
    search.witness(w, trace)
    return True, trace


def l_reduce(w: Word) -> Word:
    """Expand every ``D{l}`` into ``2l+1`` saddles, in place.

    >>> str(l_reduce(parse_word("RD2RS")))
    'RSSSSSRS'
    """
    out: list[Letter] = []
    for x in w.letters:
        if x.kind == DEEP_SADDLE:
            out.extend([S] * (2 * x.multiplicity + 1))
        else:
            out.append(x)
    return w.with_letters(out)


# --------------------------------------------------------------------------
# independent oracle

def _oracle_moves(s: str):
    # Prefix matches of each rule on a plain S/R string.
    n = len(s)
    i = 1
    while 2 * i <= n and s.startswith("R" * (2 * i)):
        yield 2 * i
        i += 1
    i = 1
    while 2 * i + 1 <= n and s.startswith("S" * i):
        if s[i] == "R" and s[i + 1:2 * i + 1] == "S" * i:
            yield -(2 * i + 1)
        i += 1
    i = 1
    while 4 * i + 1 <= n:
        if s[:4 * i + 1] == "SR" * (2 * i) + "S":
            yield -(4 * i + 1)
        else:
            break
        i += 1


def _oracle_cyclic(s: str) -> bool:
    if not s:
        return True
    seen = set()
    for k in range(len(s)):
        t = s[k:] + s[:k]
        for m in _oracle_moves(t):
            nxt = ("R" if m < 0 else "") + t[abs(m):]
            if nxt in seen:
                continue
            seen.add(nxt)
            if _oracle_cyclic(nxt):
                return True
    return False


def _oracle_linear(s: str) -> bool:
    if s == "R":
        return True
    seen = set()
    for k in range(len(s)):
        head, tail = s[:k], s[k:]
        for m in _oracle_moves(tail):
            nxt = head + ("R" if m < 0 else "") + tail[abs(m):]
            if nxt in seen:
                continue
            seen.add(nxt)
            if _oracle_linear(nxt):
                return True
    return False


def brute_force_oracle(w: Word, bound: int = 16) -> bool:
    """Decide reducibility by plain exhaustive recursion.

    Shares no code with the deciders above: words are flattened to S/R
    strings, punctures dropped, and every rule application is tried
    without memoization across branches.
    """
    s = "".join("S" if x.is_saddle else "R" for x in w.letters if x.kind != PUNCTURE)
    if len(s) > bound:
        raise LengthBoundExceeded(f"word length {len(s)} exceeds oracle bound {bound}")
    if w.cyclic:
        return _oracle_cyclic(s)
    return _oracle_linear(s)


def cyclic_sr_words(max_length: int):
    """One cyclic word over {S, R} per canonical class, by length.

    >>> [str(w) for w in cyclic_sr_words(2)]
    ['∅', 'S', 'R', 'SS', 'SR', 'RR']
    """
    seen = set()
    for n in range(max_length + 1):
        for combo in itertools.product((S, R), repeat=n):
            w = CyclicWord(combo)
            key = canonical_key(w)
            if key not in seen:
                seen.add(key)
                yield w
