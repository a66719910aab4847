"""Acceptance run: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.  The r=8 enumeration takes a few
minutes on one core.
"""
from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import ENUMERATION_SECONDS, enumerated, fixture_path  # noqa: E402
from knotword.diagram import check_normal_position, label_curve, load_presentation, parse_presentation  # noqa: E402
from knotword.pullback import (PullbackGraph, admissible, build_pullback, canonical_code,  # noqa: E402
                               check_bounds, classify, euler, region_r_lower_bound)
from knotword.virtual import check_main_theorem, expand_virtual  # noqa: E402
from knotword.wordcore import (R, S, CyclicWord, PartialWord, ReductionTrace, apply_rule,  # noqa: E402
                               brute_force_oracle, cyclic_sr_words, is_omega_reducible,
                               is_R_omega_reducible, parse_word, reduction_sites)

# Closed fixtures in normal position with both spheres drawn.
CLOSED = ["fig10_sphere.kw", "r6_sphere.kw", "split_sphere.kw", "fig8_torus.kw"]
# Fixtures whose regions can be read off: the closed ones plus a sketch with a sides table.
REGIONED = CLOSED + ["fig4_paired.kw"]

BIGON_SPHERE = PullbackGraph((1, 0, 3, 2), (2, 3, 0, 1), (True,) * 4)
SQUARE_TORUS = PullbackGraph((1, 2, 3, 0, 5, 6, 7, 4), (4, 5, 6, 7, 0, 1, 2, 3), (True,) * 8)

FROZEN_COUNTS = {4: {0: 1}, 6: {0: 1}, 8: {0: 6, 1: 2}}


@pytest.fixture
def report(capsys):
    """Run a check and print its verdict line past pytest's capture."""
    def run(number: int, title: str, check) -> None:
        start = time.perf_counter()
        try:
            detail = check()
        except BaseException as exc:
            line = f"criterion {number:>2} FAIL  {title}: {type(exc).__name__}: {exc}"
            raise
        else:
            line = f"criterion {number:>2} PASS  {title}: {detail} [{time.perf_counter() - start:.1f}s]"
        finally:
            with capsys.disabled():
                print("\n" + line)
    return run


def _load(name):
    return load_presentation(fixture_path(name))


# --------------------------------------------------------------------------

def test_criterion_01_oracle_equivalence(report):
    def check():
        start = time.perf_counter()
        words = list(cyclic_sr_words(12))
        bad = [str(w) for w in words if is_omega_reducible(w)[0] != brute_force_oracle(w)]
        elapsed = time.perf_counter() - start
        assert not bad, f"disagreements: {bad[:5]}"
        assert len(words) < 10_000
        assert elapsed < 60, f"took {elapsed:.1f}s"
        return f"{len(words)} classes, 0 disagreements"
    report(1, "decider matches brute force up to length 12", check)


def test_criterion_02_word_fixtures(report):
    def check():
        cases = [
            ("RSRSRSSRS", False, is_R_omega_reducible),
            ("SSRSSSSRSSR", False, is_R_omega_reducible),
            ("SP2RSRSPSSRSS", True, is_omega_reducible),
        ]
        for text, cyclic, decide in cases:
            ok, trace = decide(parse_word(text, cyclic=cyclic))
            assert ok is True, text
            assert ReductionTrace.from_json(trace.to_json()).replay(), text
            assert brute_force_oracle(parse_word(text, cyclic=cyclic)), text
        return "3 reducible, traces replay"
    report(2, "stored words reduce", check)


def test_criterion_03_even_saddle_powers(report):
    def check():
        for k in range(1, 7):
            assert is_omega_reducible(CyclicWord((S,) * (2 * k)))[0] is False, k
        return "S^2 .. S^12 irreducible"
    report(3, "words without R never reduce", check)


def test_criterion_04_parity(report):
    def check():
        rng = random.Random(20261019)
        applied = violations = 0
        while applied < 100_000:
            n = rng.randrange(1, 17)
            letters = tuple(rng.choice((S, R)) for _ in range(n))
            w = CyclicWord(letters) if rng.random() < 0.5 else PartialWord(letters)
            while applied < 100_000:
                sites = [s for s in reduction_sites(w) if s.rule in ("I", "II", "III")]
                if not sites:
                    break
                site = rng.choice(sites)
                nxt = apply_rule(w, site.rule, site)
                applied += 1
                violations += (len(nxt) - len(w)) % 2
                w = nxt
        assert violations == 0
        return f"{applied} applications, 0 parity changes"
    report(4, "rules keep length parity", check)


def _stacked(depth: int):
    stack = [f"u{j}" for j in range(depth)] + ["top"]
    return parse_presentation({"surface": {
        "saddles": {"B": stack, "E": ["e"]},
        "curves_plus": [{"id": "c", "arcs": ["top:L", "e:L"]}],
    }})


def test_criterion_05_l_reduction_counts(report):
    def check():
        for l in range(4):
            p = _stacked(l)
            c = p.curve("c")
            before = sum(1 for a in c.arcs)
            vd, word = expand_virtual(c, p)
            assert len(vd.base[0]) == 1 + 2 * l, l
            assert sum(1 for x in word if x.is_saddle) - before == 2 * l, l
        return "l=0..3 give 1, 3, 5, 7 bubbles"
    report(5, "virtual expansion sizes", check)


def test_criterion_06_fixture_verdicts(report):
    def check():
        for name in ("fig4_paired.kw", "fig8_torus.kw", "fig8_stacked.kw"):
            verdicts = check_main_theorem(_load(name))
            assert verdicts and all(v.reducible for v in verdicts), name
        stacked = _load("fig8_stacked.kw")
        vd, _ = expand_virtual(stacked.curve("C"), stacked)
        assert str(label_curve(stacked.curve("C"), stacked)).startswith("D1")
        assert len(vd.base[0]) == 3
        p = _load("alternating_violation.kw")
        bad = [v for v in check_main_theorem(p) if v.reducible is False]
        assert bad, "no irreducible curve"
        for v in bad:
            assert v.witness is not None, v.curve
            assert v.witness.bubble in p.diagram.bubbles
            assert len(v.witness.virtual) >= 2
        w = bad[0].witness
        return f"{len(bad)} irreducible, e.g. {w}"
    report(6, "virtual words on fixtures", check)


def _graphs_for_criterion_7():
    graphs = [(name, build_pullback(_load(name))) for name in CLOSED]
    for r in (4, 6, 8):
        graphs += [(f"r={r}", g) for g in enumerated(r).configurations]
    return graphs


def test_criterion_07_euler_identity(report):
    def check():
        graphs = _graphs_for_criterion_7()
        for label, g in graphs:
            chi = euler(g)  # raises if V-E+F and the census disagree
            assert chi <= g.r_count - g.num_saddles, label
        return f"{len(graphs)} graphs"
    report(7, "V-E+F matches the face census and chi <= |R|-|S|", check)


def test_criterion_08_enumeration(report):
    def check():
        counts = {}
        for r in (4, 6, 8):
            counts[r] = enumerated(r).counts_by_genus()
            assert counts[r] == FROZEN_COUNTS[r], (r, counts[r])
        elapsed = sum(ENUMERATION_SECONDS[r] for r in (4, 6, 8))
        assert set(counts[4]) == {0} and set(counts[6]) == {0}
        assert set(counts[8]) <= {0, 1} and counts[8].get(1, 0) >= 2
        assert canonical_code(BIGON_SPHERE) in enumerated(4).codes
        assert canonical_code(SQUARE_TORUS) in enumerated(8).codes
        assert canonical_code(build_pullback(_load("split_sphere.kw"))) in enumerated(8).codes
        assert elapsed < 600, f"took {elapsed:.0f}s"
        return f"genus counts {counts}, enumeration {elapsed:.0f}s"
    report(8, "small configurations are spheres and tori", check)


def test_criterion_09_face_bound(report):
    def check():
        worst = {}
        for r in (4, 6, 8):
            for g in enumerated(r).configurations:
                assert max(len(f) for _, f in g.faces()) <= r - 2, r
            worst[r] = enumerated(r).max_face()
        return f"largest faces {worst}"
    report(9, "faces have at most |R|-2 vertices", check)


def test_criterion_10_region_bounds(report):
    def check():
        regions = 0
        for name in REGIONED:
            p = _load(name)
            for sign in "+-":
                for c in p.curves(sign):
                    for side in "LR":
                        m0, found = region_r_lower_bound(c, p, side)
                        assert found >= m0, (name, c.id, side)
                        regions += 1
        return f"{regions} regions on {len(REGIONED)} fixtures"
    report(10, "every region holds enough R labels", check)


# --------------------------------------------------------------------------
# supporting checks

@pytest.mark.parametrize("name", CLOSED)
def test_closed_fixtures_are_in_normal_position(name):
    assert check_normal_position(_load(name)).ok


@pytest.mark.parametrize("name, r", [("fig10_sphere.kw", 4), ("r6_sphere.kw", 6), ("split_sphere.kw", 8)])
def test_fixture_pullbacks_are_enumerated(name, r):
    g = build_pullback(_load(name))
    assert g.r_count == r
    assert canonical_code(g) in enumerated(r).codes


def test_torus_fixture_passes_every_filter():
    g = build_pullback(_load("fig8_torus.kw"))
    assert classify(euler(g)) == 1
    assert admissible(g, 12) and check_bounds(g).ok


@pytest.mark.parametrize("name", ["fig3a_meridian.kw", "alternating_violation.kw"])
def test_counter_fixtures_break_the_region_bound(name):
    p = _load(name)
    assert not check_normal_position(p).ok
    with pytest.raises(AssertionError):
        for c in p.curves("+"):
            for side in "LR":
                region_r_lower_bound(c, p, side)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
