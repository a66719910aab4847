import dataclasses

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotword.diagram import load_presentation, parse_presentation
from knotword.virtual import (PreconditionUnmet, check_main_theorem, expand_virtual, lemma35_crosscheck,
                              meridian_witness, pair_up_saddles)
from knotword.wordcore import is_omega_reducible

from conftest import fixture_path


def stacked(depth, side="L", sign="+"):
    """One curve meeting the top saddle of a bubble holding ``depth + 1``
    saddles, plus a plain saddle elsewhere."""
    stack = [f"u{j}" for j in range(depth)] + ["top"]
    key = "curves_plus" if sign == "+" else "curves_minus"
    if sign == "-":
        stack = stack[::-1]
    return parse_presentation({"surface": {
        "saddles": {"B": stack, "E": ["e"]},
        key: [{"id": "c", "arcs": [f"top:{side}", "e:L"]}],
    }})


class TestExpansion:
    @pytest.mark.parametrize("l", range(4))
    def test_bubble_and_letter_counts(self, l):
        p = stacked(l)
        c = p.curve("c")
        vd, word = expand_virtual(c, p)
        assert len(vd.base[0]) == 2 * l + 1
        assert sum(1 for x in word if x.is_saddle) == 2 * l + 2

    @pytest.mark.parametrize("l", range(4))
    def test_picture_and_rewrite_agree(self, l):
        p = stacked(l)
        vd, word = expand_virtual(p.curve("c"), p)
        assert vd.word() == word

    def test_sides_alternate_with_outer_on_the_real_side(self):
        p = stacked(2, side="R")
        vd, _ = expand_virtual(p.curve("c"), p)
        sides = [vd.bubbles[b].side for b in vd.base[0]]
        assert sides == ["R", "L", "R", "L", "R"]

    def test_beneath_saddles_split_around_the_middle(self):
        p = stacked(2)
        vd, _ = expand_virtual(p.curve("c"), p)
        owners = [vd.bubbles[b].saddles for b in vd.base[0]]
        assert owners == [("u0",), ("u1",), ("top",), ("u1",), ("u0",)]

    def test_minus_side_depth_counts_from_below(self):
        p = stacked(1, sign="-")
        vd, _ = expand_virtual(p.curve("c"), p)
        assert len(vd.base[0]) == 3

    def test_dot_output(self):
        p = load_presentation(fixture_path("fig10_sphere.kw"))
        vd, _ = expand_virtual(p.curve("p1"), p)
        dot = vd.to_dot()
        assert dot.startswith('graph "p1"') and dot.rstrip().endswith("}")


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.sampled_from("LR")), min_size=1, max_size=4))
def test_mirrored_placement_gives_the_same_word(shape):
    # Placing the first virtual bubble on the other side mirrors every
    # side at once, which leaves each R label unchanged.
    saddles, arcs = {}, []
    for k, (depth, side) in enumerate(shape):
        saddles[f"B{k}"] = [f"u{k}_{j}" for j in range(depth)] + [f"t{k}"]
        arcs.append(f"t{k}:{side}")
    p = parse_presentation({"surface": {"saddles": saddles, "curves_plus": [{"id": "c", "arcs": arcs}]}})
    vd, word = expand_virtual(p.curve("c"), p)
    flip = {"L": "R", "R": "L"}
    mirrored = dataclasses.replace(vd, bubbles={k: dataclasses.replace(b, side=flip[b.side])
                                                for k, b in vd.bubbles.items()})
    assert mirrored.word() == vd.word() == word


class TestPairing:
    def test_classes_and_leftover(self):
        p = load_presentation(fixture_path("fig4_paired.kw"))
        part = pair_up_saddles(p.curve("C"), p)
        assert part.classes() == {1: ["S1a", "S1b", "S1c"], 2: ["S2a", "S2b", "S2c", "S2d"]}
        assert part.unassigned() == ["S3"]

    def test_crosscheck_needs_everything_paired(self):
        p = load_presentation(fixture_path("fig4_paired.kw"))
        with pytest.raises(PreconditionUnmet):
            lemma35_crosscheck(p.curve("C"), p)

    def test_crosscheck_on_fully_paired_curve(self):
        p = load_presentation(fixture_path("fig4_paired.kw"))
        assert lemma35_crosscheck(p.curve("m2"), p)


class TestVerdicts:
    def test_alternating_pattern_is_caught(self):
        p = load_presentation(fixture_path("alternating_violation.kw"))
        verdicts = check_main_theorem(p)
        bad = [v for v in verdicts if v.reducible is False]
        assert bad
        assert all(v.witness is not None for v in bad)
        assert {v.witness.bubble for v in bad} <= set(p.stacks)

    @pytest.mark.parametrize("name", ["fig10_sphere.kw", "fig4_paired.kw", "fig2_curve.kw"])
    def test_valid_fixtures_reduce(self, name):
        assert all(v.reducible for v in check_main_theorem(load_presentation(fixture_path(name))))

    def test_normal_sphere_has_no_witness(self):
        p = load_presentation(fixture_path("fig10_sphere.kw"))
        for c in p.curves():
            vd, _ = expand_virtual(c, p)
            assert meridian_witness(vd) is None

    def test_empty_curves_are_reported_apart(self):
        p = load_presentation(fixture_path("empty_curve.kw"))
        (v,) = [v for v in check_main_theorem(p) if v.curve == "p2"]
        assert v.reducible is None and v.note == "empty word"
