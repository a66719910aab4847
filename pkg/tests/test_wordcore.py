import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from knotword.wordcore import (D, P, R, S, ContractViolation, CyclicWord, InvalidSite, LengthBoundExceeded,
                               PartialWord, ReductionTrace, WordError, apply_rule, brute_force_oracle,
                               canonical_key, canonicalize, cyclic_sr_words, is_omega_reducible,
                               is_R_omega_reducible, l_reduce, parse_word, reduction_sites, strip_punctures)

sr_letters = st.lists(st.sampled_from([S, R]), max_size=10)
any_letters = st.lists(st.one_of(st.sampled_from([S, R]), st.integers(1, 3).map(P)), max_size=10)


def cyc(text):
    return parse_word(text)


def part(text):
    return parse_word(text, cyclic=False)


class TestParsing:
    def test_roundtrip(self):
        assert str(cyc("SP2RSRSPSSRSS")) == "SP2RSRSPSSRSS"

    def test_empty_forms(self):
        for text in ("", "∅", "-"):
            assert len(cyc(text)) == 0

    def test_deep_saddle(self):
        assert cyc("D2").letters == (D(2),)

    @pytest.mark.parametrize("bad", ["X", "SQ", "P0", "D"])
    def test_rejects(self, bad):
        with pytest.raises(WordError):
            cyc(bad)

    def test_cyclic_equality_up_to_rotation_and_reversal(self):
        assert cyc("SSRR") == cyc("RSSR") == cyc("RRSS")
        assert cyc("SRRSR") == cyc("RSRRS")
        assert cyc("SSR") != cyc("SRR")

    def test_p_and_r_order_within_a_type_one_arc(self):
        assert cyc("SPRS") == cyc("SRPS")

    def test_canonicalize_is_idempotent(self):
        w = cyc("RSSRSP2")
        assert canonicalize(canonicalize(w)).letters == canonicalize(w).letters


class TestRules:
    def test_sites_of_srsr(self):
        rules = {s.rule for s in reduction_sites(cyc("SRSR"))}
        assert rules == {"II"}

    def test_rule_one_needs_even_run(self):
        assert [s.i for s in reduction_sites(cyc("RRRR")) if s.rule == "I" and s.start == 0] == [1, 2]

    def test_rule_three(self):
        assert str(apply_rule(part("SRSRS"), "III", 0)) == "R"

    def test_partial_words_do_not_wrap(self):
        assert not [s for s in reduction_sites(part("RSR")) if s.rule == "I"]
        assert [s for s in reduction_sites(cyc("RSR")) if s.rule == "I"]

    def test_invalid_site(self):
        with pytest.raises(InvalidSite):
            apply_rule(cyc("SS"), "I", 0)

    def test_deep_saddle_matches_as_saddle(self):
        assert reduction_sites(cyc("D1RD1R"))

    def test_l_reduce_counts(self):
        for l in range(4):
            w = l_reduce(CyclicWord((D(l), R)))
            assert str(w) == "S" * (2 * l + 1) + "R"


class TestDeciders:
    @pytest.mark.parametrize("word, expected", [
        ("SRSR", True), ("RR", True), ("SS", False), ("SSSS", False), ("S", False),
        ("SP2RSRSPSSRSS", True), ("", True),
    ])
    def test_cyclic(self, word, expected):
        assert is_omega_reducible(cyc(word))[0] is expected

    @pytest.mark.parametrize("word, expected", [
        ("RSRSRSSRS", True), ("SSRSSSSRSSR", True), ("R", True), ("S", False), ("SSS", False),
    ])
    def test_partial(self, word, expected):
        assert is_R_omega_reducible(part(word))[0] is expected

    def test_contracts(self):
        with pytest.raises(ContractViolation):
            is_R_omega_reducible(part("SR"))
        with pytest.raises(ContractViolation):
            is_omega_reducible(part("SRS"))
        with pytest.raises(ContractViolation):
            is_R_omega_reducible(cyc("SRS"))

    def test_trace_json_roundtrip(self):
        ok, trace = is_omega_reducible(cyc("SP2RSRSPSSRSS"))
        again = ReductionTrace.from_json(trace.to_json())
        assert ok and again.replay()
        assert again.final == "∅"

    def test_tampered_trace_fails(self):
        _, trace = is_omega_reducible(cyc("SRSR"))
        trace.steps[0] = trace.steps[0].__class__("I", trace.steps[0].site, trace.steps[0].before, "RR")
        with pytest.raises(InvalidSite):
            trace.replay()

    def test_even_saddle_powers_are_irreducible(self):
        for k in range(1, 7):
            assert not is_omega_reducible(CyclicWord((S,) * (2 * k)))[0]

    def test_oracle_bound(self):
        with pytest.raises(LengthBoundExceeded):
            brute_force_oracle(CyclicWord((S,) * 17))

    def test_class_listing(self):
        words = list(cyclic_sr_words(6))
        assert len({canonical_key(w) for w in words}) == len(words)
        # necklaces with reversal over two letters: 1, 2, 3, 4, 6, 8, 13
        assert len(words) == 1 + 2 + 3 + 4 + 6 + 8 + 13


@settings(max_examples=150, deadline=None)
@given(sr_letters)
def test_decider_agrees_with_oracle(letters):
    w = CyclicWord(tuple(letters))
    assert is_omega_reducible(w)[0] == brute_force_oracle(w)


@settings(max_examples=150, deadline=None)
@given(sr_letters.filter(lambda x: len(x) % 2 == 1))
def test_partial_decider_agrees_with_oracle(letters):
    w = PartialWord(tuple(letters))
    assert is_R_omega_reducible(w)[0] == brute_force_oracle(w)


@settings(max_examples=100, deadline=None)
@given(sr_letters, st.integers(0, 20), st.booleans())
def test_verdict_is_invariant_under_symmetry(letters, k, flip):
    w = CyclicWord(tuple(letters))
    v = w.rotate(k)
    if flip:
        v = v.reverse()
    assert is_omega_reducible(w)[0] == is_omega_reducible(v)[0]


@settings(max_examples=100, deadline=None)
@given(any_letters)
def test_punctures_never_matter(letters):
    w = CyclicWord(tuple(letters))
    assert is_omega_reducible(w)[0] == is_omega_reducible(strip_punctures(w))[0]


@settings(max_examples=100, deadline=None)
@given(sr_letters)
def test_reducible_traces_replay(letters):
    ok, trace = is_omega_reducible(CyclicWord(tuple(letters)))
    if ok:
        assert ReductionTrace.from_json(trace.to_json()).replay()


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from([S, R]), min_size=1, max_size=14), st.randoms(use_true_random=False))
def test_rules_preserve_parity(letters, rnd):
    w = CyclicWord(tuple(letters))
    for _ in range(5):
        sites = reduction_sites(w)
        if not sites:
            break
        site = rnd.choice(sites)
        nxt = apply_rule(w, site.rule, site)
        assert len(nxt) % 2 == len(w) % 2
        w = nxt


def test_reducible_words_have_even_length():
    rng = random.Random(7)
    for _ in range(200):
        w = CyclicWord(tuple(rng.choice([S, R]) for _ in range(rng.randrange(1, 12))))
        if is_omega_reducible(w)[0]:
            assert len(w) % 2 == 0
