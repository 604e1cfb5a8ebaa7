"""Tester evaluation, exact and sampled soundness, classification."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ltcforge.algebra import Field, VecSpace
from ltcforge.codes import Alphabet, Code, Word, dist_to_code, repetition_code, vector_alphabet
from ltcforge.constructions import dependence_tester, generalized_long_code
from ltcforge.errors import CapacityError, DomainError
from ltcforge.testers import (
    Check,
    Tester,
    accept_from_tuples,
    accepted_words,
    classify_linear,
    coordinate_classes,
    equality_tester,
    full_accept,
    pad_check,
    reject_probability,
    soundness_exact,
    soundness_sampled,
    tuples_from_accept,
    validate,
)

BIN = Alphabet.plain(2)
REP2 = repetition_code(BIN, 2)
EQ2 = equality_tester(BIN, 2)


def test_reject_probability_codeword():
    assert reject_probability(EQ2, Word(BIN, (0, 0))) == 0
    assert reject_probability(EQ2, Word(BIN, (1, 1))) == 0


def test_reject_probability_single_check():
    assert reject_probability(EQ2, Word(BIN, (0, 1))) == 1


def test_reject_probability_weighted_pairs():
    tester = equality_tester(BIN, 3)
    # checks on (0,1) and (1,2), weight 1/2 each; 001 violates only (1,2)
    assert reject_probability(tester, Word(BIN, (0, 0, 1))) == Fraction(1, 2)


def test_validate_dependence_tester_own_code():
    fam, code = generalized_long_code(2, Alphabet.plain(3))
    tester = dependence_tester(fam, 2)
    assert validate(tester, code).ok


def test_validate_rejected_codeword():
    bad = Code(BIN, 2, ((0, 1),))
    report = validate(EQ2, bad)
    assert not report.ok
    assert (0, (0, 1)) in report.violations


def test_validate_weight_sum():
    half = Check((0, 1), accept_from_tuples([(0, 0), (1, 1)], 2), Fraction(1, 2))
    tester = Tester(BIN, 2, 2, (half,))
    report = validate(tester, REP2)
    assert not report.ok and report.weight_sum == Fraction(1, 2)


def test_soundness_exact_equality_pair():
    # oracle: direct scan of the 4 binary words of length 2
    best = None
    for letters in itertools.product(range(2), repeat=2):
        if letters in ((0, 0), (1, 1)):
            continue
        word = Word(BIN, letters)
        ratio = reject_probability(EQ2, word) / dist_to_code(word, REP2)
        best = ratio if best is None else min(best, ratio)
    assert best == 2
    report = soundness_exact(EQ2, REP2)
    assert report.value == 2 and not report.infinite
    assert report.witness.letters == (0, 1)  # lexicographically smallest minimizer


def test_soundness_exact_full_space_sentinel():
    full = Code(BIN, 2, tuple(itertools.product(range(2), repeat=2)))
    report = soundness_exact(EQ2, full)
    assert report.infinite and report.value is None and report.witness is None


def test_soundness_exact_budget_error():
    with pytest.raises(CapacityError) as err:
        soundness_exact(EQ2, REP2, budget=3)
    assert err.value.required == 4


def test_soundness_exact_zero_with_witness():
    always = Tester(BIN, 2, 2, (Check((0, 1), full_accept(2, 2), Fraction(1)),))
    report = soundness_exact(always, REP2)
    assert report.value == 0
    assert report.witness.letters == (0, 1)


def test_soundness_exact_bound_verdicts():
    assert soundness_exact(EQ2, REP2, bound=Fraction(2)).verdict == "pass"
    assert soundness_exact(EQ2, REP2, bound=Fraction(5, 2)).verdict == "fail"


def test_soundness_fraction_fallback_matches():
    # weights with a denominator too large for the integer fast path
    huge = (1 << 63) + 1
    checks = (
        Check((0, 1), accept_from_tuples([(0, 0), (1, 1)], 2), Fraction(1, huge)),
        Check((0, 1), accept_from_tuples([(0, 0), (1, 1)], 2), Fraction(huge - 1, huge)),
    )
    tester = Tester(BIN, 2, 2, checks)
    report = soundness_exact(tester, REP2)
    assert report.value == 2 and report.witness.letters == (0, 1)


def test_soundness_sampled_deterministic_and_upper_bound():
    exact = soundness_exact(EQ2, REP2).value
    a = soundness_sampled(EQ2, REP2, trials=64, seed=123)
    b = soundness_sampled(EQ2, REP2, trials=64, seed=123)
    assert a == b
    assert a.value >= exact
    c = soundness_sampled(EQ2, REP2, trials=64, seed=124)
    assert c.value >= exact


def test_soundness_sampled_prefix_stability():
    # per-trial substreams: growing the trial count never changes old draws,
    # so the minimum over more trials can only stay or drop
    small = soundness_sampled(EQ2, REP2, trials=16, seed=9)
    large = soundness_sampled(EQ2, REP2, trials=64, seed=9)
    assert large.value <= small.value


def test_soundness_sampled_bound_flags():
    ok = soundness_sampled(EQ2, REP2, trials=32, seed=1, bound=Fraction(1))
    assert ok.verdict == "consistent"
    bad = soundness_sampled(EQ2, REP2, trials=32, seed=1, bound=Fraction(10))
    assert bad.verdict == "violated"


def test_soundness_sampled_hadamard_over_gf3():
    # 9^9 words exceed the exhaustive budget; the sampled value must sit
    # above the closed-form floor |domain|^(-2 dim(target))
    from ltcforge.constructions import generalized_hadamard

    fam, code = generalized_hadamard(VecSpace(Field(3), 1), VecSpace(Field(3), 2))
    tester = dependence_tester(fam, 2)
    with pytest.raises(CapacityError):
        soundness_exact(tester, code)
    report = soundness_sampled(tester, code, trials=10**4, seed=5, bound=Fraction(1, 81))
    assert report.verdict == "consistent"
    assert report.value >= Fraction(1, 81)


def test_positive_soundness_iff_accepted_set_is_code():
    # random validating testers: soundness > 0 exactly when nothing outside
    # the code survives every check
    import random

    from ltcforge.testers import accepted_words

    rng = random.Random(31337)
    seen = {True: 0, False: 0}
    for _ in range(20):
        size = rng.choice([2, 3])
        n = rng.choice([2, 3])
        alphabet = Alphabet.plain(size)
        words = set()
        while len(words) < rng.randrange(1, 4):
            words.add(tuple(rng.randrange(size) for _ in range(n)))
        code = Code(alphabet, n, tuple(sorted(words)))
        count = rng.randrange(1, 4)
        checks = []
        for _ in range(count):
            queries = tuple(rng.randrange(n) for _ in range(2))
            must = {tuple(cw[i] for i in queries) for cw in code.codewords}
            extra = {
                tuple(rng.randrange(size) for _ in range(2))
                for _ in range(rng.randrange(0, 3))
            }
            checks.append(
                Check(queries, accept_from_tuples(must | extra, size), Fraction(1, count))
            )
        tester = Tester(alphabet, n, 2, tuple(checks))
        assert validate(tester, code).ok
        report = soundness_exact(tester, code)
        if report.infinite:
            continue
        positive = report.value > 0
        accepted = set(accepted_words(tester))
        seen[positive] += 1
        assert positive == (accepted == set(code.codewords))
    assert seen[True] > 0 and seen[False] > 0


def test_weight_splitting_is_invisible():
    # splitting a check into two half-weight copies never changes rejection
    base = Check((0, 1), accept_from_tuples([(0, 0)], 2), Fraction(1))
    split = (
        Check((0, 1), base.accept, Fraction(1, 2)),
        Check((0, 1), base.accept, Fraction(1, 2)),
    )
    t1 = Tester(BIN, 2, 2, (base,))
    t2 = Tester(BIN, 2, 2, split)
    for letters in itertools.product(range(2), repeat=2):
        word = Word(BIN, letters)
        assert reject_probability(t1, word) == reject_probability(t2, word)


def test_classify_linear_equality_elementary():
    alphabet = vector_alphabet(2, 1)
    tester = equality_tester(alphabet, 2)
    result = classify_linear(tester)
    assert result.kind == "elementary"
    assert result.functionals == ((1, 1),)


def test_classify_linear_not_elementary():
    alphabet = vector_alphabet(2, 1)
    zero_only = Check((0, 1), accept_from_tuples([(0, 0)], 2), Fraction(1))
    result = classify_linear(Tester(alphabet, 2, 2, (zero_only,)))
    assert result.kind == "linear"


def test_classify_nonlinear():
    alphabet = vector_alphabet(2, 1)
    accept = accept_from_tuples([(0, 0), (1, 1), (1, 0)], 2)
    result = classify_linear(Tester(alphabet, 2, 2, (Check((0, 1), accept, Fraction(1)),)))
    assert result.kind == "nonlinear"


def test_classify_linear_needs_vector_alphabet():
    with pytest.raises(DomainError):
        classify_linear(EQ2)


def test_accepted_words_matches_filter():
    fam, code = generalized_long_code(2, Alphabet.plain(2))
    tester = dependence_tester(fam, 2)
    brute = [
        letters
        for letters in itertools.product(range(2), repeat=tester.n)
        if reject_probability(tester, Word(Alphabet.plain(2), letters)) == 0
    ]
    assert accepted_words(tester) == brute


def test_accepted_words_budget():
    with pytest.raises(CapacityError):
        accepted_words(EQ2, budget=2)


def test_coordinate_classes_equality_check():
    accept = accept_from_tuples([(a, a) for a in range(3)], 3)
    classes = coordinate_classes(accept, 3, 2, 0)
    assert classes == [[0], [1], [2]]


def test_coordinate_classes_ignored_coordinate():
    accept = accept_from_tuples([(0, b) for b in range(2)], 2)
    assert coordinate_classes(accept, 2, 2, 1) == [[0, 1]]


def test_pad_check_semantics():
    base = Check((1,), accept_from_tuples([(1,)], 2), Fraction(1))
    padded = pad_check(base, 3, 2)
    assert padded.queries == (1, 1, 1)
    for tup in itertools.product(range(2), repeat=3):
        want = tup[0] == 1
        assert padded.accepts(tup, 2) == want


def test_check_rejects_out_of_range_position():
    with pytest.raises(DomainError):
        Tester(BIN, 2, 2, (Check((0, 5), full_accept(2, 2), Fraction(1)),))


def test_accept_bitset_size_cap():
    # alphabet^arity is capped at 2^24 bits per check
    with pytest.raises(CapacityError):
        Tester(BIN, 1, 25, (Check((0,) * 25, 1, Fraction(1)),))


def test_accept_roundtrip():
    tuples = [(0, 1), (2, 0)]
    accept = accept_from_tuples(tuples, 3)
    assert sorted(tuples_from_accept(accept, 3, 2)) == sorted(tuples)


@given(st.integers(min_value=0, max_value=2**9 - 1))
def test_accept_bitset_roundtrip_random(bits):
    got = accept_from_tuples(tuples_from_accept(bits, 3, 2), 3)
    assert got == bits
