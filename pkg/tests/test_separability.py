"""Separability decisions, replacement testers, compatibility plumbing."""

import itertools
import random
from fractions import Fraction

import pytest

from ltcforge.algebra import Field, VecSpace
from ltcforge.codes import Alphabet, Word, repetition_code, vector_alphabet
from ltcforge.concat import CompatFailure, check_f_compatible, verify_witness
from ltcforge.constructions import generalized_hadamard, generalized_long_code
from ltcforge.errors import DomainError, MismatchError
from ltcforge.separability import (
    SeparabilityCertificate,
    SeparabilityFailure,
    check_linearly_separable,
    check_separable,
    compatibility_encoder,
    extend_compatibility,
    linear_separable_replacement,
    separable_replacement,
    witness_from_certificate,
)
from ltcforge.testers import (
    Check,
    Tester,
    accept_from_tuples,
    classify_linear,
    equality_tester,
    full_accept,
    reject_probability,
    soundness_exact,
)

BIN = Alphabet.plain(2)
TRI = Alphabet.plain(3)


def test_equality_separable_when_target_large_enough():
    eq3 = equality_tester(TRI, 2)
    cert = check_separable(eq3, 3)
    assert isinstance(cert, SeparabilityCertificate)
    # the per-coordinate maps are injective: three singleton classes
    assert all(len(chk.partitions[0]) == 3 for chk in cert.checks)


def test_equality_over_three_symbols_not_binary_separable():
    eq3 = equality_tester(TRI, 2)
    outcome = check_separable(eq3, 2)
    assert isinstance(outcome, SeparabilityFailure)
    assert outcome.required == 3


def test_always_accept_separable():
    tester = Tester(TRI, 2, 2, (Check((0, 1), full_accept(3, 2), Fraction(1)),))
    cert = check_separable(tester, 2)
    assert isinstance(cert, SeparabilityCertificate)
    assert all(len(chk.partitions[0]) == 1 for chk in cert.checks)


def test_elementary_tester_linearly_separable_into_field():
    tester = equality_tester(vector_alphabet(2, 2), 2)
    cert = check_linearly_separable(tester, VecSpace(Field(2), 2))
    assert isinstance(cert, SeparabilityCertificate)


def test_zero_only_accept_linearly_separable():
    alphabet = vector_alphabet(2, 1)
    zero_only = Check((0, 1), accept_from_tuples([(0, 0)], 2), Fraction(1))
    tester = Tester(alphabet, 2, 2, (zero_only,))
    cert = check_linearly_separable(tester, VecSpace(Field(2), 1))
    assert isinstance(cert, SeparabilityCertificate)


def test_equality_on_plane_alphabet_not_field_separable():
    tester = equality_tester(vector_alphabet(2, 2), 2)
    outcome = check_linearly_separable(tester, VecSpace(Field(2), 1))
    assert isinstance(outcome, SeparabilityFailure)
    assert outcome.required == 2  # codimension of the zero subspace


def test_linear_check_requires_linear_tester():
    tester = Tester(
        vector_alphabet(2, 1),
        2,
        2,
        (Check((0, 1), accept_from_tuples([(0, 0), (1, 0), (1, 1)], 2), Fraction(1)),),
    )
    with pytest.raises(DomainError):
        check_linearly_separable(tester, VecSpace(Field(2), 1))


def test_separable_replacement_pointwise_exact_factor():
    eq = equality_tester(BIN, 2)
    replaced = separable_replacement(eq, Fraction(2), 2)
    assert sum(ch.weight for ch in replaced.checks) == 1
    for letters in itertools.product(range(2), repeat=2):
        word = Word(BIN, letters)
        assert reject_probability(replaced, word) == reject_probability(eq, word) / 4


def test_separable_replacement_soundness_and_certificate():
    eq = equality_tester(BIN, 2)
    code = repetition_code(BIN, 2)
    replaced = separable_replacement(eq, Fraction(2), 2)
    assert soundness_exact(replaced, code).value >= Fraction(1, 2)
    assert isinstance(check_separable(replaced, 2), SeparabilityCertificate)


def test_replacements_preserve_accepted_sets():
    from ltcforge.testers import accepted_words

    eq3 = equality_tester(TRI, 3)
    replaced = separable_replacement(eq3, Fraction(1), 2)
    assert accepted_words(replaced) == accepted_words(eq3)

    lin = equality_tester(vector_alphabet(2, 2), 2)
    replaced_lin = linear_separable_replacement(lin, Fraction(1), VecSpace(Field(2), 1))
    assert accepted_words(replaced_lin) == accepted_words(lin)


def test_linear_replacement_components_and_soundness():
    code = repetition_code(vector_alphabet(2, 1), 2)
    tester = equality_tester(code.alphabet, 2)
    mu = soundness_exact(tester, code).value
    replaced = linear_separable_replacement(tester, mu, VecSpace(Field(2), 1))
    assert replaced.meta["m"] == 2
    assert classify_linear(replaced).kind != "nonlinear"
    assert soundness_exact(replaced, code).value >= mu / 2
    cert = check_linearly_separable(replaced, VecSpace(Field(2), 1))
    assert isinstance(cert, SeparabilityCertificate)


def test_linear_replacement_single_component_identity_case():
    # when the target is large enough a single component suffices
    code = repetition_code(vector_alphabet(2, 1), 2)
    tester = equality_tester(code.alphabet, 2)
    replaced = linear_separable_replacement(tester, Fraction(2), VecSpace(Field(2), 2))
    assert replaced.meta["m"] == 1
    for letters in itertools.product(range(2), repeat=2):
        word = Word(code.alphabet, letters)
        assert reject_probability(replaced, word) == reject_probability(tester, word)


def test_compatibility_encoder_images():
    enc = compatibility_encoder(BIN, TRI, False)
    _, long_code = generalized_long_code(2, TRI)
    assert enc.k == 9
    assert set(enc.image_code().codewords) == set(long_code.codewords)

    lin = compatibility_encoder(vector_alphabet(2, 1), vector_alphabet(2, 2), True)
    _, hadamard = generalized_hadamard(VecSpace(Field(2), 1), VecSpace(Field(2), 2))
    assert lin.k == 4
    assert set(lin.image_code().codewords) == set(hadamard.codewords)


def test_compatibility_encoder_point_separation():
    enc = compatibility_encoder(TRI, BIN, False)
    images = [enc.encode(s) for s in range(3)]
    assert len(set(images)) == 3


def test_witness_from_certificate_verifies():
    eq = equality_tester(BIN, 2)
    replaced = separable_replacement(eq, Fraction(2), 2)
    cert = check_separable(replaced, 2)
    enc = compatibility_encoder(BIN, BIN, False)
    wit = witness_from_certificate(cert, replaced, enc)
    assert verify_witness(replaced, enc, wit)


def test_extend_compatibility_identity():
    eq = equality_tester(BIN, 2)
    enc = compatibility_encoder(BIN, BIN, False)
    wit = check_f_compatible(eq, enc)
    same = extend_compatibility(wit, enc, enc)
    assert verify_witness(eq, enc, same)
    assert [e.positions for e in same.entries] == [e.positions for e in wit.entries]


def test_extend_compatibility_into_larger_family():
    from ltcforge.concat import Encoder
    from ltcforge.constructions import FunctionFamily, critical_family

    code = repetition_code(vector_alphabet(2, 1), 2)
    tester = equality_tester(code.alphabet, 2)
    sep = linear_separable_replacement(tester, Fraction(2), VecSpace(Field(2), 1))
    cert = check_linearly_separable(sep, VecSpace(Field(2), 1))
    g_enc = compatibility_encoder(code.alphabet, vector_alphabet(2, 1), True)
    wit = witness_from_certificate(cert, sep, g_enc)
    derived = critical_family(g_enc.family)
    k = 2 + 2 * 4
    padded = FunctionFamily(
        2, derived.target, derived.tables + ((0, 0),) * (k - derived.k)
    )
    enc2 = Encoder(padded)
    extended = extend_compatibility(wit, g_enc, enc2)
    assert verify_witness(sep, enc2, extended)
    # padding coordinates are never referenced
    assert all(b < derived.k for e in extended.entries for b in e.positions)


def test_extend_compatibility_missing_coordinate():
    from ltcforge.concat import Encoder
    from ltcforge.constructions import FunctionFamily

    eq = equality_tester(BIN, 2)
    enc = compatibility_encoder(BIN, BIN, False)
    wit = check_f_compatible(eq, enc)
    smaller = Encoder(FunctionFamily(2, TRI, ((0, 1),)))
    with pytest.raises(MismatchError):
        extend_compatibility(wit, enc, smaller)


def _random_tester(rng, alphabet, n, q):
    count = rng.randrange(1, 4)
    checks = tuple(
        Check(
            tuple(rng.randrange(n) for _ in range(q)),
            rng.randrange(1, 1 << alphabet.size**q),
            Fraction(1, count),
        )
        for _ in range(count)
    )
    return Tester(alphabet, n, q, checks)


def test_necessity_and_sufficiency_randomized():
    rng = random.Random(4242)
    seen = {True: 0, False: 0}
    for _ in range(25):
        alphabet = Alphabet.plain(rng.choice([2, 3]))
        delta_size = rng.choice([2, 3])
        tester = _random_tester(rng, alphabet, rng.choice([2, 3]), 2)
        sep = check_separable(tester, delta_size)
        enc = compatibility_encoder(alphabet, Alphabet.plain(delta_size), False)
        compat = check_f_compatible(tester, enc)
        is_sep = isinstance(sep, SeparabilityCertificate)
        assert is_sep == (not isinstance(compat, CompatFailure))
        if is_sep:
            wit = witness_from_certificate(sep, tester, enc)
            assert verify_witness(tester, enc, wit)
        seen[is_sep] += 1
    assert seen[True] > 0 and seen[False] > 0
