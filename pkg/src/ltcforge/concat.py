"""Code concatenation and the tester constructions that survive it.

The outer code's letters are encoded blockwise (block-major layout: outer
position a and block offset b land at a*k + b).  A tester of the outer code
can be pushed through the encoding when each of its checks can be computed
from one encoded letter per queried position; the witness for that stores,
per check, the block offsets to read and the predicate on the read letters.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .algebra import DEFAULT_BUDGET
from .codes import Alphabet, Code, distance, rate
from .constructions import FunctionFamily, code_from_family
from .errors import CapacityError, DomainError, MismatchError
from .testers import (
    Check,
    Tester,
    accept_from_tuples,
    coordinate_classes,
    encode_tuple,
    pad_check,
    tuples_from_accept,
)


@dataclass(frozen=True)
class Encoder:
    """Injective map Sigma -> Delta^k given by coordinate value tables."""

    family: FunctionFamily

    def __post_init__(self):
        if not self.family.is_injective():
            raise DomainError("encoder family does not separate domain elements")

    @property
    def k(self) -> int:
        return self.family.k

    @property
    def domain_size(self) -> int:
        return self.family.domain_size

    @property
    def target(self) -> Alphabet:
        return self.family.target

    def encode(self, symbol: int) -> tuple[int, ...]:
        return self.family.evaluate(symbol)

    def image_code(self) -> Code:
        return code_from_family(self.family)[0]


@dataclass(frozen=True)
class WitnessEntry:
    positions: tuple[int, ...]  # block offsets in [0, k)
    accept: int  # predicate bitset over target^arity


@dataclass(frozen=True)
class CompatibilityWitness:
    entries: tuple[WitnessEntry, ...]


@dataclass(frozen=True)
class CompatFailure:
    check_index: int
    coordinate: int


def _family_is_linear(family: FunctionFamily, sigma: Alphabet) -> bool:
    """Every table additive on the symbol vectors (prime field, so additivity
    implies linearity)."""
    space = sigma.space
    if space is None or family.target.space is None:
        return False
    for table in family.tables:
        for a in range(sigma.size):
            for b in range(sigma.size):
                s = sigma.from_vector(space.add(space.vector(a), space.vector(b)))
                va = family.target.to_vector(table[a])
                vb = family.target.to_vector(table[b])
                if family.target.space.add(va, vb) != family.target.to_vector(table[s]):
                    return False
    return True


def concatenate(code: Code, encoder: Encoder) -> Code:
    """Blockwise encoding of every codeword; distance and rate behave as
    products (distance at least, rate exactly), asserted on construction."""
    if encoder.domain_size != code.alphabet.size:
        raise MismatchError("encoder domain disagrees with the code's alphabet")
    k = encoder.k
    blocks = [encoder.encode(a) for a in range(code.alphabet.size)]
    words = tuple(
        tuple(x for sym in w for x in blocks[sym]) for w in code.codewords
    )
    gen = None
    if code.generator is not None and encoder.target.is_vector and _family_is_linear(
        encoder.family, code.alphabet
    ):
        gen = tuple(tuple(x for sym in w for x in blocks[sym]) for w in code.generator)
    result = Code(encoder.target, code.n * k, words, gen)
    inner = encoder.image_code()
    assert distance(result) >= distance(code) * distance(inner)
    assert rate(result) == rate(code) * rate(inner)
    return result


# ---------------------------------------------------------------------------
# Compatibility search
# ---------------------------------------------------------------------------


def check_f_compatible(
    tester: Tester, encoder: Encoder, budget: int = DEFAULT_BUDGET
) -> CompatibilityWitness | CompatFailure:
    """Find, per check, block offsets whose coordinate functions factor the
    check; returns the first failing (check, coordinate) when none exist.

    A coordinate function is a valid choice at position l exactly when its
    fibers refine the check's swap-invariance classes at l, so candidates
    are filtered per coordinate before the product search; the synthesized
    predicate is the pushforward of the check (accepting on tuples outside
    the factoring image).
    """
    if tester.alphabet.size != encoder.domain_size:
        raise MismatchError("tester alphabet disagrees with encoder domain")
    size = tester.alphabet.size
    dsize = encoder.target.size
    entries = []
    for ci, check in enumerate(tester.checks):
        arity = check.arity
        cand_per_coord: list[list[int]] = []
        for coord in range(arity):
            classes = coordinate_classes(check.accept, size, arity, coord)
            class_of = {}
            for idx, cls in enumerate(classes):
                for sym in cls:
                    class_of[sym] = idx
            cands = []
            for b, table in enumerate(encoder.family.tables):
                fibers: dict[int, set[int]] = {}
                for sym in range(size):
                    fibers.setdefault(table[sym], set()).add(class_of[sym])
                if all(len(v) == 1 for v in fibers.values()):
                    cands.append(b)
            if not cands:
                return CompatFailure(ci, coord)
            cand_per_coord.append(cands)
        combos = 1
        for c in cand_per_coord:
            combos *= len(c)
        if combos > budget:
            raise CapacityError(combos, budget, "compatibility search")
        positions = tuple(c[0] for c in cand_per_coord)
        # Pushforward predicate; off-image tuples reject (they can only be
        # read from corrupted blocks, so codewords are unaffected and the
        # linear case keeps subspace accept sets).
        accept = 0
        for tup in itertools.product(range(size), repeat=arity):
            if check.accepts(tup, size):
                key = tuple(
                    encoder.family.tables[b][sym] for b, sym in zip(positions, tup)
                )
                accept |= 1 << encode_tuple(key, dsize)
        entries.append(WitnessEntry(positions, accept))
    wit = CompatibilityWitness(tuple(entries))
    assert verify_witness(tester, encoder, wit)
    return wit


def verify_witness(
    tester: Tester, encoder: Encoder, witness: CompatibilityWitness
) -> bool:
    """Exhaustive check of the factoring identity for every entry."""
    if len(witness.entries) != len(tester.checks):
        return False
    size = tester.alphabet.size
    dsize = encoder.target.size
    for check, entry in zip(tester.checks, witness.entries):
        if len(entry.positions) != check.arity:
            return False
        for tup in itertools.product(range(size), repeat=check.arity):
            key = tuple(
                encoder.family.tables[b][sym] for b, sym in zip(entry.positions, tup)
            )
            lhs = check.accepts(tup, size)
            rhs = bool((entry.accept >> encode_tuple(key, dsize)) & 1)
            if lhs != rhs:
                return False
    return True


def _pad_entry(entry: WitnessEntry, q: int, dsize: int) -> WitnessEntry:
    a = len(entry.positions)
    if a == q:
        return entry
    positions = entry.positions + (entry.positions[0],) * (q - a)
    block = entry.accept
    width = dsize**a
    accept = 0
    for high in range(dsize ** (q - a)):
        accept |= block << (high * width)
    return WitnessEntry(positions, accept)


# ---------------------------------------------------------------------------
# Tester composition
# ---------------------------------------------------------------------------


def concat_tester(
    outer: Tester,
    mu_outer: Fraction,
    inner: Tester,
    mu_inner: Fraction,
    encoder: Encoder,
    witness: CompatibilityWitness,
) -> Tester:
    """Tester for the concatenated code, mixing three routines:

    1. run the inner tester on a uniformly random block,
    2. run a pushed-through outer check on one letter per queried block,
    3. run the inner tester on a uniformly random queried block.

    The mixture weights are the soundness-optimizing closed form in the
    supplied lower bounds; the resulting certified soundness
    mu_outer*mu_inner / ((q*k+1)*mu_outer + mu_inner) is stored in metadata
    together with its post-alphabet-increase variant.
    """
    if mu_outer <= 0 or mu_inner <= 0:
        raise DomainError("soundness lower bounds must be positive")
    if inner.alphabet != encoder.target or inner.n != encoder.k:
        raise MismatchError("inner tester does not match the encoder image")
    if outer.alphabet.size != encoder.domain_size:
        raise MismatchError("outer tester does not match the encoder domain")
    if not verify_witness(outer, encoder, witness):
        raise MismatchError("witness does not verify against the outer tester")
    size = outer.alphabet.size
    dsize = encoder.target.size
    q = outer.q
    k = encoder.k
    n = outer.n
    padded = [pad_check(ch, q, size) for ch in outer.checks]
    padded_entries = [_pad_entry(e, q, dsize) for e in witness.entries]

    scale = Fraction(1, q * k)
    total = mu_outer * mu_inner * scale + mu_inner**2 * scale + mu_inner * mu_outer
    rho1 = mu_outer * mu_inner * scale / total
    rho2 = mu_inner**2 * scale / total
    rho3 = mu_outer * mu_inner / total
    assert rho1 + rho2 + rho3 == 1

    q_out = max(q, inner.q)
    checks: list[Check] = []
    for block in range(n):
        for ch in inner.checks:
            queries = tuple(block * k + pos for pos in ch.queries)
            checks.append(Check(queries, ch.accept, rho1 * Fraction(1, n) * ch.weight))
    for ch, entry in zip(padded, padded_entries):
        queries = tuple(a * k + b for a, b in zip(ch.queries, entry.positions))
        checks.append(Check(queries, entry.accept, rho2 * ch.weight))
    for ch in padded:
        for pos_idx in range(q):
            block = ch.queries[pos_idx]
            for ich in inner.checks:
                queries = tuple(block * k + pos for pos in ich.queries)
                checks.append(
                    Check(queries, ich.accept, rho3 * ch.weight * Fraction(1, q) * ich.weight)
                )
    checks = [pad_check(ch, q_out, dsize) for ch in checks]
    bound = mu_outer * mu_inner / ((q * k + 1) * mu_outer + mu_inner)
    meta = {
        "bound": bound,
        "bound_after_increase": bound / (bound + 1),
    }
    return Tester(encoder.target, n * k, q_out, tuple(checks), meta=meta)


def alphabet_increase_tester(
    tester: Tester,
    mu: Fraction,
    mapping: tuple[int, ...],
    target: Alphabet,
) -> Tester:
    """View a code over a larger alphabet through a symbol injection.

    Mixes a membership routine (a random position must hold an old-alphabet
    symbol) with the original tester rejecting any out-of-range letter; the
    certified soundness mu/(mu+1) is stored in metadata.
    """
    if mu <= 0:
        raise DomainError("soundness lower bound must be positive")
    if len(mapping) != tester.alphabet.size:
        raise MismatchError("mapping must cover the source alphabet")
    if len(set(mapping)) != len(mapping):
        raise DomainError("symbol mapping must be injective")
    if any(not 0 <= m < target.size for m in mapping):
        raise DomainError("mapped symbol outside the target alphabet")
    rho1 = mu / (mu + 1)
    rho2 = 1 / (mu + 1)
    n = tester.n
    member = accept_from_tuples([(m,) for m in mapping], target.size)
    checks: list[Check] = []
    for pos in range(n):
        checks.append(Check((pos,), member, rho1 * Fraction(1, n)))
    for ch in tester.checks:
        mapped = [
            tuple(mapping[s] for s in tup)
            for tup in tuples_from_accept(ch.accept, tester.alphabet.size, ch.arity)
        ]
        checks.append(Check(ch.queries, accept_from_tuples(mapped, target.size), rho2 * ch.weight))
    checks = [pad_check(ch, tester.q, target.size) for ch in checks]
    return Tester(
        target, n, tester.q, tuple(checks), meta={"bound": mu / (mu + 1)}
    )


def embed_word(letters, mapping: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(mapping[s] for s in letters)


def embed_code(
    code: Code,
    mapping: tuple[int, ...],
    target: Alphabet,
    linear_embedding: bool = False,
) -> Code:
    """The same codewords over a larger alphabet via a symbol injection.

    linear_embedding keeps the generator when the injection comes from a
    linear inclusion of the symbol spaces (the caller asserts that)."""
    words = tuple(embed_word(w, mapping) for w in code.codewords)
    gen = None
    if linear_embedding and code.generator is not None and target.is_vector:
        gen = tuple(embed_word(w, mapping) for w in code.generator)
    return Code(target, code.n, words, gen)
