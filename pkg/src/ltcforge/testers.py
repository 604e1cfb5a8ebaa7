"""Query testers with exact evaluation, exact and sampled soundness.

A tester is a weighted list of checks; a check reads a tuple of positions
and accepts when the observed symbol tuple lies in its accept set.  Accept
sets are stored as int bitsets over alphabet^arity, with the tuple
(t_0, ..., t_{q-1}) encoded as sum t_l * size**l.

Exact soundness enumerates every word.  The scan runs vectorized over
chunks of the word space with integerized weights (falling back to a pure
Fraction path if the common denominator would overflow int64), so results
are exact rationals regardless of path.  Words are scanned in lexicographic
order, which makes the "lexicographically smallest witness" tie-break a
first-hit rule.

Sampled soundness draws words from per-trial substreams of a splitmix-style
generator: trial t is keyed independently of every other trial, so changing
the trial count never perturbs earlier draws.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

import numpy as np

from .algebra import DEFAULT_BUDGET, rank, row_reduce, solve_functional
from .codes import Alphabet, Code, Word, dist_to_code
from .errors import CapacityError, DomainError, MismatchError

ACCEPT_BITS_LIMIT = 1 << 24  # alphabet^arity per check


def encode_tuple(symbols: Sequence[int], size: int) -> int:
    idx = 0
    for l, s in enumerate(symbols):
        idx += s * size**l
    return idx


def decode_tuple(idx: int, size: int, arity: int) -> tuple[int, ...]:
    return tuple((idx // size**l) % size for l in range(arity))


def accept_from_tuples(tuples: Iterable[Sequence[int]], size: int) -> int:
    bits = 0
    for t in tuples:
        bits |= 1 << encode_tuple(t, size)
    return bits


def tuples_from_accept(accept: int, size: int, arity: int) -> list[tuple[int, ...]]:
    out = []
    x = accept
    while x:
        lsb = x & -x
        idx = lsb.bit_length() - 1
        out.append(decode_tuple(idx, size, arity))
        x ^= lsb
    return out


def full_accept(size: int, arity: int) -> int:
    return (1 << size**arity) - 1


@dataclass(frozen=True)
class Check:
    queries: tuple[int, ...]
    accept: int
    weight: Fraction

    @property
    def arity(self) -> int:
        return len(self.queries)

    def accepts(self, symbols: Sequence[int], size: int) -> bool:
        return bool((self.accept >> encode_tuple(symbols, size)) & 1)


@dataclass(frozen=True)
class Tester:
    alphabet: Alphabet
    n: int
    q: int
    checks: tuple[Check, ...]
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        size = self.alphabet.size
        for ch in self.checks:
            if ch.arity == 0 or ch.arity > self.q:
                raise DomainError("check arity must be between 1 and q")
            if any(not 0 <= pos < self.n for pos in ch.queries):
                raise DomainError("query position out of range")
            if ch.weight <= 0:
                raise DomainError("check weights must be positive")
            if size**ch.arity > ACCEPT_BITS_LIMIT:
                raise CapacityError(size**ch.arity, ACCEPT_BITS_LIMIT, "accept bitset")


def pad_check(check: Check, q: int, size: int) -> Check:
    """Pad to arity q by repeating the first position; pads are ignored."""
    a = check.arity
    if a == q:
        return check
    queries = check.queries + (check.queries[0],) * (q - a)
    block = check.accept
    width = size**a
    accept = 0
    for high in range(size ** (q - a)):
        accept |= block << (high * width)
    return Check(queries, accept, check.weight)


def uniform_checks(entries: Sequence[tuple[tuple[int, ...], int]]) -> list[Check]:
    w = Fraction(1, len(entries))
    return [Check(q, acc, w) for q, acc in entries]


def equality_tester(alphabet: Alphabet, n: int) -> Tester:
    """Uniform consecutive-pair equality checks; accepts repetition words."""
    if n < 2:
        raise DomainError("equality tester needs block length >= 2")
    size = alphabet.size
    diag = accept_from_tuples([(a, a) for a in range(size)], size)
    checks = uniform_checks([((i, i + 1), diag) for i in range(n - 1)])
    return Tester(alphabet, n, 2, tuple(checks))


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def reject_probability(tester: Tester, w: Word) -> Fraction:
    if w.alphabet != tester.alphabet or len(w) != tester.n:
        raise MismatchError("word incompatible with tester")
    size = tester.alphabet.size
    total = Fraction(0)
    for ch in tester.checks:
        if not ch.accepts([w.letters[i] for i in ch.queries], size):
            total += ch.weight
    return total


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    weight_sum: Fraction
    violations: tuple[tuple[int, tuple[int, ...]], ...]  # (check index, codeword)


def validate(tester: Tester, code: Code) -> ValidationReport:
    """Weights must sum to 1 exactly and every codeword must be accepted."""
    if tester.alphabet != code.alphabet or tester.n != code.n:
        raise MismatchError("tester incompatible with code")
    size = tester.alphabet.size
    wsum = sum((ch.weight for ch in tester.checks), Fraction(0))
    violations = []
    for ci, ch in enumerate(tester.checks):
        for cw in code.codewords:
            if not ch.accepts([cw[i] for i in ch.queries], size):
                violations.append((ci, cw))
    ok = wsum == 1 and not violations
    return ValidationReport(ok, wsum, tuple(violations))


@dataclass(frozen=True)
class SoundnessReport:
    mode: str  # "exact" | "sampled"
    value: Fraction | None  # None iff infinite (no non-codeword exists)
    infinite: bool
    witness: Word | None
    bound: Fraction | None = None
    verdict: str | None = None  # exact: pass/fail; sampled: consistent/violated
    trials: int | None = None
    seed: int | None = None


def _compiled_checks(tester: Tester):
    size = tester.alphabet.size
    dens = [ch.weight.denominator for ch in tester.checks]
    den = lcm(*dens) if dens else 1
    compiled = []
    for ch in tester.checks:
        wnum = ch.weight.numerator * (den // ch.weight.denominator)
        table = size**ch.arity
        nbytes = (table + 7) // 8
        lut = np.unpackbits(
            np.frombuffer(ch.accept.to_bytes(nbytes, "little"), dtype=np.uint8),
            bitorder="little",
        )[:table].astype(np.int64)
        powers = [size**l for l in range(ch.arity)]
        compiled.append((ch.queries, powers, lut, wnum))
    return compiled, den


def _chunk_digits(size: int, n: int, start: int, count: int) -> list[np.ndarray]:
    """Letters of words start..start+count-1 in lexicographic (big-endian) order."""
    idx = np.arange(start, start + count, dtype=np.int64)
    return [(idx // size ** (n - 1 - j)) % size for j in range(n)]


def _reject_numerators(compiled, digits) -> np.ndarray:
    rej = np.zeros(len(digits[0]), dtype=np.int64)
    for queries, powers, lut, wnum in compiled:
        tup = digits[queries[0]] * powers[0]
        for pos, pw in zip(queries[1:], powers[1:]):
            tup = tup + digits[pos] * pw
        rej += wnum * (1 - lut[tup])
    return rej


def _mismatch_counts(codewords, digits) -> np.ndarray:
    count = len(digits[0])
    best = np.full(count, len(digits), dtype=np.int64)
    for cw in codewords:
        mm = np.zeros(count, dtype=np.int64)
        for j, sym in enumerate(cw):
            mm += digits[j] != sym
        np.minimum(best, mm, out=best)
    return best


def _tournament(rej, mism, start, best):
    """Earliest strict minimizer of rej/mism among mism>0 entries."""
    valid = mism > 0
    if not valid.any():
        return best
    if best is None:
        i = int(np.argmax(valid))
        best = (int(rej[i]), int(mism[i]), start + i)
    while True:
        brn, bmm, _ = best
        better = valid & (rej * bmm < brn * mism)
        if not better.any():
            return best
        i = int(np.argmax(better))
        best = (int(rej[i]), int(mism[i]), start + i)


def _word_from_index(idx: int, size: int, n: int) -> tuple[int, ...]:
    return tuple((idx // size ** (n - 1 - j)) % size for j in range(n))


def soundness_exact(
    tester: Tester,
    code: Code,
    budget: int = DEFAULT_BUDGET,
    bound: Fraction | None = None,
) -> SoundnessReport:
    """Exact min over non-codewords of reject probability / distance to code.

    Returns the infinite sentinel when the code fills the whole space, and a
    zero value with the earliest never-rejected non-codeword when one exists.
    """
    if tester.alphabet != code.alphabet or tester.n != code.n:
        raise MismatchError("tester incompatible with code")
    size, n = tester.alphabet.size, tester.n
    total = size**n
    if total > budget:
        raise CapacityError(total, budget, "exhaustive soundness scan")
    if len(code.codewords) == total:
        verdict = None if bound is None else "pass"
        return SoundnessReport("exact", None, True, None, bound, verdict)

    compiled, den = _compiled_checks(tester)
    best = None
    if den * n < (1 << 62):
        chunk = 1 << 18
        for start in range(0, total, chunk):
            digits = _chunk_digits(size, n, start, min(chunk, total - start))
            rej = _reject_numerators(compiled, digits)
            mism = _mismatch_counts(code.codewords, digits)
            best = _tournament(rej, mism, start, best)
    else:
        # Fraction fallback: same scan order, no integer packing.
        members = frozenset(code.codewords)
        idx = 0
        for letters in itertools.product(range(size), repeat=n):
            if letters not in members:
                mm = min(
                    sum(1 for a, b in zip(letters, cw) if a != b) for cw in code.codewords
                )
                rn = sum(
                    ch.weight
                    for ch in tester.checks
                    if not ch.accepts([letters[i] for i in ch.queries], size)
                )
                cand = (rn, mm, idx)
                if best is None or cand[0] * best[1] < Fraction(best[0]) * cand[1]:
                    best = cand
            idx += 1
        rn, mm, widx = best
        value = Fraction(rn) * n / mm
        witness = Word(tester.alphabet, _word_from_index(widx, size, n))
        verdict = None if bound is None else ("pass" if value >= bound else "fail")
        return SoundnessReport("exact", value, False, witness, bound, verdict)

    rn, mm, widx = best
    value = Fraction(rn * n, den * mm)
    witness = Word(tester.alphabet, _word_from_index(widx, size, n))
    verdict = None if bound is None else ("pass" if value >= bound else "fail")
    return SoundnessReport("exact", value, False, witness, bound, verdict)


# ---------------------------------------------------------------------------
# Accepted-set enumeration (exact, pruned)
# ---------------------------------------------------------------------------


def accepted_words(tester: Tester, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """All words with reject probability zero, in lexicographic order.

    Exact enumeration by depth-first extension: a prefix is abandoned as
    soon as some check contained in it rejects, which covers the whole
    |alphabet|^n space without visiting rejected subtrees.
    """
    size, n = tester.alphabet.size, tester.n
    if size**n > budget:
        raise CapacityError(size**n, budget, "accepted-set enumeration")
    by_max: list[list[tuple[tuple[int, ...], list[int], int]]] = [[] for _ in range(n)]
    for ch in tester.checks:
        powers = [size**l for l in range(ch.arity)]
        by_max[max(ch.queries)].append((ch.queries, powers, ch.accept))
    out: list[tuple[int, ...]] = []
    prefix = [0] * n

    def extend(depth: int) -> None:
        if depth == n:
            out.append(tuple(prefix))
            return
        for sym in range(size):
            prefix[depth] = sym
            ok = True
            for queries, powers, accept in by_max[depth]:
                idx = 0
                for pos, pw in zip(queries, powers):
                    idx += prefix[pos] * pw
                if not (accept >> idx) & 1:
                    ok = False
                    break
            if ok:
                extend(depth + 1)

    if n > 0:
        extend(0)
    return out


# ---------------------------------------------------------------------------
# Seeded sampling
# ---------------------------------------------------------------------------

_K = [
    0x9E3779B97F4A7C15,
    0xD1B54A32D192ED03,
    0x8CB92BA72F3D8DD7,
    0xABF5D3BC7B3E9C43,
    0xC2B2AE3D27D4EB4F,
]


def _mix64(x: np.ndarray) -> np.ndarray:
    x = x.copy()
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


_MASK64 = (1 << 64) - 1


def _stream(seed: int, trials: np.ndarray, attempt: int) -> np.ndarray:
    h = np.full(trials.shape, np.uint64(seed & _MASK64), dtype=np.uint64)
    h = _mix64(h + np.uint64(_K[0]))
    h = _mix64(h + trials.astype(np.uint64) * np.uint64(_K[1]))
    h = _mix64(h + np.uint64((attempt * _K[2]) & _MASK64))
    return h


def _sample_letters(seed: int, trials: np.ndarray, attempt: int, n: int, size: int):
    """Uniform letters via rejection below the largest multiple of size."""
    base = _stream(seed, trials, attempt)
    threshold = np.uint64((2**64 // size) * size - 1)
    digits = []
    for j in range(n):
        key = base + np.uint64((j * _K[3]) & _MASK64)
        val = _mix64(key)
        c = 0
        while True:
            bad = val > threshold
            if not bad.any():
                break
            c += 1
            val = np.where(bad, _mix64(key + np.uint64((c * _K[4]) & _MASK64)), val)
        digits.append((val % np.uint64(size)).astype(np.int64))
    return digits


def soundness_sampled(
    tester: Tester,
    code: Code,
    trials: int,
    seed: int,
    bound: Fraction | None = None,
) -> SoundnessReport:
    """Minimum observed reject/distance ratio over sampled non-codewords.

    The result is an upper bound on the exact soundness.  Deterministic per
    seed; codeword draws are resampled within the trial's own substream.
    """
    if tester.alphabet != code.alphabet or tester.n != code.n:
        raise MismatchError("tester incompatible with code")
    if trials < 1:
        raise DomainError("need at least one trial")
    size, n = tester.alphabet.size, tester.n
    if len(code.codewords) == size**n:
        verdict = None if bound is None else "consistent"
        return SoundnessReport("sampled", None, True, None, bound, verdict, trials, seed)

    trial_idx = np.arange(trials, dtype=np.int64)
    digits = _sample_letters(seed, trial_idx, 0, n, size)
    attempt = 0
    while True:
        member = np.zeros(trials, dtype=bool)
        for cw in code.codewords:
            hit = np.ones(trials, dtype=bool)
            for j, sym in enumerate(cw):
                hit &= digits[j] == sym
            member |= hit
        if not member.any():
            break
        attempt += 1
        redo = trial_idx[member]
        fresh = _sample_letters(seed, redo, attempt, n, size)
        for j in range(n):
            digits[j][member] = fresh[j]

    compiled, den = _compiled_checks(tester)
    if den * n >= (1 << 62):
        # Fraction fallback over the sampled words.
        best = None
        for t in range(trials):
            letters = tuple(int(digits[j][t]) for j in range(n))
            w = Word(tester.alphabet, letters)
            ratio = reject_probability(tester, w) / dist_to_code(w, code)
            if best is None or ratio < best[0]:
                best = (ratio, w)
        value, witness = best
    else:
        rej = _reject_numerators(compiled, digits)
        mism = _mismatch_counts(code.codewords, digits)
        best = _tournament(rej, mism, 0, best=None)
        rn, mm, t = best
        value = Fraction(rn * n, den * mm)
        witness = Word(tester.alphabet, tuple(int(digits[j][t]) for j in range(n)))
    verdict = None
    if bound is not None:
        verdict = "violated" if value < bound else "consistent"
    return SoundnessReport("sampled", value, False, witness, bound, verdict, trials, seed)


# ---------------------------------------------------------------------------
# Check analysis
# ---------------------------------------------------------------------------


def coordinate_classes(accept: int, size: int, arity: int, coord: int) -> list[list[int]]:
    """Partition symbols by swap-invariance at one coordinate of a check.

    Symbols a, b land in the same class when replacing a by b at position
    `coord` never changes the check's verdict, whatever the other queried
    letters are.  Classes are listed in order of their smallest member.
    This is the coarsest per-coordinate quotient the check factors through:
    any factoring g_1 x ... x g_q must identify at most what these classes
    identify, and conversely mapping each class to its own symbol always
    factors the check (change one coordinate at a time).
    """
    contexts = list(itertools.product(range(size), repeat=arity - 1))
    signatures: dict[tuple, list[int]] = {}
    order: list[tuple] = []
    for sym in range(size):
        sig = []
        for ctx in contexts:
            tup = ctx[:coord] + (sym,) + ctx[coord:]
            sig.append((accept >> encode_tuple(tup, size)) & 1)
        key = tuple(sig)
        if key not in signatures:
            signatures[key] = []
            order.append(key)
        signatures[key].append(sym)
    return [signatures[key] for key in order]


# ---------------------------------------------------------------------------
# Linearity classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearClassification:
    kind: str  # "nonlinear" | "linear" | "elementary"
    subspace_bases: tuple[tuple[tuple[int, ...], ...], ...] | None
    functionals: tuple[tuple[int, ...], ...] | None


def classify_linear(tester: Tester) -> LinearClassification:
    """linear: every accept set is a subspace of Sigma^arity (flattened over
    GF(p)); elementary: additionally every subspace has codimension 1."""
    space = tester.alphabet.space
    if space is None:
        raise DomainError("linearity classification needs a vector-space alphabet")
    p = space.field.p
    size = tester.alphabet.size
    bases = []
    functionals = []
    elementary = True
    for ch in tester.checks:
        members = tuples_from_accept(ch.accept, size, ch.arity)
        flat = [
            tuple(x for sym in tup for x in space.vector(sym)) for tup in members
        ]
        dim = ch.arity * space.dim
        r = rank(flat, p)
        if p**r != len(flat):
            return LinearClassification("nonlinear", None, None)
        rref, _ = row_reduce(flat, p)
        bases.append(tuple(rref))
        if r == dim - 1:
            functionals.append(solve_functional(rref, dim, p))
        else:
            elementary = False
    kind = "elementary" if elementary else "linear"
    return LinearClassification(
        kind, tuple(bases), tuple(functionals) if elementary else None
    )
