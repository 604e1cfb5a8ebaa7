"""Words, codes, Hamming metrics, exact distance and rate.

All probabilities and distances are fractions.Fraction values; rates get
their own exact representation (`Rate`) because code sizes are not always
perfect powers of the alphabet size, in which case the rate is an
irrational multiple of a log ratio.  Rate comparisons reduce to integer
power comparisons and never touch floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Field, VecSpace, rank, row_reduce, span_vectors
from .errors import DomainError, MismatchError


@dataclass(frozen=True)
class Alphabet:
    """A symbol set {0..size-1}, optionally structured as GF(p)^dim.

    Vector alphabets index into the canonical vector enumeration of their
    space, so symbol <-> vector conversion is a fixed bijection.
    """

    size: int
    space: VecSpace | None = None

    def __post_init__(self):
        if self.space is not None and self.space.size != self.size:
            raise MismatchError("alphabet size disagrees with vector space size")
        if self.size < 2:
            raise DomainError("alphabets need at least two symbols")

    @staticmethod
    def plain(size: int) -> "Alphabet":
        return Alphabet(size)

    @staticmethod
    def vector(space: VecSpace) -> "Alphabet":
        return Alphabet(space.size, space)

    @property
    def is_vector(self) -> bool:
        return self.space is not None

    def to_vector(self, symbol: int) -> tuple[int, ...]:
        if self.space is None:
            raise DomainError("plain alphabet has no vector structure")
        return self.space.vector(symbol)

    def from_vector(self, vec: Sequence[int]) -> int:
        if self.space is None:
            raise DomainError("plain alphabet has no vector structure")
        return self.space.index(vec)


def binary_alphabet() -> Alphabet:
    return Alphabet.plain(2)


def vector_alphabet(p: int, dim: int) -> Alphabet:
    return Alphabet.vector(VecSpace(Field(p), dim))


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    letters: tuple[int, ...]

    def __post_init__(self):
        if any(not 0 <= x < self.alphabet.size for x in self.letters):
            raise DomainError("letter out of alphabet range")

    def __len__(self) -> int:
        return len(self.letters)


@dataclass(frozen=True)
class Code:
    """Explicit nonempty list of distinct codewords, optionally tagged linear.

    The generator, when present, holds basis codewords (as letter tuples) of
    the code viewed as a subspace; the codeword list stays canonical.
    """

    alphabet: Alphabet
    n: int
    codewords: tuple[tuple[int, ...], ...]
    generator: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if not self.codewords:
            raise DomainError("codes are nonempty")
        if len(set(self.codewords)) != len(self.codewords):
            raise DomainError("codewords must be distinct")
        for w in self.codewords:
            if len(w) != self.n:
                raise MismatchError("codeword length differs from block length")
            if any(not 0 <= x < self.alphabet.size for x in w):
                raise DomainError("codeword letter out of range")
        if self.generator is not None:
            self._check_linear_tag()

    def _check_linear_tag(self) -> None:
        space = self.alphabet.space
        if space is None:
            raise DomainError("linear tag requires a vector-space alphabet")
        p = space.field.p
        vecs = [self._flatten(w) for w in self.generator]
        spanned = {tuple(v) for v in span_vectors(vecs, self.n * space.dim, p)}
        listed = {tuple(self._flatten(w)) for w in self.codewords}
        if spanned != listed:
            raise DomainError("generator span disagrees with codeword list")

    def _flatten(self, word: Sequence[int]) -> tuple[int, ...]:
        space = self.alphabet.space
        out: list[int] = []
        for sym in word:
            out.extend(space.vector(sym))
        return tuple(out)

    def contains(self, letters: Sequence[int]) -> bool:
        return tuple(letters) in self._member_set()

    def _member_set(self) -> frozenset:
        # cached lazily on the instance despite frozen dataclass
        ms = self.__dict__.get("_members")
        if ms is None:
            ms = frozenset(self.codewords)
            object.__setattr__(self, "_members", ms)
        return ms

    def word(self, letters: Sequence[int]) -> Word:
        return Word(self.alphabet, tuple(letters))


def repetition_code(alphabet: Alphabet, n: int) -> Code:
    """The n-fold repetition code {aa...a : a in the alphabet}."""
    if n < 1:
        raise DomainError("block length must be positive")
    words = tuple((a,) * n for a in range(alphabet.size))
    gen = None
    if alphabet.is_vector:
        space = alphabet.space
        gen = tuple(
            (alphabet.from_vector(tuple(int(i == j) for i in range(space.dim))),) * n
            for j in range(space.dim)
        )
    return Code(alphabet, n, words, gen)


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------


def hamming_dist(u: Word, v: Word) -> Fraction:
    """Normalized Hamming distance, exact."""
    if u.alphabet != v.alphabet or len(u) != len(v):
        raise MismatchError("words live in different spaces")
    n = len(u)
    mism = sum(1 for a, b in zip(u.letters, v.letters) if a != b)
    return Fraction(mism, n)


def dist_to_code(w: Word, code: Code) -> Fraction:
    if w.alphabet != code.alphabet or len(w) != code.n:
        raise MismatchError("word incompatible with code")
    best = min(
        sum(1 for a, b in zip(w.letters, c) if a != b) for c in code.codewords
    )
    return Fraction(best, code.n)


def distance(code: Code) -> Fraction:
    """Minimum pairwise distance; 1 by convention for singleton codes."""
    if len(code.codewords) < 2:
        return Fraction(1)
    n = code.n
    best = n
    words = code.codewords
    for i in range(len(words)):
        wi = words[i]
        for j in range(i + 1, len(words)):
            wj = words[j]
            mism = sum(1 for a, b in zip(wi, wj) if a != b)
            if mism < best:
                best = mism
    return Fraction(best, n)


# ---------------------------------------------------------------------------
# Exact rates
# ---------------------------------------------------------------------------


def _prime_factors(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _log_ratio(m: int, b: int) -> Fraction | None:
    """log(m)/log(b) when it is rational, else None."""
    if m == 1:
        return Fraction(0)
    fm, fb = _prime_factors(m), _prime_factors(b)
    if set(fm) != set(fb):
        return None
    primes = sorted(fm)
    p0 = primes[0]
    ratio = Fraction(fm[p0], fb[p0])
    for p in primes[1:]:
        if Fraction(fm[p], fb[p]) != ratio:
            return None
    return ratio


def _power_normalize(n: int) -> tuple[int, int]:
    """Smallest base g and exponent e with g**e == n."""
    factors = _prime_factors(n)
    from math import gcd

    e = 0
    for a in factors.values():
        e = gcd(e, a)
    g = 1
    for p, a in factors.items():
        g *= p ** (a // e)
    return g, e


@dataclass(frozen=True)
class Rate:
    """The exact value scalar * log(log_num)/log(log_base).

    log_num == 0 marks an exactly rational value (equal to `scalar`).
    Instances are normalized: construct through `make_rate`.
    """

    scalar: Fraction
    log_num: int = 0
    log_base: int = 0

    @property
    def is_rational(self) -> bool:
        return self.log_num == 0

    def __mul__(self, other: "Rate | Fraction | int") -> "Rate":
        if isinstance(other, (Fraction, int)):
            other = Rate(Fraction(other))
        if self.is_rational and other.is_rational:
            return Rate(self.scalar * other.scalar)
        if self.is_rational:
            return make_rate(self.scalar * other.scalar, other.log_num, other.log_base)
        if other.is_rational:
            return make_rate(self.scalar * other.scalar, self.log_num, self.log_base)
        # log cancellation: (log a/log b)(log b/log c) = log a/log c
        if self.log_base == other.log_num:
            return make_rate(self.scalar * other.scalar, self.log_num, other.log_base)
        if other.log_base == self.log_num:
            return make_rate(self.scalar * other.scalar, other.log_num, self.log_base)
        raise DomainError("product of these rates has no supported exact form")

    __rmul__ = __mul__

    def _cmp(self, other: "Rate") -> int:
        a, b = self, other
        if a.is_rational and b.is_rational:
            return (a.scalar > b.scalar) - (a.scalar < b.scalar)
        if b.is_rational:
            return -b._cmp(a)
        if a.is_rational:
            # a.scalar vs s*log(m)/log(bb):  a.scalar*log(bb) vs s*log(m)
            q, s = a.scalar, b.scalar
            lhs = b.log_base ** (q.numerator * s.denominator)
            rhs = b.log_num ** (s.numerator * q.denominator)
            return (lhs > rhs) - (lhs < rhs)
        if a.log_base == b.log_base:
            sa, sb = a.scalar, b.scalar
            lhs = a.log_num ** (sa.numerator * sb.denominator)
            rhs = b.log_num ** (sb.numerator * sa.denominator)
            return (lhs > rhs) - (lhs < rhs)
        if a.log_num == b.log_num:
            sa, sb = a.scalar, b.scalar
            lhs = b.log_base ** (sa.numerator * sb.denominator)
            rhs = a.log_base ** (sb.numerator * sa.denominator)
            return (lhs > rhs) - (lhs < rhs)
        raise DomainError("rates with unrelated log bases are not comparable exactly")

    def __lt__(self, other):
        return self._cmp(_as_rate(other)) < 0

    def __le__(self, other):
        return self._cmp(_as_rate(other)) <= 0

    def __gt__(self, other):
        return self._cmp(_as_rate(other)) > 0

    def __ge__(self, other):
        return self._cmp(_as_rate(other)) >= 0


def _as_rate(x) -> Rate:
    if isinstance(x, Rate):
        return x
    return Rate(Fraction(x))


def make_rate(scalar: Fraction, log_num: int = 0, log_base: int = 0) -> Rate:
    """Normalize: fold rational log ratios into the scalar, minimize bases."""
    scalar = Fraction(scalar)
    if log_num == 0:
        return Rate(scalar)
    if scalar == 0 or log_num == 1:
        return Rate(Fraction(0))
    ratio = _log_ratio(log_num, log_base)
    if ratio is not None:
        return Rate(scalar * ratio)
    gm, em = _power_normalize(log_num)
    gb, eb = _power_normalize(log_base)
    return Rate(scalar * Fraction(em, eb), gm, gb)


def rate(code: Code) -> Rate:
    """log |C| / log |alphabet|^n, exactly."""
    return make_rate(Fraction(1, code.n), len(code.codewords), code.alphabet.size)


# ---------------------------------------------------------------------------
# Linearity
# ---------------------------------------------------------------------------


def is_linear_code(code: Code) -> tuple[bool, tuple[tuple[int, ...], ...] | None]:
    """Whether the codeword set is a subspace; returns a basis of codewords."""
    space = code.alphabet.space
    if space is None:
        raise DomainError("linearity is defined for vector-space alphabets only")
    p = space.field.p
    flat = [code._flatten(w) for w in code.codewords]
    r = rank(flat, p)
    if p**r != len(code.codewords):
        return False, None
    if (0,) * (code.n * space.dim) not in {tuple(v) for v in flat}:
        return False, None
    rref, _ = row_reduce(flat, p)
    basis = tuple(
        tuple(space.index(row[i * space.dim : (i + 1) * space.dim]) for i in range(code.n))
        for row in rref
    )
    return True, basis
