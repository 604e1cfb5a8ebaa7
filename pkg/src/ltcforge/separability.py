"""Deciding and enforcing per-coordinate factorability of checks.

A check factors through maps g_1 x ... x g_q : Sigma^q -> Delta^q exactly
when, at every queried coordinate, the coarsest swap-invariant partition of
the symbols has at most |Delta| classes: any factoring must identify at
least what swap-invariance identifies, and mapping classes to distinct
symbols always factors (changing one coordinate inside a class at a time
never flips the verdict).  The linear variant replaces partitions with the
subspaces U_l = {a : a at coordinate l, zeros elsewhere, is accepted} and
the class count with the codimension of U_l: a linear factoring's kernel at
coordinate l sits inside U_l (insert a kernel element into the all-zero
accepted tuple), and quotienting by U_l itself factors the check since
accepted sets are subspaces.

Every code with a tester also has a separable tester at a proportional
soundness cost; both replacement constructions live here.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import ceil

from .algebra import DEFAULT_BUDGET, VecSpace, kernel_complement_surjection, rank, row_reduce
from .codes import Alphabet
from .concat import CompatibilityWitness, Encoder, WitnessEntry, verify_witness
from .constructions import FunctionFamily
from .errors import CapacityError, DomainError, MismatchError
from .testers import (
    Check,
    Tester,
    classify_linear,
    coordinate_classes,
    encode_tuple,
    full_accept,
    pad_check,
)


@dataclass(frozen=True)
class CheckCertificate:
    partitions: tuple[tuple[tuple[int, ...], ...], ...]  # per coordinate
    coord_maps: tuple[tuple[int, ...], ...]  # per coordinate: symbol -> delta symbol
    accept: int  # pushforward predicate over delta^arity
    subspaces: tuple[tuple[tuple[int, ...], ...], ...] | None = None  # linear case


@dataclass(frozen=True)
class SeparabilityCertificate:
    delta_size: int
    linear: bool
    checks: tuple[CheckCertificate, ...]


@dataclass(frozen=True)
class SeparabilityFailure:
    check_index: int
    coordinate: int
    required: int  # classes found (set case) or codimension (linear case)


def _pushforward(check: Check, size: int, coord_maps, delta_size: int) -> int:
    """Predicate on mapped tuples: accept exactly the images of accepted
    inputs.  Tuples outside the factoring image reject, which keeps the
    predicate a subspace image in the linear case; only in-image tuples are
    reachable from properly encoded letters, so composed testers still
    accept every codeword."""
    accept = 0
    for tup in itertools.product(range(size), repeat=check.arity):
        if check.accepts(tup, size):
            key = tuple(cm[sym] for cm, sym in zip(coord_maps, tup))
            accept |= 1 << encode_tuple(key, delta_size)
    return accept


def _verify_factoring(check: Check, size: int, coord_maps, accept: int, delta_size: int) -> bool:
    for tup in itertools.product(range(size), repeat=check.arity):
        key = tuple(cm[sym] for cm, sym in zip(coord_maps, tup))
        if check.accepts(tup, size) != bool((accept >> encode_tuple(key, delta_size)) & 1):
            return False
    return True


def check_separable(
    tester: Tester, delta_size: int
) -> SeparabilityCertificate | SeparabilityFailure:
    """Coarsest factoring certificate, or the first (check, coordinate) whose
    swap-invariance partition has more than delta_size classes.  Classes map
    to the lexicographically earliest target symbols."""
    if delta_size < 2:
        raise DomainError("target alphabets need at least two symbols")
    size = tester.alphabet.size
    certs = []
    for ci, check in enumerate(tester.checks):
        partitions = []
        coord_maps = []
        for coord in range(check.arity):
            classes = coordinate_classes(check.accept, size, check.arity, coord)
            if len(classes) > delta_size:
                return SeparabilityFailure(ci, coord, len(classes))
            table = [0] * size
            for idx, cls in enumerate(classes):
                for sym in cls:
                    table[sym] = idx
            partitions.append(tuple(tuple(cls) for cls in classes))
            coord_maps.append(tuple(table))
        accept = _pushforward(check, size, coord_maps, delta_size)
        assert _verify_factoring(check, size, coord_maps, accept, delta_size)
        certs.append(CheckCertificate(tuple(partitions), tuple(coord_maps), accept))
    return SeparabilityCertificate(delta_size, False, tuple(certs))


def check_linearly_separable(
    tester: Tester, delta_space: VecSpace
) -> SeparabilityCertificate | SeparabilityFailure:
    """Linear factoring certificate via the per-coordinate kernels U_l, or
    the first coordinate whose codimension exceeds dim Delta."""
    space = tester.alphabet.space
    if space is None:
        raise DomainError("linear separability needs a vector-space alphabet")
    classification = classify_linear(tester)
    if classification.kind == "nonlinear":
        raise DomainError("linear separability is defined for linear testers")
    p = space.field.p
    size = tester.alphabet.size
    delta_size = delta_space.size
    certs = []
    for ci, check in enumerate(tester.checks):
        coord_maps = []
        partitions = []
        subspaces = []
        for coord in range(check.arity):
            kernel_syms = [
                a
                for a in range(size)
                if check.accepts(
                    tuple(a if l == coord else 0 for l in range(check.arity)), size
                )
            ]
            vecs = [space.vector(a) for a in kernel_syms]
            codim = space.dim - rank(vecs, p)
            if codim > delta_space.dim:
                return SeparabilityFailure(ci, coord, codim)
            basis, _ = row_reduce(vecs, p)
            quotient = kernel_complement_surjection(space, basis, delta_space)
            table = tuple(
                delta_space.index(quotient.apply(space.vector(a))) for a in range(size)
            )
            groups: dict[int, list[int]] = {}
            order = []
            for a in range(size):
                if table[a] not in groups:
                    groups[table[a]] = []
                    order.append(table[a])
                groups[table[a]].append(a)
            coord_maps.append(table)
            partitions.append(tuple(tuple(groups[v]) for v in order))
            subspaces.append(tuple(basis))
        accept = _pushforward(check, size, coord_maps, delta_size)
        assert _verify_factoring(check, size, coord_maps, accept, delta_size)
        certs.append(
            CheckCertificate(tuple(partitions), tuple(coord_maps), accept, tuple(subspaces))
        )
    return SeparabilityCertificate(delta_size, True, tuple(certs))


# ---------------------------------------------------------------------------
# Replacement testers
# ---------------------------------------------------------------------------


def separable_replacement(tester: Tester, mu: Fraction, delta_size: int) -> Tester:
    """One check per (original check, guessed tuple): fire the original
    predicate only when the read letters equal the guess, else accept.

    The reject probability of the result is exactly the original's divided
    by |Sigma|^q pointwise, so soundness mu/|Sigma|^q is certified; every
    check is separable for any target with at least two symbols (indicator
    maps per coordinate).  Always-accept checks are kept so weights pass
    through unrenormalized.
    """
    if mu <= 0:
        raise DomainError("soundness lower bound must be positive")
    if delta_size < 2:
        raise DomainError("target alphabets need at least two symbols")
    size = tester.alphabet.size
    q = tester.q
    padded = [pad_check(ch, q, size) for ch in tester.checks]
    factor = size**q
    checks = []
    for ch in padded:
        every = full_accept(size, q)
        for u_idx in range(factor):
            if (ch.accept >> u_idx) & 1:
                accept = every
            else:
                accept = every & ~(1 << u_idx)
            checks.append(Check(ch.queries, accept, ch.weight / factor))
    return Tester(
        tester.alphabet,
        tester.n,
        q,
        tuple(checks),
        meta={"bound": mu / factor},
    )


def linear_separable_replacement(
    tester: Tester, mu: Fraction, delta_space: VecSpace
) -> Tester:
    """Split each subspace check into m = ceil(q dim Sigma / dim Delta)
    kernel conditions of a surjection onto Delta^m.

    Rejecting the original check means at least one component rejects, so
    the reject probability drops by at most a factor m pointwise and
    soundness mu/m is certified; every component's accept set is a subspace
    of codimension at most dim Delta, hence linearly separable.
    """
    if mu <= 0:
        raise DomainError("soundness lower bound must be positive")
    space = tester.alphabet.space
    if space is None:
        raise DomainError("needs a vector-space alphabet")
    size = tester.alphabet.size
    q = tester.q
    padded_tester = Tester(
        tester.alphabet,
        tester.n,
        q,
        tuple(pad_check(ch, q, size) for ch in tester.checks),
    )
    classification = classify_linear(padded_tester)
    if classification.kind == "nonlinear":
        raise DomainError("linear replacement is defined for linear testers")
    p = space.field.p
    m = ceil(q * space.dim / delta_space.dim)
    flat_space = VecSpace(space.field, q * space.dim)
    target = VecSpace(space.field, m * delta_space.dim)
    checks = []
    for ch, basis in zip(padded_tester.checks, classification.subspace_bases):
        surj = kernel_complement_surjection(flat_space, list(basis), target)
        for j in range(m):
            rows = surj.matrix[j * delta_space.dim : (j + 1) * delta_space.dim]
            accept = 0
            for tup in itertools.product(range(size), repeat=q):
                flat = [x for sym in tup for x in space.vector(sym)]
                if all(sum(r * v for r, v in zip(row, flat)) % p == 0 for row in rows):
                    accept |= 1 << encode_tuple(tup, size)
            checks.append(Check(ch.queries, accept, ch.weight / m))
    return Tester(
        tester.alphabet,
        tester.n,
        q,
        tuple(checks),
        meta={"bound": mu / m, "m": m},
    )


# ---------------------------------------------------------------------------
# Compatibility encoders and witness plumbing
# ---------------------------------------------------------------------------


def compatibility_encoder(
    sigma: Alphabet, delta: Alphabet, linear: bool, budget: int = DEFAULT_BUDGET
) -> Encoder:
    """Encoder whose coordinates are all (linear) functions Sigma -> Delta,
    in canonical order; its image is the generalized long (resp. Hadamard)
    code, and it is injective because the family separates points."""
    if linear:
        if sigma.space is None or delta.space is None:
            raise DomainError("linear encoder needs vector-space alphabets")
        if sigma.space.field != delta.space.field:
            raise MismatchError("alphabets lie over different fields")
        from .algebra import enumerate_linear_maps

        maps = enumerate_linear_maps(sigma.space, delta.space, budget)
        tables = tuple(
            tuple(delta.space.index(m.apply(sigma.space.vector(s))) for s in range(sigma.size))
            for m in maps
        )
    else:
        k = delta.size**sigma.size
        if k > budget:
            raise CapacityError(k, budget, "function enumeration")
        tables = tuple(
            tuple((m // delta.size**s) % delta.size for s in range(sigma.size))
            for m in range(k)
        )
    return Encoder(FunctionFamily(sigma.size, delta, tables))


def witness_from_certificate(
    cert: SeparabilityCertificate, tester: Tester, encoder: Encoder
) -> CompatibilityWitness:
    """Turn a separability certificate into a compatibility witness: each
    per-coordinate map appears verbatim as an encoder coordinate."""
    index_of = {table: i for i, table in enumerate(encoder.family.tables)}
    entries = []
    for chk_cert in cert.checks:
        positions = []
        for table in chk_cert.coord_maps:
            if table not in index_of:
                raise MismatchError("certificate map missing from the encoder family")
            positions.append(index_of[table])
        entries.append(WitnessEntry(tuple(positions), chk_cert.accept))
    wit = CompatibilityWitness(tuple(entries))
    if not verify_witness(tester, encoder, wit):
        raise MismatchError("certificate does not factor the tester through the encoder")
    return wit


def extend_compatibility(
    witness: CompatibilityWitness, source: Encoder, target: Encoder
) -> CompatibilityWitness:
    """Re-index a witness into a larger encoder whose coordinates contain
    every source coordinate (same value tables, symbols embedded by index).

    The predicate is extended by accepting on tuples mentioning new symbols,
    so the extension never rejects anything the source could not see.
    """
    if target.target.size < source.target.size:
        raise MismatchError("target encoder alphabet does not contain the source's")
    match: dict[tuple[int, ...], int] = {}
    for j2, table in enumerate(target.family.tables):
        match.setdefault(table, j2)
    remap = []
    for table in source.family.tables:
        if table not in match:
            raise MismatchError(f"no target coordinate matches source table {table}")
        remap.append(match[table])
    d_old = source.target.size
    d_new = target.target.size
    entries = []
    for entry in witness.entries:
        positions = tuple(remap[b] for b in entry.positions)
        arity = len(entry.positions)
        accept = full_accept(d_new, arity)
        for idx in range(d_old**arity):
            if not (entry.accept >> idx) & 1:
                key = tuple((idx // d_old**l) % d_old for l in range(arity))
                accept &= ~(1 << encode_tuple(key, d_new))
        entries.append(WitnessEntry(positions, accept))
    return CompatibilityWitness(tuple(entries))
