"""Prime-field arithmetic and small exhaustive linear algebra.

Everything here works over GF(p) for prime p, with vectors represented as
plain tuples of ints.  The canonical enumeration of GF(p)^dim is
lexicographic with the least-significant coordinate first: the vector with
index i has coordinate j equal to (i // p**j) % p, so index 0 is always the
zero vector.  All downstream constructions inherit their determinism from
this order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapacityError, DomainError, MismatchError

DEFAULT_BUDGET = 1 << 26

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)


@dataclass(frozen=True)
class Field:
    """GF(p) for prime p, arithmetic by direct modular computation."""

    p: int

    def __post_init__(self):
        if self.p not in SUPPORTED_PRIMES:
            raise DomainError(f"unsupported field size {self.p}; primes {SUPPORTED_PRIMES}")

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return (a * b) % self.p

    def neg(self, a: int) -> int:
        return (-a) % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)


@dataclass(frozen=True)
class VecSpace:
    """GF(p)^dim with the canonical least-significant-first enumeration."""

    field: Field
    dim: int

    def __post_init__(self):
        if self.dim < 0:
            raise DomainError("dimension must be non-negative")

    @property
    def size(self) -> int:
        return self.field.p ** self.dim

    def vector(self, index: int) -> tuple[int, ...]:
        p = self.field.p
        if not 0 <= index < self.size:
            raise DomainError(f"vector index {index} out of range for {self}")
        return tuple((index // p**j) % p for j in range(self.dim))

    def index(self, vec: Sequence[int]) -> int:
        p = self.field.p
        if len(vec) != self.dim:
            raise MismatchError(f"vector length {len(vec)} != dim {self.dim}")
        return sum((v % p) * p**j for j, v in enumerate(vec))

    def add(self, u: Sequence[int], v: Sequence[int]) -> tuple[int, ...]:
        p = self.field.p
        return tuple((a + b) % p for a, b in zip(u, v))

    def scale(self, c: int, v: Sequence[int]) -> tuple[int, ...]:
        p = self.field.p
        return tuple((c * a) % p for a in v)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.dim


def enumerate_vectors(space: VecSpace, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    """All p^dim vectors in canonical order; index 0 is the zero vector."""
    if space.size > budget:
        raise CapacityError(space.size, budget, "vector enumeration")
    return [space.vector(i) for i in range(space.size)]


@dataclass(frozen=True)
class LinearMap:
    """Matrix map between vector spaces; rows index codomain coordinates."""

    domain: VecSpace
    codomain: VecSpace
    matrix: tuple[tuple[int, ...], ...]  # codomain.dim rows, domain.dim columns

    def __post_init__(self):
        if self.domain.field != self.codomain.field:
            raise MismatchError("domain and codomain fields differ")
        if len(self.matrix) != self.codomain.dim or any(
            len(row) != self.domain.dim for row in self.matrix
        ):
            raise MismatchError("matrix shape does not match spaces")

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        p = self.domain.field.p
        return tuple(sum(r * v for r, v in zip(row, vec)) % p for row in self.matrix)

    def apply_index(self, index: int) -> int:
        return self.codomain.index(self.apply(self.domain.vector(index)))


def enumerate_linear_maps(
    dom: VecSpace, cod: VecSpace, budget: int = DEFAULT_BUDGET
) -> list[LinearMap]:
    """All linear maps dom -> cod, ordered by the images of the basis vectors.

    Map number m sends basis vector e_j to the codomain vector with index
    (m // |cod|**j) % |cod|, i.e. matrix columns are enumerated in the same
    least-significant-first order as vectors.  The count is |cod|**dim(dom).
    """
    if dom.field != cod.field:
        raise MismatchError("spaces lie over different fields")
    count = cod.size ** dom.dim
    if count > budget:
        raise CapacityError(count, budget, "linear map enumeration")
    maps = []
    for m in range(count):
        cols = [cod.vector((m // cod.size**j) % cod.size) for j in range(dom.dim)]
        matrix = tuple(tuple(cols[j][i] for j in range(dom.dim)) for i in range(cod.dim))
        maps.append(LinearMap(dom, cod, matrix))
    return maps


# ---------------------------------------------------------------------------
# Row reduction over GF(p) on tuple vectors
# ---------------------------------------------------------------------------


def row_reduce(rows: Iterable[Sequence[int]], p: int) -> tuple[list[tuple[int, ...]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    if not work:
        return [], []
    width = len(work[0])
    pivots: list[int] = []
    r = 0
    for col in range(width):
        pivot = next((i for i in range(r, len(work)) if work[i][col] % p != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = pow(work[r][col], p - 2, p)
        work[r] = [(x * inv) % p for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][col] % p != 0:
                f = work[i][col]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[r])]
        pivots.append(col)
        r += 1
        if r == len(work):
            break
    return [tuple(row) for row in work[:r]], pivots


def rank(rows: Iterable[Sequence[int]], p: int) -> int:
    return len(row_reduce(rows, p)[0])


def in_span(vec: Sequence[int], rref_rows: list[tuple[int, ...]], pivots: list[int], p: int) -> bool:
    """Membership test against an already-reduced basis."""
    residue = [x % p for x in vec]
    for row, col in zip(rref_rows, pivots):
        c = residue[col]
        if c:
            residue = [(a - c * b) % p for a, b in zip(residue, row)]
    return all(x == 0 for x in residue)


def span_vectors(basis: Sequence[Sequence[int]], dim: int, p: int) -> list[tuple[int, ...]]:
    """All p^rank(basis) vectors spanned by the given rows."""
    rref, _ = row_reduce(basis, p)
    out = [(0,) * dim]
    for row in rref:
        out = [
            tuple((a + c * b) % p for a, b in zip(v, row)) for v in out for c in range(p)
        ]
    return out


def solve_functional(basis: Sequence[Sequence[int]], dim: int, p: int) -> tuple[int, ...]:
    """A nonzero functional vanishing on span(basis); requires codimension >= 1.

    Deterministic: returns the solution whose free coordinate is the earliest
    non-pivot column, set to 1.
    """
    rref, pivots = row_reduce(basis, p)
    free = [c for c in range(dim) if c not in pivots]
    if not free:
        raise DomainError("basis spans the whole space; no nonzero functional vanishes on it")
    # Solve basis . phi = 0 by expressing pivot coordinates of phi in terms of
    # the first free coordinate.
    f0 = free[0]
    phi = [0] * dim
    phi[f0] = 1
    # rref rows r: sum_j r[j] phi[j] = 0  =>  phi[pivot] = -r[f0] (row has 1 at pivot)
    for row, col in zip(rref, pivots):
        phi[col] = (-row[f0]) % p
    return tuple(phi)


def invert_matrix(matrix: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Inverse of a square matrix over GF(p) by Gauss-Jordan elimination."""
    n = len(matrix)
    work = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(matrix)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if work[i][col] % p != 0), None)
        if pivot is None:
            raise DomainError("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        inv = pow(work[col][col], p - 2, p)
        work[col] = [(x * inv) % p for x in work[col]]
        for i in range(n):
            if i != col and work[i][col] % p != 0:
                f = work[i][col]
                work[i] = [(a - f * b) % p for a, b in zip(work[i], work[col])]
    return [row[n:] for row in work]


def kernel_complement_surjection(
    domain: VecSpace, basis: Sequence[Sequence[int]], target: VecSpace
) -> LinearMap:
    """A linear map domain -> target whose kernel is exactly span(basis).

    Deterministic construction: row-reduce the basis, extend it to a full
    basis of the domain with the earliest admissible standard vectors, send
    the kernel part to zero and the j-th complement vector to the j-th
    standard basis vector of the target (remaining target coordinates stay
    zero).
    """
    p = domain.field.p
    if domain.field != target.field:
        raise MismatchError("domain and target fields differ")
    basis = [tuple(x % p for x in b) for b in basis]
    rref, pivots = row_reduce(basis, p)
    if len(rref) != len(basis):
        raise DomainError("kernel basis vectors are linearly dependent")
    comp_needed = domain.dim - len(rref)
    if target.dim < comp_needed:
        raise DomainError(
            f"target dimension {target.dim} too small for complement of dimension {comp_needed}"
        )
    full = list(rref)
    full_pivots = list(pivots)
    complement: list[tuple[int, ...]] = []
    for j in range(domain.dim):
        if len(full) == domain.dim:
            break
        e = tuple(int(i == j) for i in range(domain.dim))
        if not in_span(e, *row_reduce(full, p), p):
            full.append(e)
            complement.append(e)
    if domain.dim == 0:
        return LinearMap(domain, target, tuple(() for _ in range(target.dim)))
    # Images in basis order: kernel rows -> 0, complement j -> e_j of target.
    images = [(0,) * target.dim for _ in rref]
    images += [tuple(int(i == j) for i in range(target.dim)) for j in range(len(complement))]
    # M sends the full basis (as columns of B) to the image columns: M = I B^-1.
    basis_matrix = [[full[r][c] for r in range(domain.dim)] for c in range(domain.dim)]
    inv = invert_matrix(basis_matrix, p)
    matrix = tuple(
        tuple(
            sum(images[r][i] * inv[r][c] for r in range(domain.dim)) % p
            for c in range(domain.dim)
        )
        for i in range(target.dim)
    )
    return LinearMap(domain, target, matrix)
