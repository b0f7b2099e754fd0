"""Bit-packed square Boolean matrices and the competition-matrix oracle.

A :class:`BoolMatrix` stores one 0/1 matrix as little-endian 64-bit words,
one row of words per matrix row.  Products run through the bit-parallel
kernel in :mod:`mstep._kernels`.  On top of the product sit the power
sequence cycle detector and :func:`competition_profile`, which computes the
index, period and (when the period is one) limit of the sequence

    B_m = A^m (A^T)^m.

Entry (i, j) of ``B_m`` is 1 exactly when rows i and j of ``A^m`` share a
set column, i.e. when vertices i and j of the digraph with adjacency matrix
``A`` have a common m-step prey.  Dropping the diagonal of ``B_m`` therefore
yields the adjacency matrix of the m-step competition graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels


class ParseError(ValueError):
    """Malformed text input; carries the offending 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class ResourceLimitError(RuntimeError):
    """The power-sequence cycle search exceeded its stored-matrix budget."""


class BoolMatrix:
    """Immutable n-by-n Boolean matrix with rows packed into uint64 words.

    Equality and hashing are bitwise, so instances work as dict keys; the
    word array is frozen after construction and safe to share across
    threads.  Bits beyond column n-1 are always zero.
    """

    __slots__ = ("n", "words", "_hash")

    def __init__(self, n: int, words: np.ndarray):
        if n < 1:
            raise ValueError("matrix dimension must be >= 1")
        words = np.ascontiguousarray(words, dtype=np.uint64)
        expected = (n, _kernels.words_per_row(n))
        if words.shape != expected:
            raise ValueError(f"expected word shape {expected}, got {words.shape}")
        pad = n % _kernels.WORD_BITS
        if pad and (words[:, -1] & ~np.uint64((1 << pad) - 1)).any():
            raise ValueError("padding bits beyond column n-1 must be zero")
        words.setflags(write=False)
        self.n = n
        self.words = words
        self._hash = None

    @classmethod
    def from_dense(cls, dense) -> "BoolMatrix":
        dense = np.asarray(dense)
        if dense.ndim != 2 or dense.shape[0] != dense.shape[1]:
            raise ValueError(f"need a square 2-d array, got shape {dense.shape}")
        return cls(dense.shape[0], _kernels.pack_rows(dense))

    @classmethod
    def zeros(cls, n: int) -> "BoolMatrix":
        return cls(n, np.zeros((n, _kernels.words_per_row(n)), dtype=np.uint64))

    @classmethod
    def identity(cls, n: int) -> "BoolMatrix":
        return cls.from_dense(np.eye(n, dtype=np.uint8))

    @classmethod
    def ones(cls, n: int) -> "BoolMatrix":
        return cls.from_dense(np.ones((n, n), dtype=np.uint8))

    def to_dense(self) -> np.ndarray:
        """Return the matrix as an (n, n) uint8 array of 0/1."""
        return _kernels.unpack_rows(self.words, self.n)

    def get(self, i: int, j: int) -> int:
        return (int(self.words[i, j >> 6]) >> (j & 63)) & 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoolMatrix):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.words, other.words)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.words.tobytes()))
        return self._hash

    def __repr__(self) -> str:
        return f"BoolMatrix(n={self.n}, bits={int(self.to_dense().sum())})"


@dataclass(frozen=True)
class PowerCycle:
    """Minimal (index, period) with a^index == a^(index + period)."""

    index: int
    period: int


@dataclass(frozen=True)
class CompetitionProfile:
    """Competition index, period, and limit (present iff cperiod == 1)."""

    cindex: int
    cperiod: int
    limit: BoolMatrix | None


def bm_mul(a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    """Boolean product: result(i, j) = OR over t of a(i, t) AND b(t, j)."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} != {b.n}")
    out = np.zeros_like(a.words)
    _kernels.mul_into(a.words, b.words, out)
    return BoolMatrix(a.n, out)


def naive_mul(a: BoolMatrix, b: BoolMatrix) -> BoolMatrix:
    """Reference triple-loop product, independent of the packed kernel."""
    if a.n != b.n:
        raise ValueError(f"dimension mismatch: {a.n} != {b.n}")
    da, db = a.to_dense(), b.to_dense()
    n = a.n
    out = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        for j in range(n):
            for t in range(n):
                if da[i, t] and db[t, j]:
                    out[i, j] = 1
                    break
    return BoolMatrix.from_dense(out)


def bm_transpose(a: BoolMatrix) -> BoolMatrix:
    return BoolMatrix(a.n, _kernels.transpose_words(a.words, a.n))


def bm_pow(a: BoolMatrix, m: int) -> BoolMatrix:
    """a^m by square-and-multiply; m must be >= 1."""
    if m < 1:
        raise ValueError("exponent must be >= 1")
    result = None
    base = a
    while m:
        if m & 1:
            result = base if result is None else bm_mul(result, base)
        m >>= 1
        if m:
            base = bm_mul(base, base)
    return result


def zero_diagonal(a: BoolMatrix) -> BoolMatrix:
    """Copy of ``a`` with the diagonal forced to 0."""
    words = a.words.copy()
    for i in range(a.n):
        words[i, i >> 6] &= ~np.uint64(1 << (i & 63))
    return BoolMatrix(a.n, words)


def competition_matrix(a: BoolMatrix, m: int) -> BoolMatrix:
    """B_m = a^m (a^T)^m, computed as P P^T with P = a^m."""
    if m < 1:
        raise ValueError("step count must be >= 1")
    p = bm_pow(a, m)
    return bm_mul(p, bm_transpose(p))


def power_cycle(a: BoolMatrix, max_matrices: int | None = None) -> PowerCycle:
    """Locate the cycle of the power sequence a, a^2, a^3, ...

    Iterates powers into a seen-map until the first repeat; every hash hit
    is confirmed by a full bitwise comparison (dict semantics), so the
    returned pair is an exact certificate, never probabilistic.  The map is
    capped (default 10 n^2 stored matrices) so pathological inputs fail with
    :class:`ResourceLimitError` instead of exhausting memory.
    """
    cap = 10 * a.n * a.n if max_matrices is None else max_matrices
    seen: dict[BoolMatrix, int] = {}
    power = a
    m = 1
    while power not in seen:
        seen[power] = m
        if len(seen) > cap:
            raise ResourceLimitError(
                f"power sequence stored more than {cap} distinct matrices"
            )
        power = bm_mul(power, a)
        m += 1
    first = seen[power]
    return PowerCycle(index=first, period=m - first)


def competition_profile(
    a: BoolMatrix, max_matrices: int | None = None
) -> CompetitionProfile:
    """Index, period, and limit of the sequence B_m = a^m (a^T)^m.

    The power cycle (q, p) of ``a`` bounds the search: for m >= q the B
    sequence repeats with period dividing p, so the true period is the
    smallest divisor of p that holds across one full window [q, q + p), and
    the index is found by walking backwards from q one step at a time while
    the tail stays periodic.  Detecting the cycle of the powers first is
    what makes this terminate soundly; two equal consecutive B values alone
    would not (a growing sequence can plateau and then grow again).
    """
    pc = power_cycle(a, max_matrices=max_matrices)
    q, p = pc.index, pc.period
    bs: list[BoolMatrix | None] = [None]  # 1-indexed
    power = a
    for m in range(1, q + 2 * p + 1):
        if m > 1:
            power = bm_mul(power, a)
        bs.append(bm_mul(power, bm_transpose(power)))
    cperiod = next(
        d
        for d in range(1, p + 1)
        if p % d == 0 and all(bs[m] == bs[m + d] for m in range(q, q + p))
    )
    cindex = q
    while cindex > 1 and bs[cindex - 1] == bs[cindex - 1 + cperiod]:
        cindex -= 1
    limit = bs[cindex] if cperiod == 1 else None
    return CompetitionProfile(cindex=cindex, cperiod=cperiod, limit=limit)


def parse_matrix_text(text: str) -> BoolMatrix:
    """Parse the dense text format: a line with n, then n lines of n 0/1
    characters.  Round-trips bit-exactly with :func:`format_matrix_text`."""
    lines = text.splitlines()
    if not lines:
        raise ParseError(1, "empty input")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise ParseError(1, f"expected the dimension, got {lines[0]!r}") from None
    if n < 1:
        raise ParseError(1, "dimension must be >= 1")
    if len(lines) < n + 1:
        raise ParseError(len(lines) + 1, f"expected {n} rows, got {len(lines) - 1}")
    dense = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        row = lines[i + 1].strip()
        if len(row) != n:
            raise ParseError(i + 2, f"expected {n} characters, got {len(row)}")
        for j, ch in enumerate(row):
            if ch == "1":
                dense[i, j] = 1
            elif ch != "0":
                raise ParseError(i + 2, f"invalid character {ch!r}")
    for extra in range(n + 1, len(lines)):
        if lines[extra].strip():
            raise ParseError(extra + 1, "trailing content after the matrix")
    return BoolMatrix.from_dense(dense)


def format_matrix_text(a: BoolMatrix) -> str:
    dense = a.to_dense()
    rows = ["".join("1" if x else "0" for x in dense[i]) for i in range(a.n)]
    return "\n".join([str(a.n)] + rows) + "\n"
