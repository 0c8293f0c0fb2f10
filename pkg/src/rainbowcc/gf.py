"""Finite-field arithmetic, MDS matrices, and packet combine/solve kernels.

Two fields are supported: GF(2) and GF(2^8) with reduction polynomial 0x11D.
Packets are byte strings of one shared length; addition is XOR in both
fields, and over GF(2^8) a scalar times a packet is a bytewise field
multiply. An m x n matrix is MDS when every m x m submatrix is invertible,
so any m of the n combined values suffice to recover m unknowns.
"""

from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass

from . import kernels
from .errors import (
    DimensionMismatch,
    LengthMismatch,
    NoBinaryMds,
    TooLarge,
    Undecodable,
    Underdetermined,
)

GF2 = "gf2"
GF256 = "gf256"
FIELDS = (GF2, GF256)

DEFAULT_PACKET_SIZE = 64

_VERIFY_ROWS_GUARD = 12


def field_order(field):
    if field == GF2:
        return 2
    if field == GF256:
        return 256
    raise DimensionMismatch(f"unknown field tag {field!r}")


def field_mul(field, a, b):
    if field == GF2:
        return a & b
    return kernels.gf256_mul(a, b)


def field_inv(field, a):
    """Multiplicative inverse; a must be nonzero."""
    if a == 0:
        raise ZeroDivisionError("inverse of 0")
    if field == GF2:
        return 1
    # a^254 by square-and-multiply
    result = 1
    base = a
    e = 254
    while e:
        if e & 1:
            result = kernels.gf256_mul(result, base)
        base = kernels.gf256_mul(base, base)
        e >>= 1
    return result


@dataclass(frozen=True)
class Matrix:
    """Dense matrix over GF(2) or GF(2^8); entries are plain ints."""

    rows: int
    cols: int
    entries: tuple
    field: str = GF2

    def __post_init__(self):
        if self.field not in FIELDS:
            raise DimensionMismatch(f"unknown field tag {self.field!r}")
        if len(self.entries) != self.rows:
            raise DimensionMismatch("row count does not match entries")
        q = field_order(self.field)
        for row in self.entries:
            if len(row) != self.cols:
                raise DimensionMismatch("column count does not match entries")
            for v in row:
                if not (0 <= v < q):
                    raise DimensionMismatch(f"entry {v} outside GF({q})")

    def __getitem__(self, i):
        return self.entries[i]

    def to_doc(self):
        return {"rows": self.rows, "cols": self.cols, "field": self.field,
                "entries": [list(row) for row in self.entries]}

    @staticmethod
    def from_doc(doc):
        return Matrix(doc["rows"], doc["cols"],
                      tuple(tuple(row) for row in doc["entries"]), doc["field"])


def matrix(entries, field=GF2):
    rows = len(entries)
    cols = len(entries[0]) if rows else 0
    return Matrix(rows, cols, tuple(tuple(r) for r in entries), field)


def identity(n, field=GF2):
    return Matrix(n, n, tuple(tuple(1 if i == j else 0 for j in range(n))
                              for i in range(n)), field)


def mds_matrix(m, n, field=GF2):
    """An m x n MDS matrix.

    GF(2): identity for m = n, all-ones row for m = 1, [I | 1] for m = n-1;
    no other binary shapes exist for n > 2. GF(2^8): Cauchy matrix with
    x_i = i and y_j = m + j.
    """
    if m > n:
        raise DimensionMismatch(f"m={m} exceeds n={n}")
    if m == 0 or n == 0:
        return Matrix(m, n, tuple(tuple() for _ in range(m)), field)
    if m == n:
        return identity(n, field)
    if field == GF2:
        if m == 1:
            return Matrix(1, n, ((1,) * n,), field)
        if m == n - 1:
            rows = tuple(tuple(1 if (j == i or j == n - 1) else 0 for j in range(n))
                         for i in range(m))
            return Matrix(m, n, rows, field)
        raise NoBinaryMds(f"no binary MDS matrix with shape {m}x{n}")
    if m + n > 256:
        raise TooLarge(f"Cauchy construction needs m+n <= 256, got {m + n}")
    rows = []
    for i in range(m):
        row = []
        for j in range(n):
            row.append(field_inv(GF256, i ^ (m + j)))
        rows.append(tuple(row))
    return Matrix(m, n, tuple(rows), GF256)


def banded_mds(n, field=GF2):
    """(n-1) x n band of ones: row i has ones in columns i and i+1.

    Deleting any column leaves a unit-triangular block matrix, so the band
    is MDS over any field.
    """
    if n < 2:
        raise DimensionMismatch("band needs n >= 2")
    rows = tuple(tuple(1 if j in (i, i + 1) else 0 for j in range(n))
                 for i in range(n - 1))
    return Matrix(n - 1, n, rows, field)


def _rank(rows, field):
    """Rank of a list-of-lists scalar matrix via Gaussian elimination."""
    work = [list(r) for r in rows]
    n_rows = len(work)
    n_cols = len(work[0]) if work else 0
    rank = 0
    for col in range(n_cols):
        pivot = None
        for r in range(rank, n_rows):
            if work[r][col]:
                pivot = r
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = field_inv(field, work[rank][col])
        if inv != 1:
            work[rank] = [field_mul(field, inv, v) for v in work[rank]]
        for r in range(n_rows):
            if r != rank and work[r][col]:
                f = work[r][col]
                work[r] = [work[r][j] ^ field_mul(field, f, work[rank][j])
                           for j in range(n_cols)]
        rank += 1
    return rank


def verify_mds(P):
    """True iff every rows x rows submatrix of P is invertible."""
    if P.rows > P.cols:
        raise DimensionMismatch("verify_mds expects rows <= cols")
    if P.rows > _VERIFY_ROWS_GUARD:
        raise TooLarge(f"exhaustive minor check limited to {_VERIFY_ROWS_GUARD} rows")
    if P.rows == 0:
        return True
    for cols in itertools.combinations(range(P.cols), P.rows):
        sub = [[P[i][j] for j in cols] for i in range(P.rows)]
        if _rank(sub, P.field) < P.rows:
            return False
    return True


def _check_packets(packets):
    sizes = {len(p) for p in packets}
    if len(sizes) > 1:
        raise LengthMismatch(f"packets of mixed sizes {sorted(sizes)}")
    return sizes.pop() if sizes else 0


def combine(P, packets):
    """P times the packet vector: returns P.rows packets.

    Row i is the field sum over j of P[i][j] * packets[j]; sums are XORs of
    (scaled) packets.
    """
    if len(packets) != P.cols:
        raise LengthMismatch(f"expected {P.cols} packets, got {len(packets)}")
    size = _check_packets(packets)
    out = []
    for i in range(P.rows):
        acc = bytearray(size)
        row = P[i]
        for j, coef in enumerate(row):
            if coef == 0:
                continue
            if coef == 1:
                kernels.xor_into(acc, packets[j])
            else:
                kernels.gf256_axpy(acc, packets[j], coef)
        out.append(bytes(acc))
    return out


def solve_submatrix(P, known, received):
    """Recover the packets of all columns not in `known`.

    `received` must be the length-P.rows residual left after the caller
    XORed the known columns' contributions out of P * V. Returns a dict
    column index -> packet. Raises Underdetermined when more than P.rows
    columns are unknown or the residual system is rank deficient.
    """
    known_set = set(known)
    unknown = [j for j in range(P.cols) if j not in known_set]
    if not unknown:
        return {}
    if len(unknown) > P.rows:
        raise Underdetermined(f"{len(unknown)} unknowns but only {P.rows} rows")
    if len(received) != P.rows:
        raise LengthMismatch(f"expected {P.rows} residual packets, got {len(received)}")
    _check_packets(received)
    A = [[P[i][j] for j in unknown] for i in range(P.rows)]
    rhs = [bytearray(p) for p in received]
    pivot_row = {}
    rank = 0
    for c in range(len(unknown)):
        pivot = None
        for r in range(rank, P.rows):
            if A[r][c]:
                pivot = r
                break
        if pivot is None:
            raise Underdetermined("residual system is rank deficient")
        A[rank], A[pivot] = A[pivot], A[rank]
        rhs[rank], rhs[pivot] = rhs[pivot], rhs[rank]
        inv = field_inv(P.field, A[rank][c])
        if inv != 1:
            A[rank] = [field_mul(P.field, inv, v) for v in A[rank]]
            rhs[rank] = bytearray(kernels.gf256_scale(bytes(rhs[rank]), inv))
        for r in range(P.rows):
            if r != rank and A[r][c]:
                f = A[r][c]
                A[r] = [A[r][j] ^ field_mul(P.field, f, A[rank][j])
                        for j in range(len(unknown))]
                if f == 1:
                    kernels.xor_into(rhs[r], bytes(rhs[rank]))
                else:
                    kernels.gf256_axpy(rhs[r], bytes(rhs[rank]), f)
        pivot_row[c] = rank
        rank += 1
    for r in range(rank, P.rows):
        if any(rhs[r]):
            raise Undecodable("inconsistent residual rows in solve")
    return {unknown[c]: bytes(rhs[pivot_row[c]]) for c in range(len(unknown))}


def deterministic_bytes(seed, parts, size):
    """Reproducible pseudo-random bytes keyed by seed and a tuple of parts."""
    label = ("/".join(str(p) for p in parts)).encode()
    out = bytearray()
    block = 0
    while len(out) < size:
        h = hashlib.blake2b(label + b"#" + str(block).encode(),
                            digest_size=64, key=str(seed).encode())
        out.extend(h.digest())
        block += 1
    return bytes(out[:size])
