"""Exact values of Ramanujan's tau function.

The table is built from the product expansion: the cube of the Euler product
is the sparse series sum (-1)^n (2n+1) q^(n(n+1)/2) (Jacobi), and three
squarings of it give prod (1 - q^n)^24. Dense squarings go through Kronecker
substitution so the heavy lifting is one big-integer multiplication each.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Sequence

import gmpy2

from .arith import factor, valuation

DEFAULT_CAP = 10**6
CACHE_MAGIC = b"TAUT"
CACHE_VERSION = 1


class ResourceLimitError(RuntimeError):
    pass


class TauRangeError(LookupError):
    pass


@dataclass(frozen=True)
class TauTable:
    """tau(1..limit); ``table[n]`` is 1-indexed."""

    limit: int
    coeffs: tuple[int, ...]

    def __getitem__(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise TauRangeError(f"tau({n}) outside table range 1..{self.limit}")
        return self.coeffs[n - 1]

    def __len__(self) -> int:
        return self.limit

    def __iter__(self):
        return iter(self.coeffs)

    def items(self):
        return zip(range(1, self.limit + 1), self.coeffs)


def _euler_cube(n_terms: int) -> list[int]:
    """Coefficients of prod (1 - q^k)^3 up to q^(n_terms - 1)."""
    out = [0] * n_terms
    n = 0
    while (e := n * (n + 1) // 2) < n_terms:
        out[e] = (-1) ** n * (2 * n + 1)
        n += 1
    return out


def _sparse_square(series: Sequence[int]) -> list[int]:
    size = len(series)
    nz = [(i, c) for i, c in enumerate(series) if c]
    out = [0] * size
    for a, (i, ci) in enumerate(nz):
        for j, cj in nz[a:]:
            k = i + j
            if k >= size:
                break
            out[k] += ci * cj if i == j else 2 * ci * cj
    return out


def _kronecker_square(series: Sequence[int]) -> list[int]:
    """Truncated square of a dense integer series via one bigint product."""
    size = len(series)
    top = max(abs(c) for c in series)
    nbytes = ((top * top * size).bit_length() + 2 + 7) // 8
    pos = b"".join(max(c, 0).to_bytes(nbytes, "little") for c in series)
    neg = b"".join(max(-c, 0).to_bytes(nbytes, "little") for c in series)
    packed = gmpy2.mpz(int.from_bytes(pos, "little") - int.from_bytes(neg, "little"))
    sq = int(packed * packed)
    # Shift every signed digit into [0, 2^(8*nbytes)) so slicing needs no borrows.
    half = 1 << (8 * nbytes - 1)
    offset = int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * size, "little")
    raw = ((sq + offset) & ((1 << (8 * nbytes * size)) - 1)).to_bytes(nbytes * size, "little")
    return [
        int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - half
        for i in range(size)
    ]


def expand_delta(n: int, cap: int = DEFAULT_CAP) -> TauTable:
    """Exact tau(1..n) from q * prod (1 - q^k)^24."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ResourceLimitError(f"{n} coefficients requested, cap is {cap}")
    series = _sparse_square(_euler_cube(n))
    series = _kronecker_square(series)
    series = _kronecker_square(series)
    return TauTable(n, tuple(series))


@lru_cache(maxsize=4)
def _cached_table(n: int) -> TauTable:
    return expand_delta(n)


def tau_table(n: int) -> TauTable:
    """Shared table covering at least 1..n; sizes are bucketed so callers share."""
    size = 10_000
    while size < n:
        size *= 2
    return _cached_table(size)


def tau_prime_power(tau_p: int, p: int, m: int) -> int:
    """tau(p^m) from tau(p) by the Hecke recurrence."""
    if m < 0:
        raise ValueError("m must be >= 0")
    prev, cur = 1, tau_p
    if m == 0:
        return 1
    q = p**11
    for _ in range(m - 1):
        prev, cur = cur, tau_p * cur - q * prev
    return cur


def tau_prime_power_seq(tau_p: int, p: int, m: int) -> list[int]:
    """[tau(p^0), ..., tau(p^m)]."""
    out = [1]
    if m >= 1:
        out.append(tau_p)
    q = p**11
    while len(out) <= m:
        out.append(tau_p * out[-1] - q * out[-2])
    return out


def tau_of(n: int, table: TauTable) -> int:
    """tau(n) assembled multiplicatively from prime-power values."""
    if n < 1:
        raise ValueError("n must be positive")
    result = 1
    for p, e in factor(n).factors:
        pe = p**e
        if pe <= table.limit:
            result *= table[pe]
        elif p <= table.limit:
            result *= tau_prime_power(table[p], p, e)
        else:
            raise TauRangeError(f"tau({p}) needed but table stops at {table.limit}")
    return result


def is_ordinary(p: int, table: TauTable) -> bool:
    """True iff p does not divide tau(p)."""
    return table[p] % p != 0


def ordp_tau(p: int, table: TauTable) -> int:
    t = table[p]
    return valuation(t, p) if t else -1


def save_table(table: TauTable, path: str | Path) -> None:
    """Binary cache: b"TAUT", version byte, u64 N, then per value
    (sign byte, u16 magnitude length, little-endian magnitude)."""
    chunks = [CACHE_MAGIC, bytes([CACHE_VERSION]), struct.pack("<Q", table.limit)]
    for v in table.coeffs:
        mag = abs(v)
        body = mag.to_bytes((mag.bit_length() + 7) // 8, "little")
        chunks.append(struct.pack("<BH", 1 if v < 0 else 0, len(body)))
        chunks.append(body)
    Path(path).write_bytes(b"".join(chunks))


def load_table(path: str | Path) -> TauTable:
    data = Path(path).read_bytes()
    if data[:4] != CACHE_MAGIC:
        raise ValueError(f"{path}: not a tau cache file")
    if data[4] != CACHE_VERSION:
        raise ValueError(f"{path}: unsupported cache version {data[4]}")
    (n,) = struct.unpack_from("<Q", data, 5)
    pos = 13
    coeffs = []
    for _ in range(n):
        sign, length = struct.unpack_from("<BH", data, pos)
        pos += 3
        mag = int.from_bytes(data[pos : pos + length], "little")
        pos += length
        coeffs.append(-mag if sign else mag)
    if pos != len(data):
        raise ValueError(f"{path}: trailing bytes after {n} records")
    return TauTable(n, tuple(coeffs))
