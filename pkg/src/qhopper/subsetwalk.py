"""Gray-code walks over all subsets of a small ground set.

Stepping through subsets in Gray-code order flips exactly one element
per step, so any additive per-subset statistic can be carried along
incrementally.  The walk is vectorized in chunks; a chunk starting at
step s needs no state from its predecessor because the running value at
step s-1 is just the statistic of the subset gray(s-1), computable
directly.  That makes chunks independent, deterministic, and safe to
hand to a thread pool in any order.

Step i visits the subset gray(i) = i ^ (i >> 1); the element flipped at
step i is the number of trailing zeros of i, and it is switched ON when
the bit above it in i is 0, OFF otherwise.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, Sequence, TypeVar

import numpy as np

__all__ = [
    "gray",
    "walk_count_table",
    "zero_sum_subsets",
    "antichain_maxima",
    "submasks",
    "minimal_uncovered",
]

DEFAULT_CHUNK = 1 << 20

_T = TypeVar("_T")


def gray(i: int) -> int:
    return i ^ (i >> 1)


def _chunk_ranges(total: int, chunk: int) -> list[tuple[int, int]]:
    return [(lo, min(lo + chunk, total)) for lo in range(0, total, chunk)]


def _run_chunks(
    fn: Callable[[int, int], _T], ranges: Sequence[tuple[int, int]], threads: int
) -> list[_T]:
    if threads <= 1 or len(ranges) <= 1:
        return [fn(lo, hi) for lo, hi in ranges]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, lo, hi) for lo, hi in ranges]
        return [f.result() for f in futures]


def _flip_info(lo: int, hi: int) -> tuple[np.ndarray, np.ndarray]:
    """Flipped-bit index and +-1 on/off sign for steps lo..hi-1 (lo >= 1)."""
    i = np.arange(lo, hi, dtype=np.int64)
    lsb = i & -i
    bits = np.bitwise_count((lsb - 1).astype(np.uint64)).astype(np.int64)
    sign = 1 - 2 * ((i >> (bits + 1)) & 1)
    return bits, sign


def walk_count_table(
    num_bits: int,
    bit_weight: Sequence[int],
    table: np.ndarray,
    *,
    threads: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> int:
    """Count subsets S of {0..num_bits-1} for which table[sum of weights of S] holds.

    `bit_weight[b]` is the (nonnegative) contribution of element b to the
    table index; the empty subset indexes slot 0.  Visits every one of
    the 2**num_bits subsets.
    """
    weights = np.asarray(list(bit_weight), dtype=np.int64)
    flat = np.asarray(table, dtype=bool).ravel()
    total = 1 << num_bits

    def do_chunk(lo: int, hi: int) -> int:
        hits = 0
        start = lo
        if start == 0:
            hits += int(flat[0])
            start = 1
        if start >= hi:
            return hits
        carry = 0
        prev = gray(start - 1)
        while prev:
            low = prev & -prev
            carry += int(weights[low.bit_length() - 1])
            prev ^= low
        bits, sign = _flip_info(start, hi)
        idx = carry + np.cumsum(weights[bits] * sign)
        hits += int(np.count_nonzero(flat[idx]))
        return hits

    return sum(_run_chunks(do_chunk, _chunk_ranges(total, chunk), threads))


def zero_sum_subsets(
    rows: Sequence[Sequence[int]],
    *,
    threads: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> list[int]:
    """Bitmasks of every subset whose elementwise integer-vector sum is zero.

    `rows[b]` is the vector attached to element b.  The empty subset
    always qualifies.  Returned masks are sorted ascending.
    """
    num_bits = len(rows)
    if num_bits == 0:
        return [0]
    mat = np.asarray([list(r) for r in rows], dtype=np.int64)
    total = 1 << num_bits

    def do_chunk(lo: int, hi: int) -> list[int]:
        found: list[int] = []
        start = lo
        if start == 0:
            found.append(0)
            start = 1
        if start >= hi:
            return found
        carry = np.zeros(mat.shape[1], dtype=np.int64)
        prev = gray(start - 1)
        while prev:
            low = prev & -prev
            carry += mat[low.bit_length() - 1]
            prev ^= low
        bits, sign = _flip_info(start, hi)
        acc = carry + np.cumsum(mat[bits] * sign[:, None], axis=0)
        where = np.nonzero(np.all(acc == 0, axis=1))[0]
        for off in where:
            step = start + int(off)
            found.append(gray(step))
        return found

    masks: list[int] = []
    for part in _run_chunks(do_chunk, _chunk_ranges(total, chunk), threads):
        masks.extend(part)
    masks.sort()
    return masks


def antichain_maxima(masks: Sequence[int]) -> list[int]:
    """Inclusion-maximal elements of a family of bitmasks, sorted ascending."""
    kept: list[int] = []
    for m in sorted(set(masks), key=lambda x: (-x.bit_count(), x)):
        if not any(m & ~k == 0 for k in kept):
            kept.append(m)
    kept.sort()
    return kept


def submasks(mask: int) -> Iterator[int]:
    """Every subset of `mask`, including itself and 0."""
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


def minimal_uncovered(covered: np.ndarray, num_bits: int) -> np.ndarray:
    """Mark masks that are uncovered while all their one-bit deletions are covered.

    `covered` is a boolean array indexed by bitmask, length 2**num_bits.
    """
    covered = np.asarray(covered, dtype=bool).ravel()
    ok = ~covered
    for b in range(num_bits):
        cov3 = covered.reshape(-1, 2, 1 << b)
        ok3 = ok.reshape(-1, 2, 1 << b)
        ok3[:, 1, :] &= cov3[:, 0, :]
    return ok
