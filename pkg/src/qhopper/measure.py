"""Quantal measure, preclusion tests, and exact precluded-event counting.

Histories ending at different sites cannot interfere, so the measure of
an event is the sum over final sites of |sector amplitude sum|^2
(unnormalized).  An event is precluded exactly when every sector sum
vanishes; on a fixed-final space that reduces to one amplitude sum.

Counting is done over amplitude classes: a subset's sum depends only on
how many members it takes from each class, so the zero-sum predicate
lives on the small lattice of per-class count vectors and each zero-sum
vector contributes a product of binomial coefficients.
"""
from __future__ import annotations

import math
import os
import weakref
from dataclasses import dataclass

import numpy as np

from .cyclotomic import CycInt
from .errors import InfeasibleSizeError, WrongSpaceError
from .histories import AmplitudeClasses, Event, HistorySpace, amplitude_classes
from .subsetwalk import DEFAULT_CHUNK, walk_count_table

__all__ = [
    "SectorTable",
    "sector_tables",
    "event_sum",
    "sector_sums",
    "quantal_measure_is_zero",
    "is_precluded",
    "count_precluded",
    "count_precluded_bruteforce",
    "preclusive_coevent_count_exponent",
    "maximal_zero_count_vectors",
    "CAP_ENV_VAR",
    "HARD_SUBSET_CAP",
]

DEFAULT_MAX_VECTORS = 1 << 20
HARD_SUBSET_CAP = 1 << 27
CAP_ENV_VAR = "COEVENT_MAX_SUBSETS"


def resolve_subset_cap(requested: int | None, default: int) -> int:
    """Soft cap for brute-force walks: argument, else env override, else default.

    The hard ceiling of 2**27 subsets always applies.
    """
    if requested is None:
        env = os.environ.get(CAP_ENV_VAR)
        if env:
            try:
                requested = int(env)
            except ValueError as exc:
                raise ValueError(
                    f"{CAP_ENV_VAR} must be an integer, got {env!r}"
                ) from exc
        else:
            requested = default
    return min(requested, HARD_SUBSET_CAP)


# -- per-sector count-vector tables -------------------------------------------


@dataclass(frozen=True, eq=False)
class SectorTable:
    """Zero-sum structure of one final sector's amplitude classes."""

    final: int
    class_ids: tuple[int, ...]  # global class indices, in class order
    values: tuple[CycInt, ...]
    counts: tuple[int, ...]
    zero_vectors: tuple[tuple[int, ...], ...]
    maximal_zero: tuple[tuple[int, ...], ...]

    def extendable(self, vec: tuple[int, ...]) -> bool:
        """True iff some zero-sum count vector dominates `vec` componentwise."""
        return any(all(k <= m for k, m in zip(vec, mx)) for mx in self.maximal_zero)


def _enumerate_zero_vectors(
    values: tuple[CycInt, ...], counts: tuple[int, ...], order: int, max_vectors: int
) -> list[tuple[int, ...]]:
    lattice = math.prod(c + 1 for c in counts)
    if lattice > max_vectors:
        raise InfeasibleSizeError(
            f"count-vector lattice of {lattice} exceeds the guard of {max_vectors}"
        )
    out: list[tuple[int, ...]] = []
    prefix: list[int] = []

    def rec(i: int, partial: CycInt) -> None:
        if i == len(values):
            if partial.is_zero():
                out.append(tuple(prefix))
            return
        cur = partial
        for k in range(counts[i] + 1):
            if k:
                cur = cur + values[i]
            prefix.append(k)
            rec(i + 1, cur)
            prefix.pop()

    rec(0, CycInt.zero(order))
    return out


def _vector_maxima(vectors: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    maxima = []
    for v in vectors:
        if not any(w != v and all(a <= b for a, b in zip(v, w)) for w in vectors):
            maxima.append(v)
    return maxima


_tables_cache: "weakref.WeakKeyDictionary[AmplitudeClasses, dict[int, SectorTable]]"
_tables_cache = weakref.WeakKeyDictionary()


def sector_tables(
    classes: AmplitudeClasses, *, max_vectors: int = DEFAULT_MAX_VECTORS
) -> dict[int, SectorTable]:
    """Zero-sum count-vector tables per final sector (cached per classes object)."""
    cached = _tables_cache.get(classes)
    if cached is not None:
        return cached
    order = classes.space.order
    tables: dict[int, SectorTable] = {}
    for final, cids in classes.sectors.items():
        values = tuple(classes.classes[c].value for c in cids)
        counts = tuple(classes.classes[c].count for c in cids)
        zeros = _enumerate_zero_vectors(values, counts, order, max_vectors)
        tables[final] = SectorTable(
            final, tuple(cids), values, counts, tuple(zeros), tuple(_vector_maxima(zeros))
        )
    _tables_cache[classes] = tables
    return tables


# -- measure and preclusion ----------------------------------------------------


def event_sum(event: Event) -> CycInt:
    """Exact amplitude sum of an event on a fixed-final space."""
    space = event.space
    if space.final is None:
        raise WrongSpaceError(
            "event_sum needs a fixed-final space; use sector_sums on unrestricted spaces"
        )
    acc = CycInt.zero(space.order)
    for i in event.iter_indices():
        acc = acc + space.amps[i]
    return acc


def sector_sums(event: Event) -> dict[int, CycInt]:
    """Amplitude sum of the event's members per final site."""
    space = event.space
    finals = [space.final] if space.final is not None else list(range(space.spec.n))
    sums = {f: CycInt.zero(space.order) for f in finals}
    for i in event.iter_indices():
        f = space.histories[i][-1]
        sums[f] = sums[f] + space.amps[i]
    return sums


def quantal_measure_is_zero(event: Event) -> bool:
    """True iff the event's quantal measure (sum of |sector sum|^2) is zero."""
    return all(s.is_zero() for s in sector_sums(event).values())


def is_precluded(event: Event) -> bool:
    """Events of measure zero cannot happen; the empty event is precluded."""
    return quantal_measure_is_zero(event)


# -- counting -------------------------------------------------------------------


def count_precluded(
    classes: AmplitudeClasses, *, max_vectors: int = DEFAULT_MAX_VECTORS
) -> int:
    """Exact number of zero-sum subsets (the empty set included).

    Per sector this is a sum over zero-sum count vectors of products of
    binomials; sectors are independent, so an unrestricted space yields
    the product of its sector counts.
    """
    total = 1
    for table in sector_tables(classes, max_vectors=max_vectors).values():
        sector_count = 0
        for vec in table.zero_vectors:
            term = 1
            for k, c in zip(vec, table.counts):
                term *= math.comb(c, k)
            sector_count += term
        total *= sector_count
    return total


def maximal_zero_count_vectors(
    classes: AmplitudeClasses, *, max_vectors: int = DEFAULT_MAX_VECTORS
) -> list[tuple[int, ...]]:
    """Zero-sum count vectors not dominated by another (fixed-final spaces)."""
    if classes.space.final is None:
        raise WrongSpaceError("maximal zero vectors are defined per fixed-final sector")
    (table,) = sector_tables(classes, max_vectors=max_vectors).values()
    return sorted(table.maximal_zero)


def preclusive_coevent_count_exponent(space: HistorySpace) -> int:
    """log2 of the number of preclusive coevents: 2**size minus the precluded count."""
    if space.final is None:
        raise WrongSpaceError("the exponent is defined on fixed-final spaces")
    return (1 << space.size) - count_precluded(amplitude_classes(space))


def count_precluded_bruteforce(
    space: HistorySpace,
    *,
    max_subsets: int | None = None,
    max_vectors: int = DEFAULT_MAX_VECTORS,
    threads: int = 1,
    chunk: int = DEFAULT_CHUNK,
) -> int:
    """Count zero-sum subsets by walking every subset of the space.

    The walk is a Gray-code traversal keeping the subset's per-class
    count vector current one flip at a time; the zero-sum verdict per
    count vector is precomputed exactly once.  Independent of
    :func:`count_precluded`, which never enumerates subsets.
    """
    cap = resolve_subset_cap(max_subsets, HARD_SUBSET_CAP)
    if space.size > 27 or (1 << space.size) > cap:
        raise InfeasibleSizeError(
            f"brute force over 2^{space.size} subsets exceeds the cap of {cap}"
        )
    classes = amplitude_classes(space)
    radix = [c + 1 for c in classes.counts]
    lattice = math.prod(radix)
    if lattice > max_vectors:
        raise InfeasibleSizeError(
            f"count-vector lattice of {lattice} exceeds the guard of {max_vectors}"
        )
    # weight of class i in the mixed-radix index (row-major)
    weights = [0] * len(radix)
    w = 1
    for i in range(len(radix) - 1, -1, -1):
        weights[i] = w
        w *= radix[i]

    # verdict per count vector: every sector's partial sum is zero
    idx = np.arange(lattice, dtype=np.int64)
    table = np.ones(lattice, dtype=bool)
    for sector in sector_tables(classes, max_vectors=max_vectors).values():
        local_radix = [c + 1 for c in sector.counts]
        local_weights = [0] * len(local_radix)
        w = 1
        for i in range(len(local_radix) - 1, -1, -1):
            local_weights[i] = w
            w *= local_radix[i]
        flat = np.zeros(math.prod(local_radix), dtype=bool)
        for vec in sector.zero_vectors:
            flat[sum(k * lw for k, lw in zip(vec, local_weights))] = True
        local_idx = np.zeros(lattice, dtype=np.int64)
        for pos, cid in enumerate(sector.class_ids):
            digit = (idx // weights[cid]) % radix[cid]
            local_idx += digit * local_weights[pos]
        table &= flat[local_idx]

    bit_weight = [weights[classes.class_of[b]] for b in range(space.size)]
    return walk_count_table(space.size, bit_weight, table, threads=threads, chunk=chunk)
