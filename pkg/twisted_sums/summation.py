# Copyright (C) 2024 twyleg
"""
Compensated accumulation of long real and complex series.

Chunks are summed with ``math.fsum`` (correctly rounded), chunk partials are merged
with error-free two-sum transformations in a fixed pairwise tree so that the result
does not depend on the number of workers.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Sequence

import numpy as np


logm = logging.getLogger(__name__)

DEFAULT_CHUNK_SIZE = 1 << 16


def two_sum(u: float, v: float) -> tuple[float, float]:
    s = u + v
    up = s - v
    vpp = s - up
    up -= u
    vpp -= v
    return s, -(up + vpp)


class Accumulator:
    """
    Kahan-Babuska accumulator keeping the running sum and its rounding error separately.
    """

    def __init__(self, value: float = 0.0) -> None:
        self._s = float(value)
        self._t = 0.0

    def add(self, y: float) -> "Accumulator":
        # exact sum held as s + t + u, least significant end first
        y, u = two_sum(float(y), self._t)
        self._s, self._t = two_sum(y, self._s)
        if self._s == 0:
            self._s = u
        else:
            self._t += u
        return self

    def merge(self, other: "Accumulator") -> "Accumulator":
        self.add(other._s)
        self.add(other._t)
        return self

    def __float__(self) -> float:
        return self._s + self._t

    def __repr__(self) -> str:
        return f"Accumulator({float(self)!r})"


class ComplexAccumulator:
    def __init__(self) -> None:
        self.real = Accumulator()
        self.imag = Accumulator()

    def add(self, z: complex) -> "ComplexAccumulator":
        self.real.add(z.real)
        self.imag.add(z.imag)
        return self

    def merge(self, other: "ComplexAccumulator") -> "ComplexAccumulator":
        self.real.merge(other.real)
        self.imag.merge(other.imag)
        return self

    @property
    def value(self) -> complex:
        return complex(float(self.real), float(self.imag))


def chunk_sum(values: np.ndarray) -> ComplexAccumulator:
    acc = ComplexAccumulator()
    if np.iscomplexobj(values):
        acc.real.add(math.fsum(values.real.tolist()))
        acc.imag.add(math.fsum(values.imag.tolist()))
    else:
        acc.real.add(math.fsum(np.asarray(values, dtype=np.float64).tolist()))
    return acc


def tree_combine(partials: Sequence[ComplexAccumulator]) -> complex:
    """Pairwise merge in index order; the tree shape only depends on len(partials)."""
    level: List[ComplexAccumulator] = list(partials)
    if not level:
        return 0j
    while len(level) > 1:
        merged = []
        for i in range(0, len(level) - 1, 2):
            merged.append(level[i].merge(level[i + 1]))
        if len(level) % 2:
            merged.append(level[-1])
        level = merged
    return level[0].value


def chunk_bounds(n: int, chunk_size: int = DEFAULT_CHUNK_SIZE) -> List[tuple[int, int]]:
    if chunk_size < 1:
        raise ValueError(f"chunk_size must be positive, got {chunk_size}")
    return [(lo, min(lo + chunk_size, n)) for lo in range(0, n, chunk_size)]


def parallel_sum(
    term_builder: Callable[[int, int], np.ndarray],
    n: int,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    workers: int | None = None,
) -> complex:
    """
    Sum ``term_builder(lo, hi)`` over fixed chunks of ``range(n)``.

    Chunk boundaries depend only on ``n`` and ``chunk_size``, partials are combined in
    chunk order, so the value is identical for any worker count.
    """
    bounds = chunk_bounds(n, chunk_size)
    logm.debug("parallel_sum: %d terms in %d chunks (workers=%s)", n, len(bounds), workers)

    def evaluate(bound: tuple[int, int]) -> ComplexAccumulator:
        return chunk_sum(term_builder(*bound))

    if len(bounds) <= 1 or workers == 1:
        partials = [evaluate(b) for b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            partials = list(executor.map(evaluate, bounds))
    return tree_combine(partials)


def compensated_sum(values: np.ndarray) -> complex:
    return tree_combine([chunk_sum(values[lo:hi]) for lo, hi in chunk_bounds(len(values))])
