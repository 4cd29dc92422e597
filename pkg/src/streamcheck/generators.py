"""Seeded generators for batches and stream prefixes, with temporal combinators.

A generator is a plain callable from a ``random.Random`` to a value; the same
seeded state always yields the same value, which keeps every property run
reproducible.  The temporal combinators shape prefixes the way the matching
logical operators constrain words: ``always`` repeats a batch for the whole
window, ``until`` places a batch of the second kind at a random instant
within the window with batches of the first kind before it, and so on.
"""

from __future__ import annotations

import random
from typing import Any, Callable, Iterable, TypeVar

T = TypeVar("T")
GenFn = Callable[[random.Random], T]


class Batch(tuple):
    """Micro batch: the finite multiset of elements observed in one instant."""

    def __new__(cls, elements: Iterable[Any] = ()) -> "Batch":
        return super().__new__(cls, tuple(elements))

    def __repr__(self) -> str:
        return f"Batch({', '.join(map(repr, self))})"


class StreamPrefix(tuple):
    """Finite prefix of a discretized stream: one batch per instant."""

    def __new__(cls, batches: Iterable[Batch] = ()) -> "StreamPrefix":
        return super().__new__(cls, tuple(Batch(b) for b in batches))

    def __repr__(self) -> str:
        return f"StreamPrefix({', '.join(map(repr, self))})"


EMPTY_BATCH = Batch()


def constant(value: T) -> GenFn:
    return lambda rng: value


def choose_int(low: int, high: int) -> GenFn:
    """Uniform integer in [low, high]."""
    return lambda rng: rng.randint(low, high)


def one_of(*gens: GenFn) -> GenFn:
    if not gens:
        raise ValueError("one_of needs at least one generator")
    return lambda rng: gens[rng.randrange(len(gens))](rng)


def mapped(gen: GenFn, fn: Callable[[Any], Any]) -> GenFn:
    return lambda rng: fn(gen(rng))


# ---------------------------------------------------------------------------
# Batch generators


def batch_of_n(n: int, gen: GenFn) -> GenFn:
    """Batch with exactly ``n`` independently generated elements."""
    if n < 0:
        raise ValueError("batch size must be non-negative")
    return lambda rng: Batch(gen(rng) for _ in range(n))


def batch_of_n_to_m(n: int, m: int, gen: GenFn) -> GenFn:
    """Batch whose size is uniform in [n, m]."""
    if n < 0 or m < n:
        raise ValueError("need 0 <= n <= m")
    return lambda rng: Batch(gen(rng) for _ in range(rng.randint(n, m)))


def batch_union(first: GenFn, second: GenFn) -> GenFn:
    """Concatenation of the two generated batches."""
    return lambda rng: Batch(tuple(first(rng)) + tuple(second(rng)))


# ---------------------------------------------------------------------------
# Prefix generators shaped like temporal operators


def always(batch_gen: GenFn, timeout: int) -> GenFn:
    """``timeout`` instants, each drawn independently from ``batch_gen``."""
    _check_timeout(timeout)
    return lambda rng: StreamPrefix(batch_gen(rng) for _ in range(timeout))


def next_batch(batch_gen: GenFn) -> GenFn:
    """One empty instant, then the generated batch."""
    return lambda rng: StreamPrefix([EMPTY_BATCH, batch_gen(rng)])


def eventually(batch_gen: GenFn, timeout: int) -> GenFn:
    """The batch lands at a uniform instant in [1, timeout]; empty before it."""
    _check_timeout(timeout)

    def gen(rng: random.Random) -> StreamPrefix:
        k = rng.randint(1, timeout)
        return StreamPrefix([EMPTY_BATCH] * (k - 1) + [batch_gen(rng)])

    return gen


def until(first: GenFn, second: GenFn, timeout: int) -> GenFn:
    """Instants 1..k-1 from ``first``, instant k from ``second``, k uniform in [1, timeout]."""
    _check_timeout(timeout)

    def gen(rng: random.Random) -> StreamPrefix:
        k = rng.randint(1, timeout)
        return StreamPrefix([first(rng) for _ in range(k - 1)] + [second(rng)])

    return gen


def release(first: GenFn, second: GenFn, timeout: int) -> GenFn:
    """Either ``timeout`` instants of ``second`` (no release), or ``second``
    everywhere with ``first`` superposed at a uniform release instant k."""
    _check_timeout(timeout)

    def gen(rng: random.Random) -> StreamPrefix:
        no_release = rng.random() < 0.5
        if no_release:
            return StreamPrefix(second(rng) for _ in range(timeout))
        k = rng.randint(1, timeout)
        batches = [second(rng) for _ in range(k)]
        batches[k - 1] = Batch(tuple(first(rng)) + tuple(batches[k - 1]))
        return StreamPrefix(batches)

    return gen


def concat(first: GenFn, second: GenFn) -> GenFn:
    """One prefix after the other in time."""
    return lambda rng: StreamPrefix(tuple(first(rng)) + tuple(second(rng)))


def superpose(first: GenFn, second: GenFn) -> GenFn:
    """Positionwise union of the two prefixes.

    The shorter prefix is padded with empty batches, so both signals survive
    in full (a strict zip would truncate the longer one).
    """

    def gen(rng: random.Random) -> StreamPrefix:
        a = first(rng)
        b = second(rng)
        length = max(len(a), len(b))
        out = []
        for i in range(length):
            left = a[i] if i < len(a) else EMPTY_BATCH
            right = b[i] if i < len(b) else EMPTY_BATCH
            out.append(Batch(tuple(left) + tuple(right)))
        return StreamPrefix(out)

    return gen


def repeat_concat(gen: GenFn, times: int) -> GenFn:
    """`times` independent draws, concatenated in time."""
    if times < 1:
        raise ValueError("times must be positive")

    def run(rng: random.Random) -> StreamPrefix:
        batches: list = []
        for _ in range(times):
            batches.extend(gen(rng))
        return StreamPrefix(batches)

    return run


def _check_timeout(timeout: int) -> None:
    if timeout < 1:
        raise ValueError("timeout must be positive")
