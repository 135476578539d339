"""Multiply-add instrumentation for contractions and factorizations.

Counting is opt-in: nothing is recorded unless a :func:`count_flops` block is
active in the current context. Counters live in a :class:`contextvars.ContextVar`
so concurrent threads never see each other's counts.

Conventions
-----------
* A contraction of an ``m x k`` by ``k x n`` product counts ``m * k * n``.
  Contractions over a trivial index (``k == 1``) are outer products or
  relabelings and are not counted.
* A truncated factorization of an ``m x n`` matrix keeping ``r`` columns counts
  ``m * n * r``, the model cost of a rank-``r`` truncated SVD. Factorizations
  of a row or column vector are normalizations and are not counted.
"""

from __future__ import annotations

import contextlib
import contextvars
from collections import Counter
from typing import Iterator, Optional

_active: contextvars.ContextVar[Optional["FlopCounter"]] = contextvars.ContextVar(
    "bordertn_flop_counter", default=None
)
_label: contextvars.ContextVar[str] = contextvars.ContextVar(
    "bordertn_flop_label", default="other"
)


class FlopCounter:
    """Accumulates multiply-add counts, split by kind and by section label."""

    def __init__(self) -> None:
        self.by_kind: Counter = Counter()
        self.by_label: Counter = Counter()

    @property
    def total(self) -> int:
        return sum(self.by_kind.values())

    def add(self, n: int, kind: str) -> None:
        self.by_kind[kind] += int(n)
        self.by_label[_label.get()] += int(n)

    def __repr__(self) -> str:
        return f"FlopCounter(total={self.total}, by_label={dict(self.by_label)})"


@contextlib.contextmanager
def count_flops() -> Iterator[FlopCounter]:
    counter = FlopCounter()
    token = _active.set(counter)
    try:
        yield counter
    finally:
        _active.reset(token)


@contextlib.contextmanager
def section(label: str) -> Iterator[None]:
    token = _label.set(label)
    try:
        yield
    finally:
        _label.reset(token)


def record_matmul(m: int, k: int, n: int) -> None:
    counter = _active.get()
    if counter is not None and k > 1:
        counter.add(m * k * n, "matmul")


def record_factorization(m: int, n: int, r: int) -> None:
    counter = _active.get()
    if counter is not None and min(m, n) > 1:
        counter.add(m * n * r, "factorization")
