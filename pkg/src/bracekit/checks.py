"""Exhaustive-or-sampled verification of pointwise identities."""
from __future__ import annotations

from math import prod
from typing import Callable, Sequence

import numpy as np

from .brace import AdditiveShape, Report


def tuple_batches(shapes: Sequence[AdditiveShape], exhaustive: bool, samples: int,
                  rng: np.random.Generator, batch: int = 50_000):
    """Yield lists of coordinate batches, one per shape.

    Exhaustive mode walks the full product in mixed-radix order; sampled
    mode draws ``samples`` uniform tuples from ``rng``.
    """
    if exhaustive:
        sizes = [s.order for s in shapes]
        total = prod(sizes)
        weights = [prod(sizes[i + 1:]) for i in range(len(sizes))]
        for start in range(0, total, batch):
            idx = np.arange(start, min(total, start + batch), dtype=np.int64)
            yield [s.unrank((idx // w) % s.order) for s, w in zip(shapes, weights)]
    else:
        for start in range(0, samples, batch):
            k = min(batch, samples - start)
            yield [s.random(rng, k) for s in shapes]


def check_identity(rep: Report, name: str, shapes: Sequence[AdditiveShape],
                   fn: Callable, exhaustive: bool, samples: int, rng: np.random.Generator,
                   labels: Sequence[str] | None = None):
    """Record whether ``lhs == rhs`` for every tuple, where ``fn(*parts) -> (lhs, rhs)``."""
    labels = labels or [f"x{i}" for i in range(len(shapes))]
    for parts in tuple_batches(shapes, exhaustive, samples, rng):
        lhs, rhs = fn(*parts)
        eq = np.all(np.asarray(lhs) == np.asarray(rhs), axis=-1) if np.ndim(lhs) > 1 \
            else np.asarray(lhs) == np.asarray(rhs)
        if not eq.all():
            i = int(np.argmin(eq))
            rep.record(name, False, {lab: [int(v) for v in np.atleast_1d(part[i])]
                                     for lab, part in zip(labels, parts)})
            return
    rep.record(name, True)
