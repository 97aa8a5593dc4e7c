"""Seeded random elements for property checks.

Every sampler takes a ``random.Random`` so that a report can name its seed
and be replayed exactly.
"""

from __future__ import annotations

import random

from .canonical import CanonicalForm, level, op_F
from .fields import SeriesRing, TruncSeries, get_field
from .galois_ring import get_galois_ring
from .witt import WittVector


def random_coeff(rng: random.Random, p: int, e: int, r: int):
    gr = get_galois_ring(p, e)
    return gr.elem(r, [rng.randrange(p**r) for _ in range(e)])


def random_form(rng: random.Random, p: int, e: int, m: int, q: int, lo: int, hi: int,
                density: float = 0.5, prec: int | None = None) -> CanonicalForm:
    """A form with random components on a random subset of the slots in [lo, hi)."""
    comps = []
    for n in range(lo, hi):
        if rng.random() < density:
            comps.append((n, random_coeff(rng, p, e, level(n, p, m))))
    return CanonicalForm.build(p, e, m, q, comps, prec)


def random_z1(rng: random.Random, p: int, e: int, m: int, q: int, lo: int, hi: int,
              density: float = 0.5) -> CanonicalForm:
    """F(y) for a random y one level up: a random element of Z_1."""
    return op_F(random_form(rng, p, e, m + 1, q, lo, hi, density))


def random_series(rng: random.Random, p: int, e: int, lo: int, hi: int, prec: int | None = None,
                  density: float = 0.5) -> TruncSeries:
    fq = get_field(p, e)
    terms = {k: rng.randrange(1, fq.q) for k in range(lo, hi) if rng.random() < density}
    return TruncSeries.from_dict(fq, terms, prec)


def random_witt(rng: random.Random, p: int, e: int, m: int, pole: int, prec: int | None = None,
                density: float = 0.5) -> WittVector:
    """A Witt vector over K whose coordinates have pole order at most ``pole``."""
    fq = get_field(p, e)
    top = pole + 4 if prec is None else prec
    coords = [random_series(rng, p, e, -pole, top, prec, density) for _ in range(m)]
    return WittVector(SeriesRing(fq), coords, p)
