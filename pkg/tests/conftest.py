from __future__ import annotations

import random

from fractions import Fraction

from invariant_quartics.cyclotomic import CycScalar, CyclotomicField


def random_scalar(rng: random.Random, field: CyclotomicField, height: int = 9) -> CycScalar:
    deg = len(field.zero.nums)
    nums = [rng.randint(-height, height) for _ in range(deg)]
    den = rng.randint(1, height)
    return field.scalar([Fraction(n, den) for n in nums])


def random_nonzero_scalar(rng: random.Random, field: CyclotomicField, height: int = 9) -> CycScalar:
    while True:
        s = random_scalar(rng, field, height)
        if s:
            return s
