"""Exact integer primitives: square roots, square tests, Pythagorean triples.

All values are Python ints.  Coordinates are held to the signed 64-bit range
and squared quantities to 128 bits, so the numbers this package emits can be
carried by any fixed-width consumer without silent wraparound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

COORD_MAX = 2**63 - 1
SQUARE_LIMIT = 2**128


class RangeError(OverflowError):
    """A value left the supported exact range."""


def check_coord(v: int, what: str = "coordinate") -> int:
    if not -COORD_MAX <= v <= COORD_MAX:
        raise RangeError(f"{what} {v} outside signed 64-bit range")
    return v


def isqrt(v: int) -> int:
    """Return floor(sqrt(v)) exactly.

    Raises ValueError for negative input and RangeError past 128 bits.
    """
    if v < 0:
        raise ValueError(f"isqrt of negative value {v}")
    if v >= SQUARE_LIMIT:
        raise RangeError(f"isqrt argument {v} exceeds 128-bit range")
    r = math.isqrt(v)
    # math.isqrt is exact integer Newton; keep the postcondition explicit anyway
    assert r * r <= v < (r + 1) * (r + 1)
    return r


def is_perfect_square(v: int) -> bool:
    if v < 0:
        raise ValueError(f"square test of negative value {v}")
    r = isqrt(v)
    return r * r == v


@dataclass(frozen=True, order=True)
class PythTriple:
    """Legs ``a``, ``b`` and hypotenuse ``c`` with a^2 + b^2 = c^2.

    ``params`` optionally records the Euclid parameters ``(m, n, d)`` the
    triple was generated from.  Leg order is kept as given; enumerators emit
    ``a <= b``.
    """

    a: int
    b: int
    c: int
    params: Optional[tuple[int, int, int]] = None

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c) < 1:
            raise ValueError(f"triple entries must be positive: {self.legs}")
        if self.a * self.a + self.b * self.b != self.c * self.c:
            raise ValueError(f"{self.legs} is not Pythagorean")
        if self.params is not None:
            m, n, d = self.params
            if not (m > n >= 1 and d >= 1 and math.gcd(m, n) == 1):
                raise ValueError(f"bad Euclid parameters {self.params}")
            odd, even, hyp = d * (m * m - n * n), 2 * d * m * n, d * (m * m + n * n)
            if hyp != self.c or {self.a, self.b} != {odd, even}:
                raise ValueError(f"{self.legs} does not match parameters {self.params}")

    @property
    def legs(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    def swapped(self) -> "PythTriple":
        return PythTriple(self.b, self.a, self.c, self.params)

    def scaled(self, k: int) -> "PythTriple":
        p = None if self.params is None else (self.params[0], self.params[1], self.params[2] * k)
        return PythTriple(k * self.a, k * self.b, k * self.c, p)


def euclid(m: int, n: int, d: int = 1) -> PythTriple:
    """The triple (d(m^2-n^2), 2dmn, d(m^2+n^2)) in a <= b order."""
    odd, even = d * (m * m - n * n), 2 * d * m * n
    a, b = min(odd, even), max(odd, even)
    return PythTriple(a, b, d * (m * m + n * n), (m, n, d))


def _primitive_params(leg_max: int) -> Iterator[tuple[int, int]]:
    # opposite parity, coprime: each primitive triple exactly once
    m = 2
    while True:
        lo = math.isqrt(max(m * m - leg_max, 0))
        while lo * lo < m * m - leg_max:
            lo += 1
        lo = max(lo, 1)
        hi = min(m - 1, leg_max // (2 * m))
        if lo > hi:
            # lo grows and hi shrinks with m: no larger m can fit either
            return
        for n in range(lo, hi + 1):
            if (m - n) % 2 == 1 and math.gcd(m, n) == 1:
                yield m, n
        m += 1


def triples_up_to_leg(leg_max: int) -> Iterator[PythTriple]:
    """Every Pythagorean triple with max(a, b) <= leg_max, each once, a <= b.

    Both-odd parameter pairs only reproduce scaled copies of opposite-parity
    ones, so iterating the latter with every multiplier ``d`` covers the set
    without a dedup table.  Output order: by primitive (m, n), then by d.
    """
    if leg_max < 1:
        raise ValueError("leg_max must be positive")
    for m, n in _primitive_params(leg_max):
        base = euclid(m, n)
        for d in range(1, leg_max // base.b + 1):
            yield base.scaled(d)


def triples_up_to_hypotenuse(hyp_max: int) -> Iterator[PythTriple]:
    """Every Pythagorean triple with c <= hyp_max, each once, a <= b."""
    m = 2
    while m * m + 1 <= hyp_max:
        for n in range(1 + m % 2, m, 2):
            if m * m + n * n > hyp_max:
                break
            if math.gcd(m, n) == 1:
                base = euclid(m, n)
                for d in range(1, hyp_max // base.c + 1):
                    yield base.scaled(d)
        m += 1


def triples_from_params(m_max: int, n_max: int, d_max: int) -> Iterator[PythTriple]:
    """Triples (d(m^2-n^2), 2dmn, d(m^2+n^2)) for 1 <= n < m < m_max,
    n < n_max, 1 <= d < d_max and gcd(m, n) = 1, duplicates removed.

    A both-odd pair (m, n) with multiplier d gives the same triple as the
    opposite-parity pair ((m+n)/2, (m-n)/2) with multiplier 2d.  That
    partner always has a smaller m, so the both-odd copy is skipped exactly
    when its partner also lies inside the box.
    """
    if min(m_max, n_max, d_max) < 2:
        raise ValueError("parameter bounds must be >= 2")
    for m in range(2, m_max):
        for n in range(1, min(m, n_max)):
            if math.gcd(m, n) != 1:
                continue
            both_odd = m % 2 == 1 and n % 2 == 1
            v = (m - n) // 2
            for d in range(1, d_max):
                if both_odd and 2 * d < d_max and v < n_max:
                    continue
                yield euclid(m, n, d)
