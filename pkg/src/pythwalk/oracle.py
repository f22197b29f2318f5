"""Graph distance from the origin: 0, 1, witnessed 2, certified 3, or a
bound-relative "unresolved" with the universal three-step walk.

Two-step search runs over a precomputed table of step vectors (every
Pythagorean vector inside a box or disc, 8 sign/swap variants per triple)
and tests the complementary step ``T - u`` for every table entry ``u`` at
once with numpy.  Among all valid midpoints the witness is the one with the
smallest (longest step, shortest step) pair, ties going to the
lexicographically largest first step, so results do not depend on table
order or parallelism.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .arithmetic import (
    COORD_MAX,
    RangeError,
    check_coord,
    triples_from_params,
    triples_up_to_hypotenuse,
    triples_up_to_leg,
)
from .certify import Certificate, certify_three
from .families import family_witness
from .graph import (
    ORIGIN,
    InvalidStep,
    LatticePoint,
    WalkPath,
    canonical_rep,
    canonical_transform,
    step_from,
)

DEFAULT_BOUND = 256
BASIS = ((3, 4), (4, 3), (4, -3))
# int64 squares stay exact while |coordinate| < 2**30
_NUMPY_SAFE = 2**30


class Distance(str, enum.Enum):
    D0 = "D0"
    D1 = "D1"
    D2 = "D2"
    D3_CERTIFIED = "D3_CERTIFIED"
    UNRESOLVED = "UNRESOLVED"


@dataclass(frozen=True)
class BasisDecomposition:
    kA: int
    kB: int
    kC: int

    @classmethod
    def of(cls, target: Sequence[int]) -> "BasisDecomposition":
        x, y = target
        return cls(3 * x + 4 * y, -(3 * x + 4 * y), x + y)

    def combine(self) -> LatticePoint:
        (ax, ay), (bx, by), (cx, cy) = BASIS
        return LatticePoint(self.kA * ax + self.kB * bx + self.kC * cx,
                            self.kA * ay + self.kB * by + self.kC * cy)


@dataclass(frozen=True)
class DistanceVerdict:
    target: LatticePoint
    cls: Distance
    witness: Optional[WalkPath] = None
    certificate: Optional[Certificate] = None
    bound_used: Optional[int] = None
    source: str = ""

    def to_json(self) -> dict:
        return {
            "target": list(self.target),
            "class": self.cls.value,
            "witness": None if self.witness is None else self.witness.to_json(),
            "step_lengths": None if self.witness is None else list(self.witness.lengths),
            "certificate": None if self.certificate is None else self.certificate.to_json(),
            "bound_used": self.bound_used,
            "source": self.source,
        }


class StepTable:
    """Read-only arrays of step vectors ``(xs[i], ys[i])`` of length ``lens[i]``."""

    def __init__(self, triples, label: str):
        a = [t.a for t in triples]
        b = [t.b for t in triples]
        c = [t.c for t in triples]
        big = max(a + b, default=0)
        dtype = np.int64 if big < _NUMPY_SAFE else object
        a, b, c = (np.array(v, dtype=dtype) for v in (a, b, c))
        xs, ys = [], []
        for p, q in ((a, b), (b, a)):
            for sx in (1, -1):
                for sy in (1, -1):
                    xs.append(sx * p)
                    ys.append(sy * q)
        self.xs = np.concatenate(xs)
        self.ys = np.concatenate(ys)
        self.lens = np.concatenate([c] * 8)
        self.label = label
        self.max_abs = big
        for arr in (self.xs, self.ys, self.lens):
            arr.setflags(write=False)

    def __len__(self) -> int:
        return len(self.xs)

    @classmethod
    def for_leg_bound(cls, bound: int) -> "StepTable":
        return cls(list(triples_up_to_leg(bound)), f"leg<={bound}")

    @classmethod
    def for_hypotenuse(cls, hyp: int) -> "StepTable":
        return cls(list(triples_up_to_hypotenuse(hyp)), f"hyp<={hyp}")

    @classmethod
    def for_params(cls, m_max: int, n_max: int, d_max: int) -> "StepTable":
        return cls(list(triples_from_params(m_max, n_max, d_max)), f"params<{m_max},{n_max},{d_max}")

    def best_midpoint(self, target: Sequence[int], max_len: Optional[int] = None) -> Optional[tuple[int, int]]:
        """Table vector u minimising the witness key with T - u a valid
        step (and, if given, both lengths <= max_len)."""
        tx, ty = int(target[0]), int(target[1])
        if len(self) == 0:
            return None
        if self.xs.dtype == np.int64 and max(abs(tx), abs(ty)) + self.max_abs < _NUMPY_SAFE:
            dx = tx - self.xs
            dy = ty - self.ys
            sq = dx * dx + dy * dy
            r = np.sqrt(sq.astype(np.float64)).astype(np.int64)
            # float seed is within one unit; fix it up exactly
            r -= (r * r > sq)
            r += ((r + 1) * (r + 1) <= sq)
            ok = (r * r == sq) & (dx != 0) & (dy != 0)
        else:
            return self._best_midpoint_exact(tx, ty, max_len)
        if max_len is not None:
            ok &= r <= max_len
        idx = np.flatnonzero(ok)
        if idx.size == 0:
            return None
        l1, l2 = self.lens[idx], r[idx]
        order = np.lexsort((-self.ys[idx], -self.xs[idx], np.minimum(l1, l2), np.maximum(l1, l2)))
        i = idx[order[0]]
        return int(self.xs[i]), int(self.ys[i])

    def _best_midpoint_exact(self, tx: int, ty: int, max_len: Optional[int]):
        best = None
        for x, y, ln in zip(self.xs.tolist(), self.ys.tolist(), self.lens.tolist()):
            try:
                s = step_from(tx - x, ty - y)
            except InvalidStep:
                continue
            if max_len is not None and s.length > max_len:
                continue
            key = (max(ln, s.length), min(ln, s.length), -x, -y)
            if best is None or key < best:
                best = key
        return None if best is None else (-best[2], -best[3])


@lru_cache(maxsize=8)
def leg_table(bound: int) -> StepTable:
    return StepTable.for_leg_bound(bound)


@lru_cache(maxsize=8)
def hyp_table(hyp: int) -> StepTable:
    return StepTable.for_hypotenuse(hyp)


def _check_target(target: Sequence[int]) -> LatticePoint:
    t = LatticePoint(int(target[0]), int(target[1]))
    check_coord(t.x)
    check_coord(t.y)
    return t


def _two_step(t: LatticePoint, mid: Optional[tuple[int, int]]) -> Optional[WalkPath]:
    if mid is None:
        return None
    return WalkPath.from_vectors([mid, (t.x - mid[0], t.y - mid[1])])


def classify_one_step(target: Sequence[int]) -> bool:
    t = _check_target(target)
    try:
        step_from(t.x, t.y)
    except InvalidStep:
        return False
    return True


def find_two_step(target: Sequence[int], leg_bound: int, table: Optional[StepTable] = None) -> Optional[WalkPath]:
    """Minimal two-step walk whose midpoint P has max(|P.x|, |P.y|) <= leg_bound.

    ``table`` replaces the leg-bound table (e.g. a parameter-space table);
    the bound is then ignored.
    """
    t = _check_target(target)
    if leg_bound < 1 or leg_bound > COORD_MAX:
        raise RangeError(f"leg bound {leg_bound} outside supported range")
    if table is None:
        table = leg_table(leg_bound)
    return _two_step(t, table.best_midpoint(t))


def _hyp_schedule(limit: int, start: int = 32) -> list[int]:
    out = []
    r = start
    while r < limit:
        out.append(r)
        r *= 2
    out.append(limit)
    return out


def shortest_two_step(target: Sequence[int], escalation_limit: int) -> Optional[WalkPath]:
    """Globally minimal two-step walk with both steps no longer than
    ``escalation_limit``.

    At radius R every step of length <= R is in the hypotenuse table, so
    the first radius with any hit already contains the global optimum.
    """
    t = _check_target(target)
    if escalation_limit < 1:
        raise ValueError("escalation limit must be positive")
    for radius in _hyp_schedule(escalation_limit):
        path = _two_step(t, hyp_table(radius).best_midpoint(t, max_len=radius))
        if path is not None:
            return path
    return None


def three_step_construct(target: Sequence[int]) -> WalkPath:
    """Walk of at most three steps along multiples of (3,4), (4,3), (4,-3)."""
    t = _check_target(target)
    dec = BasisDecomposition.of(t)
    steps = []
    for k, (bx, by) in zip((dec.kA, dec.kB, dec.kC), BASIS):
        if k:
            steps.append((k * bx, k * by))
    return WalkPath.from_vectors(steps)


def default_escalation(leg_bound: int, start: int = DEFAULT_BOUND) -> list[int]:
    """Powers of 4 from ``start`` below ``leg_bound``, then ``leg_bound``."""
    out = []
    b = start
    while b < leg_bound:
        out.append(b)
        b *= 4
    out.append(leg_bound)
    return out


def check_escalation(levels: Sequence[int], leg_bound: int) -> None:
    if not levels or list(levels)[-1] != leg_bound:
        raise ValueError("escalation must end at the leg bound")
    if any(b <= a for a, b in zip(levels, levels[1:])) or levels[0] < 1:
        raise ValueError("escalation must be strictly increasing and positive")


def classify(target: Sequence[int], leg_bound: int = DEFAULT_BOUND, *,
             escalation: Optional[Sequence[int]] = None,
             use_families: bool = True,
             table: Optional[StepTable] = None) -> DistanceVerdict:
    """Distance class of ``target`` from the origin, with evidence.

    The search runs on the canonical representative and the witness is
    mapped back, so every orbit member gets the same class and mirrored
    witnesses.  Family walks are tried first when ``use_families``; they
    are valid but not necessarily minimal.
    """
    t = _check_target(target)
    if t == ORIGIN:
        return DistanceVerdict(t, Distance.D0, WalkPath(ORIGIN, ()), source="origin")
    if classify_one_step(t):
        return DistanceVerdict(t, Distance.D1, WalkPath.from_vectors([t]), source="edge")
    levels = list(escalation) if escalation is not None else default_escalation(leg_bound)
    check_escalation(levels, leg_bound)
    c = canonical_rep(t)
    to_t = canonical_transform(t)
    if use_families:
        fam = family_witness(c)
        if fam is not None:
            mid = fam.steps[0]
            need = max(abs(mid.dx), abs(mid.dy))
            return DistanceVerdict(t, Distance.D2, fam.transformed(to_t), bound_used=need, source="family")
    if table is not None:
        levels = [levels[-1]]
    for bound in levels:
        path = find_two_step(c, bound, table=table)
        if path is not None:
            return DistanceVerdict(t, Distance.D2, path.transformed(to_t), bound_used=bound, source="search")
    cert = certify_three(t)
    if cert is not None:
        return DistanceVerdict(t, Distance.D3_CERTIFIED, three_step_construct(t), certificate=cert,
                               bound_used=levels[-1], source="certificate")
    return DistanceVerdict(t, Distance.UNRESOLVED, three_step_construct(t), bound_used=levels[-1],
                           source="three-step")
