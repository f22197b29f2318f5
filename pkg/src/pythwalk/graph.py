"""Vertices, edges and walks of the lattice graph, plus its D4 symmetry.

Two lattice points are adjacent when they differ in both coordinates and
their Euclidean distance is an integer.  Walks store displacement vectors
rather than vertices, so translating a walk never touches its steps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .arithmetic import check_coord, isqrt


class LatticePoint(NamedTuple):
    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return LatticePoint(self.x + other[0], self.y + other[1])

    def __sub__(self, other):
        return LatticePoint(self.x - other[0], self.y - other[1])

    def scaled(self, k: int) -> "LatticePoint":
        return LatticePoint(k * self.x, k * self.y)


ORIGIN = LatticePoint(0, 0)


class InvalidStep(ValueError):
    """A displacement that is not an edge of the graph.

    ``reason`` is ``"zero_component"`` or ``"not_square"``.
    """

    def __init__(self, dx: int, dy: int, reason: str, detail: str):
        super().__init__(detail)
        self.dx, self.dy, self.reason = dx, dy, reason


class PathError(ValueError):
    """A walk failed verification; ``index`` is the first bad step or None
    when only the endpoint disagrees."""

    def __init__(self, index: int | None, reason: str):
        where = "endpoint" if index is None else f"step {index}"
        super().__init__(f"{where}: {reason}")
        self.index, self.reason = index, reason


@dataclass(frozen=True)
class StepVector:
    dx: int
    dy: int
    length: int

    def __post_init__(self) -> None:
        if self.dx == 0 or self.dy == 0:
            raise InvalidStep(self.dx, self.dy, "zero_component", f"step ({self.dx},{self.dy}) is axis-parallel")
        if self.dx * self.dx + self.dy * self.dy != self.length * self.length:
            raise InvalidStep(self.dx, self.dy, "not_square", f"step ({self.dx},{self.dy}) has no length {self.length}")

    @property
    def vec(self) -> tuple[int, int]:
        return (self.dx, self.dy)

    def scaled(self, k: int) -> "StepVector":
        return StepVector(k * self.dx, k * self.dy, abs(k) * self.length)


def step_from(dx: int, dy: int) -> StepVector:
    """Build the edge displacement (dx, dy) or raise InvalidStep saying why."""
    check_coord(dx, "dx")
    check_coord(dy, "dy")
    if dx == 0 or dy == 0:
        raise InvalidStep(dx, dy, "zero_component", f"step ({dx},{dy}) has a zero component")
    sq = dx * dx + dy * dy
    r = isqrt(sq)
    if r * r != sq:
        raise InvalidStep(dx, dy, "not_square", f"step ({dx},{dy}): {sq} is not a perfect square")
    return StepVector(dx, dy, r)


def is_edge(p: Sequence[int], q: Sequence[int]) -> bool:
    try:
        step_from(q[0] - p[0], q[1] - p[1])
    except InvalidStep:
        return False
    return True


@dataclass(frozen=True)
class WalkPath:
    start: LatticePoint
    steps: tuple[StepVector, ...]

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]], start: Sequence[int] = ORIGIN) -> "WalkPath":
        steps = []
        for i, (dx, dy) in enumerate(vectors):
            try:
                steps.append(step_from(dx, dy))
            except InvalidStep as exc:
                raise PathError(i, exc.reason) from exc
        return cls(LatticePoint(*start), tuple(steps))

    @property
    def end(self) -> LatticePoint:
        x, y = self.start
        for s in self.steps:
            x += s.dx
            y += s.dy
        return LatticePoint(x, y)

    @property
    def vertices(self) -> list[LatticePoint]:
        out = [self.start]
        for s in self.steps:
            out.append(out[-1] + s.vec)
        return out

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(s.length for s in self.steps)

    def __len__(self) -> int:
        return len(self.steps)

    def scaled(self, k: int) -> "WalkPath":
        return WalkPath(self.start.scaled(k), tuple(s.scaled(k) for s in self.steps))

    def transformed(self, t: "Symmetry") -> "WalkPath":
        return WalkPath.from_vectors((t.apply(s.vec) for s in self.steps), t.apply(self.start))

    def to_json(self) -> dict:
        return {
            "start": list(self.start),
            "steps": [list(s.vec) for s in self.steps],
            "end": list(self.end),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def path_from_json(obj: dict) -> tuple[WalkPath, LatticePoint | None]:
    """Parse the shared path format; returns the walk and its stated end."""
    try:
        start = obj.get("start", [0, 0])
        raw = obj["steps"]
        end = obj.get("end")
        start = LatticePoint(int(start[0]), int(start[1]))
        vectors = [(int(v[0]), int(v[1])) for v in raw]
        if end is not None:
            end = LatticePoint(int(end[0]), int(end[1]))
    except (KeyError, TypeError, IndexError, ValueError, AttributeError) as exc:
        raise ValueError(f"malformed path document: {exc}") from exc
    for c in (*start, *(end or ())):
        check_coord(c)
    return WalkPath.from_vectors(vectors, start), end


def check_path(path: WalkPath, claimed_end: Sequence[int]) -> None:
    """Raise PathError at the first violated invariant."""
    for i, s in enumerate(path.steps):
        try:
            step = step_from(s.dx, s.dy)
        except InvalidStep as exc:
            raise PathError(i, exc.reason) from exc
        if step.length != s.length:
            raise PathError(i, "wrong_length")
    if path.end != tuple(claimed_end):
        raise PathError(None, f"walk ends at {tuple(path.end)}, not {tuple(claimed_end)}")


def verify_path(path: WalkPath, claimed_end: Sequence[int]) -> bool:
    try:
        check_path(path, claimed_end)
    except PathError:
        return False
    return True


def witness_key(path: WalkPath) -> tuple:
    """Sort key for two-step witnesses: longest step, shortest step, then
    the lexicographically largest first step."""
    lens = path.lengths
    dx, dy = path.steps[0].vec
    return (max(lens), min(lens), -dx, -dy)


class Symmetry(NamedTuple):
    """D4 element: optionally swap coordinates, then multiply by signs."""

    swap: bool
    sx: int
    sy: int

    def apply(self, p: Sequence[int]) -> LatticePoint:
        x, y = (p[1], p[0]) if self.swap else (p[0], p[1])
        return LatticePoint(self.sx * x, self.sy * y)

    def inverse(self) -> "Symmetry":
        return Symmetry(True, self.sy, self.sx) if self.swap else self


D4 = tuple(Symmetry(sw, sx, sy) for sw in (False, True) for sx in (1, -1) for sy in (1, -1))


def symmetry_orbit(p: Sequence[int]) -> set[LatticePoint]:
    return {t.apply(p) for t in D4}


def canonical_rep(p: Sequence[int]) -> LatticePoint:
    """The orbit member (g, h) with 0 <= g <= h."""
    a, b = abs(p[0]), abs(p[1])
    return LatticePoint(min(a, b), max(a, b))


def canonical_transform(p: Sequence[int]) -> Symmetry:
    """First D4 element (in fixed order) mapping canonical_rep(p) onto p."""
    c = canonical_rep(p)
    target = (p[0], p[1])
    for t in D4:
        if t.apply(c) == target:
            return t
    raise AssertionError("unreachable: orbit always contains p")
