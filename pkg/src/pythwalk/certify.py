"""Machine-checkable proofs that (1,0), (2,0), (2,1) have no two-step walk.

A midpoint P of a two-step walk O -> P -> R needs integer |OP| = r and
|RP| = s, and the triangle inequality bounds the gap |r - s| by |OR|.  Each
possible integer gap is closed by one of five rules:

``collinear``
    gap == |OR|: P lies on the line OR, here an axis, so O-P is not an edge.
``bisector_no_lattice``
    gap 0: the perpendicular bisector 2*Rx*x + 2*Ry*y = |OR|^2 has no
    lattice point because gcd(2Rx, 2Ry) does not divide |OR|^2.
``bisector_nonsquare``
    gap 0 with bisector x = 1: |OP|^2 = 1 + y^2 sits strictly between y^2
    and (y+1)^2 for y >= 1 (y = 0 is on the axis).
``parity``
    r^2 - s^2 = 2(Rx*x + Ry*y) - |OR|^2, so r - s has the parity of |OR|^2.
``conic``
    squaring |r - s| = k twice leaves an integer conic; its lattice points
    are found exactly through the discriminant and none of them is a valid
    midpoint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .arithmetic import isqrt, is_perfect_square
from .graph import D4, LatticePoint, Symmetry, canonical_rep, is_edge

REFERENCES = {
    LatticePoint(0, 1): ("UNIT_GAP", LatticePoint(1, 0)),
    LatticePoint(0, 2): ("PARITY_N0", LatticePoint(2, 0)),
    LatticePoint(1, 2): ("MIXED_21", LatticePoint(2, 1)),
}
EXCEPTIONAL = frozenset(REFERENCES)


@dataclass(frozen=True)
class CaseExclusion:
    gap: int
    rule: str
    detail: dict = field(default_factory=dict, compare=False)


@dataclass(frozen=True)
class Certificate:
    kind: str
    target: LatticePoint
    reference: LatticePoint
    transform: Symmetry  # maps reference onto target
    cases: tuple[CaseExclusion, ...]

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "target": list(self.target),
            "reference": list(self.reference),
            "cases": [{"gap": c.gap, "rule": c.rule, **c.detail} for c in self.cases],
        }


# -- exact conic solving ------------------------------------------------------

def gap_conic(ref: Sequence[int], k: int) -> tuple[int, int, int, int, int, int]:
    """Integer conic A x^2 + B xy + C y^2 + D x + E y + F = 0 that every
    midpoint with | |OP| - |RP| | = k (k >= 1) must satisfy.

    From r^2 - s^2 = u x + v y - N (u = 2Rx, v = 2Ry, N = |OR|^2) and
    r - s = +-k one gets (u x + v y + k^2 - N)^2 = 4 k^2 (x^2 + y^2).
    Coefficients are divided by their content with A made positive.
    """
    rx, ry = ref
    u, v, w = 2 * rx, 2 * ry, k * k - (rx * rx + ry * ry)
    coeffs = [u * u - 4 * k * k, 2 * u * v, v * v - 4 * k * k, 2 * u * w, 2 * v * w, w * w]
    g = math.gcd(*coeffs)
    lead = next(c for c in coeffs if c)
    if lead < 0:
        g = -g
    return tuple(c // g for c in coeffs)


def _square_content(vals: Sequence[int]) -> int:
    g = math.gcd(*vals)
    s = 1
    f = 2
    while f * f <= g:
        while g % (f * f) == 0:
            g //= f * f
            s *= f
        f += 1
    return s * s


def nonsquare_window(alpha_root: int, beta: int, gamma: int) -> tuple[int, int]:
    """Inclusive window [lo, hi] outside which a^2 y^2 + beta*y + gamma is
    never a perfect square (a = ``alpha_root`` >= 1).

    With j = floor(beta / 2a) the value lies strictly between (a*y + j)^2
    and (a*y + j + 1)^2 for all large y, provided beta / 2a is not an
    integer; y -> -y handles the other tail.
    """
    a = alpha_root
    if a < 1:
        raise ValueError("leading square root must be positive")
    if beta % (2 * a) == 0:
        raise NotImplementedError("bracketing needs beta / 2a non-integral")

    def tail_start(b: int) -> int:
        j = b // (2 * a)
        below = Fraction(j * j - gamma, b - 2 * a * j)
        above = Fraction(gamma - (j + 1) ** 2, 2 * a * (j + 1) - b)
        return max(math.floor(below) + 1, math.floor(above) + 1, -(j // a))

    return -tail_start(-beta) + 1, tail_start(beta) - 1


def solve_conic(coeffs: Sequence[int]) -> tuple[set[LatticePoint], dict]:
    """All integer points of a conic with A != 0, plus the argument used.

    As a quadratic in x the discriminant is a quadratic in y.  After its
    square content is removed the leading coefficient must itself be a
    square, and nonsquare_window then leaves finitely many y to check.
    """
    A, B, C, D, E, F = coeffs
    if A == 0:
        raise NotImplementedError("conic has no x^2 term")
    disc = (B * B - 4 * A * C, 2 * B * D - 4 * A * E, D * D - 4 * A * F)
    sq = _square_content(disc)
    alpha, beta, gamma = (c // sq for c in disc)
    if alpha <= 0 or not is_perfect_square(alpha):
        raise NotImplementedError(f"reduced discriminant leading coefficient {alpha} is not a positive square")
    lo, hi = nonsquare_window(isqrt(alpha), beta, gamma)
    points = set()
    square_ys = []
    for y in range(lo, hi + 1):
        dy = alpha * y * y + beta * y + gamma
        if dy < 0 or not is_perfect_square(dy):
            continue
        square_ys.append(y)
        root = isqrt(dy * sq)
        lin = B * y + D
        for num in (-lin + root, -lin - root):
            if num % (2 * A) == 0:
                x = num // (2 * A)
                if A * x * x + B * x * y + C * y * y + D * x + E * y + F == 0:
                    points.add(LatticePoint(x, y))
    transcript = {
        "discriminant": [sq, alpha, beta, gamma],
        "window": [lo, hi],
        "square_y": square_ys,
    }
    return points, transcript


def solve_eq1() -> set[LatticePoint]:
    """Integer solutions of 3x^2 + 4xy - 8x - 4y + 4 = 0."""
    points, _ = solve_conic((3, 4, 0, -8, -4, 4))
    return points


# -- certificates -------------------------------------------------------------

def _exclude(ref: LatticePoint, k: int) -> CaseExclusion:
    rx, ry = ref
    norm = rx * rx + ry * ry
    if k * k == norm:
        if rx != 0 and ry != 0:
            raise NotImplementedError("collinear case off the axes")
        return CaseExclusion(k, "collinear", {"axis": "y=0" if ry == 0 else "x=0"})
    if k == 0:
        g = math.gcd(2 * rx, 2 * ry)
        if norm % g:
            return CaseExclusion(0, "bisector_no_lattice", {"gcd": g, "rhs": norm})
        if ry == 0 and abs(norm // (2 * rx)) == 1:
            return CaseExclusion(0, "bisector_nonsquare", {"line": f"x={norm // (2 * rx)}"})
        raise NotImplementedError(f"bisector of {tuple(ref)} has lattice points")
    if (k - norm) % 2:
        return CaseExclusion(k, "parity", {"norm_parity": norm % 2})
    conic = gap_conic(ref, k)
    points, transcript = solve_conic(conic)
    rejected = []
    for p in sorted(points):
        if is_edge((0, 0), p) and is_edge(p, ref):
            raise ValueError(f"{tuple(p)} is a genuine midpoint for {tuple(ref)}")
        rejected.append(list(p))
    return CaseExclusion(k, "conic", {"conic": list(conic), **transcript, "solutions": rejected})


def certify_three(target: Sequence[int]) -> Optional[Certificate]:
    """Certificate of distance 3 for the exceptional orbits, else None."""
    t = LatticePoint(*target)
    entry = REFERENCES.get(canonical_rep(t))
    if entry is None:
        return None
    kind, ref = entry
    transform = next(s for s in D4 if s.apply(ref) == t)
    max_gap = isqrt(ref.x * ref.x + ref.y * ref.y)
    cases = tuple(_exclude(ref, k) for k in range(max_gap + 1))
    return Certificate(kind, t, ref, transform, cases)


def check_certificate(cert: Certificate) -> bool:
    """Independently re-derive every case of ``cert``."""
    ref, t = cert.reference, cert.target
    if cert.transform.apply(ref) != t:
        return False
    if REFERENCES.get(canonical_rep(ref), (None,))[0] != cert.kind:
        return False
    rx, ry = ref
    norm = rx * rx + ry * ry
    if [c.gap for c in cert.cases] != list(range(isqrt(norm) + 1)):
        return False
    for c in cert.cases:
        k = c.gap
        if c.rule == "collinear":
            ok = k * k == norm and (rx == 0 or ry == 0)
        elif c.rule == "bisector_no_lattice":
            ok = k == 0 and norm % math.gcd(2 * rx, 2 * ry) != 0
        elif c.rule == "bisector_nonsquare":
            # x0^2 + y^2 with x0 = +-1 is strictly between y^2 and (y+1)^2
            ok = k == 0 and ry == 0 and abs(norm) == abs(2 * rx)
        elif c.rule == "parity":
            ok = (k - norm) % 2 == 1
        elif c.rule == "conic":
            conic = gap_conic(ref, k)
            points, _ = solve_conic(conic)
            ok = list(conic) == c.detail["conic"] and all(
                not (is_edge((0, 0), p) and is_edge(p, ref)) for p in points
            )
        else:
            ok = False
        if not ok:
            return False
    return True
