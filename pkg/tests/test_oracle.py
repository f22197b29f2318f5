import pytest
from hypothesis import given, settings, strategies as st

from brute import best_midpoint, box_steps, is_step
from pythwalk.arithmetic import RangeError
from pythwalk.graph import WalkPath, canonical_rep, canonical_transform, symmetry_orbit, verify_path, witness_key
from pythwalk.oracle import (
    BasisDecomposition,
    Distance,
    StepTable,
    classify,
    classify_one_step,
    default_escalation,
    find_two_step,
    shortest_two_step,
    three_step_construct,
)


def vecs(path):
    return [s.vec for s in path.steps]


@pytest.mark.parametrize("t, ok", [((3, 4), True), ((1, 1), False), ((20, 21), True), ((5, 0), False)])
def test_one_step(t, ok):
    assert classify_one_step(t) is ok


def test_find_two_step_examples():
    assert vecs(find_two_step((1, 1), 4)) == [(4, -3), (-3, 4)]
    assert find_two_step((1, 1), 3) is None
    assert vecs(find_two_step((3, 0), 24)) == [(10, 24), (-7, -24)]
    assert find_two_step((3, 0), 23) is None
    for bound in (10, 100, 1000):
        assert find_two_step((1, 0), bound) is None


def test_find_two_step_range():
    with pytest.raises(RangeError):
        find_two_step((2**63, 0), 10)
    with pytest.raises(RangeError):
        find_two_step((1, 1), 0)


def test_shortest_examples():
    p = shortest_two_step((2, 4), 200)
    assert vecs(p) == [(77, -36), (-75, 40)] and p.lengths == (85, 85)
    assert shortest_two_step((1, 1), 50).lengths == (5, 5)
    assert shortest_two_step((1, 0), 300) is None
    assert shortest_two_step((2, 4), 84) is None


def test_shortest_matches_brute_force():
    # midpoints of steps of length <= 60 all sit in the box of radius 60
    cands = [(x, y) for x, y in box_steps(60) if x * x + y * y <= 3600]
    for t in [(1, 1), (2, 3), (5, 5), (0, 7), (3, 6), (2, 5)]:
        want = best_midpoint(t, [c for c in cands if (t[0] - c[0]) ** 2 + (t[1] - c[1]) ** 2 <= 3600])
        got = shortest_two_step(t, 60)
        assert (got.steps[0].vec if got else None) == want, t


def test_three_step_examples():
    assert vecs(three_step_construct((1, 0))) == [(9, 12), (-12, -9), (4, -3)]
    assert vecs(three_step_construct((0, 1))) == [(12, 16), (-16, -12), (4, -3)]
    assert three_step_construct((0, 0)).steps == ()


@settings(max_examples=300)
@given(st.integers(-10**9, 10**9), st.integers(-10**9, 10**9))
def test_three_step_properties(x, y):
    p = three_step_construct((x, y))
    assert verify_path(p, (x, y))
    assert len(p) <= 3
    assert (len(p) == 0) == (x == 0 and y == 0)
    dec = BasisDecomposition.of((x, y))
    assert dec.combine() == (x, y)


@given(st.integers(-10**6, 10**6).filter(bool))
def test_three_step_antidiagonal_has_two_steps(x):
    assert len(three_step_construct((x, -x))) == 2


@pytest.mark.parametrize("t, cls, steps", [
    ((0, 0), Distance.D0, []),
    ((3, 4), Distance.D1, [(3, 4)]),
    ((4, 0), Distance.D2, [(9, 12), (-5, -12)]),
    ((2, 0), Distance.D3_CERTIFIED, None),
])
def test_classify_examples(t, cls, steps):
    v = classify(t)
    assert v.cls is cls
    assert verify_path(v.witness, t)
    if steps is not None:
        assert vecs(v.witness) == steps
    if cls is Distance.D3_CERTIFIED:
        assert v.certificate.kind == "PARITY_N0" and len(v.witness) == 3


def test_classify_seven_seven():
    v = classify((7, 7))
    assert v.cls is Distance.D2
    scaled = WalkPath.from_vectors([(28, -21), (-21, 28)])
    assert verify_path(scaled, (7, 7))
    assert witness_key(v.witness) <= witness_key(scaled)


def test_unresolved_is_honest():
    # (2,3) needs a midpoint beyond 12, so bound 4 without families leaves it open
    v = classify((2, 3), leg_bound=4, use_families=False)
    assert v.cls is Distance.UNRESOLVED
    assert v.bound_used == 4 and len(v.witness) == 3 and verify_path(v.witness, (2, 3))


@pytest.mark.parametrize("t", [(1, 1), (3, 2), (5, 0), (2, 7), (11, 4), (1, 0), (2, 1), (6, 6)])
@pytest.mark.parametrize("fam", [True, False])
def test_orbit_consistency(t, fam):
    base = classify(canonical_rep(t), use_families=fam)
    for s in symmetry_orbit(t):
        v = classify(s, use_families=fam)
        assert v.cls is base.cls
        assert verify_path(v.witness, s)
        if v.cls is Distance.D2:
            assert v.witness == base.witness.transformed(canonical_transform(s))


@pytest.mark.parametrize("t", [(1, 1), (2, 3), (4, 0), (5, 7), (9, 2)])
def test_monotone_in_bound(t):
    found = None
    for bound in (8, 16, 32, 64, 128, 256):
        p = find_two_step(t, bound)
        if found is not None:
            assert p is not None
            assert witness_key(p) <= witness_key(found)
        found = p if p is not None else found
    assert found is not None


@pytest.mark.parametrize("t", [(1, 1), (2, 3), (4, 0), (3, 5)])
@pytest.mark.parametrize("k", [1, 2, 3, 7, 12])
def test_scaling(t, k):
    assert classify(t).cls is Distance.D2
    big = (k * t[0], k * t[1])
    assert classify(big).cls in (Distance.D1, Distance.D2)
    assert verify_path(classify(t).witness.scaled(k), big)


@pytest.mark.parametrize("t", sorted(symmetry_orbit((1, 0)) | symmetry_orbit((2, 0)) | symmetry_orbit((2, 1))))
def test_exceptional_never_two_steps(t):
    for bound in (50, 400, 3000):
        assert find_two_step(t, bound) is None
    assert classify(t).cls is Distance.D3_CERTIFIED


def test_step_table_variants():
    # each primitive triple appears in all 8 sign/swap forms
    tab = StepTable.for_leg_bound(5)
    assert len(tab) == 8
    assert len(StepTable.for_hypotenuse(5)) == 8
    # (3,4,5), (6,8,10), (5,12,13), (9,12,15)
    assert len(StepTable.for_leg_bound(12)) == 32


def test_param_table_matches_direct_search():
    tab = StepTable.for_params(6, 6, 4)
    p = find_two_step((1, 1), 1, table=tab)
    assert p is not None and verify_path(p, (1, 1))


HUGE = [
    (2**40 + 3, 2**40 + 7),
    (3 * 2**41 + 3, 4 * 2**41 + 4),       # (3,4) then (3,4) scaled by 2^41
    (5 * 2**45 + 4, -12 * 2**45 - 3),     # (4,-3) then (5,-12) scaled
    (-(2**50), 2**50 + 1),
]


@pytest.mark.parametrize("t", HUGE)
def test_exact_fallback_for_huge_targets(t):
    cands = box_steps(30)
    want = best_midpoint(t, cands)
    got = find_two_step(t, 30)
    assert (got.steps[0].vec if got else None) == want
    if t in HUGE[1:3]:
        assert got is not None and verify_path(got, t)
    for k in (3 * 2**40, 2**45):
        big = (k, 0)
        got = find_two_step(big, 30)
        assert (got.steps[0].vec if got else None) == best_midpoint(big, cands)


def test_default_escalation():
    assert default_escalation(256) == [256]
    assert default_escalation(5000) == [256, 1024, 4096, 5000]
    assert default_escalation(4096) == [256, 1024, 4096]
    assert default_escalation(100) == [100]


def test_bruteforce_agreement_small_grid():
    steps = box_steps(60)
    for h in range(0, 8):
        for g in range(0, h + 1):
            t = (g, h)
            got = classify(t, leg_bound=60, use_families=False)
            if t == (0, 0):
                assert got.cls is Distance.D0
            elif is_step(g, h):
                assert got.cls is Distance.D1
            else:
                mid = best_midpoint(t, steps)
                if mid is None:
                    assert got.cls in (Distance.D3_CERTIFIED, Distance.UNRESOLVED)
                else:
                    assert got.cls is Distance.D2 and got.witness.steps[0].vec == mid
