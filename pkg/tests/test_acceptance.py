"""End-to-end acceptance checks, one group per criterion, each under its
wall-clock budget.  The summary lines are printed by conftest.py."""

import json
import os
import random
import time

import numpy as np
import pytest

from brute import best_midpoint, box_steps, mixed_conic, is_step
from pythwalk.arithmetic import PythTriple
from pythwalk.certify import EXCEPTIONAL, check_certificate
from pythwalk.families import gh_enumerate, n0_witness, n2n_witness
from pythwalk.graph import WalkPath, canonical_rep, symmetry_orbit, verify_path
from pythwalk.oracle import Distance, classify, find_two_step, shortest_two_step, three_step_construct
from pythwalk.sweep import SweepConfig, report, run_sweep

EXCEPTIONAL_ORBITS = sorted(set().union(*(symmetry_orbit(p) for p in [(0, 1), (0, 2), (1, 2)])))


class Budget:
    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0
        if exc[0] is None:
            assert self.elapsed < self.seconds, f"took {self.elapsed:.2f}s, budget {self.seconds}s"


DISPLAYED = [
    ([(4, -3), (-3, 4)], (1, 1), None),
    ([(9, 12), (-12, -9), (4, -3)], (1, 0), None),
    ([(9, 12), (-5, -12)], (4, 0), None),
    ([(77, -36), (-75, 40)], (2, 4), None),
    ([(-50643549, 196449668), (50645660, -196449099)], (2111, 569), (202872475, 202872451)),
]


@pytest.mark.criterion(1)
def test_c1_displayed_paths():
    with Budget(1):
        for steps, end, lengths in DISPLAYED:
            path = WalkPath.from_vectors(steps)
            assert verify_path(path, end)
            if lengths is not None:
                assert path.lengths == lengths


@pytest.mark.criterion(2)
def test_c2_exceptional_certification():
    with Budget(60):
        window = range(-12, 13)
        certified = set()
        for x in window:
            for y in window:
                v = classify((x, y))
                if v.cls is Distance.D3_CERTIFIED:
                    certified.add((x, y))
                    assert check_certificate(v.certificate)
                    assert len(v.witness) == 3 and verify_path(v.witness, (x, y))
                else:
                    assert v.cls in (Distance.D0, Distance.D1, Distance.D2)
        assert certified == set(EXCEPTIONAL_ORBITS)
        assert {canonical_rep(p) for p in certified} == EXCEPTIONAL
        for bound in (10**3, 10**4, 10**5):
            for t in EXCEPTIONAL_ORBITS:
                assert find_two_step(t, bound) is None, (t, bound)


@pytest.mark.criterion(3)
def test_c3_minimal_witness_two_four():
    with Budget(10):
        path = shortest_two_step((2, 4), 4096)
        assert path.lengths == (85, 85)
        assert verify_path(path, (2, 4))


@pytest.mark.criterion(4)
def test_c4_mixed_conic_against_scan():
    from pythwalk.certify import solve_eq1
    with Budget(10):
        assert solve_eq1() == {(2, 0), (0, 1)}
        r = 10**4
        x = np.arange(-r, r + 1, dtype=np.int64)
        lin = 3 * x - 8
        zeros = set()
        for y0 in range(-r, r + 1, 256):
            ys = np.arange(y0, min(y0 + 256, r + 1), dtype=np.int64)[:, None]
            vals = x * (lin + 4 * ys) + (4 - 4 * ys)
            for i, j in zip(*np.nonzero(vals == 0)):
                zeros.add((int(x[j]), int(ys[i, 0])))
        assert zeros == {(2, 0), (0, 1)}
        assert all(mixed_conic(*p) == 0 for p in zeros)


@pytest.mark.criterion(5)
def test_c5_three_steps_everywhere():
    rng = random.Random(20240601)
    with Budget(30):
        for _ in range(10**5):
            t = (rng.randint(-10**6, 10**6), rng.randint(-10**6, 10**6))
            path = three_step_construct(t)
            assert len(path) <= 3 and verify_path(path, t), t


@pytest.mark.criterion(6)
def test_c6_families_at_scale():
    with Budget(60):
        for n in range(3, 10**4 + 1):
            sol = n0_witness(n)
            assert sol.target == (n, 0) and verify_path(sol.path, (n, 0)), n
        for n in range(2, 10**4 + 1):
            sol = n2n_witness(n)
            assert sol.target == (n, 2 * n) and verify_path(sol.path, (n, 2 * n)), n
        lines = {(4, 3, 5): lambda g, h: g == 2 * h - 1,
                 (3, 4, 5): lambda g, h: 2 * g == h - 1,
                 (8, 15, 17): lambda g, h: 9 * g == 2 * h - 1}
        firsts = {(4, 3, 5): [(1, 1), (3, 2), (5, 3)], (3, 4, 5): [(1, 3), (2, 5), (3, 7)]}
        for tri, on_line in lines.items():
            sols = list(gh_enumerate(PythTriple(*tri), 200))
            assert len(sols) == 200
            for s in sols:
                assert on_line(*s.target) and verify_path(s.path, s.target)
            if tri in firsts:
                assert [tuple(s.target) for s in sols[:3]] == firsts[tri]


SWEEP = dict(g_max=40, h_max=40, leg_bound=65536, use_families=False, chunk=4)


@pytest.fixture(scope="module")
def sweep_file(tmp_path_factory):
    out = tmp_path_factory.mktemp("sweep") / "grid40.jsonl"
    t0 = time.perf_counter()
    summary = run_sweep(SweepConfig(output_path=str(out), workers=1, **SWEEP))
    return out, summary, time.perf_counter() - t0


@pytest.mark.criterion(7)
def test_c7_desk_scale_sweep(sweep_file):
    out, summary, elapsed = sweep_file
    assert elapsed < 600
    assert [tuple(p) for p in summary.beyond_two] == [(0, 1), (0, 2), (1, 2)]
    with Budget(600):
        rep = report(str(out))
    assert not rep.corrupt
    assert [tuple(p) for p in rep.unresolved] == [(0, 1), (0, 2), (1, 2)]
    assert rep.certified == rep.unresolved and rep.conjecture_consistent
    assert rep.total == 40 * 41 // 2
    # independent re-check of every stored witness
    for raw in out.read_text().splitlines()[1:]:
        r = json.loads(raw)
        node = (r["g"], r["h"])
        if r["witness"]:
            path = WalkPath.from_vectors(r["witness"])
            assert verify_path(path, node)
            assert all(is_step(*s) for s in r["witness"])
        elif node != (0, 0):
            assert canonical_rep(node) in EXCEPTIONAL


@pytest.mark.criterion(7)
def test_c7_sweep_with_family_fast_paths(tmp_path):
    out = tmp_path / "grid40_families.jsonl"
    with Budget(600):
        summary = run_sweep(SweepConfig(40, 40, 65536, str(out)))
        rep = report(str(out))
    assert [tuple(p) for p in summary.beyond_two] == [(0, 1), (0, 2), (1, 2)]
    assert not rep.corrupt and rep.conjecture_consistent
    assert [tuple(p) for p in rep.unresolved] == [(0, 1), (0, 2), (1, 2)]


@pytest.mark.criterion(8)
def test_c8_worker_count_does_not_change_output(sweep_file, tmp_path):
    out, _, _ = sweep_file
    other = tmp_path / "grid40_parallel.jsonl"
    workers = max(2, min(4, os.cpu_count() or 2))
    run_sweep(SweepConfig(output_path=str(other), workers=workers, **SWEEP))
    assert other.read_bytes() == out.read_bytes()


@pytest.mark.criterion(9)
def test_c9_bruteforce_cross_check():
    with Budget(60):
        cands = box_steps(200)
        for h in range(11):
            for g in range(h + 1):
                if (g, h) == (0, 0):
                    continue
                want = best_midpoint((g, h), cands)
                got = find_two_step((g, h), 200)
                if want is None:
                    assert got is None, (g, h)
                else:
                    assert got is not None, (g, h)
                    assert got.steps[0].vec == want, (g, h)
                    assert verify_path(got, (g, h))
