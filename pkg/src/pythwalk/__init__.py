"""Exact distances in the graph on Z^2 whose edges are integer-length,
non-axis-parallel segments."""

from .arithmetic import (
    PythTriple,
    RangeError,
    is_perfect_square,
    isqrt,
    triples_from_params,
    triples_up_to_hypotenuse,
    triples_up_to_leg,
)
from .certify import Certificate, certify_three, check_certificate, solve_eq1
from .families import FamilySolution, gh_enumerate, gh_witness, n0_witness, n2n_witness
from .graph import (
    LatticePoint,
    StepVector,
    WalkPath,
    canonical_rep,
    is_edge,
    step_from,
    symmetry_orbit,
    verify_path,
)
from .oracle import (
    Distance,
    DistanceVerdict,
    classify,
    classify_one_step,
    find_two_step,
    shortest_two_step,
    three_step_construct,
)
from .sweep import SweepConfig, report, resume_sweep, run_sweep

__version__ = "0.1.0"
