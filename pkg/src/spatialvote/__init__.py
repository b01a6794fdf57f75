"""Exact solvers for placing a new candidate in a spatial election.

Voters and incumbents are rational points in R^d; each voter backs the
closest candidate under an lp distance (ties go to the incumbents).  The
package finds a point winning as many voters as possible, with an exact
rational witness.
"""

from .election import (
    BallMultiset,
    ElectionInstance,
    ScoringMatrix,
    SolveResult,
    critical_regions,
    eval_nu,
    eval_rank,
    plurality_multiset,
    reduce_fls,
    scoring_balls,
)
from .geometry import Hyperplane, OpenBall, Rat, as_point, as_rat
from .multi import BallArrangement, Nesting, m_approx, modified_balls1, modified_balls3, nesting_predicate, radical_hyperplane
from .single import (
    CentralArrangement,
    VerificationError,
    enumerate_regions,
    radial_sweep_2d,
    scale_into_balls,
    solve_single,
    tangent_normal,
    two_approx,
)
from .solve import IncompatibleMethod, solve, solve_scoring

__version__ = "0.1.0"

__all__ = [
    "BallArrangement",
    "BallMultiset",
    "CentralArrangement",
    "ElectionInstance",
    "Hyperplane",
    "IncompatibleMethod",
    "Nesting",
    "OpenBall",
    "Rat",
    "ScoringMatrix",
    "SolveResult",
    "VerificationError",
    "as_point",
    "as_rat",
    "critical_regions",
    "enumerate_regions",
    "eval_nu",
    "eval_rank",
    "m_approx",
    "modified_balls1",
    "modified_balls3",
    "nesting_predicate",
    "plurality_multiset",
    "radial_sweep_2d",
    "radical_hyperplane",
    "reduce_fls",
    "scale_into_balls",
    "scoring_balls",
    "solve",
    "solve_scoring",
    "solve_single",
    "tangent_normal",
    "two_approx",
]
