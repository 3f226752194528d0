"""Exact cost minimization of series-parallel systems with multiple component choices."""
from ._accel import backend_name
from .errors import (BudgetTooSmall, EmptySubsystemBound, EnumerationTooLarge, Infeasible,
                     InvalidInstance, NotNormalized, RedAllocError, ShapeError)
from .greedy import GreedyRate, greedy_budget, greedy_feasible, rates
from .model import (Instance, NormalizedInstance, SlackVector, cost, denormalize, is_reliable,
                    less_c, lrp_feasible, normalize, reliability, slacks)
from .oracle import OracleResult, brute_force_optimum, brute_force_testset_property, dp_optimum_cost
from .solver import SolveReport, lrp_optimum, solve, walk_back
from .testset import (TestMove, apply_forward, apply_reverse, build_test_set, constraint_matrix,
                      kernel_check)

__version__ = "0.1.0"
