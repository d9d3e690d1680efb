"""Solver result model."""
from dataclasses import dataclass

from streampart.models.assignment import Assignment
from streampart.models.evaluation import Evaluation


@dataclass
class SolverStats:
    """Search effort counters."""
    solver: str
    nodes_explored: int = 0
    nodes_pruned: int = 0
    leaves_evaluated: int = 0
    wall_time: float = 0.0
    workers: int = 1


@dataclass(frozen=True)
class Solution:
    """Best assignment found, its evaluation and the search statistics."""
    assignment: Assignment
    evaluation: Evaluation
    stats: SolverStats
