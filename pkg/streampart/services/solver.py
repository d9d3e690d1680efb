"""Assignment search: exhaustive enumeration and branch-and-bound.

Both solvers rank assignments by the same strict total order: larger λ
first (floats, with an exact Fraction recomputation whenever two values are
within rounding distance), then fewer HW processes, smaller ΣR, smaller
total FPGA resource use, and the lexicographically smallest option tuple in
sorted process-id order (SW < HW(1) < HW(2) < ...).
"""
import itertools
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple

from streampart.exceptions import (
    IncompleteAssignment,
    Infeasible,
    PinViolation,
    RmaxExceeded,
    SearchSpaceTooLarge,
    UnboundedThroughput,
)
from streampart.models import Assignment, ProblemSpec, Solution, SolverStats
from streampart.services.evaluator import evaluate
from streampart.services.rates import RepetitionVector, repetition_vector
from streampart.services.throughput import ThroughputModel

logger = logging.getLogger(__name__)

DEFAULT_LIMIT = 10**7
# Relative distance below which float λ values are re-ranked exactly.
CLOSE = 1e-9


class _Ranker:
    """Float model for speed, exact model to settle near-ties."""

    def __init__(self, problem: ProblemSpec, repetition: RepetitionVector):
        self.fast = ThroughputModel(problem, repetition)
        self.exact = ThroughputModel(problem, repetition, exact=True)
        self._exact_lambda: Dict[tuple, object] = {}

    def exact_lambda(self, choice: tuple):
        if choice not in self._exact_lambda:
            self._exact_lambda[choice] = self.exact.throughput(choice)
        return self._exact_lambda[choice]

    def compare(self, a_choice: tuple, a: float, b_choice: tuple, b: float) -> int:
        """Sign of λ(a) - λ(b), exact when the floats are close."""
        if not math.isclose(a, b, rel_tol=CLOSE):
            return 1 if a > b else -1
        ea, eb = self.exact_lambda(a_choice), self.exact_lambda(b_choice)
        return (ea > eb) - (ea < eb)

    def better(self, a_choice: tuple, a: float, b_choice: tuple, b: float) -> bool:
        """True if assignment a ranks strictly before assignment b."""
        sign = self.compare(a_choice, a, b_choice, b)
        if sign:
            return sign > 0
        return self.fast.tie_key(a_choice) < self.fast.tie_key(b_choice)


def search_space_size(problem: ProblemSpec) -> int:
    """Number of complete assignments respecting pins and r_max."""
    return math.prod(len(problem.process(pid).options()) for pid in problem.process_ids)


def _leaf_value(model: ThroughputModel, choice: tuple) -> float:
    value = model.throughput(choice)
    if value is None:
        raise UnboundedThroughput()
    return value


def _scan_chunk(args) -> Tuple[Optional[tuple], Optional[float], int]:
    """Best feasible leaf among leaves [lo, hi) of the lexicographic enumeration."""
    problem, repetition, lo, hi = args
    ranker = _Ranker(problem, repetition)
    model = ranker.fast
    best_choice, best_value = None, None
    count = 0
    leaves = itertools.islice(itertools.product(*model.options), lo, hi)
    for choice in leaves:
        count += 1
        if not model.fits(choice):
            continue
        value = _leaf_value(model, choice)
        if best_choice is None or ranker.better(choice, value, best_choice, best_value):
            best_choice, best_value = choice, value
    return best_choice, best_value, count


def _solution(problem: ProblemSpec, model: ThroughputModel, choice: tuple, stats: SolverStats,
              started: float) -> Solution:
    assignment = Assignment.from_options(model.ids, choice)
    evaluation = evaluate(problem, assignment)
    stats.wall_time = time.perf_counter() - started
    logger.info(
        "%s solver: %r lambda=%.6g (%d nodes, %d pruned, %.3fs)",
        stats.solver, assignment, evaluation.lambda_value, stats.nodes_explored, stats.nodes_pruned, stats.wall_time,
    )
    return Solution(assignment=assignment, evaluation=evaluation, stats=stats)


def solve_exhaustive(problem: ProblemSpec, limit: int = DEFAULT_LIMIT, workers: int = 1,
                     repetition: RepetitionVector = None) -> Solution:
    """Enumerate every assignment and return the best feasible one.

    With workers > 1 the leaf index range is split into contiguous chunks
    scanned in separate processes; the reduction uses the same total order,
    so the answer does not depend on the worker count.
    """
    started = time.perf_counter()
    repetition = repetition or repetition_vector(problem)
    size = search_space_size(problem)
    if size > limit:
        raise SearchSpaceTooLarge(size, limit)

    ranker = _Ranker(problem, repetition)
    if workers <= 1 or size < 2 * workers:
        results = [_scan_chunk((problem, repetition, 0, size))]
    else:
        chunks = workers * 4
        step = -(-size // chunks)
        jobs = [(problem, repetition, lo, min(lo + step, size)) for lo in range(0, size, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_chunk, jobs))

    best_choice, best_value = None, None
    for choice, value, _ in results:
        if choice is None:
            continue
        if best_choice is None or ranker.better(choice, value, best_choice, best_value):
            best_choice, best_value = choice, value
    if best_choice is None:
        raise Infeasible("no assignment fits the FPGA resources (pinned HW processes do not fit at R=1)")

    stats = SolverStats(
        solver="exhaustive",
        nodes_explored=size,
        leaves_evaluated=sum(count for _, _, count in results),
        workers=max(workers, 1),
    )
    return _solution(problem, ranker.fast, best_choice, stats, started)


def _branch_order(model: ThroughputModel) -> List[int]:
    """Undecided processes, most severe SW bottleneck (smallest sw cap) first."""
    branching = [i for i in range(len(model.ids)) if len(model.options[i]) > 1]
    return sorted(
        branching,
        key=lambda i: (model.sw_cap[i] is None, model.sw_cap[i] or 0, model.ids[i]),
    )


def _branch_options(options: List[int]) -> List[int]:
    """SW first, then HW(R) by descending R."""
    hw = sorted((o for o in options if o), reverse=True)
    return ([0] if 0 in options else []) + hw


class _BranchAndBound:
    def __init__(self, problem: ProblemSpec, repetition: RepetitionVector):
        self.ranker = _Ranker(problem, repetition)
        self.model = self.ranker.fast
        self.order = _branch_order(self.model)
        self.partial: List[Optional[int]] = [
            options[0] if len(options) == 1 else None for options in self.model.options
        ]
        self.stats = SolverStats(solver="bnb")
        self.best_choice: Optional[tuple] = None
        self.best_value: Optional[float] = None

    def run(self) -> None:
        if not self.model.partial_fits(self.partial):
            self.stats.nodes_pruned += 1
            return
        self._visit(0)

    def _visit(self, depth: int) -> None:
        self.stats.nodes_explored += 1
        if depth == len(self.order):
            self._leaf(tuple(self.partial))
            return
        i = self.order[depth]
        for option in _branch_options(self.model.options[i]):
            self.partial[i] = option
            if self._prunable():
                self.stats.nodes_pruned += 1
            else:
                self._visit(depth + 1)
        self.partial[i] = None

    def _leaf(self, choice: tuple) -> None:
        self.stats.leaves_evaluated += 1
        if not self.model.fits(choice):
            return
        value = _leaf_value(self.model, choice)
        if self.best_choice is None or self.ranker.better(choice, value, self.best_choice, self.best_value):
            logger.debug("new incumbent %s lambda=%.6g", choice, value)
            self.best_choice, self.best_value = choice, value

    def _prunable(self) -> bool:
        if not self.model.partial_fits(self.partial):
            return True
        if self.best_choice is None:
            return False
        bound = self.model.bound(self.partial)
        if bound is None:
            return False
        if not math.isclose(bound, self.best_value, rel_tol=CLOSE):
            return bound < self.best_value
        exact_bound = self.ranker.exact.bound(self.partial)
        incumbent = self.ranker.exact_lambda(self.best_choice)
        if exact_bound != incumbent:
            return exact_bound < incumbent
        # A completion can at best tie on λ; keep it only if it could win the tie-break.
        return self.model.tie_floor(self.partial) > self.model.tie_key(self.best_choice)[:3]


def solve_bnb(problem: ProblemSpec, repetition: RepetitionVector = None) -> Solution:
    """Branch-and-bound search returning the same answer as solve_exhaustive."""
    started = time.perf_counter()
    repetition = repetition or repetition_vector(problem)
    search = _BranchAndBound(problem, repetition)
    search.run()
    if search.best_choice is None:
        raise Infeasible("no assignment fits the FPGA resources (pinned HW processes do not fit at R=1)")
    return _solution(problem, search.model, search.best_choice, search.stats, started)


def solve(problem: ProblemSpec, solver: str = "bnb", limit: int = DEFAULT_LIMIT, workers: int = 1) -> Solution:
    """Dispatch to the named solver."""
    if solver == "exhaustive":
        return solve_exhaustive(problem, limit=limit, workers=workers)
    if solver == "bnb":
        return solve_bnb(problem)
    raise ValueError(f"unknown solver '{solver}'")


def upper_bound(problem: ProblemSpec, partial: Dict[str, int], repetition: RepetitionVector = None):
    """Admissible bound on λ over every feasible completion of a partial assignment.

    partial maps decided process ids to options (0 = SW, r = HW(r)). Returns
    an exact Fraction, or None when nothing caps λ.
    """
    model = ThroughputModel(problem, repetition, exact=True)
    decided: List[Optional[int]] = [None] * len(model.ids)
    for pid, option in partial.items():
        if pid not in model.index:
            raise IncompleteAssignment(f"partial assignment names unknown process '{pid}'")
        i = model.index[pid]
        if option not in model.options[i]:
            if option > 0 and problem.process(pid).allows_hw:
                raise RmaxExceeded(f"process '{pid}' cannot take HW({option})")
            raise PinViolation(f"option {option} violates the placement of process '{pid}'")
        decided[i] = option
    return model.bound(decided)
