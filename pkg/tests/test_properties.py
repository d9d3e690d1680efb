"""Randomized property tests over generated instances."""
import dataclasses
import math
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from streampart.models import ChannelSpec, ConstraintFamily, Placement, SimConfig, is_unbounded
from streampart.services.evaluator import evaluate
from streampart.services.instances import random_assignment, random_partial, random_problem
from streampart.services.milp import check_lp, export_milp, lp_counts
from streampart.services.problem_io import parse_problem, serialize_problem
from streampart.services.rates import repetition_vector
from streampart.services.simulator import compare, simulate
from streampart.services.solver import solve_bnb, solve_exhaustive, upper_bound
from streampart.services.validation import has_errors, validate_problem
from tests.conftest import kernel_dict, to_problem

seeds = st.integers(min_value=0, max_value=2**32 - 1)

def _settings(examples):
    return settings(max_examples=examples, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _problem(seed, **kwargs):
    rng = random.Random(seed)
    kwargs.setdefault("free", rng.randint(1, 4))
    kwargs.setdefault("pinned_sw", rng.randint(1, 2))
    return rng, random_problem(rng, **kwargs)


def _scale_rates(problem, factor):
    def rate(value):
        return value if is_unbounded(value) else value * factor

    processes = []
    for process in problem.processes:
        profile = process.hw_profile
        if profile is not None:
            table = tuple(v * factor for v in profile.throughput_table) if profile.throughput_table else None
            profile = dataclasses.replace(profile, base_throughput=profile.base_throughput * factor,
                                          throughput_table=table)
        processes.append(dataclasses.replace(process, sw_throughput=rate(process.sw_throughput),
                                             hw_profile=profile))
    channels = tuple(dataclasses.replace(c, bandwidth_cap=rate(c.bandwidth_cap)) for c in problem.channels)
    platform = dataclasses.replace(problem.platform, pcie_bandwidth=rate(problem.platform.pcie_bandwidth))
    return dataclasses.replace(problem, processes=tuple(processes), channels=channels, platform=platform)


@pytest.mark.slow
@given(seeds)
@_settings(200)
def test_bnb_matches_exhaustive(seed):
    """Test that branch-and-bound returns the exhaustive optimum."""
    pins = random.Random(seed)
    _, problem = _problem(seed, free=pins.randint(3, 7), pinned_sw=pins.randint(1, 2), pinned_hw=pins.randint(0, 1))
    try:
        exhaustive = solve_exhaustive(problem)
    except Exception as e:
        with pytest.raises(type(e)):
            solve_bnb(problem)
        return
    bnb = solve_bnb(problem)
    assert bnb.assignment == exhaustive.assignment
    assert bnb.evaluation.throughput_lambda == exhaustive.evaluation.throughput_lambda


@given(
    base=st.integers(min_value=1, max_value=500),
    sw=st.integers(min_value=1, max_value=2000),
    per_replica=st.integers(min_value=1, max_value=30000),
    capacity=st.integers(min_value=1, max_value=100000),
    r_max=st.integers(min_value=1, max_value=6),
)
@settings(max_examples=100, deadline=None)
def test_single_kernel_optimum(base, sw, per_replica, capacity, r_max):
    """Test that a lone kernel gets the largest affordable replication when it beats SW."""
    data = kernel_dict()
    data["processes"][1]["sw_throughput"] = sw
    data["processes"][1]["hw_profile"] = {"base_throughput": base, "resource_per_replica": {"lut": per_replica},
                                          "r_max": r_max}
    data["platform"]["fpga_capacity"]["lut"] = capacity
    affordable = min(r_max, capacity // per_replica)
    expected = max(sw, affordable * base)

    solution = solve_bnb(to_problem(data))
    assert solution.evaluation.throughput_lambda == expected
    assert solution.assignment["B"] == (affordable if affordable * base > sw else 0)


@given(seeds)
@_settings(200)
def test_bound_is_admissible(seed):
    """Test that the bound of any partial assignment covers its feasible completions."""
    rng, problem = _problem(seed)
    for _ in range(5):
        assignment = random_assignment(rng, problem)
        evaluation = evaluate(problem, assignment)
        if not evaluation.feasible:
            continue
        bound = upper_bound(problem, random_partial(rng, problem, assignment))
        assert bound >= evaluation.throughput_lambda


@given(seeds, st.sampled_from(["cpu", "pcie", "fpga"]))
@_settings(200)
def test_more_capacity_never_hurts(seed, resource):
    """Test that the optimum does not drop when a platform budget grows."""
    _, problem = _problem(seed, free=random.Random(seed).randint(1, 3))
    platform = problem.platform
    if resource == "cpu":
        platform = dataclasses.replace(platform, cpu_cores=platform.cpu_cores * 2)
    elif resource == "pcie":
        pcie = platform.pcie_bandwidth
        platform = dataclasses.replace(platform, pcie_bandwidth=pcie if is_unbounded(pcie) else pcie * 2)
    else:
        platform = dataclasses.replace(
            platform, fpga_capacity={kind: value * 2 for kind, value in platform.fpga_capacity.items()}
        )
    larger = dataclasses.replace(problem, platform=platform)
    assert solve_bnb(larger).evaluation.throughput_lambda >= solve_bnb(problem).evaluation.throughput_lambda


@given(seeds, st.sampled_from(["cpu", "pcie", "fpga", "channel"]), st.integers(min_value=1, max_value=1000))
@_settings(500)
def test_larger_budget_never_lowers_lambda(seed, budget, extra):
    """Test that raising one budget never lowers lambda for a fixed assignment."""
    rng, problem = _problem(seed)
    assignment = random_assignment(rng, problem)
    platform = problem.platform
    channels = problem.channels
    if budget == "cpu":
        platform = dataclasses.replace(platform, cpu_cores=platform.cpu_cores + Fraction(extra, 100))
    elif budget == "pcie" and not is_unbounded(platform.pcie_bandwidth):
        platform = dataclasses.replace(platform, pcie_bandwidth=platform.pcie_bandwidth + extra)
    elif budget == "fpga":
        kind = rng.choice(sorted(platform.fpga_capacity))
        platform = dataclasses.replace(
            platform, fpga_capacity={**platform.fpga_capacity, kind: platform.fpga_capacity[kind] + extra}
        )
    elif budget == "channel":
        capped = [c for c in channels if not is_unbounded(c.bandwidth_cap)]
        if capped:
            target = rng.choice(capped)
            channels = tuple(
                dataclasses.replace(c, bandwidth_cap=c.bandwidth_cap + extra) if c is target else c
                for c in channels
            )
    larger = dataclasses.replace(problem, platform=platform, channels=channels)

    before = evaluate(problem, assignment)
    after = evaluate(larger, assignment)
    if before.feasible:
        assert after.feasible
        assert after.throughput_lambda >= before.throughput_lambda

@given(seeds, st.integers(min_value=2, max_value=7))
@_settings(500)
def test_lambda_scales_with_rates(seed, factor):
    """Test that scaling every rate by c scales lambda by c and keeps the binding set."""
    rng, problem = _problem(seed)
    assignment = random_assignment(rng, problem)
    before = evaluate(problem, assignment)
    after = evaluate(_scale_rates(problem, factor), assignment)
    assert before.feasible == after.feasible
    if before.feasible:
        assert after.throughput_lambda == before.throughput_lambda * factor
        binding = [(c.family, c.subject) for c in before.binding_constraints]
        assert [(c.family, c.subject) for c in after.binding_constraints] == binding


@given(seeds, st.integers(min_value=2, max_value=7))
@_settings(100)
def test_rate_scaling_keeps_optimum(seed, factor):
    """Test that uniformly faster rates leave the best assignment unchanged."""
    _, problem = _problem(seed, free=random.Random(seed).randint(1, 3))
    assert solve_bnb(_scale_rates(problem, factor)).assignment == solve_bnb(problem).assignment


@given(seeds)
@_settings(100)
def test_adding_hw_option_never_lowers_optimum(seed):
    """Test that giving a pinned_sw process a HW profile never lowers the optimal lambda."""
    rng, problem = _problem(seed, free=random.Random(seed).randint(1, 3), pinned_sw=2)
    candidates = [p for p in problem.processes if p.placement == Placement.PINNED_SW and not p.sw_unbounded]
    profiles = [p.hw_profile for p in problem.processes if p.hw_profile is not None]
    target = rng.choice(candidates)
    grown = dataclasses.replace(target, placement=Placement.FREE, hw_profile=rng.choice(profiles))
    larger = dataclasses.replace(
        problem, processes=tuple(grown if p is target else p for p in problem.processes)
    )
    assert not has_errors(validate_problem(larger))
    assert solve_bnb(larger).evaluation.throughput_lambda >= solve_bnb(problem).evaluation.throughput_lambda

@given(seeds)
@_settings(500)
def test_repetition_vector_balances(seed):
    """Test that generated instances have a balanced, minimal repetition vector."""
    _, problem = _problem(seed)
    q = repetition_vector(problem)
    for channel in problem.channels:
        assert q[channel.producer] * channel.prod_rate == q[channel.consumer] * channel.cons_rate
    assert math.gcd(*q.counts.values()) == 1


@given(seeds)
@_settings(100)
def test_generated_instances_validate(seed):
    """Test that every generated instance is valid."""
    _, problem = _problem(seed, pinned_hw=random.Random(seed).randint(0, 1))
    assert not has_errors(validate_problem(problem))


@given(seeds, st.sampled_from(["back_edge", "self_loop", "dangling", "sink"]))
@_settings(100)
def test_mutated_instances_are_rejected(seed, mutation):
    """Test that structural damage is always reported as an error."""
    _, problem = _problem(seed)
    ids = problem.process_ids
    first, last = problem.sources[0], problem.sink
    channels = list(problem.channels)
    if mutation == "back_edge":
        channels.append(ChannelSpec("back", last, first, 1, 1, 1))
    elif mutation == "self_loop":
        channels.append(ChannelSpec("loop", first, first, 1, 1, 1))
    elif mutation == "dangling":
        channels.append(ChannelSpec("dangling", first, "nowhere", 1, 1, 1))
    mutated = dataclasses.replace(problem, channels=tuple(channels))
    if mutation == "sink":
        mutated = dataclasses.replace(problem, sink=ids[0] if ids[0] != last else "nowhere")
    assert has_errors(validate_problem(mutated))


@given(seeds)
@_settings(50)
def test_problem_file_roundtrip(seed):
    """Test that a generated problem survives writing and reading its file."""
    _, problem = _problem(seed, pinned_hw=1)
    text = serialize_problem(problem)
    assert serialize_problem(parse_problem(text)) == text


@given(seeds)
@_settings(50)
def test_exported_models_are_well_formed(seed):
    """Test that exported models pass the structural check with the documented counts."""
    _, problem = _problem(seed, pinned_hw=random.Random(seed).randint(0, 1))
    summary = check_lp(export_milp(problem))
    assert (summary.variable_count, summary.row_count) == lp_counts(problem)


@pytest.mark.slow
@given(seeds)
@settings(max_examples=50, deadline=None,
          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
def test_simulation_agrees_with_prediction(seed):
    """Test that simulated throughput stays within 10% of a clearly bottlenecked prediction."""
    rng, problem = _problem(seed, free=random.Random(seed).randint(1, 3), max_rate=100)
    assignment = random_assignment(rng, problem)
    evaluation = evaluate(problem, assignment)
    assume(evaluation.feasible)
    caps = sorted(c.cap for c in evaluation.constraints if c.family != ConstraintFamily.FPGA_RESOURCE)
    assume(len(caps) < 2 or caps[1] >= caps[0] * Fraction(105, 100))

    config = SimConfig(duration=1000, warmup=100, buffer_tokens=64)
    report = simulate(problem, assignment, config, evaluation)
    assert compare(evaluation, report).verdict == "pass"
    assert report.measured_throughput <= 1.01 * evaluation.lambda_value


@pytest.mark.slow
@given(seeds)
@settings(max_examples=30, deadline=None,
          suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
def test_longer_runs_do_not_drift_from_prediction(seed):
    """Test that doubling duration and buffer size does not move the measurement away from lambda."""
    rng, problem = _problem(seed, free=random.Random(seed).randint(1, 3), max_rate=100)
    assignment = random_assignment(rng, problem)
    evaluation = evaluate(problem, assignment)
    assume(evaluation.feasible)
    lam = evaluation.lambda_value

    def error(duration, buffer_tokens):
        report = simulate(problem, assignment, SimConfig(duration=duration, buffer_tokens=buffer_tokens), evaluation)
        return abs(report.measured_throughput - lam) / lam

    # slack for the sink-count resolution of the shorter run
    assert error(800, 64) <= error(400, 32) + 0.01
