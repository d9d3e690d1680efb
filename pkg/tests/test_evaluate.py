"""Tests for the closed-form throughput evaluator."""
from fractions import Fraction

import pytest

from streampart.exceptions import IncompleteAssignment, PinViolation, RmaxExceeded, UnboundedThroughput
from streampart.models import Assignment, ConstraintFamily
from streampart.services.evaluator import evaluate, explain
from tests.conftest import KERNEL_PROFILE, chain_dict, kernel_dict, to_problem

ALL_SW = Assignment({"A": 0, "B": 0, "C": 0})


def _binding(evaluation):
    return [(c.family, c.subject) for c in evaluation.binding_constraints]


def test_chain_process_cap(chain_problem):
    """Test that the slowest SW process binds."""
    evaluation = evaluate(chain_problem, ALL_SW)
    assert evaluation.feasible
    assert evaluation.throughput_lambda == 100
    assert _binding(evaluation) == [(ConstraintFamily.SW_PROCESS, "B")]
    assert evaluation.sink_rate == 100


def test_chain_cpu_aggregate():
    """Test the CPU aggregate cap with half a core."""
    evaluation = evaluate(to_problem(chain_dict(cpu_cores=0.5)), ALL_SW)
    assert evaluation.throughput_lambda == Fraction(125, 3)
    assert _binding(evaluation) == [(ConstraintFamily.CPU_AGGREGATE, None)]
    assert evaluation.utilization["cpu"] == pytest.approx(1.0)


def test_chain_pcie_aggregate():
    """Test that two crossing channels share the PCIe link."""
    profile = dict(KERNEL_PROFILE, base_throughput=75)
    data = chain_dict(sw=("unbounded", 100, "unbounded"), pcie=200000, token_bytes=1000,
                      b_profile=profile, pinned_ends=True)
    evaluation = evaluate(to_problem(data), Assignment({"A": 0, "B": 2, "C": 0}))
    caps = {(c.family, c.subject): c.cap for c in evaluation.constraints}
    assert caps[(ConstraintFamily.HW_PROCESS, "B")] == 150
    assert caps[(ConstraintFamily.PCIE_AGGREGATE, None)] == 100
    assert evaluation.throughput_lambda == 100
    assert _binding(evaluation) == [(ConstraintFamily.PCIE_AGGREGATE, None)]
    assert evaluation.crossing_bytes_per_second == 200000


def test_resource_overflow_is_infeasible():
    """Test that overfilling the FPGA makes an assignment infeasible."""
    data = kernel_dict()
    data["platform"]["fpga_capacity"]["lut"] = 50000
    evaluation = evaluate(to_problem(data), Assignment({"A": 0, "B": 4, "C": 0}))
    assert not evaluation.feasible
    assert evaluation.throughput_lambda is None
    assert evaluation.overfull_resources == ("lut",)
    assert evaluation.utilization["fpga:lut"] == pytest.approx(70000 / 50000)


def test_channel_cap_scales_between_hw_endpoints():
    """Test that a capped channel between two HW processes widens with min(R_u, R_v)."""
    data = chain_dict(sw=(1000, 1000, 1000), b_profile=dict(KERNEL_PROFILE))
    for process in data["processes"]:
        process["hw_profile"] = dict(KERNEL_PROFILE, resource_fixed={}, resource_per_replica={"lut": 1})
        process["placement"] = "free"
    data["channels"][0]["bandwidth_cap"] = 100
    problem = to_problem(data)
    evaluation = evaluate(problem, Assignment({"A": 3, "B": 2, "C": 1}))
    caps = {(c.family, c.subject): c.cap for c in evaluation.constraints}
    assert caps[(ConstraintFamily.CHANNEL, "c1")] == 200

    data["channels"][0]["scale_with_replication"] = False
    evaluation = evaluate(to_problem(data), Assignment({"A": 3, "B": 2, "C": 1}))
    caps = {(c.family, c.subject): c.cap for c in evaluation.constraints}
    assert caps[(ConstraintFamily.CHANNEL, "c1")] == 100


def test_throughput_table_replaces_linear_scaling():
    """Test that a throughput table overrides R * base_throughput."""
    data = kernel_dict()
    data["processes"][1]["hw_profile"]["throughput_table"] = [250, 400, 500, 550]
    evaluation = evaluate(to_problem(data), Assignment({"A": 0, "B": 3, "C": 0}))
    assert evaluation.throughput_lambda == 500


def test_two_binding_caps_are_both_marked():
    """Test that simultaneously binding caps are all reported."""
    evaluation = evaluate(to_problem(chain_dict(sw=(100, 100, 1000))), ALL_SW)
    assert _binding(evaluation) == [(ConstraintFamily.SW_PROCESS, "A"), (ConstraintFamily.SW_PROCESS, "B")]
    report = explain(evaluation)
    assert report.count("BINDING") == 2


def test_explain_marks_cpu_aggregate():
    """Test the report line of a binding CPU aggregate."""
    report = explain(evaluate(to_problem(chain_dict(cpu_cores=0.5)), ALL_SW))
    line = next(l for l in report.splitlines() if "cpu aggregate" in l)
    assert "BINDING" in line


def test_explain_lists_overfull_kinds():
    """Test the report of an infeasible evaluation."""
    data = kernel_dict()
    data["platform"]["fpga_capacity"]["lut"] = 20000
    report = explain(evaluate(to_problem(data), Assignment({"A": 0, "B": 1, "C": 0})))
    assert report.startswith("INFEASIBLE")
    assert "lut" in report
    assert "OVERFULL" in report


def test_incomplete_assignment(chain_problem):
    """Test that a missing placement is rejected."""
    with pytest.raises(IncompleteAssignment):
        evaluate(chain_problem, Assignment({"A": 0, "B": 0}))


def test_pin_violation(chain_problem):
    """Test that HW placement of a pinned_sw process is rejected."""
    with pytest.raises(PinViolation):
        evaluate(chain_problem, Assignment({"A": 0, "B": 1, "C": 0}))


def test_rmax_exceeded(kernel_problem):
    """Test that replication above r_max is rejected."""
    with pytest.raises(RmaxExceeded):
        evaluate(kernel_problem, Assignment({"A": 0, "B": 5, "C": 0}))


def test_unbounded_throughput():
    """Test that a problem without any finite cap is an error."""
    data = chain_dict(sw=("unbounded", "unbounded", "unbounded"), pinned_ends=True)
    data["processes"][1]["placement"] = "pinned_sw"
    with pytest.raises(UnboundedThroughput, match="no finite constraint"):
        evaluate(to_problem(data), ALL_SW)


def test_binding_caps_recompute_to_lambda(kernel_problem_pcie):
    """Test that every binding cap equals lambda."""
    for r in range(0, 5):
        evaluation = evaluate(kernel_problem_pcie, Assignment({"A": 0, "B": r, "C": 0}))
        assert evaluation.binding_constraints
        for constraint in evaluation.binding_constraints:
            assert constraint.cap == evaluation.throughput_lambda
