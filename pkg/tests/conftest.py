"""Pytest configuration and fixtures."""
import json
from dataclasses import dataclass

import pytest

from streampart import run
from streampart.services.problem_io import parse_problem


def chain_dict(cpu_cores=4, sw=(1000, 100, 1000), pcie="unbounded", token_bytes=1,
               b_profile=None, b_placement=None, pinned_ends=False):
    """Problem dict for the chain A -> B -> C."""
    processes = []
    for pid, rate in zip("ABC", sw):
        process = {"id": pid, "sw_throughput": rate}
        if pid == "B" and b_profile is not None:
            process["hw_profile"] = b_profile
            if b_placement:
                process["placement"] = b_placement
        elif pinned_ends:
            process["placement"] = "pinned_sw"
        processes.append(process)
    return {
        "platform": {
            "cpu_cores": cpu_cores,
            "resource_kinds": ["lut"],
            "fpga_capacity": {"lut": 100000},
            "pcie_bandwidth": pcie,
        },
        "processes": processes,
        "channels": [
            {"id": "c1", "producer": "A", "consumer": "B", "prod_rate": 1, "cons_rate": 1, "token_bytes": token_bytes},
            {"id": "c2", "producer": "B", "consumer": "C", "prod_rate": 1, "cons_rate": 1, "token_bytes": token_bytes},
        ],
        "sink": "C",
    }


KERNEL_PROFILE = {
    "base_throughput": 250,
    "resource_fixed": {"lut": 10000},
    "resource_per_replica": {"lut": 15000},
    "r_max": 4,
}


def kernel_dict(pcie="unbounded"):
    """Single free kernel B between unbounded pinned_sw endpoints A and C."""
    data = chain_dict(sw=("unbounded", 100, "unbounded"), pcie=pcie, token_bytes=1000,
                      b_profile=dict(KERNEL_PROFILE), pinned_ends=True)
    return data


def to_problem(data):
    return parse_problem(json.dumps(data))


@pytest.fixture
def chain_problem():
    """All-SW chain with B as the 100 firings/s bottleneck."""
    return to_problem(chain_dict())


@pytest.fixture
def kernel_problem():
    """Single-kernel instance: B free with r_max 4, unbounded PCIe."""
    return to_problem(kernel_dict())


@pytest.fixture
def kernel_problem_pcie():
    """Single-kernel instance with a 200000 B/s PCIe link."""
    return to_problem(kernel_dict(pcie=200000))


@dataclass
class CliResult:
    exit_code: int
    stdout: str
    stderr: str


@pytest.fixture
def runner(capsys):
    """Run the CLI in-process with the testing configuration."""

    def invoke(*args):
        capsys.readouterr()
        code = run([str(a) for a in args], config_name="testing")
        captured = capsys.readouterr()
        return CliResult(code, captured.out, captured.err)

    return invoke


@pytest.fixture
def write_json(tmp_path):
    """Write a JSON document into the test directory and return its path."""

    def write(name, data):
        path = tmp_path / name
        path.write_text(json.dumps(data, indent=2), encoding="utf-8")
        return path

    return write
