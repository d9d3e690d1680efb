"""Tests for measurement parsing and calibration."""
from fractions import Fraction

import pytest

from streampart.exceptions import CalibrationError, ProblemFormatError
from streampart.services.calibrator import calibrate, pooled_rates, read_measurements

HEADER = "subject_kind,subject_id,quantity,value\n"


def test_process_rate_from_items_per_cpu_second(chain_problem):
    """Test that sw_throughput becomes items / cpu_seconds."""
    csv = HEADER + "process,B,items,500\nprocess,B,cpu_seconds,5\n"
    calibrated = calibrate(csv, chain_problem)
    assert calibrated.process("B").sw_throughput == 100


def test_channel_rate_is_exact(chain_problem):
    """Test that bandwidth_cap becomes bytes / seconds as an exact rational."""
    csv = HEADER + "channel,c1,bytes,20000\nchannel,c1,seconds,150\n"
    calibrated = calibrate(csv, chain_problem)
    assert calibrated.channel("c1").bandwidth_cap == Fraction(400, 3)


def test_rows_are_pooled(chain_problem):
    """Test that repeated rows are summed before dividing."""
    csv = HEADER + "process,A,items,100\nprocess,A,cpu_seconds,1\nprocess,A,items,300\nprocess,A,cpu_seconds,3\n"
    rates = pooled_rates(read_measurements(csv))
    assert rates[("process", "A")] == (Fraction(100), 4)


def test_unknown_subject(chain_problem):
    """Test that a measurement for an unknown process is rejected."""
    csv = HEADER + "process,Z,items,1\nprocess,Z,cpu_seconds,1\n"
    with pytest.raises(CalibrationError, match="'Z'"):
        calibrate(csv, chain_problem)


@pytest.mark.parametrize("rows, quantity", [
    ("process,B,items,0\nprocess,B,cpu_seconds,2\n", "items"),
    ("channel,c1,bytes,0\nchannel,c1,bytes,0\nchannel,c1,seconds,3\n", "bytes"),
])
def test_zero_numerator(chain_problem, rows, quantity):
    """Test that a measurement pooling to a zero rate is rejected."""
    with pytest.raises(CalibrationError, match=f"zero total {quantity}"):
        calibrate(HEADER + rows, chain_problem)


def test_missing_pair(chain_problem):
    """Test that a subject without its divisor is rejected."""
    with pytest.raises(CalibrationError, match="cpu_seconds"):
        calibrate(HEADER + "process,B,items,10\n", chain_problem)


def test_zero_divisor(chain_problem):
    """Test that a zero total divisor is rejected."""
    csv = HEADER + "channel,c2,bytes,10\nchannel,c2,seconds,0\n"
    with pytest.raises(CalibrationError, match="zero total seconds"):
        calibrate(csv, chain_problem)


def test_calibration_is_idempotent(chain_problem):
    """Test that calibrating twice with the same data changes nothing further."""
    csv = HEADER + "process,B,items,500\nprocess,B,cpu_seconds,4\nchannel,c1,bytes,9\nchannel,c1,seconds,2\n"
    once = calibrate(csv, chain_problem)
    assert calibrate(csv, once) == once


def test_unmeasured_fields_are_unchanged(chain_problem):
    """Test that processes and channels without rows keep their values."""
    csv = HEADER + "process,B,items,500\nprocess,B,cpu_seconds,4\n"
    calibrated = calibrate(csv, chain_problem)
    assert calibrated.process("A") == chain_problem.process("A")
    assert calibrated.process("C") == chain_problem.process("C")
    assert calibrated.channels == chain_problem.channels
    assert calibrated.platform == chain_problem.platform


def test_provenance_records_row_counts(chain_problem):
    """Test that provenance names each calibrated subject with its row count."""
    csv = HEADER + "process,B,items,500\nprocess,B,cpu_seconds,4\nchannel,c1,bytes,9\nchannel,c1,seconds,2\n"
    calibrated = calibrate(csv, chain_problem)
    assert calibrated.provenance == {"calibrated": {"process:B": 2, "channel:c1": 2}}


def test_empty_measurements_change_nothing(chain_problem):
    """Test that a header-only file leaves the problem as it was."""
    assert calibrate(HEADER, chain_problem) == chain_problem


@pytest.mark.parametrize("text, message", [
    ("kind,id,quantity,value\nprocess,B,items,1\n", "header"),
    (HEADER + "thread,B,items,1\n", "row 2: unknown subject_kind"),
    (HEADER + "process,B,bytes,1\n", "row 2: quantity 'bytes'"),
    (HEADER + "process,B,items,many\n", "row 2: value 'many' is not a number"),
    (HEADER + "process,B,items,1\nprocess,B,cpu_seconds,-1\n", "row 3: value must be non-negative"),
])
def test_malformed_measurements(text, message):
    """Test that malformed rows are reported with their row number."""
    with pytest.raises(ProblemFormatError, match=message):
        read_measurements(text)
