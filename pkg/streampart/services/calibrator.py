"""Calibration of problem parameters from profiling measurements."""
import dataclasses
import io
import logging
from fractions import Fraction
from typing import Dict, List, Tuple

import pandas as pd

from streampart.exceptions import CalibrationError, ProblemFormatError
from streampart.models import QUANTITIES, MeasurementRecord, ProblemSpec, SubjectKind

logger = logging.getLogger(__name__)

COLUMNS = ["subject_kind", "subject_id", "quantity", "value"]


def _parse_value(raw: str, row: int) -> Fraction:
    try:
        value = Fraction(raw.strip())
    except (ValueError, ZeroDivisionError, AttributeError):
        raise ProblemFormatError(f"row {row}: value {raw!r} is not a number")
    if value < 0:
        raise ProblemFormatError(f"row {row}: value must be non-negative, got {raw}")
    return value


def read_measurements(text: str) -> List[MeasurementRecord]:
    """Parse CSV content with header subject_kind,subject_id,quantity,value."""
    try:
        df = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False, skipinitialspace=True)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ProblemFormatError(f"unreadable measurement CSV: {e}") from e
    if list(df.columns) != COLUMNS:
        raise ProblemFormatError(f"measurement CSV header must be {','.join(COLUMNS)}, got {','.join(df.columns)}")

    records = []
    # Row numbers count the header as row 1.
    for row, (kind, subject_id, quantity, value) in enumerate(df.itertuples(index=False, name=None), start=2):
        if kind not in QUANTITIES:
            raise ProblemFormatError(f"row {row}: unknown subject_kind '{kind}'")
        if quantity not in QUANTITIES[kind]:
            raise ProblemFormatError(
                f"row {row}: quantity '{quantity}' is not one of {', '.join(QUANTITIES[kind])} for a {kind}"
            )
        records.append(MeasurementRecord(kind, subject_id, quantity, _parse_value(value, row)))
    return records


def pooled_rates(records: List[MeasurementRecord]) -> Dict[Tuple[str, str], Tuple[Fraction, int]]:
    """Pooled ratio Σ numerator / Σ divisor per subject, with its row count."""
    if not records:
        return {}
    df = pd.DataFrame([dataclasses.asdict(r) for r in records])
    sums = df.groupby(["subject_kind", "subject_id", "quantity"], sort=True)["value"].agg(
        lambda values: sum(values, Fraction(0))
    )
    rows = df.groupby(["subject_kind", "subject_id"], sort=True).size()

    rates = {}
    for (kind, subject_id), count in rows.items():
        numerator, divisor = QUANTITIES[kind]
        if (kind, subject_id, numerator) not in sums.index or (kind, subject_id, divisor) not in sums.index:
            missing = divisor if (kind, subject_id, numerator) in sums.index else numerator
            raise CalibrationError(f"{kind} '{subject_id}' has no '{missing}' measurement")
        total = sums[(kind, subject_id, divisor)]
        if total == 0:
            raise CalibrationError(f"{kind} '{subject_id}' has zero total {divisor}")
        if sums[(kind, subject_id, numerator)] == 0:
            raise CalibrationError(f"{kind} '{subject_id}' has zero total {numerator}, its rate would be 0")
        rates[(kind, subject_id)] = (sums[(kind, subject_id, numerator)] / total, int(count))
    return rates


def calibrate(text: str, base: ProblemSpec) -> ProblemSpec:
    """Copy of base with measured sw_throughput and bandwidth_cap values.

    Unmeasured processes and channels are left untouched. The provenance
    field records the number of rows behind every calibrated value.
    """
    rates = pooled_rates(read_measurements(text))
    for kind, subject_id in rates:
        known = base.process_map if kind == SubjectKind.PROCESS else base.channel_map
        if subject_id not in known:
            raise CalibrationError(f"measurement names unknown {kind} '{subject_id}'")

    processes = tuple(
        dataclasses.replace(p, sw_throughput=rates[(SubjectKind.PROCESS, p.id)][0])
        if (SubjectKind.PROCESS, p.id) in rates else p
        for p in base.processes
    )
    channels = tuple(
        dataclasses.replace(c, bandwidth_cap=rates[(SubjectKind.CHANNEL, c.id)][0])
        if (SubjectKind.CHANNEL, c.id) in rates else c
        for c in base.channels
    )

    provenance = dict(base.provenance or {})
    calibrated = dict(provenance.get("calibrated", {}))
    for (kind, subject_id), (_, count) in rates.items():
        calibrated[f"{kind}:{subject_id}"] = count
    if calibrated:
        provenance["calibrated"] = calibrated
    for (kind, subject_id), (rate, count) in sorted(rates.items()):
        logger.info("calibrated %s '%s' to %s from %d row(s)", kind, subject_id, rate, count)
    return dataclasses.replace(base, processes=processes, channels=channels, provenance=provenance or None)
