"""Export of the partitioning problem as a mixed-integer linear program (LP text format).

Counting formula (see docs/FORMATS.md), with O_p the options of process p,
S the processes with a SW option and finite sw_throughput, and for channel
c = (u -> v) the AND indicators A_c = [SW in O_u and HW in O_v] +
[HW in O_u and SW in O_v]:

    variables = 1 + Σ_p |O_p| + |S| + (pcie finite) · Σ_c (A_c + [A_c > 0])
    rows      = P
              + Σ_p [SW in O_p and sw finite] + Σ_p |HW options of p|
              + Σ_c finite cap: (|O_u| + |O_v| if scaling applies else 1)
              + #resource kinds with a nonzero coefficient
              + |S| + [|S| > 0]
              + (pcie finite) · (Σ_c 4·A_c + [Σ_c A_c > 0])
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Set, Tuple

from streampart.exceptions import ProblemFormatError, UnboundedThroughput
from streampart.models import ProblemSpec
from streampart.services.throughput import ThroughputModel

logger = logging.getLogger(__name__)

LP_FORMAT_VERSION = "1"
SECTIONS = ("MAXIMIZE", "SUBJECT TO", "BOUNDS", "BINARIES", "END")
_TERMS_PER_LINE = 6


def _fmt(value) -> str:
    return format(float(value), ".17g")


def _expression(terms: List[Tuple[object, str]]) -> str:
    """Render (coefficient, variable) pairs, wrapping long sums over several lines."""
    parts = []
    for n, (coef, name) in enumerate(terms):
        coef = float(coef)
        sign = "-" if coef < 0 else "+"
        magnitude = abs(coef)
        term = name if magnitude == 1 else f"{_fmt(magnitude)} {name}"
        if n == 0:
            parts.append(f"- {term}" if sign == "-" else term)
        else:
            if n % _TERMS_PER_LINE == 0:
                parts.append("\n   ")
            parts.append(f" {sign} {term}")
    return "".join(parts)


class _LpWriter:
    def __init__(self):
        self.rows: List[str] = []
        self.binaries: List[str] = []

    def row(self, name: str, terms: List[Tuple[object, str]], relation: str, rhs) -> None:
        terms = [(coef, var) for coef, var in terms if float(coef) != 0.0]
        self.rows.append(f" {name}: {_expression(terms)} {relation} {_fmt(rhs)}")


def _sw_var(i: int) -> str:
    return f"y_{i}_sw"


def _hw_var(i: int, r: int) -> str:
    return f"y_{i}_r{r}"


def _option_var(i: int, option: int) -> str:
    return _sw_var(i) if option == 0 else _hw_var(i, option)


def _scaling_applies(model: ThroughputModel, channel) -> bool:
    return channel.scales and model.max_replication(channel.u) > 0 and model.max_replication(channel.v) > 0


def _and_indicators(model: ThroughputModel, channel) -> List[str]:
    """Which crossing directions a channel can take: "a" = SW->HW, "b" = HW->SW."""
    has_sw = lambda i: 0 in model.options[i]  # noqa: E731
    has_hw = lambda i: model.max_replication(i) > 0  # noqa: E731
    kinds = []
    if has_sw(channel.u) and has_hw(channel.v):
        kinds.append("a")
    if has_hw(channel.u) and has_sw(channel.v):
        kinds.append("b")
    return kinds


def export_milp(problem: ProblemSpec) -> str:
    """Emit a maximize-λ MILP equivalent to the evaluator's constraint families."""
    model = ThroughputModel(problem, exact=True)
    big_lambda = model.bound([None] * len(model.ids))
    if big_lambda is None:
        raise UnboundedThroughput()
    writer = _LpWriter()

    def big_m(cap):
        return max(0, big_lambda - cap)

    # One option per process.
    for i in range(len(model.ids)):
        writer.row(f"assign_{i}", [(1, _option_var(i, o)) for o in model.options[i]], "=", 1)
        writer.binaries.extend(_option_var(i, o) for o in model.options[i])

    # Per-process rate caps.
    for i in range(len(model.ids)):
        for option in model.options[i]:
            cap = model.process_cap(i, option)
            if cap is None:
                continue
            m = big_m(cap)
            name = f"swcap_{i}" if option == 0 else f"hwcap_{i}_r{option}"
            writer.row(name, [(1, "lambda"), (m, _option_var(i, option))], "<=", cap + m)

    # Per-channel bandwidth caps, scaled by min(R_u, R_v) between HW endpoints.
    for j, channel in enumerate(model.channels):
        if channel.bandwidth is None:
            continue
        if not _scaling_applies(model, channel):
            writer.row(f"chan_{j}", [(1, "lambda")], "<=", channel.bandwidth / channel.demand)
            continue
        for end, i in (("u", channel.u), ("v", channel.v)):
            for option in model.options[i]:
                cap = channel.bandwidth * max(option, 1) / channel.demand
                m = big_m(cap)
                writer.row(f"chan_{j}_{end}{option}", [(1, "lambda"), (m, _option_var(i, option))], "<=", cap + m)

    # FPGA knapsack per resource kind.
    for k, kind in enumerate(model.kinds):
        terms = []
        for i in range(len(model.ids)):
            for option in model.options[i]:
                if option:
                    terms.append((model.resources[i][option][k], _option_var(i, option)))
        if any(coef for coef, _ in terms):
            writer.row(f"fpga_{k}", terms, "<=", model.capacity[k])

    # CPU aggregate through per-process load variables.
    loads = []
    for i in range(len(model.ids)):
        if 0 not in model.options[i] or model.sw_cap[i] is None:
            continue
        demand = model.sw_demand[i]
        m = demand * big_lambda
        writer.row(f"cpuload_{i}", [(1, f"u_{i}"), (-demand, "lambda"), (-m, _sw_var(i))], ">=", -m)
        loads.append(f"u_{i}")
    if loads:
        writer.row("cpu", [(1, u) for u in loads], "<=", model.cores)

    # PCIe aggregate through per-channel crossing loads.
    crossing = []
    if model.pcie is not None:
        for j, channel in enumerate(model.channels):
            kinds = _and_indicators(model, channel)
            if not kinds:
                continue
            m = channel.demand * big_lambda
            for kind in kinds:
                # a: u SW and v HW; b: u HW and v SW.
                sw_end, hw_end = (channel.u, channel.v) if kind == "a" else (channel.v, channel.u)
                var = f"{kind}_{j}"
                hw_has_sw = 0 in model.options[hw_end]
                writer.row(f"and_{kind}{j}_sw", [(1, var), (-1, _sw_var(sw_end))], "<=", 0)
                if hw_has_sw:
                    writer.row(f"and_{kind}{j}_hw", [(1, var), (1, _sw_var(hw_end))], "<=", 1)
                    writer.row(f"and_{kind}{j}_lo", [(1, var), (-1, _sw_var(sw_end)), (1, _sw_var(hw_end))], ">=", 0)
                else:
                    writer.row(f"and_{kind}{j}_hw", [(1, var)], "<=", 1)
                    writer.row(f"and_{kind}{j}_lo", [(1, var), (-1, _sw_var(sw_end))], ">=", 0)
                writer.row(f"pcieload_{kind}{j}", [(1, f"w_{j}"), (-channel.demand, "lambda"), (-m, var)], ">=", -m)
                writer.binaries.append(var)
            crossing.append(f"w_{j}")
        if crossing:
            writer.row("pcie", [(1, w) for w in crossing], "<=", model.pcie)

    lines = [
        f"\\ streampart MILP export, format {LP_FORMAT_VERSION}",
        "\\ maximize the iteration rate lambda; y_<p>_sw selects SW, y_<p>_r<R> selects HW(R)",
        f"\\ big-M per rate row: max(0, L - cap) with L = {_fmt(big_lambda)}, the bound on the empty partial assignment",
        "\\ u_<p>: CPU load of SW process p; a_<c>/b_<c>: channel c crosses SW->HW / HW->SW; w_<c>: its PCIe load",
    ]
    lines.extend(f"\\ process {i} = {pid}" for i, pid in enumerate(model.ids))
    lines.extend(f"\\ channel {j} = {channel.id}" for j, channel in enumerate(model.channels))
    lines.extend(["MAXIMIZE", " obj: lambda", "SUBJECT TO"])
    lines.extend(writer.rows)
    lines.extend(["BOUNDS", f" 0 <= lambda <= {_fmt(big_lambda)}", "BINARIES"])
    for n in range(0, len(writer.binaries), _TERMS_PER_LINE * 2):
        lines.append(" " + " ".join(writer.binaries[n:n + _TERMS_PER_LINE * 2]))
    lines.append("END")
    logger.info("exported MILP with %d rows and %d binaries", len(writer.rows), len(writer.binaries))
    return "\n".join(lines) + "\n"


def lp_counts(problem: ProblemSpec) -> Tuple[int, int]:
    """(variables, rows) of export_milp(problem), by the documented formula."""
    model = ThroughputModel(problem)
    variables = 1 + sum(len(options) for options in model.options)
    loads = sum(1 for i in range(len(model.ids)) if 0 in model.options[i] and model.sw_cap[i] is not None)
    variables += loads

    rows = len(model.ids)
    for i in range(len(model.ids)):
        rows += sum(1 for o in model.options[i] if model.process_cap(i, o) is not None)
    for channel in model.channels:
        if channel.bandwidth is not None:
            if _scaling_applies(model, channel):
                rows += len(model.options[channel.u]) + len(model.options[channel.v])
            else:
                rows += 1
    for k in range(len(model.kinds)):
        if any(model.resources[i][o][k] for i in range(len(model.ids)) for o in model.options[i] if o):
            rows += 1
    rows += loads + (1 if loads else 0)
    if model.pcie is not None:
        indicators = [len(_and_indicators(model, channel)) for channel in model.channels]
        variables += sum(n + (1 if n else 0) for n in indicators)
        rows += 4 * sum(indicators) + (1 if any(indicators) else 0)
    return variables, rows


@dataclass(frozen=True)
class LpSummary:
    """Structure of a parsed LP model."""
    objective: str
    variables: Set[str]
    rows: Dict[str, str]
    binaries: Set[str]

    @property
    def variable_count(self) -> int:
        return len(self.variables)

    @property
    def row_count(self) -> int:
        return len(self.rows)


def _is_number(token: str) -> bool:
    try:
        float(token)
    except ValueError:
        return False
    return True


def _parse_terms(text: str, where: str) -> List[str]:
    """Variables of a linear expression; raises on malformed terms."""
    names = []
    expect_term = True
    pending_coef = False
    for token in text.split():
        if token in ("+", "-"):
            if pending_coef:
                raise ProblemFormatError(f"{where}: dangling coefficient before '{token}'")
            expect_term = True
            continue
        if _is_number(token):
            if pending_coef:
                raise ProblemFormatError(f"{where}: two coefficients in a row")
            pending_coef = True
            continue
        if not expect_term and not pending_coef:
            raise ProblemFormatError(f"{where}: missing operator before '{token}'")
        if not (token[0].isalpha() or token[0] == "_"):
            raise ProblemFormatError(f"{where}: invalid variable name '{token}'")
        names.append(token)
        expect_term = False
        pending_coef = False
    if pending_coef:
        raise ProblemFormatError(f"{where}: coefficient without variable")
    return names


def check_lp(text: str) -> LpSummary:
    """Structurally re-parse an exported model and return its variables and rows."""
    sections: Dict[str, List[str]] = {}
    current = None
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        keyword = line.strip().upper()
        if keyword in SECTIONS:
            if keyword in sections:
                raise ProblemFormatError(f"section {keyword} appears twice")
            current = keyword
            sections[current] = []
            continue
        if current is None:
            raise ProblemFormatError(f"content before the objective section: {line.strip()!r}")
        sections[current].append(line)
    for keyword in ("MAXIMIZE", "SUBJECT TO", "END"):
        if keyword not in sections:
            raise ProblemFormatError(f"missing section {keyword}")
    if sections["END"]:
        raise ProblemFormatError("content after END")

    objective = " ".join(sections["MAXIMIZE"]).strip()
    if not objective.startswith("obj:"):
        raise ProblemFormatError("objective must be named 'obj'")
    variables = set(_parse_terms(objective[4:], "objective"))

    statements: List[str] = []
    for line in sections["SUBJECT TO"]:
        if line.startswith(" ") and not line.startswith("  ") and ":" in line:
            statements.append(line.strip())
        elif statements:
            statements[-1] += " " + line.strip()
        else:
            raise ProblemFormatError(f"constraint without a name: {line.strip()!r}")
    rows: Dict[str, str] = {}
    for statement in statements:
        name, body = statement.split(":", 1)
        name = name.strip()
        if name in rows:
            raise ProblemFormatError(f"duplicate row name '{name}'")
        relations = [op for op in ("<=", ">=", "=") if f" {op} " in f" {body} "]
        if len(relations) != 1:
            raise ProblemFormatError(f"row '{name}' must have exactly one relation")
        lhs, rhs = body.split(f" {relations[0]} ", 1)
        if not _is_number(rhs.strip()):
            raise ProblemFormatError(f"row '{name}' has a non-numeric right-hand side")
        variables.update(_parse_terms(lhs, f"row '{name}'"))
        rows[name] = body.strip()

    for line in sections.get("BOUNDS", []):
        tokens = line.split()
        names = [t for t in tokens if t not in ("<=", ">=", "=") and not _is_number(t)]
        if len(names) != 1:
            raise ProblemFormatError(f"malformed bound: {line.strip()!r}")
        if names[0] not in variables:
            raise ProblemFormatError(f"bound on unused variable '{names[0]}'")

    binaries = set()
    for line in sections.get("BINARIES", []):
        for name in line.split():
            if name not in variables:
                raise ProblemFormatError(f"binary '{name}' appears in no row")
            binaries.add(name)
    return LpSummary(objective=objective, variables=variables, rows=rows, binaries=binaries)
