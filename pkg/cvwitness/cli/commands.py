"""
Subcommand implementations.

Each ``cmd_*`` takes a resolved :class:`ExperimentConfig` and a text stream, writes CSV
to the stream and returns its result. Exit codes are decided by the caller.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import NamedTuple, TextIO

from cvwitness.base import ConfigError, HeraldingError
from cvwitness.cli.config import ExperimentConfig
from cvwitness.fock_oracle import (
    ORACLE_STATES,
    build_fock,
    fock_cumulant_set,
    uncertainty_residual,
)
from cvwitness.logger import WitnessLogger
from cvwitness.phase_space import (
    GaussianSumState,
    center_state,
    load_state,
    reduce_to_standard_form,
    save_state,
)
from cvwitness.sampling import (
    EstimatedCumulantSet,
    Layout,
    estimate_cumulant_set,
    read_samples,
    sample_all,
    write_samples,
)
from cvwitness.states import STATE_PARAMETERS, build_state, parse_descriptor, state_family
from cvwitness.witness import (
    CumulantSet,
    EprOperatorPair,
    WitnessReport,
    compute_cumulant_set,
    evaluate_state,
    find_threshold,
)

logger = WitnessLogger.get_logger("cli")

SWEEP_COLUMNS = ("parameter", "lhs4", "rhs4", "margin4", "lhsDuan", "rhsDuan", "marginDuan")

# Documented one-line invocations, one group per result set.
RECIPES: dict[str, list[str]] = {
    "fock-fidelity": [
        "cvwitness sweep --state split-fock:n=1,fid=0.999 --var eta --grid 0:1:0.01",
        "cvwitness sweep --state split-fock:n=1,fid=0.9999999999 --var eta --grid 0:1:0.01",
    ],
    "phssv-loss": [
        "cvwitness sweep --state split-phssv:r=1e-3 --var eta --grid 0:1:0.01",
        "cvwitness sweep --state split-phssv:r=1 --var eta --grid 0:1:0.01",
    ],
    "phssv-squeezing": [
        "cvwitness sweep --state split-phssv:eta=1 --var r --grid 0:1:0.01",
        "cvwitness threshold --state split-phssv:eta=1 --var r --bracket 0.005,0.3",
        "cvwitness threshold --state split-phssv:eta=1 --var r --bracket 0.3,1 --criterion Duan",
    ],
    "gaussian-references": [
        "cvwitness sweep --state tmsv --var r --grid 0:1.5:0.05",
        "cvwitness sweep --state split-sqv --var r --grid 0:1.5:0.05",
    ],
    "sampling": [
        "cvwitness sample --state split-phssv:r=1,eta=1 --samples 1000000 --seed 7 --prefix run",
        "cvwitness estimate --prefix run",
    ],
}


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _write_csv(out: TextIO, header: tuple[str, ...] | list[str], rows) -> None:
    out.write(",".join(header) + "\n")
    for row in rows:
        out.write(",".join(v if isinstance(v, str) else _fmt(v) for v in row) + "\n")


def _metadata_line(config: ExperimentConfig) -> str:
    return "# config=" + json.dumps(config.to_json_dict(), sort_keys=True)


def resolve_state(config: ExperimentConfig) -> tuple[GaussianSumState, str]:
    """
    Build the configured state, or load it from ``--load-state``.

    Loaded states are centered and rotated into standard form before use. With
    ``--save-state`` the state is written out after construction.

    Returns:
        (state, descriptor text used in output metadata)
    """
    if config.load_state:
        state = load_state(config.load_state)
        state = reduce_to_standard_form(center_state(state))
        label = f"file:{Path(config.load_state).name}"
        logger.info(f"Loaded {state.n_modes}-mode state with {len(state)} components from {config.load_state}")
    else:
        descriptor = parse_descriptor(config.state)
        state = build_state(descriptor)
        label = str(descriptor)
    if config.save_state:
        save_state(state, config.save_state)
        logger.info(f"Saved state to {config.save_state}")
    return state, label


def cmd_witness(config: ExperimentConfig, out: TextIO) -> tuple[WitnessReport, WitnessReport]:
    """Evaluate both criteria for one state and print a CSV row per criterion."""
    state, label = resolve_state(config)
    _, fourth, duan = evaluate_state(state, config.pair)
    _write_csv(
        out,
        ("state", "criterion", "lhs", "rhs", "margin", "verdict"),
        [(label, r.criterion.value, r.lhs, r.rhs, r.margin, r.verdict) for r in (fourth, duan)],
    )
    for report in (fourth, duan):
        logger.info(
            f"{report.criterion.value}: LHS={report.lhs:.6g} RHS={report.rhs:.6g} "
            f"margin={report.margin:.6g} ({report.verdict})"
        )
    return fourth, duan


class SweepRow(NamedTuple):
    parameter: float
    lhs4: float
    rhs4: float
    margin4: float
    lhs_duan: float
    rhs_duan: float
    margin_duan: float


def sweep_point(task: tuple[str, str, float, EprOperatorPair]) -> SweepRow:
    """
    Evaluate one grid point. Module-level so process pools can pickle it.

    Points where the heralding probability vanishes (e.g. PhSSV at r = 0) give a NaN row.
    """
    descriptor, variable, value, pair = task
    try:
        state = state_family(descriptor, variable)(value)
    except HeraldingError as e:
        logger.warning(f"{variable}={value:g}: {e}; writing NaN row")
        return SweepRow(value, *(math.nan,) * 6)
    _, fourth, duan = evaluate_state(state, pair)
    return SweepRow(value, fourth.lhs, fourth.rhs, fourth.margin, duan.lhs, duan.rhs, duan.margin)


def _require_variable(config: ExperimentConfig) -> str:
    if not config.variable:
        raise ConfigError("This command needs --var")
    name = parse_descriptor(config.state).name
    if config.variable not in STATE_PARAMETERS[name]:
        raise ConfigError(f"State '{name}' has no parameter '{config.variable}' to sweep")
    return config.variable


def cmd_sweep(config: ExperimentConfig, out: TextIO) -> list[SweepRow]:
    """
    Evaluate both criteria along a one-parameter grid.

    Grid points run in a process pool when ``workers > 1``; rows keep grid order.
    """
    variable = _require_variable(config)
    tasks = [(config.state, variable, value, config.pair) for value in config.grid]
    logger.info(f"Sweeping {config.state} over {variable} at {len(tasks)} points")
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(sweep_point, tasks))
    else:
        rows = [sweep_point(task) for task in tasks]

    out.write(_metadata_line(config) + "\n")
    _write_csv(out, SWEEP_COLUMNS, rows)
    return rows


def cmd_threshold(config: ExperimentConfig, out: TextIO) -> float:
    """
    Bisect for the parameter where the chosen criterion's margin changes sign.

    Raises:
        NoCrossingError: If the margin keeps its sign on the bracket
    """
    variable = _require_variable(config)
    family = state_family(config.state, variable)
    crossing = find_threshold(family, config.pair, config.bracket, config.tol, config.criterion)
    lo, hi = config.bracket
    _write_csv(
        out,
        ("state", "variable", "criterion", "lo", "hi", "tol", "crossing"),
        [(config.state, variable, config.criterion.value, lo, hi, config.tol, crossing)],
    )
    return crossing


def sample_paths(prefix: str) -> dict[Layout, Path]:
    return {layout: Path(f"{prefix}_{layout.value}.csv") for layout in Layout}


def cmd_sample(config: ExperimentConfig, out: TextIO) -> dict[Layout, Path]:
    """Draw the four sample sets and write one CSV file per layout."""
    state, label = resolve_state(config)
    logger.info(f"Sampling {label}: S={config.samples} per layout, seed={config.seed}")
    sets = sample_all(
        state,
        config.samples,
        config.seed,
        descriptor=label,
        chunk_size=config.chunk_size or None,
        workers=config.workers,
    )
    paths = sample_paths(config.sample_prefix)
    rows = []
    for samples in sets:
        path = paths[samples.layout]
        write_samples(samples, path)
        rows.append((samples.layout.value, str(path), str(samples.size), str(samples.seed)))
    _write_csv(out, ("layout", "path", "S", "seed"), rows)
    return paths


def cmd_estimate(config: ExperimentConfig, out: TextIO) -> EstimatedCumulantSet:
    """
    Read the four sample files, estimate the cumulants and report both criteria.

    Raises:
        SampleFileError: For malformed files
    """
    paths = sample_paths(config.sample_prefix)
    sets = [read_samples(paths[layout]) for layout in Layout]
    states = {s.state_descriptor for s in sets}
    if len(states) > 1:
        logger.warning(f"Sample files come from different states: {sorted(states)}")

    estimated = estimate_cumulant_set(*sets, pair=config.pair)
    rows: list[tuple] = [
        (name, value, estimated.errors[name]) for name, value in estimated.cumulants.values().items()
    ]
    reports = [estimated.fourth_order()]
    if config.pair.matches(EprOperatorPair.duan(config.pair.g1)):
        reports.append(estimated.duan())
    for report in reports:
        error = estimated.margin_errors[report.criterion.value]
        rows.append((f"margin{report.criterion.value}", report.margin, error))
        logger.info(
            f"{report.criterion.value}: margin={report.margin:.6g} ± {error:.2g} ({report.verdict})"
        )
    _write_csv(out, ("field", "estimate", "stderr"), rows)
    return estimated


def cmd_recipes(out: TextIO) -> None:
    """List the recipe invocations."""
    for name, lines in RECIPES.items():
        out.write(f"# {name}\n")
        for line in lines:
            out.write(line + "\n")


def cmd_oracle(config: ExperimentConfig, out: TextIO) -> CumulantSet | None:
    """
    Build the state in truncated Fock space and compare against the phase-space engine.

    Single-mode oracle states only report their mean photon number and the fourth-moment
    uncertainty residual.
    """
    descriptor = parse_descriptor(config.state, ORACLE_STATES)
    fock = build_fock(descriptor, config.cutoff)
    logger.info(f"Oracle state {descriptor}: cutoff {config.cutoff}, leakage {fock.leakage:.3e}")
    if fock.n_modes == 1:
        _write_csv(
            out,
            ("quantity", "value"),
            [
                ("mean_photon_number", fock.mean_photon_number(0)),
                ("uncertainty_residual", uncertainty_residual(fock, 0)),
                ("leakage", fock.leakage),
            ],
        )
        return None

    oracle = fock_cumulant_set(fock, config.pair)
    engine = None
    if descriptor.name in STATE_PARAMETERS:
        try:
            engine = compute_cumulant_set(build_state(descriptor), config.pair).values()
        except ConfigError as e:
            # Exact number states have no ring counterpart.
            logger.info(f"No phase-space reference for {descriptor}: {e}")
    rows = []
    for name, value in oracle.values().items():
        reference = engine[name] if engine else math.nan
        rows.append((name, value, reference, value - reference))
    rows.append(("leakage", fock.leakage, math.nan, math.nan))
    _write_csv(out, ("field", "fock", "phase_space", "difference"), rows)
    return oracle


__all__ = [
    "RECIPES",
    "SWEEP_COLUMNS",
    "SweepRow",
    "cmd_estimate",
    "cmd_oracle",
    "cmd_recipes",
    "cmd_sample",
    "cmd_sweep",
    "cmd_threshold",
    "cmd_witness",
    "resolve_state",
    "sample_paths",
    "sweep_point",
]
