"""
Scenario execution.

Each entry point builds operators and a dephasing source once, maps every
fidelity amplitude through the correlation measures and returns a
:class:`RunOutput`. Output is a pure function of (scenario, seed, version).
"""

import math
import time
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from qktdiscord import __version__
from qktdiscord.channels import (
    CCDynamicsClass,
    DephasingSource,
    MarkovianSource,
    QKTSource,
    classify_cc_dynamics,
    create_source,
    fluctuation_amplitude,
    sudden_change_time,
)
from qktdiscord.config import get_config, get_section
from qktdiscord.core.correlations import (
    correlation_record,
    discord_alpha_diagnostic,
    discord_numeric,
    discord_zero_candidates,
    quantum_discord,
    xstate,
)
from qktdiscord.core.errors import ConfigError, NumericalInvariantError
from qktdiscord.core.kicked_top import (
    DEFAULT_FIT_FLOOR,
    Branch,
    DecayFit,
    FidelitySeries,
    build_floquet,
    default_fit_window,
    detect_revivals,
    fit_decay,
    unitarity_residual,
)
from qktdiscord.core.result import CSV_COLUMNS, RunOutput, finite_or_none
from qktdiscord.core.scenario import PRESET_NOTES, PRESETS, ScenarioConfig, SourceKind
from qktdiscord.core.spin_algebra import (
    QL_ITERATION_FACTOR,
    SpinOperatorSet,
    cached_spin_operators,
    expectation,
    operator_residuals,
    spin_coherent_state,
)
from qktdiscord.utils.logging import get_logger

logger = get_logger("runner")

UNITARITY_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-8
OPERATOR_TOLERANCE = 1e-8
CC_IDENTITY_TOLERANCE = 1e-9
ALPHA_SWEEP_POINTS = 33


def resolve_seed(cfg: ScenarioConfig) -> int:
    """Scenario seed, falling back to the ``runner.seed`` setting."""
    return cfg.seed if cfg.seed is not None else int(get_config("runner", "seed", 0))


def final_window(n_kicks: int, fraction: Optional[float] = None) -> Tuple[int, int]:
    """Inclusive window covering the last ``fraction`` of the run."""
    if fraction is None:
        fraction = float(get_config("runner", "final_window_fraction", 1.0 / 3.0))
    if not (0.0 < fraction <= 1.0):
        raise ValueError(f"final window fraction must lie in (0, 1], got {fraction}")
    return n_kicks - int(math.floor(fraction * n_kicks)), n_kicks


def check_operators(ops: SpinOperatorSet, tolerance: float = OPERATOR_TOLERANCE) -> None:
    """
    Verify commutators, Casimir and J_x eigenvector orthogonality.

    Raises:
        NumericalInvariantError: On the first residual above tolerance
    """
    for name, residual in operator_residuals(ops).items():
        if residual > tolerance:
            raise NumericalInvariantError(name, residual, tolerance)


def check_unitarity(cfg: ScenarioConfig, ops: SpinOperatorSet) -> float:
    """
    Largest ||U^dagger U - I||_max over the two coupled branches.

    Raises:
        NumericalInvariantError: If it exceeds the unitarity tolerance
    """
    params = cfg.kicked_top_params()
    worst = max(
        unitarity_residual(build_floquet(params, ops, branch))
        for branch in (Branch.PLUS, Branch.MINUS)
    )
    if worst > UNITARITY_TOLERANCE:
        raise NumericalInvariantError("unitarity", worst, UNITARITY_TOLERANCE)
    return worst


def build_qkt_source(cfg: ScenarioConfig) -> Tuple[QKTSource, Dict[str, Any]]:
    """
    Evolve the kicked top for a scenario with all numerical checks applied.

    Returns:
        Tuple of (source, metadata about the initial state and checks)
    """
    factor = int(get_config("numerics", "eigensolver_iteration_factor", QL_ITERATION_FACTOR))
    ops = cached_spin_operators(cfg.spin(), factor)
    check_operators(ops)
    residual = check_unitarity(cfg, ops)

    seed = resolve_seed(cfg)
    angles = cfg.initial_angles(default_seed=seed)
    psi0 = spin_coherent_state(ops, angles)
    bloch = [value / ops.params.j for value in expectation(ops, psi0)]

    source = QKTSource.from_parameters(cfg.kicked_top_params(), angles, cfg.n_kicks, ops=ops)
    drift = source.recorded_series.norm_drift
    if drift > NORM_TOLERANCE:
        raise NumericalInvariantError("norm", drift, NORM_TOLERANCE)

    info = {
        "regime": cfg.kicked_top_params().regime.value,
        "initial_angles": {"theta": angles.theta, "phi": angles.phi, "explicit": cfg.explicit_angles},
        "initial_bloch": bloch,
        "unitarity_residual": residual,
        "norm_drift": drift,
    }
    return source, info


def build_source(cfg: ScenarioConfig) -> Tuple[DephasingSource, Dict[str, Any]]:
    """The dephasing source a scenario asks for, plus source metadata."""
    if cfg.source is SourceKind.QKT:
        return build_qkt_source(cfg)
    source = create_source(SourceKind.MARKOVIAN.value, {"gamma": cfg.gamma})
    return source, {"gamma": cfg.gamma}


def _base_metadata(cfg: ScenarioConfig, kind: str) -> Dict[str, Any]:
    metadata = {
        "kind": kind,
        "version": __version__,
        "scenario": cfg.echo(),
        "seed": resolve_seed(cfg),
        "cc_class": classify_cc_dynamics(cfg.correlations()).value,
    }
    if cfg.name in PRESETS:
        metadata["notes"] = PRESET_NOTES
    return metadata


def _revival_report(series: FidelitySeries) -> Optional[Dict[str, Any]]:
    if len(series) < 3:
        return None
    numerics = get_section("numerics")
    report = detect_revivals(
        series,
        threshold=numerics.get("revival_threshold", 0.5),
        neighborhood=numerics.get("revival_neighborhood", 5),
    )
    return report.to_dict()


def _fit_series(series: FidelitySeries, model: str = "auto") -> Optional[DecayFit]:
    if series.n_max < 2 or series.epsilon == 0.0:
        return None
    try:
        floor = float(get_config("numerics", "fit_floor", DEFAULT_FIT_FLOOR))
        return fit_decay(series, window=default_fit_window(series, floor), model=model)
    except ValueError as e:
        logger.warning(f"Decay fit skipped: {e}")
        return None


def _decay_fit(series: FidelitySeries, model: str = "auto") -> Optional[Dict[str, Any]]:
    fit = _fit_series(series, model)
    return fit.to_dict() if fit is not None else None


def _sudden_change(cfg: ScenarioConfig, source: DephasingSource) -> Optional[Dict[str, Any]]:
    c = cfg.correlations()
    if classify_cc_dynamics(c) is not CCDynamicsClass.SUDDEN_CHANGE:
        return None
    return sudden_change_time(c, source, cfg.n_kicks).to_dict()


def _record_rows(cfg: ScenarioConfig, amplitudes: np.ndarray) -> List[Dict[str, Any]]:
    c = cfg.correlations()
    rows = []
    worst_identity = 0.0
    negative = 0
    for n, f in enumerate(amplitudes):
        record = correlation_record(c, f)
        worst_identity = max(worst_identity, abs(record.CC - (record.MI - record.Q)))
        if record.Q < -CC_IDENTITY_TOLERANCE:
            negative += 1
        row = {"n": n}
        row.update(record.to_dict())
        rows.append(row)
    if worst_identity > CC_IDENTITY_TOLERANCE:
        raise NumericalInvariantError("cc_identity", worst_identity, CC_IDENTITY_TOLERANCE)
    if negative:
        logger.warning(f"Closed-form discord is negative on {negative} of {len(rows)} kicks")
    return rows


def _selected_columns(cfg: ScenarioConfig) -> List[str]:
    wanted = set(cfg.outputs)
    if "lambdas" in wanted:
        wanted.update({"l1", "l2", "l3", "l4"})
    return [name for name in CSV_COLUMNS if name == "n" or name in wanted]


def _oracle_discrepancy(cfg: ScenarioConfig, amplitudes: np.ndarray) -> float:
    numerics = get_section("numerics")
    stride = max(1, int(get_config("runner", "oracle_stride", 50)))
    c = cfg.correlations()
    worst = 0.0
    for f in amplitudes[::stride]:
        F = min(abs(f) ** 2, 1.0)
        closed = quantum_discord(c, F, math.atan2(f.imag, f.real))
        numeric = discord_numeric(
            xstate(c, f),
            numerics.get("discord_coarse_grid", 64),
            numerics.get("discord_refine_iters", 40),
        ).quantum_discord
        worst = max(worst, abs(closed - numeric))
    return worst


def run_scenario(cfg: ScenarioConfig) -> RunOutput:
    """
    Full correlation dynamics: one row per kick, n = 0..n_kicks.

    Raises:
        NumericalInvariantError: Operator, unitarity, norm or CC-identity breach
    """
    start = time.time()
    logger.info(f"Running scenario {cfg.name or '(unnamed)'}: {cfg.n_kicks} kicks, source {cfg.source.value}")

    source, info = build_source(cfg)
    amplitudes = source.amplitudes(cfg.n_kicks)
    rows = _record_rows(cfg, amplitudes)

    series = FidelitySeries(f=amplitudes, epsilon=source.epsilon)
    window = final_window(cfg.n_kicks)
    metadata = _base_metadata(cfg, "dynamics")
    metadata.update(info)
    metadata["final_window"] = list(window)
    metadata["mean_final_F"] = float(np.mean(series.fidelity[window[0] : window[1] + 1]))
    metadata["revivals"] = _revival_report(series)
    metadata["sudden_change"] = _sudden_change(cfg, source)
    metadata["discord_zero_candidates"] = discord_zero_candidates([row["Q"] for row in rows])
    if cfg.oracle:
        metadata["max_oracle_discrepancy"] = _oracle_discrepancy(cfg, amplitudes)

    columns = _selected_columns(cfg)
    output = RunOutput(
        columns=columns,
        rows=[{name: row[name] for name in columns} for row in rows],
        metadata=metadata,
    )
    logger.info(f"Scenario finished in {time.time() - start:.2f} s")
    return output


def fidelity_only(cfg: ScenarioConfig) -> RunOutput:
    """
    Fidelity series without correlation measures, with revival and decay-fit reports.

    Columns: n, F, alpha, alpha_unwrapped, phase_factor.
    """
    source, info = build_source(cfg)
    series = source.series(cfg.n_kicks)

    metadata = _base_metadata(cfg, "fd")
    metadata.update(info)
    window = final_window(cfg.n_kicks)
    metadata["final_window"] = list(window)
    metadata["mean_final_F"] = float(np.mean(series.fidelity[window[0] : window[1] + 1]))
    metadata["revivals"] = _revival_report(series)
    metadata["decay_fit"] = _decay_fit(series)
    if metadata["revivals"] is not None and not metadata["revivals"]["revival_times"]:
        logger.warning("No revivals above threshold; revival period unavailable")

    columns = ["n", "F", "alpha", "alpha_unwrapped", "phase_factor"]
    fidelity, alpha = series.fidelity, series.alpha
    unwrapped, factor = series.alpha_unwrapped, series.phase_factor
    rows = [
        {
            "n": n,
            "F": float(fidelity[n]),
            "alpha": float(alpha[n]),
            "alpha_unwrapped": float(unwrapped[n]),
            "phase_factor": float(factor[n]),
        }
        for n in range(len(series))
    ]
    return RunOutput(columns=columns, rows=rows, metadata=metadata)


def channel_compare(cfg: ScenarioConfig) -> RunOutput:
    """
    Kicked-top and Markovian dephasing side by side.

    The Markovian rate is cfg.gamma when set, otherwise half the rate of an
    exponential fit to the kicked-top fidelity decay.
    """
    qkt_cfg = cfg.with_overrides(source=SourceKind.QKT.value)
    qkt, info = build_qkt_source(qkt_cfg)
    series = qkt.recorded_series

    if cfg.gamma is not None:
        markov = MarkovianSource({"gamma": cfg.gamma})
        gamma_origin = "config"
    else:
        fit = _fit_series(series, model="exponential")
        if fit is None:
            raise ConfigError("cannot fit a Markovian rate to this run; set gamma explicitly", key="gamma")
        markov = MarkovianSource.from_decay_fit(fit)
        gamma_origin = "fit"

    metadata = _base_metadata(cfg, "channel-compare")
    metadata.update(info)
    metadata["gamma"] = markov.gamma
    metadata["gamma_origin"] = gamma_origin
    window = final_window(cfg.n_kicks)
    metadata["final_window"] = list(window)
    metadata["fluctuation_qkt"] = fluctuation_amplitude(qkt, window)
    metadata["fluctuation_markovian"] = fluctuation_amplitude(markov, window)
    metadata["sudden_change_qkt"] = _sudden_change(cfg, qkt)
    metadata["sudden_change_markovian"] = _sudden_change(cfg, markov)

    qkt_rows = _record_rows(cfg, qkt.amplitudes(cfg.n_kicks))
    markov_rows = _record_rows(cfg, markov.amplitudes(cfg.n_kicks))
    measures = ("F", "alpha", "Q", "CC", "REE", "concurrence", "MI")
    columns = ["n"] + [f"{m}_qkt" for m in measures] + [f"{m}_markovian" for m in measures]
    rows = []
    for n, (left, right) in enumerate(zip(qkt_rows, markov_rows)):
        row = {"n": n}
        row.update({f"{m}_qkt": left[m] for m in measures})
        row.update({f"{m}_markovian": right[m] for m in measures})
        rows.append(row)
    return RunOutput(columns=columns, rows=rows, metadata=metadata)


def oracle_diagnostic(cfg: ScenarioConfig) -> RunOutput:
    """
    Closed-form against brute-force discord, every ``runner.oracle_stride`` kicks.

    Columns: n, F, alpha, Q_closed, Q_numeric, abs_diff. The metadata also holds
    an alpha sweep at fixed (c, F) with F the median sampled fidelity.
    """
    numerics = get_section("numerics")
    grid = numerics.get("discord_coarse_grid", 64)
    refine = numerics.get("discord_refine_iters", 40)
    stride = max(1, int(get_config("runner", "oracle_stride", 50)))

    source, info = build_source(cfg)
    amplitudes = source.amplitudes(cfg.n_kicks)
    c = cfg.correlations()

    rows = []
    for n in range(0, cfg.n_kicks + 1, stride):
        f = complex(amplitudes[n])
        F = min(abs(f) ** 2, 1.0)
        alpha = math.atan2(f.imag, f.real)
        closed = quantum_discord(c, F, alpha)
        numeric = discord_numeric(xstate(c, f), grid, refine)
        rows.append(
            {
                "n": n,
                "F": F,
                "alpha": alpha,
                "Q_closed": closed,
                "Q_numeric": numeric.quantum_discord,
                "abs_diff": abs(closed - numeric.quantum_discord),
            }
        )

    sweep_F = float(np.median([row["F"] for row in rows]))
    alphas = np.linspace(0.0, math.pi, ALPHA_SWEEP_POINTS)
    diagnostic = discord_alpha_diagnostic(c, sweep_F, alphas, grid, refine)

    metadata = _base_metadata(cfg, "oracle")
    metadata.update(info)
    metadata["oracle_stride"] = stride
    metadata["max_oracle_discrepancy"] = max(row["abs_diff"] for row in rows)
    metadata["alpha_sweep"] = {"F": sweep_F, **diagnostic.to_dict()}
    logger.info(
        f"Oracle: max discrepancy {metadata['max_oracle_discrepancy']:.3e}, "
        f"closed-form alpha variation {diagnostic.closed_form_variation:.3e}"
    )
    return RunOutput(
        columns=["n", "F", "alpha", "Q_closed", "Q_numeric", "abs_diff"],
        rows=rows,
        metadata=metadata,
    )


def summarize(output: RunOutput) -> Dict[str, Any]:
    """Sweep summary fields for one run."""
    metadata = output.metadata
    revivals = metadata.get("revivals") or {}
    change = metadata.get("sudden_change") or {}
    first = change.get("first_crossing")
    return {
        "mean_final_F": finite_or_none(metadata.get("mean_final_F")),
        "revival_period": finite_or_none(revivals.get("estimated_period")),
        "sudden_change_time": first if isinstance(first, (int, float)) else None,
        "max_oracle_discrepancy": finite_or_none(metadata.get("max_oracle_discrepancy")),
        "error": None,
    }
