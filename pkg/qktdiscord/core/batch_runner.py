"""
Batch processing module for parameter sweeps.

Sweep points are independent runs executed on a ThreadPoolExecutor. Results
are collected in submission order, so a parallel sweep returns exactly what a
serial one does.
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from qktdiscord.config import get_config
from qktdiscord.core.errors import ConfigError
from qktdiscord.core.result import RunOutput, SweepResult
from qktdiscord.core.runner import run_scenario, summarize
from qktdiscord.core.scenario import ScenarioConfig
from qktdiscord.utils.logging import get_logger

logger = get_logger("batch_runner")

SWEEPABLE_AXES = (
    "j",
    "nu",
    "eta",
    "epsilon",
    "n_kicks",
    "c_x",
    "c_y",
    "c_z",
    "theta0",
    "phi0",
    "seed",
    "gamma",
)

RunFunction = Callable[[ScenarioConfig], RunOutput]


def _run_single_point(
    base: ScenarioConfig, axis: str, value: Any, run: RunFunction
) -> Tuple[Optional[RunOutput], Dict[str, Any]]:
    """
    Execute one sweep point with error handling.

    Returns:
        Tuple of (output or None, summary row)
    """
    try:
        cfg = base.with_overrides(**{axis: value})
        output = run(cfg)
        row = summarize(output)
    except Exception as e:
        logger.error(f"Sweep point {axis}={value} failed: {e}")
        row = {name: None for name in SweepResult.SUMMARY_COLUMNS}
        row["error"] = f"{type(e).__name__}: {e}"
        output = None
    row[axis] = value
    return output, row


def sweep(
    base: ScenarioConfig,
    axis: str,
    values: Sequence[Any],
    max_workers: Optional[int] = None,
    run: RunFunction = run_scenario,
) -> SweepResult:
    """
    Run base once per value of one scalar parameter.

    Args:
        base: Scenario every point starts from
        axis: Name of a scalar ScenarioConfig field
        values: Values to assign to the axis
        max_workers: Worker threads; defaults to the ``runner.max_workers`` setting
        run: Entry point executed per point

    Returns:
        SweepResult with outputs and summary rows in the order of values

    Raises:
        ConfigError: If axis does not name a sweepable field
    """
    if axis not in SWEEPABLE_AXES:
        raise ConfigError(
            f"cannot sweep '{axis}', expected one of {', '.join(SWEEPABLE_AXES)}", key="sweep_axis"
        )
    if max_workers is None:
        max_workers = get_config("runner", "max_workers")

    start_time = time.time()
    result = SweepResult(
        axis=axis,
        values=list(values),
        metadata={"kind": "sweep", "axis": axis, "base": base.echo()},
    )
    if not values:
        logger.info("Sweep has no values; nothing to run")
        return result

    logger.info(f"Starting sweep over {axis} with {len(values)} points")
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        futures = [executor.submit(_run_single_point, base, axis, value, run) for value in values]
        for index, future in enumerate(futures):
            output, row = future.result()
            result.outputs.append(output)
            result.summary.append(row)
            logger.debug(f"Completed sweep point {index + 1}/{len(futures)}")

    total_time = time.time() - start_time
    failed = len(result.failed)
    logger.info(f"Completed {len(values)} sweep points in {total_time:.2f} seconds ({failed} failed)")
    return result


def parse_sweep_values(text: str, axis: str) -> List[Any]:
    """
    Parse a comma-separated value list for an axis.

    Integer axes (n_kicks, seed) parse as int, everything else as float.

    Raises:
        ConfigError: If a value cannot be parsed
    """
    if text is None or not text.strip():
        return []
    caster = int if axis in ("n_kicks", "seed") else float
    values = []
    for part in text.split(","):
        try:
            values.append(caster(part.strip()))
        except ValueError as e:
            raise ConfigError(f"cannot parse '{part.strip()}' for {axis}", key="sweep_values") from e
    return values
