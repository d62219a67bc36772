"""Jackknife standard errors and the SE-based gate used by the Monte Carlo experiments."""

from typing import Callable, Dict, Iterable, Optional, Tuple

import numpy as np

Estimate = Tuple[float, Optional[float]]


def jackknife(values: np.ndarray, statistic: Callable[[np.ndarray], float]) -> Estimate:
    """Full-sample estimate and leave-one-out jackknife SE; SE is None for a single sample."""
    values = np.asarray(values, dtype=float)
    estimate = float(statistic(values))
    m = len(values)
    if m < 2:
        return estimate, None
    leave_one_out = np.array([statistic(np.delete(values, i)) for i in range(m)])
    se = np.sqrt((m - 1) / m * np.sum((leave_one_out - leave_one_out.mean()) ** 2))
    return estimate, float(se)


def raw_moment(values: np.ndarray, order: int) -> Estimate:
    """E[X^r] with its jackknife SE, from the closed-form leave-one-out means."""
    powers = np.asarray(values, dtype=float) ** order
    m = len(powers)
    estimate = float(powers.mean())
    if m < 2:
        return estimate, None
    leave_one_out = (powers.sum() - powers) / (m - 1)
    se = np.sqrt((m - 1) / m * np.sum((leave_one_out - leave_one_out.mean()) ** 2))
    return estimate, float(se)


def variance(values: np.ndarray) -> Estimate:
    return jackknife(values, lambda x: float(np.var(x)))


def moment_table(values: np.ndarray, targets: Dict[int, float]) -> Dict[str, Dict[str, Optional[float]]]:
    """{"m1": {"value", "se", "target"}, ...} for every order in `targets`."""
    table = {}
    for order, target in targets.items():
        value, se = raw_moment(values, order)
        table[f"m{order}"] = {"value": value, "se": se, "target": target}
    return table


def within_se(value: float, target: float, se: Optional[float], k: float) -> Optional[bool]:
    """|value − target| ≤ k·SE, or None when the SE is undefined."""
    if se is None or not np.isfinite(se):
        return None
    return bool(abs(value - target) <= k * se)


def defined_gates(candidates: Iterable[Tuple[str, Optional[bool]]]) -> Dict[str, bool]:
    """Drop gates that could not be evaluated."""
    return {name: verdict for name, verdict in candidates if verdict is not None}
