"""Parameter sweeps over (direction, alpha, r) with deterministic CSV output.

One record per grid point; output is byte-identical across runs for the
same configuration (fixed ordering, fixed 12-significant-digit formatting,
LF line endings).  Figure presets bake in the panel parameters used by the
figure renderer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .averaging import QuadratureSpec, average_fidelity, average_fidelity_closed
from .errors import UnsupportedDirection
from .teleport import Direction, success_prob

CSV_COLUMNS = (
    "direction", "alpha", "r", "t",
    "avg_fidelity", "avg_fidelity_closed_printed", "avg_fidelity_closed_corrected",
    "success_probability", "backend", "convergence_flag",
)

_BACKENDS = ("analytic", "numeric", "both")
_NUMERIC_DIRECTIONS = (Direction.S2C, Direction.C2S, Direction.C2P)
_BACKEND_MATCH_TOL = 1e-8


@dataclass(frozen=True)
class SweepConfig:
    directions: tuple[Direction, ...]
    alphas: tuple[float, ...]
    r_min: float = 0.0
    r_max: float = 0.999
    r_steps: int = 201
    quad: QuadratureSpec = field(default_factory=QuadratureSpec)
    backend: str = "analytic"

    def __post_init__(self):
        directions = tuple(Direction(d) for d in self.directions)
        alphas = tuple(float(a) for a in self.alphas)
        object.__setattr__(self, "directions", directions)
        object.__setattr__(self, "alphas", alphas)
        if not directions:
            raise ValueError("need at least one direction")
        if any(a <= 0.0 for a in alphas):
            raise ValueError("alpha values must be > 0")
        if not 0.0 <= self.r_min <= self.r_max < 1.0:
            raise ValueError("r grid must satisfy 0 <= r_min <= r_max < 1")
        if self.r_steps < 2:
            raise ValueError("r_steps must be >= 2")
        if self.backend not in _BACKENDS:
            raise ValueError(f"backend must be one of {_BACKENDS}")
        if self.backend != "analytic" and any(a > 3.0 for a in alphas):
            raise ValueError("numeric backends require alpha <= 3")

    def r_grid(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.r_steps)


PRESETS: dict[str, SweepConfig] = {
    "fig1": SweepConfig((Direction.S2C, Direction.C2S), (0.5, 1.0, 2.0, 10.0)),
    "fig2": SweepConfig((Direction.C2S,), (0.5, 1.0, 2.0, 10.0)),
    "fig3": SweepConfig((Direction.P2C, Direction.S2C, Direction.C2S, Direction.C2P),
                        (0.5, 1.0, 2.0, 10.0)),
    "fig4": SweepConfig((Direction.P2C, Direction.S2C, Direction.C2S, Direction.C2P),
                        (0.5, 1.0, 2.0, 10.0)),
}


@dataclass(frozen=True)
class SweepRecord:
    direction: str
    alpha: float
    r: float
    t: float
    avg_fidelity: float
    avg_fidelity_closed_printed: float | None
    avg_fidelity_closed_corrected: float | None
    success_probability: float
    backend: str
    convergence_flag: str


def _closed_columns(direction: Direction, alpha: float, r: float):
    if direction == Direction.C2S:
        return (average_fidelity_closed(direction, alpha, r, "printed"),
                average_fidelity_closed(direction, alpha, r, "corrected"))
    if direction == Direction.C2P:
        closed = average_fidelity_closed(direction, alpha, r, "printed")
        return closed, closed
    return None, None


def evaluate_point(direction: Direction, alpha: float, r: float,
                   quad: QuadratureSpec, backend: str) -> SweepRecord:
    """One sweep record; nonconvergent quadrature is flagged, not fatal."""
    analytic = average_fidelity(direction, alpha, r, quad, raise_on_nonconvergent=False)
    value = analytic.value
    flag = "ok" if analytic.converged else "nonconvergent"
    used = "analytic"

    if backend in ("numeric", "both") and direction in _NUMERIC_DIRECTIONS:
        numeric = average_fidelity(direction, alpha, r, quad, backend="numeric",
                                   raise_on_nonconvergent=False)
        if backend == "numeric":
            value = numeric.value
            flag = "ok" if numeric.converged else "nonconvergent"
            used = "numeric"
        else:
            used = "both"
            if abs(numeric.value - analytic.value) > _BACKEND_MATCH_TOL:
                flag = "backend-mismatch"

    printed, corrected = _closed_columns(direction, alpha, r)
    return SweepRecord(direction.value, alpha, float(r), _t_of(r), value,
                       printed, corrected, success_prob(direction, alpha, r),
                       used, flag)


def _t_of(r: float) -> float:
    return math.sqrt(max(0.0, 1.0 - float(r) * float(r)))


def run_sweep(config: SweepConfig) -> list[SweepRecord]:
    """Evaluate the full grid in deterministic order (direction, alpha, r)."""
    records = []
    for direction in config.directions:
        for alpha in config.alphas:
            for r in config.r_grid():
                records.append(evaluate_point(direction, alpha, float(r),
                                              config.quad, config.backend))
    return records


def _format(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return f"{value:.12g}"


def records_to_csv(records: list[SweepRecord]) -> str:
    lines = [",".join(CSV_COLUMNS)]
    for rec in records:
        lines.append(",".join(_format(getattr(rec, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def write_csv(records: list[SweepRecord], path) -> None:
    Path(path).write_text(records_to_csv(records), encoding="utf-8", newline="\n")


def preset_config(name: str, quad: QuadratureSpec | None = None,
                  backend: str | None = None) -> SweepConfig:
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    cfg = PRESETS[name]
    if quad is not None:
        cfg = replace(cfg, quad=quad)
    if backend is not None:
        cfg = replace(cfg, backend=backend)
    return cfg
