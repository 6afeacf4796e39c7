"""Single runs and parameter sweeps with figure-ready CSV output.

Sweep points are independent propagations, so they are distributed over a
process pool; every point is deterministic for a fixed config, and rows are
assembled in axis order, so the output is byte-identical for any worker
count. CSV files carry full double precision (17 significant digits) and a
'\\n' line terminator.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import DEFAULT_TOLERANCE, DEFAULT_WINDOW, SweepResult, \
    detect_steady_state
from .config import RunConfig, SweepSpec, apply_axis, emit_config
from .dynamics import NumericsError, Trajectory, propagate

__all__ = [
    "PointResult",
    "SweepOutcome",
    "run_single",
    "run_sweep",
    "run_trajectory",
    "trajectory_csv",
    "sweep_csv",
    "resolve_output_path",
    "WORKERS_ENV",
    "OUTDIR_ENV",
]

WORKERS_ENV = "SSQC_WORKERS"
OUTDIR_ENV = "SSQC_OUTDIR"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def resolve_output_path(explicit: str | None, configured: str | None,
                        default_name: str) -> Path:
    """Output path precedence: explicit flag > config > default name.

    Relative paths are placed under $SSQC_OUTDIR when that is set.
    """
    raw = explicit if explicit is not None else (configured or default_name)
    path = Path(raw)
    outdir = os.environ.get(OUTDIR_ENV)
    if outdir and not path.is_absolute():
        path = Path(outdir) / path
    return path


def resolve_workers(explicit: int | None) -> int:
    """Worker count precedence: explicit flag > $SSQC_WORKERS > cpu count."""
    if explicit is not None:
        value = explicit
    else:
        env = os.environ.get(WORKERS_ENV)
        value = int(env) if env else (os.cpu_count() or 1)
    if value < 1:
        raise ValueError(f"worker count must be >= 1, got {value}")
    return value


# ---------------------------------------------------------------------------
# Single propagation
# ---------------------------------------------------------------------------

def run_trajectory(config: RunConfig) -> Trajectory:
    """Propagate one RunConfig."""
    return propagate(
        config.initial_state,
        config.system,
        config.bath,
        squeeze=config.squeeze,
        config=config.integrator,
        regime=config.regime,
    )


def trajectory_csv(traj: Trajectory) -> str:
    """CSV text: t, C, then re/im of the upper triangle of rho (0-based i <= j)."""
    d = traj.rhos.shape[1]
    header = ["t", "C"]
    pairs = [(i, j) for i in range(d) for j in range(i, d)]
    for i, j in pairs:
        header += [f"rho_re_{i}_{j}", f"rho_im_{i}_{j}"]
    lines = [",".join(header)]
    for k in range(len(traj.times)):
        row = [_fmt(traj.times[k]), _fmt(traj.coherence[k])]
        rho = traj.rhos[k]
        for i, j in pairs:
            row += [_fmt(rho[i, j].real), _fmt(rho[i, j].imag)]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def run_single(config: RunConfig, out_path: str | None = None) -> tuple[Trajectory, Path]:
    """Propagate and write the trajectory CSV (and JSON mirror if configured)."""
    started = time.monotonic()
    traj = run_trajectory(config)
    path = resolve_output_path(out_path, config.output_path, "trajectory.csv")
    _write_text(path, trajectory_csv(traj))
    if config.output_format == "csv+json":
        meta = _metadata(config, started)
        meta.update(
            n_samples=len(traj),
            max_trace_defect=traj.max_trace_defect,
            max_hermiticity_drift=traj.max_hermiticity_drift,
        )
        _write_text(path.with_suffix(".json"), json.dumps(meta, indent=2) + "\n")
    return traj, path


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

@dataclass
class PointResult:
    """Steady-state summary of one sweep point."""

    values: tuple[float, ...]   # one entry per swept axis
    ssqc: float
    converged: bool
    t_converged: float
    residual: float
    max_trace_defect: float
    max_hermiticity_drift: float


@dataclass
class SweepOutcome:
    """All sweep rows in axis order plus any per-point failures."""

    spec: SweepSpec
    points: list[PointResult]
    failures: list[tuple[tuple[float, ...], str]]
    workers: int
    elapsed_seconds: float

    @property
    def max_trace_defect(self) -> float:
        return max((p.max_trace_defect for p in self.points), default=0.0)

    @property
    def max_hermiticity_drift(self) -> float:
        return max((p.max_hermiticity_drift for p in self.points), default=0.0)

    def to_sweep_result(self) -> SweepResult:
        """1D outcome as a SweepResult (for find_peak etc.)."""
        if self.spec.is_grid:
            raise ValueError("grid sweeps do not reduce to a single-axis SweepResult")
        return SweepResult(
            axis_name=self.spec.axis,
            axis_values=np.array([p.values[0] for p in self.points]),
            ssqc_values=np.array([p.ssqc for p in self.points]),
            converged=np.array([p.converged for p in self.points]),
            t_converged=np.array([p.t_converged for p in self.points]),
            residuals=np.array([p.residual for p in self.points]),
        )


def _point_configs(spec: SweepSpec) -> list[tuple[tuple[float, ...], RunConfig]]:
    configs = []
    if spec.is_grid:
        for v1 in spec.values:
            for v2 in spec.values2:
                cfg = apply_axis(apply_axis(spec.base, spec.axis, v1), spec.axis2, v2)
                configs.append(((v1, v2), cfg))
    else:
        for v in spec.values:
            configs.append(((v,), apply_axis(spec.base, spec.axis, v)))
    return configs


def _evaluate_point(task):
    """Worker body: propagate one point and summarize its steady state."""
    values, config, tol, window = task
    try:
        traj = run_trajectory(config)
        steady = detect_steady_state(traj, tol=tol, window=window)
    except (NumericsError, ValueError) as exc:
        return values, None, str(exc)
    point = PointResult(
        values=values,
        ssqc=steady.ssqc,
        converged=steady.converged,
        t_converged=steady.t_converged,
        residual=steady.residual,
        max_trace_defect=traj.max_trace_defect,
        max_hermiticity_drift=traj.max_hermiticity_drift,
    )
    return values, point, None


def run_sweep(spec: SweepSpec, workers: int | None = None,
              tol: float = DEFAULT_TOLERANCE,
              window: float = DEFAULT_WINDOW) -> SweepOutcome:
    """Evaluate every sweep point; row order follows the axis values.

    Failed points (numerics or per-point validation) are collected instead of
    aborting the sweep.
    """
    n_workers = resolve_workers(workers)
    started = time.monotonic()
    tasks = [(values, cfg, tol, window) for values, cfg in _point_configs(spec)]

    if n_workers == 1 or len(tasks) <= 1:
        results = [_evaluate_point(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(pool.map(_evaluate_point, tasks))

    points = [point for _, point, _ in results if point is not None]
    failures = [(values, err) for values, point, err in results if point is None]
    return SweepOutcome(
        spec=spec,
        points=points,
        failures=failures,
        workers=n_workers,
        elapsed_seconds=time.monotonic() - started,
    )


def sweep_csv(outcome: SweepOutcome) -> str:
    """CSV table of the sweep; grid sweeps gain an axis2_value column."""
    grid = outcome.spec.is_grid
    header = ["axis_value", "axis2_value"] if grid else ["axis_value"]
    header += ["ssqc", "converged", "t_converged", "residual"]
    lines = [",".join(header)]
    for p in outcome.points:
        row = [_fmt(v) for v in p.values]
        row += [
            _fmt(p.ssqc),
            "true" if p.converged else "false",
            _fmt(p.t_converged),
            _fmt(p.residual),
        ]
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def write_sweep_outputs(outcome: SweepOutcome, out_path: str | None = None) -> Path:
    """Write the sweep CSV, a failure manifest if needed, and the JSON mirror."""
    base = outcome.spec.base
    path = resolve_output_path(out_path, base.output_path, "sweep.csv")
    _write_text(path, sweep_csv(outcome))
    if outcome.failures:
        manifest = [
            {"values": list(values), "error": err} for values, err in outcome.failures
        ]
        _write_text(path.with_name(path.name + ".failures.json"),
                    json.dumps(manifest, indent=2) + "\n")
    if base.output_format == "csv+json":
        meta = _metadata(outcome.spec, None)
        meta.update(
            elapsed_seconds=outcome.elapsed_seconds,
            workers=outcome.workers,
            n_points=len(outcome.points),
            n_failures=len(outcome.failures),
            max_trace_defect=outcome.max_trace_defect,
            max_hermiticity_drift=outcome.max_hermiticity_drift,
        )
        _write_text(path.with_suffix(".json"), json.dumps(meta, indent=2) + "\n")
    return path


def _metadata(cfg, started) -> dict:
    meta = {"version": __version__, "config": emit_config(cfg)}
    if started is not None:
        meta["elapsed_seconds"] = time.monotonic() - started
    return meta


def _write_text(path: Path, text: str):
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
