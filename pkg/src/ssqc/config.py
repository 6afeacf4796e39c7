"""Run/sweep configuration: flat sectioned key-value text, validation, presets.

Grammar: `key = value` lines grouped under `[section]` headers; `#` starts a
comment anywhere on a line; UTF-8. Sections are [system], [bath], [squeeze],
[integrator], [sweep], [output]. Every parameter is a scalar (or a comma
list of scalars), so configs diff cleanly between reproduction runs.

Parsing collects *all* violations with their line numbers instead of
stopping at the first one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bath import BathParams, SqueezeParams
from .dynamics import IntegratorConfig, Regime
from .operators import Channel, SystemSpec, basis_index

__all__ = [
    "RunConfig",
    "SweepSpec",
    "ConfigError",
    "parse_config",
    "emit_config",
    "apply_axis",
    "preset",
    "PRESET_NAMES",
    "SWEEP_AXES",
]

SECTIONS = ("system", "bath", "squeeze", "integrator", "sweep", "output")
SWEEP_AXES = ("Gamma", "T", "gamma", "r", "theta")
OUTPUT_FORMATS = ("csv", "csv+json")


class ConfigError(ValueError):
    """All configuration violations found, each with its source line."""

    def __init__(self, violations: list[tuple[int, str]]):
        self.violations = sorted(violations)
        lines = [f"line {ln}: {msg}" if ln else msg for ln, msg in self.violations]
        super().__init__("invalid configuration:\n  " + "\n  ".join(lines))


@dataclass
class RunConfig:
    """Everything needed for one propagation plus where to write it."""

    system: SystemSpec
    bath: BathParams
    regime: Regime = Regime.NONMARKOVIAN
    squeeze: SqueezeParams | None = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    initial_state: str = ""          # empty = all qubits in the ground state
    output_path: str | None = None
    output_format: str = "csv"

    def __post_init__(self):
        if not self.initial_state:
            self.initial_state = "g" * self.system.n_qubits
        if self.squeeze is not None and self.regime is not Regime.NONMARKOVIAN:
            raise ValueError("squeeze parameters require the nonmarkovian regime")
        if self.output_format not in OUTPUT_FORMATS:
            raise ValueError(f"output format must be one of {OUTPUT_FORMATS}")


@dataclass
class SweepSpec:
    """A base run plus one swept axis (optionally a second axis for a grid)."""

    base: RunConfig
    axis: str
    values: tuple[float, ...]
    axis2: str | None = None
    values2: tuple[float, ...] | None = None

    def __post_init__(self):
        _validate_axis(self.axis, self.values, self.base, collect=None)
        if (self.axis2 is None) != (self.values2 is None):
            raise ValueError("axis2 and values2 must be given together")
        if self.axis2 is not None:
            if self.axis2 == self.axis:
                raise ValueError("axis2 must differ from axis")
            _validate_axis(self.axis2, self.values2, self.base, collect=None)

    @property
    def is_grid(self) -> bool:
        return self.axis2 is not None


def _validate_axis(axis: str, values, base: RunConfig | None, collect, line: int = 0):
    """Check one sweep axis; append to `collect` or raise when collect is None."""
    problems = []
    if axis not in SWEEP_AXES:
        problems.append(f"unknown sweep axis {axis!r}; expected one of {SWEEP_AXES}")
    else:
        vals = tuple(float(v) for v in values)
        if not vals:
            problems.append("sweep values must be nonempty")
        elif len(vals) >= 2 and not all(b > a for a, b in zip(vals, vals[1:])):
            problems.append("sweep values must be strictly increasing")
        if axis == "gamma" and any(v <= 0 for v in vals):
            problems.append("sweep over gamma requires positive bandwidth values")
        if axis in ("Gamma", "T", "r") and any(v < 0 for v in vals):
            problems.append(f"sweep over {axis} requires nonnegative values")
        if axis == "theta" and any(not 0 <= v < 2 * math.pi for v in vals):
            problems.append("sweep over theta requires values in [0, 2*pi)")
        if axis in ("r", "theta") and base is not None and base.squeeze is None:
            problems.append(f"sweep over {axis} requires a [squeeze] section")
    if collect is None:
        if problems:
            raise ValueError("; ".join(problems))
    else:
        collect.extend((line, p) for p in problems)


def apply_axis(base: RunConfig, axis: str, value: float) -> RunConfig:
    """A copy of `base` with one swept parameter replaced."""
    if axis == "Gamma":
        return replace(base, bath=replace(base.bath, coupling=value))
    if axis == "T":
        return replace(base, bath=replace(base.bath, temperature=value))
    if axis == "gamma":
        return replace(base, bath=replace(base.bath, bandwidth=value))
    if axis == "r":
        return replace(base, squeeze=replace(base.squeeze, strength=value))
    if axis == "theta":
        return replace(base, squeeze=replace(base.squeeze, direction=value))
    raise ValueError(f"unknown sweep axis {axis!r}")


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class _Section:
    """Raw key/value strings of one section with their line numbers."""

    def __init__(self, line: int):
        self.line = line
        self.entries: dict[str, tuple[str, int]] = {}
        self.consumed: set[str] = set()

    def take(self, key: str) -> tuple[str, int] | None:
        self.consumed.add(key)
        return self.entries.get(key)


def _scan(text: str, errors: list):
    sections: dict[str, _Section] = {}
    current: _Section | None = None
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in SECTIONS:
                errors.append((line_no, f"unknown section [{name}]"))
                current = _Section(line_no)   # swallow its keys without more errors
                continue
            if name in sections:
                errors.append((line_no, f"duplicate section [{name}]"))
                current = sections[name]
                continue
            current = _Section(line_no)
            sections[name] = current
        elif "=" in line:
            if current is None:
                errors.append((line_no, "key/value line before any [section] header"))
                continue
            key, value = (part.strip() for part in line.split("=", 1))
            if key in current.entries:
                errors.append((line_no, f"duplicate key {key!r}"))
            current.entries[key] = (value, line_no)
        else:
            errors.append((line_no, f"expected 'key = value' or '[section]', got {line!r}"))
    return sections


class _Reader:
    """Typed, error-collecting access to one section's entries."""

    def __init__(self, section: _Section | None, name: str, errors: list):
        self.section = section
        self.name = name
        self.errors = errors

    @property
    def present(self) -> bool:
        return self.section is not None

    @property
    def line(self) -> int:
        return self.section.line if self.section else 0

    def _raw(self, key: str):
        return self.section.take(key) if self.section else None

    def key_line(self, key: str) -> int:
        raw = self.section.entries.get(key) if self.section else None
        return raw[1] if raw else self.line

    def get(self, key: str, convert, default=None, required: bool = False,
            check=None):
        raw = self._raw(key)
        if raw is None:
            if required:
                self.errors.append(
                    (self.line, f"[{self.name}] is missing required key {key!r}")
                )
            return default
        value_str, line = raw
        try:
            value = convert(value_str)
        except ValueError as exc:
            self.errors.append((line, f"{key}: {exc}"))
            return default
        if check is not None:
            problem = check(value)
            if problem:
                self.errors.append((line, f"{key}: {problem}"))
                return default
        return value

    def report_unknown(self):
        if self.section is None:
            return
        for key, (_, line) in self.section.entries.items():
            if key not in self.section.consumed:
                self.errors.append((line, f"unknown key {key!r} in [{self.name}]"))


def _to_float(s: str) -> float:
    return float(s)


def _to_int(s: str) -> int:
    try:
        return int(s, 10)
    except ValueError:
        raise ValueError(f"expected an integer, got {s!r}")


def _to_float_list(s: str) -> tuple[float, ...]:
    parts = [p.strip() for p in s.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(float(p) for p in parts)


def _to_bool(s: str) -> bool:
    low = s.strip().lower()
    if low in ("true", "false"):
        return low == "true"
    raise ValueError(f"expected true or false, got {s!r}")


def _to_channel(s: str) -> Channel:
    try:
        return Channel(s.strip().lower())
    except ValueError:
        raise ValueError(
            f"expected one of {[c.value for c in Channel]}, got {s!r}"
        )


def _to_regime(s: str) -> Regime:
    try:
        return Regime(s.strip().lower())
    except ValueError:
        raise ValueError(f"expected 'nonmarkovian' or 'markovian', got {s!r}")


def parse_config(text: str) -> RunConfig | SweepSpec:
    """Parse and validate config text; raises ConfigError listing every violation."""
    errors: list[tuple[int, str]] = []
    sections = _scan(text, errors)

    system = _Reader(sections.get("system"), "system", errors)
    bath = _Reader(sections.get("bath"), "bath", errors)
    squeeze = _Reader(sections.get("squeeze"), "squeeze", errors)
    integrator = _Reader(sections.get("integrator"), "integrator", errors)
    sweep = _Reader(sections.get("sweep"), "sweep", errors)
    output = _Reader(sections.get("output"), "output", errors)

    for reader in (system, bath):
        if not reader.present:
            errors.append((0, f"missing required section [{reader.name}]"))

    n_qubits = system.get("n_qubits", _to_int, required=True,
                          check=lambda n: None if n >= 1 else f"must be >= 1, got {n}")
    omegas = system.get("omegas", _to_float_list, required=True)
    channel = system.get("channel", _to_channel, default=Channel.SIGMA_X)
    initial_state = system.get("initial_state", str, default="")
    if n_qubits is not None and omegas is not None and len(omegas) != n_qubits:
        errors.append((system.key_line("omegas"),
                       f"omegas: expected {n_qubits} entries, got {len(omegas)}"))
        omegas = None
    if initial_state and n_qubits is not None and initial_state != "mixed":
        try:
            basis_index(initial_state, n_qubits)
        except ValueError as exc:
            errors.append((system.key_line("initial_state"), f"initial_state: {exc}"))
            initial_state = ""

    regime = bath.get("regime", _to_regime, default=Regime.NONMARKOVIAN)
    coupling = bath.get("Gamma", _to_float, required=True,
                        check=lambda v: None if v >= 0 else "coupling must be nonnegative")
    bandwidth = bath.get("gamma", _to_float, required=True,
                         check=lambda v: None if v > 0 else "bandwidth must be positive")
    temperature = bath.get("T", _to_float, required=True,
                           check=lambda v: None if v >= 0 else "temperature must be nonnegative")
    omega0 = bath.get("omega0", _to_float, default=1.0)

    squeeze_params = None
    if squeeze.present:
        r = squeeze.get("r", _to_float, required=True,
                        check=lambda v: None if v >= 0 else "squeezing strength must be nonnegative")
        theta = squeeze.get("theta", _to_float, required=True,
                            check=lambda v: None if 0 <= v < 2 * math.pi
                            else "squeezing direction must lie in [0, 2*pi)")
        if regime is Regime.MARKOVIAN:
            errors.append((squeeze.line,
                           "[squeeze] requires regime = nonmarkovian "
                           "(the Markovian generator has no squeezed variant)"))
        elif r is not None and theta is not None:
            squeeze_params = SqueezeParams(r, theta)

    dt = integrator.get("dt", _to_float, default=0.01,
                        check=lambda v: None if v > 0 else "must be positive")
    t_max = integrator.get("t_max", _to_float, default=200.0,
                           check=lambda v: None if v > 0 else "must be positive")
    sample_every = integrator.get("sample_every", _to_int, default=10,
                                  check=lambda v: None if v >= 1 else "must be >= 1")
    scheme = integrator.get("scheme", str, default="rk4",
                            check=lambda v: None if v.lower() == "rk4"
                            else f"unsupported scheme {v!r}")
    strict_guard = integrator.get("strict_guard", _to_bool, default=True)

    output_path = output.get("path", str, default=None)
    output_format = output.get("format", str, default="csv",
                               check=lambda v: None if v in OUTPUT_FORMATS
                               else f"must be one of {OUTPUT_FORMATS}")

    sweep_fields = None
    if sweep.present:
        axis = sweep.get("axis", str, required=True)
        values = _read_axis_values(sweep, "values", "start", "stop", "count", errors)
        axis2 = sweep.get("axis2", str, default=None)
        values2 = _read_axis_values(sweep, "values2", "start2", "stop2", "count2",
                                    errors, optional=True)
        if (axis2 is None) != (values2 is None):
            errors.append((sweep.line, "axis2 and its values must be given together"))
            axis2 = values2 = None
        if axis2 is not None and axis2 == axis:
            errors.append((sweep.key_line("axis2"), "axis2 must differ from axis"))
            axis2 = values2 = None
        sweep_fields = (axis, values, axis2, values2)

    for reader in (system, bath, squeeze, integrator, sweep, output):
        reader.report_unknown()

    if errors:
        raise ConfigError(errors)

    try:
        run = RunConfig(
            system=SystemSpec(n_qubits, tuple(omegas), channel),
            bath=BathParams(coupling, bandwidth, temperature, omega0),
            regime=regime,
            squeeze=squeeze_params,
            integrator=IntegratorConfig(dt=dt, t_max=t_max, sample_every=sample_every,
                                        scheme="rk4", strict_stability_guard=strict_guard),
            initial_state=initial_state,
            output_path=output_path,
            output_format=output_format,
        )
    except ValueError as exc:
        raise ConfigError([(0, str(exc))]) from None

    if sweep_fields is None:
        return run

    axis, values, axis2, values2 = sweep_fields
    post_errors: list[tuple[int, str]] = []
    if values is not None:
        _validate_axis(axis, values, run, post_errors, line=sweep.key_line("axis"))
    if axis2 is not None and values2 is not None:
        _validate_axis(axis2, values2, run, post_errors, line=sweep.key_line("axis2"))
    if post_errors:
        raise ConfigError(post_errors)
    return SweepSpec(base=run, axis=axis, values=values, axis2=axis2, values2=values2)


def _read_axis_values(sweep: _Reader, values_key: str, start_key: str, stop_key: str,
                      count_key: str, errors: list, optional: bool = False):
    """Axis values from an explicit list or a (start, stop, count) linear grid."""
    entries = sweep.section.entries if sweep.section is not None else {}
    has_values = values_key in entries
    has_grid = any(k in entries for k in (start_key, stop_key, count_key))
    if not has_values and not has_grid:
        if not optional:
            errors.append((sweep.line,
                           f"[sweep] needs {values_key} or {start_key}/{stop_key}/{count_key}"))
        return None
    if has_values and has_grid:
        for key in (values_key, start_key, stop_key, count_key):
            sweep.section.consumed.add(key)
        errors.append((sweep.key_line(values_key),
                       f"give either {values_key} or {start_key}/{stop_key}/{count_key}, not both"))
        return None
    if has_values:
        return sweep.get(values_key, _to_float_list)
    start = sweep.get(start_key, _to_float, required=True)
    stop = sweep.get(stop_key, _to_float, required=True)
    count = sweep.get(count_key, _to_int, required=True,
                      check=lambda v: None if v >= 2 else "grid count must be >= 2")
    if None in (start, stop, count):
        return None
    if stop <= start:
        errors.append((sweep.key_line(stop_key), f"{stop_key} must exceed {start_key}"))
        return None
    return tuple(float(v) for v in np.linspace(start, stop, count))


# ---------------------------------------------------------------------------
# Emission (inverse of parse_config for valid configs)
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_config(cfg: RunConfig | SweepSpec) -> str:
    """Render a config back to text; parse_config(emit_config(c)) == c."""
    run = cfg.base if isinstance(cfg, SweepSpec) else cfg
    lines = [
        "[system]",
        f"n_qubits = {run.system.n_qubits}",
        "omegas = " + ", ".join(repr(w) for w in run.system.omegas),
        f"channel = {run.system.channel.value}",
        f"initial_state = {run.initial_state}",
        "",
        "[bath]",
        f"regime = {run.regime.value}",
        f"Gamma = {_fmt(run.bath.coupling)}",
        f"gamma = {_fmt(run.bath.bandwidth)}",
        f"T = {_fmt(run.bath.temperature)}",
        f"omega0 = {_fmt(run.bath.center_frequency)}",
    ]
    if run.squeeze is not None:
        lines += [
            "",
            "[squeeze]",
            f"r = {_fmt(run.squeeze.strength)}",
            f"theta = {_fmt(run.squeeze.direction)}",
        ]
    lines += [
        "",
        "[integrator]",
        f"dt = {_fmt(run.integrator.dt)}",
        f"t_max = {_fmt(run.integrator.t_max)}",
        f"sample_every = {run.integrator.sample_every}",
        f"scheme = {run.integrator.scheme}",
        f"strict_guard = {_fmt(run.integrator.strict_stability_guard)}",
    ]
    if isinstance(cfg, SweepSpec):
        lines += [
            "",
            "[sweep]",
            f"axis = {cfg.axis}",
            "values = " + ", ".join(repr(v) for v in cfg.values),
        ]
        if cfg.axis2 is not None:
            lines += [
                f"axis2 = {cfg.axis2}",
                "values2 = " + ", ".join(repr(v) for v in cfg.values2),
            ]
    if run.output_path is not None or run.output_format != "csv":
        lines += ["", "[output]"]
        if run.output_path is not None:
            lines.append(f"path = {run.output_path}")
        lines.append(f"format = {run.output_format}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Presets encoding the published parameter sets
# ---------------------------------------------------------------------------

def _preset_base(omega_s: float, coupling: float, bandwidth: float, temperature: float,
                 squeeze: SqueezeParams | None = None, dt: float = 0.01,
                 regime: Regime = Regime.NONMARKOVIAN, path: str | None = None) -> RunConfig:
    return RunConfig(
        system=SystemSpec(2, (omega_s, omega_s), Channel.SIGMA_X),
        bath=BathParams(coupling, bandwidth, temperature, center_frequency=omega_s),
        regime=regime,
        squeeze=squeeze,
        integrator=IntegratorConfig(dt=dt, t_max=200.0, sample_every=10),
        output_path=path,
    )


def _linspace(start: float, stop: float, count: int) -> tuple[float, ...]:
    return tuple(float(v) for v in np.linspace(start, stop, count))


def _build_presets() -> dict[str, SweepSpec]:
    half_pi = math.pi / 2
    squeeze = SqueezeParams(0.4, half_pi)
    return {
        # coupling-strength sweep at T=15, bandwidth 5
        "fig1a": SweepSpec(
            base=_preset_base(1.0, 0.05, 5.0, 15.0, path="fig1a.csv"),
            axis="Gamma", values=_linspace(0.005, 0.3, 20),
        ),
        # temperature sweep at coupling 0.05, bandwidth 5
        "fig1b": SweepSpec(
            base=_preset_base(1.0, 0.05, 5.0, 15.0, path="fig1b.csv"),
            axis="T", values=_linspace(1.0, 40.0, 20),
        ),
        # bandwidth sweep at coupling 0.05, T=15 (dt resolves bandwidth 20)
        "fig1c": SweepSpec(
            base=_preset_base(1.0, 0.05, 5.0, 15.0, dt=0.005, path="fig1c.csv"),
            axis="gamma", values=_linspace(0.5, 20.0, 20),
        ),
        # squeezing-parameter surface at bandwidth 3, coupling 0.04, T=8
        "fig2": SweepSpec(
            base=_preset_base(1.0, 0.04, 3.0, 8.0, squeeze=SqueezeParams(0.0, 0.0),
                              path="fig2.csv"),
            axis="r", values=_linspace(0.0, 1.0, 21),
            axis2="theta", values2=_linspace(0.0, math.pi, 21),
        ),
        # coupling sweep with a squeezed bath, T=6, reference frequency 0.5
        "fig3a": SweepSpec(
            base=_preset_base(0.5, 0.04, 3.0, 6.0, squeeze=squeeze, path="fig3a.csv"),
            axis="Gamma", values=_linspace(0.005, 0.3, 20),
        ),
        # temperature sweep with a squeezed bath, coupling 0.04
        "fig3b": SweepSpec(
            base=_preset_base(0.5, 0.04, 3.0, 6.0, squeeze=squeeze, path="fig3b.csv"),
            axis="T", values=_linspace(1.0, 20.0, 20),
        ),
    }


PRESET_NAMES = tuple(sorted(_build_presets()))


def preset(name: str) -> SweepSpec:
    """A fresh copy of one named sweep preset."""
    presets = _build_presets()
    if name not in presets:
        raise KeyError(f"unknown preset {name!r}; available: {', '.join(sorted(presets))}")
    return presets[name]
