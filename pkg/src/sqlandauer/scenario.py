"""Scenario configs, result records, and the run/sweep machinery.

Configs are flat, human-editable text with dotted key paths::

    name = squeezed_resonant
    detector.gap = 1.0
    detector.p = 0.3
    detector.coupling = 0.02
    trajectory.kind = static
    trajectory.x0 = 0.0
    trajectory.t0 = 0.0
    window.s = 2.0
    modes[0].omega = 1.0
    modes[0].k = 1.0
    modes[0].r = 0.5
    modes[0].theta = 1.0
    modes[0].beta = 1.0
    modes[0].length = 6.283185307179586

Everything is dimensionless with hbar = c = k_B = 1; entropies are in nats.
An optional ``sweep`` block replays the scenario over a list of values for
one dotted parameter path; an optional ``oracle`` block adds the exact
propagation comparison to the record.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from importlib import resources
from pathlib import Path

from . import __version__
from .detector import (
    DetectorSpec,
    InteractionWindow,
    perturbative_report,
)
from .oracle import PropagationConfig, exact_vs_perturbative
from .core import FockCutoff
from .sts import ModeSpec, positivity_certificate
from .trajectories import (
    InertialTrajectory,
    SampledTrajectory,
    StaticTrajectory,
    UniformAccelerationTrajectory,
)

SCHEMA_VERSION = 1

DUAL_PATH_LIMIT = 1e-9

CSV_COLUMNS = [
    "schema_version",
    "scenario",
    "sweep_parameter",
    "sweep_value",
    "status",
    "gap",
    "p",
    "coupling",
    "s",
    "trajectory_kind",
    "n_modes",
    "omega_0",
    "k_0",
    "r_0",
    "theta_0",
    "beta_0",
    "iplus_re_0",
    "iplus_im_0",
    "iminus_re_0",
    "iminus_im_0",
    "quad_error_0",
    "delta_p",
    "entropy_change",
    "beta_heat",
    "sigma_quadratic",
    "sigma_direct",
    "sigma_residual_rel",
    "A_0",
    "B_0",
    "C_0",
    "A_min_0",
    "B_min_0",
    "positivity_certificate_0",
    "validity_flag",
    "oracle_slope",
    "error",
]


class ConfigError(Exception):
    """Malformed or inconsistent scenario configuration."""


@dataclass(frozen=True)
class OracleSettings:
    """Exact-propagation comparison attached to a scenario."""

    lambdas: tuple[float, ...]
    steps: int = 128
    step_tol: float = 1e-9
    method: str = "midpoint"
    cutoff: int | None = None

    def to_config(self) -> PropagationConfig:
        cut = FockCutoff(self.cutoff) if self.cutoff is not None else None
        return PropagationConfig(
            steps=self.steps, step_tol=self.step_tol, cutoff=cut, method=self.method
        )


@dataclass(frozen=True)
class SweepSettings:
    parameter: str
    values: tuple[float, ...]


@dataclass(frozen=True)
class Scenario:
    name: str
    detector: DetectorSpec
    window: InteractionWindow
    trajectory: object
    modes: tuple[ModeSpec, ...]
    seed: int = 0
    oracle: OracleSettings | None = None
    sweep: SweepSettings | None = None


# ---------------------------------------------------------------------------
# flat-text parsing


def _flatten(text: str) -> dict[str, str]:
    flat: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        key = key.strip()
        value = value.strip()
        if not key or not value:
            raise ConfigError(f"line {lineno}: empty key or value")
        if key in flat:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        flat[key] = value
    return flat


def _as_float(flat, key, default=None) -> float:
    if key not in flat:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return float(flat[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {exc}") from None


def _as_int(flat, key, default=None) -> int:
    if key not in flat:
        if default is None:
            raise ConfigError(f"missing required key {key!r}")
        return default
    try:
        return int(flat[key])
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {exc}") from None


def _as_float_list(flat, key) -> tuple[float, ...]:
    try:
        values = tuple(float(v) for v in flat[key].split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"key {key!r}: {exc}") from None
    if not values:
        raise ConfigError(f"key {key!r}: empty value list")
    return values


_TRAJECTORY_KEYS = {
    "static": {"x0", "t0"},
    "inertial": {"x0", "t0", "v"},
    "uniformly_accelerated": {"x0", "t0", "acceleration"},
    "sampled": {"samples"},
}
_MODE_KEYS = {"omega", "k", "r", "theta", "beta", "length"}
_WINDOW_KEYS = {"s", "quadrature_tol", "max_subdivisions"}
_DETECTOR_KEYS = {"gap", "p", "coupling"}
_ORACLE_KEYS = {"lambdas", "steps", "step_tol", "method", "cutoff"}
_SWEEP_KEYS = {"parameter", "values"}


def _check_keys(flat: dict[str, str]) -> None:
    kind = flat.get("trajectory.kind", "static")
    if kind not in _TRAJECTORY_KEYS:
        raise ConfigError(f"unknown trajectory kind {kind!r}")
    for key in flat:
        if key in ("name", "seed", "trajectory.kind"):
            continue
        head, _, tail = key.partition(".")
        if head == "detector" and tail in _DETECTOR_KEYS:
            continue
        if head == "window" and tail in _WINDOW_KEYS:
            continue
        if head == "trajectory" and tail in _TRAJECTORY_KEYS[kind]:
            continue
        if head == "oracle" and tail in _ORACLE_KEYS:
            continue
        if head == "sweep" and tail in _SWEEP_KEYS:
            continue
        if head.startswith("modes[") and head.endswith("]") and tail in _MODE_KEYS:
            continue
        raise ConfigError(f"unknown or misplaced key {key!r}")


def _mode_indices(flat) -> list[int]:
    idx = set()
    for key in flat:
        if key.startswith("modes["):
            head = key.split(".", 1)[0]
            try:
                idx.add(int(head[6:-1]))
            except ValueError:
                raise ConfigError(f"bad mode index in {key!r}") from None
    if not idx:
        raise ConfigError("at least one modes[i] block is required")
    if sorted(idx) != list(range(len(idx))):
        raise ConfigError(f"mode indices must be 0..n-1, got {sorted(idx)}")
    return sorted(idx)


def parse_scenario(text: str, base_dir: str | Path | None = None) -> Scenario:
    """Parse a flat config into a validated Scenario."""
    flat = _flatten(text)
    _check_keys(flat)
    if "name" not in flat:
        raise ConfigError("missing required key 'name'")

    try:
        detector = DetectorSpec(
            gap=_as_float(flat, "detector.gap"),
            p=_as_float(flat, "detector.p"),
            coupling=_as_float(flat, "detector.coupling"),
        )
        window = InteractionWindow(
            s=_as_float(flat, "window.s"),
            quadrature_tol=_as_float(flat, "window.quadrature_tol", 1e-9),
            max_subdivisions=_as_int(flat, "window.max_subdivisions", 48),
        )
        kind = flat.get("trajectory.kind", "static")
        if kind == "static":
            trajectory = StaticTrajectory(
                x0=_as_float(flat, "trajectory.x0", 0.0),
                t0=_as_float(flat, "trajectory.t0", 0.0),
            )
        elif kind == "inertial":
            trajectory = InertialTrajectory(
                v=_as_float(flat, "trajectory.v"),
                x0=_as_float(flat, "trajectory.x0", 0.0),
                t0=_as_float(flat, "trajectory.t0", 0.0),
            )
        elif kind == "uniformly_accelerated":
            trajectory = UniformAccelerationTrajectory(
                acceleration=_as_float(flat, "trajectory.acceleration"),
                x0=_as_float(flat, "trajectory.x0", 0.0),
                t0=_as_float(flat, "trajectory.t0", 0.0),
            )
        else:
            table = Path(flat["trajectory.samples"])
            if not table.is_absolute() and base_dir is not None:
                table = Path(base_dir) / table
            trajectory = SampledTrajectory.from_table(table)
        modes = tuple(
            ModeSpec(
                omega=_as_float(flat, f"modes[{i}].omega"),
                k=_as_float(flat, f"modes[{i}].k"),
                r=_as_float(flat, f"modes[{i}].r", 0.0),
                theta=_as_float(flat, f"modes[{i}].theta", 0.0),
                beta=_as_float(flat, f"modes[{i}].beta", 1.0),
                length=_as_float(flat, f"modes[{i}].length", 2.0 * math.pi),
            )
            for i in _mode_indices(flat)
        )
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from None

    oracle = None
    if any(k.startswith("oracle.") for k in flat):
        if len(modes) != 1:
            raise ConfigError("oracle comparison supports single-mode scenarios only")
        cutoff = _as_int(flat, "oracle.cutoff", -1)
        try:
            oracle = OracleSettings(
                lambdas=_as_float_list(flat, "oracle.lambdas"),
                steps=_as_int(flat, "oracle.steps", 128),
                step_tol=_as_float(flat, "oracle.step_tol", 1e-9),
                method=flat.get("oracle.method", "midpoint"),
                cutoff=None if cutoff < 0 else cutoff,
            )
            oracle.to_config()
        except (ValueError, KeyError) as exc:
            raise ConfigError(str(exc)) from None

    sweep = None
    if any(k.startswith("sweep.") for k in flat):
        if "sweep.parameter" not in flat or "sweep.values" not in flat:
            raise ConfigError("sweep block needs both sweep.parameter and sweep.values")
        parameter = flat["sweep.parameter"]
        probe = dict(flat)
        for k in list(probe):
            if k.startswith("sweep."):
                del probe[k]
        probe[parameter] = "1.0"
        _check_keys(probe)  # rejects unknown parameter paths
        sweep = SweepSettings(parameter, _as_float_list(flat, "sweep.values"))

    return Scenario(
        name=flat["name"],
        detector=detector,
        window=window,
        trajectory=trajectory,
        modes=modes,
        seed=_as_int(flat, "seed", 0),
        oracle=oracle,
        sweep=sweep,
    )


def scenario_to_flat(s: Scenario) -> dict[str, str]:
    flat: dict[str, str] = {"name": s.name, "seed": repr(s.seed)}
    flat["detector.gap"] = repr(s.detector.gap)
    flat["detector.p"] = repr(s.detector.p)
    flat["detector.coupling"] = repr(s.detector.coupling)
    flat["window.s"] = repr(s.window.s)
    flat["window.quadrature_tol"] = repr(s.window.quadrature_tol)
    flat["window.max_subdivisions"] = repr(s.window.max_subdivisions)
    flat["trajectory.kind"] = s.trajectory.kind
    if isinstance(s.trajectory, SampledTrajectory):
        flat["trajectory.samples"] = s.trajectory.source
    else:
        flat["trajectory.x0"] = repr(s.trajectory.x0)
        flat["trajectory.t0"] = repr(s.trajectory.t0)
        if isinstance(s.trajectory, InertialTrajectory):
            flat["trajectory.v"] = repr(s.trajectory.v)
        if isinstance(s.trajectory, UniformAccelerationTrajectory):
            flat["trajectory.acceleration"] = repr(s.trajectory.acceleration)
    for i, mode in enumerate(s.modes):
        flat[f"modes[{i}].omega"] = repr(mode.omega)
        flat[f"modes[{i}].k"] = repr(mode.k)
        flat[f"modes[{i}].r"] = repr(mode.r)
        flat[f"modes[{i}].theta"] = repr(mode.theta)
        flat[f"modes[{i}].beta"] = repr(mode.beta)
        flat[f"modes[{i}].length"] = repr(mode.length)
    if s.oracle is not None:
        flat["oracle.lambdas"] = ", ".join(repr(v) for v in s.oracle.lambdas)
        flat["oracle.steps"] = repr(s.oracle.steps)
        flat["oracle.step_tol"] = repr(s.oracle.step_tol)
        flat["oracle.method"] = s.oracle.method
        if s.oracle.cutoff is not None:
            flat["oracle.cutoff"] = repr(s.oracle.cutoff)
    if s.sweep is not None:
        flat["sweep.parameter"] = s.sweep.parameter
        flat["sweep.values"] = ", ".join(repr(v) for v in s.sweep.values)
    return flat


def emit_scenario(s: Scenario) -> str:
    return "".join(f"{k} = {v}\n" for k, v in scenario_to_flat(s).items())


def bundled_scenario_names() -> list[str]:
    folder = resources.files("sqlandauer") / "scenarios"
    return sorted(p.name[:-4] for p in folder.iterdir() if p.name.endswith(".cfg"))


def load_scenario(source: str | Path) -> Scenario:
    """Load a scenario from a path, or by bundled name (no .cfg suffix)."""
    path = Path(source)
    if path.exists():
        return parse_scenario(path.read_text(encoding="utf-8"), base_dir=path.parent)
    bundled = resources.files("sqlandauer") / "scenarios" / f"{source}.cfg"
    if bundled.is_file():
        return parse_scenario(bundled.read_text(encoding="utf-8"))
    raise ConfigError(f"no such config file or bundled scenario: {source}")


# ---------------------------------------------------------------------------
# records


def build_record(scenario: Scenario) -> dict:
    """Run the perturbative pipeline (and optional oracle) for one scenario."""
    rep = perturbative_report(
        scenario.detector, scenario.modes, scenario.trajectory, scenario.window
    )
    modes_out = []
    for mb in rep.per_mode:
        modes_out.append(
            {
                "omega": mb.mode.omega,
                "k": mb.mode.k,
                "r": mb.mode.r,
                "theta": mb.mode.theta,
                "beta": mb.mode.beta,
                "length": mb.mode.length,
                "n_bar": mb.mode.n_bar,
                "iplus_re": mb.response.iplus.real,
                "iplus_im": mb.response.iplus.imag,
                "iminus_re": mb.response.iminus.real,
                "iminus_im": mb.response.iminus.imag,
                "quad_error": mb.response.error,
                "delta_p": mb.delta_p,
                "heat": mb.heat,
                "sigma": mb.sigma,
                "A": mb.coefficients.A,
                "B": mb.coefficients.B,
                "C": mb.coefficients.C,
                "A_min": mb.coefficients.A_min,
                "B_min": mb.coefficients.B_min,
                "positivity_certificate": positivity_certificate(mb.coefficients),
            }
        )
    record = {
        "schema_version": SCHEMA_VERSION,
        "tool": "sqlandauer",
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "scenario": scenario.name,
        "seed": scenario.seed,
        "inputs": scenario_to_flat(scenario),
        "modes": modes_out,
        "delta_p": rep.delta_p,
        "entropy_change": rep.entropy_change,
        "heat": rep.heat,
        "beta_heat": rep.beta_heat,
        "sigma_quadratic": rep.sigma,
        "sigma_direct": rep.sigma_direct,
        "validity_flag": rep.validity_flag,
        "residuals": {
            "dual_path": rep.dual_residual,
            "dual_path_relative": rep.dual_residual_relative,
            "positivity_certificate_max": max(
                abs(m["positivity_certificate"]) for m in modes_out
            ),
        },
        "oracle": None,
    }
    if scenario.oracle is not None:
        report = exact_vs_perturbative(
            scenario.detector,
            scenario.modes[0],
            scenario.trajectory,
            scenario.window,
            scenario.oracle.lambdas,
            scenario.oracle.to_config(),
        )
        record["oracle"] = {
            "lambdas": list(report.lambdas),
            "dp_exact": list(report.dp_exact),
            "dp_perturbative": list(report.dp_perturbative),
            "residuals": list(report.residuals),
            "slope": report.slope,
            "cutoff_n": report.cutoff_n,
            "cutoff_shift": report.cutoff_shift,
            "trimmed": list(report.trimmed),
        }
    record["status"] = (
        "ok" if record["residuals"]["dual_path_relative"] <= DUAL_PATH_LIMIT else "failed"
    )
    return record


def record_csv_row(record: dict, sweep_parameter: str = "", sweep_value="") -> dict:
    mode0 = record["modes"][0] if record.get("modes") else {}
    oracle = record.get("oracle") or {}
    return {
        "schema_version": record.get("schema_version", SCHEMA_VERSION),
        "scenario": record.get("scenario", ""),
        "sweep_parameter": sweep_parameter,
        "sweep_value": sweep_value,
        "status": record.get("status", "error"),
        "gap": record.get("inputs", {}).get("detector.gap", ""),
        "p": record.get("inputs", {}).get("detector.p", ""),
        "coupling": record.get("inputs", {}).get("detector.coupling", ""),
        "s": record.get("inputs", {}).get("window.s", ""),
        "trajectory_kind": record.get("inputs", {}).get("trajectory.kind", ""),
        "n_modes": len(record.get("modes", [])),
        "omega_0": mode0.get("omega", ""),
        "k_0": mode0.get("k", ""),
        "r_0": mode0.get("r", ""),
        "theta_0": mode0.get("theta", ""),
        "beta_0": mode0.get("beta", ""),
        "iplus_re_0": mode0.get("iplus_re", ""),
        "iplus_im_0": mode0.get("iplus_im", ""),
        "iminus_re_0": mode0.get("iminus_re", ""),
        "iminus_im_0": mode0.get("iminus_im", ""),
        "quad_error_0": mode0.get("quad_error", ""),
        "delta_p": record.get("delta_p", ""),
        "entropy_change": record.get("entropy_change", ""),
        "beta_heat": record.get("beta_heat", ""),
        "sigma_quadratic": record.get("sigma_quadratic", ""),
        "sigma_direct": record.get("sigma_direct", ""),
        "sigma_residual_rel": record.get("residuals", {}).get(
            "dual_path_relative", ""
        ),
        "A_0": mode0.get("A", ""),
        "B_0": mode0.get("B", ""),
        "C_0": mode0.get("C", ""),
        "A_min_0": mode0.get("A_min", ""),
        "B_min_0": mode0.get("B_min", ""),
        "positivity_certificate_0": mode0.get("positivity_certificate", ""),
        "validity_flag": record.get("validity_flag", ""),
        "oracle_slope": oracle.get("slope", ""),
        "error": record.get("error", ""),
    }


def write_json(payload, path) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def write_csv(rows: list[dict], path) -> None:
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(str(row.get(col, "")) for col in CSV_COLUMNS))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# sweeps


def _point_text(scenario: Scenario, value: float) -> str:
    flat = scenario_to_flat(scenario)
    for key in list(flat):
        if key.startswith("sweep."):
            del flat[key]
    flat[scenario.sweep.parameter] = repr(value)
    flat["name"] = f"{scenario.name}[{scenario.sweep.parameter}={value!r}]"
    return "".join(f"{k} = {v}\n" for k, v in flat.items())


def _sweep_worker(args) -> dict:
    text, base_dir = args
    try:
        point = parse_scenario(text, base_dir=base_dir)
        return build_record(point)
    except Exception as exc:  # per-point failures must not abort the sweep
        return {
            "schema_version": SCHEMA_VERSION,
            "status": "error",
            "error": f"{type(exc).__name__}: {exc}",
            "modes": [],
            "inputs": {},
        }


def run_sweep(scenario: Scenario, jobs: int = 1, base_dir=None) -> list[dict]:
    """One record per sweep value, ordered by input index."""
    if scenario.sweep is None:
        raise ConfigError("scenario has no sweep block")
    tasks = [(_point_text(scenario, v), base_dir) for v in scenario.sweep.values]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_sweep_worker, tasks))
    else:
        records = [_sweep_worker(t) for t in tasks]
    for value, record in zip(scenario.sweep.values, records):
        record["sweep_parameter"] = scenario.sweep.parameter
        record["sweep_value"] = value
    return records
