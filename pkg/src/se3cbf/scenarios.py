"""Closed-loop scenario harness: configs, presets, run loop, and logging.

A scenario couples the rigid-body model, the tracking controller, and a
set of barrier filters into the fixed-step loop

    sample reference -> nominal control -> safety filter -> integrate,

logging every step.  Configs are plain dataclasses serializable to a
strict flat key/value text format (dotted section names, comma-separated
arrays); two presets reproduce the shipped simulations:

* ``slit``: a disk threads two narrow plane-pair corridors, the second
  rotated 45 degrees about the world Y axis.
* ``landing``: a tilted disk descends onto a pad while its kinetic
  energy along the pad normal is capped.
"""

from __future__ import annotations

import hashlib
import math
import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .barriers import (
    ClassK,
    DirectionalEnergyCBF,
    EnergyAugmentedCBF,
    SlitSpec,
)
from .dynamics import InertiaTensor, State, Wrench, kinetic_energy, step
from .liealg import Pose, Twist, exp_so3
from .qp import FilterDiagnostics, Infeasible, filter_wrench
from .tracking import Gains, ReferenceTrajectory, control

__all__ = [
    "ConfigError",
    "SlitParams",
    "DirectionalParams",
    "ScenarioConfig",
    "LogRecord",
    "RunSummary",
    "build_scenario_slit",
    "build_scenario_landing",
    "PRESETS",
    "run",
    "write_csv",
    "write_summary",
    "run_to_files",
    "load_config",
]

KINDS = ("slit-traversal", "directional-landing", "custom")

# Landing stop rule: the run ends once the body is essentially on the pad
# with negligible energy along the pad normal.
TOUCHDOWN_HEIGHT = 0.01
TOUCHDOWN_ENERGY = 1e-3


class ConfigError(ValueError):
    """Configuration file or value rejected; carries a line number if known."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def _tup3(v) -> tuple[float, float, float]:
    t = tuple(float(x) for x in v)
    if len(t) != 3:
        raise ValueError(f"expected 3 values, got {len(t)}")
    return t


@dataclass(frozen=True)
class SlitParams:
    """One corridor: center/normal/width plus barrier shaping parameters."""

    center: tuple[float, float, float]
    normal: tuple[float, float, float]
    width: float
    body_normal: tuple[float, float, float]
    margin: float
    sharpness: float
    gate_sigma: float
    gate_offset: tuple[float, float, float]
    gate_ceiling: float

    def to_spec(self, disk_radius: float) -> SlitSpec:
        return SlitSpec.from_center(
            center=self.center,
            normal=self.normal,
            width=self.width,
            disk_radius=disk_radius,
            body_normal=self.body_normal,
            margin=self.margin,
            sharpness=self.sharpness,
            gate_sigma=self.gate_sigma,
            gate_offset=self.gate_offset,
            gate_ceiling=self.gate_ceiling,
        )


@dataclass(frozen=True)
class DirectionalParams:
    """World-frame directional energy bound; None disables a block."""

    e_max: float
    normal_v: tuple[float, float, float] | None = None
    normal_omega: tuple[float, float, float] | None = None


@dataclass(frozen=True)
class ScenarioConfig:
    kind: str
    name: str
    duration: float
    dt: float
    filter_enabled: bool
    infeasibility: str
    radius: float
    mass: float
    gain_attitude: float
    gain_position: float
    gain_damping: tuple[float, ...]
    classk_alpha: float
    alpha_e: float | None
    slits: tuple[SlitParams, ...]
    directional: DirectionalParams | None
    ref_times: tuple[float, ...]
    ref_waypoints: tuple[tuple[float, float, float], ...]
    ref_attitude: tuple[float, float, float]
    initial_position: tuple[float, float, float]
    initial_attitude: tuple[float, float, float]
    initial_omega: tuple[float, float, float]
    initial_velocity: tuple[float, float, float]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown scenario.kind '{self.kind}'")
        if not self.duration >= 0.0:
            raise ConfigError("run.duration must be nonnegative")
        if not self.dt > 0.0:
            raise ConfigError("run.dt must be positive")
        if self.infeasibility not in ("abort", "continue"):
            raise ConfigError("run.infeasibility must be 'abort' or 'continue'")
        if not (self.radius > 0.0 and self.mass > 0.0):
            raise ConfigError("body.radius and body.mass must be positive")
        if len(self.gain_damping) != 6:
            raise ConfigError("gains.damping needs 6 entries")
        if not self.classk_alpha > 0.0:
            raise ConfigError("cbf.classk must be positive")
        if self.slits and (self.alpha_e is None or not self.alpha_e > 0.0):
            raise ConfigError("cbf.alpha_e must be positive when slits are configured")
        if len(self.ref_times) != len(self.ref_waypoints) or not self.ref_times:
            raise ConfigError("reference.times and reference.waypoints must align")

    # -- serialization ---------------------------------------------------

    def to_text(self) -> str:
        """Canonical flat key/value form; parsing it back is the identity."""
        out = []
        emit = out.append
        emit(f"scenario.kind = {self.kind}")
        emit(f"scenario.name = {self.name}")
        emit(f"run.duration = {self.duration!r}")
        emit(f"run.dt = {self.dt!r}")
        emit(f"run.filter = {'on' if self.filter_enabled else 'off'}")
        emit(f"run.infeasibility = {self.infeasibility}")
        emit(f"body.radius = {self.radius!r}")
        emit(f"body.mass = {self.mass!r}")
        emit(f"gains.attitude = {self.gain_attitude!r}")
        emit(f"gains.position = {self.gain_position!r}")
        emit(f"gains.damping = {_fmt_list(self.gain_damping)}")
        emit(f"cbf.classk = {self.classk_alpha!r}")
        if self.alpha_e is not None:
            emit(f"cbf.alpha_e = {self.alpha_e!r}")
        for i, s in enumerate(self.slits, start=1):
            emit(f"slit.{i}.center = {_fmt_list(s.center)}")
            emit(f"slit.{i}.normal = {_fmt_list(s.normal)}")
            emit(f"slit.{i}.width = {s.width!r}")
            emit(f"slit.{i}.body_normal = {_fmt_list(s.body_normal)}")
            emit(f"slit.{i}.margin = {s.margin!r}")
            emit(f"slit.{i}.sharpness = {s.sharpness!r}")
            emit(f"slit.{i}.gate_sigma = {s.gate_sigma!r}")
            emit(f"slit.{i}.gate_offset = {_fmt_list(s.gate_offset)}")
            emit(f"slit.{i}.gate_ceiling = {s.gate_ceiling!r}")
        if self.directional is not None:
            if self.directional.normal_v is not None:
                emit(f"directional.normal_v = {_fmt_list(self.directional.normal_v)}")
            if self.directional.normal_omega is not None:
                emit(f"directional.normal_omega = {_fmt_list(self.directional.normal_omega)}")
            emit(f"directional.e_max = {self.directional.e_max!r}")
        emit(f"reference.times = {_fmt_list(self.ref_times)}")
        flat = [x for wp in self.ref_waypoints for x in wp]
        emit(f"reference.waypoints = {_fmt_list(flat)}")
        emit(f"reference.attitude = {_fmt_list(self.ref_attitude)}")
        emit(f"initial.position = {_fmt_list(self.initial_position)}")
        emit(f"initial.attitude = {_fmt_list(self.initial_attitude)}")
        emit(f"initial.omega = {_fmt_list(self.initial_omega)}")
        emit(f"initial.velocity = {_fmt_list(self.initial_velocity)}")
        return "\n".join(out) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text().encode()).hexdigest()[:16]


def _fmt_list(values) -> str:
    return ", ".join(repr(float(v)) for v in values)


# -- presets ------------------------------------------------------------

_GAIN_DAMPING = (0.8, 0.8, 0.8, 8.0, 8.0, 8.0)


def build_scenario_slit(alpha_e: float = 150.0) -> ScenarioConfig:
    """Two-corridor approach preset.

    Corridor 1 at [2.8, 1.0, 1.6] has a vertical gap direction (normal
    e3), corridor 2 at [2.8, -2.0, 1.6] has that normal rotated by 45
    degrees about the world Y axis; both are 0.3 m wide.  With the wide
    Gaussian gates (sigma = 12) and ceiling alpha_e / 2, the rotated
    corridor's barrier already closes the path at identity attitude well
    before the first slit, so the reference approaches along the
    corridor axis at 0.8 m/s and halts at y = 3.6, inside the resting
    safe set of both shipped gains.  The 3 m/s approach makes the
    barrier-rate term dominate so the filter must brake visibly for
    alpha_e in {50, 150} while every barrier stays strictly positive.  The start state carries a
    small dephased tilt so the disk never sits exactly face-on to
    corridor 1 (where the reach term is not differentiable).
    """
    if not alpha_e > 0.0:
        raise ValueError("alpha_e must be positive")
    s45 = math.sin(math.pi / 4.0)
    common = dict(
        width=0.3,
        body_normal=(0.0, 0.0, 1.0),
        margin=0.02,
        sharpness=25.0,
        gate_sigma=12.0,
        gate_offset=(0.0, 0.5, 0.0),
        gate_ceiling=alpha_e / 2.0,
    )
    slits = (
        SlitParams(center=(2.8, 1.0, 1.6), normal=(0.0, 0.0, 1.0), **common),
        SlitParams(center=(2.8, -2.0, 1.6), normal=(s45, 0.0, s45), **common),
    )
    # Quadrature pair (tilt about y, rate about x) at the attitude-loop
    # frequency sqrt(k1/Jx): the tilt vector circles the origin instead of
    # crossing it, keeping the disk away from the face-on reach singularity.
    tilt = np.array([0.0, 0.03, 0.0])
    r0 = exp_so3(tilt).m
    v0 = r0.T @ np.array([0.0, -3.0, 0.0])
    return ScenarioConfig(
        kind="slit-traversal",
        name="slit",
        duration=15.0,
        dt=1e-3,
        filter_enabled=True,
        infeasibility="abort",
        radius=3.0,
        mass=3.0,
        gain_attitude=20.0,
        gain_position=8.0,
        gain_damping=_GAIN_DAMPING,
        classk_alpha=1.0,
        alpha_e=float(alpha_e),
        slits=slits,
        directional=None,
        ref_times=(0.0, 2.8),
        ref_waypoints=((2.8, 12.0, 1.6), (2.8, 3.6, 1.6)),
        ref_attitude=(0.0, 0.0, 0.0),
        initial_position=(2.8, 12.0, 1.6),
        initial_attitude=_tup3(tilt),
        initial_omega=(-0.05164, 0.0, 0.004),
        initial_velocity=_tup3(v0),
    )


def build_scenario_landing(alpha: float = 1.0) -> ScenarioConfig:
    """Vertical-landing preset.

    The disk starts at [15, 0, 10] with a 90 degree tilt about x and
    tracks a straight constant-rate descent to a pad at the origin
    (reached at t = 7 s, then held).  A translational directional
    barrier caps the kinetic energy along the pad normal e3 at 1.5 J;
    the unfiltered controller overshoots that bound.  The step is finer
    than the corridor preset's because the initial half-turn tilt keeps
    the body swinging while the bound is ridden, and the held-wrench
    energy overshoot scales with dt.
    """
    if not alpha > 0.0:
        raise ValueError("alpha must be positive")
    return ScenarioConfig(
        kind="directional-landing",
        name="landing",
        duration=15.0,
        dt=5e-4,
        filter_enabled=True,
        infeasibility="abort",
        radius=3.0,
        mass=3.0,
        gain_attitude=20.0,
        gain_position=8.0,
        gain_damping=_GAIN_DAMPING,
        classk_alpha=float(alpha),
        alpha_e=None,
        slits=(),
        directional=DirectionalParams(e_max=1.5, normal_v=(0.0, 0.0, 1.0)),
        ref_times=(0.0, 7.0),
        ref_waypoints=((15.0, 0.0, 10.0), (0.0, 0.0, 0.0)),
        ref_attitude=(0.0, 0.0, 0.0),
        initial_position=(15.0, 0.0, 10.0),
        initial_attitude=(math.pi / 2.0, 0.0, 0.0),
        initial_omega=(0.0, 0.0, 0.0),
        initial_velocity=(0.0, 0.0, 0.0),
    )


PRESETS = {
    "slit": build_scenario_slit,
    "landing": build_scenario_landing,
}


# -- run loop -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LogRecord:
    """One simulation step: state, wrenches, and per-barrier diagnostics."""

    t: float
    position: np.ndarray
    rotation: np.ndarray
    omega: np.ndarray
    linear: np.ndarray
    u_des: np.ndarray
    u_star: np.ndarray
    cbf_values: tuple[tuple[float, float], ...]
    active: tuple[bool, ...]
    energy: float


@dataclass(frozen=True, eq=False)
class RunSummary:
    steps: int
    cbf_labels: tuple[str, ...]
    cbf_kinds: tuple[str, ...]
    min_primary: dict
    min_augmented: dict
    max_edir: float | None
    max_correction: float
    rms_pos_err: float
    infeasible_steps: int
    wall_ms: float


def _build_cbfs(config: ScenarioConfig):
    classk = ClassK(config.classk_alpha)
    cbfs = []
    for i, sp in enumerate(config.slits, start=1):
        cbfs.append(
            EnergyAugmentedCBF(
                kinematic=sp.to_spec(config.radius),
                alpha_e=config.alpha_e,
                classk=classk,
                label=f"slit{i}",
            )
        )
    if config.directional is not None:
        d = config.directional
        cbfs.append(
            DirectionalEnergyCBF(
                e_max=d.e_max,
                classk=classk,
                label="pad",
                n_v=None if d.normal_v is None else np.asarray(d.normal_v),
                n_omega=None if d.normal_omega is None else np.asarray(d.normal_omega),
            )
        )
    return cbfs


def _initial_state(config: ScenarioConfig) -> State:
    rot = exp_so3(np.asarray(config.initial_attitude))
    pose = Pose(rot, np.asarray(config.initial_position))
    twist = Twist(np.asarray(config.initial_omega), np.asarray(config.initial_velocity))
    return State(pose, twist)


def run(config: ScenarioConfig) -> tuple[list[LogRecord], RunSummary]:
    """Simulate the scenario; deterministic for identical configs."""
    t_start = time.perf_counter()
    inertia = InertiaTensor.disk(config.radius, config.mass)
    gains = Gains.diagonal(config.gain_attitude, config.gain_position, config.gain_damping)
    traj = ReferenceTrajectory(
        np.asarray(config.ref_times),
        np.asarray(config.ref_waypoints, dtype=float).reshape(-1, 3),
        attitude=exp_so3(np.asarray(config.ref_attitude)),
    )
    cbfs = _build_cbfs(config)
    state = _initial_state(config)

    n_steps = int(round(config.duration / config.dt))
    records: list[LogRecord] = []
    sq_err_sum = 0.0
    max_correction = 0.0
    infeasible_steps = 0
    directional_idx = [i for i, c in enumerate(cbfs) if c.kind == "directional"]

    for k in range(n_steps):
        t = k * config.dt
        ref = traj.sample(t)
        u_des = control(state, ref, gains, inertia)
        try:
            u_star, diag = filter_wrench(state, u_des, cbfs, inertia, config.filter_enabled)
        except Infeasible as exc:
            infeasible_steps += 1
            if config.infeasibility == "abort":
                raise
            u_star = Wrench.from_vec6(exc.least_violating)
            constraints = tuple(c.constraint(state, inertia) for c in cbfs)
            diag = FilterDiagnostics(
                constraints, (False,) * len(constraints), 0.0, False
            )

        records.append(
            LogRecord(
                t=t,
                position=state.pose.position,
                rotation=state.pose.rotation.m,
                omega=state.twist.omega,
                linear=state.twist.linear,
                u_des=u_des.vec6(),
                u_star=u_star.vec6(),
                cbf_values=tuple((c.h_value, c.H_value) for c in diag.constraints),
                active=diag.active,
                energy=kinetic_energy(state.twist, inertia),
            )
        )
        err = state.pose.position - ref.pose_d.position
        sq_err_sum += float(err @ err)
        max_correction = max(max_correction, diag.correction_norm)

        touchdown = False
        for i in directional_idx:
            if (
                state.pose.position[2] < TOUCHDOWN_HEIGHT
                and diag.constraints[i].h_value < TOUCHDOWN_ENERGY
            ):
                touchdown = True
        if touchdown:
            break

        state = step(state, u_star, inertia, config.dt)

    labels = tuple(c.label for c in cbfs)
    kinds = tuple(c.kind for c in cbfs)
    min_primary = {}
    min_augmented = {}
    max_edir = None
    for i, label in enumerate(labels):
        if records:
            vals = [r.cbf_values[i] for r in records]
            min_primary[label] = min(v[0] for v in vals)
            min_augmented[label] = min(v[1] for v in vals)
            if kinds[i] == "directional":
                peak = max(v[0] for v in vals)
                max_edir = peak if max_edir is None else max(max_edir, peak)
    wall_ms = (time.perf_counter() - t_start) * 1e3
    summary = RunSummary(
        steps=len(records),
        cbf_labels=labels,
        cbf_kinds=kinds,
        min_primary=min_primary,
        min_augmented=min_augmented,
        max_edir=max_edir,
        max_correction=max_correction,
        rms_pos_err=math.sqrt(sq_err_sum / len(records)) if records else 0.0,
        infeasible_steps=infeasible_steps,
        wall_ms=wall_ms,
    )
    return records, summary


# -- persistence --------------------------------------------------------

_BASE_COLUMNS = (
    "t,px,py,pz,"
    "r11,r12,r13,r21,r22,r23,r31,r32,r33,"
    "wx,wy,wz,vx,vy,vz,"
    "ud1,ud2,ud3,ud4,ud5,ud6,u1,u2,u3,u4,u5,u6"
)


def csv_header(summary: RunSummary) -> str:
    cols = [_BASE_COLUMNS]
    for label, kind in zip(summary.cbf_labels, summary.cbf_kinds):
        if kind == "directional":
            cols.append(f"Edir_{label},Hdir_{label},active_{label}")
        else:
            cols.append(f"h_{label},H_{label},active_{label}")
    cols.append("E")
    return ",".join(cols)


def write_csv(records: list[LogRecord], summary: RunSummary, path) -> None:
    """Write the step log; floats use shortest round-trip decimals."""
    path = Path(path)
    lines = [csv_header(summary)]
    for r in records:
        vals = [r.t]
        vals.extend(r.position)
        vals.extend(r.rotation.reshape(-1))
        vals.extend(r.omega)
        vals.extend(r.linear)
        vals.extend(r.u_des)
        vals.extend(r.u_star)
        parts = [repr(float(v)) for v in vals]
        for (v1, v2), act in zip(r.cbf_values, r.active):
            parts.append(repr(float(v1)))
            parts.append(repr(float(v2)))
            parts.append("1" if act else "0")
        parts.append(repr(float(r.energy)))
        lines.append(",".join(parts))
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def write_summary(summary: RunSummary, path) -> None:
    """Key/value summary; wall_ms is the one run-dependent line."""
    path = Path(path)
    lines = [f"steps = {summary.steps}"]
    for label, kind in zip(summary.cbf_labels, summary.cbf_kinds):
        if label in summary.min_primary:
            prefix = ("Edir", "Hdir") if kind == "directional" else ("h", "H")
            lines.append(f"min_{prefix[0]}_{label} = {summary.min_primary[label]!r}")
            lines.append(f"min_{prefix[1]}_{label} = {summary.min_augmented[label]!r}")
    if summary.max_edir is not None:
        lines.append(f"max_Edir = {summary.max_edir!r}")
    lines.append(f"max_correction = {summary.max_correction!r}")
    lines.append(f"rms_pos_err = {summary.rms_pos_err!r}")
    lines.append(f"infeasible_steps = {summary.infeasible_steps}")
    lines.append(f"wall_ms = {summary.wall_ms:.1f}")
    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write summary to {path}: {exc}") from exc


def run_to_files(config: ScenarioConfig, outdir, basename: str | None = None):
    """Run a scenario and persist <basename>.csv and <basename>.summary.txt."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    base = basename or config.name
    records, summary = run(config)
    csv_path = outdir / f"{base}.csv"
    summary_path = outdir / f"{base}.summary.txt"
    write_csv(records, summary, csv_path)
    write_summary(summary, summary_path)
    return csv_path, summary_path, summary


# -- config file parsing ------------------------------------------------

_SCALAR_KEYS = {
    "scenario.kind": "str",
    "scenario.name": "str",
    "run.duration": "float",
    "run.dt": "float",
    "run.filter": "onoff",
    "run.infeasibility": "str",
    "body.radius": "float",
    "body.mass": "float",
    "gains.attitude": "float",
    "gains.position": "float",
    "gains.damping": "floats",
    "cbf.classk": "float",
    "cbf.alpha_e": "float",
    "directional.normal_v": "floats",
    "directional.normal_omega": "floats",
    "directional.e_max": "float",
    "reference.times": "floats",
    "reference.waypoints": "floats",
    "reference.attitude": "floats",
    "initial.position": "floats",
    "initial.attitude": "floats",
    "initial.omega": "floats",
    "initial.velocity": "floats",
}

_SLIT_FIELDS = {
    "center": 3,
    "normal": 3,
    "width": 1,
    "body_normal": 3,
    "margin": 1,
    "sharpness": 1,
    "gate_sigma": 1,
    "gate_offset": 3,
    "gate_ceiling": 1,
}

_REQUIRED = (
    "scenario.kind",
    "scenario.name",
    "run.duration",
    "run.dt",
    "run.filter",
    "run.infeasibility",
    "body.radius",
    "body.mass",
    "gains.attitude",
    "gains.position",
    "gains.damping",
    "cbf.classk",
    "reference.times",
    "reference.waypoints",
    "reference.attitude",
    "initial.position",
    "initial.attitude",
    "initial.omega",
    "initial.velocity",
)


def _parse_floats(raw: str, line: int) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in raw.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"cannot parse '{raw}' as numbers", line) from None


def load_config(path) -> ScenarioConfig:
    """Parse and validate a scenario config file; unknown keys rejected."""
    text = Path(path).read_text()
    entries: dict[str, tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"expected 'key = value', got '{stripped}'", lineno)
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key in entries:
            raise ConfigError(f"duplicate key '{key}'", lineno)
        entries[key] = (value, lineno)

    slit_indices = set()
    for key, (_, lineno) in entries.items():
        if key in _SCALAR_KEYS:
            continue
        parts = key.split(".")
        if len(parts) == 3 and parts[0] == "slit" and parts[2] in _SLIT_FIELDS:
            try:
                idx = int(parts[1])
            except ValueError:
                raise ConfigError(f"bad slit index in '{key}'", lineno) from None
            if idx < 1:
                raise ConfigError(f"slit indices start at 1, got '{key}'", lineno)
            slit_indices.add(idx)
            continue
        raise ConfigError(f"unknown config key '{key}'", lineno)

    for req in _REQUIRED:
        if req not in entries:
            raise ConfigError(f"missing required key '{req}'")

    def get_str(key: str) -> str:
        return entries[key][0]

    def get_float(key: str) -> float:
        raw, lineno = entries[key]
        vals = _parse_floats(raw, lineno)
        if len(vals) != 1:
            raise ConfigError(f"'{key}' expects one number", lineno)
        return vals[0]

    def get_floats(key: str, count: int | None = None) -> tuple[float, ...]:
        raw, lineno = entries[key]
        vals = _parse_floats(raw, lineno)
        if count is not None and len(vals) != count:
            raise ConfigError(f"'{key}' expects {count} numbers, got {len(vals)}", lineno)
        return vals

    if slit_indices and sorted(slit_indices) != list(range(1, len(slit_indices) + 1)):
        raise ConfigError("slit indices must be contiguous starting at 1")
    slits = []
    for idx in sorted(slit_indices):
        fields = {}
        for name, count in _SLIT_FIELDS.items():
            key = f"slit.{idx}.{name}"
            if key not in entries:
                raise ConfigError(f"missing required key '{key}'")
            vals = get_floats(key, count)
            fields[name] = vals if count > 1 else vals[0]
        slits.append(SlitParams(**fields))

    directional = None
    if any(k.startswith("directional.") for k in entries):
        if "directional.e_max" not in entries:
            raise ConfigError("missing required key 'directional.e_max'")
        directional = DirectionalParams(
            e_max=get_float("directional.e_max"),
            normal_v=(
                get_floats("directional.normal_v", 3)
                if "directional.normal_v" in entries
                else None
            ),
            normal_omega=(
                get_floats("directional.normal_omega", 3)
                if "directional.normal_omega" in entries
                else None
            ),
        )

    filter_raw, filter_line = entries["run.filter"]
    if filter_raw not in ("on", "off"):
        raise ConfigError("run.filter must be 'on' or 'off'", filter_line)

    times = get_floats("reference.times")
    flat = get_floats("reference.waypoints")
    if len(flat) != 3 * len(times):
        raise ConfigError("reference.waypoints must hold 3 values per reference time")
    waypoints = tuple(tuple(flat[3 * i : 3 * i + 3]) for i in range(len(times)))

    try:
        return ScenarioConfig(
            kind=get_str("scenario.kind"),
            name=get_str("scenario.name"),
            duration=get_float("run.duration"),
            dt=get_float("run.dt"),
            filter_enabled=filter_raw == "on",
            infeasibility=get_str("run.infeasibility"),
            radius=get_float("body.radius"),
            mass=get_float("body.mass"),
            gain_attitude=get_float("gains.attitude"),
            gain_position=get_float("gains.position"),
            gain_damping=get_floats("gains.damping", 6),
            classk_alpha=get_float("cbf.classk"),
            alpha_e=get_float("cbf.alpha_e") if "cbf.alpha_e" in entries else None,
            slits=tuple(slits),
            directional=directional,
            ref_times=times,
            ref_waypoints=waypoints,
            ref_attitude=get_floats("reference.attitude", 3),
            initial_position=get_floats("initial.position", 3),
            initial_attitude=get_floats("initial.attitude", 3),
            initial_omega=get_floats("initial.omega", 3),
            initial_velocity=get_floats("initial.velocity", 3),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def apply_overrides(
    config: ScenarioConfig,
    dt: float | None = None,
    duration: float | None = None,
    emax: float | None = None,
    no_filter: bool = False,
) -> ScenarioConfig:
    """Apply CLI-style overrides that do not change derived preset values."""
    if dt is not None:
        if not dt > 0.0:
            raise ConfigError(f"dt must be positive, got {dt}")
        config = replace(config, dt=float(dt))
    if duration is not None:
        if not duration >= 0.0:
            raise ConfigError(f"duration must be nonnegative, got {duration}")
        config = replace(config, duration=float(duration))
    if emax is not None:
        if config.directional is None:
            raise ConfigError("emax override needs a directional barrier")
        if not emax > 0.0:
            raise ConfigError(f"emax must be positive, got {emax}")
        config = replace(config, directional=replace(config.directional, e_max=float(emax)))
    if no_filter:
        config = replace(config, filter_enabled=False)
    return config
