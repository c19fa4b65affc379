"""Command-line front end: config handling, subcommands, reproducible artifacts.

Each subcommand writes one machine-readable data file (CSV or JSON) plus a
sidecar manifest recording the resolved configuration, software version,
unit scales, and any warnings.  Identical config and seed give byte-identical
data files; timestamps live only in the manifest.

Presets name the geometries and operating point used throughout:
fig3a (r=350 A, R=900 A), fig3b (r=350 A, R=3600 A), and fig5
(fig3a at B=0.45 T, E0=100 V/m).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .control import (
    GateSpec,
    PulseSequence,
    apply_sequence,
    gate_unitary,
    hadamard_sequence,
    phase_gate_sequence,
    phase_insensitive_fidelity,
    prepare_state,
    target_state,
)
from .dynamics import (
    PulseSpec,
    QuantumState,
    bloch,
    evolve_rwa,
    ladder_trajectory,
    leakage_probe,
)
from .errors import (
    ErrorModel,
    average_gate_infidelity,
    mitigation_sweep,
    reference_field_sweep,
)
from .model import HBAR, FieldConfig, TorusGeometry, UnitSystem
from .potential import PotentialParams, sample_profile
from .reduction import (
    NUMERICAL_TAYLOR,
    CLOSED_FORM,
    coefficients_numerical,
    coefficients_closed_form,
    qubit_parameters,
    rabi_frequency,
)
from .spectral import (
    Discretization,
    DEFAULT_LOC_THRESHOLD,
    WindowNotFoundError,
    initialization_window,
    solve_sector,
    sweep_field,
)

ANGSTROM = 1e-10

PRESETS = {
    "fig3a": {"r_minor": 350 * ANGSTROM, "R_major": 900 * ANGSTROM},
    "fig3b": {"r_minor": 350 * ANGSTROM, "R_major": 3600 * ANGSTROM},
    "fig5": {
        "r_minor": 350 * ANGSTROM,
        "R_major": 900 * ANGSTROM,
        "B": 0.45,
        "E0": 100.0,
    },
}

_CONFIG_KEYS = {
    "preset",
    "r_minor",
    "R_major",
    "mass_ratio",
    "B",
    "E0",
    "n_points",
    "stencil_order",
    "seed",
    "source",
    "loc_threshold",
}


@dataclass
class RunConfig:
    """Resolved run configuration shared by all subcommands."""

    r_minor: float = 350 * ANGSTROM
    R_major: float = 900 * ANGSTROM
    mass_ratio: float = 0.3
    B: float = 0.0
    E0: float = 100.0
    n_points: int = 1024
    stencil_order: int = 2
    seed: int = 12345
    source: str = NUMERICAL_TAYLOR
    loc_threshold: float = DEFAULT_LOC_THRESHOLD

    def violations(self) -> list[str]:
        problems = []
        if not (math.isfinite(self.r_minor) and self.r_minor > 0):
            problems.append("r_minor must be finite and positive")
        if not (math.isfinite(self.R_major) and self.R_major > 0):
            problems.append("R_major must be finite and positive")
        if self.r_minor >= self.R_major:
            problems.append("torus must satisfy r_minor < R_major (non-self-intersecting)")
        if self.mass_ratio <= 0:
            problems.append("mass_ratio must be positive")
        if self.B < 0:
            problems.append("B must be non-negative")
        if self.E0 < 0:
            problems.append("E0 must be non-negative")
        if self.n_points < 64:
            problems.append("n_points must be >= 64")
        if self.stencil_order not in (2, 4):
            problems.append("stencil_order must be 2 or 4")
        if self.source not in (NUMERICAL_TAYLOR, CLOSED_FORM):
            problems.append(f"source must be {NUMERICAL_TAYLOR!r} or {CLOSED_FORM!r}")
        if not 0.0 < self.loc_threshold < 1.0:
            problems.append("loc_threshold must lie in (0, 1)")
        return problems

    def geometry(self) -> TorusGeometry:
        return TorusGeometry(self.r_minor, self.R_major, self.mass_ratio)

    def discretization(self) -> Discretization:
        return Discretization(self.n_points, self.stencil_order)


class ConfigError(ValueError):
    pass


def load_config(args: argparse.Namespace) -> RunConfig:
    """defaults <- preset <- config file <- CLI flags, rejecting unknown keys."""
    merged: dict = {}
    file_preset = None
    config_path = getattr(args, "config", None)
    if config_path:
        raw = json.loads(Path(config_path).read_text(encoding="utf-8"))
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        file_preset = raw.pop("preset", None)
        merged.update(raw)

    preset = getattr(args, "preset", None) or file_preset
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(f"unknown preset {preset!r}; choose from {sorted(PRESETS)}")
        merged = {**PRESETS[preset], **merged}

    for key, flag in [
        ("r_minor", "r"),
        ("R_major", "R"),
        ("mass_ratio", "mass_ratio"),
        ("B", "B"),
        ("E0", "E0"),
        ("n_points", "n_points"),
        ("stencil_order", "stencil_order"),
        ("seed", "seed"),
        ("source", "source"),
        ("loc_threshold", "loc_threshold"),
    ]:
        value = getattr(args, flag, None)
        if value is not None:
            merged[key] = value

    config = RunConfig(**merged)
    problems = config.violations()
    if problems:
        raise ConfigError("invalid configuration:\n  - " + "\n  - ".join(problems))
    return config


def parse_range(spec: str) -> np.ndarray:
    """Parse "a:b:n" into n linearly spaced values."""
    try:
        lo_s, hi_s, n_s = spec.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as exc:
        raise ConfigError(f"range must look like a:b:n, got {spec!r}") from exc
    if n < 2:
        raise ConfigError("range needs at least 2 points")
    return np.linspace(lo, hi, n)


def write_manifest(
    path: Path, command: str, config: RunConfig, warnings: list[str], results: dict | None = None
) -> None:
    units = UnitSystem.for_geometry(config.geometry())
    manifest = {
        "command": command,
        "config": dataclasses.asdict(config),
        "software_version": __version__,
        "created": datetime.now(timezone.utc).isoformat(),
        "unit_scales": {
            "energy_J": units.energy_scale,
            "length_m": units.length_scale,
            "time_s": units.time_scale,
        },
        "warnings": warnings,
        "results": results or {},
    }
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _write_output(
    out_dir: Path, name: str, text: str, command: str, config: RunConfig,
    warnings: list[str], results: dict | None = None,
) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    data_path = out_dir / name
    data_path.write_text(text, encoding="utf-8")
    write_manifest(
        data_path.with_suffix(data_path.suffix + ".manifest.json"),
        command, config, warnings, results,
    )
    return data_path


def _json_dumps(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _out_dir(args) -> Path:
    return Path(getattr(args, "output_dir", "."))


def _qubit_factory(config: RunConfig):
    geom = config.geometry()
    source = config.source

    def factory(B: float, E0: float):
        coeffs = coefficients_closed_form(geom, B) if source == CLOSED_FORM else coefficients_numerical(geom, B)
        return qubit_parameters(coeffs, geom, B)

    return factory


def _synthesize(gate_arg: str, qubit, E0: float) -> tuple[PulseSequence, GateSpec | None, QuantumState | None]:
    """Map a --gate argument to (sequence, ideal gate, ideal prepared state)."""
    if gate_arg == "hadamard":
        return hadamard_sequence(qubit, E0), GateSpec.hadamard(), None
    if gate_arg.startswith("phase:"):
        eta = float(gate_arg.split(":", 1)[1])
        return phase_gate_sequence(eta, qubit), GateSpec.phase_gate(eta), None
    if gate_arg.startswith("prep:"):
        theta_s, eta_s = gate_arg.split(":", 1)[1].split(",")
        theta, eta = float(theta_s), float(eta_s)
        return prepare_state(theta, eta, qubit, E0), None, target_state(theta, eta)
    raise ConfigError(f"unknown gate {gate_arg!r}; use hadamard, phase:ETA, or prep:THETA,ETA")


# ---------------------------------------------------------------- subcommands


def cmd_potential(args, config: RunConfig) -> int:
    params = PotentialParams(
        geom=config.geometry(), B=config.B, E_static=args.E_static, m_orbital=args.m
    )
    profile = sample_profile(params, config.n_points)
    _write_output(
        _out_dir(args), "potential.csv", profile.to_csv(), "potential", config, []
    )
    print(f"wrote {_out_dir(args) / 'potential.csv'}")
    return 0


def cmd_spectrum(args, config: RunConfig) -> int:
    units = UnitSystem.for_geometry(config.geometry())
    params = PotentialParams(geom=config.geometry(), B=config.B, m_orbital=args.m)
    spec = solve_sector(params, config.discretization(), k=args.levels,
                        loc_threshold=config.loc_threshold)
    lines = ["# B in T, energy in J", "B,m,n,energy,bound,localization"]
    for state in spec.states:
        energy_j = units.from_internal(state.energy, "energy")
        lines.append(
            f"{config.B!r},{state.m_orbital},{state.level_index},{energy_j!r},"
            f"{str(state.bound).lower()},{state.localization!r}"
        )
    results = {"barrier_energy_J": units.from_internal(spec.barrier_energy, "energy")}
    if args.dump_wavefunctions:
        payload = {
            "theta": list(map(float, config.discretization().theta)),
            "states": [
                {
                    "m": s.m_orbital,
                    "n": s.level_index,
                    "energy_J": units.from_internal(s.energy, "energy"),
                    "bound": s.bound,
                    "localization": s.localization,
                    "wavefunction": list(map(float, s.wavefunction)),
                }
                for s in spec.states
            ],
        }
        _write_output(_out_dir(args), "spectrum_states.json", _json_dumps(payload),
                      "spectrum", config, [])
    _write_output(_out_dir(args), "spectrum.csv", "\n".join(lines) + "\n",
                  "spectrum", config, [], results)
    print(f"wrote {_out_dir(args) / 'spectrum.csv'}")
    return 0


def cmd_sweep_b(args, config: RunConfig) -> int:
    units = UnitSystem.for_geometry(config.geometry())
    values = parse_range(args.b_range)
    m_list = [int(m) for m in args.m_list.split(",")]
    workers = int(os.environ.get("TORUSQUBIT_WORKERS", "1"))
    disc = config.discretization()

    if workers > 1:
        # Field points are independent; merge preserves the input order so
        # the output is identical to the serial path.
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            merged = list(pool.map(_sweep_single, [
                (config, m_list, float(v), args.levels) for v in values
            ]))
        spectra = [spec for group in merged for spec in group]
    else:
        spectra = sweep_field(config.geometry(), m_list, values, disc,
                              k=args.levels, loc_threshold=config.loc_threshold)

    lines = ["# B in T, energy in J", "B,m,n,energy,bound,localization"]
    for spec in spectra:
        for state in spec.states:
            energy_j = units.from_internal(state.energy, "energy")
            lines.append(
                f"{spec.params.B!r},{state.m_orbital},{state.level_index},{energy_j!r},"
                f"{str(state.bound).lower()},{state.localization!r}"
            )
    _write_output(_out_dir(args), "sweep_b.csv", "\n".join(lines) + "\n",
                  "sweep-b", config, [])
    print(f"wrote {_out_dir(args) / 'sweep_b.csv'}")
    return 0


def _sweep_single(packed):
    config, m_list, value, levels = packed
    disc = config.discretization()
    out = []
    for m in m_list:
        params = PotentialParams(geom=config.geometry(), B=value, m_orbital=m)
        out.append(solve_sector(params, disc, k=levels, loc_threshold=config.loc_threshold))
    return out


def cmd_window(args, config: RunConfig) -> int:
    try:
        b_min, b_max = initialization_window(
            config.geometry(), config.discretization(),
            B_scan_max=args.scan_max, loc_threshold=config.loc_threshold,
        )
    except WindowNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    payload = {"B_min_T": b_min, "B_max_T": b_max}
    _write_output(_out_dir(args), "window.json", _json_dumps(payload),
                  "window", config, [], payload)
    print(f"window: [{b_min:.4f}, {b_max:.4f}] T")
    return 0


def cmd_qubit_params(args, config: RunConfig) -> int:
    geom = config.geometry()
    numeric = coefficients_numerical(geom, config.B)
    closed = coefficients_closed_form(geom, config.B)
    coeffs = closed if config.source == CLOSED_FORM else numeric
    qubit = qubit_parameters(coeffs, geom, config.B)
    omega_rabi = rabi_frequency(qubit.mu_dipole, config.E0)
    payload = {
        "B_T": config.B,
        "E0_V_per_m": config.E0,
        "beta_sq": coeffs.beta_sq,
        "delta": coeffs.delta_anh,
        "epsilon": coeffs.epsilon_const,
        "omega_rad_per_s": qubit.omega,
        "alpha_J": qubit.alpha_anh,
        "mu_C_m": qubit.mu_dipole,
        "Omega_rad_per_s": omega_rabi,
        "anharmonicity_ratio": qubit.anharmonicity_ratio,
        "zero_point_spread": qubit.zero_point_spread,
        "default_source": coeffs.source,
        "sources": {
            "numerical_taylor": {
                "beta_sq": numeric.beta_sq,
                "delta": numeric.delta_anh,
                "epsilon": numeric.epsilon_const,
            },
            "closed_form": {
                "beta_sq": closed.beta_sq,
                "delta": closed.delta_anh,
                "epsilon": closed.epsilon_const,
            },
        },
    }
    _write_output(_out_dir(args), "qubit_params.json", _json_dumps(payload),
                  "qubit-params", config, [])
    print(f"omega = {qubit.omega:.6e} rad/s, Omega(E0) = {omega_rabi:.6e} rad/s")
    return 0


def cmd_evolve(args, config: RunConfig) -> int:
    factory = _qubit_factory(config)
    qubit = factory(config.B, config.E0)
    omega_rabi = args.rabi if args.rabi is not None else rabi_frequency(qubit.mu_dipole, config.E0)
    duration = args.duration if args.duration is not None else math.pi / (2.0 * omega_rabi)
    pulse = PulseSpec(
        rabi_Omega=omega_rabi,
        detuning_Delta=args.detuning,
        phase_phi=args.phase,
        duration=duration,
    )
    results = {"pulse": dataclasses.asdict(pulse)}
    if args.three_level:
        # full lab-frame ladder: Bloch coordinates of the qubit-subspace
        # projection plus the raw three populations
        field = FieldConfig(
            B=config.B, E0=omega_rabi * HBAR / qubit.mu_dipole,
            omega_rf=qubit.omega - args.detuning, phi=args.phase,
        )
        times, amplitudes = ladder_trajectory(qubit, field, duration, args.samples)
        lines = ["# t in s", "t,x,y,z,p0,p1,p2"]
        for time, amp in zip(times, amplitudes):
            p0, p1, p2 = (float(abs(a) ** 2) for a in amp)
            weight = math.sqrt(p0 + p1) or 1.0
            qubit_part = QuantumState(np.array([amp[0], amp[1]]) / weight)
            point = bloch(qubit_part)
            lines.append(
                f"{float(time)!r},{point.x!r},{point.y!r},{point.z!r},"
                f"{p0!r},{p1!r},{p2!r}"
            )
    else:
        lines = ["# t in s", "t,x,y,z,p0,p1"]
        state = QuantumState.ground()
        for time in np.linspace(0.0, pulse.duration, args.samples):
            partial = PulseSpec(pulse.rabi_Omega, pulse.detuning_Delta, pulse.phase_phi, float(time))
            evolved = evolve_rwa(state, partial)
            point = bloch(evolved)
            p0, p1 = (float(p) for p in evolved.populations())
            lines.append(f"{float(time)!r},{point.x!r},{point.y!r},{point.z!r},{p0!r},{p1!r}")
    _write_output(_out_dir(args), "trajectory.csv", "\n".join(lines) + "\n",
                  "evolve", config, [], results)
    print(f"wrote {_out_dir(args) / 'trajectory.csv'}")
    return 0


def cmd_gate(args, config: RunConfig) -> int:
    factory = _qubit_factory(config)
    qubit = factory(config.B, config.E0)
    seq, ideal, target = _synthesize(args.gate, qubit, config.E0)
    unitary = gate_unitary(seq, qubit, mode=args.mode, tol=args.tol)
    warnings: list[str] = []
    if ideal is not None:
        fidelity = phase_insensitive_fidelity(ideal.ideal_matrix, unitary)
    else:
        prepared = apply_sequence(QuantumState.ground(), seq, qubit, mode=args.mode, tol=args.tol)
        fidelity = target.fidelity(prepared)
    leakage = None
    if args.leakage:
        drive = FieldConfig(
            B=config.B, E0=config.E0,
            omega_rf=qubit.omega - (seq.pulses[0].detuning_Delta if seq.pulses else 0.0),
            phi=seq.pulses[0].phase_phi if seq.pulses else 0.0,
        )
        leakage = leakage_probe(qubit, drive, seq.total_duration)
    payload = {
        "gate": args.gate,
        "mode": args.mode,
        "sequence": {
            "pulses": [dataclasses.asdict(p) for p in seq.pulses],
            "frame_phase": seq.frame_phase,
        },
        "unitary": [[[value.real, value.imag] for value in row] for row in unitary],
        "fidelity_to_ideal": fidelity,
    }
    if leakage is not None:
        payload["max_leakage"] = leakage
    _write_output(_out_dir(args), "gate.json", _json_dumps(payload),
                  "gate", config, warnings)
    print(f"{args.gate} ({args.mode}): fidelity_to_ideal = {fidelity:.12f}")
    return 0


def cmd_fidelity(args, config: RunConfig) -> int:
    factory = _qubit_factory(config)
    b0 = args.B0 if args.B0 is not None else config.B
    e0 = args.E0_ref if args.E0_ref is not None else config.E0
    if b0 <= 0:
        raise ConfigError("fidelity scan needs a positive reference B0 (set --B0 or preset fig5)")
    qubit = factory(b0, e0)
    seq, _, _ = _synthesize(args.gate, qubit, e0)
    window = None
    if args.check_window:
        window = initialization_window(config.geometry(), config.discretization(),
                                       loc_threshold=config.loc_threshold)
    deltas = parse_range(args.range)
    lines = ["delta,mean_infidelity,max_infidelity"]
    all_warnings: list[str] = []
    for delta in deltas:
        db = float(delta) if args.scan == "dB" else 0.0
        de = float(delta) if args.scan == "dE" else 0.0
        model = ErrorModel(delta_B_rel=db, delta_E_rel=de, B0=b0, E0=e0)
        report = average_gate_infidelity(
            seq, factory, model, args.samples, config.seed, mode=args.mode, window=window
        )
        all_warnings.extend(report.warnings)
        lines.append(f"{float(delta)!r},{report.mean_infidelity!r},{report.max_infidelity!r}")
    _write_output(_out_dir(args), "fidelity.csv", "\n".join(lines) + "\n",
                  "fidelity", config, sorted(set(all_warnings)))
    print(f"wrote {_out_dir(args) / 'fidelity.csv'}")
    return 0


def cmd_mitigate(args, config: RunConfig) -> int:
    factory = _qubit_factory(config)
    b0 = args.B0 if args.B0 is not None else config.B
    if b0 <= 0:
        raise ConfigError("mitigation sweep needs a positive reference B0")

    def synth(qubit, e0):
        seq, _, _ = _synthesize(args.gate, qubit, e0)
        return seq

    if args.sweep == "E0":
        lo, hi, n = args.e0_range.split(":")
        if args.spacing == "log":
            grid = np.geomspace(float(lo), float(hi), int(n))
        else:
            grid = np.linspace(float(lo), float(hi), int(n))
        rows = mitigation_sweep(
            synth, factory, b0, [float(v) for v in grid],
            delta_B_rel=args.delta_b, delta_E_rel=args.delta_e,
            n_samples=args.samples, seed=config.seed, mode=args.mode,
        )
        key = "E0"
    else:
        grid = parse_range(args.b0_range)
        rows = reference_field_sweep(
            synth, factory, [float(v) for v in grid], E0=config.E0,
            delta_B_rel=args.delta_b, delta_E_rel=args.delta_e,
            n_samples=args.samples, seed=config.seed, mode=args.mode,
        )
        key = "B0"

    lines = [f"{key},mean_infidelity,max_infidelity"]
    for row in rows:
        lines.append(f"{row[key]!r},{row['mean_infidelity']!r},{row['max_infidelity']!r}")
    best = next(r for r in rows if r["is_argmin"])
    results = {f"argmin_{key}": best[key], "argmin_mean_infidelity": best["mean_infidelity"]}
    _write_output(_out_dir(args), "mitigate.csv", "\n".join(lines) + "\n",
                  "mitigate", config, [], results)
    print(f"argmin: {key} = {best[key]:.6g}, mean infidelity = {best['mean_infidelity']:.3e}")
    return 0


# ----------------------------------------------------------------- arg parsing


def build_parser() -> argparse.ArgumentParser:
    # global options live on a parent parser shared with every subcommand so
    # they are accepted both before and after the subcommand name; SUPPRESS
    # keeps an unset option from clobbering a value parsed earlier
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--preset", choices=sorted(PRESETS), help="named geometry/field preset")
    common.add_argument("--output-dir", dest="output_dir", help="directory for output artifacts")
    common.add_argument("--r", type=float, dest="r", help="minor radius [m]")
    common.add_argument("--R", type=float, dest="R", help="major radius [m]")
    common.add_argument("--mass-ratio", type=float, dest="mass_ratio")
    common.add_argument("--B", type=float, dest="B", help="static magnetic field [T]")
    common.add_argument("--E0", type=float, dest="E0", help="drive amplitude [V/m]")
    common.add_argument("--n-points", type=int, dest="n_points")
    common.add_argument("--stencil-order", type=int, dest="stencil_order", choices=(2, 4))
    common.add_argument("--seed", type=int, dest="seed")
    common.add_argument("--source", dest="source", choices=(NUMERICAL_TAYLOR, CLOSED_FORM))
    common.add_argument("--loc-threshold", type=float, dest="loc_threshold")

    parser = argparse.ArgumentParser(
        prog="torusqubit",
        description="Simulator of a bound-state qubit on a graphene nanotorus",
        parents=[common],
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", help="potential profile CSV", parents=[common])
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--E-static", type=float, default=0.0, dest="E_static")
    p.set_defaults(func=cmd_potential)

    p = sub.add_parser("spectrum", help="lowest eigenpairs of one sector", parents=[common])
    p.add_argument("--m", type=int, default=0)
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--dump-wavefunctions", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep-b", help="bound-state energies vs magnetic field",
                       parents=[common])
    p.add_argument("--b-range", default="0:2:41", help="a:b:n in tesla")
    p.add_argument("--m-list", default="0", help="comma-separated orbital numbers")
    p.add_argument("--levels", type=int, default=6)
    p.set_defaults(func=cmd_sweep_b)

    p = sub.add_parser("window", help="two-bound-state initialization window",
                       parents=[common])
    p.add_argument("--scan-max", type=float, default=2.0)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("qubit-params", help="two-level reduction report", parents=[common])
    p.set_defaults(func=cmd_qubit_params)

    p = sub.add_parser("evolve", help="Bloch trajectory CSV for one pulse", parents=[common])
    p.add_argument("--rabi", type=float, default=None, help="Rabi rate [rad/s]")
    p.add_argument("--detuning", type=float, default=0.0)
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--duration", type=float, default=None, help="[s]; default pi/(2 Omega)")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--three-level", action="store_true", dest="three_level",
                   help="integrate the anharmonic ladder and emit p2")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("gate", help="synthesize and verify a gate", parents=[common])
    p.add_argument("--gate", default="hadamard", help="hadamard | phase:ETA | prep:THETA,ETA")
    p.add_argument("--mode", choices=("rwa", "labframe"), default="rwa")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--leakage", action="store_true", help="also run the three-level probe")
    p.set_defaults(func=cmd_gate)

    p = sub.add_parser("fidelity", help="infidelity vs relative field error",
                       parents=[common])
    p.add_argument("--gate", default="hadamard")
    p.add_argument("--scan", choices=("dB", "dE"), default="dB")
    p.add_argument("--range", default="0:0.01:11", help="relative error a:b:n")
    p.add_argument("--B0", type=float, default=None)
    p.add_argument("--E0-ref", type=float, default=None, dest="E0_ref")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--mode", choices=("rwa", "labframe"), default="rwa")
    p.add_argument("--check-window", action="store_true")
    p.set_defaults(func=cmd_fidelity)

    p = sub.add_parser("mitigate", help="infidelity vs drive amplitude at fixed errors",
                       parents=[common])
    p.add_argument("--gate", default="hadamard")
    p.add_argument("--delta-b", type=float, default=5e-3, dest="delta_b")
    p.add_argument("--delta-e", type=float, default=0.0, dest="delta_e")
    p.add_argument("--sweep", choices=("E0", "B0"), default="E0")
    p.add_argument("--e0-range", default="100:10000:7", dest="e0_range")
    p.add_argument("--b0-range", default="0.4:0.9:6", dest="b0_range")
    p.add_argument("--spacing", choices=("linear", "log"), default="log")
    p.add_argument("--B0", type=float, default=None)
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--mode", choices=("rwa", "labframe"), default="rwa")
    p.set_defaults(func=cmd_mitigate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args)
    except (ConfigError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        return args.func(args, config)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
