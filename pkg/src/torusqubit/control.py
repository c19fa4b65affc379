"""Pulse-sequence synthesis for state preparation and single-qubit gates.

Sequences are lists of rotating-frame drive segments (see dynamics.PulseSpec)
plus an optional trailing frame phase.  The frame phase realizes virtual
phase gates exactly: it relabels the |1> axis of the rotating frame, which
is standard practice and costs no evolution time.  A physical detuned-wait
realization is provided as an alternative.

Gate verification composes each segment's exact RWA propagator (or its
lab-frame integration, transformed back into the segment's rotating frame)
and compares against the ideal matrix with the phase-insensitive fidelity
|Tr(G^dagger U)| / 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    QuantumState,
    PulseSpec,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    evolve_labframe,
    rotating_frame,
    rwa_unitary,
)
from .model import FieldConfig
from .reduction import QubitParameters, rabi_frequency

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def canonical_phase(matrix: np.ndarray) -> np.ndarray:
    """Rescale a unitary so its first nonzero element is real positive."""
    flat = matrix.flatten()
    for value in flat:
        if abs(value) > 1e-12:
            return matrix * (abs(value) / value)
    raise ValueError("matrix is numerically zero")


def phase_insensitive_fidelity(target: np.ndarray, actual: np.ndarray) -> float:
    """|Tr(G^dagger U)| / 2: unit iff U equals G up to a global phase."""
    return abs(np.trace(target.conj().T @ actual)) / 2.0


@dataclass(frozen=True)
class GateSpec:
    """A named single-qubit gate with its canonicalized ideal matrix."""

    name: str
    ideal_matrix: np.ndarray

    def __post_init__(self) -> None:
        mat = np.asarray(self.ideal_matrix, dtype=complex)
        if mat.shape != (2, 2):
            raise ValueError("ideal_matrix must be 2x2")
        if np.abs(mat @ mat.conj().T - np.eye(2)).max() > 1e-12:
            raise ValueError("ideal_matrix must be unitary to 1e-12")
        object.__setattr__(self, "ideal_matrix", canonical_phase(mat))

    @classmethod
    def hadamard(cls) -> "GateSpec":
        return cls("Hadamard", HADAMARD)

    @classmethod
    def phase_gate(cls, eta: float) -> "GateSpec":
        return cls(f"PhaseGate({eta:g})", np.diag([1.0, cmath.exp(1j * eta)]))

    @classmethod
    def rotation(cls, axis: str, angle: float) -> "GateSpec":
        sigma = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}[axis]
        mat = math.cos(angle / 2) * np.eye(2) - 1j * math.sin(angle / 2) * sigma
        return cls(f"Rotation({axis},{angle:g})", mat)

    @classmethod
    def identity(cls) -> "GateSpec":
        return cls("Identity", np.eye(2, dtype=complex))


@dataclass(frozen=True)
class PulseSequence:
    """Ordered drive segments plus a trailing virtual frame phase.

    frame_phase is applied after the listed pulses as diag(1, e^{i phase});
    it is exact in both evaluation modes.
    """

    pulses: tuple[PulseSpec, ...]
    frame_phase: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.frame_phase):
            raise ValueError("frame_phase must be finite")
        object.__setattr__(self, "pulses", tuple(self.pulses))

    @property
    def total_duration(self) -> float:
        return sum(p.duration for p in self.pulses)


def target_state(theta: float, eta: float) -> QuantumState:
    """The preparation target sin(theta/2)|0> + e^{i eta} cos(theta/2)|1>."""
    return QuantumState.of(math.sin(theta / 2), cmath.exp(1j * eta) * math.cos(theta / 2))


def prepare_state(theta: float, eta: float, qubit: QubitParameters, E0: float) -> PulseSequence:
    """Resonant pulse taking |0> to the (theta, eta) target up to global phase.

    A resonant segment drives |0> to cos(Omega t/2)|0> +
    e^{-i(phi + pi/2)} sin(Omega t/2)|1>, so matching the target requires
    cos(Omega t / 2) = sin(theta/2) and phi = -eta - pi/2 (mod 2 pi):
    t = (2/Omega) arccos(sin(theta/2)).
    """
    if not 0.0 < theta <= math.pi:
        raise ValueError("theta must lie in (0, pi]")
    if not 0.0 <= eta <= math.pi:
        raise ValueError("eta must lie in [0, pi]")
    omega_rabi = rabi_frequency(qubit.mu_dipole, E0)
    if omega_rabi <= 0:
        raise ValueError("drive amplitude must be positive")
    duration = (2.0 / omega_rabi) * math.acos(min(1.0, math.sin(theta / 2)))
    phi = (-eta - math.pi / 2) % (2.0 * math.pi)
    return PulseSequence(
        pulses=(PulseSpec(rabi_Omega=omega_rabi, detuning_Delta=0.0, phase_phi=phi, duration=duration),)
    )


def hadamard_sequence(qubit: QubitParameters, E0: float, style: str = "tilted") -> PulseSequence:
    """Pulse realization of the Hadamard gate.

    "tilted": one segment at detuning Delta = -Omega, phase 0, duration
    pi / (sqrt(2) Omega).  Its rotation axis is (1, 0, 1)/sqrt(2) (with the
    ground state at z = +1), and the rotation angle is pi, which is the
    Hadamard reflection up to a global phase.

    "composite": Ry(pi/2) then a pi pulse about x, since X Ry(pi/2) = H.
    """
    omega_rabi = rabi_frequency(qubit.mu_dipole, E0)
    if omega_rabi <= 0:
        raise ValueError("drive amplitude must be positive")
    if style == "tilted":
        return PulseSequence(
            pulses=(
                PulseSpec(
                    rabi_Omega=omega_rabi,
                    detuning_Delta=-omega_rabi,
                    phase_phi=0.0,
                    duration=math.pi / (math.sqrt(2.0) * omega_rabi),
                ),
            )
        )
    if style == "composite":
        quarter = PulseSpec(
            rabi_Omega=omega_rabi,
            detuning_Delta=0.0,
            phase_phi=3.0 * math.pi / 2,  # rotation axis +y
            duration=math.pi / (2.0 * omega_rabi),
        )
        flip = PulseSpec(
            rabi_Omega=omega_rabi,
            detuning_Delta=0.0,
            phase_phi=0.0,
            duration=math.pi / omega_rabi,
        )
        return PulseSequence(pulses=(quarter, flip))
    raise ValueError(f"unknown Hadamard style {style!r}")


def phase_gate_sequence(
    eta: float, qubit: QubitParameters, virtual: bool = True
) -> PulseSequence:
    """Relative-phase gate R_eta: a|0> + b|1> -> a|0> + b e^{i eta}|1>.

    Virtual realization (default): a frame-phase update, exact and free.
    Physical realization: a drive-off wait at detuning Delta_free, whose
    propagator diag(1, e^{-i Delta t}) is exact under both evaluation modes;
    Delta_free < 0 keeps the wait duration t = eta/|Delta_free| positive.
    """
    if not 0.0 <= eta < 2.0 * math.pi:
        raise ValueError("eta must lie in [0, 2 pi)")
    if virtual:
        return PulseSequence(pulses=(), frame_phase=eta)
    delta_free = -1e-3 * qubit.omega
    duration = eta / abs(delta_free)
    return PulseSequence(
        pulses=(
            PulseSpec(rabi_Omega=0.0, detuning_Delta=delta_free, phase_phi=0.0, duration=duration),
        )
    )


def _labframe_segment_unitary(
    pulse: PulseSpec, qubit: QubitParameters, tol: float
) -> np.ndarray:
    """Lab-frame propagator of one segment, rotated into its drive frame.

    The segment's drive runs at omega_rf = omega - Delta with the segment
    clock starting at zero; integrating both basis states and applying
    R(t) = exp(i omega_rf t sigma_+ sigma_-) yields the unitary comparable
    with the segment's RWA propagator.
    """
    omega_rf = qubit.omega - pulse.detuning_Delta
    e0 = pulse.rabi_Omega / rabi_frequency(qubit.mu_dipole, 1.0) if pulse.rabi_Omega else 0.0
    config = FieldConfig(B=qubit.B, E0=e0, omega_rf=omega_rf, phi=pulse.phase_phi)
    columns = []
    for basis_index in (0, 1):
        amp = np.zeros(2, dtype=complex)
        amp[basis_index] = 1.0
        out = evolve_labframe(QuantumState(amp), qubit, config, pulse.duration, tol=tol)
        out = rotating_frame(out, omega_rf, pulse.duration)
        columns.append(out.amplitudes)
    return np.column_stack(columns)


def gate_unitary(
    seq: PulseSequence,
    qubit: QubitParameters,
    mode: str = "rwa",
    tol: float = 1e-9,
) -> np.ndarray:
    """Composed evolution operator of a sequence, including the frame phase."""
    if mode not in ("rwa", "labframe"):
        raise ValueError(f"unknown mode {mode!r}")
    unitary = np.eye(2, dtype=complex)
    for pulse in seq.pulses:
        if mode == "rwa":
            segment = rwa_unitary(pulse)
        else:
            segment = _labframe_segment_unitary(pulse, qubit, tol)
        unitary = segment @ unitary
    if seq.frame_phase:
        unitary = np.diag([1.0, cmath.exp(1j * seq.frame_phase)]) @ unitary
    return unitary


def apply_sequence(state: QuantumState, seq: PulseSequence, qubit: QubitParameters | None = None, mode: str = "rwa", tol: float = 1e-9) -> QuantumState:
    """Evolve a state through a sequence (RWA mode needs no qubit context)."""
    if mode == "rwa":
        amp = state.amplitudes
        for pulse in seq.pulses:
            amp = rwa_unitary(pulse) @ amp
        if seq.frame_phase:
            amp = np.array([amp[0], cmath.exp(1j * seq.frame_phase) * amp[1]])
        return QuantumState(amp)
    if qubit is None:
        raise ValueError("labframe mode requires qubit parameters")
    return QuantumState(gate_unitary(seq, qubit, mode=mode, tol=tol) @ state.amplitudes)
