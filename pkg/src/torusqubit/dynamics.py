"""Driven two-level dynamics: exact RWA rotations, lab-frame integration,
and a three-level leakage probe.

Conventions: basis (|0>, |1>) with |0> the ground state at the north pole
of the Bloch sphere (z = +1).  sigma_- = |0><1|, sigma_+ = |1><0|.  The
rotating-frame effective Hamiltonian of a drive segment is

    H_eff = hbar*Delta sigma_+ sigma_-
          + (hbar*Omega/2) (e^{i phi} sigma_- + e^{-i phi} sigma_+),

whose propagator is evaluated in closed form (a Rabi rotation).  Lab-frame
evolution integrates i hbar d|psi>/dt = H_dv(t) |psi> with

    H_dv(t) = hbar*omega sigma_+ sigma_-
            + hbar*Omega cos(omega_rf t + phi) (sigma_+ + sigma_-)

using an adaptive explicit Runge-Kutta scheme with embedded error estimate.
No renormalization is applied anywhere: norm drift is a test observable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .model import HBAR, FieldConfig
from .reduction import QubitParameters, rabi_frequency

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

_NORM_GUARD = 1e-4  # loose sanity guard; unitarity contracts live in tests


class IntegrationError(RuntimeError):
    """Raised when the lab-frame integrator cannot meet its tolerance."""


@dataclass(frozen=True)
class QuantumState:
    """Normalized amplitudes in the energy basis (two or three levels)."""

    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        amp = np.asarray(self.amplitudes, dtype=complex)
        if amp.ndim != 1 or amp.size not in (2, 3):
            raise ValueError("state must hold 2 or 3 complex amplitudes")
        if not np.all(np.isfinite(amp.view(float))):
            raise ValueError("amplitudes must be finite")
        if abs(np.vdot(amp, amp).real - 1.0) > _NORM_GUARD:
            raise ValueError(f"state norm deviates from 1 by more than {_NORM_GUARD}")
        object.__setattr__(self, "amplitudes", amp)

    @classmethod
    def ground(cls, dim: int = 2) -> "QuantumState":
        amp = np.zeros(dim, dtype=complex)
        amp[0] = 1.0
        return cls(amp)

    @classmethod
    def of(cls, *amplitudes: complex) -> "QuantumState":
        amp = np.asarray(amplitudes, dtype=complex)
        return cls(amp / np.linalg.norm(amp))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def overlap(self, other: "QuantumState") -> complex:
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def fidelity(self, other: "QuantumState") -> float:
        return abs(self.overlap(other)) ** 2

    def populations(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class PulseSpec:
    """One rotating-frame drive segment."""

    rabi_Omega: float  # [rad/s]
    detuning_Delta: float  # omega - omega_rf [rad/s]
    phase_phi: float  # [rad]
    duration: float  # [s]

    def __post_init__(self) -> None:
        for name in ("rabi_Omega", "detuning_Delta", "phase_phi", "duration"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.duration < 0:
            raise ValueError("duration must be non-negative")


@dataclass(frozen=True)
class BlochPoint:
    x: float
    y: float
    z: float


def rwa_unitary(pulse: PulseSpec) -> np.ndarray:
    """Exact propagator exp(-i H_eff t / hbar) of one segment.

    Writing H_eff/hbar = (Delta/2) I + (1/2) n . sigma with
    n = (Omega cos phi, -Omega sin phi, -Delta), the propagator is a Rabi
    rotation by angle Omega_R t about n-hat, Omega_R = sqrt(Omega^2+Delta^2),
    times the scalar phase e^{-i Delta t / 2}.
    """
    omega, delta, phi, t = (
        pulse.rabi_Omega,
        pulse.detuning_Delta,
        pulse.phase_phi,
        pulse.duration,
    )
    omega_r = math.hypot(omega, delta)
    if omega_r == 0.0 or t == 0.0:
        return np.eye(2, dtype=complex)
    half_angle = 0.5 * omega_r * t
    axis = (
        np.array([omega * math.cos(phi), -omega * math.sin(phi), -delta]) / omega_r
    )
    n_dot_sigma = axis[0] * SIGMA_X + axis[1] * SIGMA_Y + axis[2] * SIGMA_Z
    rot = math.cos(half_angle) * np.eye(2) - 1j * math.sin(half_angle) * n_dot_sigma
    return np.exp(-0.5j * delta * t) * rot


def evolve_rwa(state: QuantumState, pulse: PulseSpec) -> QuantumState:
    """Evolve a two-level state under one segment's effective Hamiltonian."""
    if state.amplitudes.size != 2:
        raise ValueError("evolve_rwa expects a two-level state")
    return QuantumState(rwa_unitary(pulse) @ state.amplitudes)


def _integrate(hamiltonian, psi0: np.ndarray, t: float, tol: float) -> np.ndarray:
    """Adaptive explicit RK (embedded DOP853) for i hbar dpsi/dt = H(t) psi."""
    if not 1e-12 <= tol <= 1e-6:
        raise ValueError("tol must lie in [1e-12, 1e-6]")

    def rhs(time, psi):
        return -1j / HBAR * (hamiltonian(time) @ psi)

    sol = solve_ivp(
        rhs,
        (0.0, t),
        psi0.astype(complex),
        method="DOP853",
        rtol=max(tol * 1e-1, 3e-14),
        atol=tol * 1e-3,
        dense_output=False,
    )
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    return sol.y[:, -1]


def evolve_labframe(
    state: QuantumState,
    qubit: QubitParameters,
    field: FieldConfig,
    t: float,
    tol: float = 1e-9,
) -> QuantumState:
    """Integrate the full driven two-level Hamiltonian in the lab frame.

    The drive amplitude is Omega(E0) = mu E0 / hbar with mu from the qubit
    reduction; omega_rf and phi come from the field configuration.  Norm
    drift of the result is bounded by ~10*tol and left in place.
    """
    if state.amplitudes.size != 2:
        raise ValueError("evolve_labframe expects a two-level state")
    if t < 0:
        raise ValueError("t must be non-negative")
    omega = qubit.omega
    rate = rabi_frequency(qubit.mu_dipole, field.E0)
    omega_rf, phi = field.omega_rf, field.phi

    h0 = HBAR * omega * np.diag([0.0, 1.0]).astype(complex)
    hx = HBAR * rate * SIGMA_X

    def hamiltonian(time: float) -> np.ndarray:
        return h0 + math.cos(omega_rf * time + phi) * hx

    psi = _integrate(hamiltonian, state.amplitudes, t, tol)
    return QuantumState(psi)


def rotating_frame(state: QuantumState, omega_rf: float, t: float) -> QuantumState:
    """Apply R(t) = exp(i omega_rf t sigma_+ sigma_-) to a lab-frame state."""
    amp = state.amplitudes.copy()
    amp[1] *= np.exp(1j * omega_rf * t)
    return QuantumState(amp)


def _ladder_operators() -> tuple[np.ndarray, np.ndarray]:
    """3x3 truncations of (a + a^dagger) and of its full cube.

    The cube's elements are those of the untruncated operator restricted to
    the lowest three levels: <1|X^3|0> = 3, <2|X^3|1> = 6*sqrt(2).
    """
    x = np.zeros((3, 3))
    x[0, 1] = x[1, 0] = 1.0
    x[1, 2] = x[2, 1] = math.sqrt(2.0)
    x3 = np.zeros((3, 3))
    x3[0, 1] = x3[1, 0] = 3.0
    x3[1, 2] = x3[2, 1] = 6.0 * math.sqrt(2.0)
    return x, x3


def leakage_probe(
    qubit: QubitParameters,
    field: FieldConfig,
    t: float,
    tol: float = 1e-9,
    initial: QuantumState | None = None,
    n_samples: int = 400,
) -> float:
    """Max population of the second excited level over a drive of duration t.

    The three-level ladder is (0, hbar*omega, 2*hbar*omega + 12*alpha): the
    12*alpha shift is the second difference of first-order quartic-term
    corrections <n|X^4|n> = 3(2n^2+2n+1), i.e. the amount by which the 1->2
    transition is detuned from the drive.  Drive matrix elements follow the
    dipole coupling e E r (s X - s^3/6 X^3) truncated to three levels.
    """
    if initial is None:
        initial = QuantumState.ground(dim=3)
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0.0:
        return float(np.abs(initial.amplitudes[2]) ** 2)
    _, amplitudes = ladder_trajectory(qubit, field, t, n_samples, tol=tol, initial=initial)
    return float(np.max(np.abs(amplitudes[:, 2]) ** 2))


def ladder_trajectory(
    qubit: QubitParameters,
    field: FieldConfig,
    t: float,
    n_samples: int,
    tol: float = 1e-9,
    initial: QuantumState | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Times and three-level amplitudes of the driven anharmonic ladder.

    Same model as leakage_probe; returns (times, amplitudes) with one row of
    three complex amplitudes per sample time.
    """
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    if initial is None:
        initial = QuantumState.ground(dim=3)
    if initial.amplitudes.size != 3:
        raise ValueError("ladder trajectory needs a three-level state")

    omega = qubit.omega
    alpha = qubit.alpha_anh
    s = qubit.zero_point_spread
    e_r = qubit.mu_dipole / (s - s**3 / 6.0)
    x, x3 = _ladder_operators()
    h0 = np.diag([0.0, HBAR * omega, 2.0 * HBAR * omega + 12.0 * alpha]).astype(complex)
    coupling = e_r * field.E0 * (s * x - (s**3 / 6.0) * x3)
    omega_rf, phi = field.omega_rf, field.phi

    def rhs(time, psi):
        h = h0 + math.cos(omega_rf * time + phi) * coupling
        return -1j / HBAR * (h @ psi)

    times = np.linspace(0.0, t, n_samples)
    sol = solve_ivp(
        rhs,
        (0.0, t),
        initial.amplitudes.astype(complex),
        method="DOP853",
        rtol=max(tol * 1e-1, 3e-14),
        atol=tol * 1e-3,
        t_eval=times,
    )
    if not sol.success:
        raise IntegrationError(f"integrator failed: {sol.message}")
    return times, sol.y.T


def bloch(state: QuantumState) -> BlochPoint:
    """Bloch vector with |0> at the north pole (z = +1)."""
    if state.amplitudes.size != 2:
        raise ValueError("bloch expects a two-level state")
    a0, a1 = state.amplitudes
    cross = np.conj(a0) * a1
    return BlochPoint(
        x=float(2.0 * cross.real),
        y=float(2.0 * cross.imag),
        z=float(abs(a0) ** 2 - abs(a1) ** 2),
    )


def trajectory(state: QuantumState, pulse: PulseSpec, n_samples: int) -> list[BlochPoint]:
    """Bloch-sphere samples of the RWA evolution at n uniform times."""
    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    points = []
    for time in np.linspace(0.0, pulse.duration, n_samples):
        partial = PulseSpec(
            rabi_Omega=pulse.rabi_Omega,
            detuning_Delta=pulse.detuning_Delta,
            phase_phi=pulse.phase_phi,
            duration=float(time),
        )
        points.append(bloch(evolve_rwa(state, partial)))
    return points
