"""Periodic 1D Schrodinger eigensolver and bound-state classification.

The tube-angle Hamiltonian H = -d^2/dtheta^2 + V(theta) (internal units) is
discretized with central differences on a uniform periodic grid, giving a
real symmetric matrix with cyclic corner entries.  Lowest eigenpairs per
orbital sector are computed, classified as bound or ring-delocalized, and
swept over the external magnetic field to locate the qubit initialization
window (the field interval with exactly two bound m=0 states).

Bound classification uses both an energy criterion (below the barrier at
theta=0) and a localization criterion (probability weight in the trapping
sector theta in [pi/2, 3pi/2]).  Near-threshold grid states can dip below
the barrier while staying spread over the whole ring; trapped states carry
weight >= ~0.68 there while ring-delocalized ones sit near 0.5, so the
default threshold 0.6 separates the two families robustly under grid
refinement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .model import TorusGeometry
from .potential import PotentialParams, total_internal

DEFAULT_LOC_THRESHOLD = 0.6
_DENSE_CUTOFF = 600  # below this size a dense solve is cheaper than ARPACK


class EigensolverError(RuntimeError):
    """Raised when no eigensolver path meets the residual contract."""

    def __init__(self, message: str, residual: float | None = None):
        super().__init__(message)
        self.residual = residual


class WindowNotFoundError(RuntimeError):
    """Raised when no two-bound-state field window exists in the scan range."""


@dataclass(frozen=True)
class Discretization:
    """Uniform periodic grid and stencil order for the 1D operator."""

    n_points: int = 1024
    stencil_order: int = 2

    def __post_init__(self) -> None:
        if self.n_points < 64:
            raise ValueError("n_points must be >= 64")
        if self.stencil_order not in (2, 4):
            raise ValueError("stencil_order must be 2 or 4")

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.n_points

    @property
    def theta(self) -> np.ndarray:
        return np.arange(self.n_points) * self.spacing


@dataclass(frozen=True)
class BoundState:
    """One eigenpair of a sector, with its localization and bound flag.

    The wavefunction is real, sampled on the grid, and L2-normalized so that
    sum(|chi|^2) * h = 1.  localization is the probability weight in the
    trapping sector theta in [pi/2, 3pi/2].
    """

    m_orbital: int
    level_index: int
    energy: float  # internal units
    wavefunction: np.ndarray
    localization: float
    bound: bool


@dataclass(frozen=True)
class Spectrum:
    """Sorted bound-state ladder of one sector at one field point."""

    params: PotentialParams
    states: tuple[BoundState, ...]
    barrier_energy: float  # V_total at theta=0, internal units

    @property
    def n_bound(self) -> int:
        return sum(1 for s in self.states if s.bound)

    def bound_states(self) -> tuple[BoundState, ...]:
        return tuple(s for s in self.states if s.bound)


def build_hamiltonian(params: PotentialParams, disc: Discretization) -> np.ndarray:
    """Dense real symmetric Hamiltonian in internal units.

    Kinetic part: -(d^2/dtheta^2) via central differences with periodic
    wraparound; potential on the diagonal.
    """
    n = disc.n_points
    h = disc.spacing
    v = np.asarray(total_internal(disc.theta, params), dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError("potential evaluated to non-finite values")

    H = np.zeros((n, n))
    idx = np.arange(n)
    if disc.stencil_order == 2:
        H[idx, idx] = 2.0 / h**2
        H[idx, (idx + 1) % n] += -1.0 / h**2
        H[idx, (idx - 1) % n] += -1.0 / h**2
    else:
        c = 1.0 / (12.0 * h**2)
        H[idx, idx] = 30.0 * c
        H[idx, (idx + 1) % n] += -16.0 * c
        H[idx, (idx - 1) % n] += -16.0 * c
        H[idx, (idx + 2) % n] += 1.0 * c
        H[idx, (idx - 2) % n] += 1.0 * c
    H[idx, idx] += v
    return H


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Deterministic eigenvector sign: largest-magnitude entry positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        i = int(np.argmax(np.abs(out[:, j])))
        if out[i, j] < 0:
            out[:, j] = -out[:, j]
    return out


def _residuals(H, energies: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    r = H @ vectors - vectors * energies[np.newaxis, :]
    return np.linalg.norm(r, axis=0)


def lowest_eigenpairs(matrix: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """k smallest eigenvalues (ascending) with orthonormal eigenvectors.

    The contract is the residual bound ||H v - lambda v|| <= 1e-9 ||H||,
    not a particular algorithm: small problems are solved densely, larger
    ones by shift-invert Lanczos with a dense fallback.  Raises
    EigensolverError carrying the worst residual if neither path converges.
    """
    n = matrix.shape[0]
    if matrix.shape != (n, n):
        raise ValueError("matrix must be square")
    if not 1 <= k <= n:
        raise ValueError(f"need 1 <= k <= {n}, got k={k}")
    if not np.allclose(matrix, matrix.T, rtol=0, atol=0):
        raise ValueError("matrix must be exactly symmetric")

    scale = np.abs(matrix).sum(axis=1).max()  # inf-norm bounds the 2-norm
    tol = 1e-9 * scale

    energies = vectors = None
    if n > _DENSE_CUTOFF and k < n - 1:
        try:
            sparse = sp.csr_matrix(matrix)
            # Gershgorin lower bound puts sigma strictly below the whole
            # spectrum, so shift-invert "LM" returns the k smallest pairs.
            gershgorin = float(
                (matrix.diagonal() - (np.abs(matrix).sum(axis=1) - np.abs(matrix.diagonal()))).min()
            )
            sigma = gershgorin - 1.0
            v0 = np.full(n, 1.0 / math.sqrt(n))  # fixed start for reproducibility
            w, v = spla.eigsh(sparse, k=k, sigma=sigma, which="LM", v0=v0)
            order = np.argsort(w)
            energies, vectors = w[order], v[:, order]
            if _residuals(matrix, energies, vectors).max() > tol:
                energies = vectors = None
        except (spla.ArpackError, RuntimeError):
            energies = vectors = None

    if energies is None:
        w, v = sla.eigh(matrix, subset_by_index=(0, k - 1))
        energies, vectors = w, v

    worst = float(_residuals(matrix, energies, vectors).max())
    if worst > tol:
        raise EigensolverError(
            f"eigensolver residual {worst:.3e} exceeds contract {tol:.3e}", residual=worst
        )
    return energies, _fix_signs(vectors)


def classify_bound(
    state: BoundState, barrier_energy: float, loc_threshold: float = DEFAULT_LOC_THRESHOLD
) -> bool:
    """Bound iff below the theta=0 barrier and localized in the trapping sector."""
    return bool(state.energy < barrier_energy and state.localization >= loc_threshold)


def solve_sector(
    params: PotentialParams,
    disc: Discretization,
    k: int = 6,
    loc_threshold: float = DEFAULT_LOC_THRESHOLD,
) -> Spectrum:
    """Lowest-k spectrum of one orbital sector, with bound classification."""
    H = build_hamiltonian(params, disc)
    energies, vectors = lowest_eigenpairs(H, k)
    h = disc.spacing
    theta = disc.theta
    inner = (theta >= np.pi / 2) & (theta <= 3 * np.pi / 2)
    barrier = float(total_internal(0.0, params))

    states = []
    for i in range(k):
        chi = vectors[:, i] / math.sqrt(h)
        loc = float(np.sum(vectors[inner, i] ** 2))
        st = BoundState(
            m_orbital=params.m_orbital,
            level_index=i,
            energy=float(energies[i]),
            wavefunction=chi,
            localization=loc,
            bound=False,
        )
        states.append(replace(st, bound=classify_bound(st, barrier, loc_threshold)))
    return Spectrum(params=params, states=tuple(states), barrier_energy=barrier)


def sweep_field(
    geom: TorusGeometry,
    m_list: list[int],
    field_values: np.ndarray,
    disc: Discretization,
    field: str = "B",
    k: int = 6,
    loc_threshold: float = DEFAULT_LOC_THRESHOLD,
) -> list[Spectrum]:
    """One Spectrum per (field value, m sector), ordered by field then m.

    field selects which knob the values sweep: the static magnetic field "B"
    or a static electric field "E".  Eigensolver failures propagate with the
    offending field value attached.
    """
    values = np.asarray(field_values, dtype=float)
    if values.size < 2:
        raise ValueError("need at least 2 field samples")
    if not (np.all(np.diff(values) > 0) or np.all(np.diff(values) < 0)):
        raise ValueError("field range must be monotone")
    if field not in ("B", "E"):
        raise ValueError("field must be 'B' or 'E'")

    spectra: list[Spectrum] = []
    for value in values:
        for m in m_list:
            if field == "B":
                params = PotentialParams(geom=geom, B=float(value), m_orbital=m)
            else:
                params = PotentialParams(geom=geom, E_static=float(value), m_orbital=m)
            try:
                spectra.append(solve_sector(params, disc, k=k, loc_threshold=loc_threshold))
            except EigensolverError as exc:
                raise EigensolverError(
                    f"eigensolve failed at {field}={value!r}, m={m}: {exc}",
                    residual=exc.residual,
                ) from exc
    return spectra


def count_bound_m0(
    geom: TorusGeometry,
    B: float,
    disc: Discretization,
    k: int = 6,
    loc_threshold: float = DEFAULT_LOC_THRESHOLD,
) -> int:
    """Number of bound states in the m=0 sector at field B."""
    spec = solve_sector(
        PotentialParams(geom=geom, B=B, m_orbital=0), disc, k=k, loc_threshold=loc_threshold
    )
    return spec.n_bound


def initialization_window(
    geom: TorusGeometry,
    disc: Discretization,
    B_scan_max: float = 2.0,
    n_coarse: int = 41,
    tol_T: float = 1e-3,
    loc_threshold: float = DEFAULT_LOC_THRESHOLD,
) -> tuple[float, float]:
    """Field interval [B_min, B_max] with exactly two bound m=0 states.

    A coarse scan over [0, B_scan_max] locates the first region with a
    two-state count; both edges are then bisected to tol_T.  Raises
    WindowNotFoundError when the two-state condition never occurs.
    """

    def count(B: float) -> int:
        return count_bound_m0(geom, B, disc, loc_threshold=loc_threshold)

    grid = np.linspace(0.0, B_scan_max, n_coarse)
    counts = [count(float(B)) for B in grid]

    first_two = next((i for i, c in enumerate(counts) if c == 2), None)
    if first_two is None:
        raise WindowNotFoundError(
            f"no field in [0, {B_scan_max}] T yields exactly two bound m=0 states"
            f" (counts seen: {sorted(set(counts))})"
        )

    if first_two == 0:
        b_min = 0.0
    else:
        lo, hi = float(grid[first_two - 1]), float(grid[first_two])
        while hi - lo > tol_T:
            mid = 0.5 * (lo + hi)
            if count(mid) >= 2:
                hi = mid
            else:
                lo = mid
        b_min = hi

    past = next((i for i in range(first_two, len(counts)) if counts[i] > 2), None)
    if past is None:
        b_max = float(grid[-1])
    else:
        lo, hi = float(grid[past - 1]), float(grid[past])
        while hi - lo > tol_T:
            mid = 0.5 * (lo + hi)
            if count(mid) == 2:
                lo = mid
            else:
                hi = mid
        b_max = lo

    return b_min, b_max
