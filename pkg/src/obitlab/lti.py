"""Two-level Schroedinger evolution and executable LTI axiom checks.

Time-domain signals here are plain float arrays sampled on a ``TimeGrid``
(``steps + 1`` samples at ``t0 + n*dt``). Delays are whole numbers of steps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from obitlab import kernels
from obitlab.errors import DimensionMismatchError, NonHermitianError, NormalizationError, StepError

HERMITIAN_TOL = 1e-12
TWO_LEVEL_NORM_TOL = 1e-10
STABILITY_LIMIT = 0.5
CHECK_REL_TOL = 1e-9
CAUSALITY_TOL = 1e-12


@dataclass(frozen=True)
class TwoLevelHamiltonian:
    """Hermitian 2x2 generator; ``hbar`` scales time (default 1)."""

    matrix: np.ndarray
    hbar: float = 1.0

    def __post_init__(self):
        h = np.array(self.matrix, dtype=np.complex128)
        if h.shape != (2, 2):
            raise DimensionMismatchError(f"two-level Hamiltonian must be 2x2, got {h.shape}")
        if not np.all(np.isfinite(h)):
            raise NonHermitianError("Hamiltonian entries must be finite")
        dev = float(np.max(np.abs(h - h.conj().T)))
        if dev > HERMITIAN_TOL:
            raise NonHermitianError(f"Hamiltonian is not Hermitian (deviation {dev:.3e})")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        h.setflags(write=False)
        object.__setattr__(self, "matrix", h)

    @classmethod
    def from_entries(cls, h11, h12, h21, h22, hbar: float = 1.0) -> "TwoLevelHamiltonian":
        return cls(np.array([[h11, h12], [h21, h22]], dtype=np.complex128), hbar)

    @property
    def spectral_norm(self) -> float:
        return float(np.max(np.abs(np.linalg.eigvalsh(self.matrix))))


@dataclass(frozen=True)
class TwoLevelState:
    c1: complex
    c2: complex

    def __post_init__(self):
        n2 = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(n2 - 1.0) > TWO_LEVEL_NORM_TOL:
            raise NormalizationError(f"|C1|^2 + |C2|^2 = {n2!r}, not 1")
        object.__setattr__(self, "c1", complex(self.c1))
        object.__setattr__(self, "c2", complex(self.c2))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=np.complex128)


@dataclass(frozen=True)
class TimeGrid:
    t0: float = 0.0
    dt: float = 1e-3
    steps: int = 1

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if int(self.steps) != self.steps or self.steps < 1:
            raise ValueError(f"steps must be an integer >= 1, got {self.steps}")

    @classmethod
    def spanning(cls, t: float, dt: float, t0: float = 0.0) -> "TimeGrid":
        """Grid from t0 to t0 + t, with dt shrunk so the end lands on a sample."""
        steps = max(1, math.ceil(t / dt - 1e-9))
        return cls(t0, t / steps, steps)

    @property
    def t_end(self) -> float:
        return self.t0 + self.steps * self.dt

    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.steps + 1)

    @property
    def size(self) -> int:
        return self.steps + 1


@dataclass(frozen=True)
class Propagator:
    matrix: np.ndarray
    elapsed: float

    def apply(self, s: TwoLevelState) -> np.ndarray:
        return self.matrix @ s.vector


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    amplitudes: np.ndarray  # shape (steps + 1, 2)

    @property
    def norms(self) -> np.ndarray:
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)

    @property
    def norm_drift(self) -> float:
        """Largest |norm^2 - 1| along the run; reported, never corrected."""
        return float(np.max(np.abs(self.norms - 1.0)))

    @property
    def final(self) -> np.ndarray:
        return self.amplitudes[-1]


def evolve_rk4(h: TwoLevelHamiltonian, s0: TwoLevelState, grid: TimeGrid) -> Trajectory:
    """Classical RK4 for i*hbar dC/dt = H C on ``grid``."""
    if grid.dt * h.spectral_norm / h.hbar > STABILITY_LIMIT:
        raise StepError(
            f"dt*||H||/hbar = {grid.dt * h.spectral_norm / h.hbar:.3g} exceeds {STABILITY_LIMIT}"
        )
    amps = kernels.rk4(h.matrix, s0.vector, float(grid.dt), int(grid.steps), float(h.hbar))
    return Trajectory(grid.times(), amps)


def propagator_closed_form(h: TwoLevelHamiltonian, t: float) -> Propagator:
    """exp(-i H t / hbar) from the eigendecomposition of H."""
    evals, evecs = np.linalg.eigh(h.matrix)
    phases = np.exp(-1j * evals * (t / h.hbar))
    u = (evecs * phases) @ evecs.conj().T
    return Propagator(u, float(t))


def closed_form_trajectory(h: TwoLevelHamiltonian, s0: TwoLevelState, grid: TimeGrid) -> Trajectory:
    evals, evecs = np.linalg.eigh(h.matrix)
    coeff = evecs.conj().T @ s0.vector
    elapsed = grid.times() - grid.t0
    phases = np.exp(-1j * np.outer(elapsed / h.hbar, evals))
    return Trajectory(grid.times(), (phases * coeff) @ evecs.T)


# -- systems under test ------------------------------------------------------

@dataclass(frozen=True)
class SystemUnderTest:
    """Named deterministic map from a sampled input to a sampled output."""

    name: str
    grid: TimeGrid
    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)

    def __call__(self, x) -> np.ndarray:
        x = np.ascontiguousarray(x, dtype=np.float64)
        if x.shape != (self.grid.size,):
            raise DimensionMismatchError(f"{self.name} expects {self.grid.size} samples, got {x.shape}")
        return np.asarray(self.fn(x), dtype=np.float64)


def convolution_system(impulse_response, grid: TimeGrid, name: str = "convolution") -> SystemUnderTest:
    """Causal discrete convolution with ``impulse_response``, truncated to the grid."""
    taps = np.ascontiguousarray(impulse_response, dtype=np.float64).reshape(-1)
    if taps.size == 0 or not np.all(np.isfinite(taps)):
        raise ValueError("impulse response must be nonempty and finite")
    taps.setflags(write=False)
    return SystemUnderTest(name, grid, lambda x: kernels.convolve(x, taps))


def schrodinger_system(h: TwoLevelHamiltonian, component: int, s0_basis: int, grid: TimeGrid) -> SystemUnderTest:
    """Driven two-level system: input enters basis amplitude ``s0_basis`` (0 or 1),
    output is the real part of ``C_component`` (1 or 2), zero initial state."""
    if component not in (1, 2):
        raise ValueError(f"component must be 1 or 2, got {component!r}")
    if s0_basis not in (0, 1):
        raise ValueError(f"drive basis index must be 0 or 1, got {s0_basis!r}")
    if grid.dt * h.spectral_norm / h.hbar > STABILITY_LIMIT:
        raise StepError("grid step too large for the driven system")
    hm = h.matrix
    col = component - 1

    def run(x):
        return kernels.rk4_driven(hm, x, float(grid.dt), int(s0_basis), float(h.hbar))[:, col].real.copy()

    return SystemUnderTest(f"schrodinger[C{component}<-e{s0_basis}]", grid, run)


# counterexamples, each violating exactly one axiom

def squaring_system(grid: TimeGrid) -> SystemUnderTest:
    return SystemUnderTest("counterexample:nonlinear", grid, lambda x: x * x)


def time_varying_gain_system(grid: TimeGrid) -> SystemUnderTest:
    t = grid.times()
    return SystemUnderTest("counterexample:timevarying", grid, lambda x: t * x)


def advance_system(grid: TimeGrid) -> SystemUnderTest:
    def run(x):
        y = np.zeros_like(x)
        y[:-1] = x[1:]
        return y

    return SystemUnderTest("counterexample:acausal", grid, run)


# -- checkers ----------------------------------------------------------------

@dataclass(frozen=True)
class CheckReport:
    check: str
    max_deviation: float
    passed: bool
    tolerance: float

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "max_deviation": self.max_deviation,
            "pass": self.passed,
            "tolerance": self.tolerance,
        }


def _max_abs(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def check_linearity(sys: SystemUnderTest, x1, x2, a1: float, a2: float,
                    rel_tol: float = CHECK_REL_TOL) -> CheckReport:
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != x2.shape:
        raise DimensionMismatchError("linearity inputs must share a grid")
    y1, y2 = sys(x1), sys(x2)
    combined = sys(a1 * x1 + a2 * x2)
    expected = a1 * y1 + a2 * y2
    dev = _max_abs(combined - expected)
    scale = max(_max_abs(y1), _max_abs(y2), _max_abs(combined), _max_abs(expected))
    tol = rel_tol * (1.0 + scale)
    return CheckReport("linearity", dev, dev <= tol, tol)


def delay(x, shift: int) -> np.ndarray:
    """x(t - shift*dt) on the same grid, zero-filled at the start."""
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    if shift < x.size:
        out[shift:] = x[: x.size - shift]
    return out


def check_time_invariance(sys: SystemUnderTest, x, shift: int,
                          rel_tol: float = CHECK_REL_TOL) -> CheckReport:
    if shift < 0:
        raise ValueError(f"shift must be >= 0, got {shift}")
    x = np.asarray(x, dtype=np.float64)
    y = sys(x)
    y_shifted_input = sys(delay(x, shift))
    # compare only where both sequences are defined on the grid
    overlap = slice(shift, None)
    dev = _max_abs(y_shifted_input[overlap] - y[: y.size - shift])
    tol = rel_tol * (1.0 + max(_max_abs(y), _max_abs(y_shifted_input)))
    return CheckReport("time_invariance", dev, dev <= tol, tol)


def check_causality(sys: SystemUnderTest, x, tol: float = CAUSALITY_TOL) -> CheckReport:
    """Output must vanish strictly before the input's first nonzero sample."""
    x = np.asarray(x, dtype=np.float64)
    nz = np.flatnonzero(x)
    start = int(nz[0]) if nz.size else x.size
    y = sys(x)
    dev = _max_abs(y[:start])
    return CheckReport("causality", dev, dev <= tol, tol)
