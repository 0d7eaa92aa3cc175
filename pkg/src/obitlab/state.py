"""Register states, gates and end-of-run measurement.

Basis indices are big-endian: the first register bit is the most
significant bit of the index. States are validated when built by the user;
gate application trusts its inputs and only re-checks norms when
``OBITLAB_CHECK_NORMS`` is set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from obitlab import _accel
from obitlab.errors import (
    DimensionMismatchError,
    KindMismatchError,
    NormalizationError,
    ZeroVectorError,
)

STATE_NORM_TOL = 1e-12
OBIT_INPUT_TOL = 1e-9
GATE_TOL = 1e-10
APPLY_NORM_TOL = 1e-10


def _is_power_of_two(d: int) -> bool:
    return d >= 1 and (d & (d - 1)) == 0


def _frozen(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype).reshape(-1)
    arr.setflags(write=False)
    return arr


def _check_register(amps: np.ndarray, tol: float) -> None:
    if not _is_power_of_two(amps.size):
        raise DimensionMismatchError(f"register length {amps.size} is not a power of two")
    if not np.all(np.isfinite(amps)):
        raise NormalizationError("amplitudes must be finite")
    norm2 = float(np.sum(np.abs(amps) ** 2))
    if abs(norm2 - 1.0) > tol:
        raise NormalizationError(f"squared norm {norm2!r} differs from 1 by more than {tol:g}")


class _State:
    kind = ""
    dtype = None
    amplitudes: np.ndarray

    def __init__(self, amplitudes, *, tol: float = STATE_NORM_TOL):
        amps = _frozen(amplitudes, self.dtype)
        _check_register(amps, tol)
        self.amplitudes = amps

    @classmethod
    def _trusted(cls, amplitudes: np.ndarray):
        obj = cls.__new__(cls)
        amps = np.asarray(amplitudes, dtype=cls.dtype).reshape(-1)
        amps.setflags(write=False)
        obj.amplitudes = amps
        return obj

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def num_bits(self) -> int:
        return self.dim.bit_length() - 1

    def __len__(self) -> int:
        return self.dim

    def __eq__(self, other) -> bool:
        return type(self) is type(other) and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash((self.kind, self.amplitudes.tobytes()))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.amplitudes.tolist()!r})"


class RealAmplitudeState(_State):
    """Unit-norm real vector over the O-bit basis, length 2**m."""

    kind = "real"
    dtype = np.float64


class ComplexAmplitudeState(_State):
    """Unit-norm complex vector over the qubit basis, length 2**n."""

    kind = "complex"
    dtype = np.complex128


State = Union[RealAmplitudeState, ComplexAmplitudeState]


class _Gate:
    kind = ""
    dtype = None
    matrix: np.ndarray

    def __init__(self, matrix, *, tol: float = GATE_TOL):
        m = np.array(matrix, dtype=self.dtype)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionMismatchError(f"gate matrix must be square, got shape {m.shape}")
        dev = float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))
        if dev > tol:
            raise NormalizationError(f"gate is not {self._property} (deviation {dev:.3e})")
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def act(self, vector) -> np.ndarray:
        """Raw linear action on any vector of matching length (no norm check)."""
        v = np.asarray(vector)
        if v.shape != (self.dim,):
            raise DimensionMismatchError(f"gate of dimension {self.dim} applied to vector of shape {v.shape}")
        return self.matrix @ v

    def __repr__(self) -> str:
        return f"{type(self).__name__}(dim={self.dim})"


class OrthogonalGate(_Gate):
    kind = "real"
    dtype = np.float64
    _property = "orthogonal"


class UnitaryGate(_Gate):
    kind = "complex"
    dtype = np.complex128
    _property = "unitary"


@dataclass(frozen=True)
class MeasurementDistribution:
    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=np.float64)
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    def most_likely(self) -> int:
        return int(np.argmax(self.probabilities))


_STATE_FOR_GATE = {"real": RealAmplitudeState, "complex": ComplexAmplitudeState}


def new_obit(a: float, b: float) -> RealAmplitudeState:
    """Single O-bit ``a|0) + b|1)``; requires a**2 + b**2 = 1 within 1e-9.

    Inputs inside the tolerance are rescaled onto the unit circle so the
    stored state meets the tighter register invariant.
    """
    a = float(a)
    b = float(b)
    norm2 = a * a + b * b
    if not math.isfinite(norm2) or abs(norm2 - 1.0) > OBIT_INPUT_TOL:
        raise NormalizationError(f"a^2 + b^2 = {norm2!r}, not 1: not a valid O-bit")
    if norm2 != 1.0:
        r = math.sqrt(norm2)
        a, b = a / r, b / r
    return RealAmplitudeState([a, b])


def normalize(v) -> State:
    arr = np.asarray(v)
    if arr.ndim != 1:
        arr = arr.reshape(-1)
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise ZeroVectorError("cannot normalize the zero vector")
    if np.iscomplexobj(arr):
        return ComplexAmplitudeState(arr / norm)
    return RealAmplitudeState(arr.astype(np.float64) / norm)


def apply_gate(s: State, g: Union[OrthogonalGate, UnitaryGate]) -> State:
    if s.kind != g.kind:
        raise KindMismatchError(f"{g.kind} gate cannot act on a {s.kind} state")
    if s.dim != g.dim:
        raise DimensionMismatchError(f"gate dimension {g.dim} != state dimension {s.dim}")
    out = type(s)._trusted(g.matrix @ s.amplitudes)
    if _accel.CHECK_NORMS:
        _check_register(out.amplitudes, APPLY_NORM_TOL)
    return out


def givens_rotation(dim: int, i: int, j: int, theta: float) -> OrthogonalGate:
    """Rotation by ``theta`` in the (i, j) plane; maps e_i to cos e_i + sin e_j."""
    if not (0 <= i < j < dim):
        raise IndexError(f"need 0 <= i < j < dim, got i={i}, j={j}, dim={dim}")
    c, s = math.cos(theta), math.sin(theta)
    m = np.eye(dim)
    m[i, i] = c
    m[i, j] = -s
    m[j, i] = s
    m[j, j] = c
    return OrthogonalGate(m)


def tensor(s1: State, s2: State) -> State:
    if type(s1) is not type(s2):
        raise KindMismatchError(f"cannot tensor a {s1.kind} state with a {s2.kind} state")
    return type(s1)._trusted(np.kron(s1.amplitudes, s2.amplitudes))


def measure_probabilities(s: State) -> MeasurementDistribution:
    a = s.amplitudes
    if s.kind == "real":
        p = a * a
    else:
        p = a.real * a.real + a.imag * a.imag
    # a unit amplitude can square to 1 + 2**-52
    return MeasurementDistribution(np.clip(p, 0.0, 1.0))


def basis_state(dim: int, index: int, kind: str = "complex") -> State:
    cls = _STATE_FOR_GATE[kind]
    amps = np.zeros(dim, dtype=cls.dtype)
    amps[index] = 1.0
    return cls(amps)


# -- JSON-ready dict forms (shared by every module's file I/O) ---------------

def _encode_number(z, complex_kind: bool):
    if complex_kind:
        z = complex(z)
        return [z.real, z.imag]
    return float(z)


def _decode_number(v, complex_kind: bool):
    if complex_kind:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError(f"complex entry must be [re, im], got {v!r}")
            return complex(float(v[0]), float(v[1]))
        return complex(float(v), 0.0)
    if isinstance(v, (list, tuple)):
        raise ValueError(f"real register cannot hold complex entry {v!r}")
    return float(v)


def state_to_dict(s: State) -> dict:
    cplx = s.kind == "complex"
    return {"kind": s.kind, "amplitudes": [_encode_number(z, cplx) for z in s.amplitudes]}


def state_from_dict(d: dict) -> State:
    kind = d.get("kind")
    if kind not in _STATE_FOR_GATE:
        raise ValueError(f"state kind must be 'real' or 'complex', got {kind!r}")
    cplx = kind == "complex"
    amps = [_decode_number(v, cplx) for v in d["amplitudes"]]
    return _STATE_FOR_GATE[kind](amps)


def gate_to_dict(g: Union[OrthogonalGate, UnitaryGate]) -> dict:
    cplx = g.kind == "complex"
    return {"kind": g.kind, "matrix": [[_encode_number(z, cplx) for z in row] for row in g.matrix]}


def matrix_from_dict(d: dict) -> np.ndarray:
    kind = d.get("kind", "complex")
    if kind not in _STATE_FOR_GATE:
        raise ValueError(f"matrix kind must be 'real' or 'complex', got {kind!r}")
    cplx = kind == "complex"
    rows = [[_decode_number(v, cplx) for v in row] for row in d["matrix"]]
    return np.array(rows, dtype=np.complex128 if cplx else np.float64)


def gate_from_dict(d: dict) -> Union[OrthogonalGate, UnitaryGate]:
    m = matrix_from_dict(d)
    return UnitaryGate(m) if d.get("kind", "complex") == "complex" else OrthogonalGate(m)
