"""Four equivalent Fourier transforms and the cost ledger comparing them.

All paths use the unitary convention y_k = N**-0.5 * sum_j x_j exp(+2*pi*i*j*k/N)
and natural output order:

* ``dft_direct``: O(N^2) double loop, the oracle for the other three.
* ``fft_radix2``: iterative decimation-in-time with a precomputed twiddle table.
* ``qft_build_circuit`` / ``qft_apply``: Hadamards, controlled phases and
  final swaps on an n-qubit register.
* ``stage_factorization``: log2(N) sparse butterfly matrices times a
  bit-reversal permutation.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from obitlab import kernels
from obitlab.errors import DimensionMismatchError, RangeError, SizeError
from obitlab.state import ComplexAmplitudeState, _is_power_of_two

QFT_MAX_QUBITS = 20
FACTORIZATION_MAX_QUBITS = 10
REPORT_MAX_QUBITS = 30


def _as_vector(x) -> np.ndarray:
    if isinstance(x, ComplexAmplitudeState):
        x = x.amplitudes
    arr = np.ascontiguousarray(x, dtype=np.complex128).reshape(-1)
    if arr.size == 0:
        raise SizeError("transform input is empty")
    return arr


def _log2_exact(n: int) -> int:
    if not _is_power_of_two(n):
        raise SizeError(f"length {n} is not a power of two")
    return n.bit_length() - 1


# -- direct DFT and radix-2 FFT ----------------------------------------------

def dft_direct(x) -> np.ndarray:
    """Direct O(N^2) transform; the reference every other path is checked against."""
    return kernels.dft(_as_vector(x))


def dft_matrix(n_points: int) -> np.ndarray:
    """Dense unitary DFT matrix, entry [k, j] = exp(2*pi*i*(jk mod N)/N)/sqrt(N)."""
    idx = np.arange(n_points, dtype=np.int64)
    phase = 2.0 * math.pi * (np.outer(idx, idx) % n_points) / n_points
    return (np.cos(phase) + 1j * np.sin(phase)) / math.sqrt(n_points)


@functools.lru_cache(maxsize=32)
def twiddle_table(n_points: int) -> np.ndarray:
    """exp(2*pi*i*k/N) for k < N/2 (at least one entry)."""
    k = np.arange(max(n_points // 2, 1))
    phase = 2.0 * math.pi * k / n_points
    table = np.cos(phase) + 1j * np.sin(phase)
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class OpCounts:
    complex_mults: int
    complex_adds: int


def fft_radix2_counted(x) -> tuple[np.ndarray, OpCounts]:
    """FFT plus the number of complex multiplies and adds actually executed."""
    v = _as_vector(x)
    _log2_exact(v.size)
    y, mults, adds = kernels.fft(v, twiddle_table(v.size))
    return y, OpCounts(int(mults), int(adds))


def fft_radix2(x) -> np.ndarray:
    return fft_radix2_counted(x)[0]


def inverse_via_conjugation(transform, y) -> np.ndarray:
    """Inverse of a unitary transform T as conj(T(conj(y)))."""
    return np.conj(transform(np.conj(_as_vector(y))))


# -- QFT as a circuit --------------------------------------------------------

def binary_fraction(bits: Sequence[int]) -> float:
    """Value of the binary fraction 0.b1 b2 ... bm."""
    bits = list(bits)
    if not bits:
        raise ValueError("binary fraction needs at least one bit")
    total = 0.0
    for m, b in enumerate(bits, start=1):
        if b not in (0, 1):
            raise ValueError(f"bits must be 0 or 1, got {b!r}")
        total += b * 2.0 ** -m
    return total


def to_bits(j: int, n: int) -> tuple[int, ...]:
    """Big-endian bits j_1..j_n of ``j`` (j_1 most significant)."""
    return tuple((j >> (n - 1 - i)) & 1 for i in range(n))


@dataclass(frozen=True)
class QftGate:
    gate: str  # "H", "CP" or "SWAP"
    qubits: tuple[int, ...]
    k: Optional[int] = None

    def phase(self) -> complex:
        """exp(2*pi*i / 2**k), taken from the binary fraction 0.0...01 (k digits)."""
        if self.gate != "CP":
            raise ValueError(f"{self.gate} gate has no phase")
        frac = binary_fraction((0,) * (self.k - 1) + (1,))
        return complex(math.cos(2.0 * math.pi * frac), math.sin(2.0 * math.pi * frac))

    def to_dict(self) -> dict:
        return {"gate": self.gate, "qubits": list(self.qubits), "k": self.k}


@dataclass(frozen=True)
class QftCircuit:
    num_qubits: int
    gates: tuple[QftGate, ...]

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def count(self, gate: str) -> int:
        return sum(1 for g in self.gates if g.gate == gate)

    def to_list(self) -> list[dict]:
        return [g.to_dict() for g in self.gates]


def qft_gate_count(n: int) -> int:
    return n * (n + 1) // 2 + n // 2


def qft_build_circuit(n: int) -> QftCircuit:
    """Textbook QFT: qubit 0 holds j_1 (most significant bit).

    Each qubit gets a Hadamard and then a controlled phase exp(2*pi*i/2**k)
    from every less significant qubit, k = distance + 1. The product form
    comes out bit-reversed, so floor(n/2) swaps close the circuit.
    """
    if not 1 <= n <= QFT_MAX_QUBITS:
        raise RangeError(f"qubit count must be in [1, {QFT_MAX_QUBITS}], got {n}")
    gates = []
    for target in range(n):
        gates.append(QftGate("H", (target,)))
        for control in range(target + 1, n):
            gates.append(QftGate("CP", (control, target), control - target + 1))
    for q in range(n // 2):
        gates.append(QftGate("SWAP", (q, n - 1 - q)))
    return QftCircuit(n, tuple(gates))


_H = 1.0 / math.sqrt(2.0)


def qft_apply(c: QftCircuit, s) -> ComplexAmplitudeState:
    """Run the circuit on a state (or raw amplitude vector) of matching width."""
    v = _as_vector(s)
    n = c.num_qubits
    if v.size != 1 << n:
        raise DimensionMismatchError(f"circuit on {n} qubits needs {1 << n} amplitudes, got {v.size}")
    for g in c.gates:
        if g.gate == "H":
            v = kernels.apply_1q(v, n, g.qubits[0], _H, _H, _H, -_H)
        elif g.gate == "CP":
            v = kernels.apply_cphase(v, n, g.qubits[0], g.qubits[1], g.phase())
        elif g.gate == "SWAP":
            v = kernels.apply_swap(v, n, g.qubits[0], g.qubits[1])
        else:
            raise ValueError(f"unknown gate {g.gate!r}")
    return ComplexAmplitudeState._trusted(v)


def product_state(bits: Sequence[int]) -> np.ndarray:
    """QFT of basis |j_1..j_n> assembled factor by factor.

    Output qubit l (1-based) is (|0> + exp(2*pi*i*0.j_{n-l+1}...j_n)|1>)/sqrt(2).
    """
    n = len(bits)
    out = np.ones(1, dtype=np.complex128)
    for l in range(1, n + 1):
        frac = binary_fraction(bits[n - l:])
        factor = np.array([1.0, np.exp(2j * math.pi * frac)]) * _H
        out = np.kron(out, factor)
    return out


# -- stage factorization -----------------------------------------------------

@dataclass(frozen=True)
class StageFactorization:
    """DFT = stages[-1] @ ... @ stages[0] @ P, P the bit-reversal permutation.

    ``permutation[i]`` is the source index of output slot i, so
    (P x)[i] = x[permutation[i]].
    """

    num_qubits: int
    stages: tuple
    permutation: np.ndarray

    def __post_init__(self):
        size = 1 << self.num_qubits
        for i, st in enumerate(self.stages):
            if st.shape != (size, size):
                raise DimensionMismatchError(f"stage {i} has shape {st.shape}, expected {(size, size)}")
            if st.count_nonzero() != 2 * size:
                raise ValueError(f"stage {i} has {st.count_nonzero()} nonzeros, expected {2 * size}")

    @property
    def size(self) -> int:
        return 1 << self.num_qubits

    def permutation_matrix(self) -> sp.csr_matrix:
        size = self.size
        return sp.csr_matrix((np.ones(size), (np.arange(size), self.permutation)), shape=(size, size))

    def apply(self, x) -> np.ndarray:
        v = _as_vector(x)
        if v.size != self.size:
            raise DimensionMismatchError(f"factorization of size {self.size} applied to {v.size} values")
        v = v[self.permutation]
        for st in self.stages:
            v = st @ v
        return v

    def dense(self) -> np.ndarray:
        m = self.permutation_matrix().astype(np.complex128)
        for st in self.stages:
            m = st @ m
        return m.toarray()

    def with_stage(self, index: int, stage) -> "StageFactorization":
        stages = list(self.stages)
        stages[index] = sp.csr_matrix(stage)
        return StageFactorization(self.num_qubits, tuple(stages), self.permutation)


def _butterfly_stage(size: int, span: int) -> sp.csr_matrix:
    half = span // 2
    rows, cols, vals = [], [], []
    for start in range(0, size, span):
        for k in range(half):
            w = np.exp(2j * math.pi * k / span)
            top, bot = start + k, start + k + half
            rows += [top, top, bot, bot]
            cols += [top, bot, top, bot]
            vals += [_H, w * _H, _H, -w * _H]
    return sp.csr_matrix((np.array(vals, dtype=np.complex128), (rows, cols)), shape=(size, size))


def stage_factorization(n: int) -> StageFactorization:
    """Coordinate form of the QFT: one butterfly stage per bit, each unitary."""
    if not 1 <= n <= FACTORIZATION_MAX_QUBITS:
        raise RangeError(f"qubit count must be in [1, {FACTORIZATION_MAX_QUBITS}], got {n}")
    size = 1 << n
    stages = tuple(_butterfly_stage(size, 1 << s) for s in range(1, n + 1))
    perm = kernels.bit_reverse_numpy(size)
    perm.setflags(write=False)
    return StageFactorization(n, stages, perm)


def verify_factorization(f: StageFactorization) -> float:
    """Largest entrywise |(product of stages) P - DFT matrix|."""
    return float(np.max(np.abs(f.dense() - dft_matrix(f.size))))


# -- complexity ledger -------------------------------------------------------

@dataclass(frozen=True)
class ComplexityLedger:
    """Operation or gate counts for one method at one width.

    Counts that do not apply to a method (gates for the classical
    transforms, arithmetic for the circuit) are 0.
    """

    method: str
    n: int
    complex_mults: int
    complex_adds: int
    gate_count: int

    @property
    def size(self) -> int:
        return 1 << self.n


REPORT_COLUMNS = ("n", "N", "dft_mults", "fft_mults", "fft_adds", "qft_gates")


def complexity_report(n_min: int, n_max: int) -> list[ComplexityLedger]:
    """Closed-form counts for direct DFT, radix-2 FFT and the QFT circuit, n_min..n_max."""
    if not 1 <= n_min <= n_max <= REPORT_MAX_QUBITS:
        raise RangeError(f"need 1 <= n_min <= n_max <= {REPORT_MAX_QUBITS}, got {n_min}, {n_max}")
    out = []
    for n in range(n_min, n_max + 1):
        size = 1 << n
        out.append(ComplexityLedger("dft", n, size * size, size * (size - 1), 0))
        out.append(ComplexityLedger("fft", n, (size // 2) * n, size * n, 0))
        out.append(ComplexityLedger("qft", n, 0, 0, qft_gate_count(n)))
    return out


def report_rows(ledgers: Iterable[ComplexityLedger]) -> list[dict]:
    """Pivot ledgers into one row per width with the CSV columns."""
    rows: dict[int, dict] = {}
    for led in ledgers:
        row = rows.setdefault(led.n, {"n": led.n, "N": led.size})
        if led.method == "dft":
            row["dft_mults"] = led.complex_mults
        elif led.method == "fft":
            row["fft_mults"] = led.complex_mults
            row["fft_adds"] = led.complex_adds
        elif led.method == "qft":
            row["qft_gates"] = led.gate_count
    return [rows[n] for n in sorted(rows)]
