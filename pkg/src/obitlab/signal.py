"""O-bits as sampled sine/cosine waveforms on one period.

``|0)`` is carried by sin(xi) and ``|1)`` by cos(xi) on 0 <= xi < 2*pi; the
inner product is (1/pi) times the integral of the product over the period,
evaluated by quadrature on the periodic grid xi_k = 2*pi*k/M (the endpoint
2*pi is the same sample as 0 and is not stored).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from obitlab.errors import DimensionMismatchError, NormalizationError
from obitlab.state import RealAmplitudeState

QUADRATURES = ("trapezoid", "simpson")
DECODE_TOL = 1e-6


def _check_sample_count(m: int) -> None:
    if m < 8 or m % 2:
        raise ValueError(f"sample count must be even and >= 8, got {m}")


@dataclass(frozen=True)
class EncodingConfig:
    sample_count: int = 64
    quadrature: str = "trapezoid"

    def __post_init__(self):
        _check_sample_count(int(self.sample_count))
        if self.quadrature not in QUADRATURES:
            raise ValueError(f"quadrature must be one of {QUADRATURES}, got {self.quadrature!r}")


class SampledSignal:
    """Real waveform sampled on the periodic grid of one 2*pi window."""

    __slots__ = ("samples",)

    def __init__(self, samples):
        arr = np.array(samples, dtype=np.float64).reshape(-1)
        _check_sample_count(arr.size)
        if not np.all(np.isfinite(arr)):
            raise ValueError("signal samples must be finite")
        arr.setflags(write=False)
        self.samples = arr

    @property
    def sample_count(self) -> int:
        return self.samples.size

    @property
    def xi(self) -> np.ndarray:
        return grid(self.sample_count)

    def __add__(self, other: "SampledSignal") -> "SampledSignal":
        _same_length(self, other)
        return SampledSignal(self.samples + other.samples)

    def __mul__(self, scalar: float) -> "SampledSignal":
        return SampledSignal(float(scalar) * self.samples)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, SampledSignal) and np.array_equal(self.samples, other.samples)

    def __repr__(self) -> str:
        return f"SampledSignal(M={self.sample_count})"


def grid(m: int) -> np.ndarray:
    return 2.0 * math.pi * np.arange(m) / m


def _same_length(s1: SampledSignal, s2: SampledSignal) -> None:
    if s1.sample_count != s2.sample_count:
        raise DimensionMismatchError(
            f"signals have {s1.sample_count} and {s2.sample_count} samples"
        )


def basis_signal(bit: int, cfg: EncodingConfig) -> SampledSignal:
    """Samples of sin (bit 0) or cos (bit 1) on the grid of ``cfg``."""
    xi = grid(cfg.sample_count)
    if bit == 0:
        return SampledSignal(np.sin(xi))
    if bit == 1:
        return SampledSignal(np.cos(xi))
    raise ValueError(f"bit must be 0 or 1, got {bit!r}")


def encode(s: RealAmplitudeState, cfg: EncodingConfig) -> SampledSignal:
    if s.dim != 2:
        raise DimensionMismatchError(f"only single O-bits can be encoded, got dimension {s.dim}")
    a, b = s.amplitudes
    xi = grid(cfg.sample_count)
    return SampledSignal(a * np.sin(xi) + b * np.cos(xi))


def _quadrature_weights(m: int, rule: str) -> np.ndarray:
    h = 2.0 * math.pi / m
    if rule == "trapezoid":
        # periodic trapezoid: endpoints fold into one full-weight sample
        return np.full(m, h)
    # composite Simpson over the closed grid 0..2*pi with the wrap-around
    # sample reused at 2*pi; folding its weight onto sample 0 gives 2h/3 there
    w = np.where(np.arange(m) % 2 == 1, 4.0, 2.0) * (h / 3.0)
    return w


def inner_product(s1: SampledSignal, s2: SampledSignal, cfg: EncodingConfig | None = None) -> float:
    """(1/pi) * integral over [0, 2*pi] of s1*s2, by the quadrature rule of ``cfg``."""
    _same_length(s1, s2)
    rule = cfg.quadrature if cfg is not None else "trapezoid"
    w = _quadrature_weights(s1.sample_count, rule)
    return float(np.sum(w * (s1.samples * s2.samples)) / math.pi)


def decode(sig: SampledSignal, cfg: EncodingConfig) -> RealAmplitudeState:
    if sig.sample_count != cfg.sample_count:
        raise DimensionMismatchError(
            f"signal has {sig.sample_count} samples, config expects {cfg.sample_count}"
        )
    a = inner_product(sig, basis_signal(0, cfg), cfg)
    b = inner_product(sig, basis_signal(1, cfg), cfg)
    norm = math.hypot(a, b)
    if abs(norm - 1.0) > DECODE_TOL:
        raise NormalizationError(
            f"recovered amplitudes ({a:.6g}, {b:.6g}) have norm {norm:.6g}: not an O-bit waveform"
        )
    return RealAmplitudeState([a / norm, b / norm])


@dataclass(frozen=True)
class GramReport:
    table: np.ndarray
    max_deviation: float

    def to_dict(self) -> dict:
        return {"gram": self.table.tolist(), "max_deviation": self.max_deviation}


def verify_orthonormality(cfg: EncodingConfig) -> GramReport:
    """Gram table of {sin, cos} and its largest deviation from the identity."""
    basis = (basis_signal(0, cfg), basis_signal(1, cfg))
    table = np.array([[inner_product(u, v, cfg) for v in basis] for u in basis])
    return GramReport(table, float(np.max(np.abs(table - np.eye(2)))))


# -- CSV (xi,value), 17 significant digits -----------------------------------

def signal_to_csv(sig: SampledSignal) -> str:
    buf = io.StringIO()
    buf.write("xi,value\n")
    for x, v in zip(sig.xi, sig.samples):
        buf.write(f"{x:.17g},{v:.17g}\n")
    return buf.getvalue()


def signal_from_csv(text: str) -> SampledSignal:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or [h.strip() for h in header] != ["xi", "value"]:
        raise ValueError(f"expected header 'xi,value', got {header!r}")
    xs, vs = [], []
    for row in reader:
        if not row:
            continue
        if len(row) != 2:
            raise ValueError(f"malformed signal row {row!r}")
        xs.append(float(row[0]))
        vs.append(float(row[1]))
    sig = SampledSignal(vs)
    if xs != sorted(xs):
        raise ValueError("xi column must be ascending")
    if not np.allclose(xs, sig.xi, rtol=0.0, atol=1e-12):
        raise ValueError("xi column does not match the periodic grid 2*pi*k/M")
    return sig
