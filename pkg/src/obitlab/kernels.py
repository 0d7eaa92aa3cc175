"""Hot numeric kernels.

Each kernel exists twice: an explicit loop form (``*_loop``) that numba
compiles, and a vectorised numpy form (``*_numpy``). The public name binds
to one of them at import time, see ``obitlab._accel``. Both forms are kept
importable so tests can cross-check them against each other.
"""
import math

import numpy as np

from obitlab._accel import njit, select

TWO_PI = 2.0 * math.pi


# -- bit reversal ------------------------------------------------------------

def _bit_reverse_loop(n):
    bits = 0
    while (1 << bits) < n:
        bits += 1
    perm = np.empty(n, np.int64)
    for i in range(n):
        r = 0
        v = i
        for _ in range(bits):
            r = (r << 1) | (v & 1)
            v >>= 1
        perm[i] = r
    return perm


def _bit_reverse_numpy(n):
    bits = int(n).bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    perm = np.zeros(n, dtype=np.int64)
    for b in range(bits):
        perm |= ((idx >> b) & 1) << (bits - 1 - b)
    return perm


# -- direct DFT (the oracle transform) ---------------------------------------

def _dft_loop(x):
    n = x.shape[0]
    out = np.empty(n, np.complex128)
    scale = 1.0 / math.sqrt(n)
    for k in range(n):
        acc = 0j
        for j in range(n):
            # reduce jk mod N first so the phase argument stays small
            ang = TWO_PI * ((j * k) % n) / n
            acc += x[j] * complex(math.cos(ang), math.sin(ang))
        out[k] = acc * scale
    return out


def _dft_numpy(x):
    n = x.shape[0]
    idx = np.arange(n, dtype=np.int64)
    phase = TWO_PI * (np.outer(idx, idx) % n) / n
    w = np.cos(phase) + 1j * np.sin(phase)
    return (w @ x) / math.sqrt(n)


# -- radix-2 decimation-in-time FFT ------------------------------------------

def _fft_loop(x, twiddles):
    """Returns (spectrum, complex multiplications, complex additions)."""
    n = x.shape[0]
    perm = _bit_reverse_jit(n)
    y = np.empty(n, np.complex128)
    for i in range(n):
        y[i] = x[perm[i]]
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    mults = 0
    adds = 0
    m = 2
    while m <= n:
        half = m // 2
        stride = n // m
        for start in range(0, n, m):
            for k in range(half):
                t = twiddles[k * stride] * y[start + k + half]
                u = y[start + k]
                y[start + k] = (u + t) * inv_sqrt2
                y[start + k + half] = (u - t) * inv_sqrt2
                mults += 1
                adds += 2
        m *= 2
    return y, mults, adds


def _fft_numpy(x, twiddles):
    n = x.shape[0]
    y = x[_bit_reverse_numpy(n)].astype(np.complex128)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    mults = 0
    adds = 0
    m = 2
    while m <= n:
        half = m // 2
        w = twiddles[:: n // m][:half]
        blocks = y.reshape(n // m, m)
        u = blocks[:, :half]
        t = blocks[:, half:] * w
        y = (np.concatenate((u + t, u - t), axis=1) * inv_sqrt2).reshape(n)
        mults += (n // m) * half
        adds += n
        m *= 2
    return y, mults, adds


# -- state-vector gate kernels (big-endian: qubit q is bit n-1-q) -------------

def _apply_1q_loop(state, n, q, m00, m01, m10, m11):
    out = state.copy()
    mask = 1 << (n - 1 - q)
    for i in range(state.shape[0]):
        if i & mask:
            continue
        j = i | mask
        a = state[i]
        b = state[j]
        out[i] = m00 * a + m01 * b
        out[j] = m10 * a + m11 * b
    return out


def _apply_1q_numpy(state, n, q, m00, m01, m10, m11):
    view = state.reshape(1 << q, 2, 1 << (n - 1 - q))
    a = view[:, 0, :]
    b = view[:, 1, :]
    out = np.empty_like(view)
    out[:, 0, :] = m00 * a + m01 * b
    out[:, 1, :] = m10 * a + m11 * b
    return out.reshape(-1)


def _apply_cphase_loop(state, n, control, target, phase):
    out = state.copy()
    cmask = 1 << (n - 1 - control)
    tmask = 1 << (n - 1 - target)
    both = cmask | tmask
    for i in range(state.shape[0]):
        if (i & both) == both:
            out[i] = state[i] * phase
    return out


def _apply_cphase_numpy(state, n, control, target, phase):
    both = (1 << (n - 1 - control)) | (1 << (n - 1 - target))
    idx = np.arange(state.shape[0])
    out = state.copy()
    hit = (idx & both) == both
    out[hit] *= phase
    return out


def _apply_swap_loop(state, n, q1, q2):
    out = state.copy()
    m1 = 1 << (n - 1 - q1)
    m2 = 1 << (n - 1 - q2)
    for i in range(state.shape[0]):
        b1 = (i & m1) != 0
        b2 = (i & m2) != 0
        if b1 != b2:
            out[i ^ (m1 | m2)] = state[i]
    return out


def _apply_swap_numpy(state, n, q1, q2):
    if n == 0 or q1 == q2:
        return state.copy()
    view = state.reshape((2,) * n)
    return np.swapaxes(view, q1, q2).reshape(-1).copy()


# -- two-level RK4 -----------------------------------------------------------

def _rk4_loop(h, c0, dt, steps, hbar):
    traj = np.empty((steps + 1, 2), np.complex128)
    a = -1j / hbar
    h00 = h[0, 0]
    h01 = h[0, 1]
    h10 = h[1, 0]
    h11 = h[1, 1]
    c1 = c0[0]
    c2 = c0[1]
    traj[0, 0] = c1
    traj[0, 1] = c2
    half = 0.5 * dt
    for s in range(steps):
        k1a = a * (h00 * c1 + h01 * c2)
        k1b = a * (h10 * c1 + h11 * c2)
        y1 = c1 + half * k1a
        y2 = c2 + half * k1b
        k2a = a * (h00 * y1 + h01 * y2)
        k2b = a * (h10 * y1 + h11 * y2)
        y1 = c1 + half * k2a
        y2 = c2 + half * k2b
        k3a = a * (h00 * y1 + h01 * y2)
        k3b = a * (h10 * y1 + h11 * y2)
        y1 = c1 + dt * k3a
        y2 = c2 + dt * k3b
        k4a = a * (h00 * y1 + h01 * y2)
        k4b = a * (h10 * y1 + h11 * y2)
        c1 = c1 + (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        c2 = c2 + (dt / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        traj[s + 1, 0] = c1
        traj[s + 1, 1] = c2
    return traj


def _rk4_driven_loop(h, drive, dt, basis, hbar):
    """RK4 for dC/dt = -(i/hbar) H C + e_basis x(t), C(t0) = 0.

    ``drive`` holds x on the grid; half-step values are the mean of the two
    neighbouring samples, which keeps the map linear and shift-equivariant.
    """
    length = len(drive)
    traj = np.zeros((length, 2), np.complex128)
    a = -1j / hbar
    h00 = h[0, 0]
    h01 = h[0, 1]
    h10 = h[1, 0]
    h11 = h[1, 1]
    e0 = 1.0 if basis == 0 else 0.0
    e1 = 1.0 - e0
    c1 = 0j
    c2 = 0j
    half = 0.5 * dt
    for s in range(length - 1):
        x0 = drive[s]
        x2 = drive[s + 1]
        xm = 0.5 * (x0 + x2)
        k1a = a * (h00 * c1 + h01 * c2) + e0 * x0
        k1b = a * (h10 * c1 + h11 * c2) + e1 * x0
        y1 = c1 + half * k1a
        y2 = c2 + half * k1b
        k2a = a * (h00 * y1 + h01 * y2) + e0 * xm
        k2b = a * (h10 * y1 + h11 * y2) + e1 * xm
        y1 = c1 + half * k2a
        y2 = c2 + half * k2b
        k3a = a * (h00 * y1 + h01 * y2) + e0 * xm
        k3b = a * (h10 * y1 + h11 * y2) + e1 * xm
        y1 = c1 + dt * k3a
        y2 = c2 + dt * k3b
        k4a = a * (h00 * y1 + h01 * y2) + e0 * x2
        k4b = a * (h10 * y1 + h11 * y2) + e1 * x2
        c1 = c1 + (dt / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
        c2 = c2 + (dt / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b)
        traj[s + 1, 0] = c1
        traj[s + 1, 1] = c2
    return traj


# The recurrences above cannot be vectorised; without numba the loop body
# runs on Python scalars, which is several times faster than tiny ndarrays.
def _rk4_python(h, c0, dt, steps, hbar):
    hh = [[complex(h[0, 0]), complex(h[0, 1])], [complex(h[1, 0]), complex(h[1, 1])]]
    out = _rk4_loop(_ScalarMatrix(hh), (complex(c0[0]), complex(c0[1])), float(dt), int(steps), float(hbar))
    return out


def _rk4_driven_python(h, drive, dt, basis, hbar):
    hh = [[complex(h[0, 0]), complex(h[0, 1])], [complex(h[1, 0]), complex(h[1, 1])]]
    return _rk4_driven_loop(_ScalarMatrix(hh), drive.tolist(), float(dt), int(basis), float(hbar))


class _ScalarMatrix:
    """2x2 lookup over Python complex scalars, indexable like ``h[i, j]``."""

    __slots__ = ("rows",)

    def __init__(self, rows):
        self.rows = rows

    def __getitem__(self, ij):
        return self.rows[ij[0]][ij[1]]


# -- causal convolution ------------------------------------------------------

def _convolve_loop(x, h):
    n = x.shape[0]
    taps = h.shape[0]
    y = np.zeros(n, np.float64)
    for i in range(n):
        acc = 0.0
        kmax = min(i + 1, taps)
        for k in range(kmax):
            acc += h[k] * x[i - k]
        y[i] = acc
    return y


def _convolve_numpy(x, h):
    return np.convolve(x, h)[: x.shape[0]].astype(np.float64)


# -- bindings ----------------------------------------------------------------

_bit_reverse_jit = njit(_bit_reverse_loop)
dft_loop = njit(_dft_loop)
fft_loop = njit(_fft_loop)
apply_1q_loop = njit(_apply_1q_loop)
apply_cphase_loop = njit(_apply_cphase_loop)
apply_swap_loop = njit(_apply_swap_loop)
rk4_loop = njit(_rk4_loop)
rk4_driven_loop = njit(_rk4_driven_loop)
convolve_loop = njit(_convolve_loop)

bit_reverse = select(_bit_reverse_jit, _bit_reverse_numpy)
dft = select(dft_loop, _dft_numpy)
fft = select(fft_loop, _fft_numpy)
apply_1q = select(apply_1q_loop, _apply_1q_numpy)
apply_cphase = select(apply_cphase_loop, _apply_cphase_numpy)
apply_swap = select(apply_swap_loop, _apply_swap_numpy)
rk4 = select(rk4_loop, _rk4_python)
rk4_driven = select(rk4_driven_loop, _rk4_driven_python)
# np.convolve already beats the compiled direct sum; the loop stays for cross-checks
convolve = _convolve_numpy

# explicit fallbacks, for tests and the benchmark
dft_numpy = _dft_numpy
fft_numpy = _fft_numpy
bit_reverse_numpy = _bit_reverse_numpy
apply_1q_numpy = _apply_1q_numpy
apply_cphase_numpy = _apply_cphase_numpy
apply_swap_numpy = _apply_swap_numpy
rk4_python = _rk4_python
rk4_driven_python = _rk4_driven_python
convolve_numpy = _convolve_numpy
