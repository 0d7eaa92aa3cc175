"""End-to-end acceptance suite: one test per criterion, each at its stated
tolerance and runtime budget. Every test records a pass/fail line that is
printed in the terminal summary.

Timings are taken after a warm-up call so that one-off JIT compilation is
not charged to the workload; the best of a few repeats is reported.
"""
import json
import math
import os
import subprocess
import sys
import time

import numpy as np

from obitlab import (
    ComplexAmplitudeState,
    EncodingConfig,
    OrthogonalGate,
    RealAmplitudeState,
    TimeGrid,
    TwoLevelHamiltonian,
    TwoLevelState,
    UnitaryGate,
    apply_gate,
    check_causality,
    check_linearity,
    check_time_invariance,
    complexity_report,
    decode,
    dft_direct,
    encode,
    evolve_rk4,
    fft_radix2,
    givens_rotation,
    new_obit,
    propagator_closed_form,
    qft_apply,
    qft_build_circuit,
    stage_factorization,
    verify_factorization,
    verify_orthonormality,
)
from obitlab.fourier import fft_radix2_counted, report_rows
from obitlab.lti import (
    advance_system,
    closed_form_trajectory,
    convolution_system,
    schrodinger_system,
    squaring_system,
    time_varying_gain_system,
)
from tests.conftest import ACCEPTANCE_LINES, SEED, random_hermitian, random_orthogonal, random_unitary


def timed(fn, repeats=3):
    fn()  # warm-up (JIT, caches)
    best = math.inf
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return result, best


def record(number, title, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number}. {title}: {detail}")


def random_state(rng, size):
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return v / np.linalg.norm(v)


# 1 -------------------------------------------------------------------------

def test_1_orthonormality_table():
    cfg = EncodingConfig(sample_count=64, quadrature="trapezoid")
    rep, secs = timed(lambda: verify_orthonormality(cfg), repeats=20)
    ok = rep.max_deviation <= 1e-12 and secs < 1e-3
    record(1, "Gram table at M=64", ok, f"deviation {rep.max_deviation:.2e} (<= 1e-12), {secs * 1e3:.3f} ms (< 1 ms)")
    assert rep.max_deviation <= 1e-12
    assert secs < 1e-3


# 2 -------------------------------------------------------------------------

def test_2_encode_decode_round_trip():
    cfg = EncodingConfig(sample_count=256)
    rng = np.random.default_rng(SEED)
    angles = rng.uniform(0.0, 2 * math.pi, 100)
    states = [new_obit(math.cos(a), math.sin(a)) for a in angles]

    def run():
        worst = 0.0
        for s in states:
            back = decode(encode(s, cfg), cfg)
            worst = max(worst, float(np.max(np.abs(back.amplitudes - s.amplitudes))))
        return worst

    worst, secs = timed(run)
    ok = worst <= 1e-9 and secs < 0.05
    record(2, "encode/decode round-trip, 100 O-bits at M=256", ok,
           f"max error {worst:.2e} (<= 1e-9), {secs * 1e3:.2f} ms (< 50 ms)")
    assert worst <= 1e-9
    assert secs < 0.05


# 3 -------------------------------------------------------------------------

def _order_ratios(h, s0):
    # halving from a step where truncation error dominates roundoff
    dt0 = 0.2 / h.spectral_norm
    errs = []
    for level in range(3):
        grid = TimeGrid(0, dt0 / 2 ** level, 25 * 2 ** level)
        exact = propagator_closed_form(h, grid.t_end).matrix @ s0.vector
        errs.append(float(np.max(np.abs(evolve_rk4(h, s0, grid).final - exact))))
    return errs[0] / errs[1], errs[1] / errs[2]


def test_3_two_level_evolution():
    rng = np.random.default_rng(SEED)
    cases = []
    for _ in range(100):
        h = TwoLevelHamiltonian(random_hermitian(rng, max_norm=5.0))
        s0 = TwoLevelState(*random_state(rng, 2))
        t = float(rng.uniform(0.0, 10.0))
        cases.append((h, s0, TimeGrid.spanning(t, 1e-3)))
    assert max(h.spectral_norm for h, _, _ in cases) <= 5.0 + 1e-12

    def run():
        worst = 0.0
        ratios = []
        for h, s0, grid in cases:
            rk = evolve_rk4(h, s0, grid)
            exact = closed_form_trajectory(h, s0, grid)
            worst = max(worst, float(np.max(np.abs(rk.amplitudes - exact.amplitudes))))
            ratios.extend(_order_ratios(h, s0))
        return worst, min(ratios), max(ratios)

    (worst, rmin, rmax), secs = timed(run, repeats=1)
    ok = worst <= 1e-5 and 12 <= rmin and rmax <= 20 and secs < 5.0
    record(3, "RK4 vs closed form, 100 Hamiltonians", ok,
           f"max error {worst:.2e} (<= 1e-5), order ratios [{rmin:.2f}, {rmax:.2f}] (in [12, 20]), "
           f"{secs:.2f} s (< 5 s)")
    assert worst <= 1e-5
    assert 12 <= rmin and rmax <= 20
    assert secs < 5.0


# 4 -------------------------------------------------------------------------

def test_4_lti_axiom_suite():
    grid = TimeGrid(0.0, 0.01, 512)
    rng = np.random.default_rng(SEED)
    taps = rng.standard_normal(16) * np.exp(-0.25 * np.arange(16))
    h = TwoLevelHamiltonian(random_hermitian(rng, max_norm=5.0))
    size = grid.size
    x1 = np.zeros(size)
    x2 = np.zeros(size)
    x1[size // 4: size // 2] = rng.standard_normal(size // 4)
    x2[size // 4: size // 2] = rng.standard_normal(size // 4)
    a1, a2 = rng.uniform(-2, 2, 2)
    shift = size // 8

    systems = {
        "convolution": (convolution_system(taps, grid), (True, True, True)),
        "schrodinger C1<-e0": (schrodinger_system(h, 1, 0, grid), (True, True, True)),
        "schrodinger C2<-e0": (schrodinger_system(h, 2, 0, grid), (True, True, True)),
        "nonlinear": (squaring_system(grid), (False, True, True)),
        "time-varying": (time_varying_gain_system(grid), (True, False, True)),
        "acausal": (advance_system(grid), (True, True, False)),
    }

    def run():
        return {
            name: (
                check_linearity(s, x1, x2, a1, a2, 1e-9).passed,
                check_time_invariance(s, x1, shift, 1e-9).passed,
                check_causality(s, x1, 1e-12).passed,
            )
            for name, (s, _) in systems.items()
        }

    observed, secs = timed(run)
    mismatched = [n for n, (_, want) in systems.items() if observed[n] != want]
    ok = not mismatched and secs < 1.0
    record(4, "LTI checkers on 3 LTI systems and 3 counterexamples", ok,
           f"{len(systems) - len(mismatched)}/{len(systems)} systems give the expected verdicts, "
           f"{secs * 1e3:.1f} ms (< 1 s)")
    assert not mismatched, mismatched
    assert secs < 1.0


# 5 -------------------------------------------------------------------------

def test_5_four_way_fourier_equivalence():
    rng = np.random.default_rng(SEED)
    inputs = {n: [random_state(rng, 2 ** n) for _ in range(20)] for n in range(1, 9)}

    def run():
        worst = 0.0
        worst_fact = 0.0
        for n, xs in inputs.items():
            circuit = qft_build_circuit(n)
            fact = stage_factorization(n)
            worst_fact = max(worst_fact, verify_factorization(fact))
            for x in xs:
                outs = [dft_direct(x), fft_radix2(x), qft_apply(circuit, x).amplitudes, fact.apply(x)]
                for i in range(4):
                    for j in range(i + 1, 4):
                        worst = max(worst, float(np.max(np.abs(outs[i] - outs[j]))))
        return worst, worst_fact

    (worst, worst_fact), secs = timed(run, repeats=1)
    ok = worst <= 1e-10 and worst_fact <= 1e-10 and secs < 10.0
    record(5, "DFT/FFT/QFT/stage product agree, n=1..8 x 20 states", ok,
           f"pairwise residual {worst:.2e}, factorization residual {worst_fact:.2e} (<= 1e-10), "
           f"{secs:.2f} s (< 10 s)")
    assert worst <= 1e-10
    assert worst_fact <= 1e-10
    assert secs < 10.0


# 6 -------------------------------------------------------------------------

def test_6_operation_counts():
    def run():
        bad = []
        for n in range(1, 21):
            if len(qft_build_circuit(n)) != n * (n + 1) // 2 + n // 2:
                bad.append(f"qft n={n}")
        for k in range(11):
            size = 2 ** k
            _, counts = fft_radix2_counted(np.ones(size, dtype=complex))
            if counts.complex_mults != (size // 2) * k:
                bad.append(f"fft N={size}")
        for row in report_rows(complexity_report(1, 10)):
            n, size = row["n"], row["N"]
            if (row["dft_mults"], row["fft_mults"], row["fft_adds"], row["qft_gates"]) != (
                size * size, (size // 2) * n, size * n, n * (n + 1) // 2 + n // 2
            ):
                bad.append(f"report n={n}")
        return bad

    bad, secs = timed(run)
    ok = not bad and secs < 1.0
    record(6, "gate and multiply counts match closed forms", ok,
           f"{len(bad)} mismatches, {secs * 1e3:.1f} ms (< 1 s)")
    assert not bad, bad
    assert secs < 1.0


# 7 -------------------------------------------------------------------------

def test_7_norm_preservation():
    rng = np.random.default_rng(SEED)
    devs = {"gates": 0.0, "propagators": 0.0, "transforms": 0.0}

    for d in (2, 4, 8, 16):
        orth = OrthogonalGate(random_orthogonal(rng, d))
        unit = UnitaryGate(random_unitary(rng, d))
        for _ in range(20):
            r = rng.standard_normal(d)
            rs = RealAmplitudeState(r / np.linalg.norm(r))
            cs = ComplexAmplitudeState(random_state(rng, d))
            i, j = sorted(rng.choice(d, 2, replace=False))
            g = givens_rotation(d, int(i), int(j), float(rng.uniform(0, 2 * math.pi)))
            for out in (apply_gate(rs, orth), apply_gate(rs, g), apply_gate(cs, unit)):
                devs["gates"] = max(devs["gates"], abs(float(np.linalg.norm(out.amplitudes)) - 1.0))

    for _ in range(100):
        h = TwoLevelHamiltonian(random_hermitian(rng, max_norm=5.0))
        s0 = TwoLevelState(*random_state(rng, 2))
        t = float(rng.uniform(0.0, 10.0))
        u = propagator_closed_form(h, t).matrix
        devs["propagators"] = max(devs["propagators"], abs(float(np.linalg.norm(u @ s0.vector)) - 1.0))
        traj = evolve_rk4(h, s0, TimeGrid.spanning(t, 1e-3))
        devs["propagators"] = max(devs["propagators"], traj.norm_drift)

    for n in range(1, 9):
        circuit = qft_build_circuit(n)
        fact = stage_factorization(n)
        for _ in range(20):
            x = random_state(rng, 2 ** n)
            for y in (dft_direct(x), fft_radix2(x), qft_apply(circuit, x).amplitudes, fact.apply(x)):
                devs["transforms"] = max(devs["transforms"], abs(float(np.linalg.norm(y)) - 1.0))

    ok = all(v <= 1e-10 for v in devs.values())
    record(7, "norm preservation", ok,
           ", ".join(f"{k} {v:.2e}" for k, v in devs.items()) + " (each <= 1e-10)")
    for key, v in devs.items():
        assert v <= 1e-10, key


# 8 -------------------------------------------------------------------------

def _cli(args, cwd):
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "obitlab", *args], cwd=cwd, env=env, capture_output=True, timeout=120
    )
    return proc.returncode, proc.stdout


def test_8_cli_determinism(tmp_path):
    (tmp_path / "s.json").write_text(json.dumps({"kind": "real", "amplitudes": [0.6, 0.8]}))
    commands = [
        ["obit", "gram", "--samples", "64"],
        ["obit", "encode", "--state", "s.json", "--samples", "256"],
        ["evolve", "--t", "1.5", "--dt", "1e-3"],
        ["lticheck", "convolution", "--seed", "11"],
        ["lticheck", "schrodinger", "--seed", "11"],
        ["lticheck", "counterexample:nonlinear", "--seed", "11"],
        ["fourier", "compare", "-n", "6", "--seed", "11"],
        ["fourier", "qft", "-n", "4", "--delta", "3", "--dump-circuit", "circuit.json"],
        ["fourier", "factorize", "-n", "5"],
        ["fourier", "complexity", "--from", "1", "--to", "10"],
    ]
    differing = []
    for cmd in commands:
        runs = []
        for _ in range(2):
            code, out = _cli(cmd, tmp_path)
            extra = (tmp_path / "circuit.json").read_bytes() if "--dump-circuit" in cmd else b""
            runs.append((code, out, extra))
        if runs[0] != runs[1] or runs[0][0] != 0:
            differing.append(" ".join(cmd))
    ok = not differing
    record(8, "CLI determinism", ok,
           f"{len(commands) - len(differing)}/{len(commands)} commands bitwise identical across repeats")
    assert not differing, differing
