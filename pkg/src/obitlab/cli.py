"""Command-line entry point.

Exit codes: 0 success, 1 a check ran but did not meet its tolerance,
2 validation or domain error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from obitlab import fourier, lti, signal, state
from obitlab.errors import ObitLabError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_IO = 3

DEFAULT_TOLERANCES = {
    "gram": 1e-12,
    "evolve": 1e-6,
    "lti": lti.CHECK_REL_TOL,
    "causality": lti.CAUSALITY_TOL,
    "compare": 1e-10,
    "factorize": 1e-10,
}


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    sample_count: int = 64
    quadrature: str = "trapezoid"
    hbar: float = 1.0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    output_format: str | None = None

    def __post_init__(self):
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError(f"seed must be a nonnegative integer, got {self.seed!r}")
        signal.EncodingConfig(self.sample_count, self.quadrature)
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar!r}")
        if self.output_format not in (None, "json", "csv"):
            raise ValueError(f"format must be json or csv, got {self.output_format!r}")
        unknown = set(self.tolerances) - set(DEFAULT_TOLERANCES)
        if unknown:
            raise ValueError(f"unknown tolerance names: {sorted(unknown)}")

    @property
    def encoding(self) -> signal.EncodingConfig:
        return signal.EncodingConfig(self.sample_count, self.quadrature)

    def tol(self, name: str) -> float:
        return float(self.tolerances[name])

    def fmt(self, default: str) -> str:
        return self.output_format or default


def _parse_tol(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance {name!r} is not a number: {value!r}") from None


def build_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        raw = json.loads(Path(args.config).read_text())
        if not isinstance(raw, dict):
            raise ValueError("config file must hold a JSON object")
        tols = dict(DEFAULT_TOLERANCES)
        tols.update(raw.get("tolerances", {}))
        cfg = replace(
            cfg,
            seed=raw.get("seed", cfg.seed),
            sample_count=raw.get("samples", cfg.sample_count),
            quadrature=raw.get("quadrature", cfg.quadrature),
            hbar=raw.get("hbar", cfg.hbar),
            output_format=raw.get("format", cfg.output_format),
            tolerances=tols,
        )
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.samples is not None:
        overrides["sample_count"] = args.samples
    if args.quadrature is not None:
        overrides["quadrature"] = args.quadrature
    if args.hbar is not None:
        overrides["hbar"] = args.hbar
    if args.format is not None:
        overrides["output_format"] = args.format
    if args.tol:
        tols = dict(cfg.tolerances)
        tols.update(dict(args.tol))
        overrides["tolerances"] = tols
    return replace(cfg, **overrides)


# -- output helpers ----------------------------------------------------------

def _g(x: float) -> str:
    return f"{x:.17g}"


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _read_json(path: str):
    return json.loads(Path(path).read_text())


def _vector_dict(v: np.ndarray) -> dict:
    return {"kind": "complex", "amplitudes": [[float(z.real), float(z.imag)] for z in v]}


def _vector_csv(v: np.ndarray) -> str:
    lines = ["index,re,im"]
    lines += [f"{i},{_g(z.real)},{_g(z.imag)}" for i, z in enumerate(v)]
    return "\n".join(lines) + "\n"


def _rows_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (_g(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


# -- obit --------------------------------------------------------------------

def cmd_obit(args, cfg: RunConfig) -> int:
    enc = cfg.encoding
    if args.obit_cmd == "encode":
        s = state.state_from_dict(_read_json(args.state))
        if s.kind != "real":
            raise ObitLabError("an O-bit state must have kind 'real'")
        _emit(signal.signal_to_csv(signal.encode(s, enc)), args.out)
        return EXIT_OK
    if args.obit_cmd == "decode":
        sig = signal.signal_from_csv(Path(args.signal).read_text())
        enc = signal.EncodingConfig(sig.sample_count, cfg.quadrature)
        _emit(_json(state.state_to_dict(signal.decode(sig, enc))), args.out)
        return EXIT_OK
    report = signal.verify_orthonormality(enc)
    tol = cfg.tol("gram")
    ok = report.max_deviation <= tol
    if cfg.fmt("json") == "csv":
        rows = [{"row": i, "col": j, "value": float(report.table[i, j])} for i in range(2) for j in range(2)]
        _emit(_rows_csv(("row", "col", "value"), rows), args.out)
    else:
        out = report.to_dict()
        out.update(samples=enc.sample_count, quadrature=enc.quadrature, tolerance=tol)
        out["pass"] = ok
        _emit(_json(out), args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


# -- evolve ------------------------------------------------------------------

def _hamiltonian(path: str | None, hbar: float) -> lti.TwoLevelHamiltonian:
    if path is None:
        return lti.TwoLevelHamiltonian([[0, 1], [1, 0]], hbar)
    raw = _read_json(path)
    if isinstance(raw, list):
        raw = {"kind": "complex", "matrix": raw}
    return lti.TwoLevelHamiltonian(state.matrix_from_dict(raw), raw.get("hbar", hbar))


def cmd_evolve(args, cfg: RunConfig) -> int:
    h = _hamiltonian(args.hamiltonian, cfg.hbar)
    if args.state:
        s = state.state_from_dict(_read_json(args.state))
        if s.dim != 2:
            raise ObitLabError(f"two-level evolution needs 2 amplitudes, got {s.dim}")
        s0 = lti.TwoLevelState(*s.amplitudes)
    else:
        s0 = lti.TwoLevelState(1, 0)
    if not (args.t > 0 and args.dt > 0):
        raise ObitLabError("--t and --dt must be positive")
    grid = lti.TimeGrid.spanning(args.t, args.dt)
    traj = lti.evolve_rk4(h, s0, grid)
    exact = lti.closed_form_trajectory(h, s0, grid)
    err = float(np.max(np.abs(traj.amplitudes - exact.amplitudes)))
    tol = cfg.tol("evolve")

    lines = ["t,re_c1,im_c1,re_c2,im_c2,norm"]
    for t, (c1, c2), nrm in zip(traj.times, traj.amplitudes, traj.norms):
        lines.append(",".join(_g(v) for v in (t, c1.real, c1.imag, c2.real, c2.imag, nrm)))
    summary = {
        "t": grid.t_end,
        "dt": grid.dt,
        "steps": grid.steps,
        "hbar": h.hbar,
        "max_error_vs_closed_form": err,
        "norm_drift": traj.norm_drift,
        "final": [[float(z.real), float(z.imag)] for z in traj.final],
        "tolerance": tol,
        "pass": err <= tol,
    }
    _emit("\n".join(lines) + "\n", args.out)
    summary_text = _json(summary)
    if args.summary:
        _emit(summary_text, args.summary)
    elif args.out and args.out != "-":
        sys.stdout.write(summary_text)
    else:
        sys.stderr.write(summary_text)
    return EXIT_OK if err <= tol else EXIT_CHECK_FAILED


# -- lticheck ----------------------------------------------------------------

SYSTEMS = (
    "convolution",
    "schrodinger",
    "counterexample:nonlinear",
    "counterexample:timevarying",
    "counterexample:acausal",
)

EXPECTED = {
    "convolution": (True, True, True),
    "schrodinger": (True, True, True),
    "counterexample:nonlinear": (False, True, True),
    "counterexample:timevarying": (True, False, True),
    "counterexample:acausal": (True, True, False),
}


def lti_probe_inputs(grid: lti.TimeGrid, seed: int) -> tuple[np.ndarray, np.ndarray, float, float]:
    """Two seeded pulses supported on the second quarter of the grid, plus weights.

    Zero edges keep every comparison free of truncation effects, so only
    the axiom under test can make a check fail.
    """
    rng = np.random.default_rng(seed)
    size = grid.size
    lo, hi = size // 4, size // 2
    x1 = np.zeros(size)
    x2 = np.zeros(size)
    x1[lo:hi] = rng.standard_normal(hi - lo)
    x2[lo:hi] = rng.standard_normal(hi - lo)
    a1, a2 = rng.uniform(-2.0, 2.0, size=2)
    return x1, x2, float(a1), float(a2)


def make_system(name: str, grid: lti.TimeGrid, seed: int, h: lti.TwoLevelHamiltonian | None = None):
    if name == "convolution":
        taps = np.random.default_rng(seed + 1).standard_normal(16) * np.exp(-0.25 * np.arange(16))
        return lti.convolution_system(taps, grid)
    if name == "schrodinger":
        h = h or lti.TwoLevelHamiltonian([[0, 1], [1, 0]])
        return lti.schrodinger_system(h, 1, 0, grid)
    if name == "counterexample:nonlinear":
        return lti.squaring_system(grid)
    if name == "counterexample:timevarying":
        return lti.time_varying_gain_system(grid)
    if name == "counterexample:acausal":
        return lti.advance_system(grid)
    raise ObitLabError(f"unknown system {name!r}; choose from {', '.join(SYSTEMS)}")


def run_lti_suite(sys_: lti.SystemUnderTest, seed: int, shift: int, rel_tol: float, causal_tol: float):
    x1, x2, a1, a2 = lti_probe_inputs(sys_.grid, seed)
    return [
        lti.check_linearity(sys_, x1, x2, a1, a2, rel_tol),
        lti.check_time_invariance(sys_, x1, shift, rel_tol),
        lti.check_causality(sys_, x1, causal_tol),
    ]


def cmd_lticheck(args, cfg: RunConfig) -> int:
    if args.system not in EXPECTED:
        raise ObitLabError(f"unknown system {args.system!r}; choose from {', '.join(SYSTEMS)}")
    grid = lti.TimeGrid(0.0, args.dt, args.steps)
    h = _hamiltonian(args.hamiltonian, cfg.hbar) if args.system == "schrodinger" else None
    sys_ = make_system(args.system, grid, cfg.seed, h)
    shift = args.shift if args.shift is not None else max(1, grid.size // 8)
    reports = run_lti_suite(sys_, cfg.seed, shift, cfg.tol("lti"), cfg.tol("causality"))
    observed = tuple(r.passed for r in reports)
    matches = observed == EXPECTED[args.system]
    if cfg.fmt("json") == "csv":
        rows = [dict(r.to_dict(), **{"pass": int(r.passed)}) for r in reports]
        _emit(_rows_csv(("check", "max_deviation", "pass", "tolerance"), rows), args.out)
    else:
        _emit(_json({
            "system": args.system,
            "shift": shift,
            "reports": [r.to_dict() for r in reports],
            "expected": dict(zip(("linearity", "time_invariance", "causality"), EXPECTED[args.system])),
            "matches_expected": matches,
        }), args.out)
    return EXIT_OK if matches else EXIT_CHECK_FAILED


# -- fourier -----------------------------------------------------------------

def _fourier_input(args) -> np.ndarray:
    if args.input:
        raw = _read_json(args.input)
        kind = raw.get("kind", "complex")
        cplx = kind == "complex"
        vals = [state._decode_number(v, cplx) for v in raw["amplitudes"]]
        return np.array(vals, dtype=np.complex128)
    if args.n is None:
        raise ObitLabError("give either --input FILE or -n (with optional --delta J)")
    size = 1 << args.n
    j = args.delta or 0
    if not 0 <= j < size:
        raise ObitLabError(f"--delta {j} out of range for N = {size}")
    v = np.zeros(size, dtype=np.complex128)
    v[j] = 1.0
    return v


def _random_state(rng: np.random.Generator, size: int) -> np.ndarray:
    v = rng.standard_normal(size) + 1j * rng.standard_normal(size)
    return v / np.linalg.norm(v)


def compare_paths(n: int, seed: int, trials: int = 20) -> dict:
    """Largest residual of each fast path against the direct DFT over seeded states."""
    rng = np.random.default_rng([seed, n])
    circuit = fourier.qft_build_circuit(n)
    fact = fourier.stage_factorization(n)
    worst = {"fft": 0.0, "qft": 0.0, "factorization": 0.0}
    norm_dev = 0.0
    for _ in range(trials):
        x = _random_state(rng, 1 << n)
        ref = fourier.dft_direct(x)
        outs = {
            "fft": fourier.fft_radix2(x),
            "qft": fourier.qft_apply(circuit, x).amplitudes,
            "factorization": fact.apply(x),
        }
        for key, y in outs.items():
            worst[key] = max(worst[key], float(np.max(np.abs(y - ref))))
        for y in (ref, *outs.values()):
            norm_dev = max(norm_dev, abs(float(np.linalg.norm(y)) - 1.0))
    return {
        "n": n,
        "N": 1 << n,
        "trials": trials,
        "residual_fft": worst["fft"],
        "residual_qft": worst["qft"],
        "residual_factorization": worst["factorization"],
        "verify_factorization": fourier.verify_factorization(fact),
        "norm_deviation": norm_dev,
    }


def cmd_fourier(args, cfg: RunConfig) -> int:
    sub = args.fourier_cmd
    if sub in ("dft", "fft", "qft"):
        x = _fourier_input(args)
        if sub == "dft":
            y = fourier.dft_direct(x)
        elif sub == "fft":
            y = fourier.fft_radix2(x)
        else:
            n = fourier._log2_exact(x.size)
            circuit = fourier.qft_build_circuit(n)
            if args.dump_circuit:
                _emit(_json(circuit.to_list()), args.dump_circuit)
            y = fourier.qft_apply(circuit, x).amplitudes
        text = _vector_csv(y) if cfg.fmt("json") == "csv" else _json(_vector_dict(y))
        _emit(text, args.out)
        return EXIT_OK
    if sub == "factorize":
        f = fourier.stage_factorization(args.n)
        res = fourier.verify_factorization(f)
        tol = cfg.tol("factorize")
        _emit(_json({
            "n": f.num_qubits,
            "N": f.size,
            "stages": len(f.stages),
            "nonzeros_per_stage": [int(st.count_nonzero()) for st in f.stages],
            "residual": res,
            "tolerance": tol,
            "pass": res <= tol,
        }), args.out)
        return EXIT_OK if res <= tol else EXIT_CHECK_FAILED
    if sub == "compare":
        if not 1 <= args.n <= fourier.FACTORIZATION_MAX_QUBITS:
            raise ObitLabError(f"-n must be in [1, {fourier.FACTORIZATION_MAX_QUBITS}]")
        out = compare_paths(args.n, cfg.seed, args.trials)
        tol = cfg.tol("compare")
        keys = ("residual_fft", "residual_qft", "residual_factorization", "verify_factorization", "norm_deviation")
        ok = all(out[k] <= tol for k in keys)
        out.update(tolerance=tol)
        out["pass"] = ok
        _emit(_json(out), args.out)
        return EXIT_OK if ok else EXIT_CHECK_FAILED
    # complexity
    rows = fourier.report_rows(fourier.complexity_report(args.n_from, args.n_to))
    if cfg.fmt("csv") == "json":
        _emit(_json(rows), args.out)
    else:
        _emit(_rows_csv(fourier.REPORT_COLUMNS, rows), args.out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="JSON config file; flags override it")
    g.add_argument("--seed", type=int)
    g.add_argument("--samples", type=int, help="signal sample count M (even, >= 8)")
    g.add_argument("--quadrature", choices=signal.QUADRATURES)
    g.add_argument("--hbar", type=float)
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--tol", type=_parse_tol, action="append", metavar="NAME=VALUE",
                   help=f"tolerance override; names: {', '.join(DEFAULT_TOLERANCES)}")
    g.add_argument("--out", help="output file (default stdout)")

    p = argparse.ArgumentParser(prog="obitlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    obit = sub.add_parser("obit", help="O-bit signal encoding")
    osub = obit.add_subparsers(dest="obit_cmd", required=True)
    enc = osub.add_parser("encode", parents=[common], help="state JSON -> signal CSV")
    enc.add_argument("--state", required=True)
    dec = osub.add_parser("decode", parents=[common], help="signal CSV -> state JSON")
    dec.add_argument("--signal", required=True)
    osub.add_parser("gram", parents=[common], help="orthonormality table of the sin/cos basis")

    ev = sub.add_parser("evolve", parents=[common], help="RK4 two-level evolution vs closed form")
    ev.add_argument("--hamiltonian", help="JSON {kind, matrix} (default sigma_x)")
    ev.add_argument("--state", help="state JSON with 2 amplitudes (default |0>)")
    ev.add_argument("--t", type=float, default=math.pi / 2)
    ev.add_argument("--dt", type=float, default=1e-3)
    ev.add_argument("--summary", help="summary JSON path")

    lc = sub.add_parser("lticheck", parents=[common], help="linearity, time invariance, causality")
    lc.add_argument("system", help=" | ".join(SYSTEMS))
    lc.add_argument("--steps", type=int, default=512)
    lc.add_argument("--dt", type=float, default=0.01)
    lc.add_argument("--shift", type=int)
    lc.add_argument("--hamiltonian", help="Hamiltonian JSON for the schrodinger system")

    fo = sub.add_parser("fourier", help="DFT / FFT / QFT / stage factorization")
    fsub = fo.add_subparsers(dest="fourier_cmd", required=True)
    for name in ("dft", "fft", "qft"):
        fp = fsub.add_parser(name, parents=[common])
        fp.add_argument("--input", help="vector JSON {kind, amplitudes}")
        fp.add_argument("-n", type=int, help="qubit count for a basis-vector input")
        fp.add_argument("--delta", type=int, help="basis index j for the input |j> (default 0)")
        if name == "qft":
            fp.add_argument("--dump-circuit", help="write the gate list JSON here")
    fa = fsub.add_parser("factorize", parents=[common])
    fa.add_argument("-n", type=int, required=True)
    fc = fsub.add_parser("compare", parents=[common])
    fc.add_argument("-n", type=int, required=True)
    fc.add_argument("--trials", type=int, default=20)
    fx = fsub.add_parser("complexity", parents=[common])
    fx.add_argument("--from", dest="n_from", type=int, default=1)
    fx.add_argument("--to", dest="n_to", type=int, default=10)
    return p


HANDLERS = {"obit": cmd_obit, "evolve": cmd_evolve, "lticheck": cmd_lticheck, "fourier": cmd_fourier}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return HANDLERS[args.command](args, cfg)
    except (FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"obitlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ObitLabError, ValueError, KeyError, TypeError, IndexError) as exc:
        print(f"obitlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"obitlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
