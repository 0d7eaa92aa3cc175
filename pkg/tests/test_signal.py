import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from obitlab import (
    DimensionMismatchError,
    EncodingConfig,
    NormalizationError,
    RealAmplitudeState,
    SampledSignal,
    basis_signal,
    decode,
    encode,
    inner_product,
    new_obit,
    verify_orthonormality,
)
from obitlab.signal import grid, signal_from_csv, signal_to_csv

unit_angle = st.floats(min_value=0.0, max_value=2 * math.pi, allow_nan=False)
coef = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


def analytic_inner(a, b, c, d):
    """(1/pi) * integral of (a sin + b cos)(c sin + d cos) over one period, by scipy.quad."""
    f = lambda x: (a * math.sin(x) + b * math.cos(x)) * (c * math.sin(x) + d * math.cos(x))
    with warnings.catch_warnings():
        # quad flags roundoff once it reaches ~1e-15; that is below every tolerance used
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(f, 0.0, 2 * math.pi, epsabs=1e-14, epsrel=1e-14, limit=200)
    return val / math.pi


def test_config_validation():
    for bad in (6, 9, 0):
        with pytest.raises(ValueError):
            EncodingConfig(bad)
    with pytest.raises(ValueError):
        EncodingConfig(64, "gauss")


class TestBasisSignal:
    def test_sin_peak(self):
        s = basis_signal(0, EncodingConfig(8))
        assert s.samples[2] == pytest.approx(1.0, abs=0)  # xi = pi/2

    def test_cos_at_zero(self):
        assert basis_signal(1, EncodingConfig(8)).samples[0] == 1.0

    @pytest.mark.parametrize("m", [8, 64, 256, 1000])
    def test_sin_at_zero(self, m):
        assert basis_signal(0, EncodingConfig(m)).samples[0] == 0.0

    def test_grid_excludes_endpoint(self):
        xi = grid(16)
        assert xi[0] == 0.0 and xi[-1] < 2 * math.pi
        assert xi.size == 16


class TestEncode:
    cfg = EncodingConfig(64)

    def test_basis_states(self):
        assert encode(new_obit(1, 0), self.cfg) == basis_signal(0, self.cfg)
        assert encode(new_obit(0, 1), self.cfg) == basis_signal(1, self.cfg)

    def test_diagonal(self):
        r = 1 / math.sqrt(2)
        sig = encode(RealAmplitudeState([r, r]), self.cfg)
        xi = grid(64)
        np.testing.assert_allclose(sig.samples, (np.sin(xi) + np.cos(xi)) / math.sqrt(2), atol=1e-15)
        np.testing.assert_allclose(sig.samples, np.sin(xi + math.pi / 4), atol=1e-15)

    def test_rejects_multi_obit(self):
        with pytest.raises(DimensionMismatchError):
            encode(RealAmplitudeState([0.5, 0.5, 0.5, 0.5]), self.cfg)


class TestInnerProduct:
    @pytest.mark.parametrize("m", [64, 128, 1024])
    @pytest.mark.parametrize("rule", ["trapezoid", "simpson"])
    def test_orthonormal_table(self, m, rule):
        cfg = EncodingConfig(m, rule)
        f0, f1 = basis_signal(0, cfg), basis_signal(1, cfg)
        assert abs(inner_product(f0, f0, cfg) - 1) <= 1e-12
        assert abs(inner_product(f1, f1, cfg) - 1) <= 1e-12
        assert abs(inner_product(f0, f1, cfg)) <= 1e-12

    def test_sum_against_basis(self):
        cfg = EncodingConfig(64)
        f0, f1 = basis_signal(0, cfg), basis_signal(1, cfg)
        # analytic value (1/pi) * (pi + 0)
        assert abs(inner_product(f0 + f1, f0, cfg) - analytic_inner(1, 1, 1, 0)) <= 1e-10
        assert abs(inner_product(f0 + f1, f0, cfg) - 1.0) <= 1e-10

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            inner_product(basis_signal(0, EncodingConfig(8)), basis_signal(0, EncodingConfig(16)))

    @settings(max_examples=60, deadline=None)
    @given(coef, coef, st.integers(0, 2**32 - 1), st.sampled_from(["trapezoid", "simpson"]))
    def test_bilinear(self, alpha, beta, seed, rule):
        cfg = EncodingConfig(64, rule)
        r = np.random.default_rng(seed)
        s1, s2, s3 = (SampledSignal(r.standard_normal(64)) for _ in range(3))
        lhs = inner_product(alpha * s1 + beta * s2, s3, cfg)
        rhs = alpha * inner_product(s1, s3, cfg) + beta * inner_product(s2, s3, cfg)
        assert abs(lhs - rhs) <= 1e-12

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.sampled_from(["trapezoid", "simpson"]))
    def test_symmetric_exactly(self, seed, rule):
        cfg = EncodingConfig(128, rule)
        r = np.random.default_rng(seed)
        s1, s2 = SampledSignal(r.standard_normal(128)), SampledSignal(r.standard_normal(128))
        assert inner_product(s1, s2, cfg) == inner_product(s2, s1, cfg)

    @settings(max_examples=60, deadline=None)
    @given(unit_angle, unit_angle)
    def test_matches_scipy_quad(self, th1, th2):
        cfg = EncodingConfig(256)
        a, b, c, d = math.cos(th1), math.sin(th1), math.cos(th2), math.sin(th2)
        got = inner_product(encode(new_obit(a, b), cfg), encode(new_obit(c, d), cfg), cfg)
        assert abs(got - analytic_inner(a, b, c, d)) <= 1e-10

    @settings(max_examples=60, deadline=None)
    @given(unit_angle)
    def test_norm_correspondence(self, th):
        cfg = EncodingConfig(64)
        s = new_obit(math.cos(th), math.sin(th))
        sig = encode(s, cfg)
        assert abs(inner_product(sig, sig, cfg) - float(np.sum(s.amplitudes ** 2))) <= 1e-10


class TestDecode:
    def test_round_trip_pythagorean(self):
        cfg = EncodingConfig(256)
        out = decode(encode(new_obit(0.6, 0.8), cfg), cfg)
        # analytic integrals of the encoded waveform against sin and cos
        oracle = (analytic_inner(0.6, 0.8, 1, 0), analytic_inner(0.6, 0.8, 0, 1))
        np.testing.assert_allclose(oracle, [0.6, 0.8], atol=1e-12)
        np.testing.assert_allclose(out.amplitudes, oracle, rtol=0, atol=1e-9)

    def test_sin_is_zero_state(self):
        cfg = EncodingConfig(64)
        np.testing.assert_allclose(decode(basis_signal(0, cfg), cfg).amplitudes, [1, 0], atol=1e-12)

    def test_zero_signal(self):
        cfg = EncodingConfig(64)
        with pytest.raises(NormalizationError):
            decode(SampledSignal(np.zeros(64)), cfg)

    def test_scaled_waveform_is_not_an_obit(self):
        cfg = EncodingConfig(64)
        with pytest.raises(NormalizationError):
            decode(2 * basis_signal(1, cfg), cfg)

    def test_random_round_trips(self, rng):
        cfg = EncodingConfig(256)
        for th in rng.uniform(0, 2 * math.pi, 100):
            s = new_obit(math.cos(th), math.sin(th))
            assert np.linalg.norm(decode(encode(s, cfg), cfg).amplitudes - s.amplitudes) <= 1e-9


class TestOrthonormality:
    @pytest.mark.parametrize("m", [8, 10, 64, 512])
    @pytest.mark.parametrize("rule", ["trapezoid", "simpson"])
    def test_gram_is_identity(self, m, rule):
        rep = verify_orthonormality(EncodingConfig(m, rule))
        assert rep.max_deviation <= 1e-12
        assert rep.table.shape == (2, 2)

    def test_diagonal_ones(self):
        rep = verify_orthonormality(EncodingConfig(64))
        assert rep.table[0, 0] == pytest.approx(1.0, abs=1e-15)
        assert rep.table[1, 1] == pytest.approx(1.0, abs=1e-15)


class TestCsv:
    def test_round_trip_bit_exact(self, rng):
        sig = SampledSignal(rng.standard_normal(64))
        text = signal_to_csv(sig)
        assert text.startswith("xi,value\n")
        back = signal_from_csv(text)
        assert np.array_equal(back.samples, sig.samples)
        assert signal_to_csv(back) == text

    def test_bad_header(self):
        with pytest.raises(ValueError):
            signal_from_csv("t,v\n0,1\n")

    def test_wrong_grid(self):
        rows = "".join(f"{k * 0.5},0\n" for k in range(8))
        with pytest.raises(ValueError):
            signal_from_csv("xi,value\n" + rows)
