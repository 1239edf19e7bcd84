import math

import numpy as np
import pytest
from scipy.special import digamma

from twpasim.constants import PHI0
from twpasim.critical_field import (
    ALPHA_CRITICAL,
    PSI_HALF,
    AgFit,
    TcFieldData,
    ag_fit,
    ag_tc,
    coherence_length,
    linear_fit_intercepts,
    load_tc_field_csv,
    whh_bc0,
)
from twpasim.errors import DomainError

NB_FIT = AgFit(tc0=9.15, bc_zero_tc=1.6)


def synth_data(fit, b_values):
    b = np.asarray(b_values, dtype=float)
    tc = np.array([ag_tc(float(x), fit) for x in b])
    return TcFieldData(b, tc)


class TestDigamma:
    def test_reference_value_at_half(self):
        assert float(digamma(0.5)) == pytest.approx(-1.96351002602142, abs=1e-10)
        assert PSI_HALF == float(digamma(0.5))

    @pytest.mark.parametrize("x", [0.25, 0.5, 1.0, 2.5, 7.0])
    def test_recurrence(self, x):
        assert float(digamma(x + 1.0)) == pytest.approx(float(digamma(x)) + 1.0 / x, abs=1e-10)

    def test_alpha_critical_consistent(self):
        assert ALPHA_CRITICAL == pytest.approx(math.exp(PSI_HALF), rel=1e-15)


class TestAgTc:
    def test_zero_field(self):
        assert ag_tc(0.0, NB_FIT) == 9.15

    def test_zero_tc_field(self):
        assert ag_tc(1.6, NB_FIT) == 0.0
        assert ag_tc(2.0, NB_FIT) == 0.0

    def test_small_field_expansion(self):
        # ln t ~ -psi'(1/2)*alpha with psi'(1/2) = pi^2/2
        for frac in (0.002, 0.005, 0.01):
            b = frac * NB_FIT.bc_zero_tc
            expect = NB_FIT.tc0 * (1.0 - (math.pi**2 / 2.0) * ALPHA_CRITICAL * b / NB_FIT.bc_zero_tc)
            assert ag_tc(b, NB_FIT) == pytest.approx(expect, rel=0.01)

    def test_strictly_decreasing(self):
        bs = np.linspace(0.0, 1.59, 40)
        tcs = [ag_tc(float(b), NB_FIT) for b in bs]
        assert all(b < a for a, b in zip(tcs, tcs[1:]))

    def test_raw_alpha_mode(self):
        # raw alpha = b/bc reaches the critical value at b = alpha_c*bc
        b_zero = ALPHA_CRITICAL * NB_FIT.bc_zero_tc
        assert ag_tc(b_zero, NB_FIT, raw_alpha=True) == 0.0
        assert ag_tc(0.5 * b_zero, NB_FIT, raw_alpha=True) > 0.0
        # scaled and raw modes agree under the alpha_critical rescaling
        scaled = ag_tc(0.5 * NB_FIT.bc_zero_tc, NB_FIT)
        raw = ag_tc(0.5 * ALPHA_CRITICAL * NB_FIT.bc_zero_tc, NB_FIT, raw_alpha=True)
        assert scaled == pytest.approx(raw, rel=1e-12)

    def test_negative_field_rejected(self):
        with pytest.raises(DomainError):
            ag_tc(-0.1, NB_FIT)


class TestAgFitRoundTrip:
    @pytest.mark.parametrize("bc_true", [0.5, 1.6, 13.8])
    def test_noiseless_recovery(self, bc_true):
        tc0 = 9.15 if bc_true < 5.0 else 14.0
        data = synth_data(AgFit(tc0=tc0, bc_zero_tc=bc_true), np.linspace(0.0, 0.85 * bc_true, 12))
        report = ag_fit(data, tc0)
        assert report.fit.bc_zero_tc == pytest.approx(bc_true, rel=0.005)
        assert report.residual < 1e-10

    def test_nb_like_dataset(self):
        data = synth_data(NB_FIT, np.linspace(0.0, 1.4, 15))
        report = ag_fit(data, 9.15)
        assert report.fit.bc_zero_tc == pytest.approx(1.6, rel=0.005)

    def test_nbtin_like_dataset(self):
        fit = AgFit(tc0=14.0, bc_zero_tc=13.8)
        data = synth_data(fit, np.linspace(0.0, 9.0, 19))
        report = ag_fit(data, 14.0)
        assert report.fit.bc_zero_tc == pytest.approx(13.8, rel=0.005)

    def test_rejects_tc_above_tc0(self):
        data = TcFieldData(np.array([0.0, 1.0]), np.array([9.5, 9.0]))
        with pytest.raises(DomainError):
            ag_fit(data, 9.15)


class TestWhh:
    def test_quoted_slope(self):
        # slope back-computed from the quoted 1.34 T at Tc = 9.15 K
        assert whh_bc0(9.15, 0.2123) == pytest.approx(1.34, abs=0.01)

    def test_zero_slope(self):
        assert whh_bc0(9.15, 0.0) == 0.0

    def test_unit_inputs(self):
        assert whh_bc0(1.0, 1.0) == pytest.approx(0.69, rel=1e-15)


class TestLinearFit:
    def test_two_point_line(self):
        data = TcFieldData(np.array([0.0, 1.0]), np.array([9.15, 4.44]))
        lin = linear_fit_intercepts(data)
        assert lin.b_intercept == pytest.approx(1.943, abs=5e-4)
        assert lin.tc_intercept == pytest.approx(9.15, rel=1e-12)
        assert lin.slope == pytest.approx(1.0 / (9.15 - 4.44), rel=1e-12)

    def test_perfect_line_zero_residual(self):
        tc = np.linspace(9.0, 5.0, 9)
        b = 2.0 - 0.2 * tc
        lin = linear_fit_intercepts(TcFieldData(b, tc))
        predicted = lin.b_intercept - (lin.b_intercept / lin.tc_intercept) * tc
        assert np.allclose(predicted, b, atol=1e-12)

    def test_near_tc0_matches_ag_ratio(self):
        data = synth_data(NB_FIT, np.linspace(0.0, 0.02 * 1.6, 10))
        lin = linear_fit_intercepts(data)
        ratio = NB_FIT.bc_zero_tc / lin.b_intercept
        # (pi^2/2)*exp(psi(1/2)) = 0.6931...
        assert ratio == pytest.approx(0.693, abs=0.005)

    def test_degenerate_rejected(self):
        with pytest.raises(DomainError):
            linear_fit_intercepts(TcFieldData(np.array([0.0, 1.0]), np.array([5.0, 5.0])))


class TestCoherenceLength:
    def test_quoted_value(self):
        assert coherence_length(13.8) == pytest.approx(4.89e-9, abs=0.05e-9)

    def test_sqrt_scaling(self):
        assert coherence_length(4 * 13.8) == pytest.approx(coherence_length(13.8) / 2.0, rel=1e-14)

    def test_low_field_value(self):
        assert coherence_length(1.6) == pytest.approx(14.3e-9, abs=0.05e-9)

    def test_inverse_relation(self):
        xi = coherence_length(2.5)
        assert PHI0 / (2 * math.pi * xi**2) == pytest.approx(2.5, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(DomainError):
            coherence_length(0.0)


class TestDataValidation:
    def test_too_few_points(self):
        with pytest.raises(DomainError):
            TcFieldData(np.array([0.0]), np.array([9.0]))

    def test_duplicate_fields(self):
        with pytest.raises(DomainError):
            TcFieldData(np.array([0.0, 0.0]), np.array([9.0, 8.0]))

    def test_negative_field(self):
        with pytest.raises(DomainError):
            TcFieldData(np.array([-0.5, 0.5]), np.array([9.0, 8.0]))

    def test_nonpositive_tc(self):
        with pytest.raises(DomainError):
            TcFieldData(np.array([0.0, 0.5]), np.array([9.0, 0.0]))


class TestCsvLoader:
    def test_packaged_datasets_load(self):
        from importlib import resources
        for name in ("nbtin_tc_vs_b.csv", "nb_tc_vs_b.csv"):
            with resources.as_file(resources.files("twpasim.data") / name) as p:
                data = load_tc_field_csv(p)
            assert len(data.b) >= 10
            assert data.b[0] == 0.0

    def test_malformed_rows_name_line(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("b_tesla,tc_kelvin\n0.0,9.15\nnope\n")
        with pytest.raises(DomainError, match="line 3"):
            load_tc_field_csv(p)

    def test_wrong_header_rejected(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("field,tc\n0.0,9.15\n")
        with pytest.raises(DomainError, match="header"):
            load_tc_field_csv(p)
