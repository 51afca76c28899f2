"""Spectral densities, the calibrated self-energy, and its continuation."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinbath import (
    DomainError,
    QuadratureError,
    SelfEnergy,
    calibration_constant,
    self_energy,
    self_energy_fn,
    spectral_density,
)
from .conftest import drude, expcut


def pv_evaluator(bath, atol=1e-10, rtol=1e-8):
    """Force the principal-value path regardless of family."""
    return SelfEnergy(
        bath, method="principal_value", calibration=calibration_constant(),
        atol=atol, rtol=rtol,
    )


class TestSpectralDensity:
    def test_ohmic_value_at_cutoff(self):
        assert spectral_density(drude(0.2), 1.0) == pytest.approx(
            math.pi * 0.2, rel=1e-14
        )

    def test_zero_coupling_is_zero(self):
        for w in (0.1, 1.0, 7.3):
            assert spectral_density(drude(0.0), w) == 0.0
            assert spectral_density(expcut(0.0), w) == 0.0

    def test_ohmic_peak_at_cutoff(self):
        # dJ/dw = 0 at w = Omega for the s=1 algebraic cutoff.
        b = drude(0.2, Omega=2.0)
        w = np.linspace(0.05, 20.0, 4001)
        assert w[np.argmax(spectral_density(b, w))] == pytest.approx(2.0, abs=0.01)

    def test_ohmic_tail(self):
        b = drude(0.2, Omega=2.0)
        for w in (1e3, 1e5):
            expected = 2.0 * math.pi * 0.2 * 2.0 / w
            assert spectral_density(b, w) == pytest.approx(expected, rel=1e-5)

    def test_rejects_nonpositive_frequency(self):
        with pytest.raises(DomainError):
            spectral_density(drude(0.2), 0.0)
        with pytest.raises(DomainError):
            spectral_density(drude(0.2), -1.0)


class TestClosedForm:
    def test_canonical_values(self):
        b = drude(0.2, Omega=2.0)
        assert self_energy(b, 0.0) == pytest.approx(math.pi * 0.1, rel=1e-14)
        assert self_energy(b, 2.0) == pytest.approx(math.pi * 0.05, rel=1e-14)

    def test_zero_frequency_value_is_cutoff_free(self):
        for Omega in (0.5, 1.0, 30.0):
            assert self_energy(drude(0.2, Omega=Omega), 0.0) == pytest.approx(
                math.pi * 0.1, rel=1e-14
            )

    @given(
        w=st.floats(min_value=-20.0, max_value=20.0),
        gamma=st.floats(min_value=0.0, max_value=2.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_even_and_linear_in_coupling(self, w, gamma):
        b = drude(gamma, Omega=1.7)
        assert self_energy(b, w) == self_energy(b, -w)
        assert self_energy(drude(2.0 * gamma, Omega=1.7), w) == pytest.approx(
            2.0 * self_energy(b, w), rel=1e-14, abs=1e-300
        )

    def test_decays_at_high_frequency(self):
        b = drude(0.2)
        assert self_energy(b, 1e6) < 1e-9 * self_energy(b, 0.0)


class TestCalibration:
    def test_constant_is_reciprocal_pi(self):
        # A raw PV evaluation of the density-to-self-energy transform carries
        # an extra factor of pi relative to the canonical closed form; the
        # calibration constant must come out at 1/pi without being hard-coded.
        assert calibration_constant() * math.pi == pytest.approx(1.0, abs=1e-8)

    def test_numeric_path_matches_closed_form(self):
        # Dual route: calibrated PV vs canonical rational form, s = 1.
        b = drude(0.2, Omega=1.3)
        pv = pv_evaluator(b)
        closed = self_energy_fn(b)
        assert closed.method == "closed_form"
        for w in np.linspace(0.0, 5.0 * 1.3, 21):
            assert pv(w) == pytest.approx(closed(w), rel=1e-6)

    def test_numeric_path_is_stable_under_refinement(self):
        b = expcut(0.2, Omega=1.0)
        coarse = pv_evaluator(b, atol=1e-10, rtol=1e-8)
        fine = pv_evaluator(b, atol=1e-12, rtol=1e-10)
        for w in (0.0, 0.4, 1.0, 3.7):
            assert coarse(w) == pytest.approx(fine(w), rel=1e-8)


class TestGeneralFamilies:
    # Zero-frequency values from a table integral, computed here with only
    # math-library functions: the exponential cutoff gives gamma*Omega*Gamma(s)
    # and the algebraic cutoff gives gamma*(pi/2)/sin(pi s/2).
    @pytest.mark.parametrize("s", [0.5, 1.0, 1.5])
    @pytest.mark.parametrize("Omega", [1.0, 3.0])
    def test_exponential_zero_frequency(self, s, Omega):
        gamma = 0.2
        expected = gamma * Omega * math.gamma(s)
        got = self_energy(expcut(gamma, s=s, Omega=Omega), 0.0)
        assert got == pytest.approx(expected, rel=1e-6)

    @pytest.mark.parametrize("s", [0.5, 1.5])
    def test_algebraic_zero_frequency(self, s):
        gamma = 0.2
        expected = gamma * (math.pi / 2.0) / math.sin(math.pi * s / 2.0)
        got = self_energy(drude(gamma, s=s), 0.0)
        assert got == pytest.approx(expected, rel=1e-6)

    def test_exponential_zero_frequency_tracks_cutoff(self):
        # Feeds the effective-temperature contrast: the exponential family's
        # static back-action is proportional to Omega, not cutoff-free.
        lo = self_energy(expcut(0.2, Omega=1.0), 0.0)
        hi = self_energy(expcut(0.2, Omega=10.0), 0.0)
        assert hi == pytest.approx(10.0 * lo, rel=1e-6)

    def test_numeric_path_even_in_frequency(self):
        se = pv_evaluator(expcut(0.3, Omega=1.0))
        for w in (0.2, 1.1, 4.0):
            assert se(w) == se(-w)

    def test_divergent_static_limit_is_reported(self):
        # At s = 2 the zero-frequency transform diverges logarithmically;
        # the quadrature must fail loudly instead of returning a number.
        with pytest.raises(QuadratureError):
            self_energy(drude(0.1, s=2.0), 0.0)


class TestContinuation:
    def test_matches_real_axis(self):
        for bath in (drude(0.25, Omega=1.2), expcut(0.25, Omega=1.2)):
            se = (
                self_energy_fn(bath)
                if bath.family.value == "drude"
                else pv_evaluator(bath)
            )
            for w in (0.3, 1.0, 2.7):
                z = se.continued(complex(w, 0.0))
                assert z.imag == 0.0
                assert z.real == pytest.approx(se(w), rel=1e-10)

    def test_closed_form_is_the_rational_function(self):
        b = drude(0.25, Omega=1.2)
        se = self_energy_fn(b)
        for z in (0.4 - 0.3j, -1.1 - 0.05j, 0.2 + 0.6j):
            expected = (math.pi / 2.0) * 0.25 * 1.2**2 / (1.2**2 + z * z)
            assert se.continued(z) == pytest.approx(expected, rel=1e-12)

    def test_numeric_continuation_matches_rational(self):
        # The dual route extends off the real axis: calibrated contour
        # evaluation against the exact rational continuation, on both sides.
        b = drude(0.25, Omega=1.2)
        pv = pv_evaluator(b)
        for z in (0.8 - 0.4j, 0.8 + 0.4j, -1.5 - 0.2j, 0.05 - 0.9j):
            expected = (math.pi / 2.0) * 0.25 * 1.2**2 / (1.2**2 + z * z)
            assert pv.continued(z) == pytest.approx(expected, rel=1e-6)

    def test_continuous_across_real_axis(self):
        # Crossing the real axis (the branch cut of the plain transform) the
        # continued evaluator must approach the real-axis value from both
        # sides: the half-density correction exactly cancels the cut jump.
        se = pv_evaluator(expcut(0.3, Omega=1.0))
        w = 0.8
        mid = se(w)
        for eps in (1e-4, 1e-6):
            above = se.continued(complex(w, eps))
            below = se.continued(complex(w, -eps))
            assert abs(above - mid) < 5.0 * eps
            assert abs(below - mid) < 5.0 * eps

    def test_schwarz_reflection(self):
        se = pv_evaluator(expcut(0.3, Omega=1.0))
        for z in (0.7 - 0.2j, 1.4 - 0.6j):
            left = se.continued(np.conj(z))
            right = np.conj(se.continued(z))
            assert left == pytest.approx(right, rel=1e-10)


class TestZeroCoupling:
    def test_everything_vanishes(self):
        for bath in (drude(0.0), expcut(0.0)):
            se = self_energy_fn(bath)
            assert se(0.0) == 0.0
            assert se(1.3) == 0.0
            assert se.continued(0.5 - 0.5j) == 0.0
