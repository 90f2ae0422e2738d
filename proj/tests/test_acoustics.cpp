#include <gtest/gtest.h>

#include "cqad/acoustics.hpp"
#include "cqad/device.hpp"
#include "oracles.hpp"

using namespace cqad;

namespace {

// Mode index whose frequency is closest to f.
int nearest_mode(double f, const IdtGeometry& g, double v_s = 2880.0) {
    return static_cast<int>(std::lround(f * 2.0 * g.L_eff / v_s));
}

} // namespace

TEST(ArrayFactor, SplitFingerUnitCellValue) {
    EXPECT_NEAR(kSplitFingerFactor, 0.6533, 1e-4);
}

TEST(ArrayFactor, PeakModeReachesUnitCellFactor) {
    // Pick x0 so that sin(m pi x0 / L) = 1 for the mode at the IDT center frequency.
    IdtGeometry g;
    const int m = nearest_mode(g.periodicity_frequency(2880.0), g);
    g.x0 = g.L_eff * (0.5 + 2.0 * 10) / m;
    const double f_m = m * 2880.0 / (2.0 * g.L_eff);
    const auto af = array_factor(m, g, f_m);
    EXPECT_NEAR(std::abs(af.closed), kSplitFingerFactor, 2e-3);
    EXPECT_NEAR(std::abs(af.exact), kSplitFingerFactor, 0.02 * kSplitFingerFactor);
}

TEST(ArrayFactor, ExactSumTracksClosedFormNearCenter) {
    const IdtGeometry g;
    const int mc = nearest_mode(g.periodicity_frequency(2880.0), g);
    for (int m = mc - 40; m <= mc + 40; ++m) {
        const double f_m = m * 2880.0 / (2.0 * g.L_eff);
        const auto af = array_factor(m, g, f_m);
        EXPECT_NEAR(af.exact, af.closed, 0.02 * kSplitFingerFactor) << "m " << m;
    }
}

TEST(ArrayFactor, CenteredAtCavityEdgeGivesZero) {
    IdtGeometry g;
    g.x0 = 0.0;
    const int m = nearest_mode(4.253e9, g);
    const auto af = array_factor(m, g, m * 2880.0 / (2.0 * g.L_eff));
    EXPECT_NEAR(af.closed, 0.0, 1e-15);
    EXPECT_NEAR(af.exact, 0.0, 1e-12);
}

TEST(ArrayFactor, ConnectivityLengthChecked) {
    IdtGeometry g;
    g.connectivity = {1, -1, 1};
    EXPECT_THROW(array_factor(10, g, 4.25e9), ShapeError);
}

TEST(ArrayFactor, UniformConnectivityCancelsInsideBand) {
    // All-positive edges only sample the envelope; the carrier averages out.
    IdtGeometry g;
    g.connectivity.assign(static_cast<std::size_t>(8 * g.N_q), 1);
    const int m = nearest_mode(4.253e9, g);
    const auto af = array_factor(m, g, m * 2880.0 / (2.0 * g.L_eff));
    EXPECT_LT(std::abs(af.exact), 0.05);
}

TEST(ZeroPoint, ScalesAsInverseRootArea) {
    const PhysicalConstants c;
    const double a = 50e-6 * 300e-6;
    EXPECT_NEAR(zero_point_voltage(c, a / 10.0, c.v_s) / zero_point_voltage(c, a, c.v_s), std::sqrt(10.0), 1e-12);
    EXPECT_NEAR(zero_point_voltage(c, a, 4.0 * c.v_s) / zero_point_voltage(c, a, c.v_s), 0.5, 1e-12);
}

TEST(ChargeFluctuation, QuarterPowerOfEnergyRatio) {
    const double q = charge_fluctuation(17.42e9, 200e6, 1.0);
    EXPECT_NEAR(q / (std::sqrt(2.0) * PhysicalConstants{}.e * std::pow(17.42e9 / 1.6e9, 0.25)), 1.0, 1e-12);
    EXPECT_NEAR(charge_fluctuation(16 * 17.42e9, 200e6, 1.0) / q, 2.0, 1e-12);
    EXPECT_NEAR(charge_fluctuation(17.42e9, 200e6, 0.5) / q, 0.5, 1e-12);
    EXPECT_THROW(charge_fluctuation(0.0, 200e6, 1.0), DomainError);
}

TEST(CouplingEstimate, PeakInMeasuredRange) {
    const Device d = default_device();
    const double g = peak_coupling_estimate(d.geometry, d.energies, d.constants);
    EXPECT_GE(g, 7e6);
    EXPECT_LE(g, 10e6);
}

TEST(CouplingEstimate, AreaScaling) {
    const Device d = default_device();
    IdtGeometry small = d.geometry;
    small.area = d.geometry.effective_area() / 10.0;
    const double r = peak_coupling_estimate(small, d.energies, d.constants) /
                     peak_coupling_estimate(d.geometry, d.energies, d.constants);
    EXPECT_NEAR(r / std::sqrt(10.0), 1.0, 0.01);
}

TEST(CouplingEstimate, ModeByModeBoundedByPeak) {
    const Device d = default_device();
    const double peak = peak_coupling_estimate(d.geometry, d.energies, d.constants);
    const int mc = nearest_mode(4.253e9, d.geometry);
    for (int m = mc - 10; m <= mc + 10; ++m) {
        EXPECT_LE(std::abs(coupling_estimate(m, d.geometry, d.energies, d.constants, true)), peak * (1 + 1e-12));
        EXPECT_LE(std::abs(coupling_estimate(m, d.geometry, d.energies, d.constants)), 1.02 * peak);
    }
}

TEST(Emission, PeakRate) {
    EXPECT_NEAR(emission_rate_max(24, 4.253e9, 7e-4) / 32e6, 1.0, 0.03);
    EXPECT_DOUBLE_EQ(emission_rate(4.253e9, 24, 4.253e9, 7e-4), emission_rate_max(24, 4.253e9, 7e-4));
}

TEST(Emission, CoherentCancellationNulls) {
    const double fc = 4.253e9, gmax = emission_rate_max(24, fc, 7e-4);
    for (int k = 1; k <= 4; ++k)
        for (int s : {-1, 1}) EXPECT_LT(emission_rate(fc * (1.0 + s * k / 24.0), 24, fc, 7e-4), 1e-12 * gmax);
}

TEST(Emission, FarBelowBand) {
    EXPECT_LT(emission_rate(3.9e9, 24, 4.253e9, 7e-4), 10e3);
    EXPECT_THROW(emission_rate(0.0, 24, 4.253e9, 7e-4), DomainError);
}

TEST(Emission, LinewidthRatioBetweenSideLobeAndNull) {
    const EmissionParams e;
    const double null = qubit_linewidth(e.f_c * (1.0 - 1.0 / e.N_q), 1.1e6, e);
    const double lobe = qubit_linewidth(4.0e9, 1.1e6, e);
    EXPECT_NEAR(null, 1.1e6, 1e-3);
    EXPECT_GE(lobe / null, 2.0);
    EXPECT_LE(lobe / null, 4.0);
}

// sinc^2 envelope against the power spectrum of a finite sinusoidal pulse
// lasting N_q carrier periods, computed by direct quadrature.
TEST(Emission, EnvelopeMatchesPulseSpectrum) {
    const int nq = 24;
    const double fc = 4.253e9, T = nq / fc;
    const double p0 = oracle::pulse_power(fc, fc, T, 20000);
    for (double f = 3.9e9; f <= 4.6e9; f += 5e6) {
        const double quad = oracle::pulse_power(f, fc, T, 20000) / p0;
        const double model = emission_rate(f, nq, fc, 7e-4) / emission_rate_max(nq, fc, 7e-4);
        EXPECT_NEAR(quad, model, 0.01) << "f " << f;
    }
}

TEST(SawConductance, ProportionalToEmission) {
    const EmissionParams e;
    const double r1 = saw_conductance(4.2e9, e.N_q, e.f_c, e.K2, 50e-6, 1.2e-10) / emission_rate(4.2e9, e);
    const double r2 = saw_conductance(4.3e9, e.N_q, e.f_c, e.K2, 50e-6, 1.2e-10) / emission_rate(4.3e9, e);
    EXPECT_NEAR(r1 / r2, 1.0, 1e-12);
}
