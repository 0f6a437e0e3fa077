#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "abring/pzfit.hpp"
#include "../oracles/derived.hpp"

using namespace abring;

namespace {

PoleZeroSet five_modes() {
    PoleZeroSet truth;
    const double fn[5] = {8.1e9, 8.35e9, 8.6e9, 8.85e9, 9.1e9};
    for (int i = 0; i < 5; ++i) {
        truth.modes.push_back({fn[i], 30e6 + 5e6 * i, fn[i] + 3e6 * (i - 2), 20e6 - 8e6 * i});
    }
    return truth;
}

ComplexDelaySpectrum synthesize(const PoleZeroSet& set, const FrequencyGrid& g) {
    ComplexDelaySpectrum d{g, {}, {}, DelayKind::wigner_smith};
    for (int k = 0; k < g.size(); ++k) {
        d.values.push_back(model_tau(set, g[k]));
        d.valid.push_back(1);
    }
    return d;
}

double worst_relative_error(const PoleZeroSet& fit, const PoleZeroSet& truth) {
    double worst = 0.0;
    for (std::size_t i = 0; i < truth.modes.size(); ++i) {
        const auto& a = fit.modes[i];
        const auto& b = truth.modes[i];
        worst = std::max({worst, std::abs(a.f_n - b.f_n) / b.f_n,
                          std::abs(a.gamma_n - b.gamma_n) / b.gamma_n,
                          std::abs(a.z_re - b.z_re) / b.z_re,
                          std::abs(a.z_im - b.z_im) / std::abs(b.z_im)});
    }
    return worst;
}

} // namespace

TEST(PzModel, MirroredPairPeakMatchesFrozenValue) {
    PoleZeroSet s;
    s.modes.push_back({8.5e9, 10e6, 8.5e9, 10e6});
    const auto tau = model_tau(s, 8.5e9);
    EXPECT_NEAR(tau.real(), oracle::kMirroredPairPeak, 1e-12 * oracle::kMirroredPairPeak);
    EXPECT_NEAR(tau.imag(), 0.0, 1e-25);
}

TEST(PzModel, ConjugateZeroCancelsPole) {
    // Zero at the pole's conjugate (z_im = -Gamma): Re tau vanishes, Im tau is
    // odd around f_n.
    PoleZeroSet s;
    s.modes.push_back({8.5e9, 10e6, 8.5e9, -10e6});
    for (double df : {-3e7, -1e6, 2e6, 5e7}) {
        const auto tau = model_tau(s, 8.5e9 + df);
        EXPECT_NEAR(tau.real(), 0.0, 1e-22);
        EXPECT_NEAR(tau.imag(), -model_tau(s, 8.5e9 - df).imag(), 1e-22);
    }
}

TEST(PzModel, EtaShiftsBothWidths) {
    // Pole width Gamma + eta and zero width z_im - eta: the pair with eta
    // equals the shifted pair without eta.
    PoleZeroSet a, b;
    a.modes.push_back({8.5e9, 10e6, 8.52e9, 15e6});
    a.eta = 4e6;
    b.modes.push_back({8.5e9, 14e6, 8.52e9, 11e6});
    for (double f = 8.4e9; f < 8.6e9; f += 7e6) {
        EXPECT_LT(std::abs(model_tau(a, f) - model_tau(b, f)), 1e-22);
    }
}

TEST(PzModel, SinglePortNormalization) {
    PoleZeroSet s;
    s.modes.push_back({8.5e9, 10e6, 8.6e9, 12e6});
    const auto two = model_tau(s, 8.53e9);
    s.m_ports = 1;
    EXPECT_LT(std::abs(model_tau(s, 8.53e9) - 2.0 * two), 1e-22);
    s.m_ports = 0;
    EXPECT_THROW(model_tau(s, 8.5e9), DomainError);
}

TEST(PzModel, RealAxisSingularityThrows) {
    PoleZeroSet s;
    s.modes.push_back({8.5e9, 0.0, 8.6e9, 12e6});
    EXPECT_THROW(model_tau(s, 8.5e9), DomainError);
    s.modes[0] = {8.5e9, 10e6, 8.6e9, 0.0};
    EXPECT_THROW(model_tau(s, 8.6e9), DomainError);
}

TEST(PzModel, SortModes) {
    PoleZeroSet s;
    s.modes = {{9e9, 1, 9e9, 1}, {8e9, 1, 8e9, 1}};
    s.sort_modes();
    EXPECT_EQ(s.modes[0].f_n, 8e9);
}

TEST(PzFit, FiveModeRoundTripFromAutoInit) {
    const auto truth = five_modes();
    const auto d = synthesize(truth, FrequencyGrid(7.95e9, 9.25e9, 2601));
    const auto r = fit(d, 5, std::nullopt, 0.0);
    EXPECT_TRUE(r.converged);
    ASSERT_EQ(r.set.modes.size(), 5u);
    EXPECT_LT(worst_relative_error(r.set, truth), 1e-6);
    for (std::size_t i = 1; i < r.cost_history.size(); ++i) {
        EXPECT_LT(r.cost_history[i], r.cost_history[i - 1]);
    }
}

TEST(PzFit, ExplicitInitAndEta) {
    auto truth = five_modes();
    truth.eta = 5e6;
    const auto d = synthesize(truth, FrequencyGrid(7.95e9, 9.25e9, 2601));
    auto init = truth;
    for (auto& m : init.modes) {
        m.f_n += 4e6;
        m.gamma_n *= 1.2;
        m.z_re -= 3e6;
        // stretch the zero width z_im - eta without crossing the real axis
        m.z_im = truth.eta + 1.2 * (m.z_im - truth.eta);
    }
    const auto r = fit(d, 5, init, truth.eta);
    EXPECT_LT(worst_relative_error(r.set, truth), 1e-6);
    EXPECT_EQ(r.set.eta, truth.eta);
}

TEST(PzFit, FreeEtaIsDegenerate) {
    // Eta trades off exactly against Gamma_n and z_im, so the Jacobian has a
    // null direction that the fit must report.
    const auto truth = five_modes();
    const auto d = synthesize(truth, FrequencyGrid(7.95e9, 9.25e9, 2601));
    FitOptions o;
    o.free_eta = true;
    const auto r = fit(d, 5, std::nullopt, 1e6, o);
    const bool flagged = std::ranges::any_of(r.diagnostics, [](const std::string& s) {
        return s.find("eta") != std::string::npos;
    });
    EXPECT_TRUE(flagged);
}

TEST(PzFit, PolesStayNearTheBand) {
    const auto truth = five_modes();
    const FrequencyGrid g(7.95e9, 9.25e9, 2601);
    const auto d = synthesize(truth, g);
    auto init = truth;
    init.modes[2].f_n = 20e9;
    EXPECT_THROW(fit(d, 5, init, 0.0), DomainError);
}

TEST(PzFit, LowConfidenceNearRealAxis) {
    PoleZeroSet truth;
    truth.modes.push_back({8.5e9, 20e6, 8.5e9, 0.2e6});
    const FrequencyGrid g(8.3e9, 8.7e9, 801);
    const auto r = fit(synthesize(truth, g), 1, std::nullopt, 0.0);
    EXPECT_TRUE(r.poles_low_confidence);
}

TEST(PzFit, InputErrors) {
    const auto d = synthesize(five_modes(), FrequencyGrid(7.95e9, 9.25e9, 401));
    EXPECT_THROW(fit(d, 0, std::nullopt, 0.0), DomainError);
    EXPECT_THROW(fit(d, 40, std::nullopt, 0.0), DomainError);
    PoleZeroSet two;
    two.modes.resize(2);
    EXPECT_THROW(fit(d, 5, two, 0.0), DomainError);
    FitOptions o;
    o.band_lo = 9e9;
    o.band_hi = 8e9;
    EXPECT_THROW(fit(d, 5, std::nullopt, 0.0, o), DomainError);
}

TEST(PzFit, BandRestriction) {
    const auto truth = five_modes();
    const auto d = synthesize(truth, FrequencyGrid(7.95e9, 9.25e9, 2601));
    FitOptions o;
    o.band_lo = 8.0e9;
    o.band_hi = 8.5e9;
    const auto r = fit(d, 2, std::nullopt, 0.0, o);
    ASSERT_EQ(r.set.modes.size(), 2u);
    EXPECT_NEAR(r.set.modes[0].f_n, 8.1e9, 20e6);
    EXPECT_NEAR(r.set.modes[1].f_n, 8.35e9, 20e6);
}
