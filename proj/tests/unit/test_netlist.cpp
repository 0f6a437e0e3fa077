#include <gtest/gtest.h>

#include <cmath>

#include "abring/netlist.hpp"
#include "abring/ring.hpp"
#include "support.hpp"

using namespace abring;

namespace {

LineSpec lossless(double electrical_length) {
    LineSpec s;
    s.coax = RingParams::default_coax();
    s.physical_length = electrical_length / std::sqrt(s.coax.eps_r);
    s.lossless = true;
    return s;
}

bool mentions(const std::vector<Diagnostic>& diags, const std::string& needle) {
    for (const auto& d : diags) {
        if (d.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

} // namespace

TEST(Netlist, CascadedLinesAddTransit) {
    Netlist n;
    n.add("a", Line{lossless(0.1)}).add("b", Line{lossless(0.25)});
    n.connect({"a", 1}, {"b", 0}).expose({"a", 0}).expose({"b", 1});
    const CompiledNetlist c(n);
    EXPECT_EQ(c.external_count(), 2);
    EXPECT_EQ(c.internal_count(), 2);
    const double f = 7.77e9;
    const auto s = c.evaluate(f);
    const auto ref = line_smatrix(f, lossless(0.35));
    EXPECT_LT((s - ref).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Netlist, MatchedCirculatorIsAnIsolator) {
    Netlist n;
    n.add("c", Circulator{Chirality::forward}).add("m", Termination{TerminationKind::matched});
    n.connect({"c", 2}, {"m", 0}).expose({"c", 0}).expose({"c", 1});
    const auto s = CompiledNetlist(n).evaluate(1e9);
    EXPECT_NEAR(std::abs(s(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(s(0, 1)), 0.0, 1e-15);
}

TEST(Netlist, ShortedCirculatorReturnsWithSignFlip) {
    Netlist n;
    n.add("c", Circulator{Chirality::forward}).add("s", Termination{TerminationKind::short_circuit});
    n.connect({"c", 2}, {"s", 0}).expose({"c", 0}).expose({"c", 1});
    const auto s = CompiledNetlist(n).evaluate(1e9);
    EXPECT_NEAR(std::abs(s(0, 1) + 1.0), 0.0, 1e-15);
}

TEST(Netlist, ExternalOrderFollowsExposeOrder) {
    Netlist n;
    n.add("c", Circulator{Chirality::forward}).add("m", Termination{TerminationKind::matched});
    n.connect({"c", 2}, {"m", 0}).expose({"c", 1}).expose({"c", 0});
    const auto s = CompiledNetlist(n).evaluate(1e9);
    EXPECT_NEAR(std::abs(s(0, 1)), 1.0, 1e-15);
}

TEST(Netlist, LosslessRingIsUnitary) {
    RingParams p;
    const CompiledNetlist ring(build_ab_ring(p));
    for (double f = 7e9; f < 12.4e9; f += 0.37e9) {
        EXPECT_LT(test::unitarity_error(ring.evaluate(f)), 1e-10) << f;
    }
}

TEST(Netlist, AssembleMatchesCompiled) {
    RingParams p;
    p.gamma_upper = 0.1;
    p.gamma_lower = 0.2;
    const auto n = build_ab_ring(p);
    const CompiledNetlist c(n);
    EXPECT_LT((assemble(n, 8.3e9) - c.evaluate(8.3e9)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Netlist, TrappedModeRaisesResonanceError) {
    // Shorted half-wave cavity, decoupled from the external path.
    const double length = 0.3;
    Netlist n;
    n.add("cav", Line{lossless(length)})
        .add("s0", Termination{TerminationKind::short_circuit})
        .add("s1", Termination{TerminationKind::short_circuit})
        .add("a", Attenuator{0.1})
        .add("m", Termination{TerminationKind::matched});
    n.connect({"cav", 0}, {"s0", 0}).connect({"cav", 1}, {"s1", 0});
    n.connect({"a", 1}, {"m", 0}).expose({"a", 0});
    const CompiledNetlist c(n);
    const double f0 = kSpeedOfLight / (2.0 * length);
    try {
        (void)c.evaluate(f0);
        FAIL() << "expected ResonanceError";
    } catch (const ResonanceError& e) {
        EXPECT_DOUBLE_EQ(e.frequency(), f0);
        EXPECT_LT(e.rcond(), CompiledNetlist::kMinRcond);
    }
    EXPECT_NO_THROW((void)c.evaluate(1.37 * f0));
}

TEST(Netlist, ValidateDanglingPort) {
    Netlist n;
    n.add("a", Line{lossless(0.1)}).expose({"a", 0});
    const auto d = validate(n);
    ASSERT_FALSE(d.empty());
    EXPECT_TRUE(mentions(d, "dangling"));
    EXPECT_THROW(CompiledNetlist{n}, ConfigError);
}

TEST(Netlist, ValidateDuplicatesAndUnknowns) {
    Netlist n;
    n.add("a", Attenuator{0.0}).add("a", Attenuator{0.0});
    n.connect({"a", 1}, {"ghost", 0}).expose({"a", 0}).expose({"a", 5});
    const auto d = validate(n);
    EXPECT_TRUE(mentions(d, "duplicate"));
    EXPECT_TRUE(mentions(d, "unknown component"));
    EXPECT_TRUE(mentions(d, "nonexistent port"));
}

TEST(Netlist, ValidatePortUsedTwiceAndSelfLoop) {
    Netlist n;
    n.add("a", Attenuator{0.0}).add("b", Attenuator{0.0});
    n.connect({"a", 1}, {"b", 0}).connect({"a", 1}, {"b", 1}).connect({"a", 0}, {"a", 0});
    n.expose({"b", 0});
    const auto d = validate(n);
    EXPECT_TRUE(mentions(d, "used"));
    EXPECT_TRUE(mentions(d, "itself"));
}

TEST(Netlist, ValidateNoExternalPort) {
    Netlist n;
    n.add("a", Attenuator{0.0}).connect({"a", 0}, {"a", 1});
    EXPECT_TRUE(mentions(validate(n), "no external"));
}

TEST(Netlist, ValidateBadElementParameters) {
    Netlist n;
    n.add("t", Tee{1}).add("a", Attenuator{-1.0});
    n.expose({"t", 0}).expose({"a", 0}).expose({"a", 1});
    const auto d = validate(n);
    EXPECT_TRUE(mentions(d, "at least 2"));
    EXPECT_TRUE(mentions(d, "negative attenuation"));
}

TEST(Netlist, BundledRingIsValid) {
    RingParams p;
    EXPECT_TRUE(validate(build_ab_ring(p)).empty());
    p.gyrator_mode = GyratorMode::ideal;
    EXPECT_TRUE(validate(build_ab_ring(p)).empty());
}

TEST(Ring, CheckRejectsBadParameters) {
    RingParams p;
    p.gamma_upper = -0.1;
    EXPECT_THROW(build_ab_ring(p), DomainError);
    p = RingParams{};
    p.gyrator_phase = 1.0;
    EXPECT_THROW(build_ab_ring(p), DomainError);
    p.gyrator_mode = GyratorMode::ideal;
    EXPECT_NO_THROW(build_ab_ring(p));
    p = RingParams{};
    p.branch_electrical_length = 1e-4;
    EXPECT_THROW(build_ab_ring(p), DomainError);
}

TEST(Ring, ComposedMatchesIdealGyrator) {
    RingParams composed;
    composed.gamma_upper = composed.gamma_lower = 0.18;
    RingParams ideal = composed;
    ideal.gyrator_mode = GyratorMode::ideal;
    const CompiledNetlist a(build_ab_ring(composed)), b(build_ab_ring(ideal));
    for (double f = 7.1e9; f < 12.4e9; f += 0.41e9) {
        const auto sa = a.evaluate(f), sb = b.evaluate(f);
        // Same magnitudes; the composed stubs add a frequency-independent phase.
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) EXPECT_NEAR(std::abs(sa(i, j)), std::abs(sb(i, j)), 1e-9);
        }
    }
}
