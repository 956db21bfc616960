#include <gtest/gtest.h>

#include <cyclecert/lyap/lyapunov.hpp>

#include <boost/math/constants/constants.hpp>

#include <random>

using namespace cyclecert;
using namespace cyclecert::lyap;
using boost::math::tgamma;

namespace {

Rational R(long a, long b = 1) { return make_rational(a, b); }

Real50 sqrt_pi() { return sqrt(boost::math::constants::pi<Real50>()); }

}  // namespace

TEST(PolarRhs, LeadingTermsAtTheHopfValue) {
    auto Rs = polar_rhs({R(3, 5), 1, 2}, 10);
    TrigPoly r4 = TrigPoly::term(R(3, 5), 8, 0) + TrigPoly::term(-1, 0, 4);
    EXPECT_EQ(Rs[4], r4);
    const Rational m = R(3, 5);
    EXPECT_EQ(Rs[10].coeff(10, 6), m * (1 - 4 * m));
    // the full seventh and tenth coefficients, written out
    TrigPoly r7 = TrigPoly::term(2 * m * m, 13, 1) + TrigPoly::term(m, 9, 3) + TrigPoly::term(-2 * m, 5, 5) + TrigPoly::term(-1, 1, 7);
    EXPECT_EQ(Rs[7], r7);
    TrigPoly r10 = TrigPoly::term(4 * m * m * m, 18, 2) + TrigPoly::term(4 * m * m, 14, 4) + TrigPoly::term(m * (1 - 4 * m), 10, 6) +
                   TrigPoly::term(-4 * m, 6, 8) + TrigPoly::term(-1, 2, 10);
    EXPECT_EQ(Rs[10], r10);
    for (int i : {0, 1, 2, 3, 5, 6, 8, 9}) EXPECT_TRUE(Rs[i].zero()) << i;
}

TEST(PolarRhs, NothingBelowTheLeadingOrder) {
    for (auto [k, s] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 3}, {2, 3}, {2, 4}}) {
        auto Rs = polar_rhs({R(2, 7), k, s}, std::max(2 * s, 4 * k) + 3);
        for (int i = 0; i < std::min(2 * s, 4 * k); ++i) EXPECT_TRUE(Rs[i].zero()) << k << s << i;
        EXPECT_FALSE(Rs[std::min(2 * s, 4 * k)].zero());
    }
}

TEST(PolarRhs, RefusesShortOrders) { EXPECT_THROW(polar_rhs({R(1), 1, 2}, 3), OrderTooSmall); }

TEST(PolarRhs, MatchesTheQuotientNumerically) {
    // truncated series against the closed quotient at small r
    FamilyParams P{R(2, 3), 1, 2};
    auto Rs = polar_rhs(P, 16);
    const double m = 2.0 / 3, r = 0.05;
    for (double th : {0.3, 1.7, 4.1}) {
        auto v = trig::eval({1, 2}, th);
        double C = v.cs, S = v.sn;
        double exact = (m * std::pow(C, 8) * std::pow(r, 4) - std::pow(S, 4) * std::pow(r, 4)) /
                       (1 - C * std::pow(S, 3) * std::pow(r, 3) - 2 * m * std::pow(C, 5) * S * std::pow(r, 3));
        double series = 0;
        for (int i = 0; i <= 16; ++i) series += Rs[i].eval(th) * std::pow(r, i);
        EXPECT_NEAR(series, exact, 1e-18);
    }
}

TEST(TrigPoly, PrimitivesDifferentiateBack) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        // only terms with a finite primitive: Cs^(4a) or Cs^(4a+3), or anything times Sn
        int a = static_cast<int>(rng() % 4);
        TrigPoly f = TrigPoly::term(R(3, 7), 4 * a, 0) + TrigPoly::term(R(-2), 4 * a + 3, 0) + TrigPoly::term(R(5, 3), a, 3) +
                     TrigPoly::term(R(1, 2), 4 * a + 3, 1, 1);
        TrigPoly F = primitive(f);
        EXPECT_NEAR(F.eval(0), 0, 1e-14);
        const double h = 1e-3;
        for (double th : {0.4, 2.2, 5.0}) {
            double d = (F.eval(th - 2 * h) - 8 * F.eval(th - h) + 8 * F.eval(th + h) - F.eval(th + 2 * h)) / (12 * h);
            EXPECT_NEAR(d, f.eval(th), 1e-8);
        }
    }
}

TEST(TrigPoly, NonElementaryPrimitiveIsReported) {
    EXPECT_THROW(primitive(TrigPoly::term(1, 2, 0)), PrecisionLoss);
    EXPECT_THROW(primitive(TrigPoly::term(1, 5, 0)), PrecisionLoss);
}

TEST(TrigPoly, CanonicalFormIdentifiesEqualFunctions) {
    // Sn^4 = (1 - Cs^4)^2 / 4
    TrigPoly a = TrigPoly::term(1, 0, 4);
    TrigPoly b = TrigPoly::term(R(1, 4), 0, 0) + TrigPoly::term(R(-1, 2), 4, 0) + TrigPoly::term(R(1, 4), 8, 0);
    EXPECT_EQ(a.canonical(), b.canonical());
    for (double th : {0.2, 1.1, 3.3}) EXPECT_NEAR(a.eval(th), b.eval(th), 1e-14);
}

TEST(Constants, QuadraticCaseMatchesGammaFormula) {
    for (Rational m : {R(-1), R(-1, 3), R(2)}) {
        auto rep = lyapunov_constants({m, 1, 1}, 6);
        ASSERT_EQ(rep.first_nonzero, 2);
        Real50 expected = trig::to_real50(m) * sqrt(2 * boost::math::constants::pi<Real50>()) * tgamma(Real50(7) / 4) / tgamma(Real50(9) / 4);
        EXPECT_LT(abs(rep.constants.front().exact.value() - expected), Real50("1e-40"));
        EXPECT_EQ(rep.verdict, sgn(m) < 0 ? Stability::Attractor : Stability::Repeller);
    }
}

TEST(Constants, LargeSIsIndependentOfM) {
    Real50 expected = -tgamma(Real50(1) / 4) * tgamma(Real50(5) / 2) / (pow(Real50(2), Real50(3) / 2) * tgamma(Real50(11) / 4));
    for (Rational m : {R(-2), R(0), R(7)}) {
        auto rep = lyapunov_constants({m, 1, 3}, 8);
        ASSERT_EQ(rep.first_nonzero, 4);
        EXPECT_LT(abs(rep.constants.back().exact.value() - expected), Real50("1e-40"));
        EXPECT_EQ(rep.verdict, Stability::Attractor);
    }
}

TEST(Constants, TenthConstantAtTheHopfValue) {
    auto rep = lyapunov_constants({R(3, 5), 1, 2}, 12);
    ASSERT_EQ(rep.first_nonzero, 10);
    for (const auto& c : rep.constants) {
        if (c.index < 10) {
            EXPECT_TRUE(c.exact.zero()) << c.index;
        }
    }
    const auto& v10 = rep.constants.back();
    Real50 expected = Real50(128) / 1625 * pow(tgamma(Real50(3) / 4), 2) / sqrt_pi();
    EXPECT_LT(abs(v10.exact.value() - expected), Real50("1e-40"));
    EXPECT_GT(v10.value, 0);
    EXPECT_EQ(rep.verdict, Stability::Repeller);
    // exact rational coordinates: (32/1625) * int Cs^2, no T component
    ASSERT_EQ(v10.exact.coeff.size(), 1u);
    EXPECT_EQ(v10.exact.coeff.at(2), R(32, 1625));
}

TEST(Constants, IntegrationByPartsShortcutAgrees) {
    auto rep = lyapunov_constants({R(3, 5), 1, 2}, 10);
    trig::MomentForm generic = rep.constants.back().exact;
    EXPECT_EQ(v10_by_parts(R(3, 5)).coeff, generic.coeff);
    EXPECT_THROW(v10_by_parts(R(1, 2)), DomainError);
}

TEST(Constants, VanishingCoefficientsAtTheHopfValue) {
    auto rep = lyapunov_constants({R(3, 5), 1, 2}, 10);
    for (int i : {2, 3, 5, 6, 8, 9}) EXPECT_TRUE(rep.u[i].zero()) << i;
    const double T = trig::period({1, 2});
    for (int k = 0; k < 50; ++k) {
        double th = k * T / 17.3;
        auto v = trig::eval({1, 2}, th);
        double closed = (6 * v.sn * std::pow(v.cs, 5) + 15 * v.sn * v.cs + 5 * std::pow(v.sn, 3) * v.cs) / 35;
        EXPECT_NEAR(rep.u[4].eval(th), closed, 1e-10);
    }
}

TEST(Constants, FourthConstantIsAffineInM) {
    auto V4 = [](const Rational& m) {
        auto rep = lyapunov_constants({m, 1, 2}, 4);
        return rep.constants.back().exact;
    };
    trig::MomentForm v0 = V4(0), v1 = V4(1), slope = v1;
    slope += v0.scaled(-1);
    for (Rational m : {R(3, 5), R(2), R(-7, 3)}) {
        trig::MomentForm predicted = v0;
        predicted += slope.scaled(m);
        EXPECT_EQ(V4(m).coeff, predicted.coeff) << m;
    }
    EXPECT_TRUE(V4(R(3, 5)).zero());
    EXPECT_FALSE(V4(R(59, 100)).zero());
}

TEST(Constants, ThresholdClosedFormForEvenS) {
    for (int k : {1, 2, 3}) {
        for (Rational m : {R(0), R(1, 2), R(2)}) {
            auto rep = lyapunov_constants({m, k, 2 * k}, 4 * k);
            ASSERT_EQ(rep.first_nonzero, 4 * k);
            auto mf = [](int n, int step) {
                long acc = 1;
                for (; n > 0; n -= step) acc *= n;
                return acc;
            };
            const Real50 pi = boost::math::constants::pi<Real50>();
            Real50 expected = 2 * pow(pi, Real50(3) / 2) * (trig::to_real50(m) * mf(4 * k + 1, 4) - mf(2 * k + 1, 2)) /
                              (pow(tgamma(Real50(3) / 4), 2) * mf(4 * k + 3, 4));
            EXPECT_LT(abs(rep.constants.back().exact.value() - expected), Real50("1e-12")) << k << " " << m;
        }
    }
}

TEST(Threshold, Recurrences) {
    EXPECT_EQ(threshold_m(1), R(3, 5));
    EXPECT_EQ(threshold_m(2), R(15, 45));
    // 7!! = 7*5*3*1, 13!!!! = 13*9*5*1
    EXPECT_EQ(threshold_m(3), R(7 * 5 * 3, 13 * 9 * 5));
    EXPECT_EQ(threshold_m(3), R(7, 39));
    EXPECT_THROW(threshold_m(0), NonPositiveParameter);
}

TEST(Classify, TheoremCases) {
    EXPECT_EQ(classify_origin({R(-1), 2, 1}), Stability::Attractor);
    EXPECT_EQ(classify_origin({R(1), 2, 1}), Stability::Repeller);
    EXPECT_EQ(classify_origin({R(0), 2, 1}), Stability::Undetermined);
    EXPECT_EQ(classify_origin({R(5), 1, 3}), Stability::Attractor);
    EXPECT_EQ(classify_origin({R(3, 5), 1, 2}), Stability::Repeller);
    EXPECT_EQ(classify_origin({R(1, 2), 1, 2}), Stability::Attractor);
    EXPECT_EQ(classify_origin({R(1), 1, 2}), Stability::Repeller);
    EXPECT_EQ(classify_origin({R(1, 3), 2, 4}), Stability::Undetermined);
}

TEST(ReturnMap, Examples) {
    EXPECT_GT(return_map_displacement({R(3, 5), 1, 2}, 0.05), 0);
    EXPECT_LT(return_map_displacement({R(-1), 1, 1}, 0.05), 0);
    EXPECT_LT(return_map_displacement({R(1, 2), 1, 2}, 0.05), 0);
}

TEST(ReturnMap, AgreesWithLeadingConstant) {
    // the displacement is V_n rho^n to leading order
    Real50 rho("0.02");
    auto rep = lyapunov_constants({R(3, 5), 1, 2}, 10);
    Real50 predicted = rep.constants.back().exact.value() * pow(rho, 10);
    Real50 measured = return_map_displacement50({R(3, 5), 1, 2}, rho);
    EXPECT_LT(abs(measured / predicted - 1), Real50("0.01"));
}

TEST(ReturnMap, SignMatchesFirstConstant) {
    const std::vector<FamilyParams> triples{
        {R(-1), 1, 1}, {R(1, 2), 1, 1}, {R(-1, 2), 2, 1}, {R(1), 2, 3}, {R(5), 1, 3},   {R(-3), 1, 4},
        {R(1, 2), 1, 2}, {R(1), 1, 2}, {R(3, 5), 1, 2}, {R(0), 2, 4}, {R(1), 2, 4}, {R(2), 1, 5},
    };
    for (const auto& P : triples) {
        auto rep = lyapunov_constants(P, 12);
        ASSERT_NE(rep.first_nonzero, 0) << describe(P);
        double d = return_map_displacement(P, 0.05);
        EXPECT_EQ(d > 0, rep.constants.back().value > 0) << describe(P) << " displacement " << d;
    }
}
