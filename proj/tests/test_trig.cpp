#include <gtest/gtest.h>

#include <cyclecert/trig/gentrig.hpp>

#include <boost/math/constants/constants.hpp>

#include <random>

using namespace cyclecert;
using namespace cyclecert::trig;

namespace {

const TrigParams kQ2{1, 2};

// Return time of (Cs, Sn) to (1, 0): classical RK4 at a fixed small step,
// then Newton on Sn using the vector field for the last fractional step.
double ode_return_time(const TrigParams& P) {
    using S = std::array<double, 2>;
    auto f = [&](const S& x) { return S{-std::pow(x[1], 2 * P.p - 1), std::pow(x[0], 2 * P.q - 1)}; };
    auto rk4 = [&](S x, double h) {
        S k1 = f(x), k2 = f({x[0] + h / 2 * k1[0], x[1] + h / 2 * k1[1]});
        S k3 = f({x[0] + h / 2 * k2[0], x[1] + h / 2 * k2[1]}), k4 = f({x[0] + h * k3[0], x[1] + h * k3[1]});
        return S{x[0] + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]), x[1] + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
    };
    const double h = 1e-4;
    S x{std::pow(1.0 / P.p, 1.0 / (2 * P.q)), 0.0};
    long steps = 0;
    bool went_negative = false;
    for (;;) {
        S next = rk4(x, h);
        if (next[1] < 0) went_negative = true;
        if (went_negative && next[1] >= 0) break;
        x = next;
        ++steps;
    }
    double dt = 0;
    for (int it = 0; it < 8; ++it) {
        S y = rk4(x, dt);
        dt -= y[1] / f(y)[1];
    }
    return static_cast<double>(steps) * h + dt;
}

}  // namespace

TEST(Period, ClassicalCircle) {
    EXPECT_LT(abs(period50({1, 1}) - 2 * boost::math::constants::pi<Real50>()), Real50("1e-45"));
}

TEST(Period, GammaFormulaForQuarticWeights) {
    using boost::math::tgamma;
    Real50 expected = 2 / sqrt(Real50(2)) * tgamma(Real50(1) / 2) * tgamma(Real50(1) / 4) / tgamma(Real50(3) / 4);
    EXPECT_LT(abs(period50(kQ2) - expected), Real50("1e-45"));
}

TEST(Period, MatchesOdeReturnTime) {
    for (TrigParams P : {TrigParams{1, 2}, TrigParams{1, 1}, TrigParams{2, 3}}) EXPECT_NEAR(ode_return_time(P), period(P), 1e-12);
}

TEST(Eval, InitialHalfAndFullPeriod) {
    const double T = period(kQ2);
    TrigValue a = eval(kQ2, 0), b = eval(kQ2, T), c = eval(kQ2, T / 2);
    EXPECT_EQ(a.cs, 1.0);
    EXPECT_EQ(a.sn, 0.0);
    EXPECT_NEAR(b.cs, 1.0, 1e-12);
    EXPECT_NEAR(b.sn, 0.0, 1e-12);
    EXPECT_NEAR(c.cs, -1.0, 1e-12);
    EXPECT_NEAR(c.sn, 0.0, 1e-12);
}

TEST(Eval, ReducesToCosineAndSine) {
    for (double t : {0.1, 1.0, 2.5, 4.0, -3.0, 20.0}) {
        TrigValue v = eval({1, 1}, t);
        EXPECT_NEAR(v.cs, std::cos(t), 1e-12);
        EXPECT_NEAR(v.sn, std::sin(t), 1e-12);
    }
}

TEST(Eval, EnergyInvariantOverThreePeriods) {
    const double T = period(kQ2);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 3 * T);
    double worst = 0;
    for (int k = 0; k < 1000; ++k) {
        TrigValue v = eval(kQ2, u(rng));
        worst = std::max(worst, std::abs(energy_defect(kQ2, v.cs, v.sn)));
    }
    EXPECT_LT(worst, 1e-11);
}

TEST(Eval, Periodicity) {
    const double T = period(kQ2);
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, 2 * T);
    for (int k = 0; k < 200; ++k) {
        double t = u(rng);
        TrigValue a = eval(kQ2, t), b = eval(kQ2, t + T);
        EXPECT_LT(std::abs(a.cs - b.cs) + std::abs(a.sn - b.sn), 1e-9);
    }
}

TEST(Eval, RejectsNonFiniteAngles) { EXPECT_THROW(eval(kQ2, NAN), DomainError); }

TEST(Moment, OddExponentsVanishStructurally) {
    Moment m = moment(kQ2, 1, 3);
    EXPECT_TRUE(m.vanishes);
    EXPECT_TRUE(m.value == 0);
    EXPECT_EQ(m.descriptor(), "0");
    EXPECT_TRUE(moment(kQ2, 2, 5).vanishes);
}

TEST(Moment, LemmaAntiderivativeValues) {
    const Real50 T = period50(kQ2);
    EXPECT_LT(abs(moment(kQ2, 0, 8).value - 5 * T / 21), Real50("1e-40"));
    EXPECT_LT(abs(moment(kQ2, 4, 0).value - T / 7), Real50("1e-40"));
    EXPECT_LT(abs(moment(kQ2, 0, 0).value - T), Real50("1e-40"));
}

TEST(Moment, ClosedFormMatchesQuadrature) {
    for (int q : {2, 3})
        for (int i = 0; i <= 16; i += 2)
            for (int j = 0; i + j <= 16; j += 2)
                EXPECT_NEAR(static_cast<double>(moment({1, q}, i, j).value), moment_quadrature({1, q}, i, j), 1e-9) << q << " " << i << " " << j;
}

TEST(Moment, BasisReductionMatchesGammaForm) {
    for (int q : {1, 2, 3})
        for (int i = 0; i <= 20; i += 2)
            for (int j = 0; i + j <= 20; j += 2) {
                Real50 diff = moment_in_basis(q, i, j).value() - moment({1, q}, i, j).value;
                EXPECT_LT(abs(diff), Real50("1e-40")) << q << " " << i << " " << j;
            }
    EXPECT_TRUE(moment_in_basis(2, 3, 4).zero());
    // q = 2 basis: B0 = T, int Cs^8 = (5/21) T
    MomentForm cs8 = moment_in_basis(2, 0, 8);
    EXPECT_EQ(cs8.coeff.size(), 1u);
    EXPECT_EQ(cs8.coeff.at(0), Rational(5, 21));
}

TEST(Moment, RequiresUnitFirstWeight) { EXPECT_THROW(moment({2, 2}, 0, 2), OutOfScope); }

TEST(Antiderivative, EndpointValues) {
    const double T = period(kQ2);
    EXPECT_NEAR(antiderivative_q2(Antiderivative::Cs8, 0), 0, 1e-15);
    EXPECT_NEAR(antiderivative_q2(Antiderivative::Sn4, T), T / 7, 1e-12);
    EXPECT_NEAR(antiderivative_q2(Antiderivative::Cs8, T), 5 * T / 21, 1e-12);
}

TEST(Antiderivative, DerivativesReproduceIntegrands) {
    // five-point central stencil
    const double h = 1e-3;
    auto diff = [&](Antiderivative k, double t) {
        auto F = [&](double s) { return antiderivative_q2(k, s); };
        return (F(t - 2 * h) - 8 * F(t - h) + 8 * F(t + h) - F(t + 2 * h)) / (12 * h);
    };
    EXPECT_NEAR(diff(Antiderivative::Cs8, 0.3), std::pow(eval(kQ2, 0.3).cs, 8), 1e-9);
    const double T = period(kQ2);
    for (int k = 1; k < 40; ++k) {
        double t = k * T / 13.7;
        TrigValue v = eval(kQ2, t);
        EXPECT_NEAR(diff(Antiderivative::Cs8, t), std::pow(v.cs, 8), 1e-8);
        EXPECT_NEAR(diff(Antiderivative::Sn4, t), std::pow(v.sn, 4), 1e-8);
    }
}
