#include <gtest/gtest.h>

#include <cyclecert/poly/family.hpp>
#include <cyclecert/poly/surd.hpp>

#include <random>

#include "support/bisection_oracle.hpp"

using namespace cyclecert;
using testing_support::BisectionOracle;
using testing_support::random_poly;

namespace {

UniPoly P(const char* s) { return parse_mpoly(s).to_uni(X); }

}  // namespace

TEST(Rational, ParsesDecimalsExactly) {
    EXPECT_EQ(parse_rational("0.547"), Rational(547, 1000));
    EXPECT_EQ(parse_rational("-3/6"), Rational(-1, 2));
    EXPECT_EQ(parse_rational("1e-6"), Rational(1, 1000000));
    EXPECT_EQ(parse_rational("0.844"), Rational(211, 250));
    EXPECT_THROW(parse_rational("1/0"), ParseError);
    EXPECT_THROW(parse_rational("abc"), ParseError);
}

TEST(MPoly, LiteralFormatRoundTrips) {
    MPoly p = parse_mpoly("3/2*n^4*y^2 - 7*y + 1/3 - n^-2*y^5");
    EXPECT_EQ(parse_mpoly(p.str()), p);
    EXPECT_EQ(parse_mpoly("3(1-n^2)(1+n^2)"), parse_mpoly("3 - 3*n^4"));
    EXPECT_THROW(parse_mpoly("3*q"), ParseError);
}

TEST(Sturm, Examples) {
    EXPECT_EQ(sturm_count(P("x^2-2"), 0, 2), 1);
    EXPECT_EQ(sturm_count(P("7"), -1, 1), 0);
    EXPECT_THROW(sturm_count(P("x^2-1"), 1, 2), EndpointRoot);
    EXPECT_THROW(sturm_count(UniPoly(), 0, 1), ZeroPolynomial);
    EXPECT_EQ(sturm_count(P("(x-1)^3*(x+1/2)"), -1, 2), 2);  // distinct roots
}

TEST(Sturm, NudgeMovesOffRoots) {
    UniPoly p = P("x^2-1");
    Rational a = nudge_endpoint(p, 1, -1, Rational(1, 10));
    EXPECT_EQ(a, Rational(9, 10));
    EXPECT_EQ(sturm_count(p, a, 2), 1);
}

TEST(Sturm, ChainSatisfiesNegatedRemainderRelation) {
    UniPoly p = P("x^5 - 3*x^3 + x - 1/7");
    SturmChain ch = sturm_chain(p);
    ASSERT_GE(ch.seq.size(), 3u);
    EXPECT_EQ(ch.seq[0], p);
    EXPECT_EQ(ch.seq[1], p.derivative());
    for (std::size_t k = 2; k < ch.seq.size(); ++k) {
        UniPoly neg_rem = -(ch.seq[k - 2] % ch.seq[k - 1]);
        // positive proportionality
        Rational ratio = ch.seq[k].lead() / neg_rem.lead();
        EXPECT_GT(sgn(ratio), 0);
        EXPECT_EQ(ch.seq[k], neg_rem.scaled(ratio));
    }
}

TEST(Sturm, RandomPolynomialsAgreeWithBisectionOracle) {
    std::mt19937_64 rng(20240611);
    int checked = 0;
    while (checked < 500) {
        UniPoly p = random_poly(rng, 12, 100);
        if (sign_at(p, Rational(-10)) == 0 || sign_at(p, Rational(10)) == 0) continue;
        BisectionOracle oracle(p);
        int expected = oracle.count(-10, 10);
        ASSERT_FALSE(oracle.gave_up) << to_string(p);
        EXPECT_EQ(sturm_count(p, -10, 10), expected) << to_string(p);
        EXPECT_EQ(descartes_count(p, -10, 10), expected) << to_string(p);
        ++checked;
    }
}

TEST(Resultant, Examples) {
    EXPECT_TRUE(resultant(P("x^2-1"), P("x-1")) == 0);
    EXPECT_EQ(resultant(parse_mpoly("x^2 + y"), parse_mpoly("x + 1"), X), parse_mpoly("1 + y"));
    EXPECT_THROW(resultant(UniPoly(), P("x")), ZeroPolynomial);
}

TEST(Resultant, VanishesExactlyOnCommonFactors) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 200; ++i) {
        UniPoly a = random_poly(rng, 8, 9), b = random_poly(rng, 8, 9);
        if (i % 2 == 0) {
            UniPoly f = random_poly(rng, 3, 5);
            a = a * f;
            b = b * f;
            if (a.degree() > 8) a = random_poly(rng, 5, 9) * f;
            if (b.degree() > 8) b = random_poly(rng, 5, 9) * f;
        }
        bool common = gcd(a, b).degree() > 0;
        EXPECT_EQ(is_zero(resultant(a, b)), common) << to_string(a) << " | " << to_string(b);
    }
}

TEST(Resultant, SubresultantMatchesSylvester) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 20; ++i) {
        UniPoly a = random_poly(rng, 20, 50), b = random_poly(rng, 20, 50);
        if (a.degree() < 1 || b.degree() < 1) continue;
        auto ia = to_primitive_integer(a).first, ib = to_primitive_integer(b).first;
        EXPECT_EQ(subresultant_resultant(ia, ib), sylvester_resultant(ia, ib));
    }
}

TEST(Resultant, ParametricRoutesAgree) {
    MPoly a = parse_mpoly("y^13 + n*y^2 - 3*n^2*y + 1"), b = parse_mpoly("y^14 - n^2*y + 3 + n^3*y^5");
    UniPoly prs = subresultant_resultant(a.to_param(Y, N), b.to_param(Y, N));
    UniPoly syl = sylvester_resultant(a.to_param(Y, N), b.to_param(Y, N));
    EXPECT_EQ(prs, syl);
    EXPECT_EQ(resultant(a, b, Y).to_uni(N), prs);
}

TEST(Discriminant, Examples) {
    EXPECT_EQ(discriminant(parse_mpoly("x^2 + n*x + s"), X), parse_mpoly("n^2 - 4*s"));
    EXPECT_TRUE(discriminant(P("(x-1)^2")) == 0);
    EXPECT_EQ(discriminant(P("x^3 - x")), Rational(4));
    EXPECT_THROW(discriminant(P("5")), DegreeZero);
}

TEST(Discriminant, SquaresAlwaysVanish) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 30; ++i) {
        UniPoly p = random_poly(rng, 6, 20);
        if (p.degree() < 1) continue;
        EXPECT_TRUE(discriminant(p * p) == 0);
    }
}

TEST(Interpolation, RecoversPolynomial) {
    UniPoly p = P("3/7*x^9 - 2*x^4 + x - 11");
    std::vector<Rational> v;
    for (int k = 0; k <= 12; ++k) v.push_back(p(Rational(k - 5)));
    EXPECT_EQ(interpolate_consecutive(Integer(-5), v), p);
}

TEST(Enclosure, MatchesKnownBounds) {
    Enclosure e4 = enclose({8, 4}, 4);
    EXPECT_EQ(e4.lower, Rational(3002, 1785));
    EXPECT_EQ(e4.upper, Rational(37, 22));
    Enclosure e3 = enclose({10, 3}, 3);
    EXPECT_EQ(e3.lower, Rational(28, 13));
    EXPECT_EQ(e3.upper, Rational(265, 123));
    Enclosure sq = enclose({4, 2}, 3);
    EXPECT_TRUE(sq.exact);
    EXPECT_EQ(sq.lower, 2);
    EXPECT_GT(sq.upper, 2);
}

TEST(Enclosure, ShrinksAndBracketsExactly) {
    for (auto [r, d] : std::vector<std::pair<Rational, int>>{{Rational(2), 2}, {Rational(7, 3), 3}, {Rational(8), 4}, {Rational(5, 2), 5}}) {
        Rational prev = -1;
        for (int depth = 1; depth < 9; ++depth) {
            Enclosure e = enclose({r, d}, depth);
            EXPECT_LT(rpow(e.lower, d), r);
            EXPECT_LT(r, rpow(e.upper, d));
            if (prev > 0) {
                EXPECT_LE(e.width(), prev);
            }
            prev = e.width();
        }
    }
}

TEST(Majorize, SingleMonomial) {
    auto ctx = std::make_shared<Surd::Context>(Surd::Context{{Rational(2), 2}});
    SurdPoly p{Surd(ctx, 0), Surd::radical(ctx, 0)};
    auto enc = std::vector<Enclosure>{enclose({2, 2}, 5)};
    Majorants m = majorize(p, enc, Orthant::NonNegative);
    EXPECT_EQ(m.lower, UniPoly({Rational(0), enc[0].lower}));
    EXPECT_EQ(m.upper, UniPoly({Rational(0), enc[0].upper}));
    EXPECT_THROW(majorize(p, enc, Orthant::All), SignAmbiguous);
}

TEST(Majorize, MixedSignsOnTheLine) {
    auto ctx = std::make_shared<Surd::Context>(Surd::Context{{Rational(2), 2}, {Rational(3), 2}});
    SurdPoly p(5, Surd(ctx, 0));
    p[2] = Surd::radical(ctx, 0);
    p[4] = -Surd::radical(ctx, 1);
    auto enc = std::vector<Enclosure>{enclose({2, 2}, 4), enclose({3, 2}, 4)};
    Majorants m = majorize(p, enc, Orthant::All);
    EXPECT_EQ(m.upper[2], enc[0].upper);
    EXPECT_EQ(m.upper[4], -enc[1].lower);
    EXPECT_EQ(m.lower[2], enc[0].lower);
    EXPECT_EQ(m.lower[4], -enc[1].upper);
}

TEST(Majorize, BoundsHoldAtSampledPoints) {
    // coefficients built from 8^(1/4) and 10^(1/3), as in the uniqueness proof
    auto ctx = std::make_shared<Surd::Context>(Surd::Context{{Rational(8), 4}, {Rational(10), 3}});
    Surd a = Surd::radical(ctx, 0), b = Surd::radical(ctx, 1);
    SurdPoly p{a * b - Surd(ctx, 3), a.pow(3) - b, Surd(ctx, Rational(-1, 2)) * b.pow(2), a * a * b, -a};
    std::vector<Enclosure> enc{enclose({8, 4}, 4), enclose({10, 3}, 3)};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 3.0);
    for (Orthant o : {Orthant::NonNegative, Orthant::NonPositive}) {
        Majorants m = majorize(p, enc, o);
        for (int i = 0; i < 1000; ++i) {
            Real100 y = Real100(u(rng)) * (o == Orthant::NonPositive ? -1 : 1);
            Real100 exact = 0, lo = 0, hi = 0, yp = 1;
            for (std::size_t k = 0; k < p.size(); ++k) {
                exact += p[k].value100() * yp;
                lo += to_real100(m.lower[k]) * yp;
                hi += to_real100(m.upper[k]) * yp;
                yp *= y;
            }
            EXPECT_LE(lo, exact);
            EXPECT_LE(exact, hi);
        }
    }
}

TEST(Surd, NormalizesRadicands) {
    auto a = normalize_radical(Rational(1, 2), 4);
    EXPECT_EQ(a.coeff, Rational(1, 2));
    EXPECT_EQ(a.radical.radicand, 8);
    auto s = normalize_radical(Rational(625, 4), 3);  // (75 - 125/2)^2
    EXPECT_EQ(s.coeff, Rational(5, 2));
    EXPECT_EQ(s.radical.radicand, 10);
    auto r = normalize_radical(Rational(4), 4);
    EXPECT_EQ(r.radical.degree, 2);
    EXPECT_EQ(r.radical.radicand, 2);
}

TEST(Family, ContinuationCertifies) {
    ParamPoly G = parse_mpoly("x^2 - n").to_param(X, N);
    Certificate c = family_root_count(G, {MPoly(0)}, {MPoly(3)}, ParamInterval::closed(1, 2), 1, 1);
    EXPECT_TRUE(c.verdict());
}

TEST(Family, DoubleRootBreaksHypothesisThree) {
    ParamPoly G = parse_mpoly("x^2 - n").to_param(X, N);
    try {
        family_root_count(G, {MPoly(2)}, {MPoly(3)}, ParamInterval::closed(-1, 1), 1, 0);
        FAIL() << "expected HypothesisFailed";
    } catch (const HypothesisFailed& e) {
        EXPECT_EQ(e.which, "iii");
        EXPECT_NE(e.witness.find("0"), std::string::npos);
    }
}

TEST(Family, IrrationalEndsOfTheParameterInterval) {
    // roots of (5n^4-3) and (2n^4-1) sit exactly on the ends and are excluded
    auto lo = AlgebraicNumber::root_in(P("2x^4-1"), Rational(4, 5), Rational(9, 10), "(1/2)^(1/4)");
    auto hi = AlgebraicNumber::root_in(P("5x^4-3"), Rational(4, 5), Rational(9, 10), "(3/5)^(1/4)");
    ParamInterval I{lo, hi, false, true};
    EXPECT_EQ(count_in(P("(5x^4-3)^3*(x-1)"), I), 0);
    EXPECT_EQ(count_in(P("(5x^4-3)*(2x^4-1)"), I), 1);  // closed lower end
    EXPECT_EQ(count_in(P("(x - 17/20)*(x+1)"), I), 1);
}
