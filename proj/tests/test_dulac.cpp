#include <gtest/gtest.h>

#include <cyclecert/dulac/certify.hpp>

#include <random>

using namespace cyclecert;
using namespace cyclecert::dulac;

namespace {

MPoly mp(const char* s) { return parse_mpoly(s); }

Rational q(long a, long b) { return make_rational(a, b); }

MPoly antipodal(const MPoly& p) { return p.subs(X, -MPoly::var(X)).subs(Y, -MPoly::var(Y)); }

}  // namespace

// ---------------------------------------------------------------------------
// compute_M

TEST(ComputeM, SimpleFunctionGivesFactoredForm) {
    const MFunction Mf = compute_M(build_V_simple(MPoly::var(M)));
    EXPECT_EQ(Mf.full, mp("2/3*((3 - 10*m)*x^2 + m*y^4)*y^4"));
    EXPECT_EQ(Mf.y_power, 4);
    EXPECT_FALSE(Mf.linear_in_x());
}

TEST(ComputeM, GlobalLyapunovFunctionForNonPositiveM) {
    const MPoly V = mp("x^2/2 + y^4/4");
    for (const Rational& m : {q(0, 1), q(-1, 2), q(-3, 1)}) {
        const MPoly Mp = m_polynomial(V, 0, cubic_quintic(m));
        EXPECT_EQ(Mp, mp("-x^4") + MPoly::var(Y, 8).scaled(m));
    }
}

TEST(ComputeM, ConstantFunctionGivesMinusKDivergence) {
    const PlanarSystem sys = cubic_quintic(q(3, 7));
    for (const Rational& k : {q(1, 3), q(2, 3), q(5, 1)}) EXPECT_EQ(m_polynomial(MPoly(1), k, sys), -sys.divergence().scaled(k));
}

TEST(ComputeM, QuadraticConstructionsKillHighXPowers) {
    const MFunction u = compute_M(build_V2_uniq_symbolic());
    EXPECT_LE(u.full.degree(X), 1);
    const MFunction e = compute_M(build_V2_prop925_symbolic());
    EXPECT_LE(e.full.degree(X), 1);
    const MFunction r = compute_M(build_V2_prop547_n(q(18, 25)));
    EXPECT_TRUE(r.full.coeff_of(X, 2).zero());
    EXPECT_TRUE(r.full.coeff_of(X, 3).zero());
}

TEST(ComputeM, AntipodalSymmetry) {
    for (const DulacSpec& V : {build_V2_uniq_symbolic(), build_V2_prop925_symbolic()}) {
        const MPoly full = compute_M(V).full;
        EXPECT_EQ(full, antipodal(full));
    }
}

TEST(ComputeM, IrrationalExponentIsRejected) {
    EXPECT_THROW(compute_M(build_V_nc_km(q(3, 10))), DomainError);
}

// ---------------------------------------------------------------------------
// g0, g1 in terms of g2

TEST(QuadraticRelations, HoldForEveryQuadraticConstruction) {
    EXPECT_TRUE(quadratic_relations_hold(build_V2_uniq_symbolic()));
    EXPECT_TRUE(quadratic_relations_hold(build_V2_prop925_symbolic()));
    EXPECT_TRUE(quadratic_relations_hold(build_V2_prop547_n(q(71, 100))));
    EXPECT_TRUE(quadratic_relations_hold(build_V2_uniq(q(11, 20))));
}

// ---------------------------------------------------------------------------
// Kummer construction

TEST(Kummer, LeadingTermAndGeneralFactor) {
    for (const Rational& m : {q(3, 5), q(1, 1), q(7, 3)}) {
        const MFunction Mf = compute_M(build_V1_kummer(m, 4));
        EXPECT_EQ(Mf.full.coeff(Mono{0, 4}), (3 - 5 * m) / 3);
        for (int j = 1; j <= 4; ++j) {
            const Rational c = Mf.full.coeff(Mono{0, 6 * j + 4});
            const Rational rest = Rational(1, 3) * pochhammer(Rational(-1, 9), j) / pochhammer(Rational(7, 6), j) * rpow(m / 6, j) / factorial(j);
            EXPECT_EQ(c, rest * (m * (6 * j + 1) * (18 * j - 5) + 3)) << "j = " << j;
        }
    }
    EXPECT_EQ(kummer_m1_coefficient(q(3, 5), 0), 0);
}

TEST(Kummer, OdeResidualStartsAtTruncationOrder) {
    const Rational m = q(4, 5);
    for (int J : {1, 2, 4}) {
        const DulacSpec V = build_V1_kummer(m, J);
        const MPoly g1 = V.g1;
        const MPoly res = -g1.diff(Y).diff(Y) + (MPoly::var(Y, 5) * g1.diff(Y)).scaled(m) - (MPoly::var(Y, 4) * g1).scaled(m * 5 / 3);
        EXPECT_GE(res.min_degree(Y), 6 * J) << "J = " << J;
    }
}

TEST(Kummer, CertificateForLargeM) {
    for (const Rational& m : {q(3, 5), q(1, 1), q(4, 1)}) EXPECT_TRUE(certify_kummer(m, 5).verdict()) << m;
    EXPECT_THROW(certify_kummer(q(1, 2), 3), DomainError);
}

// ---------------------------------------------------------------------------
// Series g2 and the degree-12 seed

TEST(SeriesG2, MatchesSeedAtFiveParameters) {
    for (const Rational& m : {q(51, 100), q(11, 20), q(57, 100), q(29, 50), q(59, 100)}) {
        const SeriesComparison c = compare_with_uniq_seed(m);
        std::string lines;
        for (const auto& l : c.lines) lines += l + "\n";
        EXPECT_TRUE(c.equal) << m << ":\n" << lines;
    }
}

TEST(SeriesG2, ConstantTermIsOne) {
    for (const CubeRoot& C2 : {uniq_C2(q(11, 20)), CubeRoot{q(3, 1), q(2, 1)}, CubeRoot{q(0, 1), q(1, 1)}}) {
        const DulacSpec V = build_V2_series(q(11, 20), C2, 12);
        EXPECT_EQ(V.g2.eval_at(Y, 0).eval_at(S, 0), MPoly(1));
    }
}

TEST(SeriesG2, OdeResidualBeyondTruncation) {
    const Rational m = q(11, 20);
    const DulacSpec V = build_V2_series(m, uniq_C2(m), 18);
    const MPoly r = ode3_residual(V.g2, MPoly(m));
    EXPECT_GE(r.min_degree(Y), 16);
}

// ---------------------------------------------------------------------------
// Degree-8 construction

TEST(Degree8, PhiAndPsiMatchDisplayedForms) {
    const MFunction Mf = compute_M(build_V2_prop925_symbolic());
    const MPoly A = poly925_A(), B = poly925_B();
    EXPECT_EQ(Mf.y_power, 4);
    EXPECT_EQ(Mf.scale, q(2, 3));
    const MPoly phi5 = Mf.phi.coeff_of(Y, 5);
    EXPECT_EQ(phi5, (mp("3 - 10*n^4") * mp("3 + 35*n^4") * A).scaled(3));
    EXPECT_EQ(Mf.psi.coeff_of(Y, 0), -(mp("756*n^2") * mp("3 - 5*n^4") * B));
}

TEST(Degree8, VanishesAtTheUpperCorner) {
    const MFunction Mf = compute_M(build_V2_prop925_symbolic());
    const MPoly in = MPoly::var(N, -1);
    EXPECT_TRUE(Mf.reduced.subs(X, in).subs(Y, in).zero());
}

TEST(Degree8, ThresholdAndRange) {
    const AlgebraicNumber nt = n_tilde();
    EXPECT_NEAR(nt.approx(), 0.8045592, 1e-7);
    EXPECT_THROW(build_V2_prop925(q(3, 4)), DomainError);
    EXPECT_THROW(build_V2_prop925(q(17, 20)), DomainError);
}

TEST(Degree8, AxisValueIsNonzeroConstant) {
    const MFunction Mf = compute_M(build_V2_prop925_symbolic());
    const MPoly axis = Mf.reduced.eval_at(Y, 0);
    EXPECT_FALSE(axis.uses(X));
    EXPECT_EQ(axis, mp("756*n^2") * mp("5*n^4 - 3") * poly925_B());
}

// ---------------------------------------------------------------------------
// Invariant-region construction

TEST(InvariantRegion, A12AtOneHalf) { EXPECT_EQ(a12_547(q(1, 2)), Rational(-157 * 2) * q(41, 2) / 44550000); }

TEST(InvariantRegion, ConditionsHoldAtSampledN) {
    for (const Rational& n : {q(71, 100), q(18, 25), q(73, 100)}) {
        const DulacSpec V = build_V2_prop547_n(n);
        const MPoly v = V.V();
        auto at_saddle = [&](const MPoly& F) {
            Rational acc = 0;
            for (const auto& [mono, c] : F.terms()) acc += c * rpow(1 / n, (mono[X] + mono[Y]) / 2);
            return acc;
        };
        EXPECT_EQ(at_saddle(v), 0);
        EXPECT_EQ(at_saddle(v.diff(X) * MPoly::var(X)), 0);
        EXPECT_EQ(at_saddle(v.diff(Y) * MPoly::var(Y)), 0);
        const MFunction Mf = compute_M(V);
        EXPECT_EQ(Mf.full, antipodal(Mf.full));
        EXPECT_EQ(V.g2.coeff(Mono{0, 12}), a12_547(n * n));
    }
}

TEST(InvariantRegion, SingularAtZero) { EXPECT_THROW(solve_prop547_conditions(0), SingularConditionSystem); }

TEST(InvariantRegion, NonSquareMNeedsN) {
    EXPECT_THROW(build_V2_prop547(q(51, 100)), DomainError);
    EXPECT_NO_THROW(build_V2_prop547(q(324, 625)));
}

// ---------------------------------------------------------------------------
// Sign certificates

TEST(CertifySign, SimpleCaseIsTrivial) {
    const Certificate c = certify_sign(compute_M(build_V_simple(q(1, 5))), RegionOmega{});
    EXPECT_TRUE(c.verdict());
    EXPECT_EQ(c.pieces.front().name, "monomial signs");
    EXPECT_TRUE(certify_nc_simple_interval(q(1, 1000), q(3, 10)).verdict());
}

TEST(CertifySign, KmSquareIdentity) {
    for (int i = 1; i <= 20; ++i) {
        const Rational m = Rational(1, 4) + (Rational(9, 25) - Rational(1, 4)) * i / 20;
        const KmSquare sq = nc_km_square(m);
        EXPECT_LT(sq.max_relative_residual, Real100("1e-10")) << m;
        EXPECT_TRUE(certify_nc_km(m).verdict());
    }
}

TEST(CertifySign, UniquenessAtSampledN) {
    for (const Rational& n : {q(17, 20), q(87, 100), q(22, 25)}) EXPECT_TRUE(certify_uniq_at(n).verdict()) << n;
    EXPECT_THROW(certify_uniq_at(q(4, 5)), DomainError);
}

TEST(CertifySign, UniquenessClosedFormsAndMajorants) {
    const UniqChecks ck = uniq_closed_form_checks();
    EXPECT_TRUE(ck.q_closed_form);
    EXPECT_TRUE(ck.r_plus);
    EXPECT_TRUE(ck.r_minus);
    // R+ < 0 on [0, 6/5], R- < 0 on [-1, 0]
    EXPECT_EQ(count_real_roots(uniq_R_plus(), 0, q(6, 5)), 0);
    EXPECT_LT(sign_at(uniq_R_plus(), q(3, 5)), 0);
    EXPECT_EQ(count_real_roots(uniq_R_minus(), -1, 0), 0);
    EXPECT_LT(sign_at(uniq_R_minus(), q(-1, 2)), 0);
}

TEST(CertifySign, MajorantCheckAtTheLowerEnd) {
    const CertNode node = majorant_no_roots("Q", uniq_boundary_Q(), Y, uniq_lower_end_sample(), -1, q(6, 5));
    EXPECT_TRUE(node.all_ok());
}

TEST(CertifySign, MajorantsBoundTheTruePolynomial) {
    const RadicalSample smp = uniq_lower_end_sample();
    const SurdPoly P = to_surd_poly(uniq_boundary_Q(), Y, smp.bindings, smp.ctx);
    const Majorants plus = majorize(P, smp.enclosures(), Orthant::NonNegative);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1.2);
    for (int i = 0; i < 200; ++i) {
        const Rational y = from_double(u(rng));
        Real100 exact = 0, yy = to_real100(y), pw = 1;
        for (const auto& c : P) {
            exact += c.value100() * pw;
            pw *= yy;
        }
        EXPECT_LE(to_real100(plus.lower(y)), exact);
        EXPECT_GE(to_real100(plus.upper(y)), exact);
    }
}

TEST(CertifySign, BrokenFunctionFailsWithWitness) {
    // flip the sign of the y^2 term of g2 and rebuild g0, g1 from it
    const DulacSpec good = build_V2_prop925_symbolic();
    MPoly g2 = good.g2;
    const MPoly y2 = g2.coeff_of(Y, 2) * MPoly::var(Y, 2);
    g2 = g2 - y2.scaled(2);
    const DulacSpec broken = from_g2(g2, MPoly::var(N, 4), Provenance::Custom, Convention::NFourth).at_parameter(q(79, 100));
    const MFunction Mf = compute_M(broken.V(), q(2, 3), broken.system(), q(2, 3));
    ASSERT_TRUE(Mf.linear_in_x());
    try {
        certify_sign(Mf, RegionOmega::fixed(q(79, 100)));
        FAIL() << "expected PieceFailed";
    } catch (const PieceFailed& e) {
        EXPECT_FALSE(e.piece.empty());
        EXPECT_NE(e.witness.find('['), std::string::npos) << e.witness;
    }
}

TEST(CertifySign, ReplayIsDeterministic) {
    const Certificate a = certify_uniq_at(q(87, 100)), b = certify_uniq_at(q(87, 100));
    EXPECT_EQ(a.to_text(), b.to_text());
    const Certificate c = certify_prop925_at(q(83, 100)), d = certify_prop925_at(q(83, 100));
    EXPECT_EQ(c.to_json().dump(), d.to_json().dump());
}

// ---------------------------------------------------------------------------
// Degree-8 certificates at sampled n

TEST(Degree8Certificates, SignBelowThreshold) {
    const Certificate c = certify_prop925_at(q(79, 100));
    EXPECT_TRUE(c.verdict()) << c.to_text();
    EXPECT_EQ(c.id, "degree8-sign");
}

TEST(Degree8Certificates, ContactAbove) {
    for (const Rational& n : {q(83, 100), q(21, 25)}) {
        const Certificate c = certify_prop925_at(n);
        EXPECT_TRUE(c.verdict()) << c.to_text();
        EXPECT_EQ(c.id, "degree8-contact");
    }
}

TEST(Degree8Certificates, SurvivingFactorHasTwoRootsAt83) {
    const Rational n = q(83, 100);
    const DulacSpec V = build_V2_prop925(n);
    const MFunction Mf = compute_M(V);
    ContactOptions opt;
    opt.known_quadratic = p2_925().eval_at(N, n).to_uni(Y);
    const Certificate c = build_contact_certificate(Mf, V.system(), n, opt);
    std::string two, edge;
    for (const auto& p : c.pieces)
        for (const auto& [k, v] : p.facts) {
            if (k == "remaining factor roots in (-1/n, 1/n)") two = v;
            if (k == "factor n^2 y^2 - 1") edge = v;
        }
    EXPECT_EQ(two, "2");
    EXPECT_EQ(edge, "multiplicity 1");
}

// ---------------------------------------------------------------------------
// Invariant-region certificates at sampled n

TEST(InvariantRegionCertificates, SampledN) {
    for (const Rational& n : {q(71, 100), q(18, 25), q(73, 100)}) {
        const Certificate c = certify_prop547_at(n);
        EXPECT_TRUE(c.verdict()) << c.to_text();
    }
}

TEST(InvariantRegionCertificates, FourthOrderContact) {
    const DulacSpec V = build_V2_prop547_n(q(18, 25));
    const ContactOrder co = contact_order_at_axis(V, V.system().lie(V.V()));
    EXPECT_EQ(co.order, 4);
    EXPECT_LT(co.curve_residual, 1e-80);
}

// ---------------------------------------------------------------------------
// Stability sign and basin oval

TEST(Stability, UniquenessConstructionIsRepelling) {
    const DulacSpec V = build_V2_uniq_symbolic();
    const MFunction Mf = compute_M(V);
    Bindings b;
    b.m = 0.57;
    b.n = std::pow(b.m, 0.25);
    b.s = uniq_s_value(b.m);
    EXPECT_EQ(cycle_stability_sign(Mf, V, b), 1);
}

TEST(Stability, SimpleConstructionIsAttracting) {
    const DulacSpec V = build_V_simple(q(1, 5));
    Bindings b;
    b.m = 0.2;
    EXPECT_EQ(cycle_stability_sign(compute_M(V), V, b), -1);
}

TEST(Stability, SimultaneousNegationKeepsSign) {
    DulacSpec V = build_V_simple(q(1, 5));
    const MFunction Mf = compute_M(V);
    DulacSpec W = V;
    W.g0 = -V.g0;
    W.g2 = -V.g2;
    const MFunction Mw = compute_M(W);
    EXPECT_EQ(Mw.full, -Mf.full);
    Bindings b;
    b.m = 0.2;
    EXPECT_EQ(cycle_stability_sign(Mf, V, b), cycle_stability_sign(Mw, W, b));
}

TEST(BasinOval, OriginValueAndSymmetry) {
    const Rational m = q(57, 100);
    const Oval o = basin_oval(m, 200);
    const double expected = -std::cbrt((75 - 125 * 0.57) * (75 - 125 * 0.57)) / 25;
    EXPECT_NEAR(o.V_origin, expected, 1e-12);
    EXPECT_NEAR(o.y_min, -o.y_max, 1e-9);
}

TEST(BasinOval, FlowEntersAtEveryPoint) {
    const Rational m = q(57, 100);
    const DulacSpec V = build_V2_uniq(m);
    const MPoly vdot = V.system().lie(V.V());
    Bindings b;
    b.m = 0.57;
    b.s = uniq_s_value(b.m);
    const Oval o = basin_oval(m, 200);
    for (const auto& p : o.points) EXPECT_LT(vdot.eval_as<double>(b.point(p[0], p[1])), 1e-12);
}

TEST(BasinOval, RangeIsEnforced) {
    EXPECT_THROW(basin_oval(q(2, 5), 100), DomainError);
    EXPECT_THROW(basin_oval(q(3, 5), 100), DomainError);
}

TEST(Omega, Membership) {
    EXPECT_TRUE(RegionOmega::contains(0, 0, 0.5));
    EXPECT_FALSE(RegionOmega::contains(1.1, -1.1, 0.5));
    EXPECT_FALSE(RegionOmega::contains(1.2, 0, 0.5));
}
