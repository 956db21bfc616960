// Acceptance run: one PASS/FAIL line per criterion, followed by the sampled
// runs of the degree-8 and invariant-region constructions.  The process exits
// nonzero when any line fails.  `--long` adds the whole-interval runs of those
// two constructions.

#include <CLI11.hpp>

#include <cyclecert/dulac/certify.hpp>
#include <cyclecert/flow/abel.hpp>
#include <cyclecert/flow/charts.hpp>
#include <cyclecert/lyap/lyapunov.hpp>
#include <cyclecert/trig/gentrig.hpp>

#include <boost/math/constants/constants.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/bisection_oracle.hpp"

using namespace cyclecert;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Line {
    std::string name;
    Outcome outcome;
    double seconds = 0;
};

std::vector<Line> g_lines;

// Runs one criterion, times it, and applies the runtime bound when one is given.
void criterion(const std::string& name, double max_seconds, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const Error& e) {
        o = {false, std::string("threw ") + e.what()};
    } catch (const std::exception& e) {
        o = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (max_seconds > 0 && secs > max_seconds) {
        o.pass = false;
        o.detail += "; runtime " + std::to_string(secs) + " s exceeds " + std::to_string(max_seconds) + " s";
    }
    std::printf("%s  %-44s %8.1f s  %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
    std::fflush(stdout);
    g_lines.push_back({name, o, secs});
}

Rational q(long a, long b = 1) { return make_rational(a, b); }

std::string num(double v, int digits = 10) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------

Outcome lyapunov_thresholds() {
    using namespace lyap;
    int checked = 0;
    std::string bad;
    for (int k = 1; k <= 3; ++k) {
        for (int s = 1; s <= 3; ++s) {
            // sample m on both sides of the threshold that governs this (k, s)
            const Rational pivot = s == 2 * k ? threshold_m(k) : Rational(0);
            for (const Rational& m : {Rational(pivot - q(1, 10)), Rational(pivot + q(1, 10))}) {
                const FamilyParams P{m, k, s};
                Stability expected;
                if (s < 2 * k) expected = sgn(m) < 0 ? Stability::Attractor : Stability::Repeller;
                else if (s > 2 * k) expected = Stability::Attractor;
                else expected = m < pivot ? Stability::Attractor : Stability::Repeller;
                const Stability got = classify_origin(P);
                // the first nonzero constant of the series must agree with the rule
                const Stability series = lyapunov_constants(P, std::max(2 * s, 4 * k)).verdict;
                if (got != expected || series != expected)
                    bad += " (k=" + std::to_string(k) + ",s=" + std::to_string(s) + ",m=" + m.get_str() + ")";
                ++checked;
            }
        }
    }
    auto V4 = [](const Rational& m) { return lyapunov_constants({m, 1, 2}, 4).constants.back().exact; };
    const trig::MomentForm v0 = V4(0), v1 = V4(1);
    // V4 is affine in m; it vanishes at 3/5 and its slope is nonzero, so 3/5 is its only zero
    trig::MomentForm slope = v1;
    slope += v0.scaled(-1);
    trig::MomentForm at35 = v0;
    at35 += slope.scaled(q(3, 5));
    const bool v4_ok = V4(q(3, 5)).zero() && at35.zero() && !slope.zero() && V4(q(3, 5)).coeff == at35.coeff;
    Outcome o;
    o.pass = bad.empty() && v4_ok;
    o.detail = std::to_string(checked) + " (k, s, m) cases" + (bad.empty() ? "" : ", mismatches:" + bad) +
               "; V4(3/5) = 0 exactly and V4 affine with nonzero slope: " + (v4_ok ? "yes" : "no");
    return o;
}

Outcome v10_value() {
    using Real50 = lyap::Real50;
    const auto rep = lyap::lyapunov_constants({q(3, 5), 1, 2}, 10);
    const Real50 got = rep.constants.back().exact.value();
    const Real50 expected = Real50(128) / 1625 * pow(boost::math::tgamma(Real50(3) / 4), 2) /
                            sqrt(boost::math::constants::pi<Real50>());
    const double rel = static_cast<double>(abs(got - expected) / expected);
    return {rep.first_nonzero == 10 && rel < 1e-10,
            "V10 = " + got.str(20) + ", relative error " + num(rel, 3) + ", first nonzero V" + std::to_string(rep.first_nonzero)};
}

Outcome dulac_certificates() {
    using namespace dulac;
    const MFunction simple = compute_M(build_V_simple(MPoly::var(M)));
    const bool identity = simple.full == parse_mpoly("2/3*((3 - 10*m)*x^2 + m*y^4)*y^4");

    const Enclosure e = enclose({8, 4}, 4);
    const bool enclosure = e.lower == q(3002, 1785) && e.upper == q(37, 22);
    const UniqChecks ck = uniq_closed_form_checks();
    const CertNode lower_end = majorant_no_roots("Q", uniq_boundary_Q(), Y, uniq_lower_end_sample(), -1, q(6, 5));
    const Certificate whole = certify_uniq_interval();

    Outcome o;
    o.pass = identity && enclosure && ck.q_closed_form && ck.r_plus && ck.r_minus && lower_end.all_ok() && whole.verdict();
    o.detail = std::string("M identity ") + (identity ? "exact" : "differs") + "; 8^(1/4) in (" + e.lower.get_str() + ", " +
               e.upper.get_str() + "); R+/R- majorants " + (ck.r_plus && ck.r_minus ? "match" : "differ") +
               "; no roots at n = (1/2)^(1/4): " + (lower_end.all_ok() ? "yes" : "no") +
               "; whole-interval certificate: " + (whole.verdict() ? "certified" : "FAILED");
    if (!whole.verdict()) {
        std::string piece;
        o.detail += " (" + first_failure(whole, &piece) + " in " + piece + ")";
    }
    return o;
}

Outcome series_reproduction() {
    int equal = 0;
    std::string bad;
    for (const Rational& m : {q(51, 100), q(11, 20), q(57, 100), q(29, 50), q(59, 100)}) {
        if (dulac::compare_with_uniq_seed(m).equal) ++equal;
        else bad += " " + m.get_str();
    }
    return {equal == 5, std::to_string(equal) + "/5 parameters match coefficientwise" + (bad.empty() ? "" : "; differ at" + bad)};
}

Outcome bifurcation_value() {
    const flow::MstarResult r = flow::find_mstar(0.547, 0.6, 1e-6, 1e-4);
    const bool endpoints = r.at_lo.delta > 0 && r.at_hi.delta < 0;
    const bool one = r.changes.size() == 1;
    bool narrow = false, near = false;
    std::string where;
    if (one) {
        const flow::SignChange& sc = r.changes.front();
        narrow = sc.width() <= 1e-5;
        // the enclosure must meet [0.560115 - 5e-5, 0.560115 + 5e-5]
        near = sc.hi >= 0.560115 - 5e-5 && sc.lo <= 0.560115 + 5e-5;
        where = "[" + num(sc.lo) + ", " + num(sc.hi) + "], width " + num(sc.width(), 3);
    }
    Outcome o;
    o.pass = endpoints && one && narrow && near;
    o.detail = "delta(0.547) = " + num(r.at_lo.delta, 4) + ", delta(0.6) = " + num(r.at_hi.delta, 4) + "; " +
               std::to_string(r.changes.size()) + " sign change(s)" + (one ? " in " + where : "") +
               "; within 5e-5 of 0.560115: " + (near ? "yes" : "no");
    return o;
}

// Limit cycle, basin oval and convergence of 100 points from inside the oval.
Outcome limit_cycle(double time_budget) {
    const double m = 0.57;
    const auto lc = flow::locate_cycle(m);
    if (!lc) return {false, "no cycle located"};
    const dulac::Oval oval = dulac::basin_oval(q(57, 100), 200);
    bool inside = true;
    for (const auto& p : oval.points) inside = inside && flow::point_in_polygon({p[0], p[1]}, lc->orbit);

    // points strictly inside the oval: oval samples pulled towards the origin
    std::mt19937_64 rng(57);
    std::uniform_int_distribution<std::size_t> pick(0, oval.points.size() - 1);
    std::uniform_real_distribution<double> shrink(0.05, 0.95);
    int converged = 0;
    double worst = 0;
    for (int k = 0; k < 100; ++k) {
        const auto& p = oval.points[pick(rng)];
        const double f = shrink(rng);
        const flow::ConvergenceResult r = flow::converge_to_origin(m, {f * p[0], f * p[1]}, 1e-3, time_budget);
        converged += r.converged ? 1 : 0;
        worst = std::max(worst, r.final_norm);
    }
    Outcome o;
    o.pass = lc->exponent > 0 && inside && converged == 100;
    o.detail = "y* = " + num(lc->y_star, 8) + ", exponent " + num(lc->exponent, 4) + "; oval inside cycle: " + (inside ? "yes" : "no") +
               "; " + std::to_string(converged) + "/100 reach |state| < 1e-3 by t = " + num(time_budget, 3) +
               " (largest final norm " + num(worst, 3) + ")";
    return o;
}

Outcome rho_crossover() {
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
        const flow::PolycycleRatio r = flow::rho_polycycle(0.05 + 0.15 * k);
        worst = std::max(worst, std::abs(r.closed_form - r.eigen_product));
    }
    const double at = std::abs(flow::rho_polycycle(9.0 / 25).closed_form - 1);
    return {worst < 1e-10 && at < 1e-12, "closed form vs eigenvalue product: " + num(worst, 3) + " over 20 m; |rho(9/25) - 1| = " + num(at, 3)};
}

Outcome abel_consistency() {
    const auto lc = flow::locate_cycle(0.57);
    if (!lc) return {false, "no cycle located"};
    const flow::AbelCheck a = flow::abel_residual(*lc);
    return {a.residual < 1e-6, "sup residual " + num(a.residual, 3) + " over " + std::to_string(a.samples) + " samples; angle swept " +
                                   num(a.theta_period, 12) + " vs T = " + num(a.trig_period, 12)};
}

Outcome algebraic_polycycle() {
    std::string wrong;
    for (const Rational& m : {q(0), q(1), q(1, 2), q(-1), q(2), q(1, 3), q(3, 4)}) {
        const bool expected = m == 0 || m == 1;
        if (flow::algebraic_polycycle_check(m).invariant != expected) wrong += " " + m.get_str();
    }
    const flow::PolycycleFactorization f = flow::polycycle_resultant();
    const MPoly mm = MPoly::var(M);
    const bool factor = f.y_power == 4 && f.m_power == 4 && f.one_minus_m_power == 4 &&
                        f.resultant == MPoly::var(Y, 4) * mm.pow(4) * (MPoly(1) - mm).pow(4) * f.cofactor &&
                        !f.cofactor.eval_at(M, 0).zero() && !f.cofactor.eval_at(M, 1).zero();
    return {wrong.empty() && factor, std::string("invariant exactly at m = 0, 1 among 7 samples: ") + (wrong.empty() ? "yes" : "no, at" + wrong) +
                                         "; resultant = y^" + std::to_string(f.y_power) + " m^" + std::to_string(f.m_power) + " (1 - m)^" +
                                         std::to_string(f.one_minus_m_power) + " * cofactor: " + (factor ? "exact" : "no")};
}

Outcome oracle_suites() {
    using testing_support::BisectionOracle;
    std::mt19937_64 rng(20240611);
    int agree = 0, checked = 0;
    while (checked < 500) {
        const UniPoly p = testing_support::random_poly(rng, 12, 100);
        if (sign_at(p, Rational(-10)) == 0 || sign_at(p, Rational(10)) == 0) continue;
        BisectionOracle oracle(p);
        const int expected = oracle.count(-10, 10);
        if (!oracle.gave_up && sturm_count(p, -10, 10) == expected) ++agree;
        ++checked;
    }
    double moment_err = 0;
    for (int qq : {2, 3})
        for (int i = 0; i <= 16; i += 2)
            for (int j = 0; i + j <= 16; j += 2)
                moment_err = std::max(moment_err, std::abs(static_cast<double>(trig::moment({1, qq}, i, j).value) - trig::moment_quadrature({1, qq}, i, j)));
    const trig::TrigParams P{1, 2};
    const double T = trig::period(P);
    std::uniform_real_distribution<double> u(0, 3 * T);
    double energy = 0;
    for (int k = 0; k < 1000; ++k) {
        const trig::TrigValue v = trig::eval(P, u(rng));
        energy = std::max(energy, std::abs(trig::energy_defect(P, v.cs, v.sn)));
    }
    return {agree == 500 && moment_err < 1e-9 && energy < 1e-11,
            "Sturm vs bisection " + std::to_string(agree) + "/500; moments vs quadrature " + num(moment_err, 3) + "; energy defect " + num(energy, 3)};
}

Outcome sampled(const std::string& label, const std::vector<Rational>& ns, const std::function<Certificate(const Rational&)>& run) {
    std::string detail;
    bool ok = true;
    for (const Rational& n : ns) {
        const auto t0 = std::chrono::steady_clock::now();
        const Certificate c = run(n);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        ok = ok && c.verdict();
        detail += (detail.empty() ? "" : "; ") + label + " = " + n.get_str() + ": " + c.id + " " + (c.verdict() ? "certified" : "FAILED") + " (" +
                  num(secs, 3) + " s)";
    }
    return {ok, detail};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance run"};
    bool long_runs = false;
    double convergence_budget = 1e6;
    app.add_flag("--long", long_runs, "also run the whole-interval degree-8 and invariant-region certificates");
    app.add_option("--convergence-budget", convergence_budget, "integration time per point for the basin convergence check");
    CLI11_PARSE(app, argc, argv);

    criterion("lyapunov thresholds on the 3x3 (k, s) grid", 60, lyapunov_thresholds);
    criterion("V10 at (3/5, 1, 2)", 60, v10_value);
    criterion("Dulac certificates, uniqueness interval", 600, dulac_certificates);
    criterion("degree-12 series vs displayed g2", 0, series_reproduction);
    criterion("bifurcation value m*", 300, bifurcation_value);
    criterion("limit cycle and basin at m = 0.57", 300, [&] { return limit_cycle(convergence_budget); });
    criterion("polycycle ratio crossover", 0, rho_crossover);
    criterion("Abel consistency along the cycle", 0, abel_consistency);
    criterion("algebraic polycycle family", 0, algebraic_polycycle);
    criterion("oracle suites", 0, oracle_suites);
    criterion("degree-8 construction at 3 rational n", 1800,
              [] { return sampled("n", {q(79, 100), q(4, 5), q(83, 100)}, dulac::certify_prop925_at); });
    criterion("invariant-region construction at 3 rational n", 1800,
              [] { return sampled("n", {q(71, 100), q(18, 25), q(73, 100)}, dulac::certify_prop547_at); });
    if (long_runs) {
        criterion("degree-8 construction, whole interval", 0, [] {
            const Certificate c = dulac::certify_prop925_interval();
            return Outcome{c.verdict(), c.parameter_interval + ": " + (c.verdict() ? "certified" : "FAILED")};
        });
        criterion("invariant-region construction, whole interval", 0, [] {
            const Certificate c = dulac::certify_prop547_interval();
            return Outcome{c.verdict(), c.parameter_interval + ": " + (c.verdict() ? "certified" : "FAILED")};
        });
    }

    int failed = 0;
    for (const auto& l : g_lines) failed += l.outcome.pass ? 0 : 1;
    std::printf("%zu criteria, %d failed\n", g_lines.size(), failed);
    return failed == 0 ? 0 : 1;
}
