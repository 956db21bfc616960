// Command-line front end: classification of the origin, Dulac certificates,
// bifurcation scans, limit cycles, portraits, basin ovals and the summary
// report.  Exit status: 0 success, 2 certificate failure, 3 numeric failure,
// 64 usage error.

#include <CLI11.hpp>

#include <cyclecert/dulac/certify.hpp>
#include <cyclecert/flow/abel.hpp>
#include <cyclecert/flow/charts.hpp>
#include <cyclecert/lyap/lyapunov.hpp>
#include <cyclecert/trig/gentrig.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace cyclecert;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCertificate = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int exit_code_for(const Error& e) {
    if (is_certificate_failure(e)) return kExitCertificate;
    const std::string& k = e.kind();
    if (k == "ParseError" || k == "DomainError" || k == "NonPositiveParameter") return kExitUsage;
    if (k == "ToleranceNotMet" || k == "PrecisionLoss" || k == "StepUnderflow" || k == "Blowup" || k == "NoReturn" ||
        k == "NoCrossing" || k == "NoSignChange" || k == "NoOval" || k == "OutOfScope")
        return kExitNumeric;
    return kExitCertificate;
}

Rational rational_arg(const std::string& text, const char* name) {
    if (text.empty()) throw UsageError(std::string("--") + name + " is required");
    try {
        return parse_rational(text);
    } catch (const ParseError& e) {
        throw UsageError(std::string("--") + name + ": " + e.what());
    }
}

std::pair<Rational, Rational> pair_arg(const std::string& text, const char* name) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError(std::string("--") + name + " expects a,b");
    Rational a = rational_arg(text.substr(0, comma), name), b = rational_arg(text.substr(comma + 1), name);
    if (!(a < b)) throw UsageError(std::string("--") + name + " needs a < b");
    return {a, b};
}

// Exact k-th root of a nonnegative rational, when there is one.
std::optional<Rational> exact_root(const Rational& r, unsigned k) {
    if (sgn(r) < 0) return std::nullopt;
    Integer a, b;
    if (mpz_root(a.get_mpz_t(), r.get_num().get_mpz_t(), k) == 0) return std::nullopt;
    if (mpz_root(b.get_mpz_t(), r.get_den().get_mpz_t(), k) == 0) return std::nullopt;
    return make_rational(a, b);
}

std::string fmt(double v, int digits = 12) {
    std::ostringstream os;
    os << std::setprecision(digits) << v;
    return os.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path.string());
    out << content;
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyArgs {
    std::string m;
    int k = 1, s = 2, order = 12;
};

int run_classify(const ClassifyArgs& a) {
    const lyap::FamilyParams P{rational_arg(a.m, "m"), a.k, a.s};
    const lyap::Stability verdict = lyap::classify_origin(P);
    std::cout << "system: x' = y^3 - x^" << 2 * a.k + 1 << ", y' = -x + m y^" << 2 * a.s + 1 << "\n";
    std::cout << "threshold: ";
    if (a.s == 2 * a.k)
        std::cout << "m = " << lyap::threshold_m(a.k) << "\n";
    else
        std::cout << (a.s < 2 * a.k ? "sign of m" : "none (s > 2k)") << "\n";
    const int order = std::max({a.order, 2 * a.s, 4 * a.k});
    const lyap::LyapunovReport rep = lyap::lyapunov_constants(P, order);
    std::cout << rep.to_text();
    std::cout << "classification: " << lyap::to_string(verdict) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// certify

struct CertifyArgs {
    std::string prop, m, n, interval, format = "text", report_file;
    int terms = 6;
    bool whole_interval = false;
};

std::vector<Rational> interior_samples(const Rational& a, const Rational& b) {
    const Rational w = b - a;
    return {a + w / 4, a + w / 2, a + 3 * w / 4};
}

// n for the constructions parametrised by n = m^(1/power).
Rational n_parameter(const CertifyArgs& a, unsigned power) {
    if (!a.n.empty()) return rational_arg(a.n, "n");
    const Rational m = rational_arg(a.m, "m");
    if (auto r = exact_root(m, power)) return *r;
    throw UsageError("m = " + m.get_str() + " has no rational " + std::to_string(power) +
                     "-th root; pass --n P/Q with m = n^" + std::to_string(power));
}

std::vector<Certificate> build_certificates(const CertifyArgs& a) {
    using namespace dulac;
    const std::string& p = a.prop;
    std::vector<Certificate> out;
    if (p == "nc") {
        if (!a.interval.empty()) {
            const auto [lo, hi] = pair_arg(a.interval, "interval");
            out.push_back(certify_nc_simple_interval(lo, hi));
        } else {
            out.push_back(certify_nc_simple(rational_arg(a.m, "m")));
        }
    } else if (p == "nc-Km" || p == "kummer") {
        std::vector<Rational> ms;
        if (!a.interval.empty()) {
            const auto [lo, hi] = pair_arg(a.interval, "interval");
            ms = interior_samples(lo, hi);
        } else {
            ms = {rational_arg(a.m, "m")};
        }
        for (const Rational& m : ms) out.push_back(p == "kummer" ? certify_kummer(m, a.terms) : certify_nc_km(m));
    } else if (p == "uniq" || p == "925" || p == "547") {
        if (a.whole_interval) {
            out.push_back(p == "uniq" ? certify_uniq_interval() : p == "925" ? certify_prop925_interval() : certify_prop547_interval());
            return out;
        }
        const unsigned power = p == "547" ? 2 : 4;
        std::vector<Rational> ns;
        if (!a.interval.empty()) {
            const auto [lo, hi] = pair_arg(a.interval, "interval");
            ns = interior_samples(lo, hi);
        } else {
            ns = {n_parameter(a, power)};
        }
        for (const Rational& n : ns)
            out.push_back(p == "uniq" ? certify_uniq_at(n) : p == "925" ? certify_prop925_at(n) : certify_prop547_at(n));
    } else {
        throw UsageError("--prop must be one of nc, nc-Km, kummer, uniq, 925, 547");
    }
    return out;
}

int run_certify(const CertifyArgs& a) {
    if (a.format != "text" && a.format != "json") throw UsageError("--format must be text or json");
    const std::vector<Certificate> certs = build_certificates(a);
    nlohmann::json all = nlohmann::json::array();
    bool ok = true;
    for (const auto& c : certs) {
        ok = ok && c.verdict();
        all.push_back(c.to_json());
        if (a.format == "text") std::cout << c.to_text();
    }
    if (a.format == "json") std::cout << all.dump(2) << "\n";
    if (!a.report_file.empty()) write_file(a.report_file, all.dump(2) + "\n");
    return ok ? kExitOk : kExitCertificate;
}

// ---------------------------------------------------------------------------
// bifurcate, cycle

struct BifurcateArgs {
    std::string bracket = "0.547,0.6";
    double tol = 1e-6, step = 1e-4;
};

int run_bifurcate(const BifurcateArgs& a) {
    const auto [lo, hi] = pair_arg(a.bracket, "bracket");
    const flow::MstarResult r = flow::find_mstar(to_double(lo), to_double(hi), a.tol, a.step);
    std::cout << "bracket: [" << lo << ", " << hi << "]\n";
    std::cout << "scan step: " << a.step << "\ntolerance: " << a.tol << "\n";
    std::cout << "seed offset: " << r.at_lo.eps << "\nintegrator tolerance: " << r.at_lo.tol << "\n";
    std::cout << "delta(" << lo << ") = " << fmt(r.at_lo.delta) << " (seed refinement " << fmt(r.at_lo.error_estimate, 3) << ")\n";
    std::cout << "delta(" << hi << ") = " << fmt(r.at_hi.delta) << " (seed refinement " << fmt(r.at_hi.error_estimate, 3) << ")\n";
    std::cout << "sign changes: " << r.changes.size() << "\n";
    for (const auto& sc : r.changes)
        std::cout << "  m* in [" << fmt(sc.lo, 10) << ", " << fmt(sc.hi, 10) << "], width " << fmt(sc.width(), 3) << "\n";
    return kExitOk;
}

struct CycleArgs {
    std::string m = "0.57";
    bool abel = false;
};

int run_cycle(const CycleArgs& a) {
    const Rational m = rational_arg(a.m, "m");
    const auto lc = flow::locate_cycle(to_double(m));
    std::cout << "m: " << m << "\n";
    if (!lc) {
        std::cout << "cycle: none found (return-map displacement keeps one sign inside the square)\n";
        return kExitOk;
    }
    std::cout << "cycle: found\n";
    std::cout << "y*: " << fmt(lc->y_star) << "\nperiod: " << fmt(lc->period) << "\n";
    std::cout << "characteristic exponent: " << fmt(lc->exponent) << (lc->exponent > 0 ? " (unstable)" : " (stable)") << "\n";
    std::cout << "return map slope: " << fmt(lc->return_slope) << "\n";
    std::cout << "fixed point residual: " << fmt(lc->fixed_point_residual, 3) << "\n";
    std::cout << "winding number: " << lc->winding << "\n";
    if (a.abel) {
        const flow::AbelCheck ab = flow::abel_residual(*lc);
        std::cout << "abel residual: " << fmt(ab.residual, 3) << "\n";
        std::cout << "angle over one period: " << fmt(ab.theta_period, 15) << " (T = " << fmt(ab.trig_period, 15) << ")\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// portrait, basin

struct Polyline {
    std::string id;
    std::vector<double> t;
    std::vector<flow::State> pts;
};

Polyline from_trajectory(const std::string& id, const flow::Trajectory& tr, std::size_t n = 400) {
    Polyline p{id, {}, {}};
    const double t0 = tr.t.front(), t1 = tr.t.back();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = t0 + (t1 - t0) * static_cast<double>(i) / static_cast<double>(n - 1);
        p.t.push_back(t);
        p.pts.push_back(tr.at(t));
    }
    return p;
}

std::string to_csv(const std::vector<Polyline>& lines) {
    std::ostringstream os;
    os << std::setprecision(10) << "t,x,y,orbit-id\n";
    for (const auto& l : lines)
        for (std::size_t i = 0; i < l.pts.size(); ++i) os << l.t[i] << "," << l.pts[i][0] << "," << l.pts[i][1] << "," << l.id << "\n";
    return os.str();
}

std::string to_svg(const std::vector<Polyline>& lines, double half_width) {
    std::ostringstream os;
    const double size = 600, scale = size / (2 * half_width);
    os << std::setprecision(6);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size << "\">\n";
    for (const auto& l : lines) {
        std::string colour = "black";
        if (l.id.rfind("separatrix", 0) == 0) colour = "red";
        else if (l.id.rfind("nullcline", 0) == 0) colour = "gray";
        else if (l.id == "cycle") colour = "blue";
        else if (l.id == "basin-oval") colour = "green";
        os << "<path id=\"" << l.id << "\" fill=\"none\" stroke=\"" << colour << "\" d=\"";
        bool first = true;
        for (const auto& p : l.pts) {
            if (std::abs(p[0]) > half_width || std::abs(p[1]) > half_width) {
                first = true;
                continue;
            }
            os << (first ? "M" : "L") << (p[0] + half_width) * scale << " " << (half_width - p[1]) * scale << " ";
            first = false;
        }
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

struct PortraitArgs {
    std::string m = "0.57", out = "portrait.csv";
    int orbits = 8;
};

int run_portrait(const PortraitArgs& a) {
    const Rational mr = rational_arg(a.m, "m");
    const double m = to_double(mr);
    const double c = flow::saddle_coordinate(m);
    std::vector<Polyline> lines;
    const flow::VectorField f = flow::cubic_quintic_field(m);
    flow::IntegrateOptions io;
    // orbits that leave the disc of radius 3c are cut there
    io.watch = [c](double, const flow::State& s) { return std::hypot(s[0], s[1]) < 3 * c; };
    for (int k = 0; k < a.orbits; ++k) {
        const flow::State x0{0.0, c * (k + 1) / (a.orbits + 1)};
        const flow::Trajectory tr = flow::integrate(f, x0, 0.0, 40.0, io);
        lines.push_back(from_trajectory("orbit-" + std::to_string(k), tr));
    }
    const char* names[4] = {"separatrix-stable-p+", "separatrix-unstable-p+", "separatrix-stable-p-", "separatrix-unstable-p-"};
    for (int i = 0; i < 4; ++i) {
        try {
            const auto s = flow::separatrix(m, i / 2, i % 2 == 0 ? flow::Manifold::Stable : flow::Manifold::Unstable);
            lines.push_back(from_trajectory(names[i], s.trajectory));
        } catch (const Error& e) {
            // NoCrossing or Blowup: the branch leaves before meeting the positive y-axis
            if (e.kind() != "NoCrossing" && e.kind() != "Blowup") throw;
        }
    }
    Polyline nx{"nullcline-x", {}, {}}, ny{"nullcline-y", {}, {}};
    for (int i = 0; i <= 200; ++i) {
        const double s = -1.2 * c + 2.4 * c * i / 200;
        nx.t.push_back(0);
        nx.pts.push_back({s, s});  // y^3 = x^3
        ny.t.push_back(0);
        ny.pts.push_back({m * std::pow(s, 5), s});  // x = m y^5
    }
    lines.push_back(nx);
    lines.push_back(ny);
    if (m > 0.5 && m < 0.6) {
        if (const auto lc = flow::locate_cycle(m)) {
            Polyline p{"cycle", {}, lc->orbit};
            for (std::size_t i = 0; i < p.pts.size(); ++i) p.t.push_back(lc->period * static_cast<double>(i) / static_cast<double>(p.pts.size()));
            lines.push_back(p);
        }
        const dulac::Oval o = dulac::basin_oval(mr, 200);
        Polyline p{"basin-oval", std::vector<double>(o.points.size(), 0.0), {}};
        for (const auto& q : o.points) p.pts.push_back({q[0], q[1]});
        lines.push_back(p);
    }
    const bool svg = a.out.size() > 4 && a.out.substr(a.out.size() - 4) == ".svg";
    write_file(a.out, svg ? to_svg(lines, 1.3 * c) : to_csv(lines));
    std::cout << "wrote " << a.out << " (" << lines.size() << " polylines)\n";
    return kExitOk;
}

struct BasinArgs {
    std::string m = "0.57", out = "basin.csv";
    int samples = 200;
    int converge_samples = 0;
    double time_budget = 1e4;
};

int run_basin(const BasinArgs& a) {
    const Rational mr = rational_arg(a.m, "m");
    const double m = to_double(mr);
    const dulac::Oval o = dulac::basin_oval(mr, a.samples);
    std::vector<Polyline> lines{{"basin-oval", std::vector<double>(o.points.size(), 0.0), {}}};
    for (const auto& q : o.points) lines[0].pts.push_back({q[0], q[1]});
    write_file(a.out, to_csv(lines));
    std::cout << "wrote " << a.out << " (" << o.points.size() << " points)\n";
    std::cout << "V(0, 0): " << fmt(o.V_origin) << "\n";
    std::cout << "y range: [" << fmt(o.y_min) << ", " << fmt(o.y_max) << "]\n";

    const dulac::DulacSpec V = dulac::build_V2_uniq(mr);
    const MPoly vdot = V.system().lie(V.V());
    dulac::Bindings b;
    b.m = m;
    b.s = dulac::uniq_s_value(m);
    double worst = -INFINITY;
    for (const auto& p : o.points) worst = std::max(worst, vdot.eval_as<double>(b.point(p[0], p[1])));
    const bool enters = worst <= 1e-12;
    std::cout << "largest dV/dt on the oval: " << fmt(worst, 4) << (enters ? " (flow enters)" : " (flow leaves somewhere)") << "\n";

    bool inside = true;
    const auto lc = flow::locate_cycle(m);
    if (lc) {
        for (const auto& p : lines[0].pts) inside = inside && flow::point_in_polygon(p, lc->orbit);
        std::cout << "oval strictly inside the cycle: " << (inside ? "yes" : "no") << "\n";
    } else {
        std::cout << "oval strictly inside the cycle: no cycle located\n";
    }
    bool converged = true;
    if (a.converge_samples > 0) {
        int ok = 0;
        for (int k = 0; k < a.converge_samples; ++k) {
            const auto& p = lines[0].pts[static_cast<std::size_t>(k) * lines[0].pts.size() / static_cast<std::size_t>(a.converge_samples)];
            const auto r = flow::converge_to_origin(m, {0.9 * p[0], 0.9 * p[1]}, 1e-3, a.time_budget);
            ok += r.converged ? 1 : 0;
        }
        converged = ok == a.converge_samples;
        std::cout << "orbits reaching |state| < 1e-3 within t = " << a.time_budget << ": " << ok << " of " << a.converge_samples << "\n";
    }
    return enters && inside && converged ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------
// gentrig, polycycle-example

struct GentrigArgs {
    int p = 1, q = 2;
    std::vector<double> theta{0.0};
};

int run_gentrig(const GentrigArgs& a) {
    const trig::TrigParams P{a.p, a.q};
    std::cout << "weights: p = " << a.p << ", q = " << a.q << "\n";
    std::cout << "period: " << trig::period50(P).str(30) << "\n";
    for (double th : a.theta) {
        const trig::TrigValue v = trig::eval(P, th);
        std::cout << "theta = " << fmt(th) << ": Cs = " << fmt(v.cs, 15) << ", Sn = " << fmt(v.sn, 15)
                  << ", energy defect = " << fmt(trig::energy_defect(P, v.cs, v.sn), 3) << "\n";
    }
    return kExitOk;
}

struct PolycycleArgs {
    std::string m = "0";
};

int run_polycycle(const PolycycleArgs& a) {
    const Rational m = rational_arg(a.m, "m");
    const flow::PolycycleCheck c = flow::algebraic_polycycle_check(m);
    std::cout << "m: " << m << "\n";
    std::cout << "H: " << flow::polycycle_curve(MPoly(m)).str() << "\n";
    std::cout << "dH/dt: " << c.W.str() << "\n";
    std::cout << "Res(dH/dt, H, x): " << (c.resultant.zero() ? std::string("0") : c.resultant.str()) << "\n";
    std::cout << "invariant: " << (c.invariant ? "yes" : "no") << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
    std::string out_dir = "cyclecert-report";
    bool full = false;
};

struct ReportRow {
    std::string range, claim, verdict, evidence;
    bool ok = false;
};

int run_report(const ReportArgs& a) {
    using namespace dulac;
    const fs::path dir(a.out_dir);
    fs::create_directories(dir);
    std::vector<ReportRow> rows;
    auto save = [&](const Certificate& c, const std::string& tag) {
        const fs::path file = dir / (c.id + "-" + tag + ".txt");
        write_file(file, c.to_text());
        write_file(fs::path(file).replace_extension(".json"), c.to_json().dump(2) + "\n");
        return file.filename().string();
    };
    auto certified_row = [&](std::string range, std::string claim, const std::vector<std::pair<Certificate, std::string>>& certs) {
        ReportRow r{std::move(range), std::move(claim), "", "", true};
        for (const auto& [c, tag] : certs) {
            r.ok = r.ok && c.verdict();
            r.evidence += (r.evidence.empty() ? "" : " ") + save(c, tag);
        }
        r.verdict = r.ok ? "certified" : "FAILED";
        rows.push_back(r);
    };
    auto tag = [](const Rational& q) {
        std::string s = q.get_str();
        for (char& ch : s)
            if (ch == '/') ch = '_';
        return s;
    };

    {
        // m <= 0: x^2/2 + y^4/4 decreases along orbits
        const MPoly V = parse_mpoly("x^2/2 + y^4/4");
        const MPoly vdot = cubic_quintic(MPoly::var(M)).lie(V);
        Certificate c;
        c.id = "global-lyapunov";
        c.proposition = "d/dt (x^2/2 + y^4/4) = -x^4 + m y^8 <= 0 for m <= 0";
        c.parameter_interval = "m <= 0";
        CertNode n{"identity"};
        n.fact("derivative", vdot.str());
        n.ok = vdot == parse_mpoly("-x^4 + m*y^8");
        c.pieces.push_back(n);
        certified_row("(-inf, 0]", "no periodic orbits, no polycycles", {{c, "all"}});
    }
    certified_row("(0, 3/10]", "no periodic orbits (exact on [1/1000000, 3/10])", {{certify_nc_simple_interval(make_rational(1, 1000000), make_rational(3, 10)), "interval"}});
    {
        std::vector<std::pair<Certificate, std::string>> cs;
        for (const Rational& m : {make_rational(31, 100), make_rational(1, 3), make_rational(7, 20)}) cs.push_back({certify_nc_km(m), tag(m)});
        certified_row("(3/10, 9/25)", "no periodic orbits (sampled m)", cs);
    }
    {
        std::vector<std::pair<Certificate, std::string>> cs;
        for (const Rational& n : {make_rational(79, 100), make_rational(4, 5), make_rational(83, 100)}) cs.push_back({certify_prop925_at(n), tag(n)});
        certified_row("[9/25, 1/2)", "no periodic orbits (sampled n, m = n^4)", cs);
    }
    {
        std::vector<std::pair<Certificate, std::string>> cs;
        for (const Rational& n : {make_rational(71, 100), make_rational(18, 25), make_rational(73, 100)}) cs.push_back({certify_prop547_at(n), tag(n)});
        certified_row("[1/2, 547/1000]", "no periodic orbits (sampled n, m = n^2)", cs);
    }
    {
        std::vector<std::pair<Certificate, std::string>> cs;
        for (const Rational& n : {make_rational(87, 100), make_rational(7, 8), make_rational(22, 25)}) cs.push_back({certify_uniq_at(n), tag(n)});
        if (a.full) cs.push_back({certify_uniq_interval(), "whole"});
        certified_row("(547/1000, 3/5)", std::string("at most one periodic orbit or polycycle") + (a.full ? "" : " (sampled n, m = n^4)"), cs);
    }
    {
        std::vector<std::pair<Certificate, std::string>> cs;
        for (const Rational& m : {make_rational(3, 5), Rational(1), Rational(4)}) cs.push_back({certify_kummer(m, 6), tag(m)});
        certified_row("[3/5, inf)", "no periodic orbits (sampled m)", cs);
    }
    {
        ReportRow r{"(547/1000, 3/5)", "m* enclosure", "", "", false};
        std::ostringstream rec;
        try {
            const flow::MstarResult ms = flow::find_mstar(0.547, 0.6, 1e-6, 1e-4);
            rec << "delta(0.547) = " << fmt(ms.at_lo.delta) << "\ndelta(0.6) = " << fmt(ms.at_hi.delta) << "\n";
            for (const auto& sc : ms.changes) rec << "sign change in [" << fmt(sc.lo, 10) << ", " << fmt(sc.hi, 10) << "]\n";
            r.ok = ms.at_lo.delta > 0 && ms.at_hi.delta < 0;
            r.verdict = std::to_string(ms.changes.size()) + " sign change(s)";
        } catch (const Error& e) {
            rec << e.what() << "\n";
            r.verdict = "numeric failure";
        }
        const fs::path file = dir / "mstar.txt";
        write_file(file, rec.str());
        r.evidence = file.filename().string();
        rows.push_back(r);
    }
    {
        ReportRow r{"m = 57/100", "unstable limit cycle; basin oval", "", "", false};
        std::ostringstream rec;
        const auto lc = flow::locate_cycle(0.57);
        if (lc) {
            rec << "y* = " << fmt(lc->y_star) << "\nexponent = " << fmt(lc->exponent) << "\n";
            const dulac::Oval o = dulac::basin_oval(make_rational(57, 100), 200);
            bool inside = true;
            for (const auto& p : o.points) inside = inside && flow::point_in_polygon({p[0], p[1]}, lc->orbit);
            rec << "oval inside cycle = " << (inside ? "yes" : "no") << "\n";
            r.ok = lc->exponent > 0 && inside;
            r.verdict = r.ok ? "cycle unstable, oval inside" : "inconsistent";
        } else {
            rec << "no cycle located\n";
            r.verdict = "no cycle";
        }
        const fs::path file = dir / "cycle-0.57.txt";
        write_file(file, rec.str());
        r.evidence = file.filename().string();
        rows.push_back(r);
    }

    std::ostringstream os;
    os << "report: phase portraits of x' = y^3 - x^3, y' = -x + m y^5\n";
    os << "defaults: shooting eps = 1e-6 (check at eps/2), shooting tolerance = 1e-12, other integrations 1e-9,"
          " return map 1e-12, scan step = 1e-4, bisection width = 1e-6, escape radius = 10 m^(-1/4)\n";
    os << "mode: " << (a.full ? "full (whole-interval uniqueness certificate)" : "sampled") << "\n\n";
    bool all = true, dangling = false;
    for (const auto& r : rows) {
        for (std::istringstream ev(r.evidence); !ev.eof();) {
            std::string f;
            ev >> f;
            if (!f.empty() && !fs::exists(dir / f)) dangling = true;
        }
        if (r.evidence.empty()) dangling = true;
        all = all && r.ok;
        os << std::left << std::setw(18) << r.range << " | " << std::setw(62) << r.claim << " | " << std::setw(28) << r.verdict << " | " << r.evidence << "\n";
    }
    write_file(dir / "report.txt", os.str());
    std::cout << os.str();
    if (dangling) {
        std::cerr << "report: a row has no evidence file\n";
        return kExitCertificate;
    }
    return all ? kExitOk : kExitCertificate;
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Certificates and numerics for x' = y^3 - x^3, y' = -x + m y^5"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    int code = kExitOk;

    ClassifyArgs ca;
    auto* classify = app.add_subcommand("classify", "stability of the origin of x' = y^3 - x^(2k+1), y' = -x + m y^(2s+1)");
    classify->add_option("--m", ca.m, "parameter m (P/Q or decimal)")->required();
    classify->add_option("--k", ca.k, "k >= 1");
    classify->add_option("--s", ca.s, "s >= 1");
    classify->add_option("--order", ca.order, "highest Lyapunov constant index");
    classify->callback([&] { code = guarded([&] { return run_classify(ca); }); });

    CertifyArgs ce;
    auto* certify = app.add_subcommand("certify", "Dulac certificates");
    certify->add_option("--prop", ce.prop, "nc | nc-Km | kummer | uniq | 925 | 547")->required();
    certify->add_option("--m", ce.m, "parameter m");
    certify->add_option("--n", ce.n, "parameter n (m = n^4 for uniq and 925, m = n^2 for 547)");
    certify->add_option("--interval", ce.interval, "a,b: exact interval for nc, three interior samples otherwise");
    certify->add_option("--terms", ce.terms, "series terms for the Kummer construction");
    certify->add_flag("--whole-interval", ce.whole_interval, "run the long whole-interval certificate (uniq, 925, 547)");
    certify->add_option("--format", ce.format, "text | json");
    certify->add_option("--report-file", ce.report_file, "also write the certificates as JSON");
    certify->callback([&] { code = guarded([&] { return run_certify(ce); }); });

    BifurcateArgs ba;
    auto* bif = app.add_subcommand("bifurcate", "sign changes of the shooting gap delta(m)");
    bif->add_option("--bracket", ba.bracket, "a,b");
    bif->add_option("--tol", ba.tol, "bisection width");
    bif->add_option("--step", ba.step, "scan step");
    bif->callback([&] { code = guarded([&] { return run_bifurcate(ba); }); });

    CycleArgs cy;
    auto* cycle = app.add_subcommand("cycle", "locate the limit cycle");
    cycle->add_option("--m", cy.m, "parameter m");
    cycle->add_flag("--abel", cy.abel, "also check the Abel form along the cycle");
    cycle->callback([&] { code = guarded([&] { return run_cycle(cy); }); });

    PortraitArgs pa;
    auto* portrait = app.add_subcommand("portrait", "orbits, separatrices, nullclines, cycle and basin oval");
    portrait->add_option("--m", pa.m, "parameter m");
    portrait->add_option("--out", pa.out, "output file, .csv or .svg");
    portrait->add_option("--orbits", pa.orbits, "number of sample orbits");
    portrait->callback([&] { code = guarded([&] { return run_portrait(pa); }); });

    BasinArgs bs;
    auto* basin = app.add_subcommand("basin", "oval inside the basin of the origin");
    basin->add_option("--m", bs.m, "parameter m in (1/2, 3/5)");
    basin->add_option("--out", bs.out, "polyline CSV");
    basin->add_option("--samples", bs.samples, "points on the oval");
    basin->add_option("--converge-samples", bs.converge_samples, "orbits from inside the oval to follow towards the origin");
    basin->add_option("--time-budget", bs.time_budget, "integration time per orbit");
    basin->callback([&] { code = guarded([&] { return run_basin(bs); }); });

    GentrigArgs ga;
    auto* gentrig = app.add_subcommand("gentrig", "generalized trigonometric functions Cs, Sn");
    gentrig->add_option("--p", ga.p, "weight p");
    gentrig->add_option("--q", ga.q, "weight q");
    gentrig->add_option("--theta", ga.theta, "angles")->expected(1, 1000);
    gentrig->callback([&] { code = guarded([&] { return run_gentrig(ga); }); });

    PolycycleArgs pc;
    auto* poly = app.add_subcommand("polycycle-example", "invariance of y^2 = (x^2 + m - 2)^2 for the two-saddle family");
    poly->add_option("--m", pc.m, "parameter m");
    poly->callback([&] { code = guarded([&] { return run_polycycle(pc); }); });

    ReportArgs ra;
    auto* report = app.add_subcommand("report", "verdict table over the whole parameter line");
    report->add_option("--out-dir", ra.out_dir, "directory for the certificate files");
    report->add_flag("--full", ra.full, "include the whole-interval uniqueness certificate");
    report->callback([&] { code = guarded([&] { return run_report(ra); }); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    return code;
}
