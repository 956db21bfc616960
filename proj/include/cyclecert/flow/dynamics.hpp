#pragma once

// Saddles, separatrices and periodic orbits of x' = y^3 - x^3, y' = -x + m y^5.

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../errors.hpp"
#include "../system.hpp"
#include "integrate.hpp"

namespace cyclecert::flow {

inline PlanarSystem cubic_quintic_system(double m) {
    // m enters only through the compiled evaluator, so a double is enough here.
    PlanarSystem sys = cubic_quintic(MPoly::var(M));
    return sys.bind(M, Rational(m));
}

inline VectorField cubic_quintic_field(double m) { return VectorField(cubic_quintic_system(m)); }

// Half-width of the square whose corners are the saddles.
inline double saddle_coordinate(double m) {
    if (!(m > 0)) throw NonPositiveParameter("the saddles exist only for m > 0, got m = " + std::to_string(m));
    return std::pow(m, -0.25);
}

// ---------------------------------------------------------------------------
// Saddles

struct SaddleData {
    State location{};
    std::string exact_location;  // symbolic form of the coordinates
    double a = 0;                // stable eigenvalue is -a
    double b = 0;                // unstable eigenvalue is b
    State stable_vector{};       // unit eigenvectors
    State unstable_vector{};
    double trace = 0;
    double residual = 0;  // max |J v - lambda v|
};

namespace detail {

inline std::array<double, 4> jacobian(double m, const State& p) {
    return {-3 * p[0] * p[0], 3 * p[1] * p[1], -1.0, 5 * m * std::pow(p[1], 4)};
}

inline State unit_eigenvector(const std::array<double, 4>& J, double lambda) {
    // (J - lambda I) v = 0 using the first row, falling back to the second.
    State v = std::abs(J[1]) > 1e-300 ? State{J[1], lambda - J[0]} : State{lambda - J[3], J[2]};
    const double n = std::hypot(v[0], v[1]);
    return {v[0] / n, v[1] / n};
}

inline double eigen_residual(const std::array<double, 4>& J, const State& v, double lambda) {
    return std::max(std::abs(J[0] * v[0] + J[1] * v[1] - lambda * v[0]), std::abs(J[2] * v[0] + J[3] * v[1] - lambda * v[1]));
}

}  // namespace detail

// p+ = (c, c) and p- = (-c, -c) with c = m^(-1/4).
inline std::array<SaddleData, 2> saddles(double m) {
    const double c = saddle_coordinate(m);
    std::array<SaddleData, 2> out;
    for (int i = 0; i < 2; ++i) {
        SaddleData& s = out[static_cast<std::size_t>(i)];
        const double sign = i == 0 ? 1.0 : -1.0;
        s.location = {sign * c, sign * c};
        s.exact_location = i == 0 ? "(m^(-1/4), m^(-1/4))" : "(-m^(-1/4), -m^(-1/4))";
        const auto J = detail::jacobian(m, s.location);
        s.trace = J[0] + J[3];
        const double det = J[0] * J[3] - J[1] * J[2];
        const double disc = std::sqrt(s.trace * s.trace - 4 * det);
        const double lp = 0.5 * (s.trace + disc), lm = 0.5 * (s.trace - disc);
        if (!(lp > 0 && lm < 0)) throw DomainError("equilibrium is not a saddle");
        s.b = lp;
        s.a = -lm;
        s.unstable_vector = detail::unit_eigenvector(J, lp);
        s.stable_vector = detail::unit_eigenvector(J, lm);
        s.residual = std::max(detail::eigen_residual(J, s.unstable_vector, lp), detail::eigen_residual(J, s.stable_vector, lm));
    }
    return out;
}

// Hyperbolicity ratio of the polycycle through both saddles.
struct PolycycleRatio {
    double closed_form = 0;
    double eigen_product = 0;  // product of b_i / a_i
};

inline PolycycleRatio rho_polycycle(double m) {
    if (!(m > 0)) throw NonPositiveParameter("rho_polycycle needs m > 0");
    const double s = std::sqrt(m);
    const double w = 5 * s - 3 + std::sqrt(25 * m + 18 * s + 9);
    PolycycleRatio out;
    out.closed_form = std::pow(w, 4) / (48.0 * 48.0 * m);
    out.eigen_product = 1;
    for (const auto& sd : saddles(m)) out.eigen_product *= sd.b / sd.a;
    return out;
}

// ---------------------------------------------------------------------------
// Separatrices and the shooting gap

enum class Manifold { Stable, Unstable };

struct ShootingOptions {
    double eps = 1e-6;
    double tol = 1e-12;
    double time_budget = 200;
};

struct Separatrix {
    Trajectory trajectory;
    double crossing_y = 0;
    double crossing_xdot = 0;  // forward-time x' at the crossing
};

// Branch of the (un)stable manifold of `saddle` (0 = p+, 1 = p-) that starts
// towards the origin, followed until it first meets {x = 0, y > 0}.  Stable
// branches run in reversed time.
inline Separatrix separatrix(double m, int saddle, Manifold which, const ShootingOptions& opt = {}) {
    if (!(opt.eps > 0 && opt.eps <= 1e-4)) throw DomainError("separatrix seed offset must lie in (0, 1e-4]");
    const auto sd = saddles(m)[static_cast<std::size_t>(saddle)];
    State v = which == Manifold::Stable ? sd.stable_vector : sd.unstable_vector;
    // inward: towards the origin
    if (v[0] * sd.location[0] + v[1] * sd.location[1] > 0) v = {-v[0], -v[1]};
    const State seed{sd.location[0] + opt.eps * v[0], sd.location[1] + opt.eps * v[1]};

    const VectorField forward = cubic_quintic_field(m);
    const VectorField f = which == Manifold::Stable ? forward.reversed() : forward;
    IntegrateOptions io;
    io.abs_tol = io.rel_tol = opt.tol;
    io.escape_radius = 10 * saddle_coordinate(m);
    io.event = EventSpec{[](const State& s) { return s[0]; }, 0, [](const State& s) { return s[1] > 0; }, true, 0.0};
    Separatrix out;
    out.trajectory = integrate(f, seed, 0.0, opt.time_budget, io);
    if (out.trajectory.stop != StopReason::Event)
        throw NoCrossing("separatrix of saddle " + sd.exact_location + " did not reach the positive y-axis within t = " +
                         std::to_string(opt.time_budget));
    const State& e = out.trajectory.last();
    out.crossing_y = e[1];
    out.crossing_xdot = forward(e)[0];
    if (!(out.crossing_xdot > 0)) throw NoCrossing("separatrix meets the y-axis tangentially");
    return out;
}

struct ShootingResult {
    double m = 0;
    double y_s = 0;  // stable manifold of p+
    double y_u = 0;  // unstable manifold of p-
    double delta = 0;
    double delta_half_eps = 0;  // same with eps / 2
    double error_estimate = 0;
    double eps = 0;
    double tol = 0;
};

inline double delta_once(double m, const ShootingOptions& opt, double* ys = nullptr, double* yu = nullptr) {
    const double s = separatrix(m, 0, Manifold::Stable, opt).crossing_y;
    const double u = separatrix(m, 1, Manifold::Unstable, opt).crossing_y;
    if (ys) *ys = s;
    if (yu) *yu = u;
    return s - u;
}

// Shooting gap with a seed-refinement estimate of its error.
inline ShootingResult delta(double m, const ShootingOptions& opt = {}) {
    ShootingResult r;
    r.m = m;
    r.eps = opt.eps;
    r.tol = opt.tol;
    r.delta = delta_once(m, opt, &r.y_s, &r.y_u);
    ShootingOptions half = opt;
    half.eps = opt.eps / 2;
    r.delta_half_eps = delta_once(m, half);
    r.error_estimate = std::abs(r.delta - r.delta_half_eps);
    return r;
}

// ---------------------------------------------------------------------------
// Bifurcation scan

struct SignChange {
    double lo = 0, hi = 0;
    double delta_lo = 0, delta_hi = 0;
    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

struct MstarResult {
    double bracket_lo = 0, bracket_hi = 0;
    double scan_step = 0, tol = 0;
    std::vector<std::pair<double, double>> scan;  // (m, delta), sorted by m
    std::vector<SignChange> changes;
    ShootingResult at_lo, at_hi;
};

// Evaluates fn at every point, fanning out across hardware threads.  Results
// come back in input order.
template <class Fn>
std::vector<double> parallel_map(const std::vector<double>& xs, Fn fn, unsigned workers = 0) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    std::vector<double> out(xs.size());
    if (workers == 1) {
        for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn(xs[i]);
        return out;
    }
    std::vector<std::future<void>> jobs;
    for (unsigned w = 0; w < workers; ++w)
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < xs.size(); i += workers) out[i] = fn(xs[i]);
        }));
    for (auto& j : jobs) j.get();
    return out;
}

// Every sign change of delta on a grid of spacing `step`, each bisected to
// width <= tol.
inline MstarResult find_mstar(double lo, double hi, double tol = 1e-6, double step = 1e-4, const ShootingOptions& opt = {}) {
    if (!(lo < hi)) throw DomainError("find_mstar: empty bracket");
    MstarResult r;
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    r.scan_step = step;
    r.tol = tol;
    r.at_lo = delta(lo, opt);
    r.at_hi = delta(hi, opt);
    const long n = std::max(1L, std::lround(std::ceil((hi - lo) / step)));
    std::vector<double> grid;
    for (long i = 0; i <= n; ++i) grid.push_back(i == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
    const std::vector<double> values = parallel_map(grid, [&](double m) { return delta_once(m, opt); });
    for (std::size_t i = 0; i < grid.size(); ++i) r.scan.emplace_back(grid[i], values[i]);
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if ((values[i] > 0) == (values[i + 1] > 0)) continue;
        SignChange sc{grid[i], grid[i + 1], values[i], values[i + 1]};
        while (sc.width() > tol) {
            const double mid = sc.mid(), dm = delta_once(mid, opt);
            if ((dm > 0) == (sc.delta_lo > 0)) {
                sc.lo = mid;
                sc.delta_lo = dm;
            } else {
                sc.hi = mid;
                sc.delta_hi = dm;
            }
        }
        r.changes.push_back(sc);
    }
    if (r.changes.empty())
        throw NoSignChange("delta keeps one sign on [" + std::to_string(lo) + ", " + std::to_string(hi) + "] at scan step " +
                           std::to_string(step));
    return r;
}

// ---------------------------------------------------------------------------
// Return map on {x = 0, y > 0}

struct ReturnOptions {
    double tol = 1e-12;
    double time_budget = 1e4;
    double origin_radius = 1e-9;
};

namespace detail {

inline IntegrateOptions return_options(double m, const ReturnOptions& opt) {
    const double c = saddle_coordinate(m);
    IntegrateOptions io;
    io.abs_tol = io.rel_tol = opt.tol;
    io.event = EventSpec{[](const State& s) { return s[0]; }, +1, [](const State& s) { return s[1] > 0; }, true, 0.0};
    io.watch = [c, r = opt.origin_radius](double, const State& s) {
        return std::abs(s[0]) < c && std::abs(s[1]) < c && std::hypot(s[0], s[1]) > r;
    };
    return io;
}

}  // namespace detail

struct ReturnResult {
    double y = 0;       // ordinate of the first return
    double period = 0;  // time of flight
    Trajectory trajectory;
};

// First return of the orbit through (0, y0), required to stay in the open
// square with the saddles at its corners.
inline ReturnResult return_orbit(double m, double y0, const ReturnOptions& opt = {}) {
    if (!(y0 > 0)) throw DomainError("return_map needs y0 > 0");
    const double c = saddle_coordinate(m);
    if (!(y0 < c)) throw NoReturn("(0, y0) lies outside the square bounded by the saddles");
    ReturnResult r;
    r.trajectory = integrate(cubic_quintic_field(m), {0.0, y0}, 0.0, opt.time_budget, detail::return_options(m, opt));
    if (r.trajectory.stop == StopReason::Watch)
        throw NoReturn("orbit through (0, " + std::to_string(y0) + ") left the square or fell into the origin");
    if (r.trajectory.stop != StopReason::Event) throw NoReturn("no return within the time budget");
    r.y = r.trajectory.last()[1];
    r.period = r.trajectory.t_end();
    return r;
}

inline double return_map(double m, double y0, const ReturnOptions& opt = {}) { return return_orbit(m, y0, opt).y; }

// Integral of the divergence -3x^2 + 5 m y^4 along the orbit through (0, y0)
// up to its first return.
inline double divergence_integral(double m, double y0, double period, double tol) {
    namespace ode = boost::numeric::odeint;
    using S3 = std::array<double, 3>;
    auto rhs = [m](const S3& s, S3& d, double) {
        d[0] = s[1] * s[1] * s[1] - s[0] * s[0] * s[0];
        d[1] = -s[0] + m * std::pow(s[1], 5);
        d[2] = -3 * s[0] * s[0] + 5 * m * std::pow(s[1], 4);
    };
    S3 s{0.0, y0, 0.0};
    ode::integrate_adaptive(ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<S3>()), rhs, s, 0.0, period, period / 64);
    return s[2];
}

struct LimitCycle {
    double m = 0;
    double y_star = 0;
    double period = 0;
    double exponent = 0;       // integral of the divergence over one period
    double return_slope = 0;   // derivative of the return map at y_star
    double fixed_point_residual = 0;
    int winding = 0;           // index of the field along the cycle
    std::vector<State> orbit;  // samples over one period
};

struct CycleOptions {
    ReturnOptions ret{};
    double y_min = 0.02;  // scan start, as a fraction of the saddle coordinate
    int scan_points = 60;
    double y_tol = 1e-12;
};

// Scans the return-map displacement upward from near the origin; a sign
// change before orbits start leaving the square brackets a cycle, refined by
// TOMS 748.  Returns nothing when no displacement sign change is found.
inline std::optional<LimitCycle> locate_cycle(double m, const CycleOptions& opt = {}) {
    const double c = saddle_coordinate(m);
    auto displacement = [&](double y0) { return return_map(m, y0, opt.ret) - y0; };
    double y_prev = opt.y_min * c, d_prev = displacement(y_prev);
    std::optional<std::pair<double, double>> bracket;
    for (int i = 1; i <= opt.scan_points; ++i) {
        const double y = c * (opt.y_min + (0.999 - opt.y_min) * i / opt.scan_points);
        double d;
        try {
            d = displacement(y);
        } catch (const NoReturn&) {
            break;
        }
        if ((d > 0) != (d_prev > 0)) {
            bracket = {y_prev, y};
            break;
        }
        y_prev = y;
        d_prev = d;
    }
    if (!bracket) return std::nullopt;
    boost::uintmax_t iters = 200;
    auto root = boost::math::tools::toms748_solve(
        displacement, bracket->first, bracket->second, [&](double a, double b) { return std::abs(b - a) < opt.y_tol; }, iters);
    LimitCycle lc;
    lc.m = m;
    lc.y_star = 0.5 * (root.first + root.second);
    const ReturnResult rr = return_orbit(m, lc.y_star, opt.ret);
    lc.period = rr.period;
    lc.fixed_point_residual = std::abs(rr.y - lc.y_star);
    lc.exponent = divergence_integral(m, lc.y_star, lc.period, opt.ret.tol);
    const double h = 1e-6 * lc.y_star;
    lc.return_slope = (return_map(m, lc.y_star + h, opt.ret) - return_map(m, lc.y_star - h, opt.ret)) / (2 * h);
    lc.orbit = rr.trajectory.sample(2001);
    lc.orbit.pop_back();  // closes onto the first sample
    lc.winding = winding_number(cubic_quintic_field(m), lc.orbit);
    return lc;
}

// ---------------------------------------------------------------------------
// Attraction towards the origin

struct ConvergenceResult {
    bool converged = false;
    double final_norm = 0;
    double t = 0;
};

// Follows the orbit until |state| < radius or the time budget runs out.
inline ConvergenceResult converge_to_origin(double m, const State& x0, double radius, double time_budget, double tol = 1e-9) {
    IntegrateOptions io;
    io.abs_tol = io.rel_tol = tol;
    io.escape_radius = 10 * saddle_coordinate(m);
    io.watch = [radius](double, const State& s) { return std::hypot(s[0], s[1]) >= radius; };
    const Trajectory tr = integrate(cubic_quintic_field(m), x0, 0.0, time_budget, io);
    return {tr.stop == StopReason::Watch, std::hypot(tr.last()[0], tr.last()[1]), tr.t_end()};
}

}  // namespace cyclecert::flow
