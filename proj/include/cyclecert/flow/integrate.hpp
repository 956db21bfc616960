#pragma once

// Adaptive integration of planar polynomial fields with dense output and
// event location.  Steps come from the Dormand-Prince 5(4) pair; an event
// found on the interpolant is re-integrated with a Fehlberg 7(8) pair from the
// last accepted node, so event ordinates carry the stepping tolerance rather
// than the interpolation error.

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../system.hpp"

namespace cyclecert::flow {

using State = std::array<double, 2>;

// Double-precision evaluator of a PlanarSystem with bound parameters.
// sign = -1 runs the flow backward in time.
struct VectorField {
    CompiledPoly P, Q;
    double sign = 1.0;

    VectorField() = default;
    explicit VectorField(const PlanarSystem& sys) : P(sys.P), Q(sys.Q) {}

    State operator()(const State& s) const { return {sign * P(s[0], s[1]), sign * Q(s[0], s[1])}; }
    void operator()(const State& s, State& ds, double) const { ds = (*this)(s); }
    VectorField reversed() const {
        VectorField out = *this;
        out.sign = -sign;
        return out;
    }
};

// Scalar function whose zeros are events; direction +1 keeps only upward
// crossings, -1 only downward ones, 0 both.
struct EventSpec {
    std::function<double(const State&)> g;
    int direction = 0;
    std::function<bool(const State&)> accept;  // optional extra filter at the event point
    bool terminal = true;
    double skip_before = 0.0;  // ignore events closer than this to the initial time
};

struct Event {
    double t = 0;
    State state{};
    int direction = 0;
};

struct IntegrationStats {
    std::uint64_t steps = 0;
    std::uint64_t event_refinements = 0;
};

struct IntegrateOptions {
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double escape_radius = std::numeric_limits<double>::infinity();
    double min_step = 1e-14;
    std::uint64_t max_steps = 5'000'000;
    std::optional<EventSpec> event;
    // Called at every accepted node; returning false stops the integration.
    std::function<bool(double, const State&)> watch;
};

enum class StopReason { ReachedEnd, Event, Watch };

struct Trajectory {
    std::vector<double> t;
    std::vector<State> x;
    std::vector<State> dx;  // field at each node, for Hermite interpolation
    std::vector<Event> events;
    IntegrationStats stats;
    StopReason stop = StopReason::ReachedEnd;

    double t_end() const { return t.back(); }
    const State& last() const { return x.back(); }

    // Cubic Hermite interpolation between accepted nodes.
    State at(double tq) const {
        if (t.size() == 1) return x.front();
        const bool forward = t.back() >= t.front();
        auto before = [&](double a, double b) { return forward ? a < b : a > b; };
        std::size_t lo = 0, hi = t.size() - 1;
        if (before(tq, t[lo])) tq = t[lo];
        if (before(t[hi], tq)) tq = t[hi];
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            (before(tq, t[mid]) ? hi : lo) = mid;
        }
        const double h = t[hi] - t[lo];
        if (h == 0) return x[lo];
        const double s = (tq - t[lo]) / h, s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s, h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        State out;
        for (int i = 0; i < 2; ++i) out[i] = h00 * x[lo][i] + h10 * h * dx[lo][i] + h01 * x[hi][i] + h11 * h * dx[hi][i];
        return out;
    }

    std::vector<State> sample(std::size_t n) const {
        std::vector<State> out;
        if (n < 2) return {x.front()};
        out.reserve(n);
        for (std::size_t i = 0; i < n; ++i) out.push_back(at(t.front() + (t.back() - t.front()) * i / (n - 1)));
        return out;
    }
};

namespace detail {

inline State rk78_to(const VectorField& f, State s, double t0, double t1, double tol) {
    namespace ode = boost::numeric::odeint;
    if (t0 == t1) return s;
    ode::integrate_adaptive(ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<State>()), f, s, t0, t1,
                            (t1 - t0) / 8);
    return s;
}

inline double norm(const State& s) { return std::hypot(s[0], s[1]); }

}  // namespace detail

// Integrates f from (t0, x0) towards t1 (t1 < t0 integrates backward).
// Throws Blowup once |x| exceeds the escape radius and StepUnderflow when the
// controller cannot make progress.
inline Trajectory integrate(const VectorField& f, const State& x0, double t0, double t1,
                            const IntegrateOptions& opt = {}) {
    namespace ode = boost::numeric::odeint;
    for (double v : x0)
        if (!std::isfinite(v)) throw DomainError("integrate: initial point is not finite");
    Trajectory tr;
    tr.t.push_back(t0);
    tr.x.push_back(x0);
    tr.dx.push_back(f(x0));
    if (t0 == t1) return tr;

    auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol, ode::runge_kutta_dopri5<State>());
    const double dir = t1 > t0 ? 1.0 : -1.0;
    stepper.initialize(x0, t0, dir * std::min(1e-3, std::abs(t1 - t0)));

    const EventSpec* ev = opt.event ? &*opt.event : nullptr;
    double g_prev = ev ? ev->g(x0) : 0.0;

    while (dir * (stepper.current_time() - t1) < 0) {
        if (tr.stats.steps >= opt.max_steps) throw StepUnderflow("integrate: step budget exhausted at t = " + std::to_string(stepper.current_time()));
        const auto [ta, tb] = stepper.do_step(f);
        ++tr.stats.steps;
        if (std::abs(tb - ta) < opt.min_step) throw StepUnderflow("integrate: step size fell below " + std::to_string(opt.min_step));
        double t_new = tb;
        State s_new = stepper.current_state();
        if (dir * (t_new - t1) > 0) {
            t_new = t1;
            stepper.calc_state(t1, s_new);
        }
        for (double v : s_new)
            if (!std::isfinite(v)) throw Blowup("integrate: state is no longer finite");
        if (detail::norm(s_new) > opt.escape_radius)
            throw Blowup("integrate: |x| exceeded the escape radius " + std::to_string(opt.escape_radius) + " at t = " +
                         std::to_string(t_new));

        if (ev) {
            const double g_new = ev->g(s_new);
            const bool up = g_prev < 0 && g_new >= 0, down = g_prev > 0 && g_new <= 0;
            const bool wanted = (ev->direction >= 0 && up) || (ev->direction <= 0 && down);
            if (wanted && dir * (ta - tr.t.front()) >= ev->skip_before - 1e-300) {
                auto on_interp = [&](double tq) {
                    State s;
                    stepper.calc_state(tq, s);
                    return ev->g(s);
                };
                boost::uintmax_t iters = 100;
                const double lo = std::min(ta, t_new), hi = std::max(ta, t_new);
                auto bracket = boost::math::tools::toms748_solve(
                    on_interp, lo, hi, [](double a, double b) { return std::abs(b - a) < 1e-15 * (1 + std::abs(a)); }, iters);
                double te = 0.5 * (bracket.first + bracket.second);
                // Re-integrate accurately from the last node, then one Newton
                // correction along the field.
                const double tol = std::min(opt.abs_tol, opt.rel_tol) * 1e-1;
                State se = detail::rk78_to(f, tr.x.back(), tr.t.back(), te, tol);
                for (int k = 0; k < 2; ++k) {
                    const State v = f(se);
                    const double h = 1e-7;
                    const double dg = (ev->g({se[0] + h * v[0], se[1] + h * v[1]}) - ev->g({se[0] - h * v[0], se[1] - h * v[1]})) / (2 * h);
                    if (dg == 0) break;
                    const double dt = -ev->g(se) / dg;
                    se = detail::rk78_to(f, se, te, te + dt, tol);
                    te += dt;
                }
                ++tr.stats.event_refinements;
                if (!ev->accept || ev->accept(se)) {
                    tr.events.push_back({te, se, up ? 1 : -1});
                    if (ev->terminal) {
                        tr.t.push_back(te);
                        tr.x.push_back(se);
                        tr.dx.push_back(f(se));
                        tr.stop = StopReason::Event;
                        return tr;
                    }
                }
            }
            g_prev = g_new;
        }

        tr.t.push_back(t_new);
        tr.x.push_back(s_new);
        tr.dx.push_back(f(s_new));
        if (opt.watch && !opt.watch(t_new, s_new)) {
            tr.stop = StopReason::Watch;
            return tr;
        }
    }
    return tr;
}

inline double signed_area(const std::vector<State>& poly) {
    double a = 0;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) a += poly[j][0] * poly[i][1] - poly[i][0] * poly[j][1];
    return a / 2;
}

// Index of the field along a closed polyline (last point joins the first),
// taken with counterclockwise orientation whatever order the points come in.
inline int winding_number(const VectorField& f, std::vector<State> loop) {
    if (signed_area(loop) < 0) std::reverse(loop.begin(), loop.end());
    double total = 0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const State a = f(loop[i]), b = f(loop[(i + 1) % loop.size()]);
        total += std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
    }
    return static_cast<int>(std::lround(total / (2 * M_PI)));
}

// Even-odd rule.
inline bool point_in_polygon(const State& p, const std::vector<State>& poly) {
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const State &a = poly[i], &b = poly[j];
        if ((a[1] > p[1]) != (b[1] > p[1]) && p[0] < (b[0] - a[0]) * (p[1] - a[1]) / (b[1] - a[1]) + a[0]) inside = !inside;
    }
    return inside;
}

}  // namespace cyclecert::flow
