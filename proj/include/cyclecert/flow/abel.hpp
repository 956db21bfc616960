#pragma once

// Quasi-homogeneous polar coordinates of weights (1, 2) and the Cherkas
// transform that turns the cubic-quintic system into
//   d rho / d theta = alpha(theta) rho^3 + beta(theta) rho^2.
// Coordinates: y = r Cs(theta), x = r^2 Sn(theta), so r^4 = y^4 + 2 x^2 and
// theta = 0 on the positive y-axis.

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <utility>

#include "../lyap/trigpoly.hpp"
#include "../trig/gentrig.hpp"
#include "dynamics.hpp"

namespace cyclecert::flow {

using lyap::TrigPoly;

struct AbelCoefficients {
    TrigPoly alpha, beta;
};

inline AbelCoefficients abel_coefficients(const Rational& m) {
    const auto t = [](const Rational& c, int i, int j) { return TrigPoly::term(c, i, j, 0, 2); };
    // 3 Cs Sn (2m Cs^4 + Sn^2) (m Cs^8 - Sn^4)
    const TrigPoly alpha = t(3, 1, 1) * (t(2 * m, 4, 0) + t(1, 0, 2)) * (t(m, 8, 0) + t(-1, 0, 4));
    const TrigPoly beta = t(5 * m, 8, 0) + t(-4, 0, 4) + t(3 - 10 * m, 4, 2);
    return {alpha, beta};
}

// Forward-mode dual number, enough to differentiate the transform along the flow.
struct Dual {
    double v = 0, d = 0;
    friend Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
    friend Dual operator-(Dual a, Dual b) { return {a.v - b.v, a.d - b.d}; }
    friend Dual operator*(Dual a, Dual b) { return {a.v * b.v, a.d * b.v + a.v * b.d}; }
    friend Dual operator/(Dual a, Dual b) { return {a.v / b.v, (a.d * b.v - a.v * b.d) / (b.v * b.v)}; }
    friend Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }
};
inline Dual pow_quarter(Dual a) {
    const double r = std::pow(a.v, 0.25);
    return {r, 0.25 * a.d * r / a.v};
}

struct PolarPoint {
    double r = 0, cs = 0, sn = 0;
};

inline PolarPoint to_polar(const State& s) {
    const double r = std::pow(std::pow(s[1], 4) + 2 * s[0] * s[0], 0.25);
    return {r, s[1] / r, s[0] / (r * r)};
}

// rho = r^3 / (1 - r^3 Sn Cs (Sn^2 + 2m Cs^4)), as a function of (x, y).
template <class T>
T cherkas_rho(double m, const T& x, const T& y) {
    const T r = pow_quarter(y * y * y * y + 2.0 * (x * x));
    const T cs = y / r, sn = x / (r * r);
    const T r3 = r * r * r;
    const T D = sn * cs * (sn * sn + (2.0 * m) * (cs * cs * cs * cs));
    return r3 / (T{1, 0} - r3 * D);
}

inline double cherkas_rho_value(double m, const State& s) { return cherkas_rho<Dual>(m, {s[0], 0}, {s[1], 0}).v; }

struct AbelCheck {
    double theta_period = 0;       // total angle swept over one period of the cycle
    double trig_period = 0;        // T of the (1, 2) functions
    double residual = 0;           // sup |rho' - alpha rho^3 - beta rho^2|
    double coordinate_mismatch = 0;  // sup |(Cs, Sn)(theta) - (Cs, Sn) read off the point|
    int samples = 0;
};

// Pushes a located cycle through the transform.  Theta is integrated with the
// orbit, d rho / d theta comes from differentiating rho along the field, and
// alpha, beta are evaluated at the integrated angle.
inline AbelCheck abel_residual(const LimitCycle& lc, int samples = 4000, double tol = 1e-12) {
    namespace ode = boost::numeric::odeint;
    using S3 = std::array<double, 3>;
    const double m = lc.m;
    const auto field = cubic_quintic_field(m);
    auto rhs = [&](const S3& s, S3& d, double) {
        const State v = field({s[0], s[1]});
        const double r = to_polar({s[0], s[1]}).r;
        d[0] = v[0];
        d[1] = v[1];
        d[2] = (s[1] * v[0] - 2 * s[0] * v[1]) / (r * r * r);
    };
    const AbelCoefficients ab = abel_coefficients(Rational(m));
    AbelCheck out;
    out.trig_period = trig::period({1, 2});
    out.samples = samples;
    S3 s{0.0, lc.y_star, 0.0};
    const double h = lc.period / samples;
    auto stepper = ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<S3>());
    for (int k = 0; k <= samples; ++k) {
        if (k > 0) ode::integrate_adaptive(stepper, rhs, s, (k - 1) * h, k * h, h / 4);
        const State v = field({s[0], s[1]});
        const Dual rho = cherkas_rho<Dual>(m, {s[0], v[0]}, {s[1], v[1]});
        const PolarPoint pp = to_polar({s[0], s[1]});
        const double theta_dot = (s[1] * v[0] - 2 * s[0] * v[1]) / (pp.r * pp.r * pp.r);
        const double lhs = rho.d / theta_dot;
        const double a = ab.alpha.eval(s[2]), b = ab.beta.eval(s[2]);
        out.residual = std::max(out.residual, std::abs(lhs - a * rho.v * rho.v * rho.v - b * rho.v * rho.v));
        const trig::TrigValue tv = trig::eval({1, 2}, s[2]);
        out.coordinate_mismatch = std::max({out.coordinate_mismatch, std::abs(tv.cs - pp.cs), std::abs(tv.sn - pp.sn)});
    }
    out.theta_period = s[2];
    return out;
}

}  // namespace cyclecert::flow
