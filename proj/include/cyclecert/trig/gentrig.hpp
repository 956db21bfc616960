#pragma once

// Generalized trigonometric functions Cs, Sn of weights (p, q): the solution
// of u' = -v^(2p-1), v' = u^(2q-1) with u(0) = (1/p)^(1/2q), v(0) = 0, which
// runs along the level curve p u^(2q) + q v^(2p) = 1.

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "../errors.hpp"
#include "../poly/rational.hpp"

namespace cyclecert::trig {

using Real50 = boost::multiprecision::cpp_bin_float_50;

struct TrigParams {
    int p = 1;
    int q = 2;
    auto operator<=>(const TrigParams&) const = default;
};

struct TrigValue {
    double cs = 0;
    double sn = 0;
    double theta = 0;
};

inline void check_params(const TrigParams& P) {
    if (P.p < 1 || P.q < 1) throw NonPositiveParameter("trigonometric weights must be positive integers");
}

inline Real50 period50(const TrigParams& P) {
    check_params(P);
    using boost::math::tgamma;
    const Real50 a = Real50(1) / (2 * P.p), b = Real50(1) / (2 * P.q);
    return 2 * pow(Real50(P.p), -b) * pow(Real50(P.q), -a) * tgamma(a) * tgamma(b) / tgamma(a + b);
}

inline double period(const TrigParams& P) { return static_cast<double>(period50(P)); }

// p u^(2q) + q v^(2p) - 1
inline double energy_defect(const TrigParams& P, double cs, double sn) {
    return P.p * std::pow(cs, 2 * P.q) + P.q * std::pow(sn, 2 * P.p) - 1.0;
}

namespace detail {

using State = std::array<double, 2>;

// Two Newton steps along the gradient of the energy.
inline void project(const TrigParams& P, State& s) {
    for (int it = 0; it < 2; ++it) {
        double g = energy_defect(P, s[0], s[1]);
        double gu = 2.0 * P.p * P.q * std::pow(s[0], 2 * P.q - 1);
        double gv = 2.0 * P.p * P.q * std::pow(s[1], 2 * P.p - 1);
        double n2 = gu * gu + gv * gv;
        if (n2 == 0) return;
        s[0] -= g * gu / n2;
        s[1] -= g * gv / n2;
    }
}

inline constexpr double kStepTolerance = 1e-15;

// Integrates from t0 to t1 with an embedded Runge-Kutta-Fehlberg 7(8) pair,
// projecting onto the level curve after every accepted step.
inline State advance(const TrigParams& P, State s, double t0, double t1) {
    namespace ode = boost::numeric::odeint;
    auto rhs = [&P](const State& x, State& dx, double) {
        dx[0] = -std::pow(x[1], 2 * P.p - 1);
        dx[1] = std::pow(x[0], 2 * P.q - 1);
    };
    auto stepper = ode::make_controlled(kStepTolerance, kStepTolerance, ode::runge_kutta_fehlberg78<State>());
    double t = t0;
    double dt = (t1 - t0) / 4;
    int rejected = 0;
    while ((t1 - t) * (t1 - t0) > 0) {
        if ((t + dt - t1) * (t1 - t0) > 0) dt = t1 - t;
        if (stepper.try_step(rhs, s, t, dt) == ode::success) {
            project(P, s);
            rejected = 0;
        } else if (++rejected > 200) {
            throw ToleranceNotMet("generalized trigonometric integration stalled");
        }
    }
    return s;
}

// Nodes at theta = k T / N, shared per (p, q).
struct NodeTable {
    double period;
    std::vector<State> nodes;
};

inline constexpr int kTableNodes = 512;

inline const NodeTable& node_table(const TrigParams& P) {
    static std::shared_mutex mu;
    static std::map<TrigParams, std::unique_ptr<NodeTable>> cache;
    {
        std::shared_lock lock(mu);
        auto it = cache.find(P);
        if (it != cache.end()) return *it->second;
    }
    auto table = std::make_unique<NodeTable>();
    table->period = period(P);
    State s{std::pow(1.0 / P.p, 1.0 / (2 * P.q)), 0.0};
    const double h = table->period / kTableNodes;
    table->nodes.push_back(s);
    for (int k = 1; k <= kTableNodes; ++k) {
        s = advance(P, s, (k - 1) * h, k * h);
        table->nodes.push_back(s);
    }
    std::unique_lock lock(mu);
    auto [it, inserted] = cache.emplace(P, std::move(table));
    return *it->second;
}

}  // namespace detail

inline TrigValue eval(const TrigParams& P, double theta) {
    check_params(P);
    if (!std::isfinite(theta)) throw DomainError("theta must be finite");
    const auto& table = detail::node_table(P);
    const double T = table.period;
    double phase = std::fmod(theta, T);
    if (phase < 0) phase += T;
    const double h = T / detail::kTableNodes;
    long k = std::lround(phase / h);
    detail::State s = table.nodes[static_cast<std::size_t>(k)];
    if (double from = k * h; phase != from) s = detail::advance(P, s, from, phase);
    return {s[0], s[1], theta};
}

// ---------------------------------------------------------------------------
// Moments over one period (p = 1).

struct Moment {
    int i = 0, j = 0, q = 2;
    bool vanishes = false;  // structural zero: i or j odd
    // 2 Gamma(a) Gamma(b) / (q^a Gamma(a + b)) with a = (i+1)/2, b = (j+1)/(2q)
    Rational a, b;
    Real50 value = 0;

    std::string descriptor() const {
        if (vanishes) return "0";
        std::ostringstream os;
        os << "2*Gamma(" << a.get_str() << ")*Gamma(" << b.get_str() << ")/(" << q << "^(" << a.get_str() << ")*Gamma("
           << Rational(a + b).get_str() << "))";
        return os.str();
    }
};

inline Real50 to_real50(const Rational& r) { return Real50(r.get_num().get_str()) / Real50(r.get_den().get_str()); }

inline Moment moment(const TrigParams& P, int i, int j) {
    check_params(P);
    if (P.p != 1) throw OutOfScope("closed-form moments are available for p = 1 only");
    if (i < 0 || j < 0) throw DomainError("moment exponents must be nonnegative");
    static std::shared_mutex mu;
    static std::map<std::array<int, 3>, Moment> memo;
    const std::array<int, 3> key{P.q, i, j};
    {
        std::shared_lock lock(mu);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
    }
    Moment m;
    m.i = i;
    m.j = j;
    m.q = P.q;
    if (i % 2 == 1 || j % 2 == 1) {
        m.vanishes = true;
    } else {
        using boost::math::tgamma;
        m.a = make_rational(i + 1, 2);
        m.b = make_rational(j + 1, 2 * P.q);
        const Real50 a = to_real50(m.a), b = to_real50(m.b);
        m.value = 2 * tgamma(a) * tgamma(b) / (pow(Real50(P.q), a) * tgamma(a + b));
    }
    std::unique_lock lock(mu);
    memo.emplace(key, m);
    return m;
}

// Exact rational combination of the base moments B_r = int_0^T Cs^r,
// r = 0, 2, ..., 2q - 2 (p = 1).  Every even-even moment reduces to this
// basis through Sn^2 = (1 - Cs^(2q))/q and the period integration by parts
// in cs_power_in_basis.
struct MomentForm {
    int q = 2;
    std::map<int, Rational> coeff;  // r -> rational multiple of B_r

    MomentForm& operator+=(const MomentForm& o) {
        for (const auto& [r, c] : o.coeff) {
            coeff[r] += c;
            if (is_zero(coeff[r])) coeff.erase(r);
        }
        return *this;
    }
    MomentForm scaled(const Rational& s) const {
        MomentForm out{q, {}};
        if (is_zero(s)) return out;
        for (const auto& [r, c] : coeff) out.coeff[r] = c * s;
        return out;
    }
    bool zero() const { return coeff.empty(); }
    Real50 value() const {
        Real50 acc = 0;
        for (const auto& [r, c] : coeff) acc += to_real50(c) * moment({1, q}, 0, r).value;
        return acc;
    }
    std::string str() const {
        if (zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [r, c] : coeff) {
            if (!first) os << (sgn(c) < 0 ? " - " : " + ");
            else if (sgn(c) < 0) os << "-";
            first = false;
            os << Rational(abs(c)).get_str() << "*B" << r;
        }
        return os.str();
    }
};

// int_0^T Cs^j for even j.  From d/dθ(Sn Cs^c) = (1 + c/q) Cs^(c+2q-1) - (c/q) Cs^(c-1)
// with c = j - 2q + 1: int Cs^j = c/(q + c) int Cs^(j-2q).
inline MomentForm cs_power_in_basis(int q, int j) {
    if (j % 2 != 0) return MomentForm{q, {}};
    Rational factor = 1;
    while (j >= 2 * q) {
        const int c = j - 2 * q + 1;
        factor *= make_rational(c, q + c);
        j -= 2 * q;
    }
    return MomentForm{q, {{j, factor}}};
}

// int_0^T Sn^i Cs^j for p = 1 as a MomentForm; zero for odd i or j.
inline MomentForm moment_in_basis(int q, int i, int j) {
    MomentForm out{q, {}};
    if (i % 2 != 0 || j % 2 != 0) return out;
    // Sn^i = ((1 - Cs^(2q))/q)^(i/2), expanded binomially
    const int h = i / 2;
    Integer binom = 1;
    for (int t = 0; t <= h; ++t) {
        Rational c = Rational(binom) / rpow(Rational(q), h);
        if (t % 2 == 1) c = -c;
        out += cs_power_in_basis(q, j + 2 * q * t).scaled(c);
        binom = binom * (h - t) / (t + 1);
    }
    return out;
}

// Period integral of Sn^i Cs^j by integrating the augmented system
// (Cs, Sn, accumulated integral) over one period.  Works for any (p, q).
inline double moment_quadrature(const TrigParams& P, int i, int j) {
    check_params(P);
    namespace ode = boost::numeric::odeint;
    using S3 = std::array<double, 3>;
    auto rhs = [&](const S3& x, S3& dx, double) {
        dx[0] = -std::pow(x[1], 2 * P.p - 1);
        dx[1] = std::pow(x[0], 2 * P.q - 1);
        dx[2] = std::pow(x[1], i) * std::pow(x[0], j);
    };
    S3 x{std::pow(1.0 / P.p, 1.0 / (2 * P.q)), 0.0, 0.0};
    const double T = period(P);
    ode::integrate_adaptive(ode::make_controlled(1e-14, 1e-14, ode::runge_kutta_fehlberg78<S3>()), rhs, x, 0.0, T, T / 64);
    return x[2];
}

// ---------------------------------------------------------------------------
// Closed-form antiderivatives for q = 2 (integrals from 0 to theta).

enum class Antiderivative { Cs8, Sn4 };

inline double antiderivative_q2(Antiderivative kind, double theta) {
    const TrigValue v = eval({1, 2}, theta);
    const double c = v.cs, s = v.sn;
    switch (kind) {
        case Antiderivative::Cs8:
            return (6 * s * std::pow(c, 5) + 10 * s * c + 5 * theta) / 21;
        case Antiderivative::Sn4:
            return (-s * s * s * c - s * c + theta) / 7;
    }
    return 0;
}

}  // namespace cyclecert::trig
