#pragma once

// Stability of the nilpotent origin of  x' = y^3 - x^(2k+1),  y' = -x + m y^(2s+1).
// After swapping x and y the system reads x' = -y + m x^(2s+1), y' = x^3 - y^(2k+1),
// and in (1, 2) polar coordinates x = r Cs(θ), y = r^2 Sn(θ):
//
//   dr/dθ = (m Cs^(2s+4) r^(2s) - Sn^(2k+2) r^(4k))
//           / (1 - Cs Sn^(2k+1) r^(4k-1) - 2m Cs^(2s+1) Sn r^(2s-1)).

#include <boost/multiprecision/cpp_bin_float.hpp>
#include "../odeint_mp.hpp"

#include <optional>
#include <string>
#include <vector>

#include "trigpoly.hpp"

namespace cyclecert::lyap {

struct FamilyParams {
    Rational m;
    int k = 1;
    int s = 2;
};

inline void check_params(const FamilyParams& P) {
    if (P.k < 1 || P.s < 1) throw NonPositiveParameter("k and s must be positive integers");
}

inline std::string describe(const FamilyParams& P) {
    return "m=" + P.m.get_str() + " k=" + std::to_string(P.k) + " s=" + std::to_string(P.s);
}

// R_0, ..., R_order of the Taylor expansion of dr/dθ in r.  Terms are left
// unreduced so that they read as in the displayed expansions.
inline std::vector<TrigPoly> polar_rhs(const FamilyParams& P, int order) {
    check_params(P);
    if (order < 2 * P.s || order < 4 * P.k)
        throw OrderTooSmall("polar_rhs needs order >= max(2s, 4k) = " + std::to_string(std::max(2 * P.s, 4 * P.k)));
    using Series = std::vector<TrigPoly>;
    auto mul = [order](const Series& a, const Series& b) {
        Series out(static_cast<std::size_t>(order + 1));
        for (int i = 0; i <= order; ++i) {
            if (a[i].zero()) continue;
            for (int j = 0; i + j <= order; ++j)
                if (!b[j].zero()) out[i + j] += a[i] * b[j];
        }
        return out;
    };
    Series num(static_cast<std::size_t>(order + 1)), den(static_cast<std::size_t>(order + 1));
    num[2 * P.s] += TrigPoly::term(P.m, 2 * P.s + 4, 0);
    num[4 * P.k] += TrigPoly::term(-1, 0, 2 * P.k + 2);
    // D(r) with 1/(1 - D) = sum D^n
    den[4 * P.k - 1] += TrigPoly::term(1, 1, 2 * P.k + 1);
    den[2 * P.s - 1] += TrigPoly::term(2 * P.m, 2 * P.s + 1, 1);
    Series out = num, term = num;
    for (;;) {
        term = mul(term, den);
        bool any = false;
        for (int i = 0; i <= order; ++i)
            if (!term[i].zero()) {
                out[i] += term[i];
                any = true;
            }
        if (!any) break;
    }
    return out;
}

enum class Stability { Attractor, Repeller, Undetermined };

inline std::string to_string(Stability s) {
    switch (s) {
        case Stability::Attractor: return "attractor";
        case Stability::Repeller: return "repeller";
        case Stability::Undetermined: return "undetermined";
    }
    return "?";
}

struct LyapunovConstant {
    int index = 0;
    trig::MomentForm exact;
    double value = 0;

    std::string descriptor() const {
        if (exact.zero()) return "0";
        std::string legend;
        for (const auto& [r, c] : exact.coeff) {
            legend += "; B" + std::to_string(r) + " = int_0^T Cs^" + std::to_string(r) + " = " + trig::moment({1, exact.q}, 0, r).descriptor();
        }
        return exact.str() + legend;
    }
};

struct LyapunovReport {
    FamilyParams params;
    std::vector<LyapunovConstant> constants;  // indices 2, 3, ...
    int first_nonzero = 0;                    // 0 when every computed constant vanishes
    Stability verdict = Stability::Undetermined;
    std::vector<TrigPoly> u;  // u[1] = 1, u[i] for i < first_nonzero (or up to the last index)

    std::string to_text() const {
        std::ostringstream os;
        os << "parameters: " << describe(params) << "\n";
        for (const auto& c : constants) os << "V" << c.index << ": " << c.descriptor() << " ~ " << c.value << "\n";
        os << "first_nonzero: " << (first_nonzero ? "V" + std::to_string(first_nonzero) : std::string("none")) << "\n";
        os << "verdict: " << to_string(verdict) << "\n";
        return os.str();
    }
};

// Coefficient of rho^n in (sum_j u_j rho^j)^i, ignoring u_j with j >= n.
inline TrigPoly power_coefficient(const std::vector<TrigPoly>& u, int i, int n) {
    // power series of r truncated at rho^n, raised to the i-th power
    std::vector<TrigPoly> r(static_cast<std::size_t>(n + 1)), acc(static_cast<std::size_t>(n + 1));
    for (int j = 1; j < n && j < static_cast<int>(u.size()); ++j) r[j] = u[j];
    acc[0] = TrigPoly::constant(1);
    for (int e = 0; e < i; ++e) {
        std::vector<TrigPoly> next(static_cast<std::size_t>(n + 1));
        for (int a = 0; a <= n; ++a) {
            if (acc[a].zero()) continue;
            for (int b = 1; a + b <= n; ++b)
                if (!r[b].zero()) next[a + b] += acc[a] * r[b];
        }
        acc = std::move(next);
    }
    return acc[n];
}

// u_n(θ) = int_0^θ sum_i R_i [rho^n](r^i), and V_n = u_n(T).  Stops at the first
// constant that is not exactly zero.
inline LyapunovReport lyapunov_constants(const FamilyParams& P, int upto) {
    check_params(P);
    const int first_candidate = std::min(2 * P.s, 4 * P.k);
    if (upto < first_candidate) throw OrderTooSmall("upto must be at least " + std::to_string(first_candidate));
    auto R = polar_rhs(P, std::max({upto, 2 * P.s, 4 * P.k}));
    for (auto& Ri : R) Ri = Ri.canonical();
    LyapunovReport rep;
    rep.params = P;
    rep.u.assign(2, TrigPoly());
    rep.u[1] = TrigPoly::constant(1);
    for (int n = 2; n <= upto; ++n) {
        TrigPoly g;
        for (int i = 2; i <= n; ++i)
            if (!R[i].zero()) g += R[i] * power_coefficient(rep.u, i, n);
        g = g.canonical();
        LyapunovConstant c;
        c.index = n;
        c.exact = period_integral(g);
        c.value = static_cast<double>(c.exact.value());
        rep.constants.push_back(c);
        if (!c.exact.zero()) {
            rep.first_nonzero = n;
            rep.verdict = c.value > 0 ? Stability::Repeller : Stability::Attractor;
            rep.u.push_back(TrigPoly());  // u_n carries a secular term; not needed further
            break;
        }
        rep.u.push_back(primitive(g));
    }
    return rep;
}

// V10 at (k, s) = (1, 2) through the integration-by-parts shortcut
// V10 = int_0^T (R10 + 3 u4 R7), valid when V4 = 0 (so u4 is periodic).
inline trig::MomentForm v10_by_parts(const Rational& m) {
    FamilyParams P{m, 1, 2};
    auto R = polar_rhs(P, 10);
    TrigPoly u4 = primitive(R[4]);
    if (!period_integral(R[4]).zero()) throw DomainError("the shortcut needs V4 = 0, i.e. m = 3/5");
    return period_integral(R[10] + u4 * R[7].scaled(3));
}

// (2k+1)!!/(4k+1)!!!! with n!! = n (n-2)!! and n!!!! = n (n-4)!!!!
inline Rational threshold_m(int k) {
    if (k < 1) throw NonPositiveParameter("k must be positive");
    auto multifactorial = [](int n, int step) {
        Integer acc = 1;
        for (; n > 0; n -= step) acc *= n;
        return acc;
    };
    return make_rational(multifactorial(2 * k + 1, 2), multifactorial(4 * k + 1, 4));
}

inline Stability classify_origin(const FamilyParams& P) {
    check_params(P);
    if (P.s < 2 * P.k) {
        if (is_zero(P.m)) return Stability::Undetermined;
        return sgn(P.m) < 0 ? Stability::Attractor : Stability::Repeller;
    }
    if (P.s > 2 * P.k) return Stability::Attractor;
    const int c = cmp(P.m, threshold_m(P.k));
    if (c < 0) return Stability::Attractor;
    if (c > 0) return Stability::Repeller;
    if (P.k == 1) return lyapunov_constants(P, 10).verdict;
    return Stability::Undetermined;
}

// ---------------------------------------------------------------------------
// Direct integration of dr/dθ over one turn, as a check on the series.

using Real50 = boost::multiprecision::cpp_bin_float_50;

template <class Real>
Real ipow(const Real& x, int e) {
    Real acc = 1;
    for (int i = 0; i < e; ++i) acc *= x;
    return acc;
}

// r(T) - rho0 for the orbit through (rho0, θ = 0), integrated in 50-digit
// arithmetic so that displacements of order rho0^10 are resolved.
inline Real50 return_map_displacement50(const FamilyParams& P, const Real50& rho0) {
    check_params(P);
    namespace ode = boost::numeric::odeint;
    using S = std::array<Real50, 3>;  // Cs, Sn, r
    const Real50 m = trig::to_real50(P.m);
    bool lost_monodromy = false;
    auto rhs = [&](const S& x, S& dx, const Real50&) {
        const Real50 &C = x[0], &Sn = x[1], &r = x[2];
        dx[0] = -Sn;
        dx[1] = C * C * C;
        Real50 num = m * ipow(C, 2 * P.s + 4) * ipow(r, 2 * P.s) - ipow(Sn, 2 * P.k + 2) * ipow(r, 4 * P.k);
        Real50 den = 1 - C * ipow(Sn, 2 * P.k + 1) * ipow(r, 4 * P.k - 1) - 2 * m * ipow(C, 2 * P.s + 1) * Sn * ipow(r, 2 * P.s - 1);
        if (den <= 0) lost_monodromy = true;
        dx[2] = num / den;
    };
    S x{Real50(1), Real50(0), rho0};
    const Real50 T = trig::period50({1, 2});
    const Real50 tol("1e-28");
    ode::integrate_adaptive(ode::make_controlled(tol, tol, ode::runge_kutta_fehlberg78<S, Real50>()), rhs, x, Real50(0), T, T / 256);
    if (lost_monodromy) throw NoReturn("the angular velocity vanishes along the orbit through rho0 = " + rho0.str(6));
    return x[2] - rho0;
}

inline double return_map_displacement(const FamilyParams& P, double rho0) {
    return static_cast<double>(return_map_displacement50(P, Real50(rho0)));
}

}  // namespace cyclecert::lyap
