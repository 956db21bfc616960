#pragma once

// Exact algebra around the flow: the two charts at infinity of the
// cubic-quintic system, and the invariance test for the algebraic polycycle
// H_m = y^2 - (x^2 + m - 2)^2 = 0 of the two-saddle family.

#include <cmath>
#include <string>
#include <vector>

#include "../errors.hpp"
#include "../poly/resultant.hpp"
#include "../system.hpp"
#include "integrate.hpp"

namespace cyclecert::flow {

// ---------------------------------------------------------------------------
// Infinity

// (x, y) = (v/z, 1/z) with v in slot X and z in slot Y, time rescaled by z^4.
inline PlanarSystem chart_vz(const PlanarSystem& sys) {
    const MPoly v = MPoly::var(X), z = MPoly::var(Y);
    const MPoly zinv = MPoly::var(Y, -1);
    auto to_chart = [&](const MPoly& F) { return F.subs(Y, zinv).subs(X, v * zinv); };
    const MPoly P = to_chart(sys.P), Q = to_chart(sys.Q);
    const MPoly z4 = MPoly::var(Y, 4);
    PlanarSystem out{z4 * (z * P - v * z * Q), z4 * (-(z * z) * Q), "chart (x, y) = (v/z, 1/z)"};
    if (!out.P.is_polynomial() || !out.Q.is_polynomial()) throw DomainError("chart_vz: z^4 does not clear the denominators");
    return out;
}

// (x, y) = (1/z, u/z) with u in slot X and z in slot Y, time rescaled by z^4.
inline PlanarSystem chart_uz(const PlanarSystem& sys) {
    const MPoly u = MPoly::var(X), z = MPoly::var(Y);
    const MPoly tinv = MPoly::var(T, -1);
    auto to_chart = [&](const MPoly& F) { return F.subs(X, tinv).subs(Y, u * tinv).subs(T, z); };
    const MPoly P = to_chart(sys.P), Q = to_chart(sys.Q);
    const MPoly z4 = MPoly::var(Y, 4);
    PlanarSystem out{z4 * (z * Q - u * z * P), z4 * (-(z * z) * P), "chart (x, y) = (1/z, u/z)"};
    if (!out.P.is_polynomial() || !out.Q.is_polynomial()) throw DomainError("chart_uz: z^4 does not clear the denominators");
    return out;
}

enum class OriginType { AttractingNode, Repeller, Other };

inline std::string to_string(OriginType t) {
    switch (t) {
        case OriginType::AttractingNode: return "attracting node";
        case OriginType::Repeller: return "repeller";
        case OriginType::Other: return "not classified";
    }
    return "?";
}

struct RaySample {
    double angle = 0;
    bool reached = false;
    double final_norm = 0;
    double tau = 0;
};

struct InfinityCharts {
    PlanarSystem vz, uz;
    std::array<Rational, 4> vz_jacobian{};  // at the origin
    OriginType vz_origin = OriginType::Other;
    OriginType uz_origin = OriginType::Other;
    std::vector<RaySample> uz_rays;
};

// The uz origin is degenerate (zero linear part).  It is classified by
// starting on `rays` points of a small circle and following them backward in
// time: a repeller pulls every one of them in.
inline InfinityCharts infinity_charts(const Rational& m, int rays = 16, double r0 = 0.05) {
    if (sgn(m) <= 0) throw NonPositiveParameter("infinity_charts needs m > 0");
    const PlanarSystem sys = cubic_quintic(m);
    InfinityCharts out;
    out.vz = chart_vz(sys);
    out.uz = chart_uz(sys);
    out.vz_jacobian = out.vz.jacobian(0, 0);
    const auto& J = out.vz_jacobian;
    const Rational tr = J[0] + J[3], det = J[0] * J[3] - J[1] * J[2], disc = tr * tr - 4 * det;
    if (sgn(det) > 0 && sgn(tr) < 0 && sgn(disc) >= 0) out.vz_origin = OriginType::AttractingNode;

    const VectorField back = VectorField(out.uz).reversed();
    bool all = true;
    for (int k = 0; k < rays; ++k) {
        const double a = 2 * M_PI * (k + 0.5) / rays;
        IntegrateOptions io;
        io.escape_radius = 1.0;
        io.watch = [r0](double, const State& s) { return std::hypot(s[0], s[1]) >= r0 / 4; };
        RaySample rs;
        rs.angle = a;
        try {
            const Trajectory tr_ = integrate(back, {r0 * std::cos(a), r0 * std::sin(a)}, 0.0, 1e12, io);
            rs.reached = tr_.stop == StopReason::Watch;
            rs.final_norm = std::hypot(tr_.last()[0], tr_.last()[1]);
            rs.tau = tr_.t_end();
        } catch (const Blowup&) {
            rs.reached = false;
            rs.final_norm = INFINITY;
        }
        all = all && rs.reached;
        out.uz_rays.push_back(rs);
    }
    out.uz_origin = all ? OriginType::Repeller : OriginType::Other;
    return out;
}

// ---------------------------------------------------------------------------
// Algebraic polycycle of the two-saddle family

inline MPoly polycycle_curve(const MPoly& m) {
    const MPoly x = MPoly::var(X), y = MPoly::var(Y);
    const MPoly inner = x * x + m - MPoly(2);
    return y * y - inner * inner;
}

struct PolycycleCheck {
    MPoly W;          // derivative of H along the field
    MPoly resultant;  // Res(W, H, x)
    bool invariant = false;
};

// Parameter-free version: m stays symbolic in slot M.  The resultant is
// returned in factored form y^a m^b (1 - m)^c * cofactor.
struct PolycycleFactorization {
    MPoly resultant;
    int y_power = 0, m_power = 0, one_minus_m_power = 0;
    MPoly cofactor;
};

namespace detail {

inline int min_degree_after(const MPoly& p, int var, const MPoly& shift) { return p.subs(var, shift).min_degree(var); }

}  // namespace detail

inline PolycycleFactorization polycycle_resultant() {
    const MPoly m = MPoly::var(M);
    const PlanarSystem sys = polycycle_example_system(m);
    const MPoly H = polycycle_curve(m);
    PolycycleFactorization f;
    f.resultant = resultant(sys.lie(H), H, X);
    if (f.resultant.zero()) throw ZeroPolynomial("the resultant vanishes for every m");
    f.y_power = f.resultant.min_degree(Y);
    f.m_power = f.resultant.min_degree(M);
    f.one_minus_m_power = detail::min_degree_after(f.resultant, M, MPoly(1) - m);
    // cofactor, one y-coefficient at a time
    const UniPoly mfactor = UniPoly(std::vector<Rational>{0, 1}).pow(static_cast<unsigned>(f.m_power)) *
                            UniPoly(std::vector<Rational>{1, -1}).pow(static_cast<unsigned>(f.one_minus_m_power));
    for (int k = f.y_power; k <= f.resultant.degree(Y); ++k) {
        const MPoly ck = f.resultant.coeff_of(Y, k);
        if (ck.zero()) continue;
        const UniPoly q = exact_div(ck.to_uni(M), mfactor);
        f.cofactor += MPoly::from_uni(q, M) * MPoly::var(Y, k - f.y_power);
    }
    return f;
}

inline PolycycleCheck algebraic_polycycle_check(const Rational& m) {
    const PlanarSystem sys = polycycle_example_system(MPoly(m));
    const MPoly H = polycycle_curve(MPoly(m));
    PolycycleCheck c;
    c.W = sys.lie(H);
    c.resultant = resultant(c.W, H, X);
    c.invariant = c.resultant.zero();
    return c;
}

}  // namespace cyclecert::flow
