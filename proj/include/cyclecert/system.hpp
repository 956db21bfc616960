#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "poly/mpoly.hpp"

namespace cyclecert {

// Polynomial vector field x' = P, y' = Q.  Parameters are either substituted
// (rational coefficients) or kept as the slots N, S, M of the polynomials.
struct PlanarSystem {
    MPoly P, Q;
    std::string name;

    MPoly divergence() const { return P.diff(X) + Q.diff(Y); }
    // Derivative of F along the flow.
    MPoly lie(const MPoly& F) const { return F.diff(X) * P + F.diff(Y) * Q; }

    PlanarSystem bind(int slot, const Rational& value) const {
        return {P.eval_at(slot, value), Q.eval_at(slot, value), name};
    }
    PlanarSystem subs(int slot, const MPoly& value) const { return {P.subs(slot, value), Q.subs(slot, value), name}; }

    std::array<Rational, 2> eval(const Rational& x, const Rational& y) const {
        std::array<Rational, kMaxVars> pt{};
        pt[X] = x;
        pt[Y] = y;
        return {P.eval(pt), Q.eval(pt)};
    }
    // Jacobian rows (dP/dx, dP/dy), (dQ/dx, dQ/dy) at a rational point.
    std::array<Rational, 4> jacobian(const Rational& x, const Rational& y) const {
        std::array<Rational, kMaxVars> pt{};
        pt[X] = x;
        pt[Y] = y;
        return {P.diff(X).eval(pt), P.diff(Y).eval(pt), Q.diff(X).eval(pt), Q.diff(Y).eval(pt)};
    }
};

// x' = y^3 - x^(2k+1),  y' = -x + m y^(2s+1).
inline PlanarSystem family_system(const MPoly& m, int k = 1, int s = 2) {
    PlanarSystem sys;
    sys.P = MPoly::var(Y, 3) - MPoly::var(X, 2 * k + 1);
    sys.Q = -MPoly::var(X) + m * MPoly::var(Y, 2 * s + 1);
    sys.name = "x' = y^3 - x^" + std::to_string(2 * k + 1) + ", y' = -x + (" + m.str() + ") y^" + std::to_string(2 * s + 1);
    return sys;
}

inline PlanarSystem cubic_quintic(const MPoly& m) { return family_system(m, 1, 2); }
inline PlanarSystem cubic_quintic(const Rational& m) { return family_system(MPoly(m), 1, 2); }

// The two-saddle family used to exhibit algebraic polycycles:
//   x' = -2y + (3m-4)x + (4-2m)x^3 + xy^2 - x^5,  y' = (4-m)x + xy^2 - 2m x^3 - x^5.
inline PlanarSystem polycycle_example_system(const MPoly& m) {
    const MPoly x = MPoly::var(X), y = MPoly::var(Y);
    PlanarSystem sys;
    sys.P = MPoly(-2) * y + (m * MPoly(3) - MPoly(4)) * x + (MPoly(4) - m * MPoly(2)) * x.pow(3) + x * y * y - x.pow(5);
    sys.Q = (MPoly(4) - m) * x + x * y * y - m * MPoly(2) * x.pow(3) - x.pow(5);
    sys.name = "two-saddle polycycle example";
    return sys;
}

// Dense double-precision evaluator for the numerical integrators: the sparse
// map representation is far too slow inside a stepping loop.
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const MPoly& p) {
        for (const auto& [m, c] : p.terms()) {
            for (int v = 2; v < kMaxVars; ++v)
                if (m[static_cast<std::size_t>(v)] != 0) throw DomainError("CompiledPoly: unbound parameter in " + p.str());
            if (m[X] < 0 || m[Y] < 0) throw DomainError("CompiledPoly: negative exponent");
            terms_.push_back({c.get_d(), m[X], m[Y]});
            max_x_ = std::max(max_x_, m[X]);
            max_y_ = std::max(max_y_, m[Y]);
        }
    }
    template <class T>
    T operator()(const T& x, const T& y) const {
        std::array<T, 16> px, py;
        if (max_x_ >= 16 || max_y_ >= 16) return slow(x, y);
        px[0] = T(1);
        py[0] = T(1);
        for (int i = 1; i <= max_x_; ++i) px[i] = px[i - 1] * x;
        for (int i = 1; i <= max_y_; ++i) py[i] = py[i - 1] * y;
        T acc = T(0);
        for (const auto& t : terms_) acc += T(t.c) * px[t.ex] * py[t.ey];
        return acc;
    }

private:
    struct Term {
        double c;
        int ex, ey;
    };
    template <class T>
    T slow(const T& x, const T& y) const {
        T acc = T(0);
        for (const auto& t : terms_) {
            T v = T(t.c);
            for (int i = 0; i < t.ex; ++i) v *= x;
            for (int i = 0; i < t.ey; ++i) v *= y;
            acc += v;
        }
        return acc;
    }
    std::vector<Term> terms_;
    int max_x_ = 0, max_y_ = 0;
};

}  // namespace cyclecert
