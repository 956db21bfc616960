#pragma once

#include <array>
#include <map>
#include <sstream>
#include <string>

#include "../errors.hpp"
#include "../poly/rational.hpp"
#include "../trig/gentrig.hpp"

namespace cyclecert::lyap {

// Finite sum of c * Cs^i * Sn^j * theta^l for the (1, q) functions.
class TrigPoly {
public:
    using Key = std::array<int, 3>;  // {i, j, l}

    TrigPoly() = default;
    explicit TrigPoly(int q) : q_(q) {}
    static TrigPoly constant(const Rational& c, int q = 2) { return term(c, 0, 0, 0, q); }
    static TrigPoly term(const Rational& c, int i, int j, int l = 0, int q = 2) {
        TrigPoly t(q);
        t.add(c, i, j, l);
        return t;
    }

    int q() const { return q_; }
    const std::map<Key, Rational>& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }
    Rational coeff(int i, int j, int l = 0) const {
        auto it = terms_.find({i, j, l});
        return it == terms_.end() ? Rational(0) : it->second;
    }
    int max_theta_power() const {
        int l = 0;
        for (const auto& [k, c] : terms_) l = std::max(l, k[2]);
        return l;
    }

    void add(const Rational& c, int i, int j, int l = 0) {
        if (is_zero(c)) return;
        Rational& slot = terms_[{i, j, l}];
        slot += c;
        if (is_zero(slot)) terms_.erase({i, j, l});
    }

    TrigPoly& operator+=(const TrigPoly& o) {
        for (const auto& [k, c] : o.terms_) add(c, k[0], k[1], k[2]);
        return *this;
    }
    TrigPoly& operator-=(const TrigPoly& o) {
        for (const auto& [k, c] : o.terms_) add(-c, k[0], k[1], k[2]);
        return *this;
    }
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
    friend TrigPoly operator-(const TrigPoly& a) { return a.scaled(-1); }
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
        TrigPoly out(a.q_);
        for (const auto& [ka, ca] : a.terms_)
            for (const auto& [kb, cb] : b.terms_) out.add(ca * cb, ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]);
        return out;
    }
    TrigPoly scaled(const Rational& s) const {
        TrigPoly out(q_);
        if (is_zero(s)) return out;
        for (const auto& [k, c] : terms_) out.terms_[k] = c * s;
        return out;
    }
    bool operator==(const TrigPoly& o) const { return terms_ == o.terms_; }

    // Rewrites Sn^2 = (1 - Cs^(2q))/q until every Sn exponent is 0 or 1.
    // Two expressions denote the same function iff their canonical forms agree.
    TrigPoly canonical() const {
        TrigPoly out(q_);
        for (const auto& [k, c] : terms_) {
            const int half = k[1] / 2, eps = k[1] % 2;
            Integer binom = 1;
            Rational qpow = rpow(Rational(q_), half);
            for (int t = 0; t <= half; ++t) {
                Rational coef = c * Rational(binom) / qpow;
                if (t % 2 == 1) coef = -coef;
                out.add(coef, k[0] + 2 * q_ * t, eps, k[2]);
                binom = binom * (half - t) / (t + 1);
            }
        }
        return out;
    }

    double eval(double theta) const {
        trig::TrigValue v = trig::eval({1, q_}, theta);
        double acc = 0;
        for (const auto& [k, c] : terms_) acc += to_double(c) * std::pow(v.cs, k[0]) * std::pow(v.sn, k[1]) * std::pow(theta, k[2]);
        return acc;
    }

    std::string str() const {
        if (zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [k, c] = *it;
            os << (first ? (sgn(c) < 0 ? "-" : "") : (sgn(c) < 0 ? " - " : " + "));
            first = false;
            Rational a = abs(c);
            bool bare = true;
            if (a != 1 || (k[0] == 0 && k[1] == 0 && k[2] == 0)) {
                os << a.get_str();
                bare = false;
            }
            auto factor = [&](const char* name, int e) {
                if (e == 0) return;
                os << (bare ? "" : "*") << name;
                if (e != 1) os << "^" << e;
                bare = false;
            };
            factor("Cs", k[0]);
            factor("Sn", k[1]);
            factor("theta", k[2]);
        }
        return os.str();
    }

private:
    int q_ = 2;
    std::map<Key, Rational> terms_;
};

namespace detail {

// int_0^theta psi^l Cs^i Sn (as a canonical TrigPoly)
inline TrigPoly primitive_cs_sn(int q, int i, int l);

// int_0^theta psi^l Cs^j.  Elementary only when j = 0 or j >= 2q - 1 with
// j = 0 or -1 mod 2q; otherwise the recursion hits Cs^r with 0 < r < 2q - 1.
inline TrigPoly primitive_cs(int q, int j, int l) {
    TrigPoly out(q);
    if (j == 0) {
        out.add(make_rational(1, l + 1), 0, 0, l + 1);
        return out;
    }
    if (j < 2 * q - 1)
        throw PrecisionLoss("primitive of Cs^" + std::to_string(j) + " is not a finite Cs/Sn/theta expression");
    // d/dθ(Sn Cs^c) = (1 + c/q) Cs^j - (c/q) Cs^(c-1),  c = j - 2q + 1
    const int c = j - 2 * q + 1;
    const Rational inv = make_rational(q, q + c);  // 1/(1 + c/q)
    out.add(inv, c, 1, l);
    if (l > 0) out -= primitive_cs_sn(q, c, l - 1).scaled(inv * l);
    if (c > 0) out += primitive_cs(q, c - 1, l).scaled(inv * make_rational(c, q));
    return out;
}

inline TrigPoly primitive_cs_sn(int q, int i, int l) {
    // d/dθ Cs^(i+1) = -(i+1) Cs^i Sn
    TrigPoly out(q);
    const Rational inv(1, i + 1);
    if (l == 0) {
        out.add(inv, 0, 0, 0);
        out.add(-inv, i + 1, 0, 0);
        return out;
    }
    out.add(-inv, i + 1, 0, l);
    out += primitive_cs(q, i + 1, l - 1).scaled(inv * l);
    return out;
}

}  // namespace detail

// The primitive vanishing at theta = 0.  Throws PrecisionLoss when a term has
// no primitive in the Cs/Sn/theta algebra.
inline TrigPoly primitive(const TrigPoly& f) {
    TrigPoly c = f.canonical();
    TrigPoly out(f.q());
    for (const auto& [k, coef] : c.terms()) {
        TrigPoly piece = k[1] == 1 ? detail::primitive_cs_sn(f.q(), k[0], k[2]) : detail::primitive_cs(f.q(), k[0], k[2]);
        out += piece.scaled(coef);
    }
    return out.canonical();
}

// int_0^T f as an exact combination of the base moments.  theta-free terms
// go through the moment reduction; terms with theta^l use the primitive at
// theta = T, where Cs = 1 and Sn = 0.
inline trig::MomentForm period_integral(const TrigPoly& f) {
    TrigPoly c = f.canonical();
    trig::MomentForm out{f.q(), {}};
    TrigPoly secular(f.q());
    for (const auto& [k, coef] : c.terms()) {
        if (k[2] == 0) out += trig::moment_in_basis(f.q(), k[1], k[0]).scaled(coef);
        else secular.add(coef, k[0], k[1], k[2]);
    }
    if (secular.zero()) return out;
    TrigPoly F = primitive(secular);
    // evaluate at theta = T: Cs^i Sn^j -> [j == 0]; the result is a polynomial in T
    std::map<int, Rational> powers;
    for (const auto& [k, coef] : F.terms())
        if (k[1] == 0) powers[k[2]] += coef;
    for (const auto& [l, coef] : powers) {
        if (is_zero(coef) || l == 0) continue;  // the constant part cancels: F(0) = 0
        if (l > 1) throw PrecisionLoss("period integral involves T^" + std::to_string(l));
        out += trig::MomentForm{f.q(), {{0, coef}}};  // B0 = T
    }
    return out;
}

}  // namespace cyclecert::lyap
