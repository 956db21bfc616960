#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <vector>

#include "mpoly.hpp"

namespace cyclecert {

// Opt-in guard against runaway coefficient growth.  Zero disables it.
inline std::atomic<std::size_t>& coefficient_bit_cap() {
    static std::atomic<std::size_t> cap{0};
    return cap;
}

inline void check_size(const Integer& z, const char* where) {
    std::size_t cap = coefficient_bit_cap().load();
    if (cap && mpz_sizeinbase(z.get_mpz_t(), 2) > cap)
        throw SizeCapExceeded(std::string(where) + ": coefficient exceeds " + std::to_string(cap) + " bits");
}

// ---------------------------------------------------------------------------
// Determinants and Sylvester matrices (fraction-free Bareiss elimination).

template <class R>
R bareiss_determinant(std::vector<std::vector<R>> a) {
    const std::size_t n = a.size();
    if (n == 0) return R(1);
    R sign(1), prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(a[k][k])) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && is_zero(a[swap_row][k])) ++swap_row;
            if (swap_row == n) return R(0);
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev);
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

template <class R>
std::vector<std::vector<R>> sylvester_matrix(const Poly<R>& p, const Poly<R>& q) {
    const int m = p.degree(), n = q.degree();
    const std::size_t size = static_cast<std::size_t>(m + n);
    std::vector<std::vector<R>> s(size, std::vector<R>(size, R(0)));
    for (int r = 0; r < n; ++r)
        for (int k = 0; k <= m; ++k) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = p[static_cast<std::size_t>(m - k)];
    for (int r = 0; r < m; ++r)
        for (int k = 0; k <= n; ++k) s[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + k)] = q[static_cast<std::size_t>(n - k)];
    return s;
}

template <class R>
R sylvester_resultant(const Poly<R>& p, const Poly<R>& q) {
    if (p.zero() || q.zero()) throw ZeroPolynomial("resultant of a zero polynomial");
    if (p.degree() == 0 && q.degree() == 0) return R(1);
    return bareiss_determinant(sylvester_matrix(p, q));
}

// ---------------------------------------------------------------------------
// Subresultant PRS over an integral domain with exact division.

template <class R>
R ring_pow(const R& base, int e) {
    R out(1), b = base;
    while (e > 0) {
        if (e & 1) out = out * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return out;
}

template <class R>
R subresultant_resultant(Poly<R> a, Poly<R> b) {
    if (a.zero() || b.zero()) throw ZeroPolynomial("resultant of a zero polynomial");
    R sgn_(1);
    if (a.degree() < b.degree()) {
        if ((a.degree() & 1) && (b.degree() & 1)) sgn_ = -sgn_;
        std::swap(a, b);
    }
    if (b.degree() == 0) return ring_pow(b.lead(), a.degree());
    R g(1), h(1);
    for (;;) {
        const int delta = a.degree() - b.degree();
        if ((a.degree() & 1) && (b.degree() & 1)) sgn_ = -sgn_;
        Poly<R> r = pseudo_rem(a, b);
        if (r.zero()) return R(0);
        a = std::move(b);
        b = exact_div_scalar(r, R(g * ring_pow(h, delta)));
        g = a.lead();
        // h <- g^delta / h^(delta-1)
        h = delta == 0 ? h : exact_div(ring_pow(g, delta), ring_pow(h, delta - 1));
        if (b.degree() == 0) {
            const int da = a.degree();
            R last = exact_div(ring_pow(b.lead(), da), ring_pow(h, da - 1));
            return sgn_ * last;
        }
    }
}

inline constexpr int kSylvesterDegreeLimit = 12;

// Resultant over Q.  Small degrees use the Sylvester determinant, larger
// ones the subresultant sequence on primitive integer parts.
inline Rational resultant(const UniPoly& p, const UniPoly& q) {
    if (p.zero() || q.zero()) throw ZeroPolynomial("resultant of a zero polynomial");
    if (p.degree() <= kSylvesterDegreeLimit && q.degree() <= kSylvesterDegreeLimit) return sylvester_resultant(p, q);
    auto [ip, sp] = to_primitive_integer(p);
    auto [iq, sq] = to_primitive_integer(q);
    Integer r = subresultant_resultant(ip, iq);
    check_size(r, "resultant");
    return Rational(r) * rpow(sp, q.degree()) * rpow(sq, p.degree());
}

// Resultant in Q[n] of two elements of Q[n][y] with respect to y.
inline UniPoly resultant(const ParamPoly& p, const ParamPoly& q) {
    if (p.zero() || q.zero()) throw ZeroPolynomial("resultant of a zero polynomial");
    if (p.degree() <= kSylvesterDegreeLimit && q.degree() <= kSylvesterDegreeLimit) return sylvester_resultant(p, q);
    return subresultant_resultant(p, q);
}

inline Rational discriminant(const UniPoly& p) {
    const int d = p.degree();
    if (d < 1) throw DegreeZero("discriminant needs degree >= 1");
    if (d == 1) return Rational(1);
    Rational r = resultant(p, p.derivative()) / p.lead();
    return ((d * (d - 1) / 2) % 2) ? Rational(-r) : r;
}

inline UniPoly discriminant(const ParamPoly& p) {
    const int d = p.degree();
    if (d < 1) throw DegreeZero("discriminant needs degree >= 1");
    if (d == 1) return UniPoly(1);
    UniPoly r = exact_div(resultant(p, p.derivative()), p.lead());
    return ((d * (d - 1) / 2) % 2) ? UniPoly(-r) : r;
}

// ---------------------------------------------------------------------------
// Interpolation on consecutive integer nodes start, start+1, ..., start+B.
// Forward differences need only subtractions; the Newton form is then
// expanded with the scaled Horner recurrence r_k = (B!/k!) D^k + (x - x_k) r_{k+1},
// so everything stays in the integers until one final division by B!.

inline UniPoly interpolate_consecutive(const Integer& start, const std::vector<Rational>& values) {
    if (values.empty()) return UniPoly();
    const std::size_t B = values.size() - 1;
    Integer den = 1;
    for (const auto& v : values) den = lcm(den, Integer(v.get_den()));
    std::vector<Integer> f;
    f.reserve(values.size());
    for (const auto& v : values) f.push_back(Integer(v.get_num() * (den / v.get_den())));
    for (std::size_t k = 1; k <= B; ++k)
        for (std::size_t i = B; i >= k; --i) f[i] -= f[i - 1];
    // scale[k] = B!/k!
    std::vector<Integer> scale(B + 1);
    scale[B] = 1;
    for (std::size_t k = B; k-- > 0;) scale[k] = scale[k + 1] * static_cast<unsigned long>(k + 1);
    std::vector<Integer> r{f[B]};
    for (std::size_t k = B; k-- > 0;) {
        Integer node = start + static_cast<unsigned long>(k);
        std::vector<Integer> next(r.size() + 1);
        for (std::size_t i = 0; i < r.size(); ++i) {
            next[i + 1] += r[i];
            next[i] -= node * r[i];
        }
        next[0] += scale[k] * f[k];
        r = std::move(next);
    }
    Integer total = scale[0] * den;
    std::vector<Rational> out;
    out.reserve(r.size());
    for (auto& c : r) {
        check_size(c, "interpolation");
        Rational q(c, total);
        q.canonicalize();
        out.push_back(std::move(q));
    }
    return UniPoly(std::move(out));
}

// Interpolates an MPoly-valued function of variable v of degree <= bound.
// The sampler returns nullopt at unusable nodes; the run of consecutive
// nodes restarts after any such node.
inline MPoly interpolate_mpoly(int v, int bound, const std::function<std::optional<MPoly>(const Integer&)>& sample) {
    if (bound < 0) return MPoly();
    Integer start = -(bound / 2);
    std::vector<MPoly> vals;
    Integer node = start;
    int failures = 0;
    while (static_cast<int>(vals.size()) <= bound) {
        auto val = sample(node);
        if (!val) {
            if (++failures > 4 * bound + 64) throw DomainError("interpolation: too many unusable nodes");
            vals.clear();
            start = node + 1;
        } else {
            vals.push_back(std::move(*val));
        }
        node += 1;
    }
    std::map<Mono, std::vector<Rational>> series;
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (const auto& [m, c] : vals[i].terms()) {
            auto& s = series[m];
            if (s.empty()) s.assign(vals.size(), Rational(0));
            s[i] = c;
        }
    MPoly out;
    for (const auto& [m, s] : series) {
        UniPoly u = interpolate_consecutive(start, s);
        for (int k = 0; k <= u.degree(); ++k) {
            Mono mk = m;
            mk[static_cast<std::size_t>(v)] = k;
            out.add_term(mk, u.at(static_cast<std::size_t>(k)));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Multivariate resultants and discriminants by evaluation/interpolation.

inline std::vector<int> other_variables(const MPoly& p, const MPoly& q, int var) {
    std::vector<int> out;
    for (int v = 0; v < kMaxVars; ++v)
        if (v != var && (p.uses(v) || q.uses(v))) out.push_back(v);
    return out;
}

inline MPoly resultant(const MPoly& p, const MPoly& q, int var) {
    if (p.zero() || q.zero()) throw ZeroPolynomial("resultant of a zero polynomial");
    if (!p.is_polynomial() || !q.is_polynomial()) throw DomainError("resultant needs nonnegative exponents");
    if (p.degree(var) < 0 || q.degree(var) < 0) throw ZeroPolynomial("resultant: zero polynomial");
    auto others = other_variables(p, q, var);
    if (others.empty()) return MPoly(resultant(p.to_uni(var), q.to_uni(var)));
    const int v = others.front();
    const int dp = p.degree(var), dq = q.degree(var);
    const int bound = dp * q.degree(v) + dq * p.degree(v);
    MPoly lp = p.lead_coeff(var), lq = q.lead_coeff(var);
    return interpolate_mpoly(v, bound, [&](const Integer& node) -> std::optional<MPoly> {
        Rational r(node);
        if (lp.eval_at(v, r).zero() || lq.eval_at(v, r).zero()) return std::nullopt;
        return resultant(p.eval_at(v, r), q.eval_at(v, r), var);
    });
}

inline MPoly discriminant(const MPoly& p, int var) {
    const int d = p.degree(var);
    if (d < 1) throw DegreeZero("discriminant needs degree >= 1 in the variable");
    if (!p.is_polynomial()) throw DomainError("discriminant needs nonnegative exponents");
    auto others = other_variables(p, MPoly(), var);
    if (others.empty()) return MPoly(discriminant(p.to_uni(var)));
    const int v = others.front();
    const int bound = (2 * d - 2) * p.degree(v);
    MPoly lp = p.lead_coeff(var);
    return interpolate_mpoly(v, bound, [&](const Integer& node) -> std::optional<MPoly> {
        Rational r(node);
        if (lp.eval_at(v, r).zero()) return std::nullopt;
        return discriminant(p.eval_at(v, r), var);
    });
}

}  // namespace cyclecert
