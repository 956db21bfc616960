#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "enclosure.hpp"

namespace cyclecert {

using Real100 = boost::multiprecision::cpp_bin_float_100;

// Rewrites a^(1/d) as coeff * N^(1/d') with N a positive integer that is not
// a perfect p-th power for any prime p dividing d' (so x^d' - N is
// irreducible and powers of the radical below d' are linearly independent).
struct NormalizedRadical {
    Rational coeff;
    RadicalSpec radical;  // radical.radicand == 1 means the value is rational
};

inline NormalizedRadical normalize_radical(const Rational& a, int d) {
    if (sgn(a) <= 0 || d < 1) throw DomainError("normalize_radical needs a > 0 and d >= 1");
    // a^(1/d) = (p q^(d-1))^(1/d) / q
    Integer N = a.get_num() * ipow(a.get_den(), static_cast<unsigned long>(d - 1));
    Rational coeff(Integer(1), a.get_den());
    // pull out d-th powers of small primes, then of the whole cofactor
    auto extract = [&](Integer& n, int deg, Rational& c) {
        for (unsigned long p = 2; p < 2000; ++p) {
            Integer pd = ipow(Integer(p), static_cast<unsigned long>(deg));
            while (n % pd == 0) {
                n /= pd;
                c *= p;
            }
        }
        Integer r;
        if (mpz_root(r.get_mpz_t(), n.get_mpz_t(), static_cast<unsigned long>(deg)) != 0) {
            c *= Rational(r);
            n = 1;
        }
    };
    extract(N, d, coeff);
    // lower the degree while N is a perfect g-th power for some g | d
    for (bool changed = true; changed && d > 1;) {
        changed = false;
        for (int g = 2; g <= d; ++g) {
            if (d % g) continue;
            Integer r;
            if (mpz_root(r.get_mpz_t(), N.get_mpz_t(), static_cast<unsigned long>(g)) != 0) {
                N = r;
                d /= g;
                changed = true;
                break;
            }
        }
    }
    if (N == 1) d = 1;
    return {coeff, RadicalSpec{Rational(N), d}};
}

// Element of Q(r_1, ..., r_k) for fixed real radicals r_i = N_i^(1/d_i),
// stored over the monomial basis r^e with 0 <= e_i < d_i.
inline Real100 to_real100(const Rational& q) {
    return Real100(q.get_num().get_str()) / Real100(q.get_den().get_str());
}

class Surd {
public:
    using Exps = std::vector<int>;
    using Context = std::vector<RadicalSpec>;

    Surd() = default;
    Surd(std::shared_ptr<const Context> ctx, const Rational& c) : ctx_(std::move(ctx)) {
        if (!is_zero(c)) terms_[Exps(ctx_->size(), 0)] = c;
    }
    static Surd radical(std::shared_ptr<const Context> ctx, std::size_t i, const Rational& c = 1) {
        Surd s(ctx, Rational(0));
        Exps e(ctx->size(), 0);
        e[i] = 1;
        if (!is_zero(c)) s.terms_[e] = c;
        return s;
    }

    const std::map<Exps, Rational>& terms() const { return terms_; }
    const std::shared_ptr<const Context>& context() const { return ctx_; }
    bool zero() const { return terms_.empty(); }
    bool is_rational() const {
        return terms_.empty() || (terms_.size() == 1 && std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(), [](int e) { return e == 0; }));
    }
    Rational rational_value() const { return terms_.empty() ? Rational(0) : terms_.begin()->second; }

    Surd operator-() const {
        Surd out = *this;
        for (auto& [e, c] : out.terms_) c = -c;
        return out;
    }
    Surd& operator+=(const Surd& o) {
        adopt(o);
        for (const auto& [e, c] : o.terms_) add(e, c);
        return *this;
    }
    Surd& operator-=(const Surd& o) {
        adopt(o);
        for (const auto& [e, c] : o.terms_) add(e, -c);
        return *this;
    }
    friend Surd operator+(Surd a, const Surd& b) { return a += b; }
    friend Surd operator-(Surd a, const Surd& b) { return a -= b; }
    friend Surd operator*(const Surd& a, const Surd& b) {
        Surd out;
        out.ctx_ = a.ctx_ ? a.ctx_ : b.ctx_;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exps e(ea.size());
                Rational c = ca * cb;
                for (std::size_t i = 0; i < e.size(); ++i) {
                    e[i] = ea[i] + eb[i];
                    const auto& r = (*out.ctx_)[i];
                    if (e[i] >= r.degree) {
                        e[i] -= r.degree;
                        c *= r.radicand;
                    }
                }
                out.add(e, c);
            }
        return out;
    }
    Surd scaled(const Rational& s) const {
        Surd out = *this;
        out.terms_.clear();
        for (const auto& [e, c] : terms_) out.add(e, c * s);
        return out;
    }
    Surd pow(int e) const {
        if (e < 0) return inverse().pow(-e);
        Surd out(ctx_, Rational(1)), b = *this;
        while (e) {
            if (e & 1) out = out * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return out;
    }
    // Inverse of a single-term element.
    Surd inverse() const {
        if (terms_.size() != 1) throw DomainError("Surd::inverse only for monomials");
        const auto& [e, c] = *terms_.begin();
        Surd out(ctx_, Rational(0));
        Exps inv(e.size(), 0);
        Rational k = Rational(1) / c;
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] != 0) {
                inv[i] = (*ctx_)[i].degree - e[i];
                k /= (*ctx_)[i].radicand;
            }
        out.add(inv, k);
        return out;
    }

    // Rational interval containing the value, given enclosures of the radicals.
    std::pair<Rational, Rational> interval(const std::vector<Enclosure>& enc) const {
        Rational lo = 0, hi = 0;
        for (const auto& [e, c] : terms_) {
            Rational plo = 1, phi = 1;
            for (std::size_t i = 0; i < e.size(); ++i) {
                plo *= rpow(enc[i].lower, e[i]);
                phi *= rpow(enc[i].upper, e[i]);
            }
            if (sgn(c) > 0) {
                lo += c * plo;
                hi += c * phi;
            } else {
                lo += c * phi;
                hi += c * plo;
            }
        }
        return {lo, hi};
    }

    // Exact sign: zero iff every basis coefficient vanishes, otherwise the
    // enclosures are deepened until the interval excludes zero.
    int sign(int max_depth = 80) const {
        if (zero()) return 0;
        if (is_rational()) return sgn(rational_value());
        for (int depth = 2; depth <= max_depth; depth += 2) {
            auto [lo, hi] = interval(enclosures(depth));
            if (sgn(lo) > 0) return 1;
            if (sgn(hi) < 0) return -1;
        }
        throw SignAmbiguous("could not decide the sign of a nonzero surd");
    }

    std::vector<Enclosure> enclosures(int depth) const {
        std::vector<Enclosure> out;
        for (const auto& r : *ctx_) out.push_back(enclose(r, depth));
        return out;
    }

    Real100 value100() const {
        Real100 acc = 0;
        for (const auto& [e, c] : terms_) {
            Real100 t = to_real100(c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                const auto& r = (*ctx_)[i];
                Real100 base = to_real100(r.radicand);
                t *= boost::multiprecision::pow(base, Real100(e[i]) / r.degree);
            }
            acc += t;
        }
        return acc;
    }

    std::string str() const {
        if (zero()) return "0";
        std::string out;
        for (const auto& [e, c] : terms_) {
            if (!out.empty()) out += " + ";
            out += "(" + c.get_str() + ")";
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) out += "*" + (*ctx_)[i].describe() + (e[i] > 1 ? "^" + std::to_string(e[i]) : "");
        }
        return out;
    }

private:
    void adopt(const Surd& o) {
        if (!ctx_) ctx_ = o.ctx_;
    }
    void add(const Exps& e, const Rational& c) {
        if (is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }
    std::shared_ptr<const Context> ctx_;
    std::map<Exps, Rational> terms_;
};

// Polynomial in one variable with Surd coefficients, lowest degree first.
using SurdPoly = std::vector<Surd>;

// Evaluates an MPoly at (var = free variable, other slots bound to surds),
// producing a SurdPoly in `var`.
inline SurdPoly to_surd_poly(const MPoly& p, int var, const std::map<int, Surd>& bindings,
                             const std::shared_ptr<const Surd::Context>& ctx) {
    if (!p.is_polynomial() && p.min_degree(var) < 0) throw DomainError("to_surd_poly: negative power of the free variable");
    SurdPoly out(static_cast<std::size_t>(std::max(p.degree(var), 0)) + 1, Surd(ctx, Rational(0)));
    std::map<std::pair<int, int>, Surd> cache;
    for (const auto& [m, c] : p.terms()) {
        Surd t(ctx, c);
        for (int v = 0; v < kMaxVars; ++v) {
            int e = m[static_cast<std::size_t>(v)];
            if (v == var || e == 0) continue;
            auto it = bindings.find(v);
            if (it == bindings.end()) throw DomainError("to_surd_poly: unbound variable");
            auto key = std::make_pair(v, e);
            auto ci = cache.find(key);
            if (ci == cache.end()) ci = cache.emplace(key, it->second.pow(e)).first;
            t = t * ci->second;
        }
        out[static_cast<std::size_t>(m[static_cast<std::size_t>(var)])] += t;
    }
    return out;
}

enum class Orthant { NonNegative, NonPositive, All };

inline const char* to_string(Orthant o) {
    switch (o) {
        case Orthant::NonNegative: return "y >= 0";
        case Orthant::NonPositive: return "y <= 0";
        default: return "y real";
    }
}

struct Majorants {
    UniPoly lower, upper;
};

// Rational polynomials P- <= P <= P+ on the orthant: every irrational
// monomial c * r^e * y^k is replaced by the lower or upper bound of r^e
// according to the sign of c * y^k there.
inline Majorants majorize(const SurdPoly& P, const std::vector<Enclosure>& enc, Orthant orthant) {
    std::vector<Rational> lo(P.size(), Rational(0)), hi(P.size(), Rational(0));
    for (std::size_t k = 0; k < P.size(); ++k) {
        int ysign = 1;
        if (k % 2 == 1) {
            if (orthant == Orthant::NonPositive) ysign = -1;
            else if (orthant == Orthant::All) ysign = 0;
        }
        for (const auto& [e, c] : P[k].terms()) {
            bool irrational = std::any_of(e.begin(), e.end(), [](int x) { return x != 0; });
            if (!irrational) {
                lo[k] += c;
                hi[k] += c;
                continue;
            }
            if (ysign == 0)
                throw SignAmbiguous("odd power y^" + std::to_string(k) + " with an irrational coefficient on the whole line");
            Rational plo = 1, phi = 1;
            for (std::size_t i = 0; i < e.size(); ++i) {
                plo *= rpow(enc[i].lower, e[i]);
                phi *= rpow(enc[i].upper, e[i]);
            }
            // the value of c*r^e*y^k grows with r^e iff c*ysign > 0
            if (sgn(c) * ysign > 0) {
                hi[k] += c * phi;
                lo[k] += c * plo;
            } else {
                hi[k] += c * plo;
                lo[k] += c * phi;
            }
        }
    }
    return {UniPoly(std::move(lo)), UniPoly(std::move(hi))};
}

}  // namespace cyclecert
