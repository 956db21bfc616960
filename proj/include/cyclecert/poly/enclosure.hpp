#pragma once

#include <string>
#include <vector>

#include "roots.hpp"

namespace cyclecert {

// The positive real radicand^(1/degree).
struct RadicalSpec {
    Rational radicand;
    int degree = 2;

    std::string describe() const { return radicand.get_str() + "^{1/" + std::to_string(degree) + "}"; }
    friend bool operator==(const RadicalSpec& a, const RadicalSpec& b) { return a.radicand == b.radicand && a.degree == b.degree; }
};

struct Enclosure {
    Rational lower, upper;
    std::string description;
    bool exact = false;  // lower is the exact value (perfect power)

    Rational width() const { return upper - lower; }
};

// Continued fraction partial quotients of the positive root of x^d = a,
// computed exactly by repeatedly transforming the defining polynomial:
// if r = q + 1/r' then r' is the root > 1 of y^d P(q + 1/y).
// Stops early when the root is rational.
inline std::vector<Integer> radical_continued_fraction(const RadicalSpec& spec, int terms) {
    if (sgn(spec.radicand) <= 0 || spec.degree < 2) throw DomainError("radical needs a positive radicand and degree >= 2");
    const std::size_t d = static_cast<std::size_t>(spec.degree);
    std::vector<Integer> c(d + 1, Integer(0));
    c[d] = spec.radicand.get_den();
    c[0] = -spec.radicand.get_num();
    std::vector<Integer> quotients;
    auto value_sign = [&](const Integer& t) {
        Integer acc = 0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * t + c[i];
        return sgn(acc);
    };
    for (int k = 0; k < terms; ++k) {
        const int lead_sign = sgn(c.back());
        // largest integer t >= 0 with P(t) not yet of the sign at infinity
        Integer lo = 0, hi = 1;
        while (value_sign(hi) != lead_sign && value_sign(hi) != 0) hi *= 2;
        if (value_sign(hi) == 0) {
            lo = hi;
        } else {
            while (hi - lo > 1) {
                Integer mid = (lo + hi) / 2;
                int s = value_sign(mid);
                if (s == 0) {
                    lo = mid;
                    hi = mid + 1;
                    break;
                }
                if (s == lead_sign) hi = mid;
                else lo = mid;
            }
        }
        quotients.push_back(lo);
        if (value_sign(lo) == 0) break;  // rational root reached
        detail::taylor_shift(c, lo);
        std::reverse(c.begin(), c.end());
        while (!c.empty() && sgn(c.back()) == 0) c.pop_back();
    }
    return quotients;
}

// Brackets radicand^(1/d) between the convergents of orders depth-1 and
// depth, then verifies lower^d < radicand < upper^d exactly.
inline Enclosure enclose(const RadicalSpec& spec, int depth) {
    if (depth < 1) depth = 1;
    auto q = radical_continued_fraction(spec, depth + 1);
    std::vector<Rational> conv;
    Integer h_prev = 1, h = q[0], k_prev = 0, k = 1;
    conv.emplace_back(h, k);
    for (std::size_t i = 1; i < q.size(); ++i) {
        Integer hn = q[i] * h + h_prev, kn = q[i] * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = hn;
        k = kn;
        conv.emplace_back(h, k);
    }
    for (auto& c : conv) c.canonicalize();
    Enclosure e;
    e.description = spec.describe();
    const Rational last = conv.back();
    if (rpow(last, spec.degree) == spec.radicand) {
        e.lower = last;
        e.upper = last + Rational(Integer(1), ipow(Integer(10), static_cast<unsigned long>(depth)));
        e.exact = true;
    } else {
        const Rational& a = conv[static_cast<std::size_t>(depth - 1)];
        const Rational& b = conv[static_cast<std::size_t>(depth)];
        e.lower = std::min(a, b);
        e.upper = std::max(a, b);
    }
    // exact powering check of the bracket
    bool lower_ok = e.exact ? rpow(e.lower, spec.degree) == spec.radicand : rpow(e.lower, spec.degree) < spec.radicand;
    if (!lower_ok || !(spec.radicand < rpow(e.upper, spec.degree)))
        throw DomainError("enclosure check failed for " + e.description);
    return e;
}

}  // namespace cyclecert
