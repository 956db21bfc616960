#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "../errors.hpp"

namespace cyclecert {

using Integer = mpz_class;
using Rational = mpq_class;

inline int sign(const Rational& r) { return sgn(r); }
inline int sign(const Integer& z) { return sgn(z); }
inline bool is_zero(const Rational& r) { return sgn(r) == 0; }
inline bool is_zero(const Integer& z) { return sgn(z) == 0; }

inline Rational make_rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational make_rational(const Integer& num, const Integer& den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline Rational rpow(const Rational& base, long e) {
    if (e < 0) {
        if (is_zero(base)) throw DomainError("negative power of zero");
        return rpow(Rational(1) / base, -e);
    }
    Rational out;
    mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(e));
    return out;  // already canonical: powers of coprime integers stay coprime
}

inline Integer ipow(const Integer& base, unsigned long e) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

inline Integer floor_of(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline Integer ceil_of(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

inline double to_double(const Rational& r) { return r.get_d(); }

// Exact conversion of a finite binary double.
inline Rational from_double(double v) {
    Rational r(v);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }
inline std::string to_string(const Integer& z) { return z.get_str(); }

// Parses "p", "p/q", decimal literals such as "-0.547" and scientific forms
// such as "1e-6" or "2.5E3" into an exact rational.
inline Rational parse_rational(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw ParseError("empty rational literal");
    auto fail = [&]() -> Rational { throw ParseError("malformed rational literal '" + std::string(text) + "'"); };

    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (is_zero(den)) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return num / den;
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') negative = (s[i++] == '-');
    std::string digits;
    long scale = 0;
    bool seen_point = false, seen_digit = false;
    for (; i < s.size() && s[i] != 'e' && s[i] != 'E'; ++i) {
        char c = s[i];
        if (c == '.') {
            if (seen_point) return fail();
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            seen_digit = true;
            if (seen_point) --scale;
        } else {
            return fail();
        }
    }
    if (!seen_digit) return fail();
    if (i < s.size()) {
        std::string ex = s.substr(i + 1);
        if (ex.empty()) return fail();
        std::size_t pos = 0;
        long e = 0;
        try {
            e = std::stol(ex, &pos);
        } catch (...) {
            return fail();
        }
        if (pos != ex.size()) return fail();
        scale += e;
    }
    Rational value{Integer(digits, 10)};
    value *= rpow(Rational(10), scale);
    return negative ? Rational(-value) : value;
}

}  // namespace cyclecert
