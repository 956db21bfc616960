#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "poly.hpp"

namespace cyclecert {

// Variable slots used across the library.  Charts and auxiliary unknowns
// reuse the slots under different printed names.
enum Var : int { X = 0, Y = 1, N = 2, S = 3, M = 4, T = 5 };
inline constexpr int kMaxVars = 6;

using VarNames = std::array<std::string, kMaxVars>;
inline const VarNames& default_var_names() {
    static const VarNames names{"x", "y", "n", "s", "m", "t"};
    return names;
}

using Mono = std::array<int, kMaxVars>;

// Sparse multivariate polynomial with rational coefficients.  Exponents are
// signed, so Laurent monomials such as n^-3 are representable; operations
// that need genuine polynomials check for that explicitly.
class MPoly {
public:
    using Terms = std::map<Mono, Rational>;

    MPoly() = default;
    MPoly(const Rational& c) { add_term(Mono{}, c); }  // NOLINT
    MPoly(long c) : MPoly(Rational(c)) {}               // NOLINT

    static MPoly var(int v, int power = 1) {
        Mono m{};
        m[static_cast<std::size_t>(v)] = power;
        MPoly p;
        p.terms_[m] = Rational(1);
        return p;
    }
    static MPoly monomial(const Rational& c, const Mono& m) {
        MPoly p;
        p.add_term(m, c);
        return p;
    }
    // Lifts a univariate polynomial into variable v.
    static MPoly from_uni(const UniPoly& u, int v) {
        MPoly p;
        for (int k = 0; k <= u.degree(); ++k) {
            Mono m{};
            m[static_cast<std::size_t>(v)] = k;
            p.add_term(m, u.at(static_cast<std::size_t>(k)));
        }
        return p;
    }
    // Lifts an element of Q[param][main].
    static MPoly from_param(const ParamPoly& pp, int main, int param) {
        MPoly p;
        for (int k = 0; k <= pp.degree(); ++k) {
            const UniPoly& c = pp.at(static_cast<std::size_t>(k));
            for (int j = 0; j <= c.degree(); ++j) {
                Mono m{};
                m[static_cast<std::size_t>(main)] = k;
                m[static_cast<std::size_t>(param)] = j;
                p.add_term(m, c.at(static_cast<std::size_t>(j)));
            }
        }
        return p;
    }

    const Terms& terms() const { return terms_; }
    bool zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add_term(const Mono& m, const Rational& c) {
        if (is_zero(c)) return;
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted) {
            it->second += c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    Rational coeff(const Mono& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Rational(0) : it->second;
    }
    Rational constant_term() const { return coeff(Mono{}); }

    MPoly operator-() const {
        MPoly out = *this;
        for (auto& [m, c] : out.terms_) c = -c;
        return out;
    }
    MPoly& operator+=(const MPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    MPoly& operator-=(const MPoly& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly out;
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                Mono m;
                for (int i = 0; i < kMaxVars; ++i) m[static_cast<std::size_t>(i)] = ma[static_cast<std::size_t>(i)] + mb[static_cast<std::size_t>(i)];
                out.add_term(m, ca * cb);
            }
        return out;
    }
    MPoly& operator*=(const MPoly& o) { return *this = *this * o; }
    MPoly scaled(const Rational& s) const {
        if (is_zero(s)) return MPoly();
        MPoly out = *this;
        for (auto& [m, c] : out.terms_) c *= s;
        return out;
    }
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }

    MPoly pow(unsigned e) const {
        MPoly out(1), base = *this;
        while (e) {
            if (e & 1u) out *= base;
            e >>= 1u;
            if (e) base = base * base;
        }
        return out;
    }

    // Multiplies by the monomial with exponent vector `shift`.
    MPoly times_mono(const Mono& shift) const {
        MPoly out;
        for (const auto& [m, c] : terms_) {
            Mono k = m;
            for (int i = 0; i < kMaxVars; ++i) k[static_cast<std::size_t>(i)] += shift[static_cast<std::size_t>(i)];
            out.terms_.emplace(k, c);
        }
        return out;
    }

    int degree(int v) const {
        if (zero()) return -1;
        int d = std::numeric_limits<int>::min();
        for (const auto& [m, c] : terms_) d = std::max(d, m[static_cast<std::size_t>(v)]);
        return d;
    }
    int min_degree(int v) const {
        if (zero()) return 0;
        int d = std::numeric_limits<int>::max();
        for (const auto& [m, c] : terms_) d = std::min(d, m[static_cast<std::size_t>(v)]);
        return d;
    }
    bool uses(int v) const {
        for (const auto& [m, c] : terms_)
            if (m[static_cast<std::size_t>(v)] != 0) return true;
        return false;
    }
    std::vector<int> variables() const {
        std::vector<int> out;
        for (int v = 0; v < kMaxVars; ++v)
            if (uses(v)) out.push_back(v);
        return out;
    }
    bool is_polynomial() const {
        for (const auto& [m, c] : terms_)
            for (int e : m)
                if (e < 0) return false;
        return true;
    }
    int total_degree() const {
        int d = -1;
        for (const auto& [m, c] : terms_) {
            int s = 0;
            for (int e : m) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    // Coefficient of v^k, as a polynomial in the other variables.
    MPoly coeff_of(int v, int k) const {
        MPoly out;
        for (const auto& [m, c] : terms_)
            if (m[static_cast<std::size_t>(v)] == k) {
                Mono r = m;
                r[static_cast<std::size_t>(v)] = 0;
                out.terms_.emplace(r, c);
            }
        return out;
    }
    MPoly lead_coeff(int v) const { return coeff_of(v, degree(v)); }

    MPoly diff(int v) const {
        MPoly out;
        for (const auto& [m, c] : terms_) {
            int e = m[static_cast<std::size_t>(v)];
            if (e == 0) continue;
            Mono r = m;
            r[static_cast<std::size_t>(v)] = e - 1;
            out.add_term(r, c * e);
        }
        return out;
    }

    // Substitutes a rational value for v.
    MPoly eval_at(int v, const Rational& value) const {
        MPoly out;
        std::map<int, Rational> powers;
        for (const auto& [m, c] : terms_) {
            int e = m[static_cast<std::size_t>(v)];
            auto it = powers.find(e);
            if (it == powers.end()) it = powers.emplace(e, rpow(value, e)).first;
            Mono r = m;
            r[static_cast<std::size_t>(v)] = 0;
            out.add_term(r, c * it->second);
        }
        return out;
    }

    // Substitutes a polynomial for v.  Negative powers of v are only allowed
    // when the replacement is a single monomial.
    MPoly subs(int v, const MPoly& replacement) const {
        std::map<int, MPoly> powers;
        auto power = [&](int e) -> const MPoly& {
            auto it = powers.find(e);
            if (it != powers.end()) return it->second;
            MPoly val;
            if (e >= 0) {
                val = replacement.pow(static_cast<unsigned>(e));
            } else {
                if (replacement.size() != 1) throw DomainError("negative power substitution needs a monomial");
                const auto& [rm, rc] = *replacement.terms_.begin();
                Mono inv;
                for (int i = 0; i < kMaxVars; ++i) inv[static_cast<std::size_t>(i)] = -rm[static_cast<std::size_t>(i)] * (-e);
                val = MPoly::monomial(rpow(rc, e), inv);
            }
            return powers.emplace(e, std::move(val)).first->second;
        };
        MPoly out;
        for (const auto& [m, c] : terms_) {
            int e = m[static_cast<std::size_t>(v)];
            Mono r = m;
            r[static_cast<std::size_t>(v)] = 0;
            out += power(e).times_mono(r).scaled(c);
        }
        return out;
    }

    // Full evaluation at a rational point (unused slots are ignored when
    // their exponents are zero).
    Rational eval(const std::array<Rational, kMaxVars>& point) const {
        Rational acc = 0;
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (int i = 0; i < kMaxVars; ++i)
                if (m[static_cast<std::size_t>(i)] != 0) t *= rpow(point[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(i)]);
            acc += t;
        }
        return acc;
    }

    template <class T>
    T eval_as(const std::array<T, kMaxVars>& point) const {
        T acc = T(0);
        for (const auto& [m, c] : terms_) {
            T t = T(c.get_d());
            for (int i = 0; i < kMaxVars; ++i) {
                int e = m[static_cast<std::size_t>(i)];
                if (e == 0) continue;
                T b = point[static_cast<std::size_t>(i)];
                if (e < 0) {
                    b = T(1) / b;
                    e = -e;
                }
                for (int k = 0; k < e; ++k) t *= b;
            }
            acc += t;
        }
        return acc;
    }

    // Conversion to a univariate polynomial; throws if other variables occur.
    UniPoly to_uni(int v) const {
        std::vector<Rational> c;
        for (const auto& [m, coef] : terms_) {
            for (int i = 0; i < kMaxVars; ++i)
                if (i != v && m[static_cast<std::size_t>(i)] != 0) throw DomainError("to_uni: polynomial has other variables");
            int e = m[static_cast<std::size_t>(v)];
            if (e < 0) throw DomainError("to_uni: negative exponent");
            if (static_cast<std::size_t>(e) >= c.size()) c.resize(static_cast<std::size_t>(e) + 1, Rational(0));
            c[static_cast<std::size_t>(e)] += coef;
        }
        return UniPoly(std::move(c));
    }

    ParamPoly to_param(int main, int param) const {
        std::vector<UniPoly> rows(static_cast<std::size_t>(std::max(degree(main), 0)) + 1);
        for (int k = 0; k <= degree(main); ++k) rows[static_cast<std::size_t>(k)] = coeff_of(main, k).to_uni(param);
        return ParamPoly(std::move(rows));
    }

    // Largest monomial dividing every term (exponent-wise minimum).
    Mono monomial_content() const {
        Mono g{};
        bool first = true;
        for (const auto& [m, c] : terms_) {
            if (first) {
                g = m;
                first = false;
            } else {
                for (int i = 0; i < kMaxVars; ++i) g[static_cast<std::size_t>(i)] = std::min(g[static_cast<std::size_t>(i)], m[static_cast<std::size_t>(i)]);
            }
        }
        return g;
    }

    // Removes negative exponents by multiplying with the smallest monomial that
    // does it; returns the shifted polynomial and the exponents applied.
    std::pair<MPoly, Mono> cleared() const {
        Mono shift{};
        for (const auto& [m, c] : terms_)
            for (int i = 0; i < kMaxVars; ++i) shift[static_cast<std::size_t>(i)] = std::max(shift[static_cast<std::size_t>(i)], -m[static_cast<std::size_t>(i)]);
        return {times_mono(shift), shift};
    }

    // Positive rational making all coefficients coprime integers.
    Rational integer_normalizer() const {
        Integer den = 1, num = 0;
        for (const auto& [m, c] : terms_) den = lcm(den, Integer(c.get_den()));
        for (const auto& [m, c] : terms_) num = gcd(num, Integer(c.get_num() * (den / c.get_den())));
        if (num == 0) return Rational(1);
        return Rational(den) / Rational(num);
    }

    std::string str(const VarNames& names = default_var_names()) const;

private:
    Terms terms_;
};

inline bool is_zero(const MPoly& p) { return p.zero(); }

// ---------------------------------------------------------------------------
// Text form.  Output uses the sparse literal format `c*n^a*y^b` joined by
// `+`/`-`, highest total degree first.  Input accepts that format and, more
// generally, sums/products/integer powers/parentheses so hard-coded
// polynomials can be written in factored form.

inline std::string MPoly::str(const VarNames& names) const {
    if (zero()) return "0";
    std::vector<std::pair<Mono, Rational>> items(terms_.begin(), terms_.end());
    auto order = [](const Mono& m) {
        int s = 0;
        for (int e : m) s += e;
        return s;
    };
    std::stable_sort(items.begin(), items.end(), [&](const auto& a, const auto& b) {
        int da = order(a.first), db = order(b.first);
        if (da != db) return da > db;
        return a.first > b.first;
    });
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : items) {
        bool neg = sgn(c) < 0;
        Rational a = abs(c);
        if (first) {
            if (neg) os << "-";
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        bool constant = std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
        bool wrote = false;
        if (a != 1 || constant) {
            os << a.get_str();
            wrote = true;
        }
        for (int i = 0; i < kMaxVars; ++i) {
            int e = m[static_cast<std::size_t>(i)];
            if (e == 0) continue;
            if (wrote) os << "*";
            os << names[static_cast<std::size_t>(i)];
            if (e != 1) os << "^" << e;
            wrote = true;
        }
    }
    return os.str();
}

namespace detail {

class MPolyParser {
public:
    MPolyParser(std::string_view text, const VarNames& names) : s_(text), names_(names) {}

    MPoly parse() {
        MPoly p = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ParseError(why + " at offset " + std::to_string(pos_) + " in '" + std::string(s_) + "'");
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip();
        return pos_ < s_.size() && s_[pos_] == c;
    }
    MPoly expr() {
        skip();
        MPoly acc;
        bool negate = false;
        if (peek('+') || peek('-')) negate = s_[pos_++] == '-';
        acc = term();
        if (negate) acc = -acc;
        while (peek('+') || peek('-')) {
            bool minus = s_[pos_++] == '-';
            MPoly t = term();
            if (minus) acc -= t;
            else acc += t;
        }
        return acc;
    }
    bool starts_factor() {
        skip();
        if (pos_ >= s_.size()) return false;
        char c = s_[pos_];
        return c == '(' || std::isalpha(static_cast<unsigned char>(c)) || std::isdigit(static_cast<unsigned char>(c)) || c == '.';
    }
    MPoly term() {
        MPoly acc = power();
        for (;;) {
            if (peek('*')) {
                ++pos_;
                acc *= power();
            } else if (peek('/')) {
                ++pos_;
                MPoly d = power();
                if (d.size() != 1 || !d.variables().empty()) fail("division only by nonzero rational constants");
                acc = acc.scaled(Rational(1) / d.constant_term());
            } else if (starts_factor()) {
                acc *= power();  // juxtaposition, e.g. 3(1-n^2)
            } else {
                return acc;
            }
        }
    }
    MPoly power() {
        MPoly base = atom();
        if (peek('^')) {
            ++pos_;
            skip();
            bool neg = false;
            if (peek('-')) {
                neg = true;
                ++pos_;
            }
            std::size_t start = pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            if (start == pos_) fail("expected exponent");
            int e = std::stoi(std::string(s_.substr(start, pos_ - start)));
            if (neg) {
                if (base.size() != 1) fail("negative power of a non-monomial");
                const auto& [m, c] = *base.terms().begin();
                Mono inv;
                for (int i = 0; i < kMaxVars; ++i) inv[static_cast<std::size_t>(i)] = -m[static_cast<std::size_t>(i)] * e;
                return MPoly::monomial(rpow(c, -e), inv);
            }
            return base.pow(static_cast<unsigned>(e));
        }
        return base;
    }
    MPoly atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            MPoly inner = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
            return MPoly(parse_rational(s_.substr(start, pos_ - start)));
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            std::string_view name = s_.substr(start, pos_ - start);
            for (int i = 0; i < kMaxVars; ++i)
                if (names_[static_cast<std::size_t>(i)] == name) return MPoly::var(i);
            fail("unknown variable '" + std::string(name) + "'");
        }
        fail("unexpected character");
    }

    std::string_view s_;
    const VarNames& names_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline MPoly parse_mpoly(std::string_view text, const VarNames& names = default_var_names()) {
    return detail::MPolyParser(text, names).parse();
}

inline std::ostream& operator<<(std::ostream& os, const MPoly& p) { return os << p.str(); }

}  // namespace cyclecert
