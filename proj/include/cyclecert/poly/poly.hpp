#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace cyclecert {

// Dense univariate polynomial over a commutative ring R.  Coefficients are
// stored lowest degree first and the vector never ends in a zero, so the
// zero polynomial is the empty vector.  R may itself be a Poly, which is how
// Q[n][y] is represented.
template <class R>
class Poly {
public:
    using coeff_type = R;

    Poly() = default;
    Poly(const R& c) {  // NOLINT: implicit lift of constants is intended
        if (!is_zero(c)) c_.push_back(c);
    }
    Poly(long c) : Poly(R(c)) {}  // NOLINT
    explicit Poly(std::vector<R> coeffs) : c_(std::move(coeffs)) { trim(); }

    static Poly monomial(const R& c, std::size_t k) {
        if (is_zero(c)) return Poly();
        std::vector<R> v(k + 1, R(0));
        v[k] = c;
        return Poly(std::move(v));
    }
    static Poly x() { return monomial(R(1), 1); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool zero() const { return c_.empty(); }
    std::size_t size() const { return c_.size(); }
    const std::vector<R>& coeffs() const { return c_; }

    // Coefficient of x^k; zero past the degree.
    R operator[](std::size_t k) const { return k < c_.size() ? c_[k] : R(0); }
    const R& lead() const { return c_.back(); }
    const R& at(std::size_t k) const { return c_.at(k); }

    void set(std::size_t k, const R& v) {
        if (k >= c_.size()) {
            if (is_zero(v)) return;
            c_.resize(k + 1, R(0));
        }
        c_[k] = v;
        trim();
    }

    Poly operator-() const {
        Poly out = *this;
        for (auto& c : out.c_) c = -c;
        return out;
    }
    Poly& operator+=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), R(0));
        for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.zero() || b.zero()) return Poly();
        std::vector<R> out(a.c_.size() + b.c_.size() - 1, R(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (is_zero(a.c_[i])) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
        }
        return Poly(std::move(out));
    }
    Poly scaled(const R& s) const {
        if (is_zero(s)) return Poly();
        Poly out = *this;
        for (auto& c : out.c_) c *= s;
        out.trim();  // zero divisors are impossible in our rings but keep the invariant cheap
        return out;
    }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly derivative() const {
        if (c_.size() <= 1) return Poly();
        std::vector<R> out(c_.size() - 1, R(0));
        for (std::size_t i = 1; i < c_.size(); ++i) out[i - 1] = c_[i] * R(static_cast<long>(i));
        return Poly(std::move(out));
    }

    // Horner evaluation at a point of any type that R converts into.
    template <class T>
    T eval(const T& x) const {
        T acc = T(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + T(*it);
        return acc;
    }
    template <class T, class Conv>
    T eval(const T& x, Conv conv) const {
        T acc = T(0);
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + conv(*it);
        return acc;
    }
    R operator()(const R& x) const { return eval<R>(x); }

    Poly compose(const Poly& inner) const {
        Poly acc;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * inner + Poly(*it);
        return acc;
    }

    Poly pow(unsigned e) const {
        Poly out(R(1)), base = *this;
        while (e) {
            if (e & 1u) out *= base;
            e >>= 1u;
            if (e) base = base * base;
        }
        return out;
    }

    // Multiplies by x^k (k may shift down when the low coefficients vanish).
    Poly shifted(long k) const {
        if (zero()) return Poly();
        if (k >= 0) {
            std::vector<R> v(static_cast<std::size_t>(k), R(0));
            v.insert(v.end(), c_.begin(), c_.end());
            return Poly(std::move(v));
        }
        std::size_t drop = static_cast<std::size_t>(-k);
        for (std::size_t i = 0; i < std::min(drop, c_.size()); ++i)
            if (!is_zero(c_[i])) throw DomainError("shift would drop a nonzero coefficient");
        if (drop >= c_.size()) return Poly();
        return Poly(std::vector<R>(c_.begin() + static_cast<long>(drop), c_.end()));
    }

    // Largest k with x^k dividing the polynomial.
    std::size_t low_order() const {
        std::size_t k = 0;
        while (k < c_.size() && is_zero(c_[k])) ++k;
        return k;
    }

    // Reverse coefficient order: x^deg p(1/x).
    Poly reversed() const { return Poly(std::vector<R>(c_.rbegin(), c_.rend())); }

    template <class S, class F>
    Poly<S> map(F f) const {
        std::vector<S> v;
        v.reserve(c_.size());
        for (const auto& c : c_) v.push_back(f(c));
        return Poly<S>(std::move(v));
    }

private:
    void trim() {
        while (!c_.empty() && is_zero(c_.back())) c_.pop_back();
    }
    std::vector<R> c_;
};

template <class R>
bool is_zero(const Poly<R>& p) {
    return p.zero();
}

using UniPoly = Poly<Rational>;
using IntPoly = Poly<Integer>;
using ParamPoly = Poly<UniPoly>;

// ---------------------------------------------------------------------------
// Exact division in the coefficient ring.

inline Integer exact_div(const Integer& a, const Integer& b) {
    Integer q;
    mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}
inline Rational exact_div(const Rational& a, const Rational& b) { return a / b; }

template <class R>
Poly<R> exact_div(const Poly<R>& a, const Poly<R>& b);

// Divides every coefficient by a ring element that is known to divide it.
template <class R>
Poly<R> exact_div_scalar(const Poly<R>& p, const R& d) {
    return p.template map<R>([&](const R& c) { return exact_div(c, d); });
}

// Quotient of polynomials when b | a exactly over R (long division that
// only ever divides by lead(b)).
template <class R>
Poly<R> exact_div(const Poly<R>& a, const Poly<R>& b) {
    if (b.zero()) throw ZeroPolynomial("exact division by zero polynomial");
    if (a.zero()) return Poly<R>();
    if (a.degree() < b.degree()) throw DomainError("exact_div: divisor degree exceeds dividend degree");
    std::vector<R> rem = a.coeffs();
    const int db = b.degree();
    std::vector<R> q(static_cast<std::size_t>(a.degree() - db + 1), R(0));
    for (int k = a.degree() - db; k >= 0; --k) {
        const R& top = rem[static_cast<std::size_t>(k + db)];
        if (is_zero(top)) continue;
        R c = exact_div(top, b.lead());
        q[static_cast<std::size_t>(k)] = c;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= c * b.at(static_cast<std::size_t>(j));
    }
    for (const auto& r : rem)
        if (!is_zero(r)) throw DomainError("exact_div: division is not exact");
    return Poly<R>(std::move(q));
}

// Division with remainder over a field.
template <class R>
std::pair<Poly<R>, Poly<R>> divmod(const Poly<R>& a, const Poly<R>& b) {
    if (b.zero()) throw ZeroPolynomial("division by zero polynomial");
    if (a.degree() < b.degree()) return {Poly<R>(), a};
    std::vector<R> rem = a.coeffs();
    const int db = b.degree();
    std::vector<R> q(static_cast<std::size_t>(a.degree() - db + 1), R(0));
    R inv = R(1) / b.lead();
    for (int k = a.degree() - db; k >= 0; --k) {
        const R top = rem[static_cast<std::size_t>(k + db)];
        if (is_zero(top)) continue;
        R c = top * inv;
        q[static_cast<std::size_t>(k)] = c;
        for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k + j)] -= c * b.at(static_cast<std::size_t>(j));
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Poly<R>(std::move(q)), Poly<R>(std::move(rem))};
}

template <class R>
Poly<R> operator%(const Poly<R>& a, const Poly<R>& b) {
    return divmod(a, b).second;
}

// Pseudo-remainder: lead(b)^(deg a - deg b + 1) * a mod b, computed without
// division so it works over any integral domain.
template <class R>
Poly<R> pseudo_rem(const Poly<R>& a, const Poly<R>& b) {
    if (b.zero()) throw ZeroPolynomial("pseudo-remainder by zero polynomial");
    if (a.degree() < b.degree()) return a;
    std::vector<R> rem = a.coeffs();
    const int db = b.degree();
    const R& lb = b.lead();
    int steps = a.degree() - db + 1;
    for (int k = a.degree(); k >= db; --k) {
        R top = rem[static_cast<std::size_t>(k)];
        for (auto& r : rem) r *= lb;
        if (!is_zero(top))
            for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= top * b.at(static_cast<std::size_t>(j));
        --steps;
    }
    (void)steps;
    rem.resize(static_cast<std::size_t>(db));
    return Poly<R>(std::move(rem));
}

// ---------------------------------------------------------------------------
// Content, primitive parts and gcds.

inline Integer ring_gcd(const Integer& a, const Integer& b) { return gcd(a, b); }

inline Integer content(const IntPoly& p) {
    Integer g = 0;
    for (const auto& c : p.coeffs()) {
        g = gcd(g, c);
        if (g == 1) break;
    }
    if (!p.zero() && sgn(p.lead()) < 0) g = -g;
    return g;
}

inline IntPoly primitive_part(const IntPoly& p) {
    if (p.zero()) return p;
    return exact_div_scalar(p, content(p));
}

// Writes p = scale * q with q a primitive integer polynomial with positive
// leading coefficient.
inline std::pair<IntPoly, Rational> to_primitive_integer(const UniPoly& p) {
    if (p.zero()) return {IntPoly(), Rational(0)};
    Integer den = 1;
    for (const auto& c : p.coeffs()) den = lcm(den, c.get_den());
    std::vector<Integer> v;
    v.reserve(p.size());
    for (const auto& c : p.coeffs()) v.push_back(Integer(c.get_num() * (den / c.get_den())));
    IntPoly ip(std::move(v));
    Integer cont = content(ip);
    return {exact_div_scalar(ip, cont), Rational(cont) / Rational(den)};
}

inline UniPoly to_rational(const IntPoly& p) {
    return p.map<Rational>([](const Integer& c) { return Rational(c); });
}

inline UniPoly monic(const UniPoly& p) {
    if (p.zero()) return p;
    return p.scaled(Rational(1) / p.lead());
}

namespace detail {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
inline u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1;
    for (; e; e >>= 1, a = mulmod(a, a, p))
        if (e & 1) r = mulmod(r, a, p);
    return r;
}
inline u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

inline void trim_mod(std::vector<u64>& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<u64> reduce_mod(const IntPoly& a, u64 p) {
    std::vector<u64> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = mpz_fdiv_ui(a.at(i).get_mpz_t(), p);
    trim_mod(out);
    return out;
}

// Monic gcd in F_p[x] by the Euclidean algorithm.
inline std::vector<u64> gcd_mod(std::vector<u64> a, std::vector<u64> b, u64 p) {
    while (!b.empty()) {
        const u64 inv = invmod(b.back(), p);
        const std::size_t db = b.size() - 1;
        while (a.size() >= b.size()) {
            const u64 c = mulmod(a.back(), inv, p);
            const std::size_t shift = a.size() - b.size();
            for (std::size_t j = 0; j <= db; ++j) a[shift + j] = (a[shift + j] + p - mulmod(c, b[j], p)) % p;
            trim_mod(a);
        }
        std::swap(a, b);
    }
    if (!a.empty()) {
        const u64 inv = invmod(a.back(), p);
        for (auto& c : a) c = mulmod(c, inv, p);
    }
    return a;
}

inline bool divides_exactly(const IntPoly& a, const IntPoly& b) {
    try {
        exact_div(a, b);
        return true;
    } catch (const DomainError&) {
        return false;
    }
}

}  // namespace detail

// Gcd of primitive integer polynomials by reduction modulo word-size primes
// and Chinese remaindering.  A candidate is accepted once it is stable under
// one more prime and divides both inputs.
inline IntPoly modular_gcd(const IntPoly& A, const IntPoly& B) {
    const Integer lc = gcd(A.lead(), B.lead());
    Integer prime = Integer(1) << 62;
    Integer modulus = 0;
    std::vector<Integer> acc, previous;
    int degree = std::min(A.degree(), B.degree()) + 1;
    for (int iter = 0; iter < 100000; ++iter) {
        mpz_nextprime(prime.get_mpz_t(), prime.get_mpz_t());
        const detail::u64 p = mpz_get_ui(prime.get_mpz_t());
        if (mpz_fdiv_ui(A.lead().get_mpz_t(), p) == 0 || mpz_fdiv_ui(B.lead().get_mpz_t(), p) == 0) continue;
        std::vector<detail::u64> g = detail::gcd_mod(detail::reduce_mod(A, p), detail::reduce_mod(B, p), p);
        const int d = static_cast<int>(g.size()) - 1;
        if (d == 0) return IntPoly(Integer(1));
        if (d > degree) continue;  // unlucky prime
        const detail::u64 lcp = mpz_fdiv_ui(lc.get_mpz_t(), p);
        for (auto& c : g) c = detail::mulmod(c, lcp, p);
        if (d < degree) {
            degree = d;
            acc.assign(g.size(), Integer(0));
            for (std::size_t i = 0; i < g.size(); ++i) acc[i] = Integer(static_cast<unsigned long>(g[i]));
            modulus = prime;
            previous.clear();
            continue;
        }
        // CRT: x = acc + modulus * ((g - acc) * modulus^-1 mod p)
        const detail::u64 minv = detail::invmod(mpz_fdiv_ui(modulus.get_mpz_t(), p), p);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const detail::u64 r = mpz_fdiv_ui(acc[i].get_mpz_t(), p);
            const detail::u64 t = detail::mulmod((g[i] + p - r) % p, minv, p);
            if (t != 0) acc[i] += modulus * Integer(static_cast<unsigned long>(t));
        }
        modulus *= prime;
        // Symmetric representatives; a candidate is tried once they repeat.
        const Integer half = modulus / 2;
        std::vector<Integer> sym(acc.size());
        for (std::size_t i = 0; i < acc.size(); ++i) sym[i] = acc[i] > half ? Integer(acc[i] - modulus) : acc[i];
        if (sym != previous) {
            previous = std::move(sym);
            continue;
        }
        IntPoly cand = primitive_part(IntPoly(previous));
        if (detail::divides_exactly(A, cand) && detail::divides_exactly(B, cand)) return cand;
    }
    throw DomainError("modular_gcd did not converge");
}

// Monic gcd over Q.
inline UniPoly gcd(const UniPoly& a, const UniPoly& b) {
    if (a.zero()) return monic(b);
    if (b.zero()) return monic(a);
    if (a.degree() == 0 || b.degree() == 0) return UniPoly(Rational(1));
    IntPoly x = to_primitive_integer(a).first, y = to_primitive_integer(b).first;
    return monic(to_rational(modular_gcd(x, y)));
}

// Gcd in Q[n][y] by the primitive remainder sequence; contents are
// gcds in Q[n].
inline UniPoly content(const ParamPoly& p) {
    UniPoly g;
    for (const auto& c : p.coeffs()) {
        g = gcd(g, c);
        if (g.degree() == 0) break;
    }
    return g;
}

inline ParamPoly primitive_part(const ParamPoly& p) {
    if (p.zero()) return p;
    UniPoly c = content(p);
    return p.map<UniPoly>([&](const UniPoly& q) { return exact_div(q, c); });
}

inline ParamPoly gcd(const ParamPoly& a, const ParamPoly& b) {
    if (a.zero()) return primitive_part(b);
    if (b.zero()) return primitive_part(a);
    ParamPoly x = primitive_part(a), y = primitive_part(b);
    UniPoly cg = gcd(content(a), content(b));
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.zero()) {
        ParamPoly r = pseudo_rem(x, y);
        x = std::move(y);
        y = r.zero() ? r : primitive_part(r);
    }
    return x.map<UniPoly>([&](const UniPoly& q) { return q * cg; });
}

// Squarefree part over Q.
inline UniPoly squarefree_part(const UniPoly& p) {
    if (p.degree() <= 0) return p;
    UniPoly g = gcd(p, p.derivative());
    return g.degree() == 0 ? p : divmod(p, g).first;
}

// ---------------------------------------------------------------------------
// Formatting.

inline std::string format_coeff(const Rational& c) { return c.get_str(); }
inline std::string format_coeff(const Integer& c) { return c.get_str(); }

template <class R>
std::string to_string(const Poly<R>& p, const std::string& var = "x") {
    if (p.zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int k = p.degree(); k >= 0; --k) {
        const R& c = p.at(static_cast<std::size_t>(k));
        if (is_zero(c)) continue;
        std::string cs = format_coeff(c);
        if constexpr (std::is_same_v<R, Rational> || std::is_same_v<R, Integer>) {
            bool neg = sgn(c) < 0;
            if (!first) os << (neg ? " - " : " + ");
            else if (neg) os << "-";
            Rational a = abs(Rational(c));
            if (k == 0 || a != 1) os << a.get_str() << (k ? "*" : "");
        } else {
            if (!first) os << " + ";
            os << "(" << cs << ")" << (k ? "*" : "");
        }
        if (k == 1) os << var;
        else if (k > 1) os << var << "^" << k;
        first = false;
    }
    return os.str();
}

template <class R>
std::string format_coeff(const Poly<R>& c) {
    return to_string(c, "n");
}

template <class R>
std::ostream& operator<<(std::ostream& os, const Poly<R>& p) {
    return os << to_string(p);
}

// Evaluates the parameter of a ParamPoly, giving a polynomial in the main variable.
inline UniPoly eval_param(const ParamPoly& p, const Rational& n) {
    return p.map<Rational>([&](const UniPoly& c) { return c(n); });
}

}  // namespace cyclecert
