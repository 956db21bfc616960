#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "resultant.hpp"

namespace cyclecert {

// ---------------------------------------------------------------------------
// Exact sign evaluation at rational points.  For p integer and x = u/v with
// v > 0, sign p(x) = sign sum c_i u^i v^(d-i).

inline int sign_at(const IntPoly& p, const Rational& x) {
    if (p.zero()) return 0;
    const Integer& u = x.get_num();
    const Integer& v = x.get_den();
    Integer acc = 0;
    Integer vpow = 1;
    // Horner in homogeneous form: acc = acc*u + c_i * v^(d-i)
    for (int i = p.degree(); i >= 0; --i) {
        acc = acc * u + p.at(static_cast<std::size_t>(i)) * vpow;
        vpow *= v;
    }
    return sgn(acc);
}

inline int sign_at(const UniPoly& p, const Rational& x) { return sgn(p(x)); }

// ---------------------------------------------------------------------------
// Sturm sequences.  Each remainder is rescaled by a positive constant to keep
// coefficients primitive; positive scaling leaves sign counts unchanged.

struct SturmChain {
    std::vector<UniPoly> seq;
};

inline SturmChain sturm_chain(const UniPoly& p) {
    if (p.zero()) throw ZeroPolynomial("Sturm chain of the zero polynomial");
    SturmChain chain;
    chain.seq.push_back(p);
    if (p.degree() == 0) return chain;
    chain.seq.push_back(p.derivative());
    UniPoly a = p, b = p.derivative();
    while (b.degree() > 0) {
        UniPoly r = -(a % b);
        if (r.zero()) break;
        // positive rescaling to a primitive integer polynomial
        IntPoly ir = to_primitive_integer(r).first;
        if (sgn(ir.lead()) != sgn(r.lead())) ir = -ir;
        UniPoly next = to_rational(ir);
        chain.seq.push_back(next);
        a = std::move(b);
        b = std::move(next);
    }
    return chain;
}

inline int sign_variations(const std::vector<int>& signs) {
    int count = 0, last = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

inline int sturm_variations(const SturmChain& chain, const Rational& x) {
    std::vector<int> signs;
    signs.reserve(chain.seq.size());
    for (const auto& q : chain.seq) signs.push_back(sign_at(q, x));
    return sign_variations(signs);
}

// Number of distinct real roots of p in the open interval (a, b).
inline int sturm_count(const UniPoly& p, const Rational& a, const Rational& b) {
    if (p.zero()) throw ZeroPolynomial("sturm_count of the zero polynomial");
    if (!(a < b)) throw DomainError("sturm_count needs a < b");
    if (sign_at(p, a) == 0 || sign_at(p, b) == 0)
        throw EndpointRoot("polynomial vanishes at an interval endpoint (" + a.get_str() + ", " + b.get_str() + ")");
    if (p.degree() == 0) return 0;
    SturmChain chain = sturm_chain(p);
    return sturm_variations(chain, a) - sturm_variations(chain, b);
}

// Moves x away from the interval by eps (halving eps if it lands on a root)
// until p(x) != 0.  `outward` is -1 for a left endpoint and +1 for a right one.
inline Rational nudge_endpoint(const UniPoly& p, Rational x, int outward, Rational eps) {
    if (p.zero()) throw ZeroPolynomial("nudge on the zero polynomial");
    while (sign_at(p, x) == 0) {
        Rational cand = x + Rational(outward) * eps;
        if (sign_at(p, cand) != 0) return cand;
        eps /= 2;
    }
    return x;
}

// ---------------------------------------------------------------------------
// Descartes rule of signs with bisection (Vincent-Collins-Akritas).  Used
// for large degrees where Sturm sequences are too expensive.

namespace detail {

inline int coefficient_variations(const std::vector<Integer>& c) {
    int count = 0, last = 0;
    for (const auto& x : c) {
        int s = sgn(x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

// In place: c(t) <- c(t + 1).
inline void taylor_shift_one(std::vector<Integer>& c) {
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j-- > i;) mpz_add(c[j].get_mpz_t(), c[j].get_mpz_t(), c[j + 1].get_mpz_t());
}

// In place: c(t) <- c(t + s) for an integer s.
inline void taylor_shift(std::vector<Integer>& c, const Integer& s) {
    if (s == 0) return;
    const std::size_t n = c.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 1; j-- > i;) mpz_addmul(c[j].get_mpz_t(), c[j + 1].get_mpz_t(), s.get_mpz_t());
}

// Number of sign variations of (1+t)^d c(1/(1+t)): an upper bound for the
// number of roots of c in (0, 1), exact when it is 0 or 1.
inline int descartes_bound_unit(const std::vector<Integer>& c) {
    std::vector<Integer> r(c.rbegin(), c.rend());
    taylor_shift_one(r);
    return coefficient_variations(r);
}

// c(t) <- 2^d c(t/2)
inline std::vector<Integer> halve(const std::vector<Integer>& c) {
    const std::size_t d = c.size() - 1;
    std::vector<Integer> out(c.size());
    for (std::size_t i = 0; i <= d; ++i) mpz_mul_2exp(out[i].get_mpz_t(), c[i].get_mpz_t(), static_cast<mp_bitcnt_t>(d - i));
    return out;
}

inline void strip_gcd(std::vector<Integer>& c) {
    Integer g = 0;
    for (const auto& x : c) g = gcd(g, x);
    if (g > 1)
        for (auto& x : c) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

struct UnitInterval {
    Integer num;       // left end = num / 2^depth
    unsigned depth;
};

// Isolates roots of c in (0,1); calls `found` with (left numerator, depth,
// exact) where exact means the root is exactly the left end.
template <class F>
bool vca_isolate(std::vector<Integer> c, const Integer& num, unsigned depth, unsigned max_depth, F&& found) {
    // exact root at the left end is handled by the caller via the midpoint test
    int v = descartes_bound_unit(c);
    if (v == 0) return true;
    if (v == 1) {
        found(num, depth, false);
        return true;
    }
    if (depth >= max_depth) return false;
    strip_gcd(c);
    std::vector<Integer> left = halve(c);
    std::vector<Integer> right = left;
    taylor_shift_one(right);
    // midpoint root: right(0) == 0
    Integer mid = num * 2 + 1;
    bool ok = true;
    if (sgn(right[0]) == 0) {
        found(mid, depth + 1, true);
        right.erase(right.begin());
        if (right.empty()) return true;
    }
    ok = vca_isolate(std::move(left), Integer(num * 2), depth + 1, max_depth, found) && ok;
    ok = ok && vca_isolate(std::move(right), mid, depth + 1, max_depth, found);
    return ok;
}

// Integer coefficients of a positive multiple of p(a + (b - a) t).
inline std::vector<Integer> to_unit_interval(const UniPoly& p, const Rational& a, const Rational& b) {
    IntPoly ip = to_primitive_integer(p).first;
    const std::size_t d = static_cast<std::size_t>(ip.degree());
    Integer v = lcm(Integer(a.get_den()), Integer(b.get_den()));
    Integer u = a.get_num() * (v / a.get_den());
    Integer w = b.get_num() * (v / b.get_den()) - u;  // > 0
    // P1(x) = v^d p(x/v), then shift by u, then scale by w.
    std::vector<Integer> c(d + 1);
    Integer vp = 1;
    for (std::size_t i = d + 1; i-- > 0;) {
        c[i] = ip.at(i) * vp;
        vp *= v;
    }
    taylor_shift(c, u);
    Integer wp = 1;
    for (std::size_t i = 0; i <= d; ++i) {
        c[i] *= wp;
        wp *= w;
    }
    strip_gcd(c);
    return c;
}

}  // namespace detail

// Root count in the open interval (a, b) by Descartes bisection on the
// squarefree part, without any post-processing of isolating intervals.
inline int descartes_count_raw(const UniPoly& p, const Rational& a, const Rational& b) {
    UniPoly q = p;
    for (const Rational& e : {a, b}) {
        UniPoly lin = UniPoly({Rational(-e), Rational(1)});
        while (q.degree() > 0 && sign_at(q, e) == 0) q = divmod(q, lin).first;
    }
    if (q.degree() <= 0) return 0;
    int count = 0;
    if (!detail::vca_isolate(detail::to_unit_interval(q, a, b), Integer(0), 0, 200u, [&](const Integer&, unsigned, bool) { ++count; })) {
        count = 0;
        detail::vca_isolate(detail::to_unit_interval(squarefree_part(q), a, b), Integer(0), 0, 4000u,
                            [&](const Integer&, unsigned, bool) { ++count; });
    }
    return count;
}

struct RootInterval {
    Rational lo, hi;  // lo == hi for an exactly rational root
    bool exact() const { return lo == hi; }
};

// Isolating intervals for the distinct real roots of p in the open interval
// (a, b).  Intervals are open unless exact; returned in increasing order.
inline std::vector<RootInterval> isolate_real_roots(const UniPoly& p, const Rational& a, const Rational& b) {
    if (p.zero()) throw ZeroPolynomial("root isolation of the zero polynomial");
    if (!(a < b)) throw DomainError("isolate_real_roots needs a < b");
    std::vector<RootInterval> out;
    if (p.degree() == 0) return out;
    UniPoly q = p;
    // Drop roots at the endpoints: the interval is open.
    for (const Rational& e : {a, b}) {
        UniPoly lin = UniPoly({Rational(-e), Rational(1)});
        while (q.degree() > 0 && sign_at(q, e) == 0) q = divmod(q, lin).first;
    }
    if (q.degree() <= 0) return out;
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<Integer> c = detail::to_unit_interval(q, a, b);
        out.clear();
        Rational width = b - a;
        bool ok = detail::vca_isolate(c, Integer(0), 0, attempt == 0 ? 200u : 4000u,
                                      [&](const Integer& num, unsigned depth, bool exact) {
                                          Rational scale(Integer(1), Integer(1) << depth);
                                          Rational lo = a + width * Rational(num) * scale;
                                          if (exact) out.push_back({lo, lo});
                                          else out.push_back({lo, lo + width * scale});
                                      });
        if (ok) break;
        q = squarefree_part(q);  // repeated roots stall the bisection
        if (attempt == 1) throw DomainError("root isolation did not terminate");
    }
    std::sort(out.begin(), out.end(), [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
    // A dyadic end of an isolating interval can coincide with a neighbouring
    // exact root; pull such ends inward so every interval has nonzero ends.
    for (auto& iv : out) {
        if (iv.exact()) continue;
        for (Rational* end : {&iv.hi, &iv.lo}) {
            if (sign_at(q, *end) != 0) continue;
            Rational step = (iv.hi - iv.lo) / 2;
            const Rational fixed = (end == &iv.hi) ? iv.lo : iv.hi;
            for (;;) {
                Rational cand = (end == &iv.hi) ? Rational(*end - step) : Rational(*end + step);
                Rational lo = (end == &iv.hi) ? fixed : cand, hi = (end == &iv.hi) ? cand : fixed;
                if (sign_at(q, cand) != 0 && descartes_count_raw(q, lo, hi) == 1) {
                    *end = cand;
                    break;
                }
                step /= 2;
            }
        }
    }
    return out;
}

// Number of distinct real roots of p in the open interval (a, b), by
// Descartes bisection.  Endpoint roots are excluded.
inline int descartes_count(const UniPoly& p, const Rational& a, const Rational& b) {
    return static_cast<int>(isolate_real_roots(p, a, b).size());
}

// Degree threshold above which counting switches from Sturm to Descartes.
inline constexpr int kSturmDegreeLimit = 40;

// Distinct real roots in the open interval (a, b).  Unlike sturm_count,
// endpoint roots are allowed (and not counted).
inline int count_real_roots(const UniPoly& p, const Rational& a, const Rational& b) {
    if (p.zero()) throw ZeroPolynomial("root count of the zero polynomial");
    if (p.degree() <= kSturmDegreeLimit && sign_at(p, a) != 0 && sign_at(p, b) != 0) return sturm_count(p, a, b);
    return descartes_count(p, a, b);
}

// Shrinks an isolating interval of a squarefree polynomial by bisection.
inline RootInterval refine_root(const UniPoly& p, RootInterval iv, const Rational& width) {
    if (iv.exact()) return iv;
    int slo = sign_at(p, iv.lo);
    while (iv.hi - iv.lo > width) {
        Rational mid = (iv.lo + iv.hi) / 2;
        int sm = sign_at(p, mid);
        if (sm == 0) return {mid, mid};
        if (sm == slo) iv.lo = mid;
        else iv.hi = mid;
    }
    return iv;
}

// A real algebraic number given by a squarefree defining polynomial and an
// isolating interval (or an exact rational when lo == hi).
struct AlgebraicNumber {
    UniPoly poly;
    RootInterval iv;
    std::string label;

    static AlgebraicNumber rational(const Rational& r, std::string label = {}) {
        return {UniPoly({Rational(-r), Rational(1)}), {r, r}, label.empty() ? r.get_str() : std::move(label)};
    }
    // The unique root of `poly` in (lo, hi); verified.
    static AlgebraicNumber root_in(const UniPoly& poly, const Rational& lo, const Rational& hi, std::string label) {
        UniPoly sf = squarefree_part(poly);
        auto roots = isolate_real_roots(sf, lo, hi);
        if (roots.size() != 1)
            throw DomainError("expected exactly one root of " + to_string(poly, "n") + " in (" + lo.get_str() + ", " + hi.get_str() + ")");
        return {sf, roots.front(), std::move(label)};
    }
    bool is_rational() const { return iv.exact(); }
    void refine(const Rational& width) { iv = refine_root(poly, iv, width); }
    double approx() const { return to_double((iv.lo + iv.hi) / 2); }
};

// Sign of q at an algebraic number.
inline int sign_at(const UniPoly& q, AlgebraicNumber alpha) {
    if (alpha.is_rational()) return sign_at(q, alpha.iv.lo);
    UniPoly g = gcd(q, alpha.poly);
    if (g.degree() > 0 && sign_at(g, alpha.iv.lo) * sign_at(g, alpha.iv.hi) < 0) return 0;
    // q(alpha) != 0: shrink until q has no root in the interval
    while (count_real_roots(q, alpha.iv.lo, alpha.iv.hi) > 0 || sign_at(q, alpha.iv.lo) == 0 || sign_at(q, alpha.iv.hi) == 0) {
        alpha.refine((alpha.iv.hi - alpha.iv.lo) / 4);
        if (alpha.is_rational()) return sign_at(q, alpha.iv.lo);
    }
    return sign_at(q, alpha.iv.lo);
}

// -1, 0, +1 for alpha <, =, > r.
inline int compare(AlgebraicNumber alpha, const Rational& r) {
    if (alpha.is_rational()) return sgn(alpha.iv.lo - r);
    if (sign_at(alpha.poly, r) == 0 && alpha.iv.lo < r && r < alpha.iv.hi) return 0;
    while (alpha.iv.lo < r && r < alpha.iv.hi) {
        alpha.refine((alpha.iv.hi - alpha.iv.lo) / 2);
        if (alpha.is_rational()) return sgn(alpha.iv.lo - r);
    }
    return alpha.iv.hi <= r ? -1 : 1;
}

// -1, 0, +1 for x <, =, > y.
inline int compare(AlgebraicNumber x, AlgebraicNumber y) {
    if (x.is_rational()) return -compare(y, x.iv.lo);
    if (y.is_rational()) return compare(x, y.iv.lo);
    const UniPoly common = gcd(x.poly, y.poly);
    // equal values are exactly the case where both are roots of the gcd and
    // one isolating interval sits inside the other
    const bool may_equal = common.degree() > 0 && sign_at(common, x) == 0 && sign_at(common, y) == 0;
    for (int it = 0; it < 100000; ++it) {
        if (x.iv.hi <= y.iv.lo) return -1;
        if (y.iv.hi <= x.iv.lo) return 1;
        if (may_equal && ((y.iv.lo <= x.iv.lo && x.iv.hi <= y.iv.hi) || (x.iv.lo <= y.iv.lo && y.iv.hi <= x.iv.hi))) return 0;
        if (x.iv.hi - x.iv.lo >= y.iv.hi - y.iv.lo) x.refine((x.iv.hi - x.iv.lo) / 2);
        else y.refine((y.iv.hi - y.iv.lo) / 2);
        if (x.is_rational() || y.is_rational()) return compare(x, y);
    }
    throw DomainError("could not separate algebraic numbers");
}

// Counts distinct real roots of p strictly between two algebraic numbers
// alpha < beta.  Roots of p at alpha or beta are detected through gcds with
// the defining polynomials and excluded.
inline int count_roots_between(const UniPoly& p, AlgebraicNumber alpha, AlgebraicNumber beta) {
    if (p.zero()) throw ZeroPolynomial("root count of the zero polynomial");
    UniPoly q = p;
    int extra = 0;
    auto lower = alpha.iv.lo, upper = beta.iv.hi;
    for (AlgebraicNumber* e : {&alpha, &beta}) {
        if (e->is_rational()) continue;
        UniPoly g = gcd(q, e->poly);
        if (g.degree() <= 0) continue;
        while (q.degree() > 0) {
            auto [quot, rem] = divmod(q, g);
            if (!rem.zero()) break;
            q = quot;
        }
        // roots of g (a factor of a squarefree polynomial) that lie strictly
        // between alpha and beta were removed from q; count them back in
        Rational bound = 1;
        for (const auto& c : g.coeffs()) bound += abs(c / g.lead());
        for (RootInterval r : isolate_real_roots(g, -bound, bound)) {
            AlgebraicNumber rho{g, r, "root"};
            auto position = [&](const AlgebraicNumber& ref) { return compare(rho, ref); };
            if (position(alpha) > 0 && position(beta) < 0) ++extra;
        }
    }
    if (q.degree() <= 0) return extra;
    // shrink endpoint intervals until q has no roots near them
    auto clear = [&](AlgebraicNumber& e) {
        if (e.is_rational()) return;
        while (sign_at(q, e.iv.lo) == 0 || sign_at(q, e.iv.hi) == 0 || count_real_roots(q, e.iv.lo, e.iv.hi) > 0) {
            e.refine((e.iv.hi - e.iv.lo) / 4);
            if (e.is_rational()) return;
        }
    };
    if (compare(alpha, beta) >= 0) throw DomainError("count_roots_between needs alpha < beta");
    while (alpha.iv.hi > beta.iv.lo) {
        if (!alpha.is_rational()) alpha.refine((alpha.iv.hi - alpha.iv.lo) / 4);
        if (!beta.is_rational()) beta.refine((beta.iv.hi - beta.iv.lo) / 4);
    }
    clear(alpha);
    clear(beta);
    lower = alpha.is_rational() ? alpha.iv.lo : alpha.iv.hi;
    upper = beta.is_rational() ? beta.iv.lo : beta.iv.lo;
    if (!(lower < upper)) throw DomainError("count_roots_between: endpoints not separated");
    int inner = count_real_roots(q, lower, upper);
    // the shrunken gaps (alpha, lower] and [upper, beta) hold no roots of q;
    // a root exactly at a rational `lower`/`upper` would be an interval end
    if (!alpha.is_rational() && sign_at(q, lower) == 0) ++inner;
    if (!beta.is_rational() && sign_at(q, upper) == 0) ++inner;
    return inner + extra;
}

}  // namespace cyclecert
