#pragma once

// Dulac-type functions V = g0(y) + g1(y) x + g2(y) x^2 for
//   x' = y^3 - x^3,  y' = -x + m y^5
// and the associated function M = <grad V, X> - k V div X.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "../poly/family.hpp"
#include "../poly/resultant.hpp"
#include "../poly/surd.hpp"
#include "../system.hpp"

namespace cyclecert::dulac {

enum class Provenance { NCSimple, NCKm, Kummer35, UniqT12, Prop925, Prop547, Custom };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::NCSimple: return "PropNC-simple";
        case Provenance::NCKm: return "PropNC-Km";
        case Provenance::Kummer35: return "Prop35-Kummer";
        case Provenance::UniqT12: return "PropUniq-T12";
        case Provenance::Prop925: return "Prop925-explicit";
        case Provenance::Prop547: return "Prop547-invariant";
        default: return "custom";
    }
}

// How the parameter slot N of a symbolic construction relates to m.
enum class Convention { Direct, NFourth, NSquare };

inline MPoly m_expression(Convention c) {
    switch (c) {
        case Convention::NFourth: return MPoly::var(N, 4);
        case Convention::NSquare: return MPoly::var(N, 2);
        default: return MPoly::var(M);
    }
}

struct DulacSpec {
    MPoly g0, g1, g2;  // polynomials in y; may involve the slots N, S, M
    bool has_g2 = true;
    std::optional<Rational> k;  // empty when k is irrational (k_value then holds it)
    double k_value = 0;
    Provenance provenance = Provenance::Custom;
    Convention convention = Convention::Direct;
    MPoly m;                           // m as an expression in the parameter slots
    std::optional<AuxAlgebraic> aux;  // s and its defining relation, when present
    std::vector<std::string> audit;

    MPoly V() const {
        const MPoly x = MPoly::var(X);
        MPoly v = g0 + g1 * x;
        if (has_g2) v += g2 * x * x;
        return v;
    }
    PlanarSystem system() const { return cubic_quintic(m); }

    // Substitutes a rational value for the parameter slot.
    DulacSpec at_parameter(const Rational& value) const {
        const int slot = convention == Convention::Direct ? M : N;
        DulacSpec out = *this;
        out.g0 = g0.eval_at(slot, value);
        out.g1 = g1.eval_at(slot, value);
        out.g2 = g2.eval_at(slot, value);
        out.m = m.eval_at(slot, value);
        if (aux) out.aux->relation = aux->relation.eval_at(slot, value);
        out.audit.push_back(std::string(slot == N ? "n" : "m") + " = " + value.get_str());
        return out;
    }
};

// g1 = g2' and g0 = g2''/2 - m y^5 g2'/2 + (5/3) m y^4 g2, the choice that
// kills the x^2 and x^3 terms of M for k = 2/3.
inline MPoly lemma_g0(const MPoly& g2, const MPoly& m) {
    const MPoly y = MPoly::var(Y);
    const MPoly d1 = g2.diff(Y);
    return g2.diff(Y).diff(Y).scaled(Rational(1, 2)) - (m * y.pow(5) * d1).scaled(Rational(1, 2)) +
           (m * y.pow(4) * g2).scaled(Rational(5, 3));
}

inline bool quadratic_relations_hold(const DulacSpec& V) {
    return V.has_g2 && V.g1 == V.g2.diff(Y) && V.g0 == lemma_g0(V.g2, V.m);
}

inline DulacSpec from_g2(MPoly g2, const MPoly& m, Provenance p, Convention c) {
    DulacSpec V;
    V.g1 = g2.diff(Y);
    V.g0 = lemma_g0(g2, m);
    V.g2 = std::move(g2);
    V.k = Rational(2, 3);
    V.provenance = p;
    V.convention = c;
    V.m = m;
    return V;
}

// M written as scale * y^y_power * reduced, with reduced = phi x + psi when
// M is linear in x.
struct MFunction {
    MPoly full;
    Rational scale = 1;
    int y_power = 0;
    MPoly reduced;
    MPoly phi, psi;
    int x_degree = 0;

    bool linear_in_x() const { return x_degree <= 1; }
    std::string factor_str() const {
        std::string f = scale == 1 ? std::string() : scale.get_str() + "*";
        return f + (y_power == 0 ? std::string("1") : "y^" + std::to_string(y_power));
    }

    static MFunction from(const MPoly& M, const Rational& scale = 1, bool strip_y = true) {
        MFunction f;
        f.full = M;
        f.scale = scale;
        f.y_power = strip_y && !M.zero() ? M.min_degree(Y) : 0;
        Mono shift{};
        shift[Y] = -f.y_power;
        f.reduced = M.times_mono(shift).scaled(1 / scale);
        f.x_degree = std::max(f.reduced.degree(X), 0);
        f.phi = f.reduced.coeff_of(X, 1);
        f.psi = f.reduced.coeff_of(X, 0);
        return f;
    }
};

// M = <grad V, X> - k V div X.
inline MPoly m_polynomial(const MPoly& V, const Rational& k, const PlanarSystem& sys) {
    return sys.lie(V) - (V * sys.divergence()).scaled(k);
}

inline MFunction compute_M(const MPoly& V, const Rational& k, const PlanarSystem& sys, const Rational& scale = 1,
                           bool strip_y = true) {
    return MFunction::from(m_polynomial(V, k, sys), scale, strip_y);
}

inline MFunction compute_M(const DulacSpec& V) {
    if (!V.k) throw DomainError("compute_M: the exponent k of " + std::string(to_string(V.provenance)) + " is irrational");
    const bool strip = V.provenance != Provenance::Prop547;
    const Rational scale = V.provenance == Provenance::Prop925 ? Rational(2, 3) : Rational(1);
    return compute_M(V.V(), *V.k, V.system(), scale, strip);
}

// ---------------------------------------------------------------------------
// Builders.  Each rejects parameters outside the range its construction
// is meant for.

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

// V = 2x^2 + y^4 with k = 2/3, for m in (0, 3/10] or symbolic m.
inline DulacSpec build_V_simple(const MPoly& m) {
    DulacSpec V;
    V.g2 = MPoly(2);
    V.g1 = MPoly();
    V.g0 = MPoly::var(Y, 4);
    V.k = Rational(2, 3);
    V.provenance = Provenance::NCSimple;
    V.m = m;
    return V;
}

inline DulacSpec build_V_simple(const Rational& m) {
    require(m > 0 && m <= Rational(3, 10), "build_V_simple needs m in (0, 3/10], got " + m.get_str());
    return build_V_simple(MPoly(m));
}

using Real100 = boost::multiprecision::cpp_bin_float_100;

// The same V with the irrational exponent
//   k = K(m) = 8(11m + R)/(10m + 3)^2,  R = sqrt(m(1 - 4m)(25m - 9)),
// for which M becomes the square (alpha x^2 + beta y^4)^2.
struct KmSquare {
    Rational m;
    Real100 R, K, alpha, beta;
    // coefficients of x^4, x^2 y^4, y^8 in M and in the square
    std::array<Real100, 3> m_coeffs, square_coeffs;
    Real100 max_relative_residual;
};

inline KmSquare nc_km_square(const Rational& m) {
    require(m > Rational(1, 4) && m <= Rational(9, 25), "the K(m) exponent needs m in (1/4, 9/25], got " + m.get_str());
    KmSquare out;
    out.m = m;
    const Real100 mm = to_real100(m);
    out.R = sqrt(mm * (1 - 4 * mm) * (25 * mm - 9));
    out.K = 8 * (11 * mm + out.R) / ((10 * mm + 3) * (10 * mm + 3));
    out.alpha = 2 / (3 + 10 * mm) * sqrt((mm + out.R) * (11 * mm + out.R) / mm);
    out.beta = 2 * (3 - 10 * mm) / (3 + 10 * mm) * sqrt(mm * (11 * mm + out.R) / (mm + out.R));
    // <grad V, X> = -4x^4 + 4m y^8 and V div X = -6x^4 + (10m - 3) x^2 y^4 + 5m y^8
    out.m_coeffs = {-4 + 6 * out.K, -out.K * (10 * mm - 3), 4 * mm - 5 * mm * out.K};
    out.square_coeffs = {out.alpha * out.alpha, 2 * out.alpha * out.beta, out.beta * out.beta};
    out.max_relative_residual = 0;
    for (int i = 0; i < 3; ++i) {
        Real100 scale = abs(out.m_coeffs[i]) > 1 ? Real100(abs(out.m_coeffs[i])) : Real100(1);
        Real100 rel = abs(out.m_coeffs[i] - out.square_coeffs[i]) / scale;
        if (rel > out.max_relative_residual) out.max_relative_residual = rel;
    }
    return out;
}

inline DulacSpec build_V_nc_km(const Rational& m) {
    KmSquare sq = nc_km_square(m);
    DulacSpec V = build_V_simple(MPoly(m));
    V.provenance = Provenance::NCKm;
    V.k.reset();
    V.k_value = static_cast<double>(sq.K);
    V.audit.push_back("k = K(m) = " + sq.K.str(30));
    return V;
}

// Pochhammer symbol (a)_j.
inline Rational pochhammer(const Rational& a, int j) {
    Rational out = 1;
    for (int i = 0; i < j; ++i) out *= a + i;
    return out;
}

inline Rational factorial(int j) {
    Rational out = 1;
    for (int i = 2; i <= j; ++i) out *= i;
    return out;
}

// V1 = g1' + g1 x with k = 1/3 and
//   g1(y) = y sum_{j <= J} ((-1/9)_j / (7/6)_j) (m/6)^j y^(6j) / j!.
// The exact solution carries an extra positive factor (m/6)^(1/6), which
// scales V and M alike and is left out.
inline DulacSpec build_V1_kummer(const Rational& m, int J) {
    require(m > 0, "build_V1_kummer needs m > 0, got " + m.get_str());
    require(J >= 0, "build_V1_kummer needs a nonnegative truncation");
    DulacSpec V;
    for (int j = 0; j <= J; ++j) {
        Rational c = pochhammer(Rational(-1, 9), j) / pochhammer(Rational(7, 6), j) * rpow(m / 6, j) / factorial(j);
        V.g1 += MPoly::var(Y, 6 * j + 1).scaled(c);
    }
    V.g0 = V.g1.diff(Y);
    V.has_g2 = false;
    V.k = Rational(1, 3);
    V.provenance = Provenance::Kummer35;
    V.m = MPoly(m);
    V.audit.push_back("positive factor (m/6)^(1/6) omitted from g1");
    V.audit.push_back("series truncated after j = " + std::to_string(J));
    return V;
}

// Closed-form coefficient of y^(6j+4) in M1 (without the (m/6)^(1/6) factor):
//   j = 0: (3 - 5m)/3,  j >= 1: (1/3) ((-1/9)_j/(7/6)_j) (m/6)^j (1/j!) (m(6j+1)(18j-5) + 3).
inline Rational kummer_m1_coefficient(const Rational& m, int j) {
    if (j == 0) return (3 - 5 * m) / 3;
    return Rational(1, 3) * pochhammer(Rational(-1, 9), j) / pochhammer(Rational(7, 6), j) * rpow(m / 6, j) / factorial(j) *
           (m * (6 * j + 1) * (18 * j - 5) + 3);
}

// Left side of the third-order equation whose solutions make M independent of x.
inline MPoly ode3_residual(const MPoly& g2, const MPoly& m) {
    const MPoly y = MPoly::var(Y);
    return g2.diff(Y).diff(Y).diff(Y).scaled(Rational(-1, 2)) + (m * y.pow(5) * g2.diff(Y).diff(Y)).scaled(Rational(3, 2)) -
           (m * y.pow(4) * g2.diff(Y)).scaled(Rational(5, 2)) + ((MPoly(3) - m.scaled(10)) * y.pow(3) * g2).scaled(Rational(2, 3));
}

// coeff * radicand^(1/3), real cube root.
struct CubeRoot {
    Rational coeff;
    Rational radicand;
    Rational cubed() const { return coeff * coeff * coeff * radicand; }
    double value() const { return to_double(coeff) * std::cbrt(to_double(radicand)); }
};

// C2 = -(3/5 - m)^(2/3), taken as the real cube root of the square for every m.
inline CubeRoot uniq_C2(const Rational& m) {
    Rational d = Rational(3, 5) - m;
    return {Rational(-1), d * d};
}

// Even truncated solution of the third-order equation with C0 = 1, C1 = 0 and
// the given C2, by the recursion
//   c_{k+3} (k+1)(k+2)(k+3)/2 = ((3/2) m (k-3)(k-4) - (5/2) m (k-3) + (2/3)(3 - 10m)) c_{k-3}.
// The slot S stands for C2.radicand^(1/3); the result is exact.
inline DulacSpec build_V2_series(const Rational& m, const CubeRoot& C2, int degree) {
    require(m > 0, "build_V2_series needs m > 0, got " + m.get_str());
    require(degree >= 2, "build_V2_series needs degree >= 2");
    std::vector<MPoly> c(static_cast<std::size_t>(degree) + 1);
    c[0] = MPoly(1);
    c[2] = MPoly::var(S).scaled(C2.coeff);
    for (int k = 3; k + 3 <= degree; ++k) {
        if (c[static_cast<std::size_t>(k - 3)].zero()) continue;
        Rational kk = k;
        Rational f = Rational(3, 2) * m * (kk - 3) * (kk - 4) - Rational(5, 2) * m * (kk - 3) + Rational(2, 3) * (3 - 10 * m);
        f = f * 2 / ((kk + 1) * (kk + 2) * (kk + 3));
        c[static_cast<std::size_t>(k + 3)] = c[static_cast<std::size_t>(k - 3)].scaled(f);
    }
    MPoly g2;
    for (int k = 0; k <= degree; ++k) g2 += c[static_cast<std::size_t>(k)] * MPoly::var(Y, k);
    DulacSpec V = from_g2(g2, MPoly(m), Provenance::Custom, Convention::Direct);
    V.aux = AuxAlgebraic{S, MPoly::var(S, 3) - MPoly(C2.radicand), "s = (" + C2.radicand.get_str() + ")^(1/3)"};
    V.audit.push_back("series solution, C0 = 1, C1 = 0, C2 = " + C2.coeff.get_str() + " * (" + C2.radicand.get_str() +
                      ")^(1/3), degree " + std::to_string(degree));
    return V;
}

// The degree-12 seed
//   (1/89100)(3-10m)(3+35m) y^12 - (1/6300) s (3-13m) y^8 + (1/90)(3-10m) y^6 - (1/25) s y^2 + 1,
// with s = (75 - 125m)^(2/3) in slot S.
inline MPoly uniq_g2(const MPoly& m) {
    const MPoly y = MPoly::var(Y), s = MPoly::var(S);
    const MPoly a = MPoly(3) - m.scaled(10), b = MPoly(3) + m.scaled(35), c = MPoly(3) - m.scaled(13);
    return (a * b * y.pow(12)).scaled(Rational(1, 89100)) - (s * c * y.pow(8)).scaled(Rational(1, 6300)) +
           (a * y.pow(6)).scaled(Rational(1, 90)) - (s * y.pow(2)).scaled(Rational(1, 25)) + MPoly(1);
}

// Uniqueness construction in the variables n = m^(1/4) and s, s^3 = (75 - 125 n^4)^2.
inline DulacSpec build_V2_uniq_symbolic() {
    const MPoly m = MPoly::var(N, 4);
    DulacSpec V = from_g2(uniq_g2(m), m, Provenance::UniqT12, Convention::NFourth);
    const MPoly t = MPoly(75) - m.scaled(125);
    V.aux = AuxAlgebraic{S, MPoly::var(S, 3) - t * t, "s = (75 - 125 n^4)^(2/3)"};
    return V;
}

// The same for a rational m in [1/2, 3/5); s keeps its defining relation.
inline DulacSpec build_V2_uniq(const Rational& m) {
    require(m >= Rational(1, 2) && m < Rational(3, 5), "the uniqueness construction needs m in [1/2, 3/5), got " + m.get_str());
    DulacSpec V = from_g2(uniq_g2(MPoly(m)), MPoly(m), Provenance::UniqT12, Convention::Direct);
    const Rational t = 75 - 125 * m;
    V.aux = AuxAlgebraic{S, MPoly::var(S, 3) - MPoly(t * t), "s = (" + t.get_str() + ")^(2/3)"};
    V.audit.push_back("m = " + m.get_str());
    return V;
}

// Real value of s = (75 - 125 m)^(2/3).
inline double uniq_s_value(double m) { return std::cbrt((75 - 125 * m) * (75 - 125 * m)); }

// True when the series construction reproduces the degree-12 seed.  Rational
// parts must agree; the parts along the cube roots are compared by cubing.
struct SeriesComparison {
    bool equal = true;
    std::vector<std::string> lines;
};

inline SeriesComparison compare_with_uniq_seed(const Rational& m) {
    DulacSpec series = build_V2_series(m, uniq_C2(m), 12);
    const MPoly seed = uniq_g2(MPoly(m));
    const Rational t = 75 - 125 * m;
    const Rational seed_radicand = t * t, series_radicand = uniq_C2(m).radicand;
    SeriesComparison out;
    for (int k = 0; k <= 12; ++k) {
        MPoly a = series.g2.coeff_of(Y, k), b = seed.coeff_of(Y, k);
        Rational ar = a.coeff_of(S, 0).constant_term(), br = b.coeff_of(S, 0).constant_term();
        Rational as = a.coeff_of(S, 1).constant_term(), bs = b.coeff_of(S, 1).constant_term();
        Rational cube_a = as * as * as * series_radicand, cube_b = bs * bs * bs * seed_radicand;
        bool ok = ar == br && cube_a == cube_b && sgn(as) == sgn(bs);
        if (!ok) out.equal = false;
        if (!is_zero(ar) || !is_zero(br) || !is_zero(as) || !is_zero(bs))
            out.lines.push_back("y^" + std::to_string(k) + ": rational " + ar.get_str() + " vs " + br.get_str() + ", cubed root part " +
                                cube_a.get_str() + " vs " + cube_b.get_str() + (ok ? "" : "  MISMATCH"));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Explicit degree-8 construction for m = n^4, n in (0.77, 0.844).

inline MPoly poly925_A() { return parse_mpoly("9 + 51*n^2 + 213*n^4 + 535*n^6 + 924*n^8 + 756*n^10"); }
inline MPoly poly925_B() { return parse_mpoly("9 + 42*n^2 + 105*n^4 + 130*n^6"); }

inline MPoly g2_925() {
    const MPoly A = poly925_A(), B = poly925_B(), n = MPoly::var(N), y = MPoly::var(Y);
    const MPoly n2 = n.pow(2), n4 = n.pow(4);
    return A.scaled(270) - (n2 * B * y.pow(2)).scaled(756) + ((MPoly(3) - n4.scaled(10)) * A * y.pow(6)).scaled(3) -
           (n2 * (MPoly(3) - n4.scaled(13)) * B * y.pow(8)).scaled(3);
}

inline const Rational& lo925() {
    static const Rational v(77, 100);
    return v;
}
inline const Rational& hi925() {
    static const Rational v(211, 250);
    return v;
}

inline DulacSpec build_V2_prop925_symbolic() {
    return from_g2(g2_925(), MPoly::var(N, 4), Provenance::Prop925, Convention::NFourth);
}

inline DulacSpec build_V2_prop925(const Rational& n) {
    require(n > lo925() && n < hi925(), "the degree-8 construction needs n in (77/100, 211/250), got " + n.get_str());
    return build_V2_prop925_symbolic().at_parameter(n);
}

// Numerator of dM/dx at (1/n, 1/n), whose root in (0.77, 0.85) bounds the
// parameter range where {M = 0} stays out of the region.
inline UniPoly eee_polynomial() {
    return parse_mpoly("88200*n^16 + 107800*n^14 - 4930*n^12 - 37380*n^10 - 15855*n^8 - 2736*n^6 + 576*n^4 + 108*n^2 - 27").to_uni(N);
}

inline AlgebraicNumber n_tilde(const Rational& width = Rational(1, 1000000000)) {
    AlgebraicNumber a = AlgebraicNumber::root_in(eee_polynomial(), Rational(77, 100), Rational(17, 20), "n~");
    a.refine(width);
    return a;
}

// ---------------------------------------------------------------------------
// Degree-12 invariant-region construction with m = n^2.

inline Rational a12_547(const Rational& m) { return Rational(-157) * (10 * m - 3) * (35 * m + 3) / 44550000; }

struct Conditions547 {
    UniPoly det;                 // determinant of the linear system in (a2, a4, a6, a8, a10)
    std::array<UniPoly, 5> num;  // Cramer numerators: a_{2i} = num[i] / det
    MPoly g2_cleared;            // det * g2
};

namespace detail {

// Substitutes x = y = sigma, sigma^2 = 1/n, into a polynomial whose monomials
// all have total degree of the same parity.  For odd degree the common
// factor sigma is dropped.
inline MPoly at_saddle(const MPoly& F) {
    MPoly out;
    for (const auto& [mono, c] : F.terms()) {
        int d = mono[X] + mono[Y];
        Mono r{};
        for (int v = 2; v < kMaxVars; ++v) r[static_cast<std::size_t>(v)] = mono[static_cast<std::size_t>(v)];
        r[N] -= d / 2;
        out += MPoly::monomial(c, r);
    }
    return out;
}

inline Conditions547 solve547_symbolic() {
    const MPoly n = MPoly::var(N), y = MPoly::var(Y), m = n * n;
    // every condition is linear in g2, so the system is assembled column by
    // column from the unknown monomials y^2, ..., y^10
    const MPoly a12 = ((m.scaled(10) - MPoly(3)) * (m.scaled(35) + MPoly(3))).scaled(Rational(-157, 44550000));
    const PlanarSystem sys = cubic_quintic(m);
    auto conditions = [&](const MPoly& g2) {
        DulacSpec V = from_g2(g2, m, Provenance::Prop547, Convention::NSquare);
        MPoly Mf = m_polynomial(V.V(), Rational(2, 3), sys);
        MPoly phi = Mf.coeff_of(X, 1);
        MPoly vv = V.V();
        std::array<MPoly, 5> c{phi.coeff_of(Y, 1), phi.coeff_of(Y, 3), at_saddle(vv), at_saddle(vv.diff(X)), at_saddle(vv.diff(Y))};
        return c;
    };
    std::array<MPoly, 5> base = conditions(MPoly(1) + a12 * y.pow(12));
    std::array<std::array<MPoly, 5>, 5> cols;
    for (int i = 0; i < 5; ++i) {
        cols[static_cast<std::size_t>(i)] = conditions(y.pow(static_cast<unsigned>(2 * i + 2)));
    }
    // each row is cleared of negative powers of n separately
    std::vector<std::vector<UniPoly>> A(5, std::vector<UniPoly>(5));
    std::vector<UniPoly> rhs(5);
    for (int r = 0; r < 5; ++r) {
        int shift = std::max(0, -base[static_cast<std::size_t>(r)].min_degree(N));
        for (int i = 0; i < 5; ++i) shift = std::max(shift, -cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)].min_degree(N));
        Mono sh{};
        sh[N] = shift;
        for (int i = 0; i < 5; ++i)
            A[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] =
                cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)].times_mono(sh).to_uni(N);
        rhs[static_cast<std::size_t>(r)] = -base[static_cast<std::size_t>(r)].times_mono(sh).to_uni(N);
    }
    Conditions547 out;
    out.det = bareiss_determinant(A);
    for (int i = 0; i < 5; ++i) {
        auto Ai = A;
        for (int r = 0; r < 5; ++r) Ai[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = rhs[static_cast<std::size_t>(r)];
        out.num[static_cast<std::size_t>(i)] = bareiss_determinant(Ai);
    }
    MPoly g2 = MPoly::from_uni(out.det, N) * (MPoly(1) + a12 * y.pow(12));
    for (int i = 0; i < 5; ++i) g2 += MPoly::from_uni(out.num[static_cast<std::size_t>(i)], N) * y.pow(static_cast<unsigned>(2 * i + 2));
    out.g2_cleared = g2;
    return out;
}

}  // namespace detail

inline const Conditions547& conditions547() {
    static const Conditions547 c = detail::solve547_symbolic();
    return c;
}

inline const Rational& lo547() {
    static const Rational v(1, 2);
    return v;
}
inline const Rational& hi547() {
    static const Rational v(547, 1000);
    return v;
}

// Solves the linear conditions at a rational n (m = n^2) without any range
// check; g2 is normalized to g2(0) = 1.
inline DulacSpec solve_prop547_conditions(const Rational& n) {
    const Conditions547& C = conditions547();
    const Rational d = C.det(n);
    if (is_zero(d)) throw SingularConditionSystem("the conditions on (a2, a4, a6, a8, a10) are degenerate at n = " + n.get_str());
    const Rational m = n * n;
    MPoly g2 = MPoly(1) + MPoly::var(Y, 12).scaled(a12_547(m));
    for (int i = 0; i < 5; ++i) g2 += MPoly::var(Y, 2 * i + 2).scaled(C.num[static_cast<std::size_t>(i)](n) / d);
    DulacSpec V = from_g2(g2, MPoly(m), Provenance::Prop547, Convention::Direct);
    V.audit.push_back("n = " + n.get_str() + ", m = n^2 = " + m.get_str());
    V.audit.push_back("phi: y^1 and y^3 coefficients vanish (a4, a6)");
    V.audit.push_back("V2 = 0 at the saddles (a8); grad V2 = 0 at the saddles (a2, a10)");
    V.audit.push_back("a12 = -157(10m-3)(35m+3)/44550000 = " + a12_547(m).get_str());
    return V;
}

inline DulacSpec build_V2_prop547_n(const Rational& n) {
    require(n > 0 && n * n >= lo547() && n * n <= hi547(), "the invariant-region construction needs m = n^2 in [1/2, 547/1000], got n = " + n.get_str());
    return solve_prop547_conditions(n);
}

// m must be the square of a rational here: the saddle conditions then have
// rational coefficients.  Other m need the symbolic form in n.
inline DulacSpec build_V2_prop547(const Rational& m) {
    require(m >= lo547() && m <= hi547(), "the invariant-region construction needs m in [1/2, 547/1000], got " + m.get_str());
    Integer num = m.get_num(), den = m.get_den();
    Integer rn = sqrt(num), rd = sqrt(den);
    if (rn * rn != num || rd * rd != den)
        throw DomainError("m = " + m.get_str() + " is not a rational square; pass n = sqrt(m) to build_V2_prop547_n instead");
    return solve_prop547_conditions(make_rational(rn, rd));
}

// Symbolic form in n with every coefficient multiplied by the determinant.
inline DulacSpec build_V2_prop547_symbolic() {
    const Conditions547& C = conditions547();
    DulacSpec V = from_g2(C.g2_cleared, MPoly::var(N, 2), Provenance::Prop547, Convention::NSquare);
    V.audit.push_back("g2 multiplied by the determinant of the condition system");
    return V;
}

}  // namespace cyclecert::dulac
