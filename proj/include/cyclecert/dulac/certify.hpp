#pragma once

// Sign certificates for M on the region Omega around the origin:
//   Omega = { |x| < c, |y| < c, xy > -1 },  c = m^(-1/4) = 1/n  (m = n^4).
// Since M is linear in x its zero set has no ovals, so M keeps one sign on
// Omega as soon as it does not vanish on the boundary.  By the symmetry
// M(x, y) = M(-x, -y) half of the boundary suffices:
//   gamma1 = {(x, 1/n) : -n < x < 1/n},   gamma2 = {(1/n, y) : -n < y < 1/n},
//   gamma3 = {(x, -1/x) : n < x < 1/n},   corners (1/n, 1/n), (1/n, -n), (n, -1/n).

#include <cmath>
#include <functional>
#include <sstream>

#include "dulac.hpp"

namespace cyclecert::dulac {

struct RegionOmega {
    Convention convention = Convention::NFourth;
    std::optional<Rational> n;  // fixed parameter; empty for interval runs

    static RegionOmega fixed(const Rational& n) { return {Convention::NFourth, n}; }
    double corner(double m) const { return std::pow(m, -0.25); }
    // Membership for a numerical point at parameter m.
    static bool contains(double x, double y, double m) {
        const double c = std::pow(m, -0.25);
        return std::fabs(x) < c && std::fabs(y) < c && x * y > -1;
    }
    std::string describe() const {
        std::string s = "Omega: |x|, |y| < 1/n, xy > -1 with m = n^4";
        if (n) s += ", n = " + n->get_str();
        return s;
    }
};

struct BoundaryPiece {
    std::string name;
    MPoly G;  // in var, N and possibly S, cleared of negative powers by positive monomials
    int var;
    RatFun c, d;  // open interval (c(n), d(n)) for var
};

struct CornerValue {
    std::string name;
    MPoly value;  // in N and possibly S
};

namespace detail {

inline MPoly inv_n() { return MPoly::var(N, -1); }

// Clears negative powers; the multiplier is a monomial in n and (for gamma3)
// x, both positive where the pieces live.
inline MPoly clear_positive(const MPoly& p) { return p.cleared().first; }

inline std::string interval_str(const Rational& a, const Rational& b) { return "(" + a.get_str() + ", " + b.get_str() + ")"; }

inline Rational eval_ratfun(const RatFun& f, const Rational& n) {
    return f.num.eval_at(N, n).constant_term() / f.den.eval_at(N, n).constant_term();
}

// Removes the auxiliary variable by the norm over its relation (at a fixed
// parameter the relation is univariate in S).  Nonvanishing of the norm on an
// interval implies nonvanishing for the real value of s.
inline MPoly eliminate_aux_fixed(const MPoly& G, const std::optional<AuxAlgebraic>& aux) {
    if (!aux || !G.uses(aux->slot)) return G;
    return resultant(aux->relation, G, aux->slot);
}

}  // namespace detail

// The three boundary pieces of half of Omega for a reduced M linear in x.
inline std::vector<BoundaryPiece> boundary_pieces(const MPoly& Mr) {
    const MPoly n = MPoly::var(N), x = MPoly::var(X);
    std::vector<BoundaryPiece> out;
    out.push_back({"gamma1: y = 1/n, -n < x < 1/n", detail::clear_positive(Mr.subs(Y, detail::inv_n())), X, {-n}, {MPoly(1), n}});
    out.push_back({"gamma2: x = 1/n, -n < y < 1/n", detail::clear_positive(Mr.subs(X, detail::inv_n())), Y, {-n}, {MPoly(1), n}});
    out.push_back({"gamma3: y = -1/x, n < x < 1/n", detail::clear_positive(Mr.subs(Y, -MPoly::var(X, -1))), X, {n}, {MPoly(1), n}});
    return out;
}

inline std::vector<CornerValue> corner_values(const MPoly& Mr) {
    const MPoly n = MPoly::var(N), in = detail::inv_n();
    auto at = [&](const MPoly& px, const MPoly& py) { return detail::clear_positive(Mr.subs(X, px).subs(Y, py)); };
    return {{"corner (1/n, 1/n)", at(in, in)}, {"corner (1/n, -n)", at(in, -n)}, {"corner (n, -1/n)", at(n, -in)}};
}

// True when every monomial of M has even exponents in x and y and all
// coefficients share one sign, so M keeps that sign on the whole plane.
inline std::optional<int> even_monomial_sign(const MPoly& Mpoly) {
    int sign = 0;
    for (const auto& [mono, c] : Mpoly.terms()) {
        if (mono[X] % 2 || mono[Y] % 2) return std::nullopt;
        for (int v = 2; v < kMaxVars; ++v)
            if (mono[static_cast<std::size_t>(v)] != 0) return std::nullopt;
        int s = sgn(c);
        if (sign == 0) sign = s;
        else if (s != sign) return std::nullopt;
    }
    if (sign == 0) return std::nullopt;
    return sign;
}

namespace detail {

inline CertNode fixed_piece(const BoundaryPiece& p, const Rational& n, const std::optional<AuxAlgebraic>& aux) {
    CertNode node{p.name};
    MPoly g = p.G.eval_at(N, n);
    std::optional<AuxAlgebraic> aux_n = aux;
    if (aux_n) aux_n->relation = aux_n->relation.eval_at(N, n);
    if (aux_n && g.uses(aux_n->slot)) {
        node.fact("auxiliary", aux_n->description + " eliminated by its norm");
        g = eliminate_aux_fixed(g, aux_n);
    }
    const Rational a = eval_ratfun(p.c, n), b = eval_ratfun(p.d, n);
    node.fact("interval", interval_str(a, b));
    if (g.zero()) {
        node.ok = false;
        node.fact("failure", "the restriction vanishes identically");
        node.fact("witness", "whole piece");
        return node;
    }
    UniPoly G = g.to_uni(p.var);
    node.fact("polynomial", poly_summary(G, p.var == X ? "x" : "y"));
    int roots = G.degree() <= 0 ? 0 : count_real_roots(G, a, b);
    node.fact("roots in interval", std::to_string(roots));
    node.ok = roots == 0;
    if (!node.ok) node.fact("witness", root_witness(G, ParamInterval::closed(a, b)));
    return node;
}

// Local analysis at a corner where M vanishes: with t = (-M_y, M_x) tangent
// to {M = 0}, the curve stays out of the open quadrant {x < 1/n, y < 1/n}
// near the corner when M_x M_y > 0.
inline CertNode top_corner_tangent(const MPoly& Mr, const Rational& n) {
    CertNode node{"corner (1/n, 1/n): local tangent of {M = 0}"};
    std::array<Rational, kMaxVars> pt{};
    pt[X] = 1 / n;
    pt[Y] = 1 / n;
    pt[N] = n;
    const Rational mx = Mr.diff(X).eval(pt), my = Mr.diff(Y).eval(pt);
    node.fact("M_x", mx.get_str());
    node.fact("M_y", my.get_str());
    node.ok = sgn(mx) * sgn(my) > 0;
    node.fact("verdict", node.ok ? "tangent points away from Omega" : "the zero curve may enter Omega");
    if (!node.ok) node.fact("witness", "corner (1/n, 1/n)");
    return node;
}

}  // namespace detail

inline std::string first_failure(const Certificate& c, std::string* piece) {
    std::function<bool(const CertNode&)> walk = [&](const CertNode& n) {
        if (n.ok) {
            for (const auto& ch : n.children)
                if (walk(ch)) return true;
            return false;
        }
        *piece = n.name;
        for (const auto& [k, v] : n.facts)
            if (k == "witness") {
                *piece += " | " + v;
                return true;
            }
        return true;
    };
    for (const auto& p : c.pieces)
        if (walk(p)) return *piece;
    return {};
}

// Certificate at a fixed rational n.  The auxiliary variable, if any, is
// eliminated by its norm.  A corner where M vanishes exactly is handled by
// the local tangent test.
inline Certificate build_sign_certificate(const MFunction& Mf, const RegionOmega& region,
                                          const std::optional<AuxAlgebraic>& aux = std::nullopt, const std::string& id = "sign") {
    Certificate cert;
    cert.id = id;
    cert.proposition = "M = " + Mf.factor_str() + " * (reduced) keeps one sign on Omega";
    if (auto s = even_monomial_sign(Mf.full)) {
        cert.parameter_interval = region.n ? "n = " + region.n->get_str() : "fixed";
        CertNode node{"monomial signs"};
        node.fact("M", Mf.full.str());
        node.fact("sign", *s > 0 ? "nonnegative on the plane" : "nonpositive on the plane");
        cert.pieces.push_back(node);
        return cert;
    }
    if (!region.n) throw DomainError("build_sign_certificate needs a fixed n; use the interval form");
    const Rational n = *region.n;
    cert.parameter_interval = "n = " + n.get_str() + " (m = " + rpow(n, 4).get_str() + ")";
    CertNode ovals{"no ovals of {M = 0}"};
    ovals.fact("degree in x", std::to_string(Mf.x_degree));
    ovals.ok = Mf.linear_in_x();
    cert.pieces.push_back(ovals);
    if (!ovals.ok) return cert;
    for (const auto& p : boundary_pieces(Mf.reduced)) cert.pieces.push_back(detail::fixed_piece(p, n, aux));
    CertNode corners{"corners"};
    for (const auto& cv : corner_values(Mf.reduced)) {
        MPoly v = cv.value.eval_at(N, n);
        std::optional<AuxAlgebraic> aux_n = aux;
        if (aux_n) aux_n->relation = aux_n->relation.eval_at(N, n);
        v = detail::eliminate_aux_fixed(v, aux_n);
        if (v.zero() && cv.name == "corner (1/n, 1/n)" && !(aux && Mf.reduced.uses(aux->slot))) {
            corners.child(detail::top_corner_tangent(Mf.reduced, n));
            continue;
        }
        CertNode c{cv.name};
        c.fact("value (norm)", v.zero() ? "0" : v.constant_term().get_str().substr(0, 60));
        c.ok = !v.zero();
        if (!c.ok) c.fact("witness", cv.name);
        corners.child(c);
    }
    cert.pieces.push_back(corners);
    return cert;
}

inline Certificate certify_sign(const MFunction& Mf, const RegionOmega& region, const std::optional<AuxAlgebraic>& aux = std::nullopt) {
    Certificate c = build_sign_certificate(Mf, region, aux);
    if (!c.verdict()) {
        std::string piece;
        first_failure(c, &piece);
        auto bar = piece.find(" | ");
        throw PieceFailed(piece.substr(0, bar), bar == std::string::npos ? "see certificate" : piece.substr(bar + 3));
    }
    return c;
}

// ---------------------------------------------------------------------------
// Interval runs: each piece goes through the root-count continuation lemma.

// Hypothesis (i) for one piece: rational majorants at a parameter value with
// radical coordinates.
struct RadicalSample {
    std::shared_ptr<const Surd::Context> ctx;
    std::map<int, Surd> bindings;  // N and S
    std::vector<int> depths;       // enclosure depth per radical
    std::string label;

    std::vector<Enclosure> enclosures() const {
        std::vector<Enclosure> enc;
        for (std::size_t i = 0; i < ctx->size(); ++i) enc.push_back(enclose((*ctx)[i], depths[i]));
        return enc;
    }
};

// n = (1/2)^(1/4) = 8^(1/4)/2 and s = (75 - 125/2)^(2/3) = (5/2) 10^(1/3), with
// the enclosures 3002/1785 < 8^(1/4) < 37/22 and 28/13 < 10^(1/3) < 265/123.
inline RadicalSample uniq_lower_end_sample() {
    RadicalSample r;
    auto ctx = std::make_shared<Surd::Context>(Surd::Context{{Rational(8), 4}, {Rational(10), 3}});
    r.ctx = ctx;
    r.bindings[N] = Surd::radical(ctx, 0, Rational(1, 2));
    r.bindings[S] = Surd::radical(ctx, 1, Rational(5, 2));
    r.depths = {4, 3};
    r.label = "n = (1/2)^(1/4), s = (5/2) 10^(1/3)";
    return r;
}

// Checks that G (in var, with N and S bound to surds) has no zero on [lo, hi]
// by a rational majorant of one sign on each side of 0.
inline CertNode majorant_no_roots(const std::string& name, const MPoly& G, int var, const RadicalSample& sample, const Rational& lo,
                                  const Rational& hi) {
    CertNode node{name};
    node.fact("sample", sample.label);
    node.fact("hull", "[" + lo.get_str() + ", " + hi.get_str() + "]");
    SurdPoly P = to_surd_poly(G, var, sample.bindings, sample.ctx);
    std::vector<std::tuple<Orthant, Rational, Rational>> parts;
    if (sgn(lo) < 0) parts.emplace_back(Orthant::NonPositive, lo, sgn(hi) < 0 ? hi : Rational(0));
    if (sgn(hi) > 0) parts.emplace_back(Orthant::NonNegative, sgn(lo) > 0 ? lo : Rational(0), hi);
    const std::string vname = var == X ? "x" : "y";
    auto one_sign = [](const UniPoly& q, int want, const Rational& a, const Rational& b) {
        return sign_at(q, a) == want && sign_at(q, b) == want && (q.degree() <= 0 || count_real_roots(q, a, b) == 0);
    };
    for (const auto& [orth, a, b] : parts) {
        CertNode part{std::string("majorant on ") + to_string(orth)};
        // deeper enclosures only when the requested ones are too coarse
        for (int extra : {0, 2, 4, 8}) {
            RadicalSample deeper = sample;
            for (auto& d : deeper.depths) d += extra;
            auto enc = deeper.enclosures();
            Majorants mj = majorize(P, enc, orth);
            part.facts.clear();
            for (std::size_t i = 0; i < enc.size(); ++i)
                part.fact("enclosure " + (*sample.ctx)[i].describe(), enc[i].lower.get_str() + " < r < " + enc[i].upper.get_str());
            part.fact("upper", poly_summary(mj.upper, vname));
            part.fact("lower", poly_summary(mj.lower, vname));
            part.ok = true;
            if (one_sign(mj.upper, -1, a, b)) {
                part.fact("result", "upper majorant < 0 on [" + a.get_str() + ", " + b.get_str() + "]");
                break;
            }
            if (one_sign(mj.lower, 1, a, b)) {
                part.fact("result", "lower majorant > 0 on [" + a.get_str() + ", " + b.get_str() + "]");
                break;
            }
            part.ok = false;
            part.fact("witness", "majorants straddle zero on [" + a.get_str() + ", " + b.get_str() + "]");
        }
        node.child(part);
    }
    return node;
}

struct IntervalRunOptions {
    ParamInterval I;
    // hypothesis (i): either a rational sample or a radical one with hulls
    std::optional<Rational> rational_sample;
    std::optional<RadicalSample> radical_sample;
    std::map<std::string, std::pair<Rational, Rational>> hulls;  // keyed "gamma1", "gamma2", "gamma3"
    // Replacement polynomials for pieces, keyed like hulls.  The caller is
    // responsible for checking that each has the same zeros as the piece.
    std::map<std::string, MPoly> piece_polys;
};

// Whole-interval certificate.  Corners must not vanish on I (their norms
// have no roots there); the pieces pass the continuation lemma.
inline Certificate build_sign_certificate_interval(const MFunction& Mf, const std::optional<AuxAlgebraic>& aux, const IntervalRunOptions& opt,
                                                   const std::string& id = "sign-interval") {
    Certificate cert;
    cert.id = id;
    cert.proposition = "M = " + Mf.factor_str() + " * (reduced) keeps one sign on Omega for every n in the interval";
    cert.parameter_interval = opt.I.describe();
    CertNode ovals{"no ovals of {M = 0}"};
    ovals.fact("degree in x", std::to_string(Mf.x_degree));
    ovals.ok = Mf.linear_in_x();
    cert.pieces.push_back(ovals);
    if (!ovals.ok) return cert;
    const char* keys[] = {"gamma1", "gamma2", "gamma3"};
    int idx = 0;
    for (const auto& p : boundary_pieces(Mf.reduced)) {
        FamilyProblem F;
        F.name = p.name;
        const std::string key = keys[idx++];
        F.G = opt.piece_polys.count(key) ? opt.piece_polys.at(key) : p.G;
        F.var = p.var;
        F.param = N;
        if (aux && p.G.uses(aux->slot)) F.aux = aux;
        F.c = p.c;
        F.d = p.d;
        F.I = opt.I;
        F.expected_roots = 0;
        if (opt.radical_sample) {
            auto hull = opt.hulls.at(key);
            F.m0 = 0;
            F.hypothesis_i = [&, hull, G = F.G, var = p.var] {
                CertNode h = majorant_no_roots("hypothesis (i): no roots at the sample", G, var, *opt.radical_sample, hull.first, hull.second);
                return h;
            };
        } else if (opt.rational_sample) {
            F.m0 = *opt.rational_sample;
            F.hypothesis_i = [&, piece = p] {
                CertNode h = detail::fixed_piece(piece, *opt.rational_sample, aux);
                h.name = "hypothesis (i): no roots at n0 = " + opt.rational_sample->get_str();
                return h;
            };
        } else {
            throw DomainError("interval run needs a sample for hypothesis (i)");
        }
        Certificate fc = family_root_certificate(F);
        cert.pieces.push_back(fc.pieces.front());
    }
    CertNode corners{"corners"};
    for (const auto& cv : corner_values(Mf.reduced)) {
        CertNode c{cv.name};
        MPoly v = cv.value;
        if (aux && v.uses(aux->slot)) {
            v = cyclecert::detail::norm_over_aux(v, *aux, N);
            c.fact("auxiliary", "eliminated by its norm");
        }
        if (v.zero()) {
            c.ok = false;
            c.fact("witness", "vanishes identically");
        } else {
            UniPoly u = v.to_uni(N);
            c.fact("polynomial", poly_summary(u, "n"));
            int k = count_in(u, opt.I);
            c.fact("roots in interval", std::to_string(k));
            c.ok = k == 0;
            if (!c.ok) c.fact("witness", root_witness(u, opt.I));
        }
        corners.child(c);
    }
    cert.pieces.push_back(corners);
    return cert;
}

// ---------------------------------------------------------------------------
// Remark-style certificate: {M = 0} may enter Omega, but the flow crosses
// it transversally there.  N is <grad M, X> with its power of y removed; the
// common zeros of M and N come from the roots of Res(M, N, x).

struct ContactOptions {
    std::optional<UniPoly> known_quadratic;  // a factor to split off for reporting (in y, at this n)
};

inline Certificate build_contact_certificate(const MFunction& Mf, const PlanarSystem& sys, const Rational& n, const ContactOptions& opt = {},
                                             const std::string& id = "without-contact") {
    Certificate cert;
    cert.id = id;
    cert.proposition = "{M = 0} meets Omega only where the flow crosses it";
    cert.parameter_interval = "n = " + n.get_str();
    if (!Mf.linear_in_x()) throw DomainError("contact certificate needs M linear in x");
    const MPoly Mr = Mf.reduced.eval_at(N, n);
    const PlanarSystem X_n = sys.bind(N, n);
    MPoly Md = X_n.lie(Mr);
    const int ypow = Md.min_degree(Y);
    Mono sh{};
    sh[Y] = -ypow;
    const MPoly Nf = Md.times_mono(sh);

    CertNode axis{"points on y = 0"};
    MPoly m0 = Mr.eval_at(Y, 0);
    axis.fact("M(x, 0)", m0.str());
    axis.ok = !m0.zero() && !m0.uses(X);
    if (!axis.ok) axis.fact("witness", "M(x, 0) is not a nonzero constant");
    cert.pieces.push_back(axis);

    CertNode res{"Res(M, N, x)"};
    res.fact("N", "<grad M, X> / y^" + std::to_string(ypow));
    UniPoly R = resultant(Mr, Nf, X).to_uni(Y);
    res.fact("resultant", poly_summary(R, "y"));
    // strip powers of y and of (n^2 y^2 - 1)
    int ymult = 0;
    while (!R.zero() && R.low_order() > 0) {
        R = R.shifted(-1);
        ++ymult;
    }
    UniPoly edge({Rational(-1), Rational(0), n * n});
    int emult = 0;
    for (;;) {
        auto [q, r] = divmod(R, edge);
        if (!r.zero()) break;
        R = q;
        ++emult;
    }
    res.fact("factor y", "multiplicity " + std::to_string(ymult));
    res.fact("factor n^2 y^2 - 1", "multiplicity " + std::to_string(emult));
    if (opt.known_quadratic) {
        auto [q, r] = divmod(R, *opt.known_quadratic);
        if (r.zero()) {
            const Rational c = 1 / n;
            res.fact("quadratic factor roots in (-1/n, 1/n)", std::to_string(count_real_roots(*opt.known_quadratic, -c, c)));
            res.fact("remaining factor", poly_summary(q, "y"));
            res.fact("remaining factor roots in (-1/n, 1/n)", std::to_string(count_real_roots(q, -c, c)));
        } else {
            res.ok = false;
            res.fact("witness", "the given quadratic does not divide the resultant");
        }
    }
    cert.pieces.push_back(res);

    // every common zero with y in (-1/n, 1/n) must lie outside Omega
    CertNode pts{"common zeros of M and N"};
    const Rational c = 1 / n;
    const UniPoly phi = Mr.coeff_of(X, 1).to_uni(Y), psi = Mr.coeff_of(X, 0).to_uni(Y);
    const UniPoly sf = squarefree_part(R);
    int inside = 0, total = 0;
    for (const auto& iv : isolate_real_roots(sf, -c, c)) {
        ++total;
        AlgebraicNumber yi{sf, iv, "y_" + std::to_string(total)};
        CertNode p{yi.label};
        yi.refine(Rational(1, 1000000));
        p.fact("y", std::to_string(yi.approx()));
        int sphi = sign_at(phi, yi);
        if (sphi == 0) {
            int spsi = sign_at(psi, yi);
            p.fact("phi(y)", "0");
            p.ok = spsi != 0;
            p.fact("verdict", p.ok ? "no point of {M = 0} on this line" : "whole line in {M = 0}");
            if (!p.ok) {
                ++inside;
                p.fact("witness", "y = " + std::to_string(yi.approx()));
            }
            pts.child(p);
            continue;
        }
        // x_i = -psi/phi; compare against 1/n, -1/n and the hyperbola
        const UniPoly ny({Rational(0), Rational(1)});
        auto side = [&](const UniPoly& numer) { return sign_at(numer, yi) * sphi; };
        int right = side(-psi - phi.scaled(c));        // sign of x_i - 1/n
        int left = side(-psi + phi.scaled(c));         // sign of x_i + 1/n
        int hyper = side(phi - ny * psi);              // sign of x_i y_i + 1
        p.fact("x - 1/n", std::to_string(right));
        p.fact("x + 1/n", std::to_string(left));
        p.fact("xy + 1", std::to_string(hyper));
        bool in = right < 0 && left > 0 && hyper > 0;
        bool on_boundary = right == 0 || left == 0 || hyper == 0;
        p.ok = !in && !on_boundary;
        p.fact("verdict", in ? "inside Omega" : on_boundary ? "on the boundary of Omega" : "outside Omega");
        if (!p.ok) {
            ++inside;
            p.fact("witness", "(x, y) with y = " + std::to_string(yi.approx()));
        }
        pts.child(p);
    }
    pts.fact("roots of the reduced resultant in (-1/n, 1/n)", std::to_string(total));
    pts.fact("inside or on the boundary", std::to_string(inside));
    cert.pieces.push_back(pts);
    return cert;
}

inline Certificate certify_without_contact(const MFunction& Mf, const PlanarSystem& sys, const Rational& n, const ContactOptions& opt = {}) {
    Certificate c = build_contact_certificate(Mf, sys, n, opt);
    if (!c.verdict()) {
        std::string piece;
        first_failure(c, &piece);
        throw ContactPossible(piece);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Numerical helpers shared by the stability and oval code.

struct Bindings {
    double n = 0, s = 0, m = 0;
    std::array<double, kMaxVars> point(double x, double y) const {
        std::array<double, kMaxVars> p{};
        p[X] = x;
        p[Y] = y;
        p[N] = n;
        p[S] = s;
        p[M] = m;
        return p;
    }
};

// Sign of -V M on the part of Omega outside the oval of {V = 0} (or on all
// of Omega when V has no oval).  +1 means a periodic orbit there would be
// hyperbolic and unstable, -1 stable, 0 undecided.
inline int cycle_stability_sign(const MFunction& Mf, const DulacSpec& V, const Bindings& b) {
    const MPoly v = V.V(), mm = Mf.full;
    const double m = b.m;
    const double c = std::pow(m, -0.25);
    int sign = 0;
    for (int k = 0; k < 64; ++k) {
        const double ang = 2 * M_PI * (k + 0.5) / 64;
        // outermost sample of the ray inside Omega
        double t = 0.98 * c;
        double x = t * std::cos(ang), y = t * std::sin(ang);
        while (!RegionOmega::contains(x, y, m)) {
            t *= 0.97;
            x = t * std::cos(ang);
            y = t * std::sin(ang);
        }
        const double val = -v.eval_as<double>(b.point(x, y)) * mm.eval_as<double>(b.point(x, y));
        if (std::fabs(val) < 1e-14) continue;
        const int s = val > 0 ? 1 : -1;
        if (sign == 0) sign = s;
        else if (sign != s) return 0;
    }
    return sign;
}

// Closed curve of {V = 0} around the origin for the uniqueness construction.
struct Oval {
    Rational m;
    double V_origin = 0;
    std::vector<std::array<double, 2>> points;
    double y_min = 0, y_max = 0;
};

inline Oval basin_oval(const Rational& m, int samples) {
    require(m > Rational(1, 2) && m < Rational(3, 5), "basin_oval needs m in (1/2, 3/5), got " + m.get_str());
    require(samples >= 8, "basin_oval needs at least 8 samples");
    DulacSpec V = build_V2_uniq(m);
    Bindings b;
    b.m = to_double(m);
    b.s = uniq_s_value(b.m);
    auto g = [&](const MPoly& p, double y) { return p.eval_as<double>(b.point(0, y)); };
    auto disc = [&](double y) {
        double a = g(V.g2, y), bb = g(V.g1, y), cc = g(V.g0, y);
        return bb * bb - 4 * a * cc;
    };
    Oval out;
    out.m = m;
    out.V_origin = g(V.g0, 0);
    if (!(out.V_origin < 0) || !(disc(0) > 0)) throw NoOval("V(0, 0) = " + std::to_string(out.V_origin) + " is not negative");
    // the oval spans the y-range where the quadratic in x keeps real roots
    auto edge = [&](double dir) {
        double lo = 0, hi = 0.05;
        while (disc(dir * hi) > 0) {
            lo = hi;
            hi *= 1.5;
            if (hi > 10) throw NoOval("the quadratic keeps real roots up to |y| = 10");
        }
        for (int i = 0; i < 200; ++i) {
            double mid = (lo + hi) / 2;
            (disc(dir * mid) > 0 ? lo : hi) = mid;
        }
        return dir * lo;
    };
    out.y_min = edge(-1);
    out.y_max = edge(1);
    auto root = [&](double y, int branch) {
        double a = g(V.g2, y), bb = g(V.g1, y), cc = g(V.g0, y);
        double d = std::sqrt(std::max(0.0, bb * bb - 4 * a * cc));
        return (-bb + branch * d) / (2 * a);
    };
    const int half = samples / 2;
    for (int i = 0; i <= half; ++i) {
        double y = out.y_min + (out.y_max - out.y_min) * i / half;
        out.points.push_back({root(y, 1), y});
    }
    for (int i = half - 1; i >= 1; --i) {
        double y = out.y_min + (out.y_max - out.y_min) * i / half;
        out.points.push_back({root(y, -1), y});
    }
    return out;
}


// ---------------------------------------------------------------------------
// Uniqueness range m in [1/2, 3/5): n = m^(1/4), s^3 = (75 - 125 n^4)^2.

// Closed form of 2806650 n M(1/n, y) for the uniqueness function.
inline MPoly uniq_boundary_Q() {
    return parse_mpoly(
        "1729*n^9*(35*n^4+3)*(10*n^4-3)*y^16 - 9009*n^9*s*(13*n^4-3)*y^12"
        " - 21*(10*n^4-3)*(242*n^4+3)*(35*n^4+3)*y^11 - 378*n*(10*n^4-3)*(550*n^8+145*n^4+3)*y^10"
        " + 297*s*(13*n^4-3)*(86*n^4+3)*y^7 + 1188*n*s*(196*n^8-45*n^4-9)*y^6"
        " - 187110*n*(5*n^4-3)*y^4 + 74844*n*s*(5*n^4-3)");
}

// Rational upper majorants of Q at n = (1/2)^(1/4), s = (5/2) 10^(1/3) on
// y >= 0 and y <= 0, built from 3002/1785 < 8^(1/4) < 37/22 and
// 28/13 < 10^(1/3) < 265/123.
inline UniPoly uniq_R_plus() {
    return parse_mpoly("2622893/176*y^16 - 2427117/68*y^12 - 106764*y^11 - 11509668/85*y^10 + 21119175/82*y^7"
                       " + 15442875/164*y^6 + 314685/4*y^4 - 37446948/221")
        .to_uni(Y);
}
inline UniPoly uniq_R_minus() {
    // same as R+ except that the y^7 coefficient takes the lower bound of 10^(1/3)
    const Rational nlo(3002, 1785), nhi(37, 22), slo(28, 13), shi(265, 123);
    std::vector<Rational> c(17, Rational(0));
    c[16] = Rational(70889, 8) * nhi;
    c[12] = -Rational(315315, 32) * nlo * slo;
    c[11] = -106764;
    c[10] = -80514 * nlo;
    c[7] = Rational(239085, 2) * slo;
    c[6] = Rational(51975, 2) * nhi * shi;
    c[4] = Rational(93555, 2) * nhi;
    c[0] = -Rational(93555, 2) * nlo * slo;
    return UniPoly(c);
}

inline ParamInterval uniq_interval() {
    ParamInterval I{AlgebraicNumber::root_in(UniPoly({Rational(-1), 0, 0, 0, Rational(2)}), Rational(4, 5), Rational(9, 10), "(1/2)^(1/4)"),
                    AlgebraicNumber::root_in(UniPoly({Rational(-3), 0, 0, 0, Rational(5)}), Rational(4, 5), Rational(9, 10), "(3/5)^(1/4)"),
                    false, true};
    return I;
}

struct UniqChecks {
    bool q_closed_form = false;
    bool r_plus = false, r_minus = false;
    UniPoly r_plus_computed, r_minus_computed;
};

inline UniqChecks uniq_closed_form_checks() {
    UniqChecks out;
    const DulacSpec V = build_V2_uniq_symbolic();
    const MFunction Mf = compute_M(V);
    const MPoly q = Mf.reduced.subs(X, detail::inv_n()) * MPoly::var(N).scaled(2806650);
    out.q_closed_form = q == uniq_boundary_Q();
    const RadicalSample smp = uniq_lower_end_sample();
    SurdPoly P = to_surd_poly(uniq_boundary_Q(), Y, smp.bindings, smp.ctx);
    auto enc = smp.enclosures();
    out.r_plus_computed = majorize(P, enc, Orthant::NonNegative).upper;
    out.r_minus_computed = majorize(P, enc, Orthant::NonPositive).upper;
    out.r_plus = out.r_plus_computed == uniq_R_plus();
    out.r_minus = out.r_minus_computed == uniq_R_minus();
    return out;
}

// The whole interval.  Each boundary piece goes through the continuation
// lemma with hypothesis (i) checked by majorants at the closed lower end.
inline Certificate certify_uniq_interval() {
    const DulacSpec V = build_V2_uniq_symbolic();
    const MFunction Mf = compute_M(V);
    IntervalRunOptions opt;
    opt.I = uniq_interval();
    opt.radical_sample = uniq_lower_end_sample();
    opt.hulls["gamma1"] = {Rational(-1), Rational(6, 5)};
    opt.hulls["gamma2"] = {Rational(-1), Rational(6, 5)};
    opt.hulls["gamma3"] = {Rational(4, 5), Rational(6, 5)};
    const UniqChecks ck = uniq_closed_form_checks();
    if (ck.q_closed_form) opt.piece_polys["gamma2"] = uniq_boundary_Q();
    Certificate c = build_sign_certificate_interval(Mf, V.aux, opt, "uniq-interval");
    CertNode q{"closed form of 2806650 n M(1/n, y)"};
    q.ok = ck.q_closed_form;
    q.fact("match", ck.q_closed_form ? "exact" : "differs");
    c.pieces.insert(c.pieces.begin() + 1, q);
    return c;
}

// One rational m = n^4 in the range; s is eliminated by its norm.
inline Certificate certify_uniq_at(const Rational& n) {
    const Rational m = rpow(n, 4);
    require(m >= Rational(1, 2) && m < Rational(3, 5), "uniqueness range needs n^4 in [1/2, 3/5), got n = " + n.get_str());
    const DulacSpec V = build_V2_uniq_symbolic();
    return build_sign_certificate(compute_M(V), RegionOmega::fixed(n), V.aux, "uniq-at-n");
}


// ---------------------------------------------------------------------------
// Degree-8 construction, n in (77/100, 211/250).  Below n~ the sign
// certificate applies; above it the contact certificate does.

// Quadratic factor of Res(M, N, x) for the degree-8 construction.
inline MPoly p2_925() {
    return parse_mpoly(
        "-264600*n^18 + 145340*n^16*y^2 - 323400*n^16 + 117390*n^14*y^2 - 130550*n^14 + 18486*n^12*y^2 - 5250*n^12"
        " - 12933*n^10*y^2 + 29079*n^10 - 10368*n^8*y^2 + 21141*n^8 - 2916*n^6*y^2 + 8640*n^6 - 378*n^4*y^2 + 2592*n^4"
        " - 81*n^2*y^2 + 459*n^2 + 81");
}

namespace detail {

// The zero set of V meets the line y = 9x/10 nowhere in Omega.
inline CertNode v_on_diagonal(const MPoly& V, const Rational& n) {
    CertNode node{"V(x, 9x/10) on (-1/n, 1/n)"};
    UniPoly u = V.eval_at(N, n).subs(Y, MPoly::var(X).scaled(Rational(9, 10))).to_uni(X);
    const Rational c = 1 / n;
    int k = count_real_roots(u, -c, c);
    node.fact("polynomial", poly_summary(u, "x"));
    node.fact("roots", std::to_string(k));
    node.ok = k == 0;
    if (!node.ok) node.fact("witness", root_witness(u, ParamInterval::closed(-c, c)));
    return node;
}

// Res(V, M, x) with its (n^2 y^2 - 1) factors removed has no roots in (-1/n, 1/n).
inline CertNode v_meets_m(const MPoly& V, const MPoly& Mr, const Rational& n) {
    CertNode node{"Res(V, M, x) on (-1/n, 1/n)"};
    UniPoly R = resultant(V.eval_at(N, n), Mr.eval_at(N, n), X).to_uni(Y);
    const UniPoly edge(std::vector<Rational>{Rational(-1), Rational(0), n * n});
    int e = 0;
    while (!R.zero()) {
        auto [q, r] = divmod(R, edge);
        if (!r.zero()) break;
        R = q;
        ++e;
    }
    const Rational c = 1 / n;
    node.fact("factor n^2 y^2 - 1", "multiplicity " + std::to_string(e));
    node.fact("remaining factor", poly_summary(R, "y"));
    int k = R.zero() ? -1 : count_real_roots(R, -c, c);
    node.fact("roots", std::to_string(k));
    node.ok = k == 0;
    if (!node.ok) node.fact("witness", R.zero() ? std::string("identically zero") : root_witness(R, ParamInterval::closed(-c, c)));
    return node;
}

}  // namespace detail

inline Certificate certify_prop925_at(const Rational& n) {
    const DulacSpec V = build_V2_prop925(n);
    const MFunction Mf = compute_M(V);
    const AlgebraicNumber nt = n_tilde();
    Certificate c;
    if (compare(nt, n) >= 0) {
        c = build_sign_certificate(Mf, RegionOmega::fixed(n), std::nullopt, "degree8-sign");
        c.proposition = "n <= n~: " + c.proposition;
    } else {
        ContactOptions opt;
        opt.known_quadratic = p2_925().eval_at(N, n).to_uni(Y);
        c = build_contact_certificate(Mf, V.system(), n, opt, "degree8-contact");
        c.proposition = "n > n~: " + c.proposition;
        c.pieces.push_back(detail::v_meets_m(V.V(), Mf.reduced, n));
    }
    c.pieces.push_back(detail::v_on_diagonal(V.V(), n));
    CertNode nt_node{"threshold n~"};
    nt_node.fact("n~", std::to_string(nt.approx()));
    nt_node.fact("side", compare(nt, n) >= 0 ? "n <= n~" : "n > n~");
    c.pieces.insert(c.pieces.begin(), nt_node);
    return c;
}

// ---------------------------------------------------------------------------
// Invariant region for m = n^2 in [1/2, 547/1000].

using Series100 = std::vector<Real100>;

namespace detail {

inline Series100 series_mul(const Series100& a, const Series100& b) {
    Series100 c(a.size(), Real100(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; i + j < a.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}
inline Series100 series_sqrt(const Series100& a) {
    Series100 s(a.size(), Real100(0));
    s[0] = sqrt(a[0]);
    for (std::size_t k = 1; k < a.size(); ++k) {
        Real100 acc = a[k];
        for (std::size_t i = 1; i < k; ++i) acc -= s[i] * s[k - i];
        s[k] = acc / (2 * s[0]);
    }
    return s;
}
inline Series100 series_inv(const Series100& a) {
    Series100 r(a.size(), Real100(0));
    r[0] = 1 / a[0];
    for (std::size_t k = 1; k < a.size(); ++k) {
        Real100 acc = 0;
        for (std::size_t i = 1; i <= k; ++i) acc += a[i] * r[k - i];
        r[k] = -acc / a[0];
    }
    return r;
}
inline Series100 series_of(const UniPoly& p, std::size_t order) {
    Series100 s(order, Real100(0));
    for (int k = 0; k <= p.degree() && static_cast<std::size_t>(k) < order; ++k) s[static_cast<std::size_t>(k)] = to_real100(p[static_cast<std::size_t>(k)]);
    return s;
}
// F(X(y), y) for F in x, y.
inline Series100 compose_series(const MPoly& F, const Series100& Xs) {
    const std::size_t K = Xs.size();
    Series100 out(K, Real100(0));
    std::vector<Series100> xp{Series100(K, Real100(0))};
    xp[0][0] = 1;
    for (int i = 1; i <= F.degree(X); ++i) xp.push_back(series_mul(xp.back(), Xs));
    for (const auto& [mono, c] : F.terms()) {
        const Real100 cc = to_real100(c);
        for (std::size_t k = 0; k + static_cast<std::size_t>(mono[Y]) < K; ++k)
            out[k + static_cast<std::size_t>(mono[Y])] += cc * xp[static_cast<std::size_t>(mono[X])][k];
    }
    return out;
}

}  // namespace detail

struct ContactOrder {
    int order = -1;       // first nonzero Taylor coefficient of Vdot along {V = 0}
    int sign = 0;         // its sign
    double x_hat = 0;     // the contact point (x_hat, 0)
    double curve_residual = 0;
};

// Taylor expansion of Vdot along the branch of {V = 0} through (x_hat, 0),
// x_hat = sqrt(-V(0, 0)), in 100-digit arithmetic.
inline ContactOrder contact_order_at_axis(const DulacSpec& V, const MPoly& Vdot, std::size_t terms = 12) {
    using namespace detail;
    const UniPoly g0 = V.g0.to_uni(Y), g1 = V.g1.to_uni(Y), g2 = V.g2.to_uni(Y);
    Series100 G0 = series_of(g0, terms), G1 = series_of(g1, terms), G2 = series_of(g2, terms);
    Series100 disc = series_mul(G1, G1);
    Series100 g20 = series_mul(G2, G0);
    for (std::size_t k = 0; k < terms; ++k) disc[k] -= 4 * g20[k];
    if (!(disc[0] > 0)) throw NoOval("V(x, 0) has no real zero");
    Series100 root = series_sqrt(disc);
    for (std::size_t k = 0; k < terms; ++k) root[k] -= G1[k];
    Series100 Xs = series_mul(root, series_inv(G2));
    for (auto& c : Xs) c /= 2;
    ContactOrder out;
    out.x_hat = static_cast<double>(Xs[0]);
    Series100 onV = compose_series(V.V(), Xs);
    Real100 resid = 0;
    for (const auto& c : onV) resid = std::max<Real100>(resid, Real100(abs(c)));
    out.curve_residual = static_cast<double>(resid);
    Series100 f = compose_series(Vdot, Xs);
    const Real100 tiny("1e-60");
    for (std::size_t k = 0; k < terms; ++k)
        if (abs(f[k]) > tiny) {
            out.order = static_cast<int>(k);
            out.sign = f[k] > 0 ? 1 : -1;
            break;
        }
    return out;
}

inline Certificate certify_prop547_at(const Rational& n) {
    const DulacSpec V = build_V2_prop547_n(n);
    const PlanarSystem sys = V.system();
    const MPoly v = V.V(), vdot = sys.lie(v);
    Certificate cert;
    cert.id = "invariant-region";
    cert.proposition = "the flow points into the region bounded by {V2 = 0} that contains the origin";
    cert.parameter_interval = "n = " + n.get_str() + " (m = " + Rational(n * n).get_str() + ")";

    CertNode cons{"construction"};
    for (const auto& a : V.audit) cons.fact("note", a);
    // at the saddles x = y = sigma with sigma^2 = 1/n, here with n fixed
    auto saddle_value = [&](const MPoly& F) {
        Rational acc = 0;
        for (const auto& [mono, c] : F.terms()) acc += c * rpow(1 / n, (mono[X] + mono[Y]) / 2);
        return acc;
    };
    const Rational v_s = saddle_value(v), vx_s = saddle_value(v.diff(X) * MPoly::var(X)), vy_s = saddle_value(v.diff(Y) * MPoly::var(Y));
    cons.fact("V2 at the saddles", v_s.get_str());
    cons.fact("sigma dV2/dx, sigma dV2/dy at the saddles", vx_s.get_str() + ", " + vy_s.get_str());
    cons.ok = is_zero(v_s) && is_zero(vx_s) && is_zero(vy_s);
    cert.pieces.push_back(cons);

    CertNode res{"Res(V2, V2', x)"};
    UniPoly R = resultant(v, vdot, X).to_uni(Y);
    int ymult = static_cast<int>(R.low_order());
    R = R.shifted(-ymult);
    const UniPoly edge(std::vector<Rational>{Rational(-1), Rational(0), n});
    int e = 0;
    while (!R.zero()) {
        auto [q, r] = divmod(R, edge);
        if (!r.zero()) break;
        R = q;
        ++e;
    }
    const Rational c = 1 / n;
    res.fact("factor y", "multiplicity " + std::to_string(ymult));
    res.fact("factor n y^2 - 1", "multiplicity " + std::to_string(e));
    res.fact("remaining factor", poly_summary(R, "y"));
    int k = count_real_roots(R, -c, c);
    res.fact("roots in (-1/n, 1/n)", std::to_string(k));
    res.fact("sign at y = 0", std::to_string(sign_at(R, Rational(0))));
    res.ok = k == 0 && sign_at(R, Rational(0)) > 0;
    if (!res.ok) res.fact("witness", root_witness(R, ParamInterval::closed(-c, c)));
    cert.pieces.push_back(res);

    CertNode contact{"contact at (x_hat, 0)"};
    ContactOrder co = contact_order_at_axis(V, vdot);
    contact.fact("x_hat", std::to_string(co.x_hat));
    contact.fact("order", std::to_string(co.order));
    contact.fact("leading sign", std::to_string(co.sign));
    contact.fact("residual of the branch", std::to_string(co.curve_residual));
    contact.ok = co.order > 0 && co.order % 2 == 0;
    if (!contact.ok) contact.fact("witness", "odd or missing contact order");
    cert.pieces.push_back(contact);

    // V2(0, 0) = a2 < 0 inside; the flow enters when V2' <= 0 on the boundary.
    CertNode inward{"flow points inward"};
    const Rational v00 = v.eval_at(X, 0).eval_at(Y, 0).constant_term();
    inward.fact("V2(0, 0)", v00.get_str());
    const UniPoly g0 = V.g0.to_uni(Y);
    auto crossings = isolate_real_roots(squarefree_part(g0), Rational(0), 1 / n);
    inward.ok = sgn(v00) < 0 && !crossings.empty() && co.sign < 0;
    if (!crossings.empty()) {
        AlgebraicNumber y0{squarefree_part(g0), crossings.front(), "y0"};
        int sdot = sign_at(vdot.eval_at(X, 0).to_uni(Y), y0);
        y0.refine(Rational(1, 1000000));
        inward.fact("boundary point (0, y0)", "y0 = " + std::to_string(y0.approx()));
        inward.fact("sign of V2' there", std::to_string(sdot));
        inward.ok = inward.ok && sdot < 0;
    }
    if (!inward.ok) inward.fact("witness", "V2' is not negative on the boundary sample");
    cert.pieces.push_back(inward);
    return cert;
}


// ---------------------------------------------------------------------------
// Certificates whose M is one-signed term by term.

// V = 2x^2 + y^4, k = 2/3 on a parameter interval [a, b] inside (0, 3/10]:
// every coefficient of M, a polynomial in m, is nonnegative there.
inline Certificate certify_nc_simple_interval(const Rational& a, const Rational& b) {
    require(a > 0 && a < b && b <= Rational(3, 10), "the simple construction needs 0 < a < b <= 3/10");
    const MFunction Mf = compute_M(build_V_simple(MPoly::var(M)));
    Certificate cert;
    cert.id = "nc-simple";
    cert.proposition = "M = " + Mf.full.str() + " >= 0 on the plane";
    cert.parameter_interval = "m in [" + a.get_str() + ", " + b.get_str() + "]";
    CertNode node{"even monomials with nonnegative coefficients"};
    const ParamInterval I = ParamInterval::closed(a, b);
    bool some_positive = false;
    for (int ex = 0; ex <= Mf.full.degree(X); ++ex) {
        const MPoly cx = Mf.full.coeff_of(X, ex);
        for (int ey = 0; ey <= std::max(cx.degree(Y), 0); ++ey) {
            const MPoly c = cx.coeff_of(Y, ey);
            if (c.zero()) continue;
            const std::string mono = "x^" + std::to_string(ex) + " y^" + std::to_string(ey);
            CertNode t{mono};
            const UniPoly u = c.to_uni(M);
            t.fact("coefficient", to_string(u, "m"));
            const bool even = ex % 2 == 0 && ey % 2 == 0;
            const int inner = u.degree() <= 0 ? 0 : count_real_roots(u, a, b);
            const bool nonneg = even && inner == 0 && sign_at(u, a) >= 0 && sign_at(u, b) >= 0 && sign_at(u, I.sample()) > 0;
            t.fact("roots in (a, b)", std::to_string(inner));
            t.ok = nonneg;
            if (!t.ok) t.fact("witness", even ? "coefficient changes sign" : "odd exponent");
            some_positive = some_positive || (t.ok && sign_at(u, a) > 0 && sign_at(u, b) > 0);
            node.child(t);
        }
    }
    node.fact("strictly positive coefficient on the whole interval", some_positive ? "yes" : "no");
    node.ok = some_positive;
    cert.pieces.push_back(node);
    return cert;
}

inline Certificate certify_nc_simple(const Rational& m) {
    const MFunction Mf = compute_M(build_V_simple(m));
    Certificate c = build_sign_certificate(Mf, RegionOmega{}, std::nullopt, "nc-simple");
    c.parameter_interval = "m = " + m.get_str();
    return c;
}

// k = K(m): M equals (alpha x^2 + beta y^4)^2, checked in 100-digit arithmetic.
inline Certificate certify_nc_km(const Rational& m, double tolerance = 1e-10) {
    const KmSquare sq = nc_km_square(m);
    Certificate cert;
    cert.id = "nc-Km";
    cert.proposition = "M with k = K(m) is a perfect square";
    cert.parameter_interval = "m = " + m.get_str();
    CertNode node{"square identity"};
    node.fact("K(m)", sq.K.str(30));
    node.fact("alpha", sq.alpha.str(30));
    node.fact("beta", sq.beta.str(30));
    const char* names[] = {"x^4", "x^2 y^4", "y^8"};
    for (int i = 0; i < 3; ++i) node.fact(std::string("coefficient of ") + names[i], sq.m_coeffs[i].str(25) + " vs " + sq.square_coeffs[i].str(25));
    node.fact("largest relative residual", sq.max_relative_residual.str(6));
    node.ok = sq.K > 0 && sq.max_relative_residual < Real100(tolerance);
    if (!node.ok) node.fact("witness", "residual above " + std::to_string(tolerance));
    cert.pieces.push_back(node);
    return cert;
}

// m >= 3/5, k = 1/3, V1 = g1' + g1 x: every coefficient of M1 is <= 0.
// The closed form of the y^(6j+4) coefficient shows the sign for every j:
// (-1/9)_j < 0 and m(6j+1)(18j-5) + 3 > 0 when j >= 1.
inline Certificate certify_kummer(const Rational& m, int J) {
    require(m >= Rational(3, 5), "the Kummer construction certifies m >= 3/5, got " + m.get_str());
    const DulacSpec V = build_V1_kummer(m, J);
    const MFunction Mf = compute_M(V);
    Certificate cert;
    cert.id = "kummer";
    cert.proposition = "M1 <= 0 and vanishes only on y = 0";
    cert.parameter_interval = "m = " + m.get_str() + ", terms j <= " + std::to_string(J);
    // the x-part of M1 is the truncation remainder of the Kummer series
    CertNode lin{"M1 independent of x up to the truncation order"};
    const MPoly xpart = Mf.full.coeff_of(X, 1);
    lin.fact("x-coefficient", xpart.zero() ? "0" : xpart.str());
    lin.ok = !Mf.full.uses(X) || (Mf.full.degree(X) == 1 && xpart.min_degree(Y) >= 6 * J + 5);
    if (!lin.ok) lin.fact("witness", "x-coefficient below order y^" + std::to_string(6 * J + 5));
    cert.pieces.push_back(lin);
    CertNode coeffs{"series coefficients"};
    for (int j = 0; j <= J; ++j) {
        CertNode t{"y^" + std::to_string(6 * j + 4)};
        const Rational closed = kummer_m1_coefficient(m, j);
        const Rational computed = Mf.full.coeff(Mono{0, 6 * j + 4});
        t.fact("closed form", closed.get_str());
        t.fact("from V1", computed.get_str());
        t.ok = closed == computed && sgn(closed) <= 0;
        if (!t.ok) t.fact("witness", closed == computed ? "positive coefficient" : "mismatch with the closed form");
        coeffs.child(t);
    }
    cert.pieces.push_back(coeffs);
    CertNode general{"all further terms"};
    general.fact("(-1/9)_j", "negative for j >= 1: one negative factor, the rest positive");
    general.fact("m(6j+1)(18j-5) + 3", "positive for j >= 1 and m > 0");
    general.fact("(3 - 5m)/3", sgn(Rational(3 - 5 * m)) == 0 ? "zero" : "negative");
    cert.pieces.push_back(general);
    return cert;
}


// ---------------------------------------------------------------------------
// Whole-interval runs for the degree-8 and invariant-region constructions.
// These are long computations and only run on request.

namespace detail {

inline Rational ratfun_at(const RatFun& f, const Rational& n) { return eval_ratfun(f, n); }

// Rational interval containing (c(r), d(r)) for an algebraic r.  The ends
// used here (+-n, +-1/n) are monotone, so the values at the ends of the
// isolating interval bound them.
inline std::pair<Rational, Rational> moving_hull(const RatFun& c, const RatFun& d, const AlgebraicNumber& r) {
    Rational a1 = ratfun_at(c, r.iv.lo), a2 = ratfun_at(c, r.iv.hi), b1 = ratfun_at(d, r.iv.lo), b2 = ratfun_at(d, r.iv.hi);
    return {a1 < a2 ? a1 : a2, b1 > b2 ? b1 : b2};
}

// Real roots of p strictly inside I.
inline std::vector<AlgebraicNumber> roots_inside(const UniPoly& p, const ParamInterval& I) {
    std::vector<AlgebraicNumber> out;
    const UniPoly sf = squarefree_part(p);
    auto [a, b] = I.hull();
    for (const auto& iv : isolate_real_roots(sf, a, b)) {
        AlgebraicNumber r{sf, iv, "root"};
        if (compare(r, I.lo) > 0 && compare(r, I.hi) < 0) out.push_back(r);
    }
    return out;
}

}  // namespace detail

// Root-count continuation with splitting: if the discriminant eliminant has
// roots inside I, the interval is cut there and the count is checked on
// each side and at each cut.  At a cut r the check is conservative: the
// resultant of G with the minimal polynomial of r must have no roots in a
// rational interval containing (c(r), d(r)), which is only available when
// the expected count is zero.
inline CertNode continuation_with_splits(const std::string& name, const MPoly& G, int var, const RatFun& c, const RatFun& d,
                                         const ParamInterval& I, int expected) {
    CertNode node{name};
    node.fact("interval", I.describe());
    node.fact("expected roots", std::to_string(expected));
    FamilyProblem F;
    F.name = name;
    F.G = G;
    F.var = var;
    F.param = N;
    F.c = c;
    F.d = d;
    F.I = I;
    F.expected_roots = expected;

    CertNode ends{"no roots at the moving ends"};
    const UniPoly H = eliminated_endpoint_product(F);
    ends.fact("eliminant", poly_summary(H, "n"));
    const int kh = H.zero() ? -1 : count_in(H, I);
    ends.fact("roots in interval", std::to_string(kh));
    ends.ok = kh == 0;
    if (!ends.ok) ends.fact("witness", H.zero() ? std::string("identically zero") : root_witness(H, I));
    node.child(ends);

    std::vector<AlgebraicNumber> cuts;
    if (G.degree(var) > 1) {
        const UniPoly D = eliminated_discriminant(G, var, N, std::nullopt);
        CertNode disc{"discriminant"};
        disc.fact("eliminant", poly_summary(D, "n"));
        if (D.zero()) {
            disc.ok = false;
            disc.fact("witness", "identically zero");
        } else {
            cuts = detail::roots_inside(D, I);
            if (!I.lo_open && sign_at(D, I.lo) == 0) cuts.insert(cuts.begin(), I.lo);
            if (!I.hi_open && sign_at(D, I.hi) == 0) cuts.push_back(I.hi);
            disc.fact("cuts", std::to_string(cuts.size()));
        }
        node.child(disc);
    }

    // open pieces between the cuts
    std::vector<ParamInterval> parts;
    AlgebraicNumber lo = I.lo;
    bool lo_open = I.lo_open;
    for (const auto& r : cuts) {
        if (compare(r, lo) > 0) parts.push_back({lo, r, lo_open, true});
        lo = r;
        lo_open = true;
    }
    if (compare(I.hi, lo) > 0) parts.push_back({lo, I.hi, lo_open, I.hi_open});
    for (const auto& part : parts) {
        const Rational n0 = part.sample();
        CertNode p{"count at n0 = " + n0.get_str()};
        const UniPoly g0 = G.eval_at(N, n0).to_uni(var);
        const Rational a = detail::ratfun_at(c, n0), b = detail::ratfun_at(d, n0);
        const int k = g0.zero() ? -1 : count_real_roots(g0, a, b);
        p.fact("piece", part.describe());
        p.fact("roots in (" + a.get_str() + ", " + b.get_str() + ")", std::to_string(k));
        p.ok = k == expected;
        if (!p.ok) p.fact("witness", "n0 = " + n0.get_str());
        node.child(p);
    }
    for (auto r : cuts) {
        r.refine(Rational(1, 1000000000));
        CertNode p{"at the cut n = " + std::to_string(r.approx())};
        const MPoly minpoly = MPoly::from_uni(r.poly, N);
        const UniPoly g = resultant(minpoly, G, N).to_uni(var);
        auto [a, b] = detail::moving_hull(c, d, r);
        const int k = g.zero() ? -1 : count_real_roots(g, a, b);
        p.fact("candidate roots in (" + std::to_string(to_double(a)) + ", " + std::to_string(to_double(b)) + ")", std::to_string(k));
        p.ok = expected == 0 && k == 0;
        if (!p.ok) p.fact("witness", "cut n = " + std::to_string(r.approx()));
        node.child(p);
    }
    node.ok = node.all_ok();
    return node;
}

namespace detail {

// p(y, n) / divisor(y, n) for an exact divisor, by interpolation in n.
inline MPoly exact_quotient_in_y(const MPoly& p, const MPoly& divisor, int n_bound) {
    return interpolate_mpoly(N, n_bound, [&](const Integer& node) -> std::optional<MPoly> {
        const Rational r(node);
        const UniPoly den = divisor.eval_at(N, r).to_uni(Y);
        if (den.zero() || is_zero(den.lead())) return std::nullopt;
        const UniPoly num = p.eval_at(N, r).to_uni(Y);
        if (den.degree() > 0 && divisor.degree(Y) != den.degree()) return std::nullopt;
        auto [q, rem] = divmod(num, den);
        if (!rem.zero()) throw DomainError("exact_quotient_in_y: the divisor does not divide at n = " + r.get_str());
        return MPoly::from_uni(q, Y);
    });
}

inline ParamInterval interval_of(const AlgebraicNumber& a, const AlgebraicNumber& b, bool lo_open, bool hi_open) {
    return {a, b, lo_open, hi_open};
}

}  // namespace detail

inline Certificate certify_prop925_interval() {
    const DulacSpec V = build_V2_prop925_symbolic();
    const MFunction Mf = compute_M(V);
    const MPoly n = MPoly::var(N), in = detail::inv_n();
    const AlgebraicNumber lo = AlgebraicNumber::rational(lo925()), hi = AlgebraicNumber::rational(hi925()), nt = n_tilde();
    const ParamInterval J = detail::interval_of(lo, nt, true, true), K = detail::interval_of(nt, hi, true, true),
                        L = detail::interval_of(lo, hi, true, true);
    Certificate cert;
    cert.id = "degree8-interval";
    cert.proposition = "no limit cycles for n in (77/100, 211/250) with n~ excluded";
    cert.parameter_interval = L.describe();

    // J: boundary pieces and corners
    CertNode j{"n in " + J.describe() + ": M keeps its sign"};
    for (const auto& p : boundary_pieces(Mf.reduced)) j.child(continuation_with_splits(p.name, p.G, p.var, p.c, p.d, J, 0));
    for (const auto& cv : corner_values(Mf.reduced)) {
        CertNode cn{cv.name};
        if (cv.value.zero()) {
            const MPoly mx = detail::clear_positive(Mf.reduced.diff(X).subs(X, in).subs(Y, in));
            const MPoly my = detail::clear_positive(Mf.reduced.diff(Y).subs(X, in).subs(Y, in));
            const UniPoly prod = (mx * my).to_uni(N);
            const int k = count_in(prod, J);
            const int sg = sign_at(prod, J.sample());
            cn.fact("M vanishes; M_x M_y", poly_summary(prod, "n"));
            cn.fact("roots in J", std::to_string(k));
            cn.fact("sign at a sample", std::to_string(sg));
            cn.ok = k == 0 && sg > 0;
        } else {
            const UniPoly u = cv.value.to_uni(N);
            const int k = count_in(u, J);
            cn.fact("roots in J", std::to_string(k));
            cn.ok = k == 0;
            if (!cn.ok) cn.fact("witness", root_witness(u, J));
        }
        j.child(cn);
    }
    j.ok = j.all_ok();
    cert.pieces.push_back(j);

    // K: contact analysis
    CertNode k{"n in " + K.describe() + ": {M = 0} without contact"};
    const PlanarSystem sys = V.system();
    MPoly Md = sys.lie(Mf.reduced);
    Mono sh{};
    sh[Y] = -Md.min_degree(Y);
    const MPoly Nf = Md.times_mono(sh);
    const MPoly R = resultant(Mf.reduced, Nf, X);
    const MPoly y = MPoly::var(Y);
    const MPoly edge = n * n * y * y - MPoly(1);
    const MPoly P2 = p2_925();
    const MPoly P34 = detail::exact_quotient_in_y(R, y * y * edge * P2, R.degree(N));
    k.fact("Res(M, N, x)", "degree " + std::to_string(R.degree(Y)) + " in y, " + std::to_string(R.degree(N)) + " in n");
    k.fact("surviving factor", "degree " + std::to_string(P34.degree(Y)) + " in y, " + std::to_string(P34.degree(N)) + " in n");
    const RatFun lo_y{-MPoly(1), n}, hi_y{MPoly(1), n};
    k.child(continuation_with_splits("quadratic factor", P2, Y, lo_y, hi_y, K, 0));
    k.child(continuation_with_splits("surviving factor", P34, Y, lo_y, hi_y, K, 2));
    // the two root curves never reach x = 1/n or xy = -1
    const MPoly phi = Mf.phi, psi = Mf.psi;
    const MPoly right = detail::clear_positive(-psi - phi * in), hyper = phi - y * psi;
    for (const auto& [label, F] : {std::pair<std::string, MPoly>{"x = 1/n", right}, {"xy = -1", hyper}}) {
        CertNode b{"root curves meet " + label};
        const UniPoly res = resultant(F, P34, Y).to_uni(N);
        const int cnt = res.zero() ? -1 : count_in(res, K);
        b.fact("resultant", poly_summary(res, "n"));
        b.fact("roots in K", std::to_string(cnt));
        b.ok = cnt == 0;
        if (!b.ok) b.fact("witness", res.zero() ? std::string("identically zero") : root_witness(res, K));
        k.child(b);
    }
    const Certificate at = build_contact_certificate(Mf, sys, Rational(83, 100));
    CertNode sample{"root curves outside Omega at n = 83/100"};
    sample.ok = at.verdict();
    k.child(sample);
    const MPoly RV = resultant(V.V(), Mf.reduced, X);
    const MPoly P30 = detail::exact_quotient_in_y(RV, edge, RV.degree(N));
    k.child(continuation_with_splits("Res(V, M, x) / (n^2 y^2 - 1)", P30, Y, lo_y, hi_y, K, 0));
    k.ok = k.all_ok();
    cert.pieces.push_back(k);

    const MPoly diag = V.V().subs(Y, MPoly::var(X).scaled(Rational(9, 10)));
    cert.pieces.push_back(continuation_with_splits("V(x, 9x/10)", diag, X, lo_y, hi_y, L, 0));
    return cert;
}

inline Certificate certify_prop547_interval() {
    const DulacSpec V = build_V2_prop547_symbolic();
    const PlanarSystem sys = V.system();
    const MPoly v = V.V(), vdot = sys.lie(v);
    const MPoly n = MPoly::var(N), y = MPoly::var(Y);
    const ParamInterval T{AlgebraicNumber::root_in(UniPoly(std::vector<Rational>{Rational(-1), 0, Rational(2)}), Rational(7, 10), Rational(3, 4), "(1/2)^(1/2)"),
                          AlgebraicNumber::root_in(UniPoly(std::vector<Rational>{Rational(-547), 0, Rational(1000)}), Rational(7, 10), Rational(3, 4),
                                                   "(547/1000)^(1/2)"),
                          false, false};
    Certificate cert;
    cert.id = "invariant-region-interval";
    cert.proposition = "V2' does not vanish on {V2 = 0} away from y = 0 and the saddles";
    cert.parameter_interval = T.describe();
    const MPoly R = resultant(v, vdot, X);
    const MPoly strip = y.pow(8) * (n * y * y - MPoly(1)).pow(4);
    const MPoly rest = detail::exact_quotient_in_y(R, strip, R.degree(N));
    CertNode info{"Res(V2, V2', x)"};
    info.fact("degree", std::to_string(R.degree(Y)) + " in y, " + std::to_string(R.degree(N)) + " in n");
    info.fact("after removing y^8 (n y^2 - 1)^4", "degree " + std::to_string(rest.degree(Y)) + " in y");
    cert.pieces.push_back(info);
    cert.pieces.push_back(continuation_with_splits("remaining factor", rest, Y, {-MPoly(1), n}, {MPoly(1), n}, T, 0));
    CertNode local{"contact order and inward direction"};
    local.fact("note", "checked numerically at sampled n only");
    cert.pieces.push_back(local);
    return cert;
}

}  // namespace cyclecert::dulac
