#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "../certificate.hpp"
#include "roots.hpp"

namespace cyclecert {

// A parameter interval whose ends are real algebraic numbers, each either
// included or excluded.
struct ParamInterval {
    AlgebraicNumber lo, hi;
    bool lo_open = false, hi_open = false;

    static ParamInterval closed(const Rational& a, const Rational& b) {
        return {AlgebraicNumber::rational(a), AlgebraicNumber::rational(b), false, false};
    }
    std::string describe() const {
        std::ostringstream os;
        os << (lo_open ? "(" : "[") << lo.label << ", " << hi.label << (hi_open ? ")" : "]");
        return os.str();
    }
    // A rational strictly inside.
    Rational sample() const {
        AlgebraicNumber a = lo, b = hi;
        Rational w = b.iv.hi - a.iv.lo;
        a.refine(w / 64);
        b.refine(w / 64);
        return (a.iv.hi + b.iv.lo) / 2;
    }
    // Rational interval containing the parameter interval.
    std::pair<Rational, Rational> hull() const { return {lo.iv.lo, hi.iv.hi}; }
};

// Number of distinct real roots of p in the interval, respecting open ends.
inline int count_in(const UniPoly& p, const ParamInterval& I) {
    if (p.zero()) throw ZeroPolynomial("root count of the zero polynomial");
    UniPoly q = p;
    // roots at the origin are cheap to strip and common in these eliminants
    if (q.low_order() > 0 && compare(I.lo, Rational(0)) > 0) q = q.shifted(-static_cast<long>(q.low_order()));
    int count = count_roots_between(q, I.lo, I.hi);
    if (!I.lo_open && sign_at(q, I.lo) == 0) ++count;
    if (!I.hi_open && sign_at(q, I.hi) == 0) ++count;
    return count;
}

// Human-readable location of the roots of p in I.
inline std::string root_witness(const UniPoly& p, const ParamInterval& I) {
    auto [a, b] = I.hull();
    std::ostringstream os;
    Rational pad = (b - a) / 1000;
    Rational lo = nudge_endpoint(p, a - pad, -1, pad), hi = nudge_endpoint(p, b + pad, 1, pad);
    bool first = true;
    for (auto r : isolate_real_roots(squarefree_part(p), lo, hi)) {
        r = refine_root(squarefree_part(p), r, Rational(1, 1000000000));
        if (!first) os << "; ";
        first = false;
        os << "[" << to_double(r.lo) << ", " << to_double(r.hi) << "]";
    }
    return first ? std::string("none located") : os.str();
}

// A rational function of the parameter given as numerator/denominator.
struct RatFun {
    MPoly num;
    MPoly den = MPoly(1);
};

// An auxiliary algebraic function of the parameter, e.g. s with
// s^3 = (75 - 125 n^4)^2, given by a relation monic in its slot.
struct AuxAlgebraic {
    int slot;
    MPoly relation;
    std::string description;
};

struct FamilyProblem {
    std::string name;
    MPoly G;  // in variables var, param and possibly aux->slot
    int var = X;
    int param = N;
    std::optional<AuxAlgebraic> aux;
    RatFun c, d;  // the moving interval (c(m), d(m))
    ParamInterval I;
    int expected_roots = 0;
    Rational m0;
    // Replaces the default exact check of hypothesis (i), for instance when
    // G at m0 has irrational coefficients.
    std::function<CertNode()> hypothesis_i;
};

namespace detail {

// numerator of G(var = num/den), i.e. sum g_i num^i den^(deg - i)
inline MPoly substitute_ratfun(const MPoly& G, int var, const RatFun& f) {
    if (f.den == MPoly(1) && f.num.size() == 1) return G.subs(var, f.num).cleared().first;
    const int deg = G.degree(var);
    MPoly acc;
    for (int i = 0; i <= deg; ++i)
        acc += G.coeff_of(var, i) * f.num.pow(static_cast<unsigned>(i)) * f.den.pow(static_cast<unsigned>(deg - i));
    return acc.cleared().first;
}

// Resultant with the monic auxiliary relation placed first, so the value is
// the product of H over the roots of the relation whatever the degree of H.
inline MPoly norm_over_aux(const MPoly& H, const AuxAlgebraic& aux, int param) {
    const MPoly& R = aux.relation;
    const int bound = H.degree(aux.slot) * R.degree(param) + R.degree(aux.slot) * std::max(H.degree(param), 0);
    return interpolate_mpoly(param, bound, [&](const Integer& node) -> std::optional<MPoly> {
        Rational r(node);
        MPoly h = H.eval_at(param, r), rel = R.eval_at(param, r);
        if (h.zero()) return MPoly();
        if (!h.uses(aux.slot)) return MPoly(rpow(h.constant_term(), rel.degree(aux.slot)));
        return MPoly(resultant(rel.to_uni(aux.slot), h.to_uni(aux.slot)));
    });
}

}  // namespace detail

// Discriminant of G in var, with the auxiliary variable (if any) eliminated
// by the norm; the result is a polynomial in the parameter whose
// nonvanishing implies nonvanishing of the true discriminant.
inline UniPoly eliminated_discriminant(const MPoly& G, int var, int param, const std::optional<AuxAlgebraic>& aux) {
    if (!aux) return discriminant(G, var).to_uni(param);
    const int d = G.degree(var);
    const int dn = (2 * d - 2) * G.degree(param), ds = (2 * d - 2) * G.degree(aux->slot);
    const MPoly& R = aux->relation;
    const int bound = ds * R.degree(param) + R.degree(aux->slot) * dn;
    const MPoly lead = G.lead_coeff(var);
    MPoly out = interpolate_mpoly(param, bound, [&](const Integer& node) -> std::optional<MPoly> {
        Rational r(node);
        if (lead.eval_at(param, r).zero()) return std::nullopt;
        MPoly D = discriminant(G.eval_at(param, r), var);
        MPoly rel = R.eval_at(param, r);
        if (D.zero()) return MPoly();
        if (!D.uses(aux->slot)) return MPoly(rpow(D.constant_term(), rel.degree(aux->slot)));
        return MPoly(resultant(rel.to_uni(aux->slot), D.to_uni(aux->slot)));
    });
    return out.to_uni(param);
}

inline UniPoly eliminated_endpoint_product(const FamilyProblem& P) {
    MPoly H = detail::substitute_ratfun(P.G, P.var, P.c) * detail::substitute_ratfun(P.G, P.var, P.d);
    if (P.aux && H.uses(P.aux->slot)) H = detail::norm_over_aux(H, *P.aux, P.param);
    return H.to_uni(P.param);
}

inline std::string poly_summary(const UniPoly& p, const std::string& var) {
    std::ostringstream os;
    os << "degree " << p.degree();
    if (p.degree() <= 6) os << ": " << to_string(p, var);
    return os.str();
}

// Default hypothesis (i): exact count of simple roots at m0.
inline CertNode exact_hypothesis_i(const FamilyProblem& P) {
    CertNode node{"hypothesis (i): simple roots at m0"};
    node.fact("m0", P.m0.get_str());
    MPoly g = P.G.eval_at(P.param, P.m0);
    if (P.aux && g.uses(P.aux->slot)) throw DomainError("hypothesis (i) needs a custom check when the auxiliary value is irrational");
    UniPoly G0 = g.to_uni(P.var);
    Rational c0 = P.c.num.eval_at(P.param, P.m0).constant_term() / P.c.den.eval_at(P.param, P.m0).constant_term();
    Rational d0 = P.d.num.eval_at(P.param, P.m0).constant_term() / P.d.den.eval_at(P.param, P.m0).constant_term();
    node.fact("interval at m0", "(" + c0.get_str() + ", " + d0.get_str() + ")");
    if (G0.zero()) {
        node.ok = false;
        node.fact("G(m0)", "identically zero");
        return node;
    }
    int roots = count_real_roots(G0, c0, d0);
    int multiple = G0.degree() > 0 ? count_real_roots(gcd(G0, G0.derivative()), c0, d0) : 0;
    bool endpoint_zero = sign_at(G0, c0) == 0 || sign_at(G0, d0) == 0;
    node.fact("distinct roots", std::to_string(roots));
    node.fact("multiple roots", std::to_string(multiple));
    node.fact("expected", std::to_string(P.expected_roots));
    node.ok = roots == P.expected_roots && multiple == 0 && !endpoint_zero;
    if (endpoint_zero) node.fact("endpoint root", "G(m0) vanishes at an end of the interval");
    return node;
}

// The three hypotheses of the continuation lemma: if (i) G_{m0} has exactly
// r simple zeros in (c(m0), d(m0)), (ii) G_m(c(m)) G_m(d(m)) != 0 and
// (iii) disc_x G_m != 0 for all m in I, then every G_m has r zeros there.
inline Certificate family_root_certificate(const FamilyProblem& P) {
    Certificate cert;
    cert.id = "family/" + P.name;
    cert.proposition = "root count continuation: " + std::to_string(P.expected_roots) + " zero(s) of " + P.name;
    cert.parameter_interval = P.I.describe();

    CertNode root{P.name};
    root.child(P.hypothesis_i ? P.hypothesis_i() : exact_hypothesis_i(P));

    CertNode ii{"hypothesis (ii): no roots at the moving ends"};
    UniPoly H = eliminated_endpoint_product(P);
    ii.fact("eliminant", poly_summary(H, "n"));
    if (H.zero()) {
        ii.ok = false;
        ii.fact("failure", "endpoint product vanishes identically");
    } else {
        int k = count_in(H, P.I);
        ii.fact("roots in interval", std::to_string(k));
        ii.ok = k == 0;
        if (!ii.ok) ii.fact("witness", root_witness(H, P.I));
    }
    root.child(std::move(ii));

    CertNode iii{"hypothesis (iii): nonvanishing discriminant"};
    if (P.G.degree(P.var) <= 1) {
        iii.fact("discriminant", "degree <= 1 in the variable; the root moves continuously");
    } else {
        UniPoly D = eliminated_discriminant(P.G, P.var, P.param, P.aux);
        iii.fact("eliminant", poly_summary(D, "n"));
        if (D.zero()) {
            iii.ok = false;
            iii.fact("failure", "discriminant vanishes identically");
        } else {
            int k = count_in(D, P.I);
            iii.fact("roots in interval", std::to_string(k));
            iii.ok = k == 0;
            if (!iii.ok) iii.fact("witness", root_witness(D, P.I));
        }
    }
    root.child(std::move(iii));
    cert.pieces.push_back(std::move(root));
    return cert;
}

// Throwing form: returns the certificate when every hypothesis holds and
// raises HypothesisFailed naming the first failing one otherwise.
inline Certificate family_root_count(const FamilyProblem& P) {
    Certificate cert = family_root_certificate(P);
    static const char* names[] = {"i", "ii", "iii"};
    const auto& hyps = cert.pieces.front().children;
    // report the discriminant first: it is the structural obstruction
    for (int idx : {2, 0, 1}) {
        const CertNode& h = hyps[static_cast<std::size_t>(idx)];
        if (!h.all_ok()) {
            std::string witness = "interval " + cert.parameter_interval;
            for (const auto& [k, v] : h.facts)
                if (k == "witness") witness = v;
            throw HypothesisFailed(names[idx], witness);
        }
    }
    return cert;
}

// The same lemma for an element of Q[n][x] with rational-function ends.
inline Certificate family_root_count(const ParamPoly& G, const RatFun& c, const RatFun& d, const ParamInterval& I,
                                     const Rational& m0, int r) {
    FamilyProblem P;
    P.name = "G";
    P.G = MPoly::from_param(G, X, N);
    P.c = c;
    P.d = d;
    P.I = I;
    P.m0 = m0;
    P.expected_roots = r;
    return family_root_count(P);
}

}  // namespace cyclecert
