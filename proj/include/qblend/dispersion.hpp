#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "qblend/assembly.hpp"
#include "qblend/blends.hpp"
#include "qblend/rational.hpp"

namespace qblend {

/// Cosine-series views s(theta), m(theta) of an interior stencil.
struct SymbolFunctions {
    std::vector<double> s;  // shat_0..shat_p
    std::vector<double> m;  // mhat_0..mhat_p

    explicit SymbolFunctions(const StencilSymbol& sym) {
        for (const auto& v : sym.stiffness) s.push_back(to_double(v));
        for (const auto& v : sym.mass) m.push_back(to_double(v));
    }

    double s_theta(double theta) const {
        double v = s[0];
        for (std::size_t k = 1; k < s.size(); ++k) v += 2 * s[k] * std::cos(k * theta);
        return v;
    }
    double m_theta(double theta) const {
        double v = m[0];
        for (std::size_t k = 1; k < m.size(); ++k) v += 2 * m[k] * std::cos(k * theta);
        return v;
    }
};

/// sqrt(lambda_h) h as a function of the continuous wavenumber theta = Lambda.
inline double spectrum_curve(const SymbolFunctions& sym, double theta) {
    if (theta <= 0.0 || theta >= std::numbers::pi)
        throw InvalidParameter("spectrum_curve: theta must lie in (0, pi)");
    const double mh = sym.m_theta(theta);
    if (mh <= 0.0)
        throw DegenerateSymbolError("spectrum_curve: mass symbol nonpositive at theta");
    return std::sqrt(sym.s_theta(theta) / mh);
}

/// Discrete wavenumber mu h solving s(mu h) = Lambda^2 m(mu h) on (0, pi):
/// bisection bracket, then Newton polish to |residual| <= 1e-14.
inline double dispersion_curve(const SymbolFunctions& sym, double Lambda) {
    if (Lambda <= 0.0) throw InvalidParameter("dispersion_curve: Lambda must be positive");
    const double L2 = Lambda * Lambda;
    auto f = [&](double th) { return sym.s_theta(th) - L2 * sym.m_theta(th); };

    const double pi = std::numbers::pi;
    double lo = 1e-12, hi = pi * (1.0 - 1e-12);
    double flo = f(lo), fhi = f(hi);
    if (flo > 0.0 || !(flo < 0.0) || fhi < 0.0) {
        // f(0+) = -Lambda^2 < 0; a sign change requires the band edge above Lambda
        if (fhi < 0.0)
            throw OutOfBandError("dispersion_curve: no root in (0, pi); Lambda above band edge");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-13) break;
    }
    double th = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        double fv = f(th);
        if (std::abs(fv) <= 1e-14) break;
        // derivative of the relation in theta
        double ds = 0.0, dm = 0.0;
        for (std::size_t k = 1; k < sym.s.size(); ++k) {
            ds += -2.0 * k * sym.s[k] * std::sin(k * th);
            dm += -2.0 * k * sym.m[k] * std::sin(k * th);
        }
        const double dfv = ds - L2 * dm;
        if (dfv == 0.0) break;
        double next = th - fv / dfv;
        if (next <= lo || next >= hi) next = 0.5 * (lo + hi);
        if (f(next) < 0.0)
            lo = next;
        else
            hi = next;
        th = next;
    }
    if (std::abs(f(th)) > 1e-12)
        throw NumericalError("dispersion_curve: root polish failed to reach tolerance");
    return th;
}

/// One printed closed-form dispersion relation: coefficients of cos^k, each
/// affine in Lambda^2, ordered degree-descending as in the source.
struct ClosedFormRelation {
    std::string rule;
    std::vector<std::pair<long, long>> coeffs;  // (constant, Lambda^2 coefficient)
};

struct ClosedFormCheck {
    std::string rule;
    bool matched = false;
    Rational scale;            // ours = scale * printed
    std::string ours, printed; // rendering for diagnostics
};

namespace detail {

/// Rewrites the stencil relation s(theta) - Lambda^2 m(theta) = 0 as a
/// polynomial in c = cos(theta) via Chebyshev T_k; returns coefficients of
/// c^k, k = 0..p, as (constant, Lambda^2) pairs.
inline std::vector<std::pair<Rational, Rational>> chebyshev_relation(const StencilSymbol& sym) {
    const int p = sym.degree;
    // T_k coefficient table
    std::vector<std::vector<Rational>> T(p + 1);
    T[0] = {Rational(1)};
    if (p >= 1) T[1] = {Rational(0), Rational(1)};
    for (int k = 2; k <= p; ++k) {
        T[k].assign(k + 1, Rational(0));
        for (std::size_t i = 0; i < T[k - 1].size(); ++i) T[k][i + 1] += 2 * T[k - 1][i];
        for (std::size_t i = 0; i < T[k - 2].size(); ++i) T[k][i] -= T[k - 2][i];
    }
    std::vector<std::pair<Rational, Rational>> out(p + 1, {Rational(0), Rational(0)});
    auto add_term = [&](const Rational& s_coeff, const Rational& m_coeff, int k, Rational mult) {
        for (std::size_t i = 0; i < T[k].size(); ++i) {
            out[i].first += mult * s_coeff * T[k][i];
            out[i].second -= mult * m_coeff * T[k][i];
        }
    };
    add_term(sym.stiffness[0], sym.mass[0], 0, Rational(1));
    for (int k = 1; k <= p; ++k) add_term(sym.stiffness[k], sym.mass[k], k, Rational(2));
    return out;
}

} // namespace detail

/// Verifies that the stencil-derived cos-polynomial relation is a rational
/// multiple of a printed relation; reports the scale or throws on mismatch.
inline ClosedFormCheck check_closed_form(const StencilSymbol& sym,
                                         const ClosedFormRelation& printed) {
    auto ours = detail::chebyshev_relation(sym);
    const int p = sym.degree;
    if (static_cast<int>(printed.coeffs.size()) != p + 1)
        throw InvalidParameter("closed-form relation arity mismatch");
    ClosedFormCheck res;
    res.rule = printed.rule;
    // printed list is degree-descending: printed.coeffs[0] multiplies c^p
    auto printed_at = [&](int k) {
        const auto& pr = printed.coeffs[p - k];
        return std::pair<Rational, Rational>(Rational(pr.first), Rational(pr.second));
    };
    // find first nonzero printed coefficient to fix the scale
    Rational scale(0);
    for (int k = p; k >= 0 && scale == 0; --k) {
        auto [pc, pl] = printed_at(k);
        if (pc != 0)
            scale = ours[k].first / pc;
        else if (pl != 0)
            scale = ours[k].second / pl;
    }
    if (scale == 0) throw InvalidParameter("printed relation is identically zero");
    res.scale = scale;
    res.matched = true;
    for (int k = 0; k <= p; ++k) {
        auto [pc, pl] = printed_at(k);
        if (ours[k].first != scale * pc || ours[k].second != scale * pl) res.matched = false;
    }
    for (int k = p; k >= 0; --k) {
        res.ours += (res.ours.empty() ? "" : " + ") + std::string("(") +
                    to_string(ours[k].first) + " + " + to_string(ours[k].second) + " L2)c^" +
                    std::to_string(k);
        auto [pc, pl] = printed_at(k);
        res.printed += (res.printed.empty() ? "" : " + ") + std::string("(") + to_string(pc) +
                       " + " + to_string(pl) + " L2)c^" + std::to_string(k);
    }
    return res;
}

/// The paper-order quadratic and cubic printed relations.
inline const std::vector<ClosedFormRelation>& printed_relations(int p) {
    static const std::vector<ClosedFormRelation> quadratic{
        {"G3", {{20, 1}, {20, 13}, {-40, 16}}},
        {"GL3", {{16, 1}, {16, 10}, {-32, 13}}},
        {"G2", {{24, 1}, {24, 16}, {-48, 19}}},
        {"O2", {{120, 7}, {120, 76}, {-240, 97}}},
    };
    static const std::vector<ClosedFormRelation> cubic{
        {"G4", {{42, 1}, {504, 60}, {126, 297}, {-672, 272}}},
        {"GL4", {{90, 2}, {1080, 129}, {270, 636}, {-1440, 583}}},
        {"G3", {{120, 3}, {1440, 171}, {360, 849}, {-1920, 777}}},
    };
    if (p == 2) return quadratic;
    if (p == 3) return cubic;
    throw InvalidParameter("printed_relations: only p = 2 and p = 3 are tabulated");
}

/// Resolves the relation label (G3, GL4, O2, ...) to a quadrature spec.
inline QuadratureSpec relation_rule(int p, const std::string& label) {
    if (label[0] == 'O') return optimal_blend(p);
    if (label.substr(0, 2) == "GL") return single_rule(lobatto(std::stoi(label.substr(2))));
    return single_rule(gauss(std::stoi(label.substr(1))));
}

/// Confirms every printed closed-form relation for degree p against the
/// stencil-derived one, up to a rational scale. Mismatch is a hard failure
/// with both polynomials in the message.
inline std::vector<ClosedFormCheck> verify_closed_forms(int p) {
    const auto& printed = printed_relations(p);
    const SplineSpace space = make_space(p, 2 * p + 3);
    std::vector<ClosedFormCheck> out;
    for (const auto& rel : printed) {
        const QuadratureSpec q = relation_rule(p, rel.rule);
        const StencilSymbol sym = interior_stencil(space, q, q);
        ClosedFormCheck chk = check_closed_form(sym, rel);
        if (!chk.matched)
            throw NumericalError("closed-form mismatch for " + rel.rule + ": ours = " + chk.ours +
                                 " vs printed = " + chk.printed);
        out.push_back(std::move(chk));
    }
    return out;
}

} // namespace qblend
