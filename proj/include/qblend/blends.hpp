#pragma once

#include <map>
#include <mutex>
#include <string>
#include <string_view>

#include "qblend/series.hpp"

namespace qblend {

/// Blending parameter of O_p in the Gauss/Lobatto form
/// tau G_{p+1} + (1-tau) GL_{p+1}. Values for p = 2..7 are fixed; for p = 1
/// tau is derived once from the series engine (and must kill the Lambda^3
/// term exactly, else this throws).
inline Rational optimal_tau(int p) {
    switch (p) {
        case 2: return Rational(1, 3);
        case 3: return Rational(-3, 2);
        case 4: return Rational(-79, 5);
        case 5: return Rational(-174);
        case 6: return Rational(-91177, 35);
        case 7: return Rational(-105103, 2);
        case 1: {
            static std::once_flag flag;
            static Rational tau1;
            std::call_once(flag, [] {
                tau1 = find_optimal_tau(1, single_rule(gauss(2)), single_rule(lobatto(2)));
            });
            return tau1;
        }
        default:
            throw InvalidParameter("optimal_tau: p must be in 1..7");
    }
}

/// The dispersion-optimal blend O_p = tau G_{p+1} + (1-tau) GL_{p+1}.
inline QuadratureSpec optimal_blend(int p) {
    if (p < 1 || p > kMaxDegree) throw InvalidParameter("optimal_blend: p must be in 1..7");
    QuadratureSpec q = blend(optimal_tau(p), single_rule(gauss(p + 1)), single_rule(lobatto(p + 1)));
    q.label = "O" + std::to_string(p);
    return q;
}

namespace detail {

inline ReferenceRule parse_single_rule(std::string_view tok) {
    // explicit names: g<N> or gl<N>
    if (tok.size() >= 2 && tok.substr(0, 2) == "gl")
        return lobatto(std::stoi(std::string(tok.substr(2))));
    if (tok.size() >= 1 && tok[0] == 'g')
        return gauss(std::stoi(std::string(tok.substr(1))));
    throw InvalidParameter("unknown rule token: '" + std::string(tok) + "'");
}

} // namespace detail

/// Resolves a CLI rule name for degree p:
///   g+1 -> G_{p+1}, gl+1 -> GL_{p+1}, g+0 -> G_p, opt -> O_p,
///   blend:TAU:R1:R2 with TAU rational and R1/R2 of the form g<N>/gl<N>.
inline QuadratureSpec named_rule(int p, std::string_view name) {
    if (name == "g+1") return single_rule(gauss(p + 1));
    if (name == "gl+1") return single_rule(lobatto(p + 1));
    if (name == "g+0") return single_rule(gauss(p));
    if (name == "gl+0") return single_rule(lobatto(p));
    if (name == "opt") return optimal_blend(p);
    constexpr std::string_view kBlend = "blend:";
    if (name.substr(0, kBlend.size()) == kBlend) {
        std::string rest(name.substr(kBlend.size()));
        auto c1 = rest.find(':');
        auto c2 = rest.find(':', c1 == std::string::npos ? c1 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw InvalidParameter("blend spec must be blend:TAU:R1:R2, got '" +
                                   std::string(name) + "'");
        Rational tau = parse_rational(rest.substr(0, c1));
        QuadratureSpec q =
            blend(tau, single_rule(detail::parse_single_rule(rest.substr(c1 + 1, c2 - c1 - 1))),
                  single_rule(detail::parse_single_rule(rest.substr(c2 + 1))));
        q.label = std::string(name);
        return q;
    }
    throw InvalidParameter("unknown rule name: '" + std::string(name) + "'");
}

/// Standard study rules, in the paper's column order.
inline const std::vector<std::string>& standard_rule_names() {
    static const std::vector<std::string> names{"g+1", "gl+1", "g+0", "opt"};
    return names;
}

} // namespace qblend
