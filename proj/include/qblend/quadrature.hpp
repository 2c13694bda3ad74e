#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qblend/polynomial.hpp"
#include "qblend/rational.hpp"

namespace qblend {

enum class RuleKind { GaussLegendre, GaussLobatto };

constexpr int kMaxRulePoints = 8;
constexpr int kMaxMomentOrder = 16;

inline int exactness_degree(RuleKind kind, int n) {
    return kind == RuleKind::GaussLegendre ? 2 * n - 1 : 2 * n - 3;
}

inline std::string rule_name(RuleKind kind, int n) {
    return (kind == RuleKind::GaussLegendre ? "G" : "GL") + std::to_string(n);
}

namespace detail {

/// Evaluates P_n(x) and P_n'(x) by the three-term recurrence.
template <class T>
std::pair<T, T> legendre_eval(int n, T x) {
    T p0(1), p1 = x;
    if (n == 0) return {p0, T(0)};
    for (int k = 1; k < n; ++k) {
        T p2 = (T(2 * k + 1) * x * p1 - T(k) * p0) / T(k + 1);
        p0 = p1;
        p1 = p2;
    }
    // derivative identity: (x^2 - 1) P_n' = n (x P_n - P_{n-1})
    T dp = T(n) * (x * p1 - p0) / (x * x - T(1));
    return {p1, dp};
}

/// Gauss-Legendre nodes and weights at precision T by Newton iteration.
template <class T>
std::pair<std::vector<T>, std::vector<T>> gauss_nodes(int n) {
    std::vector<T> x(n), w(n);
    const T pi = T(3.14159265358979323846264338327950288L);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-type initial guess for the i-th root (descending)
        T xi = -cos(pi * T(4 * i + 3) / T(4 * n + 2));
        for (int it = 0; it < 200; ++it) {
            auto [p, dp] = legendre_eval(n, xi);
            T dx = p / dp;
            xi -= dx;
            using std::abs;
            if (abs(dx) < T(1e-30) || (std::is_same_v<T, double> && abs(dx) < T(1e-17))) break;
        }
        if (n % 2 == 1 && i == (n - 1) / 2) xi = T(0);
        auto [p, dp] = legendre_eval(n, xi);
        (void)p;
        T wi = T(2) / ((T(1) - xi * xi) * dp * dp);
        x[i] = xi;
        w[i] = wi;
        x[n - 1 - i] = -xi;
        w[n - 1 - i] = wi;
    }
    return {x, w};
}

/// Gauss-Lobatto nodes (+-1 and the roots of P'_{n-1}) and weights.
template <class T>
std::pair<std::vector<T>, std::vector<T>> lobatto_nodes(int n) {
    std::vector<T> x(n), w(n);
    const T pi = T(3.14159265358979323846264338327950288L);
    const int m = n - 1;
    x[0] = T(-1);
    x[n - 1] = T(1);
    for (int i = 1; i < n - 1 && i <= (n - 1) / 2; ++i) {
        // interior nodes: roots of P'_m; Chebyshev-Lobatto initial guess
        T xi = -cos(pi * T(i) / T(m));
        for (int it = 0; it < 200; ++it) {
            auto [p, dp] = legendre_eval(m, xi);
            // Newton on f = P'_m: f' = P''_m from Legendre ODE
            // (1-x^2) P'' = 2x P' - m(m+1) P
            T ddp = (T(2) * xi * dp - T(m) * T(m + 1) * p) / (T(1) - xi * xi);
            T dx = dp / ddp;
            xi -= dx;
            using std::abs;
            if (abs(dx) < T(1e-30) || (std::is_same_v<T, double> && abs(dx) < T(1e-17))) break;
        }
        if (n % 2 == 1 && i == (n - 1) / 2) xi = T(0);
        x[i] = xi;
        x[n - 1 - i] = -xi;
    }
    for (int i = 0; i < n; ++i) {
        auto [p, dp] = legendre_eval(m, x[i]);
        (void)dp;
        w[i] = T(2) / (T(n) * T(m) * p * p);
    }
    return {x, w};
}

template <class T>
std::pair<std::vector<T>, std::vector<T>> nodes_weights(RuleKind kind, int n) {
    return kind == RuleKind::GaussLegendre ? gauss_nodes<T>(n) : lobatto_nodes<T>(n);
}

} // namespace detail

/// A reference quadrature rule on [-1,1].
struct ReferenceRule {
    RuleKind kind;
    int points = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    int exactness() const { return exactness_degree(kind, points); }
    std::string name() const { return rule_name(kind, points); }

    friend bool operator==(const ReferenceRule& a, const ReferenceRule& b) {
        return a.kind == b.kind && a.points == b.points;
    }
};

/// n-point Gauss-Legendre rule, 1 <= n <= 8 (unbounded n is a non-goal).
inline ReferenceRule gauss(int n) {
    if (n < 1 || n > kMaxRulePoints)
        throw InvalidParameter("gauss: n must be in 1..8, got " + std::to_string(n));
    auto [x, w] = detail::gauss_nodes<double>(n);
    return ReferenceRule{RuleKind::GaussLegendre, n, std::move(x), std::move(w)};
}

/// n-point Gauss-Lobatto rule, 2 <= n <= 8; endpoints are nodes.
inline ReferenceRule lobatto(int n) {
    if (n < 2 || n > kMaxRulePoints)
        throw InvalidParameter("lobatto: n must be in 2..8, got " + std::to_string(n));
    auto [x, w] = detail::lobatto_nodes<double>(n);
    return ReferenceRule{RuleKind::GaussLobatto, n, std::move(x), std::move(w)};
}

inline ReferenceRule make_rule(RuleKind kind, int n) {
    return kind == RuleKind::GaussLegendre ? gauss(n) : lobatto(n);
}

/// Exact node polynomial: P_n for Gauss, (x^2-1) P'_{n-1} for Lobatto.
inline Poly<Rational> node_polynomial(RuleKind kind, int n) {
    if (kind == RuleKind::GaussLegendre) return legendre(n);
    Poly<Rational> dp = legendre(n - 1).derivative();
    return dp * Poly<Rational>{{Rational(-1), Rational(0), Rational(1)}};
}

/// Exact rational moments m_k = Q(x^k), k = 0..K.
struct RationalMoments {
    RuleKind kind;
    int points = 0;
    std::vector<Rational> m;
};

/// Q(x^k) = integral of (x^k mod node polynomial): the remainder has degree
/// below the node count, hence at most the exactness degree, so the rule is
/// exact on it; and the subtracted multiple of the node polynomial vanishes
/// at every node.
inline RationalMoments rational_moments(const ReferenceRule& rule, int K) {
    if (K > kMaxMomentOrder)
        throw UnsupportedError("rational_moments: K > " + std::to_string(kMaxMomentOrder));
    const Poly<Rational> omega = node_polynomial(rule.kind, rule.points);
    RationalMoments out{rule.kind, rule.points, {}};
    out.m.reserve(K + 1);
    for (int k = 0; k <= K; ++k) {
        std::vector<Rational> mono(k + 1, Rational(0));
        mono[k] = Rational(1);
        out.m.push_back(integrate_reference(poly_rem(Poly<Rational>{std::move(mono)}, omega)));
    }
    return out;
}

/// Signed affine combination of reference rules; coefficients sum to 1.
struct QuadratureSpec {
    std::vector<std::pair<Rational, ReferenceRule>> terms;
    std::string label;

    Rational coefficient_sum() const {
        Rational s(0);
        for (const auto& [c, r] : terms) s += c;
        return s;
    }
};

inline QuadratureSpec single_rule(ReferenceRule r, std::string label = {}) {
    QuadratureSpec q;
    q.label = label.empty() ? r.name() : std::move(label);
    q.terms.emplace_back(Rational(1), std::move(r));
    return q;
}

/// tau * q1 + (1 - tau) * q2, flattened and merged by rule identity.
inline QuadratureSpec blend(const Rational& tau, const QuadratureSpec& q1,
                            const QuadratureSpec& q2) {
    QuadratureSpec out;
    auto accumulate = [&out](const Rational& scale, const QuadratureSpec& q) {
        for (const auto& [c, r] : q.terms) {
            Rational coeff = scale * c;
            auto it = std::find_if(out.terms.begin(), out.terms.end(),
                                   [&r](const auto& t) { return t.second == r; });
            if (it != out.terms.end())
                it->first += coeff;
            else
                out.terms.emplace_back(std::move(coeff), r);
        }
    };
    accumulate(tau, q1);
    accumulate(Rational(1) - tau, q2);
    std::erase_if(out.terms, [](const auto& t) { return t.first == 0; });
    return out;
}

/// Exact moments of a blended spec (signed sum of per-rule moments).
inline std::vector<Rational> spec_moments(const QuadratureSpec& spec, int K) {
    std::vector<Rational> m(K + 1, Rational(0));
    for (const auto& [c, r] : spec.terms) {
        RationalMoments rm = rational_moments(r, K);
        for (int k = 0; k <= K; ++k) m[k] += c * rm.m[k];
    }
    return m;
}

/// True when the spec integrates every monomial of degree <= deg exactly.
inline bool integrates_exactly(const QuadratureSpec& spec, int deg) {
    auto m = spec_moments(spec, deg);
    for (int k = 0; k <= deg; ++k) {
        Rational exact = (k % 2 == 0) ? Rational(2, k + 1) : Rational(0);
        if (m[k] != exact) return false;
    }
    return true;
}

} // namespace qblend
