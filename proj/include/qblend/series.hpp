#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "qblend/assembly.hpp"
#include "qblend/rational.hpp"

namespace qblend {

constexpr int kMaxSeriesOrder = 24;

/// Sparse polynomial over Q in up to three unknowns (tau, or alpha/beta/gamma).
class MPoly {
public:
    using Exponents = std::array<int, 3>;

    MPoly() = default;
    MPoly(const Rational& c) { if (c != 0) terms_[{0, 0, 0}] = c; }
    MPoly(int c) : MPoly(Rational(c)) {}

    static MPoly variable(int i) {
        MPoly p;
        Exponents e{0, 0, 0};
        e[i] = 1;
        p.terms_[e] = Rational(1);
        return p;
    }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponents{0, 0, 0});
    }
    Rational constant_value() const {
        if (terms_.empty()) return Rational(0);
        if (!is_constant()) throw NumericalError("MPoly: not a constant");
        return terms_.begin()->second;
    }

    int degree(int var) const {
        int d = 0;
        for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
        return d;
    }

    /// Coefficient (an MPoly in the other variables) of var^power.
    MPoly coeff_of(int var, int power) const {
        MPoly out;
        for (const auto& [e, c] : terms_)
            if (e[var] == power) {
                Exponents r = e;
                r[var] = 0;
                out.terms_[r] = c;
            }
        return out;
    }

    MPoly substituted(int var, const MPoly& value) const {
        MPoly out;
        std::vector<MPoly> powers{MPoly(1)};
        for (const auto& [e, c] : terms_) {
            while (static_cast<int>(powers.size()) <= e[var])
                powers.push_back(powers.back() * value);
            Exponents r = e;
            r[var] = 0;
            MPoly mono;
            mono.terms_[r] = c;
            out += mono * powers[e[var]];
        }
        return out;
    }

    Rational eval(const std::array<Rational, 3>& x) const {
        Rational s(0);
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (int v = 0; v < 3; ++v)
                for (int k = 0; k < e[v]; ++k) t *= x[v];
            s += t;
        }
        return s;
    }

    MPoly& operator+=(const MPoly& o) {
        for (const auto& [e, c] : o.terms_) {
            auto it = terms_.find(e);
            if (it == terms_.end())
                terms_.emplace(e, c);
            else {
                it->second += c;
                if (it->second == 0) terms_.erase(it);
            }
        }
        return *this;
    }
    MPoly& operator-=(const MPoly& o) { return *this += o * Rational(-1); }

    friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
    friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }

    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly out;
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
                auto it = out.terms_.find(e);
                if (it == out.terms_.end())
                    out.terms_.emplace(e, ca * cb);
                else {
                    it->second += ca * cb;
                    if (it->second == 0) out.terms_.erase(it);
                }
            }
        return out;
    }

    friend MPoly operator*(MPoly a, const Rational& s) {
        if (s == 0) return MPoly();
        for (auto& [e, c] : a.terms_) c *= s;
        return a;
    }
    friend MPoly operator/(MPoly a, const Rational& s) {
        for (auto& [e, c] : a.terms_) c /= s;
        return a;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) { return a.terms_ == b.terms_; }

private:
    std::map<Exponents, Rational> terms_;
};

namespace series_detail {
inline bool is_zero(const Rational& x) { return x == 0; }
inline bool is_zero(const MPoly& x) { return x.is_zero(); }
inline Rational constant_of(const Rational& x) { return x; }
inline Rational constant_of(const MPoly& x) { return x.constant_value(); }
} // namespace series_detail

/// Truncated power series in Lambda, exact coefficients c[0..K].
template <class R>
struct PowerSeries {
    std::vector<R> c;

    explicit PowerSeries(int order = 0) : c(order + 1, R(0)) {}
    int order() const { return static_cast<int>(c.size()) - 1; }
    const R& operator[](int k) const { return c[k]; }
    R& operator[](int k) { return c[k]; }
};

template <class R>
PowerSeries<R> operator+(const PowerSeries<R>& a, const PowerSeries<R>& b) {
    PowerSeries<R> r(std::min(a.order(), b.order()));
    for (int k = 0; k <= r.order(); ++k) r[k] = a[k] + b[k];
    return r;
}

template <class R>
PowerSeries<R> operator-(const PowerSeries<R>& a, const PowerSeries<R>& b) {
    PowerSeries<R> r(std::min(a.order(), b.order()));
    for (int k = 0; k <= r.order(); ++k) r[k] = a[k] - b[k];
    return r;
}

template <class R>
PowerSeries<R> mul(const PowerSeries<R>& a, const PowerSeries<R>& b, int K) {
    PowerSeries<R> r(K);
    for (int i = 0; i <= std::min(K, a.order()); ++i) {
        if (series_detail::is_zero(a[i])) continue;
        for (int j = 0; j <= std::min(K - i, b.order()); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

/// a / b with b[0] = 1; needs only ring operations in R.
template <class R>
PowerSeries<R> div_unit(const PowerSeries<R>& a, const PowerSeries<R>& b, int K) {
    if (series_detail::constant_of(b[0]) != 1 || !series_detail::is_zero(b[0] - R(1)))
        throw NumericalError("series division requires unit constant term");
    PowerSeries<R> q(K);
    for (int n = 0; n <= K; ++n) {
        R s = n <= a.order() ? a[n] : R(0);
        for (int k = 0; k < n; ++k)
            if (n - k <= b.order()) s = s - q[k] * b[n - k];
        q[n] = s;
    }
    return q;
}

/// sqrt(a) with a[0] = 1.
template <class R>
PowerSeries<R> sqrt_unit(const PowerSeries<R>& a, int K) {
    PowerSeries<R> y(K);
    y[0] = R(1);
    for (int n = 1; n <= K; ++n) {
        R s = n <= a.order() ? a[n] : R(0);
        for (int k = 1; k < n; ++k) s = s - y[k] * y[n - k];
        y[n] = s * Rational(1, 2);
    }
    return y;
}

/// f(g) with g[0] = 0 (Horner in the series ring).
template <class R>
PowerSeries<R> compose(const PowerSeries<R>& f, const PowerSeries<R>& g, int K) {
    if (!series_detail::is_zero(g[0])) throw NumericalError("series composition: g(0) != 0");
    PowerSeries<R> r(K);
    for (int k = f.order(); k >= 0; --k) {
        r = mul(r, g, K);
        r[0] += f[k];
    }
    return r;
}

/// Compositional inverse: g with f(g) = id, for f = Lambda + O(Lambda^2).
template <class R>
PowerSeries<R> compositional_inverse(const PowerSeries<R>& f, int K) {
    if (!series_detail::is_zero(f[0]) || !series_detail::is_zero(f[1] - R(1)))
        throw NumericalError("compositional inverse requires f = Lambda + O(Lambda^2)");
    PowerSeries<R> fp(K);
    for (int k = 1; k <= f.order(); ++k)
        if (k - 1 <= K) fp[k - 1] = f[k] * Rational(k);
    PowerSeries<R> g(K);
    g[1] = R(1);
    for (int round = 0; round < 2 * K + 4; ++round) {
        PowerSeries<R> err = compose(f, g, K);
        err[1] = err[1] - R(1);
        bool clean = true;
        for (int k = 0; k <= K; ++k)
            if (!series_detail::is_zero(err[k])) { clean = false; break; }
        if (clean) break;
        PowerSeries<R> corr = div_unit(err, compose(fp, g, K), K);
        for (int k = 0; k <= K; ++k) g[k] = g[k] - corr[k];
    }
    return g;
}

namespace series_detail {

/// cos(k Lambda) as an exact rational series.
inline PowerSeries<Rational> cos_series(int k, int K) {
    PowerSeries<Rational> c(K);
    Rational term(1);  // (-1)^j k^{2j} / (2j)!
    for (int j = 0; 2 * j <= K; ++j) {
        c[2 * j] = term;
        term *= Rational(-k * k, (2 * j + 1) * (2 * j + 2));
    }
    return c;
}

/// band[0] + 2 sum_k band[k] cos(k Lambda), with band entries in R.
template <class R>
PowerSeries<R> symbol_series(const std::vector<R>& band, int K) {
    PowerSeries<R> r(K);
    r[0] = band[0];
    for (std::size_t k = 1; k < band.size(); ++k) {
        auto ck = cos_series(static_cast<int>(k), K);
        for (int j = 0; j <= K; j += 2) r[j] += band[k] * (Rational(2) * ck[j]);
    }
    return r;
}

/// Spectrum series sqrt(s(Lambda)/m(Lambda)) for rational stiffness band and
/// R-valued (possibly parametric) mass band. Leading coefficient is
/// sqrt(Lambda^2-coefficient of s), which must be a rational square.
template <class R>
PowerSeries<R> spectrum_series(const std::vector<Rational>& s_band, const std::vector<R>& m_band,
                               int K) {
    if (K > kMaxSeriesOrder) throw UnsupportedError("series order K > 24");
    auto sh = symbol_series(s_band, K + 2);
    if (sh[0] != 0 || sh[1] != 0)
        throw NumericalError("stiffness symbol must vanish to second order at 0");
    const Rational u0 = sh[2];
    if (u0 <= 0)
        throw DegenerateSymbolError("stiffness symbol Lambda^2 coefficient is nonpositive: " +
                                    to_string(u0));
    auto sigma = rational_sqrt(u0);
    if (!sigma)
        throw DegenerateSymbolError("stiffness symbol Lambda^2 coefficient " + to_string(u0) +
                                    " has no rational square root");
    PowerSeries<R> u(K);
    for (int k = 0; k <= K; ++k) u[k] = R(sh[k + 2] / u0);
    auto v = symbol_series(m_band, K);
    if (!is_zero(v[0] - R(1)))
        throw NumericalError("mass symbol must have unit value at theta = 0");
    auto y = sqrt_unit(div_unit(u, v, K), K);
    PowerSeries<R> spec(K);
    for (int k = 0; k + 1 <= K; ++k) spec[k + 1] = y[k] * (*sigma);
    return spec;
}

} // namespace series_detail

/// Spectrum expansion sqrt(lambda_h) h = Lambda + eps Lambda^{2p+1} + ...
inline PowerSeries<Rational> expand_spectrum(const StencilSymbol& sym, int K) {
    return series_detail::spectrum_series<Rational>(sym.stiffness, sym.mass, K);
}

/// Dispersion expansion mu h = Lambda - eps Lambda^{2p+1} - ...; the exact
/// compositional inverse of expand_spectrum.
inline PowerSeries<Rational> expand_dispersion(const StencilSymbol& sym, int K) {
    return compositional_inverse(expand_spectrum(sym, K), K);
}

/// Default truncation: two terms past the leading error.
inline int default_series_order(int p) { return 2 * p + 5; }

/// The unique rational tau for which tau q1 + (1-tau) q2 cancels the
/// Lambda^{2p+1} dispersion coefficient. Requires both rules to induce the
/// same (exact) stiffness stencil, and verifies the gain is exactly two orders.
inline Rational find_optimal_tau(int p, const QuadratureSpec& q1, const QuadratureSpec& q2) {
    if (!integrates_exactly(q1, 2 * p - 2) || !integrates_exactly(q2, 2 * p - 2))
        throw NoSolutionError(
            "find_optimal_tau: both rules must integrate the stiffness terms exactly");
    const SplineSpace space = make_space(p, 2 * p + 3);
    const QuadratureSpec exact = single_rule(gauss(p + 1));
    const StencilSymbol st1 = interior_stencil(space, exact, q1);
    const StencilSymbol st2 = interior_stencil(space, exact, q2);

    const int K = 2 * p + 3;
    std::vector<MPoly> mass(p + 1);
    const MPoly tau = MPoly::variable(0);
    for (int k = 0; k <= p; ++k)
        mass[k] = MPoly(st2.mass[k]) + tau * (st1.mass[k] - st2.mass[k]);
    auto disp = compositional_inverse(
        series_detail::spectrum_series<MPoly>(st1.stiffness, mass, K), K);

    const MPoly& lead = disp[2 * p + 1];
    if (lead.degree(0) > 1)
        throw NoSolutionError("find_optimal_tau: leading coefficient is not affine in tau");
    const Rational c1 = lead.coeff_of(0, 1).constant_value();
    if (c1 == 0)
        throw NoSolutionError("find_optimal_tau: leading coefficient independent of tau");
    const Rational c0 = lead.coeff_of(0, 0).constant_value();
    const Rational tau_star = -c0 / c1;

    const Rational next = disp[2 * p + 3].eval({tau_star, Rational(0), Rational(0)});
    if (next == 0)
        throw NoSolutionError("find_optimal_tau: Lambda^{2p+3} coefficient also vanishes");
    return tau_star;
}

struct OptimalMassResult {
    Rational alpha;  // mhat_2
    Rational beta;   // mhat_1
    Rational gamma;  // mhat_3 (p = 3 only, else 0)
    std::vector<Rational> band;  // mhat_0..mhat_p
};

/// Solves for the interior mass band (exact stiffness assumed) that cancels
/// the Lambda^3..Lambda^{2p+1} dispersion coefficients, p in {2,3}. The
/// system is solved by successive affine elimination; the final univariate
/// equation admits a quadratic fallback with exact rational root selection.
inline OptimalMassResult find_optimal_mass(int p) {
    if (p != 2 && p != 3) throw InvalidParameter("find_optimal_mass: p must be 2 or 3");
    const SplineSpace space = make_space(p, 2 * p + 3);
    const QuadratureSpec exact = single_rule(gauss(p + 1));
    const StencilSymbol st = interior_stencil(space, exact, exact);

    // mhat_0 = 1 - 2(alpha + beta + gamma) keeps the row sum identically 1
    const MPoly alpha = MPoly::variable(0), beta = MPoly::variable(1), gamma = MPoly::variable(2);
    std::vector<MPoly> mass;
    if (p == 2)
        mass = {MPoly(1) - (alpha + beta) * Rational(2), beta, alpha};
    else
        mass = {MPoly(1) - (alpha + beta + gamma) * Rational(2), beta, alpha, gamma};

    const int K = 2 * p + 1;
    auto disp =
        compositional_inverse(series_detail::spectrum_series<MPoly>(st.stiffness, mass, K), K);
    std::vector<MPoly> eqs;
    for (int k = 3; k <= 2 * p + 1; k += 2) eqs.push_back(disp[k]);

    std::vector<int> vars = (p == 2) ? std::vector<int>{0, 1} : std::vector<int>{0, 1, 2};
    std::vector<std::pair<int, MPoly>> chain;  // var -> expression in later vars

    for (std::size_t stage = 0; stage + 1 < eqs.size(); ++stage) {
        MPoly eq = eqs[stage];
        int chosen = -1;
        MPoly expr;
        for (int v : vars) {
            if (eq.degree(v) != 1) continue;
            MPoly c1 = eq.coeff_of(v, 1);
            if (!c1.is_constant() || c1.constant_value() == 0) continue;
            expr = eq.coeff_of(v, 0) / (-c1.constant_value());
            chosen = v;
            break;
        }
        if (chosen < 0)
            throw NoSolutionError("find_optimal_mass: no affine pivot at stage " +
                                  std::to_string(stage));
        chain.emplace_back(chosen, expr);
        std::erase(vars, chosen);
        for (std::size_t k = stage + 1; k < eqs.size(); ++k)
            eqs[k] = eqs[k].substituted(chosen, expr);
    }

    // final univariate equation
    if (vars.size() != 1) throw NoSolutionError("find_optimal_mass: elimination failed");
    const int v = vars[0];
    MPoly last = eqs.back();
    std::vector<Rational> roots;
    const int deg = last.degree(v);
    if (deg == 1) {
        roots.push_back(-last.coeff_of(v, 0).constant_value() /
                        last.coeff_of(v, 1).constant_value());
    } else if (deg == 2) {
        const Rational a = last.coeff_of(v, 2).constant_value();
        const Rational b = last.coeff_of(v, 1).constant_value();
        const Rational c = last.coeff_of(v, 0).constant_value();
        const Rational disc = b * b - 4 * a * c;
        auto sq = rational_sqrt(disc);
        if (!sq)
            throw NoSolutionError("find_optimal_mass: final quadratic has no rational roots; "
                                  "real roots approx " +
                                  std::to_string(to_double((-b) / (2 * a))) + " +- sqrt(" +
                                  std::to_string(to_double(disc)) + ")/" +
                                  std::to_string(to_double(2 * a)));
        roots.push_back((-b + *sq) / (2 * a));
        roots.push_back((-b - *sq) / (2 * a));
    } else {
        throw NoSolutionError("find_optimal_mass: final equation degree " + std::to_string(deg));
    }

    auto back_substitute = [&](Rational root) -> std::array<Rational, 3> {
        std::array<Rational, 3> x{Rational(0), Rational(0), Rational(0)};
        x[v] = root;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) x[it->first] = it->second.eval(x);
        return x;
    };
    auto residual_free = [&](const std::array<Rational, 3>& x) {
        for (int k = 3; k <= 2 * p + 1; k += 2)
            if (disp[k].eval(x) != 0) return false;
        return true;
    };

    std::vector<std::array<Rational, 3>> valid;
    for (const auto& r : roots) {
        auto x = back_substitute(r);
        if (residual_free(x)) valid.push_back(x);
    }
    if (valid.empty()) {
        std::string msg = "find_optimal_mass: no root zeroes the full system; candidates:";
        for (const auto& r : roots) msg += " " + to_string(r);
        throw NoSolutionError(msg);
    }
    std::array<Rational, 3> x = valid.front();
    if (valid.size() > 1) {
        // prefer the branch with a positive symbol at theta = pi (coercive mass)
        for (const auto& cand : valid) {
            Rational mpi = (Rational(1) - 2 * (cand[0] + cand[1] + cand[2]))  // center
                           - 2 * cand[1] + 2 * cand[0] - 2 * cand[2];
            if (mpi > 0) { x = cand; break; }
        }
    }

    OptimalMassResult res;
    res.alpha = x[0];
    res.beta = x[1];
    res.gamma = x[2];
    res.band = {Rational(1) - 2 * (x[0] + x[1] + x[2]), x[1], x[0]};
    if (p == 3) res.band.push_back(x[2]);
    return res;
}

/// Renders a series as "Lambda - 11/120960 Lambda^7 - ..." (odd terms only).
inline std::string format_series(const PowerSeries<Rational>& s) {
    std::string out;
    for (int k = 0; k <= s.order(); ++k) {
        if (s[k] == 0) continue;
        const bool neg = s[k] < 0;
        Rational mag = neg ? Rational(-s[k]) : s[k];
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        if (mag != 1 || k == 0) out += to_string(mag) + (k > 0 ? " " : "");
        if (k == 1)
            out += "Lambda";
        else if (k > 1)
            out += "Lambda^" + std::to_string(k);
    }
    return out.empty() ? "0" : out;
}

} // namespace qblend
