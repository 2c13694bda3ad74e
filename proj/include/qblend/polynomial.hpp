#pragma once

#include <cassert>
#include <cstddef>
#include <utility>
#include <vector>

#include "qblend/rational.hpp"

namespace qblend {

/// Dense univariate polynomial, coefficients in ascending powers.
template <class T>
struct Poly {
    std::vector<T> c;

    Poly() = default;
    explicit Poly(std::vector<T> coeffs) : c(std::move(coeffs)) { trim(); }

    int degree() const { return static_cast<int>(c.size()) - 1; }

    void trim() {
        while (!c.empty() && c.back() == T(0)) c.pop_back();
    }

    T operator()(const T& x) const {
        T v(0);
        for (std::size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    }

    Poly derivative() const {
        if (c.size() <= 1) return Poly{};
        std::vector<T> d(c.size() - 1);
        for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = c[k] * T(static_cast<int>(k));
        return Poly{std::move(d)};
    }

    friend Poly operator*(const Poly& a, const Poly& b) {
        if (a.c.empty() || b.c.empty()) return Poly{};
        std::vector<T> r(a.c.size() + b.c.size() - 1, T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return Poly{std::move(r)};
    }

    friend Poly operator+(const Poly& a, const Poly& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r[i] += b.c[i];
        return Poly{std::move(r)};
    }

    friend Poly operator-(const Poly& a, const Poly& b) {
        std::vector<T> r(std::max(a.c.size(), b.c.size()), T(0));
        for (std::size_t i = 0; i < a.c.size(); ++i) r[i] += a.c[i];
        for (std::size_t i = 0; i < b.c.size(); ++i) r[i] -= b.c[i];
        return Poly{std::move(r)};
    }

    friend Poly operator*(const Poly& a, const T& s) {
        Poly r = a;
        for (auto& v : r.c) v = v * s;
        r.trim();
        return r;
    }
};

/// Remainder of a modulo b (b monic not required; leading coeff must be invertible).
template <class T>
Poly<T> poly_rem(Poly<T> a, const Poly<T>& b) {
    assert(!b.c.empty());
    const int db = b.degree();
    const T lead = b.c.back();
    while (a.degree() >= db) {
        const T f = a.c.back() / lead;
        const int shift = a.degree() - db;
        for (int k = 0; k <= db; ++k) a.c[k + shift] -= f * b.c[k];
        a.c.pop_back();
        a.trim();
        if (a.c.empty()) break;
    }
    return a;
}

/// Exact integral over the reference interval [-1, 1].
inline Rational integrate_reference(const Poly<Rational>& p) {
    Rational s(0);
    for (std::size_t k = 0; k < p.c.size(); k += 2) s += p.c[k] * Rational(2, int(k) + 1);
    return s;
}

/// Legendre polynomial P_n with exact rational coefficients,
/// (n+1) P_{n+1} = (2n+1) x P_n - n P_{n-1}.
inline Poly<Rational> legendre(int n) {
    Poly<Rational> p0{{Rational(1)}};
    if (n == 0) return p0;
    Poly<Rational> p1{{Rational(0), Rational(1)}};
    for (int k = 1; k < n; ++k) {
        std::vector<Rational> xp(p1.c.size() + 1, Rational(0));
        for (std::size_t i = 0; i < p1.c.size(); ++i) xp[i + 1] = p1.c[i];
        Poly<Rational> next = Poly<Rational>{std::move(xp)} * Rational(2 * k + 1, k + 1)
                              - p0 * Rational(k, k + 1);
        p0 = std::move(p1);
        p1 = std::move(next);
    }
    return p1;
}

/// Interpolating polynomial through (xs[i], ys[i]) via Newton divided differences.
template <class T>
Poly<T> interpolate(const std::vector<T>& xs, const std::vector<T>& ys) {
    assert(xs.size() == ys.size() && !xs.empty());
    const std::size_t n = xs.size();
    std::vector<T> dd = ys;
    for (std::size_t level = 1; level < n; ++level)
        for (std::size_t i = n - 1; i >= level; --i)
            dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - level]);
    std::vector<T> acc{dd[n - 1]};
    for (std::size_t i = n - 1; i-- > 0;) {
        // acc <- acc * (x - xs[i]) + dd[i]
        std::vector<T> next(acc.size() + 1, T(0));
        for (std::size_t k = 0; k < acc.size(); ++k) {
            next[k + 1] += acc[k];
            next[k] -= xs[i] * acc[k];
        }
        next[0] += dd[i];
        acc = std::move(next);
    }
    return Poly<T>{std::move(acc)};
}

} // namespace qblend
