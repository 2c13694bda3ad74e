#pragma once

#include <span>
#include <vector>

#include "qblend/polynomial.hpp"
#include "qblend/rational.hpp"

namespace qblend {

constexpr int kMaxDegree = 7;

/// Uniform open-knot B-spline space on [0,1] with maximum continuity C^{p-1}.
/// Knots are exact rationals; floating-point evaluation converts from them so
/// the float and rational paths always agree on the geometry.
struct SplineSpace {
    int degree = 0;    // p
    int elements = 0;  // N
    std::vector<Rational> knots;

    int continuity() const { return degree - 1; }
    Rational h() const { return Rational(1, elements); }
    int dimension() const { return elements + degree; }
    int interior_dimension() const { return dimension() - 2; }

    template <class T>
    std::vector<T> knots_as() const {
        std::vector<T> out;
        out.reserve(knots.size());
        for (const auto& k : knots) out.push_back(to_fp<T>(k));
        return out;
    }
};

inline SplineSpace make_space(int p, int N) {
    if (p < 1 || p > kMaxDegree)
        throw InvalidParameter("make_space: degree must be in 1..7, got " + std::to_string(p));
    if (N < 2)
        throw InvalidParameter("make_space: need at least 2 elements, got " + std::to_string(N));
    SplineSpace s;
    s.degree = p;
    s.elements = N;
    s.knots.reserve(N + 2 * p + 1);
    for (int i = 0; i < p; ++i) s.knots.emplace_back(0);
    for (int i = 0; i <= N; ++i) s.knots.emplace_back(Rational(i, N));
    for (int i = 0; i < p; ++i) s.knots.emplace_back(1);
    return s;
}

/// The p+1 basis functions that can be nonzero at one point.
template <class T>
struct BasisValues {
    int first = 0;  // global index of the first entry
    std::vector<T> value;
    std::vector<T> deriv;
};

namespace detail {

/// Knot span index: largest k with t[k] <= x, clamped so that x = 1 lands in
/// the last nonempty span (the support convention is closed at the right end).
template <class T>
int find_span(std::span<const T> t, int p, const T& x) {
    const int n = static_cast<int>(t.size()) - p - 1;  // basis count
    if (x >= t[n]) return n - 1;
    int lo = p, hi = n - 1;
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (x < t[mid])
            hi = mid - 1;
        else if (x >= t[mid + 1])
            lo = mid + 1;
        else
            lo = hi = mid;
    }
    return lo;
}

} // namespace detail

/// Cox-de Boor evaluation of the p+1 (possibly) nonzero basis functions and
/// their first derivatives at x. Values sum to 1, derivatives to 0.
template <class T>
BasisValues<T> eval_basis(std::span<const T> t, int p, const T& x) {
    if (x < T(0) || x > T(1)) throw DomainError("eval_basis: x outside [0,1]");
    const int span = detail::find_span(t, p, x);
    BasisValues<T> out;
    out.first = span - p;
    out.value.assign(p + 1, T(0));
    out.deriv.assign(p + 1, T(0));

    std::vector<T> left(p + 1, T(0)), right(p + 1, T(0));
    out.value[0] = T(1);
    std::vector<T> lower;  // degree p-1 functions at the same span, for derivatives
    for (int j = 1; j <= p; ++j) {
        if (j == p) lower = out.value;
        left[j] = x - t[span + 1 - j];
        right[j] = t[span + j] - x;
        T saved(0);
        for (int r = 0; r < j; ++r) {
            T tmp = out.value[r] / (right[r + 1] + left[j - r]);
            out.value[r] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        out.value[j] = saved;
    }
    if (p == 0) return out;
    if (p == 1) lower = {T(1)};
    for (int r = 0; r <= p; ++r) {
        const int i = span - p + r;
        T d(0);
        if (r > 0) {
            T den = t[i + p] - t[i];
            if (den != T(0)) d += T(p) / den * lower[r - 1];
        }
        if (r < p) {
            T den = t[i + p + 1] - t[i + 1];
            if (den != T(0)) d -= T(p) / den * lower[r];
        }
        out.deriv[r] = d;
    }
    return out;
}

template <class T>
BasisValues<T> eval_basis(const SplineSpace& s, const T& x) {
    const auto t = s.knots_as<T>();
    return eval_basis<T>(t, s.degree, x);
}

/// Exact polynomial representation, on the reference interval [-1,1], of all
/// p+1 basis functions supported on element e. Row j is basis e+j.
inline std::vector<Poly<Rational>> element_polynomials(const SplineSpace& s, int e) {
    const int p = s.degree;
    const int N = s.elements;
    if (e < 0 || e >= N)
        throw InvalidParameter("element_polynomials: element index out of range");
    // sample at p+1 rational points strictly inside (-1,1), then interpolate
    std::vector<Rational> ts;
    for (int i = 0; i <= p; ++i) ts.emplace_back(Rational(2 * i - p, p + 1));
    std::vector<std::vector<Rational>> samples(p + 1);
    const auto knots = std::span<const Rational>(s.knots);
    for (const auto& t : ts) {
        Rational x = (Rational(e) + (t + 1) / 2) * s.h();
        auto b = eval_basis<Rational>(knots, p, x);
        // basis functions on element e are exactly e..e+p
        for (int j = 0; j <= p; ++j) {
            int g = e + j;
            int k = g - b.first;
            samples[j].push_back(k >= 0 && k <= p ? b.value[k] : Rational(0));
        }
    }
    std::vector<Poly<Rational>> polys;
    polys.reserve(p + 1);
    for (int j = 0; j <= p; ++j) polys.push_back(interpolate(ts, samples[j]));
    return polys;
}

} // namespace qblend
