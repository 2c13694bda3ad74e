#pragma once

#include <Eigen/Dense>

#include <map>
#include <type_traits>
#include <utility>
#include <vector>

#include "qblend/quadrature.hpp"
#include "qblend/splines.hpp"

namespace qblend {

/// Symmetric banded matrix; band k holds A(i, i+k), k = 0..bandwidth.
template <class T>
class BandedSymMatrix {
public:
    BandedSymMatrix() = default;
    BandedSymMatrix(int n, int bandwidth)
        : n_(n), bw_(bandwidth), bands_(bandwidth + 1, std::vector<T>(n, T(0))) {}

    int size() const { return n_; }
    int bandwidth() const { return bw_; }

    T at(int i, int j) const {
        if (i > j) std::swap(i, j);
        const int k = j - i;
        return k <= bw_ ? bands_[k][i] : T(0);
    }

    void add(int i, int j, const T& v) {
        if (i > j) std::swap(i, j);
        bands_[j - i][i] += v;
    }

    void set(int i, int j, const T& v) {
        if (i > j) std::swap(i, j);
        bands_[j - i][i] = v;
    }

    template <class U>
    BandedSymMatrix<U> cast() const {
        BandedSymMatrix<U> out(n_, bw_);
        for (int k = 0; k <= bw_; ++k)
            for (int i = 0; i + k < n_; ++i) {
                if constexpr (std::is_same_v<T, Rational>)
                    out.set(i, i + k, to_fp<U>(bands_[k][i]));
                else
                    out.set(i, i + k, static_cast<U>(bands_[k][i]));
            }
        return out;
    }

    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> dense() const {
        Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> A(n_, n_);
        A.setZero();
        for (int i = 0; i < n_; ++i)
            for (int k = 0; k <= bw_ && i + k < n_; ++k) {
                A(i, i + k) = bands_[k][i];
                A(i + k, i) = bands_[k][i];
            }
        return A;
    }

    /// y = A x via the bands.
    template <class Vec>
    Vec multiply(const Vec& x) const {
        Vec y = Vec::Zero(n_);
        for (int i = 0; i < n_; ++i) {
            y[i] += bands_[0][i] * x[i];
            for (int k = 1; k <= bw_ && i + k < n_; ++k) {
                y[i] += bands_[k][i] * x[i + k];
                y[i + k] += bands_[k][i] * x[i];
            }
        }
        return y;
    }

    /// Sum of all entries (both triangles).
    T total() const {
        T s(0);
        for (int i = 0; i < n_; ++i) s += bands_[0][i];
        for (int k = 1; k <= bw_; ++k)
            for (int i = 0; i + k < n_; ++i) s += T(2) * bands_[k][i];
        return s;
    }

private:
    int n_ = 0;
    int bw_ = 0;
    std::vector<std::vector<T>> bands_;
};

struct AssemblyOptions {
    bool reduce_dirichlet = true;
    /// Stiffness under-integration is refused unless this is set
    /// (degradation experiment only).
    bool allow_unsafe_stiffness = false;
};

template <class T>
struct System {
    BandedSymMatrix<T> stiffness;
    BandedSymMatrix<T> mass;
};

namespace detail {

inline void check_spec(const QuadratureSpec& spec, const char* which) {
    if (spec.terms.empty() || spec.coefficient_sum() != 1)
        throw InvalidParameter(std::string(which) + " quadrature spec: coefficients must sum to 1");
}

/// Element classes for memoizing local polynomial data: the first p and last p
/// elements differ from the translation-invariant interior ones.
inline int element_class(int e, int p, int N) {
    if (e < p && e < N - 1 - e) return e;
    if (N - 1 - e < p) return 2 * p + 1 - (N - e);
    return p;  // interior sentinel (valid when p <= e <= N-1-p)
}

} // namespace detail

/// Assembles the Dirichlet-reduced 1D stiffness and mass matrices on [0,1].
/// Floating-point scalars use quadrature nodes at the scalar's precision;
/// Rational uses exact rule moments applied to exact element polynomials.
template <class T>
System<T> assemble_1d(const SplineSpace& s, const QuadratureSpec& stiffness_rule,
                      const QuadratureSpec& mass_rule, AssemblyOptions opts = {}) {
    const int p = s.degree;
    const int N = s.elements;
    detail::check_spec(stiffness_rule, "stiffness");
    detail::check_spec(mass_rule, "mass");
    if (!opts.allow_unsafe_stiffness && !integrates_exactly(stiffness_rule, 2 * p - 2))
        throw InvalidParameter(
            "stiffness rule under-integrates degree " + std::to_string(2 * p - 2) +
            "; optimal convergence would be lost (pass the unsafe-rule flag to force)");

    const int dim = s.dimension();
    const int lo = opts.reduce_dirichlet ? 1 : 0;
    const int rdim = opts.reduce_dirichlet ? dim - 2 : dim;
    System<T> sys{BandedSymMatrix<T>(rdim, p), BandedSymMatrix<T>(rdim, p)};

    auto stamp = [&](BandedSymMatrix<T>& A, int e, int a, int b, const T& v) {
        const int i = e + a - lo, j = e + b - lo;
        if (i < 0 || j < 0 || i >= rdim || j >= rdim) return;
        if (j >= i) A.add(i, j, v);  // each (unordered) pair visited once below
    };

    if constexpr (std::is_same_v<T, Rational>) {
        const int K = 2 * p;
        std::vector<std::pair<Rational, std::vector<Rational>>> stiff_m, mass_m;
        for (const auto& [c, r] : stiffness_rule.terms)
            stiff_m.emplace_back(c, rational_moments(r, K).m);
        for (const auto& [c, r] : mass_rule.terms)
            mass_m.emplace_back(c, rational_moments(r, K).m);
        const Rational h = s.h();
        std::map<int, std::vector<Poly<Rational>>> cache;
        for (int e = 0; e < N; ++e) {
            const int cls = detail::element_class(e, p, N);
            auto it = cache.find(cls);
            if (it == cache.end()) it = cache.emplace(cls, element_polynomials(s, e)).first;
            const auto& L = it->second;
            for (int a = 0; a <= p; ++a)
                for (int b = a; b <= p; ++b) {
                    Poly<Rational> mm = L[a] * L[b];
                    Poly<Rational> ss = L[a].derivative() * L[b].derivative();
                    Rational mv(0), sv(0);
                    for (const auto& [c, mom] : mass_m)
                        for (std::size_t k = 0; k < mm.c.size(); ++k) mv += c * mom[k] * mm.c[k];
                    for (const auto& [c, mom] : stiff_m)
                        for (std::size_t k = 0; k < ss.c.size(); ++k) sv += c * mom[k] * ss.c[k];
                    stamp(sys.mass, e, a, b, mv * h / 2);
                    stamp(sys.stiffness, e, a, b, sv * 2 / h);
                }
        }
    } else {
        const auto knots = s.knots_as<T>();
        const T h = T(1) / T(N);
        auto accumulate = [&](BandedSymMatrix<T>& A, const QuadratureSpec& spec, bool grad) {
            for (const auto& [c, r] : spec.terms) {
                auto [xs, ws] = detail::nodes_weights<T>(r.kind, r.points);
                const T coeff = to_fp<T>(c);
                for (int e = 0; e < N; ++e) {
                    for (int q = 0; q < r.points; ++q) {
                        T x = (T(e) + (xs[q] + T(1)) / T(2)) * h;
                        auto bv = eval_basis<T>(std::span<const T>(knots), p, x);
                        const auto& f = grad ? bv.deriv : bv.value;
                        const T w = coeff * ws[q] * h / T(2);
                        for (int a = 0; a <= p; ++a)
                            for (int b = a; b <= p; ++b)
                                stamp(A, e, a + bv.first - e, b + bv.first - e, w * f[a] * f[b]);
                    }
                }
            }
        };
        accumulate(sys.mass, mass_rule, false);
        accumulate(sys.stiffness, stiffness_rule, true);
    }
    return sys;
}

/// Nondimensional interior (translation-invariant) matrix rows:
/// stiffness band scaled by h, mass band scaled by 1/h.
struct StencilSymbol {
    int degree = 0;
    std::vector<Rational> stiffness;  // shat_0..shat_p
    std::vector<Rational> mass;       // mhat_0..mhat_p

    Rational stiffness_row_sum() const {
        Rational s = stiffness[0];
        for (std::size_t k = 1; k < stiffness.size(); ++k) s += 2 * stiffness[k];
        return s;
    }
    Rational mass_row_sum() const {
        Rational s = mass[0];
        for (std::size_t k = 1; k < mass.size(); ++k) s += 2 * mass[k];
        return s;
    }
};

/// Interior stencil computed directly from the overlap sums of one interior
/// element's local polynomials; independent of N by construction.
inline StencilSymbol interior_stencil(const SplineSpace& s, const QuadratureSpec& stiffness_rule,
                                      const QuadratureSpec& mass_rule) {
    const int p = s.degree;
    detail::check_spec(stiffness_rule, "stiffness");
    detail::check_spec(mass_rule, "mass");
    // local polynomials of a fully interior element (use a canonical space so
    // small N inputs still yield the translation-invariant stencil)
    const SplineSpace canon = s.elements >= 2 * p + 1 ? s : make_space(p, 2 * p + 2);
    const auto L = element_polynomials(canon, p <= canon.elements - 1 - p ? p : 0);
    const int K = 2 * p;
    std::vector<std::pair<Rational, std::vector<Rational>>> stiff_m, mass_m;
    for (const auto& [c, r] : stiffness_rule.terms)
        stiff_m.emplace_back(c, rational_moments(r, K).m);
    for (const auto& [c, r] : mass_rule.terms)
        mass_m.emplace_back(c, rational_moments(r, K).m);

    StencilSymbol sym;
    sym.degree = p;
    sym.stiffness.assign(p + 1, Rational(0));
    sym.mass.assign(p + 1, Rational(0));
    for (int k = 0; k <= p; ++k) {
        for (int j = 0; j + k <= p; ++j) {
            Poly<Rational> mm = L[j] * L[j + k];
            Poly<Rational> ss = L[j].derivative() * L[j + k].derivative();
            for (const auto& [c, mom] : mass_m)
                for (std::size_t i = 0; i < mm.c.size(); ++i) sym.mass[k] += c * mom[i] * mm.c[i];
            for (const auto& [c, mom] : stiff_m)
                for (std::size_t i = 0; i < ss.c.size(); ++i)
                    sym.stiffness[k] += c * mom[i] * ss.c[i];
        }
        sym.mass[k] /= 2;
        sym.stiffness[k] *= 2;
    }
    if (sym.stiffness_row_sum() != 0)
        throw NumericalError("interior stencil: stiffness row sum nonzero");
    if (sym.mass_row_sum() != 1)
        throw NumericalError(
            "interior stencil: mass row sum differs from 1 (rule not exact for degree p)");
    return sym;
}

/// Per-axis 1D operators of a tensor-product discretization:
/// K_d = sum_axis K_axis (x) M_others, M_d = (x) M_axis.
template <class T>
struct TensorOperator {
    std::vector<System<T>> axes;

    int dims() const { return static_cast<int>(axes.size()); }
    long global_dimension() const {
        long n = 1;
        for (const auto& ax : axes) n *= ax.stiffness.size();
        return n;
    }
};

inline TensorOperator<double> assemble_tensor(const std::vector<SplineSpace>& spaces,
                                              const QuadratureSpec& stiffness_rule,
                                              const QuadratureSpec& mass_rule,
                                              AssemblyOptions opts = {}) {
    if (spaces.size() < 2 || spaces.size() > 3)
        throw InvalidParameter("assemble_tensor: dimension must be 2 or 3");
    TensorOperator<double> op;
    for (const auto& s : spaces)
        op.axes.push_back(assemble_1d<double>(s, stiffness_rule, mass_rule, opts));
    return op;
}

constexpr long kMaxDenseDim = 5000;

/// Dense Kronecker materialization (2D), axis-0 index major.
inline std::pair<Eigen::MatrixXd, Eigen::MatrixXd> dense_tensor(const TensorOperator<double>& op) {
    if (op.dims() != 2) throw UnsupportedError("dense_tensor: only 2D materialization supported");
    if (op.global_dimension() > kMaxDenseDim)
        throw UnsupportedError("dense_tensor: global dimension exceeds " +
                               std::to_string(kMaxDenseDim));
    const Eigen::MatrixXd K1 = op.axes[0].stiffness.dense(), M1 = op.axes[0].mass.dense();
    const Eigen::MatrixXd K2 = op.axes[1].stiffness.dense(), M2 = op.axes[1].mass.dense();
    const long n1 = K1.rows(), n2 = K2.rows(), n = n1 * n2;
    Eigen::MatrixXd K(n, n), M(n, n);
    for (long i1 = 0; i1 < n1; ++i1)
        for (long i2 = 0; i2 < n2; ++i2)
            for (long j1 = 0; j1 < n1; ++j1)
                for (long j2 = 0; j2 < n2; ++j2) {
                    K(i1 * n2 + i2, j1 * n2 + j2) =
                        K1(i1, j1) * M2(i2, j2) + M1(i1, j1) * K2(i2, j2);
                    M(i1 * n2 + i2, j1 * n2 + j2) = M1(i1, j1) * M2(i2, j2);
                }
    return {std::move(K), std::move(M)};
}

/// Applies the 2D operator pair to a Kronecker vector x (x) y without
/// materializing: K(x ⊗ y) = (K1 x) ⊗ (M2 y) + (M1 x) ⊗ (K2 y).
inline Eigen::VectorXd apply_tensor_stiffness(const TensorOperator<double>& op,
                                              const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    if (op.dims() != 2) throw UnsupportedError("apply_tensor_stiffness: 2D only");
    const Eigen::VectorXd k1x = op.axes[0].stiffness.multiply(x);
    const Eigen::VectorXd m1x = op.axes[0].mass.multiply(x);
    const Eigen::VectorXd k2y = op.axes[1].stiffness.multiply(y);
    const Eigen::VectorXd m2y = op.axes[1].mass.multiply(y);
    const long n1 = x.size(), n2 = y.size();
    Eigen::VectorXd out(n1 * n2);
    for (long i = 0; i < n1; ++i)
        for (long j = 0; j < n2; ++j)
            out[i * n2 + j] = k1x[i] * m2y[j] + m1x[i] * k2y[j];
    return out;
}

} // namespace qblend
