#pragma once

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include <algorithm>
#include <array>
#include <vector>

#include "qblend/assembly.hpp"

namespace qblend {

template <class T>
using Matrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Vector = Eigen::Matrix<T, Eigen::Dynamic, 1>;

/// Banded unpivoted LDL^T probe: throws DefinitenessError naming the first
/// nonpositive pivot. (Valid as an SPD test; pivots of an SPD matrix stay
/// positive without pivoting.)
template <class T>
void check_positive_definite(const BandedSymMatrix<T>& A, const char* label) {
    const int n = A.size(), bw = A.bandwidth();
    Matrix<T> work(n, bw + 1);
    work.setZero();
    for (int i = 0; i < n; ++i)
        for (int k = 0; k <= bw && i + k < n; ++k) work(i, k) = A.at(i, i + k);
    std::vector<T> d(n, T(0));
    Matrix<T> l(n, bw + 1);  // l(j, i-j) = L(i,j)
    l.setZero();
    for (int j = 0; j < n; ++j) {
        T dj = work(j, 0);
        for (int k = std::max(0, j - bw); k < j; ++k) {
            const T lj = l(k, j - k);
            dj -= lj * lj * d[k];
        }
        if (!(dj > T(0)))
            throw DefinitenessError(std::string(label) + " is not positive definite", j);
        d[j] = dj;
        for (int i = j + 1; i <= std::min(n - 1, j + bw); ++i) {
            T s = work(j, i - j);
            for (int k = std::max(0, i - bw); k < j; ++k) s -= l(k, i - k) * l(k, j - k) * d[k];
            l(j, i - j) = s / dj;
        }
    }
}

enum class Normalization { MOrthonormal, L2Normalized };

/// All eigenpairs of K U = lambda M U, ascending, M-orthonormal vectors.
template <class T>
struct GevpSolution {
    std::vector<T> eigenvalues;
    Matrix<T> eigenvectors;  // column j pairs with eigenvalues[j]
    Normalization normalization = Normalization::MOrthonormal;
};

/// Dense symmetric-definite solve (Cholesky reduction, tridiagonalization,
/// implicit-shift iteration via Eigen). Residuals are verified per pair.
template <class T>
GevpSolution<T> solve_gevp(const BandedSymMatrix<T>& K, const BandedSymMatrix<T>& M,
                           double residual_tol = 1e-10) {
    if (K.size() != M.size()) throw InvalidParameter("solve_gevp: size mismatch");
    if (K.size() > kMaxDenseDim) throw UnsupportedError("solve_gevp: dimension > 5000");
    check_positive_definite(M, "mass matrix");

    const Matrix<T> Kd = K.dense();
    const Matrix<T> Md = M.dense();
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix<T>> es(Kd, Md,
                                                           Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw NumericalError("solve_gevp: iteration failed");

    GevpSolution<T> sol;
    const int n = K.size();
    sol.eigenvalues.resize(n);
    for (int i = 0; i < n; ++i) sol.eigenvalues[i] = es.eigenvalues()[i];
    sol.eigenvectors = es.eigenvectors();

    const T kf = Kd.norm();  // Frobenius
    for (int j = 0; j < n; ++j) {
        const Vector<T> x = sol.eigenvectors.col(j);
        const T r = (Kd * x - sol.eigenvalues[j] * (Md * x)).norm();
        if (!(r <= T(residual_tol) * kf * x.norm()))
            throw NumericalError("solve_gevp: residual beyond tolerance at pair " +
                                 std::to_string(j));
    }
    return sol;
}

/// Inverse iteration + Rayleigh quotient at scalar T, seeded by a lower
/// precision pair. Two iterations reach the T-precision floor for the
/// separated spectra that arise here.
template <class T>
struct RefinedPair {
    T lambda;
    Vector<T> vector;  // M-normalized
};

template <class T, class SeedVec>
RefinedPair<T> refine_eigenpair(const BandedSymMatrix<T>& K, const BandedSymMatrix<T>& M,
                                double lambda_seed, const SeedVec& x_seed, int iterations = 2) {
    const int n = K.size();
    Vector<T> x(n);
    for (int i = 0; i < n; ++i) x[i] = T(x_seed[i]);
    const Matrix<T> Kd = K.dense();
    const Matrix<T> Md = M.dense();
    T lambda = T(lambda_seed);
    for (int it = 0; it < iterations; ++it) {
        const T shift = lambda * (T(1) + T(1e-9));
        Eigen::PartialPivLU<Matrix<T>> lu(Kd - shift * Md);
        x = lu.solve(M.multiply(x));
        x /= sqrt(x.dot(M.multiply(x)));
        lambda = x.dot(K.multiply(x));
    }
    return {lambda, std::move(x)};
}

/// Tensor-product eigensolution: per-axis 1D solves; d-dimensional
/// eigenvalues are the sums of axis eigenvalues, sorted ascending with
/// lexicographic tie-break on axis mode indices.
struct TensorSolution {
    struct Mode {
        double value;
        std::array<int, 3> axis_mode;  // 0-based per-axis indices
    };
    std::vector<Mode> modes;
    std::vector<GevpSolution<double>> axis;
};

inline TensorSolution solve_tensor(const TensorOperator<double>& op) {
    TensorSolution sol;
    for (const auto& ax : op.axes) sol.axis.push_back(solve_gevp(ax.stiffness, ax.mass));
    const int d = op.dims();
    std::array<int, 3> sizes{1, 1, 1};
    for (int k = 0; k < d; ++k) sizes[k] = static_cast<int>(sol.axis[k].eigenvalues.size());
    for (int i = 0; i < sizes[0]; ++i)
        for (int j = 0; j < sizes[1]; ++j)
            for (int k = 0; k < sizes[2]; ++k) {
                double v = sol.axis[0].eigenvalues[i];
                if (d > 1) v += sol.axis[1].eigenvalues[j];
                if (d > 2) v += sol.axis[2].eigenvalues[k];
                sol.modes.push_back({v, {i, j, k}});
            }
    std::sort(sol.modes.begin(), sol.modes.end(), [](const auto& a, const auto& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.axis_mode < b.axis_mode;
    });
    return sol;
}

/// Materializes the tensor-product eigenvector for one 2D mode (axis-0 major).
inline Eigen::VectorXd tensor_eigenvector(const TensorSolution& sol,
                                          const TensorSolution::Mode& mode) {
    const Eigen::VectorXd x = sol.axis[0].eigenvectors.col(mode.axis_mode[0]);
    const Eigen::VectorXd y = sol.axis[1].eigenvectors.col(mode.axis_mode[1]);
    Eigen::VectorXd out(x.size() * y.size());
    for (long i = 0; i < x.size(); ++i)
        for (long j = 0; j < y.size(); ++j) out[i * y.size() + j] = x[i] * y[j];
    return out;
}

} // namespace qblend
