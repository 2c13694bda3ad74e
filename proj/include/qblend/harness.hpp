#pragma once

#include <chrono>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "qblend/estimator.hpp"

namespace qblend {

enum class StudyKind { EV, EF_H1, EF_L2, EI };

inline const char* study_kind_name(StudyKind k) {
    switch (k) {
        case StudyKind::EV: return "ev";
        case StudyKind::EF_H1: return "ef_h1";
        case StudyKind::EF_L2: return "ef_l2";
        case StudyKind::EI: return "ei";
    }
    return "?";
}

struct StudyRow {
    int N = 0;
    double h = 0;
    double value = 0;  // eigenvalue (EV/EF) or EI (EI studies)
    double error = 0;  // relative EV error, error norm, or |EI-1|
};

struct StudyResult {
    StudyKind kind = StudyKind::EV;
    int p = 0;
    std::string rule;
    int dim = 1;
    std::string mode;
    std::vector<StudyRow> rows;    // sorted by decreasing h
    double fitted_order = 0;
};

/// Least-squares slope of log(error) against log(h).
inline double fit_order(const std::vector<StudyRow>& rows) {
    if (rows.size() < 3) throw InvalidParameter("fit_order: need at least 3 rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& r : rows) {
        const double x = std::log(r.h), y = std::log(r.error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(rows.size());
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Slope over the k finest meshes (k >= 2; used where coarse meshes sit
/// outside the expansion regime).
inline double fit_order_tail(const std::vector<StudyRow>& rows, int k) {
    if (k < 2 || static_cast<int>(rows.size()) < k)
        throw InvalidParameter("fit_order_tail: bad window");
    std::vector<StudyRow> tail(rows.end() - k, rows.end());
    if (k == 2) {
        return std::log(tail[0].error / tail[1].error) / std::log(tail[0].h / tail[1].h);
    }
    return fit_order(tail);
}

inline std::vector<int> default_elements_1d() { return {20, 40, 80, 160, 320}; }
inline std::vector<int> default_elements_2d() { return {4, 8, 16, 32, 64}; }

namespace detail {

/// Refined eigenvalue (and optionally vector) of mode j for one 1D mesh.
inline RefinedPair<long double> solve_mode_1d(int p, const QuadratureSpec& rule, int N, int mode,
                                              const QuadratureSpec* stiffness_override = nullptr,
                                              bool unsafe = false) {
    using LD = long double;
    const SplineSpace space = make_space(p, N);
    if (mode < 1 || mode > space.interior_dimension())
        throw InvalidParameter("study: mode " + std::to_string(mode) +
                               " not resolvable with N = " + std::to_string(N));
    const QuadratureSpec stiff =
        stiffness_override ? *stiffness_override : single_rule(gauss(p + 1));
    AssemblyOptions opts;
    opts.allow_unsafe_stiffness = unsafe;
    const auto sys = assemble_1d<LD>(space, stiff, rule, opts);
    const auto sol =
        solve_gevp(sys.stiffness.template cast<double>(), sys.mass.template cast<double>());
    return refine_eigenpair<LD>(sys.stiffness, sys.mass, sol.eigenvalues[mode - 1],
                                sol.eigenvectors.col(mode - 1));
}

inline double fitted_order_for(int p, const std::vector<StudyRow>& rows) {
    // coarse-mesh extra-superconvergence makes all-mesh fits misleading for
    // p >= 4; use the three finest meshes there
    if (p >= 4 && rows.size() > 3) return fit_order_tail(rows, 3);
    return fit_order(rows);
}

} // namespace detail

/// Relative eigenvalue error study |lambda~ - lambda| / lambda.
/// 1D mode = {j}; 2D mode = {j, k} with lambda = pi^2 (j^2 + k^2) and the
/// discrete value the sum of per-axis refined eigenvalues.
inline StudyResult ev_error_study(int p, const std::string& rule_name, int dim,
                                  const std::vector<int>& mode, std::vector<int> Ns = {}) {
    if (dim != 1 && dim != 2) throw InvalidParameter("ev_error_study: dim must be 1 or 2");
    if (static_cast<int>(mode.size()) != dim)
        throw InvalidParameter("ev_error_study: mode arity must match dim");
    if (Ns.empty()) Ns = dim == 1 ? default_elements_1d() : default_elements_2d();
    const QuadratureSpec rule = named_rule(p, rule_name);

    StudyResult st;
    st.kind = StudyKind::EV;
    st.p = p;
    st.rule = rule_name;
    st.dim = dim;
    st.mode = std::to_string(mode[0]) + (dim == 2 ? "x" + std::to_string(mode[1]) : "");
    using LD = long double;
    for (int N : Ns) {
        LD lambda_h(0), lambda(0);
        if (dim == 1) {
            lambda_h = detail::solve_mode_1d(p, rule, N, mode[0]).lambda;
            lambda = detail::pi_v<LD>() * detail::pi_v<LD>() * mode[0] * mode[0];
        } else {
            for (int ax = 0; ax < 2; ++ax)
                lambda_h += detail::solve_mode_1d(p, rule, N, mode[ax]).lambda;
            lambda = detail::pi_v<LD>() * detail::pi_v<LD>() * (mode[0] * mode[0] + mode[1] * mode[1]);
        }
        StudyRow row;
        row.N = N;
        row.h = 1.0 / N;
        row.value = static_cast<double>(lambda_h);
        row.error = static_cast<double>(fabsl(lambda_h - lambda) / lambda);
        st.rows.push_back(row);
    }
    st.fitted_order = detail::fitted_order_for(p, st.rows);
    return st;
}

enum class ErrorNorm { H1, L2 };

/// Eigenfunction error study (1D): H1-seminorm or L2-norm against
/// u_j = sqrt(2) sin(j pi x), with ||u~||_{L2} = 1 and b(u_j, u~) > 0.
inline StudyResult ef_error_study(int p, const std::string& rule_name, int mode,
                                  ErrorNorm norm, std::vector<int> Ns = {}) {
    if (Ns.empty()) Ns = default_elements_1d();
    const QuadratureSpec rule = named_rule(p, rule_name);
    const QuadratureSpec exact = single_rule(gauss(p + 1));

    StudyResult st;
    st.kind = norm == ErrorNorm::H1 ? StudyKind::EF_H1 : StudyKind::EF_L2;
    st.p = p;
    st.rule = rule_name;
    st.dim = 1;
    st.mode = std::to_string(mode);
    using LD = long double;
    for (int N : Ns) {
        const SplineSpace space = make_space(p, N);
        auto pair = detail::solve_mode_1d(p, rule, N, mode);
        // switch normalization from b~ = 1 to exact L2 = 1
        const auto sys_exact = assemble_1d<LD>(space, exact, exact);
        Vector<LD> c = pair.vector;
        c /= sqrtl(c.dot(sys_exact.mass.multiply(c)));
        SineErrorIntegrator<LD> integ(space);
        if (integ.b_sin(c, mode) < 0) c = -c;
        StudyRow row;
        row.N = N;
        row.h = 1.0 / N;
        row.value = static_cast<double>(pair.lambda);
        row.error = static_cast<double>(norm == ErrorNorm::H1 ? integ.h1_error(c, mode)
                                                              : integ.l2_error(c, mode));
        st.rows.push_back(row);
    }
    st.fitted_order = detail::fitted_order_for(p, st.rows);
    return st;
}

/// Effectivity-index study in the standard study-result shape.
inline StudyResult ei_study(int p, const std::string& rule_name, int mode,
                            std::vector<int> Ns = {}) {
    if (Ns.empty()) Ns = {5, 10, 20, 40};
    const QuadratureSpec rule = named_rule(p, rule_name);
    EffectivityStudy es = effectivity_study(p, rule, mode, Ns);
    StudyResult st;
    st.kind = StudyKind::EI;
    st.p = p;
    st.rule = rule_name;
    st.dim = 1;
    st.mode = std::to_string(mode);
    for (const auto& rep : es.reports) {
        StudyRow row;
        row.N = static_cast<int>(std::lround(1.0 / rep.h));
        row.h = rep.h;
        row.value = rep.EI;
        row.error = rep.reliable ? std::abs(rep.EI - 1.0) : 0.0;
        st.rows.push_back(row);
    }
    st.fitted_order = es.fitted_order;
    return st;
}

/// Remark-1 evidence run: stiffness under-integrated by GL_2 (p = 2), mass by
/// G_{p+1}; optimal convergence is lost. Refuses to run without the unsafe flag.
inline StudyResult degradation_probe(bool unsafe_rule, int mode = 3, std::vector<int> Ns = {}) {
    if (!unsafe_rule)
        throw InvalidParameter("degradation_probe: requires the explicit unsafe-rule flag");
    if (Ns.empty()) Ns = default_elements_1d();
    const int p = 2;
    const QuadratureSpec stiff = single_rule(lobatto(2));
    const QuadratureSpec mass = single_rule(gauss(3));
    StudyResult st;
    st.kind = StudyKind::EV;
    st.p = p;
    st.rule = "unsafe:gl2-stiffness";
    st.dim = 1;
    st.mode = std::to_string(mode);
    using LD = long double;
    for (int N : Ns) {
        auto pair = detail::solve_mode_1d(p, mass, N, mode, &stiff, /*unsafe=*/true);
        const LD lambda = detail::pi_v<LD>() * detail::pi_v<LD>() * mode * mode;
        StudyRow row;
        row.N = N;
        row.h = 1.0 / N;
        row.value = static_cast<double>(pair.lambda);
        row.error = static_cast<double>(fabsl(pair.lambda - lambda) / lambda);
        st.rows.push_back(row);
    }
    st.fitted_order = fit_order(st.rows);
    return st;
}

/// Canonical CSV emission; header is part of the interface.
inline void write_csv(std::ostream& os, const StudyResult& st) {
    os << "study,p,rule,dim,mode,N,h,value,error,order_hint\n";
    char buf[256];
    for (const auto& r : st.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%d,%s,%d,%s,%d,%.17e,%.17e,%.17e,%.17e\n",
                      study_kind_name(st.kind), st.p, st.rule.c_str(), st.dim, st.mode.c_str(),
                      r.N, r.h, r.value, r.error, st.fitted_order);
        os << buf;
    }
}

/// Wall-clock helper for the informational timing output.
class PhaseTimer {
public:
    explicit PhaseTimer(std::string label) : label_(std::move(label)), t0_(clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - t0_).count();
    }
    const std::string& label() const { return label_; }

private:
    using clock = std::chrono::steady_clock;
    std::string label_;
    clock::time_point t0_;
};

} // namespace qblend
