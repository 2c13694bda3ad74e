// Acceptance suite: one criterion per invocation (argv[1] = 1..8, default all).
// Prints one [PASS]/[FAIL] line per criterion plus failing sub-check detail,
// and exits with the number of failed criteria.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>
#include <vector>

#include "qblend/qblend.hpp"
#include "qblend/reference_data.hpp"

using namespace qblend;

namespace {

struct Criterion {
    std::string name;
    int checks = 0;
    int failures = 0;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failures;
            notes.push_back(what);
        }
    }
    template <class T>
    void require_eq(const T& got, const T& want, const std::string& what) {
        std::ostringstream os;
        if (!(got == want)) {
            os << what << ": got " << got << ", expected " << want;
            require(false, os.str());
        } else {
            require(true, "");
        }
    }
    void require_close(double got, double want, double tol, const std::string& what) {
        std::ostringstream os;
        os << what << ": got " << got << ", expected " << want << " +- " << tol;
        require(std::abs(got - want) <= tol, os.str());
    }
};

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << to_string(q); }

BigInt factorial(int n) {
    BigInt f(1);
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

StencilSymbol stencil_of(int p, const std::string& rule) {
    auto s = make_space(p, 2 * p + 3);
    auto q = named_rule(p, rule);
    return interior_stencil(s, q, q);
}

// --- criterion 1 -----------------------------------------------------------

void criterion1(Criterion& c) {
    PhaseTimer timer("criterion 1");
    // quadratic expansions, both printed terms
    {
        auto d = expand_dispersion(stencil_of(2, "g+1"), 9);
        c.require_eq(d[5], Rational(-1, 1440), "p=2 G3 Lambda^5");
        auto dl = expand_dispersion(stencil_of(2, "gl+1"), 9);
        c.require_eq(dl[5], Rational(1, 2880), "p=2 GL3 Lambda^5");
        auto dg2 = expand_dispersion(stencil_of(2, "g+0"), 9);
        c.require_eq(dg2[5], Rational(-1, 720), "p=2 G2 Lambda^5");
        auto doo = expand_dispersion(stencil_of(2, "opt"), 11);
        c.require_eq(doo[7], Rational(-11, 120960), "p=2 O2 Lambda^7");
        c.require_eq(doo[9], Rational(-1, 345600), "p=2 O2 Lambda^9");
    }
    // cubic: leading terms, then the published second terms as pinned
    {
        auto g4 = expand_dispersion(stencil_of(3, "g+1"), 11);
        auto gl4 = expand_dispersion(stencil_of(3, "gl+1"), 11);
        auto g3 = expand_dispersion(stencil_of(3, "g+0"), 11);
        auto o3 = expand_dispersion(stencil_of(3, "opt"), 13);
        c.require_eq(g4[7], Rational(-1, 60480), "p=3 G4 Lambda^7");
        c.require_eq(gl4[7], Rational(-1, 100800), "p=3 GL4 Lambda^7");
        c.require_eq(g3[7], Rational(-13, 604800), "p=3 G3 Lambda^7");
        c.require_eq(o3[9], Rational(-1, 145152), "p=3 O3 Lambda^9");
        // The pinned second-order values below do not expand from the
        // published closed-form relations (criterion 3 verifies those
        // exactly); the derived coefficients appear in the messages.
        c.require_eq(g4[9], Rational(-1, 907200), "p=3 G4 Lambda^9 [pinned]");
        c.require_eq(gl4[9], Rational(-11, 1814400), "p=3 GL4 Lambda^9 [pinned]");
        c.require_eq(g3[9], Rational(-37, 7257600), "p=3 G3 Lambda^9 [pinned]");
        c.require_eq(o3[11], Rational(19, 68428800), "p=3 O3 Lambda^11 [pinned]");
    }
    // quartic..septic leading terms, all sixteen table entries
    struct Entry {
        int p;
        const char* rule;
        Rational eps;
    };
    const std::vector<Entry> table = {
        {4, "g+1", Rational(3, 20 * factorial(9))},
        {4, "gl+1", Rational(79, 560 * factorial(9))},
        {4, "g+0", Rational(11, 70 * factorial(9))},
        {4, "opt", Rational(317, 24 * factorial(11))},
        {5, "g+1", Rational(5, 12 * factorial(11))},
        {5, "gl+1", Rational(29, 70 * factorial(11))},
        {5, "g+0", Rational(211, 504 * factorial(11))},
        {5, "opt", Rational(35039, 420 * factorial(13))},
        {6, "g+1", Rational(691, 420 * factorial(13))},
        {6, "gl+1", Rational(91177, 55440 * factorial(13))},
        {6, "g+0", Rational(5069, 3080 * factorial(13))},
        {6, "opt", Rational(15479, 24 * factorial(15))},
        {7, "g+1", Rational(35, 4 * factorial(15))},
        {7, "gl+1", Rational(105103, 12012 * factorial(15))},
        {7, "g+0", Rational(60061, 6864 * factorial(15))},
        {7, "opt", Rational(91067, 15 * factorial(17))},
    };
    for (const auto& e : table) {
        const bool opt = std::string(e.rule) == "opt";
        const int k = opt ? 2 * e.p + 3 : 2 * e.p + 1;
        auto d = expand_dispersion(stencil_of(e.p, e.rule), k);
        std::ostringstream what;
        what << "p=" << e.p << " " << e.rule << " Lambda^" << k;
        c.require_eq(d[k], Rational(-e.eps), what.str());
    }
    c.require(timer.seconds() < 60.0, "criterion 1 runtime under one minute");
}

// --- criterion 2 -----------------------------------------------------------

void criterion2(Criterion& c) {
    const std::vector<std::pair<int, Rational>> gl_form = {
        {2, Rational(1, 3)},      {3, Rational(-3, 2)},       {4, Rational(-79, 5)},
        {5, Rational(-174)},      {6, Rational(-91177, 35)},  {7, Rational(-105103, 2)},
    };
    const std::vector<std::pair<int, Rational>> gauss_form = {
        {2, Rational(2)},   {3, Rational(13, 3)},    {4, Rational(22)},
        {5, Rational(211)}, {6, Rational(15207, 5)}, {7, Rational(60061)},
    };
    for (const auto& [p, tau] : gl_form) {
        auto got = find_optimal_tau(p, single_rule(gauss(p + 1)), single_rule(lobatto(p + 1)));
        c.require_eq(got, tau, "Gauss/Lobatto-form tau for p=" + std::to_string(p));
    }
    for (const auto& [p, tau] : gauss_form) {
        auto got = find_optimal_tau(p, single_rule(gauss(p + 1)), single_rule(gauss(p)));
        c.require_eq(got, tau, "Gauss-only tau for p=" + std::to_string(p));
    }
    for (std::size_t i = 0; i < gl_form.size(); ++i) {
        const int p = gl_form[i].first;
        const Rational C1 = 1 - gl_form[i].second;
        const Rational C2 = gauss_form[i].second - 1;
        c.require_eq(Rational(p * C2 - (p + 1) * C1), Rational(0),
                     "p C2 - (p+1) C1 for p=" + std::to_string(p));
    }
    auto m = find_optimal_mass(2);
    c.require_eq(m.alpha, Rational(7, 720), "optimal mass alpha");
    c.require_eq(m.beta, Rational(19, 90), "optimal mass beta");
}

// --- criterion 3 -----------------------------------------------------------

void criterion3(Criterion& c) {
    for (int p : {2, 3}) {
        try {
            auto checks = verify_closed_forms(p);
            for (const auto& chk : checks)
                c.require(chk.matched, "closed form " + chk.rule + " (p=" + std::to_string(p) +
                                           ") mismatched");
        } catch (const std::exception& e) {
            c.require(false, std::string("closed-form verification threw: ") + e.what());
        }
    }
}

// --- criterion 4 -----------------------------------------------------------

void criterion4(Criterion& c) {
    PhaseTimer timer("criterion 4");
    // slopes fitted on the three finest meshes of Ns = 20..320 (the coarse
    // meshes of the high modes sit outside the Lambda < 1 expansion regime)
    auto slope = [](int p, const char* rule, int mode) {
        auto st = ev_error_study(p, rule, 1, {mode});
        return fit_order_tail(st.rows, 3);
    };
    for (int mode : {3, 11}) {
        for (const char* rule : {"g+1", "gl+1", "g+0"})
            c.require_close(slope(2, rule, mode), 4.0, 0.1,
                            std::string("p=2 ") + rule + " mode " + std::to_string(mode));
        c.require_close(slope(2, "opt", mode), 6.0, 0.2,
                        "p=2 opt mode " + std::to_string(mode));
    }
    for (int mode : {8, 20}) {
        for (const char* rule : {"g+1", "gl+1", "g+0"})
            c.require_close(slope(3, rule, mode), 6.0, 0.2,
                            std::string("p=3 ") + rule + " mode " + std::to_string(mode));
        c.require_close(slope(3, "opt", mode), 8.0, 0.3,
                        "p=3 opt mode " + std::to_string(mode));
    }
    c.require(timer.seconds() < 300.0, "criterion 4 runtime under five minutes");
}

// --- criterion 5 -----------------------------------------------------------

void criterion5(Criterion& c) {
    const char* rules[4] = {"opt", "g+1", "gl+1", "g+0"};
    for (int col = 0; col < 4; ++col) {
        auto st = ef_error_study(2, rules[col], 3, ErrorNorm::H1);
        const auto& ref = reference::h1_reference_u3_p2();
        for (std::size_t i = 0; i < ref.size(); ++i) {
            std::ostringstream what;
            what << "H1 error u3, " << rules[col] << ", N=" << ref[i].N;
            c.require(std::abs(st.rows[i].error - ref[i].error[col]) <=
                          1e-3 * ref[i].error[col],
                      what.str() + ": got " + std::to_string(st.rows[i].error));
        }
        c.require_close(st.fitted_order, 2.01, 0.05,
                        std::string("H1 fitted order, ") + rules[col]);
    }
    auto l2 = ef_error_study(2, "opt", 3, ErrorNorm::L2);
    c.require_close(l2.fitted_order, 3.0, 0.1, "L2 fitted order, opt");
}

// --- criterion 6 -----------------------------------------------------------

void criterion6(Criterion& c) {
    for (int p : {2, 3}) {
        const auto rule = optimal_blend(p);
        // Kronecker vs dense cross-check
        for (int N : {4, 8, 16}) {
            auto space = make_space(p, N);
            auto op = assemble_tensor({space, space}, single_rule(gauss(p + 1)), rule);
            auto sol = solve_tensor(op);
            auto [K, M] = dense_tensor(op);
            Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
            bool ok = es.info() == Eigen::Success;
            double worst = 0;
            for (std::size_t j = 0; ok && j < sol.modes.size(); ++j)
                worst = std::max(worst, std::abs(sol.modes[j].value - es.eigenvalues()[j]) /
                                            es.eigenvalues()[j]);
            std::ostringstream what;
            what << "Kronecker vs dense, p=" << p << ", N=" << N << ": worst rel " << worst;
            c.require(ok && worst <= 1e-10, what.str());
        }
        // superconvergent slope for mode (2,2)
        auto st = ev_error_study(p, "opt", 2, {2, 2});
        c.require_close(fit_order_tail(st.rows, 3), 2.0 * p + 2, 0.3,
                        "2D O_p slope, p=" + std::to_string(p));
        // additivity against two 1D studies
        auto st1 = ev_error_study(p, "opt", 1, {2}, default_elements_2d());
        for (std::size_t i = 0; i < st.rows.size(); ++i) {
            const double abs2d = st.rows[i].error * 8 * std::numbers::pi * std::numbers::pi;
            const double abs1d = st1.rows[i].error * 4 * std::numbers::pi * std::numbers::pi;
            std::ostringstream what;
            what << "additivity, p=" << p << ", N=" << st.rows[i].N;
            c.require(std::abs(abs2d - 2 * abs1d) <= 1e-12 * std::max(abs2d, 1e-300), what.str());
        }
    }
}

// --- criterion 7 -----------------------------------------------------------

void criterion7(Criterion& c) {
    // Table values assume the optimal rules O_p (the estimator derivation
    // needs the superconvergent eigenvalue error that only O_p provides).
    static const int ns[4] = {5, 10, 20, 40};
    for (const auto& row : reference::ei_reference()) {
        auto study = effectivity_study(row.p, optimal_blend(row.p), row.mode, {5, 10, 20, 40});
        for (int i = 0; i < 4; ++i) {
            std::ostringstream what;
            what << "EI p=" << row.p << " mode=" << row.mode << " N=" << ns[i];
            c.require_close(study.reports[i].EI, row.ei[i], 1e-2, what.str());
        }
        std::ostringstream what;
        what << "|EI-1| order p=" << row.p << " mode=" << row.mode;
        c.require_close(study.fitted_order, row.order, 0.5, what.str());
    }
    // exact-quadrature degeneracy at 50-digit precision (double-precision
    // seed, 50-digit inverse-iteration polish)
    {
        auto space = make_space(2, 8);
        auto exact = single_rule(gauss(3));
        auto sysr = assemble_1d<Rational>(space, exact, exact);
        auto K = sysr.stiffness.cast<Float50>();
        auto M = sysr.mass.cast<Float50>();
        auto seed = solve_gevp(sysr.stiffness.cast<double>(), sysr.mass.cast<double>());
        for (int j = 0; j < 3; ++j) {
            auto pr = refine_eigenpair<Float50>(K, M, seed.eigenvalues[j],
                                                seed.eigenvectors.col(j), 3);
            const double R =
                static_cast<double>(residual_R<Float50>(K, M, pr.lambda, pr.vector));
            c.require(R <= 1e-12,
                      "exact-quadrature residual mode " + std::to_string(j + 1) + ": R = " +
                          std::to_string(R));
        }
    }
}

// --- criterion 8 -----------------------------------------------------------

void criterion8(Criterion& c) {
    // partition of unity
    for (int p : {1, 3, 7}) {
        auto s = make_space(p, 9);
        bool ok = true;
        for (int i = 1; i < 140; ++i) {
            auto b = eval_basis<Rational>(s, Rational(i, 140));
            Rational sum(0);
            for (const auto& v : b.value) sum += v;
            ok = ok && (sum == 1);
        }
        c.require(ok, "partition of unity, p=" + std::to_string(p));
    }
    // quadrature exactness degrees
    for (int n = 1; n <= 8; ++n) {
        auto m = rational_moments(gauss(n), std::min(2 * n - 1, kMaxMomentOrder));
        bool ok = true;
        for (int k = 0; k < static_cast<int>(m.m.size()); ++k)
            ok = ok && m.m[k] == ((k % 2 == 0) ? Rational(2, k + 1) : Rational(0));
        c.require(ok, "Gauss exactness, n=" + std::to_string(n));
    }
    for (int n = 2; n <= 8; ++n) {
        auto m = rational_moments(lobatto(n), std::max(0, std::min(2 * n - 3, kMaxMomentOrder)));
        bool ok = true;
        for (int k = 0; k < static_cast<int>(m.m.size()); ++k)
            ok = ok && m.m[k] == ((k % 2 == 0) ? Rational(2, k + 1) : Rational(0));
        c.require(ok, "Lobatto exactness, n=" + std::to_string(n));
    }
    // stencil row sums and SPD sweep
    for (int p = 1; p <= 7; ++p) {
        for (const char* rule : {"g+1", "gl+1", "g+0", "opt"}) {
            auto sym = stencil_of(p, rule);
            c.require(sym.stiffness_row_sum() == 0 && sym.mass_row_sum() == 1,
                      std::string("stencil row sums, p=") + std::to_string(p) + " " + rule);
            for (int N : {8, 16, 32}) {
                auto s = make_space(p, N);
                auto sys = assemble_1d<double>(s, single_rule(gauss(p + 1)), named_rule(p, rule));
                try {
                    check_positive_definite(sys.stiffness, "K");
                    check_positive_definite(sys.mass, "M");
                    c.require(true, "");
                } catch (const DefinitenessError& e) {
                    c.require(false, std::string("SPD failure p=") + std::to_string(p) + " " +
                                         rule + " N=" + std::to_string(N) + ": " + e.what());
                }
            }
        }
    }
    // Pythagorean identity (p=2, N=10, modes 1..5)
    {
        using LD = long double;
        auto space = make_space(2, 10);
        const auto exact = single_rule(gauss(3));
        for (const char* rule : {"g+1", "opt"}) {
            auto q = named_rule(2, rule);
            auto sys = assemble_1d<LD>(space, exact, q);
            auto sys_exact = assemble_1d<LD>(space, exact, exact);
            auto sold = solve_gevp(sys.stiffness.cast<double>(), sys.mass.cast<double>());
            SineErrorIntegrator<LD> integ(space);
            for (int j = 1; j <= 5; ++j) {
                auto pr = refine_eigenpair<LD>(sys.stiffness, sys.mass, sold.eigenvalues[j - 1],
                                               sold.eigenvectors.col(j - 1));
                Vector<LD> x = pr.vector;
                if (integ.b_sin(x, j) < 0) x = -x;
                const LD lam = LD(j) * j * detail::pi_v<LD>() * detail::pi_v<LD>();
                const LD uE2 = x.dot(sys_exact.stiffness.multiply(x));
                const LD uL2 = x.dot(sys_exact.mass.multiply(x));
                const LD l2e = integ.l2_error(x, j);
                const LD h1e = integ.h1_error(x, j);
                const LD lhs = h1e * h1e;
                const LD rhs =
                    (pr.lambda - lam) + lam * l2e * l2e + (uE2 - pr.lambda) + lam * (LD(1) - uL2);
                c.require(std::abs(static_cast<double>(lhs - rhs)) <= 1e-9,
                          std::string("Pythagorean identity ") + rule + " mode " +
                              std::to_string(j));
            }
        }
    }
    // series-level duality for every (p, rule)
    for (int p = 1; p <= 7; ++p)
        for (const char* rule : {"g+1", "gl+1", "g+0", "opt"}) {
            auto [k, cc] = reference::leading_dispersion(p, rule);
            auto sym = stencil_of(p, rule);
            auto d = expand_dispersion(sym, k);
            auto sp = expand_spectrum(sym, k);
            bool structure = d[k] == -sp[k] && d[k] == cc;
            for (int j = 2; j < k; ++j) structure = structure && d[j] == 0 && sp[j] == 0;
            c.require(structure, std::string("series duality/order, p=") + std::to_string(p) +
                                     " " + rule);
        }
    // spectrum/dispersion curve round trip
    for (int p : {2, 5}) {
        auto s = make_space(p, 2 * p + 3);
        auto q = optimal_blend(p);
        SymbolFunctions sym(interior_stencil(s, q, q));
        bool ok = true;
        for (double theta : {0.1, 0.5, 1.0})
            ok = ok && std::abs(dispersion_curve(sym, spectrum_curve(sym, theta)) - theta) <= 1e-12;
        c.require(ok, "curve round trip, p=" + std::to_string(p));
    }
    // Remark-2 identity at Lambda^7, failure at Lambda^9
    {
        auto d_g3 = expand_dispersion(stencil_of(2, "g+1"), 9);
        auto d_gl3 = expand_dispersion(stencil_of(2, "gl+1"), 9);
        auto d_g2 = expand_dispersion(stencil_of(2, "g+0"), 9);
        auto d_o2 = expand_dispersion(stencil_of(2, "opt"), 9);
        struct W {
            Rational w1, w2;
            const PowerSeries<Rational>*a, *b;
        };
        for (const auto& w : {W{Rational(1, 3), Rational(2, 3), &d_g3, &d_gl3},
                              W{Rational(2), Rational(-1), &d_g3, &d_g2},
                              W{Rational(4, 5), Rational(1, 5), &d_gl3, &d_g2}}) {
            c.require(w.w1 * (*w.a)[7] + w.w2 * (*w.b)[7] == d_o2[7],
                      "weighted-sum identity at Lambda^7");
            c.require(w.w1 * (*w.a)[9] + w.w2 * (*w.b)[9] != d_o2[9],
                      "weighted-sum identity must fail at Lambda^9");
        }
    }
    // Remark-4 blend equivalence through Lambda^{2p+3}
    {
        auto G = [](int n) { return single_rule(gauss(n)); };
        auto GL = [](int n) { return single_rule(lobatto(n)); };
        auto mix = [](std::initializer_list<std::pair<Rational, QuadratureSpec>> terms) {
            QuadratureSpec out;
            for (const auto& [cc, q] : terms)
                for (const auto& [ci, ri] : q.terms) out.terms.emplace_back(cc * ci, ri);
            return out;
        };
        auto s3 = make_space(3, 9);
        auto ref = expand_dispersion(
            interior_stencil(s3, blend(Rational(-3, 2), G(4), GL(4)),
                             blend(Rational(-3, 2), G(4), GL(4))),
            9);
        const std::vector<QuadratureSpec> alts = {
            mix({{Rational(4, 35), GL(3)}, {Rational(36, 35), G(2)}, {Rational(-1, 7), GL(2)}}),
            mix({{Rational(10, 49), G(3)},
                 {Rational(234, 245), G(2)},
                 {Rational(-39, 245), GL(2)}}),
            mix({{Rational(20, 7), G(3)}, {Rational(-52, 35), GL(3)}, {Rational(-13, 35), GL(2)}}),
            mix({{Rational(10, 7), GL(4)}, {Rational(-12, 35), GL(3)}, {Rational(-3, 35), GL(2)}}),
        };
        for (std::size_t i = 0; i < alts.size(); ++i) {
            auto d = expand_dispersion(interior_stencil(s3, alts[i], alts[i]), 9);
            bool same = true;
            for (int k = 0; k <= 9; ++k) same = same && d[k] == ref[k];
            c.require(same, "Remark-4 blend " + std::to_string(i) + " equivalence");
        }
    }
    // determinism stand-in for the wall-clock table
    {
        auto st = ev_error_study(1, "opt", 1, {1}, {8, 16, 32});
        std::ostringstream a, b;
        write_csv(a, st);
        write_csv(b, st);
        c.require(a.str() == b.str(), "CSV determinism");
    }
}

} // namespace

int main(int argc, char** argv) {
    const int which = argc > 1 ? std::atoi(argv[1]) : 0;
    struct Entry {
        int id;
        const char* name;
        void (*fn)(Criterion&);
    };
    const Entry entries[] = {
        {1, "exact coefficient reproduction", criterion1},
        {2, "optimal-parameter recovery", criterion2},
        {3, "closed-form dispersion relations", criterion3},
        {4, "1D convergence slopes", criterion4},
        {5, "eigenfunction error table reproduction", criterion5},
        {6, "2D Kronecker spectra and superconvergence", criterion6},
        {7, "a posteriori estimator effectivity", criterion7},
        {8, "property suites", criterion8},
    };
    int failed_criteria = 0;
    for (const auto& e : entries) {
        if (which != 0 && e.id != which) continue;
        Criterion c;
        c.name = e.name;
        PhaseTimer timer(e.name);
        try {
            e.fn(c);
        } catch (const std::exception& ex) {
            c.require(false, std::string("unexpected exception: ") + ex.what());
        }
        const bool pass = c.failures == 0;
        if (!pass) ++failed_criteria;
        std::printf("[%s] criterion %d: %s (%d/%d checks, %.1f s)\n", pass ? "PASS" : "FAIL",
                    e.id, e.name, c.checks - c.failures, c.checks, timer.seconds());
        for (const auto& n : c.notes) std::printf("    - %s\n", n.c_str());
    }
    return failed_criteria;
}
