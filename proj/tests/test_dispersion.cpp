#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qblend/dispersion.hpp"

using namespace qblend;

namespace {

SymbolFunctions symbol_for(int p, const std::string& rule) {
    auto s = make_space(p, 2 * p + 3);
    auto q = named_rule(p, rule);
    return SymbolFunctions(interior_stencil(s, q, q));
}

} // namespace

TEST_CASE("closed-form relations verified up to scale", "[dispersion]") {
    auto q = verify_closed_forms(2);
    REQUIRE(q.size() == 4);
    CHECK(q[0].scale == Rational(-1, 30));   // G3
    CHECK(q[1].scale == Rational(-1, 24));   // GL3
    CHECK(q[2].scale == Rational(-1, 36));   // G2
    CHECK(q[3].scale == Rational(-1, 180));  // O2
    for (auto& c : q) CHECK(c.matched);

    auto cu = verify_closed_forms(3);
    REQUIRE(cu.size() == 3);
    CHECK(cu[0].scale == Rational(-1, 630));   // G4
    CHECK(cu[1].scale == Rational(-1, 1350));  // GL4
    CHECK(cu[2].scale == Rational(-1, 1800));  // G3 (cubic)
    for (auto& c : cu) CHECK(c.matched);

    CHECK_THROWS_AS(verify_closed_forms(4), InvalidParameter);
}

TEST_CASE("closed-form mismatch is a hard failure", "[dispersion]") {
    auto s = make_space(2, 7);
    auto sym = interior_stencil(s, named_rule(2, "g+1"), named_rule(2, "g+1"));
    ClosedFormRelation wrong{"G3", {{20, 1}, {20, 13}, {-40, 17}}};  // last entry perturbed
    auto chk = check_closed_form(sym, wrong);
    CHECK_FALSE(chk.matched);
}

TEST_CASE("spectrum curve values", "[dispersion]") {
    auto sym = symbol_for(2, "g+1");
    // closed-form oracle: sqrt((40 - 20 c - 20 c^2) / (16 + 13 c + c^2)), c = cos(theta)
    auto oracle = [](double theta) {
        const double c = std::cos(theta);
        return std::sqrt((40 - 20 * c - 20 * c * c) / (16 + 13 * c + c * c));
    };
    for (double theta : {0.1, 0.3, 0.5, 1.0, 2.0})
        CHECK(spectrum_curve(sym, theta) == Catch::Approx(oracle(theta)).margin(1e-13));
    CHECK(spectrum_curve(sym, 0.5) == Catch::Approx(0.500021701).margin(1e-8));
    // consistency: slope 1 at the origin
    CHECK(spectrum_curve(sym, 1e-5) / 1e-5 == Catch::Approx(1.0).margin(1e-9));

    auto o2 = symbol_for(2, "opt");
    CHECK(spectrum_curve(o2, 0.5) - 0.5 ==
          Catch::Approx((11.0 / 120960) * std::pow(0.5, 7)).epsilon(1e-2));
    CHECK(spectrum_curve(o2, 0.5) > 0.5);  // positive sign of the optimal spectrum error

    CHECK_THROWS_AS(spectrum_curve(sym, 0.0), InvalidParameter);
    CHECK_THROWS_AS(spectrum_curve(sym, 4.0), InvalidParameter);
}

TEST_CASE("dispersion curve solves the interior relation", "[dispersion]") {
    auto sym = symbol_for(2, "g+1");
    const double mu = dispersion_curve(sym, 0.5);
    CHECK(mu == Catch::Approx(0.5 - std::pow(0.5, 5) / 1440).margin(1e-8));
    // residual of the relation itself
    CHECK(std::abs(sym.s_theta(mu) - 0.25 * sym.m_theta(mu)) < 1e-13);
    // out of band: above the top of the first branch
    const double edge = spectrum_curve(sym, std::numbers::pi * (1 - 1e-9));
    CHECK_THROWS_AS(dispersion_curve(sym, edge * 1.01), OutOfBandError);
}

TEST_CASE("spectrum and dispersion curves are functional inverses", "[dispersion]") {
    for (int p : {1, 2, 3, 5, 7}) {
        for (const char* rule : {"g+1", "gl+1", "opt"}) {
            auto sym = symbol_for(p, rule);
            for (double theta : {0.1, 0.5, 1.0}) {
                const double lam = spectrum_curve(sym, theta);
                CHECK(dispersion_curve(sym, lam) == Catch::Approx(theta).margin(1e-12));
            }
        }
    }
}

TEST_CASE("monotone, positive symbols across all degrees and rules", "[dispersion]") {
    const double pi = std::numbers::pi;
    for (int p = 1; p <= 7; ++p) {
        for (const char* rule : {"g+1", "gl+1", "g+0", "opt"}) {
            auto sym = symbol_for(p, rule);
            double prev = 0.0;
            for (int i = 1; i <= 200; ++i) {
                const double theta = pi * (1 - 1e-6) * i / 200.0;
                CHECK(sym.s_theta(theta) > 0.0);
                const double v = spectrum_curve(sym, theta);
                CHECK(v > prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("duality of signs between the two curves", "[dispersion]") {
    for (int p = 1; p <= 7; ++p) {
        for (const char* rule : {"g+1", "gl+1", "g+0", "opt"}) {
            auto sym = symbol_for(p, rule);
            const double theta = 0.75;
            const double ds = spectrum_curve(sym, theta) - theta;
            const double dm = dispersion_curve(sym, theta) - theta;
            INFO("p=" << p << " rule=" << rule);
            CHECK(ds * dm < 0.0);
        }
    }
}

TEST_CASE("degenerate mass symbol is reported", "[dispersion]") {
    StencilSymbol bad;
    bad.degree = 1;
    bad.stiffness = {Rational(2), Rational(-1)};
    bad.mass = {Rational(0), Rational(1, 2)};  // m(pi) = -1
    SymbolFunctions sym(bad);
    CHECK_THROWS_AS(spectrum_curve(sym, 3.0), DegenerateSymbolError);
}
