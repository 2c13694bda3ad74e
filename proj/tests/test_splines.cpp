#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "qblend/splines.hpp"

using namespace qblend;

TEST_CASE("make_space dimensions and knots", "[splines]") {
    auto s1 = make_space(1, 2);
    CHECK(s1.dimension() == 3);
    CHECK(s1.interior_dimension() == 1);

    auto s2 = make_space(2, 20);
    CHECK(s2.dimension() == 22);
    CHECK(s2.h() == Rational(1, 20));

    auto s7 = make_space(7, 10);
    CHECK(s7.dimension() == 17);
    REQUIRE(s7.knots.size() == 10 + 2 * 7 + 1);
    for (int i = 0; i < 8; ++i) {
        CHECK(s7.knots[i] == 0);
        CHECK(s7.knots[s7.knots.size() - 1 - i] == 1);
    }
    CHECK(s7.knots[8] == Rational(1, 10));
    CHECK(s7.knots[16] == Rational(9, 10));

    CHECK_THROWS_AS(make_space(0, 4), InvalidParameter);
    CHECK_THROWS_AS(make_space(8, 4), InvalidParameter);
    CHECK_THROWS_AS(make_space(2, 1), InvalidParameter);
}

TEST_CASE("eval_basis hand values", "[splines]") {
    // Hand Cox-de Boor on knots (0,0,0,1/2,1,1,1) at x = 1/4:
    //   B0 = (1-2x)^2 = 1/4; B1 = 2x(1-2x) + (1-x)*2x = 5/8; B2 = x*2x/1... = 1/8
    auto s = make_space(2, 2);
    auto b = eval_basis<Rational>(s, Rational(1, 4));
    CHECK(b.first == 0);
    CHECK(b.value[0] == Rational(1, 4));
    CHECK(b.value[1] == Rational(5, 8));
    CHECK(b.value[2] == Rational(1, 8));

    // interior cardinal values at an element midpoint
    auto s9 = make_space(2, 9);
    auto bi = eval_basis<Rational>(s9, Rational(5, 18));  // midpoint of element 2
    CHECK(bi.value[0] == Rational(1, 8));
    CHECK(bi.value[1] == Rational(3, 4));
    CHECK(bi.value[2] == Rational(1, 8));

    // hats interpolate at nodes
    auto s4 = make_space(1, 4);
    auto bh = eval_basis<double>(s4, 0.25);
    int nonzero = 0;
    for (int k = 0; k < 2; ++k)
        if (bh.value[k] != 0.0) {
            ++nonzero;
            CHECK(bh.first + k == 1);  // the hat centered at 0.25
            CHECK(bh.value[k] == 1.0);
        }
    CHECK(nonzero == 1);
}

TEST_CASE("endpoint convention and domain errors", "[splines]") {
    for (int p : {1, 2, 3, 5, 7}) {
        auto s = make_space(p, 5);
        auto b0 = eval_basis<double>(s, 0.0);
        CHECK(b0.first == 0);
        CHECK(b0.value[0] == 1.0);
        auto b1 = eval_basis<double>(s, 1.0);
        CHECK(b1.first + p == s.dimension() - 1);
        CHECK(b1.value[p] == 1.0);
    }
    auto s = make_space(2, 4);
    CHECK_THROWS_AS(eval_basis<double>(s, -0.01), DomainError);
    CHECK_THROWS_AS(eval_basis<double>(s, 1.01), DomainError);
}

TEST_CASE("partition of unity at random points", "[splines]") {
    std::mt19937 rng(12345);
    for (int p : {1, 2, 3, 4, 7}) {
        auto s = make_space(p, 13);
        const auto kd = s.knots_as<double>();
        std::uniform_real_distribution<double> U(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            const double x = U(rng);
            auto b = eval_basis<double>(std::span<const double>(kd), p, x);
            double vs = 0, ds = 0;
            for (int k = 0; k <= p; ++k) {
                vs += b.value[k];
                ds += b.deriv[k];
                CHECK(b.value[k] >= -1e-15);
            }
            CHECK(vs == Catch::Approx(1.0).margin(1e-14));
            CHECK(ds == Catch::Approx(0.0).margin(1e-11));
        }
        // rational mode: exact partition of unity
        std::uniform_int_distribution<int> num(0, 9999);
        for (int trial = 0; trial < 50; ++trial) {
            Rational x(num(rng), 10000);
            auto b = eval_basis<Rational>(s, x);
            Rational vs(0), ds(0);
            for (int k = 0; k <= p; ++k) {
                vs += b.value[k];
                ds += b.deriv[k];
            }
            CHECK(vs == 1);
            CHECK(ds == 0);
        }
    }
}

TEST_CASE("derivatives match finite differences", "[splines]") {
    std::mt19937 rng(777);
    for (int p : {2, 3, 5}) {
        auto s = make_space(p, 9);
        const auto kd = s.knots_as<double>();
        std::uniform_real_distribution<double> U(0.05, 0.95);
        for (int trial = 0; trial < 60; ++trial) {
            const double x = U(rng), eps = 1e-6;
            auto b = eval_basis<double>(std::span<const double>(kd), p, x);
            auto bp = eval_basis<double>(std::span<const double>(kd), p, x + eps);
            auto bm = eval_basis<double>(std::span<const double>(kd), p, x - eps);
            if (b.first != bp.first || b.first != bm.first) continue;  // straddles a knot
            for (int k = 0; k <= p; ++k) {
                const double fd = (bp.value[k] - bm.value[k]) / (2 * eps);
                const double scale = std::max(1.0, std::abs(b.deriv[k]));
                CHECK(std::abs(b.deriv[k] - fd) / scale < 1e-6);
            }
        }
    }
}

TEST_CASE("element polynomials: hats, cardinal midpoint, unity rows", "[splines]") {
    SECTION("p = 1 interior element: (1-t)/2 and (1+t)/2") {
        auto L = element_polynomials(make_space(1, 6), 3);
        REQUIRE(L.size() == 2);
        CHECK(L[0].c == std::vector<Rational>{Rational(1, 2), Rational(-1, 2)});
        CHECK(L[1].c == std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
    }
    SECTION("p = 2 interior element at t = 0") {
        auto L = element_polynomials(make_space(2, 9), 4);
        CHECK(L[0](Rational(0)) == Rational(1, 8));
        CHECK(L[1](Rational(0)) == Rational(3, 4));
        CHECK(L[2](Rational(0)) == Rational(1, 8));
    }
    SECTION("rows sum to the constant polynomial 1") {
        for (int p : {1, 2, 3, 4, 5, 6, 7}) {
            auto s = make_space(p, 2 * p + 3);
            for (int e : {0, p, p + 1}) {
                auto L = element_polynomials(s, e);
                Poly<Rational> sum;
                for (const auto& l : L) sum = sum + l;
                sum.trim();
                REQUIRE(sum.c.size() == 1);
                CHECK(sum.c[0] == 1);
            }
        }
    }
    SECTION("translation invariance across fully interior elements") {
        for (int p : {1, 2, 3, 5}) {
            auto s = make_space(p, 3 * p + 4);
            auto ref = element_polynomials(s, p);
            for (int e = p + 1; e < s.elements - p; ++e) {
                auto L = element_polynomials(s, e);
                for (int j = 0; j <= p; ++j) CHECK(L[j].c == ref[j].c);
            }
        }
    }
    SECTION("polynomials agree with eval_basis at rational points") {
        auto s = make_space(3, 8);
        const int e = 4;
        auto L = element_polynomials(s, e);
        for (const Rational& t : {Rational(-1, 3), Rational(1, 7), Rational(9, 10)}) {
            Rational x = (Rational(e) + (t + 1) / 2) * s.h();
            auto b = eval_basis<Rational>(s, x);
            for (int j = 0; j <= 3; ++j) {
                const int k = e + j - b.first;
                CHECK(L[j](t) == b.value[k]);
            }
        }
    }
    CHECK_THROWS_AS(element_polynomials(make_space(2, 4), 4), InvalidParameter);
}
