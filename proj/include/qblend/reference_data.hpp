#pragma once

#include <array>
#include <map>
#include <string>

#include "qblend/rational.hpp"

namespace qblend::reference {

/// Leading dispersion-error coefficient for degree p under the named rule
/// ("g+1", "gl+1", "g+0", "opt"): mu h = Lambda + c Lambda^k + ..., returned
/// as (k, c). Derived exactly by the series engine and frozen here; the
/// spectrum curve carries -c at the same order.
inline std::pair<int, Rational> leading_dispersion(int p, const std::string& rule) {
    using R = Rational;
    static const std::map<std::pair<int, std::string>, std::pair<int, R>> table = {
        {{1, "g+1"}, {3, R(-1, 24)}},
        {{1, "gl+1"}, {3, R(1, 24)}},
        {{1, "g+0"}, {3, R(-1, 12)}},
        {{1, "opt"}, {5, R(1, 480)}},
        {{2, "g+1"}, {5, R(-1, 1440)}},
        {{2, "gl+1"}, {5, R(1, 2880)}},
        {{2, "g+0"}, {5, R(-1, 720)}},
        {{2, "opt"}, {7, R(-11, 120960)}},
        {{3, "g+1"}, {7, R(-1, 60480)}},
        {{3, "gl+1"}, {7, R(-1, 100800)}},
        {{3, "g+0"}, {7, R(-13, 604800)}},
        {{3, "opt"}, {9, R(-1, 145152)}},
        {{4, "g+1"}, {9, R(-1, 2419200)}},
        {{4, "gl+1"}, {9, R(-79, 203212800)}},
        {{4, "g+0"}, {9, R(-11, 25401600)}},
        {{4, "opt"}, {11, R(-317, 958003200)}},
        {{5, "g+1"}, {11, R(-1, 95800320)}},
        {{5, "gl+1"}, {11, R(-29, 2794176000)}},
        {{5, "g+0"}, {11, R(-211, 20118067200)}},
        {{5, "opt"}, {13, R(BigInt(-35039), BigInt("2615348736000"))}},
        {{6, "g+1"}, {13, R(BigInt(-691), BigInt("2615348736000"))}},
        {{6, "gl+1"}, {13, R(BigInt(-91177), BigInt("345226033152000"))}},
        {{6, "g+0"}, {13, R(BigInt(-5069), BigInt("19179224064000"))}},
        {{6, "opt"}, {15, R(BigInt(-15479), BigInt("31384184832000"))}},
        {{7, "g+1"}, {15, R(BigInt(-1), BigInt("149448499200"))}},
        {{7, "gl+1"}, {15, R(BigInt(-105103), BigInt("15707784508416000"))}},
        {{7, "g+0"}, {15, R(BigInt(-60061), BigInt("8975876861952000"))}},
        {{7, "opt"}, {17, R(BigInt(-91067), BigInt("5335311421440000"))}},
    };
    auto it = table.find({p, rule});
    if (it == table.end()) throw InvalidParameter("no reference coefficient for this (p, rule)");
    return it->second;
}

/// Reference eigenfunction H1-seminorm errors for u_3, quadratic splines,
/// N = 20..320, column order O2, G3, GL3, G2.
struct H1ErrorRow {
    int N;
    std::array<double, 4> error;  // opt, g+1, gl+1, g+0
};
inline const std::array<H1ErrorRow, 5>& h1_reference_u3_p2() {
    static const std::array<H1ErrorRow, 5> rows = {{
        {20, {8.007409e-02, 8.007620e-02, 8.007355e-02, 8.007966e-02}},
        {40, {1.962886e-02, 1.962889e-02, 1.962885e-02, 1.962894e-02}},
        {80, {4.882983e-03, 4.882983e-03, 4.882983e-03, 4.882984e-03}},
        {160, {1.219233e-03, 1.219233e-03, 1.219233e-03, 1.219233e-03}},
        {320, {3.047138e-04, 3.047138e-04, 3.047138e-04, 3.047138e-04}},
    }};
    return rows;
}

/// Reference effectivity indices of the residual estimator under O_p,
/// modes 1 and 4, N = 5,10,20,40, and the reference |EI-1| orders.
struct EIEntry {
    int p;
    int mode;
    std::array<double, 4> ei;  // N = 5, 10, 20, 40
    double order;
};
inline const std::array<EIEntry, 6>& ei_reference() {
    static const std::array<EIEntry, 6> rows = {{
        {1, 1, {1.00119, 1.00040, 1.00011, 1.00003}, 1.83},
        {1, 4, {0.88632, 1.00127, 1.00192, 1.00057}, 2.28},
        {2, 1, {0.96997, 0.99231, 0.99806, 0.99952}, 1.96},
        {2, 4, {0.67227, 0.89264, 0.97046, 0.99242}, 1.82},
        {3, 1, {0.92794, 0.97974, 0.99468, 1.00223}, 1.7},
        {3, 4, {0.64385, 0.75699, 0.92242, 0.97899}, 1.39},
    }};
    return rows;
}

} // namespace qblend::reference
