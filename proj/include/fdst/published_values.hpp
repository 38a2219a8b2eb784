#pragma once

// Reference constants for the greedy full-degree spanning tree bounds on
// random regular graphs. All tolerance checks in the harness and the
// acceptance suite read from here.

#include <array>
#include <optional>

namespace fdst::published {

struct BoundRow {
    int r;
    double f_r;  // asymptotic full-degree fraction reached by the greedy algorithm
    double u_r;  // 1 / (r - 1), printed to four places
};

inline constexpr std::array<BoundRow, 8> kBounds{{
    {3, 0.4591, 0.5000},
    {4, 0.2699, 0.3333},
    {5, 0.1811, 0.2500},
    {6, 0.1315, 0.2000},
    {7, 0.1006, 0.1667},
    {8, 0.0799, 0.1429},
    {9, 0.0652, 0.1250},
    {10, 0.0545, 0.1111},
}};

inline std::optional<double> f_r(int r) {
    for (const BoundRow& row : kBounds) {
        if (row.r == r) return row.f_r;
    }
    return std::nullopt;
}

/// Phase boundary for r = 3.
namespace cubic {
inline constexpr double rho1 = 0.6485;
inline constexpr double rho2 = 0.6922;
inline constexpr double z1 = 0.0193;
inline constexpr double z2 = 0.0536;
inline constexpr double z3 = 0.0498;
inline constexpr double zL = 0.0;
inline constexpr double zF = 0.4375;
inline constexpr double zM = 0.4060;
}  // namespace cubic

/// Phase boundary for r = 4.
namespace quartic {
inline constexpr double rho1 = 0.4707;
inline constexpr double rho2 = 0.5397;
inline constexpr double z1 = 0.0119;
inline constexpr double z2 = 0.0548;
inline constexpr double z3 = 0.1124;
inline constexpr double z4 = 0.0864;
inline constexpr double zL = 0.0;
inline constexpr double zF = 0.2445;
inline constexpr double zM = 1.1757;
}  // namespace quartic

}  // namespace fdst::published
