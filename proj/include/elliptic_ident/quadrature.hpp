#pragma once

#include <array>
#include <utility>

namespace eid {

/// Degree-5, 7-point rule on the reference triangle (barycentric coordinates,
/// weights as fractions of the element area).
struct TriQuadPoint {
    double l0, l1, l2, w;
};

inline const std::array<TriQuadPoint, 7>& tri_quad_deg5() {
    constexpr double a1 = 0.059715871789770;
    constexpr double b1 = 0.470142064105115;
    constexpr double a2 = 0.797426985353087;
    constexpr double b2 = 0.101286507323456;
    constexpr double w1 = 0.132394152788506;
    constexpr double w2 = 0.125939180544827;
    static const std::array<TriQuadPoint, 7> pts = {{
        {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
        {a1, b1, b1, w1},
        {b1, a1, b1, w1},
        {b1, b1, a1, w1},
        {a2, b2, b2, w2},
        {b2, a2, b2, w2},
        {b2, b2, a2, w2},
    }};
    return pts;
}

/// 5-point Gauss-Legendre nodes and weights on [-1, 1].
inline const std::array<std::pair<double, double>, 5>& gauss5() {
    static const std::array<std::pair<double, double>, 5> pts = {{
        {0.0, 0.5688888888888889},
        {-0.5384693101056831, 0.4786286704993665},
        {0.5384693101056831, 0.4786286704993665},
        {-0.9061798459386640, 0.2369268850561891},
        {0.9061798459386640, 0.2369268850561891},
    }};
    return pts;
}

} // namespace eid
