#pragma once

#include <array>
#include <vector>

namespace anisofem {

struct QuadratureRule1D {
    std::vector<double> points;   // on [-1, 1]
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1,1] (Golub-Welsch).
[[nodiscard]] const QuadratureRule1D& gauss_legendre(int n);

/// Quadrature on the reference triangle {(s,t): s,t >= 0, s+t <= 1};
/// weights sum to 1/2.
struct TriangleRule {
    std::vector<std::array<double, 2>> points;
    std::vector<double> weights;
};

/// Collapsed (Duffy) Gauss rule exact for polynomials of total degree <= degree.
[[nodiscard]] const TriangleRule& triangle_rule(int degree);

}  // namespace anisofem
