#pragma once

#include <array>
#include <vector>

namespace anisofem {

/// Equispaced Lagrange element of degree r on the reference triangle
/// (0,0), (1,0), (0,1).
///
/// Local node order: the three vertices, then r-1 nodes on each edge
/// (v0->v1, v1->v2, v2->v0) listed from the edge's first vertex, then the
/// interior nodes. Nodes are stored as barycentric multi-indices summing to r.
class LagrangeTriangle {
public:
    explicit LagrangeTriangle(int degree);

    [[nodiscard]] int degree() const { return degree_; }
    [[nodiscard]] int size() const { return static_cast<int>(multi_.size()); }
    [[nodiscard]] const std::array<int, 3>& multi_index(int local) const { return multi_[local]; }

    /// Reference coordinates (s, t) of a local node.
    [[nodiscard]] std::array<double, 2> node(int local) const;

    [[nodiscard]] double value(int local, double s, double t) const;
    [[nodiscard]] std::array<double, 2> gradient(int local, double s, double t) const;

private:
    int degree_;
    std::vector<std::array<int, 3>> multi_;
};

/// Shared instance for r in {1,2,3}.
[[nodiscard]] const LagrangeTriangle& lagrange_triangle(int degree);

}  // namespace anisofem
