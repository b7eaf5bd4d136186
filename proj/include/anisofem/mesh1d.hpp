#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace anisofem {

enum class MeshKind { Uniform, Bakhvalov, Shishkin, GradedPower, HessianUniform };

std::string to_string(MeshKind kind);
MeshKind mesh_kind_from_string(const std::string& name);

/// Strictly increasing 1D node vector plus the parameters it was generated from.
struct Mesh1D {
    std::vector<double> nodes;
    MeshKind kind = MeshKind::Uniform;
    double eps = 1.0;
    int degree = 1;
    /// Transition coordinate; empty for Uniform and GradedPower meshes.
    std::optional<double> sigma;

    [[nodiscard]] int intervals() const { return static_cast<int>(nodes.size()) - 1; }
    [[nodiscard]] double front() const { return nodes.front(); }
    [[nodiscard]] double back() const { return nodes.back(); }
    [[nodiscard]] double width(int cell) const { return nodes[cell + 1] - nodes[cell]; }
};

[[nodiscard]] Mesh1D uniform_mesh(double a, double b, int n);

/// Layer-adapted mesh on [0,1]: linear then logarithmic grading on [0,sigma]
/// with sigma = eps (r+1)(|ln eps| + 1), uniform on [sigma,1] with N/4 intervals.
/// Falls back to a uniform mesh when sigma >= 3/4.
[[nodiscard]] Mesh1D bakhvalov_mesh(double eps, int degree, int n);

/// Piecewise-uniform mesh on [0,1], N/2 intervals on each side of
/// sigma = min(2 eps ln N, 1/2).
[[nodiscard]] Mesh1D shishkin_mesh(double eps, int n);

/// x_i = (i/N)^4 on [0,1].
[[nodiscard]] Mesh1D graded_mesh(int n);

/// x_i = -2 eps ln(1 - (1 - e^{-1}) i/N) on [0, 2 eps]; equidistributes
/// |u''|^{1/2} for u = exp(-x/eps).
[[nodiscard]] Mesh1D hessian_uniform_mesh(double eps, int n);

/// Per-cell integral of hessian_abs(x)^{1/2}, 5-point Gauss per cell.
[[nodiscard]] std::vector<double> metric_cell_lengths_1d(
    const Mesh1D& mesh, const std::function<double(double)>& hessian_abs);

/// Throws std::logic_error if the mesh is not strictly increasing.
void check_monotone(const Mesh1D& mesh);

}  // namespace anisofem
