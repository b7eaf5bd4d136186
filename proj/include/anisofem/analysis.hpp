#pragma once

#include "anisofem/assembly.hpp"
#include "anisofem/triangulation.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace anisofem {

/// max over all Lagrange nodes of |uh - exact|.
[[nodiscard]] double max_nodal_error(const FeSpace& space, const Vector& uh, const ScalarField& exact);

enum class RateKind { Plain, ShishkinLog };

std::string to_string(RateKind kind);

/// Plain: log2(eN / e2N). ShishkinLog: rate p in (N^{-1} ln N)^p.
[[nodiscard]] double convergence_rate(double e_n, double e_2n, int n, RateKind kind);

/// One matrix row at a grid vertex, divided by h H and mapped to compass
/// positions. Diagonal entries are grid offsets (di, dj) with |di| = |dj| = 1.
struct StencilRecord {
    int node = 0;
    int i = 0;
    int j = 0;
    double h = 0.0;
    double H = 0.0;
    double west = 0.0;
    double east = 0.0;
    double south = 0.0;
    double north = 0.0;
    double center = 0.0;
    std::vector<std::pair<std::array<int, 2>, double>> diagonals;
    /// Normalized row sum over the reaction coefficient: the weight of U_i in
    /// the lumped-mass form of the scheme. Absent when the reaction is zero.
    std::optional<double> gamma;
};

/// Reads the row of `node` from the full operator. `reaction` is the
/// coefficient c of the zero-order term (1 for -eps^2 Lap u + u = 0).
/// Throws std::invalid_argument for boundary vertices or r != 1.
[[nodiscard]] StencilRecord extract_stencil(const SparseSystem& system, const FeSpace& space, int node,
                                            double reaction = 1.0);

/// Aligned plain-text rendering, stable for golden-file comparison.
[[nodiscard]] std::string format_stencil(const StencilRecord& record);

/// One-dimensional form of a strip row when the error vanishes on the
/// neighbouring node rows: weight on e_{i-1}, e_{i+1} and the extra center
/// term beyond 2 x_weight + 2 a_y / H^2.
struct ReducedStencil {
    double x_weight = 0.0;
    double center_addition = 0.0;
};

[[nodiscard]] ReducedStencil reduce_stencil_1d(const StencilRecord& record, double a_y);

/// Grid built on (0, 2 eps) x (-H, H): 2 N0 uniform x-intervals and two
/// y-intervals. With `pattern` C3 the defect vertex sits at column N0.
[[nodiscard]] FeSpace strip_space(double eps, int n0, double H, const PatternSpec& pattern, int cell_rows = 2);

struct TruncationProbe {
    double coefficient = 0.0;         // least-squares fit on the probed row
    double opposite_row = 0.0;        // same fit on a row with the diagonals mirrored
    std::vector<double> pointwise;    // per interior node of the probed row
};

/// Applies the consistent-mass P1 operator of -eps^2 Lap u + u = 0 to the
/// interpolant of exp(-x/eps) on a uniform strip with h = eps/N0 and fits
/// -(L^h u^I)(x_i, 0) = coefficient * (h/eps) exp(-x_i/eps).
[[nodiscard]] TruncationProbe truncation_probe(const PatternSpec& pattern, double eps, int n0);

struct LowerBoundProbe {
    double min = 0.0;
    double max = 0.0;
    [[nodiscard]] double spread() const { return max / min; }
    [[nodiscard]] bool first_order(double threshold = 1.3) const { return spread() < threshold; }
};

/// Spread of N * error over a family of (N, error) pairs.
[[nodiscard]] LowerBoundProbe lower_bound_probe(const std::vector<std::pair<int, double>>& n_and_error);

using Sym2 = std::array<double, 3>;   // (xx, xy, yy)

enum class MetricVariant { AddThetaIdentity, ClampEigenvalues };

struct HessianMetric {
    double theta = 1.0;
    std::function<Sym2(double x, double y)> hessian;
    MetricVariant variant = MetricVariant::AddThetaIdentity;

    /// Metric tensor built from |eigenvalues| of the Hessian.
    [[nodiscard]] Sym2 tensor(double x, double y) const;
};

/// Hessian of exp(-x/eps).
[[nodiscard]] std::function<Sym2(double, double)> exponential_layer_hessian(double eps);

/// max/min over all triangle edges of sqrt(e^T M(midpoint) e).
[[nodiscard]] double metric_edge_ratio(const TensorTriangulation& tri, const HessianMetric& metric);

}  // namespace anisofem
