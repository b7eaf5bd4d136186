#include "anisofem/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace anisofem {

double max_nodal_error(const FeSpace& space, const Vector& uh, const ScalarField& exact) {
    if (uh.size() != space.node_count())
        throw std::invalid_argument("max_nodal_error: solution size does not match the space");
    double err = 0.0;
    for (int k = 0; k < space.node_count(); ++k)
        err = std::max(err, std::abs(uh(k) - exact(space.nodes[k][0], space.nodes[k][1])));
    return err;
}

std::string to_string(RateKind kind) { return kind == RateKind::Plain ? "plain" : "shishkin_log"; }

double convergence_rate(double e_n, double e_2n, int n, RateKind kind) {
    if (!(e_n > 0.0) || !(e_2n > 0.0)) throw std::invalid_argument("convergence_rate: errors must be positive");
    if (kind == RateKind::Plain) return std::log(e_n / e_2n) / std::log(2.0);
    if (n < 2) throw std::invalid_argument("convergence_rate: Shishkin rate needs N >= 2");
    const double nn = n;
    const double scale_n = std::log(nn) / nn;
    const double scale_2n = std::log(2.0 * nn) / (2.0 * nn);
    return std::log(e_n / e_2n) / std::log(scale_n / scale_2n);
}

StencilRecord extract_stencil(const SparseSystem& system, const FeSpace& space, int node, double reaction) {
    if (space.degree != 1) throw std::invalid_argument("extract_stencil: requires linear elements");
    const auto& tri = space.tri;
    if (node < 0 || node >= tri.vertex_count()) throw std::out_of_range("extract_stencil: bad vertex");
    if (tri.on_boundary(node)) throw std::invalid_argument("extract_stencil: boundary vertex");

    StencilRecord rec;
    rec.node = node;
    const auto [i, j] = tri.grid_position(node);
    rec.i = i;
    rec.j = j;
    rec.h = 0.5 * (tri.xmesh.nodes[i + 1] - tri.xmesh.nodes[i - 1]);
    rec.H = 0.5 * (tri.ymesh.nodes[j + 1] - tri.ymesh.nodes[j - 1]);
    const double scale = 1.0 / (rec.h * rec.H);

    double row_sum = 0.0;
    // The operator is symmetric, so column `node` is the row.
    for (SparseMatrix::InnerIterator it(system.full_matrix, node); it; ++it) {
        const double v = it.value() * scale;
        row_sum += v;
        const auto [ni, nj] = tri.grid_position(static_cast<int>(it.row()));
        const int di = ni - i, dj = nj - j;
        if (di == 0 && dj == 0) rec.center = v;
        else if (di == -1 && dj == 0) rec.west = v;
        else if (di == 1 && dj == 0) rec.east = v;
        else if (di == 0 && dj == -1) rec.south = v;
        else if (di == 0 && dj == 1) rec.north = v;
        else rec.diagonals.push_back({{di, dj}, v});
    }
    std::sort(rec.diagonals.begin(), rec.diagonals.end());
    if (reaction != 0.0) rec.gamma = row_sum / reaction;
    return rec;
}

std::string format_stencil(const StencilRecord& r) {
    std::ostringstream out;
    char buf[160];
    std::snprintf(buf, sizeof buf, "node %d (i=%d, j=%d)  h=%.6e  H=%.6e\n", r.node, r.i, r.j, r.h, r.H);
    out << buf;
    auto line = [&](const char* name, double v) {
        std::snprintf(buf, sizeof buf, "  %-10s %+.12e\n", name, v);
        out << buf;
    };
    line("west", r.west);
    line("east", r.east);
    line("south", r.south);
    line("north", r.north);
    line("center", r.center);
    for (const auto& [off, v] : r.diagonals) {
        std::snprintf(buf, sizeof buf, "  diag(%+d,%+d) %+.12e\n", off[0], off[1], v);
        out << buf;
    }
    if (r.gamma) line("gamma", *r.gamma);
    return out.str();
}

ReducedStencil reduce_stencil_1d(const StencilRecord& record, double a_y) {
    ReducedStencil red;
    red.x_weight = -record.west;
    red.center_addition = record.center - 2.0 * red.x_weight - 2.0 * a_y / (record.H * record.H);
    return red;
}

FeSpace strip_space(double eps, int n0, double H, const PatternSpec& pattern, int cell_rows) {
    if (n0 < 1 || cell_rows < 2 || cell_rows % 2 != 0)
        throw std::invalid_argument("strip_space: need N0 >= 1 and an even number of cell rows");
    const Mesh1D x = uniform_mesh(0.0, 2.0 * eps, 2 * n0);
    const double half = 0.5 * cell_rows * H;
    Mesh1D y = uniform_mesh(-half, half, cell_rows);
    y.nodes[cell_rows / 2] = 0.0;
    return lagrange_space(build_triangulation(x, y, pattern), 1);
}

namespace {

std::vector<double> probe_row(const SparseSystem& sys, const FeSpace& space, const Vector& u, int row,
                              double eps, double* fit) {
    const auto& tri = space.tri;
    const double h = tri.xmesh.width(0);
    const double H = tri.ymesh.width(row - 1);
    const Vector applied = sys.full_matrix * u - sys.full_load;
    std::vector<double> pointwise;
    double num = 0.0, den = 0.0;
    for (int i = 1; i < tri.nx(); ++i) {
        const int v = tri.vertex(i, row);
        const double defect = -applied(v) / (h * H);
        const double g = (h / eps) * std::exp(-tri.xmesh.nodes[i] / eps);
        pointwise.push_back(defect / g);
        num += defect * g;
        den += g * g;
    }
    *fit = num / den;
    return pointwise;
}

}  // namespace

TruncationProbe truncation_probe(const PatternSpec& pattern, double eps, int n0) {
    const ProblemSpec problem = ProblemSpec::reaction_diffusion(eps);
    TruncationProbe probe;
    {
        const FeSpace space = strip_space(eps, n0, 1.0, pattern, 2);
        const SparseSystem sys = assemble_system(space, problem, Quadrature::Consistent);
        probe.pointwise = probe_row(sys, space, interpolate(space, problem.exact), 1, eps, &probe.coefficient);
    }
    {
        // Node row 2 of a four-row strip has its diagonal neighbours on the left for B.
        const FeSpace space = strip_space(eps, n0, 1.0, pattern, 4);
        const SparseSystem sys = assemble_system(space, problem, Quadrature::Consistent);
        (void)probe_row(sys, space, interpolate(space, problem.exact), 2, eps, &probe.opposite_row);
    }
    return probe;
}

LowerBoundProbe lower_bound_probe(const std::vector<std::pair<int, double>>& n_and_error) {
    if (n_and_error.size() < 2) throw std::invalid_argument("lower_bound_probe: need at least two rows");
    LowerBoundProbe p;
    p.min = std::numeric_limits<double>::infinity();
    p.max = 0.0;
    for (const auto& [n, e] : n_and_error) {
        if (!(e > 0.0)) throw std::invalid_argument("lower_bound_probe: errors must be positive");
        const double scaled = n * e;
        p.min = std::min(p.min, scaled);
        p.max = std::max(p.max, scaled);
    }
    return p;
}

Sym2 HessianMetric::tensor(double x, double y) const {
    const Sym2 hs = hessian(x, y);
    const double a = hs[0], b = hs[1], c = hs[2];
    const double mean = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), b);
    const double l1 = mean + rad, l2 = mean - rad;
    // Unit eigenvector for l1.
    double vx = 1.0, vy = 0.0;
    if (rad > 0.0) {
        if (std::abs(a - l2) >= std::abs(c - l2)) {
            vx = a - l2;
            vy = b;
        } else {
            vx = b;
            vy = c - l2;
        }
        const double n = std::hypot(vx, vy);
        vx /= n;
        vy /= n;
    }
    double m1 = std::abs(l1), m2 = std::abs(l2);
    if (variant == MetricVariant::AddThetaIdentity) {
        m1 += theta;
        m2 += theta;
    } else {
        m1 = std::max(m1, theta);
        m2 = std::max(m2, theta);
    }
    // m1 v v^T + m2 w w^T with w perpendicular to v.
    return {m1 * vx * vx + m2 * vy * vy, (m1 - m2) * vx * vy, m1 * vy * vy + m2 * vx * vx};
}

std::function<Sym2(double, double)> exponential_layer_hessian(double eps) {
    return [eps](double x, double) -> Sym2 { return {std::exp(-x / eps) / (eps * eps), 0.0, 0.0}; };
}

double metric_edge_ratio(const TensorTriangulation& tri, const HessianMetric& metric) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    auto visit = [&](int a, int b) {
        const Point p = tri.vertex_point(a), q = tri.vertex_point(b);
        const double ex = q[0] - p[0], ey = q[1] - p[1];
        const Sym2 m = metric.tensor(0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]));
        if (!(m[0] > 0.0) || !(m[0] * m[2] - m[1] * m[1] > 0.0))
            throw std::domain_error("metric_edge_ratio: metric not positive definite");
        const double len = std::sqrt(m[0] * ex * ex + 2.0 * m[1] * ex * ey + m[2] * ey * ey);
        lo = std::min(lo, len);
        hi = std::max(hi, len);
    };
    // Each triangle edge once: grid edges plus one diagonal per cell.
    for (int j = 0; j <= tri.ny(); ++j)
        for (int i = 0; i < tri.nx(); ++i) visit(tri.vertex(i, j), tri.vertex(i + 1, j));
    for (int j = 0; j < tri.ny(); ++j)
        for (int i = 0; i <= tri.nx(); ++i) visit(tri.vertex(i, j), tri.vertex(i, j + 1));
    for (int j = 0; j < tri.ny(); ++j)
        for (int i = 0; i < tri.nx(); ++i) {
            if (tri.diagonal(i, j) == Diagonal::Slash)
                visit(tri.vertex(i, j), tri.vertex(i + 1, j + 1));
            else
                visit(tri.vertex(i + 1, j), tri.vertex(i, j + 1));
        }
    return hi / lo;
}

}  // namespace anisofem
