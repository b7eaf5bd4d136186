#include "anisofem/verify.hpp"

#include "anisofem/analysis.hpp"
#include "anisofem/assembly.hpp"
#include "anisofem/experiment.hpp"
#include "anisofem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <utility>

namespace anisofem {

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[200];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

double rel_diff(double value, double expected) {
    const double scale = std::max(std::abs(expected), 1e-300);
    return std::abs(value - expected) / scale;
}

// Runs `body` and turns exceptions into failed checks.
template <class F>
CheckResult guarded(const std::string& id, F&& body) {
    try {
        return body();
    } catch (const std::exception& e) {
        return {id, false, std::string("exception: ") + e.what()};
    }
}

struct WorstCase {
    double err = 0.0;
    std::string where;
    void update(double e, const std::string& at) {
        if (e > err || where.empty()) {
            err = std::max(err, e);
            where = at;
        }
    }
};

std::string at_node(const StencilRecord& r) {
    return "(i=" + std::to_string(r.i) + ", j=" + std::to_string(r.j) + ")";
}

CheckResult check_c3_lumped(double tol) {
    const std::string id = "stencil.c3_lumped_gamma";
    return guarded(id, [&] {
        const double eps = 0x1p-8, H = 0.125;
        const int n0 = 16;
        const FeSpace space = strip_space(eps, n0, H, PatternSpec::c3(n0), 2);
        const SparseSystem sys =
            assemble_system(space, ProblemSpec::reaction_diffusion(eps), Quadrature::LumpedMass);
        WorstCase worst;
        for (int i = 1; i < space.tri.nx(); ++i) {
            const StencilRecord r = extract_stencil(sys, space, space.tri.vertex(i, 1));
            const double gamma = i == n0 ? 2.0 / 3.0 : 1.0;
            const double ax = eps * eps / (r.h * r.h), ay = eps * eps / (r.H * r.H);
            double e = rel_diff(*r.gamma, gamma);
            e = std::max(e, rel_diff(r.west, -ax));
            e = std::max(e, rel_diff(r.east, -ax));
            e = std::max(e, rel_diff(r.south, -ay));
            e = std::max(e, rel_diff(r.north, -ay));
            e = std::max(e, rel_diff(r.center, 2 * ax + 2 * ay + gamma));
            for (const auto& d : r.diagonals) e = std::max(e, std::abs(d.second) / ax);
            worst.update(e, at_node(r));
        }
        return CheckResult{id, worst.err <= tol,
                           "max rel deviation " + fmt("%.3e", worst.err) + " at " + worst.where};
    });
}

CheckResult check_consistent_edge_terms(double tol) {
    const std::string id = "stencil.consistent_edge_terms";
    return guarded(id, [&] {
        const double eps = 0x1p-8, H = 0.125;
        const int n0 = 16;
        const FeSpace space = strip_space(eps, n0, H, PatternSpec::c3(n0), 2);
        const ProblemSpec problem = ProblemSpec::reaction_diffusion(eps);
        const SparseSystem lumped = assemble_system(space, problem, Quadrature::LumpedMass);
        const SparseSystem consistent = assemble_system(space, problem, Quadrature::Consistent);
        WorstCase worst;
        for (int i = 1; i < space.tri.nx(); ++i) {
            const int v = space.tri.vertex(i, 1);
            const NodePatch patch = node_patch(space.tri, v);
            const double hH = 0.5 * (space.tri.xmesh.nodes[i + 1] - space.tri.xmesh.nodes[i - 1]) * H;
            double e = 0.0;
            for (int w : patch.neighbors) {
                const double diff = (consistent.full_matrix.coeff(w, v) - lumped.full_matrix.coeff(w, v)) / hH;
                e = std::max(e, rel_diff(diff, 1.0 / 12.0));
            }
            const double center = (consistent.full_matrix.coeff(v, v) - lumped.full_matrix.coeff(v, v)) / hH;
            e = std::max(e, rel_diff(center, -static_cast<double>(patch.neighbors.size()) / 12.0));
            // Nothing outside the edge neighbours may change.
            for (SparseMatrix::InnerIterator it(consistent.full_matrix, v); it; ++it) {
                const int w = static_cast<int>(it.row());
                if (w == v || std::binary_search(patch.neighbors.begin(), patch.neighbors.end(), w)) continue;
                e = std::max(e, std::abs(it.value() - lumped.full_matrix.coeff(w, v)) / hH * 12.0);
            }
            worst.update(e, "(i=" + std::to_string(i) + ", j=1)");
        }
        return CheckResult{id, worst.err <= tol,
                           "max rel deviation from +1/12 per edge neighbour " + fmt("%.3e", worst.err) +
                               " at " + worst.where};
    });
}

CheckResult check_pattern_a_five_point(double tol) {
    const std::string id = "stencil.pattern_a_five_point";
    return guarded(id, [&] {
        const double eps = 0x1p-8, H = 0.125;
        const FeSpace space = strip_space(eps, 16, H, PatternSpec::a(), 2);
        const SparseSystem sys =
            assemble_system(space, ProblemSpec::reaction_diffusion(eps), Quadrature::LumpedMass);
        WorstCase worst;
        for (int i = 1; i < space.tri.nx(); ++i) {
            const StencilRecord r = extract_stencil(sys, space, space.tri.vertex(i, 1));
            const double ax = eps * eps / (r.h * r.h), ay = eps * eps / (r.H * r.H);
            double e = rel_diff(*r.gamma, 1.0);
            e = std::max(e, rel_diff(r.west, -ax));
            e = std::max(e, rel_diff(r.east, -ax));
            e = std::max(e, rel_diff(r.south, -ay));
            e = std::max(e, rel_diff(r.north, -ay));
            e = std::max(e, rel_diff(r.center, 2 * ax + 2 * ay + 1.0));
            for (const auto& d : r.diagonals) e = std::max(e, std::abs(d.second) / ax);
            worst.update(e, at_node(r));
        }
        return CheckResult{id, worst.err <= tol, "max rel deviation " + fmt("%.3e", worst.err) + " at " + worst.where};
    });
}

CheckResult check_pattern_b_reduction(double tol) {
    const std::string id = "stencil.pattern_b_reduction";
    return guarded(id, [&] {
        const double eps = 0x1p-8, H = 0.125;
        const FeSpace space = strip_space(eps, 16, H, PatternSpec::b(), 2);
        const SparseSystem sys =
            assemble_system(space, ProblemSpec::reaction_diffusion(eps), Quadrature::Consistent);
        WorstCase worst;
        for (int i = 1; i < space.tri.nx(); ++i) {
            const StencilRecord r = extract_stencil(sys, space, space.tri.vertex(i, 1));
            const ReducedStencil red = reduce_stencil_1d(r, eps * eps);
            const double weight = eps * eps / (r.h * r.h) - 1.0 / 12.0;
            double e = rel_diff(red.x_weight, weight);
            e = std::max(e, rel_diff(-r.east, weight));
            e = std::max(e, rel_diff(red.center_addition, 2.0 / 3.0));
            // Both diagonal neighbours of an apex row vertex sit at x_{i+1}.
            bool right = r.diagonals.size() == 2;
            for (const auto& d : r.diagonals) right = right && d.first[0] == 1;
            if (!right) e = std::max(e, 1.0);
            worst.update(e, at_node(r));
        }
        return CheckResult{id, worst.err <= tol,
                           "max rel deviation from (eps^2/h^2 - 1/12, 2/3) " + fmt("%.3e", worst.err) + " at " +
                               worst.where};
    });
}

CheckResult check_c_signature(const PatternSpec& pattern, double tol) {
    const std::string id = "stencil.c_gamma_two_thirds";
    return guarded(id, [&] {
        const double eps = 0x1p-8;
        const FeSpace space =
            lagrange_space(build_triangulation(uniform_mesh(0.0, 2 * eps, 16), uniform_mesh(0.0, 1.0, 4), pattern), 1);
        const SparseSystem sys =
            assemble_system(space, ProblemSpec::reaction_diffusion(eps), Quadrature::LumpedMass);
        const int split = pattern.kind == PatternKind::C ? c_split_column(space.tri.xmesh) : space.tri.nx() / 2;
        int found = 0, misplaced = 0;
        for (int j = 1; j < space.tri.ny(); ++j)
            for (int i = 1; i < space.tri.nx(); ++i) {
                const StencilRecord r = extract_stencil(sys, space, space.tri.vertex(i, j));
                if (rel_diff(*r.gamma, 2.0 / 3.0) <= tol) {
                    ++found;
                    if (i != split) ++misplaced;
                }
            }
        const bool ok = found > 0 && misplaced == 0;
        return CheckResult{id, ok,
                           std::to_string(found) + " interior vertices with gamma = 2/3, " +
                               std::to_string(misplaced) + " off the split column"};
    });
}

CheckResult check_truncation_b(double tol) {
    const std::string id = "truncation.pattern_b";
    return guarded(id, [&] {
        const TruncationProbe p = truncation_probe(PatternSpec::b(), 0x1p-16, 256);
        const double e = rel_diff(p.coefficient, 1.0 / 6.0);
        return CheckResult{id, e <= tol,
                           fmt("coefficient %.6f (1/6 = %.6f), rel deviation %.3e", p.coefficient, 1.0 / 6.0, e)};
    });
}

CheckResult check_truncation_sign(double tol) {
    const std::string id = "truncation.pattern_b_mirrored_row";
    return guarded(id, [&] {
        const TruncationProbe p = truncation_probe(PatternSpec::b(), 0x1p-16, 256);
        const double e = rel_diff(p.opposite_row, -1.0 / 6.0);
        return CheckResult{id, e <= tol, fmt("mirrored-row coefficient %.6f, rel deviation from -1/6 %.3e",
                                             p.opposite_row, e)};
    });
}

CheckResult check_truncation_a(double bound) {
    const std::string id = "truncation.pattern_a";
    return guarded(id, [&] {
        const TruncationProbe p = truncation_probe(PatternSpec::a(), 0x1p-16, 256);
        return CheckResult{id, std::abs(p.coefficient) < bound,
                           fmt("coefficient %.3e (bound %.3e)", p.coefficient, bound)};
    });
}

ExperimentConfig lemma_config(ProblemKind problem, PatternKind pattern, Quadrature q) {
    ExperimentConfig c;
    c.table = "lemma";
    c.problem = problem;
    c.pattern = pattern;
    c.quadrature = q;
    c.mesh = MeshKind::Uniform;
    c.eps = {0x1p-16};
    c.n = {64, 128, 256, 512};
    return c;
}

CheckResult check_lemma(const std::string& id, const ExperimentConfig& config, double threshold) {
    return guarded(id, [&] {
        std::vector<std::pair<int, double>> data;
        std::ostringstream products;
        for (int n : config.n) {
            const ExperimentRow row = run_cell(config, n, config.eps.front());
            data.push_back({n, row.error});
            products << (data.size() > 1 ? ", " : "") << fmt("%.4f", n * row.error);
        }
        const LowerBoundProbe p = lower_bound_probe(data);
        return CheckResult{id, p.spread() < threshold,
                           "N*error = {" + products.str() + "}, spread " + fmt("%.4f (threshold %.4f)", p.spread(), threshold)};
    });
}

CheckResult check_metric(const std::string& id, const Mesh1D& x, int m, double theta, double eps, double bound) {
    return guarded(id, [&] {
        const TensorTriangulation tri = build_triangulation(x, uniform_mesh(0.0, 1.0, m), PatternSpec::c());
        const HessianMetric metric{theta, exponential_layer_hessian(eps), MetricVariant::AddThetaIdentity};
        const double ratio = metric_edge_ratio(tri, metric);
        return CheckResult{id, ratio <= bound, fmt("edge length ratio %.4f (bound %.1f, theta %.3e)", ratio, bound, theta)};
    });
}

// Independent counts: vertices, distinct edges and triangles from the triangle list.
long brute_force_nodes(const TensorTriangulation& tri, int degree) {
    std::set<std::pair<int, int>> edges;
    for (const auto& t : tri.triangles)
        for (int k = 0; k < 3; ++k) edges.insert(std::minmax(t[k], t[(k + 1) % 3]));
    const long tris = static_cast<long>(tri.triangles.size());
    return tri.vertex_count() + static_cast<long>(degree - 1) * static_cast<long>(edges.size()) +
           (degree == 3 ? tris : 0);
}

std::vector<TensorTriangulation> sample_triangulations() {
    const Mesh1D x = bakhvalov_mesh(0x1p-8, 1, 8);
    const Mesh1D y = uniform_mesh(0.0, 1.0, 4);
    std::vector<TensorTriangulation> out;
    for (const PatternSpec& p : {PatternSpec::a(), PatternSpec::b(), PatternSpec::c(), PatternSpec::c3(3)})
        out.push_back(build_triangulation(x, y, p));
    return out;
}

CheckResult check_node_counts() {
    const std::string id = "invariant.node_counts";
    return guarded(id, [&] {
        int bad = 0, total = 0;
        for (const auto& tri : sample_triangulations())
            for (int r = 1; r <= 3; ++r) {
                const FeSpace space = lagrange_space(tri, r);
                const long closed = expected_node_count(tri.nx(), tri.ny(), r);
                ++total;
                if (space.node_count() != closed || brute_force_nodes(tri, r) != closed) ++bad;
            }
        return CheckResult{id, bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " spaces match (rNx+1)(rNy+1)"};
    });
}

CheckResult check_areas(double tol) {
    const std::string id = "invariant.patch_areas";
    return guarded(id, [&] {
        double worst = 0.0;
        bool counts_ok = true;
        for (const auto& tri : sample_triangulations()) {
            double total = 0.0, patches = 0.0;
            for (std::size_t t = 0; t < tri.triangles.size(); ++t) total += tri.triangle_area(static_cast<int>(t));
            for (int v = 0; v < tri.vertex_count(); ++v) {
                const NodePatch p = node_patch(tri, v);
                patches += p.area;
                const int n = static_cast<int>(p.triangles.size());
                if (!tri.on_boundary(v) && n != 4 && n != 6 && n != 8) counts_ok = false;
            }
            worst = std::max(worst, rel_diff(total, tri.domain_area()));
            worst = std::max(worst, rel_diff(patches, 3.0 * tri.domain_area()));
        }
        return CheckResult{id, counts_ok && worst <= tol,
                           fmt("max rel deviation %.3e", worst) + (counts_ok ? "" : "; interior patch not of 4/6/8 triangles")};
    });
}

CheckResult check_conformity() {
    const std::string id = "invariant.conformity";
    return guarded(id, [&] {
        int bad = 0;
        for (const auto& tri : sample_triangulations()) {
            std::map<std::pair<int, int>, int> uses;
            for (const auto& t : tri.triangles)
                for (int k = 0; k < 3; ++k) ++uses[std::minmax(t[k], t[(k + 1) % 3])];
            for (const auto& [e, n] : uses) {
                const bool boundary = tri.on_boundary(e.first) && tri.on_boundary(e.second) && [&] {
                    const auto a = tri.grid_position(e.first), b = tri.grid_position(e.second);
                    return (a[0] == b[0] && (a[0] == 0 || a[0] == tri.nx())) ||
                           (a[1] == b[1] && (a[1] == 0 || a[1] == tri.ny()));
                }();
                if (n != (boundary ? 1 : 2)) ++bad;
            }
        }
        return CheckResult{id, bad == 0, std::to_string(bad) + " edges with wrong multiplicity"};
    });
}

CheckResult check_lumped_row_sums(double tol) {
    const std::string id = "invariant.lumped_row_sum";
    return guarded(id, [&] {
        double worst = 0.0, trace_err = 0.0;
        for (const auto& tri : sample_triangulations()) {
            const FeSpace space = lagrange_space(tri, 1);
            const P1Operators ops = assemble_p1_operators(space);
            ProblemSpec reaction;
            reaction.a_x = reaction.a_y = 0.0;
            reaction.c = 1.0;
            reaction.exact = [](double, double) { return 0.0; };
            reaction.rhs = reaction.exact;
            const SparseSystem lumped = assemble_system(space, reaction, Quadrature::LumpedMass);
            const Vector ones = Vector::Ones(space.node_count());
            const Vector sums = ops.consistent_mass * ones;
            for (int k = 0; k < space.node_count(); ++k)
                worst = std::max(worst, rel_diff(lumped.full_matrix.coeff(k, k), sums(k)));
            trace_err = std::max(trace_err, rel_diff(sums.sum(), tri.domain_area()));
        }
        return CheckResult{id, worst <= tol && trace_err <= tol,
                           fmt("row-sum rel deviation %.3e, trace rel deviation %.3e", worst, trace_err)};
    });
}

CheckResult check_symmetry(double tol) {
    const std::string id = "invariant.symmetry";
    return guarded(id, [&] {
        double worst = 0.0;
        const Mesh1D x = shishkin_mesh(0x1p-8, 8);
        const Mesh1D y = uniform_mesh(0.0, 1.0, 4);
        for (const PatternSpec& p : {PatternSpec::a(), PatternSpec::b(), PatternSpec::c()})
            for (int r = 1; r <= 3; ++r) {
                const FeSpace space = lagrange_space(build_triangulation(x, y, p), r);
                const SparseSystem s =
                    assemble_system(space, ProblemSpec::reaction_diffusion(0x1p-8), Quadrature::Consistent);
                const SparseMatrix t = s.full_matrix.transpose();
                const SparseMatrix d = s.full_matrix - t;
                double dmax = 0.0, amax = 0.0;
                for (int k = 0; k < d.outerSize(); ++k)
                    for (SparseMatrix::InnerIterator it(d, k); it; ++it) dmax = std::max(dmax, std::abs(it.value()));
                for (int k = 0; k < s.full_matrix.outerSize(); ++k)
                    for (SparseMatrix::InnerIterator it(s.full_matrix, k); it; ++it)
                        amax = std::max(amax, std::abs(it.value()));
                worst = std::max(worst, dmax / amax);
            }
        return CheckResult{id, worst <= tol, fmt("max |A - A^T| / max |A| = %.3e", worst)};
    });
}

CheckResult check_rescaling(double tol) {
    const std::string id = "invariant.rescaling";
    return guarded(id, [&] {
        const double eps = 3e-3;
        const int n = 32;
        Mesh1D x = hessian_uniform_mesh(eps, n);
        Mesh1D xs = x;
        for (double& v : xs.nodes) v /= eps;
        xs.kind = MeshKind::Uniform;
        const Mesh1D y = uniform_mesh(0.0, 1.0, n / 4);
        const PatternSpec c = PatternSpec::c(n / 2);
        const FeSpace lap_space = lagrange_space(build_triangulation(x, y, c), 1);
        const FeSpace ani_space = lagrange_space(build_triangulation(xs, y, c), 1);
        const SparseSystem lap = assemble_system(lap_space, ProblemSpec::laplace(eps), Quadrature::Consistent);
        const SparseSystem ani =
            assemble_system(ani_space, ProblemSpec::anisotropic_diffusion(eps), Quadrature::Consistent);
        // The Laplace system is the anisotropic one divided by eps.
        const SparseMatrix dm = SparseMatrix(eps * lap.matrix) - ani.matrix;
        double mat = 0.0, scale = 0.0;
        for (int k = 0; k < dm.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(dm, k); it; ++it) mat = std::max(mat, std::abs(it.value()));
        for (int k = 0; k < ani.matrix.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(ani.matrix, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
        const double rhs = (eps * lap.rhs - ani.rhs).lpNorm<Eigen::Infinity>() / ani.rhs.lpNorm<Eigen::Infinity>();
        const Vector u_lap = lap.expand(solve_spd(lap).first);
        const Vector u_ani = ani.expand(solve_spd(ani).first);
        const double e_lap = max_nodal_error(lap_space, u_lap, ProblemSpec::laplace(eps).exact);
        const double e_ani = max_nodal_error(ani_space, u_ani, ProblemSpec::anisotropic_diffusion(eps).exact);
        const double err = std::max({mat / scale, rhs, rel_diff(e_lap, e_ani)});
        return CheckResult{id, err <= tol,
                           fmt("matrix %.3e, rhs %.3e, error %.3e (rel)", mat / scale, rhs, rel_diff(e_lap, e_ani))};
    });
}

CheckResult check_jacobian(double tol) {
    const std::string id = "invariant.jacobian_fd";
    return guarded(id, [&] {
        double worst = 0.0;
        for (bool lumped : {false, true}) {
            const int n = 16;
            const FeSpace space =
                lagrange_space(build_triangulation(graded_mesh(n), uniform_mesh(0.0, 1.0, n / 4), PatternSpec::b()), 1);
            const double mu = 1.0 / (n * n);
            const SingularOperator op(space, mu, lumped);
            std::mt19937 rng(7);
            std::uniform_real_distribution<double> jitter(0.9, 1.1), dir(-1.0, 1.0);
            Vector U(space.node_count());
            for (int k = 0; k < space.node_count(); ++k) {
                const double s = std::sqrt(space.nodes[k][0]);
                U(k) = space.boundary[k] ? s : std::max(s, 0.05) * jitter(rng);
            }
            Vector d_free(static_cast<Eigen::Index>(op.free_nodes().size()));
            for (auto& v : d_free) v = dir(rng);
            Vector d = Vector::Zero(space.node_count());
            for (std::size_t k = 0; k < op.free_nodes().size(); ++k) d(op.free_nodes()[k]) = d_free(static_cast<Eigen::Index>(k));
            const double h = 1e-7;
            const Vector fd = (op.residual(U + h * d) - op.residual(U - h * d)) / (2 * h);
            const Vector jd = op.jacobian(U) * d_free;
            worst = std::max(worst, (fd - jd).lpNorm<Eigen::Infinity>() / jd.lpNorm<Eigen::Infinity>());
        }
        return CheckResult{id, worst <= tol, fmt("max rel deviation %.3e (consistent and lumped)", worst)};
    });
}

// Dense Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(a[i][k]) > std::abs(a[p][k])) p = i;
        std::swap(a[k], a[p]);
        std::swap(b[k], b[p]);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double f = a[i][k] / a[k][k];
            for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
            b[i] -= f * b[k];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= a[i][j] * x[j];
        x[i] = s / a[i][i];
    }
    return x;
}

CheckResult check_spd_oracle(double tol) {
    const std::string id = "invariant.spd_oracle";
    return guarded(id, [&] {
        std::mt19937 rng(2024);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int n : {1, 2, 5, 13, 29, 50}) {
            std::vector<std::vector<double>> B(n, std::vector<double>(n)), A(n, std::vector<double>(n, 0.0));
            for (auto& row : B)
                for (auto& v : row) v = u(rng);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    for (int k = 0; k < n; ++k) A[i][j] += B[k][i] * B[k][j];
                    if (i == j) A[i][j] += 1.0;
                }
            std::vector<double> b(n);
            for (auto& v : b) v = u(rng);
            std::vector<Eigen::Triplet<double>> trip;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) trip.emplace_back(i, j, A[i][j]);
            SparseMatrix S(n, n);
            S.setFromTriplets(trip.begin(), trip.end());
            const Vector x = solve_spd(S, Eigen::Map<const Vector>(b.data(), n)).first;
            const std::vector<double> ref = dense_solve(A, b);
            double num = 0.0, den = 0.0;
            for (int i = 0; i < n; ++i) {
                num += (x(i) - ref[i]) * (x(i) - ref[i]);
                den += ref[i] * ref[i];
            }
            worst = std::max(worst, std::sqrt(num / den));
        }
        return CheckResult{id, worst <= tol, fmt("max rel deviation from dense elimination %.3e", worst)};
    });
}

CheckResult check_linear_exactness(double tol) {
    const std::string id = "invariant.linear_exactness";
    return guarded(id, [&] {
        ProblemSpec p;
        p.kind = ProblemKind::Laplace;
        p.exact = [](double x, double y) { return 1.0 + 2.0 * x - 0.5 * y; };
        p.rhs = [](double, double) { return 0.0; };
        double worst = 0.0;
        for (const auto& tri : sample_triangulations()) {
            const FeSpace space = lagrange_space(tri, 1);
            const SparseSystem s = assemble_system(space, p, Quadrature::Consistent);
            worst = std::max(worst, max_nodal_error(space, s.expand(solve_spd(s).first), p.exact));
        }
        return CheckResult{id, worst <= tol, fmt("max nodal error %.3e for a linear exact solution", worst)};
    });
}

}  // namespace

std::vector<CheckResult> verify_stencils(const VerifyOptions& o) {
    const double tol = 1e-12 * o.tolerance_scale;
    return {check_c3_lumped(tol), check_consistent_edge_terms(tol), check_pattern_a_five_point(tol),
            check_pattern_b_reduction(tol), check_c_signature(o.pattern_c.value_or(PatternSpec::c()), tol)};
}

std::vector<CheckResult> verify_truncation(const VerifyOptions& o) {
    return {check_truncation_b(0.02 * o.tolerance_scale), check_truncation_sign(0.02 * o.tolerance_scale),
            check_truncation_a(0.01 * o.tolerance_scale)};
}

std::vector<CheckResult> verify_lemmas(const VerifyOptions& o) {
    if (!o.lemma_probes) return {};
    const double threshold = 1.0 + 0.3 * o.tolerance_scale;
    return {
        check_lemma("lemma.reaction_diffusion_c_lumped",
                    lemma_config(ProblemKind::ReactionDiffusion, PatternKind::C, Quadrature::LumpedMass), threshold),
        check_lemma("lemma.laplace_c_lumped",
                    lemma_config(ProblemKind::Laplace, PatternKind::C, Quadrature::LumpedMass), threshold),
        check_lemma("lemma.reaction_diffusion_b_consistent",
                    lemma_config(ProblemKind::ReactionDiffusion, PatternKind::B, Quadrature::Consistent), threshold),
    };
}

std::vector<CheckResult> verify_metrics(const VerifyOptions&) {
    std::vector<CheckResult> out;
    for (double eps : {0x1p-8, 0x1p-16}) {
        const std::string tag = eps > 1e-3 ? "2^-8" : "2^-16";
        out.push_back(check_metric("metric.uniform_theta_one_eps_" + tag, uniform_mesh(0.0, 2 * eps, 64), 16, 1.0, eps, 10.0));
        out.push_back(check_metric("metric.hessian_uniform_quarter_eps_" + tag, hessian_uniform_mesh(eps, 64), 16, 1.0,
                                   eps, 10.0));
    }
    // M = 16 fixed: y edges have metric length sqrt(theta)/16 against ~1.26/N along x.
    for (int n : {64, 256, 1024}) {
        const double theta = 256.0 / (static_cast<double>(n) * n);
        out.push_back(check_metric("metric.hessian_uniform_m16_n" + std::to_string(n), hessian_uniform_mesh(0x1p-16, n),
                                   16, theta, 0x1p-16, 10.0));
    }
    return out;
}

std::vector<CheckResult> verify_invariants(const VerifyOptions& o) {
    const double s = o.tolerance_scale;
    return {check_node_counts(),          check_areas(1e-13 * s),        check_conformity(),
            check_lumped_row_sums(1e-14 * s), check_symmetry(1e-13 * s),  check_rescaling(1e-12 * s),
            check_jacobian(1e-6 * s),     check_spd_oracle(1e-9 * s),    check_linear_exactness(1e-11 * s)};
}

std::vector<CheckResult> verify_suite(const VerifyOptions& options) {
    std::vector<CheckResult> all;
    for (auto group : {verify_stencils, verify_truncation, verify_lemmas, verify_metrics, verify_invariants}) {
        auto part = group(options);
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

bool all_passed(const std::vector<CheckResult>& results) {
    return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

}  // namespace anisofem
