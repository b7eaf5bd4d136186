#include "anisofem/analysis.hpp"
#include "anisofem/assembly.hpp"
#include "anisofem/solver.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace anisofem;

namespace {

using Dense = Eigen::MatrixXd;

// Element-by-element P1 assembly from barycentric gradients.
void dense_p1(const TensorTriangulation& tri, double a_x, double a_y, Dense& K, Dense& M) {
    const int n = tri.vertex_count();
    K = Dense::Zero(n, n);
    M = Dense::Zero(n, n);
    for (const auto& t : tri.triangles) {
        Point p[3];
        for (int k = 0; k < 3; ++k) p[k] = tri.vertex_point(t[k]);
        const double det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
        const double area = 0.5 * det;
        double gx[3], gy[3];
        for (int k = 0; k < 3; ++k) {
            const Point& b = p[(k + 1) % 3];
            const Point& c = p[(k + 2) % 3];
            gx[k] = (b[1] - c[1]) / det;
            gy[k] = (c[0] - b[0]) / det;
        }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                K(t[a], t[b]) += area * (a_x * gx[a] * gx[b] + a_y * gy[a] * gy[b]);
                M(t[a], t[b]) += area / 12.0 * (a == b ? 2.0 : 1.0);
            }
    }
}

double max_abs(const SparseMatrix& m) {
    double v = 0.0;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it) v = std::max(v, std::abs(it.value()));
    return v;
}

FeSpace graded_space(const PatternSpec& p, int degree = 1) {
    return lagrange_space(build_triangulation(bakhvalov_mesh(0x1p-8, 1, 16), uniform_mesh(0.0, 1.0, 6), p), degree);
}

ProblemSpec polynomial_laplace(std::function<double(double, double)> u, std::function<double(double, double)> f) {
    ProblemSpec p;
    p.kind = ProblemKind::Laplace;
    p.exact = std::move(u);
    p.rhs = std::move(f);
    return p;
}

}  // namespace

TEST_SUITE("assembly") {

TEST_CASE("P1 operators match element-by-element dense assembly") {
    for (const auto& pattern : {PatternSpec::a(), PatternSpec::b(), PatternSpec::c()}) {
        const FeSpace space = graded_space(pattern);
        Dense K, M;
        dense_p1(space.tri, 1.0, 1.0, K, M);
        const P1Operators ops = assemble_p1_operators(space);
        CHECK((Dense(ops.stiffness) - K).cwiseAbs().maxCoeff() <= 1e-12 * K.cwiseAbs().maxCoeff());
        CHECK((Dense(ops.consistent_mass) - M).cwiseAbs().maxCoeff() <= 1e-14 * M.cwiseAbs().maxCoeff());

        const double eps = 0x1p-8;
        const SparseSystem rd = assemble_system(space, ProblemSpec::reaction_diffusion(eps), Quadrature::Consistent);
        const Dense expect = eps * eps * K + M;
        CHECK((Dense(rd.full_matrix) - expect).cwiseAbs().maxCoeff() <= 1e-12 * expect.cwiseAbs().maxCoeff());

        const SparseSystem ani = assemble_system(space, ProblemSpec::anisotropic_diffusion(eps), Quadrature::Consistent);
        Dense Ka, Ma;
        dense_p1(space.tri, 1.0, eps * eps, Ka, Ma);
        CHECK((Dense(ani.full_matrix) - Ka).cwiseAbs().maxCoeff() <= 1e-12 * Ka.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("lumped mass is the row sum of the consistent mass") {
    for (const auto& pattern : {PatternSpec::a(), PatternSpec::b(), PatternSpec::c()}) {
        const FeSpace space = graded_space(pattern);
        const P1Operators ops = assemble_p1_operators(space);
        const Vector rows = ops.consistent_mass * Vector::Ones(space.node_count());
        CHECK((rows - ops.lumped_mass).cwiseAbs().maxCoeff() <= 1e-14 * ops.lumped_mass.cwiseAbs().maxCoeff());
        CHECK(ops.lumped_mass.sum() == doctest::Approx(space.tri.domain_area()).epsilon(1e-14));

        const SparseSystem lumped = assemble_system(space, ProblemSpec::reaction_diffusion(1.0), Quadrature::LumpedMass);
        const SparseMatrix off = SparseMatrix(lumped.full_matrix) - ops.stiffness;
        for (int k = 0; k < off.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(off, k); it; ++it)
                if (it.row() != it.col()) CHECK(std::abs(it.value()) <= 1e-14);
    }
}

TEST_CASE("assembled matrices are symmetric") {
    for (int r = 1; r <= 3; ++r) {
        const FeSpace space = graded_space(PatternSpec::c(), r);
        for (const auto& problem : {ProblemSpec::reaction_diffusion(0x1p-8), ProblemSpec::laplace(0x1p-8)}) {
            const SparseSystem s = assemble_system(space, problem, Quadrature::Consistent);
            const SparseMatrix diff = SparseMatrix(s.matrix.transpose()) - s.matrix;
            CHECK(max_abs(diff) <= 1e-13 * max_abs(s.matrix));
        }
    }
}

TEST_CASE("reaction-diffusion load vanishes") {
    const FeSpace space = graded_space(PatternSpec::b(), 2);
    const SparseSystem s = assemble_system(space, ProblemSpec::reaction_diffusion(0x1p-8), Quadrature::Consistent);
    CHECK(s.full_load.cwiseAbs().maxCoeff() == 0.0);
    // rhs is exactly the negated Dirichlet lift
    const Vector lift = s.full_matrix * s.dirichlet;
    for (int k = 0; k < s.free_count(); ++k) CHECK(s.rhs(k) == doctest::Approx(-lift(s.free_to_global[k])));
}

TEST_CASE("Dirichlet elimination") {
    const FeSpace space = graded_space(PatternSpec::a(), 2);
    const SparseSystem s = assemble_system(space, ProblemSpec::laplace(0x1p-8), Quadrature::Consistent);
    int boundary = 0;
    for (char b : space.boundary) boundary += b;
    CHECK(s.free_count() == space.node_count() - boundary);
    for (int g = 0; g < space.node_count(); ++g) {
        if (space.boundary[g]) {
            CHECK(s.global_to_free[g] == -1);
            CHECK(s.dirichlet(g) == doctest::Approx(std::exp(-space.nodes[g][0] / 0x1p-8)));
        } else {
            CHECK(s.free_to_global[s.global_to_free[g]] == g);
        }
    }
}

TEST_CASE("linear exact solution is reproduced") {
    for (const auto& pattern : {PatternSpec::a(), PatternSpec::b(), PatternSpec::c()})
        for (auto q : {Quadrature::Consistent, Quadrature::LumpedMass}) {
            const FeSpace space = graded_space(pattern);
            const ProblemSpec p = polynomial_laplace([](double x, double y) { return x + 2 * y; },
                                                     [](double, double) { return 0.0; });
            const SparseSystem s = assemble_system(space, p, q);
            const Vector u = s.expand(solve_spd(s).first);
            CHECK(max_nodal_error(space, u, p.exact) <= 1e-11);
        }
}

TEST_CASE("higher-degree elements reproduce polynomials of their degree") {
    const ProblemSpec quad = polynomial_laplace([](double x, double y) { return x * x + x * y - 2 * y * y; },
                                                [](double, double) { return 2.0; });
    const ProblemSpec cubic = polynomial_laplace([](double x, double y) { return x * x * x - 3 * x * y * y + y; },
                                                 [](double, double) { return 0.0; });
    for (const auto& pattern : {PatternSpec::a(), PatternSpec::c()}) {
        const FeSpace p2 = graded_space(pattern, 2);
        const SparseSystem s2 = assemble_system(p2, quad, Quadrature::Consistent);
        CHECK(max_nodal_error(p2, s2.expand(solve_spd(s2).first), quad.exact) <= 1e-10);
        const FeSpace p3 = graded_space(pattern, 3);
        const SparseSystem s3 = assemble_system(p3, cubic, Quadrature::Consistent);
        CHECK(max_nodal_error(p3, s3.expand(solve_spd(s3).first), cubic.exact) <= 1e-10);
    }
}

TEST_CASE("Laplace on the layer equals anisotropic diffusion on the stretched domain") {
    const double eps = 0x1p-10;
    const int n = 32;
    const Mesh1D x = uniform_mesh(0.0, 2 * eps, n);
    const Mesh1D xs = uniform_mesh(0.0, 2.0, n);
    const Mesh1D y = uniform_mesh(0.0, 1.0, n / 4);
    for (const auto& pattern : {PatternSpec::a(), PatternSpec::b(), PatternSpec::c()}) {
        const FeSpace lap_space = lagrange_space(build_triangulation(x, y, pattern), 1);
        const FeSpace ani_space = lagrange_space(build_triangulation(xs, y, pattern), 1);
        const SparseSystem lap = assemble_system(lap_space, ProblemSpec::laplace(eps), Quadrature::Consistent);
        const SparseSystem ani = assemble_system(ani_space, ProblemSpec::anisotropic_diffusion(eps), Quadrature::Consistent);
        CHECK(max_abs(SparseMatrix(eps * lap.matrix - ani.matrix)) <= 1e-12 * max_abs(ani.matrix));
        CHECK((eps * lap.rhs - ani.rhs).lpNorm<Eigen::Infinity>() <= 1e-12 * ani.rhs.lpNorm<Eigen::Infinity>());
    }
}

TEST_CASE("assembly guards") {
    const FeSpace p2 = graded_space(PatternSpec::a(), 2);
    CHECK_THROWS_AS((void)assemble_system(p2, ProblemSpec::laplace(1.0), Quadrature::LumpedMass), std::invalid_argument);
    CHECK_THROWS_AS((void)assemble_system(graded_space(PatternSpec::a()), ProblemSpec::singular(0.01), Quadrature::Consistent),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)quadrature_from_string("gauss"), std::invalid_argument);
    CHECK(quadrature_from_string(to_string(Quadrature::LumpedMass)) == Quadrature::LumpedMass);
}

TEST_CASE("singular nonlinearity") {
    const double mu = 0.01;
    CHECK(singular_nonlinearity(0.5, mu) == doctest::Approx(-0.25 * 8.0));
    CHECK(singular_nonlinearity(0.001, mu) == doctest::Approx(-0.25 / (mu * mu * mu)));
    CHECK(std::isfinite(singular_nonlinearity(-1.0, mu)));
    CHECK(singular_nonlinearity_derivative(0.5, mu) == doctest::Approx(0.75 * 16.0));
    CHECK(singular_nonlinearity_derivative(0.001, mu) == 0.0);
    CHECK_THROWS_AS((void)ProblemSpec::singular(0.0), std::invalid_argument);
}

TEST_CASE("singular Jacobian against central differences") {
    const int n = 16;
    const FeSpace space = lagrange_space(build_triangulation(graded_mesh(n), uniform_mesh(0.0, 1.0, 4), PatternSpec::a()), 1);
    const double mu = 1.0 / (n * n);
    for (bool lumped : {false, true}) {
        const SingularOperator op(space, mu, lumped);
        Vector U(space.node_count());
        for (int k = 0; k < space.node_count(); ++k) {
            const Point p = space.nodes[k];
            U(k) = space.boundary[k] ? std::sqrt(p[0]) : 0.3 + 0.5 * p[0] + 0.1 * std::sin(7 * p[1]);
        }
        const SparseMatrix J = op.jacobian(U);
        const int m = static_cast<int>(op.free_nodes().size());
        for (int probe = 0; probe < 3; ++probe) {
            Vector d = Vector::Zero(space.node_count());
            Vector d_free(m);
            for (int k = 0; k < m; ++k) {
                d_free(k) = std::cos(1.3 * k + probe);
                d(op.free_nodes()[k]) = d_free(k);
            }
            const double h = 1e-7;
            const Vector fd = (op.residual(U + h * d) - op.residual(U - h * d)) / (2 * h);
            const Vector jd = J * d_free;
            CHECK((fd - jd).lpNorm<Eigen::Infinity>() <= 1e-6 * jd.lpNorm<Eigen::Infinity>());
        }
        CHECK((singular_residual(space, U, mu, lumped) - op.residual(U)).norm() == 0.0);
    }
}

TEST_CASE("singular Jacobian structure") {
    const int n = 16;
    const FeSpace space = lagrange_space(build_triangulation(graded_mesh(n), uniform_mesh(0.0, 1.0, 4), PatternSpec::b()), 1);
    const double mu = 1.0 / (n * n);
    const P1Operators ops = assemble_p1_operators(space);
    const SingularOperator op(space, mu, true);
    const auto& free = op.free_nodes();
    auto stiffness_block = [&] {
        Dense k(free.size(), free.size());
        const Dense full(ops.stiffness);
        for (std::size_t a = 0; a < free.size(); ++a)
            for (std::size_t b = 0; b < free.size(); ++b) k(a, b) = full(free[a], free[b]);
        return k;
    }();

    Vector clamped = Vector::Constant(space.node_count(), mu / 2);
    for (bool lumped : {false, true}) {
        const Dense J(singular_jacobian(space, clamped, mu, lumped));
        CHECK((J - stiffness_block).cwiseAbs().maxCoeff() == 0.0);
    }

    Vector U(space.node_count());
    for (int k = 0; k < space.node_count(); ++k) U(k) = std::sqrt(space.nodes[k][0]) + 0.05;
    const Dense reaction = Dense(op.jacobian(U)) - stiffness_block;
    CHECK((reaction - Dense(reaction.diagonal().asDiagonal())).cwiseAbs().maxCoeff() <= 1e-12 * reaction.cwiseAbs().maxCoeff());
    CHECK(reaction.diagonal().minCoeff() >= 0.0);
}

TEST_CASE("singular residual at the interpolant decays like N^-2 away from the singularity") {
    for (bool lumped : {false, true}) {
        double previous = 0.0;
        for (int n : {32, 64, 128}) {
            const FeSpace space =
                lagrange_space(build_triangulation(uniform_mesh(0, 1, n), uniform_mesh(0.0, 1.0, n / 4), PatternSpec::a()), 1);
            const Vector U = interpolate(space, [](double x, double) { return std::sqrt(x); });
            const SingularOperator op(space, 1.0 / (double(n) * n), lumped);
            const Vector r = op.residual(U);
            const Vector m = assemble_p1_operators(space).lumped_mass;
            double scaled = 0.0;
            for (std::size_t k = 0; k < op.free_nodes().size(); ++k) {
                const int g = op.free_nodes()[k];
                if (space.nodes[g][0] >= 0.25) scaled = std::max(scaled, std::abs(r(static_cast<Eigen::Index>(k))) / m(g));
            }
            if (previous > 0.0) CHECK(previous / scaled == doctest::Approx(4.0).epsilon(0.05));
            previous = scaled;
        }
    }
}

}
