#include "anisofem/solver.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>

using namespace anisofem;

namespace {

SparseMatrix sparse(const Eigen::MatrixXd& dense) { return dense.sparseView(); }

// Plain Gaussian elimination with partial pivoting.
Eigen::VectorXd gauss(Eigen::MatrixXd a, Eigen::VectorXd b) {
    const int n = static_cast<int>(b.size());
    for (int k = 0; k < n; ++k) {
        int p = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(p, k))) p = i;
        a.row(k).swap(a.row(p));
        std::swap(b(k), b(p));
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            a.row(i) -= f * a.row(k);
            b(i) -= f * b(k);
        }
    }
    Eigen::VectorXd x(n);
    for (int i = n - 1; i >= 0; --i) {
        double s = b(i);
        for (int j = i + 1; j < n; ++j) s -= a(i, j) * x(j);
        x(i) = s / a(i, i);
    }
    return x;
}

FeSpace graded_space(int n, const PatternSpec& p) {
    return lagrange_space(build_triangulation(graded_mesh(n), uniform_mesh(0.0, 1.0, std::max(1, n / 4)), p), 1);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("identity system") {
    const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(5, -1.0, 3.0);
    const auto [x, report] = solve_spd(sparse(Eigen::MatrixXd::Identity(5, 5)), b);
    CHECK((x - b).norm() == 0.0);
    CHECK(report.iterations <= 1);
}

TEST_CASE("tridiagonal Laplacian") {
    Eigen::MatrixXd a(3, 3);
    a << 2, -1, 0, -1, 2, -1, 0, -1, 2;
    const auto [x, report] = solve_spd(sparse(a), Eigen::Vector3d(0, 1, 0));
    CHECK(x(0) == doctest::Approx(0.5));
    CHECK(x(1) == doctest::Approx(1.0));
    CHECK(x(2) == doctest::Approx(0.5));
    CHECK(report.residual <= 1e-12);
}

TEST_CASE("random SPD systems against dense elimination") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial * 48 / 19;
        Eigen::MatrixXd B(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) B(i, j) = u(rng);
        const Eigen::MatrixXd A = B.transpose() * B + Eigen::MatrixXd::Identity(n, n);
        Eigen::VectorXd b(n);
        for (int i = 0; i < n; ++i) b(i) = u(rng);
        const Eigen::VectorXd oracle = gauss(A, b);
        const auto [x, report] = solve_spd(sparse(A), b);
        CHECK((x - oracle).norm() <= 1e-9 * oracle.norm());
        CHECK(report.residual <= 1e-12);
    }
}

TEST_CASE("indefinite and mismatched input") {
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 2, 1;
    CHECK_THROWS_AS((void)solve_spd(sparse(a), Eigen::Vector2d(1, 1)), NotSpdError);
    CHECK_THROWS_AS((void)solve_spd(sparse(a), Eigen::Vector3d(1, 1, 1)), std::invalid_argument);
    const auto [x, report] = solve_spd(sparse(Eigen::MatrixXd::Identity(2, 2)), Eigen::Vector2d::Zero());
    CHECK(x.norm() == 0.0);
}

TEST_CASE("assembled systems reach the residual target") {
    const FeSpace space = lagrange_space(
        build_triangulation(bakhvalov_mesh(0x1p-16, 1, 64), uniform_mesh(0.0, 1.0, 16), PatternSpec::c()), 1);
    const SparseSystem s = assemble_system(space, ProblemSpec::reaction_diffusion(0x1p-16), Quadrature::Consistent);
    const auto [x, report] = solve_spd(s);
    CHECK((s.matrix * x - s.rhs).norm() <= 1e-12 * s.rhs.norm());
    CHECK(report.method == "ldlt");
}

TEST_CASE("damped Newton on the graded mesh") {
    for (bool lumped : {false, true}) {
        const int n = 32;
        const FeSpace space = graded_space(n, PatternSpec::a());
        const NewtonResult r = damped_newton(space, 1.0 / (n * n), lumped);
        CHECK(r.report.iterations <= 15);
        for (std::size_t k = 1; k < r.residual_history.size(); ++k)
            CHECK(r.residual_history[k] < r.residual_history[k - 1]);
        CHECK(r.solution.minCoeff() >= -1e-10);
        for (int k = 0; k < space.node_count(); ++k)
            if (space.boundary[k]) CHECK(r.solution(k) == std::sqrt(space.nodes[k][0]));
    }
}

TEST_CASE("damped Newton from the exact interpolant on a tiny grid") {
    const FeSpace space = graded_space(4, PatternSpec::b());
    const NewtonResult r = damped_newton(space, 1.0 / 16, true);
    CHECK(r.report.iterations <= 5);
}

TEST_CASE("damped Newton from a constant guess") {
    const int n = 16;
    NewtonParams params;
    params.initial_guess = InitialGuess::ConstantOne;
    const FeSpace space = graded_space(n, PatternSpec::b());
    const NewtonResult a = damped_newton(space, 1.0 / (n * n), true, params);
    const NewtonResult b = damped_newton(space, 1.0 / (n * n), true);
    CHECK((a.solution - b.solution).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("damped Newton guards") {
    const FeSpace space = graded_space(8, PatternSpec::a());
    CHECK_THROWS_AS((void)damped_newton(space, 0.0, true), std::invalid_argument);
    NewtonParams params;
    params.max_iterations = 1;
    params.initial_guess = InitialGuess::ConstantOne;
    CHECK_THROWS_AS((void)damped_newton(graded_space(32, PatternSpec::a()), 1.0 / 1024, false, params), ConvergenceError);
}

}
