#include "anisofem/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include <cmath>

namespace anisofem {

namespace {

constexpr int kMaxRefinements = 8;

template <class Factorization>
std::pair<Vector, SolveReport> refine(const Factorization& factor, const SparseMatrix& matrix,
                                      const Vector& rhs, double tol, const char* method) {
    SolveReport report;
    report.method = method;
    const double bnorm = rhs.norm();
    if (bnorm == 0.0) return {Vector::Zero(rhs.size()), report};

    Vector x = factor.solve(rhs);
    Vector r = rhs - matrix * x;
    report.iterations = 1;
    report.residual = r.norm() / bnorm;
    while (report.residual > tol && report.iterations <= kMaxRefinements) {
        x += factor.solve(r);
        r = rhs - matrix * x;
        ++report.iterations;
        report.residual = r.norm() / bnorm;
    }
    if (!std::isfinite(report.residual) || report.residual > tol)
        throw ConvergenceError(std::string(method) + ": relative residual " +
                                   std::to_string(report.residual) + " above tolerance",
                               x);
    return {std::move(x), report};
}

std::pair<Vector, SolveReport> solve_general(const SparseMatrix& matrix, const Vector& rhs, double tol) {
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(matrix);
    if (lu.info() != Eigen::Success) throw ConvergenceError("sparse LU: factorization failed");
    return refine(lu, matrix, rhs, tol, "sparse-lu");
}

}  // namespace

std::pair<Vector, SolveReport> solve_spd(const SparseMatrix& matrix, const Vector& rhs, double tol) {
    if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
        throw std::invalid_argument("solve_spd: dimension mismatch");
    if (matrix.rows() == 0) return {Vector(), SolveReport{0, 0.0, "ldlt"}};

    Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
    ldlt.compute(matrix);
    if (ldlt.info() != Eigen::Success) throw NotSpdError("matrix not SPD: factorization breakdown");
    const Vector& d = ldlt.vectorD();
    for (Eigen::Index k = 0; k < d.size(); ++k)
        if (!(d(k) > 0.0)) throw NotSpdError("matrix not SPD: non-positive pivot");
    return refine(ldlt, matrix, rhs, tol, "ldlt");
}

std::pair<Vector, SolveReport> solve_spd(const SparseSystem& system, double tol) {
    return solve_spd(system.matrix, system.rhs, tol);
}

NewtonResult damped_newton(const FeSpace& space, double mu, bool lumped, const NewtonParams& params) {
    if (!(mu > 0.0)) throw std::invalid_argument("damped_newton: mu must be positive");
    const SingularOperator op(space, mu, lumped);
    const auto& free = op.free_nodes();

    Vector U(space.node_count());
    for (int k = 0; k < space.node_count(); ++k) {
        const double exact = std::sqrt(space.nodes[k][0]);
        const bool use_exact = space.boundary[k] || params.initial_guess == InitialGuess::ExactInterpolant;
        U(k) = use_exact ? exact : 1.0;
    }

    NewtonResult result;
    result.report.method = lumped ? "damped-newton/ldlt" : "damped-newton/lu";
    Vector R = op.residual(U);
    double rnorm = R.lpNorm<Eigen::Infinity>();
    result.residual_history.push_back(rnorm);

    for (int it = 1; it <= params.max_iterations; ++it) {
        const SparseMatrix J = op.jacobian(U);
        const Vector delta = lumped ? Vector(-solve_spd(J, R, params.linear_tolerance).first)
                                    : Vector(-solve_general(J, R, params.linear_tolerance).first);
        const double dnorm = delta.lpNorm<Eigen::Infinity>();
        result.report.iterations = it;

        double lambda = 1.0;
        while (true) {
            Vector trial = U;
            for (std::size_t f = 0; f < free.size(); ++f) trial(free[f]) += lambda * delta(f);
            const double step = lambda * dnorm;
            if (step <= params.step_tolerance) {
                // Step below tolerance: residual decrease is no longer resolvable.
                U = std::move(trial);
                result.report.residual = step;
                result.solution = std::move(U);
                return result;
            }
            Vector Rt = op.residual(trial);
            const double tnorm = Rt.lpNorm<Eigen::Infinity>();
            if (tnorm < rnorm) {
                U = std::move(trial);
                R = std::move(Rt);
                rnorm = tnorm;
                result.residual_history.push_back(rnorm);
                result.report.residual = step;
                break;
            }
            lambda *= params.damping_factor;
            if (lambda < params.min_damping)
                throw ConvergenceError("damped_newton: damping underflow at iteration " + std::to_string(it), U);
        }
    }
    throw ConvergenceError("damped_newton: iteration cap reached", U);
}

}  // namespace anisofem
