#pragma once

#include "anisofem/assembly.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace anisofem {

struct SolveReport {
    int iterations = 0;
    double residual = 0.0;   // final relative residual (linear) or step norm (Newton)
    std::string method;
};

class NotSpdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, Vector last_iterate = {})
        : std::runtime_error(what), last_iterate_(std::move(last_iterate)) {}
    [[nodiscard]] const Vector& last_iterate() const { return last_iterate_; }

private:
    Vector last_iterate_;
};

/// Sparse LDL^T with iterative refinement until ||Ax - b||_2 <= tol ||b||_2.
/// Throws NotSpdError on a non-positive pivot, ConvergenceError when
/// refinement stalls.
[[nodiscard]] std::pair<Vector, SolveReport> solve_spd(const SparseMatrix& matrix, const Vector& rhs,
                                                       double tol = 1e-12);
[[nodiscard]] std::pair<Vector, SolveReport> solve_spd(const SparseSystem& system, double tol = 1e-12);

enum class InitialGuess { ExactInterpolant, ConstantOne };

struct NewtonParams {
    int max_iterations = 100;
    double step_tolerance = 1e-10;
    double damping_factor = 0.5;
    double min_damping = 0x1p-30;
    InitialGuess initial_guess = InitialGuess::ExactInterpolant;
    double linear_tolerance = 1e-12;
};

struct NewtonResult {
    Vector solution;   // all nodes
    SolveReport report;
    std::vector<double> residual_history;   // ||R||_inf after each accepted step, [0] = initial
};

/// Damped Newton for the regularized singular problem on a P1 space.
/// Boundary nodes are fixed at sqrt(x).
[[nodiscard]] NewtonResult damped_newton(const FeSpace& space, double mu, bool lumped,
                                         const NewtonParams& params = {});

}  // namespace anisofem
