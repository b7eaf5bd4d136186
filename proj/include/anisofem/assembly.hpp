#pragma once

#include "anisofem/problem.hpp"
#include "anisofem/triangulation.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace anisofem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

enum class Quadrature { Consistent, LumpedMass };

std::string to_string(Quadrature q);
Quadrature quadrature_from_string(const std::string& name);

/// Discretized linear problem after symmetric elimination of Dirichlet nodes.
///
/// `full_matrix`/`full_load` keep the operator over all nodes so that rows
/// touching Dirichlet nodes can still be inspected.
struct SparseSystem {
    SparseMatrix matrix;                 // free x free
    Vector rhs;                          // load minus Dirichlet lift
    std::vector<int> free_to_global;
    std::vector<int> global_to_free;     // -1 at Dirichlet nodes
    Vector dirichlet;                    // prescribed values, zero at free nodes
    SparseMatrix full_matrix;
    Vector full_load;

    [[nodiscard]] int free_count() const { return static_cast<int>(free_to_global.size()); }
    /// Combine free-node values with the Dirichlet data.
    [[nodiscard]] Vector expand(const Vector& free_values) const;
};

/// a_x K_x + a_y K_y + c M over all nodes with consistent (exact) or lumped
/// mass; the load uses a degree 2r+4 rule (consistent) or vertex quadrature
/// (lumped). Throws std::invalid_argument for lumped mass with r > 1 or for
/// the singular problem.
[[nodiscard]] SparseSystem assemble_system(const FeSpace& space, const ProblemSpec& problem,
                                           Quadrature quadrature);

/// Eliminate Dirichlet nodes from a full operator; boundary values come from `exact`.
[[nodiscard]] SparseSystem eliminate_dirichlet(const FeSpace& space, SparseMatrix full_matrix,
                                               Vector full_load, const ScalarField& exact);

/// Nodal interpolant of a field on all Lagrange nodes.
[[nodiscard]] Vector interpolate(const FeSpace& space, const ScalarField& field);

/// Full-size P1 building blocks.
struct P1Operators {
    SparseMatrix stiffness;
    SparseMatrix consistent_mass;
    Vector lumped_mass;   // row sums of consistent_mass
};

[[nodiscard]] P1Operators assemble_p1_operators(const FeSpace& space);

/// Residual and Jacobian of (grad u_h, grad chi) + (f(u_h)^I, chi) = 0 with
/// f(u) = -1/4 max(u, mu)^{-3}, linear elements. Caches the P1 operators so
/// Newton iterations only redo the nonlinear part.
class SingularOperator {
public:
    SingularOperator(const FeSpace& space, double mu, bool lumped);

    [[nodiscard]] const FeSpace& space() const { return *space_; }
    [[nodiscard]] double mu() const { return mu_; }
    [[nodiscard]] bool lumped() const { return lumped_; }
    [[nodiscard]] const std::vector<int>& free_nodes() const { return free_to_global_; }

    /// U holds values at all nodes; returns the residual at free nodes.
    [[nodiscard]] Vector residual(const Vector& U) const;
    /// Derivative of residual() with respect to the free values of U.
    [[nodiscard]] SparseMatrix jacobian(const Vector& U) const;

private:
    const FeSpace* space_;
    double mu_;
    bool lumped_;
    P1Operators ops_;
    std::vector<int> free_to_global_;
    std::vector<int> global_to_free_;
};

[[nodiscard]] Vector singular_residual(const FeSpace& space, const Vector& U, double mu, bool lumped);
[[nodiscard]] SparseMatrix singular_jacobian(const FeSpace& space, const Vector& U, double mu,
                                             bool lumped);

}  // namespace anisofem
