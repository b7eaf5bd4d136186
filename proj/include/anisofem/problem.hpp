#pragma once

#include <functional>
#include <string>

namespace anisofem {

enum class ProblemKind { ReactionDiffusion, Laplace, AnisotropicDiffusion, Singular };

std::string to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(const std::string& name);

using ScalarField = std::function<double(double x, double y)>;

/// -a_x u_xx - a_y u_yy + c u = f with Dirichlet data taken from `exact`.
/// For the singular problem the reaction term is the nonlinearity
/// -1/4 max(u, mu)^{-3} instead of c u.
struct ProblemSpec {
    ProblemKind kind = ProblemKind::ReactionDiffusion;
    double eps = 1.0;
    double mu = 0.0;
    double a_x = 1.0;
    double a_y = 1.0;
    double c = 0.0;
    ScalarField exact;
    ScalarField rhs;

    /// -eps^2 Lap u + u = 0, u = exp(-x/eps).
    static ProblemSpec reaction_diffusion(double eps);
    /// -Lap u = f, u = exp(-x/eps), f = -eps^{-2} exp(-x/eps).
    static ProblemSpec laplace(double eps);
    /// -u_xx - eps^2 u_yy = f, u = exp(-x), f = -exp(-x).
    static ProblemSpec anisotropic_diffusion(double eps);
    /// -Lap u - 1/4 max(u, mu)^{-3} = 0, u = sqrt(x).
    static ProblemSpec singular(double mu);
};

/// Regularized nonlinearity -1/4 max(u, mu)^{-3} and its derivative
/// (3/4 u^{-4} above mu, zero in the clamped range).
[[nodiscard]] double singular_nonlinearity(double u, double mu);
[[nodiscard]] double singular_nonlinearity_derivative(double u, double mu);

}  // namespace anisofem
