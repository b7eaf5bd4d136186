#include "anisofem/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anisofem {

std::string to_string(ProblemKind kind) {
    switch (kind) {
        case ProblemKind::ReactionDiffusion: return "reaction_diffusion";
        case ProblemKind::Laplace: return "laplace";
        case ProblemKind::AnisotropicDiffusion: return "anisotropic_diffusion";
        case ProblemKind::Singular: return "singular";
    }
    return "unknown";
}

ProblemKind problem_kind_from_string(const std::string& name) {
    if (name == "reaction_diffusion") return ProblemKind::ReactionDiffusion;
    if (name == "laplace") return ProblemKind::Laplace;
    if (name == "anisotropic_diffusion") return ProblemKind::AnisotropicDiffusion;
    if (name == "singular") return ProblemKind::Singular;
    throw std::invalid_argument("unknown problem kind: " + name);
}

ProblemSpec ProblemSpec::reaction_diffusion(double eps) {
    ProblemSpec p;
    p.kind = ProblemKind::ReactionDiffusion;
    p.eps = eps;
    p.a_x = p.a_y = eps * eps;
    p.c = 1.0;
    p.exact = [eps](double x, double) { return std::exp(-x / eps); };
    p.rhs = [](double, double) { return 0.0; };
    return p;
}

ProblemSpec ProblemSpec::laplace(double eps) {
    ProblemSpec p;
    p.kind = ProblemKind::Laplace;
    p.eps = eps;
    p.exact = [eps](double x, double) { return std::exp(-x / eps); };
    p.rhs = [eps](double x, double) { return -std::exp(-x / eps) / (eps * eps); };
    return p;
}

ProblemSpec ProblemSpec::anisotropic_diffusion(double eps) {
    ProblemSpec p;
    p.kind = ProblemKind::AnisotropicDiffusion;
    p.eps = eps;
    p.a_y = eps * eps;
    p.exact = [](double x, double) { return std::exp(-x); };
    p.rhs = [](double x, double) { return -std::exp(-x); };
    return p;
}

ProblemSpec ProblemSpec::singular(double mu) {
    if (!(mu > 0.0)) throw std::invalid_argument("singular problem: mu must be positive");
    ProblemSpec p;
    p.kind = ProblemKind::Singular;
    p.mu = mu;
    p.exact = [](double x, double) { return std::sqrt(x); };
    p.rhs = [](double, double) { return 0.0; };
    return p;
}

double singular_nonlinearity(double u, double mu) {
    const double v = std::max(u, mu);
    return -0.25 / (v * v * v);
}

double singular_nonlinearity_derivative(double u, double mu) {
    if (u <= mu) return 0.0;
    const double u2 = u * u;
    return 0.75 / (u2 * u2);
}

}  // namespace anisofem
