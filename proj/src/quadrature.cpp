#include "anisofem/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace anisofem {

namespace {

QuadratureRule1D build_gauss_legendre(int n) {
    // Jacobi matrix of the Legendre recurrence; nodes are its eigenvalues,
    // weights 2 * (first eigenvector component)^2.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    QuadratureRule1D rule;
    rule.points.resize(n);
    rule.weights.resize(n);
    for (int k = 0; k < n; ++k) {
        rule.points[k] = eig.eigenvalues()(k);
        const double v = eig.eigenvectors()(0, k);
        rule.weights[k] = 2.0 * v * v;
    }
    // Symmetrize to clean up eigen-solver noise.
    for (int k = 0; k < n / 2; ++k) {
        const double p = 0.5 * (rule.points[n - 1 - k] - rule.points[k]);
        const double w = 0.5 * (rule.weights[k] + rule.weights[n - 1 - k]);
        rule.points[k] = -p;
        rule.points[n - 1 - k] = p;
        rule.weights[k] = w;
        rule.weights[n - 1 - k] = w;
    }
    if (n % 2 == 1) rule.points[n / 2] = 0.0;
    return rule;
}

TriangleRule build_triangle_rule(int degree) {
    // Map (a,b) in [0,1]^2 to s = a, t = b (1 - a); Jacobian (1 - a).
    // The collapsed integrand has degree <= degree + 1 in a.
    const int n = std::max(1, (degree + 2 + 1) / 2);
    const auto& gl = gauss_legendre(n);
    TriangleRule rule;
    for (int i = 0; i < n; ++i) {
        const double a = 0.5 * (gl.points[i] + 1.0);
        for (int j = 0; j < n; ++j) {
            const double b = 0.5 * (gl.points[j] + 1.0);
            rule.points.push_back({a, b * (1.0 - a)});
            rule.weights.push_back(0.25 * gl.weights[i] * gl.weights[j] * (1.0 - a));
        }
    }
    return rule;
}

std::mutex cache_mutex;

}  // namespace

const QuadratureRule1D& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::map<int, QuadratureRule1D> cache;
    std::lock_guard lock(cache_mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gauss_legendre(n)).first;
    return it->second;
}

const TriangleRule& triangle_rule(int degree) {
    if (degree < 0) throw std::invalid_argument("triangle_rule: negative degree");
    static std::map<int, TriangleRule> cache;
    {
        std::lock_guard lock(cache_mutex);
        auto it = cache.find(degree);
        if (it != cache.end()) return it->second;
    }
    TriangleRule rule = build_triangle_rule(degree);
    std::lock_guard lock(cache_mutex);
    return cache.emplace(degree, std::move(rule)).first->second;
}

}  // namespace anisofem
