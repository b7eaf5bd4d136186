#include "anisofem/mesh1d.hpp"

#include "anisofem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace anisofem {

std::string to_string(MeshKind kind) {
    switch (kind) {
        case MeshKind::Uniform: return "uniform";
        case MeshKind::Bakhvalov: return "bakhvalov";
        case MeshKind::Shishkin: return "shishkin";
        case MeshKind::GradedPower: return "graded";
        case MeshKind::HessianUniform: return "hessian_uniform";
    }
    return "unknown";
}

MeshKind mesh_kind_from_string(const std::string& name) {
    if (name == "uniform") return MeshKind::Uniform;
    if (name == "bakhvalov") return MeshKind::Bakhvalov;
    if (name == "shishkin") return MeshKind::Shishkin;
    if (name == "graded") return MeshKind::GradedPower;
    if (name == "hessian_uniform") return MeshKind::HessianUniform;
    throw std::invalid_argument("unknown mesh kind: " + name);
}

void check_monotone(const Mesh1D& mesh) {
    if (mesh.nodes.size() < 2) throw std::logic_error("mesh has fewer than two nodes");
    for (std::size_t i = 1; i < mesh.nodes.size(); ++i) {
        if (!(mesh.nodes[i] > mesh.nodes[i - 1]))
            throw std::logic_error("mesh nodes not strictly increasing at index " +
                                   std::to_string(i));
    }
}

Mesh1D uniform_mesh(double a, double b, int n) {
    if (n < 1) throw std::invalid_argument("uniform_mesh: N must be positive");
    if (!(a < b)) throw std::invalid_argument("uniform_mesh: require a < b");
    Mesh1D mesh;
    mesh.kind = MeshKind::Uniform;
    mesh.nodes.resize(n + 1);
    for (int i = 0; i <= n; ++i) mesh.nodes[i] = a + (b - a) * i / n;
    mesh.nodes[n] = b;
    return mesh;
}

Mesh1D bakhvalov_mesh(double eps, int degree, int n) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("bakhvalov_mesh: eps in (0,1]");
    if (degree < 1 || degree > 3) throw std::invalid_argument("bakhvalov_mesh: degree in {1,2,3}");
    if (n < 4 || n % 4 != 0) throw std::invalid_argument("bakhvalov_mesh: N must be divisible by 4");

    const double scale = eps * (degree + 1);
    const double sigma = scale * (std::abs(std::log(eps)) + 1.0);
    if (sigma >= 0.75) {
        Mesh1D mesh = uniform_mesh(0.0, 1.0, n);
        mesh.kind = MeshKind::Bakhvalov;
        mesh.eps = eps;
        mesh.degree = degree;
        mesh.sigma = sigma;
        return mesh;
    }

    auto x_of_t = [&](double t) {
        return t <= 1.0 ? scale * t : scale * (1.0 - std::log(2.0 - t));
    };

    Mesh1D mesh;
    mesh.kind = MeshKind::Bakhvalov;
    mesh.eps = eps;
    mesh.degree = degree;
    mesh.sigma = sigma;
    mesh.nodes.resize(n + 1);
    const int n_layer = 3 * n / 4;
    for (int i = 0; i < n_layer; ++i)
        mesh.nodes[i] = x_of_t((2.0 - eps) * i / n_layer);
    mesh.nodes[n_layer] = sigma;
    const int n_outer = n - n_layer;
    for (int k = 1; k < n_outer; ++k)
        mesh.nodes[n_layer + k] = sigma + (1.0 - sigma) * k / n_outer;
    mesh.nodes[n] = 1.0;
    return mesh;
}

Mesh1D shishkin_mesh(double eps, int n) {
    if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("shishkin_mesh: eps in (0,1]");
    if (n < 4 || n % 2 != 0) throw std::invalid_argument("shishkin_mesh: N must be even and >= 4");

    const double sigma = std::min(2.0 * eps * std::log(static_cast<double>(n)), 0.5);
    const int half = n / 2;
    Mesh1D mesh;
    mesh.kind = MeshKind::Shishkin;
    mesh.eps = eps;
    mesh.sigma = sigma;
    mesh.nodes.resize(n + 1);
    for (int i = 0; i < half; ++i) mesh.nodes[i] = sigma * i / half;
    mesh.nodes[half] = sigma;
    for (int k = 1; k < half; ++k) mesh.nodes[half + k] = sigma + (1.0 - sigma) * k / half;
    mesh.nodes[n] = 1.0;
    return mesh;
}

Mesh1D graded_mesh(int n) {
    if (n < 1) throw std::invalid_argument("graded_mesh: N must be positive");
    Mesh1D mesh;
    mesh.kind = MeshKind::GradedPower;
    mesh.nodes.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = static_cast<double>(i) / n;
        mesh.nodes[i] = t * t * t * t;
    }
    mesh.nodes[n] = 1.0;
    return mesh;
}

Mesh1D hessian_uniform_mesh(double eps, int n) {
    if (!(eps > 0.0)) throw std::invalid_argument("hessian_uniform_mesh: eps must be positive");
    if (n < 1) throw std::invalid_argument("hessian_uniform_mesh: N must be positive");
    const double t_end = 1.0 - std::exp(-1.0);
    Mesh1D mesh;
    mesh.kind = MeshKind::HessianUniform;
    mesh.eps = eps;
    mesh.sigma = 2.0 * eps;
    mesh.nodes.resize(n + 1);
    for (int i = 0; i < n; ++i) mesh.nodes[i] = -2.0 * eps * std::log1p(-t_end * i / n);
    mesh.nodes[n] = 2.0 * eps;
    return mesh;
}

std::vector<double> metric_cell_lengths_1d(const Mesh1D& mesh,
                                           const std::function<double(double)>& hessian_abs) {
    const auto& gl = gauss_legendre(5);
    std::vector<double> lengths(mesh.intervals());
    for (int c = 0; c < mesh.intervals(); ++c) {
        const double a = mesh.nodes[c];
        const double half = 0.5 * mesh.width(c);
        double sum = 0.0;
        for (std::size_t q = 0; q < gl.points.size(); ++q) {
            const double x = a + half * (gl.points[q] + 1.0);
            const double value = hessian_abs(x);
            if (value < 0.0 || std::isnan(value))
                throw std::domain_error("metric_cell_lengths_1d: negative Hessian magnitude");
            sum += gl.weights[q] * std::sqrt(value);
        }
        lengths[c] = half * sum;
    }
    return lengths;
}

}  // namespace anisofem
