#include "anisofem/assembly.hpp"

#include "anisofem/lagrange.hpp"
#include "anisofem/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace anisofem {

std::string to_string(Quadrature q) {
    return q == Quadrature::Consistent ? "consistent" : "lumped";
}

Quadrature quadrature_from_string(const std::string& name) {
    if (name == "consistent" || name == "none") return Quadrature::Consistent;
    if (name == "lumped") return Quadrature::LumpedMass;
    throw std::invalid_argument("unknown quadrature: " + name);
}

Vector SparseSystem::expand(const Vector& free_values) const {
    Vector full = dirichlet;
    for (int k = 0; k < free_count(); ++k) full(free_to_global[k]) = free_values(k);
    return full;
}

namespace {

struct AffineMap {
    Point origin;
    double j00, j01, j10, j11;   // columns p1 - p0, p2 - p0
    double det;

    AffineMap(const Point& p0, const Point& p1, const Point& p2)
        : origin(p0),
          j00(p1[0] - p0[0]), j01(p2[0] - p0[0]),
          j10(p1[1] - p0[1]), j11(p2[1] - p0[1]),
          det(j00 * j11 - j01 * j10) {}

    [[nodiscard]] Point map(double s, double t) const {
        return {origin[0] + j00 * s + j01 * t, origin[1] + j10 * s + j11 * t};
    }
    // J^{-T} g
    [[nodiscard]] std::array<double, 2> physical_gradient(const std::array<double, 2>& g) const {
        return {(j11 * g[0] - j10 * g[1]) / det, (-j01 * g[0] + j00 * g[1]) / det};
    }
};

AffineMap element_map(const FeSpace& space, int t) {
    const int* c = space.cell(t);
    return AffineMap(space.nodes[c[0]], space.nodes[c[1]], space.nodes[c[2]]);
}

// Shape values and reference gradients tabulated on a rule.
struct Tabulation {
    std::vector<std::vector<double>> values;                  // [q][i]
    std::vector<std::vector<std::array<double, 2>>> grads;    // [q][i]
};

Tabulation tabulate(const LagrangeTriangle& element, const TriangleRule& rule) {
    Tabulation tab;
    for (const auto& p : rule.points) {
        std::vector<double> v(element.size());
        std::vector<std::array<double, 2>> g(element.size());
        for (int i = 0; i < element.size(); ++i) {
            v[i] = element.value(i, p[0], p[1]);
            g[i] = element.gradient(i, p[0], p[1]);
        }
        tab.values.push_back(std::move(v));
        tab.grads.push_back(std::move(g));
    }
    return tab;
}

SparseMatrix from_triplets(int n, const std::vector<Eigen::Triplet<double>>& triplets) {
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

}  // namespace

Vector interpolate(const FeSpace& space, const ScalarField& field) {
    Vector v(space.node_count());
    for (int k = 0; k < space.node_count(); ++k) v(k) = field(space.nodes[k][0], space.nodes[k][1]);
    return v;
}

SparseSystem eliminate_dirichlet(const FeSpace& space, SparseMatrix full_matrix, Vector full_load,
                                 const ScalarField& exact) {
    SparseSystem sys;
    const int n = space.node_count();
    sys.global_to_free.assign(n, -1);
    sys.dirichlet = Vector::Zero(n);
    for (int k = 0; k < n; ++k) {
        if (space.boundary[k]) {
            sys.dirichlet(k) = exact(space.nodes[k][0], space.nodes[k][1]);
        } else {
            sys.global_to_free[k] = static_cast<int>(sys.free_to_global.size());
            sys.free_to_global.push_back(k);
        }
    }
    const int nf = sys.free_count();
    sys.rhs.resize(nf);
    for (int f = 0; f < nf; ++f) sys.rhs(f) = full_load(sys.free_to_global[f]);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(full_matrix.nonZeros());
    for (int col = 0; col < full_matrix.outerSize(); ++col) {
        const int fc = sys.global_to_free[col];
        for (SparseMatrix::InnerIterator it(full_matrix, col); it; ++it) {
            const int fr = sys.global_to_free[it.row()];
            if (fr < 0) continue;
            if (fc >= 0)
                triplets.emplace_back(fr, fc, it.value());
            else
                sys.rhs(fr) -= it.value() * sys.dirichlet(col);
        }
    }
    sys.matrix = from_triplets(nf, triplets);
    sys.full_matrix = std::move(full_matrix);
    sys.full_load = std::move(full_load);
    return sys;
}

SparseSystem assemble_system(const FeSpace& space, const ProblemSpec& problem, Quadrature quadrature) {
    if (problem.kind == ProblemKind::Singular)
        throw std::invalid_argument("assemble_system: the singular problem is nonlinear");
    if (quadrature == Quadrature::LumpedMass && space.degree != 1)
        throw std::invalid_argument("assemble_system: mass lumping is only defined for r = 1");

    const LagrangeTriangle& element = lagrange_triangle(space.degree);
    const int r = space.degree;
    const int nl = element.size();
    const TriangleRule& matrix_rule = triangle_rule(2 * r);
    const TriangleRule& load_rule = triangle_rule(2 * r + 4);
    const Tabulation mtab = tabulate(element, matrix_rule);
    const Tabulation ltab = tabulate(element, load_rule);
    const bool lumped = quadrature == Quadrature::LumpedMass;

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(space.cell_count()) * nl * nl);
    Vector load = Vector::Zero(space.node_count());
    std::vector<double> ke(nl * nl);
    std::vector<std::array<double, 2>> grad(nl);

    for (int t = 0; t < space.cell_count(); ++t) {
        const int* conn = space.cell(t);
        const AffineMap map = element_map(space, t);
        const double jac = std::abs(map.det);
        std::fill(ke.begin(), ke.end(), 0.0);

        for (std::size_t q = 0; q < matrix_rule.points.size(); ++q) {
            const double w = matrix_rule.weights[q] * jac;
            for (int i = 0; i < nl; ++i) grad[i] = map.physical_gradient(mtab.grads[q][i]);
            for (int i = 0; i < nl; ++i) {
                for (int j = i; j < nl; ++j) {
                    double v = problem.a_x * grad[i][0] * grad[j][0] + problem.a_y * grad[i][1] * grad[j][1];
                    if (!lumped) v += problem.c * mtab.values[q][i] * mtab.values[q][j];
                    ke[i * nl + j] += w * v;
                }
            }
        }
        if (lumped) {
            const double share = jac / 6.0;   // area / 3
            for (int i = 0; i < 3; ++i) {
                ke[i * nl + i] += problem.c * share;
                const Point& p = space.nodes[conn[i]];
                load(conn[i]) += share * problem.rhs(p[0], p[1]);
            }
        } else {
            for (std::size_t q = 0; q < load_rule.points.size(); ++q) {
                const Point x = map.map(load_rule.points[q][0], load_rule.points[q][1]);
                const double fw = load_rule.weights[q] * jac * problem.rhs(x[0], x[1]);
                if (fw == 0.0) continue;
                for (int i = 0; i < nl; ++i) load(conn[i]) += fw * ltab.values[q][i];
            }
        }
        for (int i = 0; i < nl; ++i) {
            triplets.emplace_back(conn[i], conn[i], ke[i * nl + i]);
            for (int j = i + 1; j < nl; ++j) {
                triplets.emplace_back(conn[i], conn[j], ke[i * nl + j]);
                triplets.emplace_back(conn[j], conn[i], ke[i * nl + j]);
            }
        }
    }
    return eliminate_dirichlet(space, from_triplets(space.node_count(), triplets), std::move(load),
                               problem.exact);
}

P1Operators assemble_p1_operators(const FeSpace& space) {
    if (space.degree != 1) throw std::invalid_argument("assemble_p1_operators: requires r = 1");
    const LagrangeTriangle& element = lagrange_triangle(1);
    const TriangleRule& rule = triangle_rule(2);
    const Tabulation tab = tabulate(element, rule);

    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(9 * space.cell_count());
    mt.reserve(9 * space.cell_count());
    P1Operators ops;
    ops.lumped_mass = Vector::Zero(space.node_count());
    std::array<std::array<double, 2>, 3> grad;
    for (int t = 0; t < space.cell_count(); ++t) {
        const int* conn = space.cell(t);
        const AffineMap map = element_map(space, t);
        const double jac = std::abs(map.det);
        double ke[3][3] = {}, me[3][3] = {};
        for (std::size_t q = 0; q < rule.points.size(); ++q) {
            const double w = rule.weights[q] * jac;
            for (int i = 0; i < 3; ++i) grad[i] = map.physical_gradient(tab.grads[q][i]);
            for (int i = 0; i < 3; ++i)
                for (int j = i; j < 3; ++j) {
                    ke[i][j] += w * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
                    me[i][j] += w * tab.values[q][i] * tab.values[q][j];
                }
        }
        for (int i = 0; i < 3; ++i) {
            kt.emplace_back(conn[i], conn[i], ke[i][i]);
            mt.emplace_back(conn[i], conn[i], me[i][i]);
            ops.lumped_mass(conn[i]) += jac / 6.0;
            for (int j = i + 1; j < 3; ++j) {
                kt.emplace_back(conn[i], conn[j], ke[i][j]);
                kt.emplace_back(conn[j], conn[i], ke[i][j]);
                mt.emplace_back(conn[i], conn[j], me[i][j]);
                mt.emplace_back(conn[j], conn[i], me[i][j]);
            }
        }
    }
    ops.stiffness = from_triplets(space.node_count(), kt);
    ops.consistent_mass = from_triplets(space.node_count(), mt);
    return ops;
}

SingularOperator::SingularOperator(const FeSpace& space, double mu, bool lumped)
    : space_(&space), mu_(mu), lumped_(lumped) {
    if (!(mu > 0.0)) throw std::invalid_argument("singular operator: mu must be positive");
    if (space.degree != 1) throw std::invalid_argument("singular operator: requires r = 1");
    ops_ = assemble_p1_operators(space);
    global_to_free_.assign(space.node_count(), -1);
    for (int k = 0; k < space.node_count(); ++k) {
        if (!space.boundary[k]) {
            global_to_free_[k] = static_cast<int>(free_to_global_.size());
            free_to_global_.push_back(k);
        }
    }
}

Vector SingularOperator::residual(const Vector& U) const {
    if (U.size() != space_->node_count())
        throw std::invalid_argument("singular residual: U must hold values at all nodes");
    Vector F(U.size());
    for (Eigen::Index k = 0; k < U.size(); ++k) F(k) = singular_nonlinearity(U(k), mu_);
    Vector full = ops_.stiffness * U;
    if (lumped_)
        full += ops_.lumped_mass.cwiseProduct(F);
    else
        full += ops_.consistent_mass * F;
    Vector out(free_to_global_.size());
    for (std::size_t f = 0; f < free_to_global_.size(); ++f) out(f) = full(free_to_global_[f]);
    return out;
}

SparseMatrix SingularOperator::jacobian(const Vector& U) const {
    const int nf = static_cast<int>(free_to_global_.size());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(ops_.stiffness.nonZeros() + (lumped_ ? nf : ops_.consistent_mass.nonZeros()));
    for (int col = 0; col < ops_.stiffness.outerSize(); ++col) {
        const int fc = global_to_free_[col];
        if (fc < 0) continue;
        for (SparseMatrix::InnerIterator it(ops_.stiffness, col); it; ++it) {
            const int fr = global_to_free_[it.row()];
            if (fr >= 0) triplets.emplace_back(fr, fc, it.value());
        }
        const double dF = singular_nonlinearity_derivative(U(col), mu_);
        if (dF == 0.0) continue;
        if (lumped_) {
            triplets.emplace_back(fc, fc, ops_.lumped_mass(col) * dF);
        } else {
            for (SparseMatrix::InnerIterator it(ops_.consistent_mass, col); it; ++it) {
                const int fr = global_to_free_[it.row()];
                if (fr >= 0) triplets.emplace_back(fr, fc, it.value() * dF);
            }
        }
    }
    return from_triplets(nf, triplets);
}

Vector singular_residual(const FeSpace& space, const Vector& U, double mu, bool lumped) {
    return SingularOperator(space, mu, lumped).residual(U);
}

SparseMatrix singular_jacobian(const FeSpace& space, const Vector& U, double mu, bool lumped) {
    return SingularOperator(space, mu, lumped).jacobian(U);
}

}  // namespace anisofem
