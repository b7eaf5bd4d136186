#include "anisofem/lagrange.hpp"

#include <stdexcept>

namespace anisofem {

namespace {

constexpr std::array<std::array<double, 2>, 3> kBaryGrad = {{{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}}};

std::array<double, 3> barycentric(double s, double t) { return {1.0 - s - t, s, t}; }

// prod_{m < count} (r*l - m) / (m + 1) and its derivative with respect to l.
std::pair<double, double> factor(int r, int count, double l) {
    double value = 1.0;
    double deriv = 0.0;
    for (int m = 0; m < count; ++m) {
        const double f = (r * l - m) / (m + 1);
        const double df = static_cast<double>(r) / (m + 1);
        deriv = deriv * f + value * df;
        value *= f;
    }
    return {value, deriv};
}

}  // namespace

LagrangeTriangle::LagrangeTriangle(int degree) : degree_(degree) {
    if (degree < 1 || degree > 3) throw std::invalid_argument("Lagrange degree must be 1, 2 or 3");
    const int r = degree;
    multi_.push_back({r, 0, 0});
    multi_.push_back({0, r, 0});
    multi_.push_back({0, 0, r});
    constexpr int edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (const auto& e : edges) {
        for (int k = 1; k < r; ++k) {
            std::array<int, 3> a{0, 0, 0};
            a[e[0]] = r - k;
            a[e[1]] = k;
            multi_.push_back(a);
        }
    }
    for (int i = 1; i < r; ++i)
        for (int j = 1; i + j < r; ++j) multi_.push_back({r - i - j, i, j});
}

std::array<double, 2> LagrangeTriangle::node(int local) const {
    const auto& a = multi_[local];
    return {static_cast<double>(a[1]) / degree_, static_cast<double>(a[2]) / degree_};
}

double LagrangeTriangle::value(int local, double s, double t) const {
    const auto l = barycentric(s, t);
    const auto& a = multi_[local];
    double v = 1.0;
    for (int k = 0; k < 3; ++k) v *= factor(degree_, a[k], l[k]).first;
    return v;
}

std::array<double, 2> LagrangeTriangle::gradient(int local, double s, double t) const {
    const auto l = barycentric(s, t);
    const auto& a = multi_[local];
    std::array<std::pair<double, double>, 3> f;
    for (int k = 0; k < 3; ++k) f[k] = factor(degree_, a[k], l[k]);
    std::array<double, 2> g{0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        double others = 1.0;
        for (int m = 0; m < 3; ++m)
            if (m != k) others *= f[m].first;
        g[0] += f[k].second * others * kBaryGrad[k][0];
        g[1] += f[k].second * others * kBaryGrad[k][1];
    }
    return g;
}

const LagrangeTriangle& lagrange_triangle(int degree) {
    static const LagrangeTriangle p1(1), p2(2), p3(3);
    switch (degree) {
        case 1: return p1;
        case 2: return p2;
        case 3: return p3;
        default: throw std::invalid_argument("Lagrange degree must be 1, 2 or 3");
    }
}

}  // namespace anisofem
