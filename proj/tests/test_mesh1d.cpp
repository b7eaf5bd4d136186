#include "anisofem/mesh1d.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace anisofem;

namespace {
constexpr double kEps8 = 0x1p-8;
}

TEST_SUITE("mesh1d") {

TEST_CASE("uniform mesh") {
    const Mesh1D m = uniform_mesh(0.0, 1.0, 4);
    REQUIRE(m.nodes.size() == 5);
    for (int i = 0; i <= 4; ++i) CHECK(m.nodes[i] == doctest::Approx(0.25 * i));

    const Mesh1D layer = uniform_mesh(0.0, 2 * kEps8, 64);
    CHECK(layer.width(0) == doctest::Approx(0x1p-13).epsilon(1e-14));
    CHECK(layer.back() == 2 * kEps8);

    CHECK_THROWS_AS((void)uniform_mesh(0.0, 0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS((void)uniform_mesh(0.0, 1.0, 0), std::invalid_argument);
}

TEST_CASE("bakhvalov mesh falls back to uniform for large eps") {
    const Mesh1D m = bakhvalov_mesh(1.0, 1, 32);
    REQUIRE(m.intervals() == 32);
    REQUIRE(m.sigma);
    CHECK(*m.sigma == doctest::Approx(2.0));
    for (int i = 0; i <= 32; ++i) CHECK(m.nodes[i] == doctest::Approx(i / 32.0));
}

TEST_CASE("bakhvalov mesh layer part") {
    const int n = 64;
    const Mesh1D m = bakhvalov_mesh(kEps8, 1, n);
    check_monotone(m);
    CHECK(m.nodes[48] == doctest::Approx(0x1p-7 * (8 * std::log(2.0) + 1)).epsilon(1e-14));
    CHECK(m.nodes[48] == doctest::Approx(5.1134e-2).epsilon(1e-4));
    // linear branch x(t) = 2 eps t with t_i = (2 - eps) i / (3N/4)
    for (int i = 1; i <= 16; ++i) {
        const double t = (2 - kEps8) * i / 48.0;
        if (t > 1.0) break;
        CHECK(m.nodes[i] == doctest::Approx(2 * kEps8 * t).epsilon(1e-14));
    }
    CHECK(m.nodes[1] == doctest::Approx(3.2487e-4).epsilon(1e-4));
    // logarithmic branch reaches sigma continuously
    const double t47 = (2 - kEps8) * 47 / 48.0;
    CHECK(m.nodes[47] == doctest::Approx(2 * kEps8 * (1 - std::log(2 - t47))).epsilon(1e-14));
    CHECK(m.nodes[48] - m.nodes[47] < 4 * (m.nodes[47] - m.nodes[46]));
    // uniform outer part with N/4 intervals
    for (int k = 49; k <= n; ++k) CHECK(m.width(k - 1) == doctest::Approx(m.width(48)).epsilon(1e-12));
    CHECK(m.back() == 1.0);

    CHECK_THROWS_AS((void)bakhvalov_mesh(kEps8, 1, 30), std::invalid_argument);
    CHECK_THROWS_AS((void)bakhvalov_mesh(kEps8, 4, 32), std::invalid_argument);
}

TEST_CASE("shishkin mesh") {
    const Mesh1D wide = shishkin_mesh(1.0, 64);
    for (int i = 0; i <= 64; ++i) CHECK(wide.nodes[i] == doctest::Approx(i / 64.0));

    const Mesh1D m = shishkin_mesh(kEps8, 64);
    REQUIRE(m.sigma);
    CHECK(*m.sigma == doctest::Approx(3.24913e-2).epsilon(1e-5));
    CHECK(m.nodes[32] == *m.sigma);

    const Mesh1D fine = shishkin_mesh(0x1p-16, 64);
    CHECK(fine.width(0) == doctest::Approx(3.966e-6).epsilon(1e-3));

    CHECK_THROWS_AS((void)shishkin_mesh(kEps8, 63), std::invalid_argument);
}

TEST_CASE("shishkin refinement doubles both halves") {
    const double eps = 0x1p-16;
    for (int n : {16, 64, 256}) {
        const Mesh1D a = shishkin_mesh(eps, n), b = shishkin_mesh(eps, 2 * n);
        CHECK(*b.sigma / *a.sigma == doctest::Approx(std::log(2.0 * n) / std::log(1.0 * n)));
        CHECK(b.nodes[n] == *b.sigma);
        CHECK(b.intervals() == 2 * a.intervals());
    }
}

TEST_CASE("graded mesh") {
    const Mesh1D m = graded_mesh(4);
    CHECK(m.nodes[2] == doctest::Approx(0.0625));
    CHECK(m.nodes[4] == 1.0);
    CHECK(graded_mesh(64).nodes[1] == doctest::Approx(5.9605e-8).epsilon(1e-4));
}

TEST_CASE("hessian-uniform mesh") {
    const Mesh1D m = hessian_uniform_mesh(kEps8, 64);
    CHECK(m.nodes[0] == 0.0);
    CHECK(m.nodes[64] == 2 * kEps8);
    CHECK(m.nodes[32] == doctest::Approx(2.9677e-3).epsilon(1e-4));
    check_monotone(m);
}

TEST_CASE("metric cell lengths") {
    const Mesh1D u = uniform_mesh(0.0, 1.0, 8);
    for (double l : metric_cell_lengths_1d(u, [](double) { return 1.0; })) CHECK(l == doctest::Approx(0.125));

    const double eps = kEps8;
    auto hess = [eps](double x) { return std::exp(-x / eps) / (eps * eps); };

    const auto hu = metric_cell_lengths_1d(hessian_uniform_mesh(eps, 64), hess);
    const auto [lo, hi] = std::minmax_element(hu.begin(), hu.end());
    CHECK(*hi / *lo <= 1.0 + 1e-3);

    const Mesh1D b = bakhvalov_mesh(eps, 1, 64);
    auto lengths = metric_cell_lengths_1d(b, hess);
    lengths.resize(48);
    const auto [blo, bhi] = std::minmax_element(lengths.begin(), lengths.end());
    CHECK(*bhi / *blo <= std::exp(1.0) + 0.05);

    CHECK_THROWS_AS((void)metric_cell_lengths_1d(u, [](double) { return -1.0; }), std::domain_error);
}

TEST_CASE("monotonicity guard") {
    Mesh1D m = uniform_mesh(0.0, 1.0, 4);
    m.nodes[2] = m.nodes[1];
    CHECK_THROWS_AS(check_monotone(m), std::logic_error);
}

}
