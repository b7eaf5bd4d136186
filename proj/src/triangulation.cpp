#include "anisofem/triangulation.hpp"

#include "anisofem/lagrange.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace anisofem {

Diagonal PatternSpec::orientation(int i, int j, int nx, int ny) const {
    switch (kind) {
        case PatternKind::A: return Diagonal::Backslash;
        case PatternKind::B: return j % 2 == 1 ? Diagonal::Slash : Diagonal::Backslash;
        case PatternKind::C: return ((j % 2 == 1) == (i < (k0 >= 0 ? k0 : nx / 2))) ? Diagonal::Slash : Diagonal::Backslash;
        case PatternKind::C3: {
            const bool upper = j >= ny / 2;
            const bool left = i < k0;
            return (upper == left) ? Diagonal::Slash : Diagonal::Backslash;
        }
        case PatternKind::Custom:
            if (!custom) throw std::invalid_argument("custom pattern without orientation function");
            return custom(i, j);
    }
    return Diagonal::Backslash;
}

int c_split_column(const Mesh1D& xmesh) {
    const int n = xmesh.intervals();
    if (xmesh.kind == MeshKind::Bakhvalov && xmesh.sigma && *xmesh.sigma < 0.75) {
        const double target = xmesh.eps * (1.0 - 1e-12);
        for (int i = 0; i <= n; ++i)
            if (xmesh.nodes[i] >= target) return i;
    }
    return n / 2;
}

std::string to_string(PatternKind kind) {
    switch (kind) {
        case PatternKind::A: return "A";
        case PatternKind::B: return "B";
        case PatternKind::C: return "C";
        case PatternKind::C3: return "C3";
        case PatternKind::Custom: return "custom";
    }
    return "unknown";
}

PatternSpec pattern_from_string(const std::string& name) {
    if (name == "A") return PatternSpec::a();
    if (name == "B") return PatternSpec::b();
    if (name == "C") return PatternSpec::c();
    throw std::invalid_argument("unknown pattern: " + name);
}

Point TensorTriangulation::vertex_point(int v) const {
    const auto [i, j] = grid_position(v);
    return {xmesh.nodes[i], ymesh.nodes[j]};
}

double TensorTriangulation::triangle_area(int t) const {
    const auto& tr = triangles[t];
    const Point a = vertex_point(tr[0]), b = vertex_point(tr[1]), c = vertex_point(tr[2]);
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

double TensorTriangulation::domain_area() const {
    return (xmesh.back() - xmesh.front()) * (ymesh.back() - ymesh.front());
}

bool TensorTriangulation::on_boundary(int v) const {
    const auto [i, j] = grid_position(v);
    return i == 0 || j == 0 || i == nx() || j == ny();
}

TensorTriangulation build_triangulation(const Mesh1D& xmesh, const Mesh1D& ymesh,
                                        const PatternSpec& pattern) {
    if (xmesh.nodes.size() < 2 || ymesh.nodes.size() < 2)
        throw std::invalid_argument("build_triangulation: empty mesh");
    check_monotone(xmesh);
    check_monotone(ymesh);

    TensorTriangulation tri;
    tri.xmesh = xmesh;
    tri.ymesh = ymesh;
    tri.pattern = pattern.kind;
    const int nx = tri.nx();
    const int ny = tri.ny();
    PatternSpec resolved = pattern;
    if (resolved.kind == PatternKind::C && resolved.k0 < 0) resolved.k0 = c_split_column(xmesh);
    tri.orientation.resize(static_cast<std::size_t>(nx) * ny);
    tri.triangles.reserve(2 * tri.orientation.size());
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const Diagonal d = resolved.orientation(i, j, nx, ny);
            tri.orientation[j * nx + i] = d;
            const int bl = tri.vertex(i, j), br = tri.vertex(i + 1, j);
            const int tr = tri.vertex(i + 1, j + 1), tl = tri.vertex(i, j + 1);
            if (d == Diagonal::Slash) {
                tri.triangles.push_back({bl, br, tr});
                tri.triangles.push_back({bl, tr, tl});
            } else {
                tri.triangles.push_back({bl, br, tl});
                tri.triangles.push_back({br, tr, tl});
            }
        }
    }
    return tri;
}

NodePatch node_patch(const TensorTriangulation& tri, int node) {
    if (node < 0 || node >= tri.vertex_count())
        throw std::out_of_range("node_patch: vertex index out of range");
    const auto [i, j] = tri.grid_position(node);
    NodePatch patch;
    patch.node = node;
    for (int cj = j - 1; cj <= j; ++cj) {
        if (cj < 0 || cj >= tri.ny()) continue;
        for (int ci = i - 1; ci <= i; ++ci) {
            if (ci < 0 || ci >= tri.nx()) continue;
            const int c = cj * tri.nx() + ci;
            for (int t : {2 * c, 2 * c + 1}) {
                const auto& v = tri.triangles[t];
                if (std::find(v.begin(), v.end(), node) == v.end()) continue;
                patch.triangles.push_back(t);
                patch.area += tri.triangle_area(t);
                for (int w : v)
                    if (w != node) patch.neighbors.push_back(w);
            }
        }
    }
    std::sort(patch.neighbors.begin(), patch.neighbors.end());
    patch.neighbors.erase(std::unique(patch.neighbors.begin(), patch.neighbors.end()),
                          patch.neighbors.end());
    return patch;
}

void write_triangulation(std::ostream& out, const TensorTriangulation& tri) {
    out << "vertices " << tri.vertex_count() << " triangles " << tri.triangles.size() << '\n';
    out.precision(17);
    for (int v = 0; v < tri.vertex_count(); ++v) {
        const Point p = tri.vertex_point(v);
        out << p[0] << ' ' << p[1] << '\n';
    }
    for (const auto& t : tri.triangles) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

long expected_node_count(int nx, int ny, int degree) {
    return (static_cast<long>(degree) * nx + 1) * (static_cast<long>(degree) * ny + 1);
}

FeSpace lagrange_space(const TensorTriangulation& tri, int degree) {
    const LagrangeTriangle& element = lagrange_triangle(degree);

    FeSpace space;
    space.tri = tri;
    space.degree = degree;
    const int nv = tri.vertex_count();
    space.nodes.reserve(expected_node_count(tri.nx(), tri.ny(), degree));
    for (int v = 0; v < nv; ++v) {
        space.nodes.push_back(tri.vertex_point(v));
        space.boundary.push_back(tri.on_boundary(v) ? 1 : 0);
    }

    auto side_mask = [&](int v) {
        const auto [i, j] = tri.grid_position(v);
        return (i == 0 ? 1 : 0) | (i == tri.nx() ? 2 : 0) | (j == 0 ? 4 : 0) | (j == tri.ny() ? 8 : 0);
    };

    const int per_edge = degree - 1;
    const int local = space.local_size();
    space.cells.resize(tri.triangles.size() * local);
    std::unordered_map<long long, int> edge_base;
    constexpr int edges[3][2] = {{0, 1}, {1, 2}, {2, 0}};

    for (std::size_t t = 0; t < tri.triangles.size(); ++t) {
        const auto& vtx = tri.triangles[t];
        int* conn = space.cells.data() + t * local;
        for (int k = 0; k < 3; ++k) conn[k] = vtx[k];
        int slot = 3;
        for (const auto& e : edges) {
            const int a = vtx[e[0]], b = vtx[e[1]];
            const int lo = std::min(a, b), hi = std::max(a, b);
            const long long key = static_cast<long long>(lo) * nv + hi;
            auto [it, inserted] = edge_base.try_emplace(key, space.node_count());
            if (inserted) {
                const Point p = space.nodes[lo], q = space.nodes[hi];
                const char on_bdry = (side_mask(lo) & side_mask(hi)) != 0 ? 1 : 0;
                for (int k = 1; k <= per_edge; ++k) {
                    const double s = static_cast<double>(k) / degree;
                    space.nodes.push_back({p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])});
                    space.boundary.push_back(on_bdry);
                }
            }
            for (int k = 1; k <= per_edge; ++k) {
                // Local node k counts from vertex a; global nodes count from lo.
                const int offset = (a == lo) ? k - 1 : per_edge - k;
                conn[slot++] = it->second + offset;
            }
        }
        for (; slot < local; ++slot) {
            const auto ref = element.node(slot);
            const Point p0 = space.nodes[vtx[0]], p1 = space.nodes[vtx[1]], p2 = space.nodes[vtx[2]];
            const double l0 = 1.0 - ref[0] - ref[1];
            conn[slot] = space.node_count();
            space.nodes.push_back({l0 * p0[0] + ref[0] * p1[0] + ref[1] * p2[0],
                                   l0 * p0[1] + ref[0] * p1[1] + ref[1] * p2[1]});
            space.boundary.push_back(0);
        }
    }
    return space;
}

}  // namespace anisofem
