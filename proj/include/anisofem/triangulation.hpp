#pragma once

#include "anisofem/mesh1d.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace anisofem {

using Point = std::array<double, 2>;

/// Slash joins a cell's bottom-left and top-right corners; Backslash joins
/// bottom-right and top-left.
enum class Diagonal : unsigned char { Slash, Backslash };

enum class PatternKind { A, B, C, C3, Custom };

/// How diagonals are drawn in each cell of the tensor grid.
///
///  - A: Backslash everywhere.
///  - B: Slash on odd cell rows, Backslash on even cell rows, so every
///    vertex on an odd node row has both diagonal neighbours to its right.
///  - C: cell rows alternate left of the split column k0 (Slash on odd rows)
///    and are flipped from k0 on. A negative k0 means c_split_column(xmesh).
///  - C3(k0): cells in the upper half of the grid are Slash left of column k0
///    and Backslash from k0 on; the lower half is the mirror image. Vertex
///    (k0, Ny/2) then touches no diagonal.
struct PatternSpec {
    PatternKind kind = PatternKind::A;
    int k0 = 0;
    std::function<Diagonal(int i, int j)> custom;

    static PatternSpec a() { return {PatternKind::A, 0, {}}; }
    static PatternSpec b() { return {PatternKind::B, 0, {}}; }
    static PatternSpec c(int split = -1) { return {PatternKind::C, split, {}}; }
    static PatternSpec c3(int k0) { return {PatternKind::C3, k0, {}}; }
    static PatternSpec from(std::function<Diagonal(int, int)> f) {
        return {PatternKind::Custom, 0, std::move(f)};
    }

    [[nodiscard]] Diagonal orientation(int i, int j, int nx, int ny) const;
};

/// Default split column for pattern C: the first node with x >= eps on a
/// Bakhvalov mesh with a layer part, Nx / 2 otherwise.
[[nodiscard]] int c_split_column(const Mesh1D& xmesh);

std::string to_string(PatternKind kind);
PatternSpec pattern_from_string(const std::string& name);

/// Tensor grid with one diagonal per cell. Vertex (i, j) has index
/// j * (Nx + 1) + i; cell (i, j) owns triangles 2c and 2c + 1 with c = j * Nx + i.
struct TensorTriangulation {
    Mesh1D xmesh;
    Mesh1D ymesh;
    PatternKind pattern = PatternKind::A;
    std::vector<Diagonal> orientation;           // per cell, index j * Nx + i
    std::vector<std::array<int, 3>> triangles;   // counter-clockwise vertex triples

    [[nodiscard]] int nx() const { return xmesh.intervals(); }
    [[nodiscard]] int ny() const { return ymesh.intervals(); }
    [[nodiscard]] int vertex_count() const { return (nx() + 1) * (ny() + 1); }
    [[nodiscard]] int vertex(int i, int j) const { return j * (nx() + 1) + i; }
    [[nodiscard]] std::array<int, 2> grid_position(int v) const { return {v % (nx() + 1), v / (nx() + 1)}; }
    [[nodiscard]] Point vertex_point(int v) const;
    [[nodiscard]] Diagonal diagonal(int i, int j) const { return orientation[j * nx() + i]; }
    [[nodiscard]] double triangle_area(int t) const;
    [[nodiscard]] double domain_area() const;
    [[nodiscard]] bool on_boundary(int v) const;
};

[[nodiscard]] TensorTriangulation build_triangulation(const Mesh1D& xmesh, const Mesh1D& ymesh,
                                                      const PatternSpec& pattern);

struct NodePatch {
    int node = 0;
    std::vector<int> triangles;
    double area = 0.0;
    std::vector<int> neighbors;   // sorted vertex indices sharing an edge with node
};

[[nodiscard]] NodePatch node_patch(const TensorTriangulation& tri, int node);

/// Plain-text listing: header "vertices V triangles T", one "x y" per vertex,
/// then one "a b c" per triangle (0-based).
void write_triangulation(std::ostream& out, const TensorTriangulation& tri);

/// Lagrange finite element space of degree r on a tensor triangulation.
///
/// Global numbering: grid vertices first (same indices as the triangulation),
/// then r-1 nodes per edge, then one interior node per triangle for r = 3.
struct FeSpace {
    TensorTriangulation tri;
    int degree = 1;
    std::vector<Point> nodes;
    std::vector<int> cells;          // local_size() entries per triangle
    std::vector<char> boundary;      // 1 if the node lies on the domain boundary

    [[nodiscard]] int local_size() const { return (degree + 1) * (degree + 2) / 2; }
    [[nodiscard]] int node_count() const { return static_cast<int>(nodes.size()); }
    [[nodiscard]] int cell_count() const { return static_cast<int>(tri.triangles.size()); }
    [[nodiscard]] const int* cell(int t) const { return cells.data() + static_cast<std::size_t>(t) * local_size(); }
};

[[nodiscard]] FeSpace lagrange_space(const TensorTriangulation& tri, int degree);

/// Closed-form node count (r Nx + 1)(r Ny + 1).
[[nodiscard]] long expected_node_count(int nx, int ny, int degree);

}  // namespace anisofem
