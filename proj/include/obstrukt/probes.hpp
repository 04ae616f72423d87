#pragma once

#include "obstrukt/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace obstrukt {

// A face is four vertex indices in orientation order. A triangle is stored
// with its last vertex repeated (a, b, c, c); the repeated corner contributes a
// factor P_c^2 = P_c to the plaquette trace, so triangles need no special path.
using Face = std::array<std::uint32_t, 4>;

inline bool is_triangle(const Face& f) { return f[2] == f[3]; }

struct QuadCycleMesh {
    std::vector<CovectorPoint> vertices;
    std::vector<Face> quads;
    int resolution = 0;
    std::string label;

    // Every directed edge (a,b), a != b, is matched by exactly one (b,a).
    bool is_closed() const;
    // Directed edges that have no reversed partner, in face order.
    std::vector<std::array<std::uint32_t, 2>> boundary_edges() const;
    std::size_t edge_count() const; // undirected, degenerate edges excluded
    long euler_characteristic() const { return static_cast<long>(vertices.size()) - static_cast<long>(edge_count()) + static_cast<long>(quads.size()); }
    QuadCycleMesh reversed() const;
};

struct LoopPath {
    std::vector<CovectorPoint> vertices; // implicitly closed
    std::string label;

    LoopPath reversed() const;
    // Consecutive vertices distinct, chord spacing <= 2 pi / N * 1.1.
    bool is_valid() const;
};

// A loop gamma and a disc sigma whose boundary traverses gamma twice.
struct TorsionChain {
    LoopPath gamma;
    QuadCycleMesh sigma;
    std::vector<std::uint32_t> boundary; // sigma vertex indices along its boundary, length 2 N

    // Reverses both gamma and sigma, so the boundary relation is preserved.
    TorsionChain reversed() const;
    // Boundary vertices bit-equal to gamma traversed twice, interior edges paired.
    bool is_valid() const;
};

struct ProbeSet {
    Geometry geometry;
    std::vector<QuadCycleMesh> cycles;
    std::optional<TorsionChain> torsion;
    std::string completeness_note;
    int resolution = 0;
};

// Cubed-sphere mesh (6 n^2 quads) of the unit covector sphere over x0, outward
// oriented. On S^3 the fiber is parametrized through the left-invariant frame.
QuadCycleMesh fiber_sphere_probe(Geometry g, const Vec4& x0, int n);

// Unit vectors of the equiangular cubed sphere, indexed like the fiber probe.
QuadCycleMesh cubed_sphere(int n);

// Coordinate 2-tori of the cosphere bundle of T^2 or T^3.
std::vector<QuadCycleMesh> torus_probes(Geometry g, int n);

// Fiber loop over the north pole of S^2 and the quaternionic disc bounding it twice.
TorsionChain belt_trick_chain(int n_loop, int n_disc);
// (x, xi) = (R(q) e3, R(q) e1).
CovectorPoint frame_point(const Quaternion& q);

// Registered homology probes of a geometry at resolution n.
ProbeSet probe_set(Geometry g, int n);

// Graph on a discretized cosphere bundle, with quad (or triangle) faces.
struct CosphereGraph {
    Geometry geometry;
    int resolution = 0;
    std::vector<CovectorPoint> vertices;
    std::vector<std::array<std::uint32_t, 2>> edges; // undirected, stored (a, b)
    std::vector<Face> faces;

    // CSR adjacency: neighbors of v are adj[offsets[v] .. offsets[v+1]), with
    // the incident edge index alongside.
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> adj;
    std::vector<std::uint32_t> adj_edge;

    void build_adjacency();
    bool is_connected() const;
};

// T^2: n^3 grid in (x1, x2, theta). T^3: n^3 base grid times cubed-sphere(n/2).
// S^2: SO(3) through Hopf coordinates on S^3 modulo q ~ -q. S^3: Hopf grid on
// S^3 times cubed-sphere(n/2) through the left-invariant frame.
CosphereGraph cosphere_graph(Geometry g, int n);

// CSV export: vertex table (index, x..., xi...) and face table (a, b, c, d).
void write_vertex_csv(std::ostream& os, const std::vector<CovectorPoint>& vertices);
void write_face_csv(std::ostream& os, const std::vector<Face>& faces);

} // namespace obstrukt
