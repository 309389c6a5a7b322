#pragma once

#include "bispec/geometry.hpp"

#include <Eigen/Core>

#include <string>

namespace bispec {

/// Simplicial mesh of a catalog hypersurface, embedded in R^{n+2}.
///
/// `vertices` is V × (n+2), one ambient point per row. `simplices` is
/// S × (n+1) with consistently oriented vertex indices. Only n ∈ {1, 2}.
struct SimplicialMesh {
    int dim = 0;
    HypersurfaceSpec spec = make_great_sphere(1);
    Eigen::MatrixXd vertices;
    Eigen::MatrixXi simplices;

    // provenance: generator name and its resolution parameter
    // (segments, grid or subdivision level)
    std::string generator;
    int resolution = 0;

    int ambient_dim() const { return dim + 2; }
    Eigen::Index vertex_count() const { return vertices.rows(); }
    Eigen::Index simplex_count() const { return simplices.rows(); }
};

struct MeshStats {
    double h_max = 0.0;
    double h_min = 0.0;
    double total_measure = 0.0;
    double quality_min = 0.0;
};

struct MeshTopology {
    long vertices = 0;
    long edges = 0;
    long faces = 0;
    long euler_characteristic = 0;
    bool closed = false;
    bool orientable = false;
    bool connected = false;
};

inline constexpr int kMaxTorusGrid = 512;
inline constexpr int kMaxIcosphereLevel = 7;
inline constexpr int kMaxCircleSegments = 1 << 20;

/// Regular polygon on the equator of S^2 ⊂ R^3 (great circle, n = 1).
SimplicialMesh mesh_circle(int segments);

/// grid × grid periodic lattice on S^1(r1) × S^1(r2) ⊂ R^4, each quad split
/// along the same diagonal. `spec` must be a product of two circles.
SimplicialMesh mesh_product_torus(const HypersurfaceSpec& spec, int grid);

/// Minimal Clifford torus S^1(√½) × S^1(√½).
SimplicialMesh mesh_clifford_torus(int grid);

/// Icosahedron subdivided `levels` times, on the great S^2 ⊂ R^4.
SimplicialMesh mesh_great_sphere2(int levels);

/// Midpoint subdivision with reprojection onto the hypersurface.
SimplicialMesh refine(const SimplicialMesh& mesh);

/// Edge lengths are ambient chords. Quality is inradius / circumradius per
/// triangle (1/2 for equilateral), or 1 for segments.
MeshStats mesh_stats(const SimplicialMesh& mesh);

MeshTopology mesh_topology(const SimplicialMesh& mesh);

/// Throws InvalidArgument unless vertex norms are 1 within 1e-12, indices
/// are in range, and the mesh is closed, orientable and connected.
void validate_mesh(const SimplicialMesh& mesh);

} // namespace bispec
