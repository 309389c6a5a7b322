#include "bispec/mesh.hpp"

#include "bispec/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace bispec {

namespace {

std::uint64_t edge_key(int a, int b)
{
    const auto lo = static_cast<std::uint64_t>(std::min(a, b));
    const auto hi = static_cast<std::uint64_t>(std::max(a, b));
    return (lo << 32) | hi;
}

double triangle_area(const Eigen::VectorXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c)
{
    const Eigen::VectorXd u = b - a;
    const Eigen::VectorXd v = c - a;
    const double uu = u.squaredNorm();
    const double vv = v.squaredNorm();
    const double uv = u.dot(v);
    return 0.5 * std::sqrt(std::max(0.0, uu * vv - uv * uv));
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// (a, b) corner pairs of every edge of every simplex, in orientation order
std::vector<std::pair<int, int>> oriented_edges(const SimplicialMesh& mesh)
{
    std::vector<std::pair<int, int>> out;
    const int k = mesh.dim + 1;
    out.reserve(static_cast<std::size_t>(mesh.simplex_count()) * (mesh.dim == 1 ? 1 : 3));
    for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s) {
        if (mesh.dim == 1) {
            out.emplace_back(mesh.simplices(s, 0), mesh.simplices(s, 1));
        } else {
            for (int i = 0; i < k; ++i) out.emplace_back(mesh.simplices(s, i), mesh.simplices(s, (i + 1) % k));
        }
    }
    return out;
}

} // namespace

SimplicialMesh mesh_circle(int segments)
{
    if (segments < 3) throw InvalidArgument("circle mesh needs at least 3 segments, got " + std::to_string(segments));
    if (segments > kMaxCircleSegments) throw ResourceLimit("circle mesh segment count over the resource guard");
    SimplicialMesh mesh;
    mesh.dim = 1;
    mesh.spec = make_great_sphere(1);
    mesh.generator = "circle";
    mesh.resolution = segments;
    mesh.vertices.resize(segments, 3);
    mesh.simplices.resize(segments, 2);
    for (int i = 0; i < segments; ++i) {
        const double theta = 2.0 * std::numbers::pi * i / segments;
        mesh.vertices.row(i) = embed_point(mesh.spec, {{theta}}).transpose();
        mesh.simplices.row(i) << i, (i + 1) % segments;
    }
    return mesh;
}

SimplicialMesh mesh_product_torus(const HypersurfaceSpec& spec, int grid)
{
    if (spec.kind() != SurfaceKind::ProductOfSpheres || spec.factors()[0].dim != 1 || spec.factors()[1].dim != 1)
        throw InvalidArgument("torus mesh needs a product of two circles");
    if (grid < 3) throw InvalidArgument("torus grid must be >= 3, got " + std::to_string(grid));
    if (grid > kMaxTorusGrid) throw ResourceLimit("torus grid over the resource guard (512)");
    SimplicialMesh mesh;
    mesh.dim = 2;
    mesh.spec = spec;
    mesh.generator = "torus";
    mesh.resolution = grid;
    mesh.vertices.resize(static_cast<Eigen::Index>(grid) * grid, 4);
    mesh.simplices.resize(2 * static_cast<Eigen::Index>(grid) * grid, 3);
    auto index = [grid](int i, int j) { return (i % grid) * grid + (j % grid); };
    for (int i = 0; i < grid; ++i) {
        for (int j = 0; j < grid; ++j) {
            const double theta = 2.0 * std::numbers::pi * i / grid;
            const double phi = 2.0 * std::numbers::pi * j / grid;
            mesh.vertices.row(index(i, j)) = embed_point(spec, {{theta}, {phi}}).transpose();
            const int a = index(i, j), b = index(i + 1, j), c = index(i + 1, j + 1), d = index(i, j + 1);
            const Eigen::Index t = 2 * static_cast<Eigen::Index>(index(i, j));
            mesh.simplices.row(t) << a, b, c;
            mesh.simplices.row(t + 1) << a, c, d;
        }
    }
    return mesh;
}

SimplicialMesh mesh_clifford_torus(int grid)
{
    SimplicialMesh mesh = mesh_product_torus(make_clifford(1, 1), grid);
    mesh.generator = "clifford_torus";
    return mesh;
}

SimplicialMesh mesh_great_sphere2(int levels)
{
    if (levels < 0) throw InvalidArgument("icosphere level must be >= 0");
    if (levels > kMaxIcosphereLevel) throw ResourceLimit("icosphere level over the resource guard (7)");
    const double t = std::numbers::phi;
    const double raw[12][3] = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
        {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
        {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    const int faces[20][3] = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
    };
    SimplicialMesh mesh;
    mesh.dim = 2;
    mesh.spec = make_great_sphere(2);
    mesh.generator = "icosphere";
    mesh.resolution = 0;
    mesh.vertices = Eigen::MatrixXd::Zero(12, 4);
    for (int i = 0; i < 12; ++i) {
        Eigen::Vector3d v(raw[i][0], raw[i][1], raw[i][2]);
        mesh.vertices.row(i).head<3>() = v.normalized().transpose();
    }
    mesh.simplices.resize(20, 3);
    for (int f = 0; f < 20; ++f) mesh.simplices.row(f) << faces[f][0], faces[f][1], faces[f][2];
    for (int l = 0; l < levels; ++l) mesh = refine(mesh);
    return mesh;
}

SimplicialMesh refine(const SimplicialMesh& mesh)
{
    if (mesh.dim != 1 && mesh.dim != 2) throw InvalidArgument("refine supports n = 1 and n = 2 only");
    const auto nv = static_cast<int>(mesh.vertex_count());
    std::unordered_map<std::uint64_t, int> midpoint;
    std::vector<Eigen::VectorXd> added;

    auto mid = [&](int a, int b) {
        auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), nv + static_cast<int>(added.size()));
        if (inserted) {
            Eigen::VectorXd m = 0.5 * (mesh.vertices.row(a) + mesh.vertices.row(b)).transpose();
            added.push_back(project_to_surface(mesh.spec, m));
        }
        return it->second;
    };

    SimplicialMesh out;
    out.dim = mesh.dim;
    out.spec = mesh.spec;
    out.generator = mesh.generator;
    out.resolution = mesh.generator == "icosphere" ? mesh.resolution + 1 : mesh.resolution * 2;

    if (mesh.dim == 1) {
        out.simplices.resize(2 * mesh.simplex_count(), 2);
        for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s) {
            const int a = mesh.simplices(s, 0), b = mesh.simplices(s, 1);
            const int m = mid(a, b);
            out.simplices.row(2 * s) << a, m;
            out.simplices.row(2 * s + 1) << m, b;
        }
    } else {
        out.simplices.resize(4 * mesh.simplex_count(), 3);
        for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s) {
            const int a = mesh.simplices(s, 0), b = mesh.simplices(s, 1), c = mesh.simplices(s, 2);
            const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
            out.simplices.row(4 * s) << a, ab, ca;
            out.simplices.row(4 * s + 1) << ab, b, bc;
            out.simplices.row(4 * s + 2) << ca, bc, c;
            out.simplices.row(4 * s + 3) << ab, bc, ca;
        }
    }

    out.vertices.resize(nv + static_cast<Eigen::Index>(added.size()), mesh.vertices.cols());
    out.vertices.topRows(nv) = mesh.vertices;
    for (std::size_t i = 0; i < added.size(); ++i) out.vertices.row(nv + static_cast<Eigen::Index>(i)) = added[i].transpose();
    return out;
}

MeshStats mesh_stats(const SimplicialMesh& mesh)
{
    MeshStats stats;
    stats.h_min = std::numeric_limits<double>::infinity();
    stats.quality_min = 1.0;
    for (const auto& [a, b] : oriented_edges(mesh)) {
        const double h = (mesh.vertices.row(a) - mesh.vertices.row(b)).norm();
        stats.h_max = std::max(stats.h_max, h);
        stats.h_min = std::min(stats.h_min, h);
    }
    for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s) {
        if (mesh.dim == 1) {
            stats.total_measure += (mesh.vertices.row(mesh.simplices(s, 0)) - mesh.vertices.row(mesh.simplices(s, 1))).norm();
            continue;
        }
        const Eigen::VectorXd p0 = mesh.vertices.row(mesh.simplices(s, 0)).transpose();
        const Eigen::VectorXd p1 = mesh.vertices.row(mesh.simplices(s, 1)).transpose();
        const Eigen::VectorXd p2 = mesh.vertices.row(mesh.simplices(s, 2)).transpose();
        const double area = triangle_area(p0, p1, p2);
        stats.total_measure += area;
        const double a = (p1 - p2).norm(), b = (p2 - p0).norm(), c = (p0 - p1).norm();
        const double inradius = 2.0 * area / (a + b + c);
        const double circumradius = a * b * c / (4.0 * area);
        stats.quality_min = std::min(stats.quality_min, area > 0.0 ? inradius / circumradius : 0.0);
    }
    return stats;
}

MeshTopology mesh_topology(const SimplicialMesh& mesh)
{
    MeshTopology topo;
    topo.vertices = static_cast<long>(mesh.vertex_count());
    topo.faces = mesh.dim == 2 ? static_cast<long>(mesh.simplex_count()) : 0;

    // per undirected edge: number of uses and net orientation
    struct Use {
        int count = 0;
        int net = 0;
    };
    std::unordered_map<std::uint64_t, Use> uses;
    std::vector<int> degree(static_cast<std::size_t>(mesh.vertex_count()), 0);
    std::vector<int> net_flow(static_cast<std::size_t>(mesh.vertex_count()), 0);
    UnionFind components(static_cast<int>(mesh.vertex_count()));
    for (const auto& [a, b] : oriented_edges(mesh)) {
        Use& u = uses[edge_key(a, b)];
        ++u.count;
        u.net += a < b ? 1 : -1;
        ++degree[a];
        ++degree[b];
        ++net_flow[a];
        --net_flow[b];
        components.unite(a, b);
    }
    topo.edges = static_cast<long>(uses.size());
    topo.euler_characteristic = topo.vertices - topo.edges + topo.faces;

    if (mesh.dim == 1) {
        topo.closed = std::all_of(degree.begin(), degree.end(), [](int d) { return d == 2; });
        topo.orientable = topo.closed && std::all_of(net_flow.begin(), net_flow.end(), [](int f) { return f == 0; });
    } else {
        topo.closed = std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second.count == 2; });
        topo.orientable = topo.closed && std::all_of(uses.begin(), uses.end(), [](const auto& kv) { return kv.second.net == 0; });
    }
    topo.connected = true;
    if (mesh.vertex_count() > 0) {
        const int root = components.find(0);
        for (int v = 0; v < mesh.vertex_count(); ++v) {
            if (degree[v] == 0 || components.find(v) != root) {
                topo.connected = false;
                break;
            }
        }
    }
    return topo;
}

void validate_mesh(const SimplicialMesh& mesh)
{
    if (mesh.dim != 1 && mesh.dim != 2) throw InvalidArgument("mesh dimension must be 1 or 2");
    if (mesh.vertices.cols() != mesh.ambient_dim()) throw InvalidArgument("vertex rows must have n+2 coordinates");
    if (mesh.simplices.cols() != mesh.dim + 1) throw InvalidArgument("simplices must have n+1 vertices");
    if (mesh.spec.dimension() != mesh.dim) throw InvalidArgument("mesh dimension differs from its hypersurface");
    for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) {
        if (std::abs(mesh.vertices.row(v).norm() - 1.0) > 1e-12)
            throw InvalidArgument("vertex " + std::to_string(v) + " is off the unit sphere");
    }
    if (mesh.simplex_count() > 0 &&
        (mesh.simplices.minCoeff() < 0 || mesh.simplices.maxCoeff() >= mesh.vertex_count()))
        throw InvalidArgument("simplex vertex index out of range");
    const MeshTopology topo = mesh_topology(mesh);
    if (!topo.closed) throw InvalidArgument("mesh has boundary or non-manifold edges");
    if (!topo.orientable) throw InvalidArgument("mesh simplices are not consistently oriented");
    if (!topo.connected) throw InvalidArgument("mesh is not connected");
}

} // namespace bispec
