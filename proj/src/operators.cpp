#include "bispec/operators.hpp"

#include "bispec/error.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace bispec {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// lower-triangle scatter
void add_lower(Triplets& t, int i, int j, double v)
{
    if (i >= j)
        t.emplace_back(i, j, v);
    else
        t.emplace_back(j, i, v);
}

double max_edge_length(const SimplicialMesh& mesh)
{
    double h = 0.0;
    const int k = mesh.dim + 1;
    for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s)
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b)
                h = std::max(h, (mesh.vertices.row(mesh.simplices(s, a)) - mesh.vertices.row(mesh.simplices(s, b))).norm());
    return h;
}

// simplex measure, with the degeneracy guard
double checked_measure(const SimplicialMesh& mesh, Eigen::Index s, double threshold)
{
    double measure = 0.0;
    if (mesh.dim == 1) {
        measure = (mesh.vertices.row(mesh.simplices(s, 0)) - mesh.vertices.row(mesh.simplices(s, 1))).norm();
    } else {
        const Eigen::RowVectorXd u = mesh.vertices.row(mesh.simplices(s, 1)) - mesh.vertices.row(mesh.simplices(s, 0));
        const Eigen::RowVectorXd v = mesh.vertices.row(mesh.simplices(s, 2)) - mesh.vertices.row(mesh.simplices(s, 0));
        measure = 0.5 * std::sqrt(std::max(0.0, u.squaredNorm() * v.squaredNorm() - std::pow(u.dot(v), 2)));
    }
    if (!(measure >= threshold))
        throw DegenerateMesh("degenerate simplex " + std::to_string(s) + " (measure " + std::to_string(measure) + ")",
                             static_cast<long>(s));
    return measure;
}

void require_supported(const SimplicialMesh& mesh)
{
    if (mesh.dim != 1 && mesh.dim != 2) throw InvalidArgument("operators support n = 1 and n = 2 only");
    if (mesh.simplex_count() == 0) throw InvalidArgument("mesh has no simplices");
}

SparseMatrix build(Eigen::Index order, const Triplets& t)
{
    SparseMatrix m(order, order);
    m.setFromTriplets(t.begin(), t.end());
    return m;
}

} // namespace

SparseSymMatrix::SparseSymMatrix(SparseMatrix lower) : lower_(std::move(lower))
{
    lower_.makeCompressed();
}

SparseMatrix SparseSymMatrix::full() const
{
    SparseMatrix m = lower_.selfadjointView<Eigen::Lower>();
    return m;
}

Eigen::VectorXd SparseSymMatrix::operator*(const Eigen::VectorXd& x) const
{
    return lower_.selfadjointView<Eigen::Lower>() * x;
}

Eigen::VectorXd SparseSymMatrix::row_sums() const
{
    return *this * Eigen::VectorXd::Ones(order());
}

double SparseSymMatrix::total_sum() const { return row_sums().sum(); }

SparseSymMatrix assemble_stiffness(const SimplicialMesh& mesh)
{
    require_supported(mesh);
    const double threshold = 1e-14 * std::pow(max_edge_length(mesh), mesh.dim);
    Triplets t;
    t.reserve(static_cast<std::size_t>(mesh.simplex_count()) * (mesh.dim == 1 ? 3 : 6));

    for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s) {
        const double measure = checked_measure(mesh, s, threshold);
        if (mesh.dim == 1) {
            const int a = mesh.simplices(s, 0), b = mesh.simplices(s, 1);
            const double w = 1.0 / measure;
            add_lower(t, a, a, w);
            add_lower(t, b, b, w);
            add_lower(t, a, b, -w);
            continue;
        }
        // Edge opposite corner c gets weight cot(angle at c) / 2. The
        // cotangent is (e1·e2) / |e1 × e2| with |e1 × e2| = 2·area.
        for (int c = 0; c < 3; ++c) {
            const int i = mesh.simplices(s, (c + 1) % 3);
            const int j = mesh.simplices(s, (c + 2) % 3);
            const Eigen::RowVectorXd e1 = mesh.vertices.row(i) - mesh.vertices.row(mesh.simplices(s, c));
            const Eigen::RowVectorXd e2 = mesh.vertices.row(j) - mesh.vertices.row(mesh.simplices(s, c));
            const double w = 0.5 * e1.dot(e2) / (2.0 * measure);
            add_lower(t, i, i, w);
            add_lower(t, j, j, w);
            add_lower(t, i, j, -w);
        }
    }
    return SparseSymMatrix(build(mesh.vertex_count(), t));
}

SparseSymMatrix assemble_mass(const SimplicialMesh& mesh, MassMode mode)
{
    require_supported(mesh);
    const double threshold = 1e-14 * std::pow(max_edge_length(mesh), mesh.dim);
    const int k = mesh.dim + 1;
    // element mass: measure/((k)(k+1)) · (2 on the diagonal, 1 off it);
    // lumping puts the row sum measure/k on the diagonal
    const double scale = 1.0 / (k * (k + 1));
    Triplets t;
    for (Eigen::Index s = 0; s < mesh.simplex_count(); ++s) {
        const double measure = checked_measure(mesh, s, threshold);
        for (int a = 0; a < k; ++a) {
            const int i = mesh.simplices(s, a);
            if (mode == MassMode::Lumped) {
                add_lower(t, i, i, measure / k);
                continue;
            }
            add_lower(t, i, i, 2.0 * scale * measure);
            for (int b = a + 1; b < k; ++b) add_lower(t, i, mesh.simplices(s, b), scale * measure);
        }
    }
    return SparseSymMatrix(build(mesh.vertex_count(), t));
}

OperatorPair assemble_operators(std::shared_ptr<const SimplicialMesh> mesh, MassMode mode)
{
    if (!mesh) throw InvalidArgument("null mesh");
    OperatorPair ops;
    ops.stiffness = assemble_stiffness(*mesh);
    ops.mass = assemble_mass(*mesh, mode);
    ops.mass_mode = mode;
    ops.mesh = std::move(mesh);
    return ops;
}

std::vector<Eigen::VectorXd> coordinate_vectors(const SimplicialMesh& mesh)
{
    std::vector<Eigen::VectorXd> coords;
    for (Eigen::Index i = 0; i < mesh.vertices.cols(); ++i) coords.emplace_back(mesh.vertices.col(i));
    return coords;
}

void write_matrix_market(std::ostream& out, const SparseSymMatrix& matrix)
{
    const SparseMatrix& lower = matrix.lower();
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << lower.rows() << ' ' << lower.cols() << ' ' << lower.nonZeros() << '\n';
    out << std::setprecision(17);
    // column-major storage already walks (col, row) with row >= col
    for (Eigen::Index col = 0; col < lower.outerSize(); ++col)
        for (SparseMatrix::InnerIterator it(lower, col); it; ++it)
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

} // namespace bispec
