#pragma once

#include "bispec/mesh.hpp"

#include <Eigen/Sparse>

#include <iosfwd>
#include <memory>
#include <vector>

namespace bispec {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Symmetric sparse matrix stored as its lower triangle (diagonal included),
/// so symmetry holds exactly by construction.
class SparseSymMatrix {
public:
    SparseSymMatrix() = default;
    explicit SparseSymMatrix(SparseMatrix lower);

    Eigen::Index order() const { return lower_.rows(); }
    const SparseMatrix& lower() const { return lower_; }

    /// Both triangles, for solvers and products.
    SparseMatrix full() const;
    Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
    Eigen::VectorXd row_sums() const;
    double total_sum() const;

private:
    SparseMatrix lower_;
};

enum class MassMode { Consistent, Lumped };

/// Stiffness K and mass M of the positive Laplace–Beltrami operator
/// (discrete Δ = M⁻¹K) on one mesh.
struct OperatorPair {
    SparseSymMatrix stiffness;
    SparseSymMatrix mass;
    MassMode mass_mode = MassMode::Consistent;
    std::shared_ptr<const SimplicialMesh> mesh;

    Eigen::Index order() const { return stiffness.order(); }
};

/// P1 stiffness from ambient chord lengths: cotangent weights for triangles,
/// 1/length for segments. Throws DegenerateMesh for a simplex whose measure is
/// below 1e-14 · h_max^n.
SparseSymMatrix assemble_stiffness(const SimplicialMesh& mesh);

SparseSymMatrix assemble_mass(const SimplicialMesh& mesh, MassMode mode);

OperatorPair assemble_operators(std::shared_ptr<const SimplicialMesh> mesh, MassMode mode);

/// Ambient coordinate functions x_i sampled at the vertices, i = 0..n+1.
std::vector<Eigen::VectorXd> coordinate_vectors(const SimplicialMesh& mesh);

/// Lower triangle in MatrixMarket coordinate format, 1-based indices.
void write_matrix_market(std::ostream& out, const SparseSymMatrix& matrix);

} // namespace bispec
