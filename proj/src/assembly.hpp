#pragma once

#include <functional>

#include "linalg.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"
#include "reference_element.hpp"

namespace bsfem {

using ScalarField = std::function<double(Vec2)>;
using VectorField = std::function<Vec2(Vec2)>;

struct MapPoint {
    Vec2 x;
    Mat2 jacobian;
};

/// Evaluates the isoparametric map F_T and its Jacobian at a reference point.
/// Throws SingularJacobian when det <= 0; pass check_domain = false to allow
/// reference points outside the unit triangle (used by the extension code).
MapPoint isoparametric_map(const Mesh& mesh, int element_id, Vec2 ref_point,
                           bool check_domain = true);

/// Geometry of a boundary face at arc parameter s in [0, 1]: the physical
/// point, the covariant tangent g = dF_S/ds, the length element |g|, the
/// contravariant vector g/|g|^2, and the outward unit normal.
struct FaceFrame {
    Vec2 point;
    Vec2 covariant;
    double sqrt_det_g = 0.0;
    Vec2 contravariant;
    Vec2 normal;
};

FaceFrame face_metric(const Mesh& mesh, const BoundaryFace& face, double s);

struct FaceMatrices {
    // Dense (k+1) x (k+1) matrices over the face nodes, row-major.
    std::vector<double> mass;
    std::vector<double> surface_stiffness;
    std::vector<int> element_nodes;  // local element indices of the face nodes
};

/// Face mass and Laplace-Beltrami stiffness, integrated with quad_edge
/// (exactness degree >= 2k + 2 required).
FaceMatrices local_face_matrices(const Mesh& mesh, const BoundaryFace& face,
                                 const QuadratureRule& quad_edge);

struct AssembledSystem {
    SparseMatrix matrix;
    std::vector<double> rhs;
    int dof_count = 0;
};

/// Assembles the bilinear form (grad u, grad v)_Omega_h + (u, v)_Gamma_h
/// + (grad_Gamma u, grad_Gamma v)_Gamma_h and the load (f, v)_Omega_h
/// + (tau, v)_Gamma_h.
AssembledSystem assemble_system(const Mesh& mesh, const ScalarField& f, const ScalarField& tau,
                                const QuadratureRule& quad_tri, const QuadratureRule& quad_edge);

}  // namespace bsfem
