#pragma once

#include <optional>

#include "field.hpp"
#include "geometry.hpp"
#include "interpolation.hpp"

namespace bsfem {

/// The four error norms of a convergence report, in column order.
struct ErrorNorms {
    double grad_l2_omega = 0.0;  // ||grad(u - u_h)||_L2(Omega_h)  (or Omega)
    double grad_l2_gamma = 0.0;  // ||grad_Gamma(u - u_h)||_L2(Gamma_h)  (or Gamma)
    double l2_omega = 0.0;
    double l2_gamma = 0.0;
};

/// Norms of u - u_h over the discrete domain Omega_h / Gamma_h. The surface
/// gradient of both fields is the tangential projection (I - n_h n_h^T) of
/// the ambient gradient, taken from the face's element. Requires error
/// quadrature stronger than assembly: triangle degree >= 7, edge rules with
/// >= 7 points.
ErrorNorms error_norms_discrete(const Mesh& mesh, const SolutionField& u_h, const ScalarField& u,
                                const VectorField& grad_u, const QuadratureRule& quad_tri,
                                const QuadratureRule& quad_edge);

/// Newton inversion of the isoparametric map; the reference iterate may roam
/// the doubled reference cell. Returns the reference point, or throws
/// MapInversionFailure.
Vec2 invert_isoparametric_map(const Mesh& mesh, int element_id, Vec2 x, Vec2 initial_guess);

/// Containing element and reference coordinates of a point of Omega_h.
std::optional<std::pair<int, Vec2>> locate_point(const Mesh& mesh, Vec2 x);

/// Element-wise polynomial extension of a finite element function through the
/// extended isoparametric map: outside Omega_h, the face whose projected arc
/// contains pi(x) supplies the polynomial of its element T_S, evaluated on
/// the doubled reference cell. Disk domains key the face lookup to boundary
/// node angles.
class NaturalExtension {
public:
    NaturalExtension(const SolutionField& field, const DomainGeometry& domain);

    /// Value and ambient gradient at a point of Omega_h or of the skin
    /// |d| <= skin_halfwidth(). Throws OutsideSkin / MapInversionFailure.
    FieldSample evaluate(Vec2 point) const;

    double skin_halfwidth() const { return skin_halfwidth_; }

    /// Index into mesh.boundary_faces() of the face whose projected arc
    /// contains angle theta; exact node hits resolve to the lower face index.
    int face_for_angle(double theta) const;
    /// Arc angle range [theta0, theta1) of boundary face `face_index`,
    /// with theta1 > theta0.
    std::pair<double, double> face_arc(int face_index) const;

    /// Extension sample keyed to a known face (skips the angular lookup);
    /// `s_hint` is the face arc parameter used to seed the map inversion.
    FieldSample evaluate_from_face(int face_index, Vec2 point, double s_hint) const;

private:
    const SolutionField* field_;
    const DomainGeometry* domain_;
    double skin_halfwidth_ = 0.0;
    // arc start angles sorted ascending, with the owning face index
    std::vector<std::pair<double, int>> arc_starts_;
    std::vector<std::pair<double, double>> arcs_;  // per face index
};

/// One-off convenience wrapper around NaturalExtension::evaluate.
FieldSample natural_extension_eval(const Mesh& mesh, const SolutionField& u_h,
                                   const DomainGeometry& domain, Vec2 point);

/// Norms of u - u_h over the exact domain Omega / Gamma, Appendix-C style:
/// element quadrature over Omega_h plus per-face skin cells in (arc, normal
/// offset) coordinates, and arc-exact boundary quadrature on Gamma.
ErrorNorms error_norms_exact_domain(const Mesh& mesh, const SolutionField& u_h,
                                    const ScalarField& u, const VectorField& grad_u,
                                    const DomainGeometry& domain, const QuadratureRule& quad_tri,
                                    const QuadratureRule& quad_edge);

/// max over boundary-face quadrature points of |n(pi(x)) - n_h(x)|.
double normal_discrepancy(const Mesh& mesh, const DomainGeometry& domain,
                          const QuadratureRule& quad_edge);

/// Galerkin consistency defect of the exact solution: assembles
/// r_i = a_h(u, phi_i) - b_i by quadrature and returns sqrt(r^T D^-1 r)
/// with D = diag(A).
double consistency_residual(const Mesh& mesh, const ScalarField& u, const VectorField& grad_u,
                            const ScalarField& f, const ScalarField& tau,
                            const QuadratureRule& quad_tri, const QuadratureRule& quad_edge);

}  // namespace bsfem
