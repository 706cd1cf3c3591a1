#include "assembly.hpp"

#include <cmath>
#include <tuple>

namespace bsfem {

MapPoint isoparametric_map(const Mesh& mesh, int element_id, Vec2 ref_point, bool check_domain) {
    if (element_id < 0 || element_id >= mesh.element_count())
        throw Error(ErrorCode::IndexOutOfRange, "isoparametric_map: element id out of range");
    if (check_domain) {
        const double tol = 1e-12;
        if (ref_point.x < -tol || ref_point.y < -tol || ref_point.x + ref_point.y > 1.0 + tol)
            throw Error(ErrorCode::InvalidArgument,
                        "isoparametric_map: reference point outside the unit triangle");
    }
    const ReferenceElement ref(mesh.order());
    const int nn = ref.node_count();
    double values[6];
    Vec2 grads[6];
    ref.shape_values(ref_point, values);
    ref.shape_gradients(ref_point, grads);

    MapPoint result;
    const auto elem = mesh.element(element_id);
    for (int i = 0; i < nn; ++i) {
        const Vec2 a = mesh.node(elem[i]);
        result.x += a * values[i];
        result.jacobian.a00 += a.x * grads[i].x;
        result.jacobian.a01 += a.x * grads[i].y;
        result.jacobian.a10 += a.y * grads[i].x;
        result.jacobian.a11 += a.y * grads[i].y;
    }
    if (check_domain && result.jacobian.det() <= 0.0)
        throw Error(ErrorCode::SingularJacobian,
                    "isoparametric_map: non-positive Jacobian determinant");
    return result;
}

FaceFrame face_metric(const Mesh& mesh, const BoundaryFace& face, double s) {
    const Vec2 ref_point = ReferenceElement::edge_point(face.local_edge, s);
    const Vec2 dir = ReferenceElement::edge_direction(face.local_edge);
    const MapPoint map = isoparametric_map(mesh, face.element, ref_point);

    FaceFrame frame;
    frame.point = map.x;
    frame.covariant = map.jacobian.apply(dir);
    frame.sqrt_det_g = frame.covariant.norm();
    if (frame.sqrt_det_g < 1e-12)
        throw Error(ErrorCode::DegenerateFace, "face_metric: degenerate tangent");
    frame.contravariant = frame.covariant / frame.covariant.norm_sq();
    frame.normal = rotate_cw(frame.covariant / frame.sqrt_det_g);

    // Orientation check against the element interior.
    const MapPoint center = isoparametric_map(mesh, face.element, {1.0 / 3.0, 1.0 / 3.0});
    if (frame.normal.dot(frame.point - center.x) < 0.0) frame.normal = frame.normal * -1.0;
    return frame;
}

FaceMatrices local_face_matrices(const Mesh& mesh, const BoundaryFace& face,
                                 const QuadratureRule& quad_edge) {
    const int k = mesh.order();
    if (quad_edge.cell != QuadratureRule::Cell::Edge)
        throw Error(ErrorCode::InvalidArgument, "local_face_matrices: edge rule expected");
    if (quad_edge.exactness_degree < 2 * k + 2)
        throw Error(ErrorCode::QuadratureTooWeak,
                    "local_face_matrices: edge rule must be exact to degree 2k + 2");

    const ReferenceElement ref(k);
    const std::vector<int> face_nodes = ref.edge_nodes(face.local_edge);
    const int nf = static_cast<int>(face_nodes.size());
    const Vec2 dir = ReferenceElement::edge_direction(face.local_edge);

    FaceMatrices out;
    out.element_nodes = face_nodes;
    out.mass.assign(static_cast<std::size_t>(nf) * nf, 0.0);
    out.surface_stiffness.assign(static_cast<std::size_t>(nf) * nf, 0.0);

    double values[6];
    Vec2 grads[6];
    for (std::size_t q = 0; q < quad_edge.points.size(); ++q) {
        const double s = quad_edge.points[q].x;
        const double w = quad_edge.weights[q];
        const FaceFrame frame = face_metric(mesh, face, s);
        const Vec2 ref_point = ReferenceElement::edge_point(face.local_edge, s);
        ref.shape_values(ref_point, values);
        ref.shape_gradients(ref_point, grads);
        for (int i = 0; i < nf; ++i) {
            const double vi = values[face_nodes[static_cast<std::size_t>(i)]];
            const double di = grads[face_nodes[static_cast<std::size_t>(i)]].dot(dir);
            for (int j = 0; j < nf; ++j) {
                const double vj = values[face_nodes[static_cast<std::size_t>(j)]];
                const double dj = grads[face_nodes[static_cast<std::size_t>(j)]].dot(dir);
                out.mass[static_cast<std::size_t>(i * nf + j)] += w * frame.sqrt_det_g * vi * vj;
                // grad_Gamma phi = contravariant * dphi/ds, so the product
                // contracts to di * dj / |g|^2 against the measure |g|.
                out.surface_stiffness[static_cast<std::size_t>(i * nf + j)] +=
                    w * di * dj / frame.sqrt_det_g;
            }
        }
    }
    return out;
}

AssembledSystem assemble_system(const Mesh& mesh, const ScalarField& f, const ScalarField& tau,
                                const QuadratureRule& quad_tri, const QuadratureRule& quad_edge) {
    const int k = mesh.order();
    if (quad_tri.cell != QuadratureRule::Cell::Triangle)
        throw Error(ErrorCode::InvalidArgument, "assemble_system: triangle rule expected");
    if (quad_tri.exactness_degree < 2 * k + 1)
        throw Error(ErrorCode::QuadratureTooWeak,
                    "assemble_system: triangle rule must be exact to degree 2k + 1");
    if (quad_edge.exactness_degree < 2 * k + 2)
        throw Error(ErrorCode::QuadratureTooWeak,
                    "assemble_system: edge rule must be exact to degree 2k + 2");

    const ReferenceElement ref(k);
    const int nn = ref.node_count();
    AssembledSystem system;
    system.dof_count = mesh.node_count();
    system.rhs.assign(static_cast<std::size_t>(system.dof_count), 0.0);

    std::vector<std::tuple<int, int, double>> triplets;
    triplets.reserve(static_cast<std::size_t>(mesh.element_count()) * nn * nn);

    double values[6];
    Vec2 grads[6];
    Vec2 phys_grads[6];

    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto elem = mesh.element(e);
        for (std::size_t q = 0; q < quad_tri.points.size(); ++q) {
            const Vec2 p = quad_tri.points[q];
            const MapPoint map = isoparametric_map(mesh, e, p);
            const double det = map.jacobian.det();
            const double w = quad_tri.weights[q] * std::abs(det);
            ref.shape_values(p, values);
            ref.shape_gradients(p, grads);
            for (int i = 0; i < nn; ++i)
                phys_grads[i] = map.jacobian.apply_inv_transpose(grads[i]);
            const double fval = f(map.x);
            for (int i = 0; i < nn; ++i) {
                for (int j = 0; j < nn; ++j)
                    triplets.emplace_back(elem[i], elem[j], w * phys_grads[i].dot(phys_grads[j]));
                system.rhs[static_cast<std::size_t>(elem[i])] += w * fval * values[i];
            }
        }
    }

    for (const auto& face : mesh.boundary_faces()) {
        const FaceMatrices fm = local_face_matrices(mesh, face, quad_edge);
        const auto elem = mesh.element(face.element);
        const int nf = static_cast<int>(fm.element_nodes.size());
        for (int i = 0; i < nf; ++i) {
            const int gi = elem[fm.element_nodes[static_cast<std::size_t>(i)]];
            for (int j = 0; j < nf; ++j) {
                const int gj = elem[fm.element_nodes[static_cast<std::size_t>(j)]];
                triplets.emplace_back(gi, gj,
                                      fm.mass[static_cast<std::size_t>(i * nf + j)] +
                                          fm.surface_stiffness[static_cast<std::size_t>(i * nf + j)]);
            }
        }
        // Boundary load (tau, v)_Gamma_h.
        for (std::size_t q = 0; q < quad_edge.points.size(); ++q) {
            const double s = quad_edge.points[q].x;
            const double w = quad_edge.weights[q];
            const FaceFrame frame = face_metric(mesh, face, s);
            ref.shape_values(ReferenceElement::edge_point(face.local_edge, s), values);
            const double tval = tau(frame.point);
            for (int i = 0; i < nf; ++i) {
                const int local = fm.element_nodes[static_cast<std::size_t>(i)];
                system.rhs[static_cast<std::size_t>(elem[local])] +=
                    w * frame.sqrt_det_g * tval * values[local];
            }
        }
    }

    system.matrix = SparseMatrix::from_triplets(system.dof_count, triplets);
    return system;
}

}  // namespace bsfem
