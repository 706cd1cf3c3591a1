#include "error_norms.hpp"

#include <algorithm>
#include <cmath>

namespace bsfem {

namespace {

void require_error_quadrature(const QuadratureRule& quad_tri, const QuadratureRule& quad_edge) {
    if (quad_tri.cell != QuadratureRule::Cell::Triangle ||
        quad_edge.cell != QuadratureRule::Cell::Edge)
        throw Error(ErrorCode::InvalidArgument, "error norms: wrong rule cell types");
    if (quad_tri.exactness_degree < 7 || quad_edge.points.size() < 7)
        throw Error(ErrorCode::QuadratureTooWeak,
                    "error norms: need triangle degree >= 7 and >= 7 edge points");
}

Vec2 tangential_projection(Vec2 v, Vec2 n) { return v - n * v.dot(n); }

double wrap_positive(double angle) {
    while (angle < 0.0) angle += 2.0 * M_PI;
    while (angle >= 2.0 * M_PI) angle -= 2.0 * M_PI;
    return angle;
}

}  // namespace

ErrorNorms error_norms_discrete(const Mesh& mesh, const SolutionField& u_h, const ScalarField& u,
                                const VectorField& grad_u, const QuadratureRule& quad_tri,
                                const QuadratureRule& quad_edge) {
    require_error_quadrature(quad_tri, quad_edge);

    double grad_omega = 0.0, l2_omega = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (std::size_t q = 0; q < quad_tri.points.size(); ++q) {
            const FieldSample s = evaluate_in_element(u_h, e, quad_tri.points[q]);
            const MapPoint map = isoparametric_map(mesh, e, quad_tri.points[q]);
            const double w = quad_tri.weights[q] * std::abs(map.jacobian.det());
            const double diff = u(map.x) - s.value;
            const Vec2 gdiff = grad_u(map.x) - s.gradient;
            l2_omega += w * diff * diff;
            grad_omega += w * gdiff.norm_sq();
        }
    }

    double grad_gamma = 0.0, l2_gamma = 0.0;
    for (const auto& face : mesh.boundary_faces()) {
        for (std::size_t q = 0; q < quad_edge.points.size(); ++q) {
            const double s = quad_edge.points[q].x;
            const FaceFrame frame = face_metric(mesh, face, s);
            const double w = quad_edge.weights[q] * frame.sqrt_det_g;
            const Vec2 ref_point = ReferenceElement::edge_point(face.local_edge, s);
            const FieldSample sample = evaluate_in_element(u_h, face.element, ref_point);
            const double diff = u(frame.point) - sample.value;
            const Vec2 gdiff = tangential_projection(grad_u(frame.point), frame.normal) -
                               tangential_projection(sample.gradient, frame.normal);
            l2_gamma += w * diff * diff;
            grad_gamma += w * gdiff.norm_sq();
        }
    }

    return {std::sqrt(grad_omega), std::sqrt(grad_gamma), std::sqrt(l2_omega),
            std::sqrt(l2_gamma)};
}

Vec2 invert_isoparametric_map(const Mesh& mesh, int element_id, Vec2 x, Vec2 initial_guess) {
    Vec2 ref = initial_guess;
    for (int it = 0; it < 40; ++it) {
        const MapPoint map = isoparametric_map(mesh, element_id, ref, /*check_domain=*/false);
        const Vec2 residual = map.x - x;
        if (residual.norm() <= 1e-13) return ref;
        if (std::abs(map.jacobian.det()) < 1e-300)
            throw Error(ErrorCode::MapInversionFailure, "singular Jacobian during inversion");
        ref -= map.jacobian.solve(residual);
        if (ref.norm() > 1e3)
            throw Error(ErrorCode::MapInversionFailure, "map inversion diverged");
    }
    throw Error(ErrorCode::MapInversionFailure, "map inversion did not converge");
}

std::optional<std::pair<int, Vec2>> locate_point(const Mesh& mesh, Vec2 x) {
    constexpr double kInsideTol = 1e-10;
    // Margin for the straight-skeleton prefilter; curved edges bow out by
    // O(h^2) at most.
    constexpr double kFilterMargin = 0.2;
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto elem = mesh.element(e);
        const Vec2 a = mesh.node(elem[0]);
        const Vec2 b = mesh.node(elem[1]);
        const Vec2 c = mesh.node(elem[2]);
        const double area2 = (b - a).cross(c - a);
        const double l1 = (x - a).cross(c - a) / area2;
        const double l2 = (b - a).cross(x - a) / area2;
        const double l0 = 1.0 - l1 - l2;
        if (l0 < -kFilterMargin || l1 < -kFilterMargin || l2 < -kFilterMargin) continue;
        try {
            const Vec2 ref = invert_isoparametric_map(mesh, e, x, {l1, l2});
            if (ref.x >= -kInsideTol && ref.y >= -kInsideTol &&
                ref.x + ref.y <= 1.0 + kInsideTol)
                return std::make_pair(e, ref);
        } catch (const Error&) {
            continue;
        }
    }
    return std::nullopt;
}

NaturalExtension::NaturalExtension(const SolutionField& field, const DomainGeometry& domain)
    : field_(&field), domain_(&domain) {
    const Mesh& mesh = *field.mesh;
    if (domain.kind() != DomainKind::UnitDisk)
        throw Error(ErrorCode::InvalidArgument, "natural extension: unsupported domain kind");

    const QuadratureRule probe = QuadratureRule::edge_gauss(7);
    const double profile = boundary_distance_profile(domain, mesh, probe);
    skin_halfwidth_ = profile * (1.0 + 1e-6) + 1e-12;

    const auto& faces = mesh.boundary_faces();
    arcs_.resize(faces.size());
    arc_starts_.reserve(faces.size());
    for (std::size_t i = 0; i < faces.size(); ++i) {
        const auto elem = mesh.element(faces[i].element);
        const auto [a, b] = ReferenceElement::edge_vertices(faces[i].local_edge);
        const Vec2 pa = mesh.node(elem[a]);
        const Vec2 pb = mesh.node(elem[b]);
        const double theta0 = wrap_positive(std::atan2(pa.y, pa.x));
        double theta1 = wrap_positive(std::atan2(pb.y, pb.x));
        if (theta1 <= theta0) theta1 += 2.0 * M_PI;
        arcs_[i] = {theta0, theta1};
        arc_starts_.emplace_back(theta0, static_cast<int>(i));
    }
    std::sort(arc_starts_.begin(), arc_starts_.end());
}

int NaturalExtension::face_for_angle(double theta) const {
    const double t = wrap_positive(theta);
    const auto it = std::upper_bound(arc_starts_.begin(), arc_starts_.end(),
                                     std::make_pair(t, std::numeric_limits<int>::max()));
    const std::size_t n = arc_starts_.size();
    const std::size_t pos =
        (it == arc_starts_.begin())
            ? n - 1
            : static_cast<std::size_t>(std::distance(arc_starts_.begin(), it)) - 1;
    int candidate = arc_starts_[pos].second;
    // Exact node hit: both the arc ending and the arc starting here contain
    // theta; resolve to the lower face index.
    if (arc_starts_[pos].first == t) {
        const std::size_t before = (pos == 0) ? n - 1 : pos - 1;
        candidate = std::min(candidate, arc_starts_[before].second);
    }
    return candidate;
}

std::pair<double, double> NaturalExtension::face_arc(int face_index) const {
    return arcs_[static_cast<std::size_t>(face_index)];
}

FieldSample NaturalExtension::evaluate_from_face(int face_index, Vec2 point,
                                                 double s_hint) const {
    const Mesh& mesh = *field_->mesh;
    const BoundaryFace& face = mesh.boundary_faces()[static_cast<std::size_t>(face_index)];
    const Vec2 guess = ReferenceElement::edge_point(face.local_edge, s_hint);
    const Vec2 ref = invert_isoparametric_map(mesh, face.element, point, guess);
    // Containment in the doubled reference cell 2T: barycentric >= -1/3.
    const double l0 = 1.0 - ref.x - ref.y;
    constexpr double kLimit = -1.0 / 3.0 - 1e-9;
    if (ref.x < kLimit || ref.y < kLimit || l0 < kLimit)
        throw Error(ErrorCode::MapInversionFailure,
                    "natural extension: point leaves the doubled reference cell");
    return evaluate_in_element(*field_, face.element, ref, /*check_domain=*/false);
}

FieldSample NaturalExtension::evaluate(Vec2 point) const {
    const Mesh& mesh = *field_->mesh;
    if (const auto located = locate_point(mesh, point))
        return evaluate_in_element(*field_, located->first, located->second);

    const double d = domain_->signed_distance(point);
    if (std::abs(d) > skin_halfwidth_)
        throw Error(ErrorCode::OutsideSkin, "natural extension: point beyond the boundary skin");

    const double theta = std::atan2(point.y, point.x);
    const int face_index = face_for_angle(theta);
    const auto [theta0, theta1] = arcs_[static_cast<std::size_t>(face_index)];
    double local = wrap_positive(theta);
    if (local < theta0) local += 2.0 * M_PI;
    const double s_hint = std::clamp((local - theta0) / (theta1 - theta0), 0.0, 1.0);
    return evaluate_from_face(face_index, point, s_hint);
}

FieldSample natural_extension_eval(const Mesh& mesh, const SolutionField& u_h,
                                   const DomainGeometry& domain, Vec2 point) {
    if (u_h.mesh != &mesh)
        throw Error(ErrorCode::InvalidArgument, "natural_extension_eval: field/mesh mismatch");
    return NaturalExtension(u_h, domain).evaluate(point);
}

namespace {

/// Arc parameter s on face `face` whose image has polar angle theta, found
/// by Newton on the alignment cross(F_S(s), e(theta)) = 0.
double face_parameter_for_angle(const Mesh& mesh, const BoundaryFace& face, double theta,
                                double s_guess) {
    const Vec2 ray{std::cos(theta), std::sin(theta)};
    double s = s_guess;
    for (int it = 0; it < 40; ++it) {
        const FaceFrame frame = face_metric(mesh, face, s);
        const double residual = frame.point.cross(ray);
        const double slope = frame.covariant.cross(ray);
        if (std::abs(residual) <= 1e-14 * std::max(1.0, frame.point.norm())) return s;
        if (std::abs(slope) < 1e-300)
            throw Error(ErrorCode::MapInversionFailure, "face/arc alignment stalled");
        s -= residual / slope;
        if (!std::isfinite(s) || s < -1.0 || s > 2.0)
            throw Error(ErrorCode::MapInversionFailure, "face/arc alignment diverged");
    }
    throw Error(ErrorCode::MapInversionFailure, "face/arc alignment did not converge");
}

}  // namespace

ErrorNorms error_norms_exact_domain(const Mesh& mesh, const SolutionField& u_h,
                                    const ScalarField& u, const VectorField& grad_u,
                                    const DomainGeometry& domain, const QuadratureRule& quad_tri,
                                    const QuadratureRule& quad_edge) {
    require_error_quadrature(quad_tri, quad_edge);
    if (domain.kind() != DomainKind::UnitDisk)
        throw Error(ErrorCode::InvalidArgument, "exact-domain norms: unsupported domain kind");

    const NaturalExtension extension(u_h, domain);

    // Omega intersect Omega_h: plain element quadrature (the disk meshes
    // keep Omega_h inside Omega).
    double grad_omega = 0.0, l2_omega = 0.0;
    for (int e = 0; e < mesh.element_count(); ++e) {
        for (std::size_t q = 0; q < quad_tri.points.size(); ++q) {
            const FieldSample s = evaluate_in_element(u_h, e, quad_tri.points[q]);
            const MapPoint map = isoparametric_map(mesh, e, quad_tri.points[q]);
            const double w = quad_tri.weights[q] * std::abs(map.jacobian.det());
            const double diff = u(map.x) - s.value;
            const Vec2 gdiff = grad_u(map.x) - s.gradient;
            l2_omega += w * diff * diff;
            grad_omega += w * gdiff.norm_sq();
        }
    }

    double grad_gamma = 0.0, l2_gamma = 0.0;
    const auto& faces = mesh.boundary_faces();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const auto [theta0, theta1] = extension.face_arc(static_cast<int>(fi));
        const double span = theta1 - theta0;
        for (std::size_t q = 0; q < quad_edge.points.size(); ++q) {
            const double sq = quad_edge.points[q].x;
            const double theta = theta0 + sq * span;
            const double w_arc = quad_edge.weights[q] * span;  // exact measure d(gamma) = d(theta)
            const Vec2 on_gamma{std::cos(theta), std::sin(theta)};
            const Vec2 n = on_gamma;  // outward normal of the unit circle

            // Boundary norms on Gamma.
            const FieldSample ext = extension.evaluate_from_face(static_cast<int>(fi), on_gamma, sq);
            const double diff = u(on_gamma) - ext.value;
            const Vec2 gdiff = tangential_projection(grad_u(on_gamma) - ext.gradient, n);
            l2_gamma += w_arc * diff * diff;
            grad_gamma += w_arc * gdiff.norm_sq();

            // Skin cell between Gamma_h and Gamma along the ray of angle
            // theta: Omega \ Omega_h contributes t in [t*, 0] with the polar
            // measure (1 + t) dt dtheta.
            const double s_face =
                face_parameter_for_angle(mesh, faces[fi], theta, sq);
            const FaceFrame frame = face_metric(mesh, faces[fi], s_face);
            const double t_star = frame.point.norm() - 1.0;
            if (t_star >= -1e-15) continue;
            for (std::size_t qt = 0; qt < quad_edge.points.size(); ++qt) {
                const double t = t_star * (1.0 - quad_edge.points[qt].x);
                const double w = w_arc * quad_edge.weights[qt] * (-t_star) * (1.0 + t);
                const Vec2 x = on_gamma * (1.0 + t);
                const FieldSample skin =
                    extension.evaluate_from_face(static_cast<int>(fi), x, s_face);
                const double vdiff = u(x) - skin.value;
                const Vec2 gd = grad_u(x) - skin.gradient;
                l2_omega += w * vdiff * vdiff;
                grad_omega += w * gd.norm_sq();
            }
        }
    }

    return {std::sqrt(grad_omega), std::sqrt(grad_gamma), std::sqrt(l2_omega),
            std::sqrt(l2_gamma)};
}

double normal_discrepancy(const Mesh& mesh, const DomainGeometry& domain,
                          const QuadratureRule& quad_edge) {
    double worst = 0.0;
    for (const auto& face : mesh.boundary_faces()) {
        for (std::size_t q = 0; q < quad_edge.points.size(); ++q) {
            const FaceFrame frame = face_metric(mesh, face, quad_edge.points[q].x);
            const Vec2 n = domain.unit_normal(domain.closest_point(frame.point));
            worst = std::max(worst, (n - frame.normal).norm());
        }
    }
    return worst;
}

double consistency_residual(const Mesh& mesh, const ScalarField& u, const VectorField& grad_u,
                            const ScalarField& f, const ScalarField& tau,
                            const QuadratureRule& quad_tri, const QuadratureRule& quad_edge) {
    require_error_quadrature(quad_tri, quad_edge);
    const ReferenceElement ref(mesh.order());
    const int nn = ref.node_count();
    std::vector<double> residual(static_cast<std::size_t>(mesh.node_count()), 0.0);

    double values[6];
    Vec2 grads[6];
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto elem = mesh.element(e);
        for (std::size_t q = 0; q < quad_tri.points.size(); ++q) {
            const Vec2 p = quad_tri.points[q];
            const MapPoint map = isoparametric_map(mesh, e, p);
            const double w = quad_tri.weights[q] * std::abs(map.jacobian.det());
            ref.shape_values(p, values);
            ref.shape_gradients(p, grads);
            const Vec2 gu = grad_u(map.x);
            const double fv = f(map.x);
            for (int i = 0; i < nn; ++i) {
                const Vec2 phys_grad = map.jacobian.apply_inv_transpose(grads[i]);
                residual[static_cast<std::size_t>(elem[i])] +=
                    w * (gu.dot(phys_grad) - fv * values[i]);
            }
        }
    }
    for (const auto& face : mesh.boundary_faces()) {
        const auto elem = mesh.element(face.element);
        const auto face_nodes = ref.edge_nodes(face.local_edge);
        const Vec2 dir = ReferenceElement::edge_direction(face.local_edge);
        for (std::size_t q = 0; q < quad_edge.points.size(); ++q) {
            const double s = quad_edge.points[q].x;
            const FaceFrame frame = face_metric(mesh, face, s);
            const double w = quad_edge.weights[q];
            ref.shape_values(ReferenceElement::edge_point(face.local_edge, s), values);
            ref.shape_gradients(ReferenceElement::edge_point(face.local_edge, s), grads);
            const double uv = u(frame.point);
            const double tv = tau(frame.point);
            const Vec2 tangent = frame.covariant / frame.sqrt_det_g;
            const double du_ds = grad_u(frame.point).dot(tangent);
            for (int local : face_nodes) {
                const double dphi_ds = grads[local].dot(dir) / frame.sqrt_det_g;
                residual[static_cast<std::size_t>(elem[local])] +=
                    w * frame.sqrt_det_g *
                    ((uv - tv) * values[local] + du_ds * dphi_ds);
            }
        }
    }

    const AssembledSystem system = assemble_system(mesh, f, tau, quad_tri, quad_edge);
    const std::vector<double> diag = system.matrix.diagonal();
    double acc = 0.0;
    for (std::size_t i = 0; i < residual.size(); ++i) acc += residual[i] * residual[i] / diag[i];
    return std::sqrt(acc);
}

}  // namespace bsfem
