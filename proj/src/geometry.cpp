#include "geometry.hpp"

#include <algorithm>
#include <cmath>

#include "assembly.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"

namespace bsfem {

namespace {
constexpr double kLevelSetTol = 1e-12;
constexpr double kResidualTol = 1e-12;
constexpr int kMaxNewtonIters = 50;
}  // namespace

DomainGeometry DomainGeometry::unit_disk() { return DomainGeometry(DomainKind::UnitDisk, 0.5); }

double DomainGeometry::level_set(Vec2 p) const {
    switch (kind_) {
        case DomainKind::UnitDisk:
            return p.norm() - 1.0;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown domain kind");
}

Vec2 DomainGeometry::level_set_gradient(Vec2 p) const {
    switch (kind_) {
        case DomainKind::UnitDisk: {
            const double r = p.norm();
            if (r < 1e-14) return {0.0, 0.0};
            return p / r;
        }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown domain kind");
}

Vec2 DomainGeometry::closest_point(Vec2 p) const {
    // Inside the tube the projection is unique by construction. Outside it we
    // still attempt the projection but reject points where it is ambiguous,
    // signalled by a degenerate level-set gradient (e.g. the disk center).
    if (level_set_gradient(p).norm() < 0.5)
        throw Error(ErrorCode::OutsideTube,
                    "closest_point: ambiguous projection outside the tube");

    // Damped Newton on the level set along its gradient, with a tangential
    // slide so that p - q stays aligned with grad phi(q).
    Vec2 q = p;
    for (int it = 0; it < kMaxNewtonIters; ++it) {
        double phi = level_set(q);
        Vec2 g = level_set_gradient(q);
        const double g2 = g.norm_sq();
        if (g2 < 1e-20)
            throw Error(ErrorCode::DegenerateGradient, "closest_point: degenerate gradient");

        Vec2 step = g * (phi / g2);
        double damping = 1.0;
        Vec2 q_next = q - step;
        while (std::abs(level_set(q_next)) > std::abs(phi) && damping > 1e-8) {
            damping *= 0.5;
            q_next = q - step * damping;
        }
        q = q_next;

        // Tangential correction: slide along the boundary toward the foot point.
        Vec2 n = level_set_gradient(q);
        const double nn = n.norm();
        if (nn < 1e-10)
            throw Error(ErrorCode::DegenerateGradient, "closest_point: degenerate gradient");
        n = n / nn;
        const Vec2 t{-n.y, n.x};
        q += t * (p - q).dot(t);

        const double d = (p - q).dot(n);
        const Vec2 residual = p - q - n * d;
        if (std::abs(level_set(q)) <= kLevelSetTol && residual.norm() <= kResidualTol) return q;
    }
    throw Error(ErrorCode::NonConvergence, "closest_point: projection did not converge");
}

double DomainGeometry::signed_distance(Vec2 p, bool* exact) const {
    if (std::abs(level_set(p)) > tube_halfwidth_) {
        if (exact) *exact = false;
        return level_set(p);
    }
    if (exact) *exact = true;
    const Vec2 q = closest_point(p);
    const double dist = (p - q).norm();
    return level_set(p) < 0.0 ? -dist : dist;
}

Vec2 DomainGeometry::unit_normal(Vec2 boundary_point) const {
    if (std::abs(level_set(boundary_point)) > 1e-8)
        throw Error(ErrorCode::InvalidArgument, "unit_normal: point not on the boundary");
    const Vec2 g = level_set_gradient(boundary_point);
    const double n = g.norm();
    if (n < 1e-10)
        throw Error(ErrorCode::DegenerateGradient, "unit_normal: |grad phi| below 1e-10");
    return g / n;
}

double boundary_distance_profile(const DomainGeometry& domain, const Mesh& mesh,
                                 const QuadratureRule& edge_rule) {
    double worst = 0.0;
    for (const auto& face : mesh.boundary_faces()) {
        for (std::size_t q = 0; q < edge_rule.points.size(); ++q) {
            const FaceFrame frame = face_metric(mesh, face, edge_rule.points[q].x);
            worst = std::max(worst, std::abs(domain.signed_distance(frame.point)));
        }
    }
    return worst;
}

}  // namespace bsfem
