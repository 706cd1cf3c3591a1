#pragma once

#include "core.hpp"

namespace bsfem {

class Mesh;
struct QuadratureRule;

enum class DomainKind { UnitDisk };

/// Implicit representation of a smooth domain via a level-set function:
/// phi < 0 inside, phi = 0 on the boundary, phi > 0 outside. Within the
/// tube |d| <= tube_halfwidth() every point has a unique closest boundary
/// point, which is what signed_distance/closest_point compute.
class DomainGeometry {
public:
    static DomainGeometry unit_disk();

    DomainKind kind() const { return kind_; }
    double tube_halfwidth() const { return tube_halfwidth_; }

    double level_set(Vec2 p) const;
    Vec2 level_set_gradient(Vec2 p) const;

    /// Signed distance to the boundary (negative inside). Exact within the
    /// tube; outside it returns the level-set value as a proxy and, when
    /// `exact` is non-null, reports which contract applied.
    double signed_distance(Vec2 p, bool* exact = nullptr) const;

    /// Closest boundary point pi(p). Throws OutsideTube when the projection
    /// is ambiguous (|d| > tube_halfwidth), NonConvergence when the damped
    /// Newton iteration fails.
    Vec2 closest_point(Vec2 p) const;

    /// Outward unit normal at a boundary point (|phi| <= 1e-8 required).
    Vec2 unit_normal(Vec2 boundary_point) const;

private:
    explicit DomainGeometry(DomainKind kind, double tube_halfwidth)
        : kind_(kind), tube_halfwidth_(tube_halfwidth) {}

    DomainKind kind_;
    double tube_halfwidth_;
};

/// Max of |signed distance| over all boundary-face quadrature points: a
/// computable proxy for dist(Gamma, Gamma_h).
double boundary_distance_profile(const DomainGeometry& domain, const Mesh& mesh,
                                 const QuadratureRule& edge_rule);

}  // namespace bsfem
