#pragma once

#include <array>
#include <vector>

#include "core.hpp"

namespace bsfem {

/// Lagrange shape functions of order k in {1, 2} on the unit triangle.
/// Node ordering: vertices (0,0), (1,0), (0,1) counter-clockwise, then for
/// k = 2 the midpoints of edges (0,1), (1,2), (2,0).
class ReferenceElement {
public:
    explicit ReferenceElement(int order);

    int order() const { return order_; }
    int node_count() const { return order_ == 1 ? 3 : 6; }
    const std::vector<Vec2>& nodes() const { return nodes_; }

    void shape_values(Vec2 p, double* out) const;
    void shape_gradients(Vec2 p, Vec2* out) const;

    /// Local vertex indices (begin, end) of edge e, traversed CCW.
    static constexpr std::array<int, 2> edge_vertices(int e) {
        return {e, (e + 1) % 3};
    }
    /// Local node indices lying on edge e (k+1 of them).
    std::vector<int> edge_nodes(int e) const;

    /// Reference coordinates of the point at arc parameter s in [0,1] on edge e.
    static Vec2 edge_point(int e, double s);
    /// Constant direction d(edge_point)/ds of edge e.
    static Vec2 edge_direction(int e);

private:
    int order_;
    std::vector<Vec2> nodes_;
};

}  // namespace bsfem
