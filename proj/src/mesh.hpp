#pragma once

#include <span>
#include <string>
#include <vector>

#include "core.hpp"

namespace bsfem {

struct BoundaryFace {
    int element = -1;
    int local_edge = -1;  // 0, 1, or 2

    bool operator==(const BoundaryFace&) const = default;
};

struct MeshStats {
    double h = 0.0;                 // max straight-skeleton edge length
    double min_angle_deg = 0.0;     // over straight skeletons
    double regularity_ratio = 0.0;  // max h_T / inradius_T
};

/// Order-k isoparametric triangulation. Elements store (k+1)(k+2)/2 node ids:
/// three CCW vertices, then for k = 2 the nodes on edges (0,1), (1,2), (2,0).
/// Immutable after construction.
class Mesh {
public:
    Mesh(int order, std::vector<Vec2> nodes, std::vector<int> element_nodes);

    int order() const { return order_; }
    int nodes_per_element() const { return order_ == 1 ? 3 : 6; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    int element_count() const {
        return static_cast<int>(element_nodes_.size()) / nodes_per_element();
    }

    Vec2 node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    const std::vector<Vec2>& nodes() const { return nodes_; }
    std::span<const int> element(int e) const {
        return {element_nodes_.data() + static_cast<std::size_t>(e) * nodes_per_element(),
                static_cast<std::size_t>(nodes_per_element())};
    }

    const std::vector<BoundaryFace>& boundary_faces() const { return boundary_faces_; }
    bool is_boundary_node(int id) const { return boundary_node_[static_cast<std::size_t>(id)]; }
    int boundary_node_count() const;

    double h() const { return stats_.h; }
    const MeshStats& stats() const { return stats_; }

private:
    int order_;
    std::vector<Vec2> nodes_;
    std::vector<int> element_nodes_;
    std::vector<BoundaryFace> boundary_faces_;
    std::vector<char> boundary_node_;
    MeshStats stats_;
};

/// Quasi-uniform order-k triangulation of the unit disk with exactly
/// n_boundary vertices on the unit circle. Deterministic; throws
/// MeshQualityFailure when a triangle dips below the 20 degree minimum angle
/// or the isoparametric Jacobian check fails.
Mesh generate_disk_mesh(int n_boundary, int order);

Mesh load_mesh(const std::string& path);
void write_mesh(const Mesh& mesh, const std::string& path);

/// Edges belonging to exactly one element. Throws TopologyError when an edge
/// is shared by three or more.
std::vector<BoundaryFace> extract_boundary_faces(int element_count,
                                                 std::span<const int> element_nodes,
                                                 int nodes_per_element);

MeshStats mesh_size(const Mesh& mesh);

/// Domain-independent invariants: positive Jacobians, CCW orientation, a
/// single closed boundary cycle, the Euler relation, and shape regularity.
/// Throws InvariantViolation naming the failed check.
void validate_mesh(const Mesh& mesh);

}  // namespace bsfem
