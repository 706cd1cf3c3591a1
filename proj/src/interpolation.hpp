#pragma once

#include <variant>
#include <vector>

#include "field.hpp"

namespace bsfem {

/// Nodal interpolation: coefficients are point values at the mesh nodes.
SolutionField lagrange_interpolate(const Mesh& mesh, const ScalarField& v);

/// Per-node simplex assignment and dual-basis rows for the quasi-interpolation
/// operator. Boundary nodes get the lowest-id boundary face containing them;
/// interior nodes the lowest-id element. Each row holds the coefficients of
/// the dual function against the local shape functions of that simplex, so
/// that (phi_p, psi_p) = 1 and (phi_q, psi_p) = 0 on sigma_p.
struct NodeAssignment {
    struct Entry {
        bool on_boundary = false;
        int simplex = -1;  // boundary-face index or element id
        int local_index = -1;
        std::vector<double> dual_row;
    };
    std::vector<Entry> entries;
};

NodeAssignment build_node_assignment(const Mesh& mesh, const QuadratureRule& quad_edge,
                                     const QuadratureRule& quad_tri);

/// Quasi-interpolation with dual-basis averages over the assigned simplices;
/// reproduces finite element functions exactly because the same quadrature
/// defines both the Gram matrices and the averages.
SolutionField scott_zhang_interpolate(const Mesh& mesh, const NodeAssignment& assignment,
                                      const ScalarField& v, const QuadratureRule& quad_edge,
                                      const QuadratureRule& quad_tri);

}  // namespace bsfem
