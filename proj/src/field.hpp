#pragma once

#include <vector>

#include "assembly.hpp"
#include "mesh.hpp"

namespace bsfem {

/// Finite element function given by one coefficient per global node.
struct SolutionField {
    const Mesh* mesh = nullptr;
    std::vector<double> coefficients;

    SolutionField() = default;
    SolutionField(const Mesh& m, std::vector<double> coeffs)
        : mesh(&m), coefficients(std::move(coeffs)) {
        if (coefficients.size() != static_cast<std::size_t>(m.node_count()))
            throw Error(ErrorCode::DimensionMismatch,
                        "SolutionField: coefficient count must equal node count");
    }
};

struct FieldSample {
    double value = 0.0;
    Vec2 gradient;  // ambient gradient
};

/// Evaluates the field and its ambient gradient inside element `element_id`
/// at a reference point. With check_domain = false the element polynomial is
/// extrapolated beyond the unit triangle.
FieldSample evaluate_in_element(const SolutionField& field, int element_id, Vec2 ref_point,
                                bool check_domain = true);

}  // namespace bsfem
