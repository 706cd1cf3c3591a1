#pragma once

#include <vector>

#include "core.hpp"

namespace bsfem {

/// Quadrature rule on a reference cell. Triangle rules live on the unit
/// triangle {x >= 0, y >= 0, x + y <= 1}; edge rules on [0, 1] with points
/// stored in the x component.
struct QuadratureRule {
    enum class Cell { Triangle, Edge };

    Cell cell = Cell::Triangle;
    std::vector<Vec2> points;
    std::vector<double> weights;
    int exactness_degree = 0;

    /// Smallest built-in triangle rule exact for polynomials up to `degree`.
    static QuadratureRule triangle(int degree);
    /// Gauss-Legendre rule with n points on [0, 1]; exact to degree 2n - 1.
    static QuadratureRule edge_gauss(int n_points);
};

/// Gauss-Legendre nodes/weights on [-1, 1], by Newton iteration on P_n.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace bsfem
