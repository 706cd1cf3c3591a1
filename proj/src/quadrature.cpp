#include "quadrature.hpp"

#include <cmath>

namespace bsfem {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "gauss_legendre: need at least 1 point");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // Legendre recurrence up to degree n.
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
}

QuadratureRule QuadratureRule::edge_gauss(int n_points) {
    std::vector<double> x, w;
    gauss_legendre(n_points, x, w);
    QuadratureRule rule;
    rule.cell = Cell::Edge;
    rule.exactness_degree = 2 * n_points - 1;
    rule.points.reserve(n_points);
    rule.weights.reserve(n_points);
    for (int i = 0; i < n_points; ++i) {
        rule.points.push_back({0.5 * (x[i] + 1.0), 0.0});
        rule.weights.push_back(0.5 * w[i]);
    }
    return rule;
}

namespace {

void push_symmetric(QuadratureRule& rule, double a, double w) {
    // Orbit of a point with barycentric coordinates (1-2a, a, a).
    rule.points.push_back({a, a});
    rule.points.push_back({1.0 - 2.0 * a, a});
    rule.points.push_back({a, 1.0 - 2.0 * a});
    rule.weights.insert(rule.weights.end(), 3, w);
}

QuadratureRule triangle_centroid() {
    QuadratureRule rule;
    rule.cell = QuadratureRule::Cell::Triangle;
    rule.exactness_degree = 1;
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(0.5);
    return rule;
}

QuadratureRule triangle_deg2() {
    QuadratureRule rule;
    rule.cell = QuadratureRule::Cell::Triangle;
    rule.exactness_degree = 2;
    push_symmetric(rule, 1.0 / 6.0, 1.0 / 6.0);
    return rule;
}

// Radon's 7-point rule, exact to degree 5.
QuadratureRule triangle_deg5() {
    QuadratureRule rule;
    rule.cell = QuadratureRule::Cell::Triangle;
    rule.exactness_degree = 5;
    const double s15 = std::sqrt(15.0);
    rule.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    rule.weights.push_back(0.5 * 9.0 / 40.0);
    push_symmetric(rule, (6.0 - s15) / 21.0, 0.5 * (155.0 - s15) / 1200.0);
    push_symmetric(rule, (6.0 + s15) / 21.0, 0.5 * (155.0 + s15) / 1200.0);
    return rule;
}

// Conical-product rule: Gauss points through the Duffy map
// (u, v) -> (u, v(1-u)) with Jacobian (1-u). A polynomial of total degree p
// pulls back to degree <= p+1 in u and <= p in v, so n >= (p+3)/2 points per
// direction integrate it exactly.
QuadratureRule triangle_duffy(int degree) {
    const int n = (degree + 3) / 2 + 1;
    std::vector<double> x, w;
    gauss_legendre(n, x, w);
    QuadratureRule rule;
    rule.cell = QuadratureRule::Cell::Triangle;
    rule.exactness_degree = degree;
    rule.points.reserve(n * n);
    rule.weights.reserve(n * n);
    for (int i = 0; i < n; ++i) {
        const double u = 0.5 * (x[i] + 1.0);
        const double wu = 0.5 * w[i];
        for (int j = 0; j < n; ++j) {
            const double v = 0.5 * (x[j] + 1.0);
            const double wv = 0.5 * w[j];
            rule.points.push_back({u, v * (1.0 - u)});
            rule.weights.push_back(wu * wv * (1.0 - u));
        }
    }
    return rule;
}

}  // namespace

QuadratureRule QuadratureRule::triangle(int degree) {
    if (degree < 0) throw Error(ErrorCode::InvalidArgument, "triangle rule: negative degree");
    if (degree <= 1) return triangle_centroid();
    if (degree == 2) return triangle_deg2();
    if (degree <= 5) return triangle_deg5();
    return triangle_duffy(degree);
}

}  // namespace bsfem
