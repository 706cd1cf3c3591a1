#include <cmath>

#include "doctest.h"
#include "quadrature.hpp"

using namespace bsfem;

namespace {

// Exact integral of x^a y^b over the unit triangle: a! b! / (a + b + 2)!.
double triangle_monomial(int a, int b) {
    double value = 1.0;
    for (int k = 1; k <= a; ++k) value *= k;
    for (int k = 1; k <= b; ++k) value *= k;
    for (int k = 1; k <= a + b + 2; ++k) value /= k;
    return value;
}

double integrate_triangle(const QuadratureRule& rule, int a, int b) {
    double acc = 0.0;
    for (std::size_t q = 0; q < rule.points.size(); ++q)
        acc += rule.weights[q] * std::pow(rule.points[q].x, a) * std::pow(rule.points[q].y, b);
    return acc;
}

}  // namespace

TEST_CASE("triangle rules integrate monomials exactly up to their degree") {
    for (int degree : {1, 2, 3, 5, 7, 9, 14, 18}) {
        const QuadratureRule rule = QuadratureRule::triangle(degree);
        CHECK(rule.exactness_degree >= degree);
        double weight_sum = 0.0;
        for (double w : rule.weights) weight_sum += w;
        CHECK(weight_sum == doctest::Approx(0.5).epsilon(1e-14));
        for (int a = 0; a + 0 <= rule.exactness_degree; ++a)
            for (int b = 0; a + b <= rule.exactness_degree; ++b)
                CHECK(integrate_triangle(rule, a, b) ==
                      doctest::Approx(triangle_monomial(a, b)).epsilon(1e-13));
    }
}

TEST_CASE("degree-5 seven-point rule") {
    const QuadratureRule rule = QuadratureRule::triangle(5);
    CHECK(rule.points.size() == 7);
    CHECK(rule.exactness_degree == 5);
}

TEST_CASE("edge Gauss rules") {
    for (int n : {1, 2, 3, 5, 7, 10}) {
        const QuadratureRule rule = QuadratureRule::edge_gauss(n);
        CHECK(rule.exactness_degree == 2 * n - 1);
        double weight_sum = 0.0;
        for (double w : rule.weights) weight_sum += w;
        CHECK(weight_sum == doctest::Approx(1.0).epsilon(1e-14));
        for (int p = 0; p <= rule.exactness_degree; ++p) {
            double acc = 0.0;
            for (std::size_t q = 0; q < rule.points.size(); ++q)
                acc += rule.weights[q] * std::pow(rule.points[q].x, p);
            CHECK(acc == doctest::Approx(1.0 / (p + 1)).epsilon(1e-13));
        }
    }
}

TEST_CASE("five-point edge rule is exact to degree nine") {
    const QuadratureRule rule = QuadratureRule::edge_gauss(5);
    CHECK(rule.points.size() == 5);
    CHECK(rule.exactness_degree == 9);
}
