#include <cmath>
#include <random>

#include "doctest.h"
#include "geometry.hpp"
#include "mesh.hpp"
#include "quadrature.hpp"

using namespace bsfem;

TEST_CASE("signed distance on the disk") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    CHECK(disk.signed_distance({2.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(disk.signed_distance({0.5, 0.0}) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::abs(disk.signed_distance({std::cos(0.3), std::sin(0.3)})) <= 1e-12);
}

TEST_CASE("signed distance outside the tube returns the level set as proxy") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    bool exact = true;
    const double d = disk.signed_distance({0.0, 0.0}, &exact);
    CHECK(!exact);
    CHECK(d == doctest::Approx(-1.0));
}

TEST_CASE("closest point on the disk") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    const Vec2 p = disk.closest_point({2.0, 0.0});
    CHECK(p.x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.y) <= 1e-12);
    const Vec2 q = disk.closest_point({0.5, 0.5});
    CHECK(q.x == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(q.y == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_WITH_AS(disk.closest_point({0.0, 0.0}), doctest::Contains("tube"), Error);
}

TEST_CASE("unit normal on the disk") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    const Vec2 n1 = disk.unit_normal({1.0, 0.0});
    CHECK(n1.x == doctest::Approx(1.0).epsilon(1e-14));
    const Vec2 n2 = disk.unit_normal({0.0, -1.0});
    CHECK(n2.y == doctest::Approx(-1.0).epsilon(1e-14));
    const double theta = 1.1;
    const Vec2 n3 = disk.unit_normal({std::cos(theta), std::sin(theta)});
    CHECK(n3.x == doctest::Approx(std::cos(theta)).epsilon(1e-14));
    CHECK(n3.y == doctest::Approx(std::sin(theta)).epsilon(1e-14));
    CHECK(n3.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("projection properties at random tube points") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    std::mt19937 rng(831);
    std::uniform_real_distribution<double> radius(0.5, 1.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int i = 0; i < 100; ++i) {
        const double r = radius(rng);
        const double t = angle(rng);
        const Vec2 x{r * std::cos(t), r * std::sin(t)};
        const Vec2 p = disk.closest_point(x);

        // Idempotence.
        const Vec2 pp = disk.closest_point(p);
        CHECK((pp - p).norm() <= 1e-10);

        // Unique decomposition x = pi(x) + d(x) n(pi(x)).
        const double d = disk.signed_distance(x);
        const Vec2 reconstructed = p + disk.unit_normal(p) * d;
        CHECK((reconstructed - x).norm() <= 1e-10);

        // Disk oracle pi(x) = x / |x|.
        CHECK((p - x / x.norm()).norm() <= 1e-10);

        // Sign agreement with the level set.
        CHECK(d * disk.level_set(x) >= 0.0);
    }
}

TEST_CASE("level set gradient is non-degenerate in the tube") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> radius(0.5, 1.5);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int i = 0; i < 100; ++i) {
        const double r = radius(rng);
        const double t = angle(rng);
        const Vec2 x{r * std::cos(t), r * std::sin(t)};
        if (std::abs(disk.level_set(x)) <= disk.tube_halfwidth())
            CHECK(disk.level_set_gradient(x).norm() >= 0.5);
    }
}

TEST_CASE("boundary distance profile: chord sagitta for k=1") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    const QuadratureRule edge = QuadratureRule::edge_gauss(7);
    const Mesh mesh32 = generate_disk_mesh(32, 1);
    const double profile32 = boundary_distance_profile(disk, mesh32, edge);
    const double bound = std::pow(2.0 * M_PI / 32.0, 2) / 4.0;
    CHECK(profile32 <= bound);
    // The sagitta of a unit-circle chord over 1/32 of the circle.
    const double sagitta = 1.0 - std::cos(M_PI / 32.0);
    CHECK(profile32 == doctest::Approx(sagitta).epsilon(1e-2));

    const Mesh mesh64 = generate_disk_mesh(64, 1);
    const double profile64 = boundary_distance_profile(disk, mesh64, edge);
    const double ratio = profile64 / profile32;
    CHECK(ratio >= 0.2);
    CHECK(ratio <= 0.3);
    CHECK(ratio == doctest::Approx((1.0 - std::cos(M_PI / 64.0)) / sagitta).epsilon(5e-2));
}

TEST_CASE("boundary distance profile vanishes at on-circle nodes") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    const Mesh mesh = generate_disk_mesh(32, 1);
    QuadratureRule endpoints;
    endpoints.cell = QuadratureRule::Cell::Edge;
    endpoints.points = {{0.0, 0.0}, {1.0, 0.0}};
    endpoints.weights = {0.5, 0.5};
    endpoints.exactness_degree = 1;
    CHECK(boundary_distance_profile(disk, mesh, endpoints) <= 1e-12);
}
