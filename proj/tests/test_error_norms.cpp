#include <cmath>
#include <random>

#include "doctest.h"
#include "error_norms.hpp"
#include "geometry.hpp"
#include "interpolation.hpp"
#include "study.hpp"

using namespace bsfem;

namespace {

const QuadratureRule kTriErr = QuadratureRule::triangle(9);
const QuadratureRule kEdgeErr = QuadratureRule::edge_gauss(7);

SolveResult solve_cubic10(const Mesh& mesh) {
    StudyConfig config;
    config.order = mesh.order();
    return solve_level(mesh, registry_lookup("cubic10"), config);
}

}  // namespace

TEST_CASE("discrete norms vanish for an interpolated constant") {
    const Mesh mesh = generate_disk_mesh(24, 1);
    const SolutionField field = lagrange_interpolate(mesh, [](Vec2) { return 3.0; });
    const ErrorNorms norms = error_norms_discrete(
        mesh, field, [](Vec2) { return 3.0; }, [](Vec2) { return Vec2{0.0, 0.0}; }, kTriErr,
        kEdgeErr);
    CHECK(norms.grad_l2_omega <= 1e-12);
    CHECK(norms.grad_l2_gamma <= 1e-12);
    CHECK(norms.l2_omega <= 1e-12);
    CHECK(norms.l2_gamma <= 1e-12);
}

TEST_CASE("weak error quadrature is rejected") {
    const Mesh mesh = generate_disk_mesh(16, 1);
    const SolutionField field = lagrange_interpolate(mesh, [](Vec2) { return 0.0; });
    CHECK_THROWS_AS(error_norms_discrete(mesh, field, [](Vec2) { return 0.0; },
                                         [](Vec2) { return Vec2{0.0, 0.0}; },
                                         QuadratureRule::triangle(5), kEdgeErr),
                    Error);
    CHECK_THROWS_AS(error_norms_discrete(mesh, field, [](Vec2) { return 0.0; },
                                         [](Vec2) { return Vec2{0.0, 0.0}; }, kTriErr,
                                         QuadratureRule::edge_gauss(5)),
                    Error);
}

TEST_CASE("solved errors sit inside the reported magnitude brackets") {
    const auto& sol = registry_lookup("cubic10");
    SUBCASE("N=32, k=1") {
        const Mesh mesh = generate_disk_mesh(32, 1);
        const SolveResult solved = solve_cubic10(mesh);
        const ErrorNorms norms =
            error_norms_discrete(mesh, solved.field, sol.u, sol.grad_u, kTriErr, kEdgeErr);
        CHECK(norms.grad_l2_omega >= 1.2);
        CHECK(norms.grad_l2_omega <= 2.8);
        CHECK(norms.l2_omega >= 0.05);
        CHECK(norms.l2_omega <= 0.11);
    }
    SUBCASE("N=256, k=1") {
        const Mesh mesh = generate_disk_mesh(256, 1);
        const SolveResult solved = solve_cubic10(mesh);
        const ErrorNorms norms =
            error_norms_discrete(mesh, solved.field, sol.u, sol.grad_u, kTriErr, kEdgeErr);
        CHECK(norms.grad_l2_omega >= 0.15);
        CHECK(norms.grad_l2_omega <= 0.35);
        CHECK(norms.l2_gamma >= 1.2e-3);
        CHECK(norms.l2_gamma <= 3.2e-3);
    }
}

TEST_CASE("natural extension reproduces affine element polynomials") {
    const Mesh mesh = generate_disk_mesh(32, 1);
    const DomainGeometry disk = DomainGeometry::unit_disk();
    auto affine = [](Vec2 p) { return 2.0 * p.x - 0.5 * p.y + 1.0; };
    const SolutionField field = lagrange_interpolate(mesh, affine);
    const NaturalExtension extension(field, disk);
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        // Random point between Gamma_h and Gamma.
        const double theta = angle(rng);
        const double r = 1.0 - unit(rng) * 0.8 * extension.skin_halfwidth();
        const Vec2 x{r * std::cos(theta), r * std::sin(theta)};
        const FieldSample sample = extension.evaluate(x);
        CHECK(sample.value == doctest::Approx(affine(x)).epsilon(1e-10));
    }
}

TEST_CASE("natural extension is continuous across Gamma_h within one element") {
    const Mesh mesh = generate_disk_mesh(32, 2);
    const DomainGeometry disk = DomainGeometry::unit_disk();
    const SolutionField field =
        lagrange_interpolate(mesh, [](Vec2 p) { return 10.0 * p.x * p.x * p.y; });
    const NaturalExtension extension(field, disk);
    const auto& faces = mesh.boundary_faces();
    for (std::size_t fi = 0; fi < faces.size(); fi += 7) {
        for (double s : {0.25, 0.5, 0.75}) {
            const FaceFrame frame = face_metric(mesh, faces[fi], s);
            const FieldSample inside = evaluate_in_element(
                field, faces[fi].element, ReferenceElement::edge_point(faces[fi].local_edge, s));
            const FieldSample through_extension =
                extension.evaluate_from_face(static_cast<int>(fi), frame.point, s);
            CHECK(std::abs(inside.value - through_extension.value) <= 1e-10);
        }
    }
}

TEST_CASE("natural extension error is small and shrinks under refinement") {
    const auto& sol = registry_lookup("cubic10");
    const DomainGeometry disk = DomainGeometry::unit_disk();

    const Mesh mesh64 = generate_disk_mesh(64, 1);
    const SolveResult solved64 = solve_cubic10(mesh64);
    const ErrorNorms norms64 =
        error_norms_discrete(mesh64, solved64.field, sol.u, sol.grad_u, kTriErr, kEdgeErr);
    const NaturalExtension ext64(solved64.field, disk);

    const Mesh mesh128 = generate_disk_mesh(128, 1);
    const SolveResult solved128 = solve_cubic10(mesh128);
    const NaturalExtension ext128(solved128.field, disk);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double bound = 5.0 * norms64.l2_gamma / std::sqrt(2.0 * M_PI);
    double total64 = 0.0, total128 = 0.0;
    for (int i = 0; i < 20; ++i) {
        // Fixed physical points in the skin of the N=64 mesh.
        const double theta = angle(rng);
        const double r = 1.0 - unit(rng) * 0.9 * ext64.skin_halfwidth();
        const Vec2 x{r * std::cos(theta), r * std::sin(theta)};
        const double err64 = std::abs(sol.u(x) - ext64.evaluate(x).value);
        const double err128 = std::abs(sol.u(x) - ext128.evaluate(x).value);
        CHECK(err64 <= bound);
        CHECK(std::isfinite(err128));
        total64 += err64;
        total128 += err128;
    }
    CHECK(total128 < total64);
}

TEST_CASE("points beyond the skin are rejected") {
    const Mesh mesh = generate_disk_mesh(32, 1);
    const DomainGeometry disk = DomainGeometry::unit_disk();
    const SolutionField field = lagrange_interpolate(mesh, [](Vec2) { return 1.0; });
    const NaturalExtension extension(field, disk);
    CHECK_THROWS_AS(extension.evaluate({1.2, 0.0}), Error);
    // One-shot wrapper: interior evaluation and the same rejection.
    CHECK(natural_extension_eval(mesh, field, disk, {0.1, 0.2}).value ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(natural_extension_eval(mesh, field, disk, {1.2, 0.0}), Error);
}

TEST_CASE("exact-domain norms vanish for an interpolated constant") {
    const Mesh mesh = generate_disk_mesh(24, 1);
    const DomainGeometry disk = DomainGeometry::unit_disk();
    const SolutionField field = lagrange_interpolate(mesh, [](Vec2) { return 2.0; });
    const ErrorNorms norms = error_norms_exact_domain(
        mesh, field, [](Vec2) { return 2.0; }, [](Vec2) { return Vec2{0.0, 0.0}; }, disk, kTriErr,
        kEdgeErr);
    CHECK(norms.grad_l2_omega <= 1e-12);
    CHECK(norms.grad_l2_gamma <= 1e-12);
    CHECK(norms.l2_omega <= 1e-12);
    CHECK(norms.l2_gamma <= 1e-12);
}

TEST_CASE("exact and discrete boundary L2 errors agree within a factor of three") {
    const auto& sol = registry_lookup("cubic10");
    const DomainGeometry disk = DomainGeometry::unit_disk();
    for (int order : {1, 2}) {
        for (int n : {32, 64}) {
            const Mesh mesh = generate_disk_mesh(n, order);
            const SolveResult solved = solve_cubic10(mesh);
            const ErrorNorms discrete =
                error_norms_discrete(mesh, solved.field, sol.u, sol.grad_u, kTriErr, kEdgeErr);
            const ErrorNorms exact = error_norms_exact_domain(mesh, solved.field, sol.u,
                                                              sol.grad_u, disk, kTriErr, kEdgeErr);
            CHECK(exact.l2_gamma <= 3.0 * discrete.l2_gamma);
            CHECK(discrete.l2_gamma <= 3.0 * exact.l2_gamma);
        }
    }
}

TEST_CASE("normal discrepancy orders") {
    const DomainGeometry disk = DomainGeometry::unit_disk();
    SUBCASE("first order for straight faces") {
        const double d32 = normal_discrepancy(generate_disk_mesh(32, 1), disk, kEdgeErr);
        const double d64 = normal_discrepancy(generate_disk_mesh(64, 1), disk, kEdgeErr);
        CHECK(d64 / d32 >= 0.4);
        CHECK(d64 / d32 <= 0.6);
    }
    SUBCASE("curved faces improve the discrepancy") {
        const double straight = normal_discrepancy(generate_disk_mesh(32, 1), disk, kEdgeErr);
        const double curved = normal_discrepancy(generate_disk_mesh(32, 2), disk, kEdgeErr);
        CHECK(curved < 0.05 * straight);
    }
    SUBCASE("chord normal at a node differs from the radial normal by the half-angle") {
        const Mesh mesh = generate_disk_mesh(32, 1);
        double worst = 0.0;
        for (const auto& face : mesh.boundary_faces()) {
            const FaceFrame frame = face_metric(mesh, face, 0.0);
            const Vec2 n = disk.unit_normal(disk.closest_point(frame.point));
            worst = std::max(worst, (n - frame.normal).norm());
        }
        CHECK(worst >= std::sin(M_PI / 32.0));
    }
}

TEST_CASE("consistency residual vanishes for constants") {
    const Mesh mesh = generate_disk_mesh(24, 1);
    const double residual = consistency_residual(
        mesh, [](Vec2) { return 1.0; }, [](Vec2) { return Vec2{0.0, 0.0}; },
        [](Vec2) { return 0.0; }, [](Vec2) { return 1.0; }, kTriErr, kEdgeErr);
    CHECK(residual <= 1e-10);
}

TEST_CASE("consistency residual decays under refinement") {
    const auto& sol = registry_lookup("cubic10");
    for (int order : {1, 2}) {
        double prev = 0.0;
        for (int n : {32, 64, 128}) {
            const Mesh mesh = generate_disk_mesh(n, order);
            const double residual = consistency_residual(mesh, sol.u, sol.grad_u, sol.f, sol.tau,
                                                         kTriErr, kEdgeErr);
            CHECK(residual > 0.0);
            if (prev > 0.0) CHECK(residual < 0.5 * prev);
            prev = residual;
        }
    }
}
