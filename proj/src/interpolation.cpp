#include "interpolation.hpp"

#include <cmath>

namespace bsfem {

namespace {

/// In-place inverse of a small dense row-major matrix (n <= 6) by
/// Gauss-Jordan with partial pivoting.
void invert_dense(std::vector<double>& a, int n) {
    std::vector<double> inv(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv[static_cast<std::size_t>(i * n + i)] = 1.0;
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[static_cast<std::size_t>(r * n + col)]) >
                std::abs(a[static_cast<std::size_t>(pivot * n + col)]))
                pivot = r;
        if (std::abs(a[static_cast<std::size_t>(pivot * n + col)]) < 1e-300)
            throw Error(ErrorCode::SingularGram, "singular Gram matrix");
        if (pivot != col) {
            for (int c = 0; c < n; ++c) {
                std::swap(a[static_cast<std::size_t>(col * n + c)],
                          a[static_cast<std::size_t>(pivot * n + c)]);
                std::swap(inv[static_cast<std::size_t>(col * n + c)],
                          inv[static_cast<std::size_t>(pivot * n + c)]);
            }
        }
        const double d = a[static_cast<std::size_t>(col * n + col)];
        for (int c = 0; c < n; ++c) {
            a[static_cast<std::size_t>(col * n + c)] /= d;
            inv[static_cast<std::size_t>(col * n + c)] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = a[static_cast<std::size_t>(r * n + col)];
            if (factor == 0.0) continue;
            for (int c = 0; c < n; ++c) {
                a[static_cast<std::size_t>(r * n + c)] -=
                    factor * a[static_cast<std::size_t>(col * n + c)];
                inv[static_cast<std::size_t>(r * n + c)] -=
                    factor * inv[static_cast<std::size_t>(col * n + c)];
            }
        }
    }
    a = std::move(inv);
}

std::vector<double> face_gram(const Mesh& mesh, const BoundaryFace& face,
                              const QuadratureRule& quad_edge) {
    const ReferenceElement ref(mesh.order());
    const auto face_nodes = ref.edge_nodes(face.local_edge);
    const int nf = static_cast<int>(face_nodes.size());
    std::vector<double> gram(static_cast<std::size_t>(nf) * nf, 0.0);
    double values[6];
    for (std::size_t q = 0; q < quad_edge.points.size(); ++q) {
        const double s = quad_edge.points[q].x;
        const FaceFrame frame = face_metric(mesh, face, s);
        const double w = quad_edge.weights[q] * frame.sqrt_det_g;
        ref.shape_values(ReferenceElement::edge_point(face.local_edge, s), values);
        for (int i = 0; i < nf; ++i)
            for (int j = 0; j < nf; ++j)
                gram[static_cast<std::size_t>(i * nf + j)] +=
                    w * values[face_nodes[static_cast<std::size_t>(i)]] *
                    values[face_nodes[static_cast<std::size_t>(j)]];
    }
    return gram;
}

std::vector<double> element_gram(const Mesh& mesh, int element_id,
                                 const QuadratureRule& quad_tri) {
    const ReferenceElement ref(mesh.order());
    const int nn = ref.node_count();
    std::vector<double> gram(static_cast<std::size_t>(nn) * nn, 0.0);
    double values[6];
    for (std::size_t q = 0; q < quad_tri.points.size(); ++q) {
        const MapPoint map = isoparametric_map(mesh, element_id, quad_tri.points[q]);
        const double w = quad_tri.weights[q] * std::abs(map.jacobian.det());
        ref.shape_values(quad_tri.points[q], values);
        for (int i = 0; i < nn; ++i)
            for (int j = 0; j < nn; ++j)
                gram[static_cast<std::size_t>(i * nn + j)] += w * values[i] * values[j];
    }
    return gram;
}

}  // namespace

SolutionField lagrange_interpolate(const Mesh& mesh, const ScalarField& v) {
    std::vector<double> coeffs(static_cast<std::size_t>(mesh.node_count()));
    for (int i = 0; i < mesh.node_count(); ++i) {
        try {
            coeffs[static_cast<std::size_t>(i)] = v(mesh.node(i));
        } catch (const std::exception& e) {
            throw Error(ErrorCode::EvaluationFailure,
                        "lagrange_interpolate: evaluation failed at node " + std::to_string(i) +
                            ": " + e.what());
        }
    }
    return SolutionField(mesh, std::move(coeffs));
}

NodeAssignment build_node_assignment(const Mesh& mesh, const QuadratureRule& quad_edge,
                                     const QuadratureRule& quad_tri) {
    const ReferenceElement ref(mesh.order());
    NodeAssignment assignment;
    assignment.entries.assign(static_cast<std::size_t>(mesh.node_count()), {});

    // Lowest-id containing face for boundary nodes, element otherwise.
    const auto& faces = mesh.boundary_faces();
    for (std::size_t fi = 0; fi < faces.size(); ++fi) {
        const auto elem = mesh.element(faces[fi].element);
        const auto face_nodes = ref.edge_nodes(faces[fi].local_edge);
        for (std::size_t li = 0; li < face_nodes.size(); ++li) {
            auto& entry = assignment.entries[static_cast<std::size_t>(elem[face_nodes[li]])];
            if (entry.simplex < 0) {
                entry.on_boundary = true;
                entry.simplex = static_cast<int>(fi);
                entry.local_index = static_cast<int>(li);
            }
        }
    }
    for (int e = 0; e < mesh.element_count(); ++e) {
        const auto elem = mesh.element(e);
        for (int li = 0; li < ref.node_count(); ++li) {
            auto& entry = assignment.entries[static_cast<std::size_t>(elem[li])];
            if (mesh.is_boundary_node(elem[li]) || entry.simplex >= 0) continue;
            entry.simplex = e;
            entry.local_index = li;
        }
    }

    // Dual rows: the matching row of the inverse local Gram matrix.
    std::vector<std::vector<double>> face_inverse(faces.size());
    std::vector<std::vector<double>> elem_inverse(static_cast<std::size_t>(mesh.element_count()));
    for (auto& entry : assignment.entries) {
        if (entry.simplex < 0)
            throw Error(ErrorCode::InvariantViolation, "node without containing simplex");
        std::vector<double>* inverse;
        int n;
        if (entry.on_boundary) {
            auto& cache = face_inverse[static_cast<std::size_t>(entry.simplex)];
            n = mesh.order() + 1;
            if (cache.empty()) {
                cache = face_gram(mesh, faces[static_cast<std::size_t>(entry.simplex)], quad_edge);
                invert_dense(cache, n);
            }
            inverse = &cache;
        } else {
            auto& cache = elem_inverse[static_cast<std::size_t>(entry.simplex)];
            n = ref.node_count();
            if (cache.empty()) {
                cache = element_gram(mesh, entry.simplex, quad_tri);
                invert_dense(cache, n);
            }
            inverse = &cache;
        }
        entry.dual_row.assign(inverse->begin() + entry.local_index * n,
                              inverse->begin() + (entry.local_index + 1) * n);
    }
    return assignment;
}

SolutionField scott_zhang_interpolate(const Mesh& mesh, const NodeAssignment& assignment,
                                      const ScalarField& v, const QuadratureRule& quad_edge,
                                      const QuadratureRule& quad_tri) {
    const ReferenceElement ref(mesh.order());
    const auto& faces = mesh.boundary_faces();
    std::vector<double> coeffs(static_cast<std::size_t>(mesh.node_count()), 0.0);
    double values[6];

    for (int p = 0; p < mesh.node_count(); ++p) {
        const auto& entry = assignment.entries[static_cast<std::size_t>(p)];
        const int n = static_cast<int>(entry.dual_row.size());
        std::vector<double> moments(static_cast<std::size_t>(n), 0.0);
        if (entry.on_boundary) {
            const BoundaryFace& face = faces[static_cast<std::size_t>(entry.simplex)];
            const auto face_nodes = ref.edge_nodes(face.local_edge);
            for (std::size_t q = 0; q < quad_edge.points.size(); ++q) {
                const double s = quad_edge.points[q].x;
                const FaceFrame frame = face_metric(mesh, face, s);
                const double w = quad_edge.weights[q] * frame.sqrt_det_g;
                ref.shape_values(ReferenceElement::edge_point(face.local_edge, s), values);
                const double vx = v(frame.point);
                for (int j = 0; j < n; ++j)
                    moments[static_cast<std::size_t>(j)] +=
                        w * vx * values[face_nodes[static_cast<std::size_t>(j)]];
            }
        } else {
            for (std::size_t q = 0; q < quad_tri.points.size(); ++q) {
                const MapPoint map = isoparametric_map(mesh, entry.simplex, quad_tri.points[q]);
                const double w = quad_tri.weights[q] * std::abs(map.jacobian.det());
                ref.shape_values(quad_tri.points[q], values);
                const double vx = v(map.x);
                for (int j = 0; j < n; ++j) moments[static_cast<std::size_t>(j)] += w * vx * values[j];
            }
        }
        double c = 0.0;
        for (int j = 0; j < n; ++j) c += entry.dual_row[static_cast<std::size_t>(j)] *
                                          moments[static_cast<std::size_t>(j)];
        coeffs[static_cast<std::size_t>(p)] = c;
    }
    return SolutionField(mesh, std::move(coeffs));
}

}  // namespace bsfem
