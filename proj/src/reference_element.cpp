#include "reference_element.hpp"

namespace bsfem {

ReferenceElement::ReferenceElement(int order) : order_(order) {
    if (order != 1 && order != 2)
        throw Error(ErrorCode::InvalidArgument, "reference element order must be 1 or 2");
    nodes_ = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    if (order == 2) {
        nodes_.push_back({0.5, 0.0});
        nodes_.push_back({0.5, 0.5});
        nodes_.push_back({0.0, 0.5});
    }
}

void ReferenceElement::shape_values(Vec2 p, double* out) const {
    const double l0 = 1.0 - p.x - p.y;
    const double l1 = p.x;
    const double l2 = p.y;
    if (order_ == 1) {
        out[0] = l0;
        out[1] = l1;
        out[2] = l2;
        return;
    }
    out[0] = l0 * (2.0 * l0 - 1.0);
    out[1] = l1 * (2.0 * l1 - 1.0);
    out[2] = l2 * (2.0 * l2 - 1.0);
    out[3] = 4.0 * l0 * l1;
    out[4] = 4.0 * l1 * l2;
    out[5] = 4.0 * l2 * l0;
}

void ReferenceElement::shape_gradients(Vec2 p, Vec2* out) const {
    if (order_ == 1) {
        out[0] = {-1.0, -1.0};
        out[1] = {1.0, 0.0};
        out[2] = {0.0, 1.0};
        return;
    }
    const double l0 = 1.0 - p.x - p.y;
    const double l1 = p.x;
    const double l2 = p.y;
    const Vec2 g0{-1.0, -1.0}, g1{1.0, 0.0}, g2{0.0, 1.0};
    out[0] = g0 * (4.0 * l0 - 1.0);
    out[1] = g1 * (4.0 * l1 - 1.0);
    out[2] = g2 * (4.0 * l2 - 1.0);
    out[3] = (g0 * l1 + g1 * l0) * 4.0;
    out[4] = (g1 * l2 + g2 * l1) * 4.0;
    out[5] = (g2 * l0 + g0 * l2) * 4.0;
}

std::vector<int> ReferenceElement::edge_nodes(int e) const {
    const auto [a, b] = edge_vertices(e);
    if (order_ == 1) return {a, b};
    return {a, b, 3 + e};
}

Vec2 ReferenceElement::edge_point(int e, double s) {
    switch (e) {
        case 0:
            return {s, 0.0};
        case 1:
            return {1.0 - s, s};
        case 2:
            return {0.0, 1.0 - s};
    }
    throw Error(ErrorCode::InvalidArgument, "edge index must be 0, 1, or 2");
}

Vec2 ReferenceElement::edge_direction(int e) {
    switch (e) {
        case 0:
            return {1.0, 0.0};
        case 1:
            return {-1.0, 1.0};
        case 2:
            return {0.0, -1.0};
    }
    throw Error(ErrorCode::InvalidArgument, "edge index must be 0, 1, or 2");
}

}  // namespace bsfem
