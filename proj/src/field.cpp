#include "field.hpp"

namespace bsfem {

FieldSample evaluate_in_element(const SolutionField& field, int element_id, Vec2 ref_point,
                                bool check_domain) {
    const Mesh& mesh = *field.mesh;
    const ReferenceElement ref(mesh.order());
    const MapPoint map = isoparametric_map(mesh, element_id, ref_point, check_domain);
    double values[6];
    Vec2 grads[6];
    ref.shape_values(ref_point, values);
    ref.shape_gradients(ref_point, grads);

    FieldSample sample;
    Vec2 ref_grad;
    const auto elem = mesh.element(element_id);
    for (int i = 0; i < ref.node_count(); ++i) {
        const double c = field.coefficients[static_cast<std::size_t>(elem[i])];
        sample.value += c * values[i];
        ref_grad += grads[i] * c;
    }
    sample.gradient = map.jacobian.apply_inv_transpose(ref_grad);
    return sample;
}

}  // namespace bsfem
