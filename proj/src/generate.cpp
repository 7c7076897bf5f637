#include "latentgeom/generate.hpp"

#include <cmath>
#include <string>

#include "latentgeom/errors.hpp"
#include "latentgeom/grassmann.hpp"
#include "latentgeom/random.hpp"

namespace latentgeom {

MappingNetwork generate_network(const std::vector<Eigen::Index>& dims, double slope,
                                std::uint64_t seed, InitScheme init) {
    if (dims.size() < 2) throw ShapeError("need at least two layer widths (input and output)");
    for (auto d : dims)
        if (d < 1) throw ShapeError("layer widths must be positive, got " + std::to_string(d));
    const Activation act = Activation::leaky_relu(slope);
    const double gain = 2.0 / (1.0 + slope * slope);

    std::vector<LayerSpec> layers;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const Eigen::Index in = dims[l];
        const Eigen::Index out = dims[l + 1];
        LayerSpec layer;
        const std::uint64_t weight_seed = derive_seed(seed, 1, l);
        if (init == InitScheme::GaussianScaled) {
            Rng rng(weight_seed);
            layer.weight = rng.normal_matrix(out, in) * std::sqrt(gain / static_cast<double>(in));
        } else if (out >= in) {
            layer.weight = random_orthogonal_frame(out, in, weight_seed).frame() * std::sqrt(gain);
        } else {
            layer.weight =
                random_orthogonal_frame(in, out, weight_seed).frame().transpose() * std::sqrt(gain);
        }
        Rng bias_rng(derive_seed(seed, 2, l));
        layer.bias = bias_rng.normal_vector(out) * kGeneratedBiasStd;
        layer.activation = act;
        layers.push_back(std::move(layer));
    }
    return MappingNetwork(std::move(layers));
}

}  // namespace latentgeom
