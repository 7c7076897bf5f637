#pragma once

#include <cstdint>
#include <vector>

#include "latentgeom/network.hpp"

namespace latentgeom {

enum class InitScheme {
    GaussianScaled,  // N(0, 2 / (in_dim (1 + slope^2))), variance preserving under leaky-ReLU
    Orthogonal,      // Haar factors scaled by sqrt(2 / (1 + slope^2))
};

/// Standard deviation of generated biases.
inline constexpr double kGeneratedBiasStd = 0.1;

/// Random mapping network with layer widths `dims` (dims[0] = d_Z, dims.back() = d_W)
/// and a leaky-ReLU of the given slope after every layer. slope = 1 yields an affine
/// network. Deterministic in `seed`.
MappingNetwork generate_network(const std::vector<Eigen::Index>& dims, double slope,
                                std::uint64_t seed, InitScheme init = InitScheme::GaussianScaled);

}  // namespace latentgeom
