#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "latentgeom/grassmann.hpp"
#include "latentgeom/network.hpp"

namespace latentgeom {

enum class GlobalMethod { SampledPCA, FirstWeightSVD };

std::string to_string(GlobalMethod method);

/// One set of directions applied at every latent point.
struct GlobalBasis {
    Eigen::MatrixXd directions;  // d_W x m, orthonormal columns
    Eigen::VectorXd magnitudes;  // explained variance (PCA) or first-weight singular value, descending
    GlobalMethod method = GlobalMethod::SampledPCA;
    Eigen::Index sample_count = 0;  // SampledPCA only

    Eigen::Index size() const noexcept { return directions.cols(); }
    /// Span of the first k directions.
    Subspace top(Eigen::Index k) const;
};

/// PCA of f(z) over n_samples draws z ~ N(0, I), mean subtracted.
/// Throws UnderSampledError unless n_samples > d_W.
GlobalBasis ganspace_basis(const MappingNetwork& net, Eigen::Index n_samples, std::uint64_t seed);

struct WeightSvd {
    Eigen::MatrixXd left;   // out x m
    Eigen::VectorXd sigma;  // m, descending
    Eigen::MatrixXd right;  // in x m
};

/// Sign-normalized SVD of the first layer's weight (sign convention on `left`).
WeightSvd first_weight_svd(const MappingNetwork& net);

/// Closed-form factorization of the first weight. For a single-layer network the left
/// singular vectors already live in the output space. For deeper networks the right
/// singular vectors (latent-input directions) are pushed through the Jacobian at
/// `z_reference` (default: the origin, nudged off any boundary) and orthonormalized
/// in singular-value order.
GlobalBasis sefa_basis(const MappingNetwork& net,
                       const std::optional<Eigen::VectorXd>& z_reference = std::nullopt);

}  // namespace latentgeom
