#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace latentgeom {

class Rng;

/// Pre-activations with magnitude below this are treated as lying on a partition boundary.
inline constexpr double kBoundaryTol = 1e-9;
/// Radius of the random nudge used to move a point off a boundary.
inline constexpr double kBoundaryNudge = 1e-6;

enum class ActivationKind { LeakyReLU, Identity };

struct Activation {
    ActivationKind kind = ActivationKind::Identity;
    double slope = 1.0;  // negative-side slope; 1 for Identity

    static Activation identity() { return {ActivationKind::Identity, 1.0}; }
    static Activation leaky_relu(double slope);

    /// True when the activation actually bends (slope != 1).
    bool is_piecewise() const noexcept { return kind == ActivationKind::LeakyReLU && slope != 1.0; }
};

struct LayerSpec {
    Eigen::MatrixXd weight;  // out_dim x in_dim
    Eigen::VectorXd bias;    // out_dim
    Activation activation;

    Eigen::Index in_dim() const noexcept { return weight.cols(); }
    Eigen::Index out_dim() const noexcept { return weight.rows(); }
};

/// A stack of affine layers with leaky-ReLU or identity activations. The map it
/// computes is piecewise affine; each activation pattern selects one affine piece.
/// Immutable after construction.
class MappingNetwork {
public:
    /// Throws ShapeError when layer dimensions do not chain, Error on bad slopes or non-finite weights.
    explicit MappingNetwork(std::vector<LayerSpec> layers);

    Eigen::Index in_dim() const noexcept { return layers_.front().in_dim(); }
    Eigen::Index out_dim() const noexcept { return layers_.back().out_dim(); }
    const std::vector<LayerSpec>& layers() const noexcept { return layers_; }
    std::size_t depth() const noexcept { return layers_.size(); }

    /// True when no layer bends, i.e. the whole network is one affine map.
    bool is_affine() const noexcept;

private:
    std::vector<LayerSpec> layers_;
};

/// Location of the pre-activation closest to zero among piecewise units.
struct BoundaryProximity {
    std::size_t layer = 0;
    std::size_t unit = 0;
    double preactivation = 0.0;
};

struct ActivationPattern {
    /// Per layer: 1 where the pre-activation is positive, the slope elsewhere.
    std::vector<Eigen::VectorXd> masks;
    /// Unset when the network has no piecewise units.
    std::optional<BoundaryProximity> nearest;

    bool on_boundary(double tol = kBoundaryTol) const noexcept {
        return nearest && std::abs(nearest->preactivation) < tol;
    }
    bool operator==(const ActivationPattern& other) const;
};

struct ForwardResult {
    Eigen::VectorXd w;
    ActivationPattern pattern;
};

ForwardResult forward(const MappingNetwork& net, const Eigen::VectorXd& z);

/// Same value as forward(net, z).w without recording the pattern.
Eigen::VectorXd evaluate(const MappingNetwork& net, const Eigen::VectorXd& z);

/// Exact Jacobian W_L D_{L-1} W_{L-1} ... D_1 W_1 at z. Throws BoundaryError when
/// any piecewise pre-activation is within kBoundaryTol of zero.
Eigen::MatrixXd jacobian(const MappingNetwork& net, const Eigen::VectorXd& z);

/// Jacobian of the affine piece selected by `pattern`; no boundary check.
Eigen::MatrixXd jacobian_for_pattern(const MappingNetwork& net, const ActivationPattern& pattern);

/// First-order expansion w_b + J (z - z_b). Exact inside the partition cell of z_b.
class AffineApproximation {
public:
    AffineApproximation(Eigen::VectorXd z_base, Eigen::VectorXd w_base, Eigen::MatrixXd jacobian)
        : z_base_(std::move(z_base)), w_base_(std::move(w_base)), jacobian_(std::move(jacobian)) {}

    Eigen::VectorXd operator()(const Eigen::VectorXd& z) const;

    const Eigen::VectorXd& z_base() const noexcept { return z_base_; }
    const Eigen::VectorXd& w_base() const noexcept { return w_base_; }
    const Eigen::MatrixXd& jacobian() const noexcept { return jacobian_; }

private:
    Eigen::VectorXd z_base_;
    Eigen::VectorXd w_base_;
    Eigen::MatrixXd jacobian_;
};

AffineApproximation linear_approximation_at(const MappingNetwork& net, const Eigen::VectorXd& z_base);

/// Returns z unchanged when off-boundary, otherwise z plus a kBoundaryNudge-sized random
/// displacement, retried until the point clears every boundary.
Eigen::VectorXd move_off_boundary(const MappingNetwork& net, const Eigen::VectorXd& z, Rng& rng,
                                  int max_tries = 64);

}  // namespace latentgeom
