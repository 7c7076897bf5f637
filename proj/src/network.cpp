#include "latentgeom/network.hpp"

#include <cmath>
#include <string>

#include "latentgeom/errors.hpp"
#include "latentgeom/random.hpp"

namespace latentgeom {

Activation Activation::leaky_relu(double slope) {
    if (!(slope > 0.0 && slope <= 1.0))
        throw Error("leaky-ReLU slope must lie in (0, 1], got " + std::to_string(slope));
    return {ActivationKind::LeakyReLU, slope};
}

MappingNetwork::MappingNetwork(std::vector<LayerSpec> layers) : layers_(std::move(layers)) {
    if (layers_.empty()) throw ShapeError("mapping network needs at least one layer");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        const LayerSpec& layer = layers_[i];
        const std::string where = "layer " + std::to_string(i);
        if (layer.weight.rows() == 0 || layer.weight.cols() == 0)
            throw ShapeError(where + ": empty weight matrix");
        if (layer.bias.size() != layer.weight.rows())
            throw ShapeError(where + ": bias length " + std::to_string(layer.bias.size()) +
                             " does not match weight rows " + std::to_string(layer.weight.rows()));
        if (i > 0 && layers_[i - 1].out_dim() != layer.in_dim())
            throw ShapeError(where + ": in_dim " + std::to_string(layer.in_dim()) +
                             " does not chain with previous out_dim " +
                             std::to_string(layers_[i - 1].out_dim()));
        if (!layer.weight.allFinite() || !layer.bias.allFinite())
            throw Error(where + ": weights must be finite");
        const Activation& act = layer.activation;
        if (act.kind == ActivationKind::LeakyReLU && !(act.slope > 0.0 && act.slope <= 1.0))
            throw Error(where + ": leaky-ReLU slope must lie in (0, 1]");
    }
}

bool MappingNetwork::is_affine() const noexcept {
    for (const auto& layer : layers_)
        if (layer.activation.is_piecewise()) return false;
    return true;
}

bool ActivationPattern::operator==(const ActivationPattern& other) const {
    if (masks.size() != other.masks.size()) return false;
    for (std::size_t i = 0; i < masks.size(); ++i)
        if (masks[i].size() != other.masks[i].size() || masks[i] != other.masks[i]) return false;
    return true;
}

namespace {

void check_input(const MappingNetwork& net, const Eigen::VectorXd& z) {
    if (z.size() != net.in_dim())
        throw ShapeError("input has length " + std::to_string(z.size()) + ", network expects " +
                         std::to_string(net.in_dim()));
    if (!z.allFinite()) throw ShapeError("input contains non-finite entries");
}

}  // namespace

ForwardResult forward(const MappingNetwork& net, const Eigen::VectorXd& z) {
    check_input(net, z);
    ForwardResult result;
    result.pattern.masks.reserve(net.depth());
    Eigen::VectorXd x = z;
    for (std::size_t l = 0; l < net.depth(); ++l) {
        const LayerSpec& layer = net.layers()[l];
        Eigen::VectorXd pre = layer.weight * x + layer.bias;
        Eigen::VectorXd mask = Eigen::VectorXd::Ones(pre.size());
        if (layer.activation.is_piecewise()) {
            const double slope = layer.activation.slope;
            for (Eigen::Index i = 0; i < pre.size(); ++i) {
                const double a = pre[i];
                if (!(a > 0.0)) mask[i] = slope;
                auto& nearest = result.pattern.nearest;
                if (!nearest || std::abs(a) < std::abs(nearest->preactivation))
                    nearest = BoundaryProximity{l, static_cast<std::size_t>(i), a};
            }
            x = pre.cwiseProduct(mask);
        } else {
            x = std::move(pre);
        }
        result.pattern.masks.push_back(std::move(mask));
    }
    result.w = std::move(x);
    return result;
}

Eigen::VectorXd evaluate(const MappingNetwork& net, const Eigen::VectorXd& z) {
    return forward(net, z).w;
}

Eigen::MatrixXd jacobian_for_pattern(const MappingNetwork& net, const ActivationPattern& pattern) {
    if (pattern.masks.size() != net.depth())
        throw ShapeError("activation pattern depth does not match network");
    Eigen::MatrixXd jac = pattern.masks[0].asDiagonal() * net.layers()[0].weight;
    for (std::size_t l = 1; l < net.depth(); ++l) {
        Eigen::MatrixXd next = net.layers()[l].weight * jac;
        jac = pattern.masks[l].asDiagonal() * next;
    }
    return jac;
}

Eigen::MatrixXd jacobian(const MappingNetwork& net, const Eigen::VectorXd& z) {
    const ForwardResult fw = forward(net, z);
    if (fw.pattern.on_boundary()) {
        const auto& hit = *fw.pattern.nearest;
        throw BoundaryError(hit.layer, hit.unit, hit.preactivation);
    }
    return jacobian_for_pattern(net, fw.pattern);
}

Eigen::VectorXd AffineApproximation::operator()(const Eigen::VectorXd& z) const {
    if (z.size() != z_base_.size()) throw ShapeError("affine approximation: input length mismatch");
    return w_base_ + jacobian_ * (z - z_base_);
}

AffineApproximation linear_approximation_at(const MappingNetwork& net, const Eigen::VectorXd& z_base) {
    const ForwardResult fw = forward(net, z_base);
    if (fw.pattern.on_boundary()) {
        const auto& hit = *fw.pattern.nearest;
        throw BoundaryError(hit.layer, hit.unit, hit.preactivation);
    }
    return AffineApproximation(z_base, fw.w, jacobian_for_pattern(net, fw.pattern));
}

Eigen::VectorXd move_off_boundary(const MappingNetwork& net, const Eigen::VectorXd& z, Rng& rng,
                                  int max_tries) {
    Eigen::VectorXd candidate = z;
    for (int attempt = 0; attempt <= max_tries; ++attempt) {
        if (!forward(net, candidate).pattern.on_boundary()) return candidate;
        candidate = z + kBoundaryNudge * rng.unit_vector(z.size());
    }
    const auto hit = *forward(net, candidate).pattern.nearest;
    throw BoundaryError(hit.layer, hit.unit, hit.preactivation);
}

}  // namespace latentgeom
