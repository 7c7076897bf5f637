#pragma once

// Shared networks and independent oracles for the test suites. Nothing here calls
// into the library's evaluation or Jacobian paths.

#include <cmath>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "latentgeom/generate.hpp"
#include "latentgeom/network.hpp"

namespace latentgeom::testing {

inline MappingNetwork single_layer(const Eigen::MatrixXd& weight, Activation act,
                                   const Eigen::VectorXd& bias = {}) {
    LayerSpec layer{weight, bias.size() ? bias : Eigen::VectorXd::Zero(weight.rows()), act};
    return MappingNetwork({layer});
}

inline MappingNetwork diag_net(double a, double b) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(0, 0) = a;
    w(1, 1) = b;
    return single_layer(w, Activation::identity());
}

inline MappingNetwork identity_net(Eigen::Index d) {
    return single_layer(Eigen::MatrixXd::Identity(d, d), Activation::identity());
}

/// 8 leaky-ReLU(0.2) layers of width d.
inline MappingNetwork curved_square_net(std::uint64_t seed, Eigen::Index d = 32) {
    return generate_network(std::vector<Eigen::Index>(9, d), 0.2, seed);
}

/// The fixed-seed curved net: d_Z = 16 into eight leaky-ReLU(0.2) layers of width 32,
/// so f(Z) is a 16-dimensional curved manifold in R^32.
inline MappingNetwork curved_net() {
    return generate_network({16, 32, 32, 32, 32, 32, 32, 32, 32}, 0.2, 7);
}

inline constexpr Eigen::Index kCurvedDz = 16;
inline constexpr Eigen::Index kCurvedDw = 32;

/// Same widths with slope 1: globally affine.
inline MappingNetwork affine_net(std::uint64_t seed = 7) {
    return generate_network({16, 32, 32, 32, 32, 32, 32, 32, 32}, 1.0, seed);
}

/// Square 32-wide net with a width-20 bottleneck: Jacobians have rank <= 20.
inline MappingNetwork bottleneck_net(std::uint64_t seed = 11) {
    return generate_network({32, 32, 32, 20, 32, 32, 32, 32, 32}, 0.2, seed);
}

/// Layer-by-layer evaluation with plain loops.
inline Eigen::VectorXd straight_line_forward(const MappingNetwork& net, const Eigen::VectorXd& z) {
    std::vector<double> x(z.data(), z.data() + z.size());
    for (const auto& layer : net.layers()) {
        std::vector<double> y(static_cast<std::size_t>(layer.weight.rows()));
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            double acc = layer.bias[r];
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) acc += layer.weight(r, c) * x[static_cast<std::size_t>(c)];
            if (layer.activation.kind == ActivationKind::LeakyReLU && acc <= 0.0) acc *= layer.activation.slope;
            y[static_cast<std::size_t>(r)] = acc;
        }
        x = std::move(y);
    }
    return Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

/// Central finite differences through the straight-line evaluator.
inline Eigen::MatrixXd fd_jacobian(const MappingNetwork& net, const Eigen::VectorXd& z, double h = 1e-5) {
    Eigen::MatrixXd jac(net.out_dim(), net.in_dim());
    for (Eigen::Index j = 0; j < net.in_dim(); ++j) {
        Eigen::VectorXd p = z, m = z;
        p[j] += h;
        m[j] -= h;
        jac.col(j) = (straight_line_forward(net, p) - straight_line_forward(net, m)) / (2 * h);
    }
    return jac;
}

/// Smallest |pre-activation| over piecewise units, by plain loops.
inline double boundary_margin(const MappingNetwork& net, const Eigen::VectorXd& z) {
    double margin = INFINITY;
    Eigen::VectorXd x = z;
    for (const auto& layer : net.layers()) {
        Eigen::VectorXd pre = layer.weight * x + layer.bias;
        if (layer.activation.is_piecewise()) margin = std::min(margin, pre.cwiseAbs().minCoeff());
        for (Eigen::Index i = 0; i < pre.size(); ++i)
            if (layer.activation.kind == ActivationKind::LeakyReLU && pre[i] <= 0) pre[i] *= layer.activation.slope;
        x = pre;
    }
    return margin;
}

/// Angle-free subspace comparison: ||P_a - P_b||_F.
inline double projector_gap(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a * a.transpose() - b * b.transpose()).norm();
}

}  // namespace latentgeom::testing
