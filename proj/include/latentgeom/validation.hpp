#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latentgeom/local_basis.hpp"
#include "latentgeom/network.hpp"

namespace latentgeom {

/// Central differences of f at z with step h, one column per input coordinate.
Eigen::MatrixXd finite_difference_jacobian(const MappingNetwork& net, const Eigen::VectorXd& z,
                                           double h = 1e-5);

/// True when every point of the central-difference stencil shares z's activation pattern.
bool stencil_in_cell(const MappingNetwork& net, const Eigen::VectorXd& z, double h = 1e-5);

/// Entrywise |a - b| / max(|b|, floor * max|b|). The floor keeps exact zeros of b from
/// dividing by zero.
double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double floor = 1e-6);

/// max_i ||J u_i - sigma_i v_i||_inf.
double svd_identity_error(const Eigen::MatrixXd& jac, const LocalFrame& frame);

/// Indices (1-based) whose gap to each neighbouring singular value exceeds
/// `relative_gap` * sigma_1. A missing right neighbour counts as 0 when d_W > n.
std::vector<Eigen::Index> gapped_components(const LocalFrame& frame, Eigen::Index d_w,
                                            double relative_gap = 0.05);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;      // observed worst case
    double threshold = 0.0;  // pass bound
    std::string detail;
};

/// Invariant suite used by `latentgeom validate`: SVD identity, frame orthonormality,
/// finite-difference Jacobian agreement and the Local-PCA equivalence, over
/// `n_points` random latent points.
std::vector<CheckResult> validate_network(const MappingNetwork& net, int n_points, std::uint64_t seed);

}  // namespace latentgeom
