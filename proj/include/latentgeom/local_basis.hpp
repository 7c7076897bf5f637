#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "latentgeom/linalg.hpp"
#include "latentgeom/network.hpp"

namespace latentgeom {

/// Singular values at or below kRelativeRankTol * sigma_1 count as zero.
inline constexpr double kRelativeRankTol = 1e-8;

/// SVD of the Jacobian at a base point. The columns of `v` are the Local Basis:
/// orthonormal traversal directions in the intermediate latent space, ordered by
/// singular value. Column i of `u` is the latent-input direction that the Jacobian
/// maps onto sigma_i * v_i.
///
/// Sign convention: the largest-magnitude entry of every v_i is positive. Within a
/// group of equal singular values the order is lexicographic on v_i, descending; that
/// order is arbitrary, only the spanned subspace is canonical.
struct LocalFrame {
    Eigen::VectorXd z;
    Eigen::VectorXd w;
    Eigen::MatrixXd u;      // d_Z x n
    Eigen::VectorXd sigma;  // n, non-increasing
    Eigen::MatrixXd v;      // d_W x n

    Eigen::Index size() const noexcept { return sigma.size(); }
    double rank_tol() const noexcept { return sigma.size() ? kRelativeRankTol * sigma[0] : 0.0; }
    /// Throws RankError unless 1 <= k <= n and sigma_k > rank_tol. `k` is 1-based.
    void require_direction(Eigen::Index k) const;
    /// First k Local Basis vectors.
    Eigen::MatrixXd top(Eigen::Index k) const { return v.leftCols(k); }
};

/// Builds a frame from a precomputed Jacobian (sorted and sign-normalized).
LocalFrame frame_from_jacobian(Eigen::VectorXd z, Eigen::VectorXd w, const Eigen::MatrixXd& jac);

/// Re-applies the sign convention and tie ordering in place. Idempotent.
void canonicalize(LocalFrame& frame);

/// Local Basis at z. Throws BoundaryError when z sits on a partition boundary.
LocalFrame local_basis(const MappingNetwork& net, const Eigen::VectorXd& z);

/// f(z + sum_i t_i u_i) over the first t.size() directions.
Eigen::VectorXd approx_manifold_point(const MappingNetwork& net, const LocalFrame& frame,
                                      const Eigen::VectorXd& t);

/// Sampling oracle for the Local-PCA equivalence: PCA of w_b + c J eps, eps ~ N(0, I).
/// Independent of the SVD path used by local_basis.
PrincipalComponents local_pca_oracle(const MappingNetwork& net, const Eigen::VectorXd& z_base,
                                     double c, Eigen::Index n_samples, std::uint64_t seed);

}  // namespace latentgeom
