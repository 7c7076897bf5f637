#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace latentgeom {

/// A k-dimensional linear subspace of R^d, held as a d x k column-orthonormal frame.
class Subspace {
public:
    /// Orthonormalizes an arbitrary spanning set (Householder QR). Throws RankError when
    /// the smallest singular value of `columns` is below 1e-10 times the largest.
    static Subspace from_vectors(const Eigen::MatrixXd& columns);
    /// Wraps a frame that is already orthonormal to 1e-10; throws otherwise.
    static Subspace from_orthonormal(Eigen::MatrixXd frame);

    const Eigen::MatrixXd& frame() const noexcept { return frame_; }
    Eigen::Index dim() const noexcept { return frame_.cols(); }
    Eigen::Index ambient() const noexcept { return frame_.rows(); }
    Eigen::MatrixXd projector() const { return frame_ * frame_.transpose(); }

private:
    explicit Subspace(Eigen::MatrixXd frame) : frame_(std::move(frame)) {}
    Eigen::MatrixXd frame_;
};

/// Above this ambient dimension the projection metric is taken from the largest
/// principal angle instead of an SVD of the d x d projector difference.
inline constexpr Eigen::Index kDenseProjectorLimit = 2048;

/// Operator norm of P_W - P_W'. In [0, 1]; zero iff the spans agree.
double projection_metric(const Subspace& a, const Subspace& b);

/// Same quantity as projection_metric, always via sin(theta_max).
double projection_metric_from_angles(const Subspace& a, const Subspace& b);

/// Principal angles, ascending, in [0, pi/2]. Cosines come from the singular values of
/// M_a^T M_b clamped to [0, 1]; angles below pi/4 are resolved from the sines instead,
/// which keeps nearly equal subspaces accurate to machine precision.
Eigen::VectorXd principal_angles(const Subspace& a, const Subspace& b);

/// Euclidean norm of the principal-angle vector; at most sqrt(k) * pi/2.
double geodesic_metric(const Subspace& a, const Subspace& b);

/// Haar-distributed k-frame in R^d: QR of a Gaussian d x k matrix with the signs of
/// diag(R) folded into Q.
Subspace random_orthogonal_frame(Eigen::Index d, Eigen::Index k, std::uint64_t seed);

/// Square Haar-orthogonal matrix (d x d).
Eigen::MatrixXd haar_orthogonal(Eigen::Index d, std::uint64_t seed);

}  // namespace latentgeom
