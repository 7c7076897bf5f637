#include "latentgeom/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "latentgeom/errors.hpp"
#include "latentgeom/linalg.hpp"
#include "latentgeom/random.hpp"

namespace latentgeom {

namespace {

void check_comparable(const Subspace& a, const Subspace& b) {
    if (a.ambient() != b.ambient() || a.dim() != b.dim())
        throw ShapeError("subspaces differ in shape: Gr(" + std::to_string(a.dim()) + ", " +
                         std::to_string(a.ambient()) + ") vs Gr(" + std::to_string(b.dim()) + ", " +
                         std::to_string(b.ambient()) + ")");
}

Eigen::MatrixXd thin_q(const Eigen::MatrixXd& m) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
    return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
}

}  // namespace

Subspace Subspace::from_vectors(const Eigen::MatrixXd& columns) {
    if (columns.cols() == 0 || columns.rows() == 0) throw ShapeError("empty spanning set");
    if (columns.cols() > columns.rows())
        throw RankError("cannot span " + std::to_string(columns.cols()) + " dimensions in R^" +
                        std::to_string(columns.rows()));
    if (!columns.allFinite()) throw ShapeError("spanning set has non-finite entries");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(columns);
    const auto& s = svd.singularValues();
    if (!(s[s.size() - 1] > 1e-10 * s[0]))
        throw RankError("spanning set is rank deficient (condition " +
                        std::to_string(s[0] / s[s.size() - 1]) + ")");
    return Subspace(thin_q(columns));
}

Subspace Subspace::from_orthonormal(Eigen::MatrixXd frame) {
    if (frame.cols() == 0 || frame.cols() > frame.rows())
        throw ShapeError("frame must be d x k with 1 <= k <= d");
    if (orthonormality_error(frame) > 1e-10) throw Error("frame columns are not orthonormal");
    return Subspace(std::move(frame));
}

double projection_metric(const Subspace& a, const Subspace& b) {
    check_comparable(a, b);
    if (a.frame() == b.frame()) return 0.0;
    if (a.ambient() > kDenseProjectorLimit) return projection_metric_from_angles(a, b);
    const Eigen::MatrixXd diff = a.projector() - b.projector();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(diff);
    return std::min(1.0, svd.singularValues()[0]);
}

Eigen::VectorXd principal_angles(const Subspace& a, const Subspace& b) {
    check_comparable(a, b);
    const Eigen::Index k = a.dim();
    if (a.frame() == b.frame()) return Eigen::VectorXd::Zero(k);

    const Eigen::MatrixXd cross = a.frame().transpose() * b.frame();
    Eigen::JacobiSVD<Eigen::MatrixXd> cos_svd(cross);
    // descending cosines -> ascending angles
    Eigen::VectorXd cosines = cos_svd.singularValues().cwiseMax(0.0).cwiseMin(1.0);

    // component of b's frame orthogonal to a; its singular values are the sines
    const Eigen::MatrixXd residual = b.frame() - a.frame() * cross;
    Eigen::JacobiSVD<Eigen::MatrixXd> sin_svd(residual);
    // ascending sines pair with descending cosines
    Eigen::VectorXd sines = sin_svd.singularValues().reverse().cwiseMax(0.0).cwiseMin(1.0);

    Eigen::VectorXd angles(k);
    for (Eigen::Index i = 0; i < k; ++i) {
        const double from_cos = std::acos(cosines[i]);
        angles[i] = from_cos < std::numbers::pi / 4 ? std::asin(sines[i]) : from_cos;
    }
    std::sort(angles.data(), angles.data() + k);
    return angles;
}

double projection_metric_from_angles(const Subspace& a, const Subspace& b) {
    const Eigen::VectorXd angles = principal_angles(a, b);
    return std::sin(angles[angles.size() - 1]);
}

double geodesic_metric(const Subspace& a, const Subspace& b) {
    return principal_angles(a, b).norm();
}

Subspace random_orthogonal_frame(Eigen::Index d, Eigen::Index k, std::uint64_t seed) {
    if (d < 1 || k < 1 || k > d)
        throw ShapeError("random frame needs 1 <= k <= d, got k = " + std::to_string(k) +
                         ", d = " + std::to_string(d));
    Rng rng(seed);
    const Eigen::MatrixXd gaussian = rng.normal_matrix(d, k);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < k; ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return Subspace::from_orthonormal(std::move(q));
}

Eigen::MatrixXd haar_orthogonal(Eigen::Index d, std::uint64_t seed) {
    return random_orthogonal_frame(d, d, seed).frame();
}

}  // namespace latentgeom
