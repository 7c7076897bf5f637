#include "latentgeom/local_basis.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "latentgeom/errors.hpp"
#include "latentgeom/random.hpp"

namespace latentgeom {

namespace {

constexpr double kTieTol = 1e-12;

bool lexicographically_greater(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return true;
        if (a[i] < b[i]) return false;
    }
    return false;
}

}  // namespace

void LocalFrame::require_direction(Eigen::Index k) const {
    if (k < 1 || k > size())
        throw RankError("direction index " + std::to_string(k) + " outside [1, " +
                        std::to_string(size()) + "]");
    if (!(sigma[k - 1] > rank_tol()))
        throw RankError("singular value " + std::to_string(k) + " is " +
                        std::to_string(sigma[k - 1]) + ", at or below rank tolerance " +
                        std::to_string(rank_tol()));
}

void canonicalize(LocalFrame& frame) {
    normalize_column_signs(frame.v, &frame.u);

    const Eigen::Index n = frame.size();
    if (n < 2) return;
    const double scale = std::max(frame.sigma[0], 1e-300);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    // tie groups are runs of singular values equal up to kTieTol * sigma_1
    Eigen::Index start = 0;
    bool permuted = false;
    while (start < n) {
        Eigen::Index end = start + 1;
        while (end < n && frame.sigma[end - 1] - frame.sigma[end] <= kTieTol * scale) ++end;
        if (end - start > 1) {
            std::stable_sort(order.begin() + start, order.begin() + end,
                             [&](Eigen::Index a, Eigen::Index b) {
                                 return lexicographically_greater(frame.v.col(a), frame.v.col(b));
                             });
            permuted = true;
        }
        start = end;
    }
    if (!permuted) return;
    const LocalFrame old = frame;
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto src = order[static_cast<std::size_t>(j)];
        frame.v.col(j) = old.v.col(src);
        frame.u.col(j) = old.u.col(src);
        frame.sigma[j] = old.sigma[src];
    }
}

LocalFrame frame_from_jacobian(Eigen::VectorXd z, Eigen::VectorXd w, const Eigen::MatrixXd& jac) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw NumericalError("Jacobian SVD did not converge (shape " + std::to_string(jac.rows()) +
                             "x" + std::to_string(jac.cols()) + ", max |entry| " +
                             std::to_string(jac.cwiseAbs().maxCoeff()) + ")");
    LocalFrame frame;
    frame.z = std::move(z);
    frame.w = std::move(w);
    frame.sigma = svd.singularValues();
    frame.v = svd.matrixU();
    frame.u = svd.matrixV();
    canonicalize(frame);
    return frame;
}

LocalFrame local_basis(const MappingNetwork& net, const Eigen::VectorXd& z) {
    ForwardResult fw = forward(net, z);
    if (fw.pattern.on_boundary()) {
        const auto& hit = *fw.pattern.nearest;
        throw BoundaryError(hit.layer, hit.unit, hit.preactivation);
    }
    const Eigen::MatrixXd jac = jacobian_for_pattern(net, fw.pattern);
    return frame_from_jacobian(z, std::move(fw.w), jac);
}

Eigen::VectorXd approx_manifold_point(const MappingNetwork& net, const LocalFrame& frame,
                                      const Eigen::VectorXd& t) {
    const Eigen::Index k = t.size();
    frame.require_direction(std::max<Eigen::Index>(k, 1));
    if (k == 0) return frame.w;
    return evaluate(net, frame.z + frame.u.leftCols(k) * t);
}

PrincipalComponents local_pca_oracle(const MappingNetwork& net, const Eigen::VectorXd& z_base,
                                     double c, Eigen::Index n_samples, std::uint64_t seed) {
    if (!(c > 0.0)) throw Error("local PCA scale c must be positive");
    if (n_samples < net.in_dim())
        throw UnderSampledError("local PCA needs at least d_Z = " + std::to_string(net.in_dim()) +
                                " samples, got " + std::to_string(n_samples));
    const AffineApproximation tangent = linear_approximation_at(net, z_base);
    Rng rng(seed);
    Eigen::MatrixXd samples(net.out_dim(), n_samples);
    for (Eigen::Index s = 0; s < n_samples; ++s)
        samples.col(s) = tangent(z_base + c * rng.normal_vector(net.in_dim()));
    return principal_components(samples);
}

}  // namespace latentgeom
