#include "latentgeom/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latentgeom/linalg.hpp"
#include "latentgeom/random.hpp"

namespace latentgeom {

Eigen::MatrixXd finite_difference_jacobian(const MappingNetwork& net, const Eigen::VectorXd& z, double h) {
    Eigen::MatrixXd jac(net.out_dim(), net.in_dim());
    for (Eigen::Index j = 0; j < net.in_dim(); ++j) {
        Eigen::VectorXd plus = z, minus = z;
        plus[j] += h;
        minus[j] -= h;
        jac.col(j) = (evaluate(net, plus) - evaluate(net, minus)) / (2.0 * h);
    }
    return jac;
}

bool stencil_in_cell(const MappingNetwork& net, const Eigen::VectorXd& z, double h) {
    const ActivationPattern base = forward(net, z).pattern;
    if (base.on_boundary()) return false;
    for (Eigen::Index j = 0; j < net.in_dim(); ++j)
        for (double s : {h, -h}) {
            Eigen::VectorXd p = z;
            p[j] += s;
            if (!(forward(net, p).pattern == base)) return false;
        }
    return true;
}

double max_relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double floor) {
    const double scale = std::max(b.cwiseAbs().maxCoeff(), 1e-300);
    double worst = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const double denom = std::max(std::abs(b(i, j)), floor * scale);
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / denom);
        }
    return worst;
}

double svd_identity_error(const Eigen::MatrixXd& jac, const LocalFrame& frame) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < frame.size(); ++i)
        worst = std::max(worst, (jac * frame.u.col(i) - frame.sigma[i] * frame.v.col(i))
                                    .cwiseAbs()
                                    .maxCoeff());
    return worst;
}

std::vector<Eigen::Index> gapped_components(const LocalFrame& frame, Eigen::Index d_w, double relative_gap) {
    std::vector<Eigen::Index> out;
    const Eigen::Index n = frame.size();
    if (n == 0) return out;
    const double bound = relative_gap * frame.sigma[0];
    for (Eigen::Index i = 0; i < n; ++i) {
        double gap = std::numeric_limits<double>::infinity();
        if (i > 0) gap = std::min(gap, frame.sigma[i - 1] - frame.sigma[i]);
        if (i + 1 < n) gap = std::min(gap, frame.sigma[i] - frame.sigma[i + 1]);
        else if (d_w > n) gap = std::min(gap, frame.sigma[i]);
        if (gap > bound) out.push_back(i + 1);
    }
    return out;
}

std::vector<CheckResult> validate_network(const MappingNetwork& net, int n_points, std::uint64_t seed) {
    CheckResult svd{"svd_identity", true, 0.0, 1e-9, ""};
    CheckResult ortho{"frame_orthonormality", true, 0.0, 1e-10, ""};
    CheckResult fd{"finite_difference_jacobian", true, 0.0, 1e-4, ""};
    CheckResult pca{"local_pca_equivalence", true, 1.0, 0.99, ""};
    double worst_cos = 1.0;
    int fd_points = 0;
    long gapped = 0;

    Rng rng(seed);
    for (int p = 0; p < n_points; ++p) {
        Eigen::VectorXd z = move_off_boundary(net, rng.normal_vector(net.in_dim()), rng);
        const Eigen::MatrixXd jac = jacobian(net, z);
        const LocalFrame frame = local_basis(net, z);

        svd.value = std::max(svd.value, svd_identity_error(jac, frame));
        ortho.value = std::max({ortho.value, orthonormality_error(frame.u), orthonormality_error(frame.v)});

        for (int attempt = 0; attempt < 16 && !stencil_in_cell(net, z); ++attempt)
            z = rng.normal_vector(net.in_dim());
        if (stencil_in_cell(net, z)) {
            fd.value = std::max(fd.value, max_relative_error(finite_difference_jacobian(net, z), jacobian(net, z)));
            ++fd_points;
        }

        const LocalFrame at = local_basis(net, z);
        const PrincipalComponents pc =
            local_pca_oracle(net, z, 1e-2, 50 * net.in_dim(), derive_seed(seed, 17, static_cast<std::uint64_t>(p)));
        for (Eigen::Index i : gapped_components(at, net.out_dim())) {
            worst_cos = std::min(worst_cos, std::abs(pc.components.col(i - 1).dot(at.v.col(i - 1))));
            ++gapped;
        }
    }
    pca.value = worst_cos;

    svd.passed = svd.value <= svd.threshold;
    ortho.passed = ortho.value <= ortho.threshold;
    fd.passed = fd_points > 0 && fd.value <= fd.threshold;
    fd.detail = std::to_string(fd_points) + " in-cell points";
    pca.passed = pca.value >= pca.threshold;
    pca.detail = std::to_string(gapped) + " gapped components";
    svd.detail = std::to_string(n_points) + " points";
    ortho.detail = svd.detail;
    return {svd, ortho, fd, pca};
}

}  // namespace latentgeom
