#include "latentgeom/global_basis.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "latentgeom/errors.hpp"
#include "latentgeom/linalg.hpp"
#include "latentgeom/random.hpp"

namespace latentgeom {

std::string to_string(GlobalMethod method) {
    return method == GlobalMethod::SampledPCA ? "ganspace" : "sefa";
}

Subspace GlobalBasis::top(Eigen::Index k) const {
    if (k < 1 || k > size())
        throw RankError("global basis has " + std::to_string(size()) + " directions, asked for " +
                        std::to_string(k));
    return Subspace::from_orthonormal(directions.leftCols(k));
}

GlobalBasis ganspace_basis(const MappingNetwork& net, Eigen::Index n_samples, std::uint64_t seed) {
    if (n_samples <= net.out_dim())
        throw UnderSampledError("sampled PCA needs more than d_W = " +
                                std::to_string(net.out_dim()) + " samples, got " +
                                std::to_string(n_samples));
    Rng rng(seed);
    Eigen::MatrixXd samples(net.out_dim(), n_samples);
    for (Eigen::Index s = 0; s < n_samples; ++s)
        samples.col(s) = evaluate(net, rng.normal_vector(net.in_dim()));
    PrincipalComponents pc = principal_components(samples);
    GlobalBasis basis;
    basis.directions = std::move(pc.components);
    basis.magnitudes = std::move(pc.variances);
    basis.method = GlobalMethod::SampledPCA;
    basis.sample_count = n_samples;
    return basis;
}

WeightSvd first_weight_svd(const MappingNetwork& net) {
    const Eigen::MatrixXd& weight = net.layers().front().weight;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(weight, Eigen::ComputeThinU | Eigen::ComputeThinV);
    WeightSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    normalize_column_signs(out.left, &out.right);
    return out;
}

namespace {

// Gram-Schmidt in column order, dropping columns that are (numerically) dependent on
// the ones already kept.
std::vector<Eigen::Index> orthonormalize_in_order(Eigen::MatrixXd& m) {
    std::vector<Eigen::Index> kept;
    const double scale = m.colwise().norm().maxCoeff();
    Eigen::MatrixXd out(m.rows(), 0);
    for (Eigen::Index j = 0; j < m.cols() && out.cols() < m.rows(); ++j) {
        Eigen::VectorXd col = m.col(j);
        for (int pass = 0; pass < 2; ++pass) col -= out * (out.transpose() * col);
        const double norm = col.norm();
        if (norm <= 1e-10 * scale) continue;
        out.conservativeResize(Eigen::NoChange, out.cols() + 1);
        out.col(out.cols() - 1) = col / norm;
        kept.push_back(j);
    }
    m = std::move(out);
    return kept;
}

}  // namespace

GlobalBasis sefa_basis(const MappingNetwork& net, const std::optional<Eigen::VectorXd>& z_reference) {
    const WeightSvd svd = first_weight_svd(net);
    GlobalBasis basis;
    basis.method = GlobalMethod::FirstWeightSVD;
    if (net.depth() == 1) {
        basis.directions = svd.left;
        basis.magnitudes = svd.sigma;
        return basis;
    }

    Eigen::VectorXd z_ref;
    if (z_reference) {
        z_ref = *z_reference;
    } else {
        Rng rng(0);
        z_ref = move_off_boundary(net, Eigen::VectorXd::Zero(net.in_dim()), rng);
    }
    Eigen::MatrixXd pushed = jacobian(net, z_ref) * svd.right;
    const auto kept = orthonormalize_in_order(pushed);
    normalize_column_signs(pushed);
    basis.directions = std::move(pushed);
    basis.magnitudes.resize(static_cast<Eigen::Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i)
        basis.magnitudes[static_cast<Eigen::Index>(i)] = svd.sigma[kept[i]];
    return basis;
}

}  // namespace latentgeom
