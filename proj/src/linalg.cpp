#include "latentgeom/linalg.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "latentgeom/errors.hpp"

namespace latentgeom {

void normalize_column_signs(Eigen::MatrixXd& m, Eigen::MatrixXd* companion) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            const double a = std::abs(m(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (m.rows() > 0 && m(arg, j) < 0.0) {
            m.col(j) = -m.col(j);
            if (companion) companion->col(j) = -companion->col(j);
        }
    }
}

double orthonormality_error(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd gram = m.transpose() * m;
    return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

PrincipalComponents principal_components(const Eigen::MatrixXd& samples) {
    const Eigen::Index n = samples.cols();
    if (n < 2) throw UnderSampledError("PCA needs at least two samples");
    PrincipalComponents pc;
    pc.mean = samples.rowwise().mean();
    const Eigen::MatrixXd centred = samples.colwise() - pc.mean;
    const Eigen::MatrixXd cov = (centred * centred.transpose()) / static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) throw NumericalError("covariance eigendecomposition failed");

    // ascending -> descending
    const Eigen::Index d = cov.rows();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return eig.eigenvalues()[a] > eig.eigenvalues()[b];
    });
    pc.components.resize(d, d);
    pc.variances.resize(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        pc.components.col(j) = eig.eigenvectors().col(order[static_cast<std::size_t>(j)]);
        pc.variances[j] = std::max(0.0, eig.eigenvalues()[order[static_cast<std::size_t>(j)]]);
    }
    normalize_column_signs(pc.components);
    return pc;
}

}  // namespace latentgeom
