#pragma once

#include <Eigen/Dense>

namespace latentgeom {

/// Flips each column of `m` so its largest-magnitude entry is positive (first such
/// entry on ties). When `companion` is given, its matching columns are flipped too.
void normalize_column_signs(Eigen::MatrixXd& m, Eigen::MatrixXd* companion = nullptr);

/// max |M^T M - I|.
double orthonormality_error(const Eigen::MatrixXd& m);

struct PrincipalComponents {
    Eigen::MatrixXd components;  // d x d, columns ordered by variance, descending
    Eigen::VectorXd variances;   // eigenvalues of the sample covariance
    Eigen::VectorXd mean;
};

/// Mean-centred PCA of `samples` (one sample per column), unbiased covariance.
/// Components are sign-normalized.
PrincipalComponents principal_components(const Eigen::MatrixXd& samples);

}  // namespace latentgeom
