#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "latentgeom/errors.hpp"
#include "latentgeom/generate.hpp"
#include "latentgeom/global_basis.hpp"
#include "latentgeom/grassmann.hpp"
#include "latentgeom/linalg.hpp"
#include "latentgeom/local_basis.hpp"
#include "latentgeom/random.hpp"

using namespace latentgeom;

TEST_CASE("sampled PCA of a linear map recovers its left singular vectors") {
    Eigen::MatrixXd a(3, 3);
    a << 4, 1, 0, 0, 2, 0.5, 0, 0, 1;
    auto net = testing::single_layer(a, Activation::identity());
    auto basis = ganspace_basis(net, 100 * 3, 6);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU);
    for (Eigen::Index i = 0; i < 3; ++i)
        CHECK(std::abs(basis.directions.col(i).dot(svd.matrixU().col(i))) >= 0.99);
    CHECK(basis.method == GlobalMethod::SampledPCA);
    CHECK(basis.sample_count == 300);
    CHECK(to_string(basis.method) == "ganspace");
}

TEST_CASE("sampled PCA on the identity net is isotropic") {
    auto basis = ganspace_basis(testing::identity_net(4), 20000, 2);
    double hi = basis.magnitudes.maxCoeff(), lo = basis.magnitudes.minCoeff();
    CHECK((hi - lo) / hi < 0.1);
    CHECK(basis.magnitudes.mean() == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("sampled PCA is deterministic and ordered") {
    auto net = testing::curved_net();
    auto a = ganspace_basis(net, 400, 9);
    auto b = ganspace_basis(net, 400, 9);
    CHECK((a.directions - b.directions).norm() == 0.0);
    CHECK((a.magnitudes - b.magnitudes).norm() == 0.0);
    for (Eigen::Index i = 1; i < a.magnitudes.size(); ++i) CHECK(a.magnitudes[i] <= a.magnitudes[i - 1]);
    CHECK(orthonormality_error(a.directions) < 1e-10);
    CHECK_THROWS_AS(ganspace_basis(net, 32, 1), UnderSampledError);
}

TEST_CASE("sefa on a diagonal single layer") {
    auto basis = sefa_basis(testing::diag_net(3.0, 1.0));
    CHECK((basis.directions - Eigen::Matrix2d::Identity()).norm() < 1e-15);
    CHECK(basis.magnitudes[0] == doctest::Approx(3.0));
    CHECK(basis.magnitudes[1] == doctest::Approx(1.0));
    CHECK(to_string(basis.method) == "sefa");
}

TEST_CASE("sefa with an orthogonal first weight") {
    auto net = generate_network({6, 6, 6}, 1.0, 8, InitScheme::Orthogonal);
    auto svd = first_weight_svd(net);
    CHECK(svd.sigma.maxCoeff() - svd.sigma.minCoeff() < 1e-9);
}

TEST_CASE("first-weight SVD agrees with an eigen-decomposition") {
    auto net = generate_network({7, 5, 9}, 0.2, 13);
    const Eigen::MatrixXd& w = net.layers()[0].weight;
    auto svd = first_weight_svd(net);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(w * w.transpose());
    for (Eigen::Index i = 0; i < svd.sigma.size(); ++i) {
        Eigen::Index src = es.eigenvalues().size() - 1 - i;
        CHECK(std::abs(svd.sigma[i] - std::sqrt(es.eigenvalues()[src])) <= 1e-10);
        Eigen::VectorXd ev = es.eigenvectors().col(src);
        CHECK(std::abs(std::abs(ev.dot(svd.left.col(i))) - 1.0) <= 1e-10);
    }
    CHECK((svd.left * svd.sigma.asDiagonal() * svd.right.transpose() - w).norm() <= 1e-10);
}

TEST_CASE("sefa pushforward for deeper nets") {
    auto net = testing::curved_net();
    auto basis = sefa_basis(net);
    CHECK(orthonormality_error(basis.directions) < 1e-10);
    CHECK(basis.size() == testing::kCurvedDz);
    for (Eigen::Index i = 1; i < basis.magnitudes.size(); ++i) CHECK(basis.magnitudes[i] <= basis.magnitudes[i - 1]);
    // the leading direction is the image of the leading right singular vector
    Eigen::VectorXd z_ref = Eigen::VectorXd::Zero(net.in_dim());
    auto at_ref = sefa_basis(net, z_ref);
    Eigen::VectorXd pushed = jacobian(net, z_ref) * first_weight_svd(net).right.col(0);
    CHECK(std::abs(std::abs(pushed.normalized().dot(at_ref.directions.col(0))) - 1.0) < 1e-12);
    CHECK_THROWS_AS(basis.top(0), RankError);
    CHECK(basis.top(3).dim() == 3);
}

TEST_CASE("affine nets: sampled PCA spans the local top-k space") {
    auto net = testing::affine_net();
    auto basis = ganspace_basis(net, 10000, 3);
    auto frame = local_basis(net, Rng(1).normal_vector(net.in_dim()));
    const Eigen::Index k = net.in_dim();
    CHECK(projection_metric(basis.top(k), Subspace::from_orthonormal(frame.top(k))) < 1e-6);
    CHECK(geodesic_metric(basis.top(k), Subspace::from_orthonormal(frame.top(k))) < 1e-6);
}
