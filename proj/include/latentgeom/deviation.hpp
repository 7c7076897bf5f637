#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "latentgeom/network.hpp"
#include "latentgeom/traversal.hpp"

namespace latentgeom {

struct ProjectionOptions {
    int max_iters = 200;
    double gradient_tol = 1e-10;
    double initial_damping = 1e-3;
};

struct ProjectionResult {
    Eigen::VectorXd z;
    /// ||f(z) - w_target||: an upper bound on the distance from w_target to the manifold f(Z).
    double residual = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Minimizes 1/2 ||f(z) - w_target||^2 from z_init by Levenberg-damped Gauss-Newton with
/// the exact piecewise Jacobian. Never throws on non-convergence; returns the best point
/// found with converged = false.
ProjectionResult project_to_manifold(const MappingNetwork& net, const Eigen::VectorXd& w_target,
                                     const Eigen::VectorXd& z_init,
                                     const ProjectionOptions& options = {});

struct PointDeviation {
    double residual = 0.0;
    bool converged = false;
};

inline constexpr int kDefaultRestarts = 8;

/// Best residual per point over the optional hint z_hints[i] (skip with an empty
/// vector or an empty list) and `restarts` draws z ~ N(0, I). Draws for point i come
/// from a stream seeded by (seed, i), so adding restarts never increases a residual
/// and results do not depend on `threads`.
std::vector<PointDeviation> point_deviation(const MappingNetwork& net,
                                            const std::vector<Eigen::VectorXd>& points,
                                            const std::vector<Eigen::VectorXd>& z_hints,
                                            int restarts, std::uint64_t seed, unsigned threads = 1,
                                            const ProjectionOptions& options = {});

/// Deviation of every iterate of a path, using the iterate's own z as the hint.
/// Residuals are exactly zero since w_n = f(z_n).
std::vector<PointDeviation> traversal_deviation(const MappingNetwork& net, const TraversalPath& path,
                                                int restarts, std::uint64_t seed,
                                                unsigned threads = 1,
                                                const ProjectionOptions& options = {});

/// Deviation of the straight line of a linear traversal, hinted by its preimages.
std::vector<PointDeviation> traversal_deviation(const MappingNetwork& net,
                                                const LinearTraversal& line, int restarts,
                                                std::uint64_t seed, unsigned threads = 1,
                                                const ProjectionOptions& options = {});

}  // namespace latentgeom
