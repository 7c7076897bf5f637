#include "latentgeom/deviation.hpp"

#include <algorithm>
#include <limits>

#include "latentgeom/errors.hpp"
#include "latentgeom/parallel.hpp"
#include "latentgeom/random.hpp"

namespace latentgeom {

namespace {

constexpr double kMaxDamping = 1e12;

}  // namespace

ProjectionResult project_to_manifold(const MappingNetwork& net, const Eigen::VectorXd& w_target,
                                     const Eigen::VectorXd& z_init, const ProjectionOptions& options) {
    if (w_target.size() != net.out_dim()) throw ShapeError("target length does not match d_W");
    if (!w_target.allFinite()) throw ShapeError("target has non-finite entries");

    ProjectionResult result;
    result.z = z_init;
    ForwardResult fw = forward(net, result.z);
    Eigen::VectorXd r = fw.w - w_target;
    double cost = 0.5 * r.squaredNorm();
    double damping = options.initial_damping;
    const Eigen::Index dz = net.in_dim();

    while (result.iterations < options.max_iters) {
        if (cost == 0.0) {
            result.converged = true;
            break;
        }
        const Eigen::MatrixXd jac = jacobian_for_pattern(net, fw.pattern);
        const Eigen::VectorXd grad = jac.transpose() * r;
        if (grad.norm() <= options.gradient_tol) {
            result.converged = true;
            break;
        }
        const Eigen::MatrixXd normal = jac.transpose() * jac;
        ++result.iterations;
        bool accepted = false;
        while (!accepted && damping <= kMaxDamping) {
            const Eigen::MatrixXd lhs = normal + damping * Eigen::MatrixXd::Identity(dz, dz);
            const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
            const Eigen::VectorXd z_try = result.z + step;
            ForwardResult fw_try = forward(net, z_try);
            Eigen::VectorXd r_try = fw_try.w - w_target;
            const double cost_try = 0.5 * r_try.squaredNorm();
            if (cost_try < cost) {
                result.z = z_try;
                fw = std::move(fw_try);
                r = std::move(r_try);
                cost = cost_try;
                damping = std::max(damping / 10.0, 1e-15);
                accepted = true;
            } else {
                damping *= 10.0;
            }
        }
        if (!accepted) break;  // stalled at a kink or a local minimum
    }
    result.residual = r.norm();
    return result;
}

std::vector<PointDeviation> point_deviation(const MappingNetwork& net,
                                            const std::vector<Eigen::VectorXd>& points,
                                            const std::vector<Eigen::VectorXd>& z_hints,
                                            int restarts, std::uint64_t seed, unsigned threads,
                                            const ProjectionOptions& options) {
    if (restarts < 0) throw Error("restarts must be non-negative");
    if (!z_hints.empty() && z_hints.size() != points.size())
        throw ShapeError("hint list must be empty or match the number of points");
    std::vector<PointDeviation> out(points.size());
    parallel_for(points.size(), threads, [&](std::size_t i) {
        PointDeviation best{std::numeric_limits<double>::infinity(), false};
        auto consider = [&](const Eigen::VectorXd& z_init) {
            const ProjectionResult res = project_to_manifold(net, points[i], z_init, options);
            if (res.residual < best.residual) best = {res.residual, res.converged};
        };
        if (!z_hints.empty() && z_hints[i].size() > 0) consider(z_hints[i]);
        Rng rng(derive_seed(seed, 0x646576ULL, i));
        for (int r = 0; r < restarts && best.residual > 0.0; ++r) consider(rng.normal_vector(net.in_dim()));
        out[i] = best;
    });
    return out;
}

std::vector<PointDeviation> traversal_deviation(const MappingNetwork& net, const TraversalPath& path,
                                                int restarts, std::uint64_t seed, unsigned threads,
                                                const ProjectionOptions& options) {
    std::vector<Eigen::VectorXd> points;
    std::vector<Eigen::VectorXd> hints;
    for (const auto& it : path.iterates) {
        points.push_back(it.w);
        hints.push_back(it.z);
    }
    return point_deviation(net, points, hints, restarts, seed, threads, options);
}

std::vector<PointDeviation> traversal_deviation(const MappingNetwork& net,
                                                const LinearTraversal& line, int restarts,
                                                std::uint64_t seed, unsigned threads,
                                                const ProjectionOptions& options) {
    return point_deviation(net, line.w_line, line.z, restarts, seed, threads, options);
}

}  // namespace latentgeom
