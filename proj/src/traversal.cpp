#include "latentgeom/traversal.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "latentgeom/random.hpp"

namespace latentgeom {

std::string to_string(TraversalMode mode) {
    switch (mode) {
        case TraversalMode::Linear: return "linear";
        case TraversalMode::Iterative: return "iterative";
        case TraversalMode::GuidedIterative: return "guided";
        case TraversalMode::StochasticGuided: return "stochastic";
    }
    return "unknown";
}

namespace {

void check_points(int n_points) {
    if (n_points < 2) throw Error("linear traversal needs at least two points");
}

LinearTraversal sweep(const MappingNetwork& net, const LocalFrame& frame,
                      const Eigen::VectorXd& w_dir, const Eigen::VectorXd& z_dir, double intensity,
                      int n_points) {
    LinearTraversal out;
    for (int i = 0; i < n_points; ++i) {
        const double t = intensity * static_cast<double>(i) / static_cast<double>(n_points - 1);
        Eigen::VectorXd z = frame.z + t * z_dir;
        out.w_line.push_back(frame.w + t * w_dir);
        out.w_manifold.push_back(i == 0 ? frame.w : evaluate(net, z));
        out.z.push_back(std::move(z));
        out.t.push_back(t);
    }
    return out;
}

/// Frame at z, taken at a nudged copy when z sits on a boundary.
LocalFrame frame_near(const MappingNetwork& net, const Eigen::VectorXd& z, std::uint64_t nudge_seed,
                      bool& nudged) {
    ForwardResult fw = forward(net, z);
    nudged = fw.pattern.on_boundary();
    if (!nudged) return frame_from_jacobian(z, fw.w, jacobian_for_pattern(net, fw.pattern));
    Rng rng(nudge_seed);
    const Eigen::VectorXd shifted = move_off_boundary(net, z, rng);
    const ForwardResult near = forward(net, shifted);
    // keep the iterate's own (z, w); only the Jacobian comes from the nudged point
    return frame_from_jacobian(z, fw.w, jacobian_for_pattern(net, near.pattern));
}

struct Departure {
    Eigen::Index index = 0;  // 0-based
    double orientation = 1.0;
};

Departure most_aligned(const LocalFrame& frame, const Eigen::VectorXd& reference) {
    Departure best;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < frame.size(); ++i) {
        const double c = reference.dot(frame.v.col(i));
        if (std::abs(c) > best_abs) {  // strict: ties keep the smaller index
            best_abs = std::abs(c);
            best.index = i;
            best.orientation = c < 0.0 ? -1.0 : 1.0;
        }
    }
    return best;
}

struct EngineConfig {
    std::optional<Departure> first;  // fixed first departure, else use the guide
    Eigen::VectorXd guide;           // unit vector; empty when unused
    bool guide_every_step = false;
    std::vector<double> lengths;
    TraversalMode mode = TraversalMode::Iterative;
    double intensity = 0.0;
};

TraversalPath run_curve(const MappingNetwork& net, const Eigen::VectorXd& z0, const EngineConfig& cfg) {
    TraversalPath path;
    path.intensity = cfg.intensity;
    path.mode = cfg.mode;

    Iterate current;
    current.z = z0;
    current.w = evaluate(net, z0);

    Eigen::VectorXd previous;  // oriented departure direction of the last step
    const std::uint64_t nudge_stream = mix_seed(0x6e75646765ULL);
    for (std::size_t step = 0; step < cfg.lengths.size(); ++step) {
        bool nudged = false;
        const LocalFrame frame = frame_near(net, current.z, derive_seed(nudge_stream, 0, step), nudged);
        if (nudged) ++path.boundary_warnings;

        Departure dep;
        if (step == 0 && cfg.first) {
            dep = *cfg.first;
        } else if (step == 0 || cfg.guide_every_step) {
            dep = most_aligned(frame, cfg.guide);
        } else {
            dep = most_aligned(frame, previous);
        }
        if (!(frame.sigma[dep.index] > frame.rank_tol())) {
            path.iterates.push_back(current);
            throw TraversalAborted("traversal aborted at step " + std::to_string(step) +
                                       ": direction " + std::to_string(dep.index + 1) +
                                       " has singular value " + std::to_string(frame.sigma[dep.index]) +
                                       " at or below rank tolerance",
                                   std::move(path));
        }

        const Eigen::VectorXd v = dep.orientation * frame.v.col(dep.index);
        const Eigen::VectorXd u = dep.orientation * frame.u.col(dep.index);
        current.direction_index = dep.index + 1;
        current.direction = v;
        current.sigma = frame.sigma[dep.index];
        current.step_length = cfg.lengths[step];
        current.boundary_nudged = nudged;
        if (previous.size() > 0) current.cosine_to_previous = previous.dot(v);

        Iterate next;
        next.z = current.z + (cfg.lengths[step] / current.sigma) * u;
        next.w = evaluate(net, next.z);
        path.iterates.push_back(std::move(current));
        current = std::move(next);
        previous = v;
        ++path.n_steps;
    }
    path.iterates.push_back(std::move(current));
    return path;
}

void check_budget(double intensity, int n_steps) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
        throw Error("intensity must be finite and non-negative");
    if (n_steps < 1) throw Error("number of steps must be at least 1");
}

}  // namespace

LinearTraversal linear_traverse(const MappingNetwork& net, const LocalFrame& frame, Eigen::Index k,
                                double intensity, int n_points) {
    frame.require_direction(k);
    check_points(n_points);
    const Eigen::VectorXd z_dir = frame.u.col(k - 1) / frame.sigma[k - 1];
    return sweep(net, frame, frame.v.col(k - 1), z_dir, intensity, n_points);
}

LinearTraversal linear_traverse_along(const MappingNetwork& net, const LocalFrame& frame,
                                      const Eigen::VectorXd& direction, double intensity,
                                      int n_points) {
    if (direction.size() != frame.w.size()) throw ShapeError("direction length does not match d_W");
    const double norm = direction.norm();
    if (!(norm > 0.0)) throw InvalidDirectionError("traversal direction has zero length");
    check_points(n_points);
    const Eigen::VectorXd d = direction / norm;
    Eigen::VectorXd z_dir = Eigen::VectorXd::Zero(frame.z.size());
    for (Eigen::Index i = 0; i < frame.size(); ++i)
        if (frame.sigma[i] > frame.rank_tol())
            z_dir += (frame.v.col(i).dot(d) / frame.sigma[i]) * frame.u.col(i);
    return sweep(net, frame, d, z_dir, intensity, n_points);
}

std::vector<double> step_lengths(const StepPolicy& policy, double intensity, int n_steps) {
    std::vector<double> lengths;
    if (policy.kind == StepPolicy::Kind::Fixed) {
        check_budget(intensity, n_steps);
        lengths.assign(static_cast<std::size_t>(n_steps), intensity / n_steps);
        return lengths;
    }
    if (!(policy.lo > 0.0 && policy.hi > policy.lo))
        throw Error("uniform step policy needs 0 < lo < hi");
    check_budget(intensity, 1);
    Rng rng(policy.seed);
    double done = 0.0;
    while (done < intensity) {
        double s = rng.uniform(policy.lo, policy.hi);
        const bool last = done + s >= intensity;
        if (last) s = intensity - done;
        lengths.push_back(s);
        if (last) break;
        done += s;
    }
    return lengths;
}

TraversalPath iterative_traverse(const MappingNetwork& net, const Eigen::VectorXd& z0,
                                 Eigen::Index k, double intensity, int n_steps, int sign) {
    check_budget(intensity, n_steps);
    if (sign != 1 && sign != -1) throw Error("sign must be +1 or -1");
    const LocalFrame start = local_basis(net, z0);
    start.require_direction(k);

    EngineConfig cfg;
    cfg.first = Departure{k - 1, static_cast<double>(sign)};
    cfg.lengths.assign(static_cast<std::size_t>(n_steps), intensity / n_steps);
    cfg.mode = TraversalMode::Iterative;
    cfg.intensity = intensity;
    return run_curve(net, z0, cfg);
}

TraversalPath iterative_traverse_both(const MappingNetwork& net, const Eigen::VectorXd& z0,
                                      Eigen::Index k, double intensity, int n_steps) {
    TraversalPath negative = iterative_traverse(net, z0, k, intensity, n_steps, -1);
    TraversalPath positive = iterative_traverse(net, z0, k, intensity, n_steps, +1);
    TraversalPath both;
    both.intensity = 2.0 * intensity;
    both.mode = TraversalMode::Iterative;
    both.n_steps = negative.n_steps + positive.n_steps;
    both.boundary_warnings = negative.boundary_warnings + positive.boundary_warnings;
    both.iterates.assign(negative.iterates.rbegin(), negative.iterates.rend() - 1);
    both.iterates.insert(both.iterates.end(), positive.iterates.begin(), positive.iterates.end());
    return both;
}

TraversalPath guided_iterative_traverse(const MappingNetwork& net, const Eigen::VectorXd& z0,
                                        const Eigen::VectorXd& v_global, double intensity,
                                        int n_steps, const StepPolicy& policy,
                                        SimilarityTarget target) {
    if (v_global.size() != net.out_dim()) throw ShapeError("guide vector length does not match d_W");
    const double norm = v_global.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw InvalidDirectionError("guide vector must be finite and non-zero");

    EngineConfig cfg;
    cfg.guide = v_global / norm;
    cfg.guide_every_step = target == SimilarityTarget::GlobalEveryStep;
    cfg.lengths = step_lengths(policy, intensity, n_steps);
    cfg.mode = policy.kind == StepPolicy::Kind::Fixed ? TraversalMode::GuidedIterative
                                                      : TraversalMode::StochasticGuided;
    cfg.intensity = intensity;
    return run_curve(net, z0, cfg);
}

}  // namespace latentgeom
