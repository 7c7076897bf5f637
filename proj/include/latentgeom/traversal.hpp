#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "latentgeom/errors.hpp"
#include "latentgeom/local_basis.hpp"
#include "latentgeom/network.hpp"

namespace latentgeom {

enum class TraversalMode { Linear, Iterative, GuidedIterative, StochasticGuided };

std::string to_string(TraversalMode mode);

/// One point of a traversal. The departure fields describe the step leaving this
/// iterate and are unset (index 0, empty direction) on the final iterate.
struct Iterate {
    Eigen::VectorXd z;
    Eigen::VectorXd w;  // always f(z)

    Eigen::Index direction_index = 0;  // 1-based Local Basis index of the departure
    Eigen::VectorXd direction;         // oriented departure direction in W
    double sigma = 0.0;                // singular value of the departure direction
    double step_length = 0.0;          // intended W-length of the departing piece
    double cosine_to_previous = std::numeric_limits<double>::quiet_NaN();
    bool boundary_nudged = false;  // frame was taken at a nudged copy of z
};

struct TraversalPath {
    std::vector<Iterate> iterates;
    double intensity = 0.0;
    int n_steps = 0;
    TraversalMode mode = TraversalMode::Iterative;
    int boundary_warnings = 0;

    const Iterate& front() const { return iterates.front(); }
    const Iterate& back() const { return iterates.back(); }
};

/// Raised when a selected direction has a singular value at or below the rank
/// tolerance mid-path. Carries the iterates produced so far.
class TraversalAborted : public RankError {
public:
    TraversalAborted(const std::string& what, TraversalPath partial)
        : RankError(what), partial_(std::move(partial)) {}
    const TraversalPath& partial_path() const noexcept { return partial_; }

private:
    TraversalPath partial_;
};

/// Straight-line traversal. w_line is the line w + t d in W; z holds the linearized
/// preimages z + t J^+ d and w_manifold their images f(z(t)).
struct LinearTraversal {
    std::vector<double> t;
    std::vector<Eigen::VectorXd> z;
    std::vector<Eigen::VectorXd> w_line;
    std::vector<Eigen::VectorXd> w_manifold;
};

/// Linear traversal along Local Basis direction k (1-based) for t evenly spaced in
/// [0, intensity]: z(t) = z + (t / sigma_k) u_k, w_line(t) = w + t v_k.
LinearTraversal linear_traverse(const MappingNetwork& net, const LocalFrame& frame, Eigen::Index k,
                                double intensity, int n_points);

/// Linear traversal along an arbitrary W direction (normalized internally), e.g. a
/// global basis vector. Preimages use the pseudo-inverse of the Jacobian at the frame.
LinearTraversal linear_traverse_along(const MappingNetwork& net, const LocalFrame& frame,
                                      const Eigen::VectorXd& direction, double intensity,
                                      int n_points);

/// Iterative Curve-Traversal: N pieces of W-length intensity / N. Each piece departs
/// along the Local Basis vector most aligned with the previous departure direction,
/// oriented to agree with it. sign = -1 starts along -v_k.
TraversalPath iterative_traverse(const MappingNetwork& net, const Eigen::VectorXd& z0,
                                 Eigen::Index k, double intensity, int n_steps, int sign = 1);

/// Negative branch (reversed) followed by the positive branch; 2N + 1 iterates with
/// z0 in the middle.
TraversalPath iterative_traverse_both(const MappingNetwork& net, const Eigen::VectorXd& z0,
                                      Eigen::Index k, double intensity, int n_steps);

struct StepPolicy {
    enum class Kind { Fixed, UniformRandom } kind = Kind::Fixed;
    double lo = 0.05;
    double hi = 0.15;
    std::uint64_t seed = 0;

    static StepPolicy fixed() { return {}; }
    static StepPolicy uniform_random(double lo, double hi, std::uint64_t seed) {
        return {Kind::UniformRandom, lo, hi, seed};
    }
};

enum class SimilarityTarget {
    GlobalEveryStep,    // every departure is compared with the guide vector
    PreviousDirection,  // only the first departure uses the guide
};

/// Iterative traversal steered by an external W direction. Fixed uses N steps of
/// intensity / N; UniformRandom draws step lengths from U[lo, hi] and truncates the
/// last step so the lengths sum to exactly `intensity` (n_steps is ignored).
TraversalPath guided_iterative_traverse(const MappingNetwork& net, const Eigen::VectorXd& z0,
                                        const Eigen::VectorXd& v_global, double intensity,
                                        int n_steps, const StepPolicy& policy,
                                        SimilarityTarget target);

/// Step lengths the policy would use for the given budget.
std::vector<double> step_lengths(const StepPolicy& policy, double intensity, int n_steps);

}  // namespace latentgeom
