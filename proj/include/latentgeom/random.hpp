#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace latentgeom {

/// splitmix64 finalizer; used to derive independent per-task seeds from a master seed.
std::uint64_t mix_seed(std::uint64_t x) noexcept;

/// Seed for task `index` of stream `stream` under `master`. Results do not depend on
/// scheduling, so parallel and sequential runs agree bitwise.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index) noexcept;

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi);

    Eigen::VectorXd normal_vector(Eigen::Index n);
    Eigen::MatrixXd normal_matrix(Eigen::Index rows, Eigen::Index cols);
    /// Uniform on the unit sphere S^{n-1}.
    Eigen::VectorXd unit_vector(Eigen::Index n);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace latentgeom
