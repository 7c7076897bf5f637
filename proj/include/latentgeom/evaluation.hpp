#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "latentgeom/local_basis.hpp"
#include "latentgeom/network.hpp"

namespace latentgeom {

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation; 0 when n == 1
    long n = 0;
};

SummaryStats summarize(const std::vector<double>& values);

/// Row of an experiment table. `setting` is one of random_od, random_w, close_w,
/// to_ganspace, to_sefa; `parameter` is k (warpage) or epsilon (eps-sweep).
struct ReportRow {
    std::string setting;
    double parameter = 0.0;
    std::string metric;  // projection | geodesic
    SummaryStats stats;
};

struct ExperimentReport {
    std::string experiment;
    std::vector<ReportRow> rows;
    nlohmann::json config;  // network hash, seed and every parameter
    long resampled = 0;     // base points redrawn because of rank deficiency

    /// Throws Error when no such row exists.
    const ReportRow& find(const std::string& setting, double parameter, const std::string& metric) const;
    std::string to_csv() const;
    nlohmann::json to_json() const;
};

struct WarpageConfig {
    std::vector<Eigen::Index> k_values{1, 5, 10};
    int n_pairs = 1000;            // w-based settings
    int n_pairs_random_od = 100;   // Haar frame pairs
    double eps = 0.1;              // |z' - z| for close_w
    std::uint64_t seed = 0;
    Eigen::Index ganspace_samples = 0;  // 0: max(10000, 100 d_W)
    bool include_global = true;
    unsigned threads = 1;
};

/// Grassmann distances between top-k subspaces in the five comparison settings.
ExperimentReport warpage_suite(const MappingNetwork& net, const WarpageConfig& config);

/// close_w distances for each epsilon. Each pair reuses one base point and one unit
/// direction across every epsilon.
ExperimentReport eps_sweep(const MappingNetwork& net, Eigen::Index k, const std::vector<double>& eps_list,
                           int n_pairs, std::uint64_t seed, unsigned threads = 1);

struct SvHistogram {
    std::vector<double> edges;  // bins + 1, from 0 to the largest pooled value
    std::vector<long> jacobian_counts;
    std::vector<long> baseline_counts;
    std::vector<double> jacobian_values;
    std::vector<double> baseline_values;
    double entry_mean = 0.0;  // pooled Jacobian entries
    double entry_std = 0.0;
    /// Fraction of values below 0.1 x that distribution's own median.
    double jacobian_small_fraction = 0.0;
    double baseline_small_fraction = 0.0;
    nlohmann::json config;

    std::string to_csv() const;
    nlohmann::json to_json() const;
};

/// Singular values pooled over n_points Jacobians at z ~ N(0, I), against Gaussian
/// matrices of the same shape whose entries are matched to the pooled Jacobian
/// entries' mean and standard deviation.
SvHistogram sv_histogram(const MappingNetwork& net, int n_points, int bins, std::uint64_t seed);

double small_value_fraction(std::vector<double> values, double relative_to_median = 0.1);

struct LatentGrid {
    std::vector<double> x;  // per point
    std::vector<double> y;
    std::vector<Eigen::VectorXd> points;
    int n_per_axis = 0;

    std::string to_csv() const;
};

/// (2n + 1)^2 points center + x d1 + y d2 with x, y on an even mesh of [-half_extent, half_extent].
LatentGrid direction_grid(const Eigen::VectorXd& center, const Eigen::VectorXd& d1,
                          const Eigen::VectorXd& d2, double half_extent, int n_per_axis);

/// Grid in the plane of Local Basis directions i and j (1-based) around frame.w.
LatentGrid subspace_grid(const LocalFrame& frame, Eigen::Index i, Eigen::Index j, double half_extent,
                         int n_per_axis);

/// Round-trip decimal formatting used by every CSV writer.
std::string format_real(double x);

}  // namespace latentgeom
