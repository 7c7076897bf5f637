#include "latentgeom/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>

#include "latentgeom/errors.hpp"
#include "latentgeom/global_basis.hpp"
#include "latentgeom/grassmann.hpp"
#include "latentgeom/network_io.hpp"
#include "latentgeom/parallel.hpp"
#include "latentgeom/random.hpp"

namespace latentgeom {

namespace {

constexpr int kMaxResamples = 1000;

enum Stream : std::uint64_t {
    kStreamRandomW = 1,
    kStreamCloseW = 2,
    kStreamRandomOd = 3,
    kStreamGanspace = 4,
    kStreamEps = 5,
    kStreamHistogram = 6,
    kStreamBaseline = 7,
};

const char* const kMetrics[2] = {"projection", "geodesic"};

struct Distances {
    double projection = 0.0;
    double geodesic = 0.0;
};

Distances distances(const Subspace& a, const Subspace& b) {
    return {projection_metric(a, b), geodesic_metric(a, b)};
}

/// Frame at z (nudged off boundaries) when sigma_k clears the rank tolerance.
std::optional<LocalFrame> usable_frame(const MappingNetwork& net, const Eigen::VectorXd& z,
                                       Eigen::Index k, Rng& rng) {
    const Eigen::VectorXd clear = move_off_boundary(net, z, rng);
    LocalFrame frame = local_basis(net, clear);
    if (k > frame.size() || !(frame.sigma[k - 1] > frame.rank_tol())) return std::nullopt;
    return frame;
}

LocalFrame sample_frame(const MappingNetwork& net, Eigen::Index k, Rng& rng, long& resampled) {
    for (int attempt = 0; attempt < kMaxResamples; ++attempt) {
        if (auto frame = usable_frame(net, rng.normal_vector(net.in_dim()), k, rng)) return *frame;
        ++resampled;
    }
    throw RankError("could not sample a point whose top-" + std::to_string(k) +
                    " singular values clear the rank tolerance");
}

Subspace top_span(const LocalFrame& frame, Eigen::Index k) {
    return Subspace::from_orthonormal(frame.top(k));
}

void add_rows(ExperimentReport& report, const std::string& setting, double parameter,
              const std::vector<Distances>& values) {
    std::vector<double> proj;
    std::vector<double> geo;
    for (const auto& d : values) {
        proj.push_back(d.projection);
        geo.push_back(d.geodesic);
    }
    report.rows.push_back({setting, parameter, kMetrics[0], summarize(proj)});
    report.rows.push_back({setting, parameter, kMetrics[1], summarize(geo)});
}

void check_k(const MappingNetwork& net, Eigen::Index k) {
    const Eigen::Index n = std::min(net.in_dim(), net.out_dim());
    if (k < 1 || k > n)
        throw Error("subspace dimension k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
}

}  // namespace

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

SummaryStats summarize(const std::vector<double>& values) {
    SummaryStats s;
    s.n = static_cast<long>(values.size());
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n > 1) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(sq / static_cast<double>(s.n - 1));
    }
    return s;
}

const ReportRow& ExperimentReport::find(const std::string& setting, double parameter,
                                        const std::string& metric) const {
    for (const auto& row : rows)
        if (row.setting == setting && row.parameter == parameter && row.metric == metric) return row;
    throw Error("report has no row " + setting + "/" + format_real(parameter) + "/" + metric);
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream out;
    out << "experiment,setting,parameter,metric,mean,std,n\n";
    for (const auto& row : rows)
        out << experiment << ',' << row.setting << ',' << format_real(row.parameter)
            << ',' << row.metric << ',' << format_real(row.stats.mean) << ','
            << format_real(row.stats.std) << ',' << row.stats.n << '\n';
    return out.str();
}

nlohmann::json ExperimentReport::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& row : rows)
        rows_json.push_back({{"setting", row.setting},
                             {"parameter", row.parameter},
                             {"metric", row.metric},
                             {"mean", row.stats.mean},
                             {"std", row.stats.std},
                             {"n", row.stats.n}});
    return {{"experiment", experiment}, {"config", config}, {"resampled", resampled}, {"rows", rows_json}};
}

ExperimentReport warpage_suite(const MappingNetwork& net, const WarpageConfig& cfg) {
    if (cfg.k_values.empty()) throw Error("warpage suite needs at least one k");
    if (cfg.n_pairs < 1 || cfg.n_pairs_random_od < 1) throw Error("pair counts must be positive");
    if (!(cfg.eps > 0.0)) throw Error("eps must be positive");
    for (auto k : cfg.k_values) check_k(net, k);
    const Eigen::Index k_max = *std::max_element(cfg.k_values.begin(), cfg.k_values.end());
    const Eigen::Index d = net.out_dim();
    const auto pairs = static_cast<std::size_t>(cfg.n_pairs);
    const unsigned threads = std::max(1u, cfg.threads);

    ExperimentReport report;
    report.experiment = "warpage";
    const Eigen::Index pca_samples = cfg.ganspace_samples > 0 ? cfg.ganspace_samples
                                                              : std::max<Eigen::Index>(10000, 100 * d);
    report.config = {{"network_hash", network_hash_hex(net)},
                     {"seed", cfg.seed},
                     {"k_values", cfg.k_values},
                     {"n_pairs", cfg.n_pairs},
                     {"n_pairs_random_od", cfg.n_pairs_random_od},
                     {"eps", cfg.eps},
                     {"ganspace_samples", cfg.include_global ? pca_samples : 0}};

    // Random O(d)
    for (auto k : cfg.k_values) {
        std::vector<Distances> values(static_cast<std::size_t>(cfg.n_pairs_random_od));
        parallel_for(values.size(), threads, [&](std::size_t p) {
            const std::uint64_t base = derive_seed(cfg.seed, kStreamRandomOd, static_cast<std::uint64_t>(k));
            values[p] = distances(random_orthogonal_frame(d, k, derive_seed(base, 0, p)),
                                  random_orthogonal_frame(d, k, derive_seed(base, 1, p)));
        });
        add_rows(report, "random_od", static_cast<double>(k), values);
    }

    // Local frames: two independent points, and a close pair
    std::vector<LocalFrame> first(pairs), second(pairs), close_a(pairs), close_b(pairs);
    std::vector<long> resampled(pairs, 0);
    parallel_for(pairs, threads, [&](std::size_t p) {
        Rng rng(derive_seed(cfg.seed, kStreamRandomW, p));
        first[p] = sample_frame(net, k_max, rng, resampled[p]);
        second[p] = sample_frame(net, k_max, rng, resampled[p]);

        Rng close_rng(derive_seed(cfg.seed, kStreamCloseW, p));
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxResamples) throw RankError("could not sample a usable close pair");
            const Eigen::VectorXd z = close_rng.normal_vector(net.in_dim());
            const Eigen::VectorXd offset = cfg.eps * close_rng.unit_vector(net.in_dim());
            auto a = usable_frame(net, z, k_max, close_rng);
            auto b = a ? usable_frame(net, a->z + offset, k_max, close_rng) : std::nullopt;
            if (a && b) {
                close_a[p] = std::move(*a);
                close_b[p] = std::move(*b);
                break;
            }
            ++resampled[p];
        }
    });
    for (long r : resampled) report.resampled += r;

    std::optional<GlobalBasis> ganspace, sefa;
    if (cfg.include_global) {
        ganspace = ganspace_basis(net, pca_samples, derive_seed(cfg.seed, kStreamGanspace, 0));
        sefa = sefa_basis(net);
    }

    for (auto k : cfg.k_values) {
        std::vector<Distances> random_w(pairs), close_w(pairs), to_ganspace, to_sefa;
        const bool sefa_ok = sefa && sefa->size() >= k;
        if (ganspace) to_ganspace.resize(pairs);
        if (sefa_ok) to_sefa.resize(pairs);
        std::optional<Subspace> gan_top, sefa_top;
        if (ganspace) gan_top = ganspace->top(k);
        if (sefa_ok) sefa_top = sefa->top(k);
        parallel_for(pairs, threads, [&](std::size_t p) {
            const Subspace a = top_span(first[p], k);
            random_w[p] = distances(a, top_span(second[p], k));
            close_w[p] = distances(top_span(close_a[p], k), top_span(close_b[p], k));
            if (gan_top) to_ganspace[p] = distances(a, *gan_top);
            if (sefa_top) to_sefa[p] = distances(a, *sefa_top);
        });
        add_rows(report, "random_w", static_cast<double>(k), random_w);
        add_rows(report, "close_w", static_cast<double>(k), close_w);
        if (gan_top) add_rows(report, "to_ganspace", static_cast<double>(k), to_ganspace);
        if (sefa_top) add_rows(report, "to_sefa", static_cast<double>(k), to_sefa);
    }
    return report;
}

ExperimentReport eps_sweep(const MappingNetwork& net, Eigen::Index k, const std::vector<double>& eps_list,
                           int n_pairs, std::uint64_t seed, unsigned threads) {
    check_k(net, k);
    if (n_pairs < 1) throw Error("pair count must be positive");
    for (double e : eps_list)
        if (!(e >= 0.0) || !std::isfinite(e)) throw Error("epsilon values must be finite and non-negative");
    const auto pairs = static_cast<std::size_t>(n_pairs);

    ExperimentReport report;
    report.experiment = "eps_sweep";
    report.config = {{"network_hash", network_hash_hex(net)},
                     {"seed", seed},
                     {"k", k},
                     {"eps", eps_list},
                     {"n_pairs", n_pairs}};

    // distances[e][p]
    std::vector<std::vector<Distances>> values(eps_list.size(), std::vector<Distances>(pairs));
    std::vector<long> resampled(pairs, 0);
    parallel_for(pairs, std::max(1u, threads), [&](std::size_t p) {
        Rng rng(derive_seed(seed, kStreamEps, p));
        for (int attempt = 0;; ++attempt) {
            if (attempt == kMaxResamples) throw RankError("could not sample a usable base point");
            const Eigen::VectorXd z = rng.normal_vector(net.in_dim());
            const Eigen::VectorXd dir = rng.unit_vector(net.in_dim());
            auto base = usable_frame(net, z, k, rng);
            if (!base) {
                ++resampled[p];
                continue;
            }
            std::vector<Distances> row;
            bool ok = true;
            for (double e : eps_list) {
                if (e == 0.0) {
                    const Subspace s = top_span(*base, k);
                    row.push_back(distances(s, s));
                    continue;
                }
                auto other = usable_frame(net, base->z + e * dir, k, rng);
                if (!other) {
                    ok = false;
                    break;
                }
                row.push_back(distances(top_span(*base, k), top_span(*other, k)));
            }
            if (!ok) {
                ++resampled[p];
                continue;
            }
            for (std::size_t e = 0; e < eps_list.size(); ++e) values[e][p] = row[e];
            break;
        }
    });
    for (long r : resampled) report.resampled += r;
    for (std::size_t e = 0; e < eps_list.size(); ++e) add_rows(report, "close_w", eps_list[e], values[e]);
    return report;
}

double small_value_fraction(std::vector<double> values, double relative_to_median) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double median = n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    const double cut = relative_to_median * median;
    const auto below = std::lower_bound(values.begin(), values.end(), cut) - values.begin();
    return static_cast<double>(below) / static_cast<double>(n);
}

SvHistogram sv_histogram(const MappingNetwork& net, int n_points, int bins, std::uint64_t seed) {
    if (n_points < 1 || bins < 1) throw Error("sv-hist needs positive point and bin counts");
    SvHistogram h;
    Rng rng(derive_seed(seed, kStreamHistogram, 0));
    double entry_sum = 0.0, entry_sq = 0.0;
    long entry_count = 0;
    for (int p = 0; p < n_points; ++p) {
        const Eigen::VectorXd z = move_off_boundary(net, rng.normal_vector(net.in_dim()), rng);
        const Eigen::MatrixXd jac = jacobian(net, z);
        entry_sum += jac.sum();
        entry_sq += jac.squaredNorm();
        entry_count += static_cast<long>(jac.size());
        const Eigen::VectorXd s = jac.jacobiSvd().singularValues();
        h.jacobian_values.insert(h.jacobian_values.end(), s.data(), s.data() + s.size());
    }
    h.entry_mean = entry_sum / static_cast<double>(entry_count);
    h.entry_std = std::sqrt(std::max(0.0, entry_sq / static_cast<double>(entry_count) - h.entry_mean * h.entry_mean));

    Rng base_rng(derive_seed(seed, kStreamBaseline, 0));
    for (int p = 0; p < n_points; ++p) {
        const Eigen::MatrixXd g =
            (base_rng.normal_matrix(net.out_dim(), net.in_dim()) * h.entry_std).array() + h.entry_mean;
        const Eigen::VectorXd s = g.jacobiSvd().singularValues();
        h.baseline_values.insert(h.baseline_values.end(), s.data(), s.data() + s.size());
    }

    double top = 0.0;
    for (double v : h.jacobian_values) top = std::max(top, v);
    for (double v : h.baseline_values) top = std::max(top, v);
    if (top <= 0.0) top = 1.0;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int b = 0; b <= bins; ++b) h.edges[static_cast<std::size_t>(b)] = top * b / bins;
    auto bin_of = [&](double v) {
        const auto b = static_cast<long>(std::floor(v / top * bins));
        return static_cast<std::size_t>(std::clamp(b, 0L, static_cast<long>(bins) - 1));
    };
    h.jacobian_counts.assign(static_cast<std::size_t>(bins), 0);
    h.baseline_counts.assign(static_cast<std::size_t>(bins), 0);
    for (double v : h.jacobian_values) ++h.jacobian_counts[bin_of(v)];
    for (double v : h.baseline_values) ++h.baseline_counts[bin_of(v)];

    h.jacobian_small_fraction = small_value_fraction(h.jacobian_values);
    h.baseline_small_fraction = small_value_fraction(h.baseline_values);
    h.config = {{"network_hash", network_hash_hex(net)}, {"seed", seed}, {"n_points", n_points}, {"bins", bins}};
    return h;
}

std::string SvHistogram::to_csv() const {
    std::ostringstream out;
    out << "bin,lower,upper,jacobian_count,baseline_count\n";
    for (std::size_t b = 0; b < jacobian_counts.size(); ++b)
        out << b << ',' << format_real(edges[b]) << ',' << format_real(edges[b + 1]) << ','
            << jacobian_counts[b] << ',' << baseline_counts[b] << '\n';
    return out.str();
}

nlohmann::json SvHistogram::to_json() const {
    return {{"experiment", "sv_histogram"},
            {"config", config},
            {"edges", edges},
            {"jacobian_counts", jacobian_counts},
            {"baseline_counts", baseline_counts},
            {"entry_mean", entry_mean},
            {"entry_std", entry_std},
            {"jacobian_small_fraction", jacobian_small_fraction},
            {"baseline_small_fraction", baseline_small_fraction}};
}

LatentGrid direction_grid(const Eigen::VectorXd& center, const Eigen::VectorXd& d1,
                          const Eigen::VectorXd& d2, double half_extent, int n_per_axis) {
    if (n_per_axis < 1) throw Error("grid needs at least one point per half-axis");
    if (d1.size() != center.size() || d2.size() != center.size())
        throw ShapeError("grid directions must match the center's length");
    LatentGrid grid;
    grid.n_per_axis = n_per_axis;
    for (int a = -n_per_axis; a <= n_per_axis; ++a)
        for (int b = -n_per_axis; b <= n_per_axis; ++b) {
            const double x = half_extent * a / n_per_axis;
            const double y = half_extent * b / n_per_axis;
            grid.x.push_back(x);
            grid.y.push_back(y);
            grid.points.push_back(center + x * d1 + y * d2);
        }
    return grid;
}

LatentGrid subspace_grid(const LocalFrame& frame, Eigen::Index i, Eigen::Index j, double half_extent,
                         int n_per_axis) {
    if (i < 1 || i > frame.size() || j < 1 || j > frame.size())
        throw RankError("grid directions must lie in [1, " + std::to_string(frame.size()) + "]");
    return direction_grid(frame.w, frame.v.col(i - 1), frame.v.col(j - 1), half_extent, n_per_axis);
}

std::string LatentGrid::to_csv() const {
    std::ostringstream out;
    out << "x,y";
    const Eigen::Index d = points.empty() ? 0 : points.front().size();
    for (Eigen::Index c = 0; c < d; ++c) out << ",w" << c;
    out << '\n';
    for (std::size_t p = 0; p < points.size(); ++p) {
        out << format_real(x[p]) << ',' << format_real(y[p]);
        for (Eigen::Index c = 0; c < d; ++c) out << ',' << format_real(points[p][c]);
        out << '\n';
    }
    return out.str();
}

}  // namespace latentgeom
