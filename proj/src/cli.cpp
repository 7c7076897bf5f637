#include "latentgeom/cli.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "latentgeom/deviation.hpp"
#include "latentgeom/errors.hpp"
#include "latentgeom/evaluation.hpp"
#include "latentgeom/generate.hpp"
#include "latentgeom/global_basis.hpp"
#include "latentgeom/local_basis.hpp"
#include "latentgeom/network_io.hpp"
#include "latentgeom/parallel.hpp"
#include "latentgeom/random.hpp"
#include "latentgeom/traversal.hpp"
#include "latentgeom/validation.hpp"
#include "latentgeom/vector_io.hpp"

namespace latentgeom::cli {

namespace {

using nlohmann::json;

/// Writes to `path`, or to `out` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty())
        out << text;
    else
        write_text_file(path, text);
}

Eigen::VectorXd start_point(const MappingNetwork& net, const std::string& z_file, std::uint64_t seed) {
    if (!z_file.empty()) {
        const Eigen::MatrixXd m = vector_set_from_json(read_json_file(z_file));
        if (m.cols() != 1 || m.rows() != net.in_dim())
            throw ShapeError(z_file + ": expected one vector of length d_Z = " + std::to_string(net.in_dim()));
        return m.col(0);
    }
    Rng rng(seed);
    const Eigen::VectorXd z = rng.normal_vector(net.in_dim());
    return move_off_boundary(net, z, rng);
}

Eigen::VectorXd pick_vector(const std::string& file, Eigen::Index index, Eigen::Index expected_dim) {
    const Eigen::MatrixXd set = vector_set_from_json(read_json_file(file));
    if (index < 1 || index > set.cols())
        throw Error(file + ": vector index " + std::to_string(index) + " outside [1, " +
                    std::to_string(set.cols()) + "]");
    if (set.rows() != expected_dim)
        throw ShapeError(file + ": vectors have length " + std::to_string(set.rows()) + ", expected " +
                         std::to_string(expected_dim));
    return set.col(index - 1);
}

std::string deviation_csv(const std::vector<double>& intensity, const std::vector<PointDeviation>& dev) {
    std::ostringstream s;
    s << "# residual = ||f(z*) - w||, an upper bound on the distance from w to the manifold\n";
    s << "point,intensity,residual,converged\n";
    for (std::size_t i = 0; i < dev.size(); ++i)
        s << i << ',' << format_real(intensity[i]) << ',' << format_real(dev[i].residual) << ','
          << (dev[i].converged ? 1 : 0) << '\n';
    return s.str();
}

struct Options {
    unsigned threads = 0;

    // shared
    std::string net_file;
    std::uint64_t seed = 0;
    std::string out_file;
    std::string csv_file;
    std::string json_file;
    std::string z_file;

    // gen-net
    std::vector<long> dims;
    double slope = 0.2;
    std::string init = "gaussian";

    // basis
    std::string method = "local";
    long samples = 0;
    bool vectors = false;

    // traverse / deviation
    long direction = 1;
    double intensity = 4.0;
    int steps = 10;
    int sign = 1;
    std::string mode = "iterative";
    std::string guide_file;
    long guide_index = 1;
    std::string similarity = "global";
    double lo = 0.05;
    double hi = 0.15;
    int points = 11;
    int restarts = kDefaultRestarts;
    std::string points_file;

    // evaluation
    std::vector<long> k_values{1, 5, 10};
    long k = 10;
    int pairs = 1000;
    int pairs_od = 100;
    double eps = 0.1;
    std::vector<double> eps_list{0.0, 0.02, 0.05, 0.1, 0.2, 0.5};
    bool no_global = false;
    int bins = 50;
    long grid_i = 1;
    long grid_j = 2;
    double half_extent = 12.0;
    int per_axis = 6;
    bool random_directions = false;
    bool with_deviation = false;
};

int cmd_gen_net(const Options& o, std::ostream& out) {
    std::vector<Eigen::Index> dims(o.dims.begin(), o.dims.end());
    const auto scheme = o.init == "orthogonal" ? InitScheme::Orthogonal : InitScheme::GaussianScaled;
    const MappingNetwork net = generate_network(dims, o.slope, o.seed, scheme);
    emit(o.out_file, network_to_json(net).dump() + "\n", out);
    return 0;
}

int cmd_basis(const Options& o, std::ostream& out) {
    const MappingNetwork net = load_network(o.net_file);
    json doc;
    if (o.method == "local") {
        const LocalFrame frame = local_basis(net, start_point(net, o.z_file, o.seed));
        doc = frame_to_json(frame, o.vectors);
        doc["method"] = "local";
    } else if (o.method == "ganspace") {
        const Eigen::Index n = o.samples > 0 ? o.samples : std::max<Eigen::Index>(10000, 100 * net.out_dim());
        doc = global_basis_to_json(ganspace_basis(net, n, o.seed));
    } else {
        std::optional<Eigen::VectorXd> z_ref;
        if (!o.z_file.empty()) z_ref = start_point(net, o.z_file, o.seed);
        doc = global_basis_to_json(sefa_basis(net, z_ref));
    }
    doc["network_hash"] = network_hash_hex(net);
    emit(o.out_file, doc.dump() + "\n", out);
    return 0;
}

int cmd_traverse(const Options& o, std::ostream& out) {
    const MappingNetwork net = load_network(o.net_file);
    const Eigen::VectorXd z0 = start_point(net, o.z_file, o.seed);

    if (o.mode == "linear") {
        const LocalFrame frame = local_basis(net, z0);
        const LinearTraversal line =
            o.guide_file.empty()
                ? linear_traverse(net, frame, o.direction, o.sign * o.intensity, o.points)
                : linear_traverse_along(net, frame, o.sign * pick_vector(o.guide_file, o.guide_index, net.out_dim()),
                                        o.intensity, o.points);
        json points = json::array();
        std::ostringstream csv;
        csv << "point,t,manifold_gap\n";
        for (std::size_t i = 0; i < line.t.size(); ++i) {
            points.push_back({{"t", line.t[i]},
                              {"z", vector_to_json(line.z[i])},
                              {"w_line", vector_to_json(line.w_line[i])},
                              {"w_manifold", vector_to_json(line.w_manifold[i])}});
            csv << i << ',' << format_real(line.t[i]) << ','
                << format_real((line.w_line[i] - line.w_manifold[i]).norm()) << '\n';
        }
        const json doc = {{"mode", "linear"}, {"intensity", o.intensity}, {"points", points}};
        emit(o.out_file, doc.dump() + "\n", out);
        if (!o.csv_file.empty()) write_text_file(o.csv_file, csv.str());
        return 0;
    }

    TraversalPath path;
    try {
        if (o.mode == "iterative") {
            path = iterative_traverse(net, z0, o.direction, o.intensity, o.steps, o.sign);
        } else {
            Eigen::VectorXd guide;
            if (o.guide_file.empty()) {
                guide = local_basis(net, z0).v.col(o.direction - 1);
            } else {
                guide = pick_vector(o.guide_file, o.guide_index, net.out_dim());
            }
            const StepPolicy policy =
                o.mode == "stochastic" ? StepPolicy::uniform_random(o.lo, o.hi, o.seed) : StepPolicy::fixed();
            const auto target = o.similarity == "previous" ? SimilarityTarget::PreviousDirection
                                                           : SimilarityTarget::GlobalEveryStep;
            path = guided_iterative_traverse(net, z0, o.sign * guide, o.intensity, o.steps, policy, target);
        }
    } catch (const TraversalAborted& e) {
        emit(o.out_file, path_to_json(e.partial_path()).dump() + "\n", out);
        if (!o.csv_file.empty()) write_text_file(o.csv_file, path_steps_csv(e.partial_path()));
        throw;
    }
    emit(o.out_file, path_to_json(path).dump() + "\n", out);
    if (!o.csv_file.empty()) write_text_file(o.csv_file, path_steps_csv(path));
    return 0;
}

int cmd_deviation(const Options& o, std::ostream& out) {
    const MappingNetwork net = load_network(o.net_file);
    const unsigned threads = resolve_threads(o.threads);
    std::vector<Eigen::VectorXd> points, hints;
    std::vector<double> intensity;

    if (!o.points_file.empty()) {
        const Eigen::MatrixXd set = vector_set_from_json(read_json_file(o.points_file));
        if (set.rows() != net.out_dim()) throw ShapeError(o.points_file + ": points must have length d_W");
        for (Eigen::Index j = 0; j < set.cols(); ++j) {
            points.push_back(set.col(j));
            intensity.push_back(0.0);
        }
    } else {
        const Eigen::VectorXd z0 = start_point(net, o.z_file, o.seed);
        if (o.mode == "iterative") {
            const TraversalPath path = iterative_traverse(net, z0, o.direction, o.intensity, o.steps, o.sign);
            double walked = 0.0;
            for (const auto& it : path.iterates) {
                points.push_back(it.w);
                hints.push_back(it.z);
                intensity.push_back(walked);
                walked += it.step_length;
            }
        } else {
            const LocalFrame frame = local_basis(net, z0);
            LinearTraversal line;
            if (o.mode == "linear") {
                line = linear_traverse(net, frame, o.direction, o.sign * o.intensity, o.points);
            } else {
                Eigen::VectorXd dir;
                if (!o.guide_file.empty()) {
                    dir = pick_vector(o.guide_file, o.guide_index, net.out_dim());
                } else {
                    const Eigen::Index n = o.samples > 0 ? o.samples : std::max<Eigen::Index>(10000, 100 * net.out_dim());
                    const GlobalBasis basis = ganspace_basis(net, n, o.seed);
                    if (o.direction < 1 || o.direction > basis.size()) throw Error("direction outside the global basis");
                    dir = basis.directions.col(o.direction - 1);
                }
                line = linear_traverse_along(net, frame, o.sign * dir, o.intensity, o.points);
            }
            points = line.w_line;
            hints = line.z;
            intensity = line.t;
            for (double& t : intensity) t = std::abs(t);
        }
    }
    const auto dev = point_deviation(net, points, hints, o.restarts, o.seed, threads);
    emit(o.out_file, deviation_csv(intensity, dev), out);
    return 0;
}

void emit_report(const Options& o, const std::string& csv, const json& doc, std::ostream& out) {
    if (!o.json_file.empty()) write_text_file(o.json_file, doc.dump(2) + "\n");
    if (!o.csv_file.empty() || o.json_file.empty()) emit(o.csv_file, csv, out);
}

int cmd_warpage(const Options& o, std::ostream& out) {
    const MappingNetwork net = load_network(o.net_file);
    WarpageConfig cfg;
    cfg.k_values.assign(o.k_values.begin(), o.k_values.end());
    cfg.n_pairs = o.pairs;
    cfg.n_pairs_random_od = o.pairs_od;
    cfg.eps = o.eps;
    cfg.seed = o.seed;
    cfg.ganspace_samples = o.samples;
    cfg.include_global = !o.no_global;
    cfg.threads = resolve_threads(o.threads);
    const ExperimentReport report = warpage_suite(net, cfg);
    emit_report(o, report.to_csv(), report.to_json(), out);
    return 0;
}

int cmd_eps_sweep(const Options& o, std::ostream& out) {
    const MappingNetwork net = load_network(o.net_file);
    const ExperimentReport report = eps_sweep(net, o.k, o.eps_list, o.pairs, o.seed, resolve_threads(o.threads));
    emit_report(o, report.to_csv(), report.to_json(), out);
    return 0;
}

int cmd_sv_hist(const Options& o, std::ostream& out) {
    const MappingNetwork net = load_network(o.net_file);
    const SvHistogram h = sv_histogram(net, o.points, o.bins, o.seed);
    emit_report(o, h.to_csv(), h.to_json(), out);
    return 0;
}

int cmd_grid(const Options& o, std::ostream& out) {
    const MappingNetwork net = load_network(o.net_file);
    const LocalFrame frame = local_basis(net, start_point(net, o.z_file, o.seed));
    LatentGrid grid;
    if (o.random_directions) {
        Rng rng(derive_seed(o.seed, 0x67726964ULL, 0));
        const Eigen::VectorXd d1 = rng.unit_vector(net.out_dim());
        const Eigen::VectorXd d2 = rng.unit_vector(net.out_dim());
        grid = direction_grid(frame.w, d1, d2, o.half_extent, o.per_axis);
    } else {
        grid = subspace_grid(frame, o.grid_i, o.grid_j, o.half_extent, o.per_axis);
    }
    if (!o.with_deviation) {
        emit(o.out_file, grid.to_csv(), out);
        return 0;
    }
    const auto dev = point_deviation(net, grid.points, {}, o.restarts, o.seed, resolve_threads(o.threads));
    std::ostringstream csv;
    csv << "x,y,residual,converged\n";
    for (std::size_t p = 0; p < grid.points.size(); ++p)
        csv << format_real(grid.x[p]) << ',' << format_real(grid.y[p]) << ',' << format_real(dev[p].residual)
            << ',' << (dev[p].converged ? 1 : 0) << '\n';
    emit(o.out_file, csv.str(), out);
    return 0;
}

int cmd_validate(const Options& o, std::ostream& out) {
    const MappingNetwork net = load_network(o.net_file);
    bool all = true;
    for (const auto& check : validate_network(net, o.points, o.seed)) {
        all = all && check.passed;
        out << (check.passed ? "PASS " : "FAIL ") << check.name << " value=" << format_real(check.value)
            << " threshold=" << format_real(check.threshold) << " (" << check.detail << ")\n";
    }
    return all ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local-geometry tools for piecewise-affine mapping networks", "latentgeom"};
    app.require_subcommand(1);
    app.fallthrough();
    Options o;
    app.add_option("--threads", o.threads, "Worker threads (0: $LATENTGEOM_THREADS or all cores)");

    auto add_net = [&](CLI::App* sub) {
        sub->add_option("--net", o.net_file, "Weight file (JSON)")->required()->check(CLI::ExistingFile);
    };
    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "Random seed"); };
    auto add_z = [&](CLI::App* sub) {
        sub->add_option("--z", o.z_file, "Start point as a vector JSON (default: z ~ N(0, I) from --seed)")
            ->check(CLI::ExistingFile);
    };

    auto* gen = app.add_subcommand("gen-net", "Generate a random mapping network");
    gen->add_option("--dims", o.dims, "Layer widths, d_Z first and d_W last (comma separated)")
        ->required()
        ->delimiter(',')
        ->expected(2, 1 << 20);
    gen->add_option("--slope", o.slope, "Leaky-ReLU slope in (0, 1]; 1 gives an affine network")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--init", o.init, "Weight initialization")->check(CLI::IsMember({"gaussian", "orthogonal"}));
    gen->add_option("--out", o.out_file, "Output weight file (default stdout)");
    add_seed(gen);

    auto* basis = app.add_subcommand("basis", "Local Basis at a point, or a global basis");
    add_net(basis);
    add_seed(basis);
    add_z(basis);
    basis->add_option("--method", o.method, "local | ganspace | sefa")
        ->check(CLI::IsMember({"local", "ganspace", "sefa"}));
    basis->add_option("--samples", o.samples, "Samples for ganspace (default max(10000, 100 d_W))");
    basis->add_flag("--vectors", o.vectors, "Include singular vectors u and v in local output");
    basis->add_option("--out", o.out_file, "Output JSON (default stdout)");

    auto* trav = app.add_subcommand("traverse", "Traverse the latent space from a point");
    add_net(trav);
    add_seed(trav);
    add_z(trav);
    trav->add_option("--direction", o.direction, "Local Basis index k (1-based)")->check(CLI::PositiveNumber);
    trav->add_option("--intensity", o.intensity, "Total W-length I")->check(CLI::NonNegativeNumber);
    trav->add_option("--steps", o.steps, "Number of pieces N")->check(CLI::PositiveNumber);
    trav->add_option("--points", o.points, "Points along a linear traversal");
    trav->add_option("--sign", o.sign, "+1 or -1")->check(CLI::IsMember({-1, 1}));
    trav->add_option("--mode", o.mode, "linear | iterative | guided | stochastic")
        ->check(CLI::IsMember({"linear", "iterative", "guided", "stochastic"}));
    trav->add_option("--guide-file", o.guide_file, "Guide vector(s) as vector-set JSON")->check(CLI::ExistingFile);
    trav->add_option("--guide-index", o.guide_index, "Which vector of the guide file (1-based)");
    trav->add_option("--similarity", o.similarity, "global | previous")->check(CLI::IsMember({"global", "previous"}));
    trav->add_option("--lo", o.lo, "Stochastic step lower bound");
    trav->add_option("--hi", o.hi, "Stochastic step upper bound");
    trav->add_option("--out", o.out_file, "Path JSON (default stdout)");
    trav->add_option("--csv", o.csv_file, "Per-step CSV");

    auto* dev = app.add_subcommand("deviation", "Off-manifold residuals of traversed points");
    add_net(dev);
    add_seed(dev);
    add_z(dev);
    dev->add_option("--mode", o.mode, "linear | global-linear | iterative")
        ->check(CLI::IsMember({"linear", "global-linear", "iterative"}));
    dev->add_option("--direction", o.direction, "Direction index (1-based)")->check(CLI::PositiveNumber);
    dev->add_option("--intensity", o.intensity, "Total W-length I")->check(CLI::NonNegativeNumber);
    dev->add_option("--steps", o.steps, "Pieces for iterative mode")->check(CLI::PositiveNumber);
    dev->add_option("--points", o.points, "Points along linear modes");
    dev->add_option("--sign", o.sign, "+1 or -1")->check(CLI::IsMember({-1, 1}));
    dev->add_option("--restarts", o.restarts, "Random restarts per point")->check(CLI::NonNegativeNumber);
    dev->add_option("--guide-file", o.guide_file, "Direction for global-linear (default: ganspace)")
        ->check(CLI::ExistingFile);
    dev->add_option("--guide-index", o.guide_index, "Which vector of the guide file (1-based)");
    dev->add_option("--samples", o.samples, "Samples for the ganspace direction");
    dev->add_option("--points-file", o.points_file, "Explicit W points as vector-set JSON")->check(CLI::ExistingFile);
    dev->add_option("--out", o.out_file, "Output CSV (default stdout)");

    auto* warp = app.add_subcommand("warpage", "Grassmann distances between Local Basis subspaces");
    add_net(warp);
    add_seed(warp);
    warp->add_option("--k", o.k_values, "Subspace dimensions")->delimiter(',');
    warp->add_option("--pairs", o.pairs, "Pairs for w-based settings")->check(CLI::PositiveNumber);
    warp->add_option("--pairs-od", o.pairs_od, "Pairs for random O(d)")->check(CLI::PositiveNumber);
    warp->add_option("--eps", o.eps, "|z' - z| for close pairs")->check(CLI::PositiveNumber);
    warp->add_option("--samples", o.samples, "Samples for the ganspace basis");
    warp->add_flag("--no-global", o.no_global, "Skip the global-basis comparisons");
    warp->add_option("--csv", o.csv_file, "CSV output (default stdout)");
    warp->add_option("--json", o.json_file, "JSON report");

    auto* sweep = app.add_subcommand("eps-sweep", "Close-pair distances over a range of epsilon");
    add_net(sweep);
    add_seed(sweep);
    sweep->add_option("--k", o.k, "Subspace dimension")->check(CLI::PositiveNumber);
    sweep->add_option("--eps-list", o.eps_list, "Epsilon values")->delimiter(',');
    sweep->add_option("--pairs", o.pairs, "Pairs per epsilon")->check(CLI::PositiveNumber);
    sweep->add_option("--csv", o.csv_file, "CSV output (default stdout)");
    sweep->add_option("--json", o.json_file, "JSON report");

    auto* hist = app.add_subcommand("sv-hist", "Histogram of Jacobian singular values");
    add_net(hist);
    add_seed(hist);
    hist->add_option("--points", o.points, "Latent points")->check(CLI::PositiveNumber);
    hist->add_option("--bins", o.bins, "Histogram bins")->check(CLI::PositiveNumber);
    hist->add_option("--csv", o.csv_file, "CSV output (default stdout)");
    hist->add_option("--json", o.json_file, "JSON report");

    auto* grid = app.add_subcommand("grid", "Latent points on a 2-D Local Basis mesh");
    add_net(grid);
    add_seed(grid);
    add_z(grid);
    grid->add_option("--i", o.grid_i, "First direction (1-based)")->check(CLI::PositiveNumber);
    grid->add_option("--j", o.grid_j, "Second direction (1-based)")->check(CLI::PositiveNumber);
    grid->add_option("--half-extent", o.half_extent, "Largest coordinate")->check(CLI::NonNegativeNumber);
    grid->add_option("--n", o.per_axis, "Points per half-axis")->check(CLI::PositiveNumber);
    grid->add_flag("--random-directions", o.random_directions, "Use two random unit directions instead");
    grid->add_flag("--deviation", o.with_deviation, "Emit per-point residuals instead of coordinates");
    grid->add_option("--restarts", o.restarts, "Random restarts for --deviation")->check(CLI::NonNegativeNumber);
    grid->add_option("--out", o.out_file, "Output CSV (default stdout)");

    auto* val = app.add_subcommand("validate", "Run the invariant suite against a network");
    add_net(val);
    add_seed(val);
    val->add_option("--points", o.points, "Latent points to check")->check(CLI::PositiveNumber);

    std::vector<std::string> argv_store{"latentgeom"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 1;
    }

    if (val->parsed() && val->count("--points") == 0) o.points = 5;
    if (hist->parsed() && hist->count("--points") == 0) o.points = 100;
    if (trav->parsed() && trav->count("--points") == 0) o.points = o.steps + 1;

    try {
        if (gen->parsed()) return cmd_gen_net(o, out);
        if (basis->parsed()) return cmd_basis(o, out);
        if (trav->parsed()) return cmd_traverse(o, out);
        if (dev->parsed()) return cmd_deviation(o, out);
        if (warp->parsed()) return cmd_warpage(o, out);
        if (sweep->parsed()) return cmd_eps_sweep(o, out);
        if (hist->parsed()) return cmd_sv_hist(o, out);
        if (grid->parsed()) return cmd_grid(o, out);
        if (val->parsed()) return cmd_validate(o, out);
    } catch (const TraversalAborted& e) {
        err << "error: " << e.what() << " (" << e.partial_path().iterates.size() << " iterates completed)\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace latentgeom::cli
