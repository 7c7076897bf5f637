#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "latentgeom/deviation.hpp"
#include "latentgeom/errors.hpp"
#include "latentgeom/evaluation.hpp"
#include "latentgeom/generate.hpp"
#include "latentgeom/global_basis.hpp"
#include "latentgeom/grassmann.hpp"
#include "latentgeom/local_basis.hpp"
#include "latentgeom/network_io.hpp"
#include "latentgeom/traversal.hpp"

namespace py = pybind11;
using namespace latentgeom;

namespace {

py::dict path_to_dict(const TraversalPath& path) {
    py::list z, w, index, sigma;
    for (const auto& it : path.iterates) {
        z.append(it.z);
        w.append(it.w);
        index.append(it.direction_index);
        sigma.append(it.sigma);
    }
    py::dict d;
    d["z"] = z;
    d["w"] = w;
    d["direction_index"] = index;
    d["sigma"] = sigma;
    d["intensity"] = path.intensity;
    d["n_steps"] = path.n_steps;
    d["mode"] = to_string(path.mode);
    d["boundary_warnings"] = path.boundary_warnings;
    return d;
}

Subspace span(const Eigen::MatrixXd& columns) { return Subspace::from_vectors(columns); }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Local Basis latent geometry for piecewise-affine mapping networks";

    auto error = py::register_exception<Error>(m, "Error");
    py::register_exception<ShapeError>(m, "ShapeError", error);
    py::register_exception<BoundaryError>(m, "BoundaryError", error);
    auto rank = py::register_exception<RankError>(m, "RankError", error);
    py::register_exception<NumericalError>(m, "NumericalError", error);
    py::register_exception<UnderSampledError>(m, "UnderSampledError", error);
    py::register_exception<InvalidDirectionError>(m, "InvalidDirectionError", error);
    py::register_exception<ParseError>(m, "ParseError", error);
    py::register_exception<TraversalAborted>(m, "TraversalAborted", rank);

    py::class_<MappingNetwork>(m, "MappingNetwork")
        .def_property_readonly("in_dim", &MappingNetwork::in_dim)
        .def_property_readonly("out_dim", &MappingNetwork::out_dim)
        .def_property_readonly("depth", &MappingNetwork::depth)
        .def_property_readonly("is_affine", &MappingNetwork::is_affine)
        .def_property_readonly("hash", [](const MappingNetwork& n) { return network_hash_hex(n); })
        .def("__call__", [](const MappingNetwork& n, const Eigen::VectorXd& z) { return evaluate(n, z); })
        .def("jacobian", [](const MappingNetwork& n, const Eigen::VectorXd& z) { return jacobian(n, z); })
        .def("to_json", [](const MappingNetwork& n) { return network_to_json(n).dump(); })
        .def("save", [](const MappingNetwork& n, const std::filesystem::path& p) { save_network(n, p); });

    m.def("load_network", [](const std::filesystem::path& p) { return load_network(p); });
    m.def("network_from_json",
          [](const std::string& text) { return network_from_json(nlohmann::json::parse(text)); });
    m.def(
        "generate_network",
        [](const std::vector<Eigen::Index>& dims, double slope, std::uint64_t seed, bool orthogonal) {
            return generate_network(dims, slope, seed,
                                    orthogonal ? InitScheme::Orthogonal : InitScheme::GaussianScaled);
        },
        py::arg("dims"), py::arg("slope") = 0.2, py::arg("seed") = 0, py::arg("orthogonal") = false);

    py::class_<LocalFrame>(m, "LocalFrame")
        .def_readonly("z", &LocalFrame::z)
        .def_readonly("w", &LocalFrame::w)
        .def_readonly("u", &LocalFrame::u)
        .def_readonly("sigma", &LocalFrame::sigma)
        .def_readonly("v", &LocalFrame::v)
        .def_property_readonly("rank_tol", &LocalFrame::rank_tol)
        .def("top", &LocalFrame::top, py::arg("k"));

    m.def("local_basis", &local_basis, py::arg("net"), py::arg("z"));
    m.def("approx_manifold_point", &approx_manifold_point, py::arg("net"), py::arg("frame"), py::arg("t"));

    m.def(
        "linear_traverse",
        [](const MappingNetwork& net, const LocalFrame& frame, Eigen::Index k, double intensity, int n_points) {
            auto line = linear_traverse(net, frame, k, intensity, n_points);
            py::dict d;
            d["t"] = line.t;
            d["z"] = line.z;
            d["w_line"] = line.w_line;
            d["w_manifold"] = line.w_manifold;
            return d;
        },
        py::arg("net"), py::arg("frame"), py::arg("k"), py::arg("intensity"), py::arg("n_points"));
    m.def(
        "iterative_traverse",
        [](const MappingNetwork& net, const Eigen::VectorXd& z0, Eigen::Index k, double intensity, int n_steps,
           int sign) { return path_to_dict(iterative_traverse(net, z0, k, intensity, n_steps, sign)); },
        py::arg("net"), py::arg("z0"), py::arg("k"), py::arg("intensity"), py::arg("n_steps"), py::arg("sign") = 1);
    m.def(
        "guided_traverse",
        [](const MappingNetwork& net, const Eigen::VectorXd& z0, const Eigen::VectorXd& guide, double intensity,
           int n_steps, bool every_step, std::optional<std::uint64_t> stochastic_seed) {
            StepPolicy policy =
                stochastic_seed ? StepPolicy::uniform_random(0.05, 0.15, *stochastic_seed) : StepPolicy::fixed();
            auto target = every_step ? SimilarityTarget::GlobalEveryStep : SimilarityTarget::PreviousDirection;
            return path_to_dict(guided_iterative_traverse(net, z0, guide, intensity, n_steps, policy, target));
        },
        py::arg("net"), py::arg("z0"), py::arg("guide"), py::arg("intensity"), py::arg("n_steps"),
        py::arg("every_step") = true, py::arg("stochastic_seed") = py::none());

    m.def("projection_metric", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return projection_metric(span(a), span(b));
    });
    m.def("geodesic_metric", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return geodesic_metric(span(a), span(b));
    });
    m.def("principal_angles", [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
        return principal_angles(span(a), span(b));
    });

    m.def(
        "ganspace_basis",
        [](const MappingNetwork& net, Eigen::Index n_samples, std::uint64_t seed) {
            auto b = ganspace_basis(net, n_samples, seed);
            return py::make_tuple(b.directions, b.magnitudes);
        },
        py::arg("net"), py::arg("n_samples"), py::arg("seed") = 0);
    m.def(
        "sefa_basis",
        [](const MappingNetwork& net) {
            auto b = sefa_basis(net);
            return py::make_tuple(b.directions, b.magnitudes);
        },
        py::arg("net"));

    m.def(
        "point_deviation",
        [](const MappingNetwork& net, const std::vector<Eigen::VectorXd>& points,
           const std::vector<Eigen::VectorXd>& z_hints, int restarts, std::uint64_t seed, unsigned threads) {
            std::vector<double> out;
            for (const auto& d : point_deviation(net, points, z_hints, restarts, seed, threads))
                out.push_back(d.residual);
            return out;
        },
        py::arg("net"), py::arg("points"), py::arg("z_hints") = std::vector<Eigen::VectorXd>{},
        py::arg("restarts") = 8, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def(
        "warpage_suite_json",
        [](const MappingNetwork& net, const std::vector<Eigen::Index>& k_values, int n_pairs, int n_pairs_od,
           double eps, std::uint64_t seed, bool include_global) {
            WarpageConfig cfg;
            cfg.k_values = k_values;
            cfg.n_pairs = n_pairs;
            cfg.n_pairs_random_od = n_pairs_od;
            cfg.eps = eps;
            cfg.seed = seed;
            cfg.include_global = include_global;
            return warpage_suite(net, cfg).to_json().dump();
        },
        py::arg("net"), py::arg("k_values"), py::arg("n_pairs") = 1000, py::arg("n_pairs_od") = 100,
        py::arg("eps") = 0.1, py::arg("seed") = 0, py::arg("include_global") = true);
}
