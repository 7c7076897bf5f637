#include "latentgeom/vector_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "latentgeom/errors.hpp"
#include "latentgeom/evaluation.hpp"

namespace latentgeom {

using nlohmann::json;

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Eigen::VectorXd vector_from_json(const json& doc, const std::string& where) {
    if (!doc.is_array() || doc.empty()) throw ParseError(where + ": expected a non-empty array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(doc.size()));
    for (std::size_t i = 0; i < doc.size(); ++i) {
        if (!doc[i].is_number()) throw ParseError(where + "[" + std::to_string(i) + "]: expected a number");
        v[static_cast<Eigen::Index>(i)] = doc[i].get<double>();
        if (!std::isfinite(v[static_cast<Eigen::Index>(i)]))
            throw ParseError(where + "[" + std::to_string(i) + "]: value must be finite");
    }
    return v;
}

namespace {

Eigen::MatrixXd columns_from_list(const json& list, const std::string& where) {
    if (!list.is_array() || list.empty()) throw ParseError(where + ": expected a non-empty array");
    std::vector<Eigen::VectorXd> cols;
    for (std::size_t i = 0; i < list.size(); ++i)
        cols.push_back(vector_from_json(list[i], where + "[" + std::to_string(i) + "]"));
    Eigen::MatrixXd m(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i].size() != m.rows())
            throw ParseError(where + "[" + std::to_string(i) + "]: length differs from the first vector");
        m.col(static_cast<Eigen::Index>(i)) = cols[i];
    }
    return m;
}

json columns_to_list(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(vector_to_json(m.col(j)));
    return out;
}

}  // namespace

Eigen::MatrixXd vector_set_from_json(const json& doc) {
    if (doc.is_object()) {
        if (doc.contains("directions")) return columns_from_list(doc["directions"], "directions");
        if (doc.contains("vector")) return vector_from_json(doc["vector"], "vector");
        throw ParseError("vector set: expected a \"directions\" or \"vector\" field");
    }
    if (doc.is_array() && !doc.empty() && doc.front().is_array()) return columns_from_list(doc, "vectors");
    return vector_from_json(doc, "vector");
}

json vector_set_to_json(const Eigen::MatrixXd& columns) {
    return {{"dim", columns.rows()}, {"directions", columns_to_list(columns)}};
}

json global_basis_to_json(const GlobalBasis& basis) {
    json out = vector_set_to_json(basis.directions);
    out["method"] = to_string(basis.method);
    out["magnitudes"] = vector_to_json(basis.magnitudes);
    if (basis.method == GlobalMethod::SampledPCA) out["sample_count"] = basis.sample_count;
    return out;
}

json frame_to_json(const LocalFrame& frame, bool include_vectors) {
    json out = {{"z", vector_to_json(frame.z)},
                {"w", vector_to_json(frame.w)},
                {"singular_values", vector_to_json(frame.sigma)}};
    if (include_vectors) {
        out["u"] = columns_to_list(frame.u);
        out["v"] = columns_to_list(frame.v);
    }
    return out;
}

json path_to_json(const TraversalPath& path) {
    json iterates = json::array();
    for (const auto& it : path.iterates) {
        json entry = {{"z", vector_to_json(it.z)}, {"w", vector_to_json(it.w)}};
        if (it.direction_index > 0) {
            entry["direction_index"] = it.direction_index;
            entry["direction"] = vector_to_json(it.direction);
            entry["sigma"] = it.sigma;
            entry["step_length"] = it.step_length;
        }
        if (std::isfinite(it.cosine_to_previous)) entry["cosine_to_previous"] = it.cosine_to_previous;
        if (it.boundary_nudged) entry["boundary_nudged"] = true;
        iterates.push_back(std::move(entry));
    }
    return {{"mode", to_string(path.mode)},
            {"intensity", path.intensity},
            {"n_steps", path.n_steps},
            {"boundary_warnings", path.boundary_warnings},
            {"iterates", iterates}};
}

std::string path_steps_csv(const TraversalPath& path) {
    std::ostringstream out;
    out << "step,chord_length,cosine_to_previous,sigma,direction_index\n";
    for (std::size_t n = 0; n + 1 < path.iterates.size(); ++n) {
        const Iterate& from = path.iterates[n];
        const double chord = (path.iterates[n + 1].w - from.w).norm();
        out << n + 1 << ',' << format_real(chord) << ','
            << (std::isfinite(from.cosine_to_previous) ? format_real(from.cosine_to_previous) : "")
            << ',' << format_real(from.sigma) << ',' << from.direction_index << '\n';
    }
    return out.str();
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": malformed JSON: " + e.what());
    }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("failed writing " + path.string());
}

}  // namespace latentgeom
