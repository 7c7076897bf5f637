#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "latentgeom/global_basis.hpp"
#include "latentgeom/local_basis.hpp"
#include "latentgeom/traversal.hpp"

namespace latentgeom {

nlohmann::json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const nlohmann::json& doc, const std::string& where);

/// Vector-set file: {"directions": [[v_1], [v_2], ...], ...}, one entry per vector.
/// Also accepted on input: {"vector": [...]}, a bare array of numbers, or a bare
/// array of arrays. Returns the vectors as matrix columns.
Eigen::MatrixXd vector_set_from_json(const nlohmann::json& doc);
nlohmann::json vector_set_to_json(const Eigen::MatrixXd& columns);

nlohmann::json global_basis_to_json(const GlobalBasis& basis);

/// {"z", "w", "singular_values"} and, when requested, "u" and "v" as lists of columns.
nlohmann::json frame_to_json(const LocalFrame& frame, bool include_vectors);

nlohmann::json path_to_json(const TraversalPath& path);
/// step, chord_length, cosine_to_previous, sigma, direction_index; one row per piece.
std::string path_steps_csv(const TraversalPath& path);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace latentgeom
