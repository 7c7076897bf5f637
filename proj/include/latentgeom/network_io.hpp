#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "latentgeom/network.hpp"

namespace latentgeom {

/// Weight file layout:
///   {"in_dim": int,
///    "layers": [{"weight": [[row-major]], "bias": [...],
///                "activation": "leaky_relu" | "identity", "slope": real}]}
/// Unknown keys (an exporter's "note", for instance) are ignored.
MappingNetwork network_from_json(const nlohmann::json& doc);
nlohmann::json network_to_json(const MappingNetwork& net);

MappingNetwork load_network(const std::filesystem::path& path);
void save_network(const MappingNetwork& net, const std::filesystem::path& path);

/// FNV-1a over dimensions, activations and the raw bytes of every weight and bias.
std::uint64_t network_hash(const MappingNetwork& net);
std::string network_hash_hex(const MappingNetwork& net);

}  // namespace latentgeom
