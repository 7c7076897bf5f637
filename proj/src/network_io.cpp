#include "latentgeom/network_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "latentgeom/errors.hpp"

namespace latentgeom {

using nlohmann::json;

namespace {

double read_real(const json& value, const std::string& where) {
    if (!value.is_number()) throw ParseError(where + ": expected a number");
    const double x = value.get<double>();
    if (!std::isfinite(x)) throw ParseError(where + ": value must be finite");
    return x;
}

const json& require(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + "." + key + ": missing field");
    return *it;
}

LayerSpec parse_layer(const json& doc, Eigen::Index expected_in, const std::string& where) {
    LayerSpec layer;

    const json& weight = require(doc, "weight", where);
    if (!weight.is_array() || weight.empty())
        throw ParseError(where + ".weight: expected a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(weight.size());
    layer.weight.resize(rows, expected_in);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const std::string row_where = where + ".weight[" + std::to_string(r) + "]";
        const json& row = weight[static_cast<std::size_t>(r)];
        if (!row.is_array())
            throw ParseError(row_where + ": expected an array");
        if (static_cast<Eigen::Index>(row.size()) != expected_in)
            throw ParseError(row_where + ": has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(expected_in));
        for (Eigen::Index c = 0; c < expected_in; ++c)
            layer.weight(r, c) = read_real(row[static_cast<std::size_t>(c)],
                                           row_where + "[" + std::to_string(c) + "]");
    }

    const json& bias = require(doc, "bias", where);
    if (!bias.is_array()) throw ParseError(where + ".bias: expected an array");
    if (static_cast<Eigen::Index>(bias.size()) != rows)
        throw ParseError(where + ".bias: has " + std::to_string(bias.size()) +
                         " entries, expected " + std::to_string(rows));
    layer.bias.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i)
        layer.bias[i] = read_real(bias[static_cast<std::size_t>(i)],
                                  where + ".bias[" + std::to_string(i) + "]");

    const json& act = require(doc, "activation", where);
    if (!act.is_string()) throw ParseError(where + ".activation: expected a string");
    const auto name = act.get<std::string>();
    if (name == "identity") {
        layer.activation = Activation::identity();
    } else if (name == "leaky_relu") {
        const double slope = read_real(require(doc, "slope", where), where + ".slope");
        if (!(slope > 0.0 && slope <= 1.0))
            throw ParseError(where + ".slope: must lie in (0, 1]");
        layer.activation = Activation::leaky_relu(slope);
    } else {
        throw ParseError(where + ".activation: unknown activation \"" + name + "\"");
    }
    return layer;
}

}  // namespace

MappingNetwork network_from_json(const json& doc) {
    const json& in_dim_field = require(doc, "in_dim", "network");
    if (!in_dim_field.is_number_integer() || in_dim_field.get<long long>() <= 0)
        throw ParseError("network.in_dim: expected a positive integer");
    auto expected_in = static_cast<Eigen::Index>(in_dim_field.get<long long>());

    const json& layers = require(doc, "layers", "network");
    if (!layers.is_array() || layers.empty())
        throw ParseError("network.layers: expected a non-empty array");

    std::vector<LayerSpec> specs;
    specs.reserve(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) {
        specs.push_back(parse_layer(layers[i], expected_in, "layers[" + std::to_string(i) + "]"));
        expected_in = specs.back().out_dim();
    }
    return MappingNetwork(std::move(specs));
}

json network_to_json(const MappingNetwork& net) {
    json layers = json::array();
    for (const auto& layer : net.layers()) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) row.push_back(layer.weight(r, c));
            rows.push_back(std::move(row));
        }
        json bias = json::array();
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) bias.push_back(layer.bias[i]);

        json entry;
        entry["weight"] = std::move(rows);
        entry["bias"] = std::move(bias);
        if (layer.activation.kind == ActivationKind::LeakyReLU) {
            entry["activation"] = "leaky_relu";
            entry["slope"] = layer.activation.slope;
        } else {
            entry["activation"] = "identity";
        }
        layers.push_back(std::move(entry));
    }
    json doc;
    doc["in_dim"] = net.in_dim();
    doc["layers"] = std::move(layers);
    return doc;
}

MappingNetwork load_network(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open weight file " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string() + ": malformed JSON: " + e.what());
    }
    try {
        return network_from_json(doc);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void save_network(const MappingNetwork& net, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << network_to_json(net).dump() << '\n';
}

std::uint64_t network_hash(const MappingNetwork& net) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* data, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& layer : net.layers()) {
        const std::int64_t dims[2] = {layer.weight.rows(), layer.weight.cols()};
        feed(dims, sizeof(dims));
        const int kind = layer.activation.kind == ActivationKind::LeakyReLU ? 1 : 0;
        feed(&kind, sizeof(kind));
        feed(&layer.activation.slope, sizeof(double));
        // row-major so the hash matches the file layout
        for (Eigen::Index r = 0; r < layer.weight.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
                const double x = layer.weight(r, c);
                feed(&x, sizeof(x));
            }
        feed(layer.bias.data(), sizeof(double) * static_cast<std::size_t>(layer.bias.size()));
    }
    return h;
}

std::string network_hash_hex(const MappingNetwork& net) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(network_hash(net)));
    return buf;
}

}  // namespace latentgeom
