#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "latentgeom/errors.hpp"
#include "latentgeom/generate.hpp"
#include "latentgeom/network_io.hpp"
#include "latentgeom/random.hpp"

using namespace latentgeom;
using nlohmann::json;

namespace {

std::string parse_message(const json& doc) {
    try {
        network_from_json(doc);
    } catch (const ParseError& e) {
        return e.what();
    } catch (const Error& e) {
        return std::string("other:") + e.what();
    }
    return "";
}

json tiny_doc() {
    return json::parse(R"({"in_dim": 2, "layers": [
        {"weight": [[1, 2], [3, 4]], "bias": [0.5, -0.5], "activation": "leaky_relu", "slope": 0.2},
        {"weight": [[1, 0]], "bias": [0], "activation": "identity"}]})");
}

}  // namespace

TEST_CASE("weights are row-major") {
    auto net = network_from_json(tiny_doc());
    CHECK(net.in_dim() == 2);
    CHECK(net.out_dim() == 1);
    CHECK(net.layers()[0].weight(0, 1) == 2.0);
    CHECK(net.layers()[0].weight(1, 0) == 3.0);
    CHECK(net.layers()[0].activation.slope == 0.2);
    CHECK(net.layers()[1].activation.kind == ActivationKind::Identity);
}

TEST_CASE("json round trip is bitwise") {
    auto net = generate_network({5, 7, 3}, 0.2, 44);
    auto back = network_from_json(json::parse(network_to_json(net).dump()));
    for (std::size_t l = 0; l < net.depth(); ++l) {
        const auto& a = net.layers()[l];
        const auto& b = back.layers()[l];
        CHECK(std::memcmp(a.weight.data(), b.weight.data(), sizeof(double) * a.weight.size()) == 0);
        CHECK(std::memcmp(a.bias.data(), b.bias.data(), sizeof(double) * a.bias.size()) == 0);
    }
    CHECK(network_hash(net) == network_hash(back));
}

TEST_CASE("file round trip and hash") {
    auto dir = std::filesystem::temp_directory_path() / "latentgeom_io_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "net.json";
    auto net = generate_network({8, 8}, 0.2, 3);
    save_network(net, path);
    auto loaded = load_network(path);
    CHECK(network_hash_hex(loaded) == network_hash_hex(net));
    CHECK(network_hash_hex(net).size() == 16);
    CHECK(network_hash(generate_network({8, 8}, 0.2, 4)) != network_hash(net));
    std::filesystem::remove_all(dir);
}

TEST_CASE("exporter files with extra keys load") {
    json doc = tiny_doc();
    doc["note"] = "input normalization omitted: not affine";
    doc["source"] = "checkpoint.pkl";
    doc["layers"][0]["name"] = "fc0";
    auto net = network_from_json(doc);
    CHECK(net.depth() == 2);
}

TEST_CASE("exporter-style 8-layer stack loads") {
    Rng rng(9);
    json layers = json::array();
    for (int l = 0; l < 8; ++l) {
        json rows = json::array();
        for (int r = 0; r < 4; ++r) {
            json row = json::array();
            for (int c = 0; c < 4; ++c) row.push_back(rng.normal());
            rows.push_back(row);
        }
        layers.push_back({{"weight", rows}, {"bias", {0.0, 0.1, -0.1, 0.0}}, {"activation", "leaky_relu"}, {"slope", 0.2}});
    }
    json doc = {{"in_dim", 4}, {"layers", layers}, {"note", "z normalization not folded"}};
    auto net = network_from_json(doc);
    CHECK(net.depth() == 8);
    CHECK(net.out_dim() == 4);
}

TEST_CASE("loader errors name the offending field") {
    json doc = tiny_doc();
    doc["layers"][0]["weight"][1][0] = "x";
    CHECK(parse_message(doc).find("layers[0].weight[1][0]") != std::string::npos);

    doc = tiny_doc();
    doc["layers"][1].erase("bias");
    CHECK(parse_message(doc).find("layers[1].bias") != std::string::npos);

    doc = tiny_doc();
    doc["layers"][0].erase("slope");
    CHECK(parse_message(doc).find("layers[0].slope") != std::string::npos);

    doc = tiny_doc();
    doc["layers"][0]["slope"] = 1.5;
    CHECK(parse_message(doc).find("layers[0].slope") != std::string::npos);

    doc = tiny_doc();
    doc["layers"][0]["activation"] = "tanh";
    CHECK(parse_message(doc).find("layers[0].activation") != std::string::npos);

    doc = tiny_doc();
    doc["layers"][1]["weight"] = json::parse("[[1, 0, 0]]");
    CHECK(parse_message(doc).find("layers[1]") != std::string::npos);

    doc = tiny_doc();
    doc["layers"][0]["weight"][0] = json::parse("[1]");
    CHECK(parse_message(doc).find("layers[0].weight[0]") != std::string::npos);

    doc = tiny_doc();
    doc["in_dim"] = -1;
    CHECK(parse_message(doc).find("in_dim") != std::string::npos);

    doc = tiny_doc();
    doc.erase("layers");
    CHECK(parse_message(doc).find("layers") != std::string::npos);

    CHECK(parse_message(json::array()).find("network") != std::string::npos);
}

TEST_CASE("malformed files") {
    auto dir = std::filesystem::temp_directory_path() / "latentgeom_io_bad";
    std::filesystem::create_directories(dir);
    auto path = dir / "bad.json";
    std::ofstream(path) << "{\"in_dim\": 2, \"layers\": [";
    CHECK_THROWS_AS(load_network(path), ParseError);
    CHECK_THROWS_AS(load_network(dir / "missing.json"), ParseError);
    std::filesystem::remove_all(dir);
}
