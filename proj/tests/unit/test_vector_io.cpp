#include "doctest.h"

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "latentgeom/errors.hpp"
#include "latentgeom/global_basis.hpp"
#include "latentgeom/local_basis.hpp"
#include "latentgeom/random.hpp"
#include "latentgeom/traversal.hpp"
#include "latentgeom/vector_io.hpp"

using namespace latentgeom;
using nlohmann::json;

TEST_CASE("vector set input forms") {
    Eigen::MatrixXd two = vector_set_from_json(json::parse(R"({"directions": [[1, 2, 3], [4, 5, 6]]})"));
    CHECK(two.rows() == 3);
    CHECK(two.cols() == 2);
    CHECK(two(2, 1) == 6.0);
    CHECK(vector_set_from_json(json::parse(R"({"vector": [1, 2]})")).cols() == 1);
    CHECK(vector_set_from_json(json::parse("[1, 2, 3]")).rows() == 3);
    CHECK(vector_set_from_json(json::parse("[[1, 2], [3, 4], [5, 6]]")).cols() == 3);
}

TEST_CASE("vector set errors") {
    CHECK_THROWS_AS(vector_set_from_json(json::parse(R"({"other": 1})")), ParseError);
    CHECK_THROWS_AS(vector_set_from_json(json::parse(R"({"directions": [[1, 2], [3]]})")), ParseError);
    CHECK_THROWS_AS(vector_set_from_json(json::parse(R"([1, "a"])")), ParseError);
    CHECK_THROWS_AS(vector_set_from_json(json::parse("[]")), ParseError);
    try {
        vector_set_from_json(json::parse(R"({"directions": [[1, 2], [3, null]]})"));
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("directions[1][1]") != std::string::npos);
    }
}

TEST_CASE("global basis files feed back as guide vectors") {
    auto basis = sefa_basis(testing::curved_net());
    json doc = json::parse(global_basis_to_json(basis).dump());
    CHECK(doc["method"] == "sefa");
    CHECK(doc["dim"] == 32);
    Eigen::MatrixXd back = vector_set_from_json(doc);
    CHECK((back - basis.directions).norm() == 0.0);
}

TEST_CASE("frame and path serialization") {
    auto net = testing::curved_net();
    Eigen::VectorXd z = Rng(1).normal_vector(16);
    auto frame = local_basis(net, z);
    json plain = frame_to_json(frame, false);
    CHECK_FALSE(plain.contains("u"));
    CHECK(plain["singular_values"].size() == 16);
    json full = frame_to_json(frame, true);
    CHECK(full["v"].size() == 16);
    CHECK(full["v"][0].size() == 32);
    CHECK(vector_from_json(full["v"][2], "v")(5) == frame.v(5, 2));

    auto path = iterative_traverse(net, z, 1, 1.0, 4);
    json p = path_to_json(path);
    CHECK(p["mode"] == "iterative");
    CHECK(p["iterates"].size() == 5);
    CHECK(p["iterates"][1].contains("cosine_to_previous"));
    CHECK_FALSE(p["iterates"][4].contains("direction"));
    std::string csv = path_steps_csv(path);
    CHECK(csv.rfind("step,chord_length,cosine_to_previous,sigma,direction_index\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}

TEST_CASE("file helpers") {
    auto dir = std::filesystem::temp_directory_path() / "latentgeom_vector_io";
    std::filesystem::create_directories(dir);
    write_text_file(dir / "v.json", R"({"vector": [0.5, 1.5]})");
    CHECK(vector_set_from_json(read_json_file(dir / "v.json"))(1, 0) == 1.5);
    write_text_file(dir / "bad.json", "{");
    CHECK_THROWS_AS(read_json_file(dir / "bad.json"), ParseError);
    CHECK_THROWS_AS(read_json_file(dir / "none.json"), ParseError);
    std::filesystem::remove_all(dir);
}
