#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "latentgeom/cli.hpp"
#include "latentgeom/generate.hpp"
#include "latentgeom/network_io.hpp"
#include "latentgeom/random.hpp"

using namespace latentgeom;
using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class TempDir {
public:
    TempDir() {
        path_ = std::filesystem::temp_directory_path() / ("latentgeom_cli_" + std::to_string(counter_++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

std::string make_net(const TempDir& dir, const std::string& dims = "6,12,12,12", const std::string& name = "net.json") {
    auto r = run({"gen-net", "--dims", dims, "--slope", "0.2", "--seed", "3", "--out", dir / name});
    REQUIRE(r.code == 0);
    return dir / name;
}

}  // namespace

TEST_CASE("gen-net is deterministic and loadable") {
    TempDir dir;
    auto r1 = run({"gen-net", "--dims", "8,8", "--seed", "4", "--out", dir / "a.json"});
    auto r2 = run({"gen-net", "--dims", "8,8", "--seed", "4", "--out", dir / "b.json"});
    REQUIRE(r1.code == 0);
    REQUIRE(r2.code == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    auto net = load_network(dir / "a.json");
    auto regenerated = generate_network({8, 8}, 0.2, 4);
    Eigen::VectorXd z = Rng(1).normal_vector(8);
    CHECK((evaluate(net, z) - evaluate(regenerated, z)).norm() == 0.0);

    auto stdout_run = run({"gen-net", "--dims", "2,3", "--slope", "1", "--init", "orthogonal"});
    CHECK(stdout_run.code == 0);
    CHECK(json::parse(stdout_run.out)["in_dim"] == 2);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 1);
    CHECK(run({"gen-net"}).code == 1);
    CHECK(run({"gen-net", "--dims", "4"}).code != 0);
    CHECK(run({"gen-net", "--dims", "4,0"}).code != 0);
    CHECK(run({"gen-net", "--dims", "4,4", "--slope", "0"}).code != 0);
    CHECK(run({"gen-net", "--dims", "4,4", "--bogus"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"basis", "--net", "/nonexistent/net.json"}).code != 0);
}

TEST_CASE("malformed weight files name the field") {
    TempDir dir;
    std::ofstream(dir / "bad.json") << R"({"in_dim": 2, "layers": [{"weight": [[1, 0], [0, "q"]], "bias": [0, 0], "activation": "identity"}]})";
    auto r = run({"basis", "--net", dir / "bad.json"});
    CHECK(r.code != 0);
    CHECK(r.err.find("layers[0].weight[1][1]") != std::string::npos);

    std::ofstream(dir / "trunc.json") << "{\"in_dim\": 2";
    auto t = run({"validate", "--net", dir / "trunc.json"});
    CHECK(t.code != 0);
    CHECK(t.err.find("malformed JSON") != std::string::npos);
}

TEST_CASE("basis subcommand") {
    TempDir dir;
    auto net = make_net(dir);
    CHECK(run({"basis", "--net", net, "--seed", "0", "--out", dir / "a.json"}).code == 0);
    CHECK(run({"basis", "--net", net, "--seed", "0", "--out", dir / "b.json"}).code == 0);
    CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));
    auto doc = json::parse(slurp(dir / "a.json"));
    CHECK(doc["method"] == "local");
    CHECK(doc["singular_values"].size() == 6);
    CHECK_FALSE(doc.contains("v"));

    CHECK(run({"basis", "--net", net, "--vectors", "--out", dir / "v.json"}).code == 0);
    CHECK(json::parse(slurp(dir / "v.json"))["v"].size() == 6);

    CHECK(run({"basis", "--net", net, "--method", "ganspace", "--samples", "200", "--out", dir / "g.json"}).code == 0);
    auto g = json::parse(slurp(dir / "g.json"));
    CHECK(g["method"] == "ganspace");
    CHECK(g["directions"].size() == 12);
    CHECK(run({"basis", "--net", net, "--method", "ganspace", "--samples", "5"}).code == 2);

    CHECK(run({"basis", "--net", net, "--method", "sefa", "--out", dir / "s.json"}).code == 0);
    CHECK(json::parse(slurp(dir / "s.json"))["method"] == "sefa");

    std::ofstream(dir / "z.json") << R"({"vector": [0.1, 0.2, 0.3, 0.4, 0.5, 0.6]})";
    CHECK(run({"basis", "--net", net, "--z", dir / "z.json", "--out", dir / "z_out.json"}).code == 0);
    CHECK(json::parse(slurp(dir / "z_out.json"))["z"][2] == 0.3);
    std::ofstream(dir / "z_bad.json") << R"({"vector": [0.1, 0.2]})";
    CHECK(run({"basis", "--net", net, "--z", dir / "z_bad.json"}).code == 2);
}

TEST_CASE("traverse subcommand modes") {
    TempDir dir;
    auto net = make_net(dir);
    auto it = run({"traverse", "--net", net, "--seed", "1", "--intensity", "2", "--steps", "8", "--out",
                   dir / "it.json", "--csv", dir / "it.csv"});
    REQUIRE(it.code == 0);
    auto path = json::parse(slurp(dir / "it.json"));
    CHECK(path["mode"] == "iterative");
    CHECK(path["iterates"].size() == 9);
    auto csv = slurp(dir / "it.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);

    REQUIRE(run({"traverse", "--net", net, "--mode", "linear", "--points", "5", "--out", dir / "lin.json", "--csv",
                 dir / "lin.csv"})
                .code == 0);
    CHECK(json::parse(slurp(dir / "lin.json"))["points"].size() == 5);

    REQUIRE(run({"basis", "--net", net, "--method", "sefa", "--out", dir / "guide.json"}).code == 0);
    auto guided = run({"traverse", "--net", net, "--mode", "guided", "--guide-file", dir / "guide.json",
                       "--guide-index", "2", "--similarity", "previous", "--out", dir / "g.json"});
    CHECK(guided.code == 0);
    CHECK(json::parse(slurp(dir / "g.json"))["mode"] == "guided");

    auto stoch = run({"traverse", "--net", net, "--mode", "stochastic", "--intensity", "1", "--lo", "0.05", "--hi",
                      "0.15", "--out", dir / "s.json"});
    CHECK(stoch.code == 0);
    auto s = json::parse(slurp(dir / "s.json"));
    CHECK(s["mode"] == "stochastic");
    CHECK(s["iterates"].size() >= 8);
    CHECK(s["iterates"].size() <= 21);

    CHECK(run({"traverse", "--net", net, "--mode", "linear", "--guide-file", dir / "guide.json", "--out",
               dir / "gl.json"})
              .code == 0);
    CHECK(run({"traverse", "--net", net, "--direction", "7"}).code == 2);
    CHECK(run({"traverse", "--net", net, "--mode", "guided", "--guide-file", dir / "guide.json", "--guide-index",
               "99"})
              .code == 2);
    CHECK(run({"traverse", "--net", net, "--mode", "sideways"}).code != 0);
}

TEST_CASE("traverse reports aborted paths") {
    TempDir dir;
    std::ofstream(dir / "flat.json") << R"({"in_dim": 2, "layers": [{"weight": [[1, 0], [0, 1]], "bias": [0, 0], "activation": "leaky_relu", "slope": 1e-9}]})";
    std::ofstream(dir / "z.json") << "[1.0, 0.4]";
    auto r = run({"traverse", "--net", dir / "flat.json", "--z", dir / "z.json", "--direction", "2", "--sign", "-1",
                  "--intensity", "1", "--steps", "4", "--out", dir / "partial.json"});
    CHECK(r.code == 3);
    CHECK(r.err.find("3 iterates completed") != std::string::npos);
    auto partial = nlohmann::json::parse(std::ifstream(dir / "partial.json"));
    CHECK(partial["iterates"].size() == 3);
}

TEST_CASE("deviation subcommand") {
    TempDir dir;
    auto net = make_net(dir);
    auto r = run({"deviation", "--net", net, "--mode", "iterative", "--intensity", "3", "--steps", "6", "--restarts",
                  "1", "--out", dir / "d.csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(slurp(dir / "d.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line.rfind("# residual", 0) == 0);
    std::getline(lines, line);
    CHECK(line == "point,intensity,residual,converged");
    int rows = 0;
    while (std::getline(lines, line)) {
        CHECK(line.find(",0,1") != std::string::npos);
        ++rows;
    }
    CHECK(rows == 7);

    CHECK(run({"deviation", "--net", net, "--mode", "linear", "--points", "4", "--restarts", "1"}).code == 0);
    CHECK(run({"deviation", "--net", net, "--mode", "global-linear", "--samples", "100", "--points", "3",
               "--restarts", "1"})
              .code == 0);
    std::ofstream(dir / "pts.json") << R"({"directions": [[0,0,0,0,0,0,0,0,0,0,0,0], [1,1,1,1,1,1,1,1,1,1,1,1]]})";
    auto p = run({"deviation", "--net", net, "--points-file", dir / "pts.json", "--restarts", "2"});
    CHECK(p.code == 0);
    CHECK(p.out.find("\n1,0,") != std::string::npos);
}

TEST_CASE("evaluation subcommands") {
    TempDir dir;
    auto net = make_net(dir);
    auto w = run({"warpage", "--net", net, "--k", "1,3", "--pairs", "6", "--pairs-od", "4", "--samples", "100",
                  "--csv", dir / "w.csv", "--json", dir / "w.json"});
    REQUIRE(w.code == 0);
    CHECK(slurp(dir / "w.csv").find("warpage,to_sefa,3,geodesic") != std::string::npos);
    CHECK(json::parse(slurp(dir / "w.json"))["rows"].size() == 20);
    CHECK(run({"warpage", "--net", net, "--k", "9"}).code == 2);

    auto e = run({"eps-sweep", "--net", net, "--k", "2", "--eps-list", "0,0.1", "--pairs", "5"});
    REQUIRE(e.code == 0);
    CHECK(e.out.find("eps_sweep,close_w,0,projection,0,0,5") != std::string::npos);

    auto h = run({"sv-hist", "--net", net, "--points", "5", "--bins", "4"});
    REQUIRE(h.code == 0);
    CHECK(std::count(h.out.begin(), h.out.end(), '\n') == 5);

    auto g = run({"grid", "--net", net, "--n", "1", "--half-extent", "2"});
    REQUIRE(g.code == 0);
    CHECK(std::count(g.out.begin(), g.out.end(), '\n') == 10);
    auto gd = run({"grid", "--net", net, "--n", "1", "--deviation", "--random-directions", "--restarts", "1"});
    REQUIRE(gd.code == 0);
    CHECK(gd.out.rfind("x,y,residual,converged\n", 0) == 0);
}

TEST_CASE("validate subcommand") {
    TempDir dir;
    auto net = make_net(dir, "32,32,32,32,32,32,32,32,32");
    auto r = run({"validate", "--net", net, "--points", "2"});
    CHECK(r.code == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 4);
    CHECK(r.out.find("FAIL") == std::string::npos);
    CHECK(r.out.find("PASS svd_identity") != std::string::npos);
}

TEST_CASE("subcommands leave their inputs untouched") {
    TempDir dir;
    auto net = make_net(dir);
    const std::string before = slurp(net);
    run({"basis", "--net", net});
    run({"traverse", "--net", net});
    run({"warpage", "--net", net, "--k", "2", "--pairs", "3", "--pairs-od", "2", "--no-global"});
    run({"validate", "--net", net, "--points", "1"});
    CHECK(slurp(net) == before);
}

TEST_CASE("help lists every subcommand") {
    auto r = run({"--help"});
    CHECK(r.code == 0);
    for (const char* name : {"gen-net", "basis", "traverse", "deviation", "warpage", "eps-sweep", "sv-hist", "grid",
                             "validate"})
        CHECK(r.out.find(name) != std::string::npos);
}
