#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    std::string cmd = std::string(GRAPHPOT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch() {
    fs::path dir = fs::temp_directory_path() / "graphpot_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("capacity subcommand writes the expected sequence") {
    fs::path dir = scratch();
    write_file(dir / "cap.json", R"({
        "family": {"kind": "lattice", "dim": 1},
        "p": 2, "levels": [5, 10, 20],
        "K": {"kind": "ids", "ids": [0]}
    })");
    int code = run_cli("capacity --config " + (dir / "cap.json").string() + " --out " +
                       (dir / "out").string());
    CHECK(code == 0);
    std::string csv = read_file(dir / "out" / "capacity_sequence.csv");
    CHECK(csv.find("5,0.4") != std::string::npos);
    CHECK(csv.find("10,0.2") != std::string::npos);
    CHECK(csv.find("20,0.09") != std::string::npos);
    CHECK(csv.find("config_hash=") != std::string::npos);
    CHECK(csv.find("tool_version=0.1.0") != std::string::npos);
    CHECK(read_file(dir / "out" / "summary.json").find("parabolic") != std::string::npos);
}

TEST_CASE("invalid family spec exits 2 and writes nothing") {
    fs::path dir = scratch();
    write_file(dir / "bad.json", R"({
        "family": {"kind": "lattice", "dim": 9},
        "levels": [3]
    })");
    int code = run_cli("generate --config " + (dir / "bad.json").string() + " --out " +
                       (dir / "out").string());
    CHECK(code == 2);
    CHECK(!fs::exists(dir / "out" / "edges.csv"));

    CHECK(run_cli("generate --config " + (dir / "missing.json").string()) == 2);
    write_file(dir / "nolevels.json", R"({"family": {"kind": "lattice", "dim": 1}})");
    CHECK(run_cli("generate --config " + (dir / "nolevels.json").string()) == 2);
}

TEST_CASE("multi-harmonic on a parabolic family is a config-level error") {
    fs::path dir = scratch();
    write_file(dir / "line.json", R"({
        "family": {"kind": "lattice", "dim": 1},
        "p": 2, "levels": [6, 9, 12],
        "K": {"kind": "origin"}
    })");
    int code = run_cli("multi-harmonic --config " + (dir / "line.json").string() + " --out " +
                       (dir / "out").string());
    CHECK(code == 2);
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    fs::path dir = scratch();
    write_file(dir / "sob.json", R"({
        "family": {"kind": "binary_tree"},
        "p": 2, "q": 4, "levels": [3, 4, 5],
        "K": {"kind": "origin"},
        "restarts": 4
    })");
    std::string base = "sobolev --config " + (dir / "sob.json").string();
    CHECK(run_cli(base + " --seed 7 --out " + (dir / "a").string()) == 0);
    CHECK(run_cli(base + " --seed 7 --out " + (dir / "b").string()) == 0);
    CHECK(run_cli(base + " --seed 8 --out " + (dir / "c").string()) == 0);
    CHECK(read_file(dir / "a" / "sobolev.csv") == read_file(dir / "b" / "sobolev.csv"));
    CHECK(read_file(dir / "a" / "summary.json") == read_file(dir / "b" / "summary.json"));
    // different seed changes the provenance hash but stays a valid artifact
    CHECK(read_file(dir / "c" / "sobolev.csv") != read_file(dir / "a" / "sobolev.csv"));
}

TEST_CASE("verbose capacity emits the solver trace and equilibrium potential") {
    fs::path dir = scratch();
    write_file(dir / "cap3.json", R"({
        "family": {"kind": "lattice", "dim": 1},
        "p": 3, "levels": [4, 6, 8],
        "K": {"kind": "origin"}
    })");
    CHECK(run_cli("capacity --config " + (dir / "cap3.json").string() + " --verbose --out " +
                  (dir / "out").string()) == 0);
    std::string trace = read_file(dir / "out" / "solver_trace.csv");
    CHECK(trace.find("iteration,energy,residual") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "equilibrium_potential.csv"));
}

TEST_CASE("corroborate runs the full pipeline on the dumbbell") {
    fs::path dir = scratch();
    write_file(dir / "corr.json", R"({
        "family": {"kind": "glue", "ends": [{"kind": "binary_tree"}, {"kind": "binary_tree"}]},
        "p": 2, "q": 4, "levels": [3, 4, 5, 6],
        "K": {"kind": "hub"},
        "H": 1.01
    })");
    CHECK(run_cli("corroborate --config " + (dir / "corr.json").string() + " --out " +
                  (dir / "out").string()) == 0);
    std::string summary = read_file(dir / "out" / "summary.json");
    CHECK(summary.find("hyperbolic") != std::string::npos);
    CHECK(summary.find("\"witness\": true") != std::string::npos);
    CHECK(fs::exists(dir / "out" / "u.csv"));
    CHECK(fs::exists(dir / "out" / "sobolev.csv"));
}

TEST_CASE("generate writes the edge list and vertex table") {
    fs::path dir = scratch();
    write_file(dir / "gen.json", R"({
        "family": {"kind": "cylinder", "circumference": 4},
        "levels": [2]
    })");
    CHECK(run_cli("generate --config " + (dir / "gen.json").string() + " --out " +
                  (dir / "out").string()) == 0);
    std::string edges = read_file(dir / "out" / "edges.csv");
    std::string verts = read_file(dir / "out" / "vertices.csv");
    CHECK(edges.find("u,v,w,ell") != std::string::npos);
    CHECK(verts.find("vertex,mu") != std::string::npos);
    // 20 vertices + header + provenance line
    int lines = 0;
    for (char c : verts)
        if (c == '\n') ++lines;
    CHECK(lines == 22);
}
