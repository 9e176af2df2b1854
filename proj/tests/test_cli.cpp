#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "susyq/cli.hpp"

using namespace susyq;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("susyq_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) out.push_back(cell);
    return out;
}

}  // namespace

TEST_CASE("bindings") {
    CHECK(cli::parse_binding("k=-1") == std::pair<std::string, cplx>{"k", -1.0});
    CHECK(cli::parse_binding("z=0.5,2") == std::pair<std::string, cplx>{"z", cplx(0.5, 2)});
    CHECK_THROWS_AS((void)cli::parse_binding("k"), cli::ConfigError);
    CHECK_THROWS_AS((void)cli::parse_binding("k=abc"), cli::ConfigError);
}

TEST_CASE("potentials CSV layout") {
    const Result r = run({"potentials", "--model", "pseudo-bosonic", "--bind", "k=-1", "--N", "257"});
    REQUIRE(r.code == cli::ok);
    std::istringstream is(r.out);
    std::string meta, header, row;
    std::getline(is, meta);
    std::getline(is, header);
    CHECK(meta.rfind("# {", 0) == 0);
    CHECK(header == "x,q1_re,q1_im,V1_re,V1_im,V2_re,V2_im,V1adj_re,V1adj_im,V2adj_re,V2adj_im");
    int rows = 0;
    while (std::getline(is, row)) {
        CHECK(split(row).size() == 11);
        ++rows;
    }
    CHECK(rows == 257);
}

TEST_CASE("potentials: equal superpotentials give q1 = 0") {
    const Result r = run({"potentials", "--wA", "x", "--wB", "x", "--N", "65"});
    REQUIRE(r.code == cli::ok);
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    std::getline(is, line);
    while (std::getline(is, line)) {
        const auto c = split(line);
        CHECK(std::stod(c[1]) == 0.0);
        CHECK(std::stod(c[2]) == 0.0);
    }
}

TEST_CASE("potentials: Black-Scholes pole is annotated") {
    const Result r = run({"potentials", "--model", "black-scholes", "--bind", "r=1", "v0=1", "--N", "64"});
    REQUIRE(r.code == cli::ok);
    const auto meta = nlohmann::json::parse(r.out.substr(2, r.out.find('\n') - 2));
    REQUIRE(meta["singular_points"].size() == 1);
    CHECK(meta["singular_points"][0].get<double>() == doctest::Approx(0.5 * std::log(2.0)));
}

TEST_CASE("exit codes") {
    CHECK(run({"potentials", "--model", "black-scholes", "--bind", "r=0"}).code == cli::pole_on_grid);
    CHECK(run({"potentials", "--model", "unknown"}).code == cli::config_error);
    CHECK(run({"potentials", "--wA", "x +", "--wB", "x"}).code == cli::config_error);
    CHECK(run({"potentials", "--wA", "x"}).code == cli::config_error);
    CHECK(run({"potentials", "--model", "harmonic", "--N", "3"}).code == cli::config_error);
    CHECK(run({"potentials", "--model", "harmonic", "--format", "xml"}).code == cli::config_error);
    CHECK(run({"frobnicate"}).code == cli::config_error);
    const Result gk = run({"gk", "--energies", "2*x/(x+1)", "--J", "5"});
    CHECK(gk.code == cli::gk_domain);
    CHECK(gk.err.find("domain") != std::string::npos);
}

TEST_CASE("verify: pass, JSON report and the perturbed pair") {
    const fs::path dir = scratch("verify");
    const Result ok = run({"verify", "--model", "harmonic", "--out", dir.string()});
    CHECK(ok.code == cli::ok);
    const auto report = nlohmann::json::parse(slurp(dir / "verify_report.json"));
    CHECK(report["report"]["pass"] == true);
    CHECK(report["model"] == "harmonic");

    const Result bad = run({"verify", "--model", "pseudo-bosonic", "--bind", "k=-1", "--wB", "x - exp(x) + 0.01*x"});
    CHECK(bad.code == cli::check_failed);
    CHECK(bad.err.find("intertwining") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("config file and flag precedence") {
    const fs::path dir = scratch("config");
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "cfg.json");
        os << R"({"model": "harmonic", "grid": {"L": 6, "N": 129}, "format": "json"})";
    }
    const Result from_file = run({"potentials", "--config", (dir / "cfg.json").string()});
    REQUIRE(from_file.code == cli::ok);
    const auto j = nlohmann::json::parse(from_file.out);
    CHECK(j["grid"]["N"] == 129);
    CHECK(j["grid"]["L"] == 6.0);
    const Result flag = run({"potentials", "--config", (dir / "cfg.json").string(), "--N", "65"});
    CHECK(nlohmann::json::parse(flag.out)["grid"]["N"] == 65);
    fs::remove_all(dir);
}

TEST_CASE("environment grid size sits between flags and config") {
    const fs::path dir = scratch("env");
    fs::create_directories(dir);
    {
        std::ofstream os(dir / "cfg.json");
        os << R"({"model": "harmonic", "grid": {"N": 129}, "format": "json"})";
    }
    setenv("SUSYQ_GRID_N", "97", 1);
    const Result env = run({"potentials", "--config", (dir / "cfg.json").string()});
    const Result flag = run({"potentials", "--config", (dir / "cfg.json").string(), "--N", "65"});
    unsetenv("SUSYQ_GRID_N");
    CHECK(nlohmann::json::parse(env.out)["grid"]["N"] == 97);
    CHECK(nlohmann::json::parse(flag.out)["grid"]["N"] == 65);
    fs::remove_all(dir);
}

TEST_CASE("gk files and pair norm") {
    const fs::path dir = scratch("gk");
    const Result r = run({"gk", "--model", "deformed-harmonic", "--J", "1", "--gamma", "0", "--out", dir.string()});
    REQUIRE(r.code == cli::ok);
    for (const char* f : {"gk_state_phi.json", "gk_state_psi.json", "K_curve.csv", "resolution_trace.csv", "gk_report.json"})
        CHECK(fs::exists(dir / f));
    const auto rep = nlohmann::json::parse(slurp(dir / "gk_report.json"));
    CHECK(std::abs(rep["pair_norm"]["quadrature"][0].get<double>() - 1.0) < 1e-7);
    const auto state = nlohmann::json::parse(slurp(dir / "gk_state_phi.json"));
    for (const char* key : {"family", "sector", "J", "gamma", "N", "K", "coefficients", "tail"}) CHECK(state.contains(key));

    std::ifstream k(dir / "K_curve.csv");
    std::string line;
    std::getline(k, line);
    CHECK(line == "J,K");
    // E_n = 2n: rho_n = 2^n n! and K = e^{-J/4}
    while (std::getline(k, line)) {
        const auto c = split(line);
        CHECK(std::abs(std::stod(c[1]) - std::exp(-std::stod(c[0]) / 4)) < 1e-10);
    }
    fs::remove_all(dir);
}

TEST_CASE("gk: shifted sector 2 needs an explicit opt-in") {
    CHECK(run({"gk", "--model", "swanson", "--sector", "2"}).code == cli::config_error);
    const Result r = run({"gk", "--model", "pseudo-bosonic", "--sector", "2", "--allow-shifted"});
    CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("bs-classify and models-list") {
    const Result r = run({"bs-classify"});
    REQUIRE(r.code == cli::ok);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["rows"].size() == 6);
    for (const auto& row : j["rows"]) CHECK(row["agree"] == true);
    const Result m = run({"models-list"});
    CHECK(nlohmann::json::parse(m.out).size() == 5);
}

TEST_CASE("identical runs give identical files") {
    const fs::path a = scratch("det_a"), b = scratch("det_b");
    for (const fs::path& d : {a, b}) {
        REQUIRE(run({"vacua", "--model", "swanson", "--format", "csv", "--out", d.string()}).code == cli::ok);
        REQUIRE(run({"gk", "--model", "harmonic", "--out", d.string()}).code == cli::ok);
    }
    for (const auto& e : fs::directory_iterator(a)) CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
    fs::remove_all(a);
    fs::remove_all(b);
}
