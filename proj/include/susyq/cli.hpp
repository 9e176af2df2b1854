#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "susyq/expr.hpp"

namespace susyq::cli {

enum ExitCode : int { ok = 0, check_failed = 1, config_error = 2, pole_on_grid = 3, gk_domain = 4 };

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Fully resolved settings of one invocation. Precedence for every field:
/// command-line flag, then SUSYQ_GRID_N (grid size only), then --config file, then default.
struct RunConfig {
    std::string command;
    std::optional<std::string> model;
    std::optional<std::string> wA, wB;
    Bindings bindings;
    double L = 12.0;
    std::size_t N = 4097;
    std::optional<std::string> out_dir;
    std::string format = "json";  // potentials defaults to csv

    // gk
    double J = 1.0;
    double gamma = 0.0;
    std::string family = "both";
    int sector = 1;
    std::optional<std::string> energies;
    std::optional<double> J_max;
    bool allow_shifted = false;

    // bs-classify
    std::vector<double> r_values{2.0, 1.0, 0.5, -0.5, -1.0, -2.0};
    double v0 = 1.0;

    // verify
    bool gk_checks = true;
};

/// Parses "name=value" or "name=re,im".
[[nodiscard]] std::pair<std::string, cplx> parse_binding(const std::string& text);

/// Entry point: returns the process exit code. Data goes to `out` (or to
/// files under --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace susyq::cli
