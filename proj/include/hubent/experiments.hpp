#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace hubent {

inline constexpr const char* kVersion = "hubent 0.1.0";

/// start, start + step, ..., stop with every point rounded to 12 decimals so
/// that grids built from decimal steps print and compare cleanly.
std::vector<double> make_grid(double start, double stop, double step);

/// fig2, fig3, fig4, fig5, fig6, superlattice, eval, ed.
const std::vector<std::string>& experiment_commands();

/// Default parameter set of a command as a JSON object.
std::string experiment_defaults(std::string_view command);

/// Runs `command` with `params_json` (a JSON object overriding defaults; empty
/// means all defaults) and returns the CSV text: a header line, a comment line
/// with the resolved parameters and version, the rows in grid order, and for
/// some commands trailing comment lines. The text does not depend on `workers`.
std::string run_experiment(std::string_view command, std::string_view params_json,
                           unsigned workers = 1);

}  // namespace hubent
