// Command-line driver over the C API. Every parameter of a command is a flag
// named after its key; --config supplies a JSON object of the same keys and
// flags win over the file.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hubent/hubent.h"

namespace {

using json = nlohmann::json;

const std::vector<std::pair<std::string, std::string>> kCommands = {
    {"fig2", "S and L against density for several U (homogeneous chain)"},
    {"fig3", "S and L against U at fixed densities, with exact-diagonalization points"},
    {"fig4", "double occupancy against density for several U"},
    {"fig5", "Taylor partial sums S_l against U and the minimal monotone order"},
    {"fig6", "disorder-averaged LDA entropies against U"},
    {"superlattice", "site-averaged entropies of X:Y superlattices (ed or lda backend)"},
    {"eval", "one-shot homogeneous S, L, w2 at (n, U)"},
    {"ed", "one-shot exact ground state with per-site occupations"},
};

struct Command {
  CLI::App* app = nullptr;
  json defaults;
  std::map<std::string, std::string> flags;  // key -> raw flag text
  std::string config;
  std::string out;
  std::string out_dir;
  bool print_defaults = false;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<double> as_number(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

json scalar(const std::string& s) {
  if (const auto x = as_number(s)) {
    if (s.find_first_of(".eE") == std::string::npos && s.find('-') == std::string::npos)
      return static_cast<std::uint64_t>(std::stoull(s));
    return *x;
  }
  return s;
}

// Flag text is read against the default's shape: lists take "a,b,c" or a
// "start:stop:step" grid, numbers take a number, strings are verbatim, and
// anything else must be JSON.
json parse_flag(const std::string& key, const std::string& text, const json& fallback) {
  if (fallback.is_array() || fallback.is_object()) {
    if (!text.empty() && (text.front() == '[' || text.front() == '{')) {
      try {
        return json::parse(text);
      } catch (const json::parse_error&) {
        throw UsageError("--" + key + ": not valid JSON");
      }
    }
    const auto grid = split(text, ':');
    if (grid.size() == 3 && as_number(grid[0]) && as_number(grid[1]) && as_number(grid[2]))
      return {{"start", *as_number(grid[0])}, {"stop", *as_number(grid[1])}, {"step", *as_number(grid[2])}};
    json list = json::array();
    for (const auto& item : split(text, ',')) list.push_back(scalar(item));
    return list;
  }
  if (fallback.is_string()) return text;
  if (fallback.is_number()) {
    if (!as_number(text)) throw UsageError("--" + key + ": expected a number, got '" + text + "'");
    return scalar(text);
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error&) {
    return scalar(text);
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  try {
    json config = json::parse(in);
    if (!config.is_object()) throw UsageError("config file '" + path + "' must hold a JSON object");
    return config;
  } catch (const json::parse_error& e) {
    throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

json fetch_defaults(const std::string& name) {
  char* text = nullptr;
  if (hubent_experiment_defaults(name.c_str(), &text) != HUBENT_OK)
    throw std::runtime_error(hubent_last_error());
  json defaults = json::parse(text);
  hubent_string_free(text);
  return defaults;
}

int run(const std::string& name, Command& cmd) {
  if (cmd.print_defaults) {
    std::cout << cmd.defaults.dump(2) << "\n";
    return 0;
  }
  json params = cmd.config.empty() ? json::object() : load_config(cmd.config);
  for (const auto& [key, text] : cmd.flags) params[key] = parse_flag(key, text, cmd.defaults.at(key));

  char* csv = nullptr;
  const hubent_status status = hubent_run_experiment(name.c_str(), params.dump().c_str(), &csv);
  if (status != HUBENT_OK) {
    std::cerr << "hubent: " << hubent_last_error() << "\n";
    return static_cast<int>(status);
  }
  std::unique_ptr<char, void (*)(char*)> owned(csv, hubent_string_free);

  std::string path = cmd.out;
  if (path.empty() && !cmd.out_dir.empty()) {
    std::filesystem::create_directories(cmd.out_dir);
    path = (std::filesystem::path(cmd.out_dir) / (name + ".csv")).string();
  }
  if (path.empty() || path == "-") {
    std::cout << owned.get();
    return 0;
  }
  std::ofstream out(path, std::ios::binary);
  out << owned.get();
  if (!out) {
    std::cerr << "hubent " << name << ": cannot write '" << path << "'\n";
    return HUBENT_ERR_INTERNAL;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Single-site entanglement of Hubbard chains: CSV data generators"};
  app.set_version_flag("--version", std::string(hubent_version()));
  app.require_subcommand(1);

  std::map<std::string, Command> commands;
  try {
    for (const auto& [name, help] : kCommands) {
      Command& cmd = commands[name];
      cmd.defaults = fetch_defaults(name);
      cmd.app = app.add_subcommand(name, help);
      cmd.app->add_option("--config", cmd.config, "JSON file with parameter values")->check(CLI::ExistingFile);
      cmd.app->add_option("-o,--out", cmd.out, "output CSV path ('-' for stdout)");
      cmd.app->add_option("--out-dir", cmd.out_dir, "directory receiving <command>.csv");
      cmd.app->add_flag("--print-defaults", cmd.print_defaults, "print the default parameters and exit");
      for (const auto& [key, value] : cmd.defaults.items()) {
        cmd.app->add_option_function<std::string>(
                   "--" + key, [&cmd, key = key](const std::string& text) { cmd.flags[key] = text; },
                   "default: " + value.dump())
            ->type_name("VALUE");
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "hubent: " << e.what() << "\n";
    return HUBENT_ERR_INTERNAL;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return HUBENT_ERR_INVALID;
  }

  for (auto& [name, cmd] : commands) {
    if (!cmd.app->parsed()) continue;
    try {
      return run(name, cmd);
    } catch (const UsageError& e) {
      std::cerr << "hubent " << name << ": " << e.what() << "\n";
      return HUBENT_ERR_INVALID;
    } catch (const std::exception& e) {
      std::cerr << "hubent " << name << ": " << e.what() << "\n";
      return HUBENT_ERR_INTERNAL;
    }
  }
  return HUBENT_ERR_INVALID;
}
