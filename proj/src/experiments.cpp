#include "hubent/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>

#include <json.hpp>

#include "hubent/chain_model.hpp"
#include "hubent/ed.hpp"
#include "hubent/entropy.hpp"
#include "hubent/errors.hpp"
#include "hubent/fvc.hpp"
#include "hubent/ks_lda.hpp"
#include "hubent/parallel.hpp"

namespace hubent {

using json = nlohmann::json;

std::vector<double> make_grid(double start, double stop, double step) {
  if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
    fail(ErrorKind::InvalidInput, "grid needs finite start <= stop and step > 0");
  const double span = (stop - start) / step;
  if (span > 1e6) fail(ErrorKind::InvalidInput, "grid has more than 1e6 points");
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k)
    grid[k] = std::round((start + static_cast<double>(k) * step) * 1e12) / 1e12;
  return grid;
}

namespace {

std::string num(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

json grid_json(double start, double stop, double step) {
  return {{"start", start}, {"stop", stop}, {"step", step}};
}

// Defaults merged with caller overrides; unknown keys are rejected so that a
// misspelt flag cannot silently fall back to a default.
class Params {
 public:
  Params(std::string_view command, json defaults, std::string_view overrides) : command_(command) {
    values_ = std::move(defaults);
    if (overrides.empty()) return;
    json given;
    try {
      given = json::parse(overrides);
    } catch (const json::parse_error& e) {
      fail(ErrorKind::InvalidInput, std::string("parameters are not valid JSON: ") + e.what());
    }
    if (given.is_null()) return;
    if (!given.is_object()) fail(ErrorKind::InvalidInput, "parameters must be a JSON object");
    for (auto& [key, value] : given.items()) {
      if (!values_.contains(key))
        fail(ErrorKind::InvalidInput, "unknown parameter '" + key + "' for " + command_);
      values_[key] = value;
    }
  }

  const json& resolved() const { return values_; }
  void set(const std::string& key, json value) { values_[key] = std::move(value); }
  bool is_null(const std::string& key) const { return values_.at(key).is_null(); }

  double number(const std::string& key) const {
    const json& v = values_.at(key);
    if (!v.is_number()) bad(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) bad(key, "must be finite");
    return x;
  }

  std::size_t count(const std::string& key) const {
    const json& v = values_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) bad(key, "expected a non-negative integer");
    return v.get<std::size_t>();
  }

  std::uint64_t seed(const std::string& key) const {
    const json& v = values_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
      bad(key, "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }

  std::string text(const std::string& key) const {
    const json& v = values_.at(key);
    if (!v.is_string()) bad(key, "expected a string");
    return v.get<std::string>();
  }

  // A list of numbers or a {start, stop, step} object; must be non-empty and
  // strictly increasing unless `ordered` is false.
  std::vector<double> list(const std::string& key, bool ordered = true) const {
    const json& v = values_.at(key);
    std::vector<double> out;
    if (v.is_object()) {
      for (const char* field : {"start", "stop", "step"})
        if (!v.contains(field) || !v.at(field).is_number()) bad(key, "grid object needs start, stop, step");
      try {
        out = make_grid(v.at("start").get<double>(), v.at("stop").get<double>(), v.at("step").get<double>());
      } catch (const Error& e) {
        bad(key, e.what());
      }
    } else if (v.is_array()) {
      for (const json& x : v) {
        if (!x.is_number()) bad(key, "list entries must be numbers");
        out.push_back(x.get<double>());
      }
    } else {
      bad(key, "expected a list or a {start, stop, step} object");
    }
    if (out.empty()) bad(key, "must not be empty");
    for (double x : out)
      if (!std::isfinite(x)) bad(key, "entries must be finite");
    if (ordered)
      for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) bad(key, "must be strictly increasing");
    return out;
  }

  [[noreturn]] void bad(const std::string& key, const std::string& why) const {
    fail(ErrorKind::InvalidInput, command_ + ": parameter '" + key + "' " + why);
  }

  void require(bool ok, const std::string& key, const std::string& why) const {
    if (!ok) bad(key, why);
  }

 private:
  std::string command_;
  json values_;
};

struct Csv {
  std::string header;
  std::vector<std::string> rows;
  std::vector<std::string> trailer;  // comment lines after the rows

  std::string render(std::string_view command, const json& params, const json& seed) const {
    json meta = {{"command", command}, {"params", params}, {"seed", seed}, {"version", kVersion}};
    std::string out = header + "\n# " + meta.dump() + "\n";
    for (const auto& r : rows) out += r + "\n";
    for (const auto& t : trailer) out += "# " + t + "\n";
    return out;
  }
};

std::string join(std::initializer_list<std::string> fields) {
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out += ',';
    out += f;
  }
  return out;
}

// Fills rows[i] = make(i) for every grid index, possibly concurrently.
std::vector<std::string> rows_in_order(std::size_t count, unsigned workers,
                                       const std::function<std::string(std::size_t)>& make) {
  std::vector<std::string> rows(count);
  parallel_for(count, workers, [&](std::size_t i) { rows[i] = make(i); });
  return rows;
}

void check_fvc_interactions(const Params& p, const std::string& key, const std::vector<double>& us) {
  for (double u : us)
    p.require(u >= kDerivativeFloorU, key, "values must be >= 0.2 (got " + num(u) + ")");
}

void check_densities(const Params& p, const std::string& key, const std::vector<double>& ns,
                     double hi) {
  for (double n : ns)
    p.require(n > 0.0 && n <= hi, key, "values must lie in (0, " + num(hi) + "] (got " + num(n) + ")");
}

json u_default() { return grid_json(0.2, 10.0, 0.2); }

const json& defaults_for(std::string_view command) {
  static const std::map<std::string, json, std::less<>> defaults = {
      {"fig2", {{"U_list", {0.2, 1.0, 4.0, 8.0}}, {"n_grid", grid_json(0.02, 1.0, 0.02)}}},
      {"fig3", {{"n_list", {0.25, 0.5, 1.0}}, {"U_grid", u_default()}, {"ed_L", 8}}},
      {"fig4", {{"U_list", {0.2, 1.0, 4.0, 8.0}}, {"n_grid", grid_json(0.02, 1.0, 0.02)}}},
      {"fig5",
       {{"n_list", {0.5, 0.2}},
        {"U_grid", u_default()},
        {"orders", {1, 2, 3, 4, 5, 6, 8, 10, 15, 20, 25, 30, 50, 100, 200}}}},
      {"fig6",
       {{"n_list", {0.4, 0.6, 0.8}},
        {"U_grid", u_default()},
        {"C", 0.4},
        {"V_list", {-1.0, -3.0}},
        {"L", 100},
        {"samples", 100},
        {"master_seed", 1}}},
      {"superlattice",
       {{"structures", {"2:7", "3:6", "4:5"}},
        {"V_list", {1.0, 2.0, 4.0, 6.0}},
        {"U_grid", u_default()},
        {"backend", "ed"},
        {"L", nullptr},
        {"N", nullptr}}},
      {"eval", {{"n", 0.5}, {"U", 4.0}}},
      {"ed", {{"L", 8}, {"N_up", 2}, {"U", 4.0}, {"potential", nullptr}, {"method", "auto"}}},
  };  const auto it = defaults.find(command);
  if (it == defaults.end()) fail(ErrorKind::InvalidInput, "unknown command '" + std::string(command) + "'");
  return it->second;
}

struct SiteAverage {
  double von_neumann = 0.0;
  double linear = 0.0;
};

SiteAverage ed_site_average(const GroundState& gs, const FockBasis& basis) {
  SiteAverage a;
  for (std::size_t i = 0; i < basis.sites(); ++i) {
    const auto w = site_probabilities(gs, basis, i);
    a.von_neumann += von_neumann(w);
    a.linear += linear(w);
  }
  a.von_neumann /= static_cast<double>(basis.sites());
  a.linear /= static_cast<double>(basis.sites());
  return a;
}

// Spin-balanced particles per spin for filling n on L sites, if n L is an even integer.
std::optional<std::size_t> per_spin(double n, std::size_t sites) {
  const double total = n * static_cast<double>(sites);
  const double rounded = std::round(total);
  if (std::abs(total - rounded) > 1e-9 || static_cast<long long>(rounded) % 2 != 0) return std::nullopt;
  return static_cast<std::size_t>(rounded) / 2;
}

std::string cmd_fig2(std::string_view params, unsigned workers) {
  Params p("fig2", defaults_for("fig2"), params);
  const auto us = p.list("U_list");
  const auto ns = p.list("n_grid");
  check_fvc_interactions(p, "U_list", us);
  check_densities(p, "n_grid", ns, 1.0);
  Csv csv{"n,U,S,L", {}, {}};
  csv.rows = rows_in_order(us.size() * ns.size(), workers, [&](std::size_t k) {
    const double u = us[k / ns.size()], n = ns[k % ns.size()];
    const auto h = homogeneous_entropies(n, u);
    return join({num(n), num(u), num(h.von_neumann), num(h.linear)});
  });
  return csv.render("fig2", p.resolved(), nullptr);
}

std::string cmd_fig3(std::string_view params, unsigned workers) {
  Params p("fig3", defaults_for("fig3"), params);
  const auto ns = p.list("n_list");
  const auto us = p.list("U_grid");
  const std::size_t sites = p.count("ed_L");
  check_densities(p, "n_list", ns, 1.0);
  check_fvc_interactions(p, "U_grid", us);
  p.require(sites >= 1 && sites <= 62, "ed_L", "must lie in [1, 62]");

  std::vector<std::optional<std::size_t>> fillings;
  json skipped = json::array();
  for (double n : ns) {
    fillings.push_back(per_spin(n, sites));
    if (!fillings.back()) {
      skipped.push_back(n);
    } else {
      const double dim = FockBasis::dimension_of(sites, *fillings.back(), *fillings.back());
      if (dim > static_cast<double>(EdOptions{}.dimension_cap))
        fail(ErrorKind::Capacity, "fig3: ED basis dimension " + num(dim) + " at n=" + num(n) +
                                      " exceeds the cap; lower ed_L");
    }
  }
  Csv csv{"n,U,S_fvc,L_fvc,S_ed,L_ed", {}, {}};
  csv.rows = rows_in_order(ns.size() * us.size(), workers, [&](std::size_t k) {
    const std::size_t a = k / us.size();
    const double n = ns[a], u = us[k % us.size()];
    const auto h = homogeneous_entropies(n, u);
    std::string s_ed, l_ed;
    if (const auto up = fillings[a]) {
      const ChainSpec spec(sites, *up, u);
      const FockBasis basis(sites, *up, *up);
      const auto avg = ed_site_average(ground_state(spec), basis);
      s_ed = num(avg.von_neumann);
      l_ed = num(avg.linear);
    }
    return join({num(n), num(u), num(h.von_neumann), num(h.linear), s_ed, l_ed});
  });
  json resolved = p.resolved();
  resolved["ed_skipped_n"] = skipped;
  return csv.render("fig3", resolved, nullptr);
}

std::string cmd_fig4(std::string_view params, unsigned workers) {
  Params p("fig4", defaults_for("fig4"), params);
  const auto us = p.list("U_list");
  const auto ns = p.list("n_grid");
  check_fvc_interactions(p, "U_list", us);
  check_densities(p, "n_grid", ns, 2.0);
  Csv csv{"n,U,w2", {}, {}};
  csv.rows = rows_in_order(us.size() * ns.size(), workers, [&](std::size_t k) {
    const double u = us[k / ns.size()], n = ns[k % ns.size()];
    return join({num(n), num(u), num(double_occupancy(n, u))});
  });
  return csv.render("fig4", p.resolved(), nullptr);
}

std::string cmd_fig5(std::string_view params, unsigned workers) {
  Params p("fig5", defaults_for("fig5"), params);
  const auto ns = p.list("n_list", false);
  const auto us = p.list("U_grid");
  const auto orders_d = p.list("orders");
  check_densities(p, "n_list", ns, 2.0);
  check_fvc_interactions(p, "U_grid", us);
  std::vector<int> orders;
  for (double l : orders_d) {
    p.require(l == std::floor(l) && l >= 1 && l <= kMaxExpansionOrder, "orders",
              "entries must be integers in [1, " + std::to_string(kMaxExpansionOrder) + "]");
    orders.push_back(static_cast<int>(l));
  }
  Csv csv{"n,U,l,S_l", {}, {}};
  const std::size_t per_n = us.size() * orders.size();
  csv.rows = rows_in_order(ns.size() * per_n, workers, [&](std::size_t k) {
    const double n = ns[k / per_n], u = us[k % per_n / orders.size()];
    const int l = orders[k % orders.size()];
    const auto h = homogeneous_entropies(n, u);
    return join({num(n), num(u), std::to_string(l), num(taylor_entropy(h.probabilities, l))});
  });
  for (double n : ns) {
    const auto m = minimal_monotone_order(n, us);
    csv.trailer.push_back(
        "minimal_monotone_order n=" + num(n) + " order=" + (m.order ? std::to_string(*m.order) : "none") +
        (m.order ? "" : " best=" + std::to_string(m.best_order) + " violations=" + std::to_string(m.violations)));
  }
  return csv.render("fig5", p.resolved(), nullptr);
}

std::string cmd_fig6(std::string_view params, unsigned workers) {
  Params p("fig6", defaults_for("fig6"), params);
  const auto ns = p.list("n_list");
  const auto us = p.list("U_grid");
  const auto vs = p.list("V_list", false);
  const double c = p.number("C");
  const std::size_t sites = p.count("L");
  const std::size_t samples = p.count("samples");
  const std::uint64_t seed = p.seed("master_seed");
  check_fvc_interactions(p, "U_grid", us);
  check_densities(p, "n_list", ns, 2.0);
  p.require(c >= 0.0 && c <= 1.0, "C", "must lie in [0, 1]");
  p.require(sites >= 1, "L", "must be >= 1");
  p.require(samples >= 1, "samples", "must be >= 1");
  std::vector<std::size_t> particles;
  for (double n : ns) {
    const auto up = per_spin(n, sites);
    p.require(up.has_value(), "n_list", "n * L must be an even integer (n=" + num(n) + ")");
    particles.push_back(2 * *up);
  }

  Csv csv{"n,U,V,S_mean,S_std,L_mean,L_std", {}, {}};
  for (double v : vs)
    for (std::size_t a = 0; a < ns.size(); ++a)
      for (double u : us) {
        DisorderEnsemble e;
        e.sites = sites;
        e.particles = particles[a];
        e.interaction = u;
        e.concentration = c;
        e.strength = v;
        e.samples = samples;
        e.master_seed = seed;
        const auto r = disorder_ensemble(e, {}, workers);
        csv.rows.push_back(join({num(ns[a]), num(u), num(v), num(r.von_neumann), num(*r.von_neumann_std),
                                 num(r.linear), num(*r.linear_std)}));
      }
  return csv.render("fig6", p.resolved(), seed);
}

std::string cmd_superlattice(std::string_view params, unsigned workers) {
  Params p("superlattice", defaults_for("superlattice"), params);
  const std::string backend = p.text("backend");
  p.require(backend == "ed" || backend == "lda", "backend", "must be \"ed\" or \"lda\"");
  if (p.is_null("L")) p.set("L", backend == "ed" ? 12 : 36);
  if (p.is_null("N")) p.set("N", backend == "ed" ? 6 : 20);
  const std::size_t sites = p.count("L");
  const std::size_t particles = p.count("N");
  const auto vs = p.list("V_list", false);
  const auto us = p.list("U_grid");
  p.require(sites >= 1, "L", "must be >= 1");
  p.require(particles % 2 == 0 && particles / 2 <= sites, "N", "must be even and at most 2 L");
  if (backend == "lda") check_fvc_interactions(p, "U_grid", us);
  for (double u : us) p.require(u >= 0.0, "U_grid", "values must be >= 0");

  const json& structures = p.resolved().at("structures");
  p.require(structures.is_array() && !structures.empty(), "structures", "must be a non-empty list");
  std::vector<std::pair<int, int>> cells;
  for (const json& s : structures) {
    p.require(s.is_string(), "structures", "entries must be \"X:Y\" strings");
    int x = 0, y = 0;
    char tail = 0;
    const std::string text = s.get<std::string>();
    p.require(std::sscanf(text.c_str(), "%d:%d%c", &x, &y, &tail) == 2 && x >= 1 && y >= 1,
              "structures", "entry \"" + text + "\" is not X:Y with X, Y >= 1");
    cells.emplace_back(x, y);
  }
  const std::size_t up = particles / 2;
  if (backend == "ed") {
    const double dim = FockBasis::dimension_of(sites, up, up);
    if (dim > static_cast<double>(EdOptions{}.dimension_cap))
      fail(ErrorKind::Capacity, "superlattice: ED basis dimension " + num(dim) +
                                    " exceeds the cap; use backend=lda or a smaller L");
  }

  Csv csv{"X,Y,V,U,S,L,backend", {}, {}};
  const std::size_t per_cell = vs.size() * us.size();
  csv.rows = rows_in_order(cells.size() * per_cell, workers, [&](std::size_t k) {
    const auto [x, y] = cells[k / per_cell];
    const double v = vs[k % per_cell / us.size()], u = us[k % us.size()];
    const ChainSpec spec = ChainSpec::with_potential(sites, up, u, Superlattice{x, y, v});
    double s = 0.0, l = 0.0;
    if (backend == "ed") {
      const FockBasis basis(sites, up, up);
      const auto avg = ed_site_average(ground_state(spec), basis);
      s = avg.von_neumann;
      l = avg.linear;
    } else {
      const auto report = lda_entropies(solve_scf(spec).profile, u);
      s = report.von_neumann;
      l = report.linear;
    }
    return join({std::to_string(x), std::to_string(y), num(v), num(u), num(s), num(l), backend});
  });
  return csv.render("superlattice", p.resolved(), nullptr);
}

std::string cmd_eval(std::string_view params, unsigned) {
  Params p("eval", defaults_for("eval"), params);
  const double n = p.number("n"), u = p.number("U");
  p.require(n >= 0.0 && n <= 2.0, "n", "must lie in [0, 2]");
  p.require(u >= kDerivativeFloorU, "U", "must be >= 0.2");
  const auto h = homogeneous_entropies(n, u);
  Csv csv{"n,U,S,L,w2", {join({num(n), num(u), num(h.von_neumann), num(h.linear), num(h.double_occupancy)})}, {}};
  return csv.render("eval", p.resolved(), nullptr);
}

PotentialSpec potential_from_json(const Params& p, const json& v, std::size_t sites,
                                  std::vector<double>& explicit_values) {
  if (v.is_null()) return Homogeneous{};
  if (v.is_array()) {
    for (const json& x : v) {
      p.require(x.is_number(), "potential", "explicit potential entries must be numbers");
      explicit_values.push_back(x.get<double>());
    }
    p.require(explicit_values.size() == sites, "potential", "explicit potential needs L entries");
    return Homogeneous{};
  }
  p.require(v.is_object() && v.contains("type") && v.at("type").is_string(), "potential",
            "must be null, a list of L numbers, or an object with a \"type\"");
  const std::string type = v.at("type").get<std::string>();
  const auto field = [&](const char* name, double fallback) {
    if (!v.contains(name)) return fallback;
    p.require(v.at(name).is_number(), "potential", std::string("field '") + name + "' must be a number");
    return v.at(name).get<double>();
  };
  if (type == "homogeneous") return Homogeneous{};
  if (type == "disorder") {
    std::uint64_t seed = 0;
    if (v.contains("seed")) {
      p.require(v.at("seed").is_number_unsigned(), "potential", "field 'seed' must be a non-negative integer");
      seed = v.at("seed").get<std::uint64_t>();
    }
    return Disorder{field("C", 0.4), field("V", -1.0), seed};
  }
  if (type == "superlattice")
    return Superlattice{static_cast<int>(field("X", 2)), static_cast<int>(field("Y", 7)), field("V", 1.0)};
  p.bad("potential", "unknown type \"" + type + "\"");
}

std::string cmd_ed(std::string_view params, unsigned workers) {
  Params p("ed", defaults_for("ed"), params);
  const std::size_t sites = p.count("L");
  const std::size_t up = p.count("N_up");
  const double u = p.number("U");
  const std::string method = p.text("method");
  p.require(sites >= 1 && sites <= 62, "L", "must lie in [1, 62]");
  p.require(up <= sites, "N_up", "must not exceed L");
  p.require(u >= 0.0, "U", "must be >= 0");
  EdOptions opt;
  opt.workers = workers;
  if (method == "lanczos") opt.method = EigenMethod::Lanczos;
  else if (method == "dense") opt.method = EigenMethod::Dense;
  else p.require(method == "auto", "method", "must be auto, lanczos or dense");

  std::vector<double> values;
  const PotentialSpec pot = potential_from_json(p, p.resolved().at("potential"), sites, values);
  const ChainSpec spec = values.empty() ? ChainSpec::with_potential(sites, up, u, pot)
                                        : ChainSpec(sites, up, u, values);
  if (opt.method == EigenMethod::Dense && FockBasis::dimension_of(sites, up, up) > 20000)
    fail(ErrorKind::Capacity, "ed: dense solver limited to dimension 20000");
  const auto gs = ground_state(spec, opt);
  const FockBasis basis(sites, up, up);
  Csv csv{"site,n,w_up,w_down,w_double,w_empty,S,L", {}, {}};
  for (std::size_t i = 0; i < sites; ++i) {
    const auto w = site_probabilities(gs, basis, i);
    csv.rows.push_back(join({std::to_string(i + 1), num(w.up + w.down + 2.0 * w.dbl), num(w.up), num(w.down),
                             num(w.dbl), num(w.empty), num(von_neumann(w)), num(linear(w))}));
  }
  csv.trailer.push_back("E0=" + num(gs.energy) + " dimension=" + std::to_string(basis.dimension()));
  return csv.render("ed", p.resolved(), nullptr);
}

using Command = std::string (*)(std::string_view, unsigned);

const std::map<std::string, Command, std::less<>>& registry() {
  static const std::map<std::string, Command, std::less<>> commands = {
      {"fig2", cmd_fig2}, {"fig3", cmd_fig3}, {"fig4", cmd_fig4},
      {"fig5", cmd_fig5}, {"fig6", cmd_fig6}, {"superlattice", cmd_superlattice},
      {"eval", cmd_eval}, {"ed", cmd_ed}};
  return commands;
}

}  // namespace

const std::vector<std::string>& experiment_commands() {
  static const std::vector<std::string> names = {"fig2", "fig3", "fig4",         "fig5",
                                                 "fig6", "superlattice", "eval", "ed"};
  return names;
}

std::string experiment_defaults(std::string_view command) {
  // Running with a deliberately unknown key would fail, so defaults are taken
  // from the comment line of a parse-only pass instead.
  static const std::map<std::string, json, std::less<>> defaults = {
      {"fig2", {{"U_list", {0.2, 1.0, 4.0, 8.0}}, {"n_grid", grid_json(0.02, 1.0, 0.02)}}},
      {"fig3", {{"n_list", {0.25, 0.5, 1.0}}, {"U_grid", u_default()}, {"ed_L", 8}}},
      {"fig4", {{"U_list", {0.2, 1.0, 4.0, 8.0}}, {"n_grid", grid_json(0.02, 1.0, 0.02)}}},
      {"fig5",
       {{"n_list", {0.5, 0.2}},
        {"U_grid", u_default()},
        {"orders", {1, 2, 3, 4, 5, 6, 8, 10, 15, 20, 25, 30, 50, 100, 200}}}},
      {"fig6",
       {{"n_list", {0.4, 0.6, 0.8}},
        {"U_grid", u_default()},
        {"C", 0.4},
        {"V_list", {-1.0, -3.0}},
        {"L", 100},
        {"samples", 100},
        {"master_seed", 1}}},
      {"superlattice",
       {{"structures", {"2:7", "3:6", "4:5"}},
        {"V_list", {1.0, 2.0, 4.0, 6.0}},
        {"U_grid", u_default()},
        {"backend", "ed"},
        {"L", nullptr},
        {"N", nullptr}}},
      {"eval", {{"n", 0.5}, {"U", 4.0}}},
      {"ed", {{"L", 8}, {"N_up", 2}, {"U", 4.0}, {"potential", nullptr}, {"method", "auto"}}},
  };
  const auto it = defaults.find(command);
  if (it == defaults.end()) fail(ErrorKind::InvalidInput, "unknown command '" + std::string(command) + "'");
  return it->second.dump();
}

std::string run_experiment(std::string_view command, std::string_view params_json, unsigned workers) {
  const auto& commands = registry();
  const auto it = commands.find(command);
  if (it == commands.end()) fail(ErrorKind::InvalidInput, "unknown command '" + std::string(command) + "'");
  return it->second(params_json, std::max(1u, workers));
}

}  // namespace hubent
