#include "hubent/hubent.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "hubent/chain_model.hpp"
#include "hubent/ed.hpp"
#include "hubent/entropy.hpp"
#include "hubent/errors.hpp"
#include "hubent/experiments.hpp"
#include "hubent/fvc.hpp"
#include "hubent/ks_lda.hpp"
#include "hubent/parallel.hpp"

struct hubent_chain {
  hubent::ChainSpec spec;
};

struct hubent_ground_state {
  hubent::FockBasis basis;
  hubent::GroundState state;
};

namespace {

thread_local std::string last_error;

hubent_status status_of(hubent::ErrorKind kind) {
  using hubent::ErrorKind;
  switch (kind) {
    case ErrorKind::NumericalFailure:
    case ErrorKind::Convergence:
      return HUBENT_ERR_NUMERICAL;
    case ErrorKind::Capacity:
      return HUBENT_ERR_CAPACITY;
    default:
      return HUBENT_ERR_INVALID;
  }
}

template <class F>
hubent_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return HUBENT_OK;
  } catch (const hubent::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return HUBENT_ERR_CAPACITY;
  } catch (const std::exception& e) {
    last_error = e.what();
    return HUBENT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return HUBENT_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) hubent::fail(hubent::ErrorKind::InvalidInput, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

hubent::OccupationProbabilities probabilities(const double w[4]) {
  require(w != nullptr, "null occupation vector");
  return hubent::OccupationProbabilities::checked(w[0], w[1], w[2], w[3]);
}

}  // namespace

extern "C" {

const char* hubent_version(void) { return hubent::kVersion; }

const char* hubent_last_error(void) { return last_error.c_str(); }

hubent_status hubent_chain_create(size_t sites, size_t particles_per_spin, double interaction,
                                  const double* potential, hubent_chain** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    std::vector<double> v;
    if (potential) v.assign(potential, potential + sites);
    *out = new hubent_chain{hubent::ChainSpec(sites, particles_per_spin, interaction, std::move(v))};
  });
}

hubent_status hubent_chain_create_disorder(size_t sites, size_t particles_per_spin, double interaction,
                                           double concentration, double strength, uint64_t seed,
                                           hubent_chain** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new hubent_chain{hubent::ChainSpec::with_potential(
        sites, particles_per_spin, interaction, hubent::Disorder{concentration, strength, seed})};
  });
}

hubent_status hubent_chain_create_superlattice(size_t sites, size_t particles_per_spin, double interaction,
                                               int impurity_sites, int clean_sites, double strength,
                                               hubent_chain** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    *out = new hubent_chain{hubent::ChainSpec::with_potential(
        sites, particles_per_spin, interaction,
        hubent::Superlattice{impurity_sites, clean_sites, strength})};
  });
}

void hubent_chain_destroy(hubent_chain* chain) { delete chain; }

size_t hubent_chain_sites(const hubent_chain* chain) { return chain ? chain->spec.sites() : 0; }

hubent_status hubent_chain_potential(const hubent_chain* chain, double* out, size_t len) {
  return guarded([&] {
    require(chain && out, "null argument");
    require(len == chain->spec.sites(), "buffer length must equal the number of sites");
    const auto v = chain->spec.potential();
    std::copy(v.begin(), v.end(), out);
  });
}

hubent_status hubent_e0(double density, double interaction, double* e0) {
  return guarded([&] {
    require(e0 != nullptr, "null output");
    *e0 = hubent::e0_fvc(density, interaction);
  });
}

hubent_status hubent_solve_b(double interaction, double* b) {
  return guarded([&] {
    require(b != nullptr, "null output");
    *b = hubent::solve_b(interaction);
  });
}

hubent_status hubent_homogeneous(double density, double interaction, double* von_neumann, double* linear,
                                 double* double_occupancy) {
  return guarded([&] {
    const auto h = hubent::homogeneous_entropies(density, interaction);
    if (von_neumann) *von_neumann = h.von_neumann;
    if (linear) *linear = h.linear;
    if (double_occupancy) *double_occupancy = h.double_occupancy;
  });
}

hubent_status hubent_entropies(const double w[4], double* von_neumann, double* linear) {
  return guarded([&] {
    const auto p = probabilities(w);
    if (von_neumann) *von_neumann = hubent::von_neumann(p);
    if (linear) *linear = hubent::linear(p);
  });
}

hubent_status hubent_taylor_entropy(const double w[4], int order, double* value) {
  return guarded([&] {
    require(value != nullptr, "null output");
    *value = hubent::taylor_entropy(probabilities(w), order);
  });
}

hubent_status hubent_ed_solve(const hubent_chain* chain, hubent_ed_method method, hubent_ground_state** out) {
  return guarded([&] {
    require(chain && out, "null argument");
    hubent::EdOptions opt;
    opt.workers = hubent::default_workers();
    switch (method) {
      case HUBENT_ED_AUTO: opt.method = hubent::EigenMethod::Auto; break;
      case HUBENT_ED_LANCZOS: opt.method = hubent::EigenMethod::Lanczos; break;
      case HUBENT_ED_DENSE: opt.method = hubent::EigenMethod::Dense; break;
      default: require(false, "unknown ED method");
    }
    const auto& spec = chain->spec;
    auto gs = hubent::ground_state(spec, opt);
    *out = new hubent_ground_state{hubent::FockBasis(spec.sites(), spec.n_up(), spec.n_down()), std::move(gs)};
  });
}

void hubent_ground_state_destroy(hubent_ground_state* gs) { delete gs; }

double hubent_ground_state_energy(const hubent_ground_state* gs) { return gs ? gs->state.energy : 0.0; }

size_t hubent_ground_state_dimension(const hubent_ground_state* gs) {
  return gs ? gs->basis.dimension() : 0;
}

hubent_status hubent_ground_state_site(const hubent_ground_state* gs, size_t site, double w[4]) {
  return guarded([&] {
    require(gs && w, "null argument");
    const auto p = hubent::site_probabilities(gs->state, gs->basis, site);
    w[0] = p.up;
    w[1] = p.down;
    w[2] = p.dbl;
    w[3] = p.empty;
  });
}

hubent_status hubent_scf_solve(const hubent_chain* chain, double* density, size_t len, int* iterations) {
  return guarded([&] {
    require(chain && density, "null argument");
    require(len == chain->spec.sites(), "buffer length must equal the number of sites");
    const auto r = hubent::solve_scf(chain->spec);
    std::copy(r.profile.density.begin(), r.profile.density.end(), density);
    if (iterations) *iterations = r.iterations;
  });
}

hubent_status hubent_lda_entropies(const double* density, size_t len, double interaction, double* von_neumann,
                                   double* linear) {
  return guarded([&] {
    require(density != nullptr || len == 0, "null density");
    hubent::DensityProfile profile;
    profile.density.assign(density, density + len);
    const auto r = hubent::lda_entropies(profile, interaction);
    if (von_neumann) *von_neumann = r.von_neumann;
    if (linear) *linear = r.linear;
  });
}

hubent_status hubent_run_experiment(const char* command, const char* params_json, char** csv) {
  return guarded([&] {
    require(command && csv, "null argument");
    *csv = nullptr;
    const std::string text =
        hubent::run_experiment(command, params_json ? params_json : "", hubent::default_workers());
    *csv = copy_string(text);
  });
}

hubent_status hubent_experiment_defaults(const char* command, char** json) {
  return guarded([&] {
    require(command && json, "null argument");
    *json = copy_string(hubent::experiment_defaults(command));
  });
}

void hubent_string_free(char* s) { std::free(s); }

}  // extern "C"
