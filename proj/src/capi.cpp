#include "qlcod/qlcod.h"

#include <exception>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "qlcod/classical.hpp"
#include "qlcod/error.hpp"
#include "qlcod/observables.hpp"
#include "qlcod/run.hpp"
#include "qlcod/sde.hpp"
#include "qlcod/wigner.hpp"

struct qlcod_steady_state_s {
  qlcod::SteadyState solution;
  qlcod::DensityMatrix reduced;  // site 1
};

struct qlcod_config_s {
  qlcod::RunConfig config;
  std::string mode;
  std::string canonical;
};

namespace {

thread_local std::string g_last_error;

qlcod_status fail(qlcod_status s, const std::string& message) {
  g_last_error = message;
  return s;
}

template <class F>
qlcod_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return QLCOD_OK;
  } catch (const qlcod::Error& e) {
    return fail(static_cast<qlcod_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(QLCOD_ERR_DIMENSION_LIMIT, "out of memory");
  } catch (const std::exception& e) {
    return fail(QLCOD_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QLCOD_ERR_INTERNAL, "unknown exception");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw qlcod::Error(qlcod::ErrorCode::InvalidArgument, what);
}

qlcod::SystemParams to_params(const qlcod_params* p) {
  require(p != nullptr, "params must not be null");
  return {p->omega, p->k1, p->k2, p->kerr, p->epsilon};
}

qlcod::PhaseGrid to_grid(const qlcod_grid* g) {
  require(g != nullptr, "grid must not be null");
  return {g->x_min, g->x_max, g->y_min, g->y_max, g->n_x, g->n_y};
}

qlcod::ClassicalState to_state(const double* v) {
  require(v != nullptr, "state must not be null");
  return {v[0], v[1], v[2], v[3]};
}

}  // namespace

extern "C" {

const char* qlcod_version(void) { return QLCOD_VERSION; }

const char* qlcod_status_string(qlcod_status status) {
  switch (status) {
    case QLCOD_OK: return "ok";
    case QLCOD_ERR_INTERNAL: return "internal error";
    default:
      if (status >= QLCOD_ERR_INVALID_ARGUMENT && status <= QLCOD_ERR_COMPUTATION)
        return qlcod::to_string(static_cast<qlcod::ErrorCode>(status));
      return "unknown status";
  }
}

const char* qlcod_last_error(void) { return g_last_error.c_str(); }

qlcod_params qlcod_default_params(void) {
  const qlcod::SystemParams p;
  return {p.omega, p.k1, p.k2, p.kerr, p.epsilon};
}

qlcod_grid qlcod_default_grid(const qlcod_params* params) {
  const qlcod::SystemParams p = params ? qlcod::SystemParams{params->omega, params->k1, params->k2, params->kerr,
                                                             params->epsilon}
                                       : qlcod::SystemParams{};
  const qlcod::PhaseGrid g = qlcod::PhaseGrid::for_regime(p.regime());
  return {g.x_min, g.x_max, g.y_min, g.y_max, g.n_x, g.n_y};
}

qlcod_status qlcod_default_sde_config(const qlcod_params* params, qlcod_sde_config* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const auto c = qlcod::SdeConfig::defaults(to_params(params));
    *out = {c.dt, c.n_steps, c.n_trajectories, c.transient_fraction, c.base_seed, c.noise_scale,
            c.scheme == qlcod::SdeScheme::EulerMaruyama ? 1 : 0,
            {c.initial.x1, c.initial.y1, c.initial.x2, c.initial.y2}};
  });
}

qlcod_status qlcod_steady_state_solve(const qlcod_params* params, int n_max, qlcod_steady_state* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = nullptr;
    const auto p = to_params(params);
    p.validate();
    const qlcod::FockSpace space(n_max);
    auto ss = qlcod::steady_state(qlcod::build_liouvillian(p, space));
    auto reduced = qlcod::partial_trace(ss.rho, 1);
    *out = new qlcod_steady_state_s{std::move(ss), std::move(reduced)};
  });
}

void qlcod_steady_state_free(qlcod_steady_state state) { delete state; }

qlcod_status qlcod_steady_state_n_max(qlcod_steady_state state, int* out) {
  return guarded([&] {
    require(state && out, "state and out must not be null");
    *out = state->solution.rho.space().n_max();
  });
}

qlcod_status qlcod_steady_state_residual(qlcod_steady_state state, double* out) {
  return guarded([&] {
    require(state && out, "state and out must not be null");
    *out = state->solution.residual;
  });
}

qlcod_status qlcod_mean_phonon(qlcod_steady_state state, int site, double* out) {
  return guarded([&] {
    require(state && out, "state and out must not be null");
    *out = qlcod::mean_phonon(state->solution.rho, site);
  });
}

qlcod_status qlcod_negativity(qlcod_steady_state state, double* out) {
  return guarded([&] {
    require(state && out, "state and out must not be null");
    *out = qlcod::negativity(state->solution.rho);
  });
}

qlcod_status qlcod_renyi2(qlcod_steady_state state, double* out) {
  return guarded([&] {
    require(state && out, "state and out must not be null");
    *out = qlcod::renyi2(state->reduced);
  });
}

qlcod_status qlcod_fock_distribution(qlcod_steady_state state, int site, double* out, size_t len) {
  return guarded([&] {
    require(state && out, "state and out must not be null");
    const auto d = qlcod::fock_distribution(state->solution.rho, site);
    require(len >= d.probabilities.size(), "output buffer shorter than n_max");
    std::copy(d.probabilities.begin(), d.probabilities.end(), out);
  });
}

qlcod_status qlcod_wigner(qlcod_steady_state state, const qlcod_grid* grid, double* out, size_t len) {
  return guarded([&] {
    require(state && out, "state and out must not be null");
    const auto g = to_grid(grid);
    g.validate();
    require(len >= static_cast<size_t>(g.n_x) * static_cast<size_t>(g.n_y), "output buffer shorter than n_x * n_y");
    const auto f = qlcod::wigner(state->reduced, g);
    for (int i = 0; i < g.n_y; ++i)
      for (int j = 0; j < g.n_x; ++j) out[static_cast<size_t>(i) * g.n_x + j] = f.values(i, j);
  });
}

qlcod_status qlcod_lobe_report_get(qlcod_steady_state state, const qlcod_grid* grid, qlcod_lobe_report* out) {
  return guarded([&] {
    require(state && out, "state and out must not be null");
    const auto r = qlcod::lobe_report(qlcod::wigner(state->reduced, to_grid(grid)));
    out->classification = static_cast<qlcod_lobe_class>(static_cast<int>(r.classification));
    out->delta_y = r.delta_y;
    out->euclidean_distance = r.euclidean_distance;
    out->ring_contrast = r.ring_contrast;
    out->n_maxima = r.maxima.size();
  });
}

qlcod_status qlcod_classical_rhs(const qlcod_params* params, const double state[4], double out[4]) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const auto d = qlcod::rhs(to_state(state), to_params(params));
    out[0] = d.x1;
    out[1] = d.y1;
    out[2] = d.x2;
    out[3] = d.y2;
  });
}

qlcod_status qlcod_pitchfork_epsilon(const qlcod_params* params, double* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = qlcod::pitchfork_epsilon(to_params(params));
  });
}

qlcod_status qlcod_ihss_branch(const qlcod_params* params, double* states, size_t capacity, size_t* count) {
  return guarded([&] {
    require(count != nullptr, "count must not be null");
    require(states != nullptr || capacity == 0, "states must not be null when capacity > 0");
    const auto branch = qlcod::ihss_branch(to_params(params));
    *count = branch.size();
    for (size_t i = 0; i < branch.size() && i < capacity; ++i) {
      states[4 * i] = branch[i].x1;
      states[4 * i + 1] = branch[i].y1;
      states[4 * i + 2] = branch[i].x2;
      states[4 * i + 3] = branch[i].y2;
    }
  });
}

qlcod_status qlcod_classify_attractor(const qlcod_params* params, const double initial[4], qlcod_attractor* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    const auto a = qlcod::classify_attractor(to_params(params), to_state(initial));
    out->kind = static_cast<qlcod_attractor_kind>(static_cast<int>(a.kind));
    out->amplitude = a.amplitude;
    out->mean_r1_sq = a.mean_r1_sq;
    out->state[0] = a.state.x1;
    out->state[1] = a.state.y1;
    out->state[2] = a.state.x2;
    out->state[3] = a.state.y2;
  });
}

qlcod_status qlcod_ensemble_amplitude(const qlcod_params* params, const qlcod_sde_config* config, unsigned threads,
                                      double* mean, double* std_err) {
  return guarded([&] {
    require(config && mean, "config and mean must not be null");
    qlcod::SdeConfig c;
    c.dt = config->dt;
    c.n_steps = config->n_steps;
    c.n_trajectories = config->n_trajectories;
    c.transient_fraction = config->transient_fraction;
    c.base_seed = config->base_seed;
    c.noise_scale = config->noise_scale;
    c.scheme = config->euler_maruyama ? qlcod::SdeScheme::EulerMaruyama : qlcod::SdeScheme::SplitRk4;
    c.initial = to_state(config->initial);
    const auto r = qlcod::ensemble_amplitude(to_params(params), c, threads);
    *mean = r.mean;
    if (std_err) *std_err = r.std_err;
  });
}

qlcod_status qlcod_config_parse(const char* json_text, qlcod_config* out) {
  return guarded([&] {
    require(json_text && out, "json_text and out must not be null");
    *out = nullptr;
    auto cfg = qlcod::parse_config(json_text);
    *out = new qlcod_config_s{std::move(cfg), {}, {}};
    (*out)->mode = qlcod::to_string((*out)->config.mode);
  });
}

qlcod_status qlcod_config_parse_for_mode(const char* json_text, const char* mode, qlcod_config* out) {
  return guarded([&] {
    require(json_text && mode && out, "json_text, mode and out must not be null");
    *out = nullptr;
    const auto m = qlcod::parse_mode(mode);
    if (!m) throw qlcod::Error(qlcod::ErrorCode::Config, std::string("unknown mode \"") + mode + "\"");
    auto cfg = qlcod::parse_config(json_text, *m);
    *out = new qlcod_config_s{std::move(cfg), {}, {}};
    (*out)->mode = qlcod::to_string((*out)->config.mode);
  });
}

void qlcod_config_free(qlcod_config config) { delete config; }

qlcod_status qlcod_config_set_seed(qlcod_config config, uint64_t seed) {
  return guarded([&] {
    require(config != nullptr, "config must not be null");
    config->config.seed = seed;
    config->config.sde.base_seed = seed;
  });
}

qlcod_status qlcod_config_set_threads(qlcod_config config, unsigned threads) {
  return guarded([&] {
    require(config != nullptr, "config must not be null");
    config->config.threads = threads;
  });
}

qlcod_status qlcod_config_set_output(qlcod_config config, const char* path) {
  return guarded([&] {
    require(config && path, "config and path must not be null");
    config->config.output = path;
  });
}

const char* qlcod_config_mode(qlcod_config config) { return config ? config->mode.c_str() : ""; }

const char* qlcod_config_canonical(qlcod_config config) {
  if (!config) return "";
  config->canonical = qlcod::canonical_json(config->config);
  return config->canonical.c_str();
}

qlcod_status qlcod_run(qlcod_config config, qlcod_run_summary* summary) {
  return guarded([&] {
    require(config != nullptr, "config must not be null");
    const auto& c = config->config;
    const qlcod::RunSummary s = c.output.empty() || c.output == "-" ? qlcod::run(c, std::cout) : qlcod::run(c);
    if (summary) *summary = {s.points, s.failed};
    if (s.total_failure())
      throw qlcod::Error(qlcod::ErrorCode::Computation,
                         "all " + std::to_string(s.points) + " points failed; see the errors column");
  });
}

}  // extern "C"
