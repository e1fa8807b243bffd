#include "ostrovsky/ostrovsky.h"

#include <exception>
#include <new>
#include <string>

#include "ostrovsky/checkpoint.hpp"
#include "ostrovsky/experiments.hpp"

struct ost_grid {
  ostrovsky::GridPtr grid;
};

struct ost_field {
  ostrovsky::SpectralField field;
};

struct ost_trajectory {
  ostrovsky::Trajectory traj;
};

struct ost_config {
  ostrovsky::ExperimentConfig config;
  std::string kind;
  std::string output_dir;
  mutable std::string message;
};

namespace {

thread_local std::string last_error;

ost_status code_of(ostrovsky::ErrorCode code) {
  using ostrovsky::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return OST_ERR_INVALID_ARGUMENT;
    case ErrorCode::precondition: return OST_ERR_PRECONDITION;
    case ErrorCode::convergence: return OST_ERR_CONVERGENCE;
    case ErrorCode::quadrature: return OST_ERR_QUADRATURE;
    case ErrorCode::config: return OST_ERR_CONFIG;
    case ErrorCode::io: return OST_ERR_IO;
  }
  return OST_ERR_INTERNAL;
}

template <class F>
ost_status guarded(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const ostrovsky::Error& e) {
    last_error = e.what();
    return code_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return OST_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return OST_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return OST_ERR_INTERNAL;
  }
}

ost_status null_argument(const char* what) {
  last_error = std::string(what) + " is NULL";
  return OST_ERR_INVALID_ARGUMENT;
}

ostrovsky::Sign sign_of(int sign) {
  if (sign == 1) return ostrovsky::Sign::plus;
  if (sign == -1) return ostrovsky::Sign::minus;
  throw ostrovsky::InvalidArgument("sign must be +1 or -1");
}

ostrovsky::PicardConfig picard_of(const ost_solver_options& o) {
  ostrovsky::PicardConfig c;
  c.T = o.T;
  c.dt = o.dt;
  c.tol = o.tol;
  c.max_iter = o.max_iter;
  c.dealias = o.dealias != 0;
  c.sign = sign_of(o.sign);
  c.s = o.s;
  return c;
}

}  // namespace

extern "C" {

const char* ost_version(void) { return ostrovsky::library_version(); }

const char* ost_last_error(void) { return last_error.c_str(); }

const char* ost_status_string(ost_status status) {
  switch (status) {
    case OST_OK: return "ok";
    case OST_ERR_INVALID_ARGUMENT: return "invalid argument";
    case OST_ERR_PRECONDITION: return "precondition violated";
    case OST_ERR_CONVERGENCE: return "solver did not converge";
    case OST_ERR_QUADRATURE: return "quadrature did not converge";
    case OST_ERR_CONFIG: return "configuration error";
    case OST_ERR_IO: return "i/o error";
    case OST_INCONCLUSIVE: return "inconclusive";
    case OST_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

ost_status ost_grid_create(int n_points, double half_length, ost_grid** out) {
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new ost_grid{ostrovsky::make_grid(n_points, half_length)};
    return OST_OK;
  });
}

void ost_grid_free(ost_grid* grid) { delete grid; }

int ost_grid_size(const ost_grid* grid) { return grid ? grid->grid->size() : 0; }

ost_status ost_field_from_samples(const ost_grid* grid, const double* values, size_t n, ost_field** out) {
  if (!grid) return null_argument("grid");
  if (!values) return null_argument("values");
  if (!out) return null_argument("out");
  return guarded([&] {
    if (n != static_cast<size_t>(grid->grid->size())) throw ostrovsky::InvalidArgument("sample count differs from grid size");
    *out = new ost_field{ostrovsky::SpectralField::from_physical(grid->grid, std::vector<double>(values, values + n))};
    return OST_OK;
  });
}

ost_status ost_field_datum(const ost_grid* grid, const char* family, double amplitude, double width, uint64_t seed,
                           ost_field** out) {
  if (!grid) return null_argument("grid");
  if (!family) return null_argument("family");
  if (!out) return null_argument("out");
  return guarded([&] {
    ostrovsky::DatumSpec spec;
    spec.family = ostrovsky::parse_datum_family(family);
    spec.amplitude = amplitude;
    spec.width = width;
    spec.seed = seed;
    *out = new ost_field{ostrovsky::make_datum(grid->grid, spec)};
    return OST_OK;
  });
}

void ost_field_free(ost_field* field) { delete field; }

ost_status ost_field_samples(const ost_field* field, double* out, size_t n) {
  if (!field) return null_argument("field");
  if (!out) return null_argument("out");
  return guarded([&] {
    const auto p = field->field.physical();
    if (n != p.size()) throw ostrovsky::InvalidArgument("buffer length differs from grid size");
    std::copy(p.begin(), p.end(), out);
    return OST_OK;
  });
}

ost_status ost_field_l2_norm(const ost_field* field, double* out) {
  if (!field) return null_argument("field");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = field->field.l2_norm();
    return OST_OK;
  });
}

ost_status ost_field_hs_norm(const ost_field* field, double s, double* out) {
  if (!field) return null_argument("field");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = ostrovsky::hs_norm(field->field, s);
    return OST_OK;
  });
}

ost_status ost_field_weighted_norm(const ost_field* field, double r, double* out) {
  if (!field) return null_argument("field");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = ostrovsky::weighted_norm(field->field, r);
    return OST_OK;
  });
}

ost_status ost_apply_group(const ost_field* field, double t, int sign, ost_field** out) {
  if (!field) return null_argument("field");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new ost_field{ostrovsky::apply_group(field->field, t, sign_of(sign))};
    return OST_OK;
  });
}

void ost_solver_options_default(ost_solver_options* options) {
  if (!options) return;
  const ostrovsky::PicardConfig c;
  options->T = c.T;
  options->dt = c.dt;
  options->tol = c.tol;
  options->max_iter = c.max_iter;
  options->dealias = c.dealias ? 1 : 0;
  options->sign = 1;
  options->s = c.s;
}

ost_status ost_picard_solve(const ost_field* u0, const ost_solver_options* options, ost_trajectory** out,
                            int* iterates) {
  if (!u0) return null_argument("u0");
  if (!options) return null_argument("options");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto r = ostrovsky::picard_solve(u0->field, picard_of(*options));
    if (iterates) *iterates = r.diagnostics.iterates;
    *out = new ost_trajectory{std::move(r.trajectory)};
    return OST_OK;
  });
}

ost_status ost_reference_solve(const ost_field* u0, const ost_solver_options* options, ost_trajectory** out) {
  if (!u0) return null_argument("u0");
  if (!options) return null_argument("options");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = new ost_trajectory{ostrovsky::reference_solve(u0->field, picard_of(*options))};
    return OST_OK;
  });
}

void ost_trajectory_free(ost_trajectory* traj) { delete traj; }

size_t ost_trajectory_slices(const ost_trajectory* traj) { return traj ? traj->traj.size() : 0; }

ost_status ost_trajectory_time(const ost_trajectory* traj, size_t index, double* out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  return guarded([&] {
    if (index >= traj->traj.size()) throw ostrovsky::InvalidArgument("slice index out of range");
    *out = traj->traj.times[index];
    return OST_OK;
  });
}

ost_status ost_trajectory_state(const ost_trajectory* traj, size_t index, ost_field** out) {
  if (!traj) return null_argument("traj");
  if (!out) return null_argument("out");
  return guarded([&] {
    if (index >= traj->traj.size()) throw ostrovsky::InvalidArgument("slice index out of range");
    *out = new ost_field{traj->traj.states[index]};
    return OST_OK;
  });
}

ost_status ost_trajectory_distance(const ost_trajectory* a, const ost_trajectory* b, double s, double* out) {
  if (!a || !b) return null_argument("trajectory");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = ostrovsky::xt_distance(a->traj, b->traj, s);
    return OST_OK;
  });
}

ost_status ost_trajectory_save(const ost_trajectory* traj, double s, const char* path) {
  if (!traj) return null_argument("traj");
  if (!path) return null_argument("path");
  return guarded([&] {
    ostrovsky::write_checkpoint(path, traj->traj, s);
    return OST_OK;
  });
}

ost_status ost_trajectory_load(const char* path, ost_trajectory** out, double* s) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto c = ostrovsky::read_checkpoint(path);
    if (s) *s = c.s;
    *out = new ost_trajectory{std::move(c.trajectory)};
    return OST_OK;
  });
}

ost_status ost_existence_time(const ost_field* u0, double s, double Cs, double window, double* out) {
  if (!u0) return null_argument("u0");
  if (!out) return null_argument("out");
  return guarded([&] {
    *out = ostrovsky::existence_time(u0->field, s, Cs, window);
    return OST_OK;
  });
}

ost_status ost_config_load(const char* path, ost_config** out) {
  if (!path) return null_argument("path");
  if (!out) return null_argument("out");
  return guarded([&] {
    auto cfg = ostrovsky::load_config(path);
    auto* c = new ost_config{std::move(cfg), {}, {}, {}};
    c->kind = ostrovsky::to_string(c->config.kind);
    c->output_dir = c->config.output_dir.string();
    *out = c;
    return OST_OK;
  });
}

void ost_config_free(ost_config* config) { delete config; }

const char* ost_config_kind(const ost_config* config) { return config ? config->kind.c_str() : ""; }

const char* ost_config_output_dir(const ost_config* config) { return config ? config->output_dir.c_str() : ""; }

const char* ost_config_run_message(const ost_config* config) { return config ? config->message.c_str() : ""; }

ost_status ost_run(const ost_config* config) {
  if (!config) return null_argument("config");
  config->message.clear();
  return guarded([&] {
    const auto outcome = ostrovsky::run_experiment(config->config);
    config->message = outcome.message;
    switch (outcome.status) {
      case ostrovsky::RunStatus::ok: return OST_OK;
      case ostrovsky::RunStatus::solver_failure: return OST_ERR_CONVERGENCE;
      case ostrovsky::RunStatus::inconclusive: return OST_INCONCLUSIVE;
    }
    return OST_ERR_INTERNAL;
  });
}

}  // extern "C"
