#include "ostrovsky/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ostrovsky/data.hpp"
#include "ostrovsky/quadrature.hpp"

namespace ostrovsky {

namespace {

using Spec = std::vector<cplx>;

void truncate(const GridSpec& grid, Spec& c) {
  const int n = grid.size();
  for (int k = 0; k < n; ++k) {
    const int signed_k = k <= n / 2 ? k : k - n;
    if (std::abs(signed_k) > n / 3) c[k] = 0.0;
  }
}

// Spectral coefficients of 1/2 d/dx (u^2).
Spec nonlinear_hat(const GridSpec& grid, Spec u, bool dealias) {
  if (dealias) truncate(grid, u);
  const auto phys = inverse_transform(grid, u);
  std::vector<double> sq(phys.size());
  for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = 0.5 * phys[j].real() * phys[j].real();
  auto out = forward_transform(grid, std::span<const double>(sq));
  const auto xi = grid.frequencies();
  const int nyq = grid.nyquist_index();
  out[0] = 0.0;
  out[nyq] = 0.0;  // Re(i xi_N) = 0
  for (int k = 1; k < grid.size(); ++k) {
    if (k != nyq) out[k] *= cplx(0.0, xi[k]);
  }
  if (dealias) truncate(grid, out);
  return out;
}

std::vector<double> phases(const GridSpec& grid, Sign sign) {
  const auto xi = grid.frequencies();
  std::vector<double> phi(grid.size(), 0.0);
  for (int k = 1; k < grid.size(); ++k) {
    if (k != grid.nyquist_index()) phi[k] = linear_phase(xi[k], 1.0, sign);
  }
  return phi;
}

Spec initial_coefficients(const SpectralField& u0, const PicardConfig& cfg) {
  if (!u0.is_mean_zero()) throw PreconditionError("solver: initial datum must be mean-zero");
  Spec c(u0.spectral().begin(), u0.spectral().end());
  c[0] = 0.0;
  c[u0.grid().nyquist_index()] = 0.0;
  if (cfg.dealias) truncate(u0.grid(), c);
  return c;
}

Trajectory to_trajectory(const GridPtr& grid, const PicardConfig& cfg, const std::vector<Spec>& coeffs) {
  std::vector<SpectralField> states;
  states.reserve(coeffs.size());
  for (const auto& c : coeffs) states.push_back(SpectralField::from_spectral(grid, c));
  return make_trajectory(grid, cfg.sign, cfg.dt, std::move(states));
}

double spectral_distance(const GridPtr& grid, const std::vector<Spec>& a, const std::vector<Spec>& b, double dt,
                         double s) {
  std::vector<SpectralField> diff;
  diff.reserve(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) {
    Spec d(a[m].size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = a[m][k] - b[m][k];
    diff.push_back(SpectralField::from_spectral(grid, std::move(d)));
  }
  return solution_seminorms(diff, dt, s).total();
}

// exp(i phi_k t_m) for every level.
std::vector<Spec> phase_table(const std::vector<double>& phi, int steps, double dt) {
  std::vector<Spec> table(steps + 1, Spec(phi.size()));
  for (int m = 0; m <= steps; ++m) {
    const double t = m * dt;
    for (std::size_t k = 0; k < phi.size(); ++k) table[m][k] = std::polar(1.0, phi[k] * t);
  }
  return table;
}

// One Duhamel sweep in spectral variables.
std::vector<Spec> psi_sweep(const GridSpec& grid, const std::vector<Spec>& v, const Spec& u0,
                            const std::vector<Spec>& e, const PicardConfig& cfg) {
  const std::size_t levels = v.size();
  const std::size_t n = u0.size();
  std::vector<Spec> out(levels, Spec(n));
  if (!cfg.nonlinear) {
    for (std::size_t m = 0; m < levels; ++m) {
      for (std::size_t k = 0; k < n; ++k) out[m][k] = e[m][k] * u0[k];
    }
    return out;
  }
  std::vector<Spec> g(levels);
  for (std::size_t m = 0; m < levels; ++m) {
    g[m] = nonlinear_hat(grid, v[m], cfg.dealias);
    for (std::size_t k = 0; k < n; ++k) g[m][k] *= std::conj(e[m][k]);
  }
  const auto c = cumulative_integrals(g, cfg.dt);
  for (std::size_t m = 0; m < levels; ++m) {
    for (std::size_t k = 0; k < n; ++k) out[m][k] = e[m][k] * (u0[k] - c[m][k]);
  }
  return out;
}

}  // namespace

int PicardConfig::steps() const {
  if (!(T > 0.0) || !(dt > 0.0)) throw InvalidArgument("PicardConfig: T and dt must be positive");
  const double ratio = T / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("PicardConfig: T/dt must be an integer");
  }
  if (rounded < 4) throw InvalidArgument("PicardConfig: T/dt must be at least 4");
  return static_cast<int>(rounded);
}

void PicardConfig::validate() const {
  steps();
  if (!(tol > 0.0)) throw InvalidArgument("PicardConfig: tol must be positive");
  if (max_iter < 1) throw InvalidArgument("PicardConfig: max_iter must be >= 1");
  if (!(s > 0.75 && s <= 1.0)) throw InvalidArgument("PicardConfig: s must lie in (3/4, 1]");
  if (!(Cs > 0.0)) throw InvalidArgument("PicardConfig: Cs must be positive");
}

double PicardDiagnostics::max_ratio() const {
  double m = 0.0;
  for (double r : contraction_ratios) m = std::max(m, r);
  return m;
}

SpectralField nonlinearity(const SpectralField& u, bool dealias) {
  if (!u.is_mean_zero()) throw PreconditionError("nonlinearity: input must be mean-zero");
  Spec c(u.spectral().begin(), u.spectral().end());
  return SpectralField::from_spectral(u.grid_ptr(), nonlinear_hat(u.grid(), std::move(c), dealias));
}

Trajectory psi_apply(const Trajectory& v, const SpectralField& u0, const PicardConfig& cfg) {
  cfg.validate();
  validate_trajectory(v);
  const int steps = cfg.steps();
  if (static_cast<int>(v.size()) != steps + 1 || std::abs(v.dt - cfg.dt) > 1e-12 * cfg.dt) {
    throw PreconditionError("psi_apply: trajectory does not match the configured time grid");
  }
  if (!v.grid->same_as(u0.grid())) throw PreconditionError("psi_apply: datum and trajectory grids differ");
  const auto& grid = u0.grid();
  std::vector<Spec> coeffs;
  coeffs.reserve(v.size());
  for (const auto& st : v.states) coeffs.emplace_back(st.spectral().begin(), st.spectral().end());
  const auto e = phase_table(phases(grid, cfg.sign), steps, cfg.dt);
  return to_trajectory(u0.grid_ptr(), cfg, psi_sweep(grid, coeffs, initial_coefficients(u0, cfg), e, cfg));
}

double ball_radius(const SpectralField& u0, double s, double Cs, double T) {
  return 2.0 * Cs * ((1.0 + std::pow(T, 1.0 / 3.0 + s / 3.0)) * xs_norm(u0, s) + weighted_norm(u0, 0.5 * s));
}

PicardResult picard_solve(const SpectralField& u0, const PicardConfig& cfg) {
  cfg.validate();
  const int steps = cfg.steps();
  const auto& grid = u0.grid();
  const auto u0c = initial_coefficients(u0, cfg);
  const auto e = phase_table(phases(grid, cfg.sign), steps, cfg.dt);

  PicardDiagnostics diag;
  diag.u0_xs_norm = xs_norm(u0, cfg.s);
  diag.u0_weighted_norm = weighted_norm(u0, 0.5 * cfg.s);
  diag.ball_radius = ball_radius(u0, cfg.s, cfg.Cs, cfg.T);

  std::vector<Spec> v(steps + 1, Spec(u0c.size()));
  for (int m = 0; m <= steps; ++m) {
    for (std::size_t k = 0; k < u0c.size(); ++k) v[m][k] = e[m][k] * u0c[k];
  }

  int growing = 0;
  while (true) {
    auto next = psi_sweep(grid, v, u0c, e, cfg);
    const double d = spectral_distance(u0.grid_ptr(), next, v, cfg.dt, cfg.s);
    ++diag.iterates;
    if (!diag.successive_distances.empty()) {
      const double prev = diag.successive_distances.back();
      const double ratio = prev > 0.0 ? d / prev : 0.0;
      diag.contraction_ratios.push_back(ratio);
      growing = ratio >= 1.0 ? growing + 1 : 0;
    }
    diag.successive_distances.push_back(d);
    v = std::move(next);
    if (!std::isfinite(d)) {
      throw ConvergenceError("picard_solve: iterates left the finite range", diag);
    }
    if (d < cfg.tol) break;
    if (growing >= 3) {
      std::ostringstream os;
      os << "picard_solve: contraction ratio >= 1 for three consecutive iterates at T = " << cfg.T
         << "; T is too large for this datum";
      throw ConvergenceError(os.str(), diag);
    }
    if (diag.iterates >= cfg.max_iter) {
      std::ostringstream os;
      os << "picard_solve: no convergence within " << cfg.max_iter << " iterates (last distance " << d << ")";
      throw ConvergenceError(os.str(), diag);
    }
  }
  const auto check = psi_sweep(grid, v, u0c, e, cfg);
  diag.final_residual = spectral_distance(u0.grid_ptr(), check, v, cfg.dt, cfg.s);
  diag.converged = true;
  return {to_trajectory(u0.grid_ptr(), cfg, v), std::move(diag)};
}

namespace {

struct EtdCoefficients {
  Spec e, e2, q, f1, f2, f3;
};

EtdCoefficients etd_coefficients(const std::vector<double>& phi, double h) {
  constexpr int contour_points = 32;
  const std::size_t n = phi.size();
  EtdCoefficients c{Spec(n), Spec(n), Spec(n), Spec(n), Spec(n), Spec(n)};
  for (std::size_t k = 0; k < n; ++k) {
    const cplx z(0.0, h * phi[k]);
    c.e[k] = std::exp(z);
    c.e2[k] = std::exp(0.5 * z);
    if (std::abs(z) >= 1.0) {
      const cplx z3 = z * z * z;
      c.q[k] = h * (std::exp(0.5 * z) - 1.0) / z;
      c.f1[k] = h * (-4.0 - z + std::exp(z) * (4.0 - 3.0 * z + z * z)) / z3;
      c.f2[k] = h * (2.0 + z + std::exp(z) * (z - 2.0)) / z3;
      c.f3[k] = h * (-4.0 - 3.0 * z - z * z + std::exp(z) * (4.0 - z)) / z3;
      continue;
    }
    // Contour mean on the unit circle around z avoids the cancellation.
    cplx q = 0.0, f1 = 0.0, f2 = 0.0, f3 = 0.0;
    for (int j = 0; j < contour_points; ++j) {
      const double theta = std::numbers::pi * (j + 0.5) / contour_points * 2.0;
      const cplx r = z + std::polar(1.0, theta);
      const cplx r3 = r * r * r;
      const cplx er = std::exp(r);
      q += (std::exp(0.5 * r) - 1.0) / r;
      f1 += (-4.0 - r + er * (4.0 - 3.0 * r + r * r)) / r3;
      f2 += (2.0 + r + er * (r - 2.0)) / r3;
      f3 += (-4.0 - 3.0 * r - r * r + er * (4.0 - r)) / r3;
    }
    c.q[k] = h * q / double(contour_points);
    c.f1[k] = h * f1 / double(contour_points);
    c.f2[k] = h * f2 / double(contour_points);
    c.f3[k] = h * f3 / double(contour_points);
  }
  return c;
}

double coefficient_norm(const Spec& c, double dxi) {
  double sum = 0.0;
  for (const auto& v : c) sum += std::norm(v);
  return std::sqrt(sum * dxi);
}

}  // namespace

Trajectory reference_solve(const SpectralField& u0, const PicardConfig& cfg) {
  cfg.validate();
  const int steps = cfg.steps();
  const auto& grid = u0.grid();
  const auto phi = phases(grid, cfg.sign);
  const auto c = etd_coefficients(phi, cfg.dt);
  const std::size_t n = phi.size();

  auto rhs = [&](const Spec& v) {
    if (!cfg.nonlinear) return Spec(n, 0.0);
    auto out = nonlinear_hat(grid, v, cfg.dealias);
    for (auto& a : out) a = -a;
    return out;
  };

  std::vector<Spec> levels;
  levels.reserve(steps + 1);
  Spec v = initial_coefficients(u0, cfg);
  const double norm0 = coefficient_norm(v, grid.dxi());
  levels.push_back(v);
  Spec a(n), b(n), cc(n);
  for (int m = 1; m <= steps; ++m) {
    const auto nv = rhs(v);
    for (std::size_t k = 0; k < n; ++k) a[k] = c.e2[k] * v[k] + c.q[k] * nv[k];
    const auto na = rhs(a);
    for (std::size_t k = 0; k < n; ++k) b[k] = c.e2[k] * v[k] + c.q[k] * na[k];
    const auto nb = rhs(b);
    for (std::size_t k = 0; k < n; ++k) cc[k] = c.e2[k] * a[k] + c.q[k] * (2.0 * nb[k] - nv[k]);
    const auto nc = rhs(cc);
    for (std::size_t k = 0; k < n; ++k) {
      v[k] = c.e[k] * v[k] + nv[k] * c.f1[k] + 2.0 * (na[k] + nb[k]) * c.f2[k] + nc[k] * c.f3[k];
    }
    const double norm = coefficient_norm(v, grid.dxi());
    if (!std::isfinite(norm) || (norm0 > 0.0 && norm > 10.0 * norm0)) {
      std::ostringstream os;
      os << "reference_solve: norm explosion at t = " << m * cfg.dt << " (" << norm << " vs initial " << norm0
         << "); reduce dt";
      throw ConvergenceError(os.str(), PicardDiagnostics{});
    }
    levels.push_back(v);
  }
  return to_trajectory(u0.grid_ptr(), cfg, levels);
}

double xt_distance(const Trajectory& a, const Trajectory& b, double s) {
  validate_trajectory(a);
  validate_trajectory(b);
  if (a.size() != b.size() || !a.grid->same_as(*b.grid) || a.dt != b.dt) {
    throw PreconditionError("xt_distance: trajectories have different shapes");
  }
  std::vector<SpectralField> diff;
  diff.reserve(a.size());
  for (std::size_t m = 0; m < a.size(); ++m) diff.push_back(a.states[m] - b.states[m]);
  return solution_seminorms(diff, a.dt, s).total();
}

namespace {

double smallness(double T, double s, double Cs, double a) {
  return Cs * std::sqrt(T) * (1.0 + std::pow(T, 1.0 / 3.0 + s / 3.0)) * (1.0 + std::pow(T, 0.25) + std::sqrt(T)) *
         a;
}

template <class A>
double largest_admissible(double s, double Cs, double window, A&& a_of_T) {
  if (!(Cs > 0.0)) throw InvalidArgument("existence_time: Cs must be positive");
  if (!(window > 0.0)) throw InvalidArgument("existence_time: window must be positive");
  if (!(s > 0.75 && s <= 1.0)) throw InvalidArgument("existence_time: s must lie in (3/4, 1]");
  if (smallness(window, s, Cs, a_of_T(window)) < 0.5) return window;
  double lo = 0.0, hi = window;
  for (int i = 0; i < 400 && hi - lo > 1e-10 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (smallness(mid, s, Cs, a_of_T(mid)) < 0.5) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

double existence_time(const SpectralField& u0, double s, double Cs, double window) {
  const double xs = xs_norm(u0, s);
  const double w = weighted_norm(u0, 0.5 * s);
  return largest_admissible(s, Cs, window, [&](double T) {
    return 2.0 * Cs * ((1.0 + std::pow(T, 1.0 / 3.0 + s / 3.0)) * xs + w);
  });
}

double existence_time_fixed(double a, double s, double Cs, double window) {
  if (!(a >= 0.0)) throw InvalidArgument("existence_time: a must be nonnegative");
  return largest_admissible(s, Cs, window, [a](double) { return a; });
}

double lipschitz_probe(const SpectralField& u0, double eps, const PicardConfig& cfg, double direction) {
  if (eps == 0.0) return 0.0;
  const auto phi = unit_bump(u0.grid_ptr()) * (direction >= 0.0 ? 1.0 : -1.0);
  const auto perturbation = phi * eps;
  const auto base = picard_solve(u0, cfg);
  const auto moved = picard_solve(u0 + perturbation, cfg);
  const double data = z_norm(perturbation, cfg.s, 0.5 * cfg.s);
  return xt_distance(moved.trajectory, base.trajectory, cfg.s) / data;
}

}  // namespace ostrovsky
