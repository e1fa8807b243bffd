#include "ostrovsky/norms.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ostrovsky/csv.hpp"
#include "ostrovsky/error.hpp"
#include "ostrovsky/quadrature.hpp"

namespace ostrovsky {

double hs_norm(const SpectralField& field, double s) {
  if (!(s >= 0.0 && s <= 1.0)) throw InvalidArgument("hs_norm: s must lie in [0, 1]");
  const auto xi = field.grid().frequencies();
  const auto c = field.spectral();
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) sum += std::pow(1.0 + xi[k] * xi[k], s) * std::norm(c[k]);
  return std::sqrt(sum * field.grid().dxi());
}

double hom_norm(const SpectralField& field, double b) {
  if (!(b >= -1.0 && b <= 1.0)) throw InvalidArgument("hom_norm: b must lie in [-1, 1]");
  if (b < 0.0 && !field.is_mean_zero()) throw PreconditionError("hom_norm: negative order requires mean-zero input");
  const auto xi = field.grid().frequencies();
  const auto c = field.spectral();
  double sum = 0.0;
  for (std::size_t k = 1; k < c.size(); ++k) sum += std::pow(std::abs(xi[k]), 2.0 * b) * std::norm(c[k]);
  return std::sqrt(sum * field.grid().dxi());
}

double weighted_norm(const SpectralField& field, double r) {
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidArgument("weighted_norm: r must lie in [0, 1]");
  const auto x = field.grid().points();
  const auto u = field.physical();
  double sum = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double w = r == 0.0 ? 1.0 : std::pow(std::abs(x[j]), 2.0 * r);
    sum += w * u[j] * u[j];
  }
  return std::sqrt(sum * field.grid().dx());
}

double xs_norm(const SpectralField& field, double s) { return hs_norm(field, s) + hom_norm(field, -1.0); }

double z_norm(const SpectralField& field, double s, double r) {
  return hs_norm(field, s) + hom_norm(field, -s) + weighted_norm(field, r);
}

Trajectory make_trajectory(GridPtr grid, Sign sign, double dt, std::vector<SpectralField> states) {
  Trajectory traj;
  traj.grid = std::move(grid);
  traj.sign = sign;
  traj.dt = dt;
  traj.times.resize(states.size());
  for (std::size_t m = 0; m < states.size(); ++m) traj.times[m] = static_cast<double>(m) * dt;
  traj.states = std::move(states);
  validate_trajectory(traj);
  return traj;
}

void validate_trajectory(const Trajectory& traj) {
  if (!traj.grid) throw PreconditionError("trajectory has no grid");
  if (traj.states.empty() || traj.states.size() != traj.times.size()) {
    throw PreconditionError("trajectory: states and times must be non-empty and of equal length");
  }
  if (!(traj.dt > 0.0)) throw PreconditionError("trajectory: dt must be positive");
  for (std::size_t m = 0; m < traj.states.size(); ++m) {
    if (!traj.states[m].grid().same_as(*traj.grid)) throw PreconditionError("trajectory: states on mixed grids");
    if (!traj.states[m].is_mean_zero()) throw PreconditionError("trajectory: every state must be mean-zero");
    const double expected = static_cast<double>(m) * traj.dt;
    if (std::abs(traj.times[m] - expected) > 1e-9 * std::max(1.0, expected)) {
      throw PreconditionError("trajectory: time grid is not uniform");
    }
  }
}

Seminorms solution_seminorms(std::span<const SpectralField> states, double dt, double s) {
  if (states.size() < 4) throw PreconditionError("solution_seminorms: need at least four time samples");
  if (!(s > 0.0 && s <= 1.0)) throw InvalidArgument("solution_seminorms: s must lie in (0, 1]");
  const int intervals = static_cast<int>(states.size()) - 1;
  const auto w = composite_time_weights(intervals, dt);
  const std::size_t n = states[0].physical().size();
  const double dx = states[0].grid().dx();

  Seminorms out;
  double l4 = 0.0;
  std::vector<double> l2_in_time(n, 0.0);
  std::vector<double> sup_in_time(n, 0.0);
  for (std::size_t m = 0; m < states.size(); ++m) {
    const auto& v = states[m];
    out.n[0] = std::max(out.n[0], hs_norm(v, s));
    out.n[1] = std::max(out.n[1], hom_norm(v, -1.0));
    const auto vx = spatial_derivative(v, 1);
    const double vx_max = vx.max_abs();
    l4 += w[m] * vx_max * vx_max * vx_max * vx_max;
    const auto dsvx = s == 1.0 ? spatial_derivative(v, 2) : fractional_derivative(vx, s);
    const auto p = dsvx.physical();
    const auto u = v.physical();
    for (std::size_t j = 0; j < n; ++j) {
      l2_in_time[j] += w[m] * p[j] * p[j];
      sup_in_time[j] = std::max(sup_in_time[j], std::abs(u[j]));
    }
    out.n[5] = std::max(out.n[5], weighted_norm(v, 0.5 * s));
  }
  out.n[2] = std::pow(std::max(l4, 0.0), 0.25);
  double n4 = 0.0, n5 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    n4 = std::max(n4, l2_in_time[j]);
    n5 += sup_in_time[j] * sup_in_time[j];
  }
  out.n[3] = std::sqrt(std::max(n4, 0.0));
  out.n[4] = std::sqrt(n5 * dx);
  return out;
}

SliceNorms slice_norms(const SpectralField& field, double t, double s) {
  return {t, field.l2_norm(), hs_norm(field, s), hom_norm(field, -s), weighted_norm(field, 0.5 * s)};
}

NormReport trajectory_norms(const Trajectory& traj, double s) {
  if (!(s > 0.75 && s <= 1.0)) throw InvalidArgument("trajectory_norms: s must lie in (3/4, 1]");
  validate_trajectory(traj);
  NormReport report;
  report.s = s;
  report.r = 0.5 * s;
  report.sup.t = -1.0;
  for (std::size_t m = 0; m < traj.states.size(); ++m) {
    const auto row = slice_norms(traj.states[m], traj.times[m], s);
    report.sup.l2 = std::max(report.sup.l2, row.l2);
    report.sup.hs = std::max(report.sup.hs, row.hs);
    report.sup.hom_minus_s = std::max(report.sup.hom_minus_s, row.hom_minus_s);
    report.sup.weighted = std::max(report.sup.weighted, row.weighted);
    report.slices.push_back(row);
  }
  report.seminorms = solution_seminorms(traj.states, traj.dt, s);
  report.xT = report.seminorms.total();
  return report;
}

void write_norm_csv(std::ostream& os, const NormReport& report) {
  os << "t,l2,hs,hom_minus_s,weighted,n1,n2,n3,n4,n5,n6,xT\n";
  for (const auto& r : report.slices) {
    os << fmt17(r.t) << ',' << fmt17(r.l2) << ',' << fmt17(r.hs) << ',' << fmt17(r.hom_minus_s) << ','
       << fmt17(r.weighted) << ",,,,,,,\n";
  }
  const auto& s = report.sup;
  os << fmt17(-1.0) << ',' << fmt17(s.l2) << ',' << fmt17(s.hs) << ',' << fmt17(s.hom_minus_s) << ','
     << fmt17(s.weighted);
  for (double v : report.seminorms.n) os << ',' << fmt17(v);
  os << ',' << fmt17(report.xT) << '\n';
}

}  // namespace ostrovsky
