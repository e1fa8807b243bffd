#include "ostrovsky/propagator.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "ostrovsky/error.hpp"
#include "ostrovsky/quadrature.hpp"

namespace ostrovsky {

std::string to_string(Sign sign) { return sign == Sign::plus ? "+" : "-"; }

Sign parse_sign(std::string_view text) {
  if (text == "+" || text == "plus") return Sign::plus;
  if (text == "-" || text == "minus" || text == "−") return Sign::minus;
  throw InvalidArgument("unrecognised sign '" + std::string(text) + "' (expected + or -)");
}

double linear_phase(double xi, double t, Sign sign) {
  if (xi == 0.0) throw InvalidArgument("linear_phase: xi = 0 has no phase");
  return t * (xi * xi * xi + sign_value(sign) / xi);
}

SpectralField apply_group(const SpectralField& field, double t, Sign sign) {
  if (!field.is_mean_zero()) throw PreconditionError("apply_group: input must be mean-zero");
  const double xi_max = field.grid().max_frequency();
  if (std::abs(t) * xi_max * xi_max * xi_max > kMaxPhase) {
    std::ostringstream os;
    os << "apply_group: |t| xi_max^3 = " << std::abs(t) * xi_max * xi_max * xi_max
       << " exceeds " << kMaxPhase << "; phase accuracy lost";
    throw PreconditionError(os.str());
  }
  if (t == 0.0) return project_mean_zero(field);
  return apply_multiplier(
      field, [t, sign](double xi) { return std::polar(1.0, linear_phase(xi, t, sign)); }, 0.0);
}

namespace {

using cfun = std::function<std::complex<double>(double)>;

std::complex<double> grid_mode_sum(const cfun& f_hat, double x, double t, Sign sign, const GridSpec& grid) {
  const auto xi = grid.frequencies();
  const int nyq = grid.nyquist_index();
  std::complex<double> sum = 0.0;
  for (int k = 1; k < grid.size(); ++k) {
    if (k == nyq) continue;
    sum += std::polar(1.0, linear_phase(xi[k], t, sign) + x * xi[k]) * f_hat(xi[k]);
  }
  return sum * grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
}

// One refinement level of the continuum integral.
std::complex<double> continuum_level(const cfun& f_hat, double x, double t, Sign sign, double eps, double cutoff,
                                     double inner, double ppr) {
  const double s = sign_value(sign);
  auto integrand = [&](double xi) {
    return std::polar(1.0, t * (xi * xi * xi + s / xi) + x * xi) * f_hat(xi);
  };
  const double at = std::abs(t), ax = std::abs(x);
  std::complex<double> total = 0.0;
  for (double side : {1.0, -1.0}) {
    // Inner region u in [eps, inner] in eta = 1/u: the 1/xi phase is linear in eta.
    const double eta_lo = 1.0 / inner, eta_hi = 1.0 / eps;
    auto eta_rate = [&](double eta) {
      return at * (3.0 / (eta * eta * eta * eta) + 1.0) + ax / (eta * eta);
    };
    double eta = eta_lo;
    while (eta < eta_hi) {
      double h = std::min(0.5 * eta, 1.0 / (ppr * std::max(eta_rate(eta), 1e-12)));
      const double b = std::min(eta + h, eta_hi);
      total += integrate_panel(eta, b, [&](double e) { return integrand(side / e) / (e * e); });
      eta = b;
    }
    // Outer region u in [inner, cutoff].
    auto rate = [&](double u) { return at * (3.0 * u * u + 1.0 / (u * u)) + ax; };
    double u = inner;
    while (u < cutoff) {
      double h = std::min(0.25, 1.0 / (ppr * std::max(rate(u), 1e-12)));
      h = std::min(h, 1.0 / (ppr * std::max(rate(u + h), 1e-12)));
      const double b = std::min(u + h, cutoff);
      total += integrate_panel(u, b, [&](double v) { return integrand(side * v); });
      u = b;
    }
  }
  return total / std::sqrt(2.0 * std::numbers::pi);
}

}  // namespace

GroupQuadResult group_quadrature(const cfun& f_hat, double x, double t, Sign sign, const GroupQuadSpec& spec) {
  if (spec.measure == FrequencyMeasure::grid_modes) {
    if (!spec.grid) throw InvalidArgument("group_quadrature: grid_modes measure needs a grid");
    return {grid_mode_sum(f_hat, x, t, sign, *spec.grid), 0.0};
  }
  if (!(spec.exclusion_radius > 0.0) || !(spec.inner_scale > spec.exclusion_radius) ||
      !(spec.tail_cutoff > spec.inner_scale) || spec.panels_per_radian < 1) {
    throw InvalidArgument("group_quadrature: need 0 < exclusion_radius < inner_scale < tail_cutoff");
  }
  const double ppr = spec.panels_per_radian;
  const auto coarse = continuum_level(f_hat, x, t, sign, spec.exclusion_radius, spec.tail_cutoff,
                                      spec.inner_scale, ppr);
  const auto fine = continuum_level(f_hat, x, t, sign, 0.5 * spec.exclusion_radius, 1.25 * spec.tail_cutoff,
                                    spec.inner_scale, 2.0 * ppr);
  const double err = std::abs(fine - coarse);
  if (!(err <= spec.tolerance)) {
    std::ostringstream os;
    os << "group_quadrature: refinement difference " << err << " exceeds tolerance " << spec.tolerance;
    throw QuadratureError(os.str(), err);
  }
  return {fine, err};
}

}  // namespace ostrovsky
