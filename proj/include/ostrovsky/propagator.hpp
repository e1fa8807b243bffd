#pragma once

#include <complex>
#include <functional>
#include <string>
#include <string_view>

#include "ostrovsky/grid.hpp"

namespace ostrovsky {

/// Selects +d/dx^{-1} or -d/dx^{-1} in the rotation term.
enum class Sign { plus, minus };

std::string to_string(Sign sign);
/// Accepts "+", "-", U+2212, "plus", "minus".
Sign parse_sign(std::string_view text);
inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

/// t (xi^3 + 1/xi) for plus, t (xi^3 - 1/xi) for minus. xi != 0.
double linear_phase(double xi, double t, Sign sign);

/// Largest |t| xi_max^3 for which the phase is still trusted in double precision.
inline constexpr double kMaxPhase = 1e15;

/// Exact linear group: each mode multiplied by exp(i linear_phase(xi_k, t)).
/// Input must be mean-zero; rejects |t| xi_max^3 > kMaxPhase.
SpectralField apply_group(const SpectralField& field, double t, Sign sign);

// --- direct-quadrature oracle ------------------------------------------------

enum class FrequencyMeasure {
  /// Lebesgue measure on the line: graded panels near xi = 0, cutoff at large |xi|.
  continuum,
  /// Trapezoidal sum over the grid frequencies xi_k, k != 0, |k| < n/2. This is
  /// the measure the periodic problem lives on.
  grid_modes,
};

struct GroupQuadSpec {
  FrequencyMeasure measure = FrequencyMeasure::continuum;
  GridPtr grid;                  // required for grid_modes
  double tail_cutoff = 40.0;     // |xi| beyond which f_hat is treated as zero
  double exclusion_radius = 1e-4;
  double inner_scale = 1.0;      // xi below this is integrated in the variable 1/xi
  int panels_per_radian = 1;     // resolution: panels per radian of phase
  double tolerance = 1e-9;       // absolute; refinement difference above this fails
};

struct GroupQuadResult {
  std::complex<double> value;
  double error = 0.0;
};

/// (2 pi)^{-1/2} \int exp(i[t(xi^3 +- 1/xi) + x xi]) f_hat(xi) dxi by direct
/// quadrature. Continuum measure: two refinement levels (panel density doubled,
/// exclusion radius halved, cutoff x1.25); throws QuadratureError if the
/// difference exceeds spec.tolerance.
GroupQuadResult group_quadrature(const std::function<std::complex<double>(double)>& f_hat, double x, double t,
                                 Sign sign, const GroupQuadSpec& spec);

}  // namespace ostrovsky
