#pragma once

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace ostrovsky {

/// Composite weights for \int_0^{M dt} on a uniform grid of M+1 samples:
/// Simpson for even M, Simpson plus a closing 3/8 panel for odd M. M >= 2.
std::vector<double> composite_time_weights(int intervals, double dt);

/// Running integrals C_m = \int_0^{t_m} g for m = 0..M, fourth order in dt.
/// Even m: composite Simpson. Odd m >= 3: Simpson to t_{m-3} plus 3/8 rule.
/// m = 1: integral of the cubic through t_0..t_3. Requires M >= 3.
/// `samples[m]` holds one vector per time level; all must share a length.
std::vector<std::vector<std::complex<double>>> cumulative_integrals(
    const std::vector<std::vector<std::complex<double>>>& samples, double dt);

/// 10-point Gauss-Legendre rule mapped to [a, b].
struct PanelRule {
  static constexpr int order = 10;
  static const std::array<double, order>& abscissas();  // on [-1, 1]
  static const std::array<double, order>& weights();
};

template <class F>
auto integrate_panel(double a, double b, F&& f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const auto& x = PanelRule::abscissas();
  const auto& w = PanelRule::weights();
  decltype(f(mid)) sum{};
  for (int i = 0; i < PanelRule::order; ++i) sum += w[i] * f(mid + half * x[i]);
  return sum * half;
}

/// Hurwitz zeta sum_{m>=0} (m + q)^{-s} for s > 1, q > 0 (Euler-Maclaurin).
double hurwitz_zeta(double s, double q);

/// Periodised Stein kernel sum_{m in Z} |w + m P|^{-1-2b} for w in (0, P).
double periodic_stein_kernel(double w, double period, double b);

}  // namespace ostrovsky
