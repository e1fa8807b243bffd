#include "ostrovsky/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>

#include "ostrovsky/error.hpp"

namespace ostrovsky {

namespace {

struct FullRule {
  std::array<double, PanelRule::order> x{};
  std::array<double, PanelRule::order> w{};
  FullRule() {
    using G = boost::math::quadrature::gauss<double, PanelRule::order>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    // boost stores the non-negative half; order is even so no zero node.
    const int half = PanelRule::order / 2;
    for (int i = 0; i < half; ++i) {
      x[half - 1 - i] = -a[i];
      w[half - 1 - i] = wt[i];
      x[half + i] = a[i];
      w[half + i] = wt[i];
    }
  }
};

const FullRule& rule() {
  static const FullRule r;
  return r;
}

}  // namespace

const std::array<double, PanelRule::order>& PanelRule::abscissas() { return rule().x; }
const std::array<double, PanelRule::order>& PanelRule::weights() { return rule().w; }

std::vector<double> composite_time_weights(int intervals, double dt) {
  if (intervals < 2) throw InvalidArgument("composite_time_weights: need at least two intervals");
  std::vector<double> w(intervals + 1, 0.0);
  const int simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
  for (int i = 0; i < simpson_end; i += 2) {
    w[i] += dt / 3.0;
    w[i + 1] += 4.0 * dt / 3.0;
    w[i + 2] += dt / 3.0;
  }
  if (simpson_end != intervals) {
    const int i = simpson_end;
    w[i] += 3.0 * dt / 8.0;
    w[i + 1] += 9.0 * dt / 8.0;
    w[i + 2] += 9.0 * dt / 8.0;
    w[i + 3] += 3.0 * dt / 8.0;
  }
  return w;
}

std::vector<std::vector<std::complex<double>>> cumulative_integrals(
    const std::vector<std::vector<std::complex<double>>>& g, double dt) {
  const int m_last = static_cast<int>(g.size()) - 1;
  if (m_last < 3) throw InvalidArgument("cumulative_integrals: need at least four time levels");
  const std::size_t width = g[0].size();
  std::vector<std::vector<std::complex<double>>> c(g.size(), std::vector<std::complex<double>>(width));

  const double s1 = dt / 3.0, s4 = 4.0 * dt / 3.0;
  const double e3 = 3.0 * dt / 8.0, e9 = 9.0 * dt / 8.0;
  const double c0 = 9.0 * dt / 24.0, c1 = 19.0 * dt / 24.0, c2 = -5.0 * dt / 24.0, c3 = dt / 24.0;
  for (int m = 1; m <= m_last; ++m) {
    auto& out = c[m];
    if (m == 1) {
      for (std::size_t k = 0; k < width; ++k) out[k] = c0 * g[0][k] + c1 * g[1][k] + c2 * g[2][k] + c3 * g[3][k];
    } else if (m % 2 == 0) {
      const auto& prev = c[m - 2];
      for (std::size_t k = 0; k < width; ++k) {
        out[k] = prev[k] + s1 * g[m - 2][k] + s4 * g[m - 1][k] + s1 * g[m][k];
      }
    } else {
      const auto& prev = c[m - 3];
      for (std::size_t k = 0; k < width; ++k) {
        out[k] = prev[k] + e3 * g[m - 3][k] + e9 * g[m - 2][k] + e9 * g[m - 1][k] + e3 * g[m][k];
      }
    }
  }
  return c;
}

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0) || !(q > 0.0)) throw InvalidArgument("hurwitz_zeta: requires s > 1 and q > 0");
  constexpr int direct_terms = 12;
  double sum = 0.0;
  for (int m = 0; m < direct_terms; ++m) sum += std::pow(q + m, -s);
  const double a = q + direct_terms;
  sum += std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
  // B_{2j} / (2j)!
  static constexpr double coef[] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0,
                                    1.0 / 47900160.0, -691.0 / 1307674368000.0};
  double rising = s;  // s (s+1) ... (s + 2j - 2)
  double power = std::pow(a, -s - 1.0);
  for (int j = 0; j < 6; ++j) {
    sum += coef[j] * rising * power;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    power /= a * a;
  }
  return sum;
}

double periodic_stein_kernel(double w, double period, double b) {
  const double s = 1.0 + 2.0 * b;
  const double q = w / period;
  return std::pow(period, -s) * (hurwitz_zeta(s, q) + hurwitz_zeta(s, 1.0 - q));
}

}  // namespace ostrovsky
