#include "ostrovsky/stein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "ostrovsky/error.hpp"
#include "ostrovsky/norms.hpp"
#include "ostrovsky/quadrature.hpp"

namespace ostrovsky {

namespace {

using cfun = std::function<std::complex<double>(double)>;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_b(double b) {
  if (!(b > 0.0 && b < 1.0)) throw InvalidArgument("Stein derivative order b must lie in (0, 1)");
}

// \int_a^b w^{-1-2b} dw
double kernel_mass(double a, double c, double b) {
  return (std::pow(a, -2.0 * b) - (std::isinf(c) ? 0.0 : std::pow(c, -2.0 * b))) / (2.0 * b);
}

}  // namespace

SteinQuadSpec SteinQuadSpec::refined() const {
  SteinQuadSpec r = *this;
  r.inner_radius *= 0.5;
  r.outer_radius *= 2.0;
  r.panels *= 2;
  return r;
}

void SteinQuadSpec::validate() const {
  if (!(inner_radius > 0.0) || !(outer_radius > inner_radius)) {
    throw InvalidArgument("SteinQuadSpec: need 0 < inner_radius < outer_radius");
  }
  if (panels < 1) throw InvalidArgument("SteinQuadSpec: panels must be >= 1");
  if (!(grading >= 1.0)) throw InvalidArgument("SteinQuadSpec: grading must be >= 1");
  if (!(tolerance > 0.0)) throw InvalidArgument("SteinQuadSpec: tolerance must be positive");
}

// --- FuncOnLine factories -------------------------------------------------------

FuncOnLine constant_function(std::complex<double> c) {
  FuncOnLine f;
  f.eval = [c](double) { return c; };
  f.lipschitz = [](double) { return 0.0; };
  f.sup = std::abs(c);
  f.tail.kind = TailModel::Kind::limits;
  f.tail.limit_minus = f.tail.limit_plus = c;
  f.tail.envelope = [](double) { return 0.0; };
  f.name = "constant";
  return f;
}

FuncOnLine plane_wave(double a) {
  if (a == 0.0) return constant_function(1.0);
  FuncOnLine f;
  f.eval = [a](double y) { return std::polar(1.0, a * y); };
  f.lipschitz = [a](double) { return std::abs(a); };
  f.sup = 1.0;
  f.tail.kind = TailModel::Kind::oscillatory;
  f.tail.rate_min = [a](double) { return std::abs(a); };
  f.name = "plane_wave";
  return f;
}

FuncOnLine gaussian(double amplitude, double width, double center, double modulation) {
  if (!(width > 0.0)) throw InvalidArgument("gaussian: width must be positive");
  FuncOnLine f;
  f.eval = [=](double y) {
    const double z = (y - center) / width;
    return amplitude * std::exp(-0.5 * z * z) * std::polar(1.0, modulation * y);
  };
  const double lip = std::abs(amplitude) * (1.0 / (width * std::sqrt(std::numbers::e)) + std::abs(modulation));
  f.lipschitz = [lip](double) { return lip; };
  f.sup = std::abs(amplitude);
  f.tail.kind = TailModel::Kind::limits;
  f.tail.envelope = [=](double r) {
    const double d = r - std::abs(center);
    if (d <= 0.0) return std::abs(amplitude);
    return std::abs(amplitude) * std::exp(-0.5 * d * d / (width * width));
  };
  f.name = "gaussian";
  return f;
}

FuncOnLine cubic_phase(double t) {
  if (!(t > 0.0)) throw InvalidArgument("cubic_phase: t must be positive");
  FuncOnLine f;
  f.eval = [t](double y) { return std::polar(1.0, t * y * y * y); };
  f.lipschitz = [t](double y) { return 3.0 * t * y * y; };
  f.sup = 1.0;
  f.tail.kind = TailModel::Kind::oscillatory;
  f.tail.rate_min = [t](double r) { return r > 0.0 ? 3.0 * t * r * r : 0.0; };
  f.name = "cubic_phase";
  return f;
}

FuncOnLine inverse_phase(double t, double sign, double exclusion_radius) {
  if (!(t > 0.0)) throw InvalidArgument("inverse_phase: t must be positive");
  if (!(exclusion_radius > 0.0)) throw InvalidArgument("inverse_phase: exclusion radius must be positive");
  const double s = sign >= 0.0 ? 1.0 : -1.0;
  FuncOnLine f;
  f.eval = [t, s](double y) { return y == 0.0 ? std::complex<double>(1.0) : std::polar(1.0, s * t / y); };
  f.lipschitz = [t](double y) { return y == 0.0 ? kInf : t / (y * y); };
  f.sup = 1.0;
  f.tail.kind = TailModel::Kind::limits;
  f.tail.limit_minus = f.tail.limit_plus = 1.0;
  f.tail.envelope = [t](double r) { return r > 0.0 ? std::min(2.0, t / r) : 2.0; };
  f.singular_points = {0.0};
  f.exclusion_radius = exclusion_radius;
  f.name = "inverse_phase";
  return f;
}

FuncOnLine interpolant(const SpectralField& field) {
  const auto& grid = field.grid();
  const double scale = grid.dxi() / std::sqrt(2.0 * std::numbers::pi);
  std::vector<double> xi(grid.frequencies().begin(), grid.frequencies().end());
  std::vector<cplx> c(field.spectral().begin(), field.spectral().end());
  const int nyq = grid.nyquist_index();
  double lip = 0.0, sup = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) {
    lip += std::abs(xi[k] * c[k]) * scale;
    sup += std::abs(c[k]) * scale;
  }
  FuncOnLine f;
  f.eval = [xi, c, nyq, scale](double y) {
    double sum = 0.0;
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (static_cast<int>(k) == nyq) {
        sum += c[k].real() * std::cos(xi[k] * y);
      } else {
        sum += (c[k] * std::polar(1.0, xi[k] * y)).real();
      }
    }
    return std::complex<double>(sum * scale, 0.0);
  };
  f.lipschitz = [lip](double) { return lip; };
  f.sup = sup;
  f.tail.kind = TailModel::Kind::periodic;
  f.tail.period = grid.length();
  f.name = "interpolant";
  return f;
}

FuncOnLine product(const FuncOnLine& f, const FuncOnLine& g) {
  FuncOnLine h;
  h.eval = [fe = f.eval, ge = g.eval](double y) { return fe(y) * ge(y); };
  h.lipschitz = [fl = f.lipschitz, gl = g.lipschitz, fs = f.sup, gs = g.sup](double y) {
    return fl(y) * gs + fs * gl(y);
  };
  h.sup = f.sup * g.sup;
  h.singular_points = f.singular_points;
  h.singular_points.insert(h.singular_points.end(), g.singular_points.begin(), g.singular_points.end());
  h.exclusion_radius = std::max(f.exclusion_radius, g.exclusion_radius);
  h.name = f.name + "*" + g.name;

  using K = TailModel::Kind;
  const auto& a = f.tail;
  const auto& b = g.tail;
  if (a.kind == K::periodic && b.kind == K::periodic && a.period == b.period) {
    h.tail = a;
  } else if (a.kind == K::limits && b.kind == K::limits) {
    h.tail.kind = K::limits;
    h.tail.limit_minus = a.limit_minus * b.limit_minus;
    h.tail.limit_plus = a.limit_plus * b.limit_plus;
    const double lg = std::max(std::abs(b.limit_minus), std::abs(b.limit_plus));
    h.tail.envelope = [ea = a.envelope, eb = b.envelope, fs = f.sup, lg](double r) {
      return fs * eb(r) + lg * ea(r);
    };
  } else if ((a.kind == K::limits && a.limit_minus == 0.0 && a.limit_plus == 0.0) ||
             (b.kind == K::limits && b.limit_minus == 0.0 && b.limit_plus == 0.0)) {
    // A factor decaying to zero dominates whatever the other factor does.
    const bool first = a.kind == K::limits && a.limit_minus == 0.0 && a.limit_plus == 0.0;
    const auto env = first ? a.envelope : b.envelope;
    const double other = first ? g.sup : f.sup;
    h.tail.kind = K::limits;
    h.tail.envelope = [env, other](double r) { return other * env(r); };
  } else {
    h.tail.kind = K::bounded;
  }
  return h;
}

FuncOnLine scaled_argument(const FuncOnLine& f, double lambda) {
  if (!(lambda > 0.0)) throw InvalidArgument("scaled_argument: lambda must be positive");
  FuncOnLine h = f;
  h.eval = [fe = f.eval, lambda](double y) { return fe(lambda * y); };
  h.lipschitz = [fl = f.lipschitz, lambda](double y) { return lambda * fl(lambda * y); };
  if (f.tail.envelope) h.tail.envelope = [e = f.tail.envelope, lambda](double r) { return e(lambda * r); };
  if (f.tail.rate_min) h.tail.rate_min = [m = f.tail.rate_min, lambda](double r) { return lambda * m(lambda * r); };
  h.tail.period = f.tail.period / lambda;
  for (auto& s : h.singular_points) s /= lambda;
  h.exclusion_radius = f.exclusion_radius / lambda;
  h.name = f.name + "(scaled)";
  return h;
}

FuncOnLine translated(const FuncOnLine& f, double shift) {
  FuncOnLine h = f;
  const double a = std::abs(shift);
  h.eval = [fe = f.eval, shift](double y) { return fe(y - shift); };
  h.lipschitz = [fl = f.lipschitz, shift](double y) { return fl(y - shift); };
  if (f.tail.envelope) {
    h.tail.envelope = [e = f.tail.envelope, a](double r) { return e(std::max(r - a, 0.0)); };
  }
  if (f.tail.rate_min) {
    h.tail.rate_min = [m = f.tail.rate_min, a](double r) { return m(std::max(r - a, 0.0)); };
  }
  for (auto& s : h.singular_points) s += shift;
  h.name = f.name + "(shifted)";
  return h;
}

void validate_lipschitz(const FuncOnLine& f, double lo, double hi, int samples) {
  if (!(hi > lo) || samples < 2) throw InvalidArgument("validate_lipschitz: empty sampling window");
  const double step = (hi - lo) / samples;
  for (int i = 0; i < samples; ++i) {
    const double y = lo + i * step;
    bool near_singular = false;
    for (double s : f.singular_points) near_singular |= std::abs(y - s) <= f.exclusion_radius + step;
    if (near_singular) continue;
    const std::complex<double> v = f(y);
    if (std::abs(v) > f.sup * (1.0 + 1e-12) + 1e-300) {
      std::ostringstream os;
      os << "validate_lipschitz: |" << f.name << "(" << y << ")| = " << std::abs(v) << " exceeds sup " << f.sup;
      throw InvalidArgument(os.str());
    }
    const double lip = std::max(f.lipschitz(y), f.lipschitz(y + step));
    const double h = lip > 0.0 ? std::min(step, 1e-3 / lip) : step;
    const double diff = std::abs(f(y + h) - v);
    if (diff > lip * h * (1.0 + 1e-6) + 1e-13) {
      std::ostringstream os;
      os << "validate_lipschitz: " << f.name << " changes by " << diff << " over [" << y << ", " << y + h
         << "], declared bound " << lip * h;
      throw InvalidArgument(os.str());
    }
  }
}

// --- generic engine ------------------------------------------------------------

namespace {

struct LevelResult {
  double integral = 0.0;  // including tail value
  double tail_bound = 0.0;
  double excluded_bound = 0.0;
};

struct Window {
  double lo, hi;  // in w
};

// Squared Stein integral on one side (sigma = +-1) for one resolution level.
LevelResult side_level(const FuncOnLine& f, double x, double b, double sigma, const SteinQuadSpec& spec) {
  using K = TailModel::Kind;
  const std::complex<double> fx = f(x);
  const bool periodic = f.tail.kind == K::periodic;
  const double period = f.tail.period;
  const double reach = periodic ? 0.5 * period : spec.outer_radius;
  const double s = 1.0 + 2.0 * b;

  auto kernel = [&](double w) { return periodic ? periodic_stein_kernel(w, period, b) : std::pow(w, -s); };
  auto integrand = [&](double w) { return std::norm(fx - f(x + sigma * w)) * kernel(w); };

  std::vector<Window> windows;
  for (double p : f.singular_points) {
    const double d = sigma * (p - x);
    if (std::abs(p - x) <= f.exclusion_radius) {
      std::ostringstream os;
      os << "stein_derivative: x = " << x << " lies inside the excluded window around " << p;
      throw InvalidArgument(os.str());
    }
    if (d > 0.0 && d - f.exclusion_radius < reach) windows.push_back({d - f.exclusion_radius, d + f.exclusion_radius});
  }
  std::sort(windows.begin(), windows.end(), [](const Window& a, const Window& c) { return a.lo < c.lo; });

  LevelResult out;
  const double lip_x = f.lipschitz(x);
  double delta = std::min(spec.inner_radius, 0.25 * reach);
  if (lip_x > 0.0 && std::isfinite(lip_x)) delta = std::min(delta, 1.0 / lip_x);
  if (!windows.empty()) delta = std::min(delta, 0.5 * windows.front().lo);

  // Inner zone: graded mesh delta (i/m)^g.
  const int m = spec.panels;
  double prev = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double node = delta * std::pow(static_cast<double>(i) / m, spec.grading);
    out.integral += integrate_panel(prev, node, integrand);
    prev = node;
  }

  // Tail w > R from the tail model: (value, bound) on the squared integral.
  const double mass_scale = 1.0 / (2.0 * b);
  auto tail_at = [&](double R) -> std::pair<double, double> {
    const double lo = R + sigma * x;  // |y| >= lo on this side
    const double mass = std::pow(R, -2.0 * b) * mass_scale;
    switch (f.tail.kind) {
      case K::bounded:
        return {0.0, 4.0 * f.sup * f.sup * mass};
      case K::limits: {
        const std::complex<double> limit = sigma > 0 ? f.tail.limit_plus : f.tail.limit_minus;
        const double d = std::abs(fx - limit);
        const double e = lo > 0.0 ? f.tail.envelope(lo) : 2.0 * f.sup;
        return {d * d * mass, (2.0 * d * e + e * e) * mass};
      }
      case K::oscillatory: {
        const double rate = lo > 0.0 ? f.tail.rate_min(lo) : 0.0;
        return {2.0 * mass, rate > 0.0 ? 4.0 * std::pow(R, -s) / rate : 4.0 * mass};
      }
      case K::periodic:
        break;
    }
    return {0.0, 0.0};
  };

  // Outer zone. Off the periodic path the walk stops early once the tail
  // model closes the remainder to 1% of the tolerance.
  const double growth = 8.0 / spec.panels;
  const double radians = 32.0 / spec.panels;
  auto lip_at = [&](double w) { return f.lipschitz(x + sigma * w); };
  double w = delta;
  std::size_t next_window = 0;
  while (w < reach) {
    if (next_window < windows.size() && w >= windows[next_window].lo) {
      const double hi = std::min(windows[next_window].hi, reach);
      const double lo = windows[next_window].lo;
      const double mass = periodic ? (hi - lo) * std::max(kernel(lo), kernel(hi)) : kernel_mass(lo, hi, b);
      out.excluded_bound += 4.0 * f.sup * f.sup * mass;
      w = hi;
      ++next_window;
      continue;
    }
    double h = std::min(growth * w, reach - w);
    if (next_window < windows.size()) h = std::min(h, windows[next_window].lo - w);
    const double lip0 = lip_at(w);
    if (lip0 > 0.0) h = std::min(h, radians / lip0);
    while (h > 0.0 && lip_at(w + h) * h > radians) h *= 0.5;
    if (!(h > 0.0)) throw InvalidArgument("stein_derivative: Lipschitz data unbounded away from excluded points");
    const double end = w + h;
    out.integral += integrate_panel(w, end, integrand);
    w = end;
    if (!periodic && next_window == windows.size() && w < reach) {
      const auto [value, bound] = tail_at(w);
      if (bound <= 1e-2 * spec.tolerance * (out.integral + value)) break;
    }
  }

  if (periodic) return out;
  const auto [value, bound] = tail_at(w);
  out.integral += value;
  out.tail_bound += bound;
  return out;
}

LevelResult full_level(const FuncOnLine& f, double x, double b, const SteinQuadSpec& spec) {
  LevelResult a = side_level(f, x, b, 1.0, spec);
  const LevelResult c = side_level(f, x, b, -1.0, spec);
  a.integral += c.integral;
  a.tail_bound += c.tail_bound;
  a.excluded_bound += c.excluded_bound;
  return a;
}

}  // namespace

SteinResult stein_derivative(const FuncOnLine& f, double x, double b, const SteinQuadSpec& spec) {
  require_b(b);
  spec.validate();
  if (!f.eval || !f.lipschitz) throw InvalidArgument("stein_derivative: function lacks eval or Lipschitz data");
  const LevelResult coarse = full_level(f, x, b, spec);
  const LevelResult fine = full_level(f, x, b, spec.refined());
  SteinResult r;
  r.value = std::sqrt(std::max(fine.integral, 0.0));
  const double v_coarse = std::sqrt(std::max(coarse.integral, 0.0));
  r.tail_bound = fine.tail_bound;
  r.excluded_bound = fine.excluded_bound;
  r.error = std::abs(r.value - v_coarse) + (std::sqrt(std::max(fine.integral, 0.0) + fine.tail_bound) - r.value);
  r.converged = r.error <= spec.tolerance * std::max(r.value, 1e-300) || r.error == 0.0;
  return r;
}

// --- periodic grid engine --------------------------------------------------------

namespace {

// Squared Stein integrals at every grid node for one level.
std::vector<double> periodic_level(const SpectralField& field, double b, const SteinQuadSpec& spec) {
  const auto& grid = field.grid();
  const int n = grid.size();
  const double period = grid.length();
  const double half = 0.5 * period;
  const auto xi = grid.frequencies();
  const auto c = field.spectral();
  const int nyq = grid.nyquist_index();

  double biggest = 0.0;
  for (const auto& v : c) biggest = std::max(biggest, std::abs(v));
  double band = 0.0;
  for (int k = 0; k < n; ++k) {
    if (std::abs(c[k]) > 1e-15 * biggest) band = std::max(band, std::abs(xi[k]));
  }
  std::vector<double> acc(n, 0.0);
  if (band == 0.0) return acc;

  const auto u = field.physical();
  std::vector<cplx> shifted(n);
  auto accumulate = [&](double w, double weight) {
    for (double sigma : {1.0, -1.0}) {
      for (int k = 0; k < n; ++k) {
        const double phase = sigma * xi[k] * w;
        shifted[k] = k == nyq ? c[k] * std::cos(phase) : c[k] * std::polar(1.0, phase);
      }
      const auto g = inverse_transform(grid, shifted);
      for (int j = 0; j < n; ++j) {
        const double d = u[j] - g[j].real();
        acc[j] += weight * d * d;
      }
    }
  };
  auto panel = [&](double a, double e) {
    const double mid = 0.5 * (a + e), hw = 0.5 * (e - a);
    const auto& nodes = PanelRule::abscissas();
    const auto& weights = PanelRule::weights();
    for (int q = 0; q < PanelRule::order; ++q) {
      const double w = mid + hw * nodes[q];
      accumulate(w, hw * weights[q] * periodic_stein_kernel(w, period, b));
    }
  };

  const double delta = std::min({spec.inner_radius, 0.25 * half, 1.0 / band});
  const int m = spec.panels;
  double prev = 0.0;
  for (int i = 1; i <= m; ++i) {
    const double node = delta * std::pow(static_cast<double>(i) / m, spec.grading);
    panel(prev, node);
    prev = node;
  }
  const double growth = 8.0 / spec.panels;
  const double width = 32.0 / (spec.panels * band);
  double w = delta;
  while (w < half) {
    const double end = std::min({w + growth * w, w + width, half});
    panel(w, end);
    w = end;
  }
  return acc;
}

}  // namespace

std::vector<double> stein_profile(const SpectralField& field, double b, const SteinQuadSpec& spec,
                                  std::vector<double>* errors) {
  require_b(b);
  spec.validate();
  const auto coarse = periodic_level(field, b, spec);
  const auto fine = periodic_level(field, b, spec.refined());
  std::vector<double> out(fine.size());
  if (errors) errors->assign(fine.size(), 0.0);
  for (std::size_t j = 0; j < fine.size(); ++j) {
    out[j] = std::sqrt(std::max(fine[j], 0.0));
    if (errors) (*errors)[j] = std::abs(out[j] - std::sqrt(std::max(coarse[j], 0.0)));
  }
  return out;
}

namespace {

double grid_l2(std::span<const double> v, double dx) {
  double sum = 0.0;
  for (double a : v) sum += a * a;
  return std::sqrt(sum * dx);
}

}  // namespace

SteinNorm stein_l2_norm(const SpectralField& field, double b, const SteinQuadSpec& spec) {
  std::vector<double> err;
  const auto p = stein_profile(field, b, spec, &err);
  const double dx = field.grid().dx();
  double peak = 0.0;
  for (double v : p) peak = std::max(peak, v);
  const auto x = field.grid().points();
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (err[j] > spec.tolerance * std::max(p[j], 1e-3 * peak) && err[j] > 0.0) {
      std::ostringstream os;
      os << "stein_l2_norm: quadrature did not converge at x = " << x[j] << " (error " << err[j] << ", value "
         << p[j] << ")";
      throw QuadratureError(os.str(), err[j]);
    }
  }
  return {grid_l2(p, dx), grid_l2(err, dx)};
}

EquivalenceRatio equivalence_ratio(const SpectralField& field, double b, const SteinQuadSpec& spec) {
  const double l2 = field.l2_norm();
  EquivalenceRatio r;
  r.multiplier_side = l2 + hom_norm(field, b);
  r.stein_side = l2 + stein_l2_norm(field, b, spec).value;
  if (!(r.stein_side > 0.0)) throw PreconditionError("equivalence_ratio: zero field has no ratio");
  r.ratio = r.multiplier_side / r.stein_side;
  return r;
}

InequalityResidual product_pointwise_check(const FuncOnLine& f, const FuncOnLine& g, double b, double x,
                                           const SteinQuadSpec& spec) {
  const auto fg = stein_derivative(product(f, g), x, b, spec);
  const auto df = stein_derivative(f, x, b, spec);
  const auto dg = stein_derivative(g, x, b, spec);
  const double gx = std::abs(g(x));
  InequalityResidual r;
  r.lhs = fg.value;
  r.rhs = f.sup * dg.value + gx * df.value;
  r.residual = r.rhs - r.lhs;
  r.tolerance = fg.error + f.sup * dg.error + gx * df.error;
  return r;
}

InequalityResidual product_l2_check(const SpectralField& f, const SpectralField& g, double b,
                                    const SteinQuadSpec& spec) {
  require_same_grid(f, g);
  const auto h = pointwise_product(f, g);
  std::vector<double> eh, ef, eg;
  const auto ph = stein_profile(h, b, spec, &eh);
  const auto pf = stein_profile(f, b, spec, &ef);
  const auto pg = stein_profile(g, b, spec, &eg);
  const auto uf = f.physical();
  const auto ug = g.physical();
  const std::size_t n = ph.size();
  std::vector<double> a(n), c(n), ea(n), ec(n);
  for (std::size_t j = 0; j < n; ++j) {
    a[j] = uf[j] * pg[j];
    c[j] = ug[j] * pf[j];
    ea[j] = uf[j] * eg[j];
    ec[j] = ug[j] * ef[j];
  }
  const double dx = f.grid().dx();
  InequalityResidual r;
  r.lhs = grid_l2(ph, dx);
  r.rhs = grid_l2(a, dx) + grid_l2(c, dx);
  r.residual = r.rhs - r.lhs;
  r.tolerance = grid_l2(eh, dx) + grid_l2(ea, dx) + grid_l2(ec, dx);
  return r;
}

LeibnizDefect leibniz_defect(const SpectralField& f, const SpectralField& g, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("leibniz_defect: alpha must lie in (0, 1)");
  require_same_grid(f, g);
  const auto daf = fractional_derivative(f, alpha);
  const auto dag = fractional_derivative(g, alpha);
  const auto lhs = fractional_derivative(dealias(pointwise_product(f, g)), alpha);
  const auto t1 = dealias(pointwise_product(f, dag));
  const auto t2 = dealias(pointwise_product(g, daf));
  const auto defect = lhs - t1 - t2;
  return {defect.l2_norm(), g.max_abs() * daf.l2_norm()};
}

double stein_constant(double b) {
  require_b(b);
  return std::sqrt(2.0 * std::numbers::pi / (std::tgamma(1.0 + 2.0 * b) * std::sin(std::numbers::pi * b)));
}

}  // namespace ostrovsky
