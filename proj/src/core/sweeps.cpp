#include "ostrovsky/sweeps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <set>

#include "ostrovsky/csv.hpp"
#include "ostrovsky/error.hpp"
#include "ostrovsky/norms.hpp"

namespace ostrovsky {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool row_less(const SweepRow& a, const SweepRow& c) {
  if (a.b != c.b) return a.b < c.b;
  if (a.t != c.t) return a.t < c.t;
  return a.x < c.x;
}

void require_positive(const std::vector<double>& v, const char* what) {
  for (double a : v) {
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidArgument(std::string(what) + " values must be positive");
  }
}

void require_b_range(const std::vector<double>& bs, double hi, const char* lemma) {
  for (double b : bs) {
    if (!(b > 0.0 && b <= hi) || (hi == 1.0 && b == 1.0)) {
      throw InvalidArgument(std::string(lemma) + ": b = " + fmt17(b) + " outside the admissible range");
    }
  }
}

SweepRow finish_row(double b, double t, double x, const SteinResult& r, double rhs) {
  SweepRow row;
  row.b = b;
  row.t = t;
  row.x = x;
  row.lhs = r.value;
  row.rhs = rhs;
  row.ratio = r.value / rhs;
  row.lhs_err = r.error;
  if (!r.converged) {
    row.flag = RowFlag::quadrature_failure;
    row.flag_value = r.error;
  }
  return row;
}

}  // namespace

std::string to_string(RowFlag flag) {
  switch (flag) {
    case RowFlag::ok: return "ok";
    case RowFlag::quadrature_failure: return "quadrature_failure";
    case RowFlag::inconclusive: return "inconclusive";
  }
  return "?";
}

double SweepTable::sup_ratio(std::optional<double> b) const {
  double sup = kNaN;
  for (const auto& r : rows) {
    if (r.flag != RowFlag::ok || (b && r.b != *b)) continue;
    if (std::isnan(sup) || r.ratio > sup) sup = r.ratio;
  }
  return sup;
}

std::size_t SweepTable::flagged() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.flag != RowFlag::ok; }));
}

double lemma22_rhs(double b, double t, double x) {
  const double ax = std::pow(std::abs(x), 2.0 * b);
  return std::pow(t, b / 3.0) + std::pow(t, 1.0 / 3.0 + 2.0 * b / 9.0) +
         (std::pow(t, 1.0 / 3.0 + 2.0 * b / 3.0) + std::pow(t, 2.0 * b / 3.0)) * ax;
}

SweepTable lemma22_sweep(const std::vector<double>& b_values, const std::vector<double>& t_values,
                         const std::vector<double>& x_values, const SteinQuadSpec& quad) {
  require_b_range(b_values, 1.0, "lemma22");
  require_positive(t_values, "lemma22 t");
  quad.validate();
  SweepTable table;
  table.lemma = "lemma22";
  table.quad = quad;
  for (double b : b_values) {
    for (double t : t_values) {
      const auto f = cubic_phase(t);
      const double scale = std::cbrt(1.0 / t);
      for (double x : x_values) {
        SteinQuadSpec row = quad;
        row.inner_radius = quad.inner_radius * scale;
        row.outer_radius = std::abs(x) + quad.outer_radius * scale;
        table.rows.push_back(finish_row(b, t, x, stein_derivative(f, x, b, row), lemma22_rhs(b, t, x)));
      }
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), row_less);
  return table;
}

double lemma23_rhs(double b, double t, double x) { return std::pow(t, b) / std::pow(std::abs(x), 2.0 * b); }

SweepTable lemma23_sweep(const std::vector<double>& b_values, const std::vector<double>& t_values,
                         const std::vector<double>& x_values, Sign sign, const SteinQuadSpec& quad,
                         const Lemma23Options& options) {
  require_b_range(b_values, 0.5, "lemma23");
  require_positive(t_values, "lemma23 t");
  quad.validate();
  if (!(options.x_min > 0.0)) throw InvalidArgument("lemma23: x_min must be positive");
  if (!(options.exclusion_budget > 0.0)) throw InvalidArgument("lemma23: exclusion_budget must be positive");
  SweepTable table;
  table.lemma = "lemma23";
  table.sign = sign;
  table.quad = quad;
  std::vector<double> xs;
  for (double x : x_values) {
    if (std::abs(x) >= options.x_min) xs.push_back(x);
  }
  if (xs.empty()) {
    table.status = "no admissible points";
    return table;
  }
  for (double b : b_values) {
    for (double t : t_values) {
      for (double x : xs) {
        const double ax = std::abs(x);
        const double rhs = lemma23_rhs(b, t, x);
        const double radius =
            std::min(0.25 * ax, options.exclusion_budget * rhs * rhs * std::pow(ax, 1.0 + 2.0 * b) / 8.0);
        const auto f = inverse_phase(t, sign_value(sign), radius);
        SteinQuadSpec row = quad;
        row.inner_radius = quad.inner_radius * ax;
        row.outer_radius = quad.outer_radius * (ax + t);
        const auto r = stein_derivative(f, x, b, row);
        auto out = finish_row(b, t, x, r, rhs);
        const double induced = std::sqrt(r.value * r.value + r.excluded_bound) - r.value;
        if (out.flag == RowFlag::ok && induced > 0.1 * r.value) {
          out.flag = RowFlag::inconclusive;
          out.flag_value = induced;
        }
        table.rows.push_back(out);
      }
    }
  }
  std::sort(table.rows.begin(), table.rows.end(), row_less);
  return table;
}

BracketNorms bracket_norms(const SpectralField& f, double b) {
  if (!(b > 0.0 && b <= 0.5)) throw InvalidArgument("lemma24: b must lie in (0, 1/2]");
  return {f.l2_norm(), hom_norm(f, 2.0 * b), hom_norm(f, -2.0 * b), weighted_norm(f, b)};
}

std::array<double, 3> bracket_factors(double t, double b) {
  if (!(t >= 0.0)) throw InvalidArgument("lemma24: t must be nonnegative");
  return {1.0 + std::pow(t, b / 3.0) + std::pow(t, 1.0 / 3.0 + 2.0 * b / 9.0),
          std::pow(t, 1.0 / 3.0 + 2.0 * b / 3.0) + std::pow(t, 2.0 * b / 3.0), std::pow(t, b)};
}

double lemma24_bracket(const SpectralField& f, double t, double b) {
  const auto n = bracket_norms(f, b);
  const auto c = bracket_factors(t, b);
  return c[0] * n.l2 + c[1] * n.up + c[2] * n.down + n.weighted;
}

SweepTable lemma24_check(const SpectralField& f, const std::vector<double>& t_values, double b, Sign sign) {
  if (!f.is_mean_zero()) throw PreconditionError("lemma24: datum must be mean-zero");
  SweepTable table;
  table.lemma = "lemma24";
  table.sign = sign;
  table.grid_points = f.grid().size();
  table.grid_half_length = f.grid().half_length();
  for (double t : t_values) {
    const auto u = apply_group(f, t, sign);
    SweepRow row;
    row.b = b;
    row.t = t;
    row.x = kNaN;
    row.lhs = weighted_norm(u, b);
    row.rhs = lemma24_bracket(f, t, b);
    row.ratio = row.lhs / row.rhs;
    row.boundary_mass = boundary_mass_ratio(u);
    check_boundary_mass(u, "lemma24 at t = " + fmt17(t));
    table.rows.push_back(row);
  }
  std::sort(table.rows.begin(), table.rows.end(), row_less);
  return table;
}

void write_sweep_csv(std::ostream& os, const SweepTable& table) {
  os << "lemma,sign,b,t,x,lhs,rhs,ratio,lhs_err\n";
  const std::string sign = table.sign ? to_string(*table.sign) : "";
  for (const auto& r : table.rows) {
    os << table.lemma << ',' << sign << ',' << fmt17(r.b) << ',' << fmt17(r.t) << ','
       << (std::isnan(r.x) ? "" : fmt17(r.x)) << ',' << fmt17(r.lhs) << ',' << fmt17(r.rhs) << ','
       << fmt17(r.ratio) << ',' << fmt17(r.lhs_err) << '\n';
  }
}

void write_flags_csv(std::ostream& os, const SweepTable& table) {
  os << "lemma,b,t,x,flag,value\n";
  for (const auto& r : table.rows) {
    if (r.flag == RowFlag::ok) continue;
    os << table.lemma << ',' << fmt17(r.b) << ',' << fmt17(r.t) << ',' << (std::isnan(r.x) ? "" : fmt17(r.x))
       << ',' << to_string(r.flag) << ',' << fmt17(r.flag_value) << '\n';
  }
}

std::vector<SweepVerdict> refinement_verdict(const SweepTable& base, const SweepTable& refined, double threshold) {
  std::set<double> bs;
  for (const auto& r : base.rows) bs.insert(r.b);
  std::vector<SweepVerdict> out;
  auto make = [&](std::optional<double> b) {
    SweepVerdict v;
    v.lemma = base.lemma;
    v.sign = base.sign;
    v.b = b ? *b : kNaN;
    v.sup_ratio = base.sup_ratio(b);
    v.sup_ratio_refined = refined.sup_ratio(b);
    v.rel_change = std::abs(v.sup_ratio_refined - v.sup_ratio) / std::abs(v.sup_ratio);
    v.stable = v.rel_change < threshold;  // false when either side is NaN
    out.push_back(v);
  };
  for (double b : bs) make(b);
  make(std::nullopt);
  return out;
}

void write_verdict_csv(std::ostream& os, const std::vector<SweepVerdict>& verdicts) {
  os << "lemma,sign,b,sup_ratio,sup_ratio_refined,rel_change,stable\n";
  for (const auto& v : verdicts) {
    os << v.lemma << ',' << (v.sign ? to_string(*v.sign) : "") << ',' << (std::isnan(v.b) ? "all" : fmt17(v.b))
       << ',' << fmt17(v.sup_ratio) << ',' << fmt17(v.sup_ratio_refined) << ',' << fmt17(v.rel_change) << ','
       << (v.stable ? "true" : "false") << '\n';
  }
}

}  // namespace ostrovsky
