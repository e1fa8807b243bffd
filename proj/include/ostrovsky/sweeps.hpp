#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ostrovsky/grid.hpp"
#include "ostrovsky/propagator.hpp"
#include "ostrovsky/stein.hpp"

namespace ostrovsky {

enum class RowFlag {
  ok,
  quadrature_failure,  // refinement error above the quadrature tolerance
  inconclusive,        // excluded-window bound moves lhs by more than 10%
};

std::string to_string(RowFlag flag);

struct SweepRow {
  double b = 0.0;
  double t = 0.0;
  double x = 0.0;  // NaN for lemma24 rows
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  double lhs_err = 0.0;
  RowFlag flag = RowFlag::ok;
  double flag_value = 0.0;  // the quantity that triggered the flag
  double boundary_mass = 0.0;  // lemma24: boundary_mass_ratio of the evolved field (warning only)
};

struct SweepTable {
  std::string lemma;  // "lemma22", "lemma23", "lemma24"
  std::optional<Sign> sign;
  SteinQuadSpec quad;
  int grid_points = 0;  // lemma24 only
  double grid_half_length = 0.0;
  std::vector<SweepRow> rows;  // sorted by (b, t, x)
  std::string status = "ok";   // "no admissible points" for an empty lemma23 filter

  /// Largest ratio over rows with flag ok, optionally restricted to one b;
  /// NaN if there is none.
  double sup_ratio(std::optional<double> b = std::nullopt) const;
  std::size_t flagged() const;
};

/// Stein quadrature for the cubic phase is set per row in the natural length
/// t^{-1/3}: inner radius quad.inner_radius t^{-1/3} and outer radius
/// |x| + quad.outer_radius t^{-1/3}.
SweepTable lemma22_sweep(const std::vector<double>& b_values, const std::vector<double>& t_values,
                         const std::vector<double>& x_values, const SteinQuadSpec& quad);

/// t^{b/3} + t^{1/3+2b/9} + (t^{1/3+2b/3} + t^{2b/3}) |x|^{2b}.
double lemma22_rhs(double b, double t, double x);

struct Lemma23Options {
  double x_min = 0.05;
  /// The window excluded around y = 0 has radius
  ///   min(|x|/4, budget rhs^2 |x|^{1+2b} / 8),
  /// which keeps its closed-form bound near budget times the squared rhs.
  double exclusion_budget = 1e-2;
};

/// Rows with |x| < x_min are dropped. Per row the quadrature runs in the
/// length |x|: inner radius quad.inner_radius |x| and outer radius
/// quad.outer_radius (|x| + t).
SweepTable lemma23_sweep(const std::vector<double>& b_values, const std::vector<double>& t_values,
                         const std::vector<double>& x_values, Sign sign, const SteinQuadSpec& quad,
                         const Lemma23Options& options = {});

/// t^b / |x|^{2b}.
double lemma23_rhs(double b, double t, double x);

/// (1 + t^{b/3} + t^{1/3+2b/9})||f|| + (t^{1/3+2b/3} + t^{2b/3})||D^{2b} f||
///   + t^b ||D^{-2b} f|| + || |x|^b f ||.
double lemma24_bracket(const SpectralField& f, double t, double b);

/// The four norms of lemma24_bracket, so that it can be evaluated at many t.
struct BracketNorms {
  double l2 = 0.0;
  double up = 0.0;        // ||D^{2b} f||
  double down = 0.0;      // ||D^{-2b} f||
  double weighted = 0.0;  // || |x|^b f ||
};
BracketNorms bracket_norms(const SpectralField& f, double b);
/// The three time factors of the bracket: {l2, up, down} coefficients.
std::array<double, 3> bracket_factors(double t, double b);

/// lhs = || |x|^b U(t) f || on the fundamental domain, rhs = lemma24_bracket.
SweepTable lemma24_check(const SpectralField& f, const std::vector<double>& t_values, double b, Sign sign);

/// Header `lemma,sign,b,t,x,lhs,rhs,ratio,lhs_err`; sign empty for lemma22.
void write_sweep_csv(std::ostream& os, const SweepTable& table);
/// Header `lemma,b,t,x,flag,value`, one line per flagged row.
void write_flags_csv(std::ostream& os, const SweepTable& table);

struct SweepVerdict {
  std::string lemma;
  std::optional<Sign> sign;
  double b = 0.0;  // NaN for the all-b line
  double sup_ratio = 0.0;
  double sup_ratio_refined = 0.0;
  double rel_change = 0.0;
  bool stable = false;  // rel_change < threshold
};

/// One verdict per b plus an all-b line.
std::vector<SweepVerdict> refinement_verdict(const SweepTable& base, const SweepTable& refined,
                                             double threshold = 0.05);

/// Header `lemma,sign,b,sup_ratio,sup_ratio_refined,rel_change,stable`.
void write_verdict_csv(std::ostream& os, const std::vector<SweepVerdict>& verdicts);

}  // namespace ostrovsky
