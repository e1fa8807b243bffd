#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ostrovsky/data.hpp"
#include "ostrovsky/solver.hpp"
#include "ostrovsky/stein.hpp"
#include "ostrovsky/sweeps.hpp"

namespace ostrovsky {

const char* library_version();

enum class ExperimentKind { persistence, lemma22, lemma23, lemma24, convergence, calibrate, stein_equivalence };

std::string to_string(ExperimentKind kind);

enum class ConvergenceMode { reference, psi, linear };

/// One run, read from an INI file with the sections
///   [experiment] [grid] [equation] [time] [picard] [datum] [sweep]
///   [quadrature] [convergence] [calibration] [stein]
/// Unknown sections or keys are configuration errors.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::persistence;
  std::filesystem::path output_dir;
  bool checkpoint = false;  // persistence: also write trajectory.bin
  bool refine = true;       // persistence: repeat at dt/2 and compare

  int n_points = 512;
  double L = 32.0;

  Sign sign = Sign::plus;
  double s = 0.8;

  double T = 0.5;
  bool T_auto = false;  // T = existence_time(u0, s, Cs) rounded down to the dt grid
  double dt = 1e-3;
  double window = 10.0;  // search window for T = auto

  double tol = 1e-8;
  int max_iter = 60;
  bool dealias = true;
  double Cs = 1.0;
  bool fallback_reference = false;  // persistence: ETDRK4 when Picard fails

  DatumSpec datum;

  std::vector<double> b_values;
  std::vector<double> t_values;
  std::vector<double> x_values;
  std::vector<double> x_over_t_pi;  // lemma23: adds x = +-t/(m pi) per t
  double x_min = 0.05;
  double exclusion_budget = 1e-2;
  double refine_threshold = 0.05;

  SteinQuadSpec quad;

  ConvergenceMode convergence_mode = ConvergenceMode::reference;
  std::vector<double> dt_values;

  std::vector<DatumSpec> corpus;
  std::optional<DatumSpec> holdout;
  double calibration_dt = 1e-3;
  double calibration_T_max = 1.0;
  int calibration_bisections = 10;

  int stein_corpus_size = 20;

  /// Checks ranges and kind-specific requirements; throws ConfigError.
  void validate() const;
  /// Canonical `[section] key = value` listing of every setting.
  std::vector<std::string> describe() const;
};

/// Parses INI text; defaults depend on the kind. Throws ConfigError naming the
/// offending key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

enum class RunStatus { ok, solver_failure, inconclusive };

struct RunOutcome {
  RunStatus status = RunStatus::ok;
  std::string message;
  std::vector<std::filesystem::path> files;  // written, in order
};

/// Dispatches on the kind and writes the kind's CSV files plus summary.txt.
/// Throws ConfigError for invalid configs and IoError when outputs cannot be
/// written; solver failures and inconclusive verification are reported in
/// the outcome.
RunOutcome run_experiment(const ExperimentConfig& cfg);

RunOutcome run_persistence(const ExperimentConfig& cfg);
RunOutcome run_lemma(const ExperimentConfig& cfg);
RunOutcome run_convergence(const ExperimentConfig& cfg);
RunOutcome run_calibration(const ExperimentConfig& cfg);
RunOutcome run_stein_equivalence(const ExperimentConfig& cfg);

// --- building blocks ------------------------------------------------------------

/// Weighted-norm envelope of a solution: with b = s/2 and N_j the nonlinear
/// term at t_j,
///   E(t_m) = C_b [bracket(u0, t_m) + sum_j |w_mj| bracket(N_j, t_m - t_j)]
/// where w_mj are the cumulative time weights and bracket is the right side
/// of the weighted persistence estimate of the group.
struct Envelope {
  double Cb = 0.0;  // sup over t of || |x|^b U(t) u0 || / bracket(u0, t)
  std::vector<double> weighted;  // || |x|^b u(t_m) ||
  std::vector<double> bound;     // E(t_m)
  bool holds() const;
};
Envelope weighted_envelope(const Trajectory& traj, double s, bool dealias);

struct ConvergenceStudy {
  std::vector<double> dt;
  std::vector<double> error;
  double order = 0.0;  // least-squares slope of log error against log dt
};
/// reference: ETDRK4 at each dt against a run at a quarter of the smallest dt
/// (final-time L^2). psi: one Duhamel sweep applied to v = U(t) u0, same target rule.
/// linear: ETDRK4 without the nonlinearity against the exact group.
ConvergenceStudy convergence_study(const SpectralField& u0, const PicardConfig& base, ConvergenceMode mode,
                                   std::vector<double> dt_values);

struct CalibrationOptions {
  double dt = 1e-3;
  double T_max = 1.0;
  int bisections = 10;
  PicardConfig picard;  // s, sign, tol, max_iter, dealias; T and dt are set per probe
};

/// Largest T = m dt <= T_max at which Picard converges with every contraction
/// ratio below 1; 0 if none down to 4 dt.
double observed_contraction_time(const SpectralField& u0, const CalibrationOptions& options);

struct CalibrationEntry {
  std::string label;
  double observed_T = 0.0;
  double predicted_T = 0.0;  // existence_time at the calibrated C_s
  double datum_Cs = 0.0;     // smallest C_s with predicted T <= observed T for this datum
};

struct CalibrationResult {
  double Cs = 0.0;
  std::vector<CalibrationEntry> entries;
  std::optional<CalibrationEntry> holdout;
};

/// C_s = max over the corpus of the per-datum smallest C_s whose predicted
/// existence time does not exceed the observed contraction time. Rejects a
/// corpus with fewer than five members or a zero member ("degenerate corpus").
CalibrationResult calibrate_Cs(const GridPtr& grid, const std::vector<DatumSpec>& corpus,
                               const CalibrationOptions& options, const std::optional<DatumSpec>& holdout = {});

/// Twenty-member (or `size`) deterministic corpus cycling through the datum
/// families with varied widths, centres and seeds.
std::vector<DatumSpec> equivalence_corpus(int size);

}  // namespace ostrovsky
