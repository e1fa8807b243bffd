#pragma once

#include <vector>

#include "ostrovsky/error.hpp"
#include "ostrovsky/grid.hpp"
#include "ostrovsky/norms.hpp"
#include "ostrovsky/propagator.hpp"

namespace ostrovsky {

struct PicardConfig {
  double T = 0.5;
  double dt = 1e-3;
  double tol = 1e-8;
  int max_iter = 60;
  bool dealias = true;
  Sign sign = Sign::plus;
  double s = 0.8;
  bool nonlinear = true;  // false: the linear equation (probe)
  double Cs = 1.0;        // only used to report the ball radius a

  /// Number of time steps T/dt; throws unless it is an integer >= 4.
  int steps() const;
  void validate() const;
};

struct PicardDiagnostics {
  int iterates = 0;
  std::vector<double> successive_distances;  // xT distance between consecutive iterates
  std::vector<double> contraction_ratios;    // d_n / d_{n-1}
  double final_residual = 0.0;               // xT distance between v and Psi(v)
  double ball_radius = 0.0;                  // a
  double u0_xs_norm = 0.0;                   // ||u0||_{X_s}
  double u0_weighted_norm = 0.0;             // || |x|^{s/2} u0 ||
  bool converged = false;

  double max_ratio() const;
};

/// Carries the diagnostics of a failed solve.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, PicardDiagnostics diagnostics)
      : Error(ErrorCode::convergence, what), diagnostics_(std::move(diagnostics)) {}
  const PicardDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  PicardDiagnostics diagnostics_;
};

/// 1/2 d/dx (u^2), computed pseudospectrally; with `dealias` the input and the
/// product are truncated by the two-thirds rule.
SpectralField nonlinearity(const SpectralField& u, bool dealias);

/// Psi(v)(t_m) = U(t_m) u0 - \int_0^{t_m} U(t_m - t') N(v(t')) dt', the
/// integral by the fourth-order cumulative rule on the stored time grid.
Trajectory psi_apply(const Trajectory& v, const SpectralField& u0, const PicardConfig& cfg);

struct PicardResult {
  Trajectory trajectory;
  PicardDiagnostics diagnostics;
};

/// Iterates v^{n+1} = Psi(v^n) from v^0 = U(t) u0 until the discrete xT
/// distance drops below tol. Throws ConvergenceError after three consecutive
/// contraction ratios >= 1 or at max_iter.
PicardResult picard_solve(const SpectralField& u0, const PicardConfig& cfg);

/// Fourth-order exponential time differencing (ETDRK4) with the exact linear
/// phase. Throws ConvergenceError when ||u|| exceeds ten times ||u0||.
Trajectory reference_solve(const SpectralField& u0, const PicardConfig& cfg);

/// Sum of the six seminorms of a - b.
double xt_distance(const Trajectory& a, const Trajectory& b, double s);

/// a = 2 Cs [(1 + T^{1/3+s/3}) ||u0||_{X_s} + || |x|^{s/2} u0 ||].
double ball_radius(const SpectralField& u0, double s, double Cs, double T);

/// Largest T in (0, window] (bisection to 1e-10 relative) with
///   Cs T^{1/2} (1 + T^{1/3+s/3}) (1 + T^{1/4} + T^{1/2}) a(T) < 1/2.
double existence_time(const SpectralField& u0, double s, double Cs, double window = 10.0);
/// Same with a fixed ball radius a.
double existence_time_fixed(double a, double s, double Cs, double window = 10.0);

/// xT distance of the solutions from u0 and u0 + eps phi over the Z_{s,s/2}
/// distance of the data; phi is the unit bump. eps = 0 gives 0.
double lipschitz_probe(const SpectralField& u0, double eps, const PicardConfig& cfg, double direction = 1.0);

}  // namespace ostrovsky
