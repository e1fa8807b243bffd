#pragma once

// Stein derivative
//
//     (D_b f)(x) = ( \int |f(x) - f(y)|^2 / |x - y|^{1+2b} dy )^{1/2},  b in (0, 1),
//
// by singular-kernel quadrature, together with the numerical forms of the
// product and Leibniz inequalities that tie it to the multiplier D^b.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "ostrovsky/grid.hpp"

namespace ostrovsky {

/// Quadrature resolution. Per side of x the offset w = |y - x| is split into
/// an inner zone [0, delta] on the graded mesh delta (i/m)^grading, an outer
/// zone [delta, R] of panels no wider than 8w/panels and no wider than
/// 32/(panels Lip) (so at most 32/panels radians of phase), and a tail
/// w > R closed by the function's tail model.
struct SteinQuadSpec {
  double inner_radius = 0.05;
  double outer_radius = 200.0;
  int panels = 32;
  double grading = 3.0;
  double tolerance = 1e-6;  // relative; the result is flagged if error exceeds it

  /// Doubled panels, halved delta, doubled R.
  SteinQuadSpec refined() const;
  void validate() const;
};

/// What the integrand does beyond the outer radius.
struct TailModel {
  enum class Kind {
    /// Only |f| <= sup is known: contributes nothing, bounded by 4 sup^2 R^{-2b}/(2b).
    bounded,
    /// f(y) -> limit_minus / limit_plus as y -> -inf / +inf with
    /// |f(y) - limit| <= envelope(r) for |y| >= r.
    limits,
    /// |f| = 1 and f = exp(i theta) with |theta'| nondecreasing in |y| and
    /// |theta'(y)| >= rate_min(r) for |y| >= r.
    oscillatory,
    /// f(y + period) = f(y): the kernel is folded onto one period.
    periodic,
  };
  Kind kind = Kind::bounded;
  std::complex<double> limit_minus = 0.0;
  std::complex<double> limit_plus = 0.0;
  std::function<double(double)> envelope;
  std::function<double(double)> rate_min;
  double period = 0.0;
};

/// A callable on the line with the local data the quadrature needs.
struct FuncOnLine {
  std::function<std::complex<double>(double)> eval;
  /// Upper bound for |f'| near y (used to size panels and by validate_lipschitz).
  std::function<double(double)> lipschitz;
  double sup = 1.0;  // sup |f|
  TailModel tail;
  /// Points where f is not Lipschitz; each is excluded with a closed-form bound.
  std::vector<double> singular_points;
  double exclusion_radius = 0.0;
  std::string name;

  std::complex<double> operator()(double y) const { return eval(y); }
};

FuncOnLine constant_function(std::complex<double> c);
/// e^{i a y}.
FuncOnLine plane_wave(double a);
/// amplitude exp(-(y-center)^2/2 width^2) e^{i modulation y}.
FuncOnLine gaussian(double amplitude, double width, double center = 0.0, double modulation = 0.0);
/// e^{i t y^3}, t > 0.
FuncOnLine cubic_phase(double t);
/// e^{+-i t / y}, t > 0; y = 0 is excluded with radius `exclusion_radius`.
FuncOnLine inverse_phase(double t, double sign, double exclusion_radius);
/// Band-limited trigonometric interpolant of a grid field (periodic tail).
FuncOnLine interpolant(const SpectralField& field);
FuncOnLine product(const FuncOnLine& f, const FuncOnLine& g);
/// y -> f(lambda y), lambda > 0.
FuncOnLine scaled_argument(const FuncOnLine& f, double lambda);
/// y -> f(y - h).
FuncOnLine translated(const FuncOnLine& f, double h);

/// Samples |f(y + h) - f(y)| <= max Lip |h| and |f| <= sup on [lo, hi];
/// throws InvalidArgument naming the first violation.
void validate_lipschitz(const FuncOnLine& f, double lo, double hi, int samples = 2000);

struct SteinResult {
  double value = 0.0;           // refined-level estimate of D_b f(x)
  double error = 0.0;           // |refined - coarse| plus bound-induced slack
  double tail_bound = 0.0;      // on the squared integral
  double excluded_bound = 0.0;  // on the squared integral
  bool converged = false;       // error <= tolerance * max(value, 1e-300)
};

/// Pointwise Stein derivative at x. Throws InvalidArgument for b outside
/// (0, 1) or x inside an excluded window; never throws on non-convergence
/// (see SteinResult::converged).
SteinResult stein_derivative(const FuncOnLine& f, double x, double b, const SteinQuadSpec& spec);

// --- grid fields ---------------------------------------------------------------

/// D_b of the periodic interpolant at every grid node. The kernel is folded
/// onto one period; shifted copies f(x_j + w) for all j come from one
/// multiplier and inverse transform per quadrature node. `errors` receives
/// |refined - coarse| per node when non-null.
std::vector<double> stein_profile(const SpectralField& field, double b, const SteinQuadSpec& spec,
                                  std::vector<double>* errors = nullptr);

struct SteinNorm {
  double value = 0.0;
  double error = 0.0;
};

/// ||D_b f||_{L^2} over the grid. Throws QuadratureError naming the worst x
/// when a node misses the relative tolerance.
SteinNorm stein_l2_norm(const SpectralField& field, double b, const SteinQuadSpec& spec);

/// (||f|| + ||D^b f||) / (||f|| + ||D_b f||).
struct EquivalenceRatio {
  double ratio = 0.0;
  double multiplier_side = 0.0;
  double stein_side = 0.0;
};
EquivalenceRatio equivalence_ratio(const SpectralField& field, double b, const SteinQuadSpec& spec);

struct InequalityResidual {
  double residual = 0.0;  // rhs - lhs
  double tolerance = 0.0;  // summed quadrature error estimates
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds() const { return residual >= -tolerance; }
};

/// D_b(fg)(x) <= sup|f| D_b g(x) + |g(x)| D_b f(x).
InequalityResidual product_pointwise_check(const FuncOnLine& f, const FuncOnLine& g, double b, double x,
                                           const SteinQuadSpec& spec);

/// ||D_b(fg)|| <= ||f D_b g|| + ||g D_b f|| over the grid period. The fields
/// should be band-limited to |k| < n/4 so that fg is represented exactly.
InequalityResidual product_l2_check(const SpectralField& f, const SpectralField& g, double b,
                                    const SteinQuadSpec& spec);

/// ||D^a(fg) - f D^a g - g D^a f|| and ||g||_inf ||D^a f||, products dealiased.
struct LeibnizDefect {
  double defect = 0.0;
  double bound = 0.0;
};
LeibnizDefect leibniz_defect(const SpectralField& f, const SpectralField& g, double alpha);

/// (\int |e^{iw} - 1|^2 |w|^{-1-2b} dw)^{1/2} = (2 pi / (Gamma(1+2b) sin(pi b)))^{1/2}.
double stein_constant(double b);

}  // namespace ostrovsky
