#pragma once

// Periodic discretization of the real line and the diagonal Fourier
// multipliers built on it.
//
// Conventions. The domain is [-L, L) with x_j = -L + j dx, dx = 2L/n, and
// frequencies xi_k = pi k / L in FFT order (k = 0..n/2, -n/2+1..-1). Spectral
// coefficients sample the continuum transform
//
//     u_hat(xi) = (2 pi)^{-1/2} \int e^{-i x xi} u(x) dx
//
// so that sum_j |u_j|^2 dx == sum_k |u_hat_k|^2 dxi exactly, and multiplier
// formulas written for the line apply verbatim.
//
// The Nyquist coefficient (k = n/2) has no Hermitian partner. Multipliers act
// on it through the symmetrised symbol Re m(xi_N), which keeps real fields
// real; the admissible mean-zero class carries no Nyquist content.

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace ostrovsky {

using cplx = std::complex<double>;

class GridSpec {
 public:
  int size() const noexcept { return n_; }
  double half_length() const noexcept { return half_length_; }
  double length() const noexcept { return 2.0 * half_length_; }
  double dx() const noexcept { return dx_; }
  double dxi() const noexcept { return dxi_; }
  int nyquist_index() const noexcept { return n_ / 2; }
  double max_frequency() const noexcept { return dxi_ * (n_ / 2); }

  std::span<const double> points() const noexcept { return points_; }
  std::span<const double> frequencies() const noexcept { return frequencies_; }

  bool same_as(const GridSpec& other) const noexcept {
    return n_ == other.n_ && half_length_ == other.half_length_;
  }

 private:
  friend std::shared_ptr<const GridSpec> make_grid(int, double);
  GridSpec(int n, double half_length);

  int n_;
  double half_length_;
  double dx_;
  double dxi_;
  std::vector<double> points_;
  std::vector<double> frequencies_;
};

using GridPtr = std::shared_ptr<const GridSpec>;

/// n_points must be even and >= 8, half_length > 0.
GridPtr make_grid(int n_points, double half_length);

/// Raw transforms in the normalisation above. Sizes must match the grid.
std::vector<cplx> forward_transform(const GridSpec& grid, std::span<const double> physical);
std::vector<cplx> forward_transform(const GridSpec& grid, std::span<const cplx> physical);
std::vector<cplx> inverse_transform(const GridSpec& grid, std::span<const cplx> spectral);

/// A real-valued function on the grid held as physical samples together with
/// its Fourier coefficients. Immutable once built; both representations are
/// current for the lifetime of the object.
class SpectralField {
 public:
  static SpectralField zeros(GridPtr grid);
  static SpectralField from_physical(GridPtr grid, std::vector<double> values);
  /// Builds from coefficients; the imaginary part of the inverse transform is
  /// dropped and its magnitude kept in imag_residue().
  static SpectralField from_spectral(GridPtr grid, std::vector<cplx> coefficients);
  static SpectralField sample(GridPtr grid, const std::function<double(double)>& f);

  const GridSpec& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> physical() const noexcept { return physical_; }
  std::span<const cplx> spectral() const noexcept { return spectral_; }
  double imag_residue() const noexcept { return imag_residue_; }

  /// Zero mode below rel_tol times the largest coefficient (or exactly zero).
  bool is_mean_zero(double rel_tol = 1e-11) const;
  /// L^2(dx) norm of the samples.
  double l2_norm() const;
  double max_abs() const;

  SpectralField operator+(const SpectralField& other) const;
  SpectralField operator-(const SpectralField& other) const;
  SpectralField operator*(double factor) const;

 private:
  SpectralField(GridPtr grid, std::vector<double> physical, std::vector<cplx> spectral, double residue)
      : grid_(std::move(grid)),
        physical_(std::move(physical)),
        spectral_(std::move(spectral)),
        imag_residue_(residue) {}

  GridPtr grid_;
  std::vector<double> physical_;
  std::vector<cplx> spectral_;
  double imag_residue_ = 0.0;
};

/// Pointwise product computed on the grid (no dealiasing).
SpectralField pointwise_product(const SpectralField& a, const SpectralField& b);

/// Throws PreconditionError if the two fields live on different grids.
void require_same_grid(const SpectralField& a, const SpectralField& b);

// Generic diagonal multiplier. `symbol(xi)` is evaluated on every non-zero
// frequency; the zero mode is multiplied by `zero_mode_factor`.
SpectralField apply_multiplier(const SpectralField& field, const std::function<cplx(double)>& symbol,
                               cplx zero_mode_factor);

/// D^b: multiplies by |xi|^b, zero mode set to 0. b in [-1, 1]; for b < 0 the
/// input must be mean-zero.
SpectralField fractional_derivative(const SpectralField& field, double b);

/// d/dx^{-1}: divides by i xi. Input must be mean-zero.
SpectralField antiderivative(const SpectralField& field);

/// Zeroes the k = 0 and Nyquist coefficients.
SpectralField project_mean_zero(const SpectralField& field);

/// (i xi)^order, order in 0..4.
SpectralField spatial_derivative(const SpectralField& field, int order);

/// Zeroes every mode with |k| > n/3 (two-thirds rule).
SpectralField dealias(const SpectralField& field);

/// Largest |u| at |x| >= L/2 relative to max |u|; used for wrap-around checks.
double boundary_mass_ratio(const SpectralField& field);

/// Emits a warning if boundary_mass_ratio exceeds 1e-8; returns true if so.
bool check_boundary_mass(const SpectralField& field, std::string_view context);

}  // namespace ostrovsky
