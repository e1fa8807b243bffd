#include "ostrovsky/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fft.hpp"
#include "ostrovsky/error.hpp"

namespace ostrovsky {

namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

void require_size(const GridSpec& grid, std::size_t size, const char* what) {
  if (size != static_cast<std::size_t>(grid.size())) {
    std::ostringstream os;
    os << what << ": array of length " << size << " does not match grid size " << grid.size();
    throw PreconditionError(os.str());
  }
}

}  // namespace

GridSpec::GridSpec(int n, double half_length)
    : n_(n),
      half_length_(half_length),
      dx_(2.0 * half_length / n),
      dxi_(std::numbers::pi / half_length),
      points_(n),
      frequencies_(n) {
  for (int j = 0; j < n; ++j) points_[j] = -half_length + j * dx_;
  for (int k = 0; k < n; ++k) {
    const int signed_k = k <= n / 2 ? k : k - n;
    frequencies_[k] = dxi_ * signed_k;
  }
}

GridPtr make_grid(int n_points, double half_length) {
  if (n_points < 8 || n_points % 2 != 0) {
    throw InvalidArgument("make_grid: n_points must be even and >= 8, got " + std::to_string(n_points));
  }
  if (!(half_length > 0.0) || !std::isfinite(half_length)) {
    throw InvalidArgument("make_grid: half_length must be positive and finite");
  }
  return GridPtr(new GridSpec(n_points, half_length));
}

std::vector<cplx> forward_transform(const GridSpec& grid, std::span<const cplx> physical) {
  require_size(grid, physical.size(), "forward_transform");
  const int n = grid.size();
  std::vector<cplx> out(n);
  detail::dft_forward(n, physical.data(), out.data());
  const double scale = grid.dx() * kInvSqrt2Pi;
  for (int k = 0; k < n; ++k) out[k] *= (k % 2 == 0 ? scale : -scale);
  return out;
}

std::vector<cplx> forward_transform(const GridSpec& grid, std::span<const double> physical) {
  std::vector<cplx> tmp(physical.begin(), physical.end());
  return forward_transform(grid, std::span<const cplx>(tmp));
}

std::vector<cplx> inverse_transform(const GridSpec& grid, std::span<const cplx> spectral) {
  require_size(grid, spectral.size(), "inverse_transform");
  const int n = grid.size();
  const double scale = grid.dxi() * kInvSqrt2Pi;
  std::vector<cplx> tmp(n);
  for (int k = 0; k < n; ++k) tmp[k] = spectral[k] * (k % 2 == 0 ? scale : -scale);
  detail::dft_backward(n, tmp.data(), tmp.data());
  return tmp;
}

// --- SpectralField -----------------------------------------------------------

SpectralField SpectralField::zeros(GridPtr grid) {
  const int n = grid->size();
  return SpectralField(std::move(grid), std::vector<double>(n, 0.0), std::vector<cplx>(n), 0.0);
}

SpectralField SpectralField::from_physical(GridPtr grid, std::vector<double> values) {
  require_size(*grid, values.size(), "SpectralField::from_physical");
  auto spec = forward_transform(*grid, std::span<const double>(values));
  return SpectralField(std::move(grid), std::move(values), std::move(spec), 0.0);
}

SpectralField SpectralField::from_spectral(GridPtr grid, std::vector<cplx> coefficients) {
  require_size(*grid, coefficients.size(), "SpectralField::from_spectral");
  auto phys = inverse_transform(*grid, coefficients);
  std::vector<double> real(phys.size());
  double residue = 0.0;
  for (std::size_t j = 0; j < phys.size(); ++j) {
    real[j] = phys[j].real();
    residue = std::max(residue, std::abs(phys[j].imag()));
  }
  return SpectralField(std::move(grid), std::move(real), std::move(coefficients), residue);
}

SpectralField SpectralField::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> values(grid->size());
  const auto x = grid->points();
  for (std::size_t j = 0; j < values.size(); ++j) values[j] = f(x[j]);
  return from_physical(std::move(grid), std::move(values));
}

bool SpectralField::is_mean_zero(double rel_tol) const {
  const double zero = std::abs(spectral_[0]);
  if (zero == 0.0) return true;
  double biggest = 0.0;
  for (const auto& c : spectral_) biggest = std::max(biggest, std::abs(c));
  return zero <= rel_tol * biggest;
}

double SpectralField::l2_norm() const {
  double sum = 0.0;
  for (double v : physical_) sum += v * v;
  return std::sqrt(sum * grid_->dx());
}

double SpectralField::max_abs() const {
  double m = 0.0;
  for (double v : physical_) m = std::max(m, std::abs(v));
  return m;
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!a.grid().same_as(b.grid())) throw PreconditionError("fields live on different grids");
}

SpectralField SpectralField::operator+(const SpectralField& other) const {
  require_same_grid(*this, other);
  auto phys = physical_;
  auto spec = spectral_;
  for (std::size_t j = 0; j < phys.size(); ++j) {
    phys[j] += other.physical_[j];
    spec[j] += other.spectral_[j];
  }
  return SpectralField(grid_, std::move(phys), std::move(spec), imag_residue_ + other.imag_residue_);
}

SpectralField SpectralField::operator-(const SpectralField& other) const { return *this + other * -1.0; }

SpectralField SpectralField::operator*(double factor) const {
  auto phys = physical_;
  auto spec = spectral_;
  for (auto& v : phys) v *= factor;
  for (auto& c : spec) c *= factor;
  return SpectralField(grid_, std::move(phys), std::move(spec), imag_residue_ * std::abs(factor));
}

SpectralField pointwise_product(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b);
  std::vector<double> prod(a.physical().size());
  for (std::size_t j = 0; j < prod.size(); ++j) prod[j] = a.physical()[j] * b.physical()[j];
  return SpectralField::from_physical(a.grid_ptr(), std::move(prod));
}

// --- multipliers --------------------------------------------------------------

SpectralField apply_multiplier(const SpectralField& field, const std::function<cplx(double)>& symbol,
                               cplx zero_mode_factor) {
  const auto& grid = field.grid();
  const auto xi = grid.frequencies();
  const int n = grid.size();
  const int nyq = grid.nyquist_index();
  std::vector<cplx> out(field.spectral().begin(), field.spectral().end());
  out[0] *= zero_mode_factor;
  for (int k = 1; k < n; ++k) {
    if (k == nyq) {
      out[k] *= symbol(xi[k]).real();
    } else if (out[k] != cplx(0.0)) {
      out[k] *= symbol(xi[k]);
    }
  }
  return SpectralField::from_spectral(field.grid_ptr(), std::move(out));
}

SpectralField fractional_derivative(const SpectralField& field, double b) {
  if (!(b >= -1.0 && b <= 1.0)) throw InvalidArgument("fractional_derivative: order b must lie in [-1, 1]");
  if (b < 0.0 && !field.is_mean_zero()) {
    throw PreconditionError("fractional_derivative: negative order requires a mean-zero field");
  }
  if (b == 0.0) return apply_multiplier(field, [](double) { return cplx(1.0); }, 0.0);
  return apply_multiplier(field, [b](double xi) { return cplx(std::pow(std::abs(xi), b)); }, 0.0);
}

SpectralField antiderivative(const SpectralField& field) {
  if (!field.is_mean_zero()) throw PreconditionError("antiderivative: input must be mean-zero");
  return apply_multiplier(field, [](double xi) { return cplx(0.0, -1.0 / xi); }, 0.0);
}

SpectralField project_mean_zero(const SpectralField& field) {
  std::vector<cplx> out(field.spectral().begin(), field.spectral().end());
  out[0] = 0.0;
  out[field.grid().nyquist_index()] = 0.0;
  return SpectralField::from_spectral(field.grid_ptr(), std::move(out));
}

SpectralField spatial_derivative(const SpectralField& field, int order) {
  if (order < 0 || order > 4) throw InvalidArgument("spatial_derivative: order must be in 0..4");
  if (order == 0) return field;
  return apply_multiplier(
      field,
      [order](double xi) {
        cplx m(1.0);
        for (int i = 0; i < order; ++i) m *= cplx(0.0, xi);
        return m;
      },
      0.0);
}

SpectralField dealias(const SpectralField& field) {
  const int n = field.grid().size();
  const int cutoff = n / 3;
  std::vector<cplx> out(field.spectral().begin(), field.spectral().end());
  for (int k = 0; k < n; ++k) {
    const int signed_k = k <= n / 2 ? k : k - n;
    if (std::abs(signed_k) > cutoff) out[k] = 0.0;
  }
  return SpectralField::from_spectral(field.grid_ptr(), std::move(out));
}

double boundary_mass_ratio(const SpectralField& field) {
  const double peak = field.max_abs();
  if (peak == 0.0) return 0.0;
  const auto x = field.grid().points();
  const double half = 0.5 * field.grid().half_length();
  double edge = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (std::abs(x[j]) >= half) edge = std::max(edge, std::abs(field.physical()[j]));
  }
  return edge / peak;
}

bool check_boundary_mass(const SpectralField& field, std::string_view context) {
  const double ratio = boundary_mass_ratio(field);
  if (ratio > 1e-8) {
    std::ostringstream os;
    os << context << ": field magnitude at |x| >= L/2 is " << ratio
       << " of its maximum; wrap-around may affect results";
    warn(os.str());
    return true;
  }
  return false;
}

}  // namespace ostrovsky
