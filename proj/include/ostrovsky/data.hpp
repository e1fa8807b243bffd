#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

#include "ostrovsky/grid.hpp"

namespace ostrovsky {

/// Mean-zero initial-condition families.
///   gaussian-derivative  A (x-c)/w exp(-(x-c)^2 / 2w^2)
///   sech-derivative      A sech((x-c)/w) tanh((x-c)/w)
///   random-band-limited  sum of `packets` derivatives of Gaussian wave packets
///                        with seeded centres, widths, carriers and phases,
///                        rescaled so that max |u| = A
enum class DatumFamily { gaussian_derivative, sech_derivative, random_band_limited };

std::string to_string(DatumFamily family);
DatumFamily parse_datum_family(std::string_view text);

struct DatumSpec {
  DatumFamily family = DatumFamily::gaussian_derivative;
  double amplitude = 1.0;
  double width = 1.0;
  double center = 0.0;
  std::uint64_t seed = 1;
  int packets = 4;          // random-band-limited only
  double band = 2.0;        // largest carrier wavenumber, random-band-limited only
  double spread = 4.0;      // centres drawn from [-spread, spread], random-band-limited only
};

/// Samples the datum on the grid and removes the (round-off level) zero and
/// Nyquist content so the result is in the mean-zero class.
SpectralField make_datum(const GridPtr& grid, const DatumSpec& spec);

/// Continuous profile u0(x) on the line.
std::function<double(double)> datum_profile(const DatumSpec& spec);

/// Closed-form continuum transform (2 pi)^{-1/2} \int e^{-i x xi} u0(x) dx.
/// Available for the gaussian and sech families; throws InvalidArgument
/// otherwise.
std::function<std::complex<double>(double)> datum_transform(const DatumSpec& spec);

/// Unit-L^2 mean-zero bump used as a perturbation direction.
SpectralField unit_bump(const GridPtr& grid, double width = 1.0, double center = 0.0);

}  // namespace ostrovsky
