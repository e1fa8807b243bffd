#include "ostrovsky/data.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "ostrovsky/error.hpp"

namespace ostrovsky {

std::string to_string(DatumFamily family) {
  switch (family) {
    case DatumFamily::gaussian_derivative: return "gaussian-derivative";
    case DatumFamily::sech_derivative: return "sech-derivative";
    case DatumFamily::random_band_limited: return "random-band-limited";
  }
  return "?";
}

DatumFamily parse_datum_family(std::string_view text) {
  if (text == "gaussian-derivative") return DatumFamily::gaussian_derivative;
  if (text == "sech-derivative") return DatumFamily::sech_derivative;
  if (text == "random-band-limited") return DatumFamily::random_band_limited;
  throw InvalidArgument("unknown datum family '" + std::string(text) + "'");
}

namespace {

struct Packet {
  double weight, center, width, carrier, phase;
};

std::vector<Packet> draw_packets(const DatumSpec& spec) {
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Packet> out(spec.packets);
  for (auto& p : out) {
    p.weight = 2.0 * unit(rng) - 1.0;
    p.center = spec.spread * (2.0 * unit(rng) - 1.0);
    p.width = spec.width * (0.7 + 0.8 * unit(rng));
    p.carrier = spec.band * unit(rng);
    p.phase = 2.0 * std::numbers::pi * unit(rng);
  }
  return out;
}

// d/dx [cos(k (x - c) + phi) exp(-(x - c)^2 / 2 w^2)]
double packet_value(const Packet& p, double x) {
  const double y = x - p.center;
  const double env = std::exp(-y * y / (2.0 * p.width * p.width));
  const double arg = p.carrier * y + p.phase;
  return -(p.carrier * std::sin(arg) + y / (p.width * p.width) * std::cos(arg)) * env;
}

void validate(const DatumSpec& spec) {
  if (!std::isfinite(spec.amplitude)) throw InvalidArgument("datum amplitude must be finite");
  if (!(spec.width > 0.0)) throw InvalidArgument("datum width must be positive");
  if (spec.family == DatumFamily::random_band_limited) {
    if (spec.packets < 1) throw InvalidArgument("datum packets must be >= 1");
    if (!(spec.band >= 0.0) || !(spec.spread >= 0.0)) throw InvalidArgument("datum band and spread must be >= 0");
  }
}

}  // namespace

std::function<double(double)> datum_profile(const DatumSpec& spec) {
  validate(spec);
  const double a = spec.amplitude, w = spec.width, c = spec.center;
  switch (spec.family) {
    case DatumFamily::gaussian_derivative:
      return [=](double x) {
        const double y = (x - c) / w;
        return a * y * std::exp(-0.5 * y * y);
      };
    case DatumFamily::sech_derivative:
      return [=](double x) {
        const double y = (x - c) / w;
        return a * std::tanh(y) / std::cosh(y);
      };
    case DatumFamily::random_band_limited: {
      const auto packets = draw_packets(spec);
      auto raw = [packets](double x) {
        double sum = 0.0;
        for (const auto& p : packets) sum += p.weight * packet_value(p, x);
        return sum;
      };
      // Grid-independent normalisation on a fixed fine sampling.
      const double reach = spec.spread + 8.0 * 1.5 * w;
      double peak = 0.0;
      constexpr int samples = 8192;
      for (int i = 0; i <= samples; ++i) peak = std::max(peak, std::abs(raw(-reach + 2.0 * reach * i / samples)));
      const double scale = peak > 0.0 ? a / peak : 0.0;
      return [raw, scale](double x) { return scale * raw(x); };
    }
  }
  throw InvalidArgument("unknown datum family");
}

std::function<std::complex<double>(double)> datum_transform(const DatumSpec& spec) {
  validate(spec);
  const double a = spec.amplitude, w = spec.width, c = spec.center;
  const std::complex<double> minus_i(0.0, -1.0);
  switch (spec.family) {
    case DatumFamily::gaussian_derivative:
      return [=](double xi) {
        return minus_i * a * w * w * xi * std::exp(-0.5 * w * w * xi * xi) * std::polar(1.0, -c * xi);
      };
    case DatumFamily::sech_derivative:
      return [=](double xi) {
        const double k = std::sqrt(std::numbers::pi / 2.0);
        return minus_i * a * w * w * k * xi / std::cosh(0.5 * std::numbers::pi * w * xi) * std::polar(1.0, -c * xi);
      };
    case DatumFamily::random_band_limited:
      break;
  }
  throw InvalidArgument("datum_transform: no closed form for family " + to_string(spec.family));
}

SpectralField make_datum(const GridPtr& grid, const DatumSpec& spec) {
  auto field = SpectralField::sample(grid, datum_profile(spec));
  return project_mean_zero(field);
}

SpectralField unit_bump(const GridPtr& grid, double width, double center) {
  DatumSpec spec;
  spec.width = width;
  spec.center = center;
  auto field = make_datum(grid, spec);
  const double norm = field.l2_norm();
  if (!(norm > 0.0)) throw PreconditionError("unit_bump: bump vanishes on this grid");
  return field * (1.0 / norm);
}

}  // namespace ostrovsky
