#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ostrovsky/error.hpp"
#include "ostrovsky/grid.hpp"
#include "ostrovsky/norms.hpp"
#include "ostrovsky/solver.hpp"

using namespace ostrovsky;
using std::numbers::pi;

namespace {

double max_diff(const SpectralField& a, const SpectralField& b) { return (a - b).max_abs(); }

double sum_sq_physical(const SpectralField& f) {
  double s = 0.0;
  for (double v : f.physical()) s += v * v;
  return s * f.grid().dx();
}

double sum_sq_spectral(const SpectralField& f) {
  double s = 0.0;
  for (auto c : f.spectral()) s += std::norm(c);
  return s * f.grid().dxi();
}

}  // namespace

TEST_CASE("make_grid axes") {
  auto g = make_grid(8, pi);
  CHECK(g->dx() == doctest::Approx(pi / 4).epsilon(1e-15));
  const double expected[] = {0, 1, 2, 3, 4, -3, -2, -1};
  for (int k = 0; k < 8; ++k) CHECK(g->frequencies()[k] == doctest::Approx(expected[k]).epsilon(1e-15));
  int zeros = 0;
  for (double xi : g->frequencies()) zeros += xi == 0.0;
  CHECK(zeros == 1);

  auto h = make_grid(256, 32);
  CHECK(h->dx() == 0.25);
  CHECK(h->max_frequency() == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(h->points()[0] == -32.0);
  CHECK(h->points()[255] == doctest::Approx(32.0 - 0.25));

  CHECK_THROWS_AS(make_grid(7, 10), InvalidArgument);
  CHECK_THROWS_AS(make_grid(6, 10), InvalidArgument);
  CHECK_THROWS_AS(make_grid(16, 0.0), InvalidArgument);
  CHECK_THROWS_AS(make_grid(16, -1.0), InvalidArgument);
}

TEST_CASE("transforms: zero, single mode, Plancherel, round trip") {
  auto g = make_grid(128, 10);
  auto zero = SpectralField::zeros(g);
  for (auto c : zero.spectral()) CHECK(std::abs(c) == 0.0);

  auto s1 = SpectralField::sample(g, [](double x) { return std::sin(pi * x / 10); });
  int nonzero = 0;
  for (auto c : s1.spectral()) nonzero += std::abs(c) > 1e-12;
  CHECK(nonzero == 2);
  CHECK(std::abs(s1.spectral()[1] - std::conj(s1.spectral()[127])) < 1e-15);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 10; ++i) {
    auto f = oracle::random_field(g, rng);
    CHECK(std::abs(sum_sq_physical(f) - sum_sq_spectral(f)) <= 1e-12 * sum_sq_physical(f));
    auto back = inverse_transform(*g, f.spectral());
    double err = 0.0;
    for (int j = 0; j < g->size(); ++j) err = std::max(err, std::abs(back[j] - f.physical()[j]));
    CHECK(err <= 1e-12 * f.max_abs());
    CHECK(f.is_mean_zero());
  }
  std::vector<double> wrong(64, 0.0);
  CHECK_THROWS(forward_transform(*g, std::span<const double>(wrong)));
  CHECK_THROWS(SpectralField::from_physical(g, wrong));
}

TEST_CASE("fractional_derivative") {
  auto g = make_grid(128, 10);
  std::mt19937_64 rng(4);
  auto f = oracle::random_field(g, rng);
  CHECK(max_diff(fractional_derivative(f, 0.0), f) <= 1e-13 * f.max_abs());

  auto mode = oracle::cos_mode(g, 5);
  auto d = fractional_derivative(mode, 0.5);
  const double k = pi * 5 / 10;
  CHECK(max_diff(d, mode * std::sqrt(k)) <= 1e-13);

  auto round = fractional_derivative(fractional_derivative(f, 0.5), -0.5);
  CHECK(max_diff(round, f) <= 1e-12 * f.max_abs());

  CHECK_THROWS_AS(fractional_derivative(f, 1.5), InvalidArgument);
  auto shifted = SpectralField::sample(g, [](double x) { return 1.0 + std::sin(pi * x / 10); });
  CHECK_THROWS_AS(fractional_derivative(shifted, -0.5), PreconditionError);
  CHECK(fractional_derivative(shifted, 0.5).is_mean_zero());
}

TEST_CASE("antiderivative") {
  auto g = make_grid(128, 10);
  std::mt19937_64 rng(5);
  auto f = oracle::random_field(g, rng);
  CHECK(max_diff(spatial_derivative(antiderivative(f), 1), f) <= 1e-12 * f.max_abs());

  auto c = oracle::cos_mode(g, 1);
  auto expected = SpectralField::sample(g, [](double x) { return 10.0 / pi * std::sin(pi * x / 10); });
  CHECK(max_diff(antiderivative(c), expected) <= 1e-12);

  double weighted = 0.0;
  for (int k = 0; k < g->size(); ++k) {
    const double xi = g->frequencies()[k];
    if (xi != 0.0) weighted += std::norm(f.spectral()[k]) / (xi * xi);
  }
  CHECK(antiderivative(f).l2_norm() == doctest::Approx(std::sqrt(weighted * g->dxi())).epsilon(1e-12));

  auto shifted = SpectralField::sample(g, [](double x) { return 1.0 + std::sin(pi * x / 10); });
  CHECK_THROWS_AS(antiderivative(shifted), PreconditionError);
}

TEST_CASE("project_mean_zero") {
  auto g = make_grid(64, 10);
  auto one = SpectralField::sample(g, [](double) { return 1.0; });
  CHECK(project_mean_zero(one).max_abs() <= 1e-15);
  std::mt19937_64 rng(6);
  auto f = oracle::random_field(g, rng, 20);
  CHECK(max_diff(project_mean_zero(f), f) <= 1e-15 * f.max_abs() + 1e-15);
  auto shifted = SpectralField::sample(g, [](double x) { return 1.0 + std::sin(pi * x / 10); });
  auto s = SpectralField::sample(g, [](double x) { return std::sin(pi * x / 10); });
  CHECK(max_diff(project_mean_zero(shifted), s) <= 1e-14);
}

TEST_CASE("spatial_derivative") {
  auto g = make_grid(128, 10);
  std::mt19937_64 rng(7);
  auto f = oracle::random_field(g, rng);
  CHECK(max_diff(spatial_derivative(f, 0), f) == 0.0);
  auto mode = oracle::cos_mode(g, 3);
  const double k = pi * 3 / 10;
  // d^3/dx^3 cos(kx) = k^3 sin(kx)
  auto expected = SpectralField::sample(g, [k](double x) { return k * k * k * std::sin(k * x); });
  CHECK(max_diff(spatial_derivative(mode, 3), expected) <= 1e-11);
  CHECK_THROWS_AS(spatial_derivative(f, 5), InvalidArgument);

  auto band = oracle::random_field(g, rng, 20);
  auto half_dx_square = nonlinearity(band, true);
  auto direct = dealias(pointwise_product(band, spatial_derivative(band, 1)));
  CHECK(max_diff(half_dx_square, direct) <= 1e-12 * std::max(1.0, direct.max_abs()));
}

TEST_CASE("multipliers commute, preserve the mean-zero class and reality") {
  auto g = make_grid(256, 20);
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5; ++i) {
    auto f = oracle::random_field(g, rng);
    for (double b : {-0.7, 0.3, 1.0}) {
      auto ab = fractional_derivative(antiderivative(f), b);
      auto ba = antiderivative(fractional_derivative(f, b));
      CHECK(max_diff(ab, ba) <= 1e-12 * ab.max_abs());
      CHECK(ab.is_mean_zero());
      CHECK(ab.imag_residue() <= 1e-12 * std::max(1.0, ab.max_abs()));
    }
    for (int order = 1; order <= 4; ++order) {
      auto d = spatial_derivative(f, order);
      CHECK(d.is_mean_zero());
      CHECK(d.imag_residue() <= 1e-12 * std::max(1.0, d.max_abs()));
    }
    CHECK(dealias(f).is_mean_zero());
  }
}

TEST_CASE("dealias truncates beyond n/3") {
  auto g = make_grid(96, 10);
  auto low = oracle::cos_mode(g, 32);
  auto high = oracle::cos_mode(g, 33);
  CHECK(max_diff(dealias(low), low) <= 1e-14);
  CHECK(dealias(high).max_abs() <= 1e-13);
}

TEST_CASE("boundary mass") {
  auto g = make_grid(256, 32);
  auto narrow = SpectralField::sample(g, [](double x) { return x * std::exp(-x * x / 2); });
  CHECK(boundary_mass_ratio(narrow) < 1e-12);
  CHECK_FALSE(check_boundary_mass(narrow, "narrow"));
  auto wide = SpectralField::sample(g, [](double x) { return std::sin(pi * x / 32); });
  CHECK(boundary_mass_ratio(wide) > 0.5);
}
