#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "ostrovsky/data.hpp"
#include "ostrovsky/error.hpp"
#include "ostrovsky/norms.hpp"
#include "ostrovsky/propagator.hpp"

using namespace ostrovsky;
using std::numbers::pi;

TEST_CASE("linear_phase") {
  CHECK(linear_phase(1.0, 1.0, Sign::plus) == 2.0);
  CHECK(linear_phase(2.0, 0.5, Sign::minus) == 3.75);
  CHECK(linear_phase(-1.0, 1.0, Sign::plus) == -2.0);
  CHECK_THROWS_AS(linear_phase(0.0, 1.0, Sign::plus), InvalidArgument);
}

TEST_CASE("sign parsing") {
  CHECK(parse_sign("+") == Sign::plus);
  CHECK(parse_sign("-") == Sign::minus);
  CHECK(parse_sign("−") == Sign::minus);
  CHECK(parse_sign("plus") == Sign::plus);
  CHECK(to_string(Sign::minus) == "-");
  CHECK_THROWS(parse_sign("x"));
}

TEST_CASE("apply_group identities") {
  auto g = make_grid(512, 32);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (Sign sign : {Sign::plus, Sign::minus}) {
    for (int i = 0; i < 5; ++i) {
      auto f = oracle::random_field(g, rng);
      const double n = f.l2_norm();
      CHECK(oracle::l2_distance(apply_group(f, 0.0, sign), f) <= 1e-14 * n);
      for (double t : {0.01, 0.1, 1.0, 10.0}) {
        auto u = apply_group(f, t, sign);
        CHECK(std::abs(u.l2_norm() - n) <= 1e-12 * n);
        CHECK(u.is_mean_zero());
        CHECK(u.imag_residue() <= 1e-12 * n);
      }
      const double s = U(rng), t = U(rng);
      auto ts = apply_group(apply_group(f, s, sign), t, sign);
      CHECK(oracle::l2_distance(ts, apply_group(f, s + t, sign)) <= 1e-12 * n);
      CHECK(oracle::l2_distance(apply_group(apply_group(f, t, sign), -t, sign), f) <= 1e-12 * n);
      auto c1 = apply_group(fractional_derivative(f, 0.4), t, sign);
      auto c2 = fractional_derivative(apply_group(f, t, sign), 0.4);
      CHECK(oracle::l2_distance(c1, c2) <= 1e-12 * c1.l2_norm());
      auto a1 = apply_group(antiderivative(f), t, sign);
      auto a2 = antiderivative(apply_group(f, t, sign));
      CHECK(oracle::l2_distance(a1, a2) <= 1e-12 * a1.l2_norm());
      for (double hs : {0.8, 1.0}) {
        CHECK(std::abs(hs_norm(apply_group(f, t, sign), hs) - hs_norm(f, hs)) <= 1e-12 * hs_norm(f, hs));
      }
    }
  }
}

TEST_CASE("apply_group preconditions") {
  auto g = make_grid(64, 10);
  auto shifted = SpectralField::sample(g, [](double x) { return 1.0 + std::sin(pi * x / 10); });
  CHECK_THROWS_AS(apply_group(shifted, 1.0, Sign::plus), PreconditionError);
  auto f = oracle::cos_mode(g, 2);
  CHECK_THROWS_AS(apply_group(f, 1e20, Sign::plus), PreconditionError);
}

TEST_CASE("single mode evolves by its phase") {
  auto g = make_grid(128, 10);
  const int k = 3;
  const double xi = pi * k / 10;
  auto f = oracle::cos_mode(g, k);
  for (Sign sign : {Sign::plus, Sign::minus}) {
    const double t = 0.7;
    const double ph = linear_phase(xi, t, sign);
    auto expected = SpectralField::sample(g, [&](double x) { return std::cos(xi * x + ph); });
    CHECK((apply_group(f, t, sign) - expected).max_abs() <= 1e-13);
  }
}

TEST_CASE("group_quadrature, continuum measure, t = 0 against the analytic inverse transform") {
  auto fhat = [](double xi) { return std::complex<double>(xi * std::exp(-0.5 * xi * xi), 0.0); };
  GroupQuadSpec q;
  q.tail_cutoff = 12.0;
  for (double x : {0.0, 0.5, -1.3, 2.0}) {
    auto r = group_quadrature(fhat, x, 0.0, Sign::plus, q);
    CHECK(std::abs(r.value - oracle::inverse_of_xi_gaussian(x)) <= 1e-9);
  }
}

TEST_CASE("group_quadrature, one-mode profile") {
  auto g = make_grid(64, 10);
  const int k = 4;
  const double xi = g->frequencies()[k];
  const std::complex<double> a(0.3, -0.2);
  auto fhat = [&](double z) { return std::abs(z - xi) < 1e-9 ? a : std::complex<double>(0.0); };
  GroupQuadSpec q;
  q.measure = FrequencyMeasure::grid_modes;
  q.grid = g;
  const double x = 1.7, t = 0.4;
  for (Sign sign : {Sign::plus, Sign::minus}) {
    auto r = group_quadrature(fhat, x, t, sign, q);
    const auto expected = std::exp(std::complex<double>(0.0, linear_phase(xi, t, sign) + x * xi)) * a *
                          g->dxi() / std::sqrt(2.0 * pi);
    CHECK(std::abs(r.value - expected) <= 1e-15);
  }
}

TEST_CASE("group_quadrature agrees with apply_group on the torus") {
  auto g = make_grid(512, 32);
  DatumSpec d;
  auto u = make_datum(g, d);
  auto spectral = u.spectral();
  auto fhat = [&](double xi) {
    const long k = std::lround(xi / g->dxi());
    const long idx = k >= 0 ? k : g->size() + k;
    return spectral[idx];
  };
  GroupQuadSpec q;
  q.measure = FrequencyMeasure::grid_modes;
  q.grid = g;
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<int> J(128, 383);
  for (Sign sign : {Sign::plus, Sign::minus}) {
    for (double t : {0.1, 0.3, 1.0}) {
      auto v = apply_group(u, t, sign);
      for (int i = 0; i < 3; ++i) {
        const int j = J(rng);
        auto r = group_quadrature(fhat, g->points()[j], t, sign, q);
        CHECK(std::abs(r.value.real() - v.physical()[j]) <= 1e-8);
        CHECK(std::abs(r.value.imag()) <= 1e-8);
      }
    }
  }
}

TEST_CASE("group_quadrature reports non-convergence") {
  auto fhat = [](double xi) { return std::complex<double>(xi * std::exp(-0.5 * xi * xi), 0.0); };
  GroupQuadSpec q;
  q.tail_cutoff = 12.0;
  q.tolerance = 1e-30;
  CHECK_THROWS_AS(group_quadrature(fhat, 0.5, 1.0, Sign::plus, q), QuadratureError);
}
