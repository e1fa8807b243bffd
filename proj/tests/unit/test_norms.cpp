#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "ostrovsky/error.hpp"
#include "ostrovsky/norms.hpp"

using namespace ostrovsky;
using std::numbers::pi;

TEST_CASE("hs_norm") {
  auto g = make_grid(128, 10);
  std::mt19937_64 rng(41);
  auto f = oracle::random_field(g, rng);
  CHECK(hs_norm(f, 0.0) == doctest::Approx(f.l2_norm()).epsilon(1e-13));
  CHECK(hs_norm(f, 0.8) >= f.l2_norm());
  const int k = 4;
  const double xi = pi * k / 10;
  auto m = oracle::cos_mode(g, k);
  CHECK(hs_norm(m, 0.8) == doctest::Approx(std::pow(1 + xi * xi, 0.4) * m.l2_norm()).epsilon(1e-13));
  CHECK_THROWS_AS(hs_norm(f, 1.5), InvalidArgument);
}

TEST_CASE("hom_norm") {
  auto g = make_grid(128, 10);
  std::mt19937_64 rng(42);
  for (int i = 0; i < 5; ++i) {
    auto f = oracle::random_field(g, rng);
    CHECK(hom_norm(f, 0.0) == doctest::Approx(f.l2_norm()).epsilon(1e-13));
    for (double s : {0.3, 0.8, 1.0}) CHECK(hom_norm(f, -s) <= antiderivative(f).l2_norm() + f.l2_norm());
  }
  auto m = oracle::cos_mode(g, 3);
  CHECK(hom_norm(m, -1.0) == doctest::Approx(antiderivative(m).l2_norm()).epsilon(1e-13));
  CHECK(hom_norm(m, -1.0) == doctest::Approx(m.l2_norm() / (pi * 3 / 10)).epsilon(1e-13));
}

TEST_CASE("weighted_norm") {
  auto g = make_grid(512, 32);
  std::mt19937_64 rng(43);
  auto f = oracle::random_field(g, rng);
  CHECK(weighted_norm(f, 0.0) == doctest::Approx(f.l2_norm()).epsilon(1e-13));
  std::vector<double> spike(512, 0.0);
  spike[256] = 1.0;  // x = 0
  CHECK(weighted_norm(SpectralField::from_physical(g, spike), 0.5) == 0.0);

  const double w = 0.02;
  auto bump = [&](double c) {
    return SpectralField::sample(g, [&](double x) { return std::exp(-(x - c) * (x - c) / (2 * w * w)); });
  };
  auto at1 = bump(1.0), at2 = bump(2.0);
  CHECK(weighted_norm(at2, 0.5) / weighted_norm(at1, 0.5) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-3));
}

TEST_CASE("homogeneity") {
  auto g = make_grid(128, 10);
  std::mt19937_64 rng(44);
  auto f = oracle::random_field(g, rng);
  for (double lambda : {0.5, 3.0}) {
    auto h = f * lambda;
    CHECK(hs_norm(h, 0.8) == doctest::Approx(lambda * hs_norm(f, 0.8)).epsilon(1e-12));
    CHECK(hom_norm(h, -0.8) == doctest::Approx(lambda * hom_norm(f, -0.8)).epsilon(1e-12));
    CHECK(weighted_norm(h, 0.4) == doctest::Approx(lambda * weighted_norm(f, 0.4)).epsilon(1e-12));
    CHECK(z_norm(h, 0.8, 0.4) == doctest::Approx(lambda * z_norm(f, 0.8, 0.4)).epsilon(1e-12));
  }
  CHECK(xs_norm(f, 0.8) == doctest::Approx(hs_norm(f, 0.8) + antiderivative(f).l2_norm()).epsilon(1e-14));
}

TEST_CASE("trajectory seminorms") {
  auto g = make_grid(128, 10);
  const double dt = 0.25;
  SUBCASE("zero trajectory") {
    std::vector<SpectralField> states(5, SpectralField::zeros(g));
    auto traj = make_trajectory(g, Sign::plus, dt, states);
    auto rep = trajectory_norms(traj, 0.8);
    for (double n : rep.seminorms.n) CHECK(n == 0.0);
    CHECK(rep.xT == 0.0);
  }
  SUBCASE("constant single mode on [0, 1]") {
    const int k = 4;  // the grid hits the extrema of cos and sin
    const double xi = pi * k / 10, amp = 0.7;
    std::vector<SpectralField> states(5, oracle::cos_mode(g, k, amp));
    auto s = solution_seminorms(states, dt, 0.8);
    CHECK(s.n[2] == doctest::Approx(xi * amp).epsilon(1e-12));
    CHECK(s.n[0] == doctest::Approx(hs_norm(states[0], 0.8)).epsilon(1e-13));
    CHECK(s.n[1] == doctest::Approx(amp * std::sqrt(10.0) / xi).epsilon(1e-12));
    // n4: sup_x |D^s d_x v| in L^2 over [0, 1] of a constant = xi^{1+s} amp.
    CHECK(s.n[3] == doctest::Approx(std::pow(xi, 1.8) * amp).epsilon(1e-12));
  }
  SUBCASE("linear flow keeps n1 and n2 per slice") {
    std::mt19937_64 rng(45);
    auto f = oracle::random_field(g, rng);
    std::vector<SpectralField> states;
    for (int m = 0; m <= 8; ++m) states.push_back(apply_group(f, m * 0.1, Sign::minus));
    auto traj = make_trajectory(g, Sign::minus, 0.1, states);
    auto rep = trajectory_norms(traj, 0.9);
    for (const auto& sl : rep.slices) {
      CHECK(std::abs(sl.hs - rep.slices[0].hs) <= 1e-12 * rep.slices[0].hs);
      CHECK(std::abs(sl.hom_minus_s - rep.slices[0].hom_minus_s) <= 1e-12 * rep.slices[0].hom_minus_s);
    }
    double sum = 0.0;
    for (double n : rep.seminorms.n) sum += n;
    CHECK(rep.xT == sum);
    std::ostringstream os;
    write_norm_csv(os, rep);
    CHECK(os.str().rfind("t,l2,hs,hom_minus_s,weighted,n1,n2,n3,n4,n5,n6,xT\n", 0) == 0);
  }
  SUBCASE("validation") {
    std::vector<SpectralField> three(3, SpectralField::zeros(g));
    CHECK_THROWS(solution_seminorms(three, dt, 0.8));
    auto shifted = SpectralField::sample(g, [](double x) { return 1.0 + std::sin(pi * x / 10); });
    std::vector<SpectralField> bad(5, shifted);
    CHECK_THROWS_AS(make_trajectory(g, Sign::plus, dt, bad), PreconditionError);
    std::vector<SpectralField> ok(5, SpectralField::zeros(g));
    CHECK_THROWS(trajectory_norms(make_trajectory(g, Sign::plus, dt, ok), 0.7));
  }
}
