#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "ostrovsky/data.hpp"
#include "ostrovsky/error.hpp"
#include "ostrovsky/solver.hpp"

using namespace ostrovsky;
using std::numbers::pi;

namespace {

GridPtr standard_grid() { return make_grid(512, 32); }

SpectralField small_datum(const GridPtr& g, double amplitude = 0.5) {
  DatumSpec d;
  d.amplitude = amplitude;
  return make_datum(g, d);
}

Trajectory free_flow(const SpectralField& u0, const PicardConfig& cfg) {
  std::vector<SpectralField> states;
  for (int m = 0; m <= cfg.steps(); ++m) states.push_back(apply_group(u0, m * cfg.dt, cfg.sign));
  return make_trajectory(u0.grid_ptr(), cfg.sign, cfg.dt, states);
}

double omega(double xi, Sign sign) { return linear_phase(xi, 1.0, sign); }

}  // namespace

TEST_CASE("config validation") {
  PicardConfig c;
  c.T = 0.5;
  c.dt = 0.3;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.dt = 0.2;
  CHECK_THROWS(c.validate());  // fewer than 4 steps
  c.dt = 0.1;
  CHECK(c.steps() == 5);
  c.s = 0.75;
  CHECK_THROWS(c.validate());
  c.s = 1.0;
  CHECK_NOTHROW(c.validate());
  c.tol = 0.0;
  CHECK_THROWS(c.validate());
}

TEST_CASE("nonlinearity") {
  auto g = make_grid(128, 10);
  CHECK(nonlinearity(SpectralField::zeros(g), true).max_abs() == 0.0);
  const int k = 5;
  auto u = oracle::cos_mode(g, k, 0.8);
  auto n = nonlinearity(u, true);
  for (int j = 0; j < g->size(); ++j) {
    const bool allowed = j == 2 * k || j == g->size() - 2 * k;
    if (!allowed) CHECK(std::abs(n.spectral()[j]) <= 1e-14);
  }
  CHECK(std::abs(n.spectral()[0]) == 0.0);
  std::mt19937_64 rng(51);
  auto band = oracle::random_field(g, rng, 20);
  auto direct = dealias(pointwise_product(band, spatial_derivative(band, 1)));
  CHECK((nonlinearity(band, true) - direct).max_abs() <= 1e-12);
}

TEST_CASE("psi_apply") {
  auto g = standard_grid();
  auto u0 = small_datum(g);
  PicardConfig cfg;
  cfg.T = 0.2;
  cfg.dt = 0.01;
  SUBCASE("zero trajectory gives the free flow") {
    std::vector<SpectralField> zeros(cfg.steps() + 1, SpectralField::zeros(g));
    auto psi = psi_apply(make_trajectory(g, cfg.sign, cfg.dt, zeros), u0, cfg);
    auto free = free_flow(u0, cfg);
    for (std::size_t m = 0; m < psi.size(); ++m) CHECK((psi.states[m] - free.states[m]).max_abs() <= 1e-15 * u0.max_abs());
  }
  SUBCASE("t = 0 slice is the datum") {
    auto psi = psi_apply(free_flow(u0 * 3.0, cfg), u0, cfg);
    CHECK((psi.states[0] - u0).max_abs() <= 1e-15 * u0.max_abs());
  }
  SUBCASE("single mode first correction") {
    auto h = make_grid(128, 10);
    const int k = 3;
    const double xi = pi * k / 10;
    for (Sign sign : {Sign::plus, Sign::minus}) {
      PicardConfig c;
      c.T = 0.5;
      c.dt = 0.005;
      c.sign = sign;
      const double w1 = omega(xi, sign), w2 = omega(2 * xi, sign), delta = 2 * w1 - w2;
      for (double eps : {1e-2, 1e-3}) {
        auto v0 = oracle::cos_mode(h, k, eps);
        auto psi = psi_apply(free_flow(v0, c), v0, c);
        double err = 0.0;
        for (std::size_t m = 0; m < psi.size(); ++m) {
          const double t = psi.times[m];
          auto exact = SpectralField::sample(h, [&](double x) {
            const double a = 2 * xi * x + w2 * t;
            return eps * std::cos(xi * x + w1 * t) + eps * eps * xi / (2 * delta) * (std::cos(a) - std::cos(a + delta * t));
          });
          err = std::max(err, (psi.states[m] - exact).max_abs());
        }
        CHECK(err <= eps * eps * eps);
      }
    }
  }
}

TEST_CASE("picard_solve") {
  auto g = standard_grid();
  SUBCASE("zero datum") {
    PicardConfig cfg;
    cfg.T = 0.1;
    cfg.dt = 0.01;
    auto r = picard_solve(SpectralField::zeros(g), cfg);
    CHECK(r.diagnostics.iterates == 1);
    CHECK(r.diagnostics.converged);
    for (const auto& s : r.trajectory.states) CHECK(s.max_abs() == 0.0);
  }
  SUBCASE("small datum contracts and agrees with the reference integrator") {
    PicardConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 1e-3;
    auto u0 = small_datum(g);
    auto r = picard_solve(u0, cfg);
    CHECK(r.diagnostics.converged);
    CHECK(r.diagnostics.final_residual < 2 * cfg.tol);
    CHECK(r.diagnostics.max_ratio() < 1.0);
    CHECK(r.diagnostics.ball_radius > 0.0);
    auto ref = reference_solve(u0, cfg);
    double d = 0.0;
    for (std::size_t m = 0; m < ref.size(); ++m) {
      d = std::max(d, (r.trajectory.states[m] - ref.states[m]).l2_norm());
      CHECK(std::abs(r.trajectory.states[m].spectral()[0]) <= 1e-14);
    }
    CHECK(d <= 5 * cfg.tol);
  }
  SUBCASE("large datum over a long time fails with diagnostics") {
    PicardConfig cfg;
    cfg.T = 2.0;
    cfg.dt = 0.01;
    auto u0 = small_datum(make_grid(256, 32), 20.0);
    try {
      picard_solve(u0, cfg);
      FAIL("expected a convergence failure");
    } catch (const ConvergenceError& e) {
      CHECK(e.code() == ErrorCode::convergence);
      CHECK_FALSE(e.diagnostics().converged);
      CHECK(e.diagnostics().iterates > 0);
    }
  }
  SUBCASE("rejects data outside the mean-zero class") {
    auto shifted = SpectralField::sample(g, [](double x) { return 1.0 + std::exp(-x * x); });
    PicardConfig cfg;
    cfg.T = 0.1;
    cfg.dt = 0.01;
    CHECK_THROWS_AS(picard_solve(shifted, cfg), PreconditionError);
  }
}

TEST_CASE("reference_solve") {
  auto g = standard_grid();
  auto u0 = small_datum(g);
  SUBCASE("linear probe reproduces the group") {
    PicardConfig cfg;
    cfg.T = 0.5;
    cfg.dt = 0.01;
    cfg.nonlinear = false;
    for (Sign sign : {Sign::plus, Sign::minus}) {
      cfg.sign = sign;
      auto traj = reference_solve(u0, cfg);
      for (std::size_t m = 0; m < traj.size(); ++m) {
        CHECK((traj.states[m] - apply_group(u0, traj.times[m], sign)).l2_norm() <= 1e-12 * u0.l2_norm());
      }
    }
  }
  SUBCASE("L2 conservation") {
    PicardConfig cfg;
    cfg.T = 1.0;
    cfg.dt = 1e-3;
    auto traj = reference_solve(u0, cfg);
    CHECK(std::abs(traj.states.back().l2_norm() - u0.l2_norm()) <= 1e-8 * u0.l2_norm());
  }
}

TEST_CASE("existence_time") {
  auto g = standard_grid();
  CHECK(existence_time(SpectralField::zeros(g), 0.8, 1.0, 7.0) == 7.0);
  CHECK(existence_time_fixed(1.0, 0.8, 1.0) == doctest::Approx(oracle::smallness_root(0.8, 1.0)).epsilon(1e-9));
  CHECK(existence_time_fixed(0.3, 0.9, 0.5) == doctest::Approx(oracle::smallness_root(0.9, 0.15)).epsilon(1e-9));
  CHECK(existence_time_fixed(2.0, 0.8, 1.0) < existence_time_fixed(1.0, 0.8, 1.0));
  auto u0 = small_datum(g);
  CHECK(existence_time(u0 * 2.0, 0.8, 0.05) < existence_time(u0, 0.8, 0.05));
  const double T = existence_time(u0, 0.8, 0.05);
  const double a = ball_radius(u0, 0.8, 0.05, T);
  const double lhs = 0.05 * std::sqrt(T) * (1 + std::pow(T, 1.0 / 3 + 0.8 / 3)) * (1 + std::pow(T, 0.25) + std::sqrt(T)) * a;
  CHECK(lhs < 0.5);
  CHECK(lhs == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("lipschitz_probe") {
  auto g = standard_grid();
  auto u0 = small_datum(g);
  PicardConfig cfg;
  cfg.T = 0.1;
  cfg.dt = 1e-3;
  CHECK(lipschitz_probe(u0, 0.0, cfg) == 0.0);
  const double r3 = lipschitz_probe(u0, 1e-3, cfg);
  const double r4 = lipschitz_probe(u0, 1e-4, cfg);
  CHECK(std::isfinite(r3));
  CHECK(std::abs(r3 - r4) < 0.2 * r4);
  const double neg = lipschitz_probe(u0, 1e-3, cfg, -1.0);
  CHECK(std::abs(neg - r3) < 0.1 * r3);
}
