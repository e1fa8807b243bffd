#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ostrovsky/data.hpp"
#include "ostrovsky/error.hpp"
#include "ostrovsky/sweeps.hpp"

using namespace ostrovsky;

namespace {

SteinQuadSpec sweep_spec(double outer) {
  SteinQuadSpec q;
  q.inner_radius = 0.05;
  q.outer_radius = outer;
  q.panels = 16;
  q.tolerance = 1e-3;
  return q;
}

}  // namespace

TEST_CASE("bracket formulas") {
  CHECK(lemma22_rhs(0.5, 1.0, 0.0) == 2.0);
  CHECK(lemma22_rhs(0.5, 1.0, 2.0) == doctest::Approx(2.0 + 2.0 * 2.0).epsilon(1e-15));
  CHECK(lemma23_rhs(0.5, 1.0, 1.0) == 1.0);
  CHECK(lemma23_rhs(0.5, 4.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double x = 0.7;
  for (double b : {0.25, 0.5}) {
    const double r1 = lemma23_rhs(b, 1.0, x);
    for (double t : {0.1, 2.0, 10.0}) {
      CHECK(lemma23_rhs(b, t, x) / r1 == doctest::Approx(std::pow(t, b)).epsilon(1e-14));
    }
  }
  const auto f = bracket_factors(1.0, 0.4);
  CHECK(f[0] == 3.0);
  CHECK(f[1] == 2.0);
  CHECK(f[2] == 1.0);
}

TEST_CASE("cubic phase sweep: small t and the x = 0 row") {
  auto q = sweep_spec(20.0);
  // lhs and rhs both vanish like t^{b/3} as t -> 0.
  auto tab = lemma22_sweep({0.5}, {1e-6, 1e-3, 1.0}, {1.0}, q);
  REQUIRE(tab.rows.size() == 3);
  CHECK(tab.rows[0].lhs < tab.rows[1].lhs);
  CHECK(tab.rows[1].lhs < tab.rows[2].lhs);
  CHECK(tab.rows[0].lhs < 0.25);
  for (const auto& r : tab.rows) CHECK(r.ratio < 2.0 * tab.rows[2].ratio);

  auto zero = lemma22_sweep({0.5}, {1.0}, {0.0}, q);
  REQUIRE(zero.rows.size() == 1);
  CHECK(zero.rows[0].rhs == 2.0);
  CHECK(zero.rows[0].ratio == doctest::Approx(zero.rows[0].lhs / 2.0).epsilon(1e-15));
  CHECK(zero.rows[0].lhs > 0.0);
}

TEST_CASE("cubic phase sweep rows are sorted and positive") {
  auto tab = lemma22_sweep({0.5, 0.25}, {1.0, 0.1}, {1.0, -1.0}, sweep_spec(20.0));
  REQUIRE(tab.rows.size() == 8);
  for (std::size_t i = 0; i < tab.rows.size(); ++i) {
    CHECK(tab.rows[i].lhs >= 0.0);
    CHECK(tab.rows[i].rhs > 0.0);
    if (i > 0) {
      const auto& a = tab.rows[i - 1];
      const auto& b = tab.rows[i];
      CHECK(std::tie(a.b, a.t, a.x) < std::tie(b.b, b.t, b.x));
    }
  }
  CHECK(std::isfinite(tab.sup_ratio()));
}

TEST_CASE("inverse phase sweep") {
  auto q = sweep_spec(50.0);
  SUBCASE("no admissible points") {
    auto tab = lemma23_sweep({0.5}, {1.0}, {0.01, -0.02}, Sign::plus, q);
    CHECK(tab.rows.empty());
    CHECK(tab.status == "no admissible points");
  }
  SUBCASE("far point has a small ratio") {
    auto tab = lemma23_sweep({0.5}, {1.0}, {100.0, 1.0}, Sign::plus, q);
    REQUIRE(tab.rows.size() == 2);
    CHECK(tab.rows[0].x == 1.0);
    CHECK(tab.rows[0].rhs == 1.0);
    CHECK(std::isfinite(tab.rows[1].ratio));
    CHECK(tab.rows[1].lhs < tab.rows[0].lhs);
  }
  SUBCASE("rejects b above one half") {
    CHECK_THROWS(lemma23_sweep({0.6}, {1.0}, {1.0}, Sign::plus, q));
  }
}

TEST_CASE("weighted group bound") {
  auto g = make_grid(512, 32);
  DatumSpec d;
  auto f = make_datum(g, d);
  for (Sign sign : {Sign::plus, Sign::minus}) {
    auto tab = lemma24_check(f, {0.0, 0.1, 0.5, 1.0, 2.0}, 0.4, sign);
    REQUIRE(tab.rows.size() == 5);
    CHECK(tab.rows[0].ratio <= 1.0);
    auto tab2 = lemma24_check(f * 2.0, {0.0, 0.1, 0.5, 1.0, 2.0}, 0.4, sign);
    auto tab10 = lemma24_check(f * 10.0, {0.0, 0.1, 0.5, 1.0, 2.0}, 0.4, sign);
    for (std::size_t i = 0; i < tab.rows.size(); ++i) {
      CHECK(std::isfinite(tab.rows[i].ratio));
      CHECK(std::abs(tab2.rows[i].ratio - tab.rows[i].ratio) <= 1e-12 * tab.rows[i].ratio);
      CHECK(std::abs(tab10.rows[i].ratio - tab.rows[i].ratio) <= 1e-12 * tab.rows[i].ratio);
      CHECK(tab2.rows[i].lhs == doctest::Approx(2.0 * tab.rows[i].lhs).epsilon(1e-13));
    }
  }
  CHECK(lemma24_bracket(f, 0.0, 0.4) >= bracket_norms(f, 0.4).weighted);
}

TEST_CASE("weighted group bound keeps wrapped rows") {
  auto g = make_grid(512, 32);
  DatumSpec d;
  auto f = make_datum(g, d);
  auto previous = set_warning_handler([](std::string_view) {});
  auto tab = lemma24_check(f, {0.0, 2.0}, 0.4, Sign::plus);
  set_warning_handler(previous);
  CHECK(tab.rows[0].boundary_mass < 1e-12);
  CHECK(tab.rows[1].boundary_mass > 1e-8);
  CHECK(tab.flagged() == 0);
  CHECK(tab.sup_ratio() == std::max(tab.rows[0].ratio, tab.rows[1].ratio));
}

TEST_CASE("csv writers and verdicts") {
  auto q = sweep_spec(20.0);
  auto base = lemma22_sweep({0.5}, {1.0}, {0.0, 1.0}, q);
  auto refined = lemma22_sweep({0.5}, {1.0}, {0.0, 1.0}, q.refined());
  std::ostringstream os;
  write_sweep_csv(os, base);
  CHECK(os.str().rfind("lemma,sign,b,t,x,lhs,rhs,ratio,lhs_err\n", 0) == 0);
  auto v = refinement_verdict(base, refined);
  REQUIRE(v.size() == 2);
  CHECK(v[0].stable);
  CHECK(std::isnan(v[1].b));
  std::ostringstream vs;
  write_verdict_csv(vs, v);
  CHECK(vs.str().rfind("lemma,sign,b,sup_ratio,sup_ratio_refined,rel_change,stable\n", 0) == 0);
  std::ostringstream fs;
  write_flags_csv(fs, base);
  CHECK(fs.str() == "lemma,b,t,x,flag,value\n");
}
