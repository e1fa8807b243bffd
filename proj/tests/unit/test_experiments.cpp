#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "oracles.hpp"
#include "ostrovsky/checkpoint.hpp"
#include "ostrovsky/data.hpp"
#include "ostrovsky/error.hpp"
#include "ostrovsky/experiments.hpp"

using namespace ostrovsky;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("ostro_unit_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "";
}

std::string small_persistence(const fs::path& out) {
  return "[experiment]\nkind = persistence\noutput_dir = " + out.string() +
         "\n[grid]\nn_points = 128\nL = 32\n[time]\nT = 0.1\ndt = 0.005\n[datum]\namplitude = 0.5\n";
}

}  // namespace

TEST_CASE("config errors name the offending key") {
  CHECK(config_error_key("[experiment]\nkind = persistence\noutput_dir = o\n[grid]\nspacing = 1\n") == "grid.spacing");
  CHECK(config_error_key("[experiment]\nkind = persistence\noutput_dir = o\n[mesh]\nn = 1\n") == "mesh");
  CHECK(config_error_key("[experiment]\nkind = nonsense\noutput_dir = o\n") == "experiment.kind");
  CHECK(config_error_key("[experiment]\nkind = persistence\noutput_dir = o\n[equation]\ns = 0.5\n") == "equation.s");
  CHECK(config_error_key("[experiment]\nkind = persistence\noutput_dir = o\n[grid]\nn_points = abc\n") == "grid.n_points");
  CHECK(config_error_key("[experiment]\nkind = persistence\noutput_dir = o\n[time]\nT = 0.5\ndt = 0.3\n").rfind("time.", 0) == 0);
  CHECK(config_error_key("[experiment]\nkind = persistence\noutput_dir = o\n[datum]\nfamily = box\n") == "datum.family");
  CHECK(config_error_key("[experiment]\nkind = persistence\n") == "experiment.output_dir");
  CHECK(config_error_key("[experiment]\nkind = lemma23\noutput_dir = o\n[sweep]\nb = 0.7\n") == "sweep.b");
  CHECK(config_error_key("[experiment]\nkind = convergence\noutput_dir = o\n[convergence]\ndt = 0.1, 0.05\n") ==
        "convergence.dt");
  CHECK_THROWS_AS(parse_config("not an ini [["), ConfigError);
}

TEST_CASE("kind defaults") {
  auto l22 = parse_config("[experiment]\nkind = lemma22\noutput_dir = o\n");
  CHECK(l22.b_values.size() * l22.t_values.size() * l22.x_values.size() == 3 * 3 * 33);
  auto l23 = parse_config("[experiment]\nkind = lemma23\noutput_dir = o\n[equation]\nsign = -\n");
  CHECK(l23.sign == Sign::minus);
  CHECK(l23.x_over_t_pi == std::vector<double>{1.0, 6.0, 12.0});
  auto cal = parse_config("[experiment]\nkind = calibrate\noutput_dir = o\n");
  CHECK(cal.corpus.size() == 5);
  CHECK(cal.holdout.has_value());
  auto per = parse_config("[experiment]\nkind = persistence\noutput_dir = o\n[time]\nT = auto\n");
  CHECK(per.T_auto);
  auto lines = per.describe();
  CHECK(lines.front() == "[experiment] kind = persistence");
}

TEST_CASE("degenerate calibration corpus") {
  const std::string base = "[experiment]\nkind = calibrate\noutput_dir = o\n[calibration]\n";
  CHECK(config_error_key(base + "families = gaussian-derivative\n") == "calibration.families");
  CHECK(config_error_key(base + "amplitude = 0\n") == "calibration.families");
  CalibrationOptions opts;
  auto g = make_grid(128, 32);
  DatumSpec zero;
  zero.amplitude = 0.0;
  CHECK_THROWS_AS(calibrate_Cs(g, {zero}, opts), InvalidArgument);
}

TEST_CASE("checkpoint round trip") {
  auto dir = scratch("checkpoint");
  auto g = make_grid(64, 16);
  DatumSpec d;
  auto u0 = make_datum(g, d);
  std::vector<SpectralField> states;
  for (int m = 0; m <= 4; ++m) states.push_back(apply_group(u0, 0.25 * m, Sign::minus));
  auto traj = make_trajectory(g, Sign::minus, 0.25, states);
  const auto path = dir / "traj.bin";
  write_checkpoint(path, traj, 0.9);
  CHECK(fs::exists(path.string() + ".json"));
  auto back = read_checkpoint(path);
  CHECK(back.s == 0.9);
  CHECK(back.trajectory.sign == Sign::minus);
  CHECK(back.trajectory.dt == 0.25);
  CHECK(back.trajectory.grid->same_as(*g));
  REQUIRE(back.trajectory.size() == traj.size());
  for (std::size_t m = 0; m < traj.size(); ++m) {
    CHECK(back.trajectory.times[m] == traj.times[m]);
    for (int k = 0; k < 64; ++k) CHECK(back.trajectory.states[m].spectral()[k] == traj.states[m].spectral()[k]);
  }
  auto bytes = slurp(path);
  std::ofstream(dir / "short.bin", std::ios::binary) << bytes.substr(0, bytes.size() / 2);
  CHECK_THROWS_AS(read_checkpoint(dir / "short.bin"), IoError);
  auto bad = bytes;
  bad[0] = 'X';
  std::ofstream(dir / "magic.bin", std::ios::binary) << bad;
  CHECK_THROWS_AS(read_checkpoint(dir / "magic.bin"), IoError);
  CHECK_THROWS_AS(read_checkpoint(dir / "missing.bin"), IoError);
}

TEST_CASE("persistence run writes headed CSV and is deterministic") {
  auto dir = scratch("persistence");
  auto cfg_a = parse_config(small_persistence(dir / "a"));
  auto cfg_b = parse_config(small_persistence(dir / "b"));
  auto ra = run_experiment(cfg_a);
  auto rb = run_experiment(cfg_b);
  CHECK(ra.status == RunStatus::ok);
  REQUIRE(ra.files.size() == rb.files.size());
  for (std::size_t i = 0; i < ra.files.size(); ++i) {
    auto a = slurp(ra.files[i]);
    auto b = slurp(rb.files[i]);
    // Only the echoed output directory differs.
    auto strip = [](std::string s, const std::string& dir) {
      for (auto p = s.find(dir); p != std::string::npos; p = s.find(dir)) s.erase(p, dir.size());
      return s;
    };
    CHECK(strip(a, (dir / "a").string()) == strip(b, (dir / "b").string()));
  }
  auto norms = slurp(dir / "a" / "norms.csv");
  CHECK(norms.rfind("# ostrovsky ", 0) == 0);
  CHECK(norms.find("# [grid] n_points = 128") != std::string::npos);
  CHECK(norms.find("t,l2,hs,hom_minus_s,weighted,n1,n2,n3,n4,n5,n6,xT") != std::string::npos);
  CHECK(fs::exists(dir / "a" / "envelope.csv"));
  CHECK(fs::exists(dir / "a" / "summary.txt"));
}

TEST_CASE("zero datum gives zero norm rows") {
  auto dir = scratch("zero");
  auto cfg = parse_config(small_persistence(dir));
  cfg.datum.amplitude = 0.0;
  auto r = run_persistence(cfg);
  CHECK(r.status == RunStatus::ok);
  std::istringstream in(slurp(dir / "norms.csv"));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    std::istringstream fields(line);
    std::string cell;
    std::getline(fields, cell, ',');
    while (std::getline(fields, cell, ',')) {
      if (!cell.empty()) CHECK(std::stod(cell) == 0.0);
    }
    ++rows;
  }
  CHECK(rows > 0);
}

TEST_CASE("solver failure is reported, not thrown") {
  auto dir = scratch("failure");
  auto cfg = parse_config("[experiment]\nkind = persistence\noutput_dir = " + dir.string() +
                          "\nrefine = false\n[grid]\nn_points = 256\n[time]\nT = 2\ndt = 0.01\n[datum]\namplitude = 20\n");
  auto r = run_experiment(cfg);
  CHECK(r.status == RunStatus::solver_failure);
  CHECK(slurp(dir / "summary.txt").find("status = solver_failure") != std::string::npos);
}

TEST_CASE("empty inverse-phase sweep is inconclusive") {
  auto dir = scratch("empty23");
  auto cfg = parse_config("[experiment]\nkind = lemma23\noutput_dir = " + dir.string() +
                          "\n[sweep]\nb = 0.5\nt = 1\nx = 0.01\nx_over_t_pi = 1000\n");
  auto r = run_experiment(cfg);
  CHECK(r.status == RunStatus::inconclusive);
  CHECK(r.message.find("no admissible points") != std::string::npos);
}

TEST_CASE("weighted group table scales with the datum") {
  auto dir = scratch("scaled24");
  const std::string base = "[experiment]\nkind = lemma24\noutput_dir = ";
  auto c1 = parse_config(base + (dir / "one").string() + "\n[sweep]\nb = 0.4\n");
  auto c2 = parse_config(base + (dir / "two").string() + "\n[sweep]\nb = 0.4\n[datum]\namplitude = 2\n");
  run_experiment(c1);
  run_experiment(c2);
  auto rows = [](const std::string& text) {
    std::vector<double> ratios;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("lemma24", 0) != 0) continue;
      std::vector<std::string> cells;
      std::istringstream fields(line);
      for (std::string c; std::getline(fields, c, ',');) cells.push_back(c);
      ratios.push_back(std::stod(cells.at(7)));
    }
    return ratios;
  };
  auto r1 = rows(slurp(dir / "one" / "sweep.csv"));
  auto r2 = rows(slurp(dir / "two" / "sweep.csv"));
  REQUIRE(r1.size() == r2.size());
  REQUIRE_FALSE(r1.empty());
  for (std::size_t i = 0; i < r1.size(); ++i) CHECK(std::abs(r1[i] - r2[i]) <= 1e-12 * r1[i]);
}

TEST_CASE("convergence studies") {
  auto g = make_grid(256, 32);
  DatumSpec d;
  d.amplitude = 0.5;
  auto u0 = make_datum(g, d);
  PicardConfig base;
  base.T = 0.2;
  auto lin = convergence_study(u0, base, ConvergenceMode::linear, {0.02, 0.01, 0.005});
  for (double e : lin.error) CHECK(e <= 1e-12);
  auto psi = convergence_study(u0, base, ConvergenceMode::psi, {0.01, 0.005, 0.0025, 0.00125, 0.000625});
  CHECK(psi.order >= 3.5);
  CHECK(psi.order <= 4.5);
}

TEST_CASE("equivalence corpus") {
  auto c = equivalence_corpus(20);
  CHECK(c.size() == 20);
  auto again = equivalence_corpus(20);
  for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i].seed == again[i].seed);
}
