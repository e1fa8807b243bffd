#include "ostrovsky/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "io.hpp"
#include "ostrovsky/checkpoint.hpp"
#include "ostrovsky/csv.hpp"
#include "ostrovsky/quadrature.hpp"

#ifndef OSTROVSKY_VERSION_STRING
#define OSTROVSKY_VERSION_STRING "0.0.0"
#endif

namespace ostrovsky {

const char* library_version() { return OSTROVSKY_VERSION_STRING; }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// --- configuration ----------------------------------------------------------------

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"experiment", {"kind", "output_dir", "checkpoint", "refine"}},
      {"grid", {"n_points", "L"}},
      {"equation", {"sign", "s"}},
      {"time", {"T", "dt", "window"}},
      {"picard", {"tol", "max_iter", "dealias", "Cs", "fallback_reference"}},
      {"datum", {"family", "amplitude", "width", "center", "seed", "packets", "band", "spread"}},
      {"sweep", {"b", "t", "x", "x_range", "x_over_t_pi", "x_min", "exclusion_budget", "refine_threshold"}},
      {"quadrature", {"inner_radius", "outer_radius", "panels", "grading", "tolerance"}},
      {"convergence", {"mode", "dt"}},
      {"calibration",
       {"families", "seeds", "amplitude", "width", "dt", "T_max", "bisections", "holdout", "holdout_family",
        "holdout_seed", "holdout_amplitude"}},
      {"stein", {"corpus_size"}},
  };
  return keys;
}

std::string trim(std::string_view v) {
  const auto a = v.find_first_not_of(" \t\r\n");
  if (a == std::string_view::npos) return {};
  const auto b = v.find_last_not_of(" \t\r\n");
  return std::string(v.substr(a, b - a + 1));
}

class Ini {
 public:
  explicit Ini(const boost::property_tree::ptree& tree) : tree_(tree) {
    for (const auto& [section, body] : tree) {
      if (body.empty()) throw ConfigError(section, "key outside of any section");
      const auto it = known_keys().find(section);
      if (it == known_keys().end()) throw ConfigError(section, "unknown section");
      for (const auto& [key, value] : body) {
        if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
      }
    }
  }

  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.get_child_optional(section);
    if (!sec) return std::nullopt;
    const auto v = sec->get_optional<std::string>(boost::property_tree::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return trim(*v);
  }

  void read(const std::string& section, const std::string& key, double& out) const {
    if (auto v = raw(section, key)) out = to_double(*v, section + "." + key);
  }
  void read(const std::string& section, const std::string& key, int& out) const {
    if (auto v = raw(section, key)) out = to_int(*v, section + "." + key);
  }
  void read(const std::string& section, const std::string& key, std::uint64_t& out) const {
    if (auto v = raw(section, key)) {
      const int i = to_int(*v, section + "." + key);
      if (i < 0) throw ConfigError(section + "." + key, "must be nonnegative");
      out = static_cast<std::uint64_t>(i);
    }
  }
  void read(const std::string& section, const std::string& key, bool& out) const {
    if (auto v = raw(section, key)) out = to_bool(*v, section + "." + key);
  }
  void read(const std::string& section, const std::string& key, std::vector<double>& out) const {
    if (auto v = raw(section, key)) out = to_list(*v, section + "." + key);
  }

  static double to_double(const std::string& v, const std::string& key) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
      throw ConfigError(key, "expected a finite number, got '" + v + "'");
    }
    return out;
  }
  static int to_int(const std::string& v, const std::string& key) {
    int out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ConfigError(key, "expected an integer, got '" + v + "'");
    }
    return out;
  }
  static bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key, "expected true or false, got '" + v + "'");
  }
  static std::vector<std::string> split(const std::string& v) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(v);
    while (std::getline(is, item, ',')) out.push_back(trim(item));
    return out;
  }
  static std::vector<double> to_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    for (const auto& item : split(v)) out.push_back(to_double(item, key));
    if (out.empty()) throw ConfigError(key, "empty list");
    return out;
  }

 private:
  const boost::property_tree::ptree& tree_;
};

ExperimentKind parse_kind(const std::string& v) {
  if (v == "persistence") return ExperimentKind::persistence;
  if (v == "lemma22") return ExperimentKind::lemma22;
  if (v == "lemma23") return ExperimentKind::lemma23;
  if (v == "lemma24") return ExperimentKind::lemma24;
  if (v == "convergence") return ExperimentKind::convergence;
  if (v == "calibrate") return ExperimentKind::calibrate;
  if (v == "stein-equivalence") return ExperimentKind::stein_equivalence;
  throw ConfigError("experiment.kind", "unknown kind '" + v + "'");
}

std::string to_string(ConvergenceMode m) {
  switch (m) {
    case ConvergenceMode::reference: return "reference";
    case ConvergenceMode::psi: return "psi";
    case ConvergenceMode::linear: return "linear";
  }
  return "?";
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
  return out;
}

void apply_kind_defaults(ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::lemma22:
      c.b_values = {0.25, 0.375, 0.5};
      c.t_values = {0.1, 1.0, 10.0};
      c.x_values = linspace(-10.0, 10.0, 33);
      c.quad = {0.05, 20.0, 16, 3.0, 1e-3};
      break;
    case ExperimentKind::lemma23:
      c.b_values = {0.25, 0.375, 0.5};
      c.t_values = {0.1, 1.0, 10.0};
      c.x_values = {-100, -10, -2, -1, -0.5, -0.1, -0.05, 0.05, 0.1, 0.5, 1, 2, 10, 100};
      c.x_over_t_pi = {1.0, 6.0, 12.0};
      c.quad = {0.05, 50.0, 16, 3.0, 1e-3};
      break;
    case ExperimentKind::lemma24:
      c.b_values = {0.25, 0.4, 0.5};
      c.t_values = {0.1, 0.5, 1.0, 2.0};
      break;
    case ExperimentKind::stein_equivalence:
      c.b_values = {0.25, 0.5};
      break;
    case ExperimentKind::convergence:
      c.dt_values = {0.02, 0.01, 0.005, 0.0025, 0.00125};
      break;
    case ExperimentKind::calibrate: {
      const DatumFamily fam[] = {DatumFamily::gaussian_derivative, DatumFamily::sech_derivative,
                                 DatumFamily::random_band_limited, DatumFamily::random_band_limited,
                                 DatumFamily::random_band_limited};
      const std::uint64_t seeds[] = {1, 1, 1, 2, 3};
      for (int i = 0; i < 5; ++i) {
        DatumSpec d;
        d.family = fam[i];
        d.seed = seeds[i];
        d.amplitude = 16.0;
        c.corpus.push_back(d);
      }
      DatumSpec h;
      h.family = DatumFamily::random_band_limited;
      h.seed = 11;
      h.amplitude = 16.0;
      c.holdout = h;
      break;
    }
    case ExperimentKind::persistence: break;
  }
}

void read_calibration(const Ini& ini, ExperimentConfig& c) {
  ini.read("calibration", "dt", c.calibration_dt);
  ini.read("calibration", "T_max", c.calibration_T_max);
  ini.read("calibration", "bisections", c.calibration_bisections);
  const auto families = ini.raw("calibration", "families");
  const auto seeds = ini.raw("calibration", "seeds");
  if (families || seeds) {
    std::vector<DatumFamily> fam;
    std::vector<std::uint64_t> seed;
    if (families) {
      for (const auto& f : Ini::split(*families)) {
        try {
          fam.push_back(parse_datum_family(f));
        } catch (const Error& e) {
          throw ConfigError("calibration.families", e.what());
        }
      }
    } else {
      for (const auto& d : c.corpus) fam.push_back(d.family);
    }
    if (seeds) {
      for (const auto& s : Ini::split(*seeds)) {
        const int v = Ini::to_int(s, "calibration.seeds");
        if (v < 0) throw ConfigError("calibration.seeds", "seeds must be nonnegative");
        seed.push_back(static_cast<std::uint64_t>(v));
      }
    } else {
      seed.assign(fam.size(), 1);
    }
    if (seed.size() != fam.size()) throw ConfigError("calibration.seeds", "needs one seed per family");
    c.corpus.clear();
    for (std::size_t i = 0; i < fam.size(); ++i) {
      DatumSpec d;
      d.family = fam[i];
      d.seed = seed[i];
      d.amplitude = 16.0;
      c.corpus.push_back(d);
    }
  }
  double amplitude = c.corpus.empty() ? 16.0 : c.corpus.front().amplitude;
  double width = 1.0;
  ini.read("calibration", "amplitude", amplitude);
  ini.read("calibration", "width", width);
  for (auto& d : c.corpus) {
    d.amplitude = amplitude;
    d.width = width;
  }
  bool holdout = c.holdout.has_value();
  ini.read("calibration", "holdout", holdout);
  if (!holdout) {
    c.holdout.reset();
    return;
  }
  DatumSpec h = c.holdout.value_or(DatumSpec{});
  h.amplitude = amplitude;
  h.width = width;
  if (auto f = ini.raw("calibration", "holdout_family")) {
    try {
      h.family = parse_datum_family(*f);
    } catch (const Error& e) {
      throw ConfigError("calibration.holdout_family", e.what());
    }
  }
  ini.read("calibration", "holdout_seed", h.seed);
  ini.read("calibration", "holdout_amplitude", h.amplitude);
  c.holdout = h;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + fmt17(v[i]);
  return out;
}

std::string describe_datum(const DatumSpec& d) {
  std::ostringstream os;
  os << to_string(d.family) << " amplitude=" << fmt17(d.amplitude) << " width=" << fmt17(d.width)
     << " center=" << fmt17(d.center) << " seed=" << d.seed;
  if (d.family == DatumFamily::random_band_limited) {
    os << " packets=" << d.packets << " band=" << fmt17(d.band) << " spread=" << fmt17(d.spread);
  }
  return os.str();
}

// --- output ---------------------------------------------------------------------

class Output {
 public:
  explicit Output(const ExperimentConfig& cfg) : cfg_(cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec || !std::filesystem::is_directory(cfg.output_dir)) {
      throw IoError("cannot create output directory " + cfg.output_dir.string());
    }
    header_ = "# ostrovsky " + std::string(library_version()) + "\n";
    for (const auto& line : cfg.describe()) header_ += "# " + line + "\n";
  }

  void csv(const std::string& name, const std::string& body) {
    const auto path = cfg_.output_dir / name;
    detail::write_file_atomic(path, header_ + body);
    outcome.files.push_back(path);
  }

  void note(const std::string& key, const std::string& value) { summary_ += key + " = " + value + "\n"; }
  void note(const std::string& key, double value) { note(key, fmt17(value)); }

  RunOutcome finish(RunStatus status, const std::string& message) {
    outcome.status = status;
    outcome.message = message;
    const char* names[] = {"ok", "solver_failure", "inconclusive"};
    std::string text = header_ + "status = " + names[static_cast<int>(status)] + "\n";
    if (!message.empty()) text += "message = " + message + "\n";
    text += summary_;
    const auto path = cfg_.output_dir / "summary.txt";
    detail::write_file_atomic(path, text);
    outcome.files.push_back(path);
    return outcome;
  }

  RunOutcome outcome;

 private:
  const ExperimentConfig& cfg_;
  std::string header_;
  std::string summary_;
};

double rel_change(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

PicardConfig picard_config(const ExperimentConfig& cfg) {
  PicardConfig pc;
  pc.T = cfg.T;
  pc.dt = cfg.dt;
  pc.tol = cfg.tol;
  pc.max_iter = cfg.max_iter;
  pc.dealias = cfg.dealias;
  pc.sign = cfg.sign;
  pc.s = cfg.s;
  pc.Cs = cfg.Cs;
  return pc;
}

std::string picard_csv(const PicardDiagnostics& d) {
  std::ostringstream os;
  os << "iterate,distance,ratio\n";
  for (std::size_t i = 0; i < d.successive_distances.size(); ++i) {
    os << i + 1 << ',' << fmt17(d.successive_distances[i]) << ','
       << (i == 0 ? std::string() : fmt17(d.contraction_ratios[i - 1])) << '\n';
  }
  return os.str();
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& c) {
    if (a.b != c.b) return a.b < c.b;
    if (a.t != c.t) return a.t < c.t;
    return a.x < c.x;
  });
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::persistence: return "persistence";
    case ExperimentKind::lemma22: return "lemma22";
    case ExperimentKind::lemma23: return "lemma23";
    case ExperimentKind::lemma24: return "lemma24";
    case ExperimentKind::convergence: return "convergence";
    case ExperimentKind::calibrate: return "calibrate";
    case ExperimentKind::stein_equivalence: return "stein-equivalence";
  }
  return "?";
}

ExperimentConfig parse_config(std::string_view text) {
  boost::property_tree::ptree tree;
  try {
    std::istringstream is{std::string(text)};
    boost::property_tree::ini_parser::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", std::string("malformed configuration: ") + e.what());
  }
  const Ini ini(tree);
  ExperimentConfig c;
  const auto kind = ini.raw("experiment", "kind");
  if (!kind) throw ConfigError("experiment.kind", "missing");
  c.kind = parse_kind(*kind);
  apply_kind_defaults(c);

  if (auto v = ini.raw("experiment", "output_dir")) c.output_dir = *v;
  ini.read("experiment", "checkpoint", c.checkpoint);
  ini.read("experiment", "refine", c.refine);
  ini.read("grid", "n_points", c.n_points);
  ini.read("grid", "L", c.L);
  if (auto v = ini.raw("equation", "sign")) {
    try {
      c.sign = parse_sign(*v);
    } catch (const Error& e) {
      throw ConfigError("equation.sign", e.what());
    }
  }
  ini.read("equation", "s", c.s);
  if (auto v = ini.raw("time", "T")) {
    if (*v == "auto") {
      c.T_auto = true;
    } else {
      c.T = Ini::to_double(*v, "time.T");
    }
  }
  ini.read("time", "dt", c.dt);
  ini.read("time", "window", c.window);
  ini.read("picard", "tol", c.tol);
  ini.read("picard", "max_iter", c.max_iter);
  ini.read("picard", "dealias", c.dealias);
  ini.read("picard", "Cs", c.Cs);
  ini.read("picard", "fallback_reference", c.fallback_reference);
  if (auto v = ini.raw("datum", "family")) {
    try {
      c.datum.family = parse_datum_family(*v);
    } catch (const Error& e) {
      throw ConfigError("datum.family", e.what());
    }
  }
  ini.read("datum", "amplitude", c.datum.amplitude);
  ini.read("datum", "width", c.datum.width);
  ini.read("datum", "center", c.datum.center);
  ini.read("datum", "seed", c.datum.seed);
  ini.read("datum", "packets", c.datum.packets);
  ini.read("datum", "band", c.datum.band);
  ini.read("datum", "spread", c.datum.spread);
  ini.read("sweep", "b", c.b_values);
  ini.read("sweep", "t", c.t_values);
  if (ini.raw("sweep", "x") && ini.raw("sweep", "x_range")) {
    throw ConfigError("sweep.x_range", "give either x or x_range");
  }
  ini.read("sweep", "x", c.x_values);
  if (auto v = ini.raw("sweep", "x_range")) {
    const auto r = Ini::to_list(*v, "sweep.x_range");
    if (r.size() != 3 || r[2] < 1 || r[2] != std::floor(r[2])) {
      throw ConfigError("sweep.x_range", "expected lo, hi, count");
    }
    c.x_values = linspace(r[0], r[1], static_cast<int>(r[2]));
  }
  ini.read("sweep", "x_over_t_pi", c.x_over_t_pi);
  ini.read("sweep", "x_min", c.x_min);
  ini.read("sweep", "exclusion_budget", c.exclusion_budget);
  ini.read("sweep", "refine_threshold", c.refine_threshold);
  ini.read("quadrature", "inner_radius", c.quad.inner_radius);
  ini.read("quadrature", "outer_radius", c.quad.outer_radius);
  ini.read("quadrature", "panels", c.quad.panels);
  ini.read("quadrature", "grading", c.quad.grading);
  ini.read("quadrature", "tolerance", c.quad.tolerance);
  if (auto v = ini.raw("convergence", "mode")) {
    if (*v == "reference") {
      c.convergence_mode = ConvergenceMode::reference;
    } else if (*v == "psi") {
      c.convergence_mode = ConvergenceMode::psi;
    } else if (*v == "linear") {
      c.convergence_mode = ConvergenceMode::linear;
    } else {
      throw ConfigError("convergence.mode", "expected reference, psi or linear");
    }
    // The single sweep reaches its asymptotic rate one halving later.
    if (c.convergence_mode == ConvergenceMode::psi) c.dt_values = {0.01, 0.005, 0.0025, 0.00125, 0.000625};
  }
  ini.read("convergence", "dt", c.dt_values);
  read_calibration(ini, c);
  ini.read("stein", "corpus_size", c.stein_corpus_size);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const IoError&) {
    throw ConfigError("", "cannot read configuration file " + path.string());
  }
  return parse_config(text);
}

void ExperimentConfig::validate() const {
  auto positive = [](double v, const char* key) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "must be positive");
  };
  auto all_positive = [](const std::vector<double>& v, const char* key) {
    for (double a : v) {
      if (!(a > 0.0)) throw ConfigError(key, "values must be positive");
    }
  };
  if (output_dir.empty()) throw ConfigError("experiment.output_dir", "missing");
  if (n_points < 8 || n_points % 2 != 0) throw ConfigError("grid.n_points", "must be even and >= 8");
  positive(L, "grid.L");
  if (!(s > 0.75 && s <= 1.0)) throw ConfigError("equation.s", "must lie in (3/4, 1]");
  positive(dt, "time.dt");
  positive(window, "time.window");
  if (!T_auto) {
    positive(T, "time.T");
    const double steps = T / dt;
    if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps) || std::round(steps) < 4) {
      throw ConfigError("time.T", "T/dt must be an integer >= 4");
    }
  }
  positive(tol, "picard.tol");
  if (max_iter < 1) throw ConfigError("picard.max_iter", "must be >= 1");
  positive(Cs, "picard.Cs");
  if (!(datum.amplitude >= 0.0)) throw ConfigError("datum.amplitude", "must be nonnegative");
  positive(datum.width, "datum.width");
  if (datum.packets < 1) throw ConfigError("datum.packets", "must be >= 1");
  positive(datum.band, "datum.band");
  positive(datum.spread, "datum.spread");
  positive(quad.inner_radius, "quadrature.inner_radius");
  if (!(quad.outer_radius > quad.inner_radius)) {
    throw ConfigError("quadrature.outer_radius", "must exceed inner_radius");
  }
  if (quad.panels < 1) throw ConfigError("quadrature.panels", "must be >= 1");
  if (!(quad.grading >= 1.0)) throw ConfigError("quadrature.grading", "must be >= 1");
  positive(quad.tolerance, "quadrature.tolerance");
  positive(refine_threshold, "sweep.refine_threshold");

  switch (kind) {
    case ExperimentKind::lemma22:
    case ExperimentKind::lemma23:
    case ExperimentKind::lemma24:
    case ExperimentKind::stein_equivalence: {
      const double hi = kind == ExperimentKind::lemma22 ? 1.0 : kind == ExperimentKind::stein_equivalence ? 1.0 : 0.5;
      if (b_values.empty()) throw ConfigError("sweep.b", "missing");
      for (double b : b_values) {
        if (!(b > 0.0 && b <= hi) || (hi == 1.0 && b == 1.0)) throw ConfigError("sweep.b", "b outside the admissible range");
      }
      if (kind != ExperimentKind::stein_equivalence) {
        if (t_values.empty()) throw ConfigError("sweep.t", "missing");
        all_positive(t_values, "sweep.t");
      }
      if (kind == ExperimentKind::lemma22 && x_values.empty()) throw ConfigError("sweep.x", "missing");
      if (kind == ExperimentKind::lemma23) {
        positive(x_min, "sweep.x_min");
        positive(exclusion_budget, "sweep.exclusion_budget");
        all_positive(x_over_t_pi, "sweep.x_over_t_pi");
      }
      if (kind == ExperimentKind::stein_equivalence && stein_corpus_size < 1) {
        throw ConfigError("stein.corpus_size", "must be >= 1");
      }
      break;
    }
    case ExperimentKind::convergence: {
      if (dt_values.size() < 3) throw ConfigError("convergence.dt", "need at least three step sizes");
      all_positive(dt_values, "convergence.dt");
      if (T_auto) throw ConfigError("time.T", "auto is not available for convergence studies");
      for (double h : dt_values) {
        const double steps = T / h;
        if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps) || std::round(steps) < 4) {
          throw ConfigError("convergence.dt", "T/dt must be an integer >= 4 for every step size");
        }
      }
      break;
    }
    case ExperimentKind::calibrate: {
      positive(calibration_dt, "calibration.dt");
      if (!(calibration_T_max >= 4.0 * calibration_dt)) throw ConfigError("calibration.T_max", "must be >= 4 dt");
      if (calibration_bisections < 1) throw ConfigError("calibration.bisections", "must be >= 1");
      bool zero = false;
      for (const auto& d : corpus) zero |= d.amplitude == 0.0;
      if (corpus.size() < 5 || zero) {
        throw ConfigError("calibration.families",
                          "degenerate corpus (need at least five nonzero data, got " + std::to_string(corpus.size()) +
                              (zero ? " with zero amplitude" : "") + ")");
      }
      break;
    }
    case ExperimentKind::persistence: break;
  }
}

std::vector<std::string> ExperimentConfig::describe() const {
  std::vector<std::string> out;
  auto add = [&](const std::string& section, const std::string& key, const std::string& value) {
    out.push_back("[" + section + "] " + key + " = " + value);
  };
  add("experiment", "kind", to_string(kind));
  add("experiment", "output_dir", output_dir.string());
  add("experiment", "checkpoint", checkpoint ? "true" : "false");
  add("experiment", "refine", refine ? "true" : "false");
  add("grid", "n_points", std::to_string(n_points));
  add("grid", "L", fmt17(L));
  add("equation", "sign", to_string(sign));
  add("equation", "s", fmt17(s));
  add("time", "T", T_auto ? "auto" : fmt17(T));
  add("time", "dt", fmt17(dt));
  add("time", "window", fmt17(window));
  add("picard", "tol", fmt17(tol));
  add("picard", "max_iter", std::to_string(max_iter));
  add("picard", "dealias", dealias ? "true" : "false");
  add("picard", "Cs", fmt17(Cs));
  add("picard", "fallback_reference", fallback_reference ? "true" : "false");
  add("datum", "spec", describe_datum(datum));
  add("sweep", "b", join(b_values));
  add("sweep", "t", join(t_values));
  add("sweep", "x", join(x_values));
  add("sweep", "x_over_t_pi", join(x_over_t_pi));
  add("sweep", "x_min", fmt17(x_min));
  add("sweep", "exclusion_budget", fmt17(exclusion_budget));
  add("sweep", "refine_threshold", fmt17(refine_threshold));
  add("quadrature", "inner_radius", fmt17(quad.inner_radius));
  add("quadrature", "outer_radius", fmt17(quad.outer_radius));
  add("quadrature", "panels", std::to_string(quad.panels));
  add("quadrature", "grading", fmt17(quad.grading));
  add("quadrature", "tolerance", fmt17(quad.tolerance));
  add("convergence", "mode", to_string(convergence_mode));
  add("convergence", "dt", join(dt_values));
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    add("calibration", "corpus." + std::to_string(i), describe_datum(corpus[i]));
  }
  add("calibration", "holdout", holdout ? describe_datum(*holdout) : "none");
  add("calibration", "dt", fmt17(calibration_dt));
  add("calibration", "T_max", fmt17(calibration_T_max));
  add("calibration", "bisections", std::to_string(calibration_bisections));
  add("stein", "corpus_size", std::to_string(stein_corpus_size));
  return out;
}

// --- envelope ---------------------------------------------------------------------

bool Envelope::holds() const {
  for (std::size_t m = 0; m < weighted.size(); ++m) {
    if (!(weighted[m] <= bound[m] * (1.0 + 1e-12))) return false;
  }
  return true;
}

Envelope weighted_envelope(const Trajectory& traj, double s, bool dealias) {
  validate_trajectory(traj);
  const double b = 0.5 * s;
  const std::size_t levels = traj.size();
  const auto& u0 = traj.states.front();
  const auto n0 = bracket_norms(u0, b);

  std::vector<std::array<double, 3>> factors(levels);
  for (std::size_t k = 0; k < levels; ++k) factors[k] = bracket_factors(traj.times[k], b);
  auto bracket = [&](const BracketNorms& n, std::size_t lag) {
    const auto& c = factors[lag];
    return c[0] * n.l2 + c[1] * n.up + c[2] * n.down + n.weighted;
  };

  Envelope env;
  for (std::size_t m = 0; m < levels; ++m) {
    const double denom = bracket(n0, m);
    if (denom > 0.0) env.Cb = std::max(env.Cb, weighted_norm(apply_group(u0, traj.times[m], traj.sign), b) / denom);
  }

  std::vector<BracketNorms> nn(levels);
  for (std::size_t j = 0; j < levels; ++j) nn[j] = bracket_norms(nonlinearity(traj.states[j], dealias), b);

  env.weighted.resize(levels);
  env.bound.resize(levels);
  for (std::size_t m = 0; m < levels; ++m) {
    env.weighted[m] = weighted_norm(traj.states[m], b);
    double duhamel = 0.0;
    if (m == 1) {
      duhamel = 0.5 * traj.dt * (bracket(nn[0], 1) + bracket(nn[1], 0));
    } else if (m >= 2) {
      const auto w = composite_time_weights(static_cast<int>(m), traj.dt);
      for (std::size_t j = 0; j <= m; ++j) duhamel += std::abs(w[j]) * bracket(nn[j], m - j);
    }
    env.bound[m] = env.Cb * (bracket(n0, m) + duhamel);
  }
  return env;
}

// --- convergence ------------------------------------------------------------------

ConvergenceStudy convergence_study(const SpectralField& u0, const PicardConfig& base, ConvergenceMode mode,
                                   std::vector<double> dt_values) {
  if (dt_values.size() < 3) throw InvalidArgument("convergence_study: need at least three step sizes");
  std::sort(dt_values.begin(), dt_values.end(), std::greater<>());
  auto final_state = [&](double dt) {
    PicardConfig pc = base;
    pc.dt = dt;
    if (mode == ConvergenceMode::linear) pc.nonlinear = false;
    if (mode == ConvergenceMode::psi) {
      const int steps = pc.steps();
      std::vector<SpectralField> states;
      states.reserve(steps + 1);
      for (int m = 0; m <= steps; ++m) states.push_back(apply_group(u0, m * dt, pc.sign));
      const auto v = make_trajectory(u0.grid_ptr(), pc.sign, dt, std::move(states));
      return psi_apply(v, u0, pc).states.back();
    }
    return reference_solve(u0, pc).states.back();
  };

  ConvergenceStudy study;
  // Target: the exact group for the linear probe, otherwise a run at a quarter
  // of the finest step so that every listed step gets an error.
  const auto target = mode == ConvergenceMode::linear ? apply_group(u0, base.T, base.sign)
                                                      : final_state(dt_values.back() / 4.0);
  for (double h : dt_values) {
    study.dt.push_back(h);
    study.error.push_back((final_state(h) - target).l2_norm());
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  bool usable = true;
  for (std::size_t i = 0; i < study.dt.size(); ++i) {
    if (!(study.error[i] > 0.0)) usable = false;
    const double x = std::log(study.dt[i]);
    const double y = std::log(study.error[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double k = static_cast<double>(study.dt.size());
  study.order = usable && k >= 2 ? (k * sxy - sx * sy) / (k * sxx - sx * sx) : kNaN;
  return study;
}

// --- calibration ----------------------------------------------------------------

double observed_contraction_time(const SpectralField& u0, const CalibrationOptions& options) {
  const int m_max = static_cast<int>(std::floor(options.T_max / options.dt + 1e-9));
  if (m_max < 4) throw InvalidArgument("calibration: T_max must be at least 4 dt");
  auto passes = [&](int m) {
    PicardConfig pc = options.picard;
    pc.dt = options.dt;
    pc.T = m * options.dt;
    try {
      return picard_solve(u0, pc).diagnostics.max_ratio() < 1.0;
    } catch (const ConvergenceError&) {
      return false;
    }
  };
  if (passes(m_max)) return m_max * options.dt;
  int hi = m_max;
  int lo = m_max / 2;
  while (lo >= 4 && !passes(lo)) {
    hi = lo;
    lo /= 2;
  }
  if (lo < 4) return 0.0;
  for (int i = 0; i < options.bisections && hi - lo > 1; ++i) {
    const int mid = lo + (hi - lo) / 2;
    if (passes(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo * options.dt;
}

namespace {

double smallest_Cs(const SpectralField& u0, double s, double observed, double window) {
  if (observed >= window) return 0.0;
  double lo = std::log(1e-12), hi = std::log(1e12);
  if (existence_time(u0, s, std::exp(hi), window) > observed) {
    throw PreconditionError("calibration: no C_s reproduces the observed time");
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (existence_time(u0, s, std::exp(mid), window) <= observed) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::exp(hi);
}

std::string datum_label(const DatumSpec& d) {
  return to_string(d.family) + "/seed" + std::to_string(d.seed) + "/A" + fmt17(d.amplitude);
}

}  // namespace

CalibrationResult calibrate_Cs(const GridPtr& grid, const std::vector<DatumSpec>& corpus,
                               const CalibrationOptions& options, const std::optional<DatumSpec>& holdout) {
  std::vector<SpectralField> data;
  for (const auto& d : corpus) {
    data.push_back(make_datum(grid, d));
    if (data.back().max_abs() == 0.0) throw InvalidArgument("degenerate corpus: zero datum " + datum_label(d));
  }
  if (corpus.size() < 5) {
    throw InvalidArgument("degenerate corpus: need at least five data, got " + std::to_string(corpus.size()));
  }
  const double s = options.picard.s;
  CalibrationResult result;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    CalibrationEntry e;
    e.label = datum_label(corpus[i]);
    e.observed_T = observed_contraction_time(data[i], options);
    if (e.observed_T == 0.0) {
      throw PreconditionError("calibration: datum " + e.label + " does not contract down to 4 dt");
    }
    e.datum_Cs = smallest_Cs(data[i], s, e.observed_T, options.T_max);
    result.Cs = std::max(result.Cs, e.datum_Cs);
    result.entries.push_back(e);
  }
  if (!(result.Cs > 0.0)) {
    throw PreconditionError("calibration: every datum contracts over the whole window; raise T_max");
  }
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    result.entries[i].predicted_T = existence_time(data[i], s, result.Cs, options.T_max);
  }
  if (holdout) {
    const auto u = make_datum(grid, *holdout);
    CalibrationEntry e;
    e.label = "holdout:" + datum_label(*holdout);
    e.observed_T = observed_contraction_time(u, options);
    e.datum_Cs = e.observed_T > 0.0 ? smallest_Cs(u, s, e.observed_T, options.T_max) : kNaN;
    e.predicted_T = existence_time(u, s, result.Cs, options.T_max);
    result.holdout = e;
  }
  return result;
}

std::vector<DatumSpec> equivalence_corpus(int size) {
  std::vector<DatumSpec> out;
  for (int i = 0; i < size; ++i) {
    DatumSpec d;
    d.family = static_cast<DatumFamily>(i % 3);
    d.amplitude = 0.5 + 0.25 * (i % 4);
    d.width = 0.6 + 0.35 * (i % 5);
    d.center = -2.0 + 1.3 * (i % 4);
    d.seed = static_cast<std::uint64_t>(1 + i);
    d.band = 1.5 + 0.5 * (i % 3);
    out.push_back(d);
  }
  return out;
}

// --- runners ----------------------------------------------------------------------

RunOutcome run_persistence(const ExperimentConfig& cfg) {
  Output out(cfg);
  const auto grid = make_grid(cfg.n_points, cfg.L);
  const auto u0 = make_datum(grid, cfg.datum);
  check_boundary_mass(u0, "initial datum");
  PicardConfig pc = picard_config(cfg);
  if (cfg.T_auto) {
    const double te = existence_time(u0, cfg.s, cfg.Cs, cfg.window);
    const int steps = static_cast<int>(std::floor(te / cfg.dt + 1e-9));
    out.note("existence_time", te);
    if (steps < 4) return out.finish(RunStatus::solver_failure, "existence time " + fmt17(te) + " is below 4 dt");
    pc.T = steps * cfg.dt;
  }
  out.note("T", pc.T);
  out.note("ball_radius", ball_radius(u0, cfg.s, cfg.Cs, pc.T));

  auto solve = [&](const PicardConfig& p, std::string& method, PicardDiagnostics* diag) -> std::optional<Trajectory> {
    try {
      auto r = picard_solve(u0, p);
      method = "picard";
      if (diag) *diag = r.diagnostics;
      return std::move(r.trajectory);
    } catch (const ConvergenceError& e) {
      if (diag) *diag = e.diagnostics();
      if (!cfg.fallback_reference) throw;
      method = "reference";
      return reference_solve(u0, p);
    }
  };

  std::string method;
  PicardDiagnostics diag;
  std::optional<Trajectory> traj;
  try {
    traj = solve(pc, method, &diag);
  } catch (const ConvergenceError& e) {
    if (!e.diagnostics().successive_distances.empty()) out.csv("picard.csv", picard_csv(e.diagnostics()));
    return out.finish(RunStatus::solver_failure, e.what());
  }
  out.note("solver", method);
  if (method == "picard") {
    out.csv("picard.csv", picard_csv(diag));
    out.note("picard_iterates", std::to_string(diag.iterates));
    out.note("picard_final_residual", diag.final_residual);
    out.note("picard_max_ratio", diag.max_ratio());
  }

  const auto report = trajectory_norms(*traj, cfg.s);
  std::ostringstream norms;
  write_norm_csv(norms, report);
  out.csv("norms.csv", norms.str());

  const auto env = weighted_envelope(*traj, cfg.s, cfg.dealias);
  std::ostringstream es;
  es << "t,weighted,envelope,ratio\n";
  double worst = 0.0;
  for (std::size_t m = 0; m < traj->size(); ++m) {
    const double ratio = env.bound[m] > 0.0 ? env.weighted[m] / env.bound[m] : 0.0;
    worst = std::max(worst, ratio);
    es << fmt17(traj->times[m]) << ',' << fmt17(env.weighted[m]) << ',' << fmt17(env.bound[m]) << ','
       << fmt17(ratio) << '\n';
  }
  out.csv("envelope.csv", es.str());
  out.note("envelope_Cb", env.Cb);
  out.note("envelope_max_ratio", worst);
  out.note("envelope_holds", env.holds() ? "true" : "false");

  const double sup_values[] = {report.sup.l2,           report.sup.hs,           report.sup.hom_minus_s,
                               report.sup.weighted,     report.seminorms.n[0],   report.seminorms.n[1],
                               report.seminorms.n[2],   report.seminorms.n[3],   report.seminorms.n[4],
                               report.seminorms.n[5],   report.xT};
  const char* names[] = {"l2", "hs", "hom_minus_s", "weighted", "n1", "n2", "n3", "n4", "n5", "n6", "xT"};
  bool finite = true;
  for (double v : sup_values) finite &= std::isfinite(v);
  out.note("all_finite", finite ? "true" : "false");

  bool stable = true;
  if (cfg.refine) {
    PicardConfig fine = pc;
    fine.dt = 0.5 * pc.dt;
    std::string fine_method;
    std::optional<Trajectory> refined;
    try {
      refined = solve(fine, fine_method, nullptr);
    } catch (const ConvergenceError& e) {
      return out.finish(RunStatus::solver_failure, std::string("refinement: ") + e.what());
    }
    const auto r2 = trajectory_norms(*refined, cfg.s);
    const double fine_values[] = {r2.sup.l2,         r2.sup.hs,         r2.sup.hom_minus_s, r2.sup.weighted,
                                  r2.seminorms.n[0], r2.seminorms.n[1], r2.seminorms.n[2],  r2.seminorms.n[3],
                                  r2.seminorms.n[4], r2.seminorms.n[5], r2.xT};
    std::ostringstream rs;
    rs << "quantity,base,refined,rel_change,stable\n";
    for (int i = 0; i < 11; ++i) {
      const double change = rel_change(sup_values[i], fine_values[i]);
      const bool ok = change < cfg.refine_threshold;
      stable &= ok;
      rs << names[i] << ',' << fmt17(sup_values[i]) << ',' << fmt17(fine_values[i]) << ',' << fmt17(change) << ','
         << (ok ? "true" : "false") << '\n';
    }
    out.csv("refinement.csv", rs.str());
    out.note("refinement_stable", stable ? "true" : "false");
  }

  if (cfg.checkpoint) {
    const auto path = cfg.output_dir / "trajectory.bin";
    write_checkpoint(path, *traj, cfg.s);
    out.outcome.files.push_back(path);
    out.outcome.files.push_back(cfg.output_dir / "trajectory.bin.json");
  }

  if (!finite) return out.finish(RunStatus::inconclusive, "non-finite norms");
  if (!env.holds()) return out.finish(RunStatus::inconclusive, "weighted norm exceeds the envelope");
  if (!stable) return out.finish(RunStatus::inconclusive, "norms change by more than the refinement threshold");
  return out.finish(RunStatus::ok, "");
}

RunOutcome run_lemma(const ExperimentConfig& cfg) {
  Output out(cfg);
  SweepTable base, refined;
  if (cfg.kind == ExperimentKind::lemma22) {
    base = lemma22_sweep(cfg.b_values, cfg.t_values, cfg.x_values, cfg.quad);
    refined = lemma22_sweep(cfg.b_values, cfg.t_values, cfg.x_values, cfg.quad.refined());
  } else if (cfg.kind == ExperimentKind::lemma23) {
    Lemma23Options opts{cfg.x_min, cfg.exclusion_budget};
    auto sweep = [&](const SteinQuadSpec& q) {
      SweepTable all;
      all.lemma = "lemma23";
      all.sign = cfg.sign;
      all.quad = q;
      for (double t : cfg.t_values) {
        auto xs = cfg.x_values;
        for (double m : cfg.x_over_t_pi) {
          xs.push_back(t / (m * std::numbers::pi));
          xs.push_back(-t / (m * std::numbers::pi));
        }
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        auto part = lemma23_sweep(cfg.b_values, {t}, xs, cfg.sign, q, opts);
        all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
      }
      sort_rows(all.rows);
      if (all.rows.empty()) all.status = "no admissible points";
      return all;
    };
    base = sweep(cfg.quad);
    refined = sweep(cfg.quad.refined());
  } else {
    auto check = [&](int n) {
      const auto grid = make_grid(n, cfg.L);
      const auto f = make_datum(grid, cfg.datum);
      SweepTable all;
      for (double b : cfg.b_values) {
        auto part = lemma24_check(f, cfg.t_values, b, cfg.sign);
        if (all.lemma.empty()) all = part;
        else all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
      }
      sort_rows(all.rows);
      return all;
    };
    base = check(cfg.n_points);
    refined = check(2 * cfg.n_points);
  }

  std::ostringstream a, b, v, f;
  write_sweep_csv(a, base);
  write_sweep_csv(b, refined);
  out.csv("sweep.csv", a.str());
  out.csv("sweep_refined.csv", b.str());
  const auto verdicts = refinement_verdict(base, refined, cfg.refine_threshold);
  write_verdict_csv(v, verdicts);
  out.csv("verdict.csv", v.str());
  write_flags_csv(f, base);
  out.csv("flags.csv", f.str());

  out.note("table_status", base.status);
  out.note("rows", std::to_string(base.rows.size()));
  out.note("flagged_rows", std::to_string(base.flagged()));
  out.note("flagged_rows_refined", std::to_string(refined.flagged()));
  bool stable = true;
  for (const auto& vd : verdicts) {
    stable &= vd.stable;
    if (std::isnan(vd.b)) {
      out.note("sup_ratio", vd.sup_ratio);
      out.note("sup_ratio_refined", vd.sup_ratio_refined);
      out.note("rel_change", vd.rel_change);
    }
  }
  out.note("stable", stable ? "true" : "false");
  if (base.lemma == "lemma24") {
    double mass = 0.0;
    for (const auto& r : base.rows) mass = std::max(mass, r.boundary_mass);
    out.note("boundary_mass_max", mass);
  }
  if (base.rows.empty()) return out.finish(RunStatus::inconclusive, base.status);
  if (base.flagged() || refined.flagged()) return out.finish(RunStatus::inconclusive, "flagged rows (see flags.csv)");
  if (!stable) return out.finish(RunStatus::inconclusive, "sup ratio not refinement-stable");
  return out.finish(RunStatus::ok, "");
}

RunOutcome run_convergence(const ExperimentConfig& cfg) {
  Output out(cfg);
  const auto grid = make_grid(cfg.n_points, cfg.L);
  const auto u0 = make_datum(grid, cfg.datum);
  ConvergenceStudy study;
  try {
    study = convergence_study(u0, picard_config(cfg), cfg.convergence_mode, cfg.dt_values);
  } catch (const ConvergenceError& e) {
    return out.finish(RunStatus::solver_failure, e.what());
  }
  std::ostringstream os;
  os << "dt,error\n";
  for (std::size_t i = 0; i < study.dt.size(); ++i) os << fmt17(study.dt[i]) << ',' << fmt17(study.error[i]) << '\n';
  out.csv("convergence.csv", os.str());
  out.note("mode", to_string(cfg.convergence_mode));
  out.note("order", study.order);
  return out.finish(RunStatus::ok, "");
}

RunOutcome run_calibration(const ExperimentConfig& cfg) {
  Output out(cfg);
  const auto grid = make_grid(cfg.n_points, cfg.L);
  CalibrationOptions options;
  options.dt = cfg.calibration_dt;
  options.T_max = cfg.calibration_T_max;
  options.bisections = cfg.calibration_bisections;
  options.picard = picard_config(cfg);
  CalibrationResult result;
  try {
    result = calibrate_Cs(grid, cfg.corpus, options, cfg.holdout);
  } catch (const PreconditionError& e) {
    return out.finish(RunStatus::solver_failure, e.what());
  }
  std::ostringstream os;
  os << "datum,observed_T,predicted_T,datum_Cs\n";
  auto row = [&](const CalibrationEntry& e) {
    os << e.label << ',' << fmt17(e.observed_T) << ',' << fmt17(e.predicted_T) << ',' << fmt17(e.datum_Cs) << '\n';
  };
  for (const auto& e : result.entries) row(e);
  if (result.holdout) row(*result.holdout);
  out.csv("calibration.csv", os.str());
  out.note("Cs", result.Cs);
  if (result.holdout) {
    const bool ok = result.holdout->predicted_T <= result.holdout->observed_T;
    out.note("holdout_predicted_within_observed", ok ? "true" : "false");
    if (!ok) return out.finish(RunStatus::inconclusive, "held-out datum: predicted T exceeds observed T");
  }
  return out.finish(RunStatus::ok, "");
}

RunOutcome run_stein_equivalence(const ExperimentConfig& cfg) {
  Output out(cfg);
  const auto grid = make_grid(cfg.n_points, cfg.L);
  const auto corpus = equivalence_corpus(cfg.stein_corpus_size);
  std::ostringstream os;
  os << "index,datum,b,ratio,ratio_refined,rel_change,in_range,stable\n";
  bool all_ok = true;
  std::string failure;
  double lo = kNaN, hi = kNaN;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto f = make_datum(grid, corpus[i]);
    for (double b : cfg.b_values) {
      double r = kNaN, rr = kNaN;
      try {
        r = equivalence_ratio(f, b, cfg.quad).ratio;
        rr = equivalence_ratio(f, b, cfg.quad.refined()).ratio;
      } catch (const QuadratureError& e) {
        if (failure.empty()) failure = e.what();
      }
      const double change = rel_change(r, rr);
      const bool in_range = r >= 0.1 && r <= 10.0;
      const bool stable = change < cfg.refine_threshold;
      all_ok &= in_range && stable;
      if (std::isfinite(r)) {
        lo = std::isnan(lo) ? r : std::min(lo, r);
        hi = std::isnan(hi) ? r : std::max(hi, r);
      }
      os << i << ',' << datum_label(corpus[i]) << ',' << fmt17(b) << ',' << fmt17(r) << ',' << fmt17(rr) << ','
         << fmt17(change) << ',' << (in_range ? "true" : "false") << ',' << (stable ? "true" : "false") << '\n';
    }
  }
  out.csv("equivalence.csv", os.str());
  out.note("ratio_min", lo);
  out.note("ratio_max", hi);
  if (!failure.empty()) return out.finish(RunStatus::inconclusive, failure);
  if (!all_ok) return out.finish(RunStatus::inconclusive, "ratio outside [0.1, 10] or not refinement-stable");
  return out.finish(RunStatus::ok, "");
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  switch (cfg.kind) {
    case ExperimentKind::persistence: return run_persistence(cfg);
    case ExperimentKind::lemma22:
    case ExperimentKind::lemma23:
    case ExperimentKind::lemma24: return run_lemma(cfg);
    case ExperimentKind::convergence: return run_convergence(cfg);
    case ExperimentKind::calibrate: return run_calibration(cfg);
    case ExperimentKind::stein_equivalence: return run_stein_equivalence(cfg);
  }
  throw ConfigError("experiment.kind", "unhandled kind");
}

}  // namespace ostrovsky
