#include "kitecc/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "kitecc/cc_core.hpp"
#include "kitecc/error.hpp"
#include "kitecc/kite.hpp"
#include "kitecc/report.hpp"
#include "kitecc/solver.hpp"

namespace kitecc::cli {

namespace {

using nlohmann::ordered_json;
using report::Cell;
using report::Format;
using report::Table;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::optional<double> alpha;
  bool vortex = false;
  std::optional<std::pair<double, double>> a_range;
  std::optional<std::pair<double, double>> c_range;
  std::optional<std::pair<double, double>> b_range;
  std::size_t resolution = 100;
  std::optional<double> tol;
  std::string out_path;
  std::string format = "csv";
  std::uint64_t seed = 0;
  unsigned threads = 0;

  // kite-masses
  std::string plane = "b1";
  std::optional<double> a, b, c;

  // find-cc
  std::vector<double> masses;
  std::string init_path;
  std::optional<double> i0;
  double perturb = 0.0;

  // residual-factor
  std::pair<double, double> cube{0.1, 3.0};
  bool no_rows = false;
};

PotentialParams params_of(const RunConfig& cfg, double default_alpha = 1.0) {
  if (cfg.vortex) return PotentialParams::vortex();
  try {
    return PotentialParams::power_law(cfg.alpha.value_or(default_alpha));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

double tolerance_of(const RunConfig& cfg, double fallback) {
  if (cfg.tol) return *cfg.tol;
  if (const char* env = std::getenv(kTolEnv)) {
    try {
      std::size_t used = 0;
      const double v = std::stod(env, &used);
      if (used != std::string(env).size()) throw std::invalid_argument(env);
      if (!(v > 0.0)) throw UsageError(std::string(kTolEnv) + " must be positive");
      return v;
    } catch (const std::logic_error&) {
      throw UsageError(std::string("cannot parse ") + kTolEnv + "=" + env);
    }
  }
  return fallback;
}

Format format_of(const RunConfig& cfg) {
  if (cfg.format == "csv") return Format::Csv;
  if (cfg.format == "json") return Format::Json;
  throw UsageError("--format must be csv or json");
}

Range range_of(const std::pair<double, double>& r, const char* flag) {
  if (!(r.first < r.second) || !std::isfinite(r.first) || !std::isfinite(r.second)) {
    throw UsageError(std::string(flag) + " needs lo < hi");
  }
  return {r.first, r.second};
}

bool overlaps(const Range& r, const Range& domain) { return r.lo < domain.hi && r.hi > domain.lo; }

ordered_json params_json(const RunConfig& cfg, const PotentialParams& p) {
  ordered_json j;
  j["subcommand"] = cfg.subcommand;
  if (p.is_vortex()) {
    j["potential"] = "vortex";
  } else {
    j["potential"] = "power_law";
    j["alpha"] = p.alpha();
  }
  j["beta"] = p.beta();
  return j;
}

void emit(const RunConfig& cfg, std::ostream& out, const ordered_json& config, const Table& table,
          const ordered_json& summary) {
  const Format format = format_of(cfg);
  std::ofstream file;
  std::ostream* sink = &out;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path, std::ios::binary);
    if (!file) throw UsageError("cannot open " + cfg.out_path + " for writing");
    sink = &file;
  }
  if (format == Format::Csv) {
    report::write_csv(*sink, table);
  } else {
    report::write_json(*sink, config, table, summary);
  }
}

void print_summary(std::ostream& err, const ordered_json& summary) { err << summary.dump() << '\n'; }

// ---------------------------------------------------------------------------

int cmd_verify_theorem(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PotentialParams p = params_of(cfg);
  const double tol = tolerance_of(cfg, 1e-9);
  if (!(tol > 0.0)) throw UsageError("--tol must be positive");
  if (cfg.resolution < 2) throw UsageError("--res must be at least 2");
  const Range a_range = cfg.a_range ? range_of(*cfg.a_range, "--a-range") : default_a_range();
  const Range c_range = cfg.c_range ? range_of(*cfg.c_range, "--c-range") : default_c_range();
  if (!overlaps(a_range, default_a_range()) || !overlaps(c_range, default_c_range())) {
    throw UsageError("ranges lie outside the admissible kite domain: a in (" +
                     report::format_double(default_a_range().lo) + ", " +
                     report::format_double(default_a_range().hi) + "), c in (" +
                     report::format_double(default_c_range().lo) + ", " +
                     report::format_double(default_c_range().hi) + ")");
  }

  const ScanReport rep = scan_gamma(a_range, c_range, cfg.resolution, p, tol, cfg.threads);

  Table table({"ia", "ic", "a", "c", "b_root", "deviation", "dfdb", "dfdb_gamma", "monotone",
               "sign_changes", "status"});
  for (const ScanCell& cell : rep.cells) {
    table.add_row({static_cast<std::int64_t>(cell.ia), static_cast<std::int64_t>(cell.ic), cell.a,
                   cell.c, cell.b_root, cell.deviation, cell.dfdb, cell.dfdb_gamma, cell.monotone,
                   static_cast<std::int64_t>(cell.sign_changes),
                   cell.ok ? std::string("ok") : cell.error});
  }

  ordered_json config = params_json(cfg, p);
  config["a_range"] = {a_range.lo, a_range.hi};
  config["c_range"] = {c_range.lo, c_range.hi};
  config["resolution"] = cfg.resolution;
  config["tol"] = tol;
  ordered_json summary;
  summary["cells"] = rep.cells.size();
  summary["failed"] = rep.failed;
  summary["max_deviation"] = rep.max_deviation;
  summary["all_monotone"] = rep.all_monotone;
  summary["all_single_crossing"] = rep.all_single_crossing;
  summary["passed"] = rep.passed();

  emit(cfg, out, config, table, summary);
  print_summary(err, summary);
  return rep.passed() ? kPass : kChecksFailed;
}

// ---------------------------------------------------------------------------

std::vector<double> axis(const std::optional<double>& single,
                         const std::optional<std::pair<double, double>>& range, std::size_t res,
                         const char* flag, double fallback) {
  if (single && range) throw UsageError(std::string("give either a single value or a range for ") + flag);
  if (single) return {*single};
  if (!range) return {fallback};
  const Range r = range_of(*range, flag);
  std::vector<double> nodes;
  for (std::size_t k = 0; k < res; ++k) nodes.push_back(grid_node(r, res, k));
  return nodes;
}

int cmd_kite_masses(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PotentialParams p = params_of(cfg);
  if (cfg.resolution < 2) throw UsageError("--res must be at least 2");
  KitePlane plane;
  if (cfg.plane == "b1") {
    plane = KitePlane::B1;
    if (cfg.b || cfg.b_range) throw UsageError("b is fixed to 1 on plane b1");
  } else if (cfg.plane == "ac") {
    plane = KitePlane::AC;
    if (cfg.c || cfg.c_range) throw UsageError("c equals a on plane ac");
  } else {
    throw UsageError("--plane must be b1 or ac");
  }
  const double residual_tol = tolerance_of(cfg, 1e-10);
  const GammaBounds bounds = gamma_domain_bounds(plane);

  const std::vector<double> as = axis(cfg.a, cfg.a_range, cfg.resolution, "--a", 1.0);
  const std::vector<double> seconds =
      plane == KitePlane::B1 ? axis(cfg.c, cfg.c_range, cfg.resolution, "--c", 0.8)
                             : axis(cfg.b, cfg.b_range, cfg.resolution, "--b", 0.8);

  Table table({"plane", "a", "b", "c", "m1", "m2", "m3", "m4", "residual_norm", "in_domain",
               "status"});
  std::size_t rows = 0, flagged = 0, failed = 0;
  double max_residual = 0.0;
  for (double a : as) {
    for (double second : seconds) {
      const KitePoint k = plane == KitePlane::B1 ? KitePoint{a, 1.0, second} : KitePoint{a, second, a};
      const bool in_domain = bounds.a.contains(a) && bounds.second(a).contains(second);
      Weights m{};
      double residual = std::nan("");
      std::string status = in_domain ? "ok" : "out_of_domain";
      try {
        m = plane == KitePlane::B1 ? masses_kite_b1(k.a, k.c, p) : masses_kite_ac(k.a, k.b, p);
        PlanarConfig config = kite_positions(k);
        config.weights = m;
        residual = fit_multipliers(config, p).norm;
      } catch (const Error& e) {
        status = in_domain ? std::string("error: ") + e.what() : "out_of_domain";
      }
      ++rows;
      if (!in_domain) {
        ++flagged;
      } else if (!(residual < residual_tol)) {
        ++failed;
        if (status == "ok") status = "residual_above_tolerance";
      } else {
        max_residual = std::max(max_residual, residual);
      }
      table.add_row({cfg.plane, k.a, k.b, k.c, m[0], m[1], m[2], m[3], residual, in_domain, status});
    }
  }

  ordered_json config = params_json(cfg, p);
  config["plane"] = cfg.plane;
  config["residual_tol"] = residual_tol;
  ordered_json summary;
  summary["rows"] = rows;
  summary["out_of_domain"] = flagged;
  summary["failed"] = failed;
  summary["max_residual"] = max_residual;
  summary["passed"] = failed == 0;
  emit(cfg, out, config, table, summary);
  print_summary(err, summary);
  return failed == 0 ? kPass : kChecksFailed;
}

// ---------------------------------------------------------------------------

DistanceVector read_init_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read init file " + path);
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream fields(line);
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::logic_error&) {
        throw UsageError("init file: not a number: '" + token + "'");
      }
      if (used != token.size()) throw UsageError("init file: not a number: '" + token + "'");
      values.push_back(v);
    }
  }
  if (values.size() != kPairs) {
    throw UsageError("init file must hold six distances r12 r13 r14 r23 r24 r34, found " +
                     std::to_string(values.size()));
  }
  PairValues r{};
  for (std::size_t k = 0; k < kPairs; ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k])) {
      throw UsageError("init file: distances must be positive");
    }
    r[k] = values[k];
  }
  return DistanceVector(r);
}

int cmd_find_cc(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const PotentialParams p = params_of(cfg);
  if (cfg.masses.size() != kBodies) throw UsageError("--masses needs four values");
  Weights m{};
  for (std::size_t i = 0; i < kBodies; ++i) {
    m[i] = cfg.masses[i];
    if (!p.is_vortex() && !(m[i] > 0.0)) throw UsageError("masses must be positive");
  }
  const double tol = tolerance_of(cfg, 1e-10);
  DistanceVector init = read_init_file(cfg.init_path);
  if (cfg.perturb < 0.0) throw UsageError("--perturb must be non-negative");
  if (cfg.perturb > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t k = 0; k < kPairs; ++k) init[k] *= 1.0 + cfg.perturb * unit(rng);
  }
  double i0 = 0.0;
  try {
    i0 = cfg.i0.value_or(moment_of_inertia(init, m));
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (!(i0 > 0.0)) throw UsageError("--i0 must be positive");

  ordered_json config = params_json(cfg, p);
  config["masses"] = cfg.masses;
  config["init"] = init.values();
  config["i0"] = i0;
  config["tol"] = tol;
  config["seed"] = cfg.seed;
  config["perturb"] = cfg.perturb;

  Table table({"quantity", "value"});
  ordered_json summary;
  int code = kPass;
  try {
    const NewtonResult res = newton_cc(m, p, init, i0);
    const CCVerdict v = verify_cc(res.distances, m, p, tol);
    const char* names[kPairs] = {"r12", "r13", "r14", "r23", "r24", "r34"};
    for (std::size_t k = 0; k < kPairs; ++k) table.add_row({std::string(names[k]), res.distances[k]});
    table.add_row({std::string("lambda_prime"), res.lambda_prime});
    table.add_row({std::string("sigma"), res.sigma});
    table.add_row({std::string("residual_norm"), res.residual_norm});
    table.add_row({std::string("cc_norm"), v.cc_norm});
    table.add_row({std::string("consistency"), v.consistency});
    summary["converged"] = true;
    summary["iterations"] = res.iterations;
    summary["residual_norm"] = res.residual_norm;
    summary["realizable"] = v.realizable;
    summary["convex"] = v.convex;
    summary["diagonals_dominate"] = v.diagonals_dominate;
    summary["cc_ok"] = v.cc_ok;
    summary["masses_positive"] = v.masses_positive;
    summary["warnings"] = res.warnings;
    const bool passed = v.passed(!p.is_vortex());
    summary["passed"] = passed;
    code = passed ? kPass : kChecksFailed;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Divergence && e.kind() != ErrorKind::Decomposition) throw;
    summary["converged"] = false;
    summary["error"] = e.what();
    summary["passed"] = false;
    code = kChecksFailed;
  }
  emit(cfg, out, config, table, summary);
  print_summary(err, summary);
  return code;
}

// ---------------------------------------------------------------------------

int cmd_residual_factor(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.vortex) throw UsageError("residual-factor needs --alpha 2 or --alpha 4");
  const double alpha = cfg.alpha.value_or(1.0);
  if (alpha != 2.0 && alpha != 4.0) {
    throw UsageError("residual-factor supports alpha 2 and 4 only, got " + report::format_double(alpha));
  }
  if (cfg.resolution < 2) throw UsageError("--res must be at least 2");
  const PotentialParams p = PotentialParams::power_law(alpha);
  const Range r = range_of(cfg.cube, "--range");
  if (!(r.lo > 0.0)) throw UsageError("--range must be positive");

  Table table({"a", "b", "c", "value"});
  std::size_t evaluated = 0, skipped = 0, non_positive = 0;
  double min_value = std::numeric_limits<double>::infinity();
  const std::size_t n = cfg.resolution;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const KitePoint pt{grid_node(r, n, i), grid_node(r, n, j), grid_node(r, n, k)};
        if (!outside_guard_band(pt)) {
          ++skipped;
          continue;
        }
        const double v = residual_factor(pt, p);
        ++evaluated;
        if (!(v > 0.0)) ++non_positive;
        min_value = std::min(min_value, v);
        if (!cfg.no_rows) table.add_row({pt.a, pt.b, pt.c, v});
      }
    }
  }
  ordered_json config = params_json(cfg, p);
  config["range"] = {r.lo, r.hi};
  config["resolution"] = n;
  ordered_json summary;
  summary["evaluated"] = evaluated;
  summary["guard_band_skipped"] = skipped;
  summary["non_positive"] = non_positive;
  summary["min_value"] = evaluated ? min_value : 0.0;
  summary["passed"] = non_positive == 0;
  emit(cfg, out, config, table, summary);
  print_summary(err, summary);
  return non_positive == 0 ? kPass : kChecksFailed;
}

// ---------------------------------------------------------------------------

void add_potential_flags(CLI::App* sub, RunConfig& cfg) {
  auto* alpha = sub->add_option("--alpha", cfg.alpha, "Power-law exponent (default 1)");
  auto* vortex = sub->add_flag("--vortex", cfg.vortex, "Point-vortex Hamiltonian (beta = 2)");
  alpha->excludes(vortex);
}

void add_output_flags(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--out", cfg.out_path, "Output file (default stdout)");
  sub->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", cfg.seed, "Random seed");
  sub->add_option("--tol", cfg.tol, std::string("Tolerance (env ") + kTolEnv + " overrides default)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Four-body central configurations with perpendicular diagonals"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify-theorem", "Scan the kite domain for roots of F in b");
  add_potential_flags(verify, cfg);
  add_output_flags(verify, cfg);
  verify->add_option("--res", cfg.resolution, "Grid resolution per axis (default 100)");
  verify->add_option("--a-range", cfg.a_range, "a range: LO HI");
  verify->add_option("--c-range", cfg.c_range, "c range: LO HI");
  verify->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");

  auto* masses = app.add_subcommand("kite-masses", "Tabulate kite masses on a symmetry plane");
  add_potential_flags(masses, cfg);
  add_output_flags(masses, cfg);
  masses->add_option("--plane", cfg.plane, "b1 (b = 1) or ac (a = c)");
  masses->add_option("--a", cfg.a, "Single a value");
  masses->add_option("--b", cfg.b, "Single b value (plane ac)");
  masses->add_option("--c", cfg.c, "Single c value (plane b1)");
  masses->add_option("--a-range", cfg.a_range, "a range: LO HI");
  masses->add_option("--b-range", cfg.b_range, "b range: LO HI (plane ac)");
  masses->add_option("--c-range", cfg.c_range, "c range: LO HI (plane b1)");
  masses->add_option("--res", cfg.resolution, "Nodes per ranged axis");

  auto* find = app.add_subcommand("find-cc", "Solve for a central configuration by Newton's method");
  add_potential_flags(find, cfg);
  add_output_flags(find, cfg);
  find->add_option("--masses", cfg.masses, "m1 m2 m3 m4")->expected(4)->required();
  find->add_option("--init", cfg.init_path, "File with six initial distances")->required();
  find->add_option("--i0", cfg.i0, "Moment of inertia target (default: that of the init)");
  find->add_option("--perturb", cfg.perturb, "Relative random perturbation of the init");

  auto* resid = app.add_subcommand("residual-factor", "Grid positivity of F / ((a^2-c^2)(b^2-1))");
  add_potential_flags(resid, cfg);
  add_output_flags(resid, cfg);
  resid->add_option("--res", cfg.resolution, "Nodes per axis (default 50)");
  resid->add_option("--range", cfg.cube, "Cube side range: LO HI (default 0.1 3)");
  resid->add_flag("--no-rows", cfg.no_rows, "Only print the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (verify->parsed()) {
      cfg.subcommand = "verify-theorem";
      return cmd_verify_theorem(cfg, out, err);
    }
    if (masses->parsed()) {
      cfg.subcommand = "kite-masses";
      return cmd_kite_masses(cfg, out, err);
    }
    if (find->parsed()) {
      cfg.subcommand = "find-cc";
      return cmd_find_cc(cfg, out, err);
    }
    if (resid->parsed()) {
      cfg.subcommand = "residual-factor";
      if (resid->count("--res") == 0) cfg.resolution = 50;
      return cmd_residual_factor(cfg, out, err);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace kitecc::cli
