#include "kcomb/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

#include "kcomb/config_io.hpp"
#include "kcomb/coupling.hpp"
#include "kcomb/error.hpp"
#include "kcomb/geom_bound.hpp"
#include "kcomb/lattice.hpp"
#include "kcomb/limit_stats.hpp"
#include "kcomb/localtime.hpp"
#include "kcomb/parallel.hpp"

namespace kcomb::cli {

namespace {

using json = nlohmann::json;

// Seed tags for the independent batches of `localtime-check`.
constexpr std::uint64_t kConservationTag = 0x636F6E73ULL;
constexpr std::uint64_t kUniformityTag = 0x756E6966ULL;
constexpr std::uint64_t kKestenTag = 0x6B657374ULL;

// Upper edge of the Kesten sanity band (50 walks of 1e7 steps).
constexpr double kKestenSanityMax = 2.0;

struct Common {
  std::string config_path;
  std::vector<std::string> lines;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  std::string output = "-";
};

void add_common(CLI::App* sub, Common& c, bool lattice = true) {
  if (lattice) {
    sub->add_option("--config", c.config_path, "Lattice config file (line m=<int> p=<decimal>)");
    sub->add_option("--line", c.lines, "Lattice line as m:p (repeatable; overrides --config)");
  }
  sub->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", c.threads, "Worker threads (0 = all hardware threads)");
  sub->add_option("--output", c.output, "Output file ('-' for stdout)")->capture_default_str();
}

KCombConfig resolve_config(const std::string& path, const std::vector<std::string>& lines) {
  if (!lines.empty()) {
    std::vector<LineSpec> specs;
    for (const auto& l : lines) specs.push_back(parse_line_shorthand(l));
    return KCombConfig::from_lines(std::move(specs));
  }
  if (!path.empty()) return load_config(path);
  // Classical comb.
  return KCombConfig::from_lines({LineSpec{0, 0.25}});
}

// Accepts plain integers and exact scientific forms such as 1e6.
std::int64_t parse_count(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidArgument("not a number: '" + s + "'");
  }
  if (used != s.size() || v < 0 || v != std::floor(v) || v > 9.0e15) {
    throw InvalidArgument("not a nonnegative integer: '" + s + "'");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<std::int64_t> parse_counts(const std::string& s) {
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(s)) out.push_back(parse_count(item));
  return out;
}

std::vector<double> parse_reals(const std::string& s) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw InvalidArgument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

json config_json(const KCombConfig& config) {
  json lines = json::array();
  for (const auto& l : config.lines()) {
    lines.push_back({{"m", l.m}, {"p", l.p}, {"alpha", l.alpha()}});
  }
  return lines;
}

json base_report(const std::string& command, std::uint64_t seed) {
  return {{"command", command}, {"tool_version", kToolVersion}, {"seed", seed}};
}

json with_config(json report, const KCombConfig& config) {
  report["config"] = config_json(config);
  report["a_k"] = a_k(config);
  return report;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

// Writes the payload to --output or the default stream.
void emit(const Common& c, std::ostream& out, const std::string& payload) {
  if (c.output == "-" || c.output.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw InvalidArgument("cannot write '" + c.output + "'");
  f << payload;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

Sampler parse_sampler(const std::string& s) {
  return s == "direct" ? Sampler::direct : Sampler::coupled;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  Common common;
  std::string steps;
  std::string paths = "1";
  std::string sampler = "direct";
  std::string record = "endpoint";
  std::string checkpoints;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const auto config = resolve_config(a.common.config_path, a.common.lines);
  const auto steps = parse_count(a.steps);
  const auto paths = parse_count(a.paths);
  const auto sampler = parse_sampler(a.sampler);
  std::ostringstream csv;

  if (a.record == "endpoint") {
    std::vector<Position> ends(static_cast<std::size_t>(paths));
    parallel_for(ends.size(), a.common.threads, [&](std::size_t i) {
      const SeedSpec seed{a.common.seed, i};
      ends[i] = sampler == Sampler::direct ? simulate_direct_endpoint(config, steps, seed)
                                           : simulate_coupled_endpoint(config, steps, seed).position;
    });
    csv << "path_index,x,y\n";
    for (std::size_t i = 0; i < ends.size(); ++i) {
      csv << i << ',' << ends[i].x << ',' << ends[i].y << '\n';
    }
  } else {
    RecordMode mode = RecordMode::full();
    if (a.record == "checkpoints") mode = RecordMode::at(parse_counts(a.checkpoints));
    csv << "path_index,step,x,y\n";
    for (std::int64_t i = 0; i < paths; ++i) {
      const SeedSpec seed{a.common.seed, static_cast<std::uint64_t>(i)};
      const Trajectory t =
          sampler == Sampler::direct
              ? simulate_direct(config, steps, seed, mode)
              : simulate_coupled(config, steps, seed, mode, {false, false}).first;
      for (std::size_t k = 0; k < t.positions.size(); ++k) {
        csv << i << ',' << t.steps[k] << ',' << t.positions[k].x << ',' << t.positions[k].y
            << '\n';
      }
    }
  }
  emit(a.common, out, csv.str());
  return kOk;
}

// ---------------------------------------------------------------------------

struct ExactArgs {
  Common common;
  std::string steps;
};

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  const auto config = resolve_config(a.common.config_path, a.common.lines);
  const auto table = exact_distribution(config, parse_count(a.steps));
  std::ostringstream csv;
  csv << "x,y,probability\n";
  for (const auto& [pos, pr] : table.entries) {
    csv << pos.x << ',' << pos.y << ',' << format_double(pr) << '\n';
  }
  emit(a.common, out, csv.str());
  return kOk;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  Common common;
  std::string steps = "12";
  std::string paths = "100000";
  double level = 0.999;
};

int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const auto config = resolve_config(a.common.config_path, a.common.lines);
  const auto steps = parse_count(a.steps);
  const auto paths = parse_count(a.paths);
  if (paths < 1) throw InvalidArgument("--paths must be positive");
  const auto table = exact_distribution(config, steps);

  std::vector<Position> direct(static_cast<std::size_t>(paths));
  std::vector<Position> coupled(direct.size());
  parallel_for(direct.size(), a.common.threads, [&](std::size_t i) {
    const SeedSpec seed{a.common.seed, i};
    direct[i] = simulate_direct_endpoint(config, steps, seed);
    coupled[i] = simulate_coupled_endpoint(config, steps, seed).position;
  });
  const auto chi_d = chi_square_endpoint(count_endpoints(direct), table);
  const auto chi_c = chi_square_endpoint(count_endpoints(coupled), table);
  const double threshold = chi_d.dof > 0 ? chi_square_quantile(chi_d.dof, a.level) : 0.0;
  const bool pass_d = chi_d.statistic <= threshold;
  const bool pass_c = chi_c.statistic <= threshold;

  json r = with_config(base_report("compare", a.common.seed), config);
  r["steps"] = steps;
  r["paths"] = paths;
  r["level"] = a.level;
  r["chi2_direct"] = chi_d.statistic;
  r["chi2_coupled"] = chi_c.statistic;
  r["dof"] = chi_d.dof;
  r["bins"] = chi_d.bins;
  r["threshold"] = threshold;
  r["pass_direct"] = pass_d;
  r["pass_coupled"] = pass_c;
  r["pass"] = pass_d && pass_c;
  emit(a.common, out, dump(r));
  return pass_d && pass_c ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct CoupleCheckArgs {
  Common common;
  std::string grid = "10000,100000,1000000";
  std::string paths = "20";
  double min_slope = 0.15;
  double max_slope = 0.35;
  double local_time_max = 0.35;
  double v_deficit_max = 0.6;
};

int cmd_couple_check(const CoupleCheckArgs& a, std::ostream& out) {
  const auto config = resolve_config(a.common.config_path, a.common.lines);
  const auto grid = parse_counts(a.grid);
  const auto rep =
      coupling_error_growth(config, grid, parse_count(a.paths), a.common.seed, a.common.threads);

  json r = with_config(base_report("couple-check", a.common.seed), config);
  r["grid"] = grid;
  r["paths_per_n"] = parse_count(a.paths);
  json pts = json::array();
  for (const auto& p : rep.points) {
    json j{{"n", p.n},
           {"mean_max_error", p.mean_max_error},
           {"mean_abs_v_minus_n", p.mean_abs_v_minus_n}};
    if (p.mean_abs_h_vs_local_time) j["mean_abs_h_vs_local_time"] = *p.mean_abs_h_vs_local_time;
    pts.push_back(j);
  }
  r["points"] = pts;
  r["target_exponent"] = 0.25;
  r["max_error_slope"] = rep.max_error_fit.slope;
  r["max_error_slope_stderr"] = rep.max_error_fit.slope_stderr;
  r["max_error_band"] = {a.min_slope, a.max_slope};
  const bool pass_err =
      rep.max_error_fit.slope >= a.min_slope && rep.max_error_fit.slope <= a.max_slope;
  r["pass_max_error"] = pass_err;
  bool pass_lt = true;
  if (rep.local_time_fit) {
    r["local_time_slope"] = rep.local_time_fit->slope;
    r["local_time_slope_max"] = a.local_time_max;
    pass_lt = rep.local_time_fit->slope <= a.local_time_max;
    r["pass_local_time"] = pass_lt;
  }
  r["v_deficit_slope"] = rep.v_deficit_fit.slope;
  r["v_deficit_slope_max"] = a.v_deficit_max;
  const bool pass_v = rep.v_deficit_fit.slope <= a.v_deficit_max;
  r["pass_v_deficit"] = pass_v;
  const bool pass = pass_err && pass_lt && pass_v;
  r["pass"] = pass;
  emit(a.common, out, dump(r));
  return pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct TailCheckArgs {
  Common common;
  std::string alphas = "0.2,0.5,0.8";
  std::string ns = "1000,10000,100000";
  std::string cs = "1,2,3,4";
  std::string reps = "10000";
};

int cmd_tail_check(const TailCheckArgs& a, std::ostream& out) {
  const auto alphas = parse_reals(a.alphas);
  const auto ns = parse_counts(a.ns);
  const auto cs = parse_reals(a.cs);
  const auto reps = parse_count(a.reps);
  json r = base_report("tail-check", a.common.seed);
  r["alphas"] = alphas;
  r["ns"] = ns;
  r["cs"] = cs;
  r["reps"] = reps;
  r["bound"] = "2 exp(-lambda^2 alpha^2 / (4 (1 - alpha) n))";
  r["lambda"] = "c sqrt((1 - alpha) n) / alpha";
  r["lambda_cap"] = "0.1 (1 - alpha) / alpha per unit n";
  json grid = json::array();
  bool pass = true;
  std::uint64_t cell = 0;
  for (double alpha : alphas) {
    for (auto n : ns) {
      const auto rep =
          tail_check(alpha, n, cs, reps, derive_key(a.common.seed, cell++), a.common.threads);
      json pts = json::array();
      for (const auto& p : rep.points) {
        pts.push_back({{"c", p.c},
                       {"lambda", p.lambda},
                       {"bound", p.bound},
                       {"in_range", p.in_range},
                       {"empirical", p.empirical},
                       {"std_error", p.std_error},
                       {"dominated", p.dominated}});
        pass = pass && p.dominated;
      }
      grid.push_back({{"alpha", alpha},
                      {"n", n},
                      {"points", pts},
                      {"final_sum_mean", rep.final_sum_mean},
                      {"final_sum_reference_se", rep.final_sum_reference_se}});
    }
  }
  r["grid"] = grid;
  r["pass"] = pass;
  emit(a.common, out, dump(r));
  return pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct ScalingArgs {
  Common common;
  std::string grid = "1000,10000,100000,1000000";
  std::string paths = "2000";
  std::string sampler = "coupled";
  double tol_x = 0.03;
  double tol_y = 0.02;
};

int cmd_scaling(const ScalingArgs& a, std::ostream& out) {
  const auto config = resolve_config(a.common.config_path, a.common.lines);
  const auto grid = parse_counts(a.grid);
  const auto paths = parse_count(a.paths);
  const auto res = scaling_exponents(config, grid, paths, a.common.seed,
                                     parse_sampler(a.sampler), a.common.threads);
  const auto block = [](const ScalingResult& s, double target, double tol) {
    return json{{"mean_abs", s.mean_abs},
                {"slope", s.fit.slope},
                {"slope_stderr", s.fit.slope_stderr},
                {"target", target},
                {"tolerance", tol},
                {"pass", std::abs(s.fit.slope - target) <= tol}};
  };
  json r = with_config(base_report("scaling", a.common.seed), config);
  r["grid"] = grid;
  r["paths_per_n"] = paths;
  r["sampler"] = a.sampler;
  r["x"] = block(res.x, 0.25, a.tol_x);
  r["y"] = block(res.y, 0.5, a.tol_y);
  const bool pass = r["x"]["pass"].get<bool>() && r["y"]["pass"].get<bool>();
  r["pass"] = pass;
  emit(a.common, out, dump(r));
  return pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct LimitsArgs {
  Common common;
  std::string grid = "1000,30000,1000000";
  std::string paths = "5000";
  std::string reference = "100000";
  std::string sampler = "coupled";
  double max_ks_y = 0.03;
  double max_ks_x = 0.05;
};

int cmd_limits(const LimitsArgs& a, std::ostream& out) {
  const auto config = resolve_config(a.common.config_path, a.common.lines);
  const auto grid = parse_counts(a.grid);
  const auto rep = marginal_limits(config, grid, parse_count(a.paths), parse_count(a.reference),
                                   a.common.seed, parse_sampler(a.sampler), a.common.threads);
  std::vector<double> ks_x, ks_y;
  json pts = json::array();
  for (const auto& p : rep.points) {
    ks_x.push_back(p.ks_x);
    ks_y.push_back(p.ks_y);
    pts.push_back({{"n", p.n}, {"ks_x", p.ks_x}, {"ks_y", p.ks_y}});
  }
  json r = with_config(base_report("limits", a.common.seed), config);
  r["grid"] = grid;
  r["paths"] = rep.n_paths;
  r["reference_size"] = rep.reference_size;
  r["sampler"] = a.sampler;
  r["x_reference"] = "sqrt(A_K |Z2|) Z1";
  r["y_reference"] = "N(0,1)";
  r["points"] = pts;
  r["max_ks_x"] = a.max_ks_x;
  r["max_ks_y"] = a.max_ks_y;
  const bool dec_x = strictly_decreasing(ks_x);
  const bool dec_y = strictly_decreasing(ks_y);
  const bool pass_x = dec_x && ks_x.back() <= a.max_ks_x;
  const bool pass_y = dec_y && ks_y.back() <= a.max_ks_y;
  r["x_decreasing"] = dec_x;
  r["y_decreasing"] = dec_y;
  r["pass_x"] = pass_x;
  r["pass_y"] = pass_y;
  r["pass"] = pass_x && pass_y;
  emit(a.common, out, dump(r));
  return pass_x && pass_y ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct LilArgs {
  Common common;
  std::string steps = "10000000";
  std::string path_index = "0";
  double ratio = kDefaultCheckpointRatio;
  std::string sampler = "coupled";
  std::string format = "csv";
};

int cmd_lil(const LilArgs& a, std::ostream& out, std::ostream& err) {
  const auto config = resolve_config(a.common.config_path, a.common.lines);
  const auto steps = parse_count(a.steps);
  const SeedSpec seed{a.common.seed, static_cast<std::uint64_t>(parse_count(a.path_index))};
  const auto mode = RecordMode::at(geometric_checkpoints(steps, a.ratio));
  const Trajectory t = parse_sampler(a.sampler) == Sampler::direct
                           ? simulate_direct(config, steps, seed, mode)
                           : simulate_coupled(config, steps, seed, mode, {false, false}).first;
  const auto rep = lil_statistics(t, a_k(config));
  if (a.format == "json") {
    json r = with_config(base_report("lil", a.common.seed), config);
    r["steps"] = steps;
    r["path_index"] = seed.stream_index;
    r["ratio"] = a.ratio;
    r["sampler"] = a.sampler;
    r["limsup_target_x_stat"] = lil_target_x();
    r["limsup_target_y_stat"] = kLilTargetY;
    r["liminf_target_chung_stat"] = kChungTarget;
    r["gated"] = false;
    r["skipped_checkpoints"] = rep.skipped;
    json rows = json::array();
    for (const auto& row : rep.rows) {
      rows.push_back({{"N", row.n},
                      {"y_stat", row.y_stat},
                      {"x_stat", row.x_stat},
                      {"chung_stat", row.chung_stat}});
    }
    r["rows"] = rows;
    emit(a.common, out, dump(r));
    return kOk;
  }
  std::ostringstream csv;
  csv << "N,y_stat,x_stat,chung_stat\n";
  for (const auto& row : rep.rows) {
    csv << row.n << ',' << format_double(row.y_stat) << ',' << format_double(row.x_stat) << ','
        << format_double(row.chung_stat) << '\n';
  }
  emit(a.common, out, csv.str());
  err << "kcomb: lil reference constants (ungated): limsup x_stat -> "
      << format_double(lil_target_x()) << ", limsup y_stat -> 1, liminf chung_stat -> 1\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct LocalTimeArgs {
  Common common;
  std::string grid = "10000,100000,1000000";
  std::string paths = "50";
  double exponent = 0.3;
  std::string conservation_steps = "1000";
  std::string conservation_paths = "1000";
  std::string kesten_steps = "10000000";
  std::string kesten_paths = "50";
};

int cmd_localtime(const LocalTimeArgs& a, std::ostream& out) {
  const auto grid = parse_counts(a.grid);
  const auto paths = parse_count(a.paths);
  const auto cons_n = parse_count(a.conservation_steps);
  const auto cons_paths = parse_count(a.conservation_paths);
  const auto kn = parse_count(a.kesten_steps);
  const auto kpaths = parse_count(a.kesten_paths);
  const unsigned th = a.common.threads;

  const bool conserved =
      conservation_holds(cons_n, cons_paths, derive_key(a.common.seed, kConservationTag), th);
  const auto medians =
      uniformity_medians(grid, paths, a.exponent, derive_key(a.common.seed, kUniformityTag), th);
  const bool decreasing = strictly_decreasing(medians);

  json r = base_report("localtime-check", a.common.seed);
  r["conservation"] = {{"steps", cons_n}, {"paths", cons_paths}, {"pass", conserved}};
  r["uniformity"] = {{"grid", grid},
                     {"paths", paths},
                     {"exponent", a.exponent},
                     {"median_stat_over_n_pow", medians},
                     {"decreasing", decreasing}};
  if (kpaths > 0 && kn >= 16) {
    const auto ks = kesten_sample(kn, kpaths, derive_key(a.common.seed, kKestenTag), th);
    const double mx = *std::max_element(ks.begin(), ks.end());
    r["kesten"] = {{"steps", kn},
                   {"paths", kpaths},
                   {"max_stat", mx},
                   {"mean_stat", mean(ks)},
                   {"limsup_target", 1.0},
                   {"sanity_max", kKestenSanityMax},
                   {"within_sanity_band", mx <= kKestenSanityMax},
                   {"gated", false}};
  }
  const bool pass = conserved && decreasing;
  r["pass"] = pass;
  emit(a.common, out, dump(r));
  return pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------------------

struct InvarianceArgs {
  Common common;
  std::string config_a, config_b;
  std::vector<std::string> lines_a, lines_b;
  std::string steps = "1000000";
  std::string paths = "5000";
  double level = 0.01;
  std::string sampler = "coupled";
};

int cmd_invariance(const InvarianceArgs& a, std::ostream& out) {
  if ((a.config_a.empty() && a.lines_a.empty()) || (a.config_b.empty() && a.lines_b.empty())) {
    throw InvalidArgument("both lattices are required (--config-a/--line-a, --config-b/--line-b)");
  }
  const auto ca = resolve_config(a.config_a, a.lines_a);
  const auto cb = resolve_config(a.config_b, a.lines_b);
  const auto steps = parse_count(a.steps);
  const auto paths = parse_count(a.paths);
  const auto res = position_invariance_test(ca, cb, steps, paths, a.common.seed, a.level,
                                            parse_sampler(a.sampler), a.common.threads);
  json r = base_report("invariance", a.common.seed);
  r["config_a"] = config_json(ca);
  r["config_b"] = config_json(cb);
  r["a_k"] = a_k(ca);
  r["steps"] = steps;
  r["paths"] = paths;
  r["level"] = a.level;
  r["sampler"] = a.sampler;
  r["ks"] = res.ks;
  r["critical"] = res.critical;
  r["pass"] = res.pass;
  emit(a.common, out, dump(r));
  return res.pass ? kOk : kCheckFailed;
}

std::string one_line(std::string s) {
  for (auto& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Random walks on the K-comb lattice: simulation and limit-theorem checks", "kcomb"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  const std::vector<std::string> samplers{"direct", "coupled"};

  std::function<int()> action;

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Simulate paths and write endpoints or paths as CSV");
  add_common(s, sim.common);
  s->add_option("--steps", sim.steps, "Steps per path")->required();
  s->add_option("--paths", sim.paths, "Number of paths")->capture_default_str();
  s->add_option("--sampler", sim.sampler)->check(CLI::IsMember(samplers))->capture_default_str();
  s->add_option("--record", sim.record)
      ->check(CLI::IsMember({"endpoint", "full", "checkpoints"}))
      ->capture_default_str();
  s->add_option("--checkpoints", sim.checkpoints, "Comma-separated step indices");
  s->callback([&] { action = [&] { return cmd_simulate(sim, out); }; });

  ExactArgs ex;
  auto* e = app.add_subcommand("exact", "Exact distribution of C(N) as CSV");
  add_common(e, ex.common);
  e->add_option("--steps", ex.steps)->required();
  e->callback([&] { action = [&] { return cmd_exact(ex, out); }; });

  CompareArgs cmp;
  auto* c = app.add_subcommand("compare", "Chi-square of both samplers against the exact law");
  add_common(c, cmp.common);
  c->add_option("--steps", cmp.steps)->capture_default_str();
  c->add_option("--paths", cmp.paths)->capture_default_str();
  c->add_option("--level", cmp.level, "Chi-square quantile used as threshold")
      ->capture_default_str();
  c->callback([&] { action = [&] { return cmd_compare(cmp, out); }; });

  CoupleCheckArgs cc;
  auto* cch = app.add_subcommand("couple-check", "Growth of max |H_i - D_2(V_i)|");
  add_common(cch, cc.common);
  cch->add_option("--grid", cc.grid)->capture_default_str();
  cch->add_option("--paths", cc.paths)->capture_default_str();
  cch->add_option("--min-slope", cc.min_slope)->capture_default_str();
  cch->add_option("--max-slope", cc.max_slope)->capture_default_str();
  cch->callback([&] { action = [&] { return cmd_couple_check(cc, out); }; });

  TailCheckArgs tc;
  auto* t = app.add_subcommand("tail-check", "Geometric maximal tail bound vs Monte Carlo");
  add_common(t, tc.common, false);
  t->add_option("--alphas", tc.alphas)->capture_default_str();
  t->add_option("--ns", tc.ns)->capture_default_str();
  t->add_option("--cs", tc.cs)->capture_default_str();
  t->add_option("--reps", tc.reps)->capture_default_str();
  t->callback([&] { action = [&] { return cmd_tail_check(tc, out); }; });

  ScalingArgs sc;
  auto* scl = app.add_subcommand("scaling", "Log-log scaling exponents of |C1(N)| and |C2(N)|");
  add_common(scl, sc.common);
  scl->add_option("--grid", sc.grid)->capture_default_str();
  scl->add_option("--paths", sc.paths)->capture_default_str();
  scl->add_option("--sampler", sc.sampler)->check(CLI::IsMember(samplers))->capture_default_str();
  scl->callback([&] { action = [&] { return cmd_scaling(sc, out); }; });

  LimitsArgs lim;
  auto* l = app.add_subcommand("limits", "KS distance of scaled marginals from the limit laws");
  add_common(l, lim.common);
  l->add_option("--grid", lim.grid)->capture_default_str();
  l->add_option("--paths", lim.paths)->capture_default_str();
  l->add_option("--reference", lim.reference, "Reference sample size")->capture_default_str();
  l->add_option("--sampler", lim.sampler)->check(CLI::IsMember(samplers))->capture_default_str();
  l->add_option("--max-ks-x", lim.max_ks_x)->capture_default_str();
  l->add_option("--max-ks-y", lim.max_ks_y)->capture_default_str();
  l->callback([&] { action = [&] { return cmd_limits(lim, out); }; });

  LilArgs lil;
  auto* li = app.add_subcommand("lil", "Iterated-logarithm statistic series (ungated)");
  add_common(li, lil.common);
  li->add_option("--steps", lil.steps)->capture_default_str();
  li->add_option("--path-index", lil.path_index)->capture_default_str();
  li->add_option("--ratio", lil.ratio, "Checkpoint ratio")->capture_default_str();
  li->add_option("--sampler", lil.sampler)->check(CLI::IsMember(samplers))->capture_default_str();
  li->add_option("--format", lil.format)->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  li->callback([&] { action = [&] { return cmd_lil(lil, out, err); }; });

  LocalTimeArgs lt;
  auto* lc = app.add_subcommand("localtime-check", "Local-time conservation, uniformity, Kesten");
  add_common(lc, lt.common, false);
  lc->add_option("--grid", lt.grid)->capture_default_str();
  lc->add_option("--paths", lt.paths)->capture_default_str();
  lc->add_option("--exponent", lt.exponent)->capture_default_str();
  lc->add_option("--conservation-steps", lt.conservation_steps)->capture_default_str();
  lc->add_option("--conservation-paths", lt.conservation_paths)->capture_default_str();
  lc->add_option("--kesten-steps", lt.kesten_steps)->capture_default_str();
  lc->add_option("--kesten-paths", lt.kesten_paths)->capture_default_str();
  lc->callback([&] { action = [&] { return cmd_localtime(lt, out); }; });

  InvarianceArgs inv;
  auto* iv = app.add_subcommand("invariance", "Two-sample KS of x-endpoints for two lattices");
  add_common(iv, inv.common, false);
  iv->add_option("--config-a", inv.config_a);
  iv->add_option("--config-b", inv.config_b);
  iv->add_option("--line-a", inv.lines_a, "Line of lattice A as m:p (repeatable)");
  iv->add_option("--line-b", inv.lines_b, "Line of lattice B as m:p (repeatable)");
  iv->add_option("--steps", inv.steps)->capture_default_str();
  iv->add_option("--paths", inv.paths)->capture_default_str();
  iv->add_option("--level", inv.level)->capture_default_str();
  iv->add_option("--sampler", inv.sampler)->check(CLI::IsMember(samplers))->capture_default_str();
  iv->callback([&] { action = [&] { return cmd_invariance(inv, out); }; });

  std::vector<const char*> argv{"kcomb"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& ex) {
    err << "kcomb: error: " << one_line(ex.what()) << "\n";
    return kInputError;
  }

  try {
    return action ? action() : kInputError;
  } catch (const Error& ex) {
    err << "kcomb: error: " << one_line(ex.what()) << "\n";
    return kInputError;
  }
}

}  // namespace kcomb::cli
