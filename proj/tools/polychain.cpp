// polychain: command-line driver for the chain experiments, the circle
// polarization tools, the Gram scans, and the self-check suites.
//
// Exit codes: 0 success, 1 runtime or check failure, 2 usage or input error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polychain/polychain.hpp"

namespace {

using polychain::format_double;
using polychain::ParseError;
using json = nlohmann::json;

constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

// Writes to a file, or to stdout for "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-") {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

std::size_t effective_workers(std::size_t flag) {
  const char* env = std::getenv("POLYCHAIN_THREADS");
  if (env == nullptr || *env == '\0') return flag;
  const double v = polychain::parse_double(env);
  if (!(v >= 1.0) || v != std::floor(v)) throw ParseError("POLYCHAIN_THREADS must be a positive integer");
  return static_cast<std::size_t>(v);
}

// "exact", "auto", or a width in units of the triangle diameter sqrt(2).
polychain::WidthPolicy parse_width(const std::string& s) {
  if (s == "exact") return polychain::WidthPolicy::exact();
  if (s == "auto") return polychain::WidthPolicy::automatic();
  const double v = polychain::parse_double(s);
  if (!(v > 0.0)) throw ParseError("width must be positive, 'exact' or 'auto'");
  return polychain::WidthPolicy::fixed(v * polychain::kTriangleDiameter);
}

double width_column(const polychain::WidthPolicy& w, const polychain::StatsSummary& s) {
  switch (w.kind) {
    case polychain::WidthPolicy::Kind::exact:
      return 1.0;
    case polychain::WidthPolicy::Kind::fixed:
      return w.value / polychain::kTriangleDiameter;
    case polychain::WidthPolicy::Kind::automatic:
      return s.max_width / polychain::kTriangleDiameter;
  }
  return 0.0;
}

const char* kSummaryHeader = "n,samples,norm_mean,d_n,width_over_sqrt2,stddev,master_seed,wall_secs";

void write_summary_row(std::ostream& out, std::size_t n, std::size_t samples, const polychain::StatsSummary& s,
                       double width, std::uint64_t seed, double wall) {
  out << n << ',' << samples << ',' << format_double(s.normalized_mean) << ',' << s.d_n << ','
      << format_double(width) << ',' << format_double(s.stddev_L) << ',' << seed << ',' << format_double(wall)
      << '\n';
}

json record_json(const polychain::RunRecord& r) {
  json j;
  j["sample_index"] = r.sample_index;
  j["seed"] = r.seed;
  j["realized_n"] = r.realized_n;
  j["L"] = r.L;
  j["dist_to_gamma"] = r.dist_to_gamma;
  j["width_used"] = r.width_used;
  j["active_points"] = r.active_points;
  j["failed"] = r.failed;
  j["error"] = r.error;
  j["wall_time"] = r.wall_time;
  return j;
}

json vector_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

// --- chains run -----------------------------------------------------------

struct RunOptions {
  std::size_t n = 0;
  std::size_t samples = 1;
  std::string width = "exact";
  std::string model = "uniform";
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  bool timing = false;
  std::string out = "-";
  std::string records;
  std::string config;
};

// Values from the config file apply unless the same flag was given.
void apply_config(RunOptions& o, const CLI::App& cmd) {
  if (o.config.empty()) return;
  const auto kv = polychain::KeyValueFile::load(o.config);
  auto count = [&](const std::string& key) {
    const double v = kv.get_double(key);
    if (!(v >= 0.0) || v != std::floor(v)) throw ParseError(key + " must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
  };
  static const std::set<std::string> known{"n", "samples", "width", "model", "seed", "workers", "timing"};
  for (const auto& [key, value] : kv.values()) {
    if (known.count(key) == 0) throw ParseError("unknown config key '" + key + "'");
    const bool flagged = cmd.count("--" + key) > 0;
    if (key == "n") {
      if (!flagged) o.n = count(key);
    } else if (key == "samples") {
      if (!flagged) o.samples = count(key);
    } else if (key == "width") {
      if (!flagged) o.width = value;
    } else if (key == "model") {
      if (!flagged) o.model = value;
    } else if (key == "seed") {
      if (!flagged) o.seed = count(key);
    } else if (key == "workers") {
      if (!flagged) o.workers = count(key);
    } else if (key == "timing") {
      if (!flagged) o.timing = kv.get_bool(key);
    }
  }
}

int chains_run(RunOptions o, const CLI::App& cmd) {
  apply_config(o, cmd);
  polychain::ExperimentConfig cfg;
  cfg.n = o.n;
  cfg.samples = o.samples;
  cfg.width = parse_width(o.width);
  if (o.model == "uniform") {
    cfg.model = polychain::SampleModel::uniform;
  } else if (o.model == "poisson") {
    cfg.model = polychain::SampleModel::poisson;
  } else {
    throw ParseError("model must be 'uniform' or 'poisson'");
  }
  cfg.master_seed = o.seed;
  cfg.workers = effective_workers(o.workers);
  cfg.timing = o.timing;
  if (cfg.samples < 1) throw ParseError("samples must be >= 1");
  if (cfg.workers < 1) throw ParseError("workers must be >= 1");

  const std::vector<polychain::RunRecord> recs = polychain::run_experiment(cfg);
  std::size_t failures = 0;
  double wall = 0.0;
  for (const auto& r : recs) {
    if (r.failed) {
      ++failures;
      std::cerr << "sample " << r.sample_index << " failed: " << r.error << '\n';
    }
    wall += r.wall_time;
  }
  if (!o.records.empty()) {
    Output rec(o.records);
    for (const auto& r : recs) rec.stream() << record_json(r).dump() << '\n';
  }
  const polychain::StatsSummary s = polychain::summarize(recs, cfg.n);
  Output out(o.out);
  out.stream() << kSummaryHeader << '\n';
  write_summary_row(out.stream(), cfg.n, cfg.samples, s, width_column(cfg.width, s), cfg.master_seed, wall);
  std::cerr << "mean L " << format_double(s.mean_L) << ", median L " << format_double(s.median_L)
            << ", median distance to arc " << format_double(s.median_dist) << '\n';
  return failures == 0 ? 0 : kRuntimeFailure;
}

// --- chains table ---------------------------------------------------------

std::vector<polychain::TableRow> load_table_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  const auto cells = polychain::read_csv_cells(in);
  if (cells.empty()) throw ParseError("table spec is empty");
  const std::vector<std::string> header{"n", "samples", "width_over_sqrt2"};
  if (cells.front() != header) throw ParseError("table spec header must be n,samples,width_over_sqrt2");
  std::vector<polychain::TableRow> rows;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    if (cells[i].size() != 3) throw ParseError("table spec row " + std::to_string(i) + " needs 3 cells");
    const double n = polychain::parse_double(cells[i][0]);
    const double samples = polychain::parse_double(cells[i][1]);
    if (!(n >= 0.0) || n != std::floor(n)) throw ParseError("n must be a nonnegative integer");
    if (!(samples >= 1.0) || samples != std::floor(samples)) throw ParseError("samples must be a positive integer");
    rows.push_back({static_cast<std::size_t>(n), static_cast<std::size_t>(samples), parse_width(cells[i][2])});
  }
  return rows;
}

int chains_table(const std::string& spec, const std::string& out_path, std::uint64_t seed, std::size_t workers,
                 bool timing) {
  const auto rows = load_table_spec(spec);
  const auto results = polychain::reproduce_table(rows, seed, effective_workers(workers), timing);
  Output out(out_path);
  out.stream() << kSummaryHeader << '\n';
  bool failed = false;
  for (const auto& r : results) {
    if (r.failed) {
      failed = true;
      std::cerr << "row n=" << r.row.n << " failed: " << r.error << '\n';
      out.stream() << r.row.n << ',' << r.row.samples << ",nan,nan,nan,nan," << r.master_seed << ','
                   << format_double(r.wall_secs) << '\n';
      continue;
    }
    write_summary_row(out.stream(), r.row.n, r.row.samples, r.stats, width_column(r.row.width, r.stats),
                      r.master_seed, r.wall_secs);
  }
  return failed ? kRuntimeFailure : 0;
}

// --- polar circle ---------------------------------------------------------

int polar_circle(const std::string& angles_path, std::optional<std::size_t> uniform, std::size_t steps,
                 const std::string& out_path) {
  polychain::CircleConfig cfg;
  if (uniform) {
    cfg = polychain::CircleConfig::roots_of_unity(*uniform);
  } else {
    const auto kv = polychain::KeyValueFile::load(angles_path);
    for (const auto& entry : kv.values()) {
      if (entry.first != "angles") throw ParseError("unknown key '" + entry.first + "' in angles file");
    }
    const std::vector<double> turns = kv.get_list("angles");
    if (turns.empty()) throw ParseError("angles list is empty");
    cfg = polychain::CircleConfig::from_turns(turns);
  }
  if (cfg.size() == 0) throw ParseError("configuration needs at least one point");
  if (polychain::min_separation(cfg) <= 1e-12) throw std::runtime_error("configuration has coincident points");

  const auto traj = polychain::phi_trajectory(cfg, steps, 1e-9);
  Output out(out_path);
  std::ostream& os = out.stream();
  os << "step";
  for (std::size_t j = 0; j < cfg.size(); ++j) os << ",angle_" << j;
  os << ",M\n";
  for (const auto& st : traj) {
    os << st.step;
    for (double u : st.cfg.turns()) os << ',' << format_double(u);
    os << ',' << format_double(st.M) << '\n';
  }
  return 0;
}

// --- polar gram -----------------------------------------------------------

int polar_gram(const std::string& vectors_path, const std::string& out_path, bool normalize, int restarts,
               std::uint64_t seed) {
  const Eigen::MatrixXd u = polychain::read_csv_matrix(vectors_path);
  if (u.cols() > 12) throw ParseError("the scan supports at most 12 vectors");
  std::optional<polychain::UnitVectorSystem> sys;
  try {
    sys = normalize ? polychain::UnitVectorSystem::normalized(u) : polychain::UnitVectorSystem(u);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  const polychain::ConjectureReport rep = polychain::conjecture_scan(*sys);
  const polychain::SphereProductResult sp = polychain::product_max_on_sphere(*sys, restarts, seed);
  const polychain::GramData g = polychain::gram(*sys);

  Output out(out_path);
  std::ostream& os = out.stream();
  for (std::size_t q = 0; q < rep.solutions.size(); ++q) {
    const auto& s = rep.solutions[q];
    json j;
    j["quadrant"] = q;
    j["signs"] = vector_json(s.signs);
    j["present"] = s.present;
    if (s.present) {
      j["alpha"] = vector_json(s.alpha);
      j["product"] = s.product;
      j["norm_sq"] = s.norm_sq;
      j["residual"] = s.residual;
    } else {
      j["alpha"] = nullptr;
      j["product"] = nullptr;
      j["norm_sq"] = nullptr;
      j["residual"] = nullptr;
    }
    os << j.dump() << '\n';
  }
  json sum;
  sum["summary"] = true;
  sum["n"] = sys->count();
  sum["d"] = sys->dim();
  sum["rank"] = g.rank;
  sum["present"] = rep.present;
  sum["min_norm_sq"] = rep.min_norm_sq;
  sum["min_abs_product"] = rep.min_abs_product;
  sum["max_abs_product"] = rep.max_abs_product;
  sum["ball_witness"] = rep.ball_witness;
  sum["product_witness"] = rep.product_witness;
  sum["v"] = vector_json(rep.v);
  sum["v_norm_sq"] = rep.v_norm_sq;
  sum["v_residual"] = rep.v_residual;
  sum["eigenball_violation"] = rep.ball_violation;
  sum["eigenhyperbola_violation"] = rep.hyperbola_violation;
  sum["sphere_product_max"] = sp.value;
  sum["sphere_product_bound"] = sp.bound;
  sum["sphere_below_bound"] = sp.below_bound;
  os << sum.dump() << '\n';
  return 0;
}

// --- verify ---------------------------------------------------------------

int verify(const std::string& out_path, bool perturb, std::uint64_t seed) {
  polychain::VerifyOptions opt;
  opt.seed = seed;
  if (perturb) opt.cosform_constant = 2.0 * (1.0 + 1e-6);
  const auto suites = polychain::run_verify(opt);
  Output out(out_path);
  out.stream() << "suite,cases,max_residual,tolerance,gate,status\n";
  bool ok = true;
  for (const auto& s : suites) {
    const char* status = !s.gate ? "reported" : s.passed ? "pass" : "fail";
    ok = ok && s.passed;
    out.stream() << s.name << ',' << s.cases << ',' << format_double(s.max_residual) << ','
                 << format_double(s.tolerance) << ',' << (s.gate ? "yes" : "no") << ',' << status << '\n';
  }
  return ok ? 0 : kRuntimeFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Longest convex chains in random triangle samples, and polarization on the circle"};
  app.require_subcommand(1);

  auto* chains = app.add_subcommand("chains", "Longest convex chain experiments");
  chains->require_subcommand(1);

  RunOptions run;
  auto* run_cmd = chains->add_subcommand("run", "Batch of samples at one n; summary CSV and optional JSONL records");
  run_cmd->add_option("--n", run.n, "Points per sample (mean count for the Poisson model)");
  run_cmd->add_option("--samples", run.samples, "Number of samples")->check(CLI::PositiveNumber);
  run_cmd->add_option("--width", run.width, "'exact', 'auto', or band width divided by sqrt(2)");
  run_cmd->add_option("--model", run.model, "uniform or poisson")->check(CLI::IsMember({"uniform", "poisson"}));
  run_cmd->add_option("--seed", run.seed, "Master seed");
  run_cmd->add_option("--workers", run.workers, "Worker threads (POLYCHAIN_THREADS overrides)")
      ->check(CLI::PositiveNumber);
  run_cmd->add_flag("--timing", run.timing, "Record wall-clock times (output is then not reproducible)");
  run_cmd->add_option("--out", run.out, "Summary CSV path, '-' for stdout");
  run_cmd->add_option("--records", run.records, "Per-sample JSONL path");
  run_cmd->add_option("--config", run.config, "key = value file with defaults for the flags above")
      ->check(CLI::ExistingFile);

  std::string table_spec;
  std::string table_out = "-";
  std::uint64_t table_seed = 0;
  std::size_t table_workers = 1;
  bool table_timing = false;
  auto* table_cmd = chains->add_subcommand("table", "One summary row per spec row (n,samples,width_over_sqrt2)");
  table_cmd->add_option("--spec", table_spec, "Row spec CSV")->required()->check(CLI::ExistingFile);
  table_cmd->add_option("--out", table_out, "Output CSV path, '-' for stdout");
  table_cmd->add_option("--seed", table_seed, "Master seed");
  table_cmd->add_option("--workers", table_workers, "Worker threads (POLYCHAIN_THREADS overrides)")
      ->check(CLI::PositiveNumber);
  table_cmd->add_flag("--timing", table_timing, "Record wall-clock times");

  auto* polar = app.add_subcommand("polar", "Polarization problems");
  polar->require_subcommand(1);

  std::string angles_path;
  std::size_t uniform_n = 0;
  std::size_t phi_steps = 0;
  std::string circle_out = "-";
  auto* circle_cmd = polar->add_subcommand("circle", "Minimum of G and the Phi iteration");
  auto* angles_opt = circle_cmd->add_option("--angles", angles_path, "key = value file with 'angles' in turns")
                         ->check(CLI::ExistingFile);
  auto* uniform_opt = circle_cmd->add_option("--uniform", uniform_n, "Use the n-th roots of unity")
                          ->check(CLI::PositiveNumber);
  angles_opt->excludes(uniform_opt);
  circle_cmd->add_option("--phi-steps", phi_steps, "Maximum number of Phi steps");
  circle_cmd->add_option("--out", circle_out, "Trajectory CSV path, '-' for stdout");

  std::string vectors_path;
  std::string gram_out = "-";
  bool normalize = false;
  int restarts = 64;
  std::uint64_t gram_seed = 1;
  auto* gram_cmd = polar->add_subcommand("gram", "Inverse eigenvectors in every quadrant");
  gram_cmd->add_option("--vectors", vectors_path, "CSV with one unit vector per column")
      ->required()
      ->check(CLI::ExistingFile);
  gram_cmd->add_option("--out", gram_out, "JSONL path, '-' for stdout");
  gram_cmd->add_flag("--normalize", normalize, "Scale columns to unit length");
  gram_cmd->add_option("--restarts", restarts, "Starts for the sphere product search")->check(CLI::PositiveNumber);
  gram_cmd->add_option("--seed", gram_seed, "Seed for the sphere product search");

  std::string verify_out = "-";
  bool perturb = false;
  std::uint64_t verify_seed = polychain::VerifyOptions{}.seed;
  auto* verify_cmd = app.add_subcommand("verify", "Identity and bound checks");
  verify_cmd->add_option("--out", verify_out, "Report CSV path, '-' for stdout");
  verify_cmd->add_flag("--perturb-cosform", perturb, "Negative control: perturb the cosine-form constant");
  verify_cmd->add_option("--seed", verify_seed, "Seed for the random instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (run_cmd->parsed()) return chains_run(run, *run_cmd);
    if (table_cmd->parsed()) return chains_table(table_spec, table_out, table_seed, table_workers, table_timing);
    if (circle_cmd->parsed()) {
      if (angles_opt->count() == 0 && uniform_opt->count() == 0) {
        throw ParseError("one of --angles or --uniform is required");
      }
      return polar_circle(angles_path, uniform_opt->count() ? std::optional(uniform_n) : std::nullopt, phi_steps,
                          circle_out);
    }
    if (gram_cmd->parsed()) return polar_gram(vectors_path, gram_out, normalize, restarts, gram_seed);
    if (verify_cmd->parsed()) return verify(verify_out, perturb, verify_seed);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  return kUsageError;
}
