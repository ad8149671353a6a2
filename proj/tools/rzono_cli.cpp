// Command-line front end: exact identity checks, expectation and CLT
// campaigns, and zonoid support-function traces.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "experiment_config.hpp"
#include "rzono/io/json.hpp"
#include "rzono/rzono.hpp"

namespace fs = std::filesystem;
using namespace rzono;
using rzono::cli::ConfigError;
using rzono::cli::ExperimentConfig;

namespace {

enum ExitCode : int { kPass = 0, kFail = 1, kInvalid = 2, kDegenerate = 3 };

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct RunContext {
  ExperimentConfig config;
  fs::path out_dir;
  ExecutionOptions exec;
  json resolved;
};

class CsvWriter {
public:
  CsvWriter(const fs::path& path, const json& resolved, const std::string& header) : out_(path) {
    if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
    out_ << "# config: " << resolved.dump() << '\n' << header << '\n';
  }
  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((out_ << (first ? "" : ",") << fields, first = false), ...);
    out_ << '\n';
  }

private:
  std::ofstream out_;
};

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

json report_header(const RunContext& ctx, const std::string& command) {
  return json{{"schema_version", "1"}, {"command", command}, {"config", ctx.resolved}};
}

const DistributionSpec& need_distribution(const ExperimentConfig& c) {
  if (!c.distribution) throw ConfigError("config needs a 'distribution' object");
  return *c.distribution;
}

const ValuationSpec& need_valuation(const ExperimentConfig& c) {
  if (!c.valuation) throw ConfigError("config needs a 'valuation' object");
  return *c.valuation;
}

/// Library radius next to its Monte Carlo oracle and the competing
/// 1/(4 sqrt(2 pi)) constant, so that the disagreement is always visible.
json gaussian_radius_section(const RunContext& ctx) {
  json out{{"library_radius", kGaussianZonoidRadius},
           {"quarter_candidate_radius", gaussian_radius_quarter_candidate()}};
  if (ctx.config.radius_oracle_samples >= 2) {
    const auto oracle = gaussian_radius_oracle(ctx.config.radius_oracle_samples,
                                               ctx.config.seed_spec().substream(stream_role::radius_oracle),
                                               ctx.exec.threads);
    const double z_library = z_score(kGaussianZonoidRadius, oracle.std_error, oracle.mean);
    const double z_quarter = z_score(gaussian_radius_quarter_candidate(), oracle.std_error, oracle.mean);
    out["oracle"] = oracle;
    out["library_z_vs_oracle"] = z_library;
    out["quarter_candidate_z_vs_oracle"] = z_quarter;
    out["quarter_candidate_rejected"] = std::abs(z_quarter) > 4.0;
    out["library_consistent"] = std::abs(z_library) < 4.0;
  }
  return out;
}

// ---------------------------------------------------------------- exact

int cmd_exact(const RunContext& ctx) {
  const auto& c = ctx.config;
  if (c.max_cube_dim < 1 || c.identity_sets < 0 || c.max_identity_n < 1 || c.max_ustat_n < 1)
    throw ConfigError("exact suite sizes must be positive");
  CsvWriter csv(ctx.out_dir / "exact_residuals.csv", ctx.resolved,
                "suite,case,n,d,j,p,value,reference,residual,tolerance,pass");
  struct Tally {
    int cases = 0;
    int failures = 0;
    double worst = 0.0;
  };
  std::map<std::string, Tally> tallies;
  auto record = [&](const std::string& suite, int id, std::size_t n, std::size_t d, std::size_t j, std::size_t p,
                    double value, double reference, double tolerance) {
    const double residual = std::abs(value - reference);
    const bool pass = residual <= tolerance;
    auto& t = tallies[suite];
    ++t.cases;
    t.failures += pass ? 0 : 1;
    t.worst = std::max(t.worst, residual);
    csv.row(suite, id, n, d, j, p, num(value), num(reference), num(residual), num(tolerance), pass ? 1 : 0);
  };

  int id = 0;
  for (int d = 1; d <= c.max_cube_dim; ++d) {
    std::vector<Vector> gens;
    for (int i = 0; i < d; ++i) gens.push_back(Vector::unit(static_cast<std::size_t>(d), static_cast<std::size_t>(i)));
    const Zonotope cube(gens);
    for (int j = 1; j <= d; ++j) {
      const double value = valuation(cube, ValuationSpec::intrinsic(j), ctx.exec);
      const double reference = to_double(binomial(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(j)));
      record("cube", id++, static_cast<std::size_t>(d), static_cast<std::size_t>(d), static_cast<std::size_t>(j),
             0, value, reference, 1e-12);
    }
  }

  const SeedSpec root = c.seed_spec();
  for (int s = 0; s < c.identity_sets; ++s) {
    RandomStream rng(root.substream(1000 + static_cast<std::uint64_t>(s)));
    const std::size_t d = 1 + rng.below(4);
    const std::size_t j = 1 + rng.below(std::min<std::size_t>(3, d));
    const std::size_t n = j + rng.below(static_cast<std::uint64_t>(std::max<int>(c.max_identity_n, static_cast<int>(j))) - j + 1);
    std::vector<Vector> gens;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> coords(d);
      for (auto& x : coords) x = rng.normal();
      gens.emplace_back(coords);
    }
    const auto spec = ValuationSpec::intrinsic(static_cast<int>(j));
    const double lhs = valuation(Zonotope(gens), spec, ctx.exec);
    for (std::size_t p = j; p <= n; ++p) {
      const double residual = subset_identity_residual(gens, spec, p, ctx.exec);
      record("subset_identity", s, n, d, j, p, residual, 0.0, 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }

  for (int n = 1; n <= c.max_ustat_n; ++n) {
    RandomStream rng(root.substream(5000 + static_cast<std::uint64_t>(n)));
    const std::size_t d = 1 + rng.below(3);
    const std::size_t j = 1 + rng.below(d);
    std::vector<Vector> sample;
    for (int i = 0; i < n; ++i) {
      std::vector<double> coords(d);
      for (auto& x : coords) x = rng.normal();
      sample.emplace_back(coords);
    }
    const auto spec = ValuationSpec::intrinsic(static_cast<int>(j));
    const double direct = valuation(Zonotope(d, sample, 1.0 / n), spec, ctx.exec);
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t p = j; p <= std::max(un, j); ++p) {
      const double via = valuation_of_Zn_via_ustat(KernelContext(spec, p, d), sample, ctx.exec);
      record("ustat_consistency", n, un, d, j, p, via, direct, 1e-10 * std::max(1.0, std::abs(direct)));
      if (un < j) break;
    }
  }

  json doc = report_header(ctx, "exact");
  bool all_pass = true;
  for (const auto& [suite, t] : tallies) {
    doc["suites"][suite] = {{"cases", t.cases}, {"failures", t.failures}, {"max_residual", t.worst}};
    all_pass = all_pass && t.failures == 0;
  }
  doc["passed"] = all_pass;
  write_json(ctx.out_dir / "exact_report.json", doc);
  std::cout << "exact: " << (all_pass ? "PASS" : "FAIL") << '\n';
  return all_pass ? kPass : kFail;
}

// ---------------------------------------------------------------- theorem1

int cmd_theorem1(const RunContext& ctx) {
  const auto& c = ctx.config;
  const auto& dist = need_distribution(c);
  const auto& val = need_valuation(c);
  if (c.p < val.degree) throw ConfigError("p must be >= the valuation degree j");
  if (c.reps < 2) throw ConfigError("reps must be >= 2");
  const auto surrogate =
      make_surrogate(dist, val, c.surrogate_n, c.seed_spec().substream(stream_role::surrogate), ctx.exec);
  const auto report = verify_theorem1(dist, val, c.p, c.reps, c.seed_spec(), surrogate, ctx.exec);
  const bool pass = std::abs(report.z_score) < c.z_threshold;

  json doc = report_header(ctx, "theorem1");
  doc["report"] = report;
  const double kernel_scale = std::pow(static_cast<double>(c.p), val.degree);
  doc["expected_kernel"] = kernel_scale * report.prediction;
  doc["estimated_kernel"] = kernel_scale * report.estimate.mean;
  if (dist.kind == DistributionKind::gaussian_std) {
    json radius = gaussian_radius_section(ctx);
    auto kernel_for = [&](double r) {
      return kernel_scale * theorem1_prediction(ZonoidSurrogate::gaussian_ball(dist.dim, r).valuation(val), val.degree, c.p);
    };
    if (radius.contains("oracle"))
      radius["expected_kernel_with_oracle_radius"] = kernel_for(radius["oracle"]["mean"].get<double>());
    radius["expected_kernel_with_quarter_candidate"] = kernel_for(gaussian_radius_quarter_candidate());
    doc["gaussian_radius"] = radius;
  }
  doc["z_threshold"] = c.z_threshold;
  doc["passed"] = pass;
  write_json(ctx.out_dir / "theorem1_report.json", doc);
  std::cout << "theorem1: estimate " << num(report.estimate.mean) << " +- " << num(report.estimate.std_error)
            << ", prediction " << num(report.prediction) << ", z " << num(report.z_score) << " -> "
            << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kPass : kFail;
}

// ---------------------------------------------------------------- clt

int cmd_clt(const RunContext& ctx) {
  const auto& c = ctx.config;
  const auto& dist = need_distribution(c);
  const auto& val = need_valuation(c);
  if (c.reps < 2) throw ConfigError("reps must be >= 2 (the variance is undefined otherwise)");
  if (c.n < 1) throw ConfigError("n must be >= 1");
  if (!(c.variance_tolerance > 0.0)) throw ConfigError("variance_tolerance must be > 0");
  if (!(c.ks_alpha > 0.0 && c.ks_alpha < 1.0)) throw ConfigError("ks_alpha must lie in (0, 1)");
  CltOptions options;
  options.n = c.n;
  options.reps = c.reps;
  options.seed = c.seed_spec();
  if (c.mode == "subsample") options.subsample_draws = c.subsample_draws;
  options.surrogate_n = c.surrogate_n;
  options.zeta_reps = c.zeta_reps;
  options.variance_tolerance = c.variance_tolerance;
  options.ks_alpha = c.ks_alpha;
  options.execution = ctx.exec;
  const auto report = clt_experiment(dist, val, options);

  CsvWriter csv(ctx.out_dir / "clt_deviations.csv", ctx.resolved, "rep,deviation");
  for (std::size_t r = 0; r < report.deviations.size(); ++r) csv.row(r, num(report.deviations[r]));

  json doc = report_header(ctx, "clt");
  doc["report"] = report;
  if (dist.kind == DistributionKind::gaussian_std) doc["gaussian_radius"] = gaussian_radius_section(ctx);
  write_json(ctx.out_dir / "clt_report.json", doc);

  if (report.degenerate) {
    std::cout << "clt: DEGENERATE (zeta_1 = " << num(report.zeta1) << ")\n";
    return kDegenerate;
  }
  std::cout << "clt: variance ratio " << num(report.variance_ratio) << ", KS " << num(report.ks_statistic)
            << " (critical " << num(report.ks_critical) << ") -> " << (report.passed ? "PASS" : "FAIL") << '\n';
  return report.passed ? kPass : kFail;
}

// ---------------------------------------------------------------- zonoid

int cmd_zonoid(const RunContext& ctx) {
  const auto& c = ctx.config;
  const auto& dist = need_distribution(c);
  if (c.directions == 0) throw ConfigError("directions must be >= 1");
  if (c.ns.empty()) throw ConfigError("ns must list at least one sample size");
  for (auto n : c.ns)
    if (n == 0) throw ConfigError("every entry of ns must be >= 1");
  const ValuationSpec val = c.valuation.value_or(ValuationSpec::intrinsic(1));
  const auto surrogate =
      make_surrogate(dist, val, c.surrogate_n, c.seed_spec().substream(stream_role::surrogate), ctx.exec);
  const auto directions = direction_grid(dist.dim, c.directions, c.seed_spec().substream(stream_role::directions));
  std::vector<double> h_zx;
  for (const auto& u : directions) h_zx.push_back(surrogate.support(u));

  // Z_n for every n uses the first n draws of one stream.
  const std::uint64_t n_max = *std::max_element(c.ns.begin(), c.ns.end());
  const auto points = sample(dist, n_max, c.seed_spec().substream(stream_role::replications));

  std::string header = "n,direction";
  for (int i = 1; i <= dist.dim; ++i) header += ",u_" + std::to_string(i);
  header += ",h_zn,h_zx";
  CsvWriter support_csv(ctx.out_dir / "zonoid_support.csv", ctx.resolved, header);
  CsvWriter trace_csv(ctx.out_dir / "zonoid_trace.csv", ctx.resolved, "n,directions,estimated_distance");
  json trace = json::array();
  std::vector<double> distances;
  for (auto n : c.ns) {
    const Zonotope zn(dist.d(), std::vector<Vector>(points.begin(), points.begin() + static_cast<std::ptrdiff_t>(n)),
                      1.0 / static_cast<double>(n));
    double worst = 0.0;
    for (std::size_t k = 0; k < directions.size(); ++k) {
      const double h = support_function(zn, directions[k]);
      worst = std::max(worst, std::abs(h - h_zx[k]));
      std::string line = std::to_string(n) + "," + std::to_string(k);
      for (double x : directions[k]) line += "," + num(x);
      support_csv.row(line, num(h), num(h_zx[k]));
    }
    distances.push_back(worst);
    trace_csv.row(n, directions.size(), num(worst));
    trace.push_back({{"n", n}, {"estimated_distance", worst}});
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < distances.size(); ++i) decreasing = decreasing && distances[i] < distances[i - 1];

  json doc = report_header(ctx, "zonoid");
  doc["surrogate"] = surrogate.name();
  doc["surrogate_error"] = surrogate.error_estimate();
  doc["direction_count"] = directions.size();
  doc["trace"] = trace;
  doc["trace_decreasing"] = decreasing;
  if (dist.kind == DistributionKind::gaussian_std) doc["gaussian_radius"] = gaussian_radius_section(ctx);
  write_json(ctx.out_dir / "zonoid_report.json", doc);
  std::cout << "zonoid: final estimated distance " << num(distances.back()) << (decreasing ? " (decreasing)" : "")
            << '\n';
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact valuations and Monte Carlo experiments for random zonotopes"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> reps;
  std::optional<std::uint64_t> n;
  std::optional<int> p;
  unsigned threads = 1;

  struct Command {
    const char* name;
    const char* help;
    int (*run)(const RunContext&);
  };
  const Command commands[] = {
      {"exact", "exact identity suite: cube valuations, subset identity, U-statistic consistency", cmd_exact},
      {"theorem1", "Monte Carlo check of E phi(Z_p) = p!/(p^j (p-j)!) phi(Z_X)", cmd_theorem1},
      {"clt", "central limit experiment for sqrt(n)(phi(Z_n) - phi(Z_X))", cmd_clt},
      {"zonoid", "support functions of Z_n against Z_X and the distance trace", cmd_zonoid},
  };
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  for (const auto& command : commands) {
    auto* sub = app.add_subcommand(command.name, command.help);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--seed", seed, "override the master seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--threads", threads, "maximum worker threads (results do not depend on it)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--reps", reps, "override reps");
    sub->add_option("--n", n, "override n");
    sub->add_option("--p", p, "override p");
    subs.emplace_back(sub, &command);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    RunContext ctx;
    ctx.config = cli::load_config(config_path);
    if (seed) ctx.config.seed = *seed;
    if (reps) ctx.config.reps = *reps;
    if (n) ctx.config.n = *n;
    if (p) ctx.config.p = *p;
    ctx.exec.threads = threads;
    ctx.exec.term_budget = ctx.config.term_budget;
    ctx.resolved = cli::to_resolved_json(ctx.config);
    ctx.out_dir = out_dir;
    fs::create_directories(ctx.out_dir);
    for (const auto& [sub, command] : subs)
      if (sub->parsed()) return command->run(ctx);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "error: invalid input: " << e.what() << '\n';
    return kInvalid;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
