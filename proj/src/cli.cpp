#include "greyvar/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "greyvar/config.hpp"
#include "greyvar/errors.hpp"
#include "greyvar/spectral.hpp"
#include "greyvar/variance.hpp"

namespace greyvar {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

struct Options {
  std::string config_file;
  std::vector<std::string> sets;
  std::string out_dir;
  int workers = 1;
  std::optional<std::int64_t> seed;
  std::optional<std::int64_t> replicates;
  std::string a;
  std::string b;
};

/// Error carrying the parameter that made a numerical routine fail.
struct NumericalFailure {
  std::string parameter;
  std::string message;
  std::optional<double> suggested_cutoff;
};

std::string csv_field(std::optional<double> x) { return x ? format_double(*x) : std::string(); }

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header) : stream_(path, std::ios::binary) {
    if (!stream_) throw ConfigError("output", "cannot write " + path.string());
    stream_ << header << "\r\n";
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) stream_ << ',';
      stream_ << fields[i];
    }
    stream_ << "\r\n";
  }

 private:
  std::ofstream stream_;
};

ExperimentConfig load_config(const Options& opt) {
  ExperimentConfig config;
  if (!opt.config_file.empty()) {
    std::ifstream in(opt.config_file);
    if (!in) throw ConfigError("--config", "cannot read " + opt.config_file);
    std::stringstream text;
    text << in.rdbuf();
    config = parse_config(text.str());
  }
  for (const auto& s : opt.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set", "expected key=value, got '" + s + "'");
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!opt.a.empty()) apply_setting(config, "scales.a", opt.a);
  if (!opt.b.empty()) {
    apply_setting(config, "scales.b_rule", "explicit");
    apply_setting(config, "scales.b", opt.b);
  }
  if (opt.seed) apply_setting(config, "mc.seed", std::to_string(*opt.seed));
  if (opt.replicates) apply_setting(config, "mc.replicates", std::to_string(*opt.replicates));
  if (const char* env = std::getenv("GREYVAR_SEED"); env && *env) {
    apply_setting(config, "mc.seed", env);
  }
  if (!opt.out_dir.empty()) config.output = opt.out_dir;
  validate(config);
  return config;
}

Sampling sampling_of(const ExperimentConfig& c) {
  return c.sampling == "stratified" ? Sampling::Stratified : Sampling::Iid;
}

void require_ball(const Phantom& phantom) {
  if (!phantom.is_ball()) throw ConfigError("phantom.kind", "this subcommand needs a ball phantom");
}

struct Context {
  const ExperimentConfig& config;
  fs::path dir;
  int workers;
  std::vector<std::string> outputs;

  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  }
};

void run_profile(Context& ctx) {
  const auto& c = ctx.config;
  const HalfspaceProfile profile(make_psf(c), c.profile_grid);
  // odd point count so that t = 0 is a row
  const int n = 2 * (c.profile_grid / 2) + 1;
  const double half = profile.half_width();
  const double step = 2.0 * half / (n - 1);
  CsvWriter csv(ctx.file("profile.csv"), "t,theta_h,dtheta_h");
  for (int i = 0; i < n; ++i) {
    const double t = i == n - 1 ? half : -half + step * i;
    csv.row({format_double(t), format_double(profile.theta(t)), format_double(profile.dtheta(t))});
  }
}

void run_shells(Context& ctx) {
  const auto& c = ctx.config;
  CsvWriter csv(ctx.file("shells.csv"), "norm,multiplicity");
  for (const Shell& s : dual_shells(make_lattice(c), c.shells_cutoff)) {
    csv.row({format_double(s.norm), std::to_string(s.multiplicity)});
  }
}

json config_json(const ExperimentConfig& c) {
  json out = json::object();
  for (const auto& [k, v] : to_map(c)) out[k] = v;
  return out;
}

void run_estimate(Context& ctx) {
  const auto& c = ctx.config;
  const HalfspaceProfile profile(make_psf(c), c.profile_grid);
  const double a = c.a.front();
  const double b = resolution_for(c, 0);
  const SurfaceEstimator estimator(make_phantom(c), profile, make_weight(c), a);
  const auto result = variance_empirical(estimator, b, make_lattice(c), c.replicates, c.seed,
                                         ctx.workers, sampling_of(c));
  json out;
  out["mean"] = result.summary.mean;
  out["sd"] = std::sqrt(result.summary.variance);
  out["n"] = result.summary.n;
  out["a"] = a;
  out["b"] = b;
  out["se_mean"] = result.summary.se_mean;
  out["config"] = config_json(c);
  std::ofstream(ctx.file("estimate.json")) << out.dump(2) << "\n";
}

void run_fourier(Context& ctx) {
  const auto& c = ctx.config;
  const Phantom phantom = make_phantom(c);
  require_ball(phantom);
  const Psf psf = make_psf(c);
  const HalfspaceProfile profile(psf, c.profile_grid);
  const WeightFunction f = make_weight(c);
  const Regime regime = parse_regime(c.fourier_regime);
  const double a = c.a.front();
  const double b = resolution_for(c, 0);
  const RadialWeight g(psf, phantom.radius(), a, f, 1025);
  CsvWriter csv(ctx.file("fourier.csv"), "xi_norm,re,im,abs2,model_abs2");
  for (double xi : c.fourier_xi) {
    const double value = ball_fourier_exact(g, xi / b);
    const auto model = ball_fourier_asymptotic(phantom.radius(), a, b, xi, f, profile, regime);
    csv.row({format_double(xi), format_double(value), format_double(0.0),
             format_double(value * value), format_double(model.abs2)});
  }
}

struct VarianceRow {
  double a = 0.0;
  double b = 0.0;
  std::optional<double> var_emp, se, var_exact, var_asym, osc_bound, xi_max, tail_bound;
};

void run_variance(Context& ctx, bool empirical, bool theory, const std::string& name) {
  const auto& c = ctx.config;
  const Phantom phantom = make_phantom(c);
  const Psf psf = make_psf(c);
  const HalfspaceProfile profile(psf, c.profile_grid);
  const WeightFunction f = make_weight(c);
  const Lattice lattice = make_lattice(c);
  const TruncationPolicy policy = make_policy(c);
  if (theory || c.random_radius) require_ball(phantom);
  const std::optional<RadiusDensity> h =
      c.random_radius ? std::optional<RadiusDensity>(RadiusDensity(c.radius_lower, c.radius_upper))
                      : std::nullopt;

  CsvWriter csv(ctx.file(name), "a,b,var_emp,se,var_exact,var_asym,osc_bound,xi_max,tail_bound");
  for (std::size_t i = 0; i < c.a.size(); ++i) {
    VarianceRow row;
    row.a = c.a[i];
    row.b = resolution_for(c, i);
    if (empirical) {
      SampleSummary s;
      if (h) {
        s = variance_empirical_random_radius(phantom, *h, profile, f, row.a, row.b, lattice,
                                             c.replicates, c.seed, ctx.workers)
                .summary;
      } else {
        const SurfaceEstimator estimator(phantom, profile, f, row.a);
        s = variance_empirical(estimator, row.b, lattice, c.replicates, c.seed, ctx.workers,
                               sampling_of(c))
                .summary;
      }
      row.var_emp = s.variance;
      row.se = s.se_variance;
    }
    if (theory) {
      if (h) {
        const auto r = variance_asymptotic_random_radius(phantom, *h, profile, f, row.a, lattice,
                                                         policy);
        row.var_asym = r.variance;
        row.xi_max = r.sum.cutoff;
      } else {
        const auto exact = variance_exact_ball(phantom, profile, f, row.a, row.b, lattice, policy);
        const auto asym = variance_asymptotic_isotropic(phantom, profile, f, row.a, lattice, policy);
        row.var_exact = exact.variance;
        row.var_asym = asym.main;
        row.osc_bound = asym.osc_bound;
        row.xi_max = exact.sum.cutoff;
        row.tail_bound = exact.prefactor * exact.sum.tail_bound;
      }
    }
    csv.row({format_double(row.a), format_double(row.b), csv_field(row.var_emp), csv_field(row.se),
             csv_field(row.var_exact), csv_field(row.var_asym), csv_field(row.osc_bound),
             csv_field(row.xi_max), csv_field(row.tail_bound)});
  }
}

void write_json(const fs::path& path, const json& record) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path);
  if (out) out << record.dump(2) << "\n";
}

int report(std::ostream& err, const std::optional<fs::path>& dir, const json& record, int code) {
  err << record.dump() << "\n";
  if (dir) write_json(*dir / "error.json", record);
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grey-scale local surface-area estimators: experiments and diagnostics", "greyvar"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Options opt;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"profile", "tabulate the half-space profile: profile.csv (t,theta_h,dtheta_h)"},
      {"shells", "dual-lattice shells up to shells.cutoff: shells.csv (norm,multiplicity)"},
      {"estimate", "Monte Carlo surface estimates at the first scale: estimate.json"},
      {"fourier", "ball Fourier coefficients vs the leading-term model: fourier.csv"},
      {"mc-variance", "empirical variance over the scale grid: mc_variance.csv"},
      {"theory-variance", "exact and asymptotic variance over the scale grid: theory_variance.csv"},
      {"scaling-study", "empirical and theoretical variance together: scaling_study.csv"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opt.config_file, "key=value configuration file")
        ->check(CLI::ExistingFile);
    sub->add_option("--set", opt.sets, "override one key, e.g. --set psf.dim=3 (repeatable)");
    sub->add_option("--out", opt.out_dir, "output directory (overrides the output key)");
    sub->add_option("--workers", opt.workers, "worker threads (default 1)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", opt.seed, "base seed (mc.seed); GREYVAR_SEED takes precedence");
    sub->add_option("--replicates", opt.replicates, "Monte Carlo replicates (mc.replicates)");
    sub->add_option("--a", opt.a, "PSF scale grid: list or geom:start,ratio,count (scales.a)");
    sub->add_option("--b", opt.b, "explicit resolution grid, one per a (scales.b)");
  }
  app.footer(
      "Configuration keys:\n"
      "  phantom.kind radius scale center normal | psf.kind dim shape | profile.grid\n"
      "  f.kind beta beta_inner omega_inner omega | scales.a b_rule b | lattice.matrix\n"
      "  mc.replicates seed sampling | radius.random lower upper | fourier.xi regime\n"
      "  shells.cutoff | truncation.max_cutoff | output\n"
      "Environment: GREYVAR_SEED overrides mc.seed.\n"
      "Exit codes: 0 success, 2 usage or configuration error, 3 numerical failure.");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return report(err, std::nullopt,
                  json{{"error", "usage"}, {"key", "argv"}, {"message", e.what()}}, kExitUsage);
  }
  const std::string command = app.get_subcommands().front()->get_name();

  ExperimentConfig config;
  try {
    config = load_config(opt);
  } catch (const ConfigError& e) {
    return report(err, std::nullopt,
                  json{{"error", "config"}, {"key", e.key()}, {"message", e.what()}}, kExitUsage);
  }

  const fs::path dir = config.output;
  const auto start = std::chrono::steady_clock::now();
  Context ctx{config, dir, opt.workers, {}};
  auto fail = [&](const std::string& parameter, const std::string& message,
                  std::optional<double> suggested = std::nullopt) {
    json record{{"error", "numerical"}, {"parameter", parameter}, {"message", message}};
    if (suggested) record["suggested_cutoff"] = *suggested;
    return report(err, dir, record, kExitNumerical);
  };
  try {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("output", "cannot create " + dir.string());
    if (command == "profile") run_profile(ctx);
    else if (command == "shells") run_shells(ctx);
    else if (command == "estimate") run_estimate(ctx);
    else if (command == "fourier") run_fourier(ctx);
    else if (command == "mc-variance") run_variance(ctx, true, false, "mc_variance.csv");
    else if (command == "theory-variance") run_variance(ctx, false, true, "theory_variance.csv");
    else run_variance(ctx, true, true, "scaling_study.csv");
  } catch (const ConfigError& e) {
    return report(err, dir, json{{"error", "config"}, {"key", e.key()}, {"message", e.what()}},
                  kExitUsage);
  } catch (const TruncationError& e) {
    return fail("truncation.max_cutoff", e.what(), e.suggested_cutoff());
  } catch (const NormalizationError& e) {
    return fail("f.beta", e.what());
  } catch (const InvertibilityError& e) {
    return fail("f.beta", e.what());
  } catch (const BracketError& e) {
    return fail("psf.kind", e.what());
  } catch (const CoverageError& e) {
    return fail("phantom.radius", e.what());
  } catch (const DomainError& e) {
    return fail("scales.a", e.what());
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json manifest;
  manifest["version"] = kVersion;
  manifest["subcommand"] = command;
  manifest["seed"] = config.seed;
  manifest["workers"] = opt.workers;
  manifest["wall_time_s"] = wall;
  manifest["config"] = config_json(config);
  manifest["config_text"] = to_text(config);
  manifest["outputs"] = ctx.outputs;
  ctx.outputs.push_back("manifest.json");
  std::ofstream(dir / "manifest.json") << manifest.dump(2) << "\n";
  for (const auto& name : ctx.outputs) out << (dir / name).string() << "\n";
  return kExitOk;
}

}  // namespace greyvar
