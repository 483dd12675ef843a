#include "greyvar/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

#include "greyvar/errors.hpp"

namespace greyvar {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto lo = s.find_first_not_of(" \t\r");
  if (lo == std::string::npos) return "";
  const auto hi = s.find_last_not_of(" \t\r");
  return s.substr(lo, hi - lo + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty() || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return v;
}

std::int64_t parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1") return true;
  if (t == "false" || t == "0") return false;
  throw ConfigError(key, "expected true or false, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_real(key, item));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_double(v[i]);
  }
  return out;
}

std::string rule_name(ScaleRule r) {
  switch (r) {
    case ScaleRule::Explicit: return "explicit";
    case ScaleRule::Equal: return "equal";
    case ScaleRule::Square: return "square";
  }
  return "equal";
}

struct Field {
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

const std::vector<std::pair<std::string, Field>>& fields() {
  using C = ExperimentConfig;
  using S = const std::string&;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"phantom.kind", {[](const C& c) { return c.phantom_kind; },
                        [](C& c, S, S v) { c.phantom_kind = trim(v); }}},
      {"phantom.radius", {[](const C& c) { return format_double(c.phantom_radius); },
                          [](C& c, S k, S v) { c.phantom_radius = parse_real(k, v); }}},
      {"phantom.scale", {[](const C& c) { return format_double(c.phantom_scale); },
                         [](C& c, S k, S v) { c.phantom_scale = parse_real(k, v); }}},
      {"phantom.center", {[](const C& c) { return join(c.phantom_center); },
                          [](C& c, S k, S v) { c.phantom_center = parse_list(k, v); }}},
      {"phantom.normal", {[](const C& c) { return join(c.phantom_normal); },
                          [](C& c, S k, S v) { c.phantom_normal = parse_list(k, v); }}},
      {"psf.kind", {[](const C& c) { return c.psf_kind; },
                    [](C& c, S, S v) { c.psf_kind = trim(v); }}},
      {"psf.dim", {[](const C& c) { return std::to_string(c.dim); },
                   [](C& c, S k, S v) { c.dim = static_cast<int>(parse_int(k, v)); }}},
      {"psf.shape", {[](const C& c) { return format_double(c.psf_shape); },
                     [](C& c, S k, S v) { c.psf_shape = parse_real(k, v); }}},
      {"profile.grid", {[](const C& c) { return std::to_string(c.profile_grid); },
                        [](C& c, S k, S v) { c.profile_grid = static_cast<int>(parse_int(k, v)); }}},
      {"f.kind", {[](const C& c) { return c.f_kind; }, [](C& c, S, S v) { c.f_kind = trim(v); }}},
      {"f.beta", {[](const C& c) { return format_double(c.f_beta); },
                  [](C& c, S k, S v) { c.f_beta = parse_real(k, v); }}},
      {"f.beta_inner", {[](const C& c) { return format_double(c.f_beta_inner); },
                        [](C& c, S k, S v) { c.f_beta_inner = parse_real(k, v); }}},
      {"f.omega_inner", {[](const C& c) { return format_double(c.f_omega_inner); },
                         [](C& c, S k, S v) { c.f_omega_inner = parse_real(k, v); }}},
      {"f.omega", {[](const C& c) { return format_double(c.f_omega); },
                   [](C& c, S k, S v) { c.f_omega = parse_real(k, v); }}},
      {"scales.a", {[](const C& c) { return join(c.a); },
                    [](C& c, S k, S v) { c.a = parse_grid(k, v); }}},
      {"scales.b_rule", {[](const C& c) { return rule_name(c.b_rule); },
                         [](C& c, S k, S v) {
                           const std::string t = trim(v);
                           if (t == "explicit") c.b_rule = ScaleRule::Explicit;
                           else if (t == "equal") c.b_rule = ScaleRule::Equal;
                           else if (t == "square") c.b_rule = ScaleRule::Square;
                           else throw ConfigError(k, "expected explicit, equal or square");
                         }}},
      {"scales.b", {[](const C& c) { return join(c.b); },
                    [](C& c, S k, S v) { c.b = parse_grid(k, v); }}},
      {"lattice.matrix", {[](const C& c) { return join(c.lattice_matrix); },
                          [](C& c, S k, S v) { c.lattice_matrix = parse_list(k, v); }}},
      {"mc.replicates", {[](const C& c) { return std::to_string(c.replicates); },
                         [](C& c, S k, S v) { c.replicates = parse_int(k, v); }}},
      {"mc.seed", {[](const C& c) { return std::to_string(c.seed); },
                   [](C& c, S k, S v) {
                     const auto s = parse_int(k, v);
                     if (s < 0) throw ConfigError(k, "seed must be non-negative");
                     c.seed = static_cast<std::uint64_t>(s);
                   }}},
      {"mc.sampling", {[](const C& c) { return c.sampling; },
                       [](C& c, S, S v) { c.sampling = trim(v); }}},
      {"radius.random", {[](const C& c) { return std::string(c.random_radius ? "true" : "false"); },
                         [](C& c, S k, S v) { c.random_radius = parse_bool(k, v); }}},
      {"radius.lower", {[](const C& c) { return format_double(c.radius_lower); },
                        [](C& c, S k, S v) { c.radius_lower = parse_real(k, v); }}},
      {"radius.upper", {[](const C& c) { return format_double(c.radius_upper); },
                        [](C& c, S k, S v) { c.radius_upper = parse_real(k, v); }}},
      {"fourier.xi", {[](const C& c) { return join(c.fourier_xi); },
                      [](C& c, S k, S v) { c.fourier_xi = parse_grid(k, v); }}},
      {"fourier.regime", {[](const C& c) { return c.fourier_regime; },
                          [](C& c, S, S v) { c.fourier_regime = trim(v); }}},
      {"shells.cutoff", {[](const C& c) { return format_double(c.shells_cutoff); },
                         [](C& c, S k, S v) { c.shells_cutoff = parse_real(k, v); }}},
      {"truncation.max_cutoff", {[](const C& c) { return format_double(c.max_cutoff); },
                                 [](C& c, S k, S v) { c.max_cutoff = parse_real(k, v); }}},
      {"output", {[](const C& c) { return c.output; }, [](C& c, S, S v) { c.output = trim(v); }}},
  };
  return table;
}

}  // namespace

std::vector<double> parse_grid(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t.rfind("geom:", 0) == 0) {
    const auto parts = parse_list(key, t.substr(5));
    if (parts.size() != 3 || parts[2] < 1 || parts[2] != std::floor(parts[2])) {
      throw ConfigError(key, "geometric grid must be geom:start,ratio,count");
    }
    std::vector<double> out;
    double x = parts[0];
    for (int i = 0; i < static_cast<int>(parts[2]); ++i, x *= parts[1]) out.push_back(x);
    return out;
  }
  return parse_list(key, t);
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value) {
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      field.set(config, key, value);
      return;
    }
  }
  throw ConfigError(key, "unknown configuration key");
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(number), "expected key=value");
    }
    apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  validate(config);
  return config;
}

std::map<std::string, std::string> to_map(const ExperimentConfig& config) {
  std::map<std::string, std::string> out;
  for (const auto& [name, field] : fields()) out[name] = field.get(config);
  return out;
}

std::string to_text(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + "=" + field.get(config) + "\n";
  return out;
}

void validate(const ExperimentConfig& c) {
  if (c.dim != 2 && c.dim != 3) throw ConfigError("psf.dim", "dimension must be 2 or 3");
  if (c.psf_kind != "gaussian" && c.psf_kind != "bump" && c.psf_kind != "ball") {
    throw ConfigError("psf.kind", "expected gaussian, bump or ball");
  }
  if (!(c.psf_shape > 0.0)) throw ConfigError("psf.shape", "must be positive");
  if (c.profile_grid < 16) throw ConfigError("profile.grid", "need at least 16 points");
  if (c.phantom_kind != "ball" && c.phantom_kind != "halfspace" &&
      c.phantom_kind != "transformed_ball") {
    throw ConfigError("phantom.kind", "expected ball, halfspace or transformed_ball");
  }
  if (!(c.phantom_radius > 0.0)) throw ConfigError("phantom.radius", "must be positive");
  if (!(c.phantom_scale > 0.0)) throw ConfigError("phantom.scale", "must be positive");
  if (!c.phantom_center.empty() && static_cast<int>(c.phantom_center.size()) != c.dim) {
    throw ConfigError("phantom.center", "needs one coordinate per dimension");
  }
  if (!c.phantom_normal.empty()) {
    if (static_cast<int>(c.phantom_normal.size()) != c.dim) {
      throw ConfigError("phantom.normal", "needs one coordinate per dimension");
    }
    double n2 = 0.0;
    for (double x : c.phantom_normal) n2 += x * x;
    if (!(n2 > 0.0)) throw ConfigError("phantom.normal", "must be nonzero");
  }
  if (c.f_kind != "indicator" && c.f_kind != "smooth_plateau") {
    throw ConfigError("f.kind", "expected indicator or smooth_plateau");
  }
  if (!(c.f_beta > 0.0 && c.f_beta < c.f_omega && c.f_omega < 1.0)) {
    throw ConfigError("f.beta", "need 0 < beta < omega < 1");
  }
  if (c.f_kind == "smooth_plateau" &&
      !(c.f_beta < c.f_beta_inner && c.f_beta_inner <= c.f_omega_inner &&
        c.f_omega_inner < c.f_omega)) {
    throw ConfigError("f.beta_inner", "need beta < beta_inner <= omega_inner < omega");
  }
  if (c.a.empty()) throw ConfigError("scales.a", "at least one scale required");
  for (double a : c.a) {
    if (!(a > 0.0)) throw ConfigError("scales.a", "scales must be positive");
  }
  if (c.b_rule == ScaleRule::Explicit && c.b.size() != c.a.size()) {
    throw ConfigError("scales.b", "explicit rule needs one b per a");
  }
  for (double b : c.b) {
    if (!(b > 0.0)) throw ConfigError("scales.b", "scales must be positive");
  }
  if (!c.lattice_matrix.empty()) {
    if (static_cast<int>(c.lattice_matrix.size()) != c.dim * c.dim) {
      throw ConfigError("lattice.matrix", "needs dim^2 row-major entries");
    }
    try {
      make_lattice(c);
    } catch (const DomainError& e) {
      throw ConfigError("lattice.matrix", e.what());
    }
  }
  if (c.replicates < 100) throw ConfigError("mc.replicates", "need at least 100 replicates");
  if (c.sampling != "iid" && c.sampling != "stratified") {
    throw ConfigError("mc.sampling", "expected iid or stratified");
  }
  if (!(c.radius_lower > 0.0 && c.radius_upper > c.radius_lower)) {
    throw ConfigError("radius.lower", "need 0 < lower < upper");
  }
  for (double xi : c.fourier_xi) {
    if (!(xi > 0.0)) throw ConfigError("fourier.xi", "frequencies must be positive");
  }
  if (c.fourier_regime != "equal" && c.fourier_regime != "fine" && c.fourier_regime != "coarse") {
    throw ConfigError("fourier.regime", "expected equal, fine or coarse");
  }
  if (!(c.shells_cutoff > 0.0)) throw ConfigError("shells.cutoff", "must be positive");
  if (!(c.max_cutoff >= 0.0)) throw ConfigError("truncation.max_cutoff", "must be >= 0");
  if (c.output.empty()) throw ConfigError("output", "must name a directory");
}

Psf make_psf(const ExperimentConfig& c) {
  if (c.psf_kind == "gaussian") return Psf::gaussian(c.dim, c.psf_shape);
  if (c.psf_kind == "bump") return Psf::compact_bump(c.dim, c.psf_shape);
  return Psf::ball_indicator(c.dim, c.psf_shape);
}

Phantom make_phantom(const ExperimentConfig& c) {
  if (c.phantom_kind == "halfspace") {
    Point n = Point::Zero(c.dim);
    if (c.phantom_normal.empty()) {
      n[0] = 1.0;
    } else {
      for (int j = 0; j < c.dim; ++j) n[j] = c.phantom_normal[static_cast<std::size_t>(j)];
    }
    return Phantom::half_space(n);
  }
  if (c.phantom_kind == "transformed_ball") {
    Point center = Point::Zero(c.dim);
    for (std::size_t j = 0; j < c.phantom_center.size(); ++j) center[static_cast<int>(j)] = c.phantom_center[j];
    return Phantom::transformed_ball(c.dim, c.phantom_radius, c.phantom_scale, center);
  }
  return Phantom::ball(c.dim, c.phantom_radius);
}

WeightFunction make_weight(const ExperimentConfig& c) {
  if (c.f_kind == "smooth_plateau") {
    return WeightFunction::smooth_plateau(c.f_beta, c.f_beta_inner, c.f_omega_inner, c.f_omega);
  }
  return WeightFunction::indicator(c.f_beta, c.f_omega);
}

Lattice make_lattice(const ExperimentConfig& c) {
  if (c.lattice_matrix.empty()) return Lattice::cubic(c.dim);
  Matrix a(c.dim, c.dim);
  for (int i = 0; i < c.dim; ++i) {
    for (int j = 0; j < c.dim; ++j) a(i, j) = c.lattice_matrix[static_cast<std::size_t>(i * c.dim + j)];
  }
  return Lattice(a);
}

double resolution_for(const ExperimentConfig& c, std::size_t i) {
  const double a = c.a.at(i);
  switch (c.b_rule) {
    case ScaleRule::Explicit: return c.b.at(i);
    case ScaleRule::Equal: return a;
    case ScaleRule::Square: return a * a;
  }
  return a;
}

TruncationPolicy make_policy(const ExperimentConfig& c) {
  TruncationPolicy p;
  p.max_cutoff = c.max_cutoff;
  return p;
}

}  // namespace greyvar
