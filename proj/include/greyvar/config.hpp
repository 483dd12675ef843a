/**
 * @file config.hpp
 * @brief Flat dotted key=value experiment configuration.
 *
 * Example:
 *   psf.kind=gaussian
 *   psf.dim=2
 *   f.kind=indicator
 *   f.beta=0.3
 *   f.omega=0.7
 *   scales.a=0.1,0.05,0.025
 *   scales.b_rule=equal
 *   lattice.matrix=1,0,0,1
 */
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "greyvar/lattice.hpp"
#include "greyvar/phantom.hpp"
#include "greyvar/variance.hpp"

namespace greyvar {

/// How b is derived from a: listed explicitly, b = a, or b = a^2.
enum class ScaleRule { Explicit, Equal, Square };

struct ExperimentConfig {
  std::string phantom_kind = "ball";  // ball | halfspace | transformed_ball
  double phantom_radius = 1.0;
  double phantom_scale = 1.0;
  std::vector<double> phantom_center;  // empty: origin
  std::vector<double> phantom_normal;  // empty: e_1

  std::string psf_kind = "gaussian";  // gaussian | bump | ball
  int dim = 2;
  double psf_shape = 1.0;
  int profile_grid = 4096;

  std::string f_kind = "indicator";  // indicator | smooth_plateau
  double f_beta = 0.3;
  double f_beta_inner = 0.4;
  double f_omega_inner = 0.6;
  double f_omega = 0.7;

  std::vector<double> a{0.05};
  ScaleRule b_rule = ScaleRule::Equal;
  std::vector<double> b;  // used when b_rule = Explicit

  std::vector<double> lattice_matrix;  // row-major; empty: identity

  std::int64_t replicates = 10000;
  std::uint64_t seed = 0;
  std::string sampling = "iid";  // iid | stratified

  bool random_radius = false;
  double radius_lower = 1.0;
  double radius_upper = 2.0;

  std::vector<double> fourier_xi{1.0, 2.0, 3.0};
  std::string fourier_regime = "equal";
  double shells_cutoff = 3.0;
  double max_cutoff = 0.0;

  std::string output = "out";
};

/// Geometric grid "geom:start,ratio,count" or an explicit comma list.
std::vector<double> parse_grid(const std::string& key, const std::string& text);

/// Parses key=value lines ('#' starts a comment). Unknown keys and malformed values throw
/// ConfigError naming the key; the result is validated.
ExperimentConfig parse_config(const std::string& text);
/// Applies one key=value override.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
/// Every field with 17 significant digits; parse_config(to_text(c)) reproduces c.
std::string to_text(const ExperimentConfig& config);
/// Key/value view in the order of to_text.
std::map<std::string, std::string> to_map(const ExperimentConfig& config);

/// Throws ConfigError for non-positive scales, beta >= omega, det A <= 0, etc.
void validate(const ExperimentConfig& config);

Psf make_psf(const ExperimentConfig& config);
Phantom make_phantom(const ExperimentConfig& config);
WeightFunction make_weight(const ExperimentConfig& config);
Lattice make_lattice(const ExperimentConfig& config);
/// Resolution paired with a[i] under the configured rule.
double resolution_for(const ExperimentConfig& config, std::size_t i);
TruncationPolicy make_policy(const ExperimentConfig& config);

/// 17 significant digits (printf %.17g); every double round-trips.
std::string format_double(double x);

}  // namespace greyvar
