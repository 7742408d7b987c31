#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "nlseg/admm.hpp"
#include "nlseg/energy.hpp"
#include "nlseg/issapl.hpp"
#include "nlseg/synth.hpp"

namespace nlseg {

struct RunPaths {
  std::optional<std::string> input;
  std::optional<std::string> output_prefix;
  std::optional<std::string> truth;

  bool operator==(const RunPaths&) const = default;
};

/// Every tunable of a decomposition + segmentation run. alpha and beta
/// have no universal default and must be set before building ModelParams.
struct RunConfig {
  std::optional<double> alpha;
  std::optional<double> beta;
  double gamma = 1e-8;
  double rho = 1e-8;
  double p = 0.5;
  double r = 10.0;
  double tol_in = 1e-4;
  double tol_out = 1e-4;
  int maxit_in = 100;
  int maxit_out = 10;
  int K = 2;
  bool log_domain = false;
  std::uint64_t seed = 0;
  RunPaths paths;

  bool operator==(const RunConfig&) const = default;

  /// Throws InvalidArgument naming the first missing or out-of-range field.
  void validate() const;

  [[nodiscard]] ModelParams model() const;
  [[nodiscard]] OuterParams outer() const;
  [[nodiscard]] AdmmParams admm() const;
};

/// Parses a JSON object with RunConfig keys; keys not listed in RunConfig
/// are rejected. Missing keys keep their defaults.
RunConfig parse_run_config(const std::string& json_text);
/// Overlays keys present in `json_text` onto `base`.
RunConfig merge_run_config(const RunConfig& base, const std::string& json_text);
/// Pretty JSON with every field (alpha/beta as null when unset).
std::string to_json(const RunConfig& cfg);

/// Phantom spec JSON: n, K, phase_values, shapes [{type: disk|rect, ...}],
/// bias_amplitude, bias_kind, noise_sigma, composition, seed, and an
/// optional "recommended" {alpha, beta, log_domain} block.
PhantomSpec parse_phantom_spec(const std::string& json_text);
std::string to_json(const PhantomSpec& spec);

std::string read_text_file(const std::string& path);

} // namespace nlseg
