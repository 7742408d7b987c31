#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "nlseg/config.hpp"

namespace nlseg::cli {

struct SynthOptions {
  std::optional<std::string> spec_path;
  std::string preset = "two-phase";
  std::size_t n = 128;
  double noise_sigma = 0.0;
  double bias_amplitude = 0.0;
  std::string composition = "additive";
  std::uint64_t seed = 0;
  std::string out;
};

struct SegmentOptions {
  std::string input;
  int K = 2;
  std::string out;
};

struct MetricsOptions {
  std::string input;
  std::string truth;
  int K = 2;
  std::optional<std::string> corrected;
  std::optional<std::string> report;
};

/// Writes f.pgm, f.csv, truth.pgm, clean_u.csv, bias_v.csv, spec.json and a
/// config.json seeded from the phantom's recommended settings.
void synth(const SynthOptions& opt, std::ostream& log);

/// Stage one only: u.csv, v.csv, u.pgm, v.pgm, trace.csv, report.json.
void decompose(const RunConfig& cfg, std::ostream& log);

/// Stage two only on a stored u: labels.pgm and segment.json.
void segment(const SegmentOptions& opt, std::ostream& log);

/// Both stages plus metrics when a truth label image is configured.
void run(const RunConfig& cfg, std::ostream& log);

/// Per-phase JS (and CV when an intensity image is available). A .csv input
/// is treated as u and segmented first; anything else as a label image.
void metrics(const MetricsOptions& opt, std::ostream& out);

} // namespace nlseg::cli
