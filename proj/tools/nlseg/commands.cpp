#include "nlseg/commands.hpp"

#include <fstream>
#include "json.hpp"

#include "nlseg/error.hpp"
#include "nlseg/imgio.hpp"
#include "nlseg/issapl.hpp"
#include "nlseg/metrics.hpp"
#include "nlseg/output_set.hpp"
#include "nlseg/synth.hpp"
#include "nlseg/threshold.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace nlseg::cli {

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out.flush()) throw Error("cannot write '" + path.string() + "'");
}

const std::string& require_path(const std::optional<std::string>& p, const char* what) {
  if (!p || p->empty()) throw InvalidArgument(std::string("missing ") + what);
  return *p;
}

ordered_json phases_json(const std::vector<PhaseMetrics>& ms) {
  ordered_json arr = ordered_json::array();
  for (const auto& m : ms) {
    ordered_json row;
    row["phase"] = m.phase;
    row["js"] = m.js;
    row["cv"] = m.has_cv ? ordered_json(m.cv) : ordered_json(nullptr);
    arr.push_back(row);
  }
  return arr;
}

struct Stage1 {
  ImageGrid f;      // as read
  ImageGrid u;      // intensity domain
  ImageGrid v;      // intensity domain
  DecompositionResult result;
};

Stage1 run_stage1(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  Stage1 s;
  s.f = read_any_image(require_path(cfg.paths.input, "input image"));
  const ImageGrid work = cfg.log_domain ? to_log_domain(s.f) : s.f;
  s.result = decompose(work, cfg.model(), cfg.outer(), cfg.admm());
  s.u = cfg.log_domain ? from_log_domain(s.result.u) : s.result.u;
  s.v = cfg.log_domain ? from_log_domain(s.result.v) : s.result.v;
  log << "decompose: " << (s.result.converged ? "converged" : "stopped at maxit_out")
      << " after " << s.result.outer_iters << " outer iterations, F = "
      << format_double(s.result.final_energy) << '\n';
  if (s.result.energy_increase_count > 0) {
    log << "warning: energy increased on " << s.result.energy_increase_count << " outer step(s)\n";
  }
  return s;
}

ordered_json stage1_report(const DecompositionResult& r) {
  ordered_json j;
  j["converged"] = r.converged;
  j["outer_iters"] = r.outer_iters;
  j["final_energy"] = r.final_energy;
  j["initial_energy"] = r.initial_energy;
  j["support_size"] = r.final_support.count();
  j["energy_increases"] = r.energy_increase_count;
  return j;
}

void stage1_outputs(const Stage1& s, OutputSet& out) {
  write_float_grid(s.u, out.stage("u.csv"));
  write_float_grid(s.v, out.stage("v.csv"));
  write_image(s.u, out.stage("u.pgm"));
  write_image(s.v, out.stage("v.pgm"));
  write_trace(s.result.trace, out.stage("trace.csv"));
}

ordered_json segmentation_json(const SegmentationResult& seg) {
  ordered_json j;
  j["K"] = seg.K;
  j["cluster_means"] = seg.cluster_means;
  j["thresholds"] = seg.thresholds;
  return j;
}

} // namespace

void synth(const SynthOptions& opt, std::ostream& log) {
  PhantomSpec spec;
  if (opt.spec_path) {
    spec = parse_phantom_spec(read_text_file(*opt.spec_path));
  } else {
    const Composition comp = parse_composition(opt.composition);
    if (opt.preset == "two-phase") {
      spec = two_phase_preset(opt.n, opt.noise_sigma, opt.bias_amplitude, comp, opt.seed);
    } else if (opt.preset == "five-phase") {
      spec = five_phase_preset(opt.n, opt.noise_sigma, opt.bias_amplitude, comp, opt.seed);
    } else {
      throw InvalidArgument("unknown preset '" + opt.preset + "' (two-phase, five-phase)");
    }
  }
  const Phantom ph = generate(spec);

  OutputSet out(opt.out);
  write_image(ph.f, out.stage("f.pgm"));
  write_float_grid(ph.f, out.stage("f.csv"));
  write_labels(ph.truth, spec.K, out.stage("truth.pgm"));
  write_float_grid(ph.clean_u, out.stage("clean_u.csv"));
  write_float_grid(ph.bias_v, out.stage("bias_v.csv"));
  write_text(out.stage("spec.json"), to_json(spec) + "\n");

  RunConfig cfg;
  cfg.alpha = spec.recommended.alpha;
  cfg.beta = spec.recommended.beta;
  cfg.log_domain = spec.recommended.log_domain.value_or(spec.composition == Composition::multiplicative);
  cfg.K = spec.K;
  cfg.seed = spec.seed;
  cfg.paths.input = out.final_path("f.csv").filename().string();
  cfg.paths.truth = out.final_path("truth.pgm").filename().string();
  write_text(out.stage("config.json"), to_json(cfg) + "\n");
  out.commit();
  log << "synth: wrote " << spec.n << "x" << spec.n << " phantom with K = " << spec.K << '\n';
}

void decompose(const RunConfig& cfg, std::ostream& log) {
  const Stage1 s = run_stage1(cfg, log);
  OutputSet out(require_path(cfg.paths.output_prefix, "output prefix"));
  stage1_outputs(s, out);
  write_text(out.stage("report.json"), stage1_report(s.result).dump(2) + "\n");
  out.commit();
}

void segment(const SegmentOptions& opt, std::ostream& log) {
  const ImageGrid u = read_any_image(opt.input);
  const SegmentationResult seg = nlseg::segment(u, opt.K);
  OutputSet out(opt.out);
  write_labels(seg.labels, seg.K, out.stage("labels.pgm"));
  write_text(out.stage("segment.json"), segmentation_json(seg).dump(2) + "\n");
  out.commit();
  log << "segment: K = " << seg.K << '\n';
}

void run(const RunConfig& cfg, std::ostream& log) {
  const Stage1 s = run_stage1(cfg, log);
  const SegmentationResult seg = nlseg::segment(s.u, cfg.K);

  ordered_json report = stage1_report(s.result);
  report["segmentation"] = segmentation_json(seg);
  if (cfg.paths.truth) {
    const LabelMap truth = read_labels(*cfg.paths.truth, cfg.K);
    report["phases"] = phases_json(phase_metrics(seg.labels, truth, cfg.K, &s.u));
  }

  OutputSet out(require_path(cfg.paths.output_prefix, "output prefix"));
  write_image(s.f, out.stage("f.pgm"));
  stage1_outputs(s, out);
  write_labels(seg.labels, seg.K, out.stage("labels.pgm"));
  write_text(out.stage("report.json"), report.dump(2) + "\n");
  out.commit();
}

void metrics(const MetricsOptions& opt, std::ostream& out) {
  const LabelMap truth = read_labels(opt.truth, opt.K);
  std::optional<ImageGrid> intensity;
  LabelMap labels;
  if (fs::path(opt.input).extension() == ".csv") {
    intensity = read_float_grid(opt.input);
    labels = nlseg::segment(*intensity, opt.K).labels;
  } else {
    labels = read_labels(opt.input, opt.K);
  }
  if (opt.corrected) intensity = read_any_image(*opt.corrected);

  ordered_json report;
  report["K"] = opt.K;
  report["phases"] =
      phases_json(phase_metrics(labels, truth, opt.K, intensity ? &*intensity : nullptr));
  const std::string text = report.dump(2) + "\n";
  if (opt.report) {
    OutputSet files(*opt.report);
    write_text(files.stage(""), text);
    files.commit();
  } else {
    out << text;
  }
}

} // namespace nlseg::cli
