#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "nlseg/commands.hpp"
#include "nlseg/config.hpp"
#include "nlseg/error.hpp"

namespace {

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 1;

// Flags shared by decompose and run. Unset flags leave the value from
// --config (or the RunConfig default) alone.
struct ConfigFlags {
  std::optional<std::string> config;
  std::optional<std::string> input;
  std::optional<std::string> out;
  std::optional<std::string> truth;
  std::optional<double> alpha, beta, gamma, rho, p, r, tol_in, tol_out;
  std::optional<int> maxit_in, maxit_out, K;
  std::optional<bool> log_domain;
  std::optional<std::uint64_t> seed;
  bool print_config = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool with_segmentation) {
  cmd->add_option("--config", f.config, "JSON run configuration (flags override it)");
  cmd->add_option("-i,--input", f.input, "input image (.pgm or .csv)");
  cmd->add_option("-o,--out", f.out, "output prefix or directory");
  cmd->add_option("--alpha", f.alpha, "weight of the non-Lipschitz gradient term");
  cmd->add_option("--beta", f.beta, "weight of the second-order smoothness term on v");
  cmd->add_option("--gamma", f.gamma, "weight of ||v||^2 (default 1e-8)");
  cmd->add_option("--rho", f.rho, "proximal weight (default 1e-8)");
  cmd->add_option("--p", f.p, "exponent of phi(t) = t^p (default 0.5)");
  cmd->add_option("--r", f.r, "ADMM penalty (default 10)");
  cmd->add_option("--tol-in", f.tol_in, "inner relative tolerance (default 1e-4)");
  cmd->add_option("--tol-out", f.tol_out, "outer relative tolerance (default 1e-4)");
  cmd->add_option("--maxit-in", f.maxit_in, "inner iteration cap (default 100)");
  cmd->add_option("--maxit-out", f.maxit_out, "outer iteration cap (default 10)");
  cmd->add_flag("--log-domain,!--no-log-domain", f.log_domain,
                "decompose log(f) and exponentiate u, v afterwards");
  cmd->add_option("--seed", f.seed, "recorded in the resolved configuration");
  if (with_segmentation) {
    cmd->add_option("-K,--K", f.K, "number of phases (default 2)");
    cmd->add_option("--truth", f.truth, "ground-truth label image for JS/CV");
  }
  cmd->add_flag("--print-config", f.print_config, "print the resolved configuration and exit");
}

nlseg::RunConfig resolve(const ConfigFlags& f) {
  nlseg::RunConfig cfg;
  if (f.config) {
    cfg = nlseg::parse_run_config(nlseg::read_text_file(*f.config));
    // paths inside a config file are relative to the file itself
    const auto base = std::filesystem::path(*f.config).parent_path();
    for (auto* p : {&cfg.paths.input, &cfg.paths.output_prefix, &cfg.paths.truth}) {
      if (*p && std::filesystem::path(**p).is_relative()) *p = (base / **p).string();
    }
  }
  auto set = [](auto& field, const auto& flag) {
    if (flag) field = *flag;
  };
  if (f.alpha) cfg.alpha = f.alpha;
  if (f.beta) cfg.beta = f.beta;
  set(cfg.gamma, f.gamma);
  set(cfg.rho, f.rho);
  set(cfg.p, f.p);
  set(cfg.r, f.r);
  set(cfg.tol_in, f.tol_in);
  set(cfg.tol_out, f.tol_out);
  set(cfg.maxit_in, f.maxit_in);
  set(cfg.maxit_out, f.maxit_out);
  set(cfg.K, f.K);
  set(cfg.log_domain, f.log_domain);
  set(cfg.seed, f.seed);
  if (f.input) cfg.paths.input = f.input;
  if (f.out) cfg.paths.output_prefix = f.out;
  if (f.truth) cfg.paths.truth = f.truth;
  return cfg;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage segmentation of images with intensity inhomogeneity"};
  app.require_subcommand(1);

  nlseg::cli::SynthOptions synth_opt;
  auto* synth = app.add_subcommand("synth", "generate a ground-truthed phantom");
  auto* spec_opt = synth->add_option("--spec", synth_opt.spec_path, "phantom spec JSON");
  synth->add_option("--preset", synth_opt.preset, "two-phase or five-phase")
      ->check(CLI::IsMember({"two-phase", "five-phase"}))
      ->excludes(spec_opt);
  synth->add_option("-n,--n", synth_opt.n, "side length")->excludes(spec_opt);
  synth->add_option("--noise", synth_opt.noise_sigma, "Gaussian noise sigma")->excludes(spec_opt);
  synth->add_option("--bias", synth_opt.bias_amplitude, "bias amplitude")->excludes(spec_opt);
  synth->add_option("--composition", synth_opt.composition, "additive or multiplicative")
      ->check(CLI::IsMember({"additive", "multiplicative"}))
      ->excludes(spec_opt);
  synth->add_option("--seed", synth_opt.seed, "noise seed")->excludes(spec_opt);
  synth->add_option("-o,--out", synth_opt.out, "output prefix or directory")->required();

  ConfigFlags dec_flags;
  auto* dec = app.add_subcommand("decompose", "stage one: split f into u + v");
  add_config_flags(dec, dec_flags, false);

  nlseg::cli::SegmentOptions seg_opt;
  auto* seg = app.add_subcommand("segment", "stage two: threshold a stored u");
  seg->add_option("-i,--input", seg_opt.input, "u as .csv or .pgm")->required();
  seg->add_option("-K,--K", seg_opt.K, "number of phases")->required();
  seg->add_option("-o,--out", seg_opt.out, "output prefix or directory")->required();

  ConfigFlags run_flags;
  auto* run = app.add_subcommand("run", "decompose, segment and evaluate");
  add_config_flags(run, run_flags, true);

  nlseg::cli::MetricsOptions met_opt;
  auto* met = app.add_subcommand("metrics", "per-phase JS and CV against ground truth");
  met->add_option("-i,--input", met_opt.input, "label image, or u as .csv")->required();
  met->add_option("--truth", met_opt.truth, "ground-truth label image")->required();
  met->add_option("-K,--K", met_opt.K, "number of phases")->required();
  met->add_option("--corrected", met_opt.corrected, "intensity image for CV");
  met->add_option("--report", met_opt.report, "write the JSON report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (synth->parsed()) {
      nlseg::cli::synth(synth_opt, std::cerr);
    } else if (seg->parsed()) {
      nlseg::cli::segment(seg_opt, std::cerr);
    } else if (met->parsed()) {
      nlseg::cli::metrics(met_opt, std::cout);
    } else {
      const bool is_run = run->parsed();
      const ConfigFlags& flags = is_run ? run_flags : dec_flags;
      const nlseg::RunConfig cfg = resolve(flags);
      if (flags.print_config) {
        std::cout << nlseg::to_json(cfg) << '\n';
        return 0;
      }
      if (is_run) {
        nlseg::cli::run(cfg, std::cerr);
      } else {
        nlseg::cli::decompose(cfg, std::cerr);
      }
    }
  } catch (const nlseg::InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
