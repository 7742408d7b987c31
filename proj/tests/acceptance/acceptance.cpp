// Acceptance runner: one PASS/FAIL line per criterion.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nlseg/admm.hpp"
#include "nlseg/energy.hpp"
#include "nlseg/imgio.hpp"
#include "nlseg/issapl.hpp"
#include "nlseg/metrics.hpp"
#include "nlseg/operators.hpp"
#include "nlseg/synth.hpp"
#include "nlseg/threshold.hpp"
#include "oracles/oracles.hpp"
#include "support/eigen_bridge.hpp"
#include "support/random.hpp"

using namespace nlseg;
using json = nlohmann::json;
namespace fs = std::filesystem;
using nlseg::testing::random_field;
using nlseg::testing::random_grid;
using nlseg::testing::random_hessian_field;
using nlseg::testing::to_vec;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

AdmmParams admm_from(const json& j) {
  return AdmmParams{j.at("r").get<double>(), j.at("tol_in").get<double>(), j.at("maxit_in").get<int>()};
}

// ---------------------------------------------------------------- 1
Outcome operator_correctness() {
  std::mt19937_64 rng(1);
  double worst_d = 0.0, worst_h = 0.0, worst_sym = 0.0;
  for (std::size_t n : {4u, 8u, 16u}) {
    for (int trial = 0; trial < 100; ++trial) {
      const ImageGrid u = random_grid(n, rng);
      const GradientField p = random_field(n, rng);
      const HessianField P = random_hessian_field(n, rng);
      worst_d = std::max(worst_d, std::abs(dot(grad(u), p) - dot(u, grad_adjoint(p))) / (norm(u) * norm(p)));
      worst_h = std::max(worst_h,
                         std::abs(dot(hessian(u), P) - dot(u, hessian_adjoint(P))) / (norm(u) * norm(P)));
    }
    // symbols against the transform of the dense impulse responses
    const OperatorSymbols s = compute_symbols(n);
    worst_sym = std::max(worst_sym, symbol_deviation(s));
    const oracle::Matrix D = oracle::gradient(n);
    const oracle::Matrix H = oracle::hessian(n);
    const oracle::Vector hd = (D.transpose() * D).col(0);
    const oracle::Vector hh = (H.transpose() * H).col(0);
    for (std::size_t k1 = 0; k1 < n; ++k1) {
      for (std::size_t k2 = 0; k2 < n; ++k2) {
        double sd = 0.0, sh = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(k1 * i + k2 * j) /
                                      static_cast<double>(n));
            sd += hd(static_cast<Eigen::Index>(i * n + j)) * c;
            sh += hh(static_cast<Eigen::Index>(i * n + j)) * c;
          }
        }
        worst_sym = std::max({worst_sym, std::abs(s.sigma_d(k1, k2) - sd), std::abs(s.sigma_h(k1, k2) - sh)});
      }
    }
  }
  const bool ok = worst_d <= 1e-10 && worst_h <= 1e-10 && worst_sym <= 1e-10;
  return {ok, "adjoint_D=" + fmt(worst_d) + " adjoint_H=" + fmt(worst_h) + " symbols=" + fmt(worst_sym)};
}

// ---------------------------------------------------------------- 2
Outcome spectral_solver() {
  const std::size_t n = 8;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> alpha(0.01, 1.0), logbeta(-1.0, 4.0), logr(-1.0, 2.0);
  const OperatorSymbols sym = compute_symbols(n);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const ImageGrid f = random_grid(n, rng), uk = random_grid(n, rng);
    const GradientField q = random_field(n, rng), mu = random_field(n, rng);
    const ModelParams m(alpha(rng), std::pow(10.0, logbeta(rng)));
    const double r = std::pow(10.0, logr(rng));
    const auto [u, v] = solve_uv(f, uk, q, mu, sym, m, 1e-8, r);
    const auto [ue, ve] =
        oracle::dense_solve_uv(n, to_vec(f), to_vec(uk), to_vec(q), to_vec(mu), m.beta, m.gamma, 1e-8, r);
    oracle::Vector got(2 * n * n), want(2 * n * n);
    got << to_vec(u), to_vec(v);
    want << ue, ve;
    worst = std::max(worst, (got - want).norm() / want.norm());
  }
  return {worst <= 1e-8, "max_rel_err=" + fmt(worst)};
}

// ---------------------------------------------------------------- 3
Outcome shrinkage() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> comp(-1.0, 1.0), thr(0.0, 1.5);
  double worst_arg = 0.0, worst_obj = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec2 z{comp(rng), comp(rng)};
    const double t = thr(rng);
    const Vec2 q = shrink_group(z, t);
    const auto bf = oracle::shrink_bruteforce({z[0], z[1]}, t);
    worst_arg = std::max(worst_arg, std::hypot(q[0] - bf.argmin[0], q[1] - bf.argmin[1]));
    worst_obj = std::max(worst_obj, std::abs(oracle::shrink_objective({q[0], q[1]}, {z[0], z[1]}, t) - bf.objective));
  }
  return {worst_arg <= 1e-3 && worst_obj <= 1e-6, "max_arg_err=" + fmt(worst_arg) + " max_obj_err=" + fmt(worst_obj)};
}

// ---------------------------------------------------------------- 4
Outcome inner_optimality(const json& fx) {
  const std::size_t n = 4;
  const int count = fx.at("instances").get<int>();
  const AdmmParams admm = admm_from(fx.at("admm"));
  std::mt19937_64 rng(fx.at("seed").get<std::uint64_t>());
  std::uniform_real_distribution<double> level(0.1, 1.0);
  std::uniform_int_distribution<int> layout(0, 2), cut(1, 3);
  std::normal_distribution<double> noise(0.0, 0.02);
  const double alphas[] = {0.05, 0.1, 0.2};
  const double betas[] = {1.0, 10.0};
  const double rho = 1e-8;
  double worst = 0.0;
  for (int t = 0; t < count; ++t) {
    // piecewise-constant image, noisy on odd instances
    ImageGrid f(n);
    const int kind = layout(rng), c = cut(rng);
    const double a = level(rng), b = level(rng);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const bool side = kind == 0 ? static_cast<int>(j) < c
                          : kind == 1 ? static_cast<int>(i) < c
                                      : (static_cast<int>(i) < c && static_cast<int>(j) < c);
        f(i, j) = (side ? a : b) + (t % 2 ? noise(rng) : 0.0);
      }
    }
    const ModelParams m(alphas[t % 3], betas[t % 2]);
    const ImageGrid g = grad_norms(grad(f));
    SupportSet support(n, false);
    ImageGrid w(n);
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.data()[k] > 0.05) {
        support.set(k, true);
        w.data()[k] = m.potential.derivative(g.data()[k]);
      }
    }
    const AdmmResult r = admm_solve(f, f, f, w, support, m, rho, admm, compute_symbols(n));
    const double got = eval_Gk(f, r.u, r.v, f, w, support, m, rho).value;

    oracle::SubproblemInstance inst;
    inst.n = n;
    inst.f = to_vec(f);
    inst.u_k = to_vec(f);
    inst.weights = to_vec(w);
    inst.active.resize(f.size());
    for (std::size_t k = 0; k < f.size(); ++k) inst.active[k] = support.active(k);
    inst.alpha = m.alpha;
    inst.beta = m.beta;
    inst.gamma = m.gamma;
    inst.rho = rho;
    const oracle::SubproblemSolution sol = oracle::solve_subproblem(inst);
    worst = std::max(worst, std::abs(got - sol.value) / std::abs(sol.value));
  }
  return {worst <= 1e-5, std::to_string(count) + " instances, max_rel_gap=" + fmt(worst)};
}

// ------------------------------------------------------- 5, 6, 9
struct SuiteRun {
  int K = 0;
  double sigma = 0.0;
  double amplitude = 0.0;
  double gap_ratio = 0.0;
  DecompositionResult result;
};

const std::vector<SuiteRun>& phantom_suite(const json& fx) {
  static std::optional<std::vector<SuiteRun>> cache;
  if (cache) return *cache;
  cache.emplace();
  const std::size_t n = fx.at("n").get<std::size_t>();
  const auto seed = fx.at("seed").get<std::uint64_t>();
  const Composition comp = parse_composition(fx.at("composition").get<std::string>());
  const AdmmParams admm = admm_from(fx.at("admm"));
  OuterParams outer;
  outer.tol_out = fx.at("outer").at("tol_out").get<double>();
  outer.maxit_out = fx.at("outer").at("maxit_out").get<int>();
  for (const auto& fam : fx.at("families")) {
    const int K = fam.at("K").get<int>();
    const ModelParams m(fam.at("alpha").get<double>(), fam.at("beta").get<double>());
    for (double s : fx.at("noise_sigma")) {
      for (double A : fx.at("bias_amplitude")) {
        const PhantomSpec spec =
            K == 2 ? two_phase_preset(n, s, A, comp, seed) : five_phase_preset(n, s, A, comp, seed);
        const Phantom ph = generate(spec);
        const ImageGrid f = comp == Composition::multiplicative ? to_log_domain(ph.f) : ph.f;
        cache->push_back({K, s, A, fam.at("gap_ratio").get<double>(), decompose(f, m, outer, admm)});
      }
    }
  }
  return *cache;
}

std::string run_name(const SuiteRun& r) {
  return "K=" + std::to_string(r.K) + ",sigma=" + fmt(r.sigma) + ",bias=" + fmt(r.amplitude);
}

// support sizes of every iterate, including the returned one
std::vector<std::size_t> support_sizes(const DecompositionResult& d) {
  std::vector<std::size_t> s;
  for (const auto& row : d.trace) s.push_back(row.support_size);
  s.push_back(d.final_support.count());
  return s;
}

Outcome energy_decrease(const json& fx) {
  const auto& runs = phantom_suite(fx);
  double worst = -std::numeric_limits<double>::infinity();
  std::string where;
  for (const auto& r : runs) {
    std::vector<double> F;
    for (const auto& row : r.result.trace) F.push_back(row.energy);
    F.push_back(r.result.final_energy);
    const double scale = r.result.initial_energy;
    for (std::size_t k = 1; k < F.size(); ++k) {
      const double rel = (F[k] - F[k - 1]) / scale;
      if (rel > worst) {
        worst = rel;
        where = run_name(r) + ",k=" + std::to_string(k);
      }
    }
  }
  return {worst <= 1e-8, std::to_string(runs.size()) + " runs, max_rel_increase=" + fmt(worst) + " at " + where};
}

Outcome support_monotone(const json& fx) {
  const auto& runs = phantom_suite(fx);
  int converged = 0;
  std::vector<std::string> bad;
  for (const auto& r : runs) {
    const auto s = support_sizes(r.result);
    for (std::size_t k = 1; k < s.size(); ++k) {
      if (s[k] > s[k - 1]) bad.push_back(run_name(r) + " grew at k=" + std::to_string(k));
    }
    if (r.result.converged) {
      ++converged;
      if (s.size() < 2 || s[s.size() - 1] != s[s.size() - 2]) bad.push_back(run_name(r) + " changed at the end");
    }
  }
  std::string detail = std::to_string(runs.size()) + " runs, " + std::to_string(converged) + " converged";
  for (const auto& b : bad) detail += "; " + b;
  return {bad.empty() && converged > 0, detail};
}

Outcome gradient_gap(const json& fx) {
  const auto& runs = phantom_suite(fx);
  std::map<int, double> min_final;
  double worst_stability = std::numeric_limits<double>::infinity();
  std::vector<std::string> bad;
  for (const auto& r : runs) {
    if (!r.result.converged) continue;
    const auto s = support_sizes(r.result);
    std::vector<double> ratio;
    for (const auto& row : r.result.trace) ratio.push_back(row.max_grad > 0 ? row.min_nonzero_grad / row.max_grad : 0.0);
    ratio.push_back(r.result.final_max_grad > 0 ? r.result.final_min_nonzero_grad / r.result.final_max_grad : 0.0);
    // first iterate whose support already has its final size
    std::size_t kstar = s.size() - 1;
    while (kstar > 0 && s[kstar - 1] == s.back()) --kstar;
    for (std::size_t k = kstar; k < ratio.size(); ++k) {
      const double rel = ratio[kstar] > 0 ? ratio[k] / ratio[kstar] : 0.0;
      worst_stability = std::min(worst_stability, rel);
      if (rel < 0.5) bad.push_back(run_name(r) + " gap dropped at k=" + std::to_string(k));
    }
    const double final_ratio = ratio.back();
    min_final[r.K] = min_final.contains(r.K) ? std::min(min_final[r.K], final_ratio) : final_ratio;
    if (final_ratio < r.gap_ratio) bad.push_back(run_name(r) + " final ratio " + fmt(final_ratio));
  }
  std::string detail;
  for (const auto& [K, v] : min_final) detail += "K=" + std::to_string(K) + " min_ratio=" + fmt(v) + " ";
  detail += "min_stability=" + fmt(worst_stability);
  for (const auto& b : bad) detail += "; " + b;
  return {bad.empty() && !min_final.empty(), detail};
}

// ------------------------------------------------------------ 7, 8
Outcome table_analogue(const json& fx, int K, double js_min, double cv_max, double time_limit) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t n = fx.at("n").get<std::size_t>();
  const double s = fx.at("noise_sigma").get<double>(), A = fx.at("bias_amplitude").get<double>();
  const auto seed = fx.at("seed").get<std::uint64_t>();
  const PhantomSpec spec = K == 2 ? two_phase_preset(n, s, A, Composition::multiplicative, seed)
                                  : five_phase_preset(n, s, A, Composition::multiplicative, seed);
  const Phantom ph = generate(spec);
  const ModelParams m(fx.at("alpha").get<double>(), fx.at("beta").get<double>());
  const DecompositionResult d = decompose(to_log_domain(ph.f), m);
  const ImageGrid u = from_log_domain(d.u);
  const SegmentationResult seg = segment(u, K);
  const auto pm = phase_metrics(seg.labels, ph.truth, K, &u);
  const double secs = seconds_since(t0);
  double js = 1.0, cv = 0.0;
  std::string per;
  for (const auto& p : pm) {
    js = std::min(js, p.js);
    cv = std::max(cv, p.cv);
    per += " [" + std::to_string(p.phase) + ": JS " + fmt(p.js) + " CV " + fmt(p.cv) + "]";
  }
  const bool ok = js >= js_min && cv <= cv_max && secs <= time_limit;
  return {ok, "min_JS=" + fmt(js) + " max_CV=" + fmt(cv) + per};
}

// --------------------------------------------------------------- 10
Outcome kmeans_optimality() {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> size(4, 30), kdist(2, 4), lattice(0, 9);
  std::uniform_real_distribution<double> val(-5.0, 5.0);
  double worst = 0.0;
  int cases = 0;
  while (cases < 100) {
    const int K = kdist(rng);
    std::vector<double> v(static_cast<std::size_t>(size(rng)));
    for (auto& x : v) x = cases % 3 == 0 ? lattice(rng) * 0.5 : val(rng);
    if (std::set<double>(v.begin(), v.end()).size() < static_cast<std::size_t>(K)) continue;
    const auto means = kmeans_1d(v, K);
    worst = std::max(worst, within_cluster_ss(v, means) - oracle::kmeans_exhaustive(v, K));
    ++cases;
  }
  return {worst <= 1e-9, "100 inputs, max_ss_gap=" + fmt(worst)};
}

// --------------------------------------------------------------- 11
Outcome metric_units() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(0.05, 3.0), logc(-3.0, 3.0), dens(0.1, 0.9);
  std::uniform_int_distribution<std::size_t> side(2, 12);
  double worst_cv = 0.0;
  int asym = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = side(rng);
    std::bernoulli_distribution coin(dens(rng));
    ImageGrid u(n);
    std::vector<std::uint8_t> m(n * n), a(n * n), b(n * n);
    for (std::size_t k = 0; k < n * n; ++k) {
      u.data()[k] = val(rng);
      m[k] = coin(rng);
      a[k] = coin(rng);
      b[k] = coin(rng);
    }
    m[0] = a[0] = 1;
    const RegionMask region(n, m);
    const double c = std::pow(10.0, logc(rng));
    ImageGrid cu = u;
    for (auto& x : cu.data()) x *= c;
    worst_cv = std::max(worst_cv, std::abs(cv(cu, region) - cv(u, region)));
    const RegionMask ra(n, a), rb(n, b);
    if (jaccard(ra, rb) != jaccard(rb, ra)) ++asym;
  }
  return {worst_cv <= 1e-12 && asym == 0,
          "1000 cases each, max_cv_scale_err=" + fmt(worst_cv) + " js_asymmetric=" + std::to_string(asym)};
}

// --------------------------------------------------------------- 12
int shell(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const json& fx, const std::string& cli) {
  if (cli.empty()) return {false, "CLI binary not available"};
  const fs::path dir = fs::path(NLSEG_ACCEPTANCE_TMP) / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string synth = cli + " synth --preset " + fx.at("preset").get<std::string>() +
                            " -n " + std::to_string(fx.at("n").get<int>()) +
                            " --noise " + format_double(fx.at("noise_sigma").get<double>()) +
                            " --bias " + format_double(fx.at("bias_amplitude").get<double>()) +
                            " --composition " + fx.at("composition").get<std::string>() +
                            " --seed " + std::to_string(fx.at("seed").get<std::uint64_t>()) +
                            " -o " + (dir / "ph/").string();
  if (shell(synth) != 0) return {false, "synth failed"};
  const std::string cfg = (dir / "ph/config.json").string();
  for (const char* out : {"a/", "b/"}) {
    if (shell(cli + " run --config " + cfg + " -o " + (dir / out).string()) != 0) return {false, "run failed"};
  }
  int files = 0;
  std::vector<std::string> differ;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    ++files;
    const fs::path other = dir / "b" / e.path().filename();
    if (!fs::exists(other) || slurp(e.path()) != slurp(other)) differ.push_back(e.path().filename().string());
  }
  for (const auto& e : fs::directory_iterator(dir / "b")) {
    if (!fs::exists(dir / "a" / e.path().filename())) differ.push_back(e.path().filename().string());
  }
  std::string detail = std::to_string(files) + " files compared";
  for (const auto& d : differ) detail += "; differs: " + d;
  return {files > 0 && differ.empty(), detail};
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria runner"};
  std::vector<int> selected;
  std::string fixtures_path = NLSEG_FIXTURES;
#ifdef NLSEG_CLI_PATH
  std::string cli = NLSEG_CLI_PATH;
#else
  std::string cli;
#endif
  app.add_option("-c,--criterion", selected, "criteria to run (default: all)")->check(CLI::Range(1, 12));
  app.add_option("--fixtures", fixtures_path, "fixtures JSON");
  app.add_option("--cli", cli, "nlseg binary used by the determinism check");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int c = 1; c <= 12; ++c) selected.push_back(c);
  }

  json fx;
  try {
    fx = json::parse(slurp(fixtures_path));
  } catch (const std::exception& e) {
    std::cerr << "cannot load fixtures '" << fixtures_path << "': " << e.what() << "\n";
    return 2;
  }

  // runtime limits in seconds; 0 means none stated
  const std::map<int, double> limits = {{1, 5.0}, {2, 10.0}, {7, 60.0}, {8, 120.0}};
  const std::map<int, std::function<Outcome()>> criteria = {
      {1, operator_correctness},
      {2, spectral_solver},
      {3, shrinkage},
      {4, [&] { return inner_optimality(fx.at("inner_optimality")); }},
      {5, [&] { return energy_decrease(fx.at("phantom_suite")); }},
      {6, [&] { return support_monotone(fx.at("phantom_suite")); }},
      {7, [&] { return table_analogue(fx.at("two_phase"), 2, 0.98, 0.05, 60.0); }},
      {8, [&] { return table_analogue(fx.at("five_phase"), 5, 0.97, 0.05, 120.0); }},
      {9, [&] { return gradient_gap(fx.at("phantom_suite")); }},
      {10, kmeans_optimality},
      {11, metric_units},
      {12, [&] { return determinism(fx.at("determinism"), cli); }},
  };

  int failures = 0;
  for (int c : selected) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria.at(c)();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = seconds_since(t0);
    if (limits.contains(c) && secs > limits.at(c)) {
      o.pass = false;
      o.detail += " runtime over " + fmt(limits.at(c)) + " s";
    }
    std::printf("criterion %2d: %s  %s (%.2f s)\n", c, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
