#include "nlseg/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nlseg/error.hpp"

namespace nlseg {

using nlohmann::json;

namespace {

json parse_object(const std::string& text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw ParseError(std::string(what) + ": expected a JSON object");
  return j;
}

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    if (!allowed.contains(key)) throw ParseError(where + ": unknown key '" + key + "'");
  }
}

template <typename T>
T get_as(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParseError(where + ": key '" + key + "' has the wrong type");
  }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number()) throw ParseError(where + ": key '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& where) {
  if (!j.at(key).is_number_integer()) throw ParseError(where + ": key '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

std::optional<std::string> get_opt_string(const json& j, const std::string& key,
                                          const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_string()) throw ParseError(where + ": key '" + key + "' must be a string");
  return j.at(key).get<std::string>();
}

const std::set<std::string> kRunKeys = {"alpha", "beta",      "gamma",     "rho",     "p",
                                        "r",     "tol_in",    "tol_out",   "maxit_in", "maxit_out",
                                        "K",     "log_domain", "seed",     "paths"};
const std::set<std::string> kPathKeys = {"input", "output_prefix", "truth"};

void apply_run_json(RunConfig& cfg, const json& j) {
  const std::string where = "run config";
  reject_unknown(j, kRunKeys, where);
  auto opt_number = [&](const char* key, std::optional<double>& dst) {
    if (!j.contains(key)) return;
    if (j.at(key).is_null()) {
      dst.reset();
    } else {
      dst = get_number(j, key, where);
    }
  };
  opt_number("alpha", cfg.alpha);
  opt_number("beta", cfg.beta);
  for (auto [key, dst] : {std::pair{"gamma", &cfg.gamma}, std::pair{"rho", &cfg.rho},
                          std::pair{"p", &cfg.p}, std::pair{"r", &cfg.r},
                          std::pair{"tol_in", &cfg.tol_in}, std::pair{"tol_out", &cfg.tol_out}}) {
    if (j.contains(key)) *dst = get_number(j, key, where);
  }
  for (auto [key, dst] : {std::pair{"maxit_in", &cfg.maxit_in},
                          std::pair{"maxit_out", &cfg.maxit_out}, std::pair{"K", &cfg.K}}) {
    if (j.contains(key)) *dst = get_int(j, key, where);
  }
  if (j.contains("log_domain")) cfg.log_domain = get_as<bool>(j, "log_domain", where);
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ParseError(where + ": seed must be a nonnegative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("paths")) {
    const json& p = j.at("paths");
    if (!p.is_object()) throw ParseError(where + ": paths must be an object");
    reject_unknown(p, kPathKeys, where + ".paths");
    if (p.contains("input")) cfg.paths.input = get_opt_string(p, "input", where);
    if (p.contains("output_prefix")) cfg.paths.output_prefix = get_opt_string(p, "output_prefix", where);
    if (p.contains("truth")) cfg.paths.truth = get_opt_string(p, "truth", where);
  }
}

json opt_json(const std::optional<std::string>& s) { return s ? json(*s) : json(nullptr); }

} // namespace

void RunConfig::validate() const {
  if (!alpha) throw InvalidArgument("alpha is required (no default; tune per image)");
  if (!beta) throw InvalidArgument("beta is required (no default; tune per image)");
  if (!(*alpha > 0.0)) throw InvalidArgument("alpha must be > 0");
  if (!(*beta > 0.0)) throw InvalidArgument("beta must be > 0");
  if (!(gamma > 0.0)) throw InvalidArgument("gamma must be > 0");
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0, 1)");
  if (K < 2) throw InvalidArgument("K must be >= 2");
  outer().validate();
  admm().validate();
}

ModelParams RunConfig::model() const {
  if (!alpha || !beta) throw InvalidArgument("alpha and beta must be set");
  return ModelParams(*alpha, *beta, gamma, PotentialSpec(p));
}

OuterParams RunConfig::outer() const {
  OuterParams o;
  o.rho = rho;
  o.tol_out = tol_out;
  o.maxit_out = maxit_out;
  return o;
}

AdmmParams RunConfig::admm() const { return AdmmParams{r, tol_in, maxit_in}; }

RunConfig parse_run_config(const std::string& json_text) {
  return merge_run_config(RunConfig{}, json_text);
}

RunConfig merge_run_config(const RunConfig& base, const std::string& json_text) {
  RunConfig cfg = base;
  apply_run_json(cfg, parse_object(json_text, "run config"));
  return cfg;
}

std::string to_json(const RunConfig& cfg) {
  json j;
  j["alpha"] = cfg.alpha ? json(*cfg.alpha) : json(nullptr);
  j["beta"] = cfg.beta ? json(*cfg.beta) : json(nullptr);
  j["gamma"] = cfg.gamma;
  j["rho"] = cfg.rho;
  j["p"] = cfg.p;
  j["r"] = cfg.r;
  j["tol_in"] = cfg.tol_in;
  j["tol_out"] = cfg.tol_out;
  j["maxit_in"] = cfg.maxit_in;
  j["maxit_out"] = cfg.maxit_out;
  j["K"] = cfg.K;
  j["log_domain"] = cfg.log_domain;
  j["seed"] = cfg.seed;
  j["paths"] = {{"input", opt_json(cfg.paths.input)},
                {"output_prefix", opt_json(cfg.paths.output_prefix)},
                {"truth", opt_json(cfg.paths.truth)}};
  return j.dump(2) + "\n";
}

PhantomSpec parse_phantom_spec(const std::string& json_text) {
  const std::string where = "phantom spec";
  const json j = parse_object(json_text, where.c_str());
  reject_unknown(j, {"n", "K", "phase_values", "shapes", "bias_amplitude", "bias_kind",
                     "noise_sigma", "composition", "seed", "recommended"},
                 where);
  PhantomSpec spec;
  if (j.contains("n")) spec.n = static_cast<std::size_t>(get_int(j, "n", where));
  if (j.contains("K")) spec.K = get_int(j, "K", where);
  if (j.contains("phase_values")) spec.phase_values = get_as<std::vector<double>>(j, "phase_values", where);
  if (j.contains("shapes")) {
    spec.shapes.clear();
    for (const auto& s : j.at("shapes")) {
      if (!s.is_object() || !s.contains("type")) throw ParseError(where + ": shape needs a type");
      const auto type = get_as<std::string>(s, "type", where);
      if (type == "disk") {
        reject_unknown(s, {"type", "center", "radius", "phase"}, where + ".disk");
        const auto c = get_as<std::vector<double>>(s, "center", where);
        if (c.size() != 2) throw ParseError(where + ": disk center must be [row, col]");
        spec.shapes.emplace_back(Disk{c[0], c[1], get_number(s, "radius", where), get_int(s, "phase", where)});
      } else if (type == "rect") {
        reject_unknown(s, {"type", "min", "max", "phase"}, where + ".rect");
        const auto lo = get_as<std::vector<std::size_t>>(s, "min", where);
        const auto hi = get_as<std::vector<std::size_t>>(s, "max", where);
        if (lo.size() != 2 || hi.size() != 2) throw ParseError(where + ": rect corners must be [row, col]");
        spec.shapes.emplace_back(Rect{lo[0], lo[1], hi[0], hi[1], get_int(s, "phase", where)});
      } else {
        throw ParseError(where + ": unknown shape type '" + type + "'");
      }
    }
  }
  if (j.contains("bias_amplitude")) spec.bias_amplitude = get_number(j, "bias_amplitude", where);
  if (j.contains("bias_kind")) spec.bias_kind = parse_bias_kind(get_as<std::string>(j, "bias_kind", where));
  if (j.contains("noise_sigma")) spec.noise_sigma = get_number(j, "noise_sigma", where);
  if (j.contains("composition")) spec.composition = parse_composition(get_as<std::string>(j, "composition", where));
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw ParseError(where + ": seed must be a nonnegative integer");
    spec.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("recommended")) {
    const json& r = j.at("recommended");
    if (!r.is_object()) throw ParseError(where + ": recommended must be an object");
    reject_unknown(r, {"alpha", "beta", "log_domain"}, where + ".recommended");
    if (r.contains("alpha")) spec.recommended.alpha = get_number(r, "alpha", where);
    if (r.contains("beta")) spec.recommended.beta = get_number(r, "beta", where);
    if (r.contains("log_domain")) spec.recommended.log_domain = get_as<bool>(r, "log_domain", where);
  }
  spec.validate();
  return spec;
}

std::string to_json(const PhantomSpec& spec) {
  json j;
  j["n"] = spec.n;
  j["K"] = spec.K;
  j["phase_values"] = spec.phase_values;
  json shapes = json::array();
  for (const auto& s : spec.shapes) {
    if (const auto* d = std::get_if<Disk>(&s)) {
      shapes.push_back({{"type", "disk"},
                        {"center", {d->center_row, d->center_col}},
                        {"radius", d->radius},
                        {"phase", d->phase}});
    } else {
      const auto& r = std::get<Rect>(s);
      shapes.push_back({{"type", "rect"},
                        {"min", {r.row0, r.col0}},
                        {"max", {r.row1, r.col1}},
                        {"phase", r.phase}});
    }
  }
  j["shapes"] = shapes;
  j["bias_amplitude"] = spec.bias_amplitude;
  j["bias_kind"] = to_string(spec.bias_kind);
  j["noise_sigma"] = spec.noise_sigma;
  j["composition"] = to_string(spec.composition);
  j["seed"] = spec.seed;
  const auto& rec = spec.recommended;
  if (rec.alpha || rec.beta || rec.log_domain) {
    json r = json::object();
    if (rec.alpha) r["alpha"] = *rec.alpha;
    if (rec.beta) r["beta"] = *rec.beta;
    if (rec.log_domain) r["log_domain"] = *rec.log_domain;
    j["recommended"] = r;
  }
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace nlseg
