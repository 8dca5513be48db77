#include "config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace boundopt {

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "': expected a number, got '" + value + "'");
  }
}

}  // namespace

ConfigMap ConfigMap::defaults() {
  ConfigMap c;
  auto& kv = c.kv_;
  kv["problem.kind"] = "quadratic";
  kv["problem.dim"] = "2";
  kv["problem.cycle"] = "derive";  // thm1/thm2: explicit C or "derive" from the betas
  kv["problem.delta"] = "0.1";
  kv["problem.pool_size"] = "32";
  kv["problem.coeff_bound"] = "1";
  kv["problem.box.lo"] = "-5";  // scalar broadcast or comma list; adversarial kinds fix their own box
  kv["problem.box.hi"] = "5";
  kv["optimizer.method"] = "adabound";
  kv["optimizer.alpha"] = "0.001";
  kv["optimizer.beta1"] = "0.9";
  kv["optimizer.beta1_schedule"] = "constant";
  kv["optimizer.lambda"] = "0.9";
  kv["optimizer.beta2"] = "0.999";
  kv["optimizer.epsilon"] = "auto";
  kv["optimizer.gamma"] = "0.9";
  kv["optimizer.step_scheme"] = "constant";
  kv["optimizer.bias_correction"] = "false";
  kv["bound.form"] = "paper_default";
  kv["bound.alpha_star"] = "0.1";
  kv["bound.beta"] = "auto";  // auto = optimizer.beta2
  kv["run.steps"] = "1000";
  kv["run.seed"] = "42";
  kv["run.record_every"] = "1";
  kv["run.x1"] = "0";  // scalar broadcast or comma list
  kv["sweep.grid"] = "";
  return c;
}

void ConfigMap::set(const std::string& key, std::string value) {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("config: unknown key '" + key + "'");
  it->second = std::move(value);
}

const std::string& ConfigMap::get(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) throw ConfigError("config: unknown key '" + key + "'");
  return it->second;
}

void ConfigMap::apply_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  apply_text(buf.str(), path);
}

void ConfigMap::apply_text(std::string_view text, const std::string& origin) {
  size_t lineno = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    const size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: " + origin + ":" + std::to_string(lineno) +
                        ": expected 'key = value', got '" + stripped + "'");
    set(trim(std::string_view(stripped).substr(0, eq)),
        trim(std::string_view(stripped).substr(eq + 1)));
  }
}

void ConfigMap::apply_override(std::string_view assignment) {
  const size_t eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ConfigError("config: override '" + std::string(assignment) + "' is not of the form key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

double ConfigMap::get_double(const std::string& key) const {
  return parse_double(key, get(key));
}

int64_t ConfigMap::get_int(const std::string& key) const {
  const std::string& v = get(key);
  int64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

bool ConfigMap::get_bool(const std::string& key) const {
  const std::string& v = get(key);
  if (v == "true") return true;
  if (v == "false") return false;
  throw ConfigError("config: key '" + key + "': expected true or false, got '" + v + "'");
}

uint64_t ConfigMap::get_seed(const std::string& key) const {
  const std::string& v = get(key);
  uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("config: key '" + key + "': expected a non-negative integer, got '" + v + "'");
  return out;
}

std::vector<double> ConfigMap::get_broadcast(const std::string& key, size_t dim) const {
  const std::string& v = get(key);
  std::vector<double> out;
  size_t start = 0;
  while (start <= v.size()) {
    const size_t comma = v.find(',', start);
    const std::string item =
        trim(std::string_view(v).substr(start, comma == std::string::npos ? v.size() - start : comma - start));
    if (item.empty())
      throw ConfigError("config: key '" + key + "': empty element in list '" + v + "'");
    out.push_back(parse_double(key, item));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() == 1) out.assign(dim, out[0]);
  if (out.size() != dim)
    throw ConfigError("config: key '" + key + "': expected 1 or " + std::to_string(dim) +
                      " values, got " + std::to_string(out.size()));
  return out;
}

std::string ConfigMap::canonical_text() const {
  std::string out;
  for (const auto& [k, v] : kv_) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

uint64_t fnv1a64(std::string_view bytes) {
  uint64_t h = 0xCBF29CE484222325ull;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ull;
  }
  return h;
}

uint64_t ConfigMap::hash() const {
  return fnv1a64(canonical_text());
}

std::string ConfigMap::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

namespace {

// Re-raise domain validation failures as config errors carrying key context.
template <typename F>
auto with_key_context(const char* keys, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + keys + ": " + e.what());
  }
}

}  // namespace

BoundSchedule build_bound(const ConfigMap& cfg, double optimizer_beta2) {
  const BoundForm form = with_key_context("key 'bound.form'", [&] {
    return bound_form_from_name(cfg.get("bound.form"));
  });
  if (form == BoundForm::kAdamUnbounded) return BoundSchedule::adam_unbounded();
  const double alpha_star = cfg.get_double("bound.alpha_star");
  const std::string& beta_raw = cfg.get("bound.beta");
  const double beta = beta_raw == "auto" ? optimizer_beta2 : parse_double("bound.beta", beta_raw);
  return with_key_context("keys 'bound.*'", [&] { return BoundSchedule(form, alpha_star, beta); });
}

OptimizerConfig build_optimizer(const ConfigMap& cfg) {
  OptimizerConfig oc;
  oc.method = with_key_context("key 'optimizer.method'", [&] {
    return method_from_name(cfg.get("optimizer.method"));
  });
  oc.alpha = cfg.get_double("optimizer.alpha");
  oc.beta1 = cfg.get_double("optimizer.beta1");
  oc.beta1_schedule = with_key_context("key 'optimizer.beta1_schedule'", [&] {
    return beta1_schedule_from_name(cfg.get("optimizer.beta1_schedule"));
  });
  oc.lambda = cfg.get_double("optimizer.lambda");
  oc.beta2 = cfg.get_double("optimizer.beta2");
  const std::string& eps = cfg.get("optimizer.epsilon");
  oc.epsilon = eps == "auto" ? kEpsilonAuto : parse_double("optimizer.epsilon", eps);
  oc.momentum_gamma = cfg.get_double("optimizer.gamma");
  oc.step_scheme = with_key_context("key 'optimizer.step_scheme'", [&] {
    return step_scheme_from_name(cfg.get("optimizer.step_scheme"));
  });
  oc.bias_correction = cfg.get_bool("optimizer.bias_correction");
  oc.bound = build_bound(cfg, oc.beta2);
  with_key_context("keys 'optimizer.*'", [&] { oc.validate(); return 0; });
  return oc;
}

ProblemInstance build_problem(const ConfigMap& cfg) {
  const ProblemKind kind = with_key_context("key 'problem.kind'", [&] {
    return problem_kind_from_name(cfg.get("problem.kind"));
  });
  const uint64_t seed = cfg.get_seed("run.seed");

  const auto cycle_for = [&](int theorem) -> int64_t {
    const std::string& raw = cfg.get("problem.cycle");
    if (raw == "derive") {
      return with_key_context("key 'problem.cycle'", [&] {
        return theorem == 1
                   ? derive_cycle_length_thm1(cfg.get_double("optimizer.beta2"))
                   : derive_cycle_length_thm2(cfg.get_double("optimizer.beta1"),
                                              cfg.get_double("optimizer.beta2"));
      });
    }
    return cfg.get_int("problem.cycle");
  };

  return with_key_context("keys 'problem.*'", [&]() -> ProblemInstance {
    switch (kind) {
      case ProblemKind::kThm1Adversary:
        return ProblemInstance::thm1_adversary(cycle_for(1));
      case ProblemKind::kThm2Adversary:
        return ProblemInstance::thm2_adversary(cycle_for(2));
      case ProblemKind::kThm3Stochastic:
        return ProblemInstance::thm3_stochastic(cycle_for(0), cfg.get_double("problem.delta"), seed);
      case ProblemKind::kQuadratic:
      case ProblemKind::kLogistic:
      case ProblemKind::kLinearRandom: {
        const int64_t dim = cfg.get_int("problem.dim");
        if (dim < 1) throw ConfigError("config: key 'problem.dim': must be >= 1");
        const size_t d = static_cast<size_t>(dim);
        FeasibleBox box(cfg.get_broadcast("problem.box.lo", d), cfg.get_broadcast("problem.box.hi", d));
        if (kind == ProblemKind::kQuadratic) return ProblemInstance::quadratic(d, std::move(box), seed);
        if (kind == ProblemKind::kLogistic)
          return ProblemInstance::logistic(d, cfg.get_int("problem.pool_size"), std::move(box), seed);
        return ProblemInstance::linear_random(d, std::move(box), seed,
                                              cfg.get_double("problem.coeff_bound"));
      }
    }
    throw ConfigError("config: key 'problem.kind': unhandled kind");
  });
}

RunSetup build_run_setup(const ConfigMap& cfg) {
  ProblemInstance problem = build_problem(cfg);
  OptimizerConfig optimizer = build_optimizer(cfg);

  const int64_t steps = cfg.get_int("run.steps");
  if (steps < 1) throw ConfigError("config: key 'run.steps': must be >= 1");
  const int64_t stride = cfg.get_int("run.record_every");
  if (stride < 1) throw ConfigError("config: key 'run.record_every': must be >= 1");

  std::vector<double> x1 = cfg.get_broadcast("run.x1", problem.dim());
  if (!problem.box().contains(x1))
    throw ConfigError("config: key 'run.x1': start point lies outside the feasible box");

  return RunSetup{std::move(problem), std::move(optimizer), std::move(x1), steps,
                  cfg.get_seed("run.seed"), stride};
}

std::vector<SweepAxis> parse_sweep_grid(const ConfigMap& cfg) {
  const std::string& raw = cfg.get("sweep.grid");
  if (trim(raw).empty())
    throw ConfigError("config: key 'sweep.grid': a sweep needs a non-empty grid "
                      "(syntax: key=v1,v2|key2=v3,v4)");
  std::vector<SweepAxis> axes;
  size_t start = 0;
  while (start <= raw.size()) {
    const size_t bar = raw.find('|', start);
    const std::string part =
        trim(std::string_view(raw).substr(start, bar == std::string::npos ? raw.size() - start : bar - start));
    const size_t eq = part.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: key 'sweep.grid': axis '" + part + "' is not of the form key=v1,v2");
    SweepAxis axis;
    axis.key = trim(std::string_view(part).substr(0, eq));
    cfg.get(axis.key);  // reject unknown axis keys now
    std::string values = part.substr(eq + 1);
    size_t vstart = 0;
    while (vstart <= values.size()) {
      const size_t comma = values.find(',', vstart);
      const std::string v = trim(std::string_view(values).substr(
          vstart, comma == std::string::npos ? values.size() - vstart : comma - vstart));
      if (v.empty())
        throw ConfigError("config: key 'sweep.grid': empty value in axis '" + axis.key + "'");
      axis.values.push_back(v);
      if (comma == std::string::npos) break;
      vstart = comma + 1;
    }
    axes.push_back(std::move(axis));
    if (bar == std::string::npos) break;
    start = bar + 1;
  }
  return axes;
}

}  // namespace boundopt
