#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "rng.hpp"

namespace boundopt {

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_field(const std::string& s, const std::string& path, size_t lineno) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw IoError(path + ":" + std::to_string(lineno) + ": malformed field '" + s + "'");
  }
}

}  // namespace

LrStats lr_statistics(std::span<const double> rates) {
  if (rates.empty()) throw std::invalid_argument("lr_statistics: empty rate vector");
  std::vector<double> sorted(rates.begin(), rates.end());
  std::sort(sorted.begin(), sorted.end());
  return LrStats{sorted.front(), sorted[(sorted.size() - 1) / 2], sorted.back()};
}

LrStats lr_statistics(const OptimizerState& state, const OptimizerConfig& cfg) {
  return lr_statistics(std::span<const double>(learning_rates(state, cfg)));
}

RunResult run_experiment(const RunConfig& cfg) {
  if (cfg.steps < 1) throw std::invalid_argument("run: steps must be >= 1");
  if (cfg.record_every < 1) throw std::invalid_argument("run: record stride must be >= 1");
  if (cfg.x1.size() != cfg.problem.dim())
    throw std::invalid_argument("run: start point dimension mismatch");

  const auto t0 = std::chrono::steady_clock::now();
  RunResult out;
  OptimizerState state = init_state(cfg.optimizer, cfg.x1, cfg.problem.box());
  ProblemInstance::BaselineTracker baseline = cfg.problem.baseline_tracker();

  double cum = 0.0;
  double gmax = 0.0;
  for (int64_t t = 1; t <= cfg.steps; ++t) {
    const StepOutcome o = cfg.problem.eval(t, state.x);
    if (!std::isfinite(o.loss)) throw std::runtime_error("run: non-finite loss at step " + std::to_string(t));
    cum += o.loss;
    double gsq = 0.0;
    for (const double g : o.grad) gsq += g * g;
    gmax = std::max(gmax, std::sqrt(gsq));

    step(state, cfg.optimizer, o.grad, cfg.problem.box());
    baseline.observe(t);

    if (t % cfg.record_every == 0 || t == cfg.steps) {
      TraceRecord r;
      r.t = t;
      r.loss = o.loss;
      r.cum_loss = cum;
      r.regret = cum - baseline.best_fixed();
      r.avg_regret = r.regret / static_cast<double>(t);
      if (state.x.size() == 1) {
        r.x_norm = state.x[0];
      } else {
        double s = 0.0;
        for (const double xi : state.x) s += xi * xi;
        r.x_norm = std::sqrt(s);
      }
      const LrStats lr = lr_statistics(std::span<const double>(state.rate_predecay));
      r.lr_min = lr.min;
      r.lr_median = lr.median;
      r.lr_max = lr.max;
      r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      out.records.push_back(r);

      double inv = 0.0;
      for (const double rate : state.rate_predecay) inv += 1.0 / rate;
      out.rate_inv_sum.push_back(inv);
      out.grad_norm_max.push_back(gmax);
    }
  }
  out.final_state = std::move(state);
  if (!cfg.output_path.empty()) write_trace(out.records, cfg.output_path);
  return out;
}

double theorem4_bound(double d_inf, int64_t d, double beta1, double lambda, double l_inf,
                      double r_inf, double g2, int64_t steps, double eta_hat_inv_sum) {
  if (!(beta1 >= 0.0 && beta1 < 1.0))
    throw std::invalid_argument("theorem4_bound: beta1 must lie in [0, 1)");
  if (!(lambda >= 0.0 && lambda < 1.0))
    throw std::invalid_argument("theorem4_bound: lambda must lie in [0, 1)");
  if (!(d_inf > 0.0) || !std::isfinite(d_inf))
    throw std::invalid_argument("theorem4_bound: D_inf must be positive and finite");
  if (!(l_inf > 0.0)) throw std::invalid_argument("theorem4_bound: L_inf must be positive");
  if (!(r_inf > 0.0)) throw std::invalid_argument("theorem4_bound: R_inf must be positive");
  if (steps < 1) throw std::invalid_argument("theorem4_bound: steps must be >= 1");

  const double sqrt_t = std::sqrt(static_cast<double>(steps));
  const double first = d_inf * d_inf * sqrt_t / (2.0 * (1.0 - beta1)) * eta_hat_inv_sum;
  const double second = beta1 * static_cast<double>(d) * d_inf * d_inf /
                        (2.0 * (1.0 - beta1) * (1.0 - lambda) * (1.0 - lambda) * l_inf);
  const double third = (2.0 * sqrt_t - 1.0) * r_inf * g2 * g2 / (1.0 - beta1);
  return first + second + third;
}

const char kTraceHeader[] = "t,loss,cum_loss,regret,avg_regret,x_norm,lr_min,lr_median,lr_max";

std::string serialize_trace(std::span<const TraceRecord> records) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const TraceRecord& r : records) {
    out += std::to_string(r.t);
    for (const double v : {r.loss, r.cum_loss, r.regret, r.avg_regret, r.x_norm, r.lr_min,
                           r.lr_median, r.lr_max}) {
      out += ',';
      out += fmt17(v);
    }
    out += '\n';
  }
  return out;
}

void write_trace(std::span<const TraceRecord> records, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("write_trace: cannot open '" + path + "'");
  const std::string bytes = serialize_trace(records);
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write_trace: write failed for '" + path + "'");
}

std::vector<TraceRecord> read_trace(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("read_trace: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(f, line)) throw IoError(path + ":1: missing header");
  if (line != kTraceHeader)
    throw IoError(path + ":1: unexpected header '" + line + "'");

  std::vector<TraceRecord> records;
  size_t lineno = 1;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t start = 0;
    while (start <= line.size()) {
      const size_t comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? line.size() - start : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (fields.size() != 9)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 9 fields, got " +
                               std::to_string(fields.size()));
    TraceRecord r;
    try {
      size_t pos = 0;
      r.t = std::stoll(fields[0], &pos);
      if (pos != fields[0].size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": malformed step index '" +
                               fields[0] + "'");
    }
    r.loss = parse_field(fields[1], path, lineno);
    r.cum_loss = parse_field(fields[2], path, lineno);
    r.regret = parse_field(fields[3], path, lineno);
    r.avg_regret = parse_field(fields[4], path, lineno);
    r.x_norm = parse_field(fields[5], path, lineno);
    r.lr_min = parse_field(fields[6], path, lineno);
    r.lr_median = parse_field(fields[7], path, lineno);
    r.lr_max = parse_field(fields[8], path, lineno);
    records.push_back(r);
  }
  return records;
}

namespace {

std::string join17(std::span<const double> v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt17(v[i]);
  }
  return out;
}

std::vector<double> split17(const std::string& s, const std::string& path) {
  std::vector<double> out;
  if (s.empty()) return out;
  size_t start = 0;
  while (start <= s.size()) {
    const size_t comma = s.find(',', start);
    const std::string item = s.substr(start, comma == std::string::npos ? s.size() - start : comma - start);
    out.push_back(parse_field(item, path, 0));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

void write_checkpoint(const OptimizerState& state, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("write_checkpoint: cannot open '" + path + "'");
  f << "t=" << state.t << '\n'
    << "x=" << join17(state.x) << '\n'
    << "m=" << join17(state.m) << '\n'
    << "v=" << join17(state.v) << '\n'
    << "v_hat=" << join17(state.v_hat) << '\n'
    << "g_sum_sq=" << join17(state.g_sum_sq) << '\n';
  if (!f) throw IoError("write_checkpoint: write failed for '" + path + "'");
}

OptimizerState read_checkpoint(const std::string& path, const OptimizerConfig& cfg) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("read_checkpoint: cannot open '" + path + "'");
  OptimizerState s;
  std::string line;
  size_t lineno = 0;
  bool saw_t = false, saw_x = false;
  while (std::getline(f, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "t") {
      s.t = static_cast<int64_t>(parse_field(value, path, lineno));
      saw_t = true;
    } else if (key == "x") {
      s.x = split17(value, path);
      saw_x = true;
    } else if (key == "m") {
      s.m = split17(value, path);
    } else if (key == "v") {
      s.v = split17(value, path);
    } else if (key == "v_hat") {
      s.v_hat = split17(value, path);
    } else if (key == "g_sum_sq") {
      s.g_sum_sq = split17(value, path);
    } else {
      throw IoError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!saw_t || !saw_x) throw IoError(path + ": incomplete checkpoint (t and x required)");
  s.beta1_product = 1.0;
  if (cfg.uses_first_moment())
    for (int64_t i = 1; i <= s.t; ++i) s.beta1_product *= beta1_at(cfg, i);
  return s;
}

std::vector<SweepPoint> run_sweep(const ConfigMap& base, const std::string& out_dir) {
  const std::vector<SweepAxis> axes = parse_sweep_grid(base);
  int64_t total = 1;
  for (const SweepAxis& a : axes) total *= static_cast<int64_t>(a.values.size());

  bool seed_swept = false;
  for (const SweepAxis& a : axes) seed_swept |= a.key == "run.seed";
  const uint64_t base_seed = base.get_seed("run.seed");

  std::vector<SweepPoint> points(static_cast<size_t>(total));
  std::atomic<int64_t> next{0};
  const auto worker = [&] {
    for (int64_t idx = next.fetch_add(1); idx < total; idx = next.fetch_add(1)) {
      SweepPoint& p = points[static_cast<size_t>(idx)];
      p.index = idx;
      try {
        ConfigMap cfg = base;
        cfg.set("sweep.grid", "");
        // Decode idx into per-axis positions, last axis fastest.
        int64_t rem = idx;
        std::vector<size_t> pos(axes.size());
        for (size_t a = axes.size(); a-- > 0;) {
          pos[a] = static_cast<size_t>(rem % static_cast<int64_t>(axes[a].values.size()));
          rem /= static_cast<int64_t>(axes[a].values.size());
        }
        std::string desc;
        for (size_t a = 0; a < axes.size(); ++a) {
          cfg.set(axes[a].key, axes[a].values[pos[a]]);
          if (a) desc += ';';
          desc += axes[a].key + "=" + axes[a].values[pos[a]];
        }
        p.param_values = desc;
        if (!seed_swept)
          cfg.set("run.seed", std::to_string(derive_seed(base_seed, static_cast<uint64_t>(idx))));

        RunSetup setup = build_run_setup(cfg);
        RunConfig rc{std::move(setup.problem), setup.optimizer, std::move(setup.x1),
                     setup.steps,              setup.seed,      setup.record_every,
                     out_dir + "/run_" + cfg.hash_hex() + ".csv"};
        const RunResult res = run_experiment(rc);
        p.final_loss = res.records.back().loss;
        p.final_avg_regret = res.records.back().avg_regret;
        p.trace_path = rc.output_path;
      } catch (const std::exception& e) {
        p.final_loss = std::nan("");
        p.final_avg_regret = std::nan("");
        p.error = e.what();
      }
    }
  };

  const size_t max_threads = std::max<size_t>(1, std::thread::hardware_concurrency());
  const size_t n_threads = std::min<size_t>(max_threads, static_cast<size_t>(total));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  return points;
}

void write_sweep_summary(std::span<const SweepPoint> points, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("write_sweep_summary: cannot open '" + path + "'");
  f << "grid_point,param_values,final_loss,final_avg_regret,path\n";
  for (const SweepPoint& p : points) {
    // Keep the CSV parseable: the free-text fields must not carry commas.
    std::string values = p.param_values, where = p.trace_path;
    if (!p.error.empty()) {
      where = "error: " + p.error;
      std::replace(where.begin(), where.end(), ',', ';');
      std::replace(where.begin(), where.end(), '\n', ' ');
    }
    f << p.index << ',' << values << ',' << fmt17(p.final_loss) << ',' << fmt17(p.final_avg_regret)
      << ',' << where << '\n';
  }
  if (!f) throw IoError("write_sweep_summary: write failed for '" + path + "'");
}

}  // namespace boundopt
