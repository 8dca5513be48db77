#include "boundopt/boundopt.h"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "config.hpp"
#include "harness.hpp"
#include "problems.hpp"
#include "verify.hpp"

namespace {

thread_local std::string g_last_error = "no error";

bnd_status fail(bnd_status code, std::string msg) {
  g_last_error = std::move(msg);
  return code;
}

// Runs the body and translates exceptions into status codes.
template <typename F>
bnd_status guarded(F&& body) {
  try {
    return body();
  } catch (const boundopt::ConfigError& e) {
    return fail(BND_ERR_CONFIG, e.what());
  } catch (const boundopt::IoError& e) {
    return fail(BND_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BND_ERR_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(BND_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(BND_ERR_RUNTIME, "unknown error");
  }
}

bnd_status copy_out(const std::string& value, char* buf, size_t cap, const char* what) {
  if (buf == nullptr) return fail(BND_ERR_INVALID, std::string(what) + ": output buffer is null");
  if (cap < value.size() + 1)
    return fail(BND_ERR_INVALID, std::string(what) + ": buffer of " + std::to_string(cap) +
                                     " bytes cannot hold " + std::to_string(value.size() + 1));
  std::memcpy(buf, value.c_str(), value.size() + 1);
  return BND_OK;
}

}  // namespace

struct bnd_config {
  boundopt::ConfigMap map = boundopt::ConfigMap::defaults();
};

extern "C" {

const char* bnd_last_error(void) { return g_last_error.c_str(); }

const char* bnd_version(void) { return "boundopt 0.1.0"; }

bnd_config* bnd_config_create(void) {
  try {
    return new bnd_config();
  } catch (...) {
    g_last_error = "out of memory";
    return nullptr;
  }
}

void bnd_config_destroy(bnd_config* cfg) { delete cfg; }

bnd_status bnd_config_load_file(bnd_config* cfg, const char* path) {
  if (cfg == nullptr || path == nullptr)
    return fail(BND_ERR_INVALID, "bnd_config_load_file: null argument");
  return guarded([&] {
    cfg->map.apply_file(path);
    return BND_OK;
  });
}

bnd_status bnd_config_set(bnd_config* cfg, const char* key, const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr)
    return fail(BND_ERR_INVALID, "bnd_config_set: null argument");
  return guarded([&] {
    cfg->map.set(key, value);
    return BND_OK;
  });
}

bnd_status bnd_config_get(const bnd_config* cfg, const char* key, char* buf, size_t cap) {
  if (cfg == nullptr || key == nullptr) return fail(BND_ERR_INVALID, "bnd_config_get: null argument");
  return guarded([&] { return copy_out(cfg->map.get(key), buf, cap, "bnd_config_get"); });
}

bnd_status bnd_config_hash(const bnd_config* cfg, char* buf, size_t cap) {
  if (cfg == nullptr) return fail(BND_ERR_INVALID, "bnd_config_hash: null argument");
  return guarded([&] { return copy_out(cfg->map.hash_hex(), buf, cap, "bnd_config_hash"); });
}

bnd_status bnd_run(const bnd_config* cfg, const char* trace_path, bnd_run_stats* stats) {
  if (cfg == nullptr) return fail(BND_ERR_INVALID, "bnd_run: null config");
  return guarded([&] {
    boundopt::RunSetup setup = boundopt::build_run_setup(cfg->map);
    boundopt::RunConfig rc{std::move(setup.problem),
                           setup.optimizer,
                           std::move(setup.x1),
                           setup.steps,
                           setup.seed,
                           setup.record_every,
                           trace_path == nullptr ? std::string() : std::string(trace_path)};
    const boundopt::RunResult res = boundopt::run_experiment(rc);
    if (stats != nullptr) {
      const boundopt::TraceRecord& last = res.records.back();
      stats->steps = last.t;
      stats->final_loss = last.loss;
      stats->final_regret = last.regret;
      stats->final_avg_regret = last.avg_regret;
      stats->final_x_norm = last.x_norm;
    }
    return BND_OK;
  });
}

bnd_status bnd_sweep(const bnd_config* cfg, const char* out_dir, const char* summary_path) {
  if (cfg == nullptr || out_dir == nullptr || summary_path == nullptr)
    return fail(BND_ERR_INVALID, "bnd_sweep: null argument");
  return guarded([&] {
    const std::vector<boundopt::SweepPoint> points = boundopt::run_sweep(cfg->map, out_dir);
    boundopt::write_sweep_summary(points, summary_path);
    return BND_OK;
  });
}

bnd_status bnd_verify(const char* suite, bnd_check_cb cb, void* user, int64_t* failures) {
  return guarded([&] {
    const std::string name = suite == nullptr ? std::string() : std::string(suite);
    if (!name.empty()) {
      const auto& known = boundopt::verify_suite_names();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        std::string all;
        for (const std::string& s : known) all += (all.empty() ? "" : ", ") + s;
        throw boundopt::ConfigError("verify: unknown suite '" + name + "' (known: " + all + ")");
      }
    }
    const std::vector<boundopt::CheckResult> results =
        name.empty() ? boundopt::run_all_criteria() : boundopt::run_suite(name);
    int64_t failed = 0;
    for (const boundopt::CheckResult& r : results) {
      if (!r.passed) ++failed;
      if (cb != nullptr)
        cb(user, r.criterion, r.suite.c_str(), r.name.c_str(), r.passed ? 1 : 0, r.detail.c_str());
    }
    if (failures != nullptr) *failures = failed;
    return BND_OK;
  });
}

bnd_status bnd_derive_cycle(int theorem, double beta1, double beta2, int64_t* cycle) {
  if (cycle == nullptr) return fail(BND_ERR_INVALID, "bnd_derive_cycle: null output");
  return guarded([&] {
    if (theorem == 1) {
      *cycle = boundopt::derive_cycle_length_thm1(beta2);
    } else if (theorem == 2) {
      *cycle = boundopt::derive_cycle_length_thm2(beta1, beta2);
    } else {
      return fail(BND_ERR_INVALID,
                  "bnd_derive_cycle: theorem must be 1 or 2, got " + std::to_string(theorem));
    }
    return BND_OK;
  });
}

bnd_status bnd_export_lr(const char* trace_path, const char* out_path) {
  if (trace_path == nullptr || out_path == nullptr)
    return fail(BND_ERR_INVALID, "bnd_export_lr: null argument");
  return guarded([&] {
    const std::vector<boundopt::TraceRecord> records = boundopt::read_trace(trace_path);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw boundopt::IoError(std::string("export_lr: cannot open '") + out_path + "'");
    f << "t,lr_min,lr_median,lr_max\n";
    char line[128];
    for (const boundopt::TraceRecord& r : records) {
      std::snprintf(line, sizeof line, "%" PRId64 ",%.17g,%.17g,%.17g\n", r.t, r.lr_min, r.lr_median,
                    r.lr_max);
      f << line;
    }
    f.flush();
    if (!f) throw boundopt::IoError(std::string("export_lr: write failed for '") + out_path + "'");
    return BND_OK;
  });
}

}  // extern "C"
