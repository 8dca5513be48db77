#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "boundopt/boundopt.h"

namespace {

struct ConfigFlags {
  std::string config_path;
  std::vector<std::string> sets;
  int64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& cf) {
  cmd->add_option("--config", cf.config_path, "Config file (dotted key = value lines)")
      ->type_name("PATH");
  cmd->add_option("--set", cf.sets, "Override a config key (repeatable)")->type_name("KEY=VALUE");
  cf.seed_opt = cmd->add_option("--seed", cf.seed, "Override run.seed");
}

int status_exit(bnd_status st) {
  if (st == BND_OK) return 0;
  std::fprintf(stderr, "boundopt: %s\n", bnd_last_error());
  return st == BND_ERR_CONFIG ? 2 : 1;
}

using ConfigPtr = std::unique_ptr<bnd_config, decltype(&bnd_config_destroy)>;

// Builds the config with precedence defaults < file < --set < --seed.
// On failure prints the error and stores the exit code in rc.
ConfigPtr make_config(const ConfigFlags& cf, int& rc) {
  ConfigPtr cfg(bnd_config_create(), &bnd_config_destroy);
  if (!cfg) {
    std::fprintf(stderr, "boundopt: %s\n", bnd_last_error());
    rc = 1;
    return ConfigPtr(nullptr, &bnd_config_destroy);
  }
  rc = 0;
  if (!cf.config_path.empty()) {
    if (bnd_status st = bnd_config_load_file(cfg.get(), cf.config_path.c_str()); st != BND_OK) {
      rc = status_exit(st);
      return ConfigPtr(nullptr, &bnd_config_destroy);
    }
  }
  for (const std::string& kv : cf.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "boundopt: --set expects key=value, got '%s'\n", kv.c_str());
      rc = 2;
      return ConfigPtr(nullptr, &bnd_config_destroy);
    }
    if (bnd_status st = bnd_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        st != BND_OK) {
      rc = status_exit(st);
      return ConfigPtr(nullptr, &bnd_config_destroy);
    }
  }
  if (cf.seed_opt != nullptr && cf.seed_opt->count() > 0) {
    if (bnd_status st = bnd_config_set(cfg.get(), "run.seed", std::to_string(cf.seed).c_str());
        st != BND_OK) {
      rc = status_exit(st);
      return ConfigPtr(nullptr, &bnd_config_destroy);
    }
  }
  return cfg;
}

// <out>/<subcommand>_<confighash>.csv
std::string output_path(const bnd_config* cfg, const std::string& out_dir, const char* subcommand,
                        int& rc) {
  char hash[17];
  if (bnd_status st = bnd_config_hash(cfg, hash, sizeof hash); st != BND_OK) {
    rc = status_exit(st);
    return {};
  }
  rc = 0;
  return out_dir + "/" + subcommand + "_" + hash + ".csv";
}

bool ensure_dir(const std::string& dir, int& rc) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    std::fprintf(stderr, "boundopt: cannot create output directory '%s': %s\n", dir.c_str(),
                 ec.message().c_str());
    rc = 1;
    return false;
  }
  return true;
}

int cmd_run(const ConfigFlags& cf, const std::string& out_dir) {
  int rc = 0;
  const ConfigPtr cfg = make_config(cf, rc);
  if (!cfg) return rc;
  if (!ensure_dir(out_dir, rc)) return rc;
  const std::string path = output_path(cfg.get(), out_dir, "run", rc);
  if (rc != 0) return rc;
  bnd_run_stats stats{};
  if (bnd_status st = bnd_run(cfg.get(), path.c_str(), &stats); st != BND_OK) return status_exit(st);
  std::printf("trace %s\n", path.c_str());
  std::printf("final t=%" PRId64 " loss=%.6g regret=%.6g avg_regret=%.6g x_norm=%.6g\n", stats.steps,
              stats.final_loss, stats.final_regret, stats.final_avg_regret, stats.final_x_norm);
  return 0;
}

int cmd_sweep(const ConfigFlags& cf, const std::string& out_dir) {
  int rc = 0;
  const ConfigPtr cfg = make_config(cf, rc);
  if (!cfg) return rc;
  if (!ensure_dir(out_dir, rc)) return rc;
  const std::string path = output_path(cfg.get(), out_dir, "sweep", rc);
  if (rc != 0) return rc;
  if (bnd_status st = bnd_sweep(cfg.get(), out_dir.c_str(), path.c_str()); st != BND_OK)
    return status_exit(st);
  std::printf("summary %s\n", path.c_str());
  return 0;
}

struct VerifyAggregate {
  std::vector<std::string> order;
  std::map<std::string, std::pair<int, int>> counts;  // suite -> {passed, total}
};

void on_check(void* user, int criterion, const char* suite, const char* name, int passed,
              const char* detail) {
  auto* agg = static_cast<VerifyAggregate*>(user);
  auto [it, fresh] = agg->counts.try_emplace(suite, std::pair<int, int>{0, 0});
  if (fresh) agg->order.push_back(suite);
  ++it->second.second;
  if (passed != 0) {
    ++it->second.first;
  } else {
    std::printf("  FAIL criterion %d %s/%s: %s\n", criterion, suite, name, detail);
  }
}

int cmd_verify(const std::string& suite) {
  VerifyAggregate agg;
  int64_t failures = 0;
  const bnd_status st =
      bnd_verify(suite.empty() ? nullptr : suite.c_str(), &on_check, &agg, &failures);
  if (st != BND_OK) return status_exit(st);
  for (const std::string& s : agg.order) {
    const auto& [passed, total] = agg.counts[s];
    std::printf("suite %s: %s (%d/%d checks)\n", s.c_str(), passed == total ? "PASS" : "FAIL", passed,
                total);
  }
  std::printf("verify: %s\n", failures == 0 ? "PASS" : "FAIL");
  return failures == 0 ? 0 : 1;
}

int cmd_derive(int theorem, double beta1, double beta2) {
  int64_t cycle = 0;
  if (bnd_status st = bnd_derive_cycle(theorem, beta1, beta2, &cycle); st != BND_OK)
    return status_exit(st);
  std::printf("%" PRId64 "\n", cycle);
  return 0;
}

int cmd_export_lr(const ConfigFlags& cf, const std::string& out_dir, const std::string& trace) {
  int rc = 0;
  const ConfigPtr cfg = make_config(cf, rc);
  if (!cfg) return rc;
  if (!ensure_dir(out_dir, rc)) return rc;
  const std::string path = output_path(cfg.get(), out_dir, "export-lr", rc);
  if (rc != 0) return rc;
  if (bnd_status st = bnd_export_lr(trace.c_str(), path.c_str()); st != BND_OK)
    return status_exit(st);
  std::printf("exported %s\n", path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bound-clipped adaptive optimization experiments"};
  app.require_subcommand(1);

  ConfigFlags run_cf, sweep_cf, export_cf;
  std::string run_out = ".", sweep_out = ".", export_out = ".";
  std::string suite, trace;
  int theorem = 1;
  double beta1 = 0.9, beta2 = 0.999;

  CLI::App* run = app.add_subcommand("run", "Run one experiment and write its trace CSV");
  add_config_flags(run, run_cf);
  run->add_option("--out", run_out, "Output directory")->type_name("DIR");

  CLI::App* sweep = app.add_subcommand("sweep", "Run the config's sweep.grid and summarize");
  add_config_flags(sweep, sweep_cf);
  sweep->add_option("--out", sweep_out, "Output directory")->type_name("DIR");

  CLI::App* verify = app.add_subcommand("verify", "Run the built-in acceptance suites");
  verify->add_option("--suite", suite, "Run a single suite by name");

  CLI::App* derive = app.add_subcommand("derive-c", "Print the smallest adversarial cycle length");
  derive->add_option("--theorem", theorem, "Adversary family (1 or 2)")
      ->check(CLI::Range(1, 2))
      ->required();
  derive->add_option("--beta1", beta1, "First-moment decay (theorem 2 only)");
  derive->add_option("--beta2", beta2, "Second-moment decay");

  CLI::App* export_lr = app.add_subcommand("export-lr", "Re-emit learning-rate columns of a trace");
  export_lr->add_option("--trace", trace, "Stored trace CSV")->type_name("PATH")->required();
  add_config_flags(export_lr, export_cf);
  export_lr->add_option("--out", export_out, "Output directory")->type_name("DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (run->parsed()) return cmd_run(run_cf, run_out);
  if (sweep->parsed()) return cmd_sweep(sweep_cf, sweep_out);
  if (verify->parsed()) return cmd_verify(suite);
  if (derive->parsed()) return cmd_derive(theorem, beta1, beta2);
  if (export_lr->parsed()) return cmd_export_lr(export_cf, export_out, trace);
  return 2;
}
