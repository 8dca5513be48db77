#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "optimizers.hpp"
#include "problems.hpp"

namespace boundopt {

// Anything wrong with configuration input: unknown key, unparseable value,
// missing file, invalid combination. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat dotted-key configuration. Precedence is defaults < file < overrides,
// realized by apply order; the key set is closed (the defaults define the
// schema, unknown keys are rejected).
class ConfigMap {
 public:
  static ConfigMap defaults();

  // "key = value" lines, blank lines and '#' comments allowed.
  void apply_file(const std::string& path);
  void apply_text(std::string_view text, const std::string& origin);
  void apply_override(std::string_view assignment);  // "key=value"

  void set(const std::string& key, std::string value);
  const std::string& get(const std::string& key) const;

  double get_double(const std::string& key) const;
  int64_t get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  uint64_t get_seed(const std::string& key) const;
  // Comma-separated doubles; a single value broadcasts to dim entries.
  std::vector<double> get_broadcast(const std::string& key, size_t dim) const;

  // Sorted "key = value" lines; the canonical form hashes and filenames use.
  std::string canonical_text() const;
  uint64_t hash() const;        // FNV-1a 64 of canonical_text()
  std::string hash_hex() const; // 16 lowercase hex digits

  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

uint64_t fnv1a64(std::string_view bytes);

// Materialized experiment pieces. Builders throw ConfigError naming the
// offending key.
BoundSchedule build_bound(const ConfigMap& cfg, double optimizer_beta2);
OptimizerConfig build_optimizer(const ConfigMap& cfg);
ProblemInstance build_problem(const ConfigMap& cfg);

struct RunSetup {
  ProblemInstance problem;
  OptimizerConfig optimizer;
  std::vector<double> x1;
  int64_t steps;
  uint64_t seed;
  int64_t record_every;
};
RunSetup build_run_setup(const ConfigMap& cfg);

// One sweep axis: a key and the values it takes.
struct SweepAxis {
  std::string key;
  std::vector<std::string> values;
};
// Parse the sweep.grid syntax "key=v1,v2|key2=v3,v4" (must be non-empty).
std::vector<SweepAxis> parse_sweep_grid(const ConfigMap& cfg);

}  // namespace boundopt
