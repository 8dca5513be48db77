#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "config.hpp"
#include "optimizers.hpp"
#include "problems.hpp"
#include "schedules.hpp"

using namespace boundopt;
namespace fs = std::filesystem;

namespace {

// Self-removing temp file carrying config text.
struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& text) {
    path = fs::temp_directory_path() /
           ("boundopt_cfg_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<uintptr_t>(this)) + ".cfg");
    std::ofstream(path) << text;
  }
  ~TempFile() { std::error_code ec; fs::remove(path, ec); }
};

}  // namespace

TEST_CASE("defaults define the schema") {
  const ConfigMap c = ConfigMap::defaults();
  CHECK(c.get("optimizer.method") == "adabound");
  CHECK(c.get_double("optimizer.alpha") == 0.001);
  CHECK(c.get_double("optimizer.beta1") == 0.9);
  CHECK(c.get_double("optimizer.beta2") == 0.999);
  CHECK(c.get("bound.form") == "paper_default");
  CHECK(c.get_double("bound.alpha_star") == 0.1);
  CHECK(c.get_int("run.steps") == 1000);
  CHECK(c.get_seed("run.seed") == 42);
  CHECK_FALSE(c.get_bool("optimizer.bias_correction"));
}

TEST_CASE("precedence is defaults, then file, then overrides") {
  const TempFile file(
      "optimizer.alpha = 0.5\n"
      "run.steps = 77\n");
  ConfigMap c = ConfigMap::defaults();
  c.apply_file(file.path.string());
  CHECK(c.get_double("optimizer.alpha") == 0.5);
  CHECK(c.get_int("run.steps") == 77);
  CHECK(c.get_double("optimizer.beta1") == 0.9);  // untouched default

  c.apply_override("optimizer.alpha=0.7");
  CHECK(c.get_double("optimizer.alpha") == 0.7);  // override wins over the file
  CHECK(c.get_int("run.steps") == 77);            // file value survives
}

TEST_CASE("file parsing allows comments, blanks and spaces") {
  const TempFile file(
      "# a comment line\n"
      "\n"
      "  optimizer.alpha =   0.25   # trailing comment\n"
      "run.steps=5\n");
  ConfigMap c = ConfigMap::defaults();
  c.apply_file(file.path.string());
  CHECK(c.get_double("optimizer.alpha") == 0.25);
  CHECK(c.get_int("run.steps") == 5);
}

TEST_CASE("unknown keys are errors, not warnings") {
  ConfigMap c = ConfigMap::defaults();
  CHECK_THROWS_AS(c.set("optimizer.learning_rate", "1"), ConfigError);
  CHECK_THROWS_AS(c.apply_override("no.such.key=1"), ConfigError);
  CHECK_THROWS_AS(c.get("no.such.key"), ConfigError);

  const TempFile file("walrus = 9\n");
  CHECK_THROWS_AS(c.apply_file(file.path.string()), ConfigError);
}

TEST_CASE("file errors carry the origin and line") {
  ConfigMap c = ConfigMap::defaults();
  CHECK_THROWS_AS(c.apply_file("/no/such/dir/missing.cfg"), ConfigError);

  const TempFile file("optimizer.alpha = 1\nthis line has no equals\n");
  try {
    c.apply_file(file.path.string());
    FAIL("expected a parse error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find(":2") != std::string::npos);
  }
}

TEST_CASE("malformed overrides are rejected") {
  ConfigMap c = ConfigMap::defaults();
  CHECK_THROWS_AS(c.apply_override("optimizer.alpha"), ConfigError);
}

TEST_CASE("typed getters validate their input") {
  ConfigMap c = ConfigMap::defaults();
  c.set("optimizer.alpha", "not-a-number");
  CHECK_THROWS_AS(c.get_double("optimizer.alpha"), ConfigError);
  c.set("run.steps", "12.5");
  CHECK_THROWS_AS(c.get_int("run.steps"), ConfigError);
  c.set("run.seed", "-4");
  CHECK_THROWS_AS(c.get_seed("run.seed"), ConfigError);
  c.set("optimizer.bias_correction", "yes");
  CHECK_THROWS_AS(c.get_bool("optimizer.bias_correction"), ConfigError);
  c.set("optimizer.alpha", "2.5e-4");  // scientific notation is fine
  CHECK(c.get_double("optimizer.alpha") == 2.5e-4);
}

TEST_CASE("broadcast lists") {
  ConfigMap c = ConfigMap::defaults();
  c.set("run.x1", "0.5");
  CHECK(c.get_broadcast("run.x1", 3) == std::vector<double>(3, 0.5));
  c.set("run.x1", "1, 2, 3");
  CHECK(c.get_broadcast("run.x1", 3) == std::vector<double>({1.0, 2.0, 3.0}));
  CHECK_THROWS_AS(c.get_broadcast("run.x1", 2), ConfigError);
  c.set("run.x1", "1,,3");
  CHECK_THROWS_AS(c.get_broadcast("run.x1", 3), ConfigError);
}

TEST_CASE("canonical text and hash are stable identifiers") {
  const ConfigMap a = ConfigMap::defaults();
  ConfigMap b = ConfigMap::defaults();
  CHECK(a.canonical_text() == b.canonical_text());
  CHECK(a.hash() == b.hash());
  CHECK(a.hash_hex().size() == 16);
  for (char ch : a.hash_hex()) CHECK(std::string("0123456789abcdef").find(ch) != std::string::npos);

  b.set("run.steps", "1001");
  CHECK(a.hash() != b.hash());

  // Sorted key order, independent of mutation order.
  ConfigMap c1 = ConfigMap::defaults(), c2 = ConfigMap::defaults();
  c1.set("run.steps", "7");
  c1.set("optimizer.alpha", "0.2");
  c2.set("optimizer.alpha", "0.2");
  c2.set("run.steps", "7");
  CHECK(c1.canonical_text() == c2.canonical_text());
}

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xCBF29CE484222325ull);
  CHECK(fnv1a64("a") == 0xAF63DC4C8601EC8Cull);
  CHECK(fnv1a64("foobar") == 0x85944171F73967E8ull);
}

TEST_CASE("build_bound honors 'auto' beta") {
  ConfigMap c = ConfigMap::defaults();
  const BoundSchedule b1 = build_bound(c, 0.99);
  CHECK(b1.form() == BoundForm::kPaperDefault);
  CHECK(b1.beta() == 0.99);  // picked up from the optimizer

  c.set("bound.beta", "0.5");
  CHECK(build_bound(c, 0.99).beta() == 0.5);

  c.set("bound.form", "adam_unbounded");
  CHECK(build_bound(c, 0.99).form() == BoundForm::kAdamUnbounded);

  c.set("bound.form", "sinusoid");
  CHECK_THROWS_AS(build_bound(c, 0.99), ConfigError);
}

TEST_CASE("build_optimizer maps keys onto the config struct") {
  ConfigMap c = ConfigMap::defaults();
  OptimizerConfig oc = build_optimizer(c);
  CHECK(oc.method == Method::kAdaBound);
  CHECK(oc.alpha == 0.001);
  CHECK(oc.epsilon == kEpsilonAuto);
  CHECK(oc.step_scheme == StepScheme::kConstant);

  c.set("optimizer.method", "amsgrad");
  c.set("optimizer.epsilon", "1e-6");
  c.set("optimizer.step_scheme", "decreasing");
  oc = build_optimizer(c);
  CHECK(oc.method == Method::kAmsGrad);
  CHECK(oc.epsilon == 1e-6);
  CHECK(oc.step_scheme == StepScheme::kDecreasing);

  c.set("optimizer.method", "newton");
  CHECK_THROWS_AS(build_optimizer(c), ConfigError);
  c.set("optimizer.method", "adam");
  c.set("optimizer.alpha", "-1");
  CHECK_THROWS_AS(build_optimizer(c), ConfigError);  // validation failures surface as config errors
}

TEST_CASE("build_problem derives or accepts the cycle length") {
  ConfigMap c = ConfigMap::defaults();
  c.set("problem.kind", "thm1_adversary");
  c.set("optimizer.beta2", "0.99");
  CHECK(build_problem(c).cycle() == 730);  // problem.cycle = derive

  c.set("problem.cycle", "12");
  CHECK(build_problem(c).cycle() == 12);

  c.set("problem.kind", "thm2_adversary");
  c.set("problem.cycle", "derive");
  c.set("optimizer.beta1", "0");
  c.set("optimizer.beta2", "0.5");
  CHECK(build_problem(c).cycle() == 20);
}

TEST_CASE("build_problem shapes the smooth kinds from dim and box") {
  ConfigMap c = ConfigMap::defaults();
  c.set("problem.kind", "linear_random");
  c.set("problem.dim", "4");
  c.set("problem.box.lo", "-1");
  c.set("problem.box.hi", "1");
  const ProblemInstance p = build_problem(c);
  CHECK(p.kind() == ProblemKind::kLinearRandom);
  CHECK(p.dim() == 4);
  CHECK(p.box().lo(3) == -1.0);

  c.set("problem.dim", "0");
  CHECK_THROWS_AS(build_problem(c), ConfigError);
  c.set("problem.dim", "2");
  c.set("problem.box.lo", "2");  // lo above hi
  CHECK_THROWS_AS(build_problem(c), ConfigError);
}

TEST_CASE("build_run_setup validates run geometry") {
  ConfigMap c = ConfigMap::defaults();
  c.set("run.steps", "0");
  CHECK_THROWS_AS(build_run_setup(c), ConfigError);
  c.set("run.steps", "10");
  c.set("run.record_every", "0");
  CHECK_THROWS_AS(build_run_setup(c), ConfigError);
  c.set("run.record_every", "2");
  c.set("run.x1", "99");  // outside the default [-5, 5] box
  CHECK_THROWS_AS(build_run_setup(c), ConfigError);
  c.set("run.x1", "0");
  const RunSetup s = build_run_setup(c);
  CHECK(s.steps == 10);
  CHECK(s.record_every == 2);
  CHECK(s.x1 == std::vector<double>(2, 0.0));  // broadcast to problem.dim
}

TEST_CASE("sweep grid parsing") {
  ConfigMap c = ConfigMap::defaults();
  c.set("sweep.grid", "optimizer.alpha=0.1,0.01|run.steps=10,20,30");
  const std::vector<SweepAxis> axes = parse_sweep_grid(c);
  REQUIRE(axes.size() == 2);
  CHECK(axes[0].key == "optimizer.alpha");
  CHECK(axes[0].values == std::vector<std::string>({"0.1", "0.01"}));
  CHECK(axes[1].values.size() == 3);

  c.set("sweep.grid", "");
  CHECK_THROWS_AS(parse_sweep_grid(c), ConfigError);
  c.set("sweep.grid", "bogus.key=1,2");
  CHECK_THROWS_AS(parse_sweep_grid(c), ConfigError);
  c.set("sweep.grid", "optimizer.alpha");
  CHECK_THROWS_AS(parse_sweep_grid(c), ConfigError);
  c.set("sweep.grid", "optimizer.alpha=1,,2");
  CHECK_THROWS_AS(parse_sweep_grid(c), ConfigError);
}
