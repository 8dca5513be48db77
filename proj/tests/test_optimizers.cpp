#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "geometry.hpp"
#include "optimizers.hpp"
#include "rng.hpp"
#include "schedules.hpp"

using namespace boundopt;

namespace {

OptimizerConfig base_cfg(Method m) {
  OptimizerConfig c;
  c.method = m;
  return c;
}

std::vector<double> grad_at(const CounterRng& rng, uint64_t t, size_t d, double lo, double hi) {
  std::vector<double> g(d);
  for (size_t i = 0; i < d; ++i) g[i] = rng.uniform(t, 100 + i, lo, hi);
  return g;
}

}  // namespace

TEST_CASE("init_state allocates only what the method uses") {
  const FeasibleBox box = FeasibleBox::unbounded(1);

  const OptimizerState adam = init_state(base_cfg(Method::kAdam), std::vector<double>{0.0}, box);
  CHECK(adam.t == 0);
  CHECK(adam.x == std::vector<double>{0.0});
  CHECK(adam.m == std::vector<double>{0.0});
  CHECK(adam.v == std::vector<double>{0.0});
  CHECK(adam.v_hat.empty());
  CHECK(adam.g_sum_sq.empty());

  const FeasibleBox box2 = FeasibleBox::unbounded(2);
  const OptimizerState amsb =
      init_state(base_cfg(Method::kAmsBound), std::vector<double>{1.0, 1.0}, box2);
  CHECK(amsb.v_hat == std::vector<double>({0.0, 0.0}));

  const OptimizerState sgd = init_state(base_cfg(Method::kSgd), std::vector<double>{0.5}, box);
  CHECK(sgd.x == std::vector<double>{0.5});
  CHECK(sgd.m.empty());
  CHECK(sgd.v.empty());

  const OptimizerState adagrad =
      init_state(base_cfg(Method::kAdaGrad), std::vector<double>{0.0}, box);
  CHECK(adagrad.g_sum_sq == std::vector<double>{0.0});
}

TEST_CASE("init_state rejects a start point outside the box") {
  const FeasibleBox box({-1.0}, {1.0});
  CHECK_THROWS_AS(init_state(base_cfg(Method::kSgd), std::vector<double>{1.5}, box),
                  std::invalid_argument);
  CHECK_THROWS_AS(init_state(base_cfg(Method::kSgd), std::vector<double>{0.0, 0.0}, box),
                  std::invalid_argument);
}

TEST_CASE("beta1_at schedules") {
  OptimizerConfig c = base_cfg(Method::kAdam);
  c.beta1 = 0.9;

  c.beta1_schedule = Beta1Schedule::kConstant;
  CHECK(beta1_at(c, 100) == 0.9);

  c.beta1_schedule = Beta1Schedule::kLambdaDecay;
  c.lambda = 0.5;
  CHECK(beta1_at(c, 3) == doctest::Approx(0.225).epsilon(1e-14));

  c.beta1_schedule = Beta1Schedule::kOneOverT;
  CHECK(beta1_at(c, 9) == doctest::Approx(0.1).epsilon(1e-14));

  CHECK_THROWS_AS(beta1_at(c, 0), std::invalid_argument);
}

TEST_CASE("first adam step with beta1 = 0 moves by alpha/sqrt(1-beta2)") {
  OptimizerConfig c = base_cfg(Method::kAdam);
  c.alpha = 0.001;
  c.beta1 = 0.0;
  c.beta2 = 0.999;
  c.epsilon = 0.0;
  c.step_scheme = StepScheme::kConstant;

  const FeasibleBox box = FeasibleBox::unbounded(1);
  OptimizerState s = init_state(c, std::vector<double>{0.0}, box);
  step(s, c, std::vector<double>{1.0}, box);

  CHECK(s.t == 1);
  CHECK(s.x[0] == doctest::Approx(-0.0316228).epsilon(1e-5));
  CHECK(s.x[0] == doctest::Approx(-0.001 / std::sqrt(1.0 - 0.999)).epsilon(1e-14));

  // A bound schedule whose band contains the raw rate changes nothing.
  OptimizerConfig cb = c;
  cb.method = Method::kAdaBound;
  cb.bound = BoundSchedule::appendix_general(0.1, 0.999);
  OptimizerState sb = init_state(cb, std::vector<double>{0.0}, box);
  step(sb, cb, std::vector<double>{1.0}, box);
  CHECK(sb.x[0] == s.x[0]);

  CHECK(learning_rates(sb, cb) == std::vector<double>{s.rate_effective[0]});
  CHECK(learning_rates(sb, cb)[0] == doctest::Approx(0.0316228).epsilon(1e-5));
}

TEST_CASE("amsgrad keeps the larger stored v_hat") {
  OptimizerConfig c = base_cfg(Method::kAmsGrad);
  c.beta2 = 0.9;
  const FeasibleBox box = FeasibleBox::unbounded(1);
  OptimizerState s = init_state(c, std::vector<double>{0.0}, box);
  s.v = {0.3};
  s.v_hat = {0.5};
  step(s, c, std::vector<double>{0.0}, box);
  CHECK(s.v_hat == std::vector<double>{0.5});
  CHECK(s.v[0] == doctest::Approx(0.3 * 0.9).epsilon(1e-14));
}

TEST_CASE("learning_rates reports the last step's effective rates") {
  OptimizerConfig c = base_cfg(Method::kSgd);
  c.alpha = 0.1;
  c.step_scheme = StepScheme::kConstant;
  const FeasibleBox box = FeasibleBox::unbounded(3);
  OptimizerState s = init_state(c, std::vector<double>(3, 0.0), box);

  CHECK_THROWS_AS(learning_rates(s, c), std::logic_error);  // nothing stepped yet

  step(s, c, std::vector<double>{1.0, -2.0, 0.5}, box);
  CHECK(learning_rates(s, c) == std::vector<double>(3, 0.1));

  // Decreasing scheme divides by sqrt(t).
  OptimizerConfig cd = c;
  cd.step_scheme = StepScheme::kDecreasing;
  OptimizerState sd = init_state(cd, std::vector<double>(3, 0.0), box);
  step(sd, cd, std::vector<double>{1.0, 1.0, 1.0}, box);
  step(sd, cd, std::vector<double>{1.0, 1.0, 1.0}, box);
  step(sd, cd, std::vector<double>{1.0, 1.0, 1.0}, box);
  step(sd, cd, std::vector<double>{1.0, 1.0, 1.0}, box);
  CHECK(learning_rates(sd, cd)[0] == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("sgdm accumulates without a (1-gamma) factor") {
  OptimizerConfig c = base_cfg(Method::kSgdm);
  c.momentum_gamma = 0.9;
  c.alpha = 0.0625;
  c.step_scheme = StepScheme::kConstant;
  const FeasibleBox box = FeasibleBox::unbounded(1);
  OptimizerState s = init_state(c, std::vector<double>{0.0}, box);
  step(s, c, std::vector<double>{1.0}, box);
  CHECK(s.m == std::vector<double>{1.0});
  step(s, c, std::vector<double>{1.0}, box);
  CHECK(s.m[0] == doctest::Approx(1.9).epsilon(1e-14));
  CHECK(s.x[0] == doctest::Approx(-0.0625 * (1.0 + 1.9)).epsilon(1e-14));
}

TEST_CASE("adagrad divides by the time-normalized accumulator") {
  OptimizerConfig c = base_cfg(Method::kAdaGrad);
  c.alpha = 1.0;
  c.epsilon = 0.0;
  c.step_scheme = StepScheme::kConstant;
  const FeasibleBox box = FeasibleBox::unbounded(1);
  OptimizerState s = init_state(c, std::vector<double>{0.0}, box);
  step(s, c, std::vector<double>{3.0}, box);
  // sum g^2 = 9, t = 1: rate 1/3, step 1.
  CHECK(s.g_sum_sq == std::vector<double>{9.0});
  CHECK(s.x[0] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("bias correction makes the first adam step a unit-direction step") {
  OptimizerConfig c = base_cfg(Method::kAdam);
  c.alpha = 0.01;
  c.beta1 = 0.9;
  c.beta2 = 0.999;
  c.epsilon = 0.0;
  c.bias_correction = true;
  c.step_scheme = StepScheme::kConstant;
  const FeasibleBox box = FeasibleBox::unbounded(1);
  OptimizerState s = init_state(c, std::vector<double>{0.0}, box);
  step(s, c, std::vector<double>{2.5}, box);
  // m-hat = g, v-hat = g^2 exactly at t = 1, so the move is alpha * sign(g).
  CHECK(s.x[0] == doctest::Approx(-0.01).epsilon(1e-12));
}

TEST_CASE("rmsprop matches adam with beta1 = 0 bit for bit") {
  OptimizerConfig cr = base_cfg(Method::kRmsProp);
  cr.alpha = 0.01;
  cr.beta2 = 0.99;
  OptimizerConfig ca = base_cfg(Method::kAdam);
  ca.alpha = 0.01;
  ca.beta1 = 0.0;
  ca.beta2 = 0.99;

  const FeasibleBox box = FeasibleBox::unbounded(2);
  OptimizerState sr = init_state(cr, std::vector<double>(2, 0.3), box);
  OptimizerState sa = init_state(ca, std::vector<double>(2, 0.3), box);
  const CounterRng rng(0x77);
  for (uint64_t t = 1; t <= 50; ++t) {
    const std::vector<double> g = grad_at(rng, t, 2, -2.0, 2.0);
    step(sr, cr, g, box);
    step(sa, ca, g, box);
    CHECK(sr.x == sa.x);
  }
}

TEST_CASE("every method stays inside the box") {
  const FeasibleBox box({-0.5, 0.0}, {0.5, 1.0});
  const CounterRng rng(0xFEA5);
  for (Method m : {Method::kSgd, Method::kSgdm, Method::kAdaGrad, Method::kRmsProp, Method::kAdam,
                   Method::kAmsGrad, Method::kAdaBound, Method::kAmsBound}) {
    OptimizerConfig c = base_cfg(m);
    c.alpha = 0.5;  // big enough to slam into the walls
    OptimizerState s = init_state(c, std::vector<double>{0.0, 0.5}, box);
    for (uint64_t t = 1; t <= 40; ++t) {
      step(s, c, grad_at(rng, t, 2, -3.0, 3.0), box);
      CHECK(box.contains(s.x));
    }
  }
}

TEST_CASE("bounded methods keep pre-decay rates inside the band") {
  OptimizerConfig c = base_cfg(Method::kAdaBound);
  c.bound = BoundSchedule::appendix_general(0.1, 0.99);
  c.step_scheme = StepScheme::kDecreasing;
  const FeasibleBox box = FeasibleBox::unbounded(3);
  OptimizerState s = init_state(c, std::vector<double>(3, 0.0), box);
  const CounterRng rng(0xC0);
  for (uint64_t t = 1; t <= 200; ++t) {
    step(s, c, grad_at(rng, t, 3, -1.0, 1.0), box);
    const double lo = c.bound.eta_lower(static_cast<int64_t>(t));
    const double hi = c.bound.eta_upper(static_cast<int64_t>(t));
    for (double r : s.rate_predecay) {
      CHECK(r >= lo);
      CHECK(r <= hi);
    }
  }
}

TEST_CASE("amsgrad rates never increase under a constant scheme") {
  OptimizerConfig c = base_cfg(Method::kAmsGrad);
  c.step_scheme = StepScheme::kConstant;
  const FeasibleBox box = FeasibleBox::unbounded(2);
  OptimizerState s = init_state(c, std::vector<double>(2, 0.0), box);
  const CounterRng rng(0xA5);
  std::vector<double> prev_vhat(2, 0.0), prev_rate(2, std::numeric_limits<double>::infinity());
  for (uint64_t t = 1; t <= 100; ++t) {
    step(s, c, grad_at(rng, t, 2, -2.0, 2.0), box);
    for (size_t i = 0; i < 2; ++i) {
      CHECK(s.v_hat[i] >= prev_vhat[i]);
      CHECK(s.rate_predecay[i] <= prev_rate[i]);
      prev_vhat[i] = s.v_hat[i];
      prev_rate[i] = s.rate_predecay[i];
    }
  }
}

TEST_CASE("zero second moment resolves through the clip, not a NaN") {
  // First gradient 0 leaves v = 0; the raw rate is +inf and must come back
  // as the band's upper edge.
  OptimizerConfig c = base_cfg(Method::kAdaBound);
  c.bound = BoundSchedule::appendix_general(0.1, 0.999);
  const FeasibleBox box = FeasibleBox::unbounded(1);
  OptimizerState s = init_state(c, std::vector<double>{0.0}, box);
  step(s, c, std::vector<double>{0.0}, box);
  CHECK(s.rate_predecay[0] == c.bound.eta_upper(1));
  CHECK(std::isfinite(s.x[0]));
  CHECK(s.x[0] == 0.0);
}

TEST_CASE("step input validation") {
  OptimizerConfig c = base_cfg(Method::kAdam);
  const FeasibleBox box = FeasibleBox::unbounded(2);
  OptimizerState s = init_state(c, std::vector<double>(2, 0.0), box);
  CHECK_THROWS_AS(step(s, c, std::vector<double>{1.0}, box), std::invalid_argument);
  CHECK_THROWS_AS(step(s, c, std::vector<double>{1.0, std::nan("")}, box), std::invalid_argument);
  CHECK_THROWS_AS(
      step(s, c, std::vector<double>{1.0, std::numeric_limits<double>::infinity()}, box),
      std::invalid_argument);
  CHECK_THROWS_AS(step(s, c, std::vector<double>(2, 0.0), FeasibleBox::unbounded(3)),
                  std::invalid_argument);
}

TEST_CASE("epsilon defaults per method") {
  CHECK(base_cfg(Method::kAdam).effective_epsilon() == 1e-8);
  CHECK(base_cfg(Method::kAmsGrad).effective_epsilon() == 1e-8);
  CHECK(base_cfg(Method::kRmsProp).effective_epsilon() == 1e-8);
  CHECK(base_cfg(Method::kAdaGrad).effective_epsilon() == 1e-8);
  CHECK(base_cfg(Method::kSgd).effective_epsilon() == 0.0);
  CHECK(base_cfg(Method::kSgdm).effective_epsilon() == 0.0);

  OptimizerConfig ab = base_cfg(Method::kAdaBound);
  CHECK(ab.effective_epsilon() == 0.0);  // the clip regularizes
  ab.bound = BoundSchedule::adam_unbounded();
  CHECK(ab.effective_epsilon() == 1e-8);  // no clip to lean on
  ab.epsilon = 0.125;
  CHECK(ab.effective_epsilon() == 0.125);
}

TEST_CASE("validate rejects out-of-range hyperparameters") {
  OptimizerConfig c = base_cfg(Method::kAdam);
  c.alpha = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = base_cfg(Method::kAdam);
  c.beta1 = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = base_cfg(Method::kAdam);
  c.beta2 = -0.1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = base_cfg(Method::kAdam);
  c.beta1_schedule = Beta1Schedule::kLambdaDecay;
  c.lambda = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = base_cfg(Method::kAdam);
  c.epsilon = -1e-9;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = base_cfg(Method::kSgdm);
  c.momentum_gamma = 1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  CHECK_NOTHROW(base_cfg(Method::kAdaBound).validate());
}

TEST_CASE("hyperparameter_warning flags beta1 >= sqrt(beta2) on bounded methods") {
  OptimizerConfig c = base_cfg(Method::kAdaBound);
  CHECK(c.hyperparameter_warning().empty());
  c.beta1 = 0.999;
  c.beta2 = 0.9;
  CHECK_FALSE(c.hyperparameter_warning().empty());
  c.method = Method::kAdam;  // advisory only applies to the bounded methods
  CHECK(c.hyperparameter_warning().empty());
}

TEST_CASE("enum names round-trip") {
  for (Method m : {Method::kSgd, Method::kSgdm, Method::kAdaGrad, Method::kRmsProp, Method::kAdam,
                   Method::kAmsGrad, Method::kAdaBound, Method::kAmsBound}) {
    CHECK(method_from_name(method_name(m)) == m);
  }
  CHECK_THROWS_AS(method_from_name("adamw"), std::invalid_argument);

  for (Beta1Schedule s :
       {Beta1Schedule::kConstant, Beta1Schedule::kLambdaDecay, Beta1Schedule::kOneOverT}) {
    CHECK(beta1_schedule_from_name(beta1_schedule_name(s)) == s);
  }
  CHECK_THROWS_AS(beta1_schedule_from_name("cosine"), std::invalid_argument);

  for (StepScheme s : {StepScheme::kDecreasing, StepScheme::kConstant}) {
    CHECK(step_scheme_from_name(step_scheme_name(s)) == s);
  }
  CHECK_THROWS_AS(step_scheme_from_name("warmup"), std::invalid_argument);
}
