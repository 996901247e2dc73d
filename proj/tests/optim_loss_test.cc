// Copyright 2026 The TLA-Net Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <vector>

#include <doctest.h>

#include "tla/errors.h"
#include "tla/gradcheck.h"
#include "tla/losses.h"
#include "tla/ops.h"
#include "tla/optim.h"
#include "test_util.h"

namespace tla {
namespace {

using testing::random_tensor;

TEST_CASE("cce hand values") {
  Tape tape;
  CHECK(cce(tape, Tensor::vector({0.0, 1.0, 0.0}), 1).item() == 0.0);
  CHECK(cce(tape, Tensor::vector({1.0 / 3, 1.0 / 3, 1.0 / 3}), 2).item() ==
        doctest::Approx(1.0986122886681098).epsilon(1e-12));
  // Clipped at the 1e-12 floor.
  CHECK(cce(tape, Tensor::vector({1.0, 0.0, 0.0}), 1).item() ==
        doctest::Approx(27.631021115928547).epsilon(1e-12));
  CHECK_THROWS_AS(cce(tape, Tensor::vector({0.5, 0.5}), 2), DomainError);
}

TEST_CASE("cce is non-negative and zero gradient in the clipped region") {
  Tape tape;
  Tensor p = Tensor::vector({1.0, 0.0}, true);
  Tensor loss = cce(tape, p, 1);
  tape.backward(loss);
  CHECK(p.grad()[0] == 0.0);
  CHECK(p.grad()[1] == 0.0);
  Rng rng(3);
  for (int i = 0; i < 100; ++i) {
    Tape t(Tape::Mode::kInference);
    Tensor probs = softmax(t, random_tensor({4}, rng, -5, 5, false));
    CHECK(cce(t, probs, rng.below(4)).item() >= 0.0);
  }
}

TEST_CASE("r_loss worked example and identity") {
  Tape tape;
  Tensor in = Tensor::matrix(2, 2, {1, 2, 3, 0});
  Tensor zeros = Tensor::matrix(2, 2, {0, 0, 0, 0});
  CHECK(std::fabs(r_loss(tape, in, zeros).item() - 14.0) <= 1e-12);
  CHECK(std::fabs(r_loss(tape, in, in).item()) <= 1e-12);
  CHECK(r_loss(tape, in, zeros).item() == r_loss(tape, zeros, in).item());
  CHECK_THROWS_AS(r_loss(tape, in, Tensor::matrix(1, 2, {0, 0})),
                  DimensionError);
}

TEST_CASE("r_loss gradient is 2(O - I)") {
  Rng rng(11);
  Tensor in = random_tensor({3, 4}, rng, -2, 2, false);
  Tensor out = random_tensor({3, 4}, rng);
  Tape tape;
  tape.backward(r_loss(tape, in, out));
  for (std::size_t i = 0; i < out.numel(); ++i) {
    CHECK(out.grad()[i] == doctest::Approx(2.0 * (out.at(i) - in.at(i))).epsilon(1e-15));
  }
  // Central differences on the quadratic are exact up to rounding.
  const double h = 1e-5;
  for (std::size_t i = 0; i < out.numel(); ++i) {
    Tape t(Tape::Mode::kInference);
    const double saved = out.values()[i];
    out.values()[i] = saved + h;
    const double up = r_loss(t, in, out).item();
    out.values()[i] = saved - h;
    const double down = r_loss(t, in, out).item();
    out.values()[i] = saved;
    CHECK(std::fabs((up - down) / (2 * h) - out.grad()[i]) <= 1e-8);
  }
}

TEST_CASE("bce values and gradient") {
  Tape tape;
  CHECK(bce(tape, Tensor::vector({0.5, 0.5, 0.5}), std::vector<double>{1, 0, 1})
            .item() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(bce(tape, Tensor::vector({0.9}), std::vector<double>{1}).item() ==
        doctest::Approx(0.10536051565782628).epsilon(1e-12));
  CHECK(bce(tape, Tensor::vector({1.0, 0.0}), std::vector<double>{1, 0}).item() <
        1e-11);
  CHECK_THROWS_AS(bce(tape, Tensor::vector({0.5}), std::vector<double>{1, 0}),
                  DimensionError);

  Rng rng(5);
  Tensor logits = random_tensor({5}, rng);
  const std::vector<double> y = {1, 0, 0, 1, 1};
  auto result = gradcheck(
      [&](Tape& t) {
        return bce(t, activation(t, logits, Activation::kSigmoid), y);
      },
      {{"logits", logits}});
  CHECK(result.max_rel_error <= 1e-6);
}

TEST_CASE("adam zero gradient is a fixed point, t increments") {
  Tensor w = Tensor::vector({1.0, -2.0}, true);
  Adam adam({{"w", w}}, {});
  adam.step();
  adam.step();
  CHECK(adam.steps_taken() == 2);
  CHECK(w.at(0) == 1.0);
  CHECK(w.at(1) == -2.0);
}

TEST_CASE("adam first step moves each entry by about lr") {
  Tensor w = Tensor::vector({0.0, 0.0, 0.0}, true);
  Adam adam({{"w", w}}, {0.001});
  w.grad()[0] = 3.0;
  w.grad()[1] = -0.01;
  w.grad()[2] = 1e-3;
  adam.step();
  CHECK(w.at(0) == doctest::Approx(-0.001).epsilon(1e-6));
  CHECK(w.at(1) == doctest::Approx(0.001).epsilon(1e-5));
  CHECK(w.at(2) == doctest::Approx(-0.001).epsilon(1e-4));
}

TEST_CASE("adam two-step scalar trace") {
  // Values evaluated by hand from the update recurrences.
  Tensor w = Tensor::vector({1.0}, true);
  Adam adam({{"w", w}}, {0.1});
  w.grad()[0] = 0.5;
  adam.step();
  CHECK(adam.first_moments()[0][0] == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(adam.second_moments()[0][0] == doctest::Approx(0.00025).epsilon(1e-15));
  CHECK(w.at(0) == doctest::Approx(0.9000000019999999).epsilon(1e-14));
  w.grad()[0] = -0.2;
  adam.step();
  CHECK(adam.first_moments()[0][0] == doctest::Approx(0.025).epsilon(1e-14));
  CHECK(adam.second_moments()[0][0] == doctest::Approx(0.00028975).epsilon(1e-14));
  CHECK(w.at(0) == doctest::Approx(0.8654394181165107).epsilon(1e-14));
}

TEST_CASE("adam non-finite gradient names the parameter") {
  Tensor w = Tensor::vector({1.0}, true);
  Tensor v = Tensor::vector({1.0}, true);
  Adam adam({{"w", w}, {"encoder.bias", v}}, {});
  v.grad()[0] = std::nan("");
  try {
    adam.step();
    FAIL("expected TrainingError");
  } catch (const TrainingError& e) {
    CHECK(std::string(e.what()).find("encoder.bias") != std::string::npos);
  }
}

TEST_CASE("adam on a convex quadratic decreases after warm-up") {
  Tensor w = Tensor::vector({2.0, -1.5, 0.7}, true);
  Adam adam({{"w", w}}, {0.001});
  auto objective = [&] {
    double s = 0;
    for (double x : w.values()) s += x * x;
    return s;
  };
  std::vector<double> trace;
  for (int step = 0; step < 50; ++step) {
    Tape tape;
    Tensor loss = sum(tape, mul(tape, w, w));
    w.zero_grad();
    tape.backward(loss);
    adam.step();
    trace.push_back(objective());
  }
  for (std::size_t i = 3; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
}

TEST_CASE("adam clipping bounds the global norm") {
  Tensor w = Tensor::vector({0.0, 0.0}, true);
  ParameterList params = {{"w", w}};
  w.grad()[0] = 3.0;
  w.grad()[1] = 4.0;
  CHECK(clip_gradients(params, 1.0) == doctest::Approx(5.0));
  CHECK(w.grad()[0] == doctest::Approx(0.6));
  CHECK(w.grad()[1] == doctest::Approx(0.8));
}

TEST_CASE("linear decay schedule") {
  LinearDecaySchedule s{0.025, 0.001, 100};
  CHECK(s.rate(0) == 0.025);
  CHECK(s.rate(100) == doctest::Approx(0.001).epsilon(1e-15));
  CHECK(s.rate(50) == doctest::Approx(0.013).epsilon(1e-15));
  CHECK_THROWS_AS(s.rate(101), DomainError);

  Tensor w = Tensor::vector({1.0, 2.0}, true);
  ParameterList params = {{"w", w}};
  sgd_step(s, 0, params);
  CHECK(w.at(0) == 1.0);
  w.grad()[0] = 1.0;
  sgd_step(s, 0, params);
  CHECK(w.at(0) == doctest::Approx(0.975));
  CHECK(w.at(1) == 2.0);
}

}  // namespace
}  // namespace tla
