// Copyright 2026 The Nashseek Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "nashseek/controller.hpp"
#include "nashseek/game.hpp"
#include "nashseek/graph.hpp"
#include "nashseek/rbfnn.hpp"
#include "oracles.hpp"

using nashseek::CommGraph;
using nashseek::DimensionMismatch;
using nashseek::GameDefinition;
using nashseek::Gains;
using nashseek::InvalidArgument;
using nashseek::PlayerOrder;
using nashseek::RbfNetwork;
using nashseek::SeekerState;
using nashseek::Vehicles5;
using nashseek::WrongOrder;
using nashseek::activation;
using nashseek::control_first_order;
using nashseek::control_second_order;
using nashseek::damping_phi;
using nashseek::estimator_derivative;
using nashseek::estimator_matrix;
using nashseek::pseudo_gradient;
using nashseek::regulation_signal;
using nashseek::tanh_kappa;
using nashseek::validate_state;
using nashseek::vehicles5;
using nashseek::xbar;
using nashseek::z_derivative;
using nashseek_test::random_connected_adjacency;
using nashseek_test::random_vector;

namespace {

// A random but structurally valid state for the five-vehicle game.
SeekerState random_v5_state(std::mt19937& rng, int q = 0) {
  SeekerState s;
  s.x.resize(5);
  s.v.resize(5);
  s.z.resize(5);
  s.y.resize(5);
  s.w.resize(5);
  for (int i = 0; i < 5; ++i) {
    s.x[i] = random_vector(rng, 2, -5.0, 5.0);
    if (i < 3) s.z[i] = random_vector(rng, 2, -5.0, 5.0);
    else s.v[i] = random_vector(rng, 2, -5.0, 5.0);
    s.y[i] = random_vector(rng, 10, -5.0, 5.0);
    if (q > 0) {
      s.w[i].resize(q, 2);
      for (int r = 0; r < q; ++r)
        s.w[i].row(r) = random_vector(rng, 2, -0.5, 0.5).transpose();
    }
  }
  return s;
}

// The five-vehicle equilibrium state: x = z = x*, v = 0, consensus on the
// reference profile, zero weights. Every derivative vanishes exactly here.
SeekerState equilibrium_v5_state(int q) {
  SeekerState s;
  s.x.assign(5, Eigen::Vector2d::Constant(-0.5));
  s.v.resize(5);
  s.z.resize(5);
  s.y.resize(5);
  s.w.resize(5);
  for (int i = 0; i < 5; ++i) {
    if (i < 3) s.z[i] = Eigen::Vector2d::Constant(-0.5);
    else s.v[i] = Eigen::Vector2d::Zero();
    s.y[i] = Eigen::VectorXd::Constant(10, -0.5);
    if (q > 0) s.w[i] = Eigen::MatrixXd::Zero(q, 2);
  }
  return s;
}

RbfNetwork v5_net(int q, double beta = 100.0) {
  std::vector<double> centers(q);
  for (int i = 0; i < q; ++i) centers[i] = -2.0 + i;
  return RbfNetwork::from_scalar_centers(centers, 5.0 * std::sqrt(2.0), 10, 2,
                                         500.0, beta);
}

}  // namespace

TEST_CASE("gain validation rejects non-positive entries") {
  Gains g;
  CHECK_NOTHROW(g.validate());
  g.k2 = 0.0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
  g = Gains{};
  g.epsilon = -1.0;
  CHECK_THROWS_AS(g.validate(), InvalidArgument);
}

TEST_CASE("state validation checks shapes and order consistency") {
  const Vehicles5 v5 = vehicles5();
  std::mt19937 rng(1);
  SeekerState s = random_v5_state(rng);
  CHECK_NOTHROW(validate_state(s, v5.game));

  SeekerState bad = s;
  bad.y[2] = Eigen::VectorXd::Zero(9);
  CHECK_THROWS_AS(validate_state(bad, v5.game), DimensionMismatch);

  bad = s;
  bad.z[0] = Eigen::VectorXd();  // first-order player missing z
  CHECK_THROWS_AS(validate_state(bad, v5.game), InvalidArgument);

  bad = s;
  bad.v[0] = Eigen::VectorXd::Zero(2);  // first-order player with v
  CHECK_THROWS_AS(validate_state(bad, v5.game), InvalidArgument);

  bad = s;
  bad.x[1](0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_state(bad, v5.game), InvalidArgument);
}

TEST_CASE("reference profile stacks z for first-order and x for "
          "second-order players") {
  std::mt19937 rng(2);
  SeekerState s = random_v5_state(rng);
  const Eigen::VectorXd ref = xbar(s);
  REQUIRE(ref.size() == 10);
  for (int i = 0; i < 3; ++i) {
    CHECK((ref.segment(2 * i, 2) - s.z[i]).norm() == 0.0);
  }
  for (int i = 3; i < 5; ++i) {
    CHECK((ref.segment(2 * i, 2) - s.x[i]).norm() == 0.0);
  }

  // All-first-order: the reference is the z stack.
  SeekerState first;
  first.x.assign(2, Eigen::VectorXd::Constant(1, 7.0));
  first.z.assign(2, Eigen::VectorXd::Constant(1, 3.0));
  first.v.resize(2);
  first.y.assign(2, Eigen::VectorXd::Zero(2));
  first.w.resize(2);
  CHECK((xbar(first) - Eigen::VectorXd::Constant(2, 3.0)).norm() == 0.0);

  // All-second-order: the reference is the x stack.
  SeekerState second;
  second.x.assign(2, Eigen::VectorXd::Constant(1, 7.0));
  second.z.resize(2);
  second.v.assign(2, Eigen::VectorXd::Constant(1, 9.0));
  second.y.assign(2, Eigen::VectorXd::Zero(2));
  second.w.resize(2);
  CHECK((xbar(second) - Eigen::VectorXd::Constant(2, 7.0)).norm() == 0.0);
}

TEST_CASE("estimator derivative vanishes at consensus") {
  std::mt19937 rng(3);
  SeekerState s = random_v5_state(rng);
  const Eigen::VectorXd ref = xbar(s);
  for (int i = 0; i < 5; ++i) s.y[i] = ref;
  const CommGraph g = CommGraph::ring(5);
  for (int i = 0; i < 5; ++i) {
    CHECK(estimator_derivative(i, s, g, 40.0).norm() == 0.0);
  }
}

TEST_CASE("estimator derivative hand example on the two-player complete "
          "graph") {
  const double k3 = 5.0;
  SeekerState s;
  s.x.assign(2, Eigen::VectorXd::Constant(1, 1.0));
  s.z.resize(2);
  s.v.assign(2, Eigen::VectorXd::Zero(1));  // both second-order: xbar = x
  s.y.resize(2);
  s.y[0] = Eigen::VectorXd::Zero(2);
  s.y[1] = Eigen::VectorXd::Ones(2);
  s.w.resize(2);

  const CommGraph g = CommGraph::complete(2);
  const Eigen::VectorXd dy1 = estimator_derivative(0, s, g, k3);
  // Component 1: only the neighbor-disagreement term (a_11 = 0).
  CHECK(dy1(0) == k3);
  // Component 2: disagreement plus the direct measurement of player 2.
  CHECK(dy1(1) == 2.0 * k3);
  const Eigen::VectorXd dy2 = estimator_derivative(1, s, g, k3);
  CHECK(dy2(0) == -k3);
  CHECK(dy2(1) == -k3);
}

TEST_CASE("estimator derivative equals its stacked matrix form") {
  std::mt19937 rng(4);
  // Five-vehicle shape on the ring.
  {
    const CommGraph g = CommGraph::ring(5);
    const Eigen::MatrixXd m = estimator_matrix(g, 2);
    for (int trial = 0; trial < 20; ++trial) {
      SeekerState s = random_v5_state(rng);
      const Eigen::VectorXd ref = xbar(s);
      Eigen::VectorXd stacked(50), dev(50);
      for (int i = 0; i < 5; ++i) dev.segment(10 * i, 10) = s.y[i] - ref;
      for (int i = 0; i < 5; ++i)
        stacked.segment(10 * i, 10) = estimator_derivative(i, s, g, 40.0);
      CHECK((stacked + 40.0 * m * dev).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  // Random connected graphs, scalar actions, all second-order players.
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 4);
    const CommGraph g(n, random_connected_adjacency(rng, n));
    const Eigen::MatrixXd m = estimator_matrix(g, 1);
    SeekerState s;
    s.x.resize(n);
    s.z.resize(n);
    s.v.resize(n);
    s.y.resize(n);
    s.w.resize(n);
    for (int i = 0; i < n; ++i) {
      s.x[i] = random_vector(rng, 1, -3.0, 3.0);
      s.v[i] = Eigen::VectorXd::Zero(1);
      s.y[i] = random_vector(rng, n, -3.0, 3.0);
    }
    const Eigen::VectorXd ref = xbar(s);
    Eigen::VectorXd stacked(n * n), dev(n * n);
    for (int i = 0; i < n; ++i) {
      dev.segment(n * i, n) = s.y[i] - ref;
      stacked.segment(n * i, n) = estimator_derivative(i, s, g, 7.0);
    }
    CHECK((stacked + 7.0 * m * dev).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("estimator reads only its own row of the graph") {
  // Perturbing a non-neighbor's estimate must leave the derivative exactly
  // unchanged: the distributed information structure.
  std::mt19937 rng(5);
  const CommGraph g = CommGraph::ring(5);
  for (int trial = 0; trial < 100; ++trial) {
    SeekerState s = random_v5_state(rng);
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd base = estimator_derivative(i, s, g, 40.0);
      for (int j = 0; j < 5; ++j) {
        if (j == i || g.adjacency()(i, j) != 0.0) continue;
        SeekerState pert = s;
        pert.y[j] = random_vector(rng, 10, -50.0, 50.0);
        const Eigen::VectorXd after = estimator_derivative(i, pert, g, 40.0);
        CHECK((after - base).cwiseAbs().maxCoeff() == 0.0);
      }
    }
  }
}

TEST_CASE("first-order control law") {
  const Vehicles5 v5 = vehicles5();
  Gains gains;
  std::mt19937 rng(6);

  // x = z with zero weights: u = 0 exactly (phi(0) = 0).
  SeekerState s = random_v5_state(rng, 3);
  RbfNetwork net = v5_net(3);
  for (int i = 0; i < 3; ++i) {
    s.z[i] = s.x[i];
    s.w[i].setZero();
    CHECK(control_first_order(i, s, v5.game, gains, &net).norm() == 0.0);
  }

  // Without the network the law reduces to pure regulation.
  s = random_v5_state(rng);
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd u = control_first_order(i, s, v5.game, gains,
                                                  nullptr);
    CHECK((u + gains.k1 * (s.x[i] - s.z[i])).norm() == 0.0);
  }

  // Full law against an independent reassembly from the building blocks.
  for (int trial = 0; trial < 100; ++trial) {
    SeekerState r = random_v5_state(rng, 3);
    for (int i = 0; i < 3; ++i) {
      const Eigen::VectorXd e = r.x[i] - r.z[i];
      const Eigen::VectorXd comp =
          r.w[i].transpose() * activation(net, r.y[i]) +
          damping_phi(e, gains.delta, gains.epsilon, tanh_kappa());
      const Eigen::VectorXd want = -gains.k1 * e - comp;
      const Eigen::VectorXd u = control_first_order(i, r, v5.game, gains,
                                                    &net);
      CHECK((u - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  CHECK_THROWS_AS(control_first_order(3, s, v5.game, gains, nullptr),
                  WrongOrder);
}

TEST_CASE("auxiliary gradient-play dynamics") {
  const Vehicles5 v5 = vehicles5();
  const double k2 = 0.125;
  std::mt19937 rng(7);

  // At the equilibrium estimate the auxiliary state is stationary.
  SeekerState s = random_v5_state(rng);
  for (int i = 0; i < 3; ++i) {
    s.y[i] = Eigen::VectorXd::Constant(10, -0.5);
    CHECK(z_derivative(i, s, v5.game, k2).norm() == 0.0);
  }

  // Single scalar player with f = x^2 and estimate y = 3: zdot = -6 k2.
  const auto cost = [](int, const Eigen::VectorXd& x) {
    return x(0) * x(0);
  };
  const auto grad = [](int, const Eigen::VectorXd& x) {
    return Eigen::VectorXd::Constant(1, 2.0 * x(0)).eval();
  };
  const GameDefinition single(1, 1, {PlayerOrder::kFirst}, cost, grad);
  SeekerState one;
  one.x.assign(1, Eigen::VectorXd::Zero(1));
  one.z.assign(1, Eigen::VectorXd::Zero(1));
  one.v.resize(1);
  one.y.assign(1, Eigen::VectorXd::Constant(1, 3.0));
  one.w.resize(1);
  CHECK(z_derivative(0, one, single, 0.5)(0) == -3.0);

  // Always the own-gradient slice of the pseudo-gradient at y_i.
  for (int trial = 0; trial < 50; ++trial) {
    SeekerState r = random_v5_state(rng);
    for (int i = 0; i < 3; ++i) {
      const Eigen::VectorXd want =
          -k2 * pseudo_gradient(v5.game, r.y[i]).segment(2 * i, 2);
      CHECK((z_derivative(i, r, v5.game, k2) - want).norm() == 0.0);
    }
  }

  CHECK_THROWS_AS(z_derivative(4, s, v5.game, k2), WrongOrder);
}

TEST_CASE("second-order control law") {
  const Vehicles5 v5 = vehicles5();
  Gains gains;
  std::mt19937 rng(8);
  RbfNetwork net = v5_net(3);

  // Stationary point: zero velocity, zero gradient at the estimate, zero
  // weights.
  SeekerState s = equilibrium_v5_state(3);
  for (int i = 3; i < 5; ++i) {
    CHECK(control_second_order(i, s, v5.game, gains, &net).norm() == 0.0);
  }

  // With zero gradient and no network, the law is pure velocity damping.
  SeekerState vd = equilibrium_v5_state(0);
  vd.v[3] = Eigen::Vector2d(1.5, -2.0);
  CHECK((control_second_order(3, vd, v5.game, gains, nullptr) +
         gains.k4 * vd.v[3])
            .norm() == 0.0);

  // Full law against an independent reassembly.
  for (int trial = 0; trial < 100; ++trial) {
    SeekerState r = random_v5_state(rng, 3);
    for (int i = 3; i < 5; ++i) {
      const Eigen::VectorXd gi = v5.game.gradient(i, r.y[i]);
      const Eigen::VectorXd e = gains.k2 * gi + r.v[i];
      const Eigen::VectorXd comp =
          r.w[i].transpose() * activation(net, r.y[i]) +
          damping_phi(e, gains.delta, gains.epsilon, tanh_kappa());
      const Eigen::VectorXd want =
          -gains.k2 * gains.k4 * gi - gains.k4 * r.v[i] - comp;
      const Eigen::VectorXd u = control_second_order(i, r, v5.game, gains,
                                                     &net);
      CHECK((u - want).cwiseAbs().maxCoeff() < 1e-12);
    }
  }

  CHECK_THROWS_AS(control_second_order(0, s, v5.game, gains, nullptr),
                  WrongOrder);
}

TEST_CASE("regulation signal selects the per-order error") {
  const Vehicles5 v5 = vehicles5();
  const double k2 = 0.125;
  std::mt19937 rng(9);

  SeekerState s = random_v5_state(rng);
  for (int i = 0; i < 3; ++i) {
    s.z[i] = s.x[i];
    CHECK(regulation_signal(i, s, v5.game, k2).norm() == 0.0);
  }
  SeekerState eq = equilibrium_v5_state(0);
  for (int i = 3; i < 5; ++i) {
    CHECK(regulation_signal(i, eq, v5.game, k2).norm() == 0.0);
  }

  for (int trial = 0; trial < 50; ++trial) {
    SeekerState r = random_v5_state(rng);
    for (int i = 0; i < 5; ++i) {
      const Eigen::VectorXd e = regulation_signal(i, r, v5.game, k2);
      if (i < 3) {
        CHECK((e - (r.x[i] - r.z[i])).norm() == 0.0);
      } else {
        CHECK((e - (k2 * v5.game.gradient(i, r.y[i]) + r.v[i])).norm() ==
              0.0);
      }
    }
  }
}

TEST_CASE("all derivatives vanish exactly at the equilibrium state") {
  const Vehicles5 v5 = vehicles5();
  Gains gains;
  const CommGraph g = CommGraph::ring(5);
  RbfNetwork net = v5_net(4);
  SeekerState s = equilibrium_v5_state(4);

  for (int i = 0; i < 5; ++i) {
    CHECK(estimator_derivative(i, s, g, gains.k3).norm() == 0.0);
    CHECK(regulation_signal(i, s, v5.game, gains.k2).norm() == 0.0);
    if (i < 3) {
      CHECK(control_first_order(i, s, v5.game, gains, &net).norm() == 0.0);
      CHECK(z_derivative(i, s, v5.game, gains.k2).norm() == 0.0);
    } else {
      CHECK(control_second_order(i, s, v5.game, gains, &net).norm() == 0.0);
    }
  }
}

TEST_CASE("control laws are affine in their regulation variables") {
  const Vehicles5 v5 = vehicles5();
  Gains gains;
  std::mt19937 rng(10);
  SeekerState s = random_v5_state(rng);

  // First-order, no network: shifting z by delta shifts u by k1 * delta.
  const Eigen::Vector2d delta(0.25, -1.0);
  for (int i = 0; i < 3; ++i) {
    const Eigen::VectorXd u0 = control_first_order(i, s, v5.game, gains,
                                                   nullptr);
    SeekerState shifted = s;
    shifted.z[i] += delta;
    const Eigen::VectorXd u1 = control_first_order(i, shifted, v5.game, gains,
                                                   nullptr);
    CHECK((u1 - u0 - gains.k1 * delta).cwiseAbs().maxCoeff() < 1e-12);
  }
  // Second-order, no network: shifting v by delta shifts u by -k4 * delta.
  for (int i = 3; i < 5; ++i) {
    const Eigen::VectorXd u0 = control_second_order(i, s, v5.game, gains,
                                                    nullptr);
    SeekerState shifted = s;
    shifted.v[i] += delta;
    const Eigen::VectorXd u1 = control_second_order(i, shifted, v5.game,
                                                    gains, nullptr);
    CHECK((u1 - u0 + gains.k4 * delta).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("estimator contracts at least as fast as its slowest mode") {
  // Freeze the reference and integrate the linear estimator system; the
  // deviation norm must stay inside a 5% envelope of the slowest-mode decay.
  const CommGraph g = CommGraph::ring(5);
  const Eigen::MatrixXd m = estimator_matrix(g, 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  const double lmin = es.eigenvalues().minCoeff();
  const double k3 = 2.0;

  std::mt19937 rng(11);
  const Eigen::VectorXd ref = random_vector(rng, 5, -2.0, 2.0);
  SeekerState s;
  s.x.resize(5);
  s.z.resize(5);
  s.v.resize(5);
  s.y.resize(5);
  s.w.resize(5);
  for (int i = 0; i < 5; ++i) {
    s.x[i] = ref.segment(i, 1);
    s.v[i] = Eigen::VectorXd::Zero(1);  // all second-order: xbar = x frozen
    s.y[i] = random_vector(rng, 5, -3.0, 3.0);
  }
  Eigen::VectorXd dev0(25);
  for (int i = 0; i < 5; ++i) dev0.segment(5 * i, 5) = s.y[i] - ref;
  const double norm0 = dev0.norm();

  const double dt = 1e-3;
  for (int k = 1; k <= 2000; ++k) {
    // One RK4 step of the estimator block only (x, v frozen).
    std::vector<Eigen::VectorXd> y0 = s.y;
    std::vector<std::vector<Eigen::VectorXd>> ks(4);
    const double coef[4] = {0.0, 0.5, 0.5, 1.0};
    for (int stage = 0; stage < 4; ++stage) {
      std::vector<Eigen::VectorXd> probe = y0;
      if (stage > 0) {
        for (int i = 0; i < 5; ++i)
          probe[i] = y0[i] + coef[stage] * dt * ks[stage - 1][i];
      }
      SeekerState advance = s;
      advance.y = probe;
      ks[stage].resize(5);
      for (int i = 0; i < 5; ++i)
        ks[stage][i] = estimator_derivative(i, advance, g, k3);
    }
    for (int i = 0; i < 5; ++i) {
      s.y[i] = y0[i] + dt / 6.0 *
                           (ks[0][i] + 2.0 * ks[1][i] + 2.0 * ks[2][i] +
                            ks[3][i]);
    }
    if (k % 100 == 0) {
      const double t = k * dt;
      Eigen::VectorXd dev(25);
      for (int i = 0; i < 5; ++i) dev.segment(5 * i, 5) = s.y[i] - ref;
      CHECK(dev.norm() <= 1.05 * norm0 * std::exp(-k3 * lmin * t));
    }
  }
}
