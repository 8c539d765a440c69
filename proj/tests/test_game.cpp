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

#include "nashseek/game.hpp"
#include "oracles.hpp"

using nashseek::DimensionMismatch;
using nashseek::GameDefinition;
using nashseek::InvalidArgument;
using nashseek::NotStronglyMonotone;
using nashseek::PlayerOrder;
using nashseek::QuadraticGame;
using nashseek::QuadraticPlayer;
using nashseek::SingularSystem;
using nashseek::Vehicles5;
using nashseek::lipschitz_constants;
using nashseek::make_quadratic_game;
using nashseek::monotonicity_constant;
using nashseek::nash_oracle;
using nashseek::pseudo_gradient;
using nashseek::vehicles5;
using nashseek_test::central_diff_block;
using nashseek_test::random_vector;

namespace {

// One scalar player with cost quad*x^2 + linear*x.
QuadraticPlayer scalar_player(double quad, double linear,
                              PlayerOrder order = PlayerOrder::kFirst) {
  QuadraticPlayer p;
  p.quad = Eigen::MatrixXd::Constant(1, 1, quad);
  p.linear = Eigen::VectorXd::Constant(1, linear);
  p.order = order;
  return p;
}

// The two-player line game: f1 = (x1-x2)^2 + x1^2, f2 = (x2-1)^2. Its
// stacked gradient is [[4,-2],[0,2]] x + [0,-2] with equilibrium (1/2, 1).
std::pair<GameDefinition, QuadraticGame> two_player_line_game() {
  QuadraticPlayer p1 = scalar_player(1.0, 0.0);
  p1.couplings = {{1, 1.0}};
  QuadraticPlayer p2 = scalar_player(1.0, -2.0, PlayerOrder::kSecond);
  p2.constant = 1.0;
  return make_quadratic_game(1, {p1, p2});
}

}  // namespace

TEST_CASE("pseudo-gradient vanishes at the five-vehicle equilibrium") {
  const Vehicles5 v5 = vehicles5();
  const Eigen::VectorXd xstar = Eigen::VectorXd::Constant(10, -0.5);
  CHECK(pseudo_gradient(v5.game, xstar).norm() == 0.0);
}

TEST_CASE("pseudo-gradient at the origin matches the hand computation") {
  const Vehicles5 v5 = vehicles5();
  Eigen::VectorXd want(10);
  want << 1, 1, 2, 2, 3, 3, 4, 4, 5, 5;
  CHECK((pseudo_gradient(v5.game, Eigen::VectorXd::Zero(10)) - want).norm() ==
        0.0);
}

TEST_CASE("pseudo-gradient rejects wrong-size profiles") {
  const Vehicles5 v5 = vehicles5();
  CHECK_THROWS_AS(pseudo_gradient(v5.game, Eigen::VectorXd::Zero(9)),
                  DimensionMismatch);
}

TEST_CASE("analytic gradients match central finite differences") {
  std::mt19937 rng(404);
  const auto check_game = [&rng](const GameDefinition& game) {
    const int n = game.n_players();
    const int d = game.action_dim();
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd x = random_vector(rng, n * d, -10.0, 10.0);
      for (int i = 0; i < n; ++i) {
        const Eigen::VectorXd g = game.gradient(i, x);
        const Eigen::VectorXd fd = central_diff_block(
            [&game, i](const Eigen::VectorXd& p) { return game.cost(i, p); },
            x, i * d, d);
        const double scale = std::max(1.0, g.norm());
        CHECK((g - fd).norm() / scale < 1e-6);
      }
    }
  };
  check_game(vehicles5().game);
  check_game(two_player_line_game().first);
}

TEST_CASE("nash oracle solves the five-vehicle game") {
  const Vehicles5 v5 = vehicles5();
  const Eigen::VectorXd xstar = nash_oracle(v5.quadratic);
  REQUIRE(xstar.size() == 10);
  for (int k = 0; k < 10; ++k) {
    CHECK(xstar(k) == doctest::Approx(-0.5).epsilon(1e-12));
  }
  CHECK(pseudo_gradient(v5.game, xstar).norm() < 1e-10);
}

TEST_CASE("nash oracle closed-form examples") {
  // Single player, f = x^2: equilibrium at the origin.
  auto [g1, q1] = make_quadratic_game(1, {scalar_player(1.0, 0.0)});
  CHECK(nash_oracle(q1).cwiseAbs().maxCoeff() == 0.0);

  auto [g2, q2] = two_player_line_game();
  Eigen::MatrixXd want_b(2, 2);
  want_b << 4, -2, 0, 2;
  CHECK((q2.b - want_b).norm() == 0.0);
  const Eigen::VectorXd xstar = nash_oracle(q2);
  CHECK(xstar(0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(xstar(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("nash oracle rejects near-singular systems") {
  QuadraticGame q;
  q.n_players = 2;
  q.action_dim = 1;
  q.b.resize(2, 2);
  q.b << 1.0, 1.0, 1.0, 1.0 + 1e-15;
  q.c = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(nash_oracle(q), SingularSystem);
}

TEST_CASE("monotonicity constant closed forms and frozen value") {
  QuadraticGame q;
  q.n_players = 2;
  q.action_dim = 1;
  q.b = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  q.c = Eigen::VectorXd::Zero(2);
  CHECK(monotonicity_constant(q) == doctest::Approx(2.0).epsilon(1e-14));

  const Vehicles5 v5 = vehicles5();
  CHECK(monotonicity_constant(v5.quadratic) ==
        doctest::Approx(3.293500615259207).epsilon(1e-12));
}

TEST_CASE("monotonicity inequality holds on sampled pairs") {
  const Vehicles5 v5 = vehicles5();
  const double m = monotonicity_constant(v5.quadratic);
  std::mt19937 rng(505);
  double worst = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 10000; ++trial) {
    const Eigen::VectorXd x = random_vector(rng, 10, -10.0, 10.0);
    const Eigen::VectorXd z = random_vector(rng, 10, -10.0, 10.0);
    const Eigen::VectorXd dx = x - z;
    const double quotient =
        dx.dot(pseudo_gradient(v5.game, x) - pseudo_gradient(v5.game, z)) /
        dx.squaredNorm();
    worst = std::min(worst, quotient);
    CHECK(quotient >= m - 1e-9);
  }
  // The sampled minimum should actually approach the eigenvalue bound.
  CHECK(worst < m + 1.0);
}

TEST_CASE("monotonicity constant rejects indefinite games") {
  QuadraticGame q;
  q.n_players = 2;
  q.action_dim = 1;
  q.b.resize(2, 2);
  q.b << 1.0, 0.0, 0.0, -1.0;
  q.c = Eigen::VectorXd::Zero(2);
  CHECK_THROWS_AS(monotonicity_constant(q), NotStronglyMonotone);
}

TEST_CASE("lipschitz constants are row-block spectral norms") {
  auto [g1, q1] = make_quadratic_game(1, {scalar_player(1.0, 0.0)});
  CHECK(lipschitz_constants(q1)(0) == doctest::Approx(2.0).epsilon(1e-14));

  const Vehicles5 v5 = vehicles5();
  const Eigen::VectorXd l = lipschitz_constants(v5.quadratic);
  REQUIRE(l.size() == 5);
  CHECK(l(0) == doctest::Approx(std::sqrt(20.0)).epsilon(1e-12));
  CHECK(l(1) == doctest::Approx(std::sqrt(40.0)).epsilon(1e-12));
  CHECK(l(2) == doctest::Approx(std::sqrt(68.0)).epsilon(1e-12));
  CHECK(l(3) == doctest::Approx(std::sqrt(152.0)).epsilon(1e-12));
  CHECK(l(4) == doctest::Approx(std::sqrt(148.0)).epsilon(1e-12));
}

TEST_CASE("five-vehicle game structure") {
  const Vehicles5 v5 = vehicles5();
  REQUIRE(v5.game.n_players() == 5);
  REQUIRE(v5.game.action_dim() == 2);
  for (int i = 0; i < 3; ++i) CHECK(v5.game.order(i) == PlayerOrder::kFirst);
  for (int i = 3; i < 5; ++i) CHECK(v5.game.order(i) == PlayerOrder::kSecond);
  CHECK(v5.game.n_first() == 3);
  CHECK(v5.game.n_second() == 2);

  // Per-coordinate stacked-gradient matrix, lifted on 2x2 identity blocks.
  Eigen::MatrixXd core(5, 5);
  core << 4, -2, 0, 0, 0,
          0, 6, -2, 0, 0,
          0, -2, 8, 0, 0,
          0, -2, 0, 12, -2,
          -2, 0, 0, 0, 12;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK(v5.quadratic.b(2 * i, 2 * j) == core(i, j));
      CHECK(v5.quadratic.b(2 * i + 1, 2 * j + 1) == core(i, j));
      CHECK(v5.quadratic.b(2 * i, 2 * j + 1) == 0.0);
      CHECK(v5.quadratic.b(2 * i + 1, 2 * j) == 0.0);
    }
  }
  Eigen::VectorXd want_c(10);
  want_c << 1, 1, 2, 2, 3, 3, 4, 4, 5, 5;
  CHECK((v5.quadratic.c - want_c).norm() == 0.0);
}

TEST_CASE("five-vehicle cross-Hessians are constant") {
  const Vehicles5 v5 = vehicles5();
  REQUIRE(v5.game.has_cross_hessian());
  std::mt19937 rng(606);
  const Eigen::VectorXd x1 = random_vector(rng, 10, -10.0, 10.0);
  const Eigen::VectorXd x2 = random_vector(rng, 10, -10.0, 10.0);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK((v5.game.cross_hessian(i, j, x1) -
             v5.game.cross_hessian(i, j, x2))
                .norm() == 0.0);
    }
  }
  // And they agree with the stacked-gradient blocks.
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      CHECK((v5.game.cross_hessian(i, j, x1) -
             v5.quadratic.b.block(2 * i, 2 * j, 2, 2))
                .norm() == 0.0);
    }
  }
}

TEST_CASE("five-vehicle drifts and disturbances") {
  const Vehicles5 v5 = vehicles5();
  const auto& dist = v5.disturbance;
  REQUIRE(dist.g.size() == 5);
  REQUIRE(dist.d.size() == 5);

  // g5(0) + d5(0) = 0.
  CHECK((dist.g[4](Eigen::VectorXd::Zero(10)) + dist.d[4](0.0)).norm() == 0.0);

  // Probe values: g1 copies player 2's position, g2 has the squared term.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(10);
  x(2) = 3.0;   // x_21
  x(3) = -1.0;  // x_22
  x(4) = 2.0;   // x_31
  CHECK((dist.g[0](x) - Eigen::Vector2d(3.0, -1.0)).norm() == 0.0);
  CHECK((dist.g[1](x) - Eigen::Vector2d(11.0, -1.0)).norm() == 0.0);
  x(6) = 0.5;  // x_41
  CHECK((dist.g[3](x) - Eigen::Vector2d(2.0, 0.0)).norm() == 0.0);

  // d_i(t) = i * sin(i t) on both coordinates.
  for (int i = 0; i < 5; ++i) {
    const double w = i + 1.0;
    const Eigen::VectorXd di = dist.d[i](0.37);
    CHECK(di(0) == doctest::Approx(w * std::sin(w * 0.37)).epsilon(1e-15));
    CHECK(di(1) == di(0));
    CHECK(dist.d[i](10.0).cwiseAbs().maxCoeff() <= dist.d_bound(i));
  }
}

TEST_CASE("declared drift Lipschitz constants hold on the operating box") {
  const Vehicles5 v5 = vehicles5();
  std::mt19937 rng(707);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::VectorXd a = random_vector(rng, 10, -10.0, 10.0);
    const Eigen::VectorXd b = random_vector(rng, 10, -10.0, 10.0);
    for (int i = 0; i < 5; ++i) {
      const double lhs =
          (v5.disturbance.g[i](a) - v5.disturbance.g[i](b)).norm();
      CHECK(lhs <= v5.disturbance.eta(i) * (a - b).norm() * (1 + 1e-12));
    }
  }
}

TEST_CASE("quadratic game assembly validation") {
  CHECK_THROWS_AS(make_quadratic_game(1, {}), InvalidArgument);

  QuadraticPlayer bad = scalar_player(1.0, 0.0);
  bad.couplings = {{5, 1.0}};
  CHECK_THROWS_AS(make_quadratic_game(1, {bad, scalar_player(1.0, 0.0)}),
                  InvalidArgument);

  QuadraticPlayer self = scalar_player(1.0, 0.0);
  self.couplings = {{0, 1.0}};
  CHECK_THROWS_AS(make_quadratic_game(1, {self, scalar_player(1.0, 0.0)}),
                  InvalidArgument);

  QuadraticPlayer wrong_dim = scalar_player(1.0, 0.0);
  CHECK_THROWS_AS(make_quadratic_game(2, {wrong_dim}), DimensionMismatch);
}

TEST_CASE("game definition validation") {
  const auto cost = [](int, const Eigen::VectorXd& x) { return x.squaredNorm(); };
  const auto grad = [](int, const Eigen::VectorXd& x) {
    return (2.0 * x.head(1)).eval();
  };
  CHECK_THROWS_AS(GameDefinition(0, 1, {}, cost, grad), InvalidArgument);
  CHECK_THROWS_AS(
      GameDefinition(2, 1, {PlayerOrder::kFirst}, cost, grad),
      DimensionMismatch);
  CHECK_THROWS_AS(
      GameDefinition(1, 1, {PlayerOrder::kFirst}, nullptr, grad),
      InvalidArgument);
  const GameDefinition g(1, 1, {PlayerOrder::kFirst}, cost, grad);
  CHECK_FALSE(g.has_cross_hessian());
  CHECK_THROWS_AS(g.cross_hessian(0, 0, Eigen::VectorXd::Zero(1)),
                  InvalidArgument);
  CHECK_THROWS_AS(g.cost(0, Eigen::VectorXd::Zero(2)), DimensionMismatch);
}
