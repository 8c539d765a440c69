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

#include "nashseek/game.hpp"

#include <cmath>
#include <memory>
#include <string>

namespace nashseek {

GameDefinition::GameDefinition(int n_players, int action_dim,
                               std::vector<PlayerOrder> orders, CostFn cost,
                               GradFn gradient, CrossHessFn cross_hessian)
    : n_(n_players),
      d_(action_dim),
      orders_(std::move(orders)),
      cost_(std::move(cost)),
      gradient_(std::move(gradient)),
      cross_hessian_(std::move(cross_hessian)) {
  if (n_ <= 0 || d_ <= 0) {
    throw InvalidArgument("GameDefinition: n_players and action_dim must be "
                          "positive");
  }
  if (static_cast<int>(orders_.size()) != n_) {
    throw DimensionMismatch("GameDefinition: got " +
                            std::to_string(orders_.size()) +
                            " order tags for " + std::to_string(n_) +
                            " players");
  }
  if (!cost_ || !gradient_) {
    throw InvalidArgument("GameDefinition: cost and gradient oracles are "
                          "required");
  }
  n_first_ = 0;
  for (PlayerOrder o : orders_)
    if (o == PlayerOrder::kFirst) ++n_first_;
}

double GameDefinition::cost(int i, const Eigen::VectorXd& x) const {
  if (x.size() != n_ * d_) {
    throw DimensionMismatch("GameDefinition::cost: profile has length " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(n_ * d_));
  }
  return cost_(i, x);
}

Eigen::VectorXd GameDefinition::gradient(int i, const Eigen::VectorXd& x) const {
  if (x.size() != n_ * d_) {
    throw DimensionMismatch("GameDefinition::gradient: profile has length " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(n_ * d_));
  }
  return gradient_(i, x);
}

Eigen::MatrixXd GameDefinition::cross_hessian(int i, int j,
                                              const Eigen::VectorXd& x) const {
  if (!cross_hessian_) {
    throw InvalidArgument("GameDefinition: no cross-Hessian oracle supplied");
  }
  return cross_hessian_(i, j, x);
}

Eigen::VectorXd pseudo_gradient(const GameDefinition& game,
                                const Eigen::VectorXd& x) {
  const int n = game.n_players();
  const int d = game.action_dim();
  if (x.size() != n * d) {
    throw DimensionMismatch("pseudo_gradient: profile has length " +
                            std::to_string(x.size()) + ", expected " +
                            std::to_string(n * d));
  }
  Eigen::VectorXd out(n * d);
  for (int i = 0; i < n; ++i) out.segment(i * d, d) = game.gradient(i, x);
  return out;
}

Eigen::VectorXd nash_oracle(const QuadraticGame& game) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(
      game.b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smax = svd.singularValues()(0);
  const double smin = svd.singularValues()(svd.singularValues().size() - 1);
  if (smin <= 0.0 || smax / smin > 1e12) {
    throw SingularSystem(
        "nash_oracle: pseudo-gradient matrix is singular or conditioned "
        "beyond 1e12");
  }
  return svd.solve(-game.c);
}

double monotonicity_constant(const QuadraticGame& game) {
  const Eigen::MatrixXd sym = 0.5 * (game.b + game.b.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  const double m = es.eigenvalues().minCoeff();
  if (m <= 0.0) {
    throw NotStronglyMonotone(
        "monotonicity_constant: lambda_min of the symmetric part is " +
        std::to_string(m) + " <= 0");
  }
  return m;
}

Eigen::VectorXd lipschitz_constants(const QuadraticGame& game) {
  const int n = game.n_players;
  const int d = game.action_dim;
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(game.b.middleRows(i * d, d));
    out(i) = svd.singularValues()(0);
  }
  return out;
}

std::pair<GameDefinition, QuadraticGame> make_quadratic_game(
    int action_dim, const std::vector<QuadraticPlayer>& players) {
  const int n = static_cast<int>(players.size());
  const int d = action_dim;
  if (n == 0) throw InvalidArgument("make_quadratic_game: no players");
  std::vector<PlayerOrder> orders;
  orders.reserve(players.size());
  for (int i = 0; i < n; ++i) {
    const QuadraticPlayer& p = players[i];
    if (p.quad.rows() != d || p.quad.cols() != d || p.linear.size() != d) {
      throw DimensionMismatch("make_quadratic_game: player " +
                              std::to_string(i + 1) +
                              " quadratic data does not match action_dim " +
                              std::to_string(d));
    }
    for (const auto& [j, w] : p.couplings) {
      (void)w;
      if (j < 0 || j >= n || j == i) {
        throw InvalidArgument("make_quadratic_game: player " +
                              std::to_string(i + 1) +
                              " has a coupling to invalid player index " +
                              std::to_string(j + 1));
      }
    }
    orders.push_back(p.order);
  }

  // Copy the per-player data into the closures so the game owns it.
  auto data = std::make_shared<std::vector<QuadraticPlayer>>(players);
  auto cost = [data, d](int i, const Eigen::VectorXd& x) -> double {
    const QuadraticPlayer& p = (*data)[i];
    const Eigen::VectorXd xi = x.segment(i * d, d);
    double f = xi.dot(p.quad * xi) + xi.dot(p.linear) + p.constant;
    for (const auto& [j, w] : p.couplings)
      f += w * (xi - x.segment(j * d, d)).squaredNorm();
    return f;
  };
  auto grad = [data, d](int i, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const QuadraticPlayer& p = (*data)[i];
    const Eigen::VectorXd xi = x.segment(i * d, d);
    Eigen::VectorXd g = (p.quad + p.quad.transpose()) * xi + p.linear;
    for (const auto& [j, w] : p.couplings)
      g += 2.0 * w * (xi - x.segment(j * d, d));
    return g;
  };
  auto cross = [data, d](int i, int j,
                         const Eigen::VectorXd&) -> Eigen::MatrixXd {
    const QuadraticPlayer& p = (*data)[i];
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
    if (j == i) {
      h = p.quad + p.quad.transpose();
      for (const auto& [k, w] : p.couplings) {
        (void)k;
        h += 2.0 * w * Eigen::MatrixXd::Identity(d, d);
      }
    } else {
      for (const auto& [k, w] : p.couplings)
        if (k == j) h -= 2.0 * w * Eigen::MatrixXd::Identity(d, d);
    }
    return h;
  };

  QuadraticGame quad;
  quad.n_players = n;
  quad.action_dim = d;
  quad.b = Eigen::MatrixXd::Zero(n * d, n * d);
  quad.c = Eigen::VectorXd::Zero(n * d);
  for (int i = 0; i < n; ++i) {
    const QuadraticPlayer& p = players[i];
    quad.b.block(i * d, i * d, d, d) = p.quad + p.quad.transpose();
    quad.c.segment(i * d, d) = p.linear;
    for (const auto& [j, w] : p.couplings) {
      quad.b.block(i * d, i * d, d, d) +=
          2.0 * w * Eigen::MatrixXd::Identity(d, d);
      quad.b.block(i * d, j * d, d, d) -=
          2.0 * w * Eigen::MatrixXd::Identity(d, d);
    }
  }

  GameDefinition def(n, d, std::move(orders), std::move(cost), std::move(grad),
                     std::move(cross));
  return {std::move(def), std::move(quad)};
}

Vehicles5 vehicles5() {
  const int d = 2;
  std::vector<QuadraticPlayer> players(5);
  for (int i = 0; i < 5; ++i) {
    const double w = static_cast<double>(i + 1);
    players[i].quad = w * Eigen::MatrixXd::Identity(d, d);
    players[i].linear = Eigen::VectorXd::Constant(d, w);
    players[i].constant = w;
    players[i].order = i < 3 ? PlayerOrder::kFirst : PlayerOrder::kSecond;
  }
  // Connectivity couplings: 1-2, 2-3, 3-2, 4-2, 4-5, 5-1 (1-based).
  players[0].couplings = {{1, 1.0}};
  players[1].couplings = {{2, 1.0}};
  players[2].couplings = {{1, 1.0}};
  players[3].couplings = {{1, 1.0}, {4, 1.0}};
  players[4].couplings = {{0, 1.0}};

  auto [def, quad] = make_quadratic_game(d, players);

  DisturbanceModel dist;
  dist.g.resize(5);
  dist.d.resize(5);
  // Unknown drifts: g1 = [x_21, x_22], g2 = [x_21^2 + x_31, x_22],
  // g_i = i * x_i for i in {3,4,5}. Disturbances d_i = i * sin(i t) * ones.
  dist.g[0] = [](const Eigen::VectorXd& x) {
    return Eigen::Vector2d(x(2), x(3));
  };
  dist.g[1] = [](const Eigen::VectorXd& x) {
    return Eigen::Vector2d(x(2) * x(2) + x(4), x(3));
  };
  for (int i = 2; i < 5; ++i) {
    const double w = static_cast<double>(i + 1);
    dist.g[i] = [i, w](const Eigen::VectorXd& x) -> Eigen::VectorXd {
      return w * x.segment(2 * i, 2);
    };
  }
  for (int i = 0; i < 5; ++i) {
    const double w = static_cast<double>(i + 1);
    dist.d[i] = [w](double t) -> Eigen::VectorXd {
      return Eigen::Vector2d::Constant(w * std::sin(w * t));
    };
  }
  // Declared Lipschitz constants on the operating box [-10,10]^10 (the
  // quadratic term in g2 is only locally Lipschitz) and disturbance bounds.
  dist.eta = Eigen::VectorXd(5);
  dist.eta << 1.0, std::sqrt(401.0), 3.0, 4.0, 5.0;
  dist.d_bound = Eigen::VectorXd(5);
  dist.d_bound << 1.0, 2.0, 3.0, 4.0, 5.0;

  return Vehicles5{std::move(def), std::move(quad), std::move(dist)};
}

}  // namespace nashseek
