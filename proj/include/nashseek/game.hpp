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

#ifndef NASHSEEK_GAME_HPP_
#define NASHSEEK_GAME_HPP_

#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nashseek/errors.hpp"

namespace nashseek {

// Integrator order of a player: single integrator (kFirst) or double
// integrator (kSecond).
enum class PlayerOrder { kFirst, kSecond };

// A game described by oracles. Costs and gradients take the full stacked
// action profile x (length n*d); the gradient oracle returns player i's
// own-action block (length d). All oracles must be pure and reentrant.
class GameDefinition {
 public:
  using CostFn = std::function<double(int, const Eigen::VectorXd&)>;
  using GradFn = std::function<Eigen::VectorXd(int, const Eigen::VectorXd&)>;
  using CrossHessFn =
      std::function<Eigen::MatrixXd(int, int, const Eigen::VectorXd&)>;

  // `cross_hessian` (d x d blocks d^2 f_i / dx_i dx_j) is optional and used
  // for diagnostics only; the seeking algorithm never needs it.
  GameDefinition(int n_players, int action_dim, std::vector<PlayerOrder> orders,
                 CostFn cost, GradFn gradient,
                 CrossHessFn cross_hessian = nullptr);

  int n_players() const { return n_; }
  int action_dim() const { return d_; }
  const std::vector<PlayerOrder>& orders() const { return orders_; }
  PlayerOrder order(int i) const { return orders_.at(i); }
  int n_first() const { return n_first_; }
  int n_second() const { return n_ - n_first_; }

  double cost(int i, const Eigen::VectorXd& x) const;
  // Own-action gradient block of player i at profile x.
  Eigen::VectorXd gradient(int i, const Eigen::VectorXd& x) const;
  bool has_cross_hessian() const { return static_cast<bool>(cross_hessian_); }
  Eigen::MatrixXd cross_hessian(int i, int j, const Eigen::VectorXd& x) const;

 private:
  int n_;
  int d_;
  int n_first_;
  std::vector<PlayerOrder> orders_;
  CostFn cost_;
  GradFn gradient_;
  CrossHessFn cross_hessian_;
};

// Stacked affine pseudo-gradient of a quadratic game: P(x) = b*x + c, with
// b of size (n*d) x (n*d) and c of length n*d.
struct QuadraticGame {
  Eigen::MatrixXd b;
  Eigen::VectorXd c;
  int n_players = 0;
  int action_dim = 1;
};

// Unknown per-player drift g_i(x) plus bounded time-varying disturbance
// d_i(t); only their sum enters the dynamics. `eta` holds the declared
// Lipschitz constants of g_i on the operating box and `d_bound` holds
// sup_t |d_i(t)| (both used by diagnostics, not by the control laws).
struct DisturbanceModel {
  std::vector<std::function<Eigen::VectorXd(const Eigen::VectorXd&)>> g;
  std::vector<std::function<Eigen::VectorXd(double)>> d;
  Eigen::VectorXd eta;
  Eigen::VectorXd d_bound;
};

// Stacks each player's own-action gradient at x in player order.
Eigen::VectorXd pseudo_gradient(const GameDefinition& game,
                                const Eigen::VectorXd& x);

// Unique Nash equilibrium of a strongly monotone quadratic game: solves
// b*x = -c by a dense decomposition. Throws SingularSystem if b's condition
// number exceeds 1e12.
Eigen::VectorXd nash_oracle(const QuadraticGame& game);

// Strong-monotonicity constant m = lambda_min((b + b')/2). Throws
// NotStronglyMonotone if m <= 0.
double monotonicity_constant(const QuadraticGame& game);

// Per-player Lipschitz constant of the own-action gradient: the spectral
// norm of player i's d x (n*d) row block of b (exact for quadratic games).
Eigen::VectorXd lipschitz_constants(const QuadraticGame& game);

// Per-player quadratic cost data:
//   f_i(x) = x_i' * quad * x_i + x_i' * linear + constant
//            + sum over couplings (j, w) of w * ||x_i - x_j||^2.
struct QuadraticPlayer {
  Eigen::MatrixXd quad;     // d x d
  Eigen::VectorXd linear;   // d
  double constant = 0.0;
  std::vector<std::pair<int, double>> couplings;  // (other player 0-based, w)
  PlayerOrder order = PlayerOrder::kFirst;
};

// Assembles the oracle game and its stacked affine pseudo-gradient from
// per-player quadratic data. The cross-Hessian oracle is populated (it is
// constant for quadratic games).
std::pair<GameDefinition, QuadraticGame> make_quadratic_game(
    int action_dim, const std::vector<QuadraticPlayer>& players);

// The built-in 5-vehicle connectivity-control game: planar vehicles (d=2)
// with self costs i*||x_i||^2 + x_i'*[i,i]' + i, pairwise connectivity
// couplings, vehicles 1-3 first-order and 4-5 second-order, plus their
// unknown drifts and sinusoidal disturbances.
struct Vehicles5 {
  GameDefinition game;
  QuadraticGame quadratic;
  DisturbanceModel disturbance;
};

Vehicles5 vehicles5();

}  // namespace nashseek

#endif  // NASHSEEK_GAME_HPP_
