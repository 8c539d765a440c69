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

#ifndef NASHSEEK_SIM_HPP_
#define NASHSEEK_SIM_HPP_

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nashseek/controller.hpp"
#include "nashseek/errors.hpp"
#include "nashseek/game.hpp"
#include "nashseek/graph.hpp"
#include "nashseek/rbfnn.hpp"

namespace nashseek {

// kFull runs the complete laws (NN compensation + damping + disturbances);
// kDisturbanceFree drops the NN, the damping term, and g_i/d_i entirely.
enum class Variant { kFull, kDisturbanceFree };

// Estimator initialization: each y_i(0) = the stacked initial reference
// profile (kSeeded) or zeros (kZero).
enum class Y0Mode { kSeeded, kZero };

struct IntegratorSettings {
  double dt = 1e-3;
  double t_final = 50.0;
  int stride = 10;  // record every `stride` steps (plus the final state)

  void validate() const;  // dt > 0, t_final >= dt, stride >= 1
};

// Network hyperparameters shared by all players' networks. Scalar centers
// are placed diagonally in the (n*d)-dimensional estimator input space.
struct RbfHyper {
  std::vector<double> centers;  // scalar center list
  double width = 7.0710678118654755;  // 5*sqrt(2)
  double w_max = 500.0;
  double beta = 100.0;

  void validate() const;
};

// Default hyperparameters: 11 centers at -2.5, -2, ..., 2.5, width 5*sqrt(2),
// w_max 500, beta 100.
RbfHyper default_rbf_hyper();

// A complete experiment description. Construct via vehicles5_scenario() or
// the (game, graph) constructor plus field assignment; integrate() validates
// cross-field consistency.
struct Scenario {
  Scenario(GameDefinition game_in, CommGraph graph_in)
      : game(std::move(game_in)), graph(std::move(graph_in)) {}

  std::string name = "custom";
  GameDefinition game;
  std::optional<QuadraticGame> quadratic;
  CommGraph graph;
  Gains gains;
  RbfHyper rbf = default_rbf_hyper();
  std::optional<DisturbanceModel> disturbance;
  Variant variant = Variant::kFull;

  Eigen::VectorXd x0;  // n*d stacked initial actions
  Eigen::VectorXd v0;  // stacked over second-order players; empty = zeros
  Eigen::VectorXd z0;  // stacked over first-order players; empty = x0 blocks
  Y0Mode y0_mode = Y0Mode::kSeeded;
  // Initial NN weights per player (q x d); empty = zeros.
  std::vector<Eigen::MatrixXd> w0;

  IntegratorSettings integ;
  unsigned seed = 0;  // reserved for randomized verification suites

  // Throws InvalidArgument / DimensionMismatch / DisconnectedGraph on
  // inconsistent fields.
  void validate() const;
};

// The built-in 5-vehicle scenario: ring communication graph 1-2-3-4-5-1,
// default gains, default network hyperparameters, the published initial
// conditions, full variant, dt = 1e-3, t_final = 50, stride 10.
Scenario vehicles5_scenario();

// Recorded time series plus derived diagnostics. `wnorm` entries are
// trace(W_i'W_i) per player. If no quadratic representation is available,
// err_x and V are NaN.
struct Trajectory {
  int n_players = 0;
  int action_dim = 0;
  std::vector<PlayerOrder> orders;

  std::vector<double> t;
  std::vector<Eigen::VectorXd> x;      // n*d
  std::vector<Eigen::VectorXd> v;      // n_second*d
  std::vector<Eigen::VectorXd> z;      // n_first*d
  std::vector<Eigen::VectorXd> y;      // n*n*d
  std::vector<Eigen::VectorXd> wnorm;  // n

  std::vector<double> err_x;  // ||x - x*||_2
  std::vector<double> err_v;  // ||v||_2
  std::vector<double> V;      // Lyapunov surrogate

  size_t size() const { return t.size(); }
};

// Flat state layout used by the integrator:
//   [ x (n*d) | z (n_first*d) | v (n_second*d) | y (n*n*d)
//     | W (n * q * d, row-major per player) ]
// with z blocks ordered by ascending first-order player index, v blocks by
// ascending second-order player index. The W section is empty in the
// disturbance-free variant.
Eigen::VectorXd pack_state(const Scenario& sc, const SeekerState& s);
SeekerState unpack_state(const Scenario& sc, const Eigen::VectorXd& flat);

// Closed-loop vector field at flat state `state` and time `t`: concatenated
// derivatives of (x, z, v, y, W) in the flat layout, with g_i evaluated at
// the true profile x and d_i at time t. Throws NonFiniteDerivative (with the
// offending component) if any output entry is NaN/Inf.
Eigen::VectorXd closed_loop_derivative(const Scenario& sc,
                                       const Eigen::VectorXd& state, double t);

// One classical 4th-order Runge-Kutta step for a generic ODE right-hand
// side f(state, t).
Eigen::VectorXd rk4_step(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>& f,
    const Eigen::VectorXd& state, double t, double dt);

// Stability guard: returns a warning message if dt exceeds
// 0.5 / max(k1, k3 * lambda_max(M), k4) with M the estimator matrix;
// std::nullopt otherwise. integrate() prints the warning to stderr but
// continues.
std::optional<std::string> dt_guard(const Scenario& sc);

// Fixed-step RK4 over [0, t_final]; records every `stride` steps plus the
// final state. NN weight blocks are clamped onto the cap on stage inputs
// and after each committed step (see RbfNetwork). Throws NonFiniteState
// (with time and first bad component) on blow-up.
Trajectory integrate(const Scenario& sc);

// Lyapunov surrogate
//   V = 1/2 ||xbar - x*||^2 + 1/2 ||vbar_s||^2 + 1/2 ||x_f - z_f||^2
//       + (y - ones (x) xbar)' P (y - ones (x) xbar)
//       [ + 1/(2 beta) sum_i trace(W_i'W_i)   in the full variant ]
// with P = solve_lyapunov(M, I) and vbar_s the stacked second-order
// regulation signals. Throws NoKnownEquilibrium if the scenario has no
// quadratic representation (x* unknown).
double lyapunov_surrogate(const Scenario& sc, const Eigen::VectorXd& state);

// Summary metrics of a run. fitted_rate is the least-squares exponential
// decay rate of log||x - x*|| over the last half of the run, restricted to
// samples above the 1e-14 numerical floor; NaN when fewer than two samples
// qualify (reported as null in JSON).
struct Metrics {
  double final_err_2 = std::numeric_limits<double>::quiet_NaN();
  double final_err_inf = std::numeric_limits<double>::quiet_NaN();
  double final_vnorm = std::numeric_limits<double>::quiet_NaN();
  double fitted_rate = std::numeric_limits<double>::quiet_NaN();
  double max_wnorm = std::numeric_limits<double>::quiet_NaN();
  bool blown_up = false;
  // (threshold, first recorded time with err <= threshold; NaN if never).
  std::vector<std::pair<double, double>> time_to_tol;
};

Metrics metrics(const Trajectory& traj, const Eigen::VectorXd& xstar,
                const std::vector<double>& tolerances = {1e-1, 1e-2, 1e-3});

// Least-squares exponential decay rate of `err` against `t` over the last
// half (see Metrics::fitted_rate for the floor handling). Positive for
// decaying series.
double fit_decay_rate(const std::vector<double>& t,
                      const std::vector<double>& err);

// CSV export: a "# schema_version 1" comment line, then the header
//   t,x_1_1,...,x_N_d,v_...,z_...,wnorm_1..wnorm_N,err_x,err_v,V
// (v columns for second-order players only, z for first-order only), then
// one row per sample. Numbers use shortest round-trip formatting, so the
// bytes are locale-independent and reproducible.
void write_trajectory_csv(const Trajectory& traj, std::ostream& os);

// JSON export of the metrics with a schema_version field. NaN fields are
// emitted as null.
void write_summary_json(const Metrics& m, std::ostream& os);

}  // namespace nashseek

#endif  // NASHSEEK_SIM_HPP_
