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

#ifndef NASHSEEK_CONTROLLER_HPP_
#define NASHSEEK_CONTROLLER_HPP_

#include <vector>

#include <Eigen/Dense>

#include "nashseek/errors.hpp"
#include "nashseek/game.hpp"
#include "nashseek/graph.hpp"
#include "nashseek/rbfnn.hpp"

namespace nashseek {

// Controller gains plus the damping parameters of the robustifying term.
// All must be strictly positive.
//   k1: first-order regulation gain (x_i toward z_i)
//   k2: gradient-play step gain
//   k3: consensus-estimator gain
//   k4: second-order velocity/regulation gain
//   delta, epsilon: damping term phi = delta*tanh(kappa*delta*e/epsilon)
struct Gains {
  double k1 = 30.0;
  double k2 = 0.125;
  double k3 = 40.0;
  double k4 = 60.0;
  double delta = 10.0;
  double epsilon = 0.01;

  // Throws InvalidArgument unless every field is strictly positive.
  void validate() const;
};

// Full multi-player seeker state. For player i (0-based):
//   x[i]: action, length d;
//   z[i]: auxiliary gradient-play state, length d, present exactly for
//         first-order players (size 0 otherwise);
//   v[i]: velocity, length d, present exactly for second-order players;
//   y[i]: player i's estimate of the stacked reference profile, length n*d;
//   w[i]: adaptive NN weight matrix, q x d (may be 0 x 0 in the
//         disturbance-free variant).
struct SeekerState {
  std::vector<Eigen::VectorXd> x;
  std::vector<Eigen::VectorXd> v;
  std::vector<Eigen::VectorXd> z;
  std::vector<Eigen::VectorXd> y;
  std::vector<Eigen::MatrixXd> w;
};

// Checks shapes against the game (exactly one of v/z per player, matching
// its order tag; y length n*d) and that all entries are finite. Throws
// DimensionMismatch or InvalidArgument.
void validate_state(const SeekerState& s, const GameDefinition& game);

// Stacked reference profile: z_j for first-order players, x_j for
// second-order players. This is the signal every estimator tracks. The
// orders are inferred from which of z_j/x_j-only fields are populated.
Eigen::VectorXd xbar(const SeekerState& s);

// Consensus-estimator derivative for player i, component form:
//   ydot_ij = -k3 * ( sum_k a_ik (y_ij - y_kj) + a_ij (y_ij - xbar_j) )
// applied per coordinate of each d-block. Reads only player i's own row of
// the adjacency matrix and its neighbors' estimates (locality).
Eigen::VectorXd estimator_derivative(int i, const SeekerState& s,
                                     const CommGraph& g, double k3);

// Regulation signal: e_i = x_i - z_i for first-order players,
// e_i = k2 * grad_i f_i(y_i) + v_i (the composite velocity target) for
// second-order players. Feeds both the adaptive law and the damping term.
Eigen::VectorXd regulation_signal(int i, const SeekerState& s,
                                  const GameDefinition& game, double k2);

// First-order control law:
//   u_i = -k1 (x_i - z_i) - W_i'S_i(y_i) - phi_i.
// Passing net == nullptr drops the NN and damping terms (the
// disturbance-free variant). Throws WrongOrder for second-order players.
// The NN weights are read from the state (s.w[i]); `net` supplies the
// basis-function geometry and the damping constant's scale.
Eigen::VectorXd control_first_order(int i, const SeekerState& s,
                                    const GameDefinition& game, const Gains& k,
                                    const RbfNetwork* net);

// Gradient-play auxiliary dynamics for first-order players:
//   zdot_i = -k2 * grad_i f_i(y_i),
// with the gradient evaluated at player i's own estimate y_i, never at the
// true profile. Throws WrongOrder for second-order players.
Eigen::VectorXd z_derivative(int i, const SeekerState& s,
                             const GameDefinition& game, double k2);

// Second-order control law:
//   u_i = -k2 k4 grad_i f_i(y_i) - k4 v_i - W_i'S_i(y_i) - phi_i
// with phi evaluated on the composite signal k2*grad_i f_i(y_i) + v_i.
// Passing net == nullptr drops the NN and damping terms. Throws WrongOrder
// for first-order players.
Eigen::VectorXd control_second_order(int i, const SeekerState& s,
                                     const GameDefinition& game,
                                     const Gains& k, const RbfNetwork* net);

}  // namespace nashseek

#endif  // NASHSEEK_CONTROLLER_HPP_
