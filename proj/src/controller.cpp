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

#include "nashseek/controller.hpp"

#include <string>

namespace nashseek {

void Gains::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0)) {
      throw InvalidArgument(std::string("Gains: ") + name +
                            " must be strictly positive, got " +
                            std::to_string(v));
    }
  };
  check(k1, "k1");
  check(k2, "k2");
  check(k3, "k3");
  check(k4, "k4");
  check(delta, "delta");
  check(epsilon, "epsilon");
}

void validate_state(const SeekerState& s, const GameDefinition& game) {
  const int n = game.n_players();
  const int d = game.action_dim();
  auto sized = [n](const auto& field, const char* name) {
    if (static_cast<int>(field.size()) != n) {
      throw DimensionMismatch(std::string("SeekerState: ") + name + " has " +
                              std::to_string(field.size()) +
                              " entries, expected " + std::to_string(n));
    }
  };
  sized(s.x, "x");
  sized(s.v, "v");
  sized(s.z, "z");
  sized(s.y, "y");
  for (int i = 0; i < n; ++i) {
    const bool first = game.order(i) == PlayerOrder::kFirst;
    if (s.x[i].size() != d) {
      throw DimensionMismatch("SeekerState: x[" + std::to_string(i + 1) +
                              "] has length " + std::to_string(s.x[i].size()) +
                              ", expected " + std::to_string(d));
    }
    if (first && (s.z[i].size() != d || s.v[i].size() != 0)) {
      throw InvalidArgument("SeekerState: first-order player " +
                            std::to_string(i + 1) +
                            " must carry z (length d) and no v");
    }
    if (!first && (s.v[i].size() != d || s.z[i].size() != 0)) {
      throw InvalidArgument("SeekerState: second-order player " +
                            std::to_string(i + 1) +
                            " must carry v (length d) and no z");
    }
    if (s.y[i].size() != n * d) {
      throw DimensionMismatch("SeekerState: y[" + std::to_string(i + 1) +
                              "] has length " + std::to_string(s.y[i].size()) +
                              ", expected " + std::to_string(n * d));
    }
    const bool finite = s.x[i].allFinite() && s.y[i].allFinite() &&
                        (first ? s.z[i].allFinite() : s.v[i].allFinite()) &&
                        (i < static_cast<int>(s.w.size())
                             ? s.w[i].allFinite()
                             : true);
    if (!finite) {
      throw InvalidArgument("SeekerState: non-finite entry for player " +
                            std::to_string(i + 1));
    }
  }
}

Eigen::VectorXd xbar(const SeekerState& s) {
  const int n = static_cast<int>(s.x.size());
  Eigen::Index total = 0;
  for (int j = 0; j < n; ++j) total += s.x[j].size();
  Eigen::VectorXd out(total);
  Eigen::Index at = 0;
  for (int j = 0; j < n; ++j) {
    // First-order players publish their auxiliary state z_j; second-order
    // players publish the action x_j itself.
    const Eigen::VectorXd& block = s.z[j].size() > 0 ? s.z[j] : s.x[j];
    out.segment(at, block.size()) = block;
    at += block.size();
  }
  return out;
}

Eigen::VectorXd estimator_derivative(int i, const SeekerState& s,
                                     const CommGraph& g, double k3) {
  const int n = g.n_players();
  const Eigen::VectorXd& yi = s.y[i];
  const int d = static_cast<int>(yi.size()) / n;
  const Eigen::VectorXd ref = xbar(s);
  Eigen::VectorXd ydot = Eigen::VectorXd::Zero(yi.size());
  for (int j = 0; j < n; ++j) {
    for (int c = 0; c < d; ++c) {
      const Eigen::Index at = j * d + c;
      double disagree = 0.0;
      for (int k = 0; k < n; ++k) {
        if (g.adjacency()(i, k) != 0.0) disagree += yi(at) - s.y[k](at);
      }
      if (g.adjacency()(i, j) != 0.0) disagree += yi(at) - ref(at);
      ydot(at) = -k3 * disagree;
    }
  }
  return ydot;
}

Eigen::VectorXd regulation_signal(int i, const SeekerState& s,
                                  const GameDefinition& game, double k2) {
  if (game.order(i) == PlayerOrder::kFirst) {
    return s.x[i] - s.z[i];
  }
  return k2 * game.gradient(i, s.y[i]) + s.v[i];
}

namespace {

// Shared NN + damping tail of both control laws: W_i'S_i(y_i) + phi_i(e).
Eigen::VectorXd compensation(int i, const SeekerState& s, const Gains& k,
                             const RbfNetwork& net, const Eigen::VectorXd& e) {
  const Eigen::VectorXd si = activation(net, s.y[i]);
  if (i >= static_cast<int>(s.w.size()) || s.w[i].rows() != net.q() ||
      s.w[i].cols() != e.size()) {
    throw DimensionMismatch("control law: state weight matrix of player " +
                            std::to_string(i + 1) +
                            " does not match the network");
  }
  return s.w[i].transpose() * si +
         damping_phi(e, k.delta, k.epsilon, tanh_kappa());
}

}  // namespace

Eigen::VectorXd control_first_order(int i, const SeekerState& s,
                                    const GameDefinition& game, const Gains& k,
                                    const RbfNetwork* net) {
  if (game.order(i) != PlayerOrder::kFirst) {
    throw WrongOrder("control_first_order: player " + std::to_string(i + 1) +
                     " is a second-order integrator");
  }
  const Eigen::VectorXd e = s.x[i] - s.z[i];
  Eigen::VectorXd u = -k.k1 * e;
  if (net != nullptr) u -= compensation(i, s, k, *net, e);
  return u;
}

Eigen::VectorXd z_derivative(int i, const SeekerState& s,
                             const GameDefinition& game, double k2) {
  if (game.order(i) != PlayerOrder::kFirst) {
    throw WrongOrder("z_derivative: player " + std::to_string(i + 1) +
                     " is a second-order integrator");
  }
  // Gradient play on the player's own estimate of the profile, never on the
  // true actions.
  return -k2 * game.gradient(i, s.y[i]);
}

Eigen::VectorXd control_second_order(int i, const SeekerState& s,
                                     const GameDefinition& game,
                                     const Gains& k, const RbfNetwork* net) {
  if (game.order(i) != PlayerOrder::kSecond) {
    throw WrongOrder("control_second_order: player " + std::to_string(i + 1) +
                     " is a first-order integrator");
  }
  const Eigen::VectorXd grad = game.gradient(i, s.y[i]);
  const Eigen::VectorXd vbar = k.k2 * grad + s.v[i];
  Eigen::VectorXd u = -k.k2 * k.k4 * grad - k.k4 * s.v[i];
  if (net != nullptr) u -= compensation(i, s, k, *net, vbar);
  return u;
}

}  // namespace nashseek
