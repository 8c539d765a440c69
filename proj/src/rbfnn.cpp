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

#include "nashseek/rbfnn.hpp"

#include <cmath>
#include <string>

namespace nashseek {

namespace {
// Relative tolerance for "the weight matrix sits at the cap": exact
// equality never holds in floating point.
constexpr double kCapTol = 1e-9;
}  // namespace

RbfNetwork::RbfNetwork(Eigen::MatrixXd centers, Eigen::VectorXd widths,
                       int output_dim, double w_max, double beta)
    : centers_(std::move(centers)),
      widths_(std::move(widths)),
      w_max_(w_max),
      beta_(beta) {
  if (centers_.rows() == 0 || centers_.cols() == 0) {
    throw InvalidArgument("RbfNetwork: need at least one neuron and a "
                          "positive input dimension");
  }
  if (widths_.size() != centers_.rows()) {
    throw DimensionMismatch("RbfNetwork: " + std::to_string(widths_.size()) +
                            " widths for " + std::to_string(centers_.rows()) +
                            " centers");
  }
  if ((widths_.array() <= 0.0).any()) {
    throw InvalidArgument("RbfNetwork: widths must be strictly positive");
  }
  if (output_dim <= 0 || w_max_ <= 0.0 || beta_ <= 0.0) {
    throw InvalidArgument(
        "RbfNetwork: output_dim, w_max and beta must be positive");
  }
  weights_ = Eigen::MatrixXd::Zero(centers_.rows(), output_dim);
}

RbfNetwork RbfNetwork::from_scalar_centers(const std::vector<double>& centers,
                                           double width, int input_dim,
                                           int output_dim, double w_max,
                                           double beta) {
  const int q = static_cast<int>(centers.size());
  if (q == 0) {
    throw InvalidArgument("RbfNetwork: empty center list");
  }
  Eigen::MatrixXd mu(q, input_dim);
  for (int i = 0; i < q; ++i) mu.row(i).setConstant(centers[i]);
  return RbfNetwork(std::move(mu), Eigen::VectorXd::Constant(q, width),
                    output_dim, w_max, beta);
}

Eigen::VectorXd activation(const RbfNetwork& net, const Eigen::VectorXd& z) {
  if (z.size() != net.input_dim()) {
    throw DimensionMismatch("activation: input has length " +
                            std::to_string(z.size()) + ", expected " +
                            std::to_string(net.input_dim()));
  }
  const int q = net.q();
  Eigen::VectorXd s(q);
  for (int i = 0; i < q; ++i) {
    const double dist2 = (z - net.centers().row(i).transpose()).squaredNorm();
    const double rho = net.widths()(i);
    s(i) = std::exp(-dist2 / (rho * rho));
  }
  return s;
}

Eigen::VectorXd approximate(const RbfNetwork& net, const Eigen::VectorXd& z) {
  return net.weights().transpose() * activation(net, z);
}

Eigen::MatrixXd weight_derivative(const RbfNetwork& net,
                                  const Eigen::VectorXd& s,
                                  const Eigen::VectorXd& e) {
  if (s.size() != net.q() || e.size() != net.output_dim()) {
    throw DimensionMismatch(
        "weight_derivative: activation/signal sizes (" +
        std::to_string(s.size()) + ", " + std::to_string(e.size()) +
        ") do not match the network (" + std::to_string(net.q()) + ", " +
        std::to_string(net.output_dim()) + ")");
  }
  const double trace = net.weight_trace();
  if (trace > net.w_max() * (1.0 + kCapTol)) {
    throw CapViolated("weight_derivative: trace(W'W) = " +
                      std::to_string(trace) + " exceeds the cap " +
                      std::to_string(net.w_max()));
  }
  Eigen::MatrixXd dw = net.beta() * s * e.transpose();
  const bool at_cap = trace >= net.w_max() * (1.0 - kCapTol);
  if (at_cap) {
    // e'W'S > 0 means the nominal update points outward; remove its radial
    // component so <W, dW/dt> = 0 exactly and the cap cannot be crossed.
    const double outward = e.dot(net.weights().transpose() * s);
    if (outward >= 0.0) {
      dw -= net.beta() * (outward / trace) * net.weights();
    }
  }
  return dw;
}

void clamp_weight_matrix(Eigen::Ref<Eigen::MatrixXd> w, double w_max) {
  const double trace = w.squaredNorm();
  if (trace > w_max) {
    w *= std::sqrt(w_max / trace);
  }
}

void clamp_weights(RbfNetwork& net) {
  clamp_weight_matrix(net.weights(), net.w_max());
}

double tanh_kappa() {
  // Fixed point of kappa = exp(-(kappa+1)): contraction on (0, 1), solved
  // once by damped iteration and cached.
  static const double kappa = [] {
    double k = 0.25;
    for (int it = 0; it < 200; ++it) {
      const double next = k + 0.5 * (std::exp(-(k + 1.0)) - k);
      if (std::abs(next - k) < 1e-15) {
        k = next;
        break;
      }
      k = next;
    }
    return k;
  }();
  return kappa;
}

Eigen::VectorXd damping_phi(const Eigen::VectorXd& e, double delta,
                            double epsilon, double kappa) {
  if (delta <= 0.0 || epsilon <= 0.0) {
    throw InvalidArgument("damping_phi: delta and epsilon must be positive");
  }
  return (delta * (kappa * delta / epsilon * e.array()).tanh()).matrix();
}

}  // namespace nashseek
