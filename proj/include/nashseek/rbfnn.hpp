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

#ifndef NASHSEEK_RBFNN_HPP_
#define NASHSEEK_RBFNN_HPP_

#include <vector>

#include <Eigen/Dense>

#include "nashseek/errors.hpp"

namespace nashseek {

// Gaussian radial-basis-function network with a norm-capped linear output
// layer: s_i(z) = exp(-||z - mu_i||^2 / rho_i^2), output W'S(z), with the
// adaptive weight matrix W (q x output_dim) constrained to
// trace(W'W) <= w_max by a projection law.
class RbfNetwork {
 public:
  // `centers` is q x input_dim (one center per row); `widths` has q positive
  // entries. Weights start at zero.
  RbfNetwork(Eigen::MatrixXd centers, Eigen::VectorXd widths, int output_dim,
             double w_max, double beta);

  // Places scalar centers diagonally in the input space: mu_i = c_i * ones.
  // All neurons share the given width.
  static RbfNetwork from_scalar_centers(const std::vector<double>& centers,
                                        double width, int input_dim,
                                        int output_dim, double w_max,
                                        double beta);

  int q() const { return static_cast<int>(centers_.rows()); }
  int input_dim() const { return static_cast<int>(centers_.cols()); }
  int output_dim() const { return static_cast<int>(weights_.cols()); }
  double w_max() const { return w_max_; }
  double beta() const { return beta_; }
  const Eigen::MatrixXd& centers() const { return centers_; }
  const Eigen::VectorXd& widths() const { return widths_; }
  const Eigen::MatrixXd& weights() const { return weights_; }
  Eigen::MatrixXd& weights() { return weights_; }
  // trace(W'W), the squared Frobenius norm of the weight matrix.
  double weight_trace() const { return weights_.squaredNorm(); }

 private:
  Eigen::MatrixXd centers_;
  Eigen::VectorXd widths_;
  Eigen::MatrixXd weights_;
  double w_max_;
  double beta_;
};

// Activation vector S(z) with s_i = exp(-||z - mu_i||^2 / rho_i^2); every
// entry lies in (0, 1].
Eigen::VectorXd activation(const RbfNetwork& net, const Eigen::VectorXd& z);

// Network output W'S(z) (length output_dim).
Eigen::VectorXd approximate(const RbfNetwork& net, const Eigen::VectorXd& z);

// Projection-bounded adaptive law. With S = activation and e the regulation
// signal (length output_dim):
//   - interior (trace < w_max) or inward boundary (trace at the cap and
//     e'W'S < 0): returns beta * S * e';
//   - outward boundary (trace at the cap and e'W'S >= 0): returns
//     beta * S * e' - beta * (e'W'S / trace(W'W)) * W, which is exactly
//     orthogonal to W so the trace cannot grow.
// "At the cap" uses the tolerance trace >= w_max*(1 - 1e-9), since exact
// boundary arrival never happens in floating point. Throws CapViolated if
// the entry trace exceeds w_max*(1 + 1e-9).
Eigen::MatrixXd weight_derivative(const RbfNetwork& net,
                                  const Eigen::VectorXd& s,
                                  const Eigen::VectorXd& e);

// Radially rescales w onto the cap if trace(w'w) > w_max (no-op otherwise).
// Used by integrators after each committed step (and on stage inputs) to
// remove the O(dt^2) drift of the continuous projection law.
void clamp_weight_matrix(Eigen::Ref<Eigen::MatrixXd> w, double w_max);

// Convenience overload operating on a network's own weights.
void clamp_weights(RbfNetwork& net);

// The damping constant kappa ~= 0.27846: the unique fixed point of
// kappa = exp(-(kappa + 1)), computed once by damped fixed-point iteration
// from 0.25 to 1e-12 and cached.
double tanh_kappa();

// Robustifying damping term phi = delta * tanh(kappa * delta * e / epsilon),
// applied component-wise; |phi| < delta always. It dominates any residual
// bounded by delta up to a floor of kappa * epsilon per component.
Eigen::VectorXd damping_phi(const Eigen::VectorXd& e, double delta,
                            double epsilon, double kappa);

}  // namespace nashseek

#endif  // NASHSEEK_RBFNN_HPP_
