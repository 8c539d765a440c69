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

#ifndef NASHSEEK_ERRORS_HPP_
#define NASHSEEK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace nashseek {

// Common base for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value fails a constructor- or setter-level contract (bad adjacency
// entries, non-positive gains, malformed configuration, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Operand shapes are inconsistent (vector length, matrix size, player count).
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// The communication graph is not connected, so a matrix that requires
// connectivity (the estimator matrix) would be singular.
class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

// A matrix required to be symmetric positive definite is not.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

// A linear system is singular or conditioned beyond the trusted range.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

// The game's pseudo-gradient is not strongly monotone (lambda_min of the
// symmetric part of its Jacobian is <= 0), so no unique equilibrium is
// guaranteed.
class NotStronglyMonotone : public Error {
 public:
  using Error::Error;
};

// A control law meant for one integrator order was invoked on a player of
// the other order.
class WrongOrder : public Error {
 public:
  using Error::Error;
};

// An adaptive-weight matrix arrived with trace(W'W) above the cap beyond
// the numerical tolerance, violating the projection law's precondition.
class CapViolated : public Error {
 public:
  using Error::Error;
};

// The Lyapunov surrogate needs the exact equilibrium, which is only
// available for games with a quadratic representation.
class NoKnownEquilibrium : public Error {
 public:
  using Error::Error;
};

// A state derivative evaluated to NaN/Inf. `component` is the offending
// index in the flat state layout.
class NonFiniteDerivative : public Error {
 public:
  NonFiniteDerivative(const std::string& what, int component)
      : Error(what), component(component) {}
  int component;
};

// The integrated state became NaN/Inf (blow-up). `t` is the simulated time
// at detection and `component` the first non-finite index.
class NonFiniteState : public Error {
 public:
  NonFiniteState(const std::string& what, double t, int component)
      : Error(what), t(t), component(component) {}
  double t;
  int component;
};

}  // namespace nashseek

#endif  // NASHSEEK_ERRORS_HPP_
