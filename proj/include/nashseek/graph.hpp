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

#ifndef NASHSEEK_GRAPH_HPP_
#define NASHSEEK_GRAPH_HPP_

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nashseek/errors.hpp"

namespace nashseek {

// Undirected, unweighted communication topology among the players.
//
// Adjacency entries are restricted to {0,1} with a zero diagonal and a
// symmetric pattern; the constructor rejects anything else. Connectivity is
// deliberately *not* a construction requirement (so disconnected graphs can
// be probed with is_connected); operations that need it check it themselves
// and throw DisconnectedGraph.
class CommGraph {
 public:
  CommGraph(int n_players, Eigen::MatrixXd adjacency);

  // Builds a graph from a 1-based edge list, e.g. {{1,2},{2,3}}.
  static CommGraph from_edges(int n_players,
                              const std::vector<std::pair<int, int>>& edges);
  static CommGraph ring(int n_players);
  static CommGraph path(int n_players);
  static CommGraph complete(int n_players);

  int n_players() const { return n_; }
  const Eigen::MatrixXd& adjacency() const { return adj_; }

  // 0-based neighbor indices of player i, ascending.
  std::vector<int> neighbors(int i) const;

 private:
  int n_;
  Eigen::MatrixXd adj_;
};

// Graph Laplacian L = D - A. Symmetric positive semidefinite; rows sum to 0.
Eigen::MatrixXd laplacian(const CommGraph& g);

// True iff every node is reachable from node 0 by breadth-first traversal.
bool is_connected(const CommGraph& g);

// Estimator system matrix (L (x) I_n + A0) (x) I_d, where A0 is the
// n^2-diagonal of row-major adjacency entries (a_11, a_12, ..., a_nn) and
// (x) denotes the Kronecker product. Symmetric positive definite exactly
// when the graph is connected; throws DisconnectedGraph otherwise.
Eigen::MatrixXd estimator_matrix(const CommGraph& g, int action_dim);

// Solves the continuous Lyapunov equation P*m + m*P = q for symmetric
// positive definite m and q, via the eigendecomposition of m (in m's
// eigenbasis, P~_ij = Q~_ij / (lambda_i + lambda_j)). The result is
// symmetric positive definite with relative residual below 1e-9.
// Throws DimensionMismatch on shape conflicts and NotPositiveDefinite if m
// has a non-positive eigenvalue.
Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& m,
                               const Eigen::MatrixXd& q);

}  // namespace nashseek

#endif  // NASHSEEK_GRAPH_HPP_
