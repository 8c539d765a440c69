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

#include "nashseek/graph.hpp"

#include <deque>
#include <string>

namespace nashseek {

CommGraph::CommGraph(int n_players, Eigen::MatrixXd adjacency)
    : n_(n_players), adj_(std::move(adjacency)) {
  if (n_ <= 0) {
    throw InvalidArgument("CommGraph: n_players must be positive, got " +
                          std::to_string(n_));
  }
  if (adj_.rows() != n_ || adj_.cols() != n_) {
    throw DimensionMismatch("CommGraph: adjacency must be " +
                            std::to_string(n_) + "x" + std::to_string(n_) +
                            ", got " + std::to_string(adj_.rows()) + "x" +
                            std::to_string(adj_.cols()));
  }
  for (int i = 0; i < n_; ++i) {
    if (adj_(i, i) != 0.0) {
      throw InvalidArgument("CommGraph: nonzero diagonal at node " +
                            std::to_string(i + 1));
    }
    for (int j = 0; j < n_; ++j) {
      const double a = adj_(i, j);
      if (a != 0.0 && a != 1.0) {
        throw InvalidArgument(
            "CommGraph: adjacency entries must be 0 or 1 (weighted graphs "
            "are not supported), got " +
            std::to_string(a) + " at (" + std::to_string(i + 1) + "," +
            std::to_string(j + 1) + ")");
      }
      if (a != adj_(j, i)) {
        throw InvalidArgument("CommGraph: adjacency must be symmetric "
                              "(undirected graph), asymmetry at (" +
                              std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")");
      }
    }
  }
}

CommGraph CommGraph::from_edges(
    int n_players, const std::vector<std::pair<int, int>>& edges) {
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n_players, n_players);
  for (const auto& [a, b] : edges) {
    if (a < 1 || a > n_players || b < 1 || b > n_players) {
      throw InvalidArgument("CommGraph: edge (" + std::to_string(a) + "," +
                            std::to_string(b) +
                            ") out of range for n_players = " +
                            std::to_string(n_players));
    }
    if (a == b) {
      throw InvalidArgument("CommGraph: self-loop at node " +
                            std::to_string(a));
    }
    adj(a - 1, b - 1) = 1.0;
    adj(b - 1, a - 1) = 1.0;
  }
  return CommGraph(n_players, std::move(adj));
}

CommGraph CommGraph::ring(int n_players) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n_players; ++i) edges.emplace_back(i, i + 1);
  if (n_players > 2) edges.emplace_back(n_players, 1);
  return from_edges(n_players, edges);
}

CommGraph CommGraph::path(int n_players) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i < n_players; ++i) edges.emplace_back(i, i + 1);
  return from_edges(n_players, edges);
}

CommGraph CommGraph::complete(int n_players) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= n_players; ++i)
    for (int j = i + 1; j <= n_players; ++j) edges.emplace_back(i, j);
  return from_edges(n_players, edges);
}

std::vector<int> CommGraph::neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < n_; ++j)
    if (adj_(i, j) != 0.0) out.push_back(j);
  return out;
}

Eigen::MatrixXd laplacian(const CommGraph& g) {
  const Eigen::MatrixXd& a = g.adjacency();
  Eigen::MatrixXd l = -a;
  l.diagonal() = a.rowwise().sum();
  return l;
}

bool is_connected(const CommGraph& g) {
  const int n = g.n_players();
  std::vector<bool> seen(n, false);
  std::deque<int> queue{0};
  seen[0] = true;
  int reached = 1;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v = 0; v < n; ++v) {
      if (g.adjacency()(u, v) != 0.0 && !seen[v]) {
        seen[v] = true;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == n;
}

namespace {

Eigen::MatrixXd kron_identity(const Eigen::MatrixXd& a, int d) {
  if (d == 1) return a;
  const auto rows = a.rows();
  const auto cols = a.cols();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(rows * d, cols * d);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      for (int k = 0; k < d; ++k) out(i * d + k, j * d + k) = a(i, j);
  return out;
}

}  // namespace

Eigen::MatrixXd estimator_matrix(const CommGraph& g, int action_dim) {
  if (action_dim < 1) {
    throw InvalidArgument("estimator_matrix: action_dim must be >= 1, got " +
                          std::to_string(action_dim));
  }
  if (!is_connected(g)) {
    throw DisconnectedGraph(
        "estimator_matrix: the communication graph is not connected, the "
        "estimator matrix would be singular");
  }
  const int n = g.n_players();
  // Core (n^2 x n^2): L (x) I_n plus the diagonal of row-major adjacency
  // entries, injecting each player's direct measurement of its neighbors'
  // reference components.
  Eigen::MatrixXd core = kron_identity(laplacian(g), n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) core(i * n + j, i * n + j) += g.adjacency()(i, j);
  return kron_identity(core, action_dim);
}

Eigen::MatrixXd solve_lyapunov(const Eigen::MatrixXd& m,
                               const Eigen::MatrixXd& q) {
  if (m.rows() != m.cols() || q.rows() != q.cols() || m.rows() != q.rows()) {
    throw DimensionMismatch("solve_lyapunov: m is " + std::to_string(m.rows()) +
                            "x" + std::to_string(m.cols()) + ", q is " +
                            std::to_string(q.rows()) + "x" +
                            std::to_string(q.cols()) +
                            "; need equal square sizes");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) {
    throw SingularSystem("solve_lyapunov: eigendecomposition failed");
  }
  const Eigen::VectorXd& lambda = es.eigenvalues();
  if (lambda.minCoeff() <= 0.0) {
    throw NotPositiveDefinite(
        "solve_lyapunov: m must be positive definite (lambda_min = " +
        std::to_string(lambda.minCoeff()) + ")");
  }
  // In m's eigenbasis the equation decouples entry-wise:
  // P~_ij (lambda_i + lambda_j) = Q~_ij.
  const Eigen::MatrixXd& u = es.eigenvectors();
  Eigen::MatrixXd qt = u.transpose() * q * u;
  for (Eigen::Index i = 0; i < qt.rows(); ++i)
    for (Eigen::Index j = 0; j < qt.cols(); ++j)
      qt(i, j) /= lambda(i) + lambda(j);
  Eigen::MatrixXd p = u * qt * u.transpose();
  // Symmetrize away rounding noise.
  return 0.5 * (p + p.transpose());
}

}  // namespace nashseek
