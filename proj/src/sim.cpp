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

#include "nashseek/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace nashseek {

void IntegratorSettings::validate() const {
  if (!(dt > 0.0)) {
    throw InvalidArgument("IntegratorSettings: dt must be positive, got " +
                          std::to_string(dt));
  }
  if (!(t_final >= dt)) {
    throw InvalidArgument("IntegratorSettings: t_final must be >= dt");
  }
  if (stride < 1) {
    throw InvalidArgument("IntegratorSettings: stride must be >= 1, got " +
                          std::to_string(stride));
  }
}

void RbfHyper::validate() const {
  if (centers.empty()) {
    throw InvalidArgument("RbfHyper: center list must not be empty");
  }
  if (!(width > 0.0) || !(w_max > 0.0) || !(beta > 0.0)) {
    throw InvalidArgument("RbfHyper: width, w_max and beta must be positive");
  }
}

RbfHyper default_rbf_hyper() {
  RbfHyper h;
  h.centers.resize(11);
  for (int i = 0; i < 11; ++i) h.centers[i] = -2.5 + 0.5 * i;
  return h;
}

void Scenario::validate() const {
  gains.validate();
  integ.validate();
  rbf.validate();
  const int n = game.n_players();
  const int d = game.action_dim();
  if (graph.n_players() != n) {
    throw DimensionMismatch("Scenario: graph has " +
                            std::to_string(graph.n_players()) +
                            " nodes for " + std::to_string(n) + " players");
  }
  if (!is_connected(graph)) {
    throw DisconnectedGraph("Scenario: communication graph is not connected");
  }
  if (x0.size() != n * d) {
    throw DimensionMismatch("Scenario: x0 has length " +
                            std::to_string(x0.size()) + ", expected " +
                            std::to_string(n * d));
  }
  const int nf = game.n_first();
  const int ns = game.n_second();
  if (z0.size() != 0 && z0.size() != nf * d) {
    throw DimensionMismatch("Scenario: z0 has length " +
                            std::to_string(z0.size()) + ", expected " +
                            std::to_string(nf * d) + " (or empty)");
  }
  if (v0.size() != 0 && v0.size() != ns * d) {
    throw DimensionMismatch("Scenario: v0 has length " +
                            std::to_string(v0.size()) + ", expected " +
                            std::to_string(ns * d) + " (or empty)");
  }
  if (variant == Variant::kFull) {
    if (!disturbance.has_value()) {
      throw InvalidArgument(
          "Scenario: the full variant needs a disturbance model (zero "
          "functions are fine); use the disturbance_free variant otherwise");
    }
    if (static_cast<int>(disturbance->g.size()) != n ||
        static_cast<int>(disturbance->d.size()) != n) {
      throw DimensionMismatch(
          "Scenario: disturbance model must supply g_i and d_i for every "
          "player");
    }
    if (!w0.empty() && static_cast<int>(w0.size()) != n) {
      throw DimensionMismatch("Scenario: w0 must have one matrix per player");
    }
  }
  if (quadratic.has_value() && quadratic->b.rows() != n * d) {
    throw DimensionMismatch("Scenario: quadratic representation size " +
                            std::to_string(quadratic->b.rows()) +
                            " does not match n*d = " + std::to_string(n * d));
  }
}

Scenario vehicles5_scenario() {
  Vehicles5 v5 = vehicles5();
  Scenario sc(std::move(v5.game), CommGraph::ring(5));
  sc.name = "vehicles5";
  sc.quadratic = std::move(v5.quadratic);
  sc.disturbance = std::move(v5.disturbance);
  sc.x0 = Eigen::VectorXd(10);
  sc.x0 << -5, 8, -4, -6, 1, 8, 0, -8, -1, 10;
  sc.v0 = Eigen::VectorXd::Zero(4);
  return sc;
}

namespace {

// Flat-state bookkeeping: offsets of the [x | z | v | y | W] sections and
// the per-player slot order within the z and v sections.
struct Layout {
  int n = 0, d = 0, q = 0, nf = 0, ns = 0;
  bool has_w = false;
  int ox = 0, oz = 0, ov = 0, oy = 0, ow = 0, total = 0;
  std::vector<int> z_slot, v_slot;  // per player; -1 when absent

  Layout(const Scenario& sc) {
    n = sc.game.n_players();
    d = sc.game.action_dim();
    q = static_cast<int>(sc.rbf.centers.size());
    nf = sc.game.n_first();
    ns = sc.game.n_second();
    has_w = sc.variant == Variant::kFull;
    z_slot.assign(n, -1);
    v_slot.assign(n, -1);
    int zi = 0, vi = 0;
    for (int i = 0; i < n; ++i) {
      if (sc.game.order(i) == PlayerOrder::kFirst) z_slot[i] = zi++;
      else v_slot[i] = vi++;
    }
    ox = 0;
    oz = n * d;
    ov = oz + nf * d;
    oy = ov + ns * d;
    ow = oy + n * n * d;
    total = ow + (has_w ? n * q * d : 0);
  }
};

void resize_state(const Layout& lay, SeekerState& s) {
  s.x.assign(lay.n, Eigen::VectorXd(lay.d));
  s.v.assign(lay.n, Eigen::VectorXd());
  s.z.assign(lay.n, Eigen::VectorXd());
  s.y.assign(lay.n, Eigen::VectorXd(lay.n * lay.d));
  s.w.assign(lay.n, Eigen::MatrixXd());
  for (int i = 0; i < lay.n; ++i) {
    if (lay.z_slot[i] >= 0) s.z[i].resize(lay.d);
    else s.v[i].resize(lay.d);
    if (lay.has_w) s.w[i].resize(lay.q, lay.d);
  }
}

void unpack_into(const Layout& lay, const Eigen::VectorXd& flat,
                 SeekerState& s) {
  const int d = lay.d;
  for (int i = 0; i < lay.n; ++i) {
    s.x[i] = flat.segment(lay.ox + i * d, d);
    if (lay.z_slot[i] >= 0) s.z[i] = flat.segment(lay.oz + lay.z_slot[i] * d, d);
    else s.v[i] = flat.segment(lay.ov + lay.v_slot[i] * d, d);
    s.y[i] = flat.segment(lay.oy + i * lay.n * d, lay.n * d);
    if (lay.has_w) {
      // Row-major block: neuron-major, output coordinate minor.
      for (int r = 0; r < lay.q; ++r)
        for (int c = 0; c < d; ++c)
          s.w[i](r, c) = flat(lay.ow + (i * lay.q + r) * d + c);
    }
  }
}

void pack_into(const Layout& lay, const SeekerState& s, Eigen::VectorXd& flat) {
  const int d = lay.d;
  flat.resize(lay.total);
  for (int i = 0; i < lay.n; ++i) {
    flat.segment(lay.ox + i * d, d) = s.x[i];
    if (lay.z_slot[i] >= 0) flat.segment(lay.oz + lay.z_slot[i] * d, d) = s.z[i];
    else flat.segment(lay.ov + lay.v_slot[i] * d, d) = s.v[i];
    flat.segment(lay.oy + i * lay.n * d, lay.n * d) = s.y[i];
    if (lay.has_w) {
      for (int r = 0; r < lay.q; ++r)
        for (int c = 0; c < d; ++c)
          flat(lay.ow + (i * lay.q + r) * d + c) = s.w[i](r, c);
    }
  }
}

// Everything integrate() precomputes once per run.
struct SimContext {
  const Scenario* sc;
  Layout lay;
  std::vector<RbfNetwork> nets;  // one per player in the full variant
  bool has_quad = false;
  Eigen::VectorXd xstar;
  Eigen::MatrixXd p;  // Lyapunov-equation solution for the surrogate
  SeekerState scratch;
  mutable Eigen::VectorXd xfull;  // true stacked profile, rebuilt per call

  SimContext(const Scenario& scenario, bool need_lyapunov)
      : sc(&scenario), lay(scenario) {
    if (lay.has_w) {
      for (int i = 0; i < lay.n; ++i) {
        nets.push_back(RbfNetwork::from_scalar_centers(
            sc->rbf.centers, sc->rbf.width, lay.n * lay.d, lay.d,
            sc->rbf.w_max, sc->rbf.beta));
      }
    }
    if (sc->quadratic.has_value()) {
      has_quad = true;
      xstar = nash_oracle(*sc->quadratic);
      if (need_lyapunov) {
        const Eigen::MatrixXd m = estimator_matrix(sc->graph, lay.d);
        p = solve_lyapunov(m, Eigen::MatrixXd::Identity(m.rows(), m.cols()));
      }
    }
    resize_state(lay, scratch);
    xfull.resize(lay.n * lay.d);
  }

  Eigen::VectorXd derivative(const Eigen::VectorXd& flat, double t) {
    const Layout& l = lay;
    unpack_into(l, flat, scratch);
    SeekerState& s = scratch;
    const bool full = sc->variant == Variant::kFull;
    for (int i = 0; i < l.n; ++i) xfull.segment(i * l.d, l.d) = s.x[i];

    Eigen::VectorXd out(l.total);
    for (int i = 0; i < l.n; ++i) {
      RbfNetwork* net = full ? &nets[i] : nullptr;
      if (net != nullptr) net->weights() = s.w[i];

      Eigen::VectorXd xdot;
      if (l.z_slot[i] >= 0) {
        xdot = control_first_order(i, s, sc->game, sc->gains, net);
        if (full) {
          xdot += sc->disturbance->g[i](xfull) + sc->disturbance->d[i](t);
        }
        out.segment(l.oz + l.z_slot[i] * l.d, l.d) =
            z_derivative(i, s, sc->game, sc->gains.k2);
      } else {
        xdot = s.v[i];
        Eigen::VectorXd vdot =
            control_second_order(i, s, sc->game, sc->gains, net);
        if (full) {
          vdot += sc->disturbance->g[i](xfull) + sc->disturbance->d[i](t);
        }
        out.segment(l.ov + l.v_slot[i] * l.d, l.d) = vdot;
      }
      out.segment(l.ox + i * l.d, l.d) = xdot;
      out.segment(l.oy + i * l.n * l.d, l.n * l.d) =
          estimator_derivative(i, s, sc->graph, sc->gains.k3);
      if (full) {
        const Eigen::VectorXd e = regulation_signal(i, s, sc->game,
                                                    sc->gains.k2);
        const Eigen::VectorXd si = activation(nets[i], s.y[i]);
        const Eigen::MatrixXd wdot = weight_derivative(nets[i], si, e);
        for (int r = 0; r < l.q; ++r)
          for (int c = 0; c < l.d; ++c)
            out(l.ow + (i * l.q + r) * l.d + c) = wdot(r, c);
      }
    }
    if (!out.allFinite()) {
      for (Eigen::Index k = 0; k < out.size(); ++k) {
        if (!std::isfinite(out(k))) {
          throw NonFiniteDerivative(
              "closed_loop_derivative: non-finite derivative at component " +
                  std::to_string(k) + " (t = " + std::to_string(t) + ")",
              static_cast<int>(k));
        }
      }
    }
    return out;
  }

  // Radial clamp of every player's flat weight block onto the cap.
  void clamp_flat_weights(Eigen::VectorXd& flat) const {
    if (!lay.has_w) return;
    const int block = lay.q * lay.d;
    for (int i = 0; i < lay.n; ++i) {
      auto seg = flat.segment(lay.ow + i * block, block);
      const double trace = seg.squaredNorm();
      if (trace > sc->rbf.w_max) seg *= std::sqrt(sc->rbf.w_max / trace);
    }
  }

  double lyapunov(const SeekerState& s) const {
    const Layout& l = lay;
    const Eigen::VectorXd ref = xbar(s);
    double v = 0.5 * (ref - xstar).squaredNorm();
    Eigen::VectorXd dev(l.n * l.n * l.d);
    for (int i = 0; i < l.n; ++i)
      dev.segment(i * l.n * l.d, l.n * l.d) = s.y[i] - ref;
    v += dev.dot(p * dev);
    for (int i = 0; i < l.n; ++i) {
      if (l.z_slot[i] >= 0) {
        v += 0.5 * (s.x[i] - s.z[i]).squaredNorm();
      } else {
        v += 0.5 * regulation_signal(i, s, sc->game, sc->gains.k2)
                       .squaredNorm();
      }
      if (l.has_w) {
        v += s.w[i].squaredNorm() / (2.0 * sc->rbf.beta);
      }
    }
    return v;
  }
};

}  // namespace

Eigen::VectorXd pack_state(const Scenario& sc, const SeekerState& s) {
  Layout lay(sc);
  Eigen::VectorXd flat;
  pack_into(lay, s, flat);
  return flat;
}

SeekerState unpack_state(const Scenario& sc, const Eigen::VectorXd& flat) {
  Layout lay(sc);
  if (flat.size() != lay.total) {
    throw DimensionMismatch("unpack_state: flat state has length " +
                            std::to_string(flat.size()) + ", expected " +
                            std::to_string(lay.total));
  }
  SeekerState s;
  resize_state(lay, s);
  unpack_into(lay, flat, s);
  return s;
}

Eigen::VectorXd closed_loop_derivative(const Scenario& sc,
                                       const Eigen::VectorXd& state,
                                       double t) {
  SimContext ctx(sc, /*need_lyapunov=*/false);
  if (state.size() != ctx.lay.total) {
    throw DimensionMismatch("closed_loop_derivative: state has length " +
                            std::to_string(state.size()) + ", expected " +
                            std::to_string(ctx.lay.total));
  }
  return ctx.derivative(state, t);
}

Eigen::VectorXd rk4_step(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&, double)>& f,
    const Eigen::VectorXd& state, double t, double dt) {
  const Eigen::VectorXd k1 = f(state, t);
  const Eigen::VectorXd k2 = f(state + 0.5 * dt * k1, t + 0.5 * dt);
  const Eigen::VectorXd k3 = f(state + 0.5 * dt * k2, t + 0.5 * dt);
  const Eigen::VectorXd k4 = f(state + dt * k3, t + dt);
  return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::optional<std::string> dt_guard(const Scenario& sc) {
  const Eigen::MatrixXd m = estimator_matrix(sc.graph, sc.game.action_dim());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m,
                                                    Eigen::EigenvaluesOnly);
  const double lambda_max = es.eigenvalues().maxCoeff();
  const double stiffest = std::max({sc.gains.k1, sc.gains.k3 * lambda_max,
                                    sc.gains.k4});
  const double bound = 0.5 / stiffest;
  if (sc.integ.dt > bound) {
    std::ostringstream os;
    os << "warning: dt = " << sc.integ.dt
       << " exceeds the stability guard 0.5/max(k1, k3*lambda_max(M), k4) = "
       << bound << "; the fixed-step integration may be inaccurate";
    return os.str();
  }
  return std::nullopt;
}

namespace {

Eigen::VectorXd initial_flat_state(const SimContext& ctx) {
  const Scenario& sc = *ctx.sc;
  const Layout& l = ctx.lay;
  SeekerState s;
  resize_state(l, s);
  for (int i = 0; i < l.n; ++i) {
    s.x[i] = sc.x0.segment(i * l.d, l.d);
    if (l.z_slot[i] >= 0) {
      if (sc.z0.size() > 0) s.z[i] = sc.z0.segment(l.z_slot[i] * l.d, l.d);
      else s.z[i] = s.x[i];
    } else {
      if (sc.v0.size() > 0) s.v[i] = sc.v0.segment(l.v_slot[i] * l.d, l.d);
      else s.v[i] = Eigen::VectorXd::Zero(l.d);
    }
    if (l.has_w) {
      if (sc.w0.empty()) s.w[i] = Eigen::MatrixXd::Zero(l.q, l.d);
      else s.w[i] = sc.w0[i];
    }
  }
  const Eigen::VectorXd ref = xbar(s);
  for (int i = 0; i < l.n; ++i) {
    s.y[i] = sc.y0_mode == Y0Mode::kSeeded
                 ? ref
                 : Eigen::VectorXd::Zero(l.n * l.d).eval();
  }
  Eigen::VectorXd flat;
  pack_into(l, s, flat);
  return flat;
}

void record_sample(SimContext& ctx, const Eigen::VectorXd& flat, double t,
                   Trajectory& traj) {
  const Layout& l = ctx.lay;
  unpack_into(l, flat, ctx.scratch);
  const SeekerState& s = ctx.scratch;
  traj.t.push_back(t);
  traj.x.push_back(flat.segment(l.ox, l.n * l.d));
  traj.z.push_back(flat.segment(l.oz, l.nf * l.d));
  traj.v.push_back(flat.segment(l.ov, l.ns * l.d));
  traj.y.push_back(flat.segment(l.oy, l.n * l.n * l.d));
  Eigen::VectorXd wn = Eigen::VectorXd::Zero(l.n);
  if (l.has_w) {
    const int block = l.q * l.d;
    for (int i = 0; i < l.n; ++i)
      wn(i) = flat.segment(l.ow + i * block, block).squaredNorm();
  }
  traj.wnorm.push_back(std::move(wn));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  traj.err_x.push_back(ctx.has_quad ? (traj.x.back() - ctx.xstar).norm()
                                    : nan);
  traj.err_v.push_back(traj.v.back().norm());
  traj.V.push_back(ctx.has_quad ? ctx.lyapunov(s) : nan);
}

}  // namespace

Trajectory integrate(const Scenario& sc) {
  sc.validate();
  SimContext ctx(sc, /*need_lyapunov=*/true);
  if (auto warning = dt_guard(sc)) {
    std::cerr << *warning << "\n";
  }

  Trajectory traj;
  traj.n_players = ctx.lay.n;
  traj.action_dim = ctx.lay.d;
  traj.orders = sc.game.orders();

  const double dt = sc.integ.dt;
  const long long steps =
      std::max<long long>(1, std::llround(sc.integ.t_final / dt));
  Eigen::VectorXd s = initial_flat_state(ctx);
  Eigen::VectorXd stage(s.size());

  for (long long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k % sc.integ.stride == 0) record_sample(ctx, s, t, traj);

    const Eigen::VectorXd d1 = ctx.derivative(s, t);
    stage = s + 0.5 * dt * d1;
    ctx.clamp_flat_weights(stage);
    const Eigen::VectorXd d2 = ctx.derivative(stage, t + 0.5 * dt);
    stage = s + 0.5 * dt * d2;
    ctx.clamp_flat_weights(stage);
    const Eigen::VectorXd d3 = ctx.derivative(stage, t + 0.5 * dt);
    stage = s + dt * d3;
    ctx.clamp_flat_weights(stage);
    const Eigen::VectorXd d4 = ctx.derivative(stage, t + dt);
    s += dt / 6.0 * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
    ctx.clamp_flat_weights(s);

    if (!s.allFinite()) {
      for (Eigen::Index c = 0; c < s.size(); ++c) {
        if (!std::isfinite(s(c))) {
          const double t_bad = static_cast<double>(k + 1) * dt;
          throw NonFiniteState(
              "integrate: state blew up at t = " + std::to_string(t_bad) +
                  ", first non-finite component " + std::to_string(c),
              t_bad, static_cast<int>(c));
        }
      }
    }
  }
  record_sample(ctx, s, static_cast<double>(steps) * dt, traj);
  return traj;
}

double lyapunov_surrogate(const Scenario& sc, const Eigen::VectorXd& state) {
  if (!sc.quadratic.has_value()) {
    throw NoKnownEquilibrium(
        "lyapunov_surrogate: the scenario has no quadratic representation, "
        "so the equilibrium is unknown");
  }
  SimContext ctx(sc, /*need_lyapunov=*/true);
  if (state.size() != ctx.lay.total) {
    throw DimensionMismatch("lyapunov_surrogate: state has length " +
                            std::to_string(state.size()) + ", expected " +
                            std::to_string(ctx.lay.total));
  }
  unpack_into(ctx.lay, state, ctx.scratch);
  return ctx.lyapunov(ctx.scratch);
}

double fit_decay_rate(const std::vector<double>& t,
                      const std::vector<double>& err) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (t.size() != err.size() || t.empty()) return nan;
  // Samples at the double-precision floor carry no rate information.
  constexpr double kFloor = 1e-14;
  std::vector<size_t> qualifying;
  for (size_t i = 0; i < err.size(); ++i) {
    if (std::isfinite(err[i]) && err[i] > kFloor) qualifying.push_back(i);
  }
  if (qualifying.size() < 2) return nan;
  const double t_half = t.back() / 2.0;
  std::vector<size_t> window;
  for (size_t i : qualifying) {
    if (t[i] >= t_half) window.push_back(i);
  }
  if (window.size() < 2) {
    // Fully converged before t/2: fit the last half of the informative part.
    window.assign(qualifying.begin() + qualifying.size() / 2,
                  qualifying.end());
    if (window.size() < 2) {
      window.assign(qualifying.end() - 2, qualifying.end());
    }
  }
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = static_cast<double>(window.size());
  for (size_t i : window) {
    const double yi = std::log(err[i]);
    st += t[i];
    sy += yi;
    stt += t[i] * t[i];
    sty += t[i] * yi;
  }
  const double denom = m * stt - st * st;
  if (denom <= 0.0) return nan;
  const double slope = (m * sty - st * sy) / denom;
  return -slope;
}

Metrics metrics(const Trajectory& traj, const Eigen::VectorXd& xstar,
                const std::vector<double>& tolerances) {
  if (traj.size() == 0) {
    throw InvalidArgument("metrics: empty trajectory");
  }
  if (xstar.size() != traj.x.back().size()) {
    throw DimensionMismatch("metrics: x* has length " +
                            std::to_string(xstar.size()) + ", expected " +
                            std::to_string(traj.x.back().size()));
  }
  Metrics m;
  const Eigen::VectorXd dev = traj.x.back() - xstar;
  m.final_err_2 = dev.norm();
  m.final_err_inf = dev.cwiseAbs().maxCoeff();
  m.final_vnorm = traj.v.back().norm();
  double max_w = 0.0;
  for (const Eigen::VectorXd& wn : traj.wnorm) {
    if (wn.size() > 0) max_w = std::max(max_w, wn.maxCoeff());
  }
  m.max_wnorm = max_w;
  std::vector<double> err(traj.size());
  for (size_t i = 0; i < traj.size(); ++i) {
    err[i] = (traj.x[i] - xstar).norm();
  }
  m.fitted_rate = fit_decay_rate(traj.t, err);
  for (double tol : tolerances) {
    double hit = std::numeric_limits<double>::quiet_NaN();
    for (size_t i = 0; i < traj.size(); ++i) {
      if (err[i] <= tol) {
        hit = traj.t[i];
        break;
      }
    }
    m.time_to_tol.emplace_back(tol, hit);
  }
  return m;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, std::ostream& os) {
  os << "# schema_version 1\n";
  const int n = traj.n_players;
  const int d = traj.action_dim;
  os << "t";
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < d; ++c)
      os << ",x_" << (i + 1) << "_" << (c + 1);
  for (int i = 0; i < n; ++i) {
    if (traj.orders[i] == PlayerOrder::kSecond)
      for (int c = 0; c < d; ++c) os << ",v_" << (i + 1) << "_" << (c + 1);
  }
  for (int i = 0; i < n; ++i) {
    if (traj.orders[i] == PlayerOrder::kFirst)
      for (int c = 0; c < d; ++c) os << ",z_" << (i + 1) << "_" << (c + 1);
  }
  for (int i = 0; i < n; ++i) os << ",wnorm_" << (i + 1);
  os << ",err_x,err_v,V\n";
  for (size_t k = 0; k < traj.size(); ++k) {
    os << fmt_double(traj.t[k]);
    for (Eigen::Index j = 0; j < traj.x[k].size(); ++j)
      os << "," << fmt_double(traj.x[k](j));
    for (Eigen::Index j = 0; j < traj.v[k].size(); ++j)
      os << "," << fmt_double(traj.v[k](j));
    for (Eigen::Index j = 0; j < traj.z[k].size(); ++j)
      os << "," << fmt_double(traj.z[k](j));
    for (Eigen::Index j = 0; j < traj.wnorm[k].size(); ++j)
      os << "," << fmt_double(traj.wnorm[k](j));
    os << "," << fmt_double(traj.err_x[k]) << "," << fmt_double(traj.err_v[k])
       << "," << fmt_double(traj.V[k]) << "\n";
  }
}

void write_summary_json(const Metrics& m, std::ostream& os) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["final_err_2"] = m.final_err_2;
  j["final_err_inf"] = m.final_err_inf;
  j["final_vnorm"] = m.final_vnorm;
  j["fitted_rate"] = m.fitted_rate;
  j["max_wnorm"] = m.max_wnorm;
  j["blown_up"] = m.blown_up;
  nlohmann::json tt = nlohmann::json::array();
  for (const auto& [tol, t_hit] : m.time_to_tol) {
    tt.push_back({{"threshold", tol}, {"t", t_hit}});
  }
  j["time_to_tol"] = tt;
  os << j.dump(2) << "\n";
}

}  // namespace nashseek
