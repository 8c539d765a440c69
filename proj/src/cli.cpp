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

#include "nashseek/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

namespace nashseek {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kSweepParams = {"k1", "k2", "k3",
                                               "k4", "beta", "dt"};

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (allowed.find(it.key()) == allowed.end()) {
      throw InvalidArgument("config: unknown field '" + where + it.key() +
                            "'");
    }
  }
}

double as_number(const json& v, const std::string& field) {
  if (!v.is_number()) {
    throw InvalidArgument("config: field '" + field + "' must be a number");
  }
  return v.get<double>();
}

int as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) {
    throw InvalidArgument("config: field '" + field + "' must be an integer");
  }
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& field) {
  if (!v.is_string()) {
    throw InvalidArgument("config: field '" + field + "' must be a string");
  }
  return v.get<std::string>();
}

Eigen::VectorXd as_vector(const json& v, const std::string& field) {
  if (!v.is_array()) {
    throw InvalidArgument("config: field '" + field +
                          "' must be an array of numbers");
  }
  Eigen::VectorXd out(v.size());
  Eigen::Index i = 0;
  for (const json& e : v) out(i++) = as_number(e, field);
  return out;
}

json load_file(const RunConfig& cfg) {
  if (cfg.config_path.empty()) return json::object();
  std::ifstream ifs(cfg.config_path);
  if (!ifs) {
    throw InvalidArgument("config: cannot open '" + cfg.config_path + "'");
  }
  json j;
  try {
    j = json::parse(ifs);
  } catch (const json::parse_error& e) {
    throw InvalidArgument("config: " + std::string(e.what()));
  }
  if (!j.is_object()) {
    throw InvalidArgument("config: top level must be a JSON object");
  }
  return j;
}

Variant parse_variant(const std::string& v) {
  if (v == "full") return Variant::kFull;
  if (v == "disturbance_free") return Variant::kDisturbanceFree;
  throw InvalidArgument("config: field 'variant' must be \"full\" or "
                        "\"disturbance_free\", got \"" + v + "\"");
}

Y0Mode parse_y0_mode(const std::string& v) {
  if (v == "seeded") return Y0Mode::kSeeded;
  if (v == "zero") return Y0Mode::kZero;
  throw InvalidArgument("config: field 'y0_mode' must be \"seeded\" or "
                        "\"zero\", got \"" + v + "\"");
}

// Builds a scenario from an inline "game" section: a quadratic game as
// per-player coefficient blocks plus pairwise coupling terms.
Scenario build_custom(const json& file) {
  const json& g = file.at("game");
  check_keys(g, {"action_dim", "orders", "players", "couplings"}, "game.");
  if (!g.contains("orders") || !g.contains("players")) {
    throw InvalidArgument(
        "config: custom game needs 'game.orders' and 'game.players'");
  }
  const int d = g.contains("action_dim")
                    ? as_int(g.at("action_dim"), "game.action_dim")
                    : 1;
  if (d < 1) {
    throw InvalidArgument("config: field 'game.action_dim' must be >= 1");
  }
  const json& jplayers = g.at("players");
  const json& jorders = g.at("orders");
  if (!jplayers.is_array() || jplayers.empty()) {
    throw InvalidArgument("config: field 'game.players' must be a non-empty "
                          "array");
  }
  const int n = static_cast<int>(jplayers.size());
  if (!jorders.is_array() || static_cast<int>(jorders.size()) != n) {
    throw InvalidArgument("config: field 'game.orders' must list one of "
                          "\"first\"/\"second\" per player");
  }

  std::vector<QuadraticPlayer> players(n);
  for (int i = 0; i < n; ++i) {
    const std::string tag = as_string(jorders.at(i), "game.orders");
    if (tag == "first") players[i].order = PlayerOrder::kFirst;
    else if (tag == "second") players[i].order = PlayerOrder::kSecond;
    else {
      throw InvalidArgument("config: field 'game.orders' entries must be "
                            "\"first\" or \"second\", got \"" + tag + "\"");
    }
    const json& jp = jplayers.at(i);
    const std::string where = "game.players[" + std::to_string(i) + "].";
    check_keys(jp, {"quad", "linear", "constant"}, where);
    players[i].quad = Eigen::MatrixXd::Zero(d, d);
    if (jp.contains("quad")) {
      const json& jq = jp.at("quad");
      if (jq.is_number()) {
        players[i].quad =
            jq.get<double>() * Eigen::MatrixXd::Identity(d, d);
      } else if (jq.is_array()) {
        if (static_cast<int>(jq.size()) != d) {
          throw InvalidArgument("config: field '" + where +
                                "quad' must be a scalar or a " +
                                std::to_string(d) + "x" + std::to_string(d) +
                                " matrix");
        }
        for (int r = 0; r < d; ++r) {
          players[i].quad.row(r) =
              as_vector(jq.at(r), where + "quad").transpose();
        }
      } else {
        throw InvalidArgument("config: field '" + where +
                              "quad' must be a number or a matrix");
      }
    }
    players[i].linear = jp.contains("linear")
                            ? as_vector(jp.at("linear"), where + "linear")
                            : Eigen::VectorXd::Zero(d).eval();
    if (players[i].linear.size() != d) {
      throw InvalidArgument("config: field '" + where + "linear' must have " +
                            std::to_string(d) + " entries");
    }
    if (jp.contains("constant")) {
      players[i].constant = as_number(jp.at("constant"), where + "constant");
    }
  }
  if (g.contains("couplings")) {
    for (const json& jc : g.at("couplings")) {
      check_keys(jc, {"i", "j", "weight"}, "game.couplings[].");
      const int i = as_int(jc.at("i"), "game.couplings[].i");
      const int j = as_int(jc.at("j"), "game.couplings[].j");
      const double w = jc.contains("weight")
                           ? as_number(jc.at("weight"),
                                       "game.couplings[].weight")
                           : 1.0;
      if (i < 1 || i > n || j < 1 || j > n || i == j) {
        throw InvalidArgument("config: coupling (" + std::to_string(i) + "," +
                              std::to_string(j) + ") is out of range");
      }
      players[i - 1].couplings.emplace_back(j - 1, w);
    }
  }

  auto [def, quad] = make_quadratic_game(d, players);

  if (!file.contains("graph")) {
    throw InvalidArgument("config: custom game needs a 'graph' section with "
                          "an edge list");
  }

  // Placeholder graph; apply_file installs the real one from the edge list.
  Scenario sc(std::move(def), CommGraph::complete(n));
  sc.quadratic = std::move(quad);
  // A custom game has no disturbance model; install zero functions so the
  // full variant stays valid.
  DisturbanceModel dist;
  dist.g.resize(n);
  dist.d.resize(n);
  for (int i = 0; i < n; ++i) {
    dist.g[i] = [d](const Eigen::VectorXd&) {
      return Eigen::VectorXd::Zero(d).eval();
    };
    dist.d[i] = [d](double) { return Eigen::VectorXd::Zero(d).eval(); };
  }
  dist.eta = Eigen::VectorXd::Zero(n);
  dist.d_bound = Eigen::VectorXd::Zero(n);
  sc.disturbance = std::move(dist);
  sc.x0 = Eigen::VectorXd::Zero(n * d);
  return sc;
}

void apply_file(Scenario& sc, const json& file) {
  if (file.contains("graph")) {
    const json& jg = file.at("graph");
    check_keys(jg, {"edges"}, "graph.");
    if (!jg.contains("edges") || !jg.at("edges").is_array()) {
      throw InvalidArgument("config: field 'graph.edges' must be an array of "
                            "[i,j] pairs");
    }
    std::vector<std::pair<int, int>> edges;
    for (const json& je : jg.at("edges")) {
      if (!je.is_array() || je.size() != 2) {
        throw InvalidArgument("config: field 'graph.edges' entries must be "
                              "[i,j] pairs");
      }
      edges.emplace_back(as_int(je.at(0), "graph.edges"),
                         as_int(je.at(1), "graph.edges"));
    }
    sc.graph = CommGraph::from_edges(sc.game.n_players(), edges);
  }
  if (file.contains("variant")) {
    sc.variant = parse_variant(as_string(file.at("variant"), "variant"));
  }
  if (file.contains("y0_mode")) {
    sc.y0_mode = parse_y0_mode(as_string(file.at("y0_mode"), "y0_mode"));
  }
  if (file.contains("seed")) {
    sc.seed = static_cast<unsigned>(as_int(file.at("seed"), "seed"));
  }
  if (file.contains("gains")) {
    const json& jg = file.at("gains");
    check_keys(jg, {"k1", "k2", "k3", "k4"}, "gains.");
    if (jg.contains("k1")) sc.gains.k1 = as_number(jg.at("k1"), "gains.k1");
    if (jg.contains("k2")) sc.gains.k2 = as_number(jg.at("k2"), "gains.k2");
    if (jg.contains("k3")) sc.gains.k3 = as_number(jg.at("k3"), "gains.k3");
    if (jg.contains("k4")) sc.gains.k4 = as_number(jg.at("k4"), "gains.k4");
  }
  if (file.contains("rbf")) {
    const json& jr = file.at("rbf");
    check_keys(jr, {"q", "centers", "width", "w_max", "beta", "delta",
                    "epsilon"},
               "rbf.");
    if (jr.contains("centers")) {
      const json& jc = jr.at("centers");
      if (jc.is_array()) {
        sc.rbf.centers.clear();
        for (const json& e : jc) {
          sc.rbf.centers.push_back(as_number(e, "rbf.centers"));
        }
      } else if (jc.is_object()) {
        check_keys(jc, {"min", "max", "count"}, "rbf.centers.");
        const double lo = as_number(jc.at("min"), "rbf.centers.min");
        const double hi = as_number(jc.at("max"), "rbf.centers.max");
        const int count = as_int(jc.at("count"), "rbf.centers.count");
        if (count < 1 || hi < lo) {
          throw InvalidArgument("config: field 'rbf.centers' needs count >= "
                                "1 and max >= min");
        }
        sc.rbf.centers.resize(count);
        for (int i = 0; i < count; ++i) {
          sc.rbf.centers[i] =
              count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
        }
      } else {
        throw InvalidArgument("config: field 'rbf.centers' must be a list or "
                              "{min,max,count}");
      }
    }
    if (jr.contains("q")) {
      const int q = as_int(jr.at("q"), "rbf.q");
      if (q != static_cast<int>(sc.rbf.centers.size())) {
        throw InvalidArgument("config: field 'rbf.q' (" + std::to_string(q) +
                              ") does not match the number of centers (" +
                              std::to_string(sc.rbf.centers.size()) + ")");
      }
    }
    if (jr.contains("width"))
      sc.rbf.width = as_number(jr.at("width"), "rbf.width");
    if (jr.contains("w_max"))
      sc.rbf.w_max = as_number(jr.at("w_max"), "rbf.w_max");
    if (jr.contains("beta"))
      sc.rbf.beta = as_number(jr.at("beta"), "rbf.beta");
    if (jr.contains("delta"))
      sc.gains.delta = as_number(jr.at("delta"), "rbf.delta");
    if (jr.contains("epsilon"))
      sc.gains.epsilon = as_number(jr.at("epsilon"), "rbf.epsilon");
  }
  if (file.contains("integrator")) {
    const json& ji = file.at("integrator");
    check_keys(ji, {"dt", "t_final", "stride"}, "integrator.");
    if (ji.contains("dt"))
      sc.integ.dt = as_number(ji.at("dt"), "integrator.dt");
    if (ji.contains("t_final"))
      sc.integ.t_final = as_number(ji.at("t_final"), "integrator.t_final");
    if (ji.contains("stride"))
      sc.integ.stride = as_int(ji.at("stride"), "integrator.stride");
  }
  if (file.contains("initial")) {
    const json& jx = file.at("initial");
    check_keys(jx, {"x", "v", "z"}, "initial.");
    if (jx.contains("x")) sc.x0 = as_vector(jx.at("x"), "initial.x");
    if (jx.contains("v")) sc.v0 = as_vector(jx.at("v"), "initial.v");
    if (jx.contains("z")) sc.z0 = as_vector(jx.at("z"), "initial.z");
  }
}

void apply_flags(Scenario& sc, const RunConfig& cfg) {
  if (cfg.k1) sc.gains.k1 = *cfg.k1;
  if (cfg.k2) sc.gains.k2 = *cfg.k2;
  if (cfg.k3) sc.gains.k3 = *cfg.k3;
  if (cfg.k4) sc.gains.k4 = *cfg.k4;
  if (cfg.beta) sc.rbf.beta = *cfg.beta;
  if (cfg.delta) sc.gains.delta = *cfg.delta;
  if (cfg.epsilon) sc.gains.epsilon = *cfg.epsilon;
  if (cfg.dt) sc.integ.dt = *cfg.dt;
  if (cfg.t_final) sc.integ.t_final = *cfg.t_final;
  if (cfg.stride) sc.integ.stride = *cfg.stride;
  if (cfg.variant) sc.variant = parse_variant(*cfg.variant);
  if (cfg.y0_mode) sc.y0_mode = parse_y0_mode(*cfg.y0_mode);
  if (cfg.seed) sc.seed = *cfg.seed;
}

fs::path resolve_out_dir(const RunConfig& cfg) {
  if (!cfg.out_dir.empty()) return cfg.out_dir;
  if (const char* env = std::getenv(kOutDirEnvVar); env != nullptr && *env) {
    return env;
  }
  return ".";
}

void write_gnuplot_script(const Trajectory& traj, const fs::path& path) {
  const int n = traj.n_players;
  const int d = traj.action_dim;
  int ns = 0, nf = 0;
  for (PlayerOrder o : traj.orders) {
    if (o == PlayerOrder::kSecond) ++ns;
    else ++nf;
  }
  const int x_first = 2;
  const int x_last = 1 + n * d;
  const int wnorm_first = 1 + n * d + ns * d + nf * d + 1;
  const int wnorm_last = wnorm_first + n - 1;
  const int err_x_col = wnorm_last + 1;
  const int v_col = err_x_col + 2;
  std::ofstream os(path);
  os << "# Plots a nashseek trajectory.csv from the same directory.\n"
     << "# Usage: gnuplot plot.gp\n"
     << "set datafile separator ','\n"
     << "set terminal pngcairo size 1200,900\n"
     << "set output 'trajectory.png'\n"
     << "set multiplot layout 2,2\n"
     << "set key outside\n"
     << "set title 'Actions'\n"
     << "set xlabel 't'\n"
     << "plot for [i=" << x_first << ":" << x_last
     << "] 'trajectory.csv' every ::1 using 1:i with lines notitle\n"
     << "set title 'Distance to equilibrium'\n"
     << "set logscale y\n"
     << "plot 'trajectory.csv' every ::1 using 1:" << err_x_col
     << " with lines title '||x - x*||', '' every ::1 using 1:"
     << err_x_col + 1 << " with lines title '||v||'\n"
     << "set title 'Lyapunov surrogate'\n"
     << "plot 'trajectory.csv' every ::1 using 1:" << v_col
     << " with lines title 'V'\n"
     << "unset logscale y\n"
     << "set title 'NN weight traces'\n"
     << "plot for [i=" << wnorm_first << ":" << wnorm_last
     << "] 'trajectory.csv' every ::1 using 1:i with lines notitle\n"
     << "unset multiplot\n";
}

// One sweep grid point: parameter overrides and the outcome row.
struct SweepRow {
  double k1, k2, k3, k4, beta, dt;
  Metrics m;
  bool failed = false;
  std::string error;
};

}  // namespace

Scenario build_scenario(const RunConfig& cfg) {
  const json file = load_file(cfg);
  check_keys(file,
             {"scenario", "variant", "y0_mode", "seed", "gains", "rbf",
              "integrator", "initial", "game", "graph", "sweep"},
             "");
  std::optional<Scenario> sc;
  if (file.contains("game")) {
    if (cfg.scenario.has_value()) {
      throw InvalidArgument("config: --scenario conflicts with the config "
                            "file's inline 'game'");
    }
    sc.emplace(build_custom(file));
  } else {
    std::string name = cfg.scenario.value_or(
        file.contains("scenario") ? as_string(file.at("scenario"), "scenario")
                                  : "vehicles5");
    if (name != "vehicles5") {
      throw InvalidArgument("config: unknown scenario '" + name +
                            "' (see list-scenarios)");
    }
    sc.emplace(vehicles5_scenario());
  }
  apply_file(*sc, file);
  apply_flags(*sc, cfg);
  sc->validate();
  return std::move(*sc);
}

int cmd_run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Scenario sc = build_scenario(cfg);
    const fs::path dir = resolve_out_dir(cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);

    const auto t0 = std::chrono::steady_clock::now();
    Trajectory traj;
    std::string blow_msg;
    try {
      traj = integrate(sc);
    } catch (const NonFiniteState& e) {
      blow_msg = e.what();
    } catch (const NonFiniteDerivative& e) {
      blow_msg = e.what();
    }
    if (!blow_msg.empty()) {
      traj.n_players = sc.game.n_players();
      traj.action_dim = sc.game.action_dim();
      traj.orders = sc.game.orders();
    }
    const auto t1 = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(t1 - t0).count();

    Metrics m;
    if (blow_msg.empty() && sc.quadratic.has_value()) {
      m = metrics(traj, nash_oracle(*sc.quadratic));
    }
    m.blown_up = !blow_msg.empty();

    std::ofstream csv(dir / "trajectory.csv");
    std::ofstream summary(dir / "summary.json");
    if (!csv || !summary) {
      err << "error: cannot write into output directory '" << dir.string()
          << "'\n";
      return kExitConfig;
    }
    write_trajectory_csv(traj, csv);
    write_summary_json(m, summary);
    if (cfg.gnuplot) write_gnuplot_script(traj, dir / "plot.gp");

    if (!blow_msg.empty()) {
      err << "error: " << blow_msg << "\n";
      out << sc.name << ": blown up (artifacts in " << dir.string() << ")\n";
      return kExitBlowup;
    }
    out << sc.name << ": final_err_2 = " << m.final_err_2
        << ", fitted_rate = " << m.fitted_rate << ", " << traj.size()
        << " samples in " << ms << " ms -> " << (dir / "trajectory.csv").string()
        << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_verify_nash(const RunConfig& cfg, std::ostream& out,
                    std::ostream& err) {
  try {
    const Scenario sc = build_scenario(cfg);
    if (!sc.quadratic.has_value()) {
      err << "error: verify-nash needs a game with a quadratic "
             "representation\n";
      return kExitConfig;
    }
    out << "scenario: " << sc.name << "\n";
    const int n = sc.game.n_players();
    const int d = sc.game.action_dim();
    Eigen::VectorXd xstar;
    double m = 0.0;
    try {
      xstar = nash_oracle(*sc.quadratic);
      m = monotonicity_constant(*sc.quadratic);
    } catch (const Error& e) {
      out << "verification FAILED: " << e.what() << "\n";
      return kExitVerify;
    }
    const double residual = pseudo_gradient(sc.game, xstar).norm();
    const Eigen::VectorXd lbar = lipschitz_constants(*sc.quadratic);
    for (int i = 0; i < n; ++i) {
      out << "x*_" << (i + 1) << " = [";
      for (int c = 0; c < d; ++c) {
        out << (c ? ", " : " ") << xstar(i * d + c);
      }
      out << " ]\n";
    }
    out << "pseudo-gradient residual ||P(x*)|| = " << residual << "\n";
    out << "monotonicity constant m = " << m << "\n";
    out << "gradient Lipschitz constants l_i =";
    for (int i = 0; i < n; ++i) out << " " << lbar(i);
    out << "\n";
    const bool ok = residual < 1e-10 && m > 0.0;
    out << (ok ? "verification OK" : "verification FAILED") << "\n";
    return ok ? kExitOk : kExitVerify;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    const Scenario base = build_scenario(cfg);
    const json file = load_file(cfg);

    // Flags take precedence over the config file per parameter.
    std::map<std::string, std::vector<double>> grid = cfg.sweep;
    if (file.contains("sweep")) {
      const json& js = file.at("sweep");
      check_keys(js,
                 std::set<std::string>(kSweepParams.begin(),
                                       kSweepParams.end()),
                 "sweep.");
      for (auto it = js.begin(); it != js.end(); ++it) {
        if (grid.find(it.key()) != grid.end()) continue;
        std::vector<double> vals;
        if (!it.value().is_array() || it.value().empty()) {
          throw InvalidArgument("config: field 'sweep." + it.key() +
                                "' must be a non-empty array");
        }
        for (const json& e : it.value()) {
          vals.push_back(as_number(e, "sweep." + it.key()));
        }
        grid[it.key()] = std::move(vals);
      }
    }
    if (grid.empty()) {
      err << "error: empty sweep grid; pass --param name=v1,v2,... or a "
             "'sweep' config section\n";
      return kExitConfig;
    }
    for (const auto& [name, vals] : grid) {
      if (std::find(kSweepParams.begin(), kSweepParams.end(), name) ==
          kSweepParams.end()) {
        throw InvalidArgument("config: unknown sweep parameter '" + name +
                              "'");
      }
      if (vals.empty()) {
        throw InvalidArgument("config: sweep parameter '" + name +
                              "' has no values");
      }
    }

    // Cartesian product in the canonical parameter order.
    std::vector<std::string> names;
    for (const std::string& p : kSweepParams) {
      if (grid.find(p) != grid.end()) names.push_back(p);
    }
    std::vector<std::map<std::string, double>> points(1);
    for (const std::string& p : names) {
      std::vector<std::map<std::string, double>> next;
      for (const auto& pt : points) {
        for (double v : grid[p]) {
          auto ext = pt;
          ext[p] = v;
          next.push_back(std::move(ext));
        }
      }
      points = std::move(next);
    }

    std::vector<SweepRow> rows(points.size());
    std::atomic<size_t> cursor{0};
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const size_t workers =
        std::min(points.size(),
                 static_cast<size_t>(cfg.jobs > 0 ? cfg.jobs : hw));
    auto work = [&]() {
      for (size_t i = cursor.fetch_add(1); i < points.size();
           i = cursor.fetch_add(1)) {
        Scenario sc = base;
        for (const auto& [p, v] : points[i]) {
          if (p == "k1") sc.gains.k1 = v;
          else if (p == "k2") sc.gains.k2 = v;
          else if (p == "k3") sc.gains.k3 = v;
          else if (p == "k4") sc.gains.k4 = v;
          else if (p == "beta") sc.rbf.beta = v;
          else if (p == "dt") sc.integ.dt = v;
        }
        SweepRow& row = rows[i];
        row.k1 = sc.gains.k1;
        row.k2 = sc.gains.k2;
        row.k3 = sc.gains.k3;
        row.k4 = sc.gains.k4;
        row.beta = sc.rbf.beta;
        row.dt = sc.integ.dt;
        try {
          const Trajectory traj = integrate(sc);
          if (sc.quadratic.has_value()) {
            row.m = metrics(traj, nash_oracle(*sc.quadratic));
          }
        } catch (const NonFiniteState& e) {
          row.m.blown_up = true;
          row.error = e.what();
        } catch (const NonFiniteDerivative& e) {
          row.m.blown_up = true;
          row.error = e.what();
        } catch (const Error& e) {
          row.failed = true;
          row.error = e.what();
        }
      }
    };
    std::vector<std::thread> pool;
    for (size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
    work();
    for (std::thread& th : pool) th.join();

    const fs::path dir = resolve_out_dir(cfg);
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream csv(dir / "sweep.csv");
    if (!csv) {
      err << "error: cannot write into output directory '" << dir.string()
          << "'\n";
      return kExitConfig;
    }
    csv << "# schema_version 1\n";
    csv << "k1,k2,k3,k4,beta,dt,final_err_2,fitted_rate,max_wnorm,blown_up\n";
    for (const SweepRow& row : rows) {
      csv << row.k1 << "," << row.k2 << "," << row.k3 << "," << row.k4 << ","
          << row.beta << "," << row.dt << "," << row.m.final_err_2 << ","
          << row.m.fitted_rate << "," << row.m.max_wnorm << ","
          << (row.m.blown_up || row.failed ? 1 : 0) << "\n";
    }
    size_t bad = 0;
    for (const SweepRow& row : rows) {
      if (row.failed || row.m.blown_up) {
        ++bad;
        err << "sweep point (k1=" << row.k1 << ", k2=" << row.k2
            << ", k3=" << row.k3 << ", k4=" << row.k4 << ", beta=" << row.beta
            << ", dt=" << row.dt << ") failed: " << row.error << "\n";
      }
    }
    out << "sweep: " << rows.size() << " points (" << bad
        << " failed) -> " << (dir / "sweep.csv").string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_list_scenarios(std::ostream& out) {
  out << "vehicles5 - 5-vehicle connectivity game (players 1-3 first-order, "
         "4-5 second-order, ring graph, planar actions)\n";
  return kExitOk;
}

int run_cli(std::vector<std::string> args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"nashseek - distributed Nash equilibrium seeking simulator"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::vector<std::string> raw_params;

  auto add_scenario_opts = [&cfg](CLI::App* sub) {
    sub->add_option("--scenario", cfg.scenario,
                    "Built-in scenario name (default: vehicles5)");
    sub->add_option("--config", cfg.config_path, "JSON config file");
  };
  auto add_override_opts = [&cfg](CLI::App* sub) {
    sub->add_option("--k1", cfg.k1, "First-order regulation gain");
    sub->add_option("--k2", cfg.k2, "Gradient-play gain");
    sub->add_option("--k3", cfg.k3, "Consensus-estimator gain");
    sub->add_option("--k4", cfg.k4, "Second-order regulation gain");
    sub->add_option("--beta", cfg.beta, "NN adaptation rate");
    sub->add_option("--delta", cfg.delta, "Damping magnitude");
    sub->add_option("--epsilon", cfg.epsilon, "Damping sharpness");
    sub->add_option("--dt", cfg.dt, "Integrator step");
    sub->add_option("--t-final", cfg.t_final, "Simulated end time");
    sub->add_option("--stride", cfg.stride, "Record every N steps")
        ->check(CLI::PositiveNumber);
    sub->add_option("--variant", cfg.variant, "full | disturbance_free")
        ->check(CLI::IsMember({"full", "disturbance_free"}));
    sub->add_option("--y0", cfg.y0_mode, "Estimator init: seeded | zero")
        ->check(CLI::IsMember({"seeded", "zero"}));
    sub->add_option("--seed", cfg.seed,
                    "Seed for randomized verification suites");
  };
  auto add_out_opt = [&cfg](CLI::App* sub) {
    sub->add_option("--out", cfg.out_dir,
                    "Output directory (default: $NASHSEEK_OUT_DIR or .)");
  };

  CLI::App* run = app.add_subcommand(
      "run", "Integrate a scenario; writes trajectory.csv and summary.json");
  add_scenario_opts(run);
  add_override_opts(run);
  add_out_opt(run);
  run->add_flag("--gnuplot-script", cfg.gnuplot,
                "Also write a ready-to-run plot.gp");

  CLI::App* verify = app.add_subcommand(
      "verify-nash",
      "Solve and certify the equilibrium (residual, monotonicity)");
  add_scenario_opts(verify);

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run a parameter grid in parallel; writes sweep.csv");
  add_scenario_opts(sweep);
  add_override_opts(sweep);
  add_out_opt(sweep);
  sweep->add_option("--param", raw_params,
                    "Grid values, e.g. --param k2=0.125,0.25 (repeatable; "
                    "parameters: k1,k2,k3,k4,beta,dt)");
  sweep->add_option("--jobs", cfg.jobs, "Parallel workers (default: cores)")
      ->check(CLI::PositiveNumber);

  CLI::App* list =
      app.add_subcommand("list-scenarios", "List built-in scenarios");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (const std::string& raw : raw_params) {
      const auto eq = raw.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 >= raw.size()) {
        throw InvalidArgument("--param expects name=v1,v2,..., got '" + raw +
                              "'");
      }
      const std::string name = raw.substr(0, eq);
      std::vector<double> vals;
      std::string rest = raw.substr(eq + 1);
      size_t pos = 0;
      while (pos <= rest.size()) {
        const size_t comma = rest.find(',', pos);
        const std::string tok =
            rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                        : comma - pos);
        try {
          size_t used = 0;
          const double v = std::stod(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
          vals.push_back(v);
        } catch (const std::exception&) {
          throw InvalidArgument("--param " + name + ": bad number '" + tok +
                                "'");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      cfg.sweep[name] = std::move(vals);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  if (run->parsed()) return cmd_run(cfg, out, err);
  if (verify->parsed()) return cmd_verify_nash(cfg, out, err);
  if (sweep->parsed()) return cmd_sweep(cfg, out, err);
  if (list->parsed()) return cmd_list_scenarios(out);
  return kExitConfig;
}

}  // namespace nashseek
