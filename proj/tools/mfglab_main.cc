// Copyright 2026 The mfglab Authors.
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

// Command-line front end: run solvers, verify devices, run N-player
// studies, scan the homogeneous-device simplex.
//
// Exit codes: 0 success/membership, 1 check failed, 2 input error,
// 3 runtime degradation (partial artifacts are still written).

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mfglab/equilibrium.h"
#include "mfglab/games.h"
#include "mfglab/parallel.h"
#include "mfglab/learners.h"
#include "mfglab/nplayer.h"
#include "mfglab/psro.h"
#include "mfglab/serialize.h"

namespace {

using namespace mfg;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kInputError = 2;
constexpr int kDegraded = 3;

GameId ParseGameId(const std::string& name,
                   const std::vector<std::string>& params) {
  GameId id;
  id.name = name;
  for (const std::string& kv : params) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw Error("param must be key=value: " + kv);
    }
    id.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
  }
  return id;
}

void EnsureOutDir(const std::string& out) {
  if (!out.empty()) std::filesystem::create_directories(out);
}

std::string OutPath(const std::string& out, const std::string& file) {
  return (std::filesystem::path(out) / file).string();
}

double MaxResidual(const std::vector<ConsistencyGroup>& groups) {
  double residual = 0.0;
  for (const auto& group : groups) residual = std::max(residual, group.residual);
  return residual;
}

int CmdListGames() {
  for (const auto& name : RegisteredGames()) std::cout << name << "\n";
  return kOk;
}

struct SolveOptions {
  std::string game;
  std::vector<std::string> params;
  std::string algo = "jfp";
  int iters = 1000;
  double eta = 0.1;
  double epsilon = 0.01;
  std::string solver = "rm";
  uint64_t seed = 0;
  std::string out = ".";
};

int CmdSolve(const SolveOptions& options) {
  const GameSpec game = BuildGame(ParseGameId(options.game, options.params));
  EnsureOutDir(options.out);

  CorrelationDevice device;
  bool degraded = false;
  if (options.algo == "jfp" || options.algo == "omd") {
    LearningTrace trace =
        options.algo == "jfp"
            ? JfpRun(game, options.iters, StochasticPolicy::Uniform(game))
            : OmdRun(game, options.iters, options.eta);
    WriteTextFile(OutPath(options.out, "trace.csv"), TraceCsv(game, trace));
    WriteTextFile(OutPath(options.out, "trace.json"),
                  ToJson(trace, game).dump(2));
    try {
      device = EmpiricalPlay(trace);
    } catch (const SupportTooLarge& e) {
      // Trace artifacts are already on disk; report the degradation.
      std::cerr << "device extraction unavailable: " << e.what() << "\n";
      return kDegraded;
    }
    const GapReport exploitability =
        Exploitability(game, trace.steps.back().nu);
    std::cout << "final_exploitability " << exploitability.gap << "\n";
  } else if (options.algo == "psro_cce" || options.algo == "psro_ce") {
    PsroConfig config;
    config.mode = options.algo == "psro_cce" ? PsroMode::kCce : PsroMode::kCe;
    config.solver = ParseMetaSolverKind(options.solver);
    config.eta = options.eta;
    config.epsilon = options.epsilon;
    const PsroResult result = PsroRun(game, config, {});
    WriteTextFile(OutPath(options.out, "psro.json"), ToJson(result).dump(2));
    WriteTextFile(OutPath(options.out, "psro_outer.csv"), PsroOuterCsv(result));
    device = result.device;
    degraded = !result.converged;
  } else {
    throw Error("unknown algorithm: " + options.algo);
  }

  WriteTextFile(OutPath(options.out, "device.json"), ToJson(device).dump(2));
  std::cout << "cce_gap " << CceGap(game, device).gap << "\n";
  std::cout << "ce_gap " << CeGap(game, device).gap << "\n";
  std::cout << "consistency_residual "
            << MaxResidual(ConsistencyCheck(game, device)) << "\n";
  return degraded ? kDegraded : kOk;
}

struct VerifyOptions {
  std::string device_file;
  std::string game;
  std::vector<std::string> params;
  std::string check = "both";
  double tol = 1e-9;
};

int CmdVerify(const VerifyOptions& options) {
  const GameSpec game = BuildGame(ParseGameId(options.game, options.params));
  CorrelationDevice device;
  try {
    device = DeviceFromJson(json::parse(ReadTextFile(options.device_file)));
  } catch (const std::exception& e) {
    std::cerr << "malformed device file: " << e.what() << "\n";
    return kInputError;
  }

  bool ok = true;
  json reports;
  if (options.check == "cce" || options.check == "both") {
    const GapReport report = CceGap(game, device);
    std::cout << "cce_gap " << report.gap << "\n";
    reports["cce"] = ToJson(report);
    ok = ok && report.gap <= options.tol;
  }
  if (options.check == "ce" || options.check == "both") {
    const GapReport report = CeGap(game, device);
    std::cout << "ce_gap " << report.gap << "\n";
    reports["ce"] = ToJson(report);
    ok = ok && report.gap <= options.tol;
  }
  std::cout << "report " << reports.dump() << "\n";
  std::cout << "consistency_residual "
            << MaxResidual(ConsistencyCheck(game, device)) << "\n";
  if (game.mu_independent_dynamics) {
    const StochasticPolicy marginal = Marginalization(game, device);
    std::cout << "marginalization " << ToJson(marginal).dump() << "\n";
  } else {
    std::cout << "marginalization unavailable (dynamics depend on mu)\n";
  }
  return ok ? kOk : kCheckFailed;
}

struct NpevalOptions {
  std::string device_file;
  std::string game;
  std::vector<std::string> params;
  std::vector<int> player_counts;
  int samples = 10000;
  uint64_t seed = 0;
  std::string out = ".";
};

int CmdNpeval(const NpevalOptions& options) {
  const GameSpec game = BuildGame(ParseGameId(options.game, options.params));
  CorrelationDevice device;
  try {
    device = DeviceFromJson(json::parse(ReadTextFile(options.device_file)));
  } catch (const std::exception& e) {
    std::cerr << "malformed device file: " << e.what() << "\n";
    return kInputError;
  }
  EnsureOutDir(options.out);
  const ScalingStudyResult study = RunScalingStudy(
      game, device, options.player_counts, options.samples, options.seed);
  WriteTextFile(OutPath(options.out, "scaling.csv"), ScalingCsv(study));
  WriteTextFile(OutPath(options.out, "slope.json"), ToJson(study).dump(2));
  std::cout << "slope " << study.slope << (study.degenerate ? " (degenerate)" : "")
            << "\n";
  return study.degenerate ? kDegraded : kOk;
}

struct ScanOptions {
  std::string game;
  std::vector<std::string> params;
  int grid = 50;  // barycentric denominator
  std::string family = "homogeneous_pure";
  double tol = 1e-9;
  std::string out = ".";
};

CorrelationDevice ScanDevice(const GameSpec& game, const std::string& family,
                             const Vec& weights) {
  CorrelationDevice device;
  if (family == "homogeneous_pure") {
    for (int a = 0; a < game.num_actions; ++a) {
      if (weights[a] == 0.0) continue;
      device.atoms.push_back(
          PolicyDistribution::Dirac(DeterministicPolicy::Constant(game, a)));
      device.weights.push_back(weights[a]);
    }
  } else if (family == "homogeneous_mixed") {
    PolicyDistribution nu;
    for (int a = 0; a < game.num_actions; ++a) {
      if (weights[a] == 0.0) continue;
      nu.policies.push_back(DeterministicPolicy::Constant(game, a));
      nu.weights.push_back(weights[a]);
    }
    device.atoms.push_back(std::move(nu));
    device.weights.push_back(1.0);
  } else {
    throw Error("unknown device family: " + family);
  }
  return device;
}

int CmdScan(const ScanOptions& options) {
  const GameSpec game = BuildGame(ParseGameId(options.game, options.params));
  if (!game.is_static() || game.num_actions > 3) {
    throw Error("scan needs a static game with at most three actions");
  }
  EnsureOutDir(options.out);
  const int denom = options.grid;
  std::vector<Vec> points;
  if (game.num_actions == 2) {
    for (int i = 0; i <= denom; ++i) {
      points.push_back(Vec{static_cast<double>(i) / denom,
                           static_cast<double>(denom - i) / denom});
    }
  } else {
    for (int i = 0; i <= denom; ++i) {
      for (int j = 0; i + j <= denom; ++j) {
        points.push_back(Vec{static_cast<double>(i) / denom,
                             static_cast<double>(j) / denom,
                             static_cast<double>(denom - i - j) / denom});
      }
    }
  }

  // Grid points evaluate in parallel; rows assemble in grid order.
  std::vector<std::string> rows(points.size());
  ParallelFor(static_cast<int>(points.size()), [&](int k) {
    const CorrelationDevice device =
        ScanDevice(game, options.family, points[k]);
    const double cce = CceGap(game, device).gap;
    const double ce = CeGap(game, device).gap;
    std::ostringstream row;
    row.precision(17);
    for (int a = 0; a < game.num_actions; ++a) row << points[k][a] << ",";
    row << cce << "," << ce << "," << (cce <= options.tol ? 1 : 0) << ","
        << (ce <= options.tol ? 1 : 0) << "\n";
    rows[k] = row.str();
  });

  std::ostringstream csv;
  csv << (game.num_actions == 3 ? "alpha,beta,gamma" : "alpha,beta")
      << ",cce_gap,ce_gap,cce_member,ce_member\n";
  for (const auto& row : rows) csv << row;
  WriteTextFile(OutPath(options.out, "scan.csv"), csv.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field game equilibrium toolkit"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-games", "list registered games");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "run a learning algorithm");
  std::string config_file;
  solve_cmd->add_option("--config", config_file, "JSON config (flags override)");
  auto* solve_game = solve_cmd->add_option("--game", solve.game);
  auto* solve_params = solve_cmd->add_option("--params", solve.params);
  auto* solve_algo =
      solve_cmd->add_option("--algo", solve.algo)
          ->check(CLI::IsMember({"jfp", "omd", "psro_cce", "psro_ce"}));
  auto* solve_iters = solve_cmd->add_option("--iters", solve.iters);
  auto* solve_eta = solve_cmd->add_option("--eta", solve.eta);
  auto* solve_eps = solve_cmd->add_option("--epsilon", solve.epsilon);
  auto* solve_solver =
      solve_cmd->add_option("--solver", solve.solver)
          ->check(CLI::IsMember({"pw", "rm", "swap-rm", "swap-pw"}));
  auto* solve_seed = solve_cmd->add_option("--seed", solve.seed);
  auto* solve_out = solve_cmd->add_option("--out", solve.out);

  VerifyOptions verify;
  auto* verify_cmd = app.add_subcommand("verify", "gap-check a device file");
  verify_cmd->add_option("device", verify.device_file)->required();
  verify_cmd->add_option("--game", verify.game)->required();
  verify_cmd->add_option("--params", verify.params);
  verify_cmd->add_option("--check", verify.check)
      ->check(CLI::IsMember({"ce", "cce", "both"}));
  verify_cmd->add_option("--tol", verify.tol);

  NpevalOptions npeval;
  auto* npeval_cmd =
      app.add_subcommand("npeval", "N-player deviation-gap scaling study");
  npeval_cmd->add_option("device", npeval.device_file)->required();
  npeval_cmd->add_option("--game", npeval.game)->required();
  npeval_cmd->add_option("--params", npeval.params);
  npeval_cmd->add_option("--N", npeval.player_counts)->required();
  npeval_cmd->add_option("--samples", npeval.samples);
  npeval_cmd->add_option("--seed", npeval.seed);
  npeval_cmd->add_option("--out", npeval.out);

  ScanOptions scan;
  auto* scan_cmd =
      app.add_subcommand("scan", "homogeneous-device simplex membership scan");
  scan_cmd->add_option("--game", scan.game)->required();
  scan_cmd->add_option("--params", scan.params);
  scan_cmd->add_option("--grid", scan.grid);
  scan_cmd->add_option("--family", scan.family)
      ->check(CLI::IsMember({"homogeneous_pure", "homogeneous_mixed"}));
  scan_cmd->add_option("--tol", scan.tol);
  scan_cmd->add_option("--out", scan.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInputError;
  }

  try {
    if (list->parsed()) return CmdListGames();
    if (solve_cmd->parsed()) {
      if (!config_file.empty()) {
        const json config = json::parse(ReadTextFile(config_file));
        if (!*solve_game && config.contains("game")) solve.game = config["game"];
        if (!*solve_params && config.contains("params")) {
          for (const auto& [key, value] : config["params"].items()) {
            solve.params.push_back(key + "=" + std::to_string(value.get<double>()));
          }
        }
        if (!*solve_algo && config.contains("algo")) solve.algo = config["algo"];
        if (!*solve_iters && config.contains("iters")) solve.iters = config["iters"];
        if (!*solve_eta && config.contains("eta")) solve.eta = config["eta"];
        if (!*solve_eps && config.contains("epsilon")) solve.epsilon = config["epsilon"];
        if (!*solve_solver && config.contains("solver")) solve.solver = config["solver"];
        if (!*solve_seed && config.contains("seed")) solve.seed = config["seed"];
        if (!*solve_out && config.contains("out")) solve.out = config["out"];
      }
      if (solve.game.empty()) throw Error("--game is required");
      if (solve.iters < 1 || solve.eta <= 0.0 || solve.epsilon <= 0.0) {
        throw Error("iters, eta and epsilon must be positive");
      }
      return CmdSolve(solve);
    }
    if (verify_cmd->parsed()) return CmdVerify(verify);
    if (npeval_cmd->parsed()) return CmdNpeval(npeval);
    if (scan_cmd->parsed()) return CmdScan(scan);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
