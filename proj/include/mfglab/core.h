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

#ifndef MFGLAB_CORE_H_
#define MFGLAB_CORE_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

// Core model: finite-horizon mean-field games, policies, policy
// distributions, flows, and correlation devices.

namespace mfg {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline constexpr double kSimplexRepairTol = 1e-9;   // renormalize below this
inline constexpr double kSimplexStrictTol = 1e-12;  // post-construction checks
inline constexpr double kFlowTol = 1e-10;

// -- Errors -------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : Error { using Error::Error; };
struct InvalidSimplex : Error { using Error::Error; };
struct SupportTooLarge : Error { using Error::Error; };
struct DynamicsDependOnMu : Error { using Error::Error; };
struct ZeroMassRecommendation : Error { using Error::Error; };
struct NotADirac : Error { using Error::Error; };
struct UnknownGame : Error { using Error::Error; };
struct EmptyTrace : Error { using Error::Error; };
struct PolicySpaceTooLarge : Error { using Error::Error; };
struct TooLarge : Error { using Error::Error; };

// -- Numeric helpers ----------------------------------------------------

double Dot(const Vec& a, const Vec& b);
double LinfDistance(const Vec& a, const Vec& b);
double LinfDistance(const Mat& a, const Mat& b);

// Checks entries >= 0 and sum within `kSimplexRepairTol` of one, then
// renormalizes exactly. Larger deviations throw InvalidSimplex.
Vec NormalizedSimplex(Vec v, const std::string& what);
bool IsSimplex(const Vec& v, double tol);

// -- Game ---------------------------------------------------------------

// How the population enters the reward/transition evaluators. Dynamic
// games couple through the state occupancy; static (normal-form) games
// have one state and one decision time and couple through the
// population's action marginal instead. Flow rows carry whichever
// marginal the game couples through.
enum class Coupling { kStateFlow, kActionMarginal };

using RewardFn = std::function<double(int t, int x, int a, const Vec& mu)>;
using TransitionFn = std::function<Vec(int t, int x, int a, const Vec& mu)>;

struct GameSpec {
  std::string name;
  int horizon = 1;      // decision times 0..horizon-1
  int num_states = 1;   // |X|
  int num_actions = 1;  // |A|
  Vec mu0;              // initial state occupancy, over X
  Coupling coupling = Coupling::kStateFlow;
  bool mu_independent_dynamics = true;
  double reward_bound = 1.0;  // declared bound on |r|
  RewardFn reward;
  TransitionFn transition;  // unused when horizon == 1

  bool is_static() const { return coupling == Coupling::kActionMarginal; }
  // Dimension of one mean-field flow row.
  int mf_dim() const { return is_static() ? num_actions : num_states; }
};

// Throws if mu0 is not a simplex or static-game shape constraints are
// violated. Spot-checks (seeded) that transition rows are simplexes,
// |r| <= reward_bound, and that mu-independence holds when declared.
void ValidateGame(const GameSpec& game, int spot_checks = 32,
                  uint64_t seed = 7);

// Number of deterministic policies |A|^(T*|X|), capped at `cap`
// (returns cap + 1 when the count exceeds it).
long long CountDeterministicPolicies(const GameSpec& game,
                                     long long cap = 1'000'000);

// -- Policies -----------------------------------------------------------

struct DeterministicPolicy {
  int horizon = 0;
  int num_states = 0;
  std::vector<int> actions;  // [t * num_states + x]

  int action(int t, int x) const { return actions[t * num_states + x]; }
  int& action(int t, int x) { return actions[t * num_states + x]; }

  static DeterministicPolicy Constant(const GameSpec& game, int action);

  bool operator==(const DeterministicPolicy& o) const = default;
  bool operator<(const DeterministicPolicy& o) const {
    return actions < o.actions;
  }
};

struct StochasticPolicy {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  Vec probs;  // [((t * num_states) + x) * num_actions + a]

  double prob(int t, int x, int a) const {
    return probs[(t * num_states + x) * num_actions + a];
  }
  double& prob(int t, int x, int a) {
    return probs[(t * num_states + x) * num_actions + a];
  }

  static StochasticPolicy Uniform(const GameSpec& game);
  static StochasticPolicy FromRow(const GameSpec& game, Vec row);

  // Validates and renormalizes every (t, x) row.
  void Normalize();
};

StochasticPolicy ToStochastic(const GameSpec& game,
                              const DeterministicPolicy& policy);

// Finitely supported distribution over deterministic policies (the
// population recommendation nu).
struct PolicyDistribution {
  std::vector<DeterministicPolicy> policies;
  Vec weights;

  int size() const { return static_cast<int>(policies.size()); }
  static PolicyDistribution Dirac(DeterministicPolicy policy);

  // Sorts support, drops zero weights, merges duplicates, renormalizes.
  void Canonicalize();
  double WeightOf(const DeterministicPolicy& policy) const;

  bool operator==(const PolicyDistribution& o) const;
};

// -- Flows and Q tables -------------------------------------------------

struct MeanFieldFlow {
  Mat rows;  // horizon rows, each of game.mf_dim() entries

  int horizon() const { return static_cast<int>(rows.size()); }
  const Vec& row(int t) const { return rows[t]; }
};

struct QTable {
  int horizon = 0;
  int num_states = 0;
  int num_actions = 0;
  Vec values;  // [((t * num_states) + x) * num_actions + a]

  double at(int t, int x, int a) const {
    return values[(t * num_states + x) * num_actions + a];
  }
  double& at(int t, int x, int a) {
    return values[(t * num_states + x) * num_actions + a];
  }

  static QTable Zeros(const GameSpec& game);
};

// -- Correlation devices ------------------------------------------------

// Finitely supported distribution over population recommendations.
struct CorrelationDevice {
  std::vector<PolicyDistribution> atoms;
  Vec weights;

  int size() const { return static_cast<int>(atoms.size()); }
  static CorrelationDevice Dirac(PolicyDistribution nu);
  void Normalize();
};

// Device that recommends one stochastic policy to the whole population.
struct HomogeneousDevice {
  std::vector<StochasticPolicy> atoms;
  Vec weights;

  int size() const { return static_cast<int>(atoms.size()); }
};

// -- Core operations ----------------------------------------------------

// Flow of a policy's followers when the rest of the population generates
// `population` (transitions are evaluated at the population's rows, not
// at the policy's own flow).
MeanFieldFlow PolicyFlow(const GameSpec& game, const StochasticPolicy& policy,
                         const MeanFieldFlow& population);

// Flow when the whole population plays `policy`; the fixed point of
// PolicyFlow, built forward in one pass.
MeanFieldFlow SelfConsistentFlow(const GameSpec& game,
                                 const StochasticPolicy& policy);

struct PopulationFlowResult {
  MeanFieldFlow aggregate;
  std::vector<MeanFieldFlow> per_policy;  // parallel to nu.policies
};

// Joint forward induction: per-policy flows advance with transitions
// evaluated at the aggregate.
PopulationFlowResult PopulationFlow(const GameSpec& game,
                                    const PolicyDistribution& nu);
MeanFieldFlow AggregateFlow(const GameSpec& game,
                            const PolicyDistribution& nu);

// State occupancy (over X, horizon rows) of a policy's followers under
// `population`. Identical to PolicyFlow for dynamic games; all-ones for
// static games.
Mat StateOccupancy(const GameSpec& game, const StochasticPolicy& policy,
                   const MeanFieldFlow& population);

double Payoff(const GameSpec& game, const StochasticPolicy& policy,
              const MeanFieldFlow& population);
double Payoff(const GameSpec& game, const DeterministicPolicy& policy,
              const MeanFieldFlow& population);
double MixturePayoff(const GameSpec& game, const PolicyDistribution& nu,
                     const MeanFieldFlow& population);

// Backward recursion with a virtual all-zero row at t = horizon.
QTable OnPolicyQ(const GameSpec& game, const StochasticPolicy& policy,
                 const MeanFieldFlow& population);

struct BestResponseResult {
  DeterministicPolicy policy;
  double value = 0.0;  // == Payoff(game, policy, population)
};

// Exact backward induction; argmax ties break to the lowest action index.
BestResponseResult BestResponse(const GameSpec& game,
                                const MeanFieldFlow& population);

// Best response against explicit reward tables (indexed like a QTable)
// with transitions evaluated at `transition_flow`. `value` is taken
// w.r.t. the tables, not the game's own rewards.
BestResponseResult BestResponseToTables(const GameSpec& game,
                                        const Vec& reward_table,
                                        const MeanFieldFlow& transition_flow);

// Product-form nu with marginals equal to `policy`. Throws
// SupportTooLarge when the support would exceed max_support.
PolicyDistribution DecomposeStochastic(const GameSpec& game,
                                       const StochasticPolicy& policy,
                                       long long max_support = 4096);

// The stochastic policy whose self-consistent flow equals the device's
// average flow. Requires mu-independent dynamics; zero-mass states get
// a uniform action row.
StochasticPolicy Marginalization(const GameSpec& game,
                                 const CorrelationDevice& device);

// All |A|^(T*|X|) deterministic policies, in lexicographic order of their
// action tables. Throws PolicySpaceTooLarge beyond `cap`.
std::vector<DeterministicPolicy> EnumerateDeterministicPolicies(
    const GameSpec& game, long long cap = 1000);

}  // namespace mfg

#endif  // MFGLAB_CORE_H_
