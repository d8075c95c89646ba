#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "qsd/model.hpp"

namespace qsd {

// Asymptotic market outcomes. The numeric values are the outcome codes used
// in sweep output: 0 marks an unstable market.
enum class OutcomeKind {
  Unstable = 0,
  NoSponsoring = 1,
  MaxBitSponsoring = 2,
  MinQualitySponsoring = 3,
  InteriorStable = 4,
};

// Stable (d, p, b); the participation flags are both 1 for every sponsoring outcome.
struct OutcomeTuple {
  double d = 0.0;
  double p = 0.0;
  double b = 0.0;
};

struct StableOutcome {
  OutcomeKind kind = OutcomeKind::Unstable;
  std::optional<OutcomeTuple> tuple;
};

enum class SimulationMode { BothShortSighted, LongSightedSP, LongSightedCP };

// Where the stable quality 1/kappa_u sits relative to the minimum quality zeta.
enum class QualityRegime { UnderProvisioned, Matched, OverProvisioned };

struct SteeringOptions {
  // Fraction of the remaining demand gap the steering player closes per epoch.
  double ramp_rate = 0.2;
  // Relative gap below which the steering player aims at the target exactly.
  double snap_tol = 1e-9;
};

struct ClassifierSettings {
  // |d_{t+1} - d_t| < convergence_tol * d_t over `window` consecutive epochs.
  double convergence_tol = 1e-8;
  std::size_t window = 50;
  // Relative tolerance when matching the converged point to a stable tuple.
  double match_tol = 1e-6;
};

inline constexpr std::size_t kDefaultHorizon = 20000;
// kappa_u * zeta within this of 1 counts as the matched regime.
inline constexpr double kMatchedQualityTol = 1e-9;

int outcome_code(OutcomeKind kind);
std::string_view to_string(OutcomeKind kind);
std::string_view to_string(SimulationMode mode);

QualityRegime quality_regime(const MarketParams& params);

// Closed-form stable tuples. interior_outcome is empty when infeasible.
StableOutcome max_bit_outcome(const MarketParams& params);
StableOutcome min_quality_outcome(double d, const MarketParams& params);
std::optional<StableOutcome> interior_outcome(const MarketParams& params);

Trajectory simulate(double d0, const MarketParams& params, SimulationMode mode,
                    std::size_t horizon = kDefaultHorizon, const SteeringOptions& steering = {});

// True when the last `window` demand steps are all below the relative tolerance.
bool has_converged(const Trajectory& traj, const ClassifierSettings& settings = {});

// Every stable tuple (in outcome-code order) the point (d, p, b) matches. An
// interior tuple that coincides with the maximum-bit tuple is reported as the latter.
std::vector<StableOutcome> matching_outcomes(double d, double p, double b,
                                             const MarketParams& params, double match_tol);

StableOutcome classify_outcome(const Trajectory& traj, const MarketParams& params,
                               const ClassifierSettings& settings = {});

// SP-optimal demand on the minimum-quality stable family.
double min_quality_optimal_demand(const MarketParams& params);

StableOutcome long_sighted_sp_target(const MarketParams& params);

struct StablePayoffs {
  double u_cp = 0.0;
  double u_sp = 0.0;
};

struct RankedOutcome {
  StableOutcome outcome;
  StablePayoffs payoffs;
};

// Feasible sponsoring stable points in decreasing order of CP payoff.
std::vector<RankedOutcome> long_sighted_cp_ranking(const MarketParams& params);

StablePayoffs stable_point_payoffs(const StableOutcome& outcome, const MarketParams& params);

// CSV rows "epoch,d,y,p,z,b" with a header; absent values are empty fields.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace qsd
