#include "qsd/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "qsd/errors.hpp"
#include "qsd/format.hpp"
#include "qsd/spne.hpp"

namespace qsd {
namespace {

bool rel_close(double x, double ref, double tol) {
  return std::abs(x - ref) <= tol * std::max(std::abs(ref), kDemandFloor);
}

// Relative gap at which the steering player considers the target reached.
constexpr double kArrivalTol = 1e-11;

// Grid resolution used by a long-sighted CP searching the minimum-quality
// family for a demand the short-sighted SP supports.
constexpr std::size_t kFamilySearchPoints = 2001;

// Bits that move demand d toward `target` by the configured ramp, clamped to
// the CP's feasible range [zeta d, n_hat]. Clamping only ever shortens the step.
double steer_bits(double d, double target, const MarketParams& params,
                  const SteeringOptions& steering) {
  const double gap = target - d;
  const double desired = std::abs(gap) <= steering.snap_tol * std::max(1.0, target)
                             ? target
                             : d + steering.ramp_rate * gap;
  const double log_quality = (desired / d - 1.0) / params.gamma - std::log(params.kappa_u);
  const double lo = std::min(params.zeta * d, params.n_hat);
  const double hi = params.n_hat;
  if (log_quality > std::log(hi / d)) return hi;
  return std::clamp(d * std::exp(log_quality), lo, hi);
}

bool arrived(double d, double target) {
  return std::abs(d - target) <= kArrivalTol * std::max(1.0, target);
}

std::optional<PriceCandidate> supporting_candidate(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::MaxBitSponsoring: return PriceCandidate::MaxBits;
    case OutcomeKind::InteriorStable: return PriceCandidate::Interior;
    case OutcomeKind::MinQualitySponsoring: return PriceCandidate::MinQuality;
    default: return std::nullopt;
  }
}

// A short-sighted SP sustains `outcome` when at its demand the Theorem-2
// choice is the outcome's own price.
bool sp_supports(const StableOutcome& outcome, const MarketParams& params) {
  const OutcomeTuple& t = *outcome.tuple;
  const SpDecision sp = sp_equilibrium_price(t.d, params);
  return sp.y && sp.chosen_candidate == supporting_candidate(outcome.kind) &&
         rel_close(*sp.p, t.p, 1e-9);
}

// Target of a long-sighted CP facing a short-sighted SP: the best point of
// its ranking that the SP would also sustain.
std::optional<StableOutcome> long_sighted_cp_target(double d0, const MarketParams& params) {
  for (const RankedOutcome& ranked : long_sighted_cp_ranking(params)) {
    if (ranked.outcome.kind != OutcomeKind::MinQualitySponsoring) {
      if (sp_supports(ranked.outcome, params)) return ranked.outcome;
      continue;
    }
    // Any demand of the family pays the CP nothing, and demand cannot fall
    // while quality is at least zeta = 1/kappa_u: take the nearest supported
    // demand at or above d0.
    const double hi = params.max_feasible_demand();
    for (std::size_t i = 0; i < kFamilySearchPoints; ++i) {
      const double d = d0 + (hi - d0) * static_cast<double>(i) /
                                static_cast<double>(kFamilySearchPoints - 1);
      const StableOutcome candidate = min_quality_outcome(d, params);
      if (sp_supports(candidate, params)) return candidate;
    }
  }
  return std::nullopt;
}

// Reachable version of the long-sighted SP's target: on the matched regime the
// demand cannot be steered below d0.
StableOutcome long_sighted_sp_reachable_target(double d0, const MarketParams& params) {
  StableOutcome target = long_sighted_sp_target(params);
  if (target.kind == OutcomeKind::MinQualitySponsoring && target.tuple->d < d0) {
    target = min_quality_outcome(d0, params);
    if (stable_point_payoffs(target, params).u_sp < no_sponsoring_payoff(d0, params)) {
      return {OutcomeKind::NoSponsoring, std::nullopt};
    }
  }
  return target;
}

// Bits the CP holds once a stable target is reached.
double stable_bits(OutcomeKind kind, double d, const MarketParams& params) {
  switch (kind) {
    case OutcomeKind::MaxBitSponsoring: return params.n_hat;
    case OutcomeKind::MinQualitySponsoring: return std::min(params.zeta * d, params.n_hat);
    default: return d / params.kappa_u;
  }
}

using Policy = std::function<EpochDecision(double d)>;

Trajectory run(double d0, const MarketParams& params, std::size_t horizon, const Policy& policy) {
  Trajectory traj;
  traj.demands.reserve(horizon);
  traj.decisions.reserve(horizon);
  double d = d0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const bool playable = params.serves(d);
    const EpochDecision decision = playable ? policy(d) : EpochDecision::no_sponsoring();
    traj.demands.push_back(d);
    traj.decisions.push_back(decision);
    if (!decision.sponsoring()) {
      traj.terminated_at = t;
      break;
    }
    d = demand_update(d, *decision.b, params);
  }
  return traj;
}

EpochDecision with_cp_response(double d, double p, const MarketParams& params) {
  const CpResponse cp = cp_best_response(d, p, params);
  EpochDecision out;
  out.y = true;
  out.p = p;
  out.z = cp.z;
  out.b = cp.b;
  return out;
}

}  // namespace

int outcome_code(OutcomeKind kind) { return static_cast<int>(kind); }

std::string_view to_string(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::Unstable: return "Unstable";
    case OutcomeKind::NoSponsoring: return "NoSponsoring";
    case OutcomeKind::MaxBitSponsoring: return "MaxBitSponsoring";
    case OutcomeKind::MinQualitySponsoring: return "MinQualitySponsoring";
    case OutcomeKind::InteriorStable: return "InteriorStable";
  }
  return "?";
}

std::string_view to_string(SimulationMode mode) {
  switch (mode) {
    case SimulationMode::BothShortSighted: return "short_short";
    case SimulationMode::LongSightedSP: return "long_sp";
    case SimulationMode::LongSightedCP: return "long_cp";
  }
  return "?";
}

QualityRegime quality_regime(const MarketParams& params) {
  const double ratio = params.kappa_u * params.zeta;
  if (std::abs(ratio - 1.0) <= kMatchedQualityTol) return QualityRegime::Matched;
  return ratio < 1.0 ? QualityRegime::UnderProvisioned : QualityRegime::OverProvisioned;
}

StableOutcome max_bit_outcome(const MarketParams& params) {
  return {OutcomeKind::MaxBitSponsoring,
          OutcomeTuple{params.kappa_u * params.n_hat, params.alpha * params.kappa_u, params.n_hat}};
}

StableOutcome min_quality_outcome(double d, const MarketParams& params) {
  return {OutcomeKind::MinQualitySponsoring,
          OutcomeTuple{d, params.exit_price(), params.zeta * d}};
}

std::optional<StableOutcome> interior_outcome(const MarketParams& params) {
  if (!(params.nu1 > 0.0)) return std::nullopt;
  const double b = params.big_n - params.nu2 * params.big_d / (params.kappa_u * params.nu1);
  if (!(b > 0.0 && b <= params.n_hat)) return std::nullopt;
  return StableOutcome{OutcomeKind::InteriorStable,
                       OutcomeTuple{params.kappa_u * b, params.alpha * params.kappa_u, b}};
}

Trajectory simulate(double d0, const MarketParams& params, SimulationMode mode,
                    std::size_t horizon, const SteeringOptions& steering) {
  validate_params(params);
  if (!(d0 > 0.0) || !std::isfinite(d0)) throw DomainError("simulate: d0 must be > 0");
  if (horizon < 1) throw DomainError("simulate: horizon must be >= 1");

  switch (mode) {
    case SimulationMode::BothShortSighted:
      return run(d0, params, horizon, [&](double d) { return spne_epoch(d, params); });

    case SimulationMode::LongSightedSP: {
      if (!params.serves(d0)) return run(d0, params, horizon, nullptr);
      const StableOutcome target = long_sighted_sp_reachable_target(d0, params);
      if (!target.tuple) {
        return run(d0, params, horizon, [](double) { return EpochDecision::no_sponsoring(); });
      }
      const OutcomeTuple goal = *target.tuple;
      return run(d0, params, horizon, [&](double d) {
        if (arrived(d, goal.d)) return with_cp_response(d, goal.p, params);
        // Induce the desired bits through the CP's interior response b = alpha d / p.
        const double b = steer_bits(d, goal.d, params, steering);
        return with_cp_response(d, params.alpha * d / b, params);
      });
    }

    case SimulationMode::LongSightedCP: {
      if (!params.serves(d0)) return run(d0, params, horizon, nullptr);
      const std::optional<StableOutcome> target = long_sighted_cp_target(d0, params);
      return run(d0, params, horizon, [&](double d) {
        const SpDecision sp = sp_equilibrium_price(d, params);
        if (!sp.y) return EpochDecision::no_sponsoring();
        EpochDecision out;
        out.y = true;
        out.p = sp.p;
        if (!target) return out;  // the CP declines
        out.z = true;
        const OutcomeTuple& goal = *target->tuple;
        out.b = arrived(d, goal.d) ? stable_bits(target->kind, d, params)
                                   : steer_bits(d, goal.d, params, steering);
        return out;
      });
    }
  }
  throw DomainError("simulate: unknown mode");
}

bool has_converged(const Trajectory& traj, const ClassifierSettings& settings) {
  if (traj.terminated_at) return false;
  const std::size_t n = traj.size();
  if (n < settings.window + 1) return false;
  for (std::size_t t = n - settings.window - 1; t + 1 < n; ++t) {
    const double d = traj.demands[t];
    if (!(std::abs(traj.demands[t + 1] - d) < settings.convergence_tol * d)) return false;
  }
  return true;
}

std::vector<StableOutcome> matching_outcomes(double d, double p, double b,
                                             const MarketParams& params, double match_tol) {
  std::vector<StableOutcome> out;
  const QualityRegime regime = quality_regime(params);
  if (regime == QualityRegime::OverProvisioned) return out;

  const auto matches = [&](const OutcomeTuple& t) {
    return rel_close(d, t.d, match_tol) && rel_close(p, t.p, match_tol) &&
           rel_close(b, t.b, match_tol);
  };

  const StableOutcome max_bit = max_bit_outcome(params);
  if (matches(*max_bit.tuple)) out.push_back(max_bit);

  if (regime == QualityRegime::Matched && d > 0.0 &&
      d <= params.max_feasible_demand() * (1.0 + match_tol)) {
    const StableOutcome min_quality = min_quality_outcome(d, params);
    if (matches(*min_quality.tuple)) out.push_back(min_quality);
  }

  // With b = n_hat the interior tuple is the maximum-bit tuple; count it once.
  const auto interior = interior_outcome(params);
  if (interior && matches(*interior->tuple) &&
      !rel_close(interior->tuple->b, max_bit.tuple->b, match_tol)) {
    out.push_back(*interior);
  }
  return out;
}

StableOutcome classify_outcome(const Trajectory& traj, const MarketParams& params,
                               const ClassifierSettings& settings) {
  if (traj.terminated_at) return {OutcomeKind::NoSponsoring, std::nullopt};
  if (!has_converged(traj, settings)) return {OutcomeKind::Unstable, std::nullopt};

  const double d = traj.demands.back();
  const EpochDecision& last = traj.decisions.back();
  const auto found = matching_outcomes(d, *last.p, *last.b, params, settings.match_tol);
  if (found.empty()) {
    throw ClassificationAmbiguous("converged point (d=" + format_real(d) + ", p=" +
                                  format_real(*last.p) + ", b=" + format_real(*last.b) +
                                  ") matches no stable outcome");
  }
  return found.front();
}

double min_quality_optimal_demand(const MarketParams& params) {
  // SP payoff along the family: d * slope + nu2 D ln(kappa_sp (N - zeta d) / D).
  const double slope = params.alpha * std::log(params.kappa_cp * params.zeta) +
                       params.nu1 * std::log(params.kappa_sp * params.zeta);
  const double cap = params.max_feasible_demand();
  if (!(slope > 0.0)) return 0.0;
  const double congestion = params.nu2 * params.big_d;
  if (congestion == 0.0) return cap;
  const double stationary = params.big_n / params.zeta - congestion / slope;
  if (stationary < 0.0) return 0.0;
  return std::min(stationary, cap);
}

StableOutcome long_sighted_sp_target(const MarketParams& params) {
  const StableOutcome none{OutcomeKind::NoSponsoring, std::nullopt};
  switch (quality_regime(params)) {
    case QualityRegime::OverProvisioned:
      return none;

    case QualityRegime::Matched: {
      const double d = min_quality_optimal_demand(params);
      if (!(d > 0.0)) return none;
      const StableOutcome target = min_quality_outcome(d, params);
      if (stable_point_payoffs(target, params).u_sp < no_sponsoring_payoff(d, params)) return none;
      return target;
    }

    case QualityRegime::UnderProvisioned: {
      std::vector<StableOutcome> candidates;
      if (params.n_hat < params.big_n) candidates.push_back(max_bit_outcome(params));
      if (auto interior = interior_outcome(params); interior && interior->tuple->b < params.big_n) {
        candidates.push_back(*interior);
      }
      std::optional<StableOutcome> best;
      double best_payoff = 0.0;
      for (const StableOutcome& candidate : candidates) {
        const double u_sp = stable_point_payoffs(candidate, params).u_sp;
        if (!best || u_sp > best_payoff) {
          best = candidate;
          best_payoff = u_sp;
        }
      }
      if (!best || best_payoff < no_sponsoring_payoff(best->tuple->d, params)) return none;
      return *best;
    }
  }
  return none;
}

std::vector<RankedOutcome> long_sighted_cp_ranking(const MarketParams& params) {
  std::vector<RankedOutcome> out;
  const auto add = [&](const StableOutcome& outcome) {
    if (outcome.tuple->b >= params.big_n) return;
    out.push_back({outcome, stable_point_payoffs(outcome, params)});
  };
  switch (quality_regime(params)) {
    case QualityRegime::OverProvisioned:
      break;
    case QualityRegime::Matched: {
      const double d = min_quality_optimal_demand(params);
      add(min_quality_outcome(d > 0.0 ? d : params.max_feasible_demand(), params));
      break;
    }
    case QualityRegime::UnderProvisioned:
      add(max_bit_outcome(params));
      if (auto interior = interior_outcome(params)) add(*interior);
      break;
  }
  std::stable_sort(out.begin(), out.end(), [](const RankedOutcome& a, const RankedOutcome& b) {
    return a.payoffs.u_cp > b.payoffs.u_cp;
  });
  return out;
}

StablePayoffs stable_point_payoffs(const StableOutcome& outcome, const MarketParams& params) {
  if (!outcome.tuple || outcome.kind == OutcomeKind::NoSponsoring ||
      outcome.kind == OutcomeKind::Unstable) {
    throw DomainError("stable_point_payoffs: outcome has no sponsoring tuple");
  }
  const OutcomeTuple& t = *outcome.tuple;
  return {cp_utility(t.d, t.b, t.p, params), sp_utility(t.d, t.b, t.p, params)};
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "epoch,d,y,p,z,b\n";
  for (std::size_t t = 0; t < traj.size(); ++t) {
    const EpochDecision& e = traj.decisions[t];
    os << t << ',' << format_real(traj.demands[t]) << ',' << (e.y ? 1 : 0) << ','
       << format_real(e.p) << ',' << (e.z ? 1 : 0) << ',' << format_real(e.b) << '\n';
  }
}

}  // namespace qsd
