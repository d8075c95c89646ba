#include "qsd/bargaining.hpp"

#include <algorithm>
#include <cmath>

#include "qsd/errors.hpp"
#include "qsd/spne.hpp"

namespace qsd {
namespace {

// Per-unit-demand value of cooperation on the stable manifold.
double ad_rate(const MarketParams& params) {
  return params.alpha * std::log(params.kappa_cp / params.kappa_u);
}

double sponsored_satisfaction_rate(const MarketParams& params) {
  return params.nu1 * std::log(params.kappa_sp / params.kappa_u);
}

double manifold_ad_utility(double d, const MarketParams& params) { return ad_rate(params) * d; }

double manifold_satisfaction(double d, const MarketParams& params) {
  double u = sponsored_satisfaction_rate(params) * d;
  if (params.nu2 != 0.0) {
    u += params.nu2 * params.big_d *
         std::log(params.kappa_sp * (params.big_n - d / params.kappa_u) / params.big_d);
  }
  return u;
}

struct EpochPayoffs {
  double u_cp = 0.0;
  double u_sp = 0.0;
};

EpochPayoffs epoch_payoffs(double d, const EpochDecision& e, const MarketParams& params) {
  if (!e.sponsoring()) return {0.0, no_sponsoring_payoff(d, params)};
  return {cp_utility(d, *e.b, *e.p, params), sp_utility(d, *e.b, *e.p, params)};
}

}  // namespace

DisagreementPoint disagreement_payoffs(const MarketParams& params, double d0,
                                       const DisagreementOptions& options) {
  const Trajectory traj = simulate(d0, params, SimulationMode::BothShortSighted, options.horizon);
  const StableOutcome outcome = classify_outcome(traj, params, options.classifier);

  switch (outcome.kind) {
    case OutcomeKind::NoSponsoring: {
      const std::size_t last = *traj.terminated_at;
      return {0.0, no_sponsoring_payoff(traj.demands[last], params),
              DisagreementSource::StableOutcome};
    }
    case OutcomeKind::Unstable: {
      // Average over realized epochs [T/2, T); a trajectory that never
      // terminated has a full horizon.
      const std::size_t n = traj.size();
      const std::size_t begin = n / 2;
      double cp = 0.0;
      double sp = 0.0;
      for (std::size_t t = begin; t < n; ++t) {
        const EpochPayoffs u = epoch_payoffs(traj.demands[t], traj.decisions[t], params);
        cp += u.u_cp;
        sp += u.u_sp;
      }
      const double count = static_cast<double>(n - begin);
      return {cp / count, sp / count, DisagreementSource::TimeAverage};
    }
    default: {
      const StablePayoffs u = stable_point_payoffs(outcome, params);
      return {u.u_cp, u.u_sp, DisagreementSource::StableOutcome};
    }
  }
}

double excess_profit(double d, const MarketParams& params, const DisagreementPoint& dp) {
  if (d < 0.0) throw DomainError("excess_profit: negative demand");
  if (!(d / params.kappa_u < params.big_n)) {
    throw DomainError("excess_profit: stable bits d / kappa_u must be < N");
  }
  return manifold_ad_utility(d, params) + manifold_satisfaction(d, params) - dp.d_cp - dp.d_sp;
}

double excess_maximizing_demand(const MarketParams& params) {
  // d/dd u_excess = rate - nu2 D / (kappa_u N - d), concave in d.
  const double rate = ad_rate(params) + sponsored_satisfaction_rate(params);
  const double upper = params.n_hat * params.kappa_u;
  if (!(rate > 0.0)) return 0.0;
  const double congestion = params.nu2 * params.big_d;
  if (congestion == 0.0) return upper;
  return std::clamp(params.kappa_u * params.big_n - congestion / rate, 0.0, upper);
}

BargainingSolution nbs_solve(const MarketParams& params, double w, const DisagreementPoint& dp) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("nbs_solve: w must lie in [0, 1]");

  BargainingSolution out;
  out.d_star = excess_maximizing_demand(params);
  out.u_cp = dp.d_cp;
  out.u_sp = dp.d_sp;
  if (!(out.d_star / params.kappa_u < params.big_n)) {
    // n_hat = N with nu2 = 0: satisfaction is linear up to the full frame.
    out.d_star = std::nextafter(params.kappa_u * params.big_n, 0.0);
  }
  out.u_excess = excess_profit(out.d_star, params, dp);
  const double u_ad = manifold_ad_utility(out.d_star, params);
  const double u_s = manifold_satisfaction(out.d_star, params);
  // Surplus within round-off of the payoffs it is computed from counts as zero;
  // this happens when the short-sighted game already sits at d*.
  const double noise = kSurplusRoundoff * (std::abs(u_ad) + std::abs(u_s) + std::abs(dp.d_cp) +
                                           std::abs(dp.d_sp));
  if (!(out.u_excess > noise) || !(out.d_star > 0.0)) return out;

  const double bits = out.d_star / params.kappa_u;
  const double p = ((u_ad - dp.d_cp) - w * out.u_excess) / bits;

  out.agreed = true;
  out.p_star = p;
  out.u_cp = u_ad - p * bits;
  out.u_sp = p * bits + u_s;
  out.w_threshold = (u_ad - dp.d_cp) / out.u_excess;
  return out;
}

double percent_increase(double u_before, double u_after) {
  if (u_after == 0.0) throw DomainError("percent_increase: utility after bargaining is zero");
  return (u_after - u_before) / u_after * 100.0;
}

}  // namespace qsd
