#pragma once

#include <cstddef>
#include <optional>

#include "qsd/dynamics.hpp"
#include "qsd/model.hpp"

namespace qsd {

enum class DisagreementSource { StableOutcome, TimeAverage };

// Payoffs each player falls back to when bargaining fails.
// Relative band below which the bargaining surplus is treated as zero.
inline constexpr double kSurplusRoundoff = 1e-12;

struct DisagreementPoint {
  double d_cp = 0.0;
  double d_sp = 0.0;
  DisagreementSource source = DisagreementSource::StableOutcome;
};

struct DisagreementOptions {
  std::size_t horizon = kDefaultHorizon;
  ClassifierSettings classifier{};
};

struct BargainingSolution {
  double d_star = 0.0;
  // Transfer price; absent without agreement. Negative when the SP pays the CP.
  std::optional<double> p_star;
  double u_cp = 0.0;
  double u_sp = 0.0;
  double u_excess = 0.0;
  // Bargaining power above which the money flow reverses; absent without agreement.
  std::optional<double> w_threshold;
  bool agreed = false;
};

// Outcome of the short-sighted sequential game from d0: payoffs at its stable
// point, or per-epoch averages over the second half of the horizon when unstable.
DisagreementPoint disagreement_payoffs(const MarketParams& params, double d0,
                                       const DisagreementOptions& options = {});

// Joint surplus over disagreement on the stable manifold b = d / kappa_u.
// Independent of the transfer price.
double excess_profit(double d, const MarketParams& params, const DisagreementPoint& dp);

// Surplus-maximizing stable demand on [0, n_hat kappa_u].
double excess_maximizing_demand(const MarketParams& params);

BargainingSolution nbs_solve(const MarketParams& params, double w, const DisagreementPoint& dp);

// (after - before) / after * 100.
double percent_increase(double u_before, double u_after);

}  // namespace qsd
