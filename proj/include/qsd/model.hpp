#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace qsd {

enum class ModelVariant {
  Base,
  // Best-effort demand includes the CP's own demand when nothing is sponsored.
  AugmentedBestEffort,
};

// All market constants. Defaults are the fixed values of the reference
// numerical setup (nu1 = 1, n_hat = 25, D = 50, kappa_sp = kappa_cp = 10,
// zeta = 0.3) with kappa_u at the stable quality 1/zeta; alpha, gamma, nu2
// and N are free and get neutral defaults.
struct MarketParams {
  double alpha = 1.0;
  double gamma = 0.1;
  double zeta = 0.3;
  double kappa_u = 1.0 / 0.3;
  double kappa_cp = 10.0;
  double kappa_sp = 10.0;
  double nu1 = 1.0;
  double nu2 = 1.0;
  double big_d = 50.0;
  double big_n = 100.0;
  double n_hat = 25.0;
  ModelVariant variant = ModelVariant::Base;

  // Largest demand the CP can serve at the minimum quality: n_hat / zeta.
  double max_feasible_demand() const { return n_hat / zeta; }
  // True when 0 < d <= n_hat / zeta, allowing kCapSlack for rounding at the cap.
  bool serves(double d) const;
  // Highest price at which the CP still joins: alpha ln(kappa_cp zeta) / zeta.
  double exit_price() const;
};

// One epoch of the two-stage game. p is present iff y, b iff z.
struct EpochDecision {
  bool y = false;
  std::optional<double> p;
  bool z = false;
  std::optional<double> b;

  bool sponsoring() const { return y && z; }
  static EpochDecision no_sponsoring() { return {}; }
};

// demands[t] is the demand the players observed when making decisions[t].
struct Trajectory {
  std::vector<double> demands;
  std::vector<EpochDecision> decisions;
  std::optional<std::size_t> terminated_at;

  std::size_t size() const { return demands.size(); }
};

// Demands below this are snapped to zero.
inline constexpr double kDemandFloor = 1e-12;
// Relative slack on the demand cap n_hat / zeta. A market parked at the cap
// drifts by a few ulps per epoch; without slack that drift reads as CP exit.
inline constexpr double kCapSlack = 1e-9;

// Throws InvalidParams naming the first violated constraint.
void validate_params(const MarketParams& params);

double demand_update(double d, double b, const MarketParams& params);

double ad_utility(double d, double b, const MarketParams& params);
double cp_utility(double d, double b, double p, const MarketParams& params);

// End-user satisfaction term of the SP payoff. Requires 0 <= b < N.
double user_satisfaction(double d, double b, const MarketParams& params);
double sp_utility(double d, double b, double p, const MarketParams& params);

}  // namespace qsd
