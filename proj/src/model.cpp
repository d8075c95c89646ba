#include "qsd/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "qsd/errors.hpp"

namespace qsd {
namespace {

// coeff * ln(arg), with a zero coefficient contributing nothing even when the
// logarithm diverges.
double weighted_log(double coeff, double arg) {
  if (coeff == 0.0) return 0.0;
  return coeff * std::log(arg);
}

void require(bool ok, const char* what) {
  if (!ok) throw InvalidParams(what);
}

}  // namespace

bool MarketParams::serves(double d) const {
  return d > 0.0 && d <= max_feasible_demand() * (1.0 + kCapSlack);
}

double MarketParams::exit_price() const { return alpha * std::log(kappa_cp * zeta) / zeta; }

void validate_params(const MarketParams& params) {
  const auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  require(finite_positive(params.alpha), "alpha must be > 0");
  require(finite_positive(params.gamma), "gamma must be > 0");
  require(finite_positive(params.zeta), "zeta must be > 0");
  require(finite_positive(params.kappa_u), "kappa_u must be > 0");
  require(finite_positive(params.kappa_cp), "kappa_cp must be > 0");
  require(finite_positive(params.kappa_sp), "kappa_sp must be > 0");
  require(std::isfinite(params.nu1) && params.nu1 >= 0.0, "nu1 must be >= 0");
  require(std::isfinite(params.nu2) && params.nu2 >= 0.0, "nu2 must be >= 0");
  require(finite_positive(params.big_d), "big_d must be > 0");
  require(finite_positive(params.big_n), "big_n must be > 0");
  require(finite_positive(params.n_hat), "n_hat must be > 0");
  require(params.n_hat <= params.big_n, "n_hat must be <= big_n");
  if (!(params.kappa_cp * params.zeta > std::numbers::e)) {
    std::ostringstream os;
    os << "kappa_cp * zeta must exceed e (got " << params.kappa_cp * params.zeta << ")";
    throw InvalidParams(os.str());
  }
}

double demand_update(double d, double b, const MarketParams& params) {
  if (d < 0.0) throw DomainError("demand_update: negative demand");
  if (d == 0.0) return 0.0;
  if (!(b > 0.0)) throw DomainError("demand_update: sponsored bits must be > 0 when demand > 0");
  const double bracket = 1.0 + params.gamma * std::log(params.kappa_u * b / d);
  const double next = d * std::max(bracket, 0.0);
  return next < kDemandFloor ? 0.0 : next;
}

double ad_utility(double d, double b, const MarketParams& params) {
  if (d < 0.0) throw DomainError("ad_utility: negative demand");
  if (d == 0.0) return 0.0;
  if (!(b > 0.0)) throw DomainError("ad_utility: sponsored bits must be > 0 when demand > 0");
  return params.alpha * d * std::log(params.kappa_cp * b / d);
}

double cp_utility(double d, double b, double p, const MarketParams& params) {
  return ad_utility(d, b, params) - p * b;
}

double user_satisfaction(double d, double b, const MarketParams& params) {
  if (d < 0.0) throw DomainError("user_satisfaction: negative demand");
  if (b < 0.0) throw DomainError("user_satisfaction: negative sponsored bits");
  if (!(b < params.big_n)) throw DomainError("user_satisfaction: sponsored bits must be < N");

  const double free_bits = params.big_n - b;
  if (d > 0.0 && b > 0.0) {
    return weighted_log(params.nu1 * d, params.kappa_sp * b / d) +
           weighted_log(params.nu2 * params.big_d, params.kappa_sp * free_bits / params.big_d);
  }
  const double best_effort =
      params.variant == ModelVariant::AugmentedBestEffort ? params.big_d + d : params.big_d;
  return weighted_log(params.nu2 * best_effort, params.kappa_sp * free_bits / best_effort);
}

double sp_utility(double d, double b, double p, const MarketParams& params) {
  return p * b + user_satisfaction(d, b, params);
}

}  // namespace qsd
