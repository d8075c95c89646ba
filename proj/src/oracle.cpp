#include "qsd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qsd/errors.hpp"
#include "qsd/spne.hpp"

namespace qsd::oracle {

void GridSpec::validate() const {
  if (points < 2) throw DomainError("GridSpec: need at least 2 points");
  if (!(lo < hi)) throw DomainError("GridSpec: lo must be < hi");
  if (scale == GridScale::Logarithmic && !(lo > 0.0)) {
    throw DomainError("GridSpec: logarithmic grid needs lo > 0");
  }
}

double GridSpec::at(std::size_t i) const {
  if (i == 0) return lo;
  if (i + 1 >= points) return hi;
  const double frac = static_cast<double>(i) / static_cast<double>(points - 1);
  if (scale == GridScale::Logarithmic) return lo * std::pow(hi / lo, frac);
  return lo + (hi - lo) * frac;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) out[i] = at(i);
  return out;
}

GridSpec cp_bits_grid(double d, const MarketParams& params, std::size_t points) {
  return {points, std::min(params.zeta * d, params.n_hat), params.n_hat, GridScale::Linear};
}

GridSpec sp_price_grid(const MarketParams& params, std::size_t points) {
  const double top = params.exit_price();
  return {points, top / static_cast<double>(points), top, GridScale::Linear};
}

BruteCpResult brute_cp_best_response(double d, double p, const MarketParams& params,
                                     const GridSpec& grid) {
  BruteCpResult out;
  if (!params.serves(d)) return out;

  double best = -std::numeric_limits<double>::infinity();
  double best_b = grid.lo;
  const std::size_t n = grid.lo < grid.hi ? grid.points : 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double b = grid.at(i);
    const double u = cp_utility(d, b, p, params);
    if (u > best) {
      best = u;
      best_b = b;
    }
  }
  out.utility = best;
  if (best >= 0.0) {
    out.z = true;
    out.b = best_b;
  }
  return out;
}

BruteSpResult brute_sp_price(double d, const MarketParams& params, const GridSpec& grid) {
  grid.validate();
  BruteSpResult out;
  out.u_sp = no_sponsoring_payoff(d, params);

  std::vector<double> prices = grid.values();
  for (double kink : {params.alpha * d / params.n_hat, params.alpha / params.zeta}) {
    if (kink >= grid.lo && kink <= grid.hi) prices.push_back(kink);
  }

  double best = -std::numeric_limits<double>::infinity();
  double best_p = 0.0;
  for (double p : prices) {
    const CpResponse cp = cp_best_response(d, p, params);
    if (!cp.z || *cp.b >= params.big_n) continue;
    const double u = sp_utility(d, *cp.b, p, params);
    if (u > best) {
      best = u;
      best_p = p;
    }
  }
  if (best >= out.u_sp) {
    out.y = true;
    out.p = best_p;
    out.u_sp = best;
  }
  return out;
}

std::optional<GridSpec> nbs_price_grid(const MarketParams& params, const DisagreementPoint& dp,
                                       const GridSpec& d_grid, std::size_t points) {
  d_grid.validate();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < d_grid.points; ++i) {
    const double d = d_grid.at(i);
    const double b = d / params.kappa_u;
    if (!(d > 0.0) || !(b < params.big_n)) continue;
    // At p = 0 the CP keeps all ad revenue; each unit of price moves b between players.
    const double cp_room = cp_utility(d, b, 0.0, params) - dp.d_cp;
    const double sp_need = dp.d_sp - sp_utility(d, b, 0.0, params);
    if (cp_room < sp_need) continue;
    lo = std::min(lo, sp_need / b);
    hi = std::max(hi, cp_room / b);
  }
  if (!(lo <= hi)) return std::nullopt;
  if (lo == hi) {
    const double pad = std::max(1e-12, std::abs(lo) * 1e-9);
    lo -= pad;
    hi += pad;
  }
  return GridSpec{points, lo, hi, GridScale::Linear};
}

std::optional<BruteNbsResult> brute_nbs(const MarketParams& params, double w,
                                        const DisagreementPoint& dp, const GridSpec& d_grid,
                                        const GridSpec& p_grid) {
  d_grid.validate();
  p_grid.validate();
  std::optional<BruteNbsResult> best;
  for (std::size_t i = 0; i < d_grid.points; ++i) {
    const double d = d_grid.at(i);
    if (!(d > 0.0)) continue;
    const double b = d / params.kappa_u;
    if (!(b < params.big_n)) continue;
    for (std::size_t j = 0; j < p_grid.points; ++j) {
      const double p = p_grid.at(j);
      const double u_cp = cp_utility(d, b, p, params);
      const double u_sp = sp_utility(d, b, p, params);
      if (u_cp < dp.d_cp || u_sp < dp.d_sp) continue;
      const double product = std::pow(u_cp - dp.d_cp, w) * std::pow(u_sp - dp.d_sp, 1.0 - w);
      if (!best || product > best->nash_product) best = BruteNbsResult{d, p, product, u_cp, u_sp};
    }
  }
  return best;
}

}  // namespace qsd::oracle
