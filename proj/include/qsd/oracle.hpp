#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qsd/bargaining.hpp"
#include "qsd/model.hpp"

// Brute-force grid verifiers for the closed-form optima. They evaluate only
// the model-level utilities (plus the CP response when scanning SP prices).
namespace qsd::oracle {

enum class GridScale { Linear, Logarithmic };

struct GridSpec {
  std::size_t points = 2;
  double lo = 0.0;
  double hi = 1.0;
  GridScale scale = GridScale::Linear;

  // Throws DomainError unless points >= 2, lo < hi, and lo > 0 for log grids.
  void validate() const;
  double at(std::size_t i) const;
  std::vector<double> values() const;
};

struct BruteCpResult {
  bool z = false;
  std::optional<double> b;
  // Best grid utility; meaningful whenever the feasible set is nonempty.
  std::optional<double> utility;
};

struct BruteSpResult {
  bool y = false;
  std::optional<double> p;
  double u_sp = 0.0;
};

struct BruteNbsResult {
  double d = 0.0;
  double p = 0.0;
  double nash_product = 0.0;
  double u_cp = 0.0;
  double u_sp = 0.0;
};

// Linear grid over the CP's feasible bits [zeta d, n_hat].
GridSpec cp_bits_grid(double d, const MarketParams& params, std::size_t points = 10000);
// Linear grid over prices (0, exit price].
GridSpec sp_price_grid(const MarketParams& params, std::size_t points = 10000);

// Grid maximizer of cp_utility over the feasible bits. A degenerate feasible
// set (d = n_hat / zeta) is evaluated at its single point.
BruteCpResult brute_cp_best_response(double d, double p, const MarketParams& params,
                                     const GridSpec& grid);

// Scans the price grid, maps each price through the CP's best response and
// keeps the best SP payoff. The CP response kinks alpha d / n_hat and
// alpha / zeta are scanned as well, since the payoff is piecewise there.
BruteSpResult brute_sp_price(double d, const MarketParams& params, const GridSpec& grid);

// Linear price grid covering every price that keeps both players at or above
// disagreement somewhere on d_grid. Empty when no grid demand has surplus.
std::optional<GridSpec> nbs_price_grid(const MarketParams& params, const DisagreementPoint& dp,
                                       const GridSpec& d_grid, std::size_t points = 500);

// Nash product maximized over a (d, p) grid on the stable manifold, subject to
// both players weakly beating disagreement. Empty when nothing is feasible.
std::optional<BruteNbsResult> brute_nbs(const MarketParams& params, double w,
                                        const DisagreementPoint& dp, const GridSpec& d_grid,
                                        const GridSpec& p_grid);

}  // namespace qsd::oracle
