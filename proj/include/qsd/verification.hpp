#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qsd/config.hpp"
#include "qsd/model.hpp"

namespace qsd {

// Result of one oracle-agreement suite.
struct SuiteReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  // Largest observed discrepancy, in the suite's own units.
  double worst = 0.0;
  std::string first_failure;

  bool passed() const { return cases > 0 && failures == 0; }
};

// Random parameter set satisfying validate_params. kappa_u is drawn so that the
// stable quality 1/kappa_u is at least zeta (the sponsoring regime).
MarketParams random_params(std::mt19937_64& rng);

// Closed-form CP response against the bits grid: payoff within 1e-6 absolute,
// same participation flag, bits within one grid step.
SuiteReport verify_cp_oracle(std::uint64_t seed, std::size_t draws = 1000);

// Closed-form SP price against the price grid at every point of `grid` and each
// demand fraction of n_hat / zeta: payoffs within 1e-6 relative.
SuiteReport verify_sp_oracle(const SweepConfig& grid, const std::vector<double>& demand_fractions);

// Nash bargaining on `sets` random parameter sets with agreement, for
// w in {0.1, 0.5, 0.9}: surplus split identity and zero price at the money-flow
// threshold to 1e-9 relative, grid demand within one step.
SuiteReport verify_nbs_oracle(std::uint64_t seed, std::size_t sets = 50);

// The SP grid: gamma x nu2 x N with the remaining parameters at their defaults.
SweepConfig sp_verification_grid();

std::vector<SuiteReport> verify_all(std::uint64_t seed);

}  // namespace qsd
