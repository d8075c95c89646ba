#include "qsd/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qsd/bargaining.hpp"
#include "qsd/errors.hpp"
#include "qsd/format.hpp"
#include "qsd/oracle.hpp"
#include "qsd/spne.hpp"
#include "qsd/sweep.hpp"

namespace qsd {
namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void record(SuiteReport& r, double err, bool ok, const std::string& what) {
  ++r.cases;
  r.worst = std::max(r.worst, err);
  if (!ok) {
    if (r.failures == 0) r.first_failure = what;
    ++r.failures;
  }
}

}  // namespace

MarketParams random_params(std::mt19937_64& rng) {
  MarketParams p;
  p.alpha = uniform(rng, 0.5, 2.0);
  p.gamma = uniform(rng, 0.02, 1.0);
  p.zeta = uniform(rng, 0.1, 0.6);
  p.kappa_u = uniform(rng, 0.4, 1.0) / p.zeta;
  p.kappa_cp = uniform(rng, 1.2, 5.0) * std::exp(1.0) / p.zeta;
  p.kappa_sp = uniform(rng, 1.2, 5.0) / p.zeta;
  p.nu1 = uniform(rng, 0.2, 2.0);
  p.nu2 = uniform(rng, 0.0, 5.0);
  p.big_d = uniform(rng, 10.0, 100.0);
  p.big_n = uniform(rng, 50.0, 200.0);
  p.n_hat = uniform(rng, 0.05, 0.5) * p.big_n;
  validate_params(p);
  return p;
}

SuiteReport verify_cp_oracle(std::uint64_t seed, std::size_t draws) {
  SuiteReport r;
  r.name = "cp_best_response vs bits grid";
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < draws; ++i) {
    const MarketParams params = random_params(rng);
    const double d = uniform(rng, 0.0, 1.0) * params.max_feasible_demand();
    const double p = uniform(rng, 0.0, 1.2) * params.exit_price();
    if (!(d > 0.0)) continue;

    const CpResponse cf = cp_best_response(d, p, params);
    const oracle::GridSpec grid = oracle::cp_bits_grid(d, params);
    const oracle::BruteCpResult bf = oracle::brute_cp_best_response(d, p, params, grid);
    const double step = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);

    const double u_cf = cf.z ? cp_utility(d, *cf.b, p, params) : 0.0;
    const double u_bf = bf.z ? *bf.utility : 0.0;
    bool ok = cf.z == bf.z && u_cf >= u_bf - 1e-6;
    if (ok && cf.z) ok = std::abs(*cf.b - *bf.b) <= step * (1.0 + 1e-9);
    std::ostringstream what;
    what << "d=" << format_real(d) << " p=" << format_real(p) << " region=" << to_string(cf.region)
         << " z=" << cf.z << "/" << bf.z << " u=" << format_real(u_cf) << "/" << format_real(u_bf);
    record(r, std::max(0.0, u_bf - u_cf), ok, what.str());
  }
  return r;
}

SweepConfig sp_verification_grid() {
  return load_config_text(
      "regime = short_short\n"
      "axes = gamma, nu2, big_n\n"
      "axes.gamma.lo = 0.05\naxes.gamma.hi = 2\naxes.gamma.points = 10\naxes.gamma.scale = log\n"
      "axes.nu2.lo = 0\naxes.nu2.hi = 45\naxes.nu2.points = 10\n"
      "axes.big_n.lo = 50\naxes.big_n.hi = 150\naxes.big_n.points = 5\n");
}

SuiteReport verify_sp_oracle(const SweepConfig& grid, const std::vector<double>& demand_fractions) {
  SuiteReport r;
  r.name = "sp_equilibrium_price vs price grid";
  const std::size_t n = sweep_size(grid);
  for (std::size_t i = 0; i < n; ++i) {
    const MarketParams params = sweep_point_params(grid, i);
    validate_params(params);
    const oracle::GridSpec prices = oracle::sp_price_grid(params);
    for (double frac : demand_fractions) {
      const double d = frac * params.max_feasible_demand();
      const SpDecision cf = sp_equilibrium_price(d, params);
      const oracle::BruteSpResult bf = oracle::brute_sp_price(d, params, prices);
      const double err = std::abs(cf.u_sp - bf.u_sp) / std::max(std::abs(bf.u_sp), 1e-300);
      std::ostringstream what;
      what << "point " << i << " d=" << format_real(d) << " u=" << format_real(cf.u_sp) << "/"
           << format_real(bf.u_sp);
      record(r, err, err <= 1e-6, what.str());
    }
  }
  return r;
}

SuiteReport verify_nbs_oracle(std::uint64_t seed, std::size_t sets) {
  SuiteReport r;
  r.name = "nbs_solve vs bargaining grid";
  std::mt19937_64 rng(seed);
  std::size_t found = 0;
  for (std::size_t attempt = 0; found < sets && attempt < 50 * sets; ++attempt) {
    const MarketParams params = random_params(rng);
    const DisagreementPoint dp = disagreement_payoffs(params, 1.0);
    if (!nbs_solve(params, 0.5, dp).agreed) continue;
    ++found;

    const oracle::GridSpec d_grid{500, 0.0, params.n_hat * params.kappa_u};
    const double step = d_grid.hi / static_cast<double>(d_grid.points - 1);
    for (double w : {0.1, 0.5, 0.9}) {
      const BargainingSolution s = nbs_solve(params, w, dp);
      std::ostringstream what;
      what << "set " << found << " w=" << w << " d*=" << format_real(s.d_star);

      const double lhs = (s.u_cp - dp.d_cp) * (1.0 - w);
      const double rhs = (s.u_sp - dp.d_sp) * w;
      const double split = std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-300});
      record(r, split, s.agreed && split <= 1e-9, what.str() + " split");

      const auto p_grid = oracle::nbs_price_grid(params, dp, d_grid);
      const auto bf = p_grid ? oracle::brute_nbs(params, w, dp, d_grid, *p_grid) : std::nullopt;
      const double gap = bf ? std::abs(bf->d - s.d_star) / step : INFINITY;
      record(r, gap, gap <= 1.0 + 1e-9, what.str() + " grid d=" + (bf ? format_real(bf->d) : "none"));
    }
    const BargainingSolution half = nbs_solve(params, 0.5, dp);
    if (half.w_threshold && *half.w_threshold >= 0.0 && *half.w_threshold <= 1.0) {
      const BargainingSolution at = nbs_solve(params, *half.w_threshold, dp);
      // Scale: the price at w = 0, where the CP concedes the whole surplus.
      const double scale = std::abs(*nbs_solve(params, 0.0, dp).p_star);
      const double err = std::abs(*at.p_star) / std::max(scale, 1e-300);
      record(r, err, err <= 1e-9, "set " + std::to_string(found) + " threshold price");
    }
  }
  if (found < sets) {
    record(r, 0.0, false, "only " + std::to_string(found) + " parameter sets reached agreement");
  }
  return r;
}

std::vector<SuiteReport> verify_all(std::uint64_t seed) {
  return {verify_cp_oracle(seed), verify_sp_oracle(sp_verification_grid(), {0.05, 0.25, 0.5, 0.75, 1.0}),
          verify_nbs_oracle(seed)};
}

}  // namespace qsd
