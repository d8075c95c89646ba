#include "qsd/spne.hpp"

#include <cmath>
#include <limits>

#include "qsd/errors.hpp"

namespace qsd {

std::string_view to_string(CpRegion region) {
  switch (region) {
    case CpRegion::MaxBits: return "MaxBits";
    case CpRegion::Interior: return "Interior";
    case CpRegion::MinQuality: return "MinQuality";
    case CpRegion::Exit: return "Exit";
  }
  return "?";
}

std::string_view to_string(PriceCandidate candidate) {
  switch (candidate) {
    case PriceCandidate::MaxBits: return "PriceMaxBits";
    case PriceCandidate::Interior: return "PriceInterior";
    case PriceCandidate::MinQuality: return "PriceMinQuality";
  }
  return "?";
}

CpResponse cp_best_response(double d, double p, const MarketParams& params) {
  if (p < 0.0 || std::isnan(p)) throw DomainError("cp_best_response: price must be >= 0");
  if (d < 0.0) throw DomainError("cp_best_response: negative demand");
  if (!params.serves(d)) return {};

  const double alpha = params.alpha;
  if (p <= alpha * d / params.n_hat) return {true, params.n_hat, CpRegion::MaxBits};
  if (p <= alpha / params.zeta) return {true, alpha * d / p, CpRegion::Interior};
  if (p <= params.exit_price()) {
    return {true, std::min(params.zeta * d, params.n_hat), CpRegion::MinQuality};
  }
  return {};
}

std::vector<CandidatePrice> sp_candidate_prices(double d, const MarketParams& params) {
  if (!(d > 0.0)) throw DomainError("sp_candidate_prices: demand must be > 0");
  const double alpha = params.alpha;
  std::vector<CandidatePrice> out;
  out.push_back({PriceCandidate::MaxBits, alpha * d / params.n_hat});
  if (params.nu1 > 0.0) {
    const double interior =
        alpha * (params.nu1 * d + params.nu2 * params.big_d) / (params.nu1 * params.big_n);
    if (alpha * d / params.n_hat <= interior && interior <= alpha / params.zeta) {
      out.push_back({PriceCandidate::Interior, interior});
    }
  }
  out.push_back({PriceCandidate::MinQuality, params.exit_price()});
  return out;
}

double no_sponsoring_payoff(double d, const MarketParams& params) {
  if (params.nu2 == 0.0) return 0.0;
  const double best_effort =
      params.variant == ModelVariant::AugmentedBestEffort ? params.big_d + d : params.big_d;
  return params.nu2 * best_effort * std::log(params.kappa_sp * params.big_n / best_effort);
}

SpDecision sp_equilibrium_price(double d, const MarketParams& params) {
  if (d < 0.0) throw DomainError("sp_equilibrium_price: negative demand");
  SpDecision out;
  out.u_sp = no_sponsoring_payoff(d, params);
  if (!params.serves(d)) return out;

  double best = -std::numeric_limits<double>::infinity();
  std::optional<CandidatePrice> best_candidate;
  for (const CandidatePrice& candidate : sp_candidate_prices(d, params)) {
    const CpResponse cp = cp_best_response(d, candidate.price, params);
    if (!cp.z) continue;
    // Sponsoring every bit leaves nothing for best-effort traffic.
    if (*cp.b >= params.big_n) continue;
    const double payoff = sp_utility(d, *cp.b, candidate.price, params);
    if (payoff > best) {
      best = payoff;
      best_candidate = candidate;
    }
  }
  if (best_candidate && best >= out.u_sp) {
    out.y = true;
    out.p = best_candidate->price;
    out.chosen_candidate = best_candidate->label;
    out.u_sp = best;
  }
  return out;
}

EpochDecision spne_epoch(double d, const MarketParams& params) {
  const SpDecision sp = sp_equilibrium_price(d, params);
  if (!sp.y) return EpochDecision::no_sponsoring();
  const CpResponse cp = cp_best_response(d, *sp.p, params);
  EpochDecision out;
  out.y = true;
  out.p = sp.p;
  out.z = cp.z;
  out.b = cp.b;
  return out;
}

}  // namespace qsd
