#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qsd/model.hpp"

namespace qsd {

// Piecewise regions of the CP's best response, in increasing price order.
enum class CpRegion { MaxBits, Interior, MinQuality, Exit };

struct CpResponse {
  bool z = false;
  std::optional<double> b;
  CpRegion region = CpRegion::Exit;
};

// The SP's candidate optimum prices.
enum class PriceCandidate { MaxBits, Interior, MinQuality };

struct CandidatePrice {
  PriceCandidate label;
  double price;
};

struct SpDecision {
  bool y = false;
  std::optional<double> p;
  std::optional<PriceCandidate> chosen_candidate;
  // Achieved payoff, or the no-sponsoring baseline when y is false.
  double u_sp = 0.0;
};

std::string_view to_string(CpRegion region);
std::string_view to_string(PriceCandidate candidate);

// Second-stage best response of a myopic CP to price p at demand d.
// Boundary prices take the label of the lower-price region; indifference joins.
CpResponse cp_best_response(double d, double p, const MarketParams& params);

// Candidate prices in tie-break order: MaxBits, Interior (when inside its
// feasibility window and nu1 > 0), MinQuality.
std::vector<CandidatePrice> sp_candidate_prices(double d, const MarketParams& params);

// SP payoff when it does not offer sponsorship.
double no_sponsoring_payoff(double d, const MarketParams& params);

SpDecision sp_equilibrium_price(double d, const MarketParams& params);

// Full backward-induction outcome of one epoch.
EpochDecision spne_epoch(double d, const MarketParams& params);

}  // namespace qsd
