#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "qsd/dynamics.hpp"
#include "qsd/errors.hpp"
#include "qsd/spne.hpp"

using namespace qsd;

namespace {

MarketParams matched() {
  MarketParams p;
  p.kappa_u = 1 / p.zeta;
  return p;
}

MarketParams under() {
  MarketParams p;
  p.kappa_u = 0.5 / p.zeta;
  return p;
}

// SP payoff along the minimum-quality family, evaluated from the model directly.
double family_payoff(double d, const MarketParams& p) {
  return sp_utility(d, p.zeta * d, p.exit_price(), p);
}

}  // namespace

TEST_CASE("simulate: infeasible start terminates at once") {
  const MarketParams p = matched();
  const Trajectory t = simulate(p.max_feasible_demand() * 1.01, p, SimulationMode::BothShortSighted);
  REQUIRE(t.terminated_at);
  CHECK(*t.terminated_at == 0);
  CHECK(t.size() == 1);
  CHECK(classify_outcome(t, p).kind == OutcomeKind::NoSponsoring);
}

TEST_CASE("simulate: argument checks") {
  MarketParams p = matched();
  CHECK_THROWS_AS(simulate(1, p, SimulationMode::BothShortSighted, 0), DomainError);
  CHECK_THROWS_AS(simulate(-1, p, SimulationMode::BothShortSighted), DomainError);
  p.zeta = 0.2;
  CHECK_THROWS_AS(simulate(1, p, SimulationMode::BothShortSighted), InvalidParams);
}

TEST_CASE("simulate: the minimum-quality fixed point holds demand") {
  const MarketParams p = matched();
  const double d = 40;
  // Bits at the minimum quality give the stable quality when kappa_u zeta = 1.
  for (int t = 0; t < 1000; ++t) CHECK(demand_update(d, p.zeta * d, p) == doctest::Approx(d).epsilon(1e-13));
  const CpResponse r = cp_best_response(d, p.exit_price(), p);
  CHECK(r.region == CpRegion::MinQuality);
}

TEST_CASE("simulate: small gamma and nu2 converge") {
  MarketParams p = matched();
  p.gamma = 0.05;
  p.nu2 = 1;
  const Trajectory t = simulate(1, p, SimulationMode::BothShortSighted);
  REQUIRE_FALSE(t.terminated_at);
  CHECK(t.size() == kDefaultHorizon);
  CHECK(has_converged(t));
  const StableOutcome o = classify_outcome(t, p);
  CHECK(o.kind == OutcomeKind::MinQualitySponsoring);
  const std::size_t n = t.size();
  CHECK(std::abs(t.demands[n - 1] - t.demands[n - 2]) < 1e-8 * t.demands[n - 1]);
  // Lemma 1 at convergence.
  CHECK(std::abs(*t.decisions.back().b - t.demands.back() / p.kappa_u) <= 1e-8 * t.demands.back());
}

TEST_CASE("trajectory invariants") {
  MarketParams p = matched();
  p.gamma = 1.5;
  p.nu2 = 5;
  const Trajectory t = simulate(1, p, SimulationMode::BothShortSighted, 500);
  REQUIRE(t.demands.size() == t.decisions.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t.demands[i] >= 0.0);
    const EpochDecision& e = t.decisions[i];
    if (e.z) CHECK(e.y);
    CHECK(e.p.has_value() == e.y);
    CHECK(e.b.has_value() == e.z);
  }
}

TEST_CASE("stable tuples") {
  const MarketParams p = under();
  const StableOutcome mb = max_bit_outcome(p);
  CHECK(mb.tuple->d == doctest::Approx(p.kappa_u * p.n_hat));
  CHECK(mb.tuple->p == doctest::Approx(p.alpha * p.kappa_u));
  CHECK(mb.tuple->b == p.n_hat);

  MarketParams q = under();
  q.nu2 = 3.2;  // b = 100 - 160 / (5/3) = 4
  const auto in = interior_outcome(q);
  REQUIRE(in);
  CHECK(in->tuple->b == doctest::Approx(4));
  CHECK(in->tuple->d == doctest::Approx(q.kappa_u * 4));
  q.nu2 = 1;  // b = 70 > n_hat
  CHECK_FALSE(interior_outcome(q));
  q.nu1 = 0;
  CHECK_FALSE(interior_outcome(q));
}

TEST_CASE("classify_outcome") {
  const MarketParams p = under();
  const StableOutcome mb = max_bit_outcome(p);
  Trajectory t;
  EpochDecision e;
  e.y = e.z = true;
  e.p = mb.tuple->p;
  e.b = mb.tuple->b;
  for (int i = 0; i < 60; ++i) {
    t.demands.push_back(mb.tuple->d);
    t.decisions.push_back(e);
  }
  CHECK(classify_outcome(t, p).kind == OutcomeKind::MaxBitSponsoring);

  // Converged at a point no stable tuple explains.
  Trajectory bad = t;
  for (auto& d : bad.demands) d = 7;
  CHECK_THROWS_AS(classify_outcome(bad, p), ClassificationAmbiguous);

  Trajectory ended = t;
  ended.terminated_at = 59;
  ended.decisions.back() = EpochDecision::no_sponsoring();
  CHECK(classify_outcome(ended, p).kind == OutcomeKind::NoSponsoring);

  // Oscillating demand is unstable.
  Trajectory osc = t;
  for (std::size_t i = 0; i < osc.size(); ++i) osc.demands[i] = i % 2 ? 10 : 20;
  CHECK(classify_outcome(osc, p).kind == OutcomeKind::Unstable);
}

TEST_CASE("over-provisioned stable quality never sponsors") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 30; ++i) {
    MarketParams p;
    p.gamma = 0.02 + u(rng);
    p.nu2 = 10 * u(rng);
    p.kappa_u = (1.05 + u(rng)) / p.zeta;
    for (auto mode : {SimulationMode::BothShortSighted, SimulationMode::LongSightedSP,
                      SimulationMode::LongSightedCP}) {
      const int code = outcome_code(classify_outcome(simulate(1, p, mode), p).kind);
      CHECK((code == 0 || code == 1));
    }
    CHECK(long_sighted_sp_target(p).kind == OutcomeKind::NoSponsoring);
    CHECK(long_sighted_cp_ranking(p).empty());
  }
}

TEST_CASE("min_quality_optimal_demand") {
  MarketParams p = matched();
  CHECK(min_quality_optimal_demand(p) == doctest::Approx(p.n_hat / p.zeta));

  p.nu2 = 1e4;  // congestion swamps the family
  CHECK(min_quality_optimal_demand(p) == 0.0);

  // Unclamped: large n_hat puts the optimum inside. The grid maximizer of the
  // family payoff sits within one step of it.
  p = matched();
  p.big_n = 100;
  p.n_hat = 100;
  p.nu2 = 5;
  const double d = min_quality_optimal_demand(p);
  REQUIRE(d > 0.0);
  REQUIRE(d < p.max_feasible_demand());
  const double h = 1e-4;
  const double slope = (family_payoff(d + h, p) - family_payoff(d - h, p)) / (2 * h);
  CHECK(std::abs(slope) < 1e-5);
  double best_d = 0;
  double best = -INFINITY;
  const int n = 100000;
  const double top = p.max_feasible_demand() * (1 - 1e-9);
  for (int i = 1; i <= n; ++i) {
    const double x = top * i / n;
    if (family_payoff(x, p) > best) {
      best = family_payoff(x, p);
      best_d = x;
    }
  }
  CHECK(std::abs(best_d - d) <= top / n);
}

TEST_CASE("long_sighted_sp_target") {
  CHECK(long_sighted_sp_target(matched()).kind == OutcomeKind::MinQualitySponsoring);
  MarketParams over = matched();
  over.kappa_u *= 1.5;
  CHECK(long_sighted_sp_target(over).kind == OutcomeKind::NoSponsoring);
  MarketParams big = under();
  big.nu2 = 0.2;
  big.big_n = 500;
  CHECK(long_sighted_sp_target(big).kind == OutcomeKind::MaxBitSponsoring);
}

TEST_CASE("long_sighted_cp_ranking and stable_point_payoffs") {
  const auto m = long_sighted_cp_ranking(matched());
  REQUIRE(m.size() == 1);
  CHECK(m[0].outcome.kind == OutcomeKind::MinQualitySponsoring);
  CHECK(std::abs(m[0].payoffs.u_cp) < 1e-9);

  MarketParams p = under();
  p.nu2 = 3.2;
  const auto r = long_sighted_cp_ranking(p);
  REQUIRE(r.size() == 2);
  CHECK(r[0].outcome.kind == OutcomeKind::MaxBitSponsoring);
  CHECK(r[1].outcome.kind == OutcomeKind::InteriorStable);
  CHECK(r[0].payoffs.u_cp >= r[1].payoffs.u_cp);
  CHECK(r[1].payoffs.u_cp > 0.0);
  // Closed form for the maximum-bit point.
  const double expected = p.alpha * p.kappa_u * p.n_hat * (std::log(p.kappa_cp / p.kappa_u) - 1);
  CHECK(r[0].payoffs.u_cp == doctest::Approx(expected).epsilon(1e-12));
  const auto& t = *r[0].outcome.tuple;
  CHECK(r[0].payoffs.u_sp == doctest::Approx(sp_utility(t.d, t.b, t.p, p)).epsilon(1e-12));

  CHECK_THROWS_AS(stable_point_payoffs({OutcomeKind::Unstable, std::nullopt}, p), DomainError);
  CHECK_THROWS_AS(stable_point_payoffs({OutcomeKind::NoSponsoring, std::nullopt}, p), DomainError);
}

TEST_CASE("long-sighted modes") {
  MarketParams p = matched();
  p.gamma = 0.3;
  p.nu2 = 5;
  const StableOutcome sp = classify_outcome(simulate(1, p, SimulationMode::LongSightedSP), p);
  const StableOutcome cp = classify_outcome(simulate(1, p, SimulationMode::LongSightedCP), p);
  CHECK(sp.kind == OutcomeKind::MinQualitySponsoring);
  CHECK(cp.kind == sp.kind);
  // The long-sighted SP lands on its target demand.
  CHECK(sp.tuple->d == doctest::Approx(long_sighted_sp_target(p).tuple->d).epsilon(1e-9));
}

TEST_CASE("write_trajectory_csv") {
  Trajectory t;
  EpochDecision e;
  e.y = e.z = true;
  e.p = 0.5;
  e.b = 2;
  t.demands = {1, 0.25};
  t.decisions = {e, EpochDecision::no_sponsoring()};
  t.terminated_at = 1;
  std::ostringstream os;
  write_trajectory_csv(os, t);
  CHECK(os.str() == "epoch,d,y,p,z,b\n0,1,1,0.5,1,2\n1,0.25,0,,0,\n");
}

TEST_CASE("interior tuple at the bits cap is the maximum-bit outcome") {
  MarketParams p;
  p.kappa_u = 0.5 / p.zeta;
  p.nu2 = 2.5;  // N - nu2 D / (kappa_u nu1) = 25 = n_hat
  const auto in = interior_outcome(p);
  REQUIRE(in);
  CHECK(in->tuple->b == doctest::Approx(p.n_hat));
  const auto& t = *max_bit_outcome(p).tuple;
  const auto m = matching_outcomes(t.d, t.p, t.b, p, 1e-6);
  REQUIRE(m.size() == 1);
  CHECK(m[0].kind == OutcomeKind::MaxBitSponsoring);
}
