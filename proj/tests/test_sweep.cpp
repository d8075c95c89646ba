#include <sstream>

#include "doctest.h"
#include "qsd/config.hpp"
#include "qsd/dynamics.hpp"
#include "qsd/spne.hpp"
#include "qsd/sweep.hpp"

using namespace qsd;

namespace {

std::string csv(const SweepConfig& c, unsigned threads) {
  std::ostringstream os;
  write_sweep_csv(os, c, run_sweep(c, threads));
  return os.str();
}

}  // namespace

TEST_CASE("row-major order and header") {
  const SweepConfig c = load_config_text(
      "kappa_u_times_zeta = 1\naxes = nu2, gamma\naxes.nu2.values = 1, 40\naxes.gamma.values = 0.1, 0.2, 0.3\n");
  CHECK(sweep_size(c) == 6);
  const auto recs = run_sweep(c, 3);
  REQUIRE(recs.size() == 6);
  CHECK(recs[0].axis_values == std::vector<double>{1, 0.1});
  CHECK(recs[1].axis_values == std::vector<double>{1, 0.2});
  CHECK(recs[3].axis_values == std::vector<double>{40, 0.1});
  const MarketParams p = sweep_point_params(c, 4);
  CHECK(p.nu2 == 40);
  CHECK(p.gamma == 0.2);
  CHECK(p.kappa_u * p.zeta == doctest::Approx(1));
  CHECK(sweep_header(c) == std::vector<std::string>{"nu2", "gamma", "outcome", "d", "p", "b", "error"});
  // Large nu2 ends sponsorship.
  CHECK(recs[3].fields[0] == "1");
}

TEST_CASE("output does not depend on thread count") {
  const SweepConfig c = load_config_text(
      "kappa_u_times_zeta = 1\naxes = gamma, nu2\naxes.gamma.lo = 0.05\naxes.gamma.hi = 2\n"
      "axes.gamma.points = 6\naxes.nu2.lo = 0\naxes.nu2.hi = 30\naxes.nu2.points = 7\n");
  const std::string one = csv(c, 1);
  CHECK(one == csv(c, 4));
  CHECK(one == csv(c, 13));
  CHECK(one.substr(0, one.find('\n')) == "gamma,nu2,outcome,d,p,b,error");
}

TEST_CASE("invalid points carry an error marker") {
  const SweepConfig c = load_config_text("axes = zeta\naxes.zeta.values = 0.3, 0.2\n");
  const auto recs = run_sweep(c, 2);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].error.empty());
  CHECK_FALSE(recs[1].error.empty());
  CHECK_FALSE(recs[1].invariant_violation);
  CHECK(recs[1].fields == std::vector<std::string>(4, ""));
}

TEST_CASE("bargaining and price regimes") {
  const SweepConfig b = load_config_text(
      "regime = bargaining\nkappa_u_times_zeta = 1\naxes = w\naxes.w.values = 0.1, 0.5, 0.9\n");
  const auto recs = run_sweep(b, 2);
  REQUIRE(recs.size() == 3);
  for (const auto& r : recs) {
    CHECK(r.error.empty());
    CHECK(r.fields.size() == 12);
    CHECK(r.fields[3] == "1");
  }
  // Disagreement does not depend on w, the price falls with it.
  CHECK(recs[0].fields[1] == recs[2].fields[1]);
  CHECK(std::stod(recs[0].fields[5]) > std::stod(recs[2].fields[5]));

  const SweepConfig pc = load_config_text(
      "regime = price_vs_capacity\nkappa_u_times_zeta = 1\naxes = n_hat\naxes.n_hat.values = 10, 20, 30\n");
  CHECK(sweep_header(pc) == std::vector<std::string>{"n_hat", "d_cp", "d_sp", "agreed", "d_star", "p_star", "error"});
  CHECK(run_sweep(pc, 1).size() == 3);
}
