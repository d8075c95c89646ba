#include <string>

#include "doctest.h"
#include "qsd/config.hpp"
#include "qsd/errors.hpp"

using namespace qsd;

TEST_CASE("minimal config takes reference defaults") {
  const SweepConfig c = load_config_text("axes = gamma\naxes.gamma.lo = 0.1\naxes.gamma.hi = 1\naxes.gamma.points = 4\n");
  const MarketParams ref;
  CHECK(c.base.nu1 == 1);
  CHECK(c.base.n_hat == 25);
  CHECK(c.base.big_d == 50);
  CHECK(c.base.kappa_sp == 10);
  CHECK(c.base.kappa_cp == 10);
  CHECK(c.base.zeta == 0.3);
  CHECK(c.base.alpha == ref.alpha);
  CHECK(c.regime == Regime::ShortShort);
  CHECK(c.d0 == 1.0);
  CHECK(c.horizon == 20000);
  CHECK(c.w == 0.5);
  REQUIRE(c.axes.size() == 1);
  CHECK(c.axes[0].name == "gamma");
  CHECK(c.axes[0].values.size() == 4);
  CHECK(c.axes[0].values.back() == 1);
}

TEST_CASE("full config") {
  const SweepConfig c = load_config_text(R"(# comment
regime = bargaining   # trailing comment
base.nu2 = 2.5
base.variant = augmented
kappa_u_times_zeta = 0.5
d0 = 2
horizon = 1000
tol = 1e-9
seed = 42
w = 0.25
axes = zeta, big_n
axes.zeta.values = 2, 4, 8
axes.big_n.lo = 10
axes.big_n.hi = 1000
axes.big_n.points = 3
axes.big_n.scale = log
)");
  CHECK(c.regime == Regime::Bargaining);
  CHECK(c.base.nu2 == 2.5);
  CHECK(c.base.variant == ModelVariant::AugmentedBestEffort);
  CHECK(*c.kappa_u_times_zeta == 0.5);
  CHECK(c.d0 == 2);
  CHECK(c.horizon == 1000);
  CHECK(c.tol == 1e-9);
  CHECK(c.seed == 42);
  CHECK(c.w == 0.25);
  REQUIRE(c.axes.size() == 2);
  CHECK(c.axes[0].values == std::vector<double>{2, 4, 8});
  CHECK(c.axes[1].values[1] == doctest::Approx(100));
}

TEST_CASE("config errors") {
  const auto error_of = [](const std::string& text) -> std::string {
    try {
      load_config_text(text);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(error_of("axes =\n").find("axes") != std::string::npos);
  CHECK(error_of("regime = short_short\n").find("axes") != std::string::npos);
  const std::string dup = error_of("axes = w\naxes.w.values = 0.5\nd0 = 1\nd0 = 2\n");
  CHECK(dup.find("duplicate key 'd0'") != std::string::npos);
  CHECK(dup.find(":4:") != std::string::npos);
  const std::string unknown = error_of("axes = w\naxes.w.values = 0.5\nfoo = 1\n");
  CHECK(unknown.find("unknown key 'foo'") != std::string::npos);
  CHECK(unknown.find(":3:") != std::string::npos);
  CHECK(error_of("axes = w\naxes.w.values = 0.5\nbase.bogus = 1\n").find("base.bogus") != std::string::npos);
  CHECK(error_of("axes = alpha\n").find("unknown axis") != std::string::npos);
  CHECK(error_of("axes = w\naxes.w.values = 0.5\nbase.nu2 = abc\n").find("nu2") != std::string::npos);
  CHECK(error_of("axes = gamma\naxes.gamma.lo = 1\naxes.gamma.hi = 0\naxes.gamma.points = 3\n") != "");
  CHECK(error_of("axes = gamma, nu2, w, zeta\n") != "");
  CHECK(error_of("axes = w\naxes.w.values = 0.5\nregime = nope\n").find("regime") != std::string::npos);
  CHECK(error_of("axes = gamma\naxes.gamma.values = 1\nregime = price_vs_capacity\n").find("n_hat") !=
        std::string::npos);
  CHECK(error_of("axes = kappa_u\naxes.kappa_u.values = 1\nkappa_u_times_zeta = 1\n") != "");
  CHECK(error_of("this line has no equals\n") != "");
  CHECK_THROWS_AS(load_config_file("/nonexistent/qsd.conf"), ConfigError);
}

TEST_CASE("shipped configs load") {
  for (const char* name : {"fig3_short_short.conf", "fig4_long_sp.conf", "fig4_long_cp.conf",
                           "fig5_short_short_half.conf", "fig5_low_nu2.conf",
                           "fig7_8_bargaining.conf", "fig9_10_bargaining_half.conf",
                           "fig11_12_price.conf", "fig11_12_price_equal.conf"}) {
    INFO(name);
    CHECK_NOTHROW(load_config_file(std::string(QSD_CONFIG_DIR) + "/" + name));
  }
}
