#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsd/model.hpp"

namespace qsd {

enum class Regime { ShortShort, LongSP, LongCP, Bargaining, PriceVsCapacity };

std::string_view to_string(Regime regime);

// One swept parameter and the values it takes, in output order.
struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

// Parameters that may be swept.
inline constexpr std::string_view kAxisNames[] = {"gamma",  "nu2",     "big_n", "n_hat",
                                                  "zeta",   "kappa_u", "w"};
inline constexpr std::size_t kMaxAxes = 3;

struct SweepConfig {
  MarketParams base;
  // When set, every grid point uses kappa_u = kappa_u_times_zeta / zeta.
  std::optional<double> kappa_u_times_zeta;
  std::vector<SweepAxis> axes;
  Regime regime = Regime::ShortShort;
  double d0 = 1.0;
  std::size_t horizon = 20000;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  double w = 0.5;
};

// Parses the line-oriented `key = value` format. Unknown or duplicate keys,
// malformed values and an empty axis list raise ConfigError naming the line.
SweepConfig load_config(std::istream& in, std::string_view source = "<config>");
SweepConfig load_config_text(std::string_view text);
SweepConfig load_config_file(const std::filesystem::path& path);

// Applies one `base.<field>`-style assignment (field name without prefix).
// Returns false for an unknown field.
bool set_param(MarketParams& params, std::string_view field, std::string_view value);

}  // namespace qsd
