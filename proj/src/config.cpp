#include "qsd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qsd/errors.hpp"
#include "qsd/oracle.hpp"

namespace qsd {
namespace {

std::string_view trim(std::string_view s) {
  const auto not_space = [](char c) { return c != ' ' && c != '\t' && c != '\r'; };
  while (!s.empty() && !not_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && !not_space(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  // std::from_chars for double is available in libstdc++ 11.
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::uint64_t> parse_count(std::string_view s) {
  s = trim(s);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

struct Entry {
  std::string value;
  std::size_t line;
};

[[noreturn]] void fail(std::string_view source, std::size_t line, const std::string& msg) {
  std::ostringstream os;
  os << source << ':' << line << ": " << msg;
  throw ConfigError(os.str());
}

bool is_axis_name(std::string_view name) {
  return std::find(std::begin(kAxisNames), std::end(kAxisNames), name) != std::end(kAxisNames);
}

std::optional<Regime> parse_regime(std::string_view s) {
  if (s == "short_short") return Regime::ShortShort;
  if (s == "long_sp") return Regime::LongSP;
  if (s == "long_cp") return Regime::LongCP;
  if (s == "bargaining") return Regime::Bargaining;
  if (s == "price_vs_capacity") return Regime::PriceVsCapacity;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::ShortShort: return "short_short";
    case Regime::LongSP: return "long_sp";
    case Regime::LongCP: return "long_cp";
    case Regime::Bargaining: return "bargaining";
    case Regime::PriceVsCapacity: return "price_vs_capacity";
  }
  return "?";
}

bool set_param(MarketParams& params, std::string_view field, std::string_view value) {
  if (field == "variant") {
    const std::string_view v = trim(value);
    if (v == "base") {
      params.variant = ModelVariant::Base;
    } else if (v == "augmented") {
      params.variant = ModelVariant::AugmentedBestEffort;
    } else {
      throw ConfigError("variant must be 'base' or 'augmented'");
    }
    return true;
  }
  double MarketParams::*member = nullptr;
  if (field == "alpha") member = &MarketParams::alpha;
  else if (field == "gamma") member = &MarketParams::gamma;
  else if (field == "zeta") member = &MarketParams::zeta;
  else if (field == "kappa_u") member = &MarketParams::kappa_u;
  else if (field == "kappa_cp") member = &MarketParams::kappa_cp;
  else if (field == "kappa_sp") member = &MarketParams::kappa_sp;
  else if (field == "nu1") member = &MarketParams::nu1;
  else if (field == "nu2") member = &MarketParams::nu2;
  else if (field == "big_d") member = &MarketParams::big_d;
  else if (field == "big_n") member = &MarketParams::big_n;
  else if (field == "n_hat") member = &MarketParams::n_hat;
  if (!member) return false;
  const auto v = parse_real(value);
  if (!v) throw ConfigError("value for '" + std::string(field) + "' is not a finite number");
  params.*member = *v;
  return true;
}

SweepConfig load_config(std::istream& in, std::string_view source) {
  std::map<std::string, Entry, std::less<>> entries;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(source, line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) fail(source, line_no, "empty key");
    const std::string value(trim(line.substr(eq + 1)));
    if (auto it = entries.find(key); it != entries.end()) {
      fail(source, line_no,
           "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")");
    }
    entries.emplace(key, Entry{value, line_no});
  }

  SweepConfig cfg;
  const auto take = [&](const std::string& key) -> std::optional<Entry> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    Entry e = it->second;
    entries.erase(it);
    return e;
  };
  const auto real_of = [&](const Entry& e, const std::string& key) {
    const auto v = parse_real(e.value);
    if (!v) fail(source, e.line, "'" + key + "' must be a finite number");
    return *v;
  };
  const auto count_of = [&](const Entry& e, const std::string& key) {
    const auto v = parse_count(e.value);
    if (!v) fail(source, e.line, "'" + key + "' must be a nonnegative integer");
    return *v;
  };

  if (auto e = take("regime")) {
    const auto r = parse_regime(e->value);
    if (!r) fail(source, e->line, "unknown regime '" + e->value + "'");
    cfg.regime = *r;
  }
  if (auto e = take("d0")) {
    cfg.d0 = real_of(*e, "d0");
    if (!(cfg.d0 > 0.0)) fail(source, e->line, "'d0' must be > 0");
  }
  if (auto e = take("horizon")) {
    cfg.horizon = count_of(*e, "horizon");
    if (cfg.horizon < 1) fail(source, e->line, "'horizon' must be >= 1");
  }
  if (auto e = take("tol")) {
    cfg.tol = real_of(*e, "tol");
    if (!(cfg.tol > 0.0)) fail(source, e->line, "'tol' must be > 0");
  }
  if (auto e = take("seed")) cfg.seed = count_of(*e, "seed");
  if (auto e = take("w")) {
    cfg.w = real_of(*e, "w");
    if (!(cfg.w >= 0.0 && cfg.w <= 1.0)) fail(source, e->line, "'w' must lie in [0, 1]");
  }
  if (auto e = take("kappa_u_times_zeta")) {
    cfg.kappa_u_times_zeta = real_of(*e, "kappa_u_times_zeta");
    if (!(*cfg.kappa_u_times_zeta > 0.0)) fail(source, e->line, "'kappa_u_times_zeta' must be > 0");
  }

  // base.<field>
  for (auto it = entries.begin(); it != entries.end();) {
    constexpr std::string_view prefix = "base.";
    if (it->first.rfind(prefix, 0) != 0) {
      ++it;
      continue;
    }
    const std::string field = it->first.substr(prefix.size());
    try {
      if (!set_param(cfg.base, field, it->second.value)) {
        fail(source, it->second.line, "unknown key '" + it->first + "'");
      }
    } catch (const ConfigError& err) {
      if (std::string_view(err.what()).find(source) == 0) throw;
      fail(source, it->second.line, err.what());
    }
    it = entries.erase(it);
  }

  const auto axes_entry = take("axes");
  if (!axes_entry || axes_entry->value.empty()) {
    fail(source, axes_entry ? axes_entry->line : line_no, "axes list is empty");
  }
  for (std::string_view name : split_list(axes_entry->value)) {
    const std::string n(name);
    if (n.empty()) fail(source, axes_entry->line, "empty axis name");
    if (!is_axis_name(n)) fail(source, axes_entry->line, "unknown axis '" + n + "'");
    if (std::any_of(cfg.axes.begin(), cfg.axes.end(),
                    [&](const SweepAxis& a) { return a.name == n; })) {
      fail(source, axes_entry->line, "axis '" + n + "' listed twice");
    }
    SweepAxis axis{n, {}};
    const std::string key = "axes." + n + ".";
    if (auto values = take(key + "values")) {
      for (std::string_view item : split_list(values->value)) {
        const auto v = parse_real(item);
        if (!v) fail(source, values->line, "'" + key + "values' has a non-numeric entry");
        axis.values.push_back(*v);
      }
      for (const char* other : {"lo", "hi", "points", "scale"}) {
        if (auto e = take(key + other)) fail(source, e->line, "'" + key + other + "' conflicts with values");
      }
    } else {
      auto lo = take(key + "lo");
      auto hi = take(key + "hi");
      auto points = take(key + "points");
      if (!lo || !hi || !points) {
        fail(source, axes_entry->line, "axis '" + n + "' needs lo, hi and points (or values)");
      }
      oracle::GridSpec grid;
      grid.lo = real_of(*lo, key + "lo");
      grid.hi = real_of(*hi, key + "hi");
      grid.points = count_of(*points, key + "points");
      if (auto scale = take(key + "scale")) {
        if (scale->value == "log") grid.scale = oracle::GridScale::Logarithmic;
        else if (scale->value != "linear") fail(source, scale->line, "scale must be 'linear' or 'log'");
      }
      try {
        grid.validate();
      } catch (const DomainError& err) {
        fail(source, lo->line, "axis '" + n + "': " + err.what());
      }
      axis.values = grid.values();
    }
    cfg.axes.push_back(std::move(axis));
  }
  if (cfg.axes.size() > kMaxAxes) fail(source, axes_entry->line, "at most 3 axes may be swept");

  const auto has_axis = [&](std::string_view n) {
    return std::any_of(cfg.axes.begin(), cfg.axes.end(), [&](const SweepAxis& a) { return a.name == n; });
  };
  if (cfg.kappa_u_times_zeta && has_axis("kappa_u")) {
    fail(source, axes_entry->line, "kappa_u cannot be swept when kappa_u_times_zeta is set");
  }
  if (cfg.regime == Regime::PriceVsCapacity && !has_axis("n_hat")) {
    fail(source, axes_entry->line, "price_vs_capacity needs an n_hat axis");
  }

  if (!entries.empty()) {
    const auto& [key, e] = *std::min_element(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      return a.second.line < b.second.line;
    });
    fail(source, e.line, "unknown key '" + key + "'");
  }
  return cfg;
}

SweepConfig load_config_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  return load_config(in, "<text>");
}

SweepConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return load_config(in, path.string());
}

}  // namespace qsd
