#include "qsd/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <ostream>
#include <thread>

#include "qsd/bargaining.hpp"
#include "qsd/dynamics.hpp"
#include "qsd/errors.hpp"
#include "qsd/format.hpp"

namespace qsd {
namespace {

std::vector<std::string> result_columns(Regime regime) {
  switch (regime) {
    case Regime::ShortShort:
    case Regime::LongSP:
    case Regime::LongCP:
      return {"outcome", "d", "p", "b"};
    case Regime::Bargaining:
      return {"d_cp",    "d_sp",   "disagreement", "agreed",      "d_star",      "p_star",
              "u_cp",    "u_sp",   "u_excess",     "w_threshold", "cp_increase", "sp_increase"};
    case Regime::PriceVsCapacity:
      return {"d_cp", "d_sp", "agreed", "d_star", "p_star"};
  }
  return {};
}

SimulationMode mode_of(Regime regime) {
  switch (regime) {
    case Regime::LongSP: return SimulationMode::LongSightedSP;
    case Regime::LongCP: return SimulationMode::LongSightedCP;
    default: return SimulationMode::BothShortSighted;
  }
}

void set_axis(MarketParams& params, double& w, const std::string& name, double value) {
  if (name == "w") {
    w = value;
  } else if (char buf[32]; std::snprintf(buf, sizeof buf, "%.17g", value),
             !set_param(params, name, buf)) {
    throw ConfigError("unknown axis '" + name + "'");
  }
}

std::string increase_field(double before, double after) {
  if (after == 0.0) return "";
  return format_real(percent_increase(before, after));
}

std::vector<std::string> evaluate(const SweepConfig& cfg, const MarketParams& params, double w) {
  validate_params(params);
  switch (cfg.regime) {
    case Regime::ShortShort:
    case Regime::LongSP:
    case Regime::LongCP: {
      const Trajectory traj = simulate(cfg.d0, params, mode_of(cfg.regime), cfg.horizon);
      ClassifierSettings settings;
      settings.convergence_tol = cfg.tol;
      const StableOutcome out = classify_outcome(traj, params, settings);
      std::vector<std::string> row{std::to_string(outcome_code(out.kind)), "", "", ""};
      if (out.tuple) {
        row[1] = format_real(out.tuple->d);
        row[2] = format_real(out.tuple->p);
        row[3] = format_real(out.tuple->b);
      }
      return row;
    }
    case Regime::Bargaining:
    case Regime::PriceVsCapacity: {
      if (!(w >= 0.0 && w <= 1.0)) throw InvalidParams("w must lie in [0, 1]");
      DisagreementOptions opts;
      opts.horizon = cfg.horizon;
      opts.classifier.convergence_tol = cfg.tol;
      const DisagreementPoint dp = disagreement_payoffs(params, cfg.d0, opts);
      const BargainingSolution s = nbs_solve(params, w, dp);
      if (cfg.regime == Regime::PriceVsCapacity) {
        return {format_real(dp.d_cp), format_real(dp.d_sp), s.agreed ? "1" : "0",
                format_real(s.d_star), format_real(s.p_star)};
      }
      return {format_real(dp.d_cp),
              format_real(dp.d_sp),
              dp.source == DisagreementSource::StableOutcome ? "stable" : "time_average",
              s.agreed ? "1" : "0",
              format_real(s.d_star),
              format_real(s.p_star),
              format_real(s.u_cp),
              format_real(s.u_sp),
              format_real(s.u_excess),
              format_real(s.w_threshold),
              increase_field(dp.d_cp, s.u_cp),
              increase_field(dp.d_sp, s.u_sp)};
    }
  }
  return {};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::vector<std::string> sweep_header(const SweepConfig& cfg) {
  std::vector<std::string> header;
  for (const auto& axis : cfg.axes) header.push_back(axis.name);
  for (auto& c : result_columns(cfg.regime)) header.push_back(std::move(c));
  header.push_back("error");
  return header;
}

std::size_t sweep_size(const SweepConfig& cfg) {
  if (cfg.axes.empty()) return 0;
  std::size_t n = 1;
  for (const auto& axis : cfg.axes) n *= axis.values.size();
  return n;
}

MarketParams sweep_point_params(const SweepConfig& cfg, std::size_t i, double* w) {
  MarketParams params = cfg.base;
  double weight = cfg.w;
  for (std::size_t a = cfg.axes.size(); a-- > 0;) {
    const auto& axis = cfg.axes[a];
    set_axis(params, weight, axis.name, axis.values[i % axis.values.size()]);
    i /= axis.values.size();
  }
  if (cfg.kappa_u_times_zeta) params.kappa_u = *cfg.kappa_u_times_zeta / params.zeta;
  if (w) *w = weight;
  return params;
}

std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, unsigned threads) {
  const std::size_t total = sweep_size(cfg);
  std::vector<SweepRecord> records(total);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < total; i = next++) {
      SweepRecord& rec = records[i];
      std::size_t rest = i;
      rec.axis_values.resize(cfg.axes.size());
      for (std::size_t a = cfg.axes.size(); a-- > 0;) {
        rec.axis_values[a] = cfg.axes[a].values[rest % cfg.axes[a].values.size()];
        rest /= cfg.axes[a].values.size();
      }
      try {
        double w = cfg.w;
        const MarketParams params = sweep_point_params(cfg, i, &w);
        rec.fields = evaluate(cfg, params, w);
      } catch (const InvalidParams& e) {
        rec.error = e.what();
      } catch (const DomainError& e) {
        rec.error = e.what();
      } catch (const std::exception& e) {
        rec.error = e.what();
        rec.invariant_violation = true;
      }
      if (!rec.error.empty()) rec.fields.assign(result_columns(cfg.regime).size(), "");
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(total, 1))));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

void write_sweep_csv(std::ostream& os, const SweepConfig& cfg,
                     const std::vector<SweepRecord>& records) {
  const auto header = sweep_header(cfg);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& rec : records) {
    bool first = true;
    const auto emit = [&](const std::string& s) {
      os << (first ? "" : ",") << csv_escape(s);
      first = false;
    };
    for (double v : rec.axis_values) emit(format_real(v));
    for (const auto& f : rec.fields) emit(f);
    emit(rec.error);
    os << '\n';
  }
}

}  // namespace qsd
