// qsd: command-line front end for the equilibrium solver and market simulator.
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "qsd/bargaining.hpp"
#include "qsd/config.hpp"
#include "qsd/dynamics.hpp"
#include "qsd/errors.hpp"
#include "qsd/format.hpp"
#include "qsd/spne.hpp"
#include "qsd/sweep.hpp"
#include "qsd/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitInvariant = 2;

struct Globals {
  std::string config_path;
  std::string out_path;
  unsigned threads = 0;
  std::optional<std::uint64_t> seed;
  std::map<std::string, std::string> overrides;
  std::string variant;
};

qsd::SweepConfig base_config(const Globals& g) {
  qsd::SweepConfig cfg;
  if (!g.config_path.empty()) cfg = qsd::load_config_file(g.config_path);
  for (const auto& [name, value] : g.overrides) {
    if (value.empty()) continue;
    qsd::set_param(cfg.base, name, value);
  }
  if (!g.variant.empty()) qsd::set_param(cfg.base, "variant", g.variant);
  if (g.seed) cfg.seed = *g.seed;
  return cfg;
}

// Output goes to --out when given, stdout otherwise.
std::ostream& output(const Globals& g, std::unique_ptr<std::ofstream>& file) {
  if (g.out_path.empty()) return std::cout;
  file = std::make_unique<std::ofstream>(g.out_path);
  if (!*file) throw qsd::ConfigError("cannot open output file '" + g.out_path + "'");
  return *file;
}

qsd::SimulationMode parse_mode(const std::string& s) {
  if (s == "short") return qsd::SimulationMode::BothShortSighted;
  if (s == "long_sp") return qsd::SimulationMode::LongSightedSP;
  if (s == "long_cp") return qsd::SimulationMode::LongSightedCP;
  throw qsd::ConfigError("mode must be short, long_sp or long_cp");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quality-sponsored data market: equilibrium solver and simulator"};
  app.fallthrough();
  app.require_subcommand(1);

  Globals g;
  app.add_option("--config", g.config_path, "Config file (key = value)");
  app.add_option("--out", g.out_path, "Write output here instead of stdout");
  app.add_option("--threads", g.threads, "Worker threads for sweeps (0 = hardware)");
  app.add_option("--seed", g.seed, "Seed for randomized checks");
  for (const char* name : {"alpha", "gamma", "zeta", "kappa_u", "kappa_cp", "kappa_sp", "nu1", "nu2",
                           "big_d", "big_n", "n_hat"}) {
    app.add_option(std::string("--") + name, g.overrides[name], std::string("Override ") + name);
  }
  app.add_option("--variant", g.variant, "Model variant: base or augmented");

  double d = 1.0;
  auto* epoch = app.add_subcommand("epoch", "Solve one epoch by backward induction");
  epoch->add_option("--d", d, "Current demand")->required();

  double d0 = 1.0;
  std::string mode = "short";
  std::size_t horizon = qsd::kDefaultHorizon;
  auto* simulate = app.add_subcommand("simulate", "Simulate one trajectory to CSV");
  simulate->add_option("--d0", d0, "Initial demand");
  simulate->add_option("--mode", mode, "short, long_sp or long_cp");
  simulate->add_option("--horizon", horizon, "Number of epochs");

  auto* sweep = app.add_subcommand("sweep", "Run a config-driven parameter sweep");

  double w = 0.5;
  auto* bargain = app.add_subcommand("bargain", "Compute the Nash bargaining solution");
  bargain->add_option("--w", w, "CP bargaining power in [0, 1]");
  bargain->add_option("--d0", d0, "Initial demand of the disagreement game");

  auto* verify = app.add_subcommand("verify", "Run the oracle agreement suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    qsd::SweepConfig cfg = base_config(g);
    std::unique_ptr<std::ofstream> file;

    if (*epoch) {
      qsd::validate_params(cfg.base);
      const qsd::SpDecision sp = qsd::sp_equilibrium_price(d, cfg.base);
      const qsd::EpochDecision e = qsd::spne_epoch(d, cfg.base);
      std::ostream& os = output(g, file);
      os << "d=" << qsd::format_real(d) << "\ny=" << e.y << "\np=" << qsd::format_real(e.p)
         << "\nz=" << e.z << "\nb=" << qsd::format_real(e.b) << "\nu_sp=" << qsd::format_real(sp.u_sp);
      if (sp.chosen_candidate) os << "\ncandidate=" << qsd::to_string(*sp.chosen_candidate);
      if (e.p) os << "\ncp_region=" << qsd::to_string(qsd::cp_best_response(d, *e.p, cfg.base).region);
      os << "\nnext_d=" << qsd::format_real(e.sponsoring() ? qsd::demand_update(d, *e.b, cfg.base) : d)
         << '\n';
    } else if (*simulate) {
      if (simulate->count("--d0") == 0) d0 = cfg.d0;
      if (simulate->count("--horizon") == 0) horizon = cfg.horizon;
      const qsd::Trajectory traj = qsd::simulate(d0, cfg.base, parse_mode(mode), horizon);
      qsd::write_trajectory_csv(output(g, file), traj);
      qsd::ClassifierSettings settings;
      settings.convergence_tol = cfg.tol;
      const qsd::StableOutcome out = qsd::classify_outcome(traj, cfg.base, settings);
      std::cerr << "outcome " << qsd::outcome_code(out.kind) << " (" << qsd::to_string(out.kind) << ")\n";
    } else if (*sweep) {
      if (g.config_path.empty()) throw qsd::ConfigError("sweep needs --config");
      const unsigned threads = g.threads ? g.threads : std::max(1u, std::thread::hardware_concurrency());
      const auto records = qsd::run_sweep(cfg, threads);
      qsd::write_sweep_csv(output(g, file), cfg, records);
      std::size_t errors = 0;
      std::size_t violations = 0;
      for (const auto& r : records) {
        errors += !r.error.empty();
        violations += r.invariant_violation;
      }
      if (errors) std::cerr << errors << " of " << records.size() << " points reported errors\n";
      if (violations) return kExitInvariant;
    } else if (*bargain) {
      if (bargain->count("--w") == 0) w = cfg.w;
      if (bargain->count("--d0") == 0) d0 = cfg.d0;
      qsd::DisagreementOptions opts;
      opts.horizon = cfg.horizon;
      opts.classifier.convergence_tol = cfg.tol;
      const qsd::DisagreementPoint dp = qsd::disagreement_payoffs(cfg.base, d0, opts);
      const qsd::BargainingSolution s = qsd::nbs_solve(cfg.base, w, dp);
      std::ostream& os = output(g, file);
      os << "d_cp=" << qsd::format_real(dp.d_cp) << "\nd_sp=" << qsd::format_real(dp.d_sp)
         << "\ndisagreement="
         << (dp.source == qsd::DisagreementSource::StableOutcome ? "stable" : "time_average")
         << "\nagreed=" << s.agreed << "\nd_star=" << qsd::format_real(s.d_star)
         << "\np_star=" << qsd::format_real(s.p_star) << "\nu_cp=" << qsd::format_real(s.u_cp)
         << "\nu_sp=" << qsd::format_real(s.u_sp) << "\nu_excess=" << qsd::format_real(s.u_excess)
         << "\nw_threshold=" << qsd::format_real(s.w_threshold) << '\n';
    } else if (*verify) {
      std::ostream& os = output(g, file);
      bool all = true;
      for (const auto& r : qsd::verify_all(cfg.seed)) {
        os << (r.passed() ? "PASS " : "FAIL ") << r.name << ": " << r.cases << " cases, "
           << r.failures << " failures, worst " << qsd::format_real(r.worst) << '\n';
        if (!r.passed()) os << "  first failure: " << r.first_failure << '\n';
        all = all && r.passed();
      }
      if (!all) return kExitInvariant;
    }
  } catch (const qsd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qsd::InvalidParams& e) {
    std::cerr << "invalid parameters: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qsd::DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInvariant;
  }
  return kExitOk;
}
