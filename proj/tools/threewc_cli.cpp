// Command line front end: exact DoF-region computations and finite-SNR
// simulations for the intermittent MIMO three-way channel.

#include <CLI11.hpp>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "threewc/adaptive.hpp"
#include "threewc/allocation.hpp"
#include "threewc/beamforming.hpp"
#include "threewc/channel.hpp"
#include "threewc/config.hpp"
#include "threewc/fourier_motzkin.hpp"
#include "threewc/rates.hpp"
#include "threewc/regions.hpp"
#include "threewc/simplex.hpp"
#include "threewc/vertex_enum.hpp"

namespace {

namespace poly = threewc::poly;
namespace scheme = threewc::scheme;
namespace relay = threewc::relay;
using json = nlohmann::ordered_json;
using threewc::NodeConfig;
using poly::Rational;

struct Verdicts {
  bool all_ok = true;

  bool check(const std::string& name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    all_ok = all_ok && ok;
    return ok;
  }
};

NodeConfig parse_config(const std::string& text) {
  int m[3];
  char extra;
  if (std::sscanf(text.c_str(), "%d,%d,%d%c", &m[0], &m[1], &m[2], &extra) != 3)
    throw CLI::ValidationError("--m", "expected three comma-separated antenna counts");
  return NodeConfig(m[0], m[1], m[2]);
}

Rational parse_tau(const std::string& text) {
  Rational tau;
  try {
    tau = poly::parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw CLI::ValidationError("--tau", e.what());
  }
  if (tau < 0 || tau > 1)
    throw CLI::ValidationError("--tau", "availability must lie in [0, 1]");
  return tau;
}

unsigned thread_cap() {
  const char* env = std::getenv("THREEWC_THREADS");
  const unsigned fallback = std::max(1u, std::thread::hardware_concurrency());
  if (env == nullptr || *env == '\0') return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == nullptr || *end != '\0' || v < 1)
    throw std::invalid_argument("THREEWC_THREADS must be a positive integer");
  return static_cast<unsigned>(std::min<long>(v, 256));
}

/// Runs fn(i) for i in [0, count) on up to thread_cap() workers. Results must
/// be written to pre-sized slots so the output order stays deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<unsigned>(thread_cap(), static_cast<unsigned>(count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

void write_json(const std::filesystem::path& dir, const std::string& name, const json& j) {
  auto out = open_out(dir, name);
  out << j.dump(2) << "\n";
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json config_json(const NodeConfig& cfg, const Rational& tau) {
  return json{{"m", {cfg.m1, cfg.m2, cfg.m3}}, {"tau", poly::to_string(tau)}};
}

// ---------------------------------------------------------------------------

int cmd_region(const NodeConfig& cfg, const Rational& tau, const std::string& out_dir,
               bool project) {
  Verdicts v;
  json report = config_json(cfg, tau);

  const auto listed = poly::theorem1_region(cfg, tau);
  const auto raw = poly::raw_constraint_system(cfg, tau);
  {
    auto f = open_out(out_dir, "region_listed.txt");
    f << listed.to_text();
  }
  {
    auto f = open_out(out_dir, "region_raw.txt");
    f << raw.to_text();
  }
  report["listed_rows"] = listed.num_rows();
  report["raw_rows"] = raw.num_rows();
  report["raw_vars"] = raw.num_vars();

  const auto vertices = poly::enumerate_vertices(listed);
  report["listed_vertices"] = vertices.size();
  {
    auto f = open_out(out_dir, "region_vertices.txt");
    f << "# variables:";
    for (const auto& name : poly::dof_variables()) f << ' ' << name;
    f << '\n';
    for (const auto& vert : vertices) {
      for (std::size_t k = 0; k < vert.size(); ++k)
        f << (k ? " " : "") << poly::to_string(vert[k]);
      f << '\n';
    }
  }

  if (project) {
    const auto projected = poly::canonical_region(cfg, tau);
    auto f = open_out(out_dir, "region_projected.txt");
    f << projected.to_text();
    report["projected_rows"] = projected.num_rows();
    const bool equal = poly::polytope_equal(projected, listed);
    report["projection_matches_listed"] = equal;
    v.check("projected region equals listed region", equal);
  }

  write_json(out_dir, "region.json", report);
  return v.all_ok ? 0 : 1;
}

int cmd_sumdof(const NodeConfig& cfg, const Rational& tau, const std::string& out_dir) {
  Verdicts v;
  json report = config_json(cfg, tau);
  const Rational lp = poly::sum_dof_max(poly::theorem1_region(cfg, tau));
  const Rational formula = poly::sum_dof_formula(cfg, tau);
  report["sum_dof_lp"] = poly::to_string(lp);
  report["sum_dof_formula"] = poly::to_string(formula);
  const bool match = lp == formula;
  report["match"] = match;
  v.check("maximum sum DoF equals 2*tau*M2 + 2*(1-tau)*M3", match);
  write_json(out_dir, "sumdof.json", report);
  return v.all_ok ? 0 : 1;
}

struct TrialOutcome {
  bool synth_ok = false;
  std::string error;
  double conditioning = 0.0;
  double zf_residual = 0.0;
  bool alignment_exact = false;
  bool power_conserved = true;
  double slope = 0.0;
  double state_fraction = 0.0;
  std::vector<std::array<double, 9>> csv_rows;  // snr, mode(0/1), six rates, sum
};

int cmd_simulate(const NodeConfig& cfg, const Rational& tau, const std::string& out_dir,
                 const std::vector<double>& snr_db, std::size_t slots, unsigned trials,
                 std::uint64_t seed) {
  Verdicts v;
  const double tau_d = poly::to_double(tau);
  const auto alloc = scheme::sum_optimal_allocation(cfg);
  const double expected_slope = poly::to_double(poly::sum_dof_formula(cfg, tau));

  std::vector<TrialOutcome> outcomes(trials);
  parallel_for(trials, [&](std::size_t t) {
    TrialOutcome& res = outcomes[t];
    try {
      std::mt19937_64 rng(seed + t);
      const auto ch = threewc::sample_channel(cfg, rng);
      const auto [beams, posts, conditioning] = scheme::synthesize_scheme(ch, alloc, rng);
      res.synth_ok = true;
      res.conditioning = conditioning;
      res.zf_residual = scheme::zero_forcing_residual(ch, beams);
      const auto align = scheme::measure_alignment(ch, beams);
      res.alignment_exact = align.overlap(2, 3) == alloc.overlap(2, 3) &&
                            align.overlap(1, 3) == alloc.overlap(1, 3) &&
                            align.overlap(1, 2) == alloc.overlap(1, 2);
      const auto states = threewc::sample_states(slots, tau_d, rng);
      res.state_fraction = states.fraction();

      std::vector<std::pair<double, double>> fit_pts;
      for (const double db : snr_db) {
        const double rho = scheme::snr_db_to_power_ratio(db);
        const auto power = scheme::power_allocation(alloc, rho, tau_d);
        for (int node = 2; node <= 3; ++node) {
          const double spent = power.per_stream(node) * alloc.node_total(node);
          if (alloc.node_total(node) > 0 && std::abs(spent - rho) > 1e-6 * rho)
            res.power_conserved = false;
        }
        const double spent1 = tau_d * power.p1 * alloc.node_total(1);
        if (alloc.node_total(1) > 0 && tau_d > 0 && std::abs(spent1 - rho) > 1e-6 * rho)
          res.power_conserved = false;

        const auto analytic =
            scheme::evaluate_rates(ch, beams, posts, power, 1.0, tau_d);
        const auto empirical = scheme::evaluate_rates(ch, beams, posts, power, 1.0,
                                                      res.state_fraction);
        fit_pts.emplace_back(db, analytic.sum());
        std::array<double, 9> row_a{db, 0, 0, 0, 0, 0, 0, 0, analytic.sum()};
        std::array<double, 9> row_e{db, 1, 0, 0, 0, 0, 0, 0, empirical.sum()};
        for (std::size_t k = 0; k < 6; ++k) {
          row_a[2 + k] = analytic.rate[k];
          row_e[2 + k] = empirical.rate[k];
        }
        res.csv_rows.push_back(row_a);
        res.csv_rows.push_back(row_e);
      }
      res.slope = scheme::fit_dof_slope(fit_pts);
    } catch (const std::exception& e) {
      res.synth_ok = false;
      res.error = e.what();
    }
  });

  {
    auto csv = open_out(out_dir, "rates.csv");
    csv << "trial,snr_db,mode,r12,r13,r21,r23,r31,r32,sum\n";
    for (unsigned t = 0; t < trials; ++t) {
      for (const auto& row : outcomes[t].csv_rows) {
        csv << t << ',' << fmt_double(row[0]) << ','
            << (row[1] == 0 ? "analytic" : "empirical");
        for (std::size_t k = 2; k < 9; ++k) csv << ',' << fmt_double(row[k]);
        csv << '\n';
      }
    }
  }

  json report = config_json(cfg, tau);
  report["snr_db"] = snr_db;
  report["slots"] = slots;
  report["trials"] = trials;
  report["seed"] = seed;
  report["expected_slope"] = expected_slope;
  json per_trial = json::array();
  bool all_synth = true, all_zf = true, all_align = true, all_power = true,
       all_slope = true;
  for (unsigned t = 0; t < trials; ++t) {
    const auto& r = outcomes[t];
    all_synth = all_synth && r.synth_ok;
    all_zf = all_zf && r.synth_ok && r.zf_residual <= 1e-8;
    all_align = all_align && r.alignment_exact;
    all_power = all_power && r.power_conserved;
    all_slope = all_slope && std::abs(r.slope - expected_slope) <= 0.05;
    per_trial.push_back(json{{"trial", t},
                             {"synthesis_ok", r.synth_ok},
                             {"error", r.error},
                             {"conditioning", r.conditioning},
                             {"zf_residual", r.zf_residual},
                             {"alignment_exact", r.alignment_exact},
                             {"power_conserved", r.power_conserved},
                             {"state_fraction", r.state_fraction},
                             {"fitted_slope", r.slope}});
  }
  report["trials_detail"] = per_trial;

  v.check("beamformer synthesis succeeded for every trial", all_synth);
  v.check("zero-forcing residual <= 1e-8", all_zf);
  v.check("alignment overlaps match the allocation exactly", all_align);
  v.check("power budget conserved within 1e-6", all_power);
  v.check("fitted sum-DoF slope within 0.05 of the closed form", all_slope);
  report["all_ok"] = v.all_ok;
  write_json(out_dir, "simulate.json", report);
  return v.all_ok ? 0 : 1;
}

int cmd_adaptive(const NodeConfig& cfg, const Rational& tau, const std::string& out_dir,
                 std::size_t slots, std::size_t blocks, unsigned trials,
                 std::uint64_t seed) {
  Verdicts v;
  const auto closed = relay::adaptive_scheme(cfg, tau);
  json report = config_json(cfg, tau);
  report["a3"] = closed.a3;
  report["a2"] = closed.a2;
  report["d31_analytic"] = poly::to_string(closed.d31);
  report["outer_bound"] = poly::to_string(closed.outer_bound);
  report["violates_outer"] = closed.violates_outer;
  report["slots_per_block"] = slots;
  report["blocks"] = blocks;
  report["trials"] = trials;
  report["seed"] = seed;

  const double analytic = poly::to_double(closed.d31);
  std::vector<double> empirical(trials, 0.0);
  parallel_for(trials, [&](std::size_t t) {
    std::mt19937_64 rng(seed + t);
    empirical[t] = relay::run_block_markov(cfg, tau, slots, blocks, rng).d31();
  });
  json per_trial = json::array();
  bool all_close = true;
  for (unsigned t = 0; t < trials; ++t) {
    per_trial.push_back(json{{"trial", t}, {"d31_empirical", empirical[t]}});
    all_close = all_close && std::abs(empirical[t] - analytic) <= 0.05;
  }
  report["trials_detail"] = per_trial;

  v.check("block-Markov empirical d31 within 0.05 of the closed form", all_close);
  if (closed.violates_outer) {
    bool all_above = true;
    for (double e : empirical)
      all_above = all_above && e > poly::to_double(closed.outer_bound);
    v.check("empirical d31 exceeds the nonadaptive outer bound", all_above);
  }
  report["all_ok"] = v.all_ok;
  write_json(out_dir, "adaptive.json", report);
  return v.all_ok ? 0 : 1;
}

int cmd_compare(const NodeConfig& cfg, const Rational& tau, const std::string& out_dir) {
  Verdicts v;
  json report = config_json(cfg, tau);

  // Nonadaptive side: maximize d31 over the achievable region.
  std::vector<Rational> obj(6, Rational(0));
  obj[poly::theorem1_region(cfg, tau).var_index("d31")] = poly::rat(1);
  const auto [nonadaptive, arg] = poly::simplex_max(poly::theorem1_region(cfg, tau), obj);
  const auto closed = relay::adaptive_scheme(cfg, tau);
  const Rational outer = tau * cfg.m3;

  report["nonadaptive_max_d31"] = poly::to_string(nonadaptive);
  report["outer_bound_d31"] = poly::to_string(outer);
  report["adaptive_d31"] = poly::to_string(closed.d31);
  report["adaptation_enlarges_region"] = closed.violates_outer;

  v.check("nonadaptive d31 stays within the outer bound", nonadaptive <= outer);
  if (closed.violates_outer) {
    v.check("adaptive construction exceeds the nonadaptive bound",
            closed.d31 > nonadaptive);
  }
  write_json(out_dir, "compare.json", report);
  return v.all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact DoF regions and finite-SNR simulations for the intermittent "
      "MIMO three-way channel"};
  app.require_subcommand(1);

  std::string m_text = "3,2,1";
  std::string tau_text = "1/2";
  std::string out_dir = ".";
  std::vector<double> snr_db = {40.0, 50.0, 60.0};
  std::size_t slots = 10000;
  std::size_t blocks = 50;
  unsigned trials = 1;
  std::uint64_t seed = 1;
  bool project = false;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--m", m_text, "antenna counts M1,M2,M3 (M1 >= M2 >= M3 >= 1)");
    sub->add_option("--tau", tau_text,
                    "availability probability as an exact rational p/q");
    sub->add_option("--out", out_dir, "output directory");
  };

  auto* region = app.add_subcommand("region", "emit DoF-region descriptions");
  add_common(region);
  region->add_flag("--project", project,
                   "also project the raw system and verify it matches");

  auto* sumdof = app.add_subcommand("sumdof", "check the sum-DoF closed form");
  add_common(sumdof);

  auto* simulate =
      app.add_subcommand("simulate", "finite-SNR simulation of the nonadaptive scheme");
  add_common(simulate);
  simulate->add_option("--snr", snr_db, "SNR grid in dB")->delimiter(',')->expected(-2);
  simulate->add_option("--n", slots, "state-sequence length for empirical factors");
  simulate->add_option("--trials", trials, "independent channel draws");
  simulate->add_option("--seed", seed, "base RNG seed");

  auto* adaptive =
      app.add_subcommand("adaptive", "block-Markov relaying of the 3->1 message");
  add_common(adaptive);
  adaptive->add_option("--n", slots, "slots per block");
  adaptive->add_option("--B", blocks, "number of blocks");
  adaptive->add_option("--trials", trials, "independent state draws");
  adaptive->add_option("--seed", seed, "base RNG seed");

  auto* compare =
      app.add_subcommand("compare", "nonadaptive bound versus adaptive construction");
  add_common(compare);

  CLI11_PARSE(app, argc, argv);

  try {
    const NodeConfig cfg = parse_config(m_text);
    const Rational tau = parse_tau(tau_text);
    if (region->parsed()) return cmd_region(cfg, tau, out_dir, project);
    if (sumdof->parsed()) return cmd_sumdof(cfg, tau, out_dir);
    if (simulate->parsed()) {
      if (snr_db.size() < 2)
        throw std::invalid_argument("--snr needs at least two points for a slope");
      return cmd_simulate(cfg, tau, out_dir, snr_db, slots, trials, seed);
    }
    if (adaptive->parsed()) return cmd_adaptive(cfg, tau, out_dir, slots, blocks, trials, seed);
    if (compare->parsed()) return cmd_compare(cfg, tau, out_dir);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
