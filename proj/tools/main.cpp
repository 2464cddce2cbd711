#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "matchbound/adversary.hpp"
#include "matchbound/algorithms.hpp"
#include "matchbound/errors.hpp"
#include "matchbound/f_recursion.hpp"
#include "matchbound/frontier.hpp"
#include "matchbound/oracle.hpp"

using namespace matchbound;

namespace {

constexpr int kConfigError = 2;
constexpr int kClaimFailure = 3;

struct RunConfig {
  double eps = 0.5;
  double gamma = 0.6;
  double grid_step = 1e-3;
  std::size_t n = 2;
  std::size_t n_max = 30;
  std::uint64_t N = 0;
  double x0 = 0.0;
  std::string init = "uniform";
  std::string algorithm = "greedy";
  std::string out;
  std::string curve;
  std::string claims = "all";
  double tol = 1e-6;
  double k = 0.0;
  double frontier_step = 1e-4;
  bool serialize = false;
  bool gamma_given = false;
  std::string fleet = "fleet";
  std::uint64_t seed = 0;  // reserved; every run is deterministic
};

unsigned thread_count() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MATCHBOUND_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

// Writes to --out when given, otherwise stdout.
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw DomainError("cannot open " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

InitPolicy parse_init(const std::string& name) {
  if (name == "uniform") return InitPolicy::uniform;
  if (name == "skewed") return InitPolicy::skewed;
  throw DomainError("--init must be uniform or skewed");
}

int cmd_gamma_star(const RunConfig& cfg) {
  const auto gs = compute_gamma_star(cfg.tol);
  std::cout << std::setprecision(12) << "k_star " << gs.k_star << "\ngamma_star " << gs.gamma_star << '\n';
  if (!cfg.curve.empty()) {
    std::ofstream curve(cfg.curve);
    if (!curve) throw DomainError("cannot open " + cfg.curve);
    curve << std::setprecision(12) << "k,objective\n";
    for (int i = 0; i <= 900; ++i) {
      const double k = 1.0 + 0.01 * i;
      curve << k << ',' << gamma_objective(k) << '\n';
    }
  }
  return 0;
}

int cmd_f_table(const RunConfig& cfg) {
  const auto params = FParams::make(cfg.eps, cfg.gamma, cfg.grid_step);
  const auto grids = f_sequence(params, cfg.n, thread_count());
  Output out(cfg.out);
  write_f_csv(out.stream(), grids);
  const double last = grids.back().values.front();
  if (last < kNegativeThreshold) {
    std::cerr << std::setprecision(12) << "F_" << cfg.n << "(0) = " << last << " < 0\n";
  }
  return 0;
}

int cmd_find_n(const RunConfig& cfg) {
  const auto params = FParams::make(cfg.eps, cfg.gamma, cfg.grid_step);
  const auto found = find_negative_n(params, cfg.n_max, thread_count());
  std::cout << std::setprecision(12);
  if (found) {
    std::cout << "n " << found->n << "\nF_n(0) " << found->value << "\nN " << "(1/eps)^" << found->n << '\n';
  } else {
    std::cout << "none up to n_max " << cfg.n_max << '\n';
  }
  return 0;
}

void print_summary(std::ostream& out, const Transcript& t, std::size_t matching) {
  out << std::setprecision(12) << "algorithm=" << t.algorithm << " ALG=" << t.alg_total << " OPT=" << t.opt_size
      << " offline=" << matching << " ratio=" << t.ratio() << " v_alg=" << t.v_alg << " bound=" << t.value_bound
      << '\n';
}

int cmd_duel(const RunConfig& cfg) {
  const auto fparams = FParams::make(cfg.eps, cfg.gamma, cfg.grid_step);
  const auto params = AdversaryParams::make(cfg.n, fparams, cfg.x0, cfg.N);
  auto alg = make_algorithm(cfg.algorithm, {nullptr, parse_init(cfg.init)});
  AdversaryOptions options;
  options.serialize_batches = cfg.serialize;
  options.record_events = !cfg.out.empty();
  const auto grids = f_sequence(fparams, cfg.n, thread_count());
  const auto run = run_construction(params, *alg, grids, options);
  check_structure(run.transcript, run.state);
  const auto matching = max_matching(OfflineGraph::from_run(run.transcript, run.state));
  if (!cfg.out.empty()) {
    Output out(cfg.out);
    write_transcript_json(out.stream(), run.transcript);
  }
  print_summary(std::cout, run.transcript, matching);
  return 0;
}

bool wants(const RunConfig& cfg, const std::string& claim) { return cfg.claims == "all" || cfg.claims == claim; }

int cmd_verify(const RunConfig& cfg) {
  static const std::vector<std::string> known{"all", "monotone", "concavity", "lipschitz", "bound", "structure"};
  if (std::find(known.begin(), known.end(), cfg.claims) == known.end()) {
    throw DomainError("--claims must be one of all, monotone, concavity, lipschitz, bound, structure");
  }
  const auto fparams = FParams::make(cfg.eps, cfg.gamma, cfg.grid_step);
  const auto grids = f_sequence(fparams, cfg.n, thread_count());
  bool ok = true;
  std::cout << std::setprecision(6);
  auto line = [&](const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS " : "FAIL ") << name << ' ' << detail << '\n';
    ok = ok && pass;
  };

  const auto report = certify_claims(grids);
  auto detail = [&](double v) {
    std::ostringstream s;
    s << std::setprecision(6) << "violation=" << v << " tol=" << report.tolerance;
    return s.str();
  };
  if (wants(cfg, "monotone")) line("monotone", report.monotone_ok(), detail(report.monotone_violation));
  if (wants(cfg, "concavity")) line("concavity", report.concavity_ok(), detail(report.concavity_violation));
  if (wants(cfg, "lipschitz")) line("lipschitz", report.lipschitz_ok(), detail(report.lipschitz_violation));

  if (wants(cfg, "bound") || wants(cfg, "structure")) {
    const auto params = AdversaryParams::make(cfg.n, fparams, cfg.x0, cfg.N);
    const std::vector<std::string> fleet =
        cfg.fleet == "fleet" ? default_fleet() : std::vector<std::string>{cfg.fleet};
    AdversaryOptions options;
    options.record_events = false;
    options.serialize_batches = cfg.serialize;
    for (const auto& name : fleet) {
      auto alg = make_algorithm(name, {nullptr, parse_init(cfg.init)});
      try {
        const auto run = run_construction(params, *alg, grids, options);
        const auto& t = run.transcript;
        if (wants(cfg, "bound")) {
          const double slack = 2.0 * fparams.grid_step * static_cast<double>(params.N);
          std::ostringstream s;
          s << std::setprecision(6) << "v_alg=" << t.v_alg << " bound=" << t.value_bound;
          line("bound:" + name, t.v_alg <= t.value_bound + slack, s.str());
        }
        if (wants(cfg, "structure")) {
          check_structure(t, run.state);
          const auto matching = max_matching(OfflineGraph::from_run(t, run.state));
          line("structure:" + name, matching == t.opt_size,
               "pairs=" + std::to_string(t.opt_size) + " offline=" + std::to_string(matching));
        }
      } catch (const StructureViolation& e) {
        line("structure:" + name, false, e.what());
      } catch (const InfeasibleDecision& e) {
        line("feasibility:" + name, false, e.what());
      } catch (const UnknownEdge& e) {
        line("feasibility:" + name, false, e.what());
      }
    }
  }
  return ok ? 0 : kClaimFailure;
}

int cmd_crosscheck(const RunConfig& cfg) {
  const auto fparams = FParams::make(cfg.eps, cfg.gamma, cfg.grid_step);
  const auto grids = f_sequence(fparams, cfg.n, thread_count());
  const auto game = minimax_value(cfg.eps, cfg.gamma, cfg.n, cfg.grid_step);
  const double grid = grids.back().values.front();
  const double diff = std::abs(game.value - grid);
  std::cout << std::setprecision(12) << "minimax " << game.value << " at a=" << game.best_a << " nodes=" << game.nodes
            << "\ngrid " << grid << "\ndiff " << diff << '\n';
  return diff <= 1e-12 ? 0 : kClaimFailure;
}

int cmd_frontier_export(const RunConfig& cfg) {
  double gamma = cfg.gamma;
  double k = cfg.k;
  if (k == 0.0) {
    const auto gs = compute_gamma_star(cfg.tol);
    k = gs.k_star;
    if (!cfg.gamma_given) gamma = gs.gamma_star;
  } else if (!cfg.gamma_given) {
    gamma = gamma_objective(k);
  }
  const double step = cfg.frontier_step;
  const auto frontier = build_frontier(gamma, k, step);
  const auto fact = verify_fact_tz(frontier);
  const std::string prefix = cfg.out.empty() ? "frontier" : cfg.out;
  {
    std::ofstream h(prefix + "_H.csv");
    if (!h) throw DomainError("cannot open " + prefix + "_H.csv");
    write_h_csv(h, frontier);
    std::ofstream g(prefix + "_G.csv");
    write_g_csv(g, frontier);
  }
  std::cout << std::setprecision(12) << "gamma " << gamma << "\nk " << k << "\ncondition_1 " << fact.max_violation_1
            << "\ncondition_2 " << fact.max_violation_2 << "\ncertified_gamma " << fact.certified_gamma << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided online fractional matching: value functions, adversary and frontier"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_f = [&](CLI::App* sub) {
    sub->add_option("--eps", cfg.eps, "Batch ratio eps (1/eps integer)")->capture_default_str();
    sub->add_option("--gamma", cfg.gamma, "Target ratio")->capture_default_str();
    sub->add_option("--grid-step", cfg.grid_step, "Grid step for x and a")->capture_default_str();
  };
  auto add_run = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "Number of steps")->capture_default_str();
    sub->add_option("--N", cfg.N, "Initial vertex count (default (1/eps)^n)");
    sub->add_option("--x0", cfg.x0, "Initial average portion")->capture_default_str();
    sub->add_option("--init", cfg.init, "Initial distribution: uniform or skewed")->capture_default_str();
    sub->add_flag("--serialize", cfg.serialize, "Present batches one vertex at a time");
    sub->add_option("--seed", cfg.seed, "Reserved");
  };

  auto* gamma_star = app.add_subcommand("gamma-star", "Optimal ratio and k*");
  gamma_star->add_option("--tol", cfg.tol, "Search tolerance on k")->capture_default_str();
  gamma_star->add_option("--curve", cfg.curve, "Write objective samples on [1, 10] as CSV");

  auto* f_table = app.add_subcommand("f-table", "Tabulate F_1 .. F_n as CSV");
  add_f(f_table);
  f_table->add_option("--n", cfg.n, "Number of steps")->capture_default_str();
  f_table->add_option("--out", cfg.out, "CSV path (default stdout)");

  auto* find_n = app.add_subcommand("find-n", "First n with F_n(0) < 0");
  add_f(find_n);
  find_n->add_option("--n-max", cfg.n_max, "Largest n tried")->capture_default_str();

  auto* duel = app.add_subcommand("duel", "Run the adversary against one algorithm");
  add_f(duel);
  add_run(duel);
  duel->add_option("--algorithm", cfg.algorithm, "tz, greedy, fixed:<c>, evensplit:<a>")->capture_default_str();
  duel->add_option("--out", cfg.out, "Transcript JSON path");

  auto* verify = app.add_subcommand("verify", "Check value-function claims, the adversary bound and structure");
  add_f(verify);
  add_run(verify);
  verify->add_option("--algorithm", cfg.fleet, "Algorithm name or 'fleet'")->capture_default_str();
  verify->add_option("--claims", cfg.claims, "all, monotone, concavity, lipschitz, bound, structure")
      ->capture_default_str();

  auto* crosscheck = app.add_subcommand("crosscheck", "Compare the exhaustive game value with grid F_n(0)");
  add_f(crosscheck);
  crosscheck->add_option("--n", cfg.n, "Number of steps")->capture_default_str();

  auto* frontier = app.add_subcommand("frontier-export", "Write H and G/g/a tables");
  frontier->add_option("--gamma", cfg.gamma, "Ratio (default: optimal)");
  frontier->add_option("--k", cfg.k, "Shape parameter k (default: optimal)");
  frontier->add_option("--grid-step", cfg.frontier_step, "Grid step")->capture_default_str();
  frontier->add_option("--tol", cfg.tol, "Tolerance for the optimal k")->capture_default_str();
  frontier->add_option("--out", cfg.out, "Path prefix for <prefix>_H.csv and <prefix>_G.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (gamma_star->parsed()) return cmd_gamma_star(cfg);
    if (f_table->parsed()) return cmd_f_table(cfg);
    if (find_n->parsed()) return cmd_find_n(cfg);
    if (duel->parsed()) return cmd_duel(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (crosscheck->parsed()) return cmd_crosscheck(cfg);
    if (frontier->parsed()) {
      cfg.gamma_given = frontier->count("--gamma") > 0;
      return cmd_frontier_export(cfg);
    }
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const BadInitialization& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kClaimFailure;
  }
  return 0;
}
