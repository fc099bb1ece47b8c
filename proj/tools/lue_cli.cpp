// Experiment runner for the LUE / fixed-trace / bounded-trace ensemble library.
// Subcommands: sample, density, kernel, converge, verify, entropy.
// Exit codes: 0 success, 2 configuration error, 3 numeric failure.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lue/constrained.hpp"
#include "lue/ensembles.hpp"
#include "lue/parallel.hpp"
#include "lue/stats.hpp"
#include "lue/table.hpp"
#include "lue/verify.hpp"

namespace {

struct Options {
  int n = 8;
  double alpha = 0.0;
  double m = -1.0;  // overrides alpha when >= 0
  std::string constraint = "free";
  double param = 1.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  long draws = 1000;
  double grid_lo = 0.0, grid_hi = 1.0;
  int grid_points = 101;
  double kernel_y = -1.0;
  std::string regime = "bulk";
  double bulk_u = 0.5;
  std::string n_list = "50,100,200";
  std::string out;
  std::string format = "csv";
  unsigned threads = lue::default_threads();
};

lue::EnsembleSpec make_spec(const Options& o) {
  lue::EnsembleSpec spec;
  spec.n = o.n;
  spec.m = o.m >= 0.0 ? o.m : o.n + o.alpha;
  if (o.constraint == "free")
    spec.mode = lue::TraceMode::free_scale;
  else if (o.constraint == "fixed")
    spec.mode = lue::TraceMode::fixed_trace;
  else if (o.constraint == "bounded")
    spec.mode = lue::TraceMode::bounded_trace;
  else
    throw std::invalid_argument("constraint: must be free, fixed or bounded");
  spec.parameter = o.param;
  spec.validate();
  return spec;
}

void add_common(CLI::App* cmd, Options& o, bool wants_grid, bool wants_draws) {
  cmd->add_option("--n", o.n, "matrix dimension N")->check(CLI::PositiveNumber);
  cmd->add_option("--alpha", o.alpha, "rectangularity alpha = M - N (> -1)");
  cmd->add_option("--m", o.m, "second dimension M (alternative to --alpha)");
  cmd->add_option("--constraint", o.constraint, "trace constraint: free|fixed|bounded");
  cmd->add_option("--param", o.param, "scale s (free) or trace bound r (fixed/bounded)");
  cmd->add_option("--seed", o.seed, "RNG master seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  cmd->add_option("--threads", o.threads, "worker threads (results are thread-count independent)");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--format", o.format, "output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  if (wants_draws)
    cmd->add_option("--draws", o.draws, "number of Monte Carlo draws")->check(CLI::PositiveNumber);
  if (wants_grid) {
    cmd->add_option("--grid-lo", o.grid_lo, "grid lower edge");
    cmd->add_option("--grid-hi", o.grid_hi, "grid upper edge");
    cmd->add_option("--grid-points", o.grid_points, "grid points / bins")
        ->check(CLI::PositiveNumber);
  }
}

void require_seed(const Options& o) {
  if (!o.seed_set)
    throw std::invalid_argument("seed: --seed is required for sample-based commands");
}

std::vector<lue::Spectrum> draw_batch(const lue::EnsembleSpec& spec, const Options& o) {
  std::vector<lue::Spectrum> out(o.draws);
  lue::parallel_for(o.draws, o.threads, [&](std::size_t i) {
    out[i] = lue::sample(spec, lue::rng::Stream::derive(o.seed, i));
  });
  return out;
}

void echo_spec(lue::ResultTable& t, const Options& o, const lue::EnsembleSpec& spec) {
  t.meta("version", lue::version_string);
  t.meta("n", std::to_string(spec.n));
  t.meta("alpha", lue::format_double(spec.alpha()));
  t.meta("constraint", o.constraint);
  t.meta("param", lue::format_double(spec.parameter));
}

lue::ResultTable run_sample(const Options& o) {
  require_seed(o);
  const lue::EnsembleSpec spec = make_spec(o);
  const auto batch = draw_batch(spec, o);
  lue::ResultTable t;
  t.meta("command", "sample");
  echo_spec(t, o, spec);
  t.meta("seed", std::to_string(o.seed));
  t.meta("draws", std::to_string(o.draws));
  for (int k = 1; k <= spec.n; ++k) t.columns.push_back("x_" + std::to_string(k));
  t.columns.push_back("trace");
  t.columns.push_back("entropy");
  for (const auto& sp : batch) {
    std::vector<double> row(sp.values.begin(), sp.values.end());
    const double tr = sp.trace();
    row.push_back(tr);
    // von Neumann entropy of the normalized spectrum; equals the Schmidt
    // entropy for fixed(1) draws
    lue::KahanSum s;
    for (double x : sp.values)
      if (x > 0.0) s.add(-(x / tr) * std::log(x / tr));
    row.push_back(std::max(0.0, s.value()));
    t.rows.push_back(std::move(row));
  }
  return t;
}

lue::ResultTable run_density(const Options& o) {
  require_seed(o);
  const lue::EnsembleSpec spec = make_spec(o);
  const auto batch = draw_batch(spec, o);
  const lue::Histogram h = lue::histogram(batch, o.grid_lo, o.grid_hi, o.grid_points);
  const bool fourier_col = spec.mode == lue::TraceMode::fixed_trace && spec.n >= 2 && spec.n <= 12;
  lue::ResultTable t;
  t.meta("command", "density");
  echo_spec(t, o, spec);
  t.meta("seed", std::to_string(o.seed));
  t.meta("draws", std::to_string(o.draws));
  t.columns = {"x", "exact_series"};
  if (fourier_col) t.columns.push_back("exact_fourier");
  t.columns.push_back("monte_carlo");
  t.columns.push_back("mp_density");

  std::vector<double> centers(o.grid_points);
  for (int i = 0; i < o.grid_points; ++i) centers[i] = h.center(i);

  std::vector<double> exact(o.grid_points), fourier;
  if (spec.mode == lue::TraceMode::free_scale) {
    lue::KernelContext ctx(spec.n, spec.alpha(), lue::complex_t(spec.parameter, 0.0));
    lue::parallel_for(o.grid_points, o.threads,
                      [&](std::size_t i) { exact[i] = ctx.kernel_diag(centers[i]); });
  } else {
    const auto route = spec.mode == lue::TraceMode::fixed_trace ? lue::DensityRoute::series
                                                                : lue::DensityRoute::radial;
    lue::ConstrainedDensity cd = lue::constrained_density(spec, centers, route);
    cd.validate();
    exact = std::move(cd.values);
    if (fourier_col) {
      lue::ConstrainedDensity cf =
          lue::constrained_density(spec, centers, lue::DensityRoute::fourier);
      cf.validate();
      fourier = std::move(cf.values);
    }
  }
  for (int i = 0; i < o.grid_points; ++i) {
    std::vector<double> row{centers[i], exact[i]};
    if (fourier_col) row.push_back(fourier[i]);
    row.push_back(h.density(i));
    row.push_back(lue::mp_density(centers[i]));
    t.rows.push_back(std::move(row));
  }
  return t;
}

lue::ResultTable run_kernel(const Options& o) {
  const lue::EnsembleSpec spec = make_spec(o);
  if (spec.mode != lue::TraceMode::free_scale)
    throw std::invalid_argument("constraint: the kernel command needs the free ensemble (scale s)");
  lue::KernelContext ctx(spec.n, spec.alpha(), lue::complex_t(spec.parameter, 0.0));
  lue::ResultTable t;
  t.meta("command", "kernel");
  echo_spec(t, o, spec);
  t.columns = {"x", "k_diag"};
  const bool pair_col = o.kernel_y >= 0.0;
  if (pair_col) t.columns.push_back("k_x_y");
  std::vector<std::vector<double>> rows(o.grid_points);
  lue::parallel_for(o.grid_points, o.threads, [&](std::size_t i) {
    const double x =
        o.grid_lo + (o.grid_hi - o.grid_lo) * (i + 0.5) / static_cast<double>(o.grid_points);
    std::vector<double> row{x, ctx.kernel_diag(x)};
    if (pair_col) row.push_back(ctx.kernel_cd(x, o.kernel_y));
    rows[i] = std::move(row);
  });
  t.rows = std::move(rows);
  return t;
}

lue::ResultTable run_converge(const Options& o) {
  lue::Regime regime;
  std::vector<double> grid;
  if (o.regime == "bulk") {
    regime = lue::Regime::bulk;
    for (int i = 0; i < 9; ++i) grid.push_back(-2.0 + 0.5 * i);
  } else if (o.regime == "soft") {
    regime = lue::Regime::soft;
    for (int i = 0; i < 13; ++i) grid.push_back(-4.0 + 0.5 * i);
  } else if (o.regime == "hard") {
    regime = lue::Regime::hard;
    for (int i = 1; i <= 40; ++i) grid.push_back(0.5 * i);
  } else {
    throw std::invalid_argument("regime: must be bulk, soft or hard");
  }
  std::vector<int> ladder;
  std::stringstream ss(o.n_list);
  for (std::string tok; std::getline(ss, tok, ',');) {
    const int v = std::stoi(tok);
    if (v < 1) throw std::invalid_argument("n-list: dimensions must be positive");
    ladder.push_back(v);
  }
  if (ladder.empty()) throw std::invalid_argument("n-list: at least one dimension required");
  lue::ResultTable t;
  t.meta("command", "converge");
  t.meta("version", lue::version_string);
  t.meta("regime", o.regime);
  t.meta("alpha", lue::format_double(o.alpha));
  if (o.regime == "bulk") t.meta("u", lue::format_double(o.bulk_u));
  t.columns = {"n", "sup_error", "points_checked"};
  bool window_echoed = false;
  for (int n : ladder) {
    const auto row = lue::kernel_convergence(regime, o.bulk_u, n, o.alpha, grid);
    if (!window_echoed) {
      t.meta("window", row.window);
      window_echoed = true;
    }
    t.rows.push_back({static_cast<double>(row.n), row.sup_error,
                      static_cast<double>(row.points_checked)});
  }
  return t;
}

lue::ResultTable run_entropy(const Options& o) {
  require_seed(o);
  Options oo = o;
  oo.constraint = "fixed";
  oo.param = 1.0;
  const lue::EnsembleSpec spec = make_spec(oo);
  const auto batch = draw_batch(spec, oo);
  const lue::PageAverage pa = lue::page_average(batch);
  lue::ResultTable t;
  t.meta("command", "entropy");
  echo_spec(t, oo, spec);
  t.meta("seed", std::to_string(o.seed));
  t.meta("draws", std::to_string(o.draws));
  t.columns = {"mean", "std_error", "asymptotic_approx", "draws"};
  t.rows.push_back({pa.mean, pa.std_error, pa.asymptotic_approx, static_cast<double>(o.draws)});
  return t;
}

lue::ResultTable run_verify(const Options& o, bool& all_pass) {
  lue::ResultTable t;
  t.meta("command", "verify");
  t.meta("version", lue::version_string);
  t.columns = {"index", "pass", "measured", "threshold", "seconds"};
  all_pass = true;
  int idx = 0;
  const auto results = lue::run_acceptance(o.threads, [&](const lue::CheckResult& r) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << "  measured=" << r.measured
              << " threshold=" << r.threshold << "  (" << r.detail << ")  " << r.seconds << "s\n"
              << std::flush;
  });
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    t.rows.push_back({static_cast<double>(++idx), r.pass ? 1.0 : 0.0, r.measured, r.threshold,
                      r.seconds});
  }
  return t;
}

// Flat key=value configuration file; command-line options override it.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
    if (key.empty()) continue;
    tokens.push_back("--" + key);
    tokens.push_back(val);
  }
  return tokens;
}

int emit(const lue::ResultTable& t, const Options& o, double wall_seconds) {
  if (!t.all_finite()) {
    std::cerr << "error: non-finite value in result table\n";
    return 3;
  }
  std::ostringstream body;
  if (o.format == "json")
    lue::write_json(t, body);
  else
    lue::write_csv(t, body);
  if (o.out.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) {
      std::cerr << "out: cannot open " << o.out << "\n";
      return 2;
    }
    f << body.str();
  }
  std::cerr << "wall_time_s=" << wall_seconds << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral statistics of the Laguerre unitary ensemble and its "
               "fixed- and bounded-trace variants"};
  app.require_subcommand(1);
  Options o;
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file (options override it)");

  auto* sample = app.add_subcommand("sample", "draw eigenvalue configurations");
  add_common(sample, o, false, true);
  auto* density = app.add_subcommand("density", "exact and Monte Carlo 1-point densities on a grid");
  add_common(density, o, true, true);
  auto* kernel = app.add_subcommand("kernel", "finite-N kernel values at the requested scale");
  add_common(kernel, o, true, false);
  kernel->add_option("--y", o.kernel_y, "fixed second argument for an off-diagonal column");
  auto* converge = app.add_subcommand("converge", "kernel-convergence table across an N ladder");
  converge->add_option("--regime", o.regime, "bulk|soft|hard");
  converge->add_option("--u", o.bulk_u, "bulk reference point in (0,1)");
  converge->add_option("--alpha", o.alpha, "rectangularity alpha");
  converge->add_option("--n-list", o.n_list, "comma-separated N ladder");
  converge->add_option("--out", o.out, "output file (default: stdout)");
  converge->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  converge->add_option("--threads", o.threads, "worker threads");
  auto* verify = app.add_subcommand("verify", "run the acceptance suite, one pass/fail line each");
  verify->add_option("--threads", o.threads, "worker threads");
  verify->add_option("--out", o.out, "output file for the result rows");
  verify->add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  auto* entropy = app.add_subcommand("entropy", "Page-average entropy report for fixed(1) draws");
  add_common(entropy, o, false, true);

  for (auto* cmd : {sample, density, kernel, converge, verify, entropy})
    cmd->add_option("--config", config_path, "flat key=value config file (options override it)");

  // pre-pass: pull out --config, inject its key=value pairs right after the
  // subcommand name so explicit flags that follow override them
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--config") {
        const auto injected = config_tokens(args[i + 1]);
        args.erase(args.begin() + i, args.begin() + i + 2);
        std::size_t at = 0;
        while (at < args.size() && !app.get_subcommand_no_throw(args[at])) ++at;
        args.insert(args.begin() + std::min(args.size(), at + 1), injected.begin(),
                    injected.end());
        break;
      }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  for (auto* cmd : {sample, density, kernel, converge, verify, entropy})
    for (auto* opt : cmd->get_options()) opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::vector<const char*> cargs;
  cargs.push_back(argv[0]);
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }

  const auto t0 = std::chrono::steady_clock::now();
  try {
    lue::ResultTable t;
    bool all_pass = true;
    if (*sample)
      t = run_sample(o);
    else if (*density)
      t = run_density(o);
    else if (*kernel)
      t = run_kernel(o);
    else if (*converge)
      t = run_converge(o);
    else if (*verify)
      t = run_verify(o, all_pass);
    else if (*entropy)
      t = run_entropy(o);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int rc = emit(t, o, wall);
    if (rc != 0) return rc;
    return all_pass ? 0 : 3;
  } catch (const lue::numeric_error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
