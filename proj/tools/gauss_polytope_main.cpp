#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gpdp/dp.hpp"
#include "gpdp/errors.hpp"
#include "gpdp/oracle.hpp"
#include "gpdp/preprocess.hpp"
#include "gpdp/problem_io.hpp"
#include "gpdp/types.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitIo = 3;
constexpr int kExitInvalid = 4;

struct CommonOpts {
  std::string problem_path;
  std::string kernel = "auto";
  int threads = 0;
  std::int64_t cell_budget = gpdp::kDefaultCellBudget;
  bool timing = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--problem", c.problem_path, "problem file (JSON)")->required();
  cmd->add_option("--kernel", c.kernel, "inner-loop variant: auto|scalar|avx2");
  cmd->add_option("--threads", c.threads, "worker cap, 0 = all available");
  cmd->add_option("--cell-budget", c.cell_budget, "max grid cells per stage");
  cmd->add_flag("--timing", c.timing, "report measured wall time (off keeps output run-independent)");
}

gpdp::SolveOptions solve_options(const CommonOpts& c) {
  gpdp::SolveOptions o;
  o.cell_budget = c.cell_budget;
  o.threads = c.threads;
  o.kernel = gpdp::kernels::parse_kind(c.kernel);
  return o;
}

// Ingestion pipeline: parse, reduce a general Gaussian to standard noise,
// make the last constraint column usable for the backward recursion.
gpdp::PolytopeProblem load_ready(const std::string& path) {
  const gpdp::ProblemFile pf = gpdp::load_problem_file(path);
  gpdp::PolytopeProblem p = pf.problem;
  if (pf.gaussian) p = gpdp::whiten(*pf.gaussian, p);
  gpdp::NormalizeResult nr = gpdp::normalize_last_column_ex(p);
  for (const auto& note : nr.notes) std::cerr << "note: " << note << "\n";
  return std::move(nr.problem);
}

void resolve_params(std::optional<std::int64_t> n, std::optional<double>& lambda,
                    std::optional<double>& beta) {
  if (n) {
    if (lambda || beta)
      throw gpdp::invalid_input("give either --n or --lambda/--beta, not both");
    if (*n <= 1) throw gpdp::invalid_input("--n: lambda must exceed 1");
    lambda = std::sqrt(static_cast<double>(*n));
    beta = 1.0 / static_cast<double>(*n);
    return;
  }
  if (!lambda || !beta) throw gpdp::invalid_input("give --n, or both --lambda and --beta");
}

int cmd_integrate(const CommonOpts& c, std::optional<std::int64_t> n,
                  std::optional<double> lambda, std::optional<double> beta) {
  resolve_params(n, lambda, beta);
  const gpdp::PolytopeProblem p = load_ready(c.problem_path);
  const gpdp::SolveReport r = gpdp::solve(p, *lambda, *beta, solve_options(c));
  std::cout << "estimate: " << gpdp::format_sig(r.estimate) << "\n";
  std::cout << "bound_theta: " << gpdp::format_sig(r.bound.theta_term) << "\n";
  std::cout << "bound_alpha: " << gpdp::format_sig(r.bound.alpha_term) << "\n";
  std::cout << "bound_beta: " << gpdp::format_sig(r.bound.beta_term) << "\n";
  std::cout << "bound_total: " << gpdp::format_sig(r.bound.total) << "\n";
  std::cout << "grid_cells:";
  for (const auto cells : r.grid_cells) std::cout << " " << cells;
  std::cout << "\n";
  std::cout << "cells_total: " << r.cells_total << "\n";
  std::cout << "escaped_mass_max: " << gpdp::format_sig(r.escaped_mass_max) << "\n";
  std::cout << "kernel: " << r.kernel_name << "\n";
  if (c.timing) std::cout << "seconds: " << gpdp::format_sig(r.seconds) << "\n";
  return 0;
}

int cmd_bound(const CommonOpts& c, std::optional<std::int64_t> n, std::optional<double> lambda,
              std::optional<double> beta) {
  resolve_params(n, lambda, beta);
  const gpdp::PolytopeProblem p = load_ready(c.problem_path);
  const gpdp::ErrorBudget eb = gpdp::error_bound(p, *lambda, *beta);
  std::cout << "bound_theta: " << gpdp::format_sig(eb.theta_term) << "\n";
  std::cout << "bound_alpha: " << gpdp::format_sig(eb.alpha_term) << "\n";
  std::cout << "bound_beta: " << gpdp::format_sig(eb.beta_term) << "\n";
  std::cout << "bound_total: " << gpdp::format_sig(eb.total) << "\n";
  return 0;
}

int cmd_oracle(const CommonOpts& c, std::int64_t samples, std::uint64_t seed, double tol) {
  const gpdp::PolytopeProblem p = load_ready(c.problem_path);
  const gpdp::McResult mc = gpdp::mc_estimate(p, samples, seed);
  std::cout << "mc_estimate: " << gpdp::format_sig(mc.estimate) << "\n";
  std::cout << "mc_sigma: " << gpdp::format_sig(mc.std_error) << "\n";
  std::cout << "mc_samples: " << mc.samples << "\n";
  std::cout << "mc_seed: " << mc.seed << "\n";
  if (p.horizon() <= 3) {
    const double q = gpdp::quadrature_estimate(p, tol);
    std::cout << "quadrature: " << gpdp::format_sig(q) << "\n";
    std::cout << "discrepancy: " << gpdp::format_sig(std::fabs(q - mc.estimate)) << "\n";
  } else {
    std::cout << "quadrature: skipped (T>3)\n";
  }
  return 0;
}

struct SweepOpts {
  std::vector<std::int64_t> ns;
  std::vector<double> lambdas;
  std::vector<double> betas;
  std::int64_t samples = 1000000;
  std::uint64_t seed = 42;
  std::optional<double> ref;
  std::string out_path;
};

int cmd_sweep(const CommonOpts& c, const SweepOpts& s) {
  if (s.ns.empty()) throw gpdp::invalid_input("--sweep: need at least one n");
  if (!s.lambdas.empty() && s.lambdas.size() != s.ns.size())
    throw gpdp::invalid_input("--lambdas: length must match --sweep");
  if (!s.betas.empty() && s.betas.size() != s.ns.size())
    throw gpdp::invalid_input("--betas: length must match --sweep");

  const gpdp::PolytopeProblem p = load_ready(c.problem_path);

  double mc_ref = 0.0;
  double mc_sigma = 0.0;
  if (s.ref) {
    mc_ref = *s.ref;
  } else {
    const gpdp::McResult mc = gpdp::mc_estimate(p, s.samples, s.seed);
    mc_ref = mc.estimate;
    mc_sigma = mc.std_error;
  }

  std::ofstream file;
  if (!s.out_path.empty()) {
    file.open(s.out_path, std::ios::binary);  // \n endings on every platform
    if (!file) throw gpdp::io_error("cannot open for writing: " + s.out_path);
  }
  std::ostream& out = s.out_path.empty() ? std::cout : file;

  out << "n,lambda,beta,estimate,bound_theta,bound_alpha,bound_beta,bound_total,"
         "mc_ref,mc_sigma,abs_err_vs_mc,cells_total,seconds\n";
  const gpdp::SolveOptions opts = solve_options(c);
  for (std::size_t i = 0; i < s.ns.size(); ++i) {
    const std::int64_t n = s.ns[i];
    const double lambda = s.lambdas.empty() ? std::sqrt(static_cast<double>(n)) : s.lambdas[i];
    const double beta = s.betas.empty() ? 1.0 / static_cast<double>(n) : s.betas[i];
    if (lambda <= 1.0) throw gpdp::invalid_input("sweep entry: lambda must exceed 1");
    if (beta <= 0.0) throw gpdp::invalid_input("sweep entry: beta must be positive");
    const gpdp::SolveReport r = gpdp::solve(p, lambda, beta, opts);
    const double seconds = c.timing ? r.seconds : 0.0;
    out << n << ',' << gpdp::format_sig(lambda) << ',' << gpdp::format_sig(beta) << ','
        << gpdp::format_sig(r.estimate) << ',' << gpdp::format_sig(r.bound.theta_term) << ','
        << gpdp::format_sig(r.bound.alpha_term) << ',' << gpdp::format_sig(r.bound.beta_term)
        << ',' << gpdp::format_sig(r.bound.total) << ',' << gpdp::format_sig(mc_ref) << ','
        << gpdp::format_sig(mc_sigma) << ','
        << gpdp::format_sig(std::fabs(r.estimate - mc_ref)) << ',' << r.cells_total << ','
        << gpdp::format_sig(seconds) << '\n';
  }
  if (!s.out_path.empty()) {
    file.close();
    if (!file) throw gpdp::io_error("write failed: " + s.out_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaussian mass of a polytope via a discretized dynamic program"};
  app.require_subcommand(1);

  CommonOpts c_int, c_swp, c_orc, c_bnd;
  std::optional<std::int64_t> n_int, n_bnd;
  std::optional<double> lambda_int, beta_int, lambda_bnd, beta_bnd;

  CLI::App* integrate = app.add_subcommand("integrate", "solve and print estimate plus bound");
  add_common(integrate, c_int);
  integrate->add_option("--n", n_int, "protocol size: lambda = sqrt(n), beta = 1/n");
  integrate->add_option("--lambda", lambda_int, "smoothing sharpness (> 1)");
  integrate->add_option("--beta", beta_int, "grid accuracy (> 0)");

  CLI::App* sweep = app.add_subcommand("sweep", "convergence sweep over n, CSV output");
  SweepOpts s;
  add_common(sweep, c_swp);
  sweep->add_option("--sweep", s.ns, "comma-separated n list")->delimiter(',')->required();
  sweep->add_option("--lambdas", s.lambdas, "explicit lambda per entry")->delimiter(',');
  sweep->add_option("--betas", s.betas, "explicit beta per entry")->delimiter(',');
  sweep->add_option("--samples", s.samples, "Monte Carlo reference sample count");
  sweep->add_option("--seed", s.seed, "Monte Carlo reference seed");
  double ref_value = 0.0;
  CLI::Option* ref_opt =
      sweep->add_option("--ref", ref_value, "exact reference probability, replaces Monte Carlo");
  sweep->add_option("--out", s.out_path, "CSV output path (default stdout)");

  CLI::App* oracle = app.add_subcommand("oracle", "Monte Carlo and quadrature references");
  std::int64_t samples = 1000000;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  add_common(oracle, c_orc);
  oracle->add_option("--samples", samples, "Monte Carlo sample count");
  oracle->add_option("--seed", seed, "Monte Carlo seed");
  oracle->add_option("--tol", tol, "quadrature tolerance (>= 1e-8)");

  CLI::App* bound = app.add_subcommand("bound", "a-priori error bound only");
  add_common(bound, c_bnd);
  bound->add_option("--n", n_bnd, "protocol size: lambda = sqrt(n), beta = 1/n");
  bound->add_option("--lambda", lambda_bnd, "smoothing sharpness (> 1)");
  bound->add_option("--beta", beta_bnd, "grid accuracy (> 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    if (*integrate) return cmd_integrate(c_int, n_int, lambda_int, beta_int);
    if (*sweep) {
      if (*ref_opt) s.ref = ref_value;
      return cmd_sweep(c_swp, s);
    }
    if (*oracle) return cmd_oracle(c_orc, samples, seed, tol);
    if (*bound) return cmd_bound(c_bnd, n_bnd, lambda_bnd, beta_bnd);
  } catch (const gpdp::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const gpdp::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const gpdp::resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const gpdp::invalid_input& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
