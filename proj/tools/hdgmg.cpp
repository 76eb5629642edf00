#include "hdgmg/bench.hpp"
#include "hdgmg/diagnostics.hpp"
#include "hdgmg/io.hpp"
#include "hdgmg/multigrid.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace hdgmg;

namespace {

constexpr int exit_divergence = 2;
constexpr int exit_diagnostics = 3;
constexpr int exit_config = 4;

std::string read_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ofstream open_output(const fs::path& path)
{
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

std::vector<InjectionKind> parse_injections(const std::vector<std::string>& names)
{
  std::vector<InjectionKind> out;
  for (const std::string& n : names)
    out.push_back(parse_injection(n));
  return out;
}

std::vector<TauRule> parse_taus(const std::vector<std::string>& names)
{
  std::vector<TauRule> out;
  for (const std::string& n : names)
    out.push_back(parse_tau_rule(n));
  return out;
}

struct CommonFlags
{
  std::string config;
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  int levels = 0;
  std::vector<int> p;
  std::vector<std::string> tau;
  std::vector<std::string> injection;
  std::string smoother;
  std::vector<int> m;
  double tol = 0.0;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonFlags& f)
{
  cmd->add_option("--config", f.config, "JSON config file (flags override it)");
  cmd->add_option("--out-dir", f.out_dir, "directory for output files");
  cmd->add_option("--seed", f.seed, "seed for random trial vectors");
  cmd->add_option("--levels", f.levels, "finest paper level (paper level = refinements + 1)");
  cmd->add_option("--p", f.p, "polynomial degrees");
  cmd->add_option("--tau", f.tau, "tau rules: 1/h or 1");
  cmd->add_option("--injection", f.injection, "injections: I0 I1 I2 I3");
  cmd->add_option("--smoother", f.smoother, "sgs, gs, jacobi or jacobi:<omega>");
  cmd->add_option("--m", f.m, "numbers of smoothing steps");
  cmd->add_option("--tol", f.tol, "relative residual tolerance");
  cmd->add_option("--jobs", f.jobs, "worker threads (0 = all cores)");
}

int cmd_bench(const CommonFlags& f, bool timing)
{
  BenchConfig config;
  if (!f.config.empty())
    config = bench_config_from_json(read_file(f.config));
  if (f.levels)
    config.max_paper_level = f.levels;
  if (!f.p.empty())
    config.degrees = f.p;
  if (!f.tau.empty())
    config.tau_rules = parse_taus(f.tau);
  if (!f.injection.empty())
    config.injections = parse_injections(f.injection);
  if (!f.smoother.empty())
    config.smoother = parse_smoother(f.smoother);
  if (!f.m.empty())
    config.smoothing_steps = f.m;
  if (f.tol != 0.0)
    config.tol = f.tol;
  if (f.jobs)
    config.jobs = f.jobs;
  config.seed = f.seed;
  config.timing = config.timing || timing;
  config.check();

  const BenchReport report = run_bench(config);
  fs::create_directories(f.out_dir);
  auto csv = open_output(fs::path(f.out_dir) / "bench.csv");
  report.write_csv(csv);
  auto md = open_output(fs::path(f.out_dir) / "bench.md");
  report.write_markdown(md);
  report.write_markdown(std::cout);
  if (report.any_diverged())
  {
    std::cerr << "bench: at least one configuration DIVERGED\n";
    return exit_divergence;
  }
  return 0;
}

int cmd_check(const CommonFlags& f, bool broken, int trials)
{
  CheckConfig config;
  config.seed = f.seed;
  if (!f.config.empty())
  {
    const nlohmann::json j = nlohmann::json::parse(read_file(f.config), nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ConfigError("check config must be a JSON object");
    for (const auto& [key, value] : j.items())
    {
      if (key == "p")
        config.degrees = value.get<std::vector<int>>();
      else if (key == "tau")
        config.tau_rules = parse_taus(value.get<std::vector<std::string>>());
      else if (key == "injections")
        config.injections = parse_injections(value.get<std::vector<std::string>>());
      else if (key == "max_level")
        config.max_level = value.get<int>() - 1;
      else if (key == "trials")
        config.trials = value.get<int>();
      else if (key == "seed")
        config.seed = value.get<std::uint64_t>();
      else
        throw ConfigError("unknown check config key '" + key + "'");
    }
  }
  if (f.levels)
  {
    if (f.levels < 3)
      throw ConfigError("check needs --levels >= 3");
    config.max_level = f.levels - 1;
    config.ls_max_level = std::min(config.ls_max_level, config.max_level);
    config.a1_max_level = std::min(config.a1_max_level, config.max_level);
  }
  if (!f.p.empty())
    config.degrees = f.p;
  if (!f.tau.empty())
    config.tau_rules = parse_taus(f.tau);
  if (!f.injection.empty())
    config.injections = parse_injections(f.injection);
  if (trials > 0)
    config.trials = trials;
  if (f.jobs)
    config.threads = f.jobs;
  if (broken)
    config.injections.push_back(InjectionKind::Broken);

  const AssumptionReport report = run_checks(config);
  fs::create_directories(f.out_dir);
  auto csv = open_output(fs::path(f.out_dir) / "check.csv");
  report.write_csv(csv);
  report.write_csv(std::cout);
  if (!report.passed())
  {
    std::cerr << "check: at least one assumption FAILED\n";
    return exit_diagnostics;
  }
  return 0;
}

int cmd_solve(const CommonFlags& f, const std::string& family, const std::string& rhs, bool direct)
{
  const int paper_level = f.levels ? f.levels : 4;
  if (paper_level < 1)
    throw ConfigError("--levels must be >= 1");
  const int p = f.p.empty() ? 1 : f.p.front();
  const TauRule rule = f.tau.empty() ? TauRule::OverH : parse_tau_rule(f.tau.front());
  SolverKind kind;
  switch (parse_family(family))
  {
  case MethodFamily::LdgH: kind = SolverKind::ldg_h(p, rule, 1.0); break;
  case MethodFamily::RtH: kind = SolverKind::rt_h(p); break;
  case MethodFamily::BdmH: kind = SolverKind::bdm_h(p); break;
  }
  try
  {
    kind.check();
  }
  catch (const std::invalid_argument& e)
  {
    throw ConfigError(e.what());
  }

  const double pi = 3.14159265358979323846;
  ScalarFunction f_rhs;
  ScalarFunction exact;
  if (rhs == "one")
    f_rhs = [](const Eigen::Vector2d&) { return 1.0; };
  else if (rhs == "sine")
  {
    exact = [pi](const Eigen::Vector2d& x) { return std::sin(pi * x[0]) * std::sin(pi * x[1]); };
    f_rhs = [pi, exact](const Eigen::Vector2d& x) { return 2.0 * pi * pi * exact(x); };
  }
  else if (rhs == "zero")
    f_rhs = [](const Eigen::Vector2d&) { return 0.0; };
  else
    throw ConfigError("--rhs must be one, sine or zero");

  const int level = paper_level - 1;
  const MeshHierarchy hierarchy(level);
  const HierarchyOperators ops = build_operators(hierarchy, kind, f.jobs);
  const Discretization& disc = *ops.discretizations[level];
  const Eigen::VectorXd b = disc.assemble_rhs(f_rhs);
  SkeletonVector lambda = SkeletonVector::Zero(b.size());
  if (b.norm() > 0.0)
  {
    if (direct || level == 0)
      lambda = DirectSolver(*ops.matrices[level]).solve(b);
    else
    {
      MgConfig mg;
      mg.kind = kind;
      mg.injection = f.injection.empty() ? InjectionKind::I1 : parse_injection(f.injection.front());
      if (!f.smoother.empty())
        mg.smoother = parse_smoother(f.smoother);
      if (!f.m.empty())
        mg.smoothing_steps = f.m.front();
      const LevelStack stack(ops.matrices, build_injections(ops, mg.injection), 0);
      const SolveResult result = solve_stationary(stack, level, b, mg, f.tol > 0.0 ? f.tol : 1e-6);
      std::cout << "iterations " << result.iterations << " rho " << result.contraction() << '\n';
      if (!result.converged)
      {
        std::cerr << "solve: " << result.failure << '\n';
        return exit_divergence;
      }
      lambda = result.solution;
    }
  }
  const BulkField field = disc.reconstruct(lambda, f_rhs);
  fs::create_directories(f.out_dir);
  auto trace = open_output(fs::path(f.out_dir) / "lambda.csv");
  write_trace_csv(trace, disc.space(), lambda);
  auto vtk = open_output(fs::path(f.out_dir) / "solution.vtk");
  write_vtk(vtk, disc, field, kind.name() + " p=" + std::to_string(p) + " paper level " + std::to_string(paper_level));
  std::cout << "paper level " << paper_level << " dofs " << disc.space().dof_count() << " cells "
            << disc.mesh().num_cells() << '\n';
  if (exact)
  {
    const auto rows = convergence_study(kind, {level}, f.jobs);
    std::cout << std::scientific << std::setprecision(6) << "error_trace " << rows[0].error_trace << " error_u "
              << rows[0].error_u << " error_q " << rows[0].error_q << " (direct solve)\n";
  }
  return 0;
}

int cmd_mesh_info(const CommonFlags& f, bool dump)
{
  const int paper_level = f.levels ? f.levels : 7;
  if (paper_level < 1)
    throw ConfigError("--levels must be >= 1");
  const MeshHierarchy hierarchy(paper_level - 1);
  std::cout << "paper_level,vertices,edges,interior_edges,cells,h,dofs_p1,dofs_p2,dofs_p3\n";
  for (const MeshLevel& mesh : hierarchy.levels())
  {
    const int ne = mesh.num_interior_edges();
    std::cout << mesh.level_index + 1 << ',' << mesh.num_vertices() << ',' << mesh.num_edges() << ',' << ne << ','
              << mesh.num_cells() << ',' << mesh.h << ',' << 2 * ne << ',' << 3 * ne << ',' << 4 * ne << '\n';
    const auto problems = validate(mesh);
    for (const std::string& problem : problems)
      std::cerr << "paper level " << mesh.level_index + 1 << ": " << problem << '\n';
    if (!problems.empty())
      return exit_diagnostics;
  }
  if (dump)
  {
    fs::create_directories(f.out_dir);
    auto out = open_output(fs::path(f.out_dir) / "mesh.txt");
    write_mesh(out, hierarchy.level(paper_level - 1));
  }
  return 0;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"HDG Poisson solver with homogeneous multigrid on the skeleton"};
  app.require_subcommand(1);

  CommonFlags bench_flags, check_flags, solve_flags, mesh_flags;
  bool timing = false;
  auto* bench = app.add_subcommand("bench", "iteration-count tables for f = 1");
  add_common(bench, bench_flags);
  bench->add_flag("--timing", timing, "record wall times (default writes 0 for reproducible output)");

  bool broken = false;
  int trials = 0;
  auto* check = app.add_subcommand("check", "numerical certificates of the convergence assumptions");
  add_common(check, check_flags);
  check->add_flag("--broken", broken, "add the broken injection as a negative control");
  check->add_option("--trials", trials, "random trial vectors per check");

  std::string family = "ldg-h";
  std::string rhs = "one";
  bool direct = false;
  auto* solve = app.add_subcommand("solve", "solve one problem and export lambda, u and q");
  add_common(solve, solve_flags);
  solve->add_option("--family", family, "ldg-h, rt-h or bdm-h");
  solve->add_option("--rhs", rhs, "one, sine or zero");
  solve->add_flag("--direct", direct, "sparse Cholesky instead of multigrid");

  bool dump = false;
  auto* mesh = app.add_subcommand("mesh-info", "mesh hierarchy statistics");
  add_common(mesh, mesh_flags);
  mesh->add_flag("--dump", dump, "write the finest mesh to <out-dir>/mesh.txt");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try
  {
    if (*bench)
      return cmd_bench(bench_flags, timing);
    if (*check)
      return cmd_check(check_flags, broken, trials);
    if (*solve)
      return cmd_solve(solve_flags, family, rhs, direct);
    return cmd_mesh_info(mesh_flags, dump);
  }
  catch (const ConfigError& e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  }
  catch (const std::invalid_argument& e)
  {
    std::cerr << "config error: " << e.what() << '\n';
    return exit_config;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
