/// @file acceptance.cpp
/// @brief Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <hdgmg/bench.hpp>
#include <hdgmg/diagnostics.hpp>

#include "support/full_system.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

using namespace hdgmg;

namespace {

// ---------------------------------------------------------------------------
// Published iteration counts. Each row lists (level 2, m=1), (level 2, m=2), ...,
// (level 7, m=2); rows are tau = 1/h then tau = 1 for p = 1, 2, 3.
// ---------------------------------------------------------------------------

using TableRow = std::array<int, 12>;
using Table = std::array<std::array<TableRow, 2>, 3>;

constexpr TableRow i1_p1_over_h{18, 10, 22, 12, 22, 12, 23, 12, 23, 12, 23, 12};
constexpr TableRow i1_p1_const{18, 10, 21, 12, 22, 12, 22, 12, 22, 12, 23, 12};
constexpr TableRow i1_p2{13, 8, 13, 7, 12, 7, 12, 7, 12, 7, 12, 7};
constexpr TableRow i1_p3{17, 11, 17, 10, 17, 10, 17, 10, 17, 10, 17, 10};

Table table(const TableRow& p1_over_h, const TableRow& p1_const, const TableRow& p2_over_h, const TableRow& p2_const,
            const TableRow& p3_over_h, const TableRow& p3_const)
{
  Table t;
  t[0] = {p1_over_h, p1_const};
  t[1] = {p2_over_h, p2_const};
  t[2] = {p3_over_h, p3_const};
  return t;
}

constexpr TableRow i0_p1_over_h{33, 17, 39, 20, 38, 19, 36, 19, 35, 18, 35, 18};
constexpr TableRow i0_p1_const{33, 17, 39, 19, 36, 18, 35, 18, 34, 17, 33, 17};
constexpr TableRow i0_p2{13, 8, 12, 7, 11, 7, 10, 6, 10, 6, 9, 5};
constexpr TableRow i0_p3{24, 15, 25, 15, 25, 15, 25, 15, 25, 15, 25, 15};
constexpr TableRow i2_p2{11, 8, 11, 7, 11, 7, 11, 7, 11, 7, 11, 7};

const std::map<InjectionKind, Table> published{
    {InjectionKind::I0, table(i0_p1_over_h, i0_p1_const, i0_p2, i0_p2, i0_p3, i0_p3)},
    {InjectionKind::I1, table(i1_p1_over_h, i1_p1_const, i1_p2, i1_p2, i1_p3, i1_p3)},
    {InjectionKind::I2, table(i1_p1_over_h, i1_p1_const, i2_p2, i2_p2, i1_p3, i1_p3)},
    {InjectionKind::I3, table(i1_p1_over_h, i1_p1_const, i1_p2, i1_p2, i1_p3, i1_p3)},
};

constexpr int published_dofs[3][6] = {
    {80, 352, 1472, 6016, 24320, 97792}, {120, 528, 2208, 9024, 36480, 146688}, {160, 704, 2944, 12032, 48640, 195584}};

int published_count(const BenchRow& r)
{
  const int tau = r.tau == "1/h" ? 0 : 1;
  return published.at(r.injection)[r.p - 1][tau][2 * (r.paper_level - 2) + (r.m - 1)];
}

// ---------------------------------------------------------------------------
// Reporting
// ---------------------------------------------------------------------------

struct Outcome
{
  bool pass = true;
  std::string summary;
  std::vector<std::string> details;

  void fail(const std::string& why)
  {
    pass = false;
    details.push_back(why);
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start)
{
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int failures = 0;

void report(int id, const std::string& title, const Outcome& o)
{
  std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << title << " -- " << o.summary << std::endl;
  for (const std::string& d : o.details)
    std::cout << "        " << d << '\n';
  failures += o.pass ? 0 : 1;
}

std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

const AssumptionRow& find_row(const AssumptionReport& rep, const std::string& name)
{
  for (const AssumptionRow& r : rep.rows)
    if (r.assumption == name)
      return r;
  throw std::logic_error("missing diagnostics row " + name);
}

const std::vector<InjectionKind> all_injections{InjectionKind::I0, InjectionKind::I1, InjectionKind::I2,
                                                InjectionKind::I3};

std::vector<std::unique_ptr<Discretization>> discretize(const MeshHierarchy& h, const SolverKind& kind, int finest)
{
  std::vector<std::unique_ptr<Discretization>> d;
  for (int l = 0; l <= finest; ++l)
    d.push_back(std::make_unique<Discretization>(h.level(l), kind));
  return d;
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

Outcome dof_counts()
{
  const auto start = Clock::now();
  Outcome o;
  const MeshHierarchy hierarchy(6);
  for (int p = 1; p <= 3; ++p)
    for (int l = 1; l <= 6; ++l)
    {
      const int n = SkeletonSpace(hierarchy.level(l), p).dof_count();
      if (n != published_dofs[p - 1][l - 1])
        o.fail("p=" + std::to_string(p) + " level " + std::to_string(l + 1) + ": " + std::to_string(n));
    }
  const double t = seconds_since(start);
  if (t >= 1.0)
    o.fail("took " + fmt(t) + " s");
  o.summary = "18 counts compared in " + fmt(t) + " s";
  return o;
}

Outcome table_neighborhood(const BenchReport& bench, const std::vector<InjectionKind>& kinds, double seconds)
{
  Outcome o;
  int cells = 0, worst_abs = 0;
  double worst_rel = 0.0;
  for (const BenchRow& r : bench.rows)
  {
    if (std::find(kinds.begin(), kinds.end(), r.injection) == kinds.end())
      continue;
    ++cells;
    const int ref = published_count(r);
    const std::string where = injection_name(r.injection) + " p=" + std::to_string(r.p) + " tau=" + r.tau +
                              " level " + std::to_string(r.paper_level) + " m=" + std::to_string(r.m);
    if (r.dofs != published_dofs[r.p - 1][r.paper_level - 2])
      o.fail(where + ": " + std::to_string(r.dofs) + " DoFs");
    if (r.diverged)
    {
      o.fail(where + ": diverged (published " + std::to_string(ref) + ")");
      continue;
    }
    const int diff = std::abs(r.iterations - ref);
    const double rel = static_cast<double>(diff) / ref;
    worst_abs = std::max(worst_abs, diff);
    worst_rel = std::max(worst_rel, rel);
    if (diff > 5 || rel > 0.30)
      o.fail(where + ": " + std::to_string(r.iterations) + " iterations, published " + std::to_string(ref));
  }
  if (seconds > 600.0)
    o.fail("benchmark took " + fmt(seconds) + " s");
  o.summary = std::to_string(cells) + " cells, worst deviation " + std::to_string(worst_abs) + " iterations / " +
              fmt(100.0 * worst_rel) + "%, benchmark " + fmt(seconds) + " s";
  return o;
}

Outcome level_independence(const BenchReport& bench)
{
  Outcome o;
  std::map<std::string, std::vector<int>> series;
  for (const BenchRow& r : bench.rows)
    if (r.paper_level >= 5)
      series[injection_name(r.injection) + " p=" + std::to_string(r.p) + " tau=" + r.tau + " m=" +
             std::to_string(r.m)]
          .push_back(r.diverged ? 1000000 : r.iterations);
  int worst = 0;
  for (const auto& [name, counts] : series)
  {
    const int spread = *std::max_element(counts.begin(), counts.end()) - *std::min_element(counts.begin(), counts.end());
    worst = std::max(worst, spread);
    if (spread > 2)
      o.fail(name + ": spread " + std::to_string(spread) + " over levels 5-7");
  }
  o.summary = std::to_string(series.size()) + " configurations, largest spread " + std::to_string(worst);
  return o;
}

Outcome exactness()
{
  Outcome o;
  double worst_ia2 = 0.0, worst_ls4 = 0.0;
  const MeshHierarchy hierarchy(3);
  for (int p = 1; p <= 3; ++p)
    for (TauRule rule : {TauRule::OverH, TauRule::Constant})
    {
      const auto discs = discretize(hierarchy, SolverKind::ldg_h(p, rule), 3);
      for (InjectionKind kind : all_injections)
        for (int l = 2; l <= 3; ++l)
        {
          const LevelPair pair(*discs[l - 1], *discs[l], kind);
          const AssumptionRow r = find_row(check_identity_IA2(pair), "IA2");
          worst_ia2 = std::max(worst_ia2, r.constant);
          if (r.constant > 1e-12)
            o.fail("IA2 " + injection_name(kind) + " p=" + std::to_string(p) + " pair " + r.level + ": " + fmt(r.constant));
        }
    }
  std::vector<SolverKind> kinds;
  for (int p = 1; p <= 3; ++p)
  {
    kinds.push_back(SolverKind::ldg_h(p, TauRule::OverH));
    kinds.push_back(SolverKind::ldg_h(p, TauRule::Constant));
    kinds.push_back(SolverKind::rt_h(p));
    if (p >= 2)
      kinds.push_back(SolverKind::bdm_h(p));
  }
  for (const SolverKind& kind : kinds)
    for (int l = 1; l <= 2; ++l)
    {
      const Discretization disc(hierarchy.level(l), kind);
      const double e = find_row(check_LS4(disc), "LS4").constant;
      worst_ls4 = std::max(worst_ls4, e);
      if (e > 1e-11)
        o.fail("LS4 " + kind.name() + " p=" + std::to_string(kind.degree) + " level " + std::to_string(l) + ": " + fmt(e));
    }
  o.summary = "max IA2 residual " + fmt(worst_ia2) + ", max LS4 error " + fmt(worst_ls4);
  return o;
}

Outcome quasi_orthogonality()
{
  Outcome o;
  double worst = 0.0, weakest_control = 1e300;
  const MeshHierarchy hierarchy(4);
  for (int p = 1; p <= 2; ++p)
    for (TauRule rule : {TauRule::OverH, TauRule::Constant})
    {
      const auto discs = discretize(hierarchy, SolverKind::ldg_h(p, rule), 4);
      for (int l = 1; l <= 4; ++l)
      {
        for (InjectionKind kind : all_injections)
        {
          const LevelPair pair(*discs[l - 1], *discs[l], kind);
          const AssumptionRow r = find_row(check_quasi_orthogonality(pair, 16, 1), "QO");
          worst = std::max(worst, r.constant);
          if (r.constant > 1e-9)
            o.fail(injection_name(kind) + " p=" + std::to_string(p) + " pair " + r.level + ": " + fmt(r.constant));
        }
        const LevelPair broken(*discs[l - 1], *discs[l], InjectionKind::Broken);
        const AssumptionRow r = find_row(check_quasi_orthogonality(broken, 16, 1), "QO");
        weakest_control = std::min(weakest_control, r.constant);
        if (r.constant <= 1e-6)
          o.fail("broken control p=" + std::to_string(p) + " pair " + r.level + ": " + fmt(r.constant));
      }
    }
  o.summary = "max residual " + fmt(worst) + " on pairs up to 3:4, broken control >= " + fmt(weakest_control);
  return o;
}

Outcome energy_stability()
{
  Outcome o;
  double worst_growth = 0.0;
  const MeshHierarchy hierarchy(4);
  const SpectralOptions options{1e-8, 400, 600, 1};
  for (TauRule rule : {TauRule::OverH, TauRule::Constant})
  {
    const SolverKind kind = SolverKind::ldg_h(1, rule);
    const auto discs = discretize(hierarchy, kind, 4);
    for (InjectionKind inj : all_injections)
    {
      std::map<std::string, std::vector<double>> series;
      for (int l = 2; l <= 4; ++l)
      {
        const LevelPair pair(*discs[l - 1], *discs[l], inj);
        const AssumptionReport es = check_energy_stability(pair, options);
        for (const char* name : {"ES-I", "A2"})
          series[name].push_back(find_row(es, name).constant);
      }
      for (const auto& [name, values] : series)
        for (std::size_t i = 0; i < values.size(); ++i)
        {
          const std::string where = name + " " + injection_name(inj) + " tau=" + kind.tau_label() + " pair " +
                                    std::to_string(i + 1) + ":" + std::to_string(i + 2);
          if (!std::isfinite(values[i]) || values[i] <= 0.0)
            o.fail(where + ": " + fmt(values[i]));
          if (i == 0)
            continue;
          const double growth = values[i] / values[i - 1];
          worst_growth = std::max(worst_growth, growth);
          if (growth > 1.10)
            o.fail(where + ": growth " + fmt(growth));
        }
    }
  }
  o.summary = "largest level-to-level growth " + fmt(worst_growth);
  return o;
}

Outcome convergence_order()
{
  Outcome o;
  const auto rows = convergence_study(SolverKind::ldg_h(1, TauRule::OverH), {4, 5});
  const double order = rows.back().order_trace;
  if (!(order >= 1.9))
    o.fail("observed order " + fmt(order));
  o.summary = "trace error order between levels 4 and 5: " + std::to_string(order);
  return o;
}

Outcome condensation()
{
  Outcome o;
  double worst = 0.0;
  const MeshHierarchy hierarchy(1);
  auto one = [](const Eigen::Vector2d&) { return 1.0; };
  std::vector<SolverKind> kinds;
  for (int p = 1; p <= 3; ++p)
  {
    kinds.push_back(SolverKind::ldg_h(p, TauRule::OverH));
    kinds.push_back(SolverKind::ldg_h(p, TauRule::Constant));
    kinds.push_back(SolverKind::rt_h(p));
    if (p >= 2)
      kinds.push_back(SolverKind::bdm_h(p));
  }
  for (int l = 0; l <= 1; ++l)
    for (const SolverKind& kind : kinds)
    {
      const Discretization disc(hierarchy.level(l), kind);
      const CondensedSystem sys = disc.assemble(one);
      const Eigen::VectorXd lambda = DirectSolver(sys.matrix).solve(sys.rhs);
      const Eigen::VectorXd expected = oracle::full_system_trace(hierarchy.level(l), kind.family, kind.degree, disc.tau(), one);
      const double err = (lambda - expected).norm() / expected.norm();
      worst = std::max(worst, err);
      if (err > 1e-10)
        o.fail(kind.name() + " p=" + std::to_string(kind.degree) + " level " + std::to_string(l) + ": " + fmt(err));
    }
  o.summary = "max relative difference " + fmt(worst) + " over " + std::to_string(2 * kinds.size()) + " solves";
  return o;
}

std::string slurp(const std::filesystem::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism()
{
  Outcome o;
  namespace fs = std::filesystem;
  const fs::path root = fs::current_path() / "acceptance_runs";
  fs::remove_all(root);
  const std::vector<std::pair<std::string, std::string>> commands{
      {"bench", "bench --levels 4 --p 1 2 --seed 7"}, {"check", "check --levels 3 --trials 8 --seed 7"}};
  for (const auto& [name, args] : commands)
  {
    std::string outputs[2];
    for (int run = 0; run < 2; ++run)
    {
      const fs::path dir = root / (name + std::to_string(run));
      fs::create_directories(dir);
      const std::string cmd = std::string(HDGMG_CLI) + " " + args + " --out-dir " + dir.string() + " > " +
                              (dir / "stdout.txt").string() + " 2>&1";
      const int status = std::system(cmd.c_str());
      if (status != 0)
        o.fail(name + " run " + std::to_string(run) + " exited with status " + std::to_string(status));
      outputs[run] = slurp(dir / (name + ".csv"));
    }
    if (outputs[0].empty())
      o.fail(name + ".csv is empty");
    else if (outputs[0] != outputs[1])
      o.fail(name + ".csv differs between runs");
  }
  o.summary = "bench.csv and check.csv compared byte for byte";
  return o;
}

} // namespace

int main()
{
  std::cout << std::unitbuf;
  report(1, "DoF reproduction", dof_counts());

  const auto start = Clock::now();
  const BenchReport bench = run_bench(BenchConfig{});
  const double bench_seconds = seconds_since(start);
  report(2, "I0 iteration table", table_neighborhood(bench, {InjectionKind::I0}, bench_seconds));
  report(3, "I1/I2/I3 iteration tables",
         table_neighborhood(bench, {InjectionKind::I1, InjectionKind::I2, InjectionKind::I3}, bench_seconds));
  report(4, "level independence", level_independence(bench));
  report(5, "IA2 and LS4 exactness", exactness());
  report(6, "quasi-orthogonality", quasi_orthogonality());
  report(7, "energy stability and A2 growth", energy_stability());
  report(8, "LS5 convergence order", convergence_order());
  report(9, "condensation equivalence", condensation());
  report(10, "determinism", determinism());

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << '\n';
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
