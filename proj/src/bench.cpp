#include "hdgmg/bench.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <iomanip>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

namespace hdgmg {

void BenchConfig::check() const
{
  if (injections.empty() || degrees.empty() || tau_rules.empty() || smoothing_steps.empty())
    throw ConfigError("benchmark lists must not be empty");
  if (min_paper_level < 1 || max_paper_level < 2 || min_paper_level > max_paper_level)
    throw ConfigError("paper levels must satisfy 1 <= min <= max and max >= 2");
  if (!(tol > 0.0))
    throw ConfigError("tolerance must be positive");
  for (int p : degrees)
    if (p < 1)
      throw ConfigError("polynomial degree must be >= 1");
  for (int m : smoothing_steps)
    if (m < 1)
      throw ConfigError("smoothing steps must be >= 1");
  for (InjectionKind k : injections)
    if (k == InjectionKind::Broken)
      throw ConfigError("the broken injection is a diagnostics fixture, not a benchmark injection");
  try
  {
    smoother.check();
  }
  catch (const std::invalid_argument& e)
  {
    throw ConfigError(e.what());
  }
}

TauRule parse_tau_rule(const std::string& s)
{
  if (s == "1/h")
    return TauRule::OverH;
  if (s == "1")
    return TauRule::Constant;
  throw ConfigError("unknown tau rule '" + s + "' (expected 1/h or 1)");
}

std::string tau_rule_label(TauRule rule) { return rule == TauRule::OverH ? "1/h" : "1"; }

BenchConfig bench_config_from_json(const std::string& text, const BenchConfig& base)
{
  using nlohmann::json;
  json j;
  try
  {
    j = json::parse(text);
  }
  catch (const json::exception& e)
  {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ConfigError("config must be a JSON object");
  BenchConfig c = base;
  try
  {
    for (const auto& [key, value] : j.items())
    {
      if (key == "injections")
      {
        c.injections.clear();
        for (const auto& v : value)
          c.injections.push_back(parse_injection(v.get<std::string>()));
      }
      else if (key == "p")
        c.degrees = value.get<std::vector<int>>();
      else if (key == "tau")
      {
        c.tau_rules.clear();
        for (const auto& v : value)
          c.tau_rules.push_back(parse_tau_rule(v.get<std::string>()));
      }
      else if (key == "m")
        c.smoothing_steps = value.get<std::vector<int>>();
      else if (key == "min_level")
        c.min_paper_level = value.get<int>();
      else if (key == "max_level")
        c.max_paper_level = value.get<int>();
      else if (key == "smoother")
        c.smoother = parse_smoother(value.get<std::string>());
      else if (key == "tol")
        c.tol = value.get<double>();
      else if (key == "seed")
        c.seed = value.get<std::uint64_t>();
      else if (key == "jobs")
        c.jobs = value.get<int>();
      else if (key == "timing")
        c.timing = value.get<bool>();
      else
        throw ConfigError("unknown config key '" + key + "'");
    }
  }
  catch (const json::exception& e)
  {
    throw ConfigError(std::string("config has a wrong value type: ") + e.what());
  }
  catch (const ConfigError&)
  {
    throw;
  }
  catch (const std::invalid_argument& e)
  {
    throw ConfigError(e.what());
  }
  c.check();
  return c;
}

bool BenchReport::any_diverged() const
{
  for (const BenchRow& r : rows)
    if (r.diverged)
      return true;
  return false;
}

void BenchReport::write_csv(std::ostream& os) const
{
  os << "injection,p,tau,paper_level,dofs,m,iterations,rho,wall_ms\n";
  for (const BenchRow& r : rows)
  {
    os << injection_name(r.injection) << ',' << r.p << ',' << r.tau << ',' << r.paper_level << ',' << r.dofs << ','
       << r.m << ',';
    if (r.diverged)
      os << "DIVERGED";
    else
      os << r.iterations;
    std::ostringstream rho, wall;
    rho << std::fixed << std::setprecision(4) << r.rho;
    wall << std::fixed << std::setprecision(1) << r.wall_ms;
    os << ',' << rho.str() << ',' << wall.str() << '\n';
  }
}

namespace {

struct TableKey
{
  int p;
  std::string tau;
  bool operator<(const TableKey& o) const { return std::tie(p, tau) < std::tie(o.p, o.tau); }
};

std::vector<std::string> split_cells(const std::string& line)
{
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, '|'))
  {
    const auto b = cell.find_first_not_of(' ');
    const auto e = cell.find_last_not_of(' ');
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  // drop the empty pieces before the first and after the last bar
  if (!cells.empty() && cells.front().empty())
    cells.erase(cells.begin());
  if (!cells.empty() && cells.back().empty())
    cells.pop_back();
  return cells;
}

} // namespace

void BenchReport::write_markdown(std::ostream& os) const
{
  std::vector<InjectionKind> kinds;
  for (const BenchRow& r : rows)
    if (std::find(kinds.begin(), kinds.end(), r.injection) == kinds.end())
      kinds.push_back(r.injection);

  for (InjectionKind kind : kinds)
  {
    std::vector<std::pair<int, int>> columns; // (level, m)
    std::vector<int> degrees;
    std::vector<TableKey> keys;
    std::map<std::pair<TableKey, std::pair<int, int>>, const BenchRow*> cells;
    std::map<std::pair<int, int>, int> dofs;
    for (const BenchRow& r : rows)
    {
      if (r.injection != kind)
        continue;
      const std::pair<int, int> col{r.paper_level, r.m};
      if (std::find(columns.begin(), columns.end(), col) == columns.end())
        columns.push_back(col);
      const TableKey key{r.p, r.tau};
      if (std::find_if(keys.begin(), keys.end(), [&](const TableKey& k) { return !(k < key) && !(key < k); }) ==
          keys.end())
        keys.push_back(key);
      if (std::find(degrees.begin(), degrees.end(), r.p) == degrees.end())
        degrees.push_back(r.p);
      cells[{key, col}] = &r;
      dofs[{r.p, r.paper_level}] = r.dofs;
    }
    std::sort(columns.begin(), columns.end());

    os << "### Injection " << injection_name(kind) << "\n\n| p | row |";
    for (const auto& [level, m] : columns)
      os << " L" << level << " m" << m << " |";
    os << "\n|---|---|";
    for (std::size_t i = 0; i < columns.size(); ++i)
      os << "---:|";
    os << '\n';
    for (int p : degrees)
    {
      os << "| " << p << " | # DoFs |";
      for (const auto& col : columns)
      {
        const auto it = dofs.find({p, col.first});
        os << ' ' << (it == dofs.end() ? std::string("-") : std::to_string(it->second)) << " |";
      }
      os << '\n';
      for (const TableKey& key : keys)
      {
        if (key.p != p)
          continue;
        os << "| " << p << " | tau = " << key.tau << " |";
        for (const auto& col : columns)
        {
          const auto it = cells.find({key, col});
          if (it == cells.end())
            os << " - |";
          else if (it->second->diverged)
            os << " DIVERGED |";
          else
            os << ' ' << it->second->iterations << " |";
        }
        os << '\n';
      }
    }
    os << '\n';
  }
}

BenchReport BenchReport::parse_markdown(std::istream& is)
{
  BenchReport report;
  std::string line;
  InjectionKind kind = InjectionKind::I1;
  std::vector<std::pair<int, int>> columns;
  std::map<std::pair<int, int>, int> dofs;
  while (std::getline(is, line))
  {
    if (line.rfind("### Injection ", 0) == 0)
    {
      kind = parse_injection(line.substr(14));
      columns.clear();
      dofs.clear();
      continue;
    }
    if (line.empty() || line[0] != '|')
      continue;
    const std::vector<std::string> cells = split_cells(line);
    if (cells.size() < 2 || cells[0].rfind("---", 0) == 0)
      continue;
    if (cells[0] == "p")
    {
      for (std::size_t i = 2; i < cells.size(); ++i)
      {
        int level = 0, m = 0;
        if (std::sscanf(cells[i].c_str(), "L%d m%d", &level, &m) != 2)
          throw std::runtime_error("markdown table: bad column header '" + cells[i] + "'");
        columns.emplace_back(level, m);
      }
      continue;
    }
    const int p = std::stoi(cells[0]);
    if (cells.size() != columns.size() + 2)
      throw std::runtime_error("markdown table: row width does not match the header");
    if (cells[1] == "# DoFs")
    {
      for (std::size_t i = 0; i < columns.size(); ++i)
        if (cells[i + 2] != "-")
          dofs[{p, columns[i].first}] = std::stoi(cells[i + 2]);
      continue;
    }
    if (cells[1].rfind("tau = ", 0) != 0)
      throw std::runtime_error("markdown table: unexpected row label '" + cells[1] + "'");
    const std::string tau = cells[1].substr(6);
    for (std::size_t i = 0; i < columns.size(); ++i)
    {
      if (cells[i + 2] == "-")
        continue;
      BenchRow row;
      row.injection = kind;
      row.p = p;
      row.tau = tau;
      row.paper_level = columns[i].first;
      row.m = columns[i].second;
      row.dofs = dofs.count({p, row.paper_level}) ? dofs[{p, row.paper_level}] : 0;
      if (cells[i + 2] == "DIVERGED")
        row.diverged = true;
      else
        row.iterations = std::stoi(cells[i + 2]);
      report.rows.push_back(row);
    }
  }
  return report;
}

BenchReport run_bench(const BenchConfig& config)
{
  config.check();
  const int finest = config.max_paper_level - 1;
  const MeshHierarchy hierarchy(finest);

  // slot index of every row in config order
  const int nl = config.max_paper_level - config.min_paper_level + 1;
  const int nm = static_cast<int>(config.smoothing_steps.size());
  const int nt = static_cast<int>(config.tau_rules.size());
  const int np = static_cast<int>(config.degrees.size());
  auto slot = [&](int inj, int ip, int it, int il, int im) { return (((inj * np + ip) * nt + it) * nl + il) * nm + im; };

  BenchReport report;
  report.rows.resize(static_cast<std::size_t>(config.injections.size()) * np * nt * nl * nm);

  // one task per (p, tau): operators are shared by all injections, levels and m
  const int tasks = np * nt;
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (int task = next++; task < tasks; task = next++)
    {
      try
      {
        const int ip = task / nt;
        const int it = task % nt;
        const SolverKind kind = SolverKind::ldg_h(config.degrees[ip], config.tau_rules[it], 1.0);
        const HierarchyOperators ops = build_operators(hierarchy, kind, 1);
        std::vector<Eigen::VectorXd> rhs(finest + 1);
        for (int l = config.min_paper_level - 1; l <= finest; ++l)
          rhs[l] = ops.discretizations[l]->assemble_rhs([](const Eigen::Vector2d&) { return 1.0; });
        for (std::size_t inj = 0; inj < config.injections.size(); ++inj)
        {
          const LevelStack stack(ops.matrices, build_injections(ops, config.injections[inj]), 0);
          for (int il = 0; il < nl; ++il)
            for (int im = 0; im < nm; ++im)
            {
              const int level = config.min_paper_level - 1 + il;
              MgConfig mg;
              mg.smoothing_steps = config.smoothing_steps[im];
              mg.smoother = config.smoother;
              mg.injection = config.injections[inj];
              mg.kind = kind;
              const auto start = std::chrono::steady_clock::now();
              const SolveResult result = solve_stationary(stack, level, rhs[level], mg, config.tol);
              const double ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
              BenchRow& row = report.rows[slot(static_cast<int>(inj), ip, it, il, im)];
              row.injection = config.injections[inj];
              row.p = kind.degree;
              row.tau = tau_rule_label(config.tau_rules[it]);
              row.paper_level = level + 1;
              row.dofs = ops.discretizations[level]->space().dof_count();
              row.m = mg.smoothing_steps;
              row.iterations = result.iterations;
              row.rho = result.contraction();
              row.wall_ms = config.timing ? ms : 0.0;
              row.diverged = !result.converged;
            }
        }
      }
      catch (...)
      {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!error)
          error = std::current_exception();
      }
    }
  };
  const int threads = std::min(tasks, config.jobs > 0 ? config.jobs : default_threads());
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& th : pool)
    th.join();
  if (error)
    std::rethrow_exception(error);
  return report;
}

} // namespace hdgmg
