#include "instgen/pipeline/coverage.hpp"

#include "instgen/fol/deepen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace instgen::pipeline {

double quantile(std::vector<double> values, double q)
{
  if (values.empty()) { return std::nan(""); }
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

namespace {

struct Start
{
  fol::Clause clause;
  std::set<std::vector<std::string>> labels;
};

using LevelStarts = std::map<std::string, Start>;  // by canonical key

std::array<LevelStarts, 2> starts_of(const tptp::Problem& problem, const tptp::SolutionRecord& reference)
{
  std::array<LevelStarts, 2> out;
  for (const auto& inst : reference.instances) {
    const auto* parent = problem.find_clause(inst.parent);
    if (parent == nullptr) { throw std::invalid_argument("reference names unknown clause " + inst.parent); }
    fol::Clause current = *parent;
    for (std::size_t k = 0; k < inst.levels.size(); ++k) {
      fol::HeadAssignment a{ current.id, {} };
      std::vector<std::string> names;
      for (const auto& [var, name] : inst.levels[k]) {
        const auto s = problem.signature.find(name);
        if (!s) { throw std::invalid_argument("reference names unknown symbol " + name); }
        a.heads.push_back(*s);
        names.push_back(name);
      }
      auto& start = out[std::min<std::size_t>(k, 1)][fol::canonical_key(current)];
      start.clause = current;
      start.labels.insert(names);
      current = fol::deepen(current, a, current.id + "_" + std::to_string(k + 1), &problem.signature);
    }
  }
  return out;
}

}  // namespace

std::array<std::vector<CoverageLabel>, 2> coverage_labels(const tptp::Problem& problem,
                                                         const tptp::SolutionRecord& reference)
{
  std::array<std::vector<CoverageLabel>, 2> out;
  const auto starts = starts_of(problem, reference);
  for (std::size_t level = 0; level < 2; ++level) {
    for (const auto& [key, start] : starts[level]) {
      for (const auto& heads : start.labels) { out[level].push_back({ key, heads }); }
    }
  }
  return out;
}

CoverageTable coverage_eval(const std::map<std::string, const tptp::Problem*>& problems,
                            const std::vector<tptp::SolutionRecord>& references,
                            inst::Policy& policy,
                            const std::vector<std::size_t>& grid,
                            std::uint64_t seed)
{
  CoverageTable table;
  table.grid = grid;
  const std::size_t max_samples = grid.empty() ? 0 : *std::max_element(grid.begin(), grid.end());
  std::set<std::string> done;
  std::array<std::vector<std::vector<double>>, 2> columns;  // [level][grid index] -> per-problem values
  for (auto& c : columns) { c.resize(grid.size()); }

  for (const auto& ref : references) {
    if (ref.status != tptp::SolverStatus::unsat || ref.instances.empty() || done.contains(ref.problem)) { continue; }
    auto it = problems.find(ref.problem);
    if (it == problems.end()) { continue; }
    done.insert(ref.problem);
    const auto& problem = *it->second;
    const auto starts = starts_of(problem, ref);

    for (int level = 0; level < 2; ++level) {
      const auto& level_starts = starts[static_cast<std::size_t>(level)];
      if (level_starts.empty()) { continue; }
      std::vector<fol::Clause> clauses;
      for (const auto& [key, start] : level_starts) { clauses.push_back(start.clause); }
      inst::ProposalSet proposals(clauses.size());
      try {
        proposals = policy.propose(inst::PolicyRequest{ &problem, clauses, level, max_samples,
                                                        level == 1 && policy.forces_constants(), seed });
      } catch (const inst::NoConstants&) {
      }
      ProblemCoverage pc{ problem.name, level, {} };
      std::size_t total = 0;
      for (const auto& [key, start] : level_starts) { total += start.labels.size(); }
      for (std::size_t g = 0; g < grid.size(); ++g) {
        std::size_t covered = 0;
        std::size_t i = 0;
        for (const auto& [key, start] : level_starts) {
          std::set<std::vector<std::string>> seen;
          const auto& props = proposals[i++];
          for (std::size_t s = 0; s < std::min(grid[g], props.size()); ++s) {
            if (const auto* a = std::get_if<fol::HeadAssignment>(&props[s])) {
              std::vector<std::string> names;
              for (const auto& h : a->heads) { names.push_back(h.name); }
              seen.insert(std::move(names));
            }
          }
          for (const auto& label : start.labels) { covered += seen.contains(label) ? 1 : 0; }
        }
        const double frac = static_cast<double>(covered) / static_cast<double>(total);
        pc.by_samples.push_back(frac);
        columns[static_cast<std::size_t>(level)][g].push_back(frac);
      }
      ++table.problems[static_cast<std::size_t>(level)];
      table.per_problem.push_back(std::move(pc));
    }
  }

  for (std::size_t level = 0; level < 2; ++level) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      std::vector<double> row;
      for (double q : coverage_quantiles) { row.push_back(quantile(columns[level][g], q)); }
      table.cells[level].push_back(std::move(row));
    }
  }
  return table;
}

nlohmann::ordered_json CoverageTable::to_json() const
{
  nlohmann::ordered_json levels = nlohmann::ordered_json::array();
  for (std::size_t level = 0; level < 2; ++level) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t g = 0; g < grid.size(); ++g) {
      nlohmann::ordered_json row{ { "samples", grid[g] } };
      for (std::size_t q = 0; q < coverage_quantiles.size(); ++q) {
        const double v = cells[level][g][q];
        std::ostringstream name;
        name << "q" << coverage_quantiles[q];
        row[name.str()] = std::isnan(v) ? nlohmann::ordered_json() : nlohmann::ordered_json(v);
      }
      rows.push_back(std::move(row));
    }
    levels.push_back({ { "level", level }, { "problems", problems[level] }, { "rows", std::move(rows) } });
  }
  return { { "grid", grid }, { "levels", std::move(levels) } };
}

std::string CoverageTable::to_csv() const
{
  std::ostringstream out;
  out << "level,samples,q0.1,q0.5,q0.9,problems\n";
  for (std::size_t level = 0; level < 2; ++level) {
    for (std::size_t g = 0; g < grid.size(); ++g) {
      out << level << "," << grid[g];
      for (double v : cells[level][g]) {
        out << ",";
        if (!std::isnan(v)) { out << v; }
      }
      out << "," << problems[level] << "\n";
    }
  }
  return out.str();
}

}  // namespace instgen::pipeline
