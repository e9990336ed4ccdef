#ifndef INSTGEN_PIPELINE_COVERAGE_HPP
#define INSTGEN_PIPELINE_COVERAGE_HPP

#include "instgen/inst/policy.hpp"
#include "instgen/tptp/solution.hpp"

#include <json.hpp>

#include <array>
#include <map>
#include <vector>

namespace instgen::pipeline {

inline const std::vector<std::size_t> default_coverage_grid{ 1, 2, 3, 5, 7, 10, 15, 20, 25 };
inline const std::vector<double> coverage_quantiles{ 0.1, 0.5, 0.9 };

/// Linear interpolation between order statistics at position q * (n - 1).
double quantile(std::vector<double> values, double q);

/// One reference label: the clause a deepening step starts from and the heads it used.
struct CoverageLabel
{
  std::string clause_key;          // canonical_key of the clause being deepened
  std::vector<std::string> heads;  // head names in variable order

  friend auto operator<=>(const CoverageLabel&, const CoverageLabel&) = default;
};

/// Labels of one solved record, split by deepening level (0 = first step).
std::array<std::vector<CoverageLabel>, 2> coverage_labels(const tptp::Problem& problem,
                                                         const tptp::SolutionRecord& reference);

/// Per-problem coverage fraction at each grid point for one level.
struct ProblemCoverage
{
  std::string problem;
  int level = 0;
  std::vector<double> by_samples;  // aligned with the grid
};

struct CoverageTable
{
  std::vector<std::size_t> grid;
  /// cells[level][grid index][quantile index]
  std::array<std::vector<std::vector<double>>, 2> cells;
  std::array<std::size_t, 2> problems{};  // problems with labels at each level
  std::vector<ProblemCoverage> per_problem;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
  [[nodiscard]] std::string to_csv() const;
};

/**
 * For every reference solution, asks `policy` for max(grid) proposals on each
 * clause a label starts from and measures, for each sample count s in the
 * grid, the fraction of labels found among the first s proposals of their
 * clause. Fractions are aggregated per problem and level, then summarized by
 * quantiles across problems. Problems without labels at a level are left out
 * of that level.
 */
CoverageTable coverage_eval(const std::map<std::string, const tptp::Problem*>& problems,
                            const std::vector<tptp::SolutionRecord>& references,
                            inst::Policy& policy,
                            const std::vector<std::size_t>& grid,
                            std::uint64_t seed);

}  // namespace instgen::pipeline

#endif
