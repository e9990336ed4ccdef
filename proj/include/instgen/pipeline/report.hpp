#ifndef INSTGEN_PIPELINE_REPORT_HPP
#define INSTGEN_PIPELINE_REPORT_HPP

#include "instgen/pipeline/sweep.hpp"

#include <filesystem>
#include <optional>

namespace instgen::pipeline {

struct ProblemStats
{
  std::string problem;
  std::size_t attempts = 0;
  std::size_t solved = 0;
  std::optional<int> first_solved_run;
  std::optional<std::size_t> fewest_instances;  // over unsat records
  double mean_wall_time_s = 0.0;
};

struct StoreReport
{
  CumulativeCurve curve;
  std::vector<ProblemStats> problems;  // sorted by name
  std::map<std::string, std::size_t> status_counts;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
  [[nodiscard]] std::string cumulative_csv() const;
  [[nodiscard]] std::string problems_csv() const;
  /// Line plot of the cumulative solved count against the run index.
  [[nodiscard]] std::string cumulative_svg() const;
};

/// Summarizes records; runs span 0..max run seen. `phase` filters records when non-empty.
StoreReport build_report(const std::vector<tptp::SolutionRecord>& records, const std::string& phase = {});

/// Writes cumulative.csv, problems.csv and cumulative.svg into `dir`.
std::vector<std::filesystem::path> write_report_files(const StoreReport& report, const std::filesystem::path& dir);

}  // namespace instgen::pipeline

#endif
