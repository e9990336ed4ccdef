#ifndef INSTGEN_PIPELINE_SPLIT_HPP
#define INSTGEN_PIPELINE_SPLIT_HPP

#include "instgen/tptp/cnf.hpp"

#include <json.hpp>

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace instgen::pipeline {

enum class Part { train, dev, test };

std::string_view to_string(Part part);

/// Family-level partition: all problems of a family land in the same part.
struct DatasetSplit
{
  std::set<std::string> train;
  std::set<std::string> dev;
  std::set<std::string> test;
  std::uint64_t seed = 0;

  /// Throws std::out_of_range for a family in no part.
  [[nodiscard]] Part part_of(const std::string& family) const;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
  static DatasetSplit from_json(const nlohmann::ordered_json& j);

  friend bool operator==(const DatasetSplit&, const DatasetSplit&) = default;
};

/// Test families: 10% of all, rounded half up. Dev families: 5% of the rest,
/// rounded half up. Both get at least one family.
struct SplitSizes
{
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
};
SplitSizes split_sizes(std::size_t families);

/// Shuffles the distinct families with `seed` and cuts them by split_sizes.
/// Throws std::invalid_argument for fewer than 3 families.
DatasetSplit split_dataset(const std::vector<tptp::Problem>& problems, std::uint64_t seed);

}  // namespace instgen::pipeline

#endif
