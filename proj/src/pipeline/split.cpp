#include "instgen/pipeline/split.hpp"

#include "instgen/util/rng.hpp"

#include <algorithm>
#include <stdexcept>

namespace instgen::pipeline {

std::string_view to_string(Part part)
{
  switch (part) {
    case Part::train: return "train";
    case Part::dev: return "dev";
    case Part::test: return "test";
  }
  return "?";
}

Part DatasetSplit::part_of(const std::string& family) const
{
  if (train.contains(family)) { return Part::train; }
  if (dev.contains(family)) { return Part::dev; }
  if (test.contains(family)) { return Part::test; }
  throw std::out_of_range("family " + family + " is not in the split");
}

nlohmann::ordered_json DatasetSplit::to_json() const
{
  return { { "seed", seed }, { "train", train }, { "dev", dev }, { "test", test } };
}

DatasetSplit DatasetSplit::from_json(const nlohmann::ordered_json& j)
{
  DatasetSplit s;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.train = j.at("train").get<std::set<std::string>>();
  s.dev = j.at("dev").get<std::set<std::string>>();
  s.test = j.at("test").get<std::set<std::string>>();
  return s;
}

SplitSizes split_sizes(std::size_t families)
{
  SplitSizes s;
  // Integer forms of round-half-up(families / 10) and round-half-up(rest / 20).
  s.test = std::max<std::size_t>(1, (families + 5) / 10);
  const auto rest = families - s.test;
  s.dev = std::max<std::size_t>(1, (rest + 10) / 20);
  s.train = rest - s.dev;
  return s;
}

DatasetSplit split_dataset(const std::vector<tptp::Problem>& problems, std::uint64_t seed)
{
  std::set<std::string> distinct;
  for (const auto& p : problems) {
    if (p.family.empty()) { throw std::invalid_argument("problem " + p.name + " has no family"); }
    distinct.insert(p.family);
  }
  if (distinct.size() < 3) {
    throw std::invalid_argument("need at least 3 families to split, found " + std::to_string(distinct.size()));
  }
  std::vector<std::string> families(distinct.begin(), distinct.end());
  Rng rng(seed);
  for (std::size_t i = families.size(); i > 1; --i) { std::swap(families[i - 1], families[rng.below(i)]); }
  const auto sizes = split_sizes(families.size());
  DatasetSplit out;
  out.seed = seed;
  for (std::size_t i = 0; i < families.size(); ++i) {
    if (i < sizes.test) {
      out.test.insert(families[i]);
    } else if (i < sizes.test + sizes.dev) {
      out.dev.insert(families[i]);
    } else {
      out.train.insert(families[i]);
    }
  }
  return out;
}

}  // namespace instgen::pipeline
