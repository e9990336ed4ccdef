#ifndef INSTGEN_INST_GROUNDING_HPP
#define INSTGEN_INST_GROUNDING_HPP

#include "instgen/inst/policy.hpp"
#include "instgen/tptp/solution.hpp"

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace instgen::inst {

struct PassConfig
{
  std::size_t level0_samples = 25;
  std::size_t level1_samples = 5;
  /// Unset: use the policy's default (forced for random, free for external).
  std::optional<bool> grounding_pass_constants_only;
};

/// Every clause seen during grounding, by id, plus the input clause each
/// instance descends from.
class Provenance
{
public:
  void add_input(const fol::Clause& clause);
  void add_instance(const fol::Clause& clause);

  [[nodiscard]] const fol::Clause* find(const std::string& id) const;
  /// Input clause id an instance (or input) descends from.
  [[nodiscard]] const std::string& root(const std::string& id) const;
  /// Parent-first chain of instances from the input clause to `id`, excluding the input.
  [[nodiscard]] std::vector<const fol::Clause*> chain(const std::string& id) const;
  /// The derivation as stored in solution records.
  [[nodiscard]] tptp::InstanceRecord record(const std::string& id) const;

  /// Issues ids inst_<n> that clash with no input clause.
  std::string fresh_id();

private:
  std::unordered_map<std::string, fol::Clause> clauses_;
  std::unordered_map<std::string, std::string> roots_;
  std::size_t next_ = 0;
};

/**
 * Applies every proposal of `policy` to `clauses` by deepening. Stop proposals
 * produce nothing. The result is deduplicated by canonical_key in first-seen
 * order, and each new instance is registered in `provenance`.
 *
 * Throws ProtocolError naming the clause if a proposal cannot be applied, and
 * NoConstants from the policy.
 */
std::vector<fol::Clause> expand_pass(const tptp::Problem& problem,
                                     std::span<const fol::Clause> clauses,
                                     Policy& policy,
                                     int level,
                                     std::size_t samples,
                                     bool constants_only,
                                     std::uint64_t seed,
                                     Provenance& provenance);

struct GroundingResult
{
  /// Ground input clauses first, then ground instances; no two share a canonical key.
  std::vector<fol::Clause> ground;
  Provenance provenance;
  /// Ground instances (inputs excluded) per input clause id.
  std::map<std::string, std::size_t> instances_per_input;
  std::size_t pass1_outputs = 0;
  std::size_t pass2_inputs = 0;
  std::size_t pass2_outputs = 0;
};

/**
 * Two-pass grounding. Pass 1 deepens the input with level0_samples proposals
 * per clause; pass 2 deepens the deduplicated union of input and pass-1
 * output with level1_samples proposals per clause. Only ground clauses are
 * kept. Each input clause gets at most (level0_samples + 1) * level1_samples
 * ground instances.
 */
GroundingResult two_pass_ground(const tptp::Problem& problem,
                                Policy& policy,
                                const PassConfig& config,
                                std::uint64_t seed);

/// Ceiling on ground instances per input clause under `config`.
constexpr std::size_t instance_bound(const PassConfig& config)
{
  return (config.level0_samples + 1) * config.level1_samples;
}

}  // namespace instgen::inst

#endif
