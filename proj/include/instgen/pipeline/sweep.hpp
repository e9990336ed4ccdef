#ifndef INSTGEN_PIPELINE_SWEEP_HPP
#define INSTGEN_PIPELINE_SWEEP_HPP

#include "instgen/pipeline/attempt.hpp"

#include <functional>
#include <json.hpp>

namespace instgen::pipeline {

struct SweepConfig
{
  int runs = 1;
  std::uint64_t base_seed = 0;
  AttemptConfig attempt;
  std::size_t jobs = 1;
  std::string phase;  // copied into every record
  /// Called after each run is persisted (run index, records of that run).
  std::function<void(int, const std::vector<tptp::SolutionRecord>&)> on_run;
};

/// Solved counts per run: `solved` is how many problems run r solved,
/// `cumulative` the size of the union of solved sets over runs 0..r.
struct CumulativeCurve
{
  std::vector<std::size_t> solved;
  std::vector<std::size_t> cumulative;
};

/// Curve over runs 0..runs-1 from stored records (records without a run are ignored).
CumulativeCurve cumulative_curve(const std::vector<tptp::SolutionRecord>& records, int runs);

struct SweepReport
{
  CumulativeCurve curve;
  std::size_t attempts = 0;   // attempts made by this call
  std::size_t resumed = 0;    // runs found complete in the store
  std::size_t max_instances_per_input = 0;
  std::size_t skipped = 0;
  std::size_t errors = 0;

  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

/// Attempts on `problems` spread over up to `jobs` threads; results in input
/// order. The first exception thrown by an attempt is rethrown.
std::vector<AttemptOutcome> run_attempts(const std::vector<const tptp::Problem*>& problems,
                                         inst::Policy& policy,
                                         const AttemptConfig& config,
                                         std::size_t jobs,
                                         const std::function<std::uint64_t(const tptp::Problem&)>& seed_of);

/// Thrown when an input clause produced more ground instances than the pass
/// configuration allows.
class InstanceBoundViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/**
 * Runs `config.runs` seeded passes over `problems`. Run r of problem p uses
 * seed attempt_seed(base_seed, p.name, r). Records of a run are appended to
 * `store` in problem order as one batch once the run is finished, so the
 * store only ever holds whole runs. Runs already present in the store are
 * not repeated, which makes an interrupted sweep resumable.
 */
SweepReport sweep(const std::vector<tptp::Problem>& problems,
                  inst::Policy& policy,
                  const SweepConfig& config,
                  const tptp::SolutionStore& store);

}  // namespace instgen::pipeline

#endif
