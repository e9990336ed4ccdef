#ifndef INSTGEN_PIPELINE_LOOP_HPP
#define INSTGEN_PIPELINE_LOOP_HPP

#include "instgen/inst/external_policy.hpp"
#include "instgen/pipeline/split.hpp"
#include "instgen/pipeline/sweep.hpp"

#include <filesystem>

namespace instgen::pipeline {

struct LoopConfig
{
  std::size_t attempts_per_iter = 1000;
  std::size_t train_samples_per_iter = 1000;
  std::size_t train_steps = 1;
  int eval_every = 10;
  /// Stop once the state's iteration counter reaches this value.
  int until_iteration = 1;
  std::uint64_t seed = 0;
  bool restart_fresh_model = false;
  std::size_t jobs = 1;
  AttemptConfig attempt;
};

/// Resumable loop position, persisted as JSON after every iteration.
struct LoopState
{
  int iteration = 0;
  std::string checkpoint;
  int restarts = 0;
  std::size_t solved = 0;  // distinct training problems solved so far

  [[nodiscard]] nlohmann::ordered_json to_json() const;
  static LoopState from_json(const nlohmann::ordered_json& j);

  /// A missing file yields the initial state.
  static LoopState load(const std::filesystem::path& path);
  /// Written to a temporary file and renamed into place.
  void save(const std::filesystem::path& path) const;
};

/// Files the loop reads and appends to.
struct LoopFiles
{
  std::filesystem::path state;
  std::filesystem::path train_store;  // attempts on training problems
  std::filesystem::path eval_store;   // periodic test-set attempts
  std::filesystem::path train_log;    // one line per record sent to the train verb
};

/// Raised after the state was saved because the policy became unreachable.
/// Running the loop again with the same files resumes it.
class LoopInterrupted : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/**
 * Self-improvement loop. Each iteration attempts a uniform sample (without
 * replacement) of training-family problems with the external policy, appends
 * the records, then sends uniformly drawn stored proofs to the policy's train
 * verb. Every `eval_every` iterations all test-family problems are attempted
 * and stored separately. Only training-family records are ever trained on.
 *
 * Iterations whose attempts are already in the store are not attempted again.
 */
LoopState self_improve_loop(const std::vector<tptp::Problem>& problems,
                            const DatasetSplit& split,
                            inst::ExternalPolicy& policy,
                            const LoopConfig& config,
                            const LoopFiles& files);

}  // namespace instgen::pipeline

#endif
