#ifndef INSTGEN_TPTP_SOLUTION_HPP
#define INSTGEN_TPTP_SOLUTION_HPP

#include "instgen/tptp/cnf.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace instgen::tptp {

enum class SolverStatus { unsat, sat, timeout, skipped, error };

std::string_view to_string(SolverStatus status);
SolverStatus parse_status(std::string_view text);

/// Variable name (X<ordinal>) to head symbol name, in variable order.
using LevelAssignment = std::vector<std::pair<std::string, std::string>>;

struct InstanceRecord
{
  std::string parent;                   // input clause the derivation starts from
  std::vector<LevelAssignment> levels;  // one entry per deepening step
  std::string ground_clause;            // literal text of the resulting ground clause

  friend bool operator==(const InstanceRecord&, const InstanceRecord&) = default;
};

struct SolutionRecord
{
  std::string problem;
  SolverStatus status = SolverStatus::sat;
  std::string policy = "random";  // "random" or "external"
  std::string checkpoint;         // external policies only
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  std::optional<int> run;
  std::string phase;   // "", "train" or "eval"
  std::string reason;  // why a problem was skipped or errored
  std::vector<InstanceRecord> instances;

  friend bool operator==(const SolutionRecord&, const SolutionRecord&) = default;
};

class RecordError : public std::runtime_error
{
public:
  RecordError(const std::string& message, std::size_t index);
  [[nodiscard]] std::size_t index() const { return index_; }

private:
  std::size_t index_;
};

/// Throws RecordError when a non-unsat record carries instances.
void validate(const SolutionRecord& record, std::size_t index = 0);

/// One self-contained JSON line, without the trailing newline.
std::string write_solution(const SolutionRecord& record);
SolutionRecord read_solution(std::string_view line, std::size_t index = 0);

/// Replays an instance derivation from its parent clause in `problem` by
/// repeated deepening. Throws if the parent or a symbol is unknown.
fol::Clause replay_instance(const Problem& problem, const InstanceRecord& instance);

/// Append-only line-delimited store. Each append is one locked write, so
/// concurrent appenders never interleave records.
class SolutionStore
{
public:
  explicit SolutionStore(std::filesystem::path path) : path_(std::move(path)) {}

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

  void append(const SolutionRecord& record) const;
  void append(const std::vector<SolutionRecord>& records) const;

  /// All records; a malformed line throws RecordError with its index.
  [[nodiscard]] std::vector<SolutionRecord> load() const;

  /// Like load(), but first cuts off an incomplete trailing line left by an
  /// interrupted writer. Returns the surviving records.
  std::vector<SolutionRecord> recover() const;

private:
  std::filesystem::path path_;
};

}  // namespace instgen::tptp

#endif
